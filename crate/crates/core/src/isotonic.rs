//! Euclidean projection onto the cone of nondecreasing vectors.

/// Pool-adjacent-violators: the nondecreasing `z` minimizing `Σ (zᵢ − yᵢ)²`.
pub fn isotonic_project(y: &[f64]) -> Vec<f64> {
    // blocks of (mean, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(y.len());
    for &v in y {
        let mut mean = v;
        let mut count = 1;
        while let Some(&(prev, c)) = blocks.last() {
            if prev <= mean {
                break;
            }
            blocks.pop();
            mean = (prev * c as f64 + mean * count as f64) / (c + count) as f64;
            count += c;
        }
        blocks.push((mean, count));
    }
    let mut out = Vec::with_capacity(y.len());
    for (mean, count) in blocks {
        out.extend(std::iter::repeat_n(mean, count));
    }
    out
}
