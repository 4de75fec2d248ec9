//! Exact W₂ oracles: quantile-grid L², integer assignment, and the closed form
//! along a scaling family.

use super::{DiscreteMeasure, QuantileGrid, ScalingFamilyPoint, SecondMoment};
use crate::error::{Error, Result};

/// Largest cloud accepted by [`w2_assignment`].
pub const MAX_ASSIGNMENT_SIZE: usize = 512;

/// `W₂` between two 1D measures given by quantile grids on the same nodes.
pub fn w2_1d(a: &QuantileGrid, b: &QuantileGrid) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::Size {
            left: a.n(),
            right: b.n(),
        });
    }
    let sum: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((sum / a.n() as f64).sqrt())
}

/// `W₂` between equal-size uniform clouds by an exact linear assignment.
pub fn w2_assignment(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<f64> {
    if a.len() != b.len() || a.dim() != b.dim() {
        return Err(Error::Unsupported(format!(
            "assignment needs equal sizes and dimensions, got {}x{} and {}x{}",
            a.len(),
            a.dim(),
            b.len(),
            b.dim()
        )));
    }
    if !a.is_uniform() || !b.is_uniform() {
        return Err(Error::Unsupported("assignment needs uniform weights".into()));
    }
    if a.len() > MAX_ASSIGNMENT_SIZE {
        return Err(Error::Unsupported(format!(
            "assignment limited to {MAX_ASSIGNMENT_SIZE} atoms, got {}",
            a.len()
        )));
    }
    let n = a.len();
    let cost: Vec<f64> = (0..n)
        .flat_map(|i| {
            let x = a.point(i);
            (0..n).map(move |j| x.iter().zip(b.point(j)).map(|(u, v)| (u - v) * (u - v)).sum())
        })
        .collect();
    let (_, total) = assignment_cost(n, &cost);
    Ok((total.max(0.0) / n as f64).sqrt())
}

/// Minimum-cost perfect matching of a dense `n×n` row-major cost matrix
/// (shortest augmenting paths with potentials, O(n³)). Returns the column
/// assigned to each row and the total cost.
pub fn assignment_cost(n: usize, cost: &[f64]) -> (Vec<usize>, f64) {
    assert_eq!(cost.len(), n * n, "cost matrix must be n×n");
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // 1-based arrays; index 0 is the virtual source column
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum();
    (assignment, total)
}

/// `W₂` between two points of the same scaling family: `|α − β|·√m₂(base)`.
pub fn w2_scaling_family(p: &ScalingFamilyPoint, q: &ScalingFamilyPoint) -> Result<f64> {
    if p.base != q.base {
        return Err(Error::Unsupported("scaling family points have different bases".into()));
    }
    if p.shift != q.shift {
        return Err(Error::Unsupported("scaling family points have different shifts".into()));
    }
    Ok((p.scale - q.scale).abs() * p.base.second_moment().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::EquilibriumMeasure;
    use crate::measures::quantile_of_atomic;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn w2_1d_examples() {
        let a = QuantileGrid::dirac(0.0, 8);
        let b = QuantileGrid::dirac(1.0, 8);
        assert_eq!(w2_1d(&a, &b).unwrap(), 1.0);
        assert_eq!(w2_1d(&a, &a).unwrap(), 0.0);
        let n = 4000;
        let u1 = QuantileGrid::uniform(0.0, 1.0, n).unwrap();
        let u2 = QuantileGrid::uniform(0.0, 2.0, n).unwrap();
        assert!((w2_1d(&u1, &u2).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1.0 / n as f64);
        assert!(matches!(w2_1d(&a, &QuantileGrid::dirac(0.0, 3)), Err(Error::Size { .. })));
    }

    #[test]
    fn assignment_examples() {
        let a = DiscreteMeasure::uniform(1, vec![0.0]).unwrap();
        let b = DiscreteMeasure::uniform(1, vec![1.0]).unwrap();
        assert_eq!(w2_assignment(&a, &b).unwrap(), 1.0);
        let a = DiscreteMeasure::uniform(1, vec![0.0, 1.0]).unwrap();
        let b = DiscreteMeasure::uniform(1, vec![1.0, 0.0]).unwrap();
        assert_eq!(w2_assignment(&a, &b).unwrap(), 0.0);
        let c = DiscreteMeasure::from_flat(1, vec![0.0, 1.0], vec![0.25, 0.75]).unwrap();
        assert!(matches!(w2_assignment(&a, &c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn assignment_beats_every_permutation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let n = 6;
        let cost: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
        let (_, best) = assignment_cost(n, &cost);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut brute = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            brute = brute.min(p.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum());
        });
        assert!((best - brute).abs() < 1e-12);
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn scaling_family_examples() {
        let base = EquilibriumMeasure::UniformInterval { halfwidth: 3f64.sqrt() };
        let p = ScalingFamilyPoint::centered(base.clone(), 1.0).unwrap();
        let q = ScalingFamilyPoint::centered(base.clone(), 2.0).unwrap();
        assert!((w2_scaling_family(&p, &q).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(w2_scaling_family(&p, &p).unwrap(), 0.0);
        let shifted = ScalingFamilyPoint::new(base, 1.0, vec![1.0]).unwrap();
        assert!(w2_scaling_family(&p, &shifted).is_err());
    }

    proptest! {
        #[test]
        fn assignment_matches_sorting(xs in prop::collection::vec(-3.0f64..3.0, 1..40), seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let ys: Vec<f64> = xs.iter().map(|_| rng.random_range(-3.0..3.0)).collect();
            let n = xs.len();
            let a = DiscreteMeasure::uniform(1, xs).unwrap();
            let b = DiscreteMeasure::uniform(1, ys).unwrap();
            let exact = w2_assignment(&a, &b).unwrap();
            let sorted = w2_1d(&quantile_of_atomic(&a, n).unwrap(), &quantile_of_atomic(&b, n).unwrap()).unwrap();
            prop_assert!((exact - sorted).abs() <= 1e-12);
        }

        #[test]
        fn w2_1d_metric(
            a in prop::collection::vec(-3.0f64..3.0, 16),
            b in prop::collection::vec(-3.0f64..3.0, 16),
            c in prop::collection::vec(-3.0f64..3.0, 16),
        ) {
            let grid = |mut v: Vec<f64>| { v.sort_by(f64::total_cmp); QuantileGrid::new(v).unwrap() };
            let (a, b, c) = (grid(a), grid(b), grid(c));
            let ab = w2_1d(&a, &b).unwrap();
            prop_assert!((ab - w2_1d(&b, &a).unwrap()).abs() <= 1e-15);
            prop_assert!(ab <= w2_1d(&a, &c).unwrap() + w2_1d(&c, &b).unwrap() + 1e-10);
        }
    }
}
