//! Measure representations: weighted point clouds, quantile grids on the
//! midpoints of (0,1), and points of a scaling family `(α·Id + b)_# η`.

mod sampling;
mod transport;

pub use sampling::sample;
pub use transport::{assignment_cost, w2_1d, w2_assignment, w2_scaling_family, MAX_ASSIGNMENT_SIZE};

use crate::equilibrium::EquilibriumMeasure;
use crate::error::{Error, Result};
use crate::format::fmt17;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Weighted atoms `Σ wᵢ δ_{xᵢ}` in ℝᵈ. Points are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Builds a measure from flat row-major coordinates.
    pub fn from_flat(dim: usize, points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMeasure("dimension must be at least 1".into()));
        }
        if points.len() != dim * weights.len() {
            return Err(Error::Size {
                left: points.len() / dim,
                right: weights.len(),
            });
        }
        if weights.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidMeasure("weights must be finite and nonnegative".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure("coordinates must be finite".into()));
        }
        let total = compensated_sum(&weights);
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { dim, points, weights })
    }

    pub fn new(points: &[Vec<f64>], weights: Vec<f64>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                got: bad.len(),
            });
        }
        Self::from_flat(dim, points.concat(), weights)
    }

    /// Rescales arbitrary nonnegative masses to a probability measure.
    pub fn from_masses(dim: usize, points: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("total mass must be positive".into()));
        }
        let weights = masses.iter().map(|m| m / total).collect();
        Self::from_flat(dim, points, weights)
    }

    /// Equal weights `1/M` on the given flat points.
    pub fn uniform(dim: usize, points: Vec<f64>) -> Result<Self> {
        if dim == 0 || !points.len().is_multiple_of(dim) {
            return Err(Error::InvalidMeasure("flat coordinates do not match the dimension".into()));
        }
        let m = points.len() / dim;
        Self::from_flat(dim, points, vec![1.0 / m as f64; m])
    }

    pub fn dirac(point: &[f64]) -> Self {
        Self {
            dim: point.len().max(1),
            points: if point.is_empty() { vec![0.0] } else { point.to_vec() },
            weights: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.points.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    pub fn is_uniform(&self) -> bool {
        let w0 = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - w0).abs() <= 1e-15)
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for (x, w) in self.iter() {
            for (m, xi) in mean.iter_mut().zip(x) {
                *m += w * xi;
            }
        }
        mean
    }

    /// Pushforward under `x ↦ a·x + b`.
    pub fn affine(&self, a: f64, b: &[f64]) -> Result<Self> {
        if b.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: b.len(),
            });
        }
        let points = self
            .points
            .chunks_exact(self.dim)
            .flat_map(|x| x.iter().zip(b).map(move |(xi, bi)| a * xi + bi))
            .collect();
        Ok(Self {
            dim: self.dim,
            points,
            weights: self.weights.clone(),
        })
    }

    /// Drops zero-weight atoms.
    pub fn pruned(&self) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.weights[i] > 0.0).collect();
        Self {
            dim: self.dim,
            points: keep.iter().flat_map(|&i| self.point(i).to_vec()).collect(),
            weights: keep.iter().map(|&i| self.weights[i]).collect(),
        }
    }

    /// CSV with header `x1,...,xd,w`.
    pub fn to_csv(&self) -> String {
        let mut out = (1..=self.dim).map(|k| format!("x{k}")).collect::<Vec<_>>().join(",");
        out.push_str(",w\n");
        for (x, w) in self.iter() {
            for xi in x {
                out.push_str(&fmt17(*xi));
                out.push(',');
            }
            out.push_str(&fmt17(w));
            out.push('\n');
        }
        out
    }

    /// Parses the `x1,...,xd,w` CSV layout written by [`DiscreteMeasure::to_csv`].
    /// Weights are renormalized.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty point cloud file".into()))?;
        let cols = header.split(',').count();
        if cols < 2 {
            return Err(Error::Parse("need at least one coordinate and a weight column".into()));
        }
        let dim = cols - 1;
        let mut points = Vec::new();
        let mut masses = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", lineno + 2)))?;
            if fields.len() != cols {
                return Err(Error::Parse(format!("row {} has {} fields, expected {cols}", lineno + 2, fields.len())));
            }
            points.extend_from_slice(&fields[..dim]);
            masses.push(fields[dim]);
        }
        Self::from_masses(dim, points, masses)
    }
}

/// Neumaier's compensated summation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Nondecreasing samples `Q(s_k)` of a quantile function at `s_k = (k − ½)/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileGrid {
    values: Vec<f64>,
}

impl QuantileGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMeasure("empty quantile grid".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("quantile values must be finite".into()));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Monotonicity(format!(
                "values[{}] = {} > values[{}] = {}",
                k,
                values[k],
                k + 1,
                values[k + 1]
            )));
        }
        Ok(Self { values })
    }

    /// Samples a quantile function on the midpoint nodes.
    pub fn from_fn(n: usize, q: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|k| q(node(k, n))).collect())
    }

    pub fn dirac(x: f64, n: usize) -> Self {
        Self { values: vec![x; n.max(1)] }
    }

    /// Quantiles of the uniform distribution on `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::from_fn(n, |s| a + (b - a) * s)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn node(&self, k: usize) -> f64 {
        node(k, self.n())
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.n();
        (0..n).map(move |k| node(k, n))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n() as f64
    }

    /// The atomic measure `(1/n) Σ δ_{Q(s_k)}`.
    pub fn to_atomic(&self) -> DiscreteMeasure {
        let n = self.n();
        DiscreteMeasure {
            dim: 1,
            points: self.values.clone(),
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// CSV with header `s,q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,q\n");
        for (s, q) in self.nodes().zip(&self.values) {
            out.push_str(&format!("{},{}\n", fmt17(s), fmt17(*q)));
        }
        out
    }
}

/// Midpoint node `s_k = (k + ½)/n` for zero-based `k`.
pub fn node(k: usize, n: usize) -> f64 {
    (k as f64 + 0.5) / n as f64
}

/// Left-continuous generalized inverse `Q(s) = min{x : F(x) ≥ s}` of a 1D
/// atomic measure, sampled on `n` midpoint nodes.
pub fn quantile_of_atomic(m: &DiscreteMeasure, n: usize) -> Result<QuantileGrid> {
    if m.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: m.dim(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidMeasure("grid size must be positive".into()));
    }
    let mut atoms: Vec<(f64, f64)> = m.iter().map(|(x, w)| (x[0], w)).filter(|a| a.1 > 0.0).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cdf = Vec::with_capacity(atoms.len());
    let mut acc = 0.0;
    for &(_, w) in &atoms {
        acc += w;
        cdf.push(acc);
    }
    let last = atoms.len() - 1;
    let values = (0..n)
        .map(|k| {
            let s = node(k, n);
            // cumulative sums carry rounding; treat F within 1e-13 of s as reaching it
            let idx = cdf.partition_point(|&f| f < s - 1e-13).min(last);
            atoms[idx].0
        })
        .collect();
    QuantileGrid::new(values)
}

/// Pushforward of a quantile grid under `x ↦ a·x + b`; needs `a ≥ 0`.
pub fn pushforward_affine(q: &QuantileGrid, a: f64, b: f64) -> Result<QuantileGrid> {
    if a < 0.0 {
        return Err(Error::Monotonicity(format!("affine factor {a} < 0 reverses the order")));
    }
    QuantileGrid::new(q.values.iter().map(|v| a * v + b).collect())
}

/// `(scale·Id + shift)_# base` for one of the built-in equilibrium measures.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFamilyPoint {
    pub base: EquilibriumMeasure,
    pub scale: f64,
    pub shift: Vec<f64>,
}

impl ScalingFamilyPoint {
    pub fn new(base: EquilibriumMeasure, scale: f64, shift: Vec<f64>) -> Result<Self> {
        if !(scale >= 0.0) {
            return Err(Error::InvalidMeasure(format!("scale {scale} must be nonnegative")));
        }
        if shift.len() != base.dim() {
            return Err(Error::Dimension {
                expected: base.dim(),
                got: shift.len(),
            });
        }
        Ok(Self { base, scale, shift })
    }

    pub fn centered(base: EquilibriumMeasure, scale: f64) -> Result<Self> {
        let d = base.dim();
        Self::new(base, scale, vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Radius of the support around `shift`.
    pub fn support_radius(&self) -> f64 {
        self.scale * self.base.support_radius()
    }

    pub fn is_dirac(&self) -> bool {
        self.scale == 0.0
    }

    /// Draws `count` samples of the scaled and shifted measure.
    pub fn sample(&self, count: usize, seed: u64) -> DiscreteMeasure {
        sample(&self.base, count, seed)
            .affine(self.scale, &self.shift)
            .expect("shift has the base dimension")
    }
}

/// `∫ ‖x‖² dμ`.
pub trait SecondMoment {
    fn second_moment(&self) -> f64;
}

impl SecondMoment for DiscreteMeasure {
    fn second_moment(&self) -> f64 {
        self.iter().map(|(x, w)| w * x.iter().map(|v| v * v).sum::<f64>()).sum()
    }
}

impl SecondMoment for QuantileGrid {
    fn second_moment(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.n() as f64
    }
}

impl SecondMoment for ScalingFamilyPoint {
    fn second_moment(&self) -> f64 {
        // built-in equilibrium measures are centered, so the cross term vanishes
        let shift2: f64 = self.shift.iter().map(|b| b * b).sum();
        self.scale * self.scale * self.base.second_moment() + shift2
    }
}

pub fn second_moment<M: SecondMoment + ?Sized>(m: &M) -> f64 {
    m.second_moment()
}
