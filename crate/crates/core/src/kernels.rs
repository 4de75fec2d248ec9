//! Riesz and Wendland kernels, the interaction, potential and discrepancy
//! energies of atomic measures, and gradients of the particle objective.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, QuantileGrid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `K(x, y) = −‖x − y‖ʳ` with `r ∈ (0, 2)`.
    Riesz { r: f64 },
    /// `K(x, y) = (1 − |x−y|/2)² (|x−y| + 1)` for `|x − y| ≤ 2`, zero beyond.
    /// One-dimensional only.
    Wendland,
}

impl Kernel {
    pub fn riesz(r: f64) -> Result<Self> {
        if r > 0.0 && r < 2.0 {
            Ok(Self::Riesz { r })
        } else {
            Err(Error::Domain(format!("Riesz exponent {r} outside (0, 2)")))
        }
    }

    /// The kernel as a function of the distance.
    pub fn profile(&self, dist: f64) -> f64 {
        match *self {
            Self::Riesz { r } => -riesz_pow(dist, r),
            Self::Wendland => wendland(dist),
        }
    }

    /// Derivative of [`Kernel::profile`] in the distance; zero at distance 0.
    pub fn profile_derivative(&self, dist: f64) -> f64 {
        match *self {
            Self::Riesz { r } => {
                if dist == 0.0 {
                    0.0
                } else {
                    -r * dist.powf(r - 1.0)
                }
            }
            Self::Wendland => wendland_derivative(dist),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Self::Wendland if dim != 1 => Err(Error::Unsupported(format!(
                "the Wendland kernel is one-dimensional, got dimension {dim}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: y.len(),
            });
        }
        self.check_dim(x.len())?;
        Ok(self.profile(distance(x, y)))
    }
}

fn riesz_pow(dist: f64, r: f64) -> f64 {
    if r == 1.0 {
        dist
    } else {
        dist.powf(r)
    }
}

pub fn wendland(dist: f64) -> f64 {
    let d = dist.abs();
    if d <= 2.0 {
        let u = 1.0 - d / 2.0;
        u * u * (d + 1.0)
    } else {
        0.0
    }
}

/// `d/dd [(1 − d/2)² (d + 1)] = −(3/2) d (1 − d/2)`.
pub fn wendland_derivative(dist: f64) -> f64 {
    let d = dist.abs();
    if d <= 2.0 {
        -1.5 * d * (1.0 - d / 2.0)
    } else {
        0.0
    }
}

pub(crate) fn distance2(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub(crate) fn distance(x: &[f64], y: &[f64]) -> f64 {
    if x.len() == 1 {
        (x[0] - y[0]).abs()
    } else {
        distance2(x, y).sqrt()
    }
}

/// `Σᵢ f(i)` where the terms are computed in parallel and added in index
/// order, so the result does not depend on the thread count.
pub(crate) fn ordered_sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let terms: Vec<f64> = (0..n).into_par_iter().map(f).collect();
    terms.iter().sum()
}

fn same_dim(m: &DiscreteMeasure, target: &DiscreteMeasure) -> Result<()> {
    if m.dim() != target.dim() {
        return Err(Error::Dimension {
            expected: m.dim(),
            got: target.dim(),
        });
    }
    Ok(())
}

/// `Σⱼ vⱼ K(x, yⱼ)`.
fn kernel_row(k: &Kernel, x: &[f64], m: &DiscreteMeasure) -> f64 {
    m.iter().map(|(y, w)| w * k.profile(distance(x, y))).sum()
}

/// `½ ΣᵢΣⱼ wᵢwⱼ K(xᵢ, xⱼ)`.
pub fn interaction_energy(k: &Kernel, m: &DiscreteMeasure) -> Result<f64> {
    k.check_dim(m.dim())?;
    Ok(0.5 * ordered_sum(m.len(), |i| m.weights()[i] * kernel_row(k, m.point(i), m)))
}

/// `Σᵢ wᵢ V(xᵢ)` with `V(x) = −Σⱼ vⱼ K(x, yⱼ)`.
pub fn potential_energy(k: &Kernel, m: &DiscreteMeasure, target: &DiscreteMeasure) -> Result<f64> {
    same_dim(m, target)?;
    k.check_dim(m.dim())?;
    Ok(-ordered_sum(m.len(), |i| m.weights()[i] * kernel_row(k, m.point(i), target)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub interaction: f64,
    pub potential: f64,
    pub target_self_energy: f64,
    pub discrepancy: f64,
}

/// `D²(m, target) = E(m) + V(m) + E(target)`.
pub fn discrepancy(k: &Kernel, m: &DiscreteMeasure, target: &DiscreteMeasure) -> Result<EnergyReport> {
    let interaction = interaction_energy(k, m)?;
    let potential = potential_energy(k, m, target)?;
    let target_self_energy = interaction_energy(k, target)?;
    Ok(EnergyReport {
        interaction,
        potential,
        target_self_energy,
        discrepancy: interaction + potential + target_self_energy,
    })
}

/// Distance-kernel discrepancy of two 1D measures from their quantile grids:
/// the midpoint rule for `∫(1−2s)(Q_μ + Q_ν) ds + ∬|Q_μ(s) − Q_ν(t)| ds dt`.
pub fn discrepancy_1d_quantile(q_mu: &QuantileGrid, q_nu: &QuantileGrid) -> Result<f64> {
    if q_mu.n() != q_nu.n() {
        return Err(Error::Size {
            left: q_mu.n(),
            right: q_nu.n(),
        });
    }
    let n = q_mu.n();
    let linear: f64 = q_mu
        .nodes()
        .zip(q_mu.values().iter().zip(q_nu.values()))
        .map(|(s, (a, b))| (1.0 - 2.0 * s) * (a + b))
        .sum::<f64>()
        / n as f64;
    Ok(linear + mean_abs_difference(q_mu.values(), q_nu.values()))
}

/// `(1/(n m)) Σₖ Σₜ |aₖ − bₜ|` for sorted `b`, via prefix sums.
pub(crate) fn mean_abs_difference(a: &[f64], b: &[f64]) -> f64 {
    let mut prefix = Vec::with_capacity(b.len() + 1);
    prefix.push(0.0);
    for &v in b {
        prefix.push(prefix.last().unwrap() + v);
    }
    let total = prefix[b.len()];
    let nb = b.len() as f64;
    let sum: f64 = a
        .iter()
        .map(|&x| {
            let j = b.partition_point(|&v| v < x);
            let below = x * j as f64 - prefix[j];
            let above = (total - prefix[j]) - x * (nb - j as f64);
            below + above
        })
        .sum();
    sum / (a.len() as f64 * nb)
}

fn require_steepest_descent_exponent(k: &Kernel) -> Result<f64> {
    match *k {
        Kernel::Riesz { r } if (1.0..2.0).contains(&r) => Ok(r),
        Kernel::Riesz { r } => Err(Error::Unsupported(format!(
            "gradient fields need r ∈ [1, 2), got {r}"
        ))),
        Kernel::Wendland => Err(Error::Unsupported("gradient field is implemented for Riesz kernels".into())),
    }
}

/// `r (x − y) ‖x − y‖^{r−2}`, zero when `x = y`.
#[inline]
fn riesz_force(x: &[f64], y: &[f64], r: f64, out: &mut [f64], scale: f64) {
    let d2 = distance2(x, y);
    if d2 == 0.0 {
        return;
    }
    let factor = if r == 1.0 { scale / d2.sqrt() } else { scale * r * d2.powf(0.5 * r - 1.0) };
    for ((o, a), b) in out.iter_mut().zip(x).zip(y) {
        *o += factor * (a - b);
    }
}

/// `∇G(xᵢ)` with `G(x) = Σⱼ wⱼ K(x, xⱼ)` at every atom of `m`.
pub fn grad_interaction_field(k: &Kernel, m: &DiscreteMeasure) -> Result<Vec<Vec<f64>>> {
    let r = require_steepest_descent_exponent(k)?;
    Ok((0..m.len())
        .into_par_iter()
        .map(|i| {
            let xi = m.point(i);
            let mut g = vec![0.0; m.dim()];
            for (j, (xj, wj)) in m.iter().enumerate() {
                if j != i {
                    riesz_force(xi, xj, r, &mut g, -wj);
                }
            }
            g
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleObjective {
    pub value: f64,
    pub grad: Vec<Vec<f64>>,
}

/// `F_M(x) = −(1/2M²) Σᵢⱼ ‖xᵢ − xⱼ‖ʳ + (1/M) Σᵢ Σₚ wₚ ‖xᵢ − yₚ‖ʳ` and its
/// gradient.
pub fn particle_objective(points: &[Vec<f64>], target: &DiscreteMeasure, r: f64) -> Result<ParticleObjective> {
    let dim = target.dim();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::Dimension {
            expected: dim,
            got: bad.len(),
        });
    }
    let flat = points.concat();
    let (value, grad) = particle_objective_flat(dim, &flat, target, r)?;
    Ok(ParticleObjective {
        value,
        grad: grad.chunks_exact(dim).map(<[f64]>::to_vec).collect(),
    })
}

/// Flat-array form of [`particle_objective`].
pub fn particle_objective_flat(
    dim: usize,
    points: &[f64],
    target: &DiscreteMeasure,
    r: f64,
) -> Result<(f64, Vec<f64>)> {
    if !(1.0..2.0).contains(&r) {
        return Err(Error::Unsupported(format!("particle flows need r ∈ [1, 2), got {r}")));
    }
    if target.dim() != dim || !points.len().is_multiple_of(dim) {
        return Err(Error::Dimension {
            expected: dim,
            got: target.dim(),
        });
    }
    let m = points.len() / dim;
    let mf = m as f64;
    let rows: Vec<(f64, Vec<f64>)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let xi = &points[i * dim..(i + 1) * dim];
            let mut g = vec![0.0; dim];
            let mut repulsion = 0.0;
            for j in 0..m {
                if j == i {
                    continue;
                }
                let xj = &points[j * dim..(j + 1) * dim];
                repulsion += riesz_pow(distance(xi, xj), r);
                riesz_force(xi, xj, r, &mut g, -1.0 / (mf * mf));
            }
            let mut attraction = 0.0;
            for (y, w) in target.iter() {
                attraction += w * riesz_pow(distance(xi, y), r);
                riesz_force(xi, y, r, &mut g, w / mf);
            }
            (-repulsion / (2.0 * mf * mf) + attraction / mf, g)
        })
        .collect();
    let value = rows.iter().map(|row| row.0).sum();
    let grad = rows.into_iter().flat_map(|row| row.1).collect();
    Ok((value, grad))
}

/// Two-atom configuration in the plane: `μ = ½δ₀ + ½δ_{x(0)}`,
/// `ν = ½δ₀ + ½δ_{x(1)}` and their geodesic midpoint, with
/// `x(t) = (s, (1−2t) s/2)`.
fn witness_configuration(s: f64) -> [DiscreteMeasure; 3] {
    let at = |t: f64| DiscreteMeasure::uniform(2, vec![0.0, 0.0, s, (1.0 - 2.0 * t) * s / 2.0]).expect("two atoms");
    [at(0.0), at(1.0), at(0.5)]
}

/// Largest `λ` for which the `λ`-convexity inequality of the interaction
/// energy holds at the midpoint of the two-atom geodesic of size `s`.
pub fn convexity_lambda_bound(r: f64, s: f64) -> Result<f64> {
    let k = Kernel::riesz(r)?;
    let [mu, nu, mid] = witness_configuration(s);
    let w2 = crate::measures::w2_assignment(&mu, &nu)?;
    let avg = 0.5 * (interaction_energy(&k, &mu)? + interaction_energy(&k, &nu)?);
    Ok(8.0 * (avg - interaction_energy(&k, &mid)?) / (w2 * w2))
}

/// True iff `E(γ(½)) > ½E(μ) + ½E(ν) − (λ/8) W₂²(μ, ν)` on the two-atom
/// geodesic of size `s`, i.e. the interaction energy is not `λ`-convex there.
pub fn convexity_violation_witness(r: f64, s: f64, lambda: f64) -> Result<bool> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("segment size {s} must be positive")));
    }
    let k = Kernel::riesz(r)?;
    let [mu, nu, mid] = witness_configuration(s);
    let w2 = crate::measures::w2_assignment(&mu, &nu)?;
    let lhs = interaction_energy(&k, &mid)?;
    let rhs = 0.5 * (interaction_energy(&k, &mu)? + interaction_energy(&k, &nu)?) - lambda / 8.0 * w2 * w2;
    Ok(lhs > rhs)
}

/// Same bound as [`convexity_lambda_bound`] for the discrepancy to `δ_{−e₁}`.
pub fn discrepancy_lambda_bound(r: f64, s: f64) -> Result<f64> {
    let k = Kernel::riesz(r)?;
    let [mu, nu, mid] = witness_configuration(s);
    let target = DiscreteMeasure::dirac(&[-1.0, 0.0]);
    let w2 = crate::measures::w2_assignment(&mu, &nu)?;
    let d = |m: &DiscreteMeasure| discrepancy(&k, m, &target).map(|rep| rep.discrepancy);
    let avg = 0.5 * (d(&mu)? + d(&nu)?);
    Ok(8.0 * (avg - d(&mid)?) / (w2 * w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{quantile_of_atomic, SecondMoment};
    use crate::rng::seeded;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_measure(rng: &mut impl Rng, dim: usize, n: usize) -> DiscreteMeasure {
        let pts = (0..n * dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        let masses = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
        DiscreteMeasure::from_masses(dim, pts, masses).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let r1 = Kernel::riesz(1.0).unwrap();
        assert_eq!(r1.eval(&[0.0], &[1.0]).unwrap(), -1.0);
        assert_eq!(Kernel::riesz(1.5).unwrap().eval(&[0.0], &[4.0]).unwrap(), -8.0);
        assert_eq!(Kernel::Wendland.eval(&[0.0], &[2.0]).unwrap(), 0.0);
        assert_eq!(Kernel::Wendland.eval(&[0.0], &[0.0]).unwrap(), 1.0);
        assert!(Kernel::Wendland.eval(&[0.0, 0.0], &[1.0, 0.0]).is_err());
        assert!(Kernel::riesz(2.0).is_err());
    }

    #[test]
    fn wendland_derivative_matches_differences() {
        for d in [0.1, 0.7, 1.3, 1.99] {
            let h = 1e-6;
            let fd = (wendland(d + h) - wendland(d - h)) / (2.0 * h);
            assert!((fd - wendland_derivative(d)).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_examples() {
        let k = Kernel::riesz(1.0).unwrap();
        let d0 = DiscreteMeasure::dirac(&[0.0]);
        let d1 = DiscreteMeasure::dirac(&[1.0]);
        let half = DiscreteMeasure::uniform(1, vec![0.0, 1.0]).unwrap();
        assert_eq!(interaction_energy(&k, &d0).unwrap(), 0.0);
        assert_eq!(interaction_energy(&k, &half).unwrap(), -0.25);
        assert_eq!(potential_energy(&k, &d0, &d0).unwrap(), 0.0);
        assert_eq!(potential_energy(&k, &d0, &d1).unwrap(), 1.0);
        let two = DiscreteMeasure::uniform(1, vec![0.0, 2.0]).unwrap();
        assert_eq!(potential_energy(&k, &two, &d1).unwrap(), 1.0);
        assert_eq!(discrepancy(&k, &d0, &d0).unwrap().discrepancy, 0.0);
        assert_eq!(discrepancy(&k, &d0, &d1).unwrap().discrepancy, 1.0);
    }

    #[test]
    fn uniform_interval_energy() {
        let n = 10_000;
        let h = 3f64.sqrt();
        let q = QuantileGrid::uniform(-h, h, n).unwrap();
        let e = interaction_energy(&Kernel::riesz(1.0).unwrap(), &q.to_atomic()).unwrap();
        assert!((e + 1.0 / 3f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn quantile_discrepancy_examples() {
        let n = 2000;
        let tol = 2.0 / n as f64;
        let u = QuantileGrid::uniform(-1.0, 1.0, n).unwrap();
        assert!(discrepancy_1d_quantile(&u, &u).unwrap().abs() < tol);
        let dm1 = QuantileGrid::dirac(-1.0, n);
        assert!((discrepancy_1d_quantile(&dm1, &u).unwrap() - 2.0 / 3.0).abs() < tol);
        let d0 = QuantileGrid::dirac(0.0, n);
        let d1 = QuantileGrid::dirac(1.0, n);
        assert!((discrepancy_1d_quantile(&d0, &d1).unwrap() - 1.0).abs() < tol);
    }

    #[test]
    fn quantile_discrepancy_converges_to_atomic() {
        let mu = DiscreteMeasure::from_flat(1, vec![-1.0, 0.3, 2.0], vec![0.2, 0.5, 0.3]).unwrap();
        let nu = DiscreteMeasure::from_flat(1, vec![0.0, 1.0], vec![0.6, 0.4]).unwrap();
        let exact = discrepancy(&Kernel::riesz(1.0).unwrap(), &mu, &nu).unwrap().discrepancy;
        for n in [64, 256, 1024, 4096] {
            let qm = quantile_of_atomic(&mu, n).unwrap();
            let qn = quantile_of_atomic(&nu, n).unwrap();
            let err = (discrepancy_1d_quantile(&qm, &qn).unwrap() - exact).abs();
            assert!(err <= 10.0 / n as f64, "n={n}: {err}");
        }
    }

    #[test]
    fn mean_abs_difference_matches_double_sum() {
        let mut rng = seeded(4);
        let a: Vec<f64> = (0..37).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut b: Vec<f64> = (0..37).map(|_| rng.random_range(-1.0..1.0)).collect();
        b.sort_by(f64::total_cmp);
        let brute: f64 = a.iter().flat_map(|x| b.iter().map(move |y| (x - y).abs())).sum::<f64>() / (37.0 * 37.0);
        assert_relative_eq!(mean_abs_difference(&a, &b), brute, epsilon = 1e-14);
    }

    #[test]
    fn gradient_field_examples() {
        let k = Kernel::riesz(1.0).unwrap();
        let g = grad_interaction_field(&k, &DiscreteMeasure::dirac(&[0.3, 0.1])).unwrap();
        assert_eq!(g, vec![vec![0.0, 0.0]]);
        let g = grad_interaction_field(&k, &DiscreteMeasure::uniform(1, vec![0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(g[0], vec![0.5]);
        assert_eq!(g[1], vec![-0.5]);
        assert!(grad_interaction_field(&Kernel::riesz(0.5).unwrap(), &DiscreteMeasure::dirac(&[0.0])).is_err());
    }

    #[test]
    fn gradient_field_matches_differences() {
        let mut rng = seeded(11);
        for r in [1.0, 1.5] {
            let k = Kernel::riesz(r).unwrap();
            let m = random_measure(&mut rng, 2, 6);
            let g = grad_interaction_field(&k, &m).unwrap();
            let h = 1e-5;
            for i in 0..m.len() {
                for c in 0..2 {
                    let bump = |delta: f64| {
                        let mut pts = m.points_flat().to_vec();
                        pts[i * 2 + c] += delta;
                        let mm = DiscreteMeasure::from_flat(2, pts, m.weights().to_vec()).unwrap();
                        interaction_energy(&k, &mm).unwrap()
                    };
                    let fd = (bump(h) - bump(-h)) / (2.0 * h) / m.weights()[i];
                    assert!((fd - g[i][c]).abs() <= 1e-5 * (1.0 + g[i][c].abs()));
                }
            }
        }
    }

    #[test]
    fn particle_objective_examples() {
        let target = DiscreteMeasure::dirac(&[1.0, 0.0]);
        let obj = particle_objective(&[vec![0.0, 0.0]], &target, 1.5).unwrap();
        assert_relative_eq!(obj.value, 1.0, epsilon = 1e-15);
        assert_relative_eq!(obj.grad[0][0], -1.5, epsilon = 1e-15);
        assert_eq!(obj.grad[0][1], 0.0);
        let far = DiscreteMeasure::dirac(&[5.0, 0.0]);
        let obj = particle_objective(&[vec![0.0, 0.0], vec![0.0, 0.0]], &far, 1.0).unwrap();
        assert_relative_eq!(obj.value, 5.0, epsilon = 1e-15);
        assert_relative_eq!(obj.grad[0][0], -0.5, epsilon = 1e-15);
    }

    #[test]
    fn particle_gradient_matches_differences() {
        let mut rng = seeded(12);
        let target = random_measure(&mut rng, 2, 3);
        let pts: Vec<Vec<f64>> = (0..8).map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect();
        for r in [1.0, 1.25, 1.5] {
            let obj = particle_objective(&pts, &target, r).unwrap();
            let h = 1e-5;
            for i in 0..pts.len() {
                for c in 0..2 {
                    let mut up = pts.clone();
                    up[i][c] += h;
                    let mut dn = pts.clone();
                    dn[i][c] -= h;
                    let fd = (particle_objective(&up, &target, r).unwrap().value
                        - particle_objective(&dn, &target, r).unwrap().value)
                        / (2.0 * h);
                    assert!((fd - obj.grad[i][c]).abs() <= 1e-5 * (1.0 + obj.grad[i][c].abs()));
                }
            }
        }
    }

    #[test]
    fn particle_objective_is_shifted_discrepancy() {
        // F_M = D²(μ_x, ν) − E(ν)
        let mut rng = seeded(13);
        let target = random_measure(&mut rng, 3, 4);
        let pts: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
        let k = Kernel::riesz(1.5).unwrap();
        let m = DiscreteMeasure::uniform(3, pts.clone()).unwrap();
        let rep = discrepancy(&k, &m, &target).unwrap();
        let (value, _) = particle_objective_flat(3, &pts, &target, 1.5).unwrap();
        assert_relative_eq!(value, rep.discrepancy - rep.target_self_energy, epsilon = 1e-12);
    }

    #[test]
    fn witness_examples() {
        assert!(convexity_violation_witness(1.0, 0.01, 0.5).unwrap());
        assert!(!convexity_violation_witness(1.0, 1.0, -1e6).unwrap());
        assert!(convexity_violation_witness(1.5, 1e-3, 0.5).unwrap());
    }

    #[test]
    fn lambda_bounds_match_closed_forms() {
        for r in [1.0, 1.5] {
            for s in [1.0f64, 0.1, 0.01] {
                let closed = (1.0 - 1.25f64.powf(r / 2.0)) * 4.0 / s.powf(2.0 - r);
                assert_relative_eq!(convexity_lambda_bound(r, s).unwrap(), closed, max_relative = 1e-9);
                let a = ((1.0 + 1.0 / s).powi(2) + 0.25).powf(r / 2.0);
                let b = (1.0 + 1.0 / s).powf(r);
                let disc = 8.0 * ((a - b) * s.powf(r) / 2.0 - (1.25f64.powf(r / 2.0) - 1.0) * s.powf(r) / 4.0) / (s * s / 2.0);
                assert_relative_eq!(discrepancy_lambda_bound(r, s).unwrap(), disc, max_relative = 1e-6);
            }
        }
    }

    proptest! {
        #[test]
        fn discrepancy_properties(seed in 0u64..10_000, dim in 1usize..4, r in prop::sample::select(vec![1.0, 1.5])) {
            let mut rng = seeded(seed);
            let mu = random_measure(&mut rng, dim, 5);
            let nu = random_measure(&mut rng, dim, 4);
            let k = Kernel::riesz(r).unwrap();
            let ab = discrepancy(&k, &mu, &nu).unwrap().discrepancy;
            let ba = discrepancy(&k, &nu, &mu).unwrap().discrepancy;
            prop_assert!(ab > 0.0);
            prop_assert!((ab - ba).abs() <= 1e-12);
            prop_assert!(discrepancy(&k, &mu, &mu).unwrap().discrepancy.abs() <= 1e-12);
        }

        #[test]
        fn interaction_translation_and_scaling(seed in 0u64..10_000, c in 0.1f64..5.0) {
            let mut rng = seeded(seed);
            let mu = random_measure(&mut rng, 2, 6);
            let k = Kernel::riesz(1.5).unwrap();
            let e = interaction_energy(&k, &mu).unwrap();
            let shifted = mu.affine(1.0, &[3.0, -7.0]).unwrap();
            prop_assert!((interaction_energy(&k, &shifted).unwrap() - e).abs() <= 1e-10);
            let scaled = mu.affine(c, &[0.0, 0.0]).unwrap();
            let es = interaction_energy(&k, &scaled).unwrap();
            prop_assert!((es - c.powf(1.5) * e).abs() <= 1e-10 * es.abs());
            prop_assert!(scaled.second_moment() >= 0.0);
        }
    }
}
