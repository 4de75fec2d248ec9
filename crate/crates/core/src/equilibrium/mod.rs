//! Equilibrium measures of the Riesz interaction energy with a quadratic
//! external field, their energies, and the sphere potential.

mod hypergeometric;

pub use hypergeometric::{
    gauss_sum_at_1, hypergeom_2f1, hypergeom_2f1_at_1, ln_gamma_signed, terminating_sum_at_1,
};

use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;
use std::cell::RefCell;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measures::{ScalingFamilyPoint, SecondMoment};
use crate::quadrature::{integrate_pieces, QuadConfig};

/// Relative slack used to decide whether a probe lies on the support.
const SUPPORT_RTOL: f64 = 1e-9;

/// The three shapes an equilibrium measure can take.
#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumMeasure {
    /// Uniform distribution on `[−halfwidth, halfwidth]`.
    UniformInterval { halfwidth: f64 },
    /// Density `A_s (s² − ‖x‖²)^α` on the ball `s𝔹ᵈ` with `α = 1 − (r+d)/2`.
    BetaBall { d: usize, r: f64, s: f64 },
    /// Uniform distribution on the sphere of the given radius in ℝᵈ.
    UniformSphere { d: usize, radius: f64 },
}

impl EquilibriumMeasure {
    pub fn dim(&self) -> usize {
        match self {
            Self::UniformInterval { .. } => 1,
            Self::BetaBall { d, .. } | Self::UniformSphere { d, .. } => *d,
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            Self::UniformInterval { halfwidth } => *halfwidth,
            Self::BetaBall { s, .. } => *s,
            Self::UniformSphere { radius, .. } => *radius,
        }
    }

    /// Density exponent: `1 − (r+d)/2` for balls, 0 for the interval and the
    /// degenerate limit −1 for spheres.
    pub fn alpha(&self) -> f64 {
        match self {
            Self::UniformInterval { .. } => 0.0,
            Self::BetaBall { d, r, .. } => ball_exponent(*d, *r),
            Self::UniformSphere { .. } => -1.0,
        }
    }

    /// The same shape with every length multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            Self::UniformInterval { halfwidth } => Self::UniformInterval { halfwidth: c * halfwidth },
            Self::BetaBall { d, r, s } => Self::BetaBall { d: *d, r: *r, s: c * s },
            Self::UniformSphere { d, radius } => Self::UniformSphere { d: *d, radius: c * radius },
        }
    }

    /// Normalizing constant `A_s` of a ball density.
    pub fn ball_normalization(d: usize, r: f64, s: f64) -> f64 {
        let alpha = ball_exponent(d, r);
        let half_d = d as f64 / 2.0;
        (ln_gamma(half_d) - half_d * PI.ln() - ln_beta(half_d, alpha + 1.0)).exp() * s.powf(-(2.0 - r))
    }

    /// Density with respect to Lebesgue measure; `None` for the sphere.
    pub fn density(&self, x: &[f64]) -> Option<f64> {
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            Self::UniformInterval { halfwidth } => {
                Some(if norm2.sqrt() <= *halfwidth { 0.5 / halfwidth } else { 0.0 })
            }
            Self::BetaBall { d, r, s } => {
                let gap = s * s - norm2;
                Some(if gap > 0.0 {
                    Self::ball_normalization(*d, *r, *s) * gap.powf(ball_exponent(*d, *r))
                } else {
                    0.0
                })
            }
            Self::UniformSphere { .. } => None,
        }
    }

    /// `∫ g(‖x‖) dη(x)`, with optional radii at which `g` has kinks.
    ///
    /// For balls with a singular boundary the radius is reparametrized as
    /// `ρ = s(1 − v^p)`, `p = 1/(1+α)`, which turns the density factor
    /// `(s−ρ)^α dρ` into a constant multiple of `dv`.
    pub fn radial_expectation(&self, g: impl Fn(f64) -> f64, breaks: &[f64], cfg: &QuadConfig) -> f64 {
        match self {
            Self::UniformSphere { radius, .. } => g(*radius),
            Self::UniformInterval { halfwidth } => {
                let h = *halfwidth;
                let mut pts = vec![0.0];
                pts.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < h));
                pts.push(h);
                pts.sort_by(f64::total_cmp);
                integrate_pieces(|rho| g(rho) / h, &pts, *cfg)
            }
            Self::BetaBall { d, r, s } => {
                let alpha = ball_exponent(*d, *r);
                let half_d = *d as f64 / 2.0;
                let p = if alpha < 0.0 { 1.0 / (1.0 + alpha) } else { 1.0 };
                let lead = 2.0 * p / ln_beta(half_d, alpha + 1.0).exp();
                let vpow = p * (1.0 + alpha) - 1.0;
                let s = *s;
                let integrand = |v: f64| {
                    let u = 1.0 - v.powf(p);
                    let mut w = lead * u.powi(*d as i32 - 1) * (1.0 + u).powf(alpha);
                    if vpow != 0.0 {
                        w *= v.powf(vpow);
                    }
                    w * g(s * u)
                };
                let mut pts = vec![0.0];
                pts.extend(
                    breaks
                        .iter()
                        .filter(|&&b| b > 0.0 && b < s)
                        .map(|&b| (1.0 - b / s).powf(1.0 / p)),
                );
                pts.push(1.0);
                pts.sort_by(f64::total_cmp);
                integrate_pieces(integrand, &pts, *cfg)
            }
        }
    }

    /// `E‖X‖^k`.
    pub fn radial_moment(&self, k: f64) -> f64 {
        match self {
            Self::UniformInterval { halfwidth } => halfwidth.powf(k) / (k + 1.0),
            Self::UniformSphere { radius, .. } => radius.powf(k),
            Self::BetaBall { d, r, s } => {
                // ρ²/s² ~ Beta(d/2, α+1)
                let a = *d as f64 / 2.0;
                let b = ball_exponent(*d, *r) + 1.0;
                s.powf(k) * (ln_beta(a + k / 2.0, b) - ln_beta(a, b)).exp()
            }
        }
    }

    /// `∫ ‖x − y‖ʳ dη(y)` at any `x` with `‖x‖ = rho`.
    pub fn riesz_potential(&self, rho: f64, r: f64) -> Result<f64> {
        match self {
            Self::UniformInterval { halfwidth } => Ok(interval_potential(rho.abs(), *halfwidth, r)),
            Self::UniformSphere { d, radius } => shell_average(*d, r, rho, *radius),
            Self::BetaBall { d, .. } => {
                let cfg = QuadConfig::tol(1e-12);
                let failure = RefCell::new(None);
                let value = self.radial_expectation(
                    |t| shell_average(*d, r, rho, t).unwrap_or_else(|e| {
                        failure.replace(Some(e));
                        0.0
                    }),
                    &[rho],
                    &cfg,
                );
                failure.into_inner().map_or(Ok(value), Err)
            }
        }
    }

    /// Riesz interaction energy `−½ ∬ ‖x − y‖ʳ dη dη`.
    pub fn riesz_energy(&self, r: f64) -> Result<f64> {
        match self {
            Self::UniformInterval { halfwidth } => {
                let len = 2.0 * halfwidth;
                Ok(-len.powf(r) / ((r + 1.0) * (r + 2.0)))
            }
            Self::UniformSphere { d, radius } => {
                let half_d = *d as f64 / 2.0;
                Ok(-0.5 * radius.powf(r) * hypergeom_2f1_at_1(-r / 2.0, 1.0 - (r + *d as f64) / 2.0, half_d)?)
            }
            Self::BetaBall { .. } => {
                let cfg = QuadConfig::tol(1e-10);
                let failure = RefCell::new(None);
                let value = self.radial_expectation(
                    |rho| self.riesz_potential(rho, r).unwrap_or_else(|e| {
                        failure.replace(Some(e));
                        0.0
                    }),
                    &[],
                    &cfg,
                );
                failure.into_inner().map_or(Ok(-0.5 * value), Err)
            }
        }
    }
}

impl SecondMoment for EquilibriumMeasure {
    fn second_moment(&self) -> f64 {
        self.radial_moment(2.0)
    }
}

/// `1 − (r + d)/2`.
pub fn ball_exponent(d: usize, r: f64) -> f64 {
    1.0 - (r + d as f64) / 2.0
}

fn interval_potential(x: f64, h: f64, r: f64) -> f64 {
    let r1 = r + 1.0;
    if x <= h {
        ((h + x).powf(r1) + (h - x).powf(r1)) / (2.0 * h * r1)
    } else {
        ((x + h).powf(r1) - (x - h).powf(r1)) / (2.0 * h * r1)
    }
}

/// Average of `‖x − y‖ʳ` over `y` uniform on the sphere of radius `t` in ℝᵈ,
/// for `‖x‖ = rho`.
pub fn shell_average(d: usize, r: f64, rho: f64, t: f64) -> Result<f64> {
    let (rho, t) = (rho.abs(), t.abs());
    if t == 0.0 {
        return Ok(rho.powf(r));
    }
    if rho == 0.0 {
        return Ok(t.powf(r));
    }
    match d {
        0 => Err(Error::Dimension { expected: 1, got: 0 }),
        1 => Ok(0.5 * ((rho - t).abs().powf(r) + (rho + t).powf(r))),
        3 => {
            let r2 = r + 2.0;
            Ok(((rho + t).powf(r2) - (rho - t).abs().powf(r2)) / (2.0 * rho * t * r2))
        }
        _ => radial_sphere_potential(d, r, rho, t),
    }
}

/// `∫ ‖x − y‖ʳ d𝒰_{R𝕊^{d−1}}(y)` by Gauss's quadratic transformation,
/// `Rʳ ₂F₁(−r/2, (2−r−d)/2; d/2; ‖x‖²/R²)` inside the ball and the mirrored
/// expression outside.
pub fn sphere_potential(x: &[f64], radius: f64, r: f64, d: usize) -> Result<f64> {
    if x.len() != d {
        return Err(Error::Dimension {
            expected: d,
            got: x.len(),
        });
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("sphere radius {radius} must be positive")));
    }
    let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    radial_sphere_potential(d, r, rho, radius)
}

fn radial_sphere_potential(d: usize, r: f64, rho: f64, radius: f64) -> Result<f64> {
    let (lo, hi) = if rho <= radius { (rho, radius) } else { (radius, rho) };
    let z = (lo / hi).powi(2);
    let a = -r / 2.0;
    let b = 1.0 - (r + d as f64) / 2.0;
    let c = d as f64 / 2.0;
    let gap = c - a - b;
    let series_is_cheap = z <= 0.81 || b <= 0.0 && b == b.floor() || (gap - gap.round()).abs() > 0.05;
    if series_is_cheap || d == 1 {
        return Ok(hi.powf(r) * hypergeom_2f1(a, b, c, z)?);
    }
    Ok(angular_sphere_potential(d, r, rho, radius))
}

/// Direct angular integration of the sphere potential, used near `‖x‖ = R`
/// where the hypergeometric series converges slowly.
fn angular_sphere_potential(d: usize, r: f64, rho: f64, t: f64) -> f64 {
    let diff2 = (rho - t) * (rho - t);
    let cross = 4.0 * rho * t;
    let sin_pow = d as i32 - 2;
    let f = |theta: f64| {
        let half = (0.5 * theta).sin();
        (diff2 + cross * half * half).powf(0.5 * r) * theta.sin().powi(sin_pow)
    };
    let knee = (rho - t).abs() / (rho * t).sqrt();
    let mut pts = vec![0.0];
    if knee > 0.0 && knee < PI {
        pts.push(knee);
    }
    pts.push(PI);
    let cfg = QuadConfig::tol(1e-14);
    let norm = if d == 2 {
        PI
    } else {
        (0.5 * PI.ln() + ln_gamma((d as f64 - 1.0) / 2.0) - ln_gamma(d as f64 / 2.0)).exp()
    };
    integrate_pieces(f, &pts, cfg) / norm
}

/// The unit-second-moment minimizer `η*` of the interaction energy and its
/// energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution {
    pub eta_star: EquilibriumMeasure,
    pub energy: f64,
    pub d: usize,
    pub r: f64,
}

impl EquilibriumSolution {
    /// The proximal minimizer `η*_τ = (c_τ Id)_# η*` as a scaling-family point.
    pub fn proximal(&self, tau: f64) -> Result<ScalingFamilyPoint> {
        ScalingFamilyPoint::centered(self.eta_star.clone(), c_tau(tau, self)?)
    }

    pub fn variant_name(&self) -> &'static str {
        match self.eta_star {
            EquilibriumMeasure::UniformInterval { .. } => "uniform_interval",
            EquilibriumMeasure::BetaBall { .. } => "beta_ball",
            EquilibriumMeasure::UniformSphere { .. } => "uniform_sphere",
        }
    }
}

/// Solves the constrained problem `min E(η)` subject to `m₂(η) = 1`.
///
/// For `d + r ≥ 4` the minimizer is the uniform measure on the unit sphere.
/// Otherwise it is a ball density; the radius follows from the Beta moment
/// `m₂ = s² (d/2) / (d/2 + α + 1)` and the energy is integrated numerically.
pub fn equilibrium_unit(d: usize, r: f64) -> Result<EquilibriumSolution> {
    if d == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::Domain(format!("Riesz exponent {r} outside (0, 2)")));
    }
    let eta_star = if d as f64 + r >= 4.0 {
        EquilibriumMeasure::UniformSphere { d, radius: 1.0 }
    } else if d == 1 && r == 1.0 {
        EquilibriumMeasure::UniformInterval { halfwidth: 3f64.sqrt() }
    } else {
        let half_d = d as f64 / 2.0;
        let s = ((half_d + ball_exponent(d, r) + 1.0) / half_d).sqrt();
        EquilibriumMeasure::BetaBall { d, r, s }
    };
    let energy = eta_star.riesz_energy(r)?;
    Ok(EquilibriumSolution { eta_star, energy, d, r })
}

/// `c_τ = (−τ r E(η*))^{1/(2−r)}`, the scale taking `η*` to the proximal
/// minimizer `η*_τ`.
pub fn c_tau(tau: f64, sol: &EquilibriumSolution) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("step size {tau} must be nonnegative")));
    }
    Ok((-tau * sol.r * sol.energy).powf(1.0 / (2.0 - sol.r)))
}

/// Closed-form ball radius `(Γ(2−r/2) Γ((d+r)/2) r τ / (2Γ(d/2)))^{1/(2−r)}`
/// as tabulated in the literature.
///
/// This does not match the support radius `c_τ·s` of the proximal minimizer:
/// at `d = r = 1` it gives `τ/4`, whereas the minimizer is `𝒰[−τ, τ]`. It is
/// kept for comparison only; [`c_tau`] is what the crate uses.
pub fn tabulated_ball_radius(d: usize, r: f64, tau: f64) -> f64 {
    let log = ln_gamma(2.0 - r / 2.0) + ln_gamma((d as f64 + r) / 2.0) + (r * tau / 2.0).ln()
        - ln_gamma(d as f64 / 2.0);
    (log / (2.0 - r)).exp()
}

/// `R_d = ½ ₂F₁(−½, −(d−1)/2; d/2; 1)`, the radius of the steepest descent
/// direction of the distance energy at a Dirac in `d ≥ 3`.
pub fn r_constant(d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain(format!("R_d is defined for d ≥ 3, got {d}")));
    }
    let d = d as f64;
    Ok(0.5 * hypergeom_2f1_at_1(-0.5, -(d - 1.0) / 2.0, d / 2.0)?)
}

/// Optimality-condition residuals of `η*_τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityResidual {
    /// `max − min` of `Φ` over probes on the support.
    pub on_support_spread: f64,
    /// `min (Φ − C)` over probes off the support; `+∞` if there are none.
    pub min_off_support_slack: f64,
    /// The level `C`: mean of `Φ` over support probes.
    pub level: f64,
}

/// Evaluates `Φ(x) = ∫ K(x, y) dη*_τ(y) + ‖x‖²/(2τ)` at the probes and
/// reports how far it is from being constant on the support and at least
/// that constant elsewhere.
pub fn optimality_residual(tau: f64, d: usize, r: f64, probes: &[Vec<f64>]) -> Result<OptimalityResidual> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("step size {tau} must be positive")));
    }
    let sol = equilibrium_unit(d, r)?;
    let eta_tau = sol.eta_star.scaled(c_tau(tau, &sol)?);
    let radius = eta_tau.support_radius();
    let phi = |rho: f64| -> Result<f64> { Ok(-eta_tau.riesz_potential(rho, r)? + rho * rho / (2.0 * tau)) };
    let on_support = |rho: f64| match eta_tau {
        EquilibriumMeasure::UniformSphere { .. } => (rho - radius).abs() <= SUPPORT_RTOL * radius.max(1.0),
        _ => rho <= radius * (1.0 + SUPPORT_RTOL),
    };
    let mut on = Vec::new();
    let mut off = Vec::new();
    for x in probes {
        if x.len() != d {
            return Err(Error::Dimension {
                expected: d,
                got: x.len(),
            });
        }
        let rho = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let value = phi(rho)?;
        if on_support(rho) {
            on.push(value);
        } else {
            off.push(value);
        }
    }
    if on.is_empty() {
        let canonical = match eta_tau {
            EquilibriumMeasure::UniformSphere { .. } => radius,
            _ => 0.0,
        };
        on.push(phi(canonical)?);
    }
    let max = on.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = on.iter().copied().fold(f64::INFINITY, f64::min);
    let level = on.iter().sum::<f64>() / on.len() as f64;
    let slack = off.iter().map(|v| v - level).fold(f64::INFINITY, f64::min);
    Ok(OptimalityResidual {
        on_support_spread: max - min,
        min_off_support_slack: slack,
        level,
    })
}

/// Total mass of a measure by quadrature of its radial law.
pub fn total_mass(eta: &EquilibriumMeasure) -> f64 {
    eta.radial_expectation(|_| 1.0, &[], &QuadConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::sample;
    use approx::assert_relative_eq;
    use crate::quadrature::integrate;
    use rand::Rng;

    fn brute_force_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        integrate(f, a, b, QuadConfig::tol(1e-13)).0
    }

    #[test]
    fn unit_solutions() {
        let s = equilibrium_unit(1, 1.0).unwrap();
        assert_eq!(s.eta_star, EquilibriumMeasure::UniformInterval { halfwidth: 3f64.sqrt() });
        assert_relative_eq!(s.energy, -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        let s = equilibrium_unit(3, 1.0).unwrap();
        assert_eq!(s.eta_star, EquilibriumMeasure::UniformSphere { d: 3, radius: 1.0 });
        assert_relative_eq!(s.energy, -2.0 / 3.0, epsilon = 1e-15);
        let s = equilibrium_unit(2, 1.0).unwrap();
        assert_relative_eq!(s.eta_star.support_radius(), 1.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s.energy, -PI / (2.0 * 6f64.sqrt()), epsilon = 1e-8);
    }

    #[test]
    fn unit_second_moment_by_quadrature() {
        for d in 1..=4 {
            for r in [0.5, 1.0, 1.5] {
                let s = equilibrium_unit(d, r).unwrap();
                let cfg = QuadConfig::tol(1e-13);
                let m2 = s.eta_star.radial_expectation(|rho| rho * rho, &[], &cfg);
                assert!((m2 - 1.0).abs() < 1e-8, "d={d} r={r} m2={m2}");
                assert!((total_mass(&s.eta_star) - 1.0).abs() < 1e-8);
                assert!(s.energy < 0.0);
            }
        }
    }

    #[test]
    fn energy_matches_moment_identity() {
        // at the constrained minimizer E(η*) = −2 E‖Y‖ʳ / (4 − r)
        for d in 1..=3 {
            for r in [0.5, 1.0, 1.5] {
                if d as f64 + r >= 4.0 {
                    continue;
                }
                let s = equilibrium_unit(d, r).unwrap();
                let identity = -2.0 * s.eta_star.radial_moment(r) / (4.0 - r);
                assert!((s.energy - identity).abs() < 1e-8, "d={d} r={r}: {} vs {identity}", s.energy);
            }
        }
    }

    #[test]
    fn energy_matches_monte_carlo() {
        let mut rng = crate::rng::seeded(17);
        for (d, r) in [(1, 0.5), (2, 1.0), (2, 1.5), (3, 0.5), (4, 1.0)] {
            let s = equilibrium_unit(d, r).unwrap();
            let n = 200_000;
            let a = sample(&s.eta_star, n, rng.random());
            let b = sample(&s.eta_star, n, rng.random());
            let vals: Vec<f64> = (0..n)
                .map(|i| {
                    let dist2: f64 = a.point(i).iter().zip(b.point(i)).map(|(x, y)| (x - y) * (x - y)).sum();
                    -0.5 * dist2.powf(r / 2.0)
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / n as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            assert!((mean - s.energy).abs() < 4.0 * se, "d={d} r={r}: mc {mean} vs {}", s.energy);
        }
    }

    #[test]
    fn c_tau_examples() {
        let s1 = equilibrium_unit(1, 1.0).unwrap();
        assert_relative_eq!(c_tau(0.7, &s1).unwrap(), 0.7 / 3f64.sqrt(), epsilon = 1e-15);
        let s3 = equilibrium_unit(3, 1.0).unwrap();
        assert_relative_eq!(c_tau(1.5, &s3).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(c_tau(0.0, &s3).unwrap(), 0.0);
    }

    #[test]
    fn proximal_radius_beats_tabulated_constant() {
        // Minimize F(a) = E(𝒰[−a,a]) + m₂/(2τ) = −a/3 + a²/(6τ) over the
        // uniform family by golden-section search.
        let tau = 0.8;
        let f = |a: f64| -a / 3.0 + a * a / (6.0 * tau);
        let (mut lo, mut hi) = (1e-6, 10.0);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let m1 = hi - g * (hi - lo);
            let m2 = lo + g * (hi - lo);
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let best = 0.5 * (lo + hi);
        let sol = equilibrium_unit(1, 1.0).unwrap();
        let via_c_tau = c_tau(tau, &sol).unwrap() * sol.eta_star.support_radius();
        assert!((best - via_c_tau).abs() < 1e-8);
        let tabulated = tabulated_ball_radius(1, 1.0, tau);
        assert_relative_eq!(tabulated, tau / 4.0, epsilon = 1e-14);
        assert!((best - tabulated).abs() > 0.1);
    }

    #[test]
    fn r_constants() {
        assert_relative_eq!(r_constant(3).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        let ratio = (ln_gamma(2.0) + ln_gamma(4.0) - ln_gamma(2.5) - ln_gamma(3.5)).exp();
        assert_relative_eq!(r_constant(4).unwrap(), 0.5 * ratio, epsilon = 1e-12);
        let values: Vec<f64> = (3..=10).map(|d| r_constant(d).unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
        assert!(r_constant(2).is_err());
    }

    #[test]
    fn sphere_potential_examples() {
        assert_relative_eq!(sphere_potential(&[0.0; 3], 2.0, 1.5, 3).unwrap(), 2f64.powf(1.5), epsilon = 1e-14);
        assert_relative_eq!(sphere_potential(&[1.0, 0.0, 0.0], 1.0, 1.0, 3).unwrap(), 4.0 / 3.0, epsilon = 1e-14);
        assert_relative_eq!(sphere_potential(&[0.0, 2.0, 0.0], 1.0, 1.0, 3).unwrap(), 13.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn sphere_potential_continuous_at_radius() {
        for d in [2, 3, 4, 5] {
            for r in [0.5, 1.0, 1.5] {
                let radius = 1.3;
                let mut x = vec![0.0; d];
                x[0] = radius;
                let at = sphere_potential(&x, radius, r, d).unwrap();
                x[0] = radius * (1.0 - 1e-13);
                let inside = sphere_potential(&x, radius, r, d).unwrap();
                x[0] = radius * (1.0 + 1e-13);
                let outside = sphere_potential(&x, radius, r, d).unwrap();
                assert!((at - inside).abs() < 1e-12 && (at - outside).abs() < 1e-12, "d={d} r={r}");
            }
        }
    }

    #[test]
    fn shell_averages_agree_with_angular_integral() {
        for d in [2, 3, 4] {
            for r in [0.5, 1.0, 1.7] {
                for (rho, t) in [(0.3, 1.0), (0.95, 1.0), (1.0, 1.0), (2.0, 0.5)] {
                    let direct = shell_average(d, r, rho, t).unwrap();
                    let angular = angular_sphere_potential(d, r, rho, t);
                    assert!((direct - angular).abs() < 1e-10, "d={d} r={r} rho={rho} t={t}");
                }
            }
        }
    }

    #[test]
    fn interval_potential_matches_integral() {
        let h = 1.2;
        for x in [0.0f64, 0.5, 1.2, 2.0] {
            for r in [0.5, 1.0, 1.5] {
                let direct = brute_force_integral(|y| (x - y).abs().powf(r), -h, x.min(h))
                    + if x < h { brute_force_integral(|y| (x - y).abs().powf(r), x, h) } else { 0.0 };
                assert_relative_eq!(interval_potential(x, h, r), direct / (2.0 * h), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn optimality_sphere_case() {
        let sol = equilibrium_unit(3, 1.0).unwrap();
        let c = c_tau(1.0, &sol).unwrap();
        let mut rng = crate::rng::seeded(2);
        let sphere = sample(&EquilibriumMeasure::UniformSphere { d: 3, radius: c }, 100, rng.random());
        let mut probes: Vec<Vec<f64>> = sphere.iter().map(|(x, _)| x.to_vec()).collect();
        probes.extend((0..200).map(|k| vec![0.1 + (3.0 * c - 0.1) * k as f64 / 199.0, 0.0, 0.0]));
        let res = optimality_residual(1.0, 3, 1.0, &probes).unwrap();
        assert!(res.on_support_spread <= 1e-8);
        assert!(res.min_off_support_slack >= -1e-8);
    }

    #[test]
    fn optimality_interval_case() {
        let probes: Vec<Vec<f64>> = (0..41).map(|k| vec![-2.0 + 0.1 * k as f64]).collect();
        let res = optimality_residual(1.0, 1, 1.0, &probes).unwrap();
        assert!(res.on_support_spread < 1e-6);
        assert!(res.min_off_support_slack > -1e-12);
    }

    #[test]
    fn optimality_ball_case() {
        for (d, r) in [(2, 1.0), (1, 0.5), (2, 1.5)] {
            let sol = equilibrium_unit(d, r).unwrap();
            let radius = c_tau(0.5, &sol).unwrap() * sol.eta_star.support_radius();
            let probes: Vec<Vec<f64>> = (0..30)
                .map(|k| {
                    let mut x = vec![0.0; d];
                    x[0] = 2.0 * radius * k as f64 / 29.0;
                    x
                })
                .collect();
            let res = optimality_residual(0.5, d, r, &probes).unwrap();
            assert!(res.on_support_spread < 1e-7, "d={d} r={r}: {res:?}");
            assert!(res.min_off_support_slack > -1e-9, "d={d} r={r}: {res:?}");
        }
    }
}
