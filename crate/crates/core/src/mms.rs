//! Minimizing movement scheme for the interaction energy started at `δ₀`.
//!
//! Every iterate is a rescaled equilibrium measure
//! `μⁿ = ((−t_n r E)^{1/(2−r)} Id)_# η*`, so the scheme reduces to the scalar
//! recursion `t_n = root of t ↦ t_{n−1}^{1/(2−r)} t^{(1−r)/(2−r)} − t + τ`.

use crate::equilibrium::{EquilibriumMeasure, EquilibriumSolution};
use crate::error::{Error, Result};
use crate::measures::ScalingFamilyPoint;

/// Doublings allowed when the initial bracket misses the root.
const MAX_EXPANSIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolverConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootSolverConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_iter: 100,
        }
    }
}

/// `h_τ(t, s) = s^{1/(2−r)} t^{(1−r)/(2−r)} − t + τ`.
pub fn h_tau_eval(t: f64, s: f64, tau: f64, r: f64) -> f64 {
    let p = 1.0 / (2.0 - r);
    s.powf(p) * t.powf((1.0 - r) * p) - t + tau
}

fn h_and_slope(t: f64, a: f64, beta: f64, tau: f64) -> (f64, f64) {
    let tb = t.powf(beta);
    (a * tb - t + tau, a * beta * tb / t - 1.0)
}

/// Unique positive zero of `t ↦ h_τ(t, s)`.
///
/// Safeguarded Newton inside the bracket `[s + min(1, 2−r)τ, s + max(1, 2−r)τ]`
/// (slightly widened); Newton steps leaving the bracket are replaced by
/// bisection.
pub fn solve_next_time(s: f64, tau: f64, r: f64, cfg: &RootSolverConfig) -> Result<f64> {
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::Domain(format!("Riesz exponent {r} outside (0, 2)")));
    }
    if !(tau > 0.0) || !(s >= 0.0) {
        return Err(Error::Domain(format!("need τ > 0 and s ≥ 0, got τ={tau}, s={s}")));
    }
    if r == 1.0 {
        return Ok(s + tau);
    }
    if s == 0.0 {
        return Ok(tau);
    }
    let a = s.powf(1.0 / (2.0 - r));
    let beta = (1.0 - r) / (2.0 - r);
    let h = |t: f64| h_and_slope(t, a, beta, tau);
    let eps = 1e-3;
    let mut lo = s + (2.0 - r).min(1.0) * tau * (1.0 - eps);
    let mut hi = s + (2.0 - r).max(1.0) * tau * (1.0 + eps);
    let mut expansions = 0;
    while h(lo).0 <= 0.0 {
        lo *= 0.5;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::SolverFailure {
                iterations: expansions,
                reason: "lower bracket expansion".into(),
            });
        }
    }
    while h(hi).0 >= 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_EXPANSIONS {
            return Err(Error::SolverFailure {
                iterations: expansions,
                reason: "upper bracket expansion".into(),
            });
        }
    }
    // h is positive left of the root and negative right of it
    let mut t = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iter {
        let (value, slope) = h(t);
        if value.abs() <= cfg.abs_tol * (1.0 + t) {
            return Ok(t);
        }
        if value > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        if hi - lo <= cfg.rel_tol * 1e-4 * t {
            return Ok(t);
        }
        let newton = t - value / slope;
        t = if slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::SolverFailure {
        iterations: cfg.max_iter,
        reason: format!("no convergence for s={s}, τ={tau}, r={r}"),
    })
}

/// Solved times `t_{τ,0} = 0, t_{τ,1}, …` of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct MmsTrajectory {
    pub tau: f64,
    pub r: f64,
    pub energy: f64,
    pub base: EquilibriumMeasure,
    pub times: Vec<f64>,
}

impl MmsTrajectory {
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    /// `t_{τ,n}^{1/(2−r)}`, the step-function value on `((n−1)τ, nτ]`.
    pub fn f_value(&self, n: usize) -> f64 {
        self.times[n].powf(1.0 / (2.0 - self.r))
    }

    /// The iterate `μⁿ` as a point of the scaling family of `η*`.
    pub fn measure_at(&self, n: usize) -> Result<ScalingFamilyPoint> {
        let t = *self.times.get(n).ok_or_else(|| {
            Error::Range(format!("step {n} beyond trajectory of {} steps", self.steps()))
        })?;
        let scale = (-t * self.r * self.energy).powf(1.0 / (2.0 - self.r));
        ScalingFamilyPoint::centered(self.base.clone(), scale)
    }

    /// Index `n` with `t ∈ ((n−1)τ, nτ]`, and 0 at `t = 0`.
    pub fn step_index(&self, t: f64) -> Result<usize> {
        if t < 0.0 {
            return Err(Error::Range(format!("negative time {t}")));
        }
        let n = (t / self.tau).ceil() as usize;
        // guard against t/τ rounding just above an integer
        let n = if n > 0 && ((n - 1) as f64) * self.tau >= t { n - 1 } else { n };
        if n > self.steps() {
            return Err(Error::Range(format!(
                "time {t} beyond trajectory end {}",
                self.steps() as f64 * self.tau
            )));
        }
        Ok(n)
    }

    /// Exact `sup_{t ∈ [0, T]} |f_τ(t) − f(t)|`. On each step interval `f_τ`
    /// is constant and `f` increasing, so the supremum sits at an endpoint.
    pub fn sup_error(&self, horizon: f64) -> Result<f64> {
        let last = self.step_index(horizon)?;
        let mut sup: f64 = 0.0;
        for n in 1..=last {
            let c = self.f_value(n);
            let left = limit_curve((n - 1) as f64 * self.tau, self.r);
            let right = limit_curve((n as f64 * self.tau).min(horizon), self.r);
            sup = sup.max((c - left).abs()).max((c - right).abs());
        }
        Ok(sup)
    }
}

/// `f(t) = ((2−r) t)^{1/(2−r)}`.
pub fn limit_curve(t: f64, r: f64) -> f64 {
    ((2.0 - r) * t).powf(1.0 / (2.0 - r))
}

/// Runs `n_steps` of the scheme. For `r = 1` the times are `nτ` exactly.
pub fn run_mms(tau: f64, r: f64, n_steps: usize, sol: &EquilibriumSolution) -> Result<MmsTrajectory> {
    if n_steps == 0 {
        return Err(Error::Domain("need at least one step".into()));
    }
    if sol.r != r {
        return Err(Error::Domain(format!("equilibrium solved for r={}, scheme run for r={r}", sol.r)));
    }
    let cfg = RootSolverConfig::default();
    let mut times = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    for n in 1..=n_steps {
        let t = if r == 1.0 {
            n as f64 * tau
        } else {
            solve_next_time(times[n - 1], tau, r, &cfg)?
        };
        times.push(t);
    }
    Ok(MmsTrajectory {
        tau,
        r,
        energy: sol.energy,
        base: sol.eta_star.clone(),
        times,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FCurves {
    pub t: Vec<f64>,
    pub f_tau: Vec<f64>,
    pub f_limit: Vec<f64>,
    pub sup_diff: f64,
}

/// Samples the step function `f_τ` and the limit `f` on a time grid.
pub fn f_curves(traj: &MmsTrajectory, t_grid: &[f64]) -> Result<FCurves> {
    let mut f_tau = Vec::with_capacity(t_grid.len());
    let mut f_limit = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        f_tau.push(traj.f_value(traj.step_index(t)?));
        f_limit.push(limit_curve(t, traj.r));
    }
    let sup_diff = f_tau.iter().zip(&f_limit).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(FCurves {
        t: t_grid.to_vec(),
        f_tau,
        f_limit,
        sup_diff,
    })
}

/// `τ|r−1| (1 + 1/(4−2r) + ln(n)/(4−2r))`.
pub fn error_bound(tau: f64, r: f64, n: usize) -> f64 {
    let denom = 4.0 - 2.0 * r;
    tau * (r - 1.0).abs() * (1.0 + 1.0 / denom + (n as f64).ln() / denom)
}

/// Whether `|t_{τ,n} − (2−r) n τ|` respects [`error_bound`] (up to rounding).
pub fn error_bound_check(traj: &MmsTrajectory, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Domain("bound is stated for n ≥ 1".into()));
    }
    let t = *traj
        .times
        .get(n)
        .ok_or_else(|| Error::Range(format!("step {n} beyond trajectory")))?;
    let lhs = (t - (2.0 - traj.r) * n as f64 * traj.tau).abs();
    Ok(lhs <= error_bound(traj.tau, traj.r, n) + 1e-12 * (1.0 + t))
}
