//! Closed-form steepest descent flows: the interaction flow from `δ₀`, its
//! delayed family, the 1D discrepancy flow toward a Dirac, the one-particle
//! flow, comparison curves, and flows restricted to low-dimensional families.

use crate::equilibrium::EquilibriumSolution;
use crate::error::{Error, Result};
use crate::kernels::{wendland, wendland_derivative, Kernel};
use crate::measures::{node, DiscreteMeasure, QuantileGrid, ScalingFamilyPoint};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Scale `α_t = (−t r (2−r) E)^{1/(2−r)}` of the interaction flow.
pub fn interaction_scale(t: f64, r: f64, energy: f64) -> f64 {
    (-t * r * (2.0 - r) * energy).powf(1.0 / (2.0 - r))
}

/// `γ(t) = (α_t Id)_# η*`, the steepest descent flow of the interaction energy
/// from `δ₀`.
pub fn interaction_flow_eval(sol: &EquilibriumSolution, t: f64) -> Result<ScalingFamilyPoint> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("negative time {t}")));
    }
    if sol.r < 1.0 && t == 0.0 {
        return Err(Error::NoSteepestDescent { r: sol.r });
    }
    ScalingFamilyPoint::centered(sol.eta_star.clone(), interaction_scale(t, sol.r, sol.energy))
}

/// Position of a single particle flowing toward `δ_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticlePosition {
    pub position: Vec<f64>,
    pub reached: bool,
}

/// Arrival time `‖q − p‖^{2−r} / (r(2−r))` of the one-particle flow.
pub fn arrival_time(p: &[f64], q: &[f64], r: f64) -> f64 {
    let dist = crate::kernels::distance(p, q);
    dist.powf(2.0 - r) / (r * (2.0 - r))
}

/// `x(t) = q − (q−p)/‖q−p‖ · (‖q−p‖^{2−r} − r(2−r)t)^{1/(2−r)}` before the
/// arrival time, `q` afterwards.
pub fn one_particle_eval(p: &[f64], q: &[f64], r: f64, t: f64) -> Result<ParticlePosition> {
    if !(r > 1.0 && r < 2.0) {
        return Err(Error::Unsupported(format!("one-particle flow needs r ∈ (1, 2), got {r}")));
    }
    if p.len() != q.len() {
        return Err(Error::Dimension {
            expected: p.len(),
            got: q.len(),
        });
    }
    let dist = crate::kernels::distance(p, q);
    if dist == 0.0 {
        return Err(Error::Domain("start and target coincide".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("negative time {t}")));
    }
    if t == 0.0 {
        return Ok(ParticlePosition {
            position: p.to_vec(),
            reached: false,
        });
    }
    let remaining = dist.powf(2.0 - r) - r * (2.0 - r) * t;
    if remaining <= 0.0 {
        return Ok(ParticlePosition {
            position: q.to_vec(),
            reached: true,
        });
    }
    let radius = remaining.powf(1.0 / (2.0 - r));
    let position = p.iter().zip(q).map(|(pi, qi)| qi - (qi - pi) / dist * radius).collect();
    Ok(ParticlePosition {
        position,
        reached: false,
    })
}

/// Flow of the distance-kernel discrepancy to `δ_q` in quantile space:
/// `f_t(s) = min(Q(s) + 2st, q)` below `q`, `max(Q(s) + 2st − 2t, q)` above,
/// and `q` where `Q(s) = q`.
pub fn disc1d_flow_eval(q0: &QuantileGrid, q: f64, t: f64) -> Result<QuantileGrid> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("negative time {t}")));
    }
    let values = q0
        .nodes()
        .zip(q0.values())
        .map(|(s, &x)| {
            if x < q {
                (x + 2.0 * s * t).min(q)
            } else if x > q {
                (x + 2.0 * s * t - 2.0 * t).max(q)
            } else {
                q
            }
        })
        .collect();
    QuantileGrid::new(values)
}

/// `((t−1)e₁ − E t Id)_# η*`: translation of `η*` from `−e₁` combined with the
/// interaction flow, for the distance kernel.
pub fn geodesic_comparison_eval(sol: &EquilibriumSolution, t: f64) -> Result<ScalingFamilyPoint> {
    if sol.r != 1.0 {
        return Err(Error::Unsupported(format!("comparison geodesic is defined for r = 1, got {}", sol.r)));
    }
    let mut shift = vec![0.0; sol.d];
    shift[0] = t - 1.0;
    ScalingFamilyPoint::new(sol.eta_star.clone(), -sol.energy * t, shift)
}

/// `(α_t Id + x(t))_# η*` with `x(t)` the one-particle flow from `p` to `q`.
pub fn centered_composite_eval(sol: &EquilibriumSolution, p: &[f64], q: &[f64], t: f64) -> Result<ScalingFamilyPoint> {
    if p.len() != sol.d {
        return Err(Error::Dimension {
            expected: sol.d,
            got: p.len(),
        });
    }
    let center = one_particle_eval(p, q, sol.r, t)?;
    ScalingFamilyPoint::new(sol.eta_star.clone(), interaction_scale(t, sol.r, sol.energy), center.position)
}

/// Flow restricted to Dirac measures: `x₀ ± t` moving toward `q`, absorbed
/// there.
pub fn dirac_line_flow(x0: f64, q: f64, t: f64) -> f64 {
    if x0 < q {
        (x0 + t).min(q)
    } else {
        (x0 - t).max(q)
    }
}

/// `(1−w) δ_{−1+e^{−t}} + w δ_{1−e^{−t}}`; zero-weight atoms are dropped.
pub fn double_well_split_eval(w: f64, t: f64) -> Result<DiscreteMeasure> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("split weight {w} outside [0, 1]")));
    }
    let x = 1.0 - (-t).exp();
    Ok(DiscreteMeasure::from_flat(1, vec![-x, x], vec![1.0 - w, w])?.pruned())
}

/// Point `U[m − √3σ, m + √3σ]` of the mean/deviation plane; `σ` is the
/// standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MSigmaState {
    pub m: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MSigmaGradient {
    Unique([f64; 2]),
    /// At `σ = 0` with `m` on a target atom: the `m`-subdifferential is the
    /// interval, and `sigma` is the one-sided derivative in `σ`.
    SetValued { m: (f64, f64), sigma: f64 },
}

impl MSigmaGradient {
    /// Minimal-norm element in `m`, one-sided derivative in `σ`.
    pub fn descent_selection(&self) -> [f64; 2] {
        match *self {
            Self::Unique(g) => g,
            Self::SetValued { m: (lo, hi), sigma } => [0.0f64.clamp(lo, hi), sigma],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MSigmaEval {
    pub value: f64,
    pub grad: MSigmaGradient,
}

/// Discrepancy between `U[m − √3σ, m + √3σ]` and the atomic measure `ν` with
/// equal weights on the grid values, together with its gradient.
///
/// For the distance kernel every term has a closed form: the interaction
/// energy of the uniform law is `−σ/√3`, the target term is the midpoint sum
/// of the quantile formula, and `E|U − c|` is piecewise quadratic over `σ`.
/// The Wendland kernel replaces the uniform law by `n` quantile atoms and sums
/// exactly.
pub fn msigma_value_and_grad(state: MSigmaState, kernel: &Kernel, target: &QuantileGrid) -> Result<MSigmaEval> {
    if !(state.sigma >= 0.0) {
        return Err(Error::Domain(format!("σ = {} must be nonnegative", state.sigma)));
    }
    match *kernel {
        Kernel::Riesz { r: 1.0 } => Ok(msigma_distance(state, target)),
        Kernel::Wendland => Ok(msigma_wendland(state, target)),
        Kernel::Riesz { r } => Err(Error::Unsupported(format!(
            "mean/deviation landscape is implemented for r = 1, got {r}"
        ))),
    }
}

fn msigma_distance(state: MSigmaState, target: &QuantileGrid) -> MSigmaEval {
    let MSigmaState { m, sigma } = state;
    let n = target.n() as f64;
    let self_target: f64 = target.nodes().zip(target.values()).map(|(s, c)| (1.0 - 2.0 * s) * c).sum::<f64>() / n;
    let half = SQRT3 * sigma;
    let (a, b) = (m - half, m + half);
    let len = b - a;
    let mut cross = 0.0;
    let mut dm = 0.0;
    let mut dsigma = 0.0;
    let mut ties = 0usize;
    for &c in target.values() {
        if sigma > 0.0 && a <= c && c <= b {
            let num = (c - a).powi(2) + (b - c).powi(2);
            cross += num / (2.0 * len);
            dm += (m - c) / half;
            dsigma += SQRT3 - SQRT3 * num / (len * len);
        } else {
            cross += (m - c).abs();
            if m == c {
                ties += 1;
            } else {
                dm += (m - c).signum();
            }
        }
    }
    let value = -sigma / SQRT3 + self_target + cross / n;
    let grad = if ties == 0 {
        MSigmaGradient::Unique([dm / n, -1.0 / SQRT3 + dsigma / n])
    } else {
        let spread = ties as f64 / n;
        MSigmaGradient::SetValued {
            m: (dm / n - spread, dm / n + spread),
            sigma: -1.0 / SQRT3 + spread * SQRT3 / 2.0,
        }
    };
    MSigmaEval { value, grad }
}

fn msigma_wendland(state: MSigmaState, target: &QuantileGrid) -> MSigmaEval {
    let MSigmaState { m, sigma } = state;
    let n = target.n();
    let nf = n as f64;
    // ∂x_k/∂σ for the quantile atoms x_k = m + √3σ(2s_k − 1)
    let spread: Vec<f64> = (0..n).map(|k| SQRT3 * (2.0 * node(k, n) - 1.0)).collect();
    let atoms: Vec<f64> = spread.iter().map(|u| m + sigma * u).collect();
    let ys = target.values();
    let mut self_mu = 0.0;
    let mut self_mu_dsigma = 0.0;
    let mut self_nu = 0.0;
    let mut cross = 0.0;
    let mut cross_dm = 0.0;
    let mut cross_dsigma = 0.0;
    for k in 0..n {
        for l in 0..n {
            let diff = atoms[k] - atoms[l];
            self_mu += wendland(diff);
            self_mu_dsigma += wendland_derivative(diff) * diff.signum() * (spread[k] - spread[l]);
            self_nu += wendland(ys[k] - ys[l]);
            let dc = atoms[k] - ys[l];
            cross += wendland(dc);
            let slope = wendland_derivative(dc) * dc.signum();
            cross_dm += slope;
            cross_dsigma += slope * spread[k];
        }
    }
    let n2 = nf * nf;
    let value = 0.5 * self_mu / n2 - cross / n2 + 0.5 * self_nu / n2;
    let grad = [-cross_dm / n2, 0.5 * self_mu_dsigma / n2 - cross_dsigma / n2];
    MSigmaEval {
        value,
        grad: MSigmaGradient::Unique(grad),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MSigmaStep {
    pub t: f64,
    pub state: MSigmaState,
    pub value: f64,
}

/// Explicit Euler on `(ṁ, σ̇) = −∇F(m, σ)` with `σ` clamped at zero. At
/// nonsmooth points the minimal-norm subgradient selection is used.
pub fn msigma_flow(
    initial: MSigmaState,
    kernel: &Kernel,
    target: &QuantileGrid,
    dt: f64,
    steps: usize,
) -> Result<Vec<MSigmaStep>> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step {dt} must be positive")));
    }
    let mut state = initial;
    let mut out = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let eval = msigma_value_and_grad(state, kernel, target)?;
        out.push(MSigmaStep {
            t: step as f64 * dt,
            state,
            value: eval.value,
        });
        if step == steps {
            break;
        }
        let [gm, gs] = eval.grad.descent_selection();
        state = MSigmaState {
            m: state.m - dt * gm,
            sigma: (state.sigma - dt * gs).max(0.0),
        };
    }
    Ok(out)
}

/// The analytic curves as a single evaluable type.
#[derive(Debug, Clone, PartialEq)]
pub enum FlowCurve {
    InteractionFlow { sol: EquilibriumSolution },
    /// Stays at `δ₀` until `t0`, then follows the interaction flow.
    DelayedInteractionFlow { t0: f64, sol: EquilibriumSolution },
    OneParticleFlow { p: Vec<f64>, q: Vec<f64>, r: f64 },
    Disc1DFlow { q0: QuantileGrid, q: f64 },
    GeodesicComparison { sol: EquilibriumSolution },
    CenteredComposite { sol: EquilibriumSolution, p: Vec<f64>, q: Vec<f64> },
    DoubleWellSplit { w: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlowState {
    Scaling(ScalingFamilyPoint),
    Quantile(QuantileGrid),
    Atomic(DiscreteMeasure),
    Particle(ParticlePosition),
}

impl FlowCurve {
    pub fn eval(&self, t: f64) -> Result<FlowState> {
        Ok(match self {
            Self::InteractionFlow { sol } => FlowState::Scaling(interaction_flow_eval(sol, t)?),
            Self::DelayedInteractionFlow { t0, sol } => {
                if t <= *t0 {
                    FlowState::Scaling(ScalingFamilyPoint::centered(sol.eta_star.clone(), 0.0)?)
                } else {
                    FlowState::Scaling(interaction_flow_eval(sol, t - t0)?)
                }
            }
            Self::OneParticleFlow { p, q, r } => FlowState::Particle(one_particle_eval(p, q, *r, t)?),
            Self::Disc1DFlow { q0, q } => FlowState::Quantile(disc1d_flow_eval(q0, *q, t)?),
            Self::GeodesicComparison { sol } => FlowState::Scaling(geodesic_comparison_eval(sol, t)?),
            Self::CenteredComposite { sol, p, q } => FlowState::Scaling(centered_composite_eval(sol, p, q, t)?),
            Self::DoubleWellSplit { w } => FlowState::Atomic(double_well_split_eval(*w, t)?),
        })
    }
}
