//! Explicit Euler particle flows of the Riesz discrepancy toward a fixed
//! atomic target.
//!
//! The objective is `F_M(x) = −(1/2M²) Σᵢ≠ⱼ ‖xᵢ − xⱼ‖ʳ + (1/M) Σᵢ Σₖ wₖ ‖xᵢ − yₖ‖ʳ`
//! and each step moves every particle by `−τ⁽ⁿ⁾ M ∇ₓᵢ F_M`, which makes the
//! particle system an approximation of the Wasserstein flow of `D²(·, ν)`.

use crate::equilibrium::equilibrium_unit;
use crate::error::{Error, Result};
use crate::kernels::{distance, interaction_energy, particle_objective_flat, Kernel};
use crate::measures::{DiscreteMeasure, ScalingFamilyPoint};
use crate::rng::seeded;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub enum InitKind {
    /// Independent uniform coordinates in `center ± half_width`.
    Cube { half_width: f64 },
    /// Samples of the unit equilibrium measure scaled to support radius
    /// `radius` around `center`: the known steepest descent direction at a
    /// Dirac, taken for a tiny time.
    WarmStart { radius: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub m: usize,
    pub r: f64,
    pub target: DiscreteMeasure,
    pub tau0: f64,
    pub tau_max: f64,
    pub center: Vec<f64>,
    pub init: InitKind,
    pub seed: u64,
    pub steps: usize,
    /// Snapshot period in steps; `0` keeps only the first and last state.
    pub snapshot_every: usize,
}

impl SimConfig {
    /// Ramped schedule `τ0 = 1/(10M)`, `τ_max = 10/M` and a cube of
    /// half-width `1e−9`.
    pub fn new(m: usize, r: f64, target: DiscreteMeasure, center: Vec<f64>, steps: usize) -> Self {
        let mf = m.max(1) as f64;
        Self {
            m,
            r,
            target,
            tau0: 1.0 / (10.0 * mf),
            tau_max: 10.0 / mf,
            center,
            init: InitKind::Cube { half_width: 1e-9 },
            seed: 0,
            steps,
            snapshot_every: 0,
        }
    }

    /// Constant step size `tau`.
    pub fn fixed_step(mut self, tau: f64) -> Self {
        self.tau0 = tau;
        self.tau_max = tau;
        self
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Domain("particle count must be positive".into()));
        }
        if !(self.tau0 > 0.0 && self.tau_max > 0.0) {
            return Err(Error::Domain(format!(
                "step sizes must be positive, got τ0 = {}, τ_max = {}",
                self.tau0, self.tau_max
            )));
        }
        if !(1.0..2.0).contains(&self.r) {
            return Err(Error::Unsupported(format!("particle flows need r ∈ [1, 2), got {}", self.r)));
        }
        if self.center.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: self.center.len(),
            });
        }
        Ok(())
    }

    /// `τ⁽ⁿ⁾ = min((n+1) τ0, τ_max)` for the step leaving `x⁽ⁿ⁾`.
    pub fn step_size(&self, n: usize) -> f64 {
        ((n + 1) as f64 * self.tau0).min(self.tau_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    pub dim: usize,
    /// Row-major `M × d` coordinates.
    pub positions: Vec<f64>,
    pub step: usize,
    /// `Σ τ⁽ᵏ⁾` over the steps taken.
    pub time: f64,
}

impl ParticleState {
    pub fn len(&self) -> usize {
        self.positions.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_measure(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::uniform(self.dim, self.positions.clone())
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for i in 0..self.len() {
            for (acc, x) in mean.iter_mut().zip(self.point(i)) {
                *acc += x;
            }
        }
        let n = self.len() as f64;
        mean.iter_mut().for_each(|v| *v /= n);
        mean
    }
}

pub fn init_near_dirac(cfg: &SimConfig) -> Result<ParticleState> {
    cfg.validate()?;
    let d = cfg.dim();
    let positions = match cfg.init {
        InitKind::Cube { half_width } => {
            let mut rng = seeded(cfg.seed);
            (0..cfg.m * d)
                .map(|k| cfg.center[k % d] + half_width * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        }
        InitKind::WarmStart { radius } => {
            let sol = equilibrium_unit(d, cfg.r)?;
            let scale = radius / sol.eta_star.support_radius();
            let point = ScalingFamilyPoint::new(sol.eta_star, scale, cfg.center.clone())?;
            point.sample(cfg.m, cfg.seed).points_flat().to_vec()
        }
    };
    Ok(ParticleState {
        dim: d,
        positions,
        step: 0,
        time: 0.0,
    })
}

/// Diagnostics of one Euler step, evaluated at the state the step leaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub tau: f64,
    /// `F_M(x⁽ⁿ⁾)`.
    pub objective: f64,
    /// `‖M ∇F_M(x⁽ⁿ⁾)‖²` summed over all particles.
    pub velocity_norm2: f64,
}

/// `x⁽ⁿ⁺¹⁾ = x⁽ⁿ⁾ − τ⁽ⁿ⁾ M ∇F_M(x⁽ⁿ⁾)`.
pub fn euler_step(state: &ParticleState, cfg: &SimConfig) -> Result<(ParticleState, StepReport)> {
    let (objective, grad) = particle_objective_flat(state.dim, &state.positions, &cfg.target, cfg.r)?;
    Ok(apply_step(state, objective, &grad, cfg))
}

fn apply_step(state: &ParticleState, objective: f64, grad: &[f64], cfg: &SimConfig) -> (ParticleState, StepReport) {
    let tau = cfg.step_size(state.step);
    let mf = state.len() as f64;
    let mut velocity_norm2 = 0.0;
    let positions = state
        .positions
        .iter()
        .zip(grad)
        .map(|(x, g)| {
            let v = mf * g;
            velocity_norm2 += v * v;
            x - tau * v
        })
        .collect();
    let next = ParticleState {
        dim: state.dim,
        positions,
        step: state.step + 1,
        time: state.time + tau,
    };
    let report = StepReport {
        tau,
        objective,
        velocity_norm2,
    };
    (next, report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub step: usize,
    pub model_time: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    pub snapshots: Vec<ParticleState>,
    pub energy: Vec<EnergyRecord>,
    /// Largest observed `(D_{n+1} − D_n) / (2 τ⁽ⁿ⁾ ‖M∇F_M‖²)`; below one when
    /// the slack rule holds.
    pub worst_slack_ratio: f64,
}

impl SimLog {
    pub fn last(&self) -> &ParticleState {
        self.snapshots.last().expect("log holds the initial state")
    }

    pub fn initial_discrepancy(&self) -> f64 {
        self.energy[0].discrepancy
    }

    pub fn final_discrepancy(&self) -> f64 {
        self.energy.last().expect("log holds the initial energy").discrepancy
    }
}

/// Runs `cfg.steps` Euler steps from `init_near_dirac(cfg)`.
pub fn run(cfg: &SimConfig) -> Result<SimLog> {
    run_from(init_near_dirac(cfg)?, cfg)
}

/// Runs `cfg.steps` Euler steps from `state`. The discrepancy is checked after
/// every step: an increase beyond `2 τ⁽ⁿ⁾ ‖M∇F_M(x⁽ⁿ⁾)‖²` fails the run.
pub fn run_from(state: ParticleState, cfg: &SimConfig) -> Result<SimLog> {
    cfg.validate()?;
    if state.dim != cfg.dim() || state.len() != cfg.m {
        return Err(Error::Dimension {
            expected: cfg.m * cfg.dim(),
            got: state.positions.len(),
        });
    }
    let target_self = interaction_energy(&Kernel::riesz(cfg.r)?, &cfg.target)?;
    let first = state.step;
    let mut snapshots = Vec::new();
    let mut energy = Vec::new();
    let mut worst_slack_ratio = f64::NEG_INFINITY;
    let mut current = state;
    let mut previous: Option<StepReport> = None;
    loop {
        let (objective, grad) = particle_objective_flat(current.dim, &current.positions, &cfg.target, cfg.r)?;
        if let Some(prev) = previous {
            let increase = objective - prev.objective;
            let allowance = 2.0 * prev.tau * prev.velocity_norm2;
            let ratio = if allowance > 0.0 {
                increase / allowance
            } else if increase <= 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst_slack_ratio = worst_slack_ratio.max(ratio);
            if ratio > 1.0 {
                return Err(Error::SlackViolation {
                    step: current.step,
                    increase,
                    allowance,
                });
            }
        }
        let done = current.step - first == cfg.steps;
        let periodic = cfg.snapshot_every > 0 && current.step.is_multiple_of(cfg.snapshot_every);
        if current.step == first || done || periodic {
            energy.push(EnergyRecord {
                step: current.step,
                model_time: current.time,
                discrepancy: objective + target_self,
            });
            snapshots.push(current.clone());
        }
        if done {
            break;
        }
        let (next, report) = apply_step(&current, objective, &grad, cfg);
        previous = Some(report);
        current = next;
    }
    Ok(SimLog {
        snapshots,
        energy,
        worst_slack_ratio,
    })
}

/// The `quantile` of the particle distances `‖xᵢ − center‖` (nearest rank).
pub fn support_radius(state: &ParticleState, center: &[f64], quantile: f64) -> Result<f64> {
    if center.len() != state.dim {
        return Err(Error::Dimension {
            expected: state.dim,
            got: center.len(),
        });
    }
    if !(0.0..=1.0).contains(&quantile) {
        return Err(Error::Domain(format!("quantile {quantile} outside [0, 1]")));
    }
    if state.is_empty() {
        return Ok(0.0);
    }
    let mut dists: Vec<f64> = (0..state.len()).map(|i| distance(state.point(i), center)).collect();
    dists.sort_by(f64::total_cmp);
    let rank = ((quantile * dists.len() as f64).ceil() as usize).clamp(1, dists.len());
    Ok(dists[rank - 1])
}
