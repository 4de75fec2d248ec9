//! Explicit Euler flows in quantile space with projection onto the monotone
//! cone after every step.

use crate::error::{Error, Result};
use crate::isotonic::isotonic_project;
use crate::measures::QuantileGrid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow1DConfig {
    pub dt: f64,
    pub steps: usize,
    /// Keep every `record_every`-th grid (the initial grid is always kept).
    pub record_every: usize,
}

impl Flow1DConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Domain(format!("time step {} must be positive", self.dt)));
        }
        if self.record_every == 0 {
            return Err(Error::Domain("record_every must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flow1DFrame {
    pub step: usize,
    pub time: f64,
    pub grid: QuantileGrid,
}

/// `#{t : b_t < x} − #{t : b_t > x}` for sorted `b`.
fn sign_count(b: &[f64], x: f64) -> f64 {
    let below = b.partition_point(|&v| v < x);
    let not_above = b.partition_point(|&v| v <= x);
    below as f64 - (b.len() - not_above) as f64
}

/// Component `k`: `(1 − 2s_k) + (1/n) Σ_t sgn(q_k − Q_ν(s_t))` with
/// `sgn(0) = 0`.
pub fn subgradient_fnu(q: &QuantileGrid, q_nu: &QuantileGrid) -> Result<Vec<f64>> {
    if q.n() != q_nu.n() {
        return Err(Error::Size {
            left: q.n(),
            right: q_nu.n(),
        });
    }
    let n = q.n() as f64;
    Ok(q
        .nodes()
        .zip(q.values())
        .map(|(s, &x)| (1.0 - 2.0 * s) + sign_count(q_nu.values(), x) / n)
        .collect())
}

/// Subgradient of the interaction part `∫(1−2s) Q ds`, which on a sorted grid
/// equals `(1/n) Σ_t sgn(q_k − q_t)` with ties ordered by index, i.e. `2s_k − 1`
/// is the repulsive velocity.
pub fn interaction_velocity(q: &QuantileGrid) -> Vec<f64> {
    q.nodes().map(|s| 2.0 * s - 1.0).collect()
}

fn run<F>(q0: &QuantileGrid, cfg: &Flow1DConfig, mut velocity: F) -> Result<Vec<Flow1DFrame>>
where
    F: FnMut(&QuantileGrid) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let mut frames = vec![Flow1DFrame {
        step: 0,
        time: 0.0,
        grid: q0.clone(),
    }];
    let mut q = q0.clone();
    for step in 1..=cfg.steps {
        let v = velocity(&q)?;
        let moved: Vec<f64> = q.values().iter().zip(&v).map(|(x, vx)| x + cfg.dt * vx).collect();
        q = QuantileGrid::new(isotonic_project(&moved))?;
        if step % cfg.record_every == 0 || step == cfg.steps {
            frames.push(Flow1DFrame {
                step,
                time: step as f64 * cfg.dt,
                grid: q.clone(),
            });
        }
    }
    Ok(frames)
}

/// Euler steps `q ← Π(q − dt·∂F_ν(q))` for the distance-kernel discrepancy to
/// `ν`, where `Π` is the isotonic projection.
pub fn euler_flow(q0: &QuantileGrid, q_nu: &QuantileGrid, cfg: &Flow1DConfig) -> Result<Vec<Flow1DFrame>> {
    if q0.n() != q_nu.n() {
        return Err(Error::Size {
            left: q0.n(),
            right: q_nu.n(),
        });
    }
    run(q0, cfg, |q| {
        Ok(subgradient_fnu(q, q_nu)?.into_iter().map(|g| -g).collect())
    })
}

/// Euler steps for the interaction energy alone.
pub fn interaction_flow_1d(q0: &QuantileGrid, cfg: &Flow1DConfig) -> Result<Vec<Flow1DFrame>> {
    run(q0, cfg, |q| Ok(interaction_velocity(q)))
}
