use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use super::DiscreteMeasure;
use crate::equilibrium::EquilibriumMeasure;
use crate::rng::seeded;
#[cfg(test)]
use crate::measures::SecondMoment;

/// Draws `count` i.i.d. samples of `base` with equal weights.
///
/// Sphere samples are normalized Gaussians. The `d = 1` interval and the
/// `d = 2` arcsine ball are coordinate projections of samples on `S²`, which
/// are exactly uniform and arcsine distributed. Other balls draw the radius
/// from its Beta law `ρ²/s² ~ Beta(d/2, α+1)` and an independent direction.
pub fn sample(base: &EquilibriumMeasure, count: usize, seed: u64) -> DiscreteMeasure {
    let mut rng = seeded(seed);
    let d = base.dim();
    let mut points = Vec::with_capacity(count * d);
    match base {
        EquilibriumMeasure::UniformSphere { radius, .. } => {
            for _ in 0..count {
                let dir = gaussian_direction(&mut rng, d);
                points.extend(dir.iter().map(|u| radius * u));
            }
        }
        EquilibriumMeasure::UniformInterval { halfwidth } => {
            for _ in 0..count {
                points.push(halfwidth * gaussian_direction(&mut rng, 3)[0]);
            }
        }
        EquilibriumMeasure::BetaBall { d: 2, s, .. } if base.alpha() == -0.5 => {
            for _ in 0..count {
                let u = gaussian_direction(&mut rng, 3);
                points.extend([s * u[0], s * u[1]]);
            }
        }
        EquilibriumMeasure::BetaBall { s, .. } => {
            let radial = Beta::new(d as f64 / 2.0, base.alpha() + 1.0).expect("valid Beta parameters");
            for _ in 0..count {
                let rho = s * radial.sample(&mut rng).sqrt();
                if d == 1 {
                    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                    points.push(sign * rho);
                } else {
                    let dir = gaussian_direction(&mut rng, d);
                    points.extend(dir.iter().map(|u| rho * u));
                }
            }
        }
    }
    DiscreteMeasure::uniform(d, points).expect("sampled coordinates are finite")
}

fn gaussian_direction<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}
