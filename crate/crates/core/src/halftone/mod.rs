//! Stippling: dots placed by discrepancy descent with the distance kernel
//! toward the measure whose density is the darkness of an image.

mod pgm;
mod svg;

pub use pgm::GrayImage;
pub use svg::{export_svg, Canvas};

use crate::error::{Error, Result};
use crate::kernels::{discrepancy, Kernel};
use crate::measures::DiscreteMeasure;
use crate::particles::{run, EnergyRecord, InitKind, SimConfig};

/// Pixel masses `∝ maxval − value` at pixel centers of `[0, w/h] × [0, 1]`,
/// `y` pointing up.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMeasure {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first; sums to one.
    pub weights: Vec<f64>,
    /// Row-major `(x, y)` pairs.
    pub positions: Vec<f64>,
}

impl PixelMeasure {
    pub fn from_image(img: &GrayImage) -> Result<Self> {
        let masses: Vec<f64> = img.pixels.iter().map(|&p| (img.maxval - p) as f64).collect();
        let total: f64 = masses.iter().sum();
        if total == 0.0 {
            return Err(Error::DegenerateImage);
        }
        let h = img.height as f64;
        let mut positions = Vec::with_capacity(2 * masses.len());
        for row in 0..img.height {
            for col in 0..img.width {
                positions.push((col as f64 + 0.5) / h);
                positions.push(1.0 - (row as f64 + 0.5) / h);
            }
        }
        Ok(Self {
            width: img.width,
            height: img.height,
            weights: masses.iter().map(|m| m / total).collect(),
            positions,
        })
    }

    pub fn aspect(&self) -> f64 {
        self.width as f64 / self.height as f64
    }

    pub fn pixel_size(&self) -> f64 {
        1.0 / self.height as f64
    }

    /// Aggregates `stride × stride` blocks into one atom at their mass
    /// centroid; blocks without mass are dropped.
    pub fn to_target(&self, stride: usize) -> Result<DiscreteMeasure> {
        if stride == 0 {
            return Err(Error::Domain("stride must be positive".into()));
        }
        let mut points = Vec::new();
        let mut masses = Vec::new();
        for by in (0..self.height).step_by(stride) {
            for bx in (0..self.width).step_by(stride) {
                let (mut mass, mut cx, mut cy) = (0.0, 0.0, 0.0);
                for row in by..(by + stride).min(self.height) {
                    for col in bx..(bx + stride).min(self.width) {
                        let k = row * self.width + col;
                        let w = self.weights[k];
                        mass += w;
                        cx += w * self.positions[2 * k];
                        cy += w * self.positions[2 * k + 1];
                    }
                }
                if mass > 0.0 {
                    points.extend([cx / mass, cy / mass]);
                    masses.push(mass);
                }
            }
        }
        DiscreteMeasure::from_masses(2, points, masses)
    }
}

pub fn load_pgm(path: &std::path::Path) -> Result<PixelMeasure> {
    PixelMeasure::from_image(&GrayImage::read(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalftoneConfig {
    pub dots: usize,
    pub stride: usize,
    pub steps: usize,
    pub seed: u64,
    pub tau0: f64,
    pub tau_max: f64,
    pub snapshot_every: usize,
}

impl HalftoneConfig {
    /// Full-resolution target with the ramped schedule of [`SimConfig::new`].
    pub fn new(dots: usize, steps: usize) -> Self {
        let m = dots.max(1) as f64;
        Self {
            dots,
            stride: 1,
            steps,
            seed: 0,
            tau0: 1.0 / (10.0 * m),
            tau_max: 10.0 / m,
            snapshot_every: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalftoneResult {
    pub dots: Vec<[f64; 2]>,
    pub energy: Vec<EnergyRecord>,
    pub worst_slack_ratio: f64,
}

impl HalftoneResult {
    pub fn to_measure(&self) -> Result<DiscreteMeasure> {
        DiscreteMeasure::uniform(2, self.dots.iter().flatten().copied().collect())
    }
}

/// Dots start uniformly over the image domain and descend the distance-kernel
/// discrepancy to the (aggregated) pixel measure.
pub fn run_halftone(cfg: &HalftoneConfig, pixels: &PixelMeasure) -> Result<HalftoneResult> {
    if cfg.dots == 0 {
        return Err(Error::Domain("need at least one dot".into()));
    }
    let target = pixels.to_target(cfg.stride)?;
    let aspect = pixels.aspect();
    let mut sim = SimConfig::new(cfg.dots, 1.0, target, vec![0.5 * aspect, 0.5], cfg.steps);
    sim.tau0 = cfg.tau0;
    sim.tau_max = cfg.tau_max;
    sim.seed = cfg.seed;
    sim.snapshot_every = cfg.snapshot_every;
    sim.init = InitKind::Cube {
        half_width: 0.5 * aspect.min(1.0),
    };
    let log = run(&sim)?;
    let last = log.last();
    let dots = (0..last.len()).map(|i| [last.point(i)[0], last.point(i)[1]]).collect();
    Ok(HalftoneResult {
        dots,
        energy: log.energy,
        worst_slack_ratio: log.worst_slack_ratio,
    })
}

/// `D²` between the dots and the full-resolution pixel measure.
pub fn full_discrepancy(dots: &DiscreteMeasure, pixels: &PixelMeasure) -> Result<f64> {
    let target = DiscreteMeasure::from_flat(2, pixels.positions.clone(), pixels.weights.clone())?;
    Ok(discrepancy(&Kernel::riesz(1.0)?, dots, &target)?.discrepancy)
}
