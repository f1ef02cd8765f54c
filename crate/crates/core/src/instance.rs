//! Reproducible random instances.
//!
//! Point sets live in a square of side `sqrt(n)` (unit density) so that a
//! fixed radius model gives comparable degrees across sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal, Pareto};

use crate::geometry::Site;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distribution {
    UniformSquare,
    /// Gaussian blobs around uniformly placed centers, about 50 sites per blob.
    Clustered,
    /// Row-major lattice with unit spacing.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadiusModel {
    /// Every radius equals the base radius.
    Constant,
    /// Base radius times a uniform factor in `[lo, hi]`, `0 < lo`.
    Uniform { lo: f64, hi: f64 },
    /// Base radius times a Pareto(1, alpha) factor capped at `cap`, so the
    /// radius ratio never exceeds `cap`.
    Pareto { alpha: f64, cap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub distribution: Distribution,
    pub radius: RadiusModel,
    pub base_radius: f64,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(n: usize, distribution: Distribution, radius: RadiusModel, seed: u64) -> Self {
        Self { n, distribution, radius, base_radius: 1.5, seed }
    }

    /// Largest radius ratio the model can produce.
    pub fn psi_cap(&self) -> f64 {
        match self.radius {
            RadiusModel::Constant => 1.0,
            RadiusModel::Uniform { lo, hi } => hi / lo,
            RadiusModel::Pareto { cap, .. } => cap,
        }
    }
}

pub fn generate(spec: &InstanceSpec) -> Vec<Site> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let side = (spec.n as f64).sqrt().max(1.0);
    let points: Vec<(f64, f64)> = match spec.distribution {
        Distribution::UniformSquare => {
            (0..spec.n).map(|_| (rng.gen_range(0.0..side), rng.gen_range(0.0..side))).collect()
        }
        Distribution::Clustered => {
            let clusters = (spec.n / 50).max(1);
            let centers: Vec<(f64, f64)> =
                (0..clusters).map(|_| (rng.gen_range(0.0..side), rng.gen_range(0.0..side))).collect();
            let blob = Normal::new(0.0, 1.0).expect("unit normal");
            (0..spec.n)
                .map(|_| {
                    let (cx, cy) = centers[rng.gen_range(0..clusters)];
                    (cx + blob.sample(&mut rng), cy + blob.sample(&mut rng))
                })
                .collect()
        }
        Distribution::Grid => {
            let cols = side.ceil() as usize;
            (0..spec.n).map(|i| ((i % cols) as f64, (i / cols) as f64)).collect()
        }
    };
    points
        .into_iter()
        .enumerate()
        .map(|(id, (x, y))| {
            let factor = match spec.radius {
                RadiusModel::Constant => 1.0,
                RadiusModel::Uniform { lo, hi } => {
                    if hi > lo {
                        rng.gen_range(lo..=hi)
                    } else {
                        lo
                    }
                }
                RadiusModel::Pareto { alpha, cap } => {
                    let d = Pareto::new(1.0, alpha).expect("pareto parameters");
                    d.sample(&mut rng).min(cap)
                }
            };
            Site::new(id, x, y, spec.base_radius * factor)
        })
        .collect()
}
