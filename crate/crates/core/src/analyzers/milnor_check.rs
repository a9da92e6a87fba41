use serde::Serialize;

use super::Probe;
use crate::determinantal::{calibrated_tolerance, milnor_ideal, singular_ideal, zero_fiber_ideal};
use crate::germ::MapGerm;
use crate::numerics::{variety_sample_until, Annulus, RngSpec, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MilnorCheckConfig {
    /// Sampling stops once this many distinct points are found...
    pub min_samples: usize,
    /// ...or this many seeds have been tried, in batches of `batch`.
    pub max_seeds: usize,
    pub batch: usize,
    pub max_listed: usize,
    pub solve: SolveConfig,
}

impl Default for MilnorCheckConfig {
    fn default() -> Self {
        MilnorCheckConfig {
            min_samples: 1000,
            max_seeds: 16384,
            batch: 1024,
            max_listed: 32,
            solve: SolveConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MilnorCheckReport {
    pub seeds: usize,
    pub samples: usize,
    pub tau: f64,
    pub tau_prime: f64,
    pub vacuous: bool,
    pub violation_count: usize,
    /// Offending points with their singular residual.
    pub violations: Vec<(Vec<f64>, f64)>,
    /// Largest singular residual seen over the samples.
    pub max_singular_residual: f64,
}

/// Samples M(G) ∩ G⁻¹(0) in `region` and checks each sample against Sing G
/// at the calibrated tolerance τ′.
pub fn milnor_zero_fiber_check(
    g: &MapGerm,
    region: &Annulus,
    cfg: &MilnorCheckConfig,
    rng: RngSpec,
) -> MilnorCheckReport {
    let m = milnor_ideal(g);
    let z = zero_fiber_ideal(g);
    let both = m.sum(&z);
    let sing = singular_ideal(g);
    let tau = cfg.solve.tol_residual;
    let tau_prime = calibrated_tolerance(tau, both.max_degree().max(sing.max_degree()));
    let sample = variety_sample_until(&both, region, cfg.min_samples, cfg.batch, cfg.max_seeds, &cfg.solve, rng);
    let pts = sample.points;
    let probe = Probe::new(&sing, region.outer());
    let residuals: Vec<f64> = pts.iter().map(|x| probe.residual(x)).collect();
    let bad: Vec<(Vec<f64>, f64)> = pts
        .iter()
        .zip(&residuals)
        .filter(|(_, &r)| r > tau_prime)
        .map(|(x, &r)| (x.clone(), r))
        .collect();
    MilnorCheckReport {
        seeds: sample.seeds,
        samples: pts.len(),
        tau,
        tau_prime,
        vacuous: pts.is_empty(),
        violation_count: bad.len(),
        violations: super::thin(&bad, cfg.max_listed),
        max_singular_residual: residuals.iter().cloned().fold(0.0, f64::max),
    }
}
