use serde::Serialize;
use thiserror::Error;

use super::shifted;
use crate::germ::MapGerm;
use crate::numerics::sampling::random_in_annulus;
use crate::numerics::{
    fan_out, find_plateau, local_dim, median_nn_distance, norm, single_linkage, solve, Annulus, Clustering,
    DimConfig, EquationSystem, Normalization, PlateauScan, RngSpec, SolveConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberConfig {
    pub n_seeds: usize,
    /// Initial linkage radius as a multiple of the median nearest-neighbour
    /// distance.
    pub h_factor: f64,
    /// Plateau search stops once 2h exceeds this fraction of ε.
    pub max_h_fraction: f64,
    /// Clusters smaller than max(dim.k, this fraction of the hits) are
    /// treated as noise.
    pub min_cluster_fraction: f64,
    pub dim: DimConfig,
    pub solve: SolveConfig,
}

impl Default for FiberConfig {
    fn default() -> Self {
        FiberConfig {
            n_seeds: 4096,
            h_factor: 3.0,
            max_h_fraction: 0.5,
            min_cluster_fraction: 0.005,
            dim: DimConfig::default(),
            solve: SolveConfig {
                max_iterations: 400,
                ..SolveConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiberError {
    #[error("no fibre points found from {seeds} seeds")]
    NoSolutionsFound { seeds: usize },
    #[error("target has {found} coordinates, germ has {expected} components")]
    TargetDimension { expected: usize, found: usize },
    #[error("target value must be nonzero and finite")]
    BadTarget,
    #[error("ball radius must be positive")]
    BadRadius,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub size: usize,
    /// `None` when the cluster is smaller than the PCA neighbourhood.
    pub dim: Option<usize>,
    pub centroid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub target: Vec<f64>,
    pub eps: f64,
    pub seeds: usize,
    pub hits: usize,
    /// Reported only when the plateau scan is stable.
    pub cluster_count: Option<usize>,
    pub stable: bool,
    pub linkage_radius: f64,
    pub plateau: Vec<PlateauScan>,
    pub min_cluster_size: usize,
    /// Clusters of at least `min_cluster_size` points.
    pub clusters: Vec<ClusterSummary>,
    /// Hits in smaller clusters.
    pub noise_points: usize,
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
    /// Index into `clusters` for each point; `None` for noise.
    #[serde(skip)]
    pub labels: Vec<Option<usize>>,
}

impl FiberReport {
    pub fn dims(&self) -> Vec<Option<usize>> {
        self.clusters.iter().map(|c| c.dim).collect()
    }
}

/// Samples G⁻¹(v) ∩ B_ε by solving (G − v)/‖v‖ = 0 from uniform seeds in the
/// ball, then counts components by single linkage on a stable plateau and
/// estimates each component's dimension.
pub fn fiber_report(
    g: &MapGerm,
    v: &[f64],
    eps: f64,
    cfg: &FiberConfig,
    rng: RngSpec,
) -> Result<FiberReport, FiberError> {
    if v.len() != g.target_dim() {
        return Err(FiberError::TargetDimension {
            expected: g.target_dim(),
            found: v.len(),
        });
    }
    let vn = norm(v);
    if !(vn > 0.0 && vn.is_finite()) {
        return Err(FiberError::BadTarget);
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(FiberError::BadRadius);
    }
    let m = g.source_dim();
    let sys = EquationSystem::new(&shifted(g, v), m, eps, Normalization::Fixed(1.0 / vn));
    let unit_ball = Annulus::ball(1.0, m).expect("unit ball");
    let hits: Vec<Option<Vec<f64>>> = fan_out(cfg.n_seeds, rng, |r, _| {
        let seed = random_in_annulus(r, &unit_ball);
        let y = solve(&sys, &seed, &cfg.solve, None).ok()?;
        (norm(&y) <= 1.0).then(|| y.into_iter().map(|c| c * eps).collect())
    });
    let points: Vec<Vec<f64>> = hits.into_iter().flatten().collect();
    if points.is_empty() {
        return Err(FiberError::NoSolutionsFound { seeds: cfg.n_seeds });
    }

    // below this scale distances reflect solver accuracy, not geometry
    let floor = 1e-6 * eps;
    let h0 = (cfg.h_factor * median_nn_distance(&points).unwrap_or(floor)).max(floor);
    let min_size = cfg
        .dim
        .k
        .max((cfg.min_cluster_fraction * points.len() as f64).ceil() as usize);
    let plateau = find_plateau(&points, h0, cfg.max_h_fraction * eps, min_size);
    let last = plateau.last().expect("at least one scan");
    let stable = last.stable;
    let h = last.h;
    let Clustering { clusters, .. } = single_linkage(&points, h);
    let mut labels = vec![None; points.len()];
    let big: Vec<&Vec<usize>> = clusters.iter().filter(|c| c.len() >= min_size).collect();
    let noise_points = points.len() - big.iter().map(|c| c.len()).sum::<usize>();
    let summaries: Vec<ClusterSummary> = big
        .iter()
        .enumerate()
        .map(|(ci, members)| {
            for &i in members.iter() {
                labels[i] = Some(ci);
            }
            let pts: Vec<Vec<f64>> = members.iter().map(|&i| points[i].clone()).collect();
            let centroid = (0..m)
                .map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / pts.len() as f64)
                .collect();
            ClusterSummary {
                size: pts.len(),
                dim: local_dim(&pts, &cfg.dim).ok(),
                centroid,
            }
        })
        .collect();
    Ok(FiberReport {
        target: v.to_vec(),
        eps,
        seeds: cfg.n_seeds,
        hits: points.len(),
        cluster_count: stable.then_some(summaries.len()),
        stable,
        linkage_radius: h,
        plateau,
        min_cluster_size: min_size,
        clusters: summaries,
        noise_points,
        points,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ_file;

    #[test]
    fn squaring_map_fibre_is_two_points() {
        let g = parse_germ_file("vars: u v\npoly: u^2 - v^2\npoly: 2*u*v\n").unwrap();
        let cfg = FiberConfig {
            n_seeds: 512,
            ..Default::default()
        };
        let r = fiber_report(&g, &[1e-4, 0.0], 0.5, &cfg, RngSpec::new(1)).unwrap();
        assert_eq!(r.cluster_count, Some(2), "{:?}", r.plateau);
        assert_eq!(r.dims(), vec![Some(0), Some(0)]);
        assert!((r.clusters[0].centroid[0] + 0.01).abs() < 1e-6);
        assert!((r.clusters[1].centroid[0] - 0.01).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_targets() {
        let g = parse_germ_file("vars: u v\npoly: u\npoly: v\n").unwrap();
        let cfg = FiberConfig::default();
        assert!(matches!(fiber_report(&g, &[0.0, 0.0], 0.5, &cfg, RngSpec::new(1)), Err(FiberError::BadTarget)));
        assert!(fiber_report(&g, &[1.0], 0.5, &cfg, RngSpec::new(1)).is_err());
    }

    #[test]
    fn empty_fibre_is_reported() {
        let g = parse_germ_file("vars: x y\npoly: x^2 + y^2\n").unwrap();
        let cfg = FiberConfig {
            n_seeds: 64,
            ..Default::default()
        };
        let r = fiber_report(&g, &[-1e-4], 0.5, &cfg, RngSpec::new(1));
        assert_eq!(r, Err(FiberError::NoSolutionsFound { seeds: 64 }));
    }
}
