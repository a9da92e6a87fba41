//! Local intrinsic dimension by PCA over nearest-neighbour patches.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use super::region::distance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimConfig {
    /// Neighbourhood size.
    pub k: usize,
    /// Eigenvalues at least this fraction of the largest count.
    pub rel_threshold: f64,
    /// Patches whose largest standard deviation is below this are points.
    pub abs_floor: f64,
    /// At most this many points vote (evenly strided).
    pub max_voters: usize,
}

impl Default for DimConfig {
    fn default() -> Self {
        DimConfig {
            k: 10,
            rel_threshold: 0.1,
            abs_floor: 1e-7,
            max_voters: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cluster of {size} points is too small for neighbourhoods of {k}")]
pub struct ClusterTooSmall {
    pub size: usize,
    pub k: usize,
}

fn patch_dim(points: &[Vec<f64>], centre: usize, cfg: &DimConfig) -> usize {
    let dim = points[0].len();
    let mut d: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(j, q)| (distance(&points[centre], q), j))
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nb: Vec<&Vec<f64>> = d[..cfg.k].iter().map(|&(_, j)| &points[j]).collect();
    let mean: Vec<f64> = (0..dim)
        .map(|c| nb.iter().map(|p| p[c]).sum::<f64>() / cfg.k as f64)
        .collect();
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for p in &nb {
        for a in 0..dim {
            for b in 0..dim {
                cov[(a, b)] += (p[a] - mean[a]) * (p[b] - mean[b]);
            }
        }
    }
    cov /= cfg.k as f64;
    let eig = SymmetricEigen::new(cov).eigenvalues;
    let top = eig.iter().cloned().fold(0.0, f64::max);
    if top.sqrt() < cfg.abs_floor {
        return 0;
    }
    eig.iter().filter(|&&e| e >= cfg.rel_threshold * top).count()
}

/// Majority vote of per-point PCA dimensions; ties go to the smaller
/// dimension.
pub fn local_dim(points: &[Vec<f64>], cfg: &DimConfig) -> Result<usize, ClusterTooSmall> {
    let dim = points.first().map_or(0, Vec::len);
    if points.len() < cfg.k || cfg.k < dim + 1 {
        return Err(ClusterTooSmall {
            size: points.len(),
            k: cfg.k,
        });
    }
    let stride = points.len().div_ceil(cfg.max_voters).max(1);
    let mut votes = vec![0usize; dim + 1];
    for i in (0..points.len()).step_by(stride) {
        votes[patch_dim(points, i, cfg)] += 1;
    }
    let best = votes.iter().copied().max().unwrap_or(0);
    Ok(votes.iter().position(|&v| v == best).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RngSpec;
    use rand::Rng;

    #[test]
    fn jittered_segment_is_one_dimensional() {
        let mut r = RngSpec::new(1).rng();
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let t: f64 = r.gen_range(-0.1..0.1);
                vec![t, 0.5 * t + r.gen_range(-1e-6..1e-6), 0.02 + r.gen_range(-1e-6..1e-6)]
            })
            .collect();
        assert_eq!(local_dim(&pts, &DimConfig::default()), Ok(1));
    }

    #[test]
    fn repeated_point_is_zero_dimensional() {
        let mut pts = Vec::new();
        for i in 0..50 {
            pts.push(vec![0.01, 0.0, 0.0]);
            pts.push(vec![0.01 + 1e-9 * (i % 2) as f64, 0.0, 0.0]);
        }
        assert_eq!(local_dim(&pts, &DimConfig::default()), Ok(0));
    }

    #[test]
    fn disk_patch_is_two_dimensional() {
        let mut r = RngSpec::new(2).rng();
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let (a, b): (f64, f64) = (r.gen_range(-0.1..0.1), r.gen_range(-0.1..0.1));
                vec![a, b, 0.3 * a - 0.2 * b]
            })
            .collect();
        assert_eq!(local_dim(&pts, &DimConfig::default()), Ok(2));
    }

    #[test]
    fn too_small() {
        let pts = vec![vec![0.0, 0.0]; 5];
        assert!(local_dim(&pts, &DimConfig::default()).is_err());
    }
}
