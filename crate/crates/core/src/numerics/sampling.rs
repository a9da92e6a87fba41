use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::compiled::EquationSystem;
use super::lm::{solve, SolveConfig};
use super::region::{distance, norm, Annulus};
use super::rng::{fan_out, RngSpec};
use crate::determinantal::Ideal;

/// Distance below which two variety samples count as the same point.
pub const DEDUP_RADIUS: f64 = 1e-8;

pub fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-300 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// Uniform point of the shell (uniform in volume).
pub fn random_in_annulus(rng: &mut ChaCha8Rng, region: &Annulus) -> Vec<f64> {
    let d = region.dim() as i32;
    let lo = region.inner().powi(d);
    let hi = region.outer().powi(d);
    let u: f64 = rng.gen();
    let r = (lo + u * (hi - lo)).powf(1.0 / d as f64);
    random_direction(rng, region.dim())
        .into_iter()
        .map(|c| c * r)
        .collect()
}

/// `n` points uniform on the sphere of the given radius (normalized
/// Gaussian vectors).
pub fn sample_sphere(dim: usize, radius: f64, n: usize, rng: RngSpec) -> Vec<Vec<f64>> {
    assert!(radius > 0.0 && n >= 1, "sample_sphere needs radius > 0 and n >= 1");
    fan_out(n, rng, |r, _| {
        random_direction(r, dim).into_iter().map(|c| c * radius).collect()
    })
}

pub fn sample_annulus(region: &Annulus, n: usize, rng: RngSpec) -> Vec<Vec<f64>> {
    fan_out(n, rng, |r, _| random_in_annulus(r, region))
}

/// Drops points within [`DEDUP_RADIUS`] of an earlier point, keeping order.
pub fn dedup(points: Vec<Vec<f64>>, radius: f64) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|q| distance(q, &p) <= radius) {
            kept.push(p);
        }
    }
    kept
}

/// Points of the zero set of `ideal` inside `region`, found by running the
/// solver from `n_seeds` uniform seeds. Generators are rescaled to unit
/// coordinates at the outer radius and normalized to unit largest
/// coefficient, so `cfg.tol_residual` has the same meaning at every scale.
///
/// An ideal that vanishes identically has every seed as a solution; callers
/// usually shortcut that case.
pub fn variety_sample(
    ideal: &Ideal,
    region: &Annulus,
    n_seeds: usize,
    cfg: &SolveConfig,
    rng: RngSpec,
) -> Vec<Vec<f64>> {
    let s = region.outer();
    let sys = EquationSystem::normalized(ideal.generators(), ideal.dim(), s);
    let unit = region.rescaled(s);
    let hits = fan_out(n_seeds, rng, |r, _| {
        let seed = random_in_annulus(r, &unit);
        solve(&sys, &seed, cfg, Some(&unit))
            .ok()
            .map(|y| y.into_iter().map(|v| v * s).collect::<Vec<f64>>())
    });
    let pts: Vec<Vec<f64>> = hits.into_iter().flatten().collect();
    for p in &pts {
        assert!(sys.residual_at(p) <= cfg.tol_residual, "variety sample residual");
        assert!(region.contains(p, 1e-12), "variety sample outside region");
    }
    dedup(pts, DEDUP_RADIUS)
}

/// Result of [`variety_sample_until`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveSample {
    pub points: Vec<Vec<f64>>,
    pub seeds: usize,
}

/// Runs [`variety_sample`] in batches of `batch` seeds (batch `i` uses
/// `rng.fork_index(i)`) until at least `min_points` distinct points are
/// found or `max_seeds` seeds have been spent.
pub fn variety_sample_until(
    ideal: &Ideal,
    region: &Annulus,
    min_points: usize,
    batch: usize,
    max_seeds: usize,
    cfg: &SolveConfig,
    rng: RngSpec,
) -> AdaptiveSample {
    assert!(batch > 0, "batch size");
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut seeds = 0;
    let mut i = 0u64;
    while points.len() < min_points && seeds < max_seeds {
        let n = batch.min(max_seeds - seeds);
        let mut fresh = variety_sample(ideal, region, n, cfg, rng.fork_index(i));
        points.append(&mut fresh);
        points = dedup(points, DEDUP_RADIUS);
        seeds += n;
        i += 1;
    }
    AdaptiveSample { points, seeds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinantal::{milnor_ideal, singular_ideal, zero_fiber_ideal};
    use crate::germ::MapGerm;
    use crate::parse::parse_germ_file;

    fn germ(text: &str) -> MapGerm {
        parse_germ_file(text).unwrap()
    }

    #[test]
    fn sphere_points_have_the_right_radius() {
        let pts = sample_sphere(3, 2.5, 500, RngSpec::new(1));
        assert_eq!(pts.len(), 500);
        for p in &pts {
            let n = norm(p);
            assert!((2.5 * (1.0 - 1e-14)..=2.5 * (1.0 + 1e-14)).contains(&n));
        }
    }

    #[test]
    fn sphere_sample_mean_is_near_origin() {
        let pts = sample_sphere(2, 1.0, 10_000, RngSpec::new(11));
        let mean: Vec<f64> = (0..2)
            .map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / pts.len() as f64)
            .collect();
        assert!(norm(&mean) < 0.05, "{mean:?}");
    }

    #[test]
    fn sphere_sample_is_deterministic_across_thread_counts() {
        let run = |t: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .unwrap()
                .install(|| sample_sphere(3, 1.0, 777, RngSpec::new(5)))
        };
        let a = run(1);
        let b = run(8);
        let bits = |v: &Vec<Vec<f64>>| v.iter().flatten().map(|f| f.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn annulus_samples_stay_inside() {
        let a = Annulus::new(0.05, 0.1, 3).unwrap();
        for p in sample_annulus(&a, 300, RngSpec::new(2)) {
            assert!(a.contains(&p, 1e-12));
        }
    }

    #[test]
    fn sabbah_milnor_set_has_both_branches() {
        let f = germ("vars: x y z\npoly: x^2 - y^2*z\npoly: y\n");
        let m = milnor_ideal(&f);
        let region = Annulus::new(0.05, 0.1, 3).unwrap();
        let pts = variety_sample(&m, &region, 400, &SolveConfig::default(), RngSpec::new(3));
        assert!(pts.len() >= 100, "{} samples", pts.len());
        let mut plane = 0;
        let mut parabola = 0;
        for p in &pts {
            let (x, y, z) = (p[0], p[1], p[2]);
            assert!((x * (y * y + 2.0 * z)).abs() < 1e-6);
            if x.abs() < 1e-6 {
                plane += 1;
            }
            if (z + y * y / 2.0).abs() < 1e-6 {
                parabola += 1;
            }
        }
        assert!(plane > 0 && parabola > 0, "plane {plane}, parabola {parabola}");
    }

    #[test]
    fn empty_varieties_give_no_samples() {
        let region = Annulus::new(0.05, 0.1, 2).unwrap();
        let sq = germ("vars: u v\npoly: u^2 - v^2\npoly: 2*u*v\n");
        let pts = variety_sample(&singular_ideal(&sq), &region, 200, &SolveConfig::default(), RngSpec::new(4));
        assert!(pts.is_empty());
        let id = germ("vars: a b\npoly: a\npoly: b\n");
        let pts = variety_sample(&zero_fiber_ideal(&id), &region, 200, &SolveConfig::default(), RngSpec::new(4));
        assert!(pts.is_empty());
    }

    #[test]
    fn dedup_merges_close_points() {
        let pts = vec![vec![0.0, 0.0], vec![1e-9, 0.0], vec![1.0, 0.0]];
        assert_eq!(dedup(pts, DEDUP_RADIUS).len(), 2);
    }
}
