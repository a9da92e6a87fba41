use serde::Serialize;

use super::shifted;
use crate::germ::MapGerm;
use crate::numerics::sampling::random_in_annulus;
use crate::numerics::{fan_out, norm, solve, Annulus, EquationSystem, Normalization, RngSpec, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageConfig {
    pub n_seeds: usize,
    pub solve: SolveConfig,
}

impl Default for ImageConfig {
    fn default() -> Self {
        ImageConfig {
            n_seeds: 64,
            solve: SolveConfig::default(),
        }
    }
}

/// A point x ∈ B_ε with G(x) = v, if the solver finds one. The solve runs
/// on (G − v)/‖v‖ with every iterate clamped into the ball.
pub fn image_preimage(g: &MapGerm, v: &[f64], eps: f64, cfg: &ImageConfig, rng: RngSpec) -> Option<Vec<f64>> {
    assert!(eps > 0.0, "ball radius must be positive");
    assert_eq!(v.len(), g.target_dim(), "target dimension");
    let m = g.source_dim();
    let vn = norm(v);
    if vn == 0.0 {
        return Some(vec![0.0; m]);
    }
    let sys = EquationSystem::new(&shifted(g, v), m, eps, Normalization::Fixed(1.0 / vn));
    let ball = Annulus::ball(1.0, m).expect("unit ball");
    fan_out(cfg.n_seeds, rng, |r, _| {
        let seed = random_in_annulus(r, &ball);
        solve(&sys, &seed, &cfg.solve, Some(&ball)).ok()
    })
    .into_iter()
    .flatten()
    .next()
    .map(|y| y.into_iter().map(|c| c * eps).collect())
}

/// One-sided: `false` means no preimage was found at this seed budget.
pub fn image_membership(g: &MapGerm, v: &[f64], eps: f64, cfg: &ImageConfig, rng: RngSpec) -> bool {
    image_preimage(g, v, eps, cfg, rng).is_some()
}

/// `n` unit vectors at angles 2πk/n in the plane.
pub fn polar_directions(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

/// ±e_i for every coordinate.
pub fn axis_directions(p: usize) -> Vec<Vec<f64>> {
    (0..p)
        .flat_map(|i| {
            [1.0, -1.0].map(|s| {
                let mut e = vec![0.0; p];
                e[i] = s;
                e
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageGermReport {
    pub directions: Vec<Vec<f64>>,
    pub magnitudes: Vec<f64>,
    /// (ε₁, ε₂) with ε₁ > ε₂.
    pub radii: [f64; 2],
    /// member[direction][magnitude] = [at ε₁, at ε₂].
    pub member: Vec<Vec<[bool; 2]>>,
    pub unstable: Vec<bool>,
    /// Magnitudes (smallest ones) the stability flag is decided on.
    pub decided_on: usize,
}

impl ImageGermReport {
    pub fn all_members(&self) -> bool {
        self.member.iter().flatten().all(|m| m[0] && m[1])
    }
}

/// Membership of t·u in G(B_ε) over a grid of directions u, magnitudes t
/// and the two radii. A direction is unstable when, at the smallest
/// magnitudes, it is in the image of the larger ball but not the smaller
/// one. A preimage found in the smaller ball also certifies the larger.
pub fn image_germ_stability(
    g: &MapGerm,
    directions: &[Vec<f64>],
    magnitudes: &[f64],
    radii: [f64; 2],
    cfg: &ImageConfig,
    rng: RngSpec,
) -> ImageGermReport {
    assert!(radii[1] < radii[0], "need ε₂ < ε₁");
    let mut mags = magnitudes.to_vec();
    mags.sort_by(|a, b| b.total_cmp(a));
    let member: Vec<Vec<[bool; 2]>> = directions
        .iter()
        .enumerate()
        .map(|(di, u)| {
            let un = norm(u);
            mags.iter()
                .enumerate()
                .map(|(mi, &t)| {
                    let v: Vec<f64> = u.iter().map(|c| c * t / un).collect();
                    let spec = rng.fork_index((di * mags.len() + mi) as u64);
                    let small = image_membership(g, &v, radii[1], cfg, spec.fork("eps2"));
                    let large = small || image_membership(g, &v, radii[0], cfg, spec.fork("eps1"));
                    [large, small]
                })
                .collect()
        })
        .collect();
    for row in &member {
        for m in row {
            assert!(m[0] || !m[1], "membership not monotone in the radius");
        }
    }
    let decided_on = mags.len().div_ceil(2);
    let unstable = member
        .iter()
        .map(|row| !row.is_empty() && row[row.len() - decided_on..].iter().all(|m| m[0] && !m[1]))
        .collect();
    ImageGermReport {
        directions: directions.to_vec(),
        magnitudes: mags,
        radii,
        member,
        unstable,
        decided_on,
    }
}
