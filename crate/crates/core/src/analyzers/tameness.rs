//! Witness search for ρ-regularity: Milnor-set points off the zero fibre
//! whose values are small while they stay a fixed fraction of the radius
//! away from the origin.
//!
//! At each radius r the scan looks for points of M(G) in the shell
//! [r/2, r] on the level set ‖G‖ = t, t = τ_G(r)/2, close to G⁻¹(0). A
//! level set rather than plain minimization of ‖G‖ keeps the search off the
//! zero fibre itself, which usually lies inside M(G).

use rand::Rng;
use serde::Serialize;

use super::{isolated_singular_value_check, sum_of_squares, value_norm, IsvConfig, Probe};
use crate::determinantal::{milnor_ideal, zero_fiber_ideal, Ideal};
use crate::germ::{MapGerm, Poly, Rat};
use crate::numerics::sampling::random_direction;
use crate::numerics::{
    constrained_min, constrained_min_each, distance, norm, solve, variety_sample, Annulus, PenaltyConfig, RngSpec,
    SolveConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TamenessConfig {
    pub r0: f64,
    /// Last stage index K; radii are r0·2^−k for k = 0..=K.
    pub stages: usize,
    /// τ_G(r) = witness_factor · r.
    pub witness_factor: f64,
    /// Consecutive stages required for a non-tameness verdict.
    pub persistence: usize,
    /// Witness must lie within collar·r of its zero-fibre projection.
    pub collar: f64,
    /// Bound on |x*/‖x*‖ − y*/‖y*‖| between chained limit estimates.
    pub direction_tol: f64,
    /// Relative band around the target level t accepted for witnesses.
    pub level_band: f64,
    /// Seeds for sampling the zero fibre at each stage.
    pub fiber_seeds: usize,
    /// Zero-fibre samples reused (perturbed) as witness-search seeds.
    pub fiber_seed_reuse: usize,
    /// Relative size of the perturbation applied to reused samples.
    pub seed_jitter: f64,
    /// Seeds for the informational min ‖G‖ over M(G).
    pub min_seeds: usize,
    pub isv_seeds: usize,
    pub penalty: PenaltyConfig,
    pub solve: SolveConfig,
}

impl Default for TamenessConfig {
    fn default() -> Self {
        TamenessConfig {
            r0: 0.1,
            stages: 7,
            witness_factor: 1e-3,
            persistence: 3,
            collar: 0.25,
            direction_tol: 0.25,
            level_band: 0.1,
            fiber_seeds: 128,
            fiber_seed_reuse: 32,
            seed_jitter: 0.1,
            min_seeds: 16,
            isv_seeds: 128,
            penalty: PenaltyConfig {
                n_seeds: 32,
                ..PenaltyConfig::default()
            },
            solve: SolveConfig::default(),
        }
    }
}

impl TamenessConfig {
    pub fn radius(&self, k: usize) -> f64 {
        self.r0 * 0.5f64.powi(k as i32)
    }

    pub fn tau_g(&self, r: f64) -> f64 {
        self.witness_factor * r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub point: Vec<f64>,
    pub norm: f64,
    /// ‖G(x)‖.
    pub value: f64,
    pub milnor_residual: f64,
    /// Distance to the zero-fibre point found from x.
    pub fiber_distance: f64,
    /// That zero-fibre point.
    pub limit_estimate: Vec<f64>,
    pub radius: f64,
    pub stage: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub radius: f64,
    pub tau_g: f64,
    pub zero_fiber_samples: usize,
    pub witnesses: usize,
    /// Smallest ‖G‖ over Milnor points near the zero fibre found by the
    /// level-set search; `None` when there are none (no obstruction).
    pub obstruction_score: Option<f64>,
    /// min ‖G‖ over M(G) in the shell, wherever it is attained.
    pub min_milnor_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TamenessVerdict {
    NotTame {
        witnesses: Vec<WitnessPoint>,
        limit_estimate: Vec<f64>,
    },
    TameUpToResolution {
        smallest_radius: f64,
        obstruction_scores: Vec<Option<f64>>,
    },
    TriviallyTame {
        reason: String,
    },
}

impl TamenessVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            TamenessVerdict::NotTame { .. } => "not_tame",
            TamenessVerdict::TameUpToResolution { .. } => "tame_up_to_resolution",
            TamenessVerdict::TriviallyTame { .. } => "trivially_tame",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TamenessReport {
    pub verdict: TamenessVerdict,
    pub stages: Vec<StageReport>,
    pub isolated_singular_value: bool,
    pub warning: Option<String>,
}

struct Stage {
    report: StageReport,
    witnesses: Vec<WitnessPoint>,
}

fn level_objective(g: &MapGerm, t: f64) -> Poly {
    let t2 = Rat::from_float(t * t).expect("finite level");
    let inv = Rat::from_float(1.0 / (t * t)).expect("finite level");
    (&sum_of_squares(g) - &Poly::constant(g.source_dim(), t2)).scale(&inv)
}

#[allow(clippy::too_many_arguments)]
fn run_stage(
    g: &MapGerm,
    milnor: &Ideal,
    zf: &Ideal,
    k: usize,
    cfg: &TamenessConfig,
    rng: RngSpec,
) -> Stage {
    let m = g.source_dim();
    let r = cfg.radius(k);
    let tau_g = cfg.tau_g(r);
    let region = Annulus::new(r / 2.0, r, m).expect("valid shell");
    let zs = variety_sample(zf, &region, cfg.fiber_seeds, &cfg.solve, rng.fork("zero_fiber"));
    let mut report = StageReport {
        stage: k,
        radius: r,
        tau_g,
        zero_fiber_samples: zs.len(),
        witnesses: 0,
        obstruction_score: None,
        min_milnor_value: None,
    };
    if zs.is_empty() {
        return Stage {
            report,
            witnesses: Vec::new(),
        };
    }

    let mut jr = rng.fork("jitter").rng();
    let seeds: Vec<Vec<f64>> = super::thin(&zs, cfg.fiber_seed_reuse)
        .into_iter()
        .map(|z| {
            let d = random_direction(&mut jr, m);
            let s: f64 = jr.gen_range(0.2..1.0) * cfg.seed_jitter * r;
            z.iter().zip(&d).map(|(a, b)| a + s * b).collect()
        })
        .collect();

    let t = tau_g / 2.0;
    let level = level_objective(g, t);
    let found = constrained_min_each(
        std::slice::from_ref(&level),
        milnor,
        &region,
        &seeds,
        &cfg.solve,
        &cfg.penalty,
        rng.fork("level"),
    );
    let milnor_probe = Probe::new(milnor, r);
    let fiber_probe = Probe::new(zf, r);
    let mut witnesses = Vec::new();
    for c in found.into_iter().flatten() {
        let x = c.argmin;
        let value = value_norm(g, &x);
        if (value / t - 1.0).abs() > cfg.level_band {
            continue;
        }
        let y: Vec<f64> = x.iter().map(|v| v / r).collect();
        let Ok(ys) = solve(fiber_probe.system(), &y, &cfg.solve, None) else {
            continue;
        };
        let xs: Vec<f64> = ys.iter().map(|v| v * r).collect();
        let d = distance(&x, &xs);
        if d > cfg.collar * r || norm(&xs) < r / 2.0 {
            continue;
        }
        witnesses.push(WitnessPoint {
            norm: norm(&x),
            value,
            milnor_residual: milnor_probe.residual(&x),
            fiber_distance: d,
            limit_estimate: xs,
            point: x,
            radius: r,
            stage: k,
        });
    }
    report.witnesses = witnesses.len();
    report.obstruction_score = witnesses.iter().map(|w| w.value).reduce(f64::min);
    report.min_milnor_value = constrained_min(
        g.components(),
        milnor,
        &region,
        &[],
        &cfg.solve,
        &PenaltyConfig {
            n_seeds: cfg.min_seeds,
            ..cfg.penalty
        },
        rng.fork("min_milnor"),
    )
    .ok()
    .map(|c| c.value.sqrt());
    Stage { report, witnesses }
}

fn direction(x: &[f64]) -> Vec<f64> {
    let n = norm(x);
    x.iter().map(|v| v / n).collect()
}

/// First run of `persistence` consecutive stages with witnesses whose limit
/// directions are pairwise within `tol`.
fn find_chain(stages: &[Stage], persistence: usize, tol: f64) -> Option<Vec<WitnessPoint>> {
    const MAX_PER_STAGE: usize = 24;
    let w = persistence.max(1);
    for start in 0..stages.len().saturating_sub(w - 1) {
        let window = &stages[start..start + w];
        if window.iter().any(|s| s.witnesses.is_empty()) {
            continue;
        }
        let lists: Vec<Vec<&WitnessPoint>> = window
            .iter()
            .map(|s| {
                let mut v: Vec<&WitnessPoint> = s.witnesses.iter().collect();
                v.sort_by(|a, b| a.value.total_cmp(&b.value));
                v.truncate(MAX_PER_STAGE);
                v
            })
            .collect();
        let mut chain: Vec<&WitnessPoint> = Vec::new();
        if extend(&lists, &mut chain, tol) {
            return Some(chain.into_iter().cloned().collect());
        }
    }
    None
}

fn extend<'a>(lists: &[Vec<&'a WitnessPoint>], chain: &mut Vec<&'a WitnessPoint>, tol: f64) -> bool {
    let depth = chain.len();
    if depth == lists.len() {
        return true;
    }
    for &cand in &lists[depth] {
        let dc = direction(&cand.limit_estimate);
        if chain
            .iter()
            .all(|w| distance(&direction(&w.limit_estimate), &dc) <= tol)
        {
            chain.push(cand);
            if extend(lists, chain, tol) {
                return true;
            }
            chain.pop();
        }
    }
    false
}

fn verify_witness(w: &WitnessPoint, cfg: &TamenessConfig, tau_m: f64) {
    let r = w.radius;
    assert!(w.milnor_residual <= tau_m, "witness off the Milnor set");
    assert!(
        w.norm >= r / 2.0 * (1.0 - 1e-12) && w.norm <= r * (1.0 + 1e-12),
        "witness outside its shell"
    );
    assert!(w.value > 0.0 && w.value <= cfg.tau_g(r), "witness value out of range");
    assert!(w.fiber_distance <= cfg.collar * r, "witness too far from the zero fibre");
}

/// Radius-stage scan for non-tameness witnesses. One-sided: `NotTame`
/// carries checkable witnesses, `TameUpToResolution` only records that
/// none were found at the probed radii.
pub fn tameness_scan(g: &MapGerm, cfg: &TamenessConfig, rng: RngSpec) -> TamenessReport {
    let m = g.source_dim();
    let milnor = milnor_ideal(g);
    let zf = zero_fiber_ideal(g);

    let isv_region = Annulus::new(cfg.r0 / 2.0, cfg.r0, m).expect("valid shell");
    let isv = isolated_singular_value_check(
        g,
        &isv_region,
        &IsvConfig {
            n_seeds: cfg.isv_seeds,
            witness_factor: cfg.witness_factor,
            solve: cfg.solve,
            ..IsvConfig::default()
        },
        rng.fork("isv"),
    );
    let warning = (!isv.holds).then(|| {
        "isolated singular value check failed; only the top-stratum condition is scanned".to_string()
    });

    let stages: Vec<Stage> = (0..=cfg.stages)
        .map(|k| run_stage(g, &milnor, &zf, k, cfg, rng.fork_index(k as u64)))
        .collect();

    let verdict = if stages.iter().all(|s| s.report.zero_fiber_samples == 0) {
        TamenessVerdict::TriviallyTame {
            reason: "no zero-fibre points found in any probed shell: G⁻¹(0) = {0} at resolution".into(),
        }
    } else if let Some(chain) = find_chain(&stages, cfg.persistence, cfg.direction_tol) {
        for w in &chain {
            verify_witness(w, cfg, cfg.solve.tol_residual);
        }
        let limit_estimate = chain.last().expect("nonempty chain").limit_estimate.clone();
        TamenessVerdict::NotTame {
            witnesses: chain,
            limit_estimate,
        }
    } else {
        TamenessVerdict::TameUpToResolution {
            smallest_radius: cfg.radius(cfg.stages),
            obstruction_scores: stages.iter().map(|s| s.report.obstruction_score).collect(),
        }
    };
    TamenessReport {
        verdict,
        stages: stages.into_iter().map(|s| s.report).collect(),
        isolated_singular_value: isv.holds,
        warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ_file;

    #[test]
    fn square_is_trivially_tame() {
        let g = parse_germ_file("vars: u v\npoly: u^2 - v^2\npoly: 2*u*v\n").unwrap();
        let cfg = TamenessConfig {
            stages: 3,
            ..Default::default()
        };
        let r = tameness_scan(&g, &cfg, RngSpec::new(1));
        assert_eq!(r.verdict.label(), "trivially_tame");
        assert_eq!(r.stages.len(), 4);
    }

    #[test]
    fn xy_witnesses_approach_the_y_axis() {
        let g = parse_germ_file("vars: x y\npoly: x\npoly: x*y\n").unwrap();
        let cfg = TamenessConfig {
            stages: 4,
            ..Default::default()
        };
        let r = tameness_scan(&g, &cfg, RngSpec::new(2));
        match r.verdict {
            TamenessVerdict::NotTame {
                witnesses,
                limit_estimate,
            } => {
                assert_eq!(witnesses.len(), 3);
                assert!(limit_estimate[0].abs() <= 0.05 * norm(&limit_estimate));
            }
            other => panic!("{other:?}"),
        }
    }
}
