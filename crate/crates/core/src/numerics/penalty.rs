//! Quadratic-penalty minimization of a sum of squares over a variety.

use serde::Serialize;
use thiserror::Error;

use super::compiled::{EquationSystem, Normalization, Residuals, Stacked};
use super::lm::{levenberg_marquardt, solve, SolveConfig, Status};
use super::region::Annulus;
use super::rng::{fan_out, RngSpec};
use super::sampling::random_in_annulus;
use crate::determinantal::Ideal;
use crate::germ::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltyConfig {
    /// First penalty weight μ₀.
    pub mu0: f64,
    /// Number of weights μ_k = μ₀·10^k, k = 0..stages.
    pub stages: usize,
    /// Random seeds drawn in the region (on top of caller-supplied ones).
    pub n_seeds: usize,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            mu0: 1.0,
            stages: 7,
            n_seeds: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("constraint never met at tolerance from {seeds} seeds")]
pub struct NoFeasiblePoint {
    pub seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PenaltyStage {
    pub mu: f64,
    pub objective: f64,
    pub constraint_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedMin {
    /// Raw objective Σ fᵢ(x)² at the returned point.
    pub value: f64,
    pub argmin: Vec<f64>,
    /// Normalized constraint residual at `argmin` (≤ tol_residual).
    pub constraint_residual: f64,
    pub trace: Vec<PenaltyStage>,
}

fn common_factor(polys: &[Poly], scale: f64) -> f64 {
    let m = polys
        .iter()
        .flat_map(|p| p.terms())
        .map(|(mono, c)| {
            crate::germ::rat_to_f64(c).abs() * scale.powi(mono.degree() as i32)
        })
        .fold(0.0, f64::max);
    if m > 0.0 {
        1.0 / m
    } else {
        1.0
    }
}

fn raw_value(objective: &[Poly], x: &[f64]) -> f64 {
    objective.iter().map(|p| p.eval_float(x).expect("point dimension").powi(2)).sum()
}

/// Minimizes Σ fᵢ² over `constraint ∩ region` from every seed and returns
/// one result per seed (`None` where the constraint was never reached).
///
/// Work happens in unit coordinates at the outer radius: the objective is
/// divided by one common factor (so its minimizers are unchanged) and each
/// constraint generator by its own largest coefficient. A whole-space
/// constraint is dropped.
pub fn constrained_min_each(
    objective: &[Poly],
    constraint: &Ideal,
    region: &Annulus,
    extra_seeds: &[Vec<f64>],
    cfg: &SolveConfig,
    pcfg: &PenaltyConfig,
    rng: RngSpec,
) -> Vec<Option<ConstrainedMin>> {
    let dim = region.dim();
    let s = region.outer();
    let unit = region.rescaled(s);
    let obj = EquationSystem::new(objective, dim, s, Normalization::Fixed(common_factor(objective, s)));
    let con = (!constraint.whole_space()).then(|| EquationSystem::normalized(constraint.generators(), dim, s));
    let n_extra = extra_seeds.len();
    fan_out(n_extra + pcfg.n_seeds, rng, |r, i| {
        let mut y: Vec<f64> = if i < n_extra {
            extra_seeds[i].iter().map(|v| v / s).collect()
        } else {
            random_in_annulus(r, &unit)
        };
        unit.clamp(&mut y);
        let mut trace = Vec::new();
        let con_cost = |y: &[f64]| con.as_ref().map_or(0.0, |c| c.cost(y));
        match &con {
            None => {
                let out = levenberg_marquardt(&obj, &y, cfg, Some(&unit), None);
                if matches!(out.status, Status::Failed(_)) && !out.cost.is_finite() {
                    return None;
                }
                y = out.x;
                let x: Vec<f64> = y.iter().map(|v| v * s).collect();
                trace.push(PenaltyStage {
                    mu: 0.0,
                    objective: raw_value(objective, &x),
                    constraint_residual: 0.0,
                });
            }
            Some(c) => {
                for k in 0..pcfg.stages {
                    let mu = pcfg.mu0 * 10f64.powi(k as i32);
                    let stacked = Stacked::new(dim).push(&obj, 1.0).push(c, mu.sqrt());
                    let out = levenberg_marquardt(&stacked, &y, cfg, Some(&unit), None);
                    if let Status::Failed(_) = out.status {
                        if !out.x.iter().all(|v| v.is_finite()) {
                            return None;
                        }
                    }
                    y = out.x;
                    let x: Vec<f64> = y.iter().map(|v| v * s).collect();
                    trace.push(PenaltyStage {
                        mu,
                        objective: raw_value(objective, &x),
                        constraint_residual: c.cost(&y),
                    });
                }
                if c.cost(&y) > cfg.tol_residual {
                    y = solve(c, &y, cfg, Some(&unit)).ok()?;
                }
            }
        }
        let argmin: Vec<f64> = y.iter().map(|v| v * s).collect();
        let constraint_residual = con_cost(&y);
        assert!(constraint_residual <= cfg.tol_residual, "constrained_min feasibility");
        assert!(region.contains(&argmin, 1e-12), "constrained_min left its region");
        Some(ConstrainedMin {
            value: raw_value(objective, &argmin),
            argmin,
            constraint_residual,
            trace,
        })
    })
}

/// Best (smallest objective) feasible result over all seeds; ties go to
/// the earliest seed.
pub fn constrained_min(
    objective: &[Poly],
    constraint: &Ideal,
    region: &Annulus,
    extra_seeds: &[Vec<f64>],
    cfg: &SolveConfig,
    pcfg: &PenaltyConfig,
    rng: RngSpec,
) -> Result<ConstrainedMin, NoFeasiblePoint> {
    let seeds = extra_seeds.len() + pcfg.n_seeds;
    constrained_min_each(objective, constraint, region, extra_seeds, cfg, pcfg, rng)
        .into_iter()
        .flatten()
        .fold(None, |best: Option<ConstrainedMin>, c| match best {
            Some(b) if b.value <= c.value => Some(b),
            _ => Some(c),
        })
        .ok_or(NoFeasiblePoint { seeds })
}
