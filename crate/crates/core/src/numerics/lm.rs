//! Damped least squares (Levenberg–Marquardt) for polynomial systems.
//!
//! Systems here are usually overdetermined and rank deficient exactly at the
//! points of interest, so the update uses (JᵀJ + λI) with the gain-ratio
//! damping schedule of Madsen and Nielsen. An optional shell constraint is
//! enforced by radially clamping every trial point.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use super::compiled::{EquationSystem, Residuals};
use super::region::{norm, Annulus};
use crate::germ::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveConfig {
    /// Success threshold on the sum of squared residuals.
    pub tol_residual: f64,
    pub max_iterations: usize,
    /// Initial λ relative to the largest diagonal entry of JᵀJ.
    pub initial_damping: f64,
    /// Minimum gain ratio for a step to be accepted.
    pub accept_ratio: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol_residual: 1e-12,
            max_iterations: 200,
            initial_damping: 1e-3,
            accept_ratio: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    #[error("iteration limit reached")]
    MaxIterations,
    #[error("iterates diverged")]
    Diverged,
    #[error("no acceptable update (damping exhausted)")]
    SingularUpdate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    Stationary,
    Failed(Failure),
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub x: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub status: Status,
}

const MAX_DAMPING: f64 = 1e16;
const DIVERGENCE_NORM: f64 = 1e10;

/// Core iteration. With `target = Some(tol)` it stops successfully once the
/// cost drops to `tol`; with `None` it runs until the iterates stall and
/// reports the best point as [`Status::Stationary`].
pub fn levenberg_marquardt(
    sys: &dyn Residuals,
    seed: &[f64],
    cfg: &SolveConfig,
    region: Option<&Annulus>,
    target: Option<f64>,
) -> LmOutcome {
    let n = sys.dim();
    let k = sys.len();
    assert_eq!(seed.len(), n, "seed dimension");
    let mut x = seed.to_vec();
    if let Some(a) = region {
        a.clamp(&mut x);
    }
    let mut r = DVector::zeros(k);
    let mut j = DMatrix::zeros(k, n);
    sys.eval(&x, r.as_mut_slice());
    let mut cost = r.norm_squared();
    let done = |c: f64| target.is_some_and(|t| c <= t);
    if done(cost) || k == 0 {
        return LmOutcome {
            x,
            cost,
            iterations: 0,
            status: Status::Converged,
        };
    }
    sys.jacobian(&x, &mut j);
    let mut jtj = j.transpose() * &j;
    let mut grad = j.transpose() * &r;
    let max_diag = (0..n).map(|i| jtj[(i, i)]).fold(0.0, f64::max);
    let mut lambda = cfg.initial_damping * if max_diag > 0.0 { max_diag } else { 1.0 };
    let mut nu = 2.0;
    let mut stalls = 0;

    for it in 1..=cfg.max_iterations {
        let mut a = jtj.clone();
        for i in 0..n {
            a[(i, i)] += lambda;
        }
        let Some(chol) = a.cholesky() else {
            lambda *= nu;
            nu *= 2.0;
            if lambda > MAX_DAMPING {
                return fail(x, cost, it, target, Failure::SingularUpdate);
            }
            continue;
        };
        let step = chol.solve(&(-&grad));
        let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        if let Some(reg) = region {
            reg.clamp(&mut trial);
        }
        if trial.iter().any(|v| !v.is_finite()) || norm(&trial) > DIVERGENCE_NORM {
            return fail(x, cost, it, target, Failure::Diverged);
        }
        let taken = DVector::from_iterator(n, trial.iter().zip(&x).map(|(a, b)| a - b));
        let mut r_new = DVector::zeros(k);
        sys.eval(&trial, r_new.as_mut_slice());
        let cost_new = r_new.norm_squared();
        if !cost_new.is_finite() {
            return fail(x, cost, it, target, Failure::Diverged);
        }
        let predicted = cost - (&r + &j * &taken).norm_squared();
        let actual = cost - cost_new;
        let gain = if predicted > 0.0 { actual / predicted } else { -1.0 };
        if gain > cfg.accept_ratio && actual > 0.0 {
            let small_step = taken.norm() <= 1e-15 * (norm(&x) + 1e-15);
            let small_gain = actual <= 1e-15 * cost;
            x = trial;
            r = r_new;
            cost = cost_new;
            if done(cost) {
                return LmOutcome {
                    x,
                    cost,
                    iterations: it,
                    status: Status::Converged,
                };
            }
            sys.jacobian(&x, &mut j);
            jtj = j.transpose() * &j;
            grad = j.transpose() * &r;
            lambda *= (1.0 / 3.0f64).max(1.0 - (2.0 * gain - 1.0).powi(3));
            nu = 2.0;
            stalls = if small_step || small_gain { stalls + 1 } else { 0 };
            if stalls >= 3 {
                return fail(x, cost, it, target, Failure::SingularUpdate);
            }
        } else {
            lambda *= nu;
            nu *= 2.0;
            if lambda > MAX_DAMPING {
                return fail(x, cost, it, target, Failure::SingularUpdate);
            }
        }
    }
    fail(x, cost, cfg.max_iterations, target, Failure::MaxIterations)
}

fn fail(x: Vec<f64>, cost: f64, iterations: usize, target: Option<f64>, why: Failure) -> LmOutcome {
    // Pure minimization has no success threshold: running out of progress
    // just means we are at a (local) minimum.
    let status = match (target, why) {
        (None, Failure::Diverged) => Status::Failed(why),
        (None, _) => Status::Stationary,
        (Some(_), _) => Status::Failed(why),
    };
    LmOutcome {
        x,
        cost,
        iterations,
        status,
    }
}

/// Finds a point with cost ≤ `cfg.tol_residual`, optionally inside `region`.
pub fn solve(
    sys: &dyn Residuals,
    seed: &[f64],
    cfg: &SolveConfig,
    region: Option<&Annulus>,
) -> Result<Vec<f64>, Failure> {
    let out = levenberg_marquardt(sys, seed, cfg, region, Some(cfg.tol_residual));
    match out.status {
        Status::Converged => {
            let check = sys.cost(&out.x);
            assert!(
                check <= cfg.tol_residual,
                "solver postcondition violated: cost {check} > {}",
                cfg.tol_residual
            );
            if let Some(a) = region {
                assert!(a.contains(&out.x, 1e-12), "solver left its region");
            }
            Ok(out.x)
        }
        Status::Failed(f) => Err(f),
        Status::Stationary => Err(Failure::SingularUpdate),
    }
}

/// Solves the raw polynomial system `system = 0` (no rescaling or
/// normalization) from `seed`.
pub fn lm_solve(system: &[Poly], seed: &[f64], cfg: &SolveConfig) -> Result<Vec<f64>, Failure> {
    assert!(!system.is_empty(), "empty system");
    let dim = system[0].dim();
    let sys = EquationSystem::new(system, dim, 1.0, super::compiled::Normalization::None);
    let x = solve(&sys, seed, cfg, None)?;
    // Raw coefficients can be tiny, so meeting the tolerance says little
    // about the location; a short undamped-to-stall polish costs a few steps.
    let polish = SolveConfig {
        max_iterations: 30,
        ..*cfg
    };
    let out = levenberg_marquardt(&sys, &x, &polish, None, None);
    Ok(if out.cost <= sys.cost(&x) { out.x } else { x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn polys(texts: &[&str], vars: &[&str]) -> Vec<Poly> {
        let v: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        texts.iter().map(|t| parse_poly(t, &v).unwrap()).collect()
    }

    #[test]
    fn squaring_map_fibre_point() {
        let sys = polys(&["u^2 - v^2 - 1/10000", "2*u*v"], &["u", "v"]);
        let x = lm_solve(&sys, &[0.02, 0.001], &SolveConfig::default()).unwrap();
        assert!((x[0] - 0.01).abs() < 1e-6, "{x:?}");
        assert!(x[1].abs() < 1e-6, "{x:?}");
        let x = lm_solve(&sys, &[-0.03, 0.002], &SolveConfig::default()).unwrap();
        assert!((x[0] + 0.01).abs() < 1e-6, "{x:?}");
    }

    #[test]
    fn linear_equation_any_seed() {
        let sys = polys(&["x"], &["x", "y"]);
        for seed in [[1.0, 2.0], [-30.0, 0.5], [1e-3, -7.0]] {
            let x = lm_solve(&sys, &seed, &SolveConfig::default()).unwrap();
            assert!(x[0].abs() <= 1e-6);
        }
    }

    #[test]
    fn no_real_solution_fails() {
        let sys = polys(&["x^2 + 1"], &["x"]);
        assert!(lm_solve(&sys, &[0.3], &SolveConfig::default()).is_err());
    }

    #[test]
    fn minimization_stops_on_shell_boundary() {
        // ‖(u²−v², 2uv)‖² = (u²+v²)², smallest on the inner sphere
        let v: Vec<String> = vec!["u".into(), "v".into()];
        let g = vec![
            parse_poly("u^2 - v^2", &v).unwrap(),
            parse_poly("2*u*v", &v).unwrap(),
        ];
        let sys = EquationSystem::new(&g, 2, 1.0, super::super::compiled::Normalization::None);
        let shell = Annulus::new(0.05, 0.1, 2).unwrap();
        let out = levenberg_marquardt(&sys, &[0.07, 0.05], &SolveConfig::default(), Some(&shell), None);
        assert_eq!(out.status, Status::Stationary);
        assert!((norm(&out.x) - 0.05).abs() < 1e-12);
        assert!((out.cost - 0.05f64.powi(4)).abs() < 1e-15);
    }
}
