use serde::Serialize;

use super::{tameness_scan, Probe, TamenessConfig, TamenessReport};
use crate::determinantal::{calibrated_tolerance, milnor_ideal, singular_ideal, zero_fiber_ideal, Ideal};
use crate::germ::{AlgebraError, MapGerm};
use crate::numerics::{variety_sample_until, Annulus, RngSpec, SolveConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionConfig {
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// Sampling stops once this many distinct points are found...
    pub min_samples: usize,
    /// ...or this many seeds have been tried, in batches of `batch`.
    pub max_seeds: usize,
    pub batch: usize,
    pub max_listed: usize,
    pub run_tameness: bool,
    pub tameness: TamenessConfig,
    pub solve: SolveConfig,
}

impl Default for CompositionConfig {
    fn default() -> Self {
        CompositionConfig {
            inner_radius: 0.05,
            outer_radius: 0.1,
            min_samples: 1000,
            max_seeds: 16384,
            batch: 1024,
            max_listed: 16,
            run_tameness: true,
            tameness: TamenessConfig::default(),
            solve: SolveConfig::default(),
        }
    }
}

/// One sampled inclusion A ⊂ B: points sampled on A (optionally filtered)
/// must have B-residual ≤ τ′.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionCheck {
    pub name: String,
    pub seeds: usize,
    pub samples: usize,
    /// Samples left after the filter (the ones actually tested).
    pub tested: usize,
    pub tau_prime: f64,
    pub max_residual: f64,
    pub violation_count: usize,
    pub violations: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionReport {
    pub composite: String,
    pub composite_components: Vec<String>,
    pub chain_rule_holds: bool,
    pub checks: Vec<InclusionCheck>,
    pub total_violations: usize,
    pub tameness_outer: Option<TamenessReport>,
    pub tameness_composite: Option<TamenessReport>,
}

/// JH = (JG∘F)·JF as an exact polynomial identity.
pub fn chain_rule_holds(outer: &MapGerm, inner: &MapGerm) -> Result<bool, AlgebraError> {
    let h = outer.compose(inner)?;
    let rhs = outer
        .jacobian()
        .substitute(inner.components())?
        .checked_mul(&inner.jacobian())?;
    Ok(h.jacobian() == rhs)
}

#[allow(clippy::too_many_arguments)]
fn inclusion(
    name: &str,
    sample_on: &Ideal,
    filter: impl Fn(&[f64]) -> bool,
    target: &Ideal,
    region: &Annulus,
    cfg: &CompositionConfig,
    rng: RngSpec,
) -> InclusionCheck {
    let tau = cfg.solve.tol_residual;
    let tau_prime = calibrated_tolerance(tau, sample_on.max_degree().max(target.max_degree()));
    let sample = variety_sample_until(sample_on, region, cfg.min_samples, cfg.batch, cfg.max_seeds, &cfg.solve, rng);
    let pts = sample.points;
    let probe = Probe::new(target, region.outer());
    let tested: Vec<(&Vec<f64>, f64)> = pts
        .iter()
        .filter(|x| filter(x))
        .map(|x| (x, probe.residual(x)))
        .collect();
    let bad: Vec<Vec<f64>> = tested
        .iter()
        .filter(|(_, r)| *r > tau_prime)
        .map(|(x, _)| (*x).clone())
        .collect();
    InclusionCheck {
        name: name.into(),
        seeds: sample.seeds,
        samples: pts.len(),
        tested: tested.len(),
        tau_prime,
        max_residual: tested.iter().map(|t| t.1).fold(0.0, f64::max),
        violation_count: bad.len(),
        violations: super::thin(&bad, cfg.max_listed),
    }
}

/// Builds H = G∘F and checks the inclusions behind its tameness on samples:
/// (i) Sing H ⊂ F⁻¹(0), (ii) M(H) ∖ H⁻¹(0) ⊂ M(F), (iii) F⁻¹(0) ⊂ H⁻¹(0).
pub fn composition_analysis(
    outer: &MapGerm,
    inner: &MapGerm,
    cfg: &CompositionConfig,
    rng: RngSpec,
) -> Result<CompositionReport, AlgebraError> {
    let h = outer.compose(inner)?;
    let chain = chain_rule_holds(outer, inner)?;
    let region = Annulus::new(cfg.inner_radius, cfg.outer_radius, inner.source_dim())
        .map_err(|e| AlgebraError::Shape(e.to_string()))?;
    let tau = cfg.solve.tol_residual;
    let zf_inner = zero_fiber_ideal(inner);
    let zf_h = zero_fiber_ideal(&h);
    let h_probe = Probe::new(&zf_h, region.outer());

    let checks = vec![
        inclusion(
            "sing_composite_in_inner_zero_fiber",
            &singular_ideal(&h),
            |_| true,
            &zf_inner,
            &region,
            cfg,
            rng.fork("i"),
        ),
        inclusion(
            "milnor_composite_off_zero_fiber_in_milnor_inner",
            &milnor_ideal(&h),
            |x| h_probe.residual(x) > tau,
            &milnor_ideal(inner),
            &region,
            cfg,
            rng.fork("ii"),
        ),
        inclusion(
            "inner_zero_fiber_in_composite_zero_fiber",
            &zf_inner,
            |_| true,
            &zf_h,
            &region,
            cfg,
            rng.fork("iii"),
        ),
    ];
    let total_violations = checks.iter().map(|c| c.violation_count).sum();
    let (tameness_outer, tameness_composite) = if cfg.run_tameness {
        (
            Some(tameness_scan(inner, &cfg.tameness, rng.fork("tame_inner"))),
            Some(tameness_scan(&h, &cfg.tameness, rng.fork("tame_composite"))),
        )
    } else {
        (None, None)
    };
    Ok(CompositionReport {
        composite: h.name().unwrap_or("composite").to_string(),
        composite_components: h.component_strings(),
        chain_rule_holds: chain,
        checks,
        total_violations,
        tameness_outer,
        tameness_composite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_germ_file;

    #[test]
    fn identity_outer_is_tautological() {
        let f = parse_germ_file("vars: x y z\npoly: y^4 - z^2*x^2 - x^4\npoly: x*y\n").unwrap();
        let id = MapGerm::identity(vec!["u".into(), "v".into()]).unwrap();
        let cfg = CompositionConfig {
            min_samples: 100,
            run_tameness: false,
            ..Default::default()
        };
        let r = composition_analysis(&id, &f, &cfg, RngSpec::new(3)).unwrap();
        assert!(r.chain_rule_holds);
        assert_eq!(r.total_violations, 0, "{r:?}");
        assert_eq!(r.composite_components, f.component_strings());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = parse_germ_file("vars: x y z\npoly: x\npoly: y\npoly: z\n").unwrap();
        let g = parse_germ_file("vars: u v\npoly: u\n").unwrap();
        assert!(composition_analysis(&g, &f, &CompositionConfig::default(), RngSpec::new(1)).is_err());
    }
}
