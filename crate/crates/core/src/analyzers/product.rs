use serde::Serialize;

use super::{fiber_report, FiberConfig, FiberError, FiberReport};
use crate::germ::{AlgebraError, MapGerm};
use crate::numerics::RngSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductConfig {
    pub delta: f64,
    pub eps: f64,
    pub fiber: FiberConfig,
}

impl Default for ProductConfig {
    fn default() -> Self {
        ProductConfig {
            delta: 1e-4,
            eps: 0.5,
            fiber: FiberConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductOutcome {
    /// Counts equal and each truncated-fibre component one dimension higher.
    Consistent,
    Inconsistent,
    /// A fibre report found no plateau (or no points).
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub outcome: ProductOutcome,
    pub message: String,
    /// The p ≥ 3 hypothesis under which the product statement is proven.
    pub hypothesis_met: bool,
    pub truncated: String,
    pub fiber: Option<FiberReport>,
    pub truncated_fiber: Option<FiberReport>,
}

/// Compares the fibre of F at (δ, 0, …) with the fibre of F with its last
/// component dropped at (δ, 0, …): equal component counts and dimensions
/// one higher are what a product with an interval looks like.
pub fn product_structure_check(f: &MapGerm, cfg: &ProductConfig, rng: RngSpec) -> Result<ProductReport, AlgebraError> {
    let h = f.drop_last_component()?;
    let p = f.target_dim();
    let mut v = vec![0.0; p];
    v[0] = cfg.delta;
    let run = |g: &MapGerm, v: &[f64], label: &str| -> Option<FiberReport> {
        match fiber_report(g, v, cfg.eps, &cfg.fiber, rng.fork(label)) {
            Ok(r) => Some(r),
            Err(FiberError::NoSolutionsFound { .. }) => None,
            Err(e) => panic!("fibre report arguments: {e}"),
        }
    };
    let fr = run(f, &v, "full");
    let hr = run(&h, &v[..p - 1], "truncated");
    let (outcome, message) = match (&fr, &hr) {
        (Some(a), Some(b)) if a.stable && b.stable => {
            let mut da = a.dims();
            let mut db = b.dims();
            da.sort();
            db.sort();
            let shifted: Vec<Option<usize>> = da.iter().map(|d| d.map(|x| x + 1)).collect();
            if da.iter().chain(&db).any(Option::is_none) {
                (
                    ProductOutcome::Inconclusive,
                    "inconclusive: a component is too small for a dimension estimate".to_string(),
                )
            } else if a.clusters.len() == b.clusters.len() && shifted == db {
                (
                    ProductOutcome::Consistent,
                    "consistent with product structure (component counts and dimensions only)".to_string(),
                )
            } else {
                (
                    ProductOutcome::Inconsistent,
                    format!(
                        "not consistent with product structure: {} components {:?} vs {} components {:?}",
                        a.clusters.len(),
                        da,
                        b.clusters.len(),
                        db
                    ),
                )
            }
        }
        _ => (
            ProductOutcome::Inconclusive,
            "inconclusive: no stable component count for one of the fibres".to_string(),
        ),
    };
    Ok(ProductReport {
        outcome,
        message,
        hypothesis_met: p >= 3,
        truncated: h.name().unwrap_or("truncated").to_string(),
        fiber: fr,
        truncated_fiber: hr,
    })
}
