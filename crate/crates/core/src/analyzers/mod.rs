//! Verdict-producing procedures built on the determinantal ideals and the
//! numerical layer. Each analyzer is a pure function of its germ(s), a
//! configuration and an [`RngSpec`](crate::numerics::RngSpec).
//!
//! Residuals quoted in reports are the normalized ones used by the solver:
//! generators rescaled to unit coordinates at the working radius and divided
//! by their largest coefficient, then squared and summed.

mod composition;
mod fiber;
mod image;
mod isv;
mod milnor_check;
mod product;
mod tameness;

pub use composition::{composition_analysis, chain_rule_holds, CompositionConfig, CompositionReport, InclusionCheck};
pub use fiber::{fiber_report, ClusterSummary, FiberConfig, FiberError, FiberReport};
pub use image::{
    axis_directions, image_germ_stability, image_membership, image_preimage, polar_directions, ImageConfig,
    ImageGermReport,
};
pub use isv::{isolated_singular_value_check, IsvConfig, IsvReport};
pub use milnor_check::{milnor_zero_fiber_check, MilnorCheckConfig, MilnorCheckReport};
pub use product::{product_structure_check, ProductConfig, ProductOutcome, ProductReport};
pub use tameness::{tameness_scan, StageReport, TamenessConfig, TamenessReport, TamenessVerdict, WitnessPoint};

use crate::determinantal::Ideal;
use crate::germ::{MapGerm, Poly};
use crate::numerics::{norm, EquationSystem};

/// Normalized residual of an ideal at unit scale `scale`.
pub(crate) struct Probe {
    sys: EquationSystem,
    vacuous: bool,
}

impl Probe {
    pub(crate) fn new(ideal: &Ideal, scale: f64) -> Self {
        Probe {
            sys: EquationSystem::normalized(ideal.generators(), ideal.dim(), scale),
            vacuous: ideal.whole_space(),
        }
    }

    pub(crate) fn residual(&self, x: &[f64]) -> f64 {
        if self.vacuous {
            0.0
        } else {
            self.sys.residual_at(x)
        }
    }

    pub(crate) fn system(&self) -> &EquationSystem {
        &self.sys
    }
}

pub(crate) fn value_norm(g: &MapGerm, x: &[f64]) -> f64 {
    norm(&g.eval_float(x).expect("point dimension"))
}

/// The components of G − v.
pub(crate) fn shifted(g: &MapGerm, v: &[f64]) -> Vec<Poly> {
    assert_eq!(v.len(), g.target_dim(), "target dimension");
    g.components()
        .iter()
        .zip(v)
        .map(|(c, &vi)| {
            let k = crate::germ::Rat::from_float(vi).expect("finite target");
            c - &Poly::constant(g.source_dim(), k)
        })
        .collect()
}

/// Σ gᵢ² as an exact polynomial.
pub(crate) fn sum_of_squares(g: &MapGerm) -> Poly {
    g.components()
        .iter()
        .fold(Poly::zero(g.source_dim()), |acc, c| &acc + &(c * c))
}

/// Keeps at most `n` items, evenly strided, preserving order.
pub(crate) fn thin<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    if n == 0 {
        return Vec::new();
    }
    let step = items.len() as f64 / n as f64;
    (0..n).map(|i| items[(i as f64 * step) as usize].clone()).collect()
}
