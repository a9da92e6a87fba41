//! Singular-locus, Milnor-set and zero-fibre ideals as explicit generator
//! lists.
//!
//! The Milnor set is the rank-drop locus of the Jacobian augmented by the
//! gradient of ρ²/2 = ‖x‖²/2, i.e. the row (x₁, …, x_m). Off the origin this
//! row is a positive multiple of ∇ρ, so both formulations have the same
//! zero set there.

use serde::Serialize;

use crate::germ::{MapGerm, Poly, PolyMat};
use crate::parse::format_polys;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealKind {
    Singular,
    Milnor,
    ZeroFiber,
    Custom,
}

impl IdealKind {
    pub fn label(self) -> &'static str {
        match self {
            IdealKind::Singular => "singular",
            IdealKind::Milnor => "milnor",
            IdealKind::ZeroFiber => "zero_fiber",
            IdealKind::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    dim: usize,
    generators: Vec<Poly>,
    kind: IdealKind,
    whole_space: bool,
}

impl Ideal {
    pub fn custom(dim: usize, generators: Vec<Poly>) -> Ideal {
        assert!(generators.iter().all(|g| g.dim() == dim), "generator dimension");
        Ideal {
            dim,
            generators,
            kind: IdealKind::Custom,
            whole_space: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn kind(&self) -> IdealKind {
        self.kind
    }

    /// Set when the zero set is declared to be all of ℝ^m (no generators
    /// exist, as for the Milnor set of an m = p germ).
    pub fn whole_space(&self) -> bool {
        self.whole_space
    }

    /// True when every point is a zero: flagged whole space, or all
    /// generators are the zero polynomial.
    pub fn vanishes_identically(&self) -> bool {
        self.whole_space || self.generators.iter().all(Poly::is_zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(Poly::degree).max().unwrap_or(0)
    }

    /// Ideal whose zero set is the intersection of both zero sets.
    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.dim, other.dim, "ideal dimension");
        let mut generators = Vec::new();
        if !self.whole_space {
            generators.extend(self.generators.iter().cloned());
        }
        if !other.whole_space {
            generators.extend(other.generators.iter().cloned());
        }
        Ideal {
            dim: self.dim,
            generators,
            kind: IdealKind::Custom,
            whole_space: self.whole_space && other.whole_space,
        }
    }

    /// Generators in germ-file `poly:` syntax.
    pub fn to_germ_syntax(&self, vars: &[String]) -> String {
        let mut comment = format!("{} ideal, {} generator(s)", self.kind.label(), self.generators.len());
        if self.whole_space {
            comment.push_str("\nwhole space: no generators, zero set is all of R^m");
        }
        format_polys(&comment, vars, &self.generators)
    }
}

/// Sing G: all p×p minors of the Jacobian.
pub fn singular_ideal(g: &MapGerm) -> Ideal {
    let p = g.target_dim();
    Ideal {
        dim: g.source_dim(),
        generators: g.jacobian().minors(p).expect("minor expansion within term limit"),
        kind: IdealKind::Singular,
        whole_space: false,
    }
}

/// The (p+1)×m matrix with rows (x₁,…,x_m) and the Jacobian of `g`.
pub fn augmented_jacobian(g: &MapGerm) -> PolyMat {
    let m = g.source_dim();
    let row = (0..m).map(|i| Poly::var(m, i).expect("i < m")).collect();
    g.jacobian().with_row_prepended(row).expect("row length m")
}

/// M(G): all (p+1)×(p+1) minors of the augmented Jacobian; whole space when
/// m = p.
pub fn milnor_ideal(g: &MapGerm) -> Ideal {
    let p = g.target_dim();
    let m = g.source_dim();
    let whole_space = p + 1 > m;
    let generators = if whole_space {
        Vec::new()
    } else {
        augmented_jacobian(g)
            .minors(p + 1)
            .expect("minor expansion within term limit")
    };
    Ideal {
        dim: m,
        generators,
        kind: IdealKind::Milnor,
        whole_space,
    }
}

/// G⁻¹(0): the components themselves.
pub fn zero_fiber_ideal(g: &MapGerm) -> Ideal {
    Ideal {
        dim: g.source_dim(),
        generators: g.components().to_vec(),
        kind: IdealKind::ZeroFiber,
        whole_space: false,
    }
}

/// Sum of squares of the generators with its exact gradient.
#[derive(Debug, Clone)]
pub struct ResidualSystem {
    pub ideal: Ideal,
    pub residual: Poly,
    pub gradient: Vec<Poly>,
}

impl ResidualSystem {
    pub fn residual_at(&self, x: &[f64]) -> f64 {
        self.residual.eval_float(x).expect("point dimension")
    }

    pub fn gradient_at(&self, x: &[f64]) -> Vec<f64> {
        self.gradient
            .iter()
            .map(|g| g.eval_float(x).expect("point dimension"))
            .collect()
    }
}

pub fn residual_system(ideal: &Ideal) -> ResidualSystem {
    let mut residual = Poly::zero(ideal.dim);
    for g in &ideal.generators {
        residual = residual
            .checked_add(&g.checked_mul(g).expect("square within term limit"))
            .expect("sum within term limit");
    }
    let gradient = (0..ideal.dim)
        .map(|i| residual.partial_derivative(i).expect("i < dim"))
        .collect();
    ResidualSystem {
        ideal: ideal.clone(),
        residual,
        gradient,
    }
}

/// Heuristic secondary tolerance τ′ = C·τ^(1/d) with C = 10, used when a
/// point accepted at residual τ for one ideal is tested against another.
pub fn calibrated_tolerance(tau: f64, max_degree: u32) -> f64 {
    let d = max_degree.max(1) as f64;
    10.0 * tau.powf(1.0 / d)
}
