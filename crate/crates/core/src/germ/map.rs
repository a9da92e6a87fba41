use std::collections::HashSet;

use super::{AlgebraError, Poly, PolyMat, Rat};
use num_traits::Zero;

/// A polynomial representative of a map germ (ℝ^m, 0) → (ℝ^p, 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapGerm {
    name: Option<String>,
    var_names: Vec<String>,
    components: Vec<Poly>,
}

impl MapGerm {
    pub fn new(var_names: Vec<String>, components: Vec<Poly>) -> Result<Self, AlgebraError> {
        let m = var_names.len();
        if components.is_empty() {
            return Err(AlgebraError::NoComponents);
        }
        if components.len() > m {
            return Err(AlgebraError::TargetExceedsSource {
                source_dim: m,
                target: components.len(),
            });
        }
        let mut seen = HashSet::new();
        for v in &var_names {
            if !seen.insert(v.as_str()) {
                return Err(AlgebraError::DuplicateVariable(v.clone()));
            }
        }
        for (i, c) in components.iter().enumerate() {
            if c.dim() != m {
                return Err(AlgebraError::DimensionMismatch {
                    expected: m,
                    found: c.dim(),
                });
            }
            if !c.constant_term().is_zero() {
                return Err(AlgebraError::NonzeroConstantTerm { component: i });
            }
        }
        Ok(MapGerm {
            name: None,
            var_names,
            components,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Identity germ on the given coordinates.
    pub fn identity(var_names: Vec<String>) -> Result<Self, AlgebraError> {
        let m = var_names.len();
        let comps = (0..m).map(|i| Poly::var(m, i)).collect::<Result<Vec<_>, _>>()?;
        MapGerm::new(var_names, comps)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn source_dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// p×m matrix of partials ∂g_i/∂x_j.
    pub fn jacobian(&self) -> PolyMat {
        let m = self.source_dim();
        let entries = self
            .components
            .iter()
            .flat_map(|g| (0..m).map(move |j| g.partial_derivative(j).expect("index < m")))
            .collect();
        PolyMat::new(self.target_dim(), m, entries).expect("jacobian shape")
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        self.components.iter().map(|g| g.eval(point)).collect()
    }

    pub fn eval_float(&self, point: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        self.components.iter().map(|g| g.eval_float(point)).collect()
    }

    /// `self ∘ inner`: substitutes the components of `inner` into `self`.
    pub fn compose(&self, inner: &MapGerm) -> Result<MapGerm, AlgebraError> {
        if inner.target_dim() != self.source_dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.source_dim(),
                found: inner.target_dim(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|g| g.substitute(&inner.components))
            .collect::<Result<Vec<_>, _>>()?;
        let h = MapGerm::new(inner.var_names.clone(), comps)?;
        Ok(match (self.name(), inner.name()) {
            (Some(a), Some(b)) => h.with_name(format!("{a}_of_{b}")),
            _ => h,
        })
    }

    /// The germ made of the first p−1 components.
    pub fn drop_last_component(&self) -> Result<MapGerm, AlgebraError> {
        if self.target_dim() < 2 {
            return Err(AlgebraError::NoComponents);
        }
        let comps = self.components[..self.target_dim() - 1].to_vec();
        let g = MapGerm::new(self.var_names.clone(), comps)?;
        Ok(match self.name() {
            Some(n) => g.with_name(format!("{n}_truncated")),
            None => g,
        })
    }

    /// Component polynomials rendered with this germ's variable names.
    pub fn component_strings(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|g| g.to_string_with(&self.var_names))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn xy_germ() -> MapGerm {
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        MapGerm::new(names(&["x", "y"]), vec![x.clone(), &x * &y]).unwrap()
    }

    fn square_germ() -> MapGerm {
        let u = Poly::var(2, 0).unwrap();
        let v = Poly::var(2, 1).unwrap();
        MapGerm::new(
            names(&["u", "v"]),
            vec![&(&u * &u) - &(&v * &v), (&u * &v).scale(&r(2))],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let x = Poly::var(2, 0).unwrap();
        let one = Poly::from_int(2, 1);
        assert_eq!(
            MapGerm::new(names(&["x", "y"]), vec![&x + &one]),
            Err(AlgebraError::NonzeroConstantTerm { component: 0 })
        );
        assert!(matches!(
            MapGerm::new(names(&["x", "x"]), vec![x.clone()]),
            Err(AlgebraError::DuplicateVariable(_))
        ));
        let t = Poly::var(1, 0).unwrap();
        assert!(matches!(
            MapGerm::new(names(&["t"]), vec![t.clone(), t]),
            Err(AlgebraError::TargetExceedsSource { .. })
        ));
        assert_eq!(MapGerm::new(names(&["x"]), vec![]), Err(AlgebraError::NoComponents));
    }

    #[test]
    fn jacobians_of_corpus_germs() {
        let j = xy_germ().jacobian();
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        assert_eq!(j.row(0), &[Poly::from_int(2, 1), Poly::zero(2)]);
        assert_eq!(j.row(1), &[y.clone(), x.clone()]);

        let j = square_germ().jacobian();
        assert_eq!(j.row(0), &[x.scale(&r(2)), y.scale(&r(-2))]);
        assert_eq!(j.row(1), &[y.scale(&r(2)), x.scale(&r(2))]);
    }

    #[test]
    fn sabbah_jacobian() {
        let x = Poly::var(3, 0).unwrap();
        let y = Poly::var(3, 1).unwrap();
        let z = Poly::var(3, 2).unwrap();
        let f = MapGerm::new(
            names(&["x", "y", "z"]),
            vec![&(&x * &x) - &(&(&y * &y) * &z), y.clone()],
        )
        .unwrap();
        let j = f.jacobian();
        assert_eq!(j.row(0), &[x.scale(&r(2)), (&y * &z).scale(&r(-2)), (&y * &y).neg()]);
        assert_eq!(j.row(1), &[Poly::zero(3), Poly::from_int(3, 1), Poly::zero(3)]);
    }

    #[test]
    fn compose_square_with_xy() {
        let h = square_germ().compose(&xy_germ()).unwrap();
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        let x2 = &x * &x;
        assert_eq!(h.components()[0], &x2 - &(&x2 * &(&y * &y)));
        assert_eq!(h.components()[1], (&x2 * &y).scale(&r(2)));
        assert_eq!(h.var_names(), xy_germ().var_names());
    }

    #[test]
    fn compose_with_identity_and_mismatch() {
        let g = square_germ();
        let id = MapGerm::identity(names(&["u", "v"])).unwrap();
        assert_eq!(g.compose(&id).unwrap().components(), g.components());
        let t = Poly::var(3, 0).unwrap();
        let f3 = MapGerm::new(names(&["a", "b", "c"]), vec![t]).unwrap();
        assert!(g.compose(&f3).is_err());
    }

    #[test]
    fn truncation() {
        let h = square_germ().drop_last_component().unwrap();
        assert_eq!(h.target_dim(), 1);
        let single = h.drop_last_component();
        assert!(single.is_err());
    }
}
