//! Floating-point forms of exact polynomial systems.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::germ::Poly;

/// Flat term list of a polynomial with f64 coefficients.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    dim: usize,
    coeffs: Vec<f64>,
    exps: Vec<u32>,
}

impl CompiledPoly {
    /// Compiles `p(scale · y)` with every coefficient multiplied by `factor`.
    pub fn scaled(p: &Poly, scale: f64, factor: f64) -> Self {
        let dim = p.dim();
        let mut coeffs = Vec::with_capacity(p.num_terms());
        let mut exps = Vec::with_capacity(p.num_terms() * dim);
        for (m, c) in p.terms().rev() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            coeffs.push(c * scale.powi(m.degree() as i32) * factor);
            exps.extend_from_slice(m.exponents());
        }
        CompiledPoly { dim, coeffs, exps }
    }

    pub fn new(p: &Poly) -> Self {
        CompiledPoly::scaled(p, 1.0, 1.0)
    }

    pub fn max_exponent(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn eval_with(&self, table: &PowerTable) -> f64 {
        let mut acc = 0.0;
        for (t, &c) in self.coeffs.iter().enumerate() {
            let mut v = c;
            for (j, &e) in self.exps[t * self.dim..(t + 1) * self.dim].iter().enumerate() {
                if e > 0 {
                    v *= table.get(j, e);
                }
            }
            acc += v;
        }
        acc
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_with(&PowerTable::new(x, self.max_exponent()))
    }
}

/// powers[j][e] = x_j^e for e up to a fixed maximum.
#[derive(Debug, Clone)]
pub struct PowerTable {
    width: usize,
    values: Vec<f64>,
}

impl PowerTable {
    pub fn new(x: &[f64], max_exp: u32) -> Self {
        let width = max_exp as usize + 1;
        let mut values = Vec::with_capacity(x.len() * width);
        for &xi in x {
            let mut v = 1.0;
            for _ in 0..width {
                values.push(v);
                v *= xi;
            }
        }
        PowerTable { width, values }
    }

    #[inline]
    fn get(&self, j: usize, e: u32) -> f64 {
        self.values[j * self.width + e as usize]
    }
}

/// A vector-valued residual with a Jacobian, as consumed by the solver.
pub trait Residuals: Sync {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn eval(&self, x: &[f64], out: &mut [f64]);
    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>);

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cost(&self, x: &[f64]) -> f64 {
        let mut r = vec![0.0; self.len()];
        self.eval(x, &mut r);
        r.iter().map(|v| v * v).sum()
    }
}

/// How each equation of a system is divided before squaring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// Leave coefficients as they are.
    None,
    /// Divide each equation by its largest scaled coefficient.
    MaxCoeff,
    /// Multiply every equation by the same factor.
    Fixed(f64),
}

/// Polynomial equations in scaled coordinates y = x / scale, with their
/// symbolic partial derivatives compiled alongside.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    dim: usize,
    scale: f64,
    values: Vec<CompiledPoly>,
    partials: Vec<Vec<CompiledPoly>>,
    max_exp: u32,
}

impl EquationSystem {
    pub fn new(polys: &[Poly], dim: usize, scale: f64, norm: Normalization) -> Self {
        let mut values = Vec::new();
        let mut partials = Vec::new();
        for p in polys.iter().filter(|p| !p.is_zero()) {
            assert_eq!(p.dim(), dim, "equation dimension");
            let factor = match norm {
                Normalization::None => 1.0,
                Normalization::Fixed(f) => f,
                Normalization::MaxCoeff => {
                    let m = p
                        .terms()
                        .map(|(mono, c)| {
                            c.to_f64().unwrap_or(f64::NAN).abs() * scale.powi(mono.degree() as i32)
                        })
                        .fold(0.0, f64::max);
                    if m > 0.0 {
                        1.0 / m
                    } else {
                        1.0
                    }
                }
            };
            values.push(CompiledPoly::scaled(p, scale, factor));
            // d/dy_j p(scale·y) = scale · (∂_j p)(scale·y)
            partials.push(
                (0..dim)
                    .map(|j| {
                        let d = p.partial_derivative(j).expect("j < dim");
                        CompiledPoly::scaled(&d, scale, factor * scale)
                    })
                    .collect(),
            );
        }
        let max_exp = values.iter().map(CompiledPoly::max_exponent).max().unwrap_or(0);
        EquationSystem {
            dim,
            scale,
            values,
            partials,
            max_exp,
        }
    }

    /// Equations normalized to unit coordinates at radius `scale`.
    pub fn normalized(polys: &[Poly], dim: usize, scale: f64) -> Self {
        EquationSystem::new(polys, dim, scale, Normalization::MaxCoeff)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Sum of squared residuals at an unscaled point x.
    pub fn residual_at(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().map(|v| v / self.scale).collect();
        self.cost(&y)
    }
}

impl Residuals for EquationSystem {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.values.len()
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let table = PowerTable::new(x, self.max_exp);
        for (o, p) in out.iter_mut().zip(&self.values) {
            *o = p.eval_with(&table);
        }
    }

    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>) {
        let table = PowerTable::new(x, self.max_exp);
        for (i, row) in self.partials.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                out[(i, j)] = p.eval_with(&table);
            }
        }
    }
}

/// Several residual blocks stacked, each multiplied by a weight.
pub struct Stacked<'a> {
    parts: Vec<(&'a dyn Residuals, f64)>,
    dim: usize,
}

impl<'a> Stacked<'a> {
    pub fn new(dim: usize) -> Self {
        Stacked { parts: Vec::new(), dim }
    }

    pub fn push(mut self, part: &'a dyn Residuals, weight: f64) -> Self {
        assert_eq!(part.dim(), self.dim, "block dimension");
        self.parts.push((part, weight));
        self
    }
}

impl Residuals for Stacked<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.parts.iter().map(|(p, _)| p.len()).sum()
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        let mut at = 0;
        for (p, w) in &self.parts {
            let n = p.len();
            p.eval(x, &mut out[at..at + n]);
            for v in &mut out[at..at + n] {
                *v *= w;
            }
            at += n;
        }
    }

    fn jacobian(&self, x: &[f64], out: &mut DMatrix<f64>) {
        let mut at = 0;
        for (p, w) in &self.parts {
            let n = p.len();
            let mut block = DMatrix::zeros(n, self.dim);
            p.jacobian(x, &mut block);
            for i in 0..n {
                for j in 0..self.dim {
                    out[(at + i, j)] = block[(i, j)] * w;
                }
            }
            at += n;
        }
    }
}
