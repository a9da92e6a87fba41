use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

pub type Rat = BigRational;

/// Hard cap on the number of terms any single polynomial may carry.
pub const MAX_TERMS: usize = 1_000_000;

/// Exponent vector of a monomial. Ordered graded-lexicographically with the
/// first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn new(exponents: Vec<u32>) -> Self {
        Mono(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Mono(vec![0; dim])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `dim` variables with rational coefficients.
///
/// Zero coefficients are never stored and terms live in a sorted map, so two
/// polynomials are mathematically equal exactly when they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Poly::zero(dim);
        if !c.is_zero() {
            p.terms.insert(Mono::one(dim), c);
        }
        p
    }

    pub fn from_int(dim: usize, c: i64) -> Self {
        Poly::constant(dim, Rat::from_integer(BigInt::from(c)))
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Result<Self, AlgebraError> {
        if i >= dim {
            return Err(AlgebraError::IndexOutOfRange { index: i, dim });
        }
        let mut e = vec![0; dim];
        e[i] = 1;
        Ok(Poly::monomial(Mono(e), Rat::one()))
    }

    pub fn monomial(mono: Mono, coeff: Rat) -> Self {
        let mut p = Poly::zero(mono.dim());
        if !coeff.is_zero() {
            p.terms.insert(mono, coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Poly::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            p.add_term(Mono(e), c);
        }
        p.check_size()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Mono::degree)
    }

    /// Smallest total degree among the terms (0 for the zero polynomial).
    pub fn min_degree(&self) -> u32 {
        self.terms.keys().next().map_or(0, Mono::degree)
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Mono::one(self.dim))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn add_term(&mut self, mono: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    fn check_dim(&self, other: &Poly) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    fn check_size(&self) -> Result<(), AlgebraError> {
        if self.terms.len() > MAX_TERMS {
            return Err(AlgebraError::TermLimit { limit: MAX_TERMS });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.check_size()?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out.check_size()?;
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dim(other)?;
        let mut out = Poly::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
                if out.terms.len() > MAX_TERMS {
                    return Err(AlgebraError::TermLimit { limit: MAX_TERMS });
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Poly, AlgebraError> {
        let mut acc = Poly::constant(self.dim, Rat::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Rat, AlgebraError> {
        if point.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation. Powers of each coordinate are tabulated
    /// once, then terms are accumulated from the highest degree down.
    pub fn eval_float(&self, point: &[f64]) -> Result<f64, AlgebraError> {
        if point.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let table: Vec<Vec<f64>> = point
            .iter()
            .map(|&x| {
                let mut row = Vec::with_capacity(max_exp + 1);
                let mut v = 1.0;
                for _ in 0..=max_exp {
                    row.push(v);
                    v *= x;
                }
                row
            })
            .collect();
        let mut acc = 0.0;
        for (m, c) in self.terms.iter().rev() {
            let mut t = rat_to_f64(c);
            for (row, &e) in table.iter().zip(m.exponents()) {
                t *= row[e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Poly, AlgebraError> {
        if i >= self.dim {
            return Err(AlgebraError::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        let mut out = Poly::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Mono(exps), c * Rat::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    /// Substitutes `args[j]` for the j-th variable. All arguments must share
    /// one ambient dimension, which becomes the dimension of the result.
    pub fn substitute(&self, args: &[Poly]) -> Result<Poly, AlgebraError> {
        if args.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: args.len(),
            });
        }
        let out_dim = match args.first() {
            Some(a) => a.dim,
            None => 0,
        };
        for a in args {
            if a.dim != out_dim {
                return Err(AlgebraError::DimensionMismatch {
                    expected: out_dim,
                    found: a.dim,
                });
            }
        }
        // powers[j][e] = args[j]^e, built lazily up to the largest exponent used
        let mut powers: Vec<Vec<Poly>> = args
            .iter()
            .map(|_| vec![Poly::constant(out_dim, Rat::one())])
            .collect();
        for m in self.terms.keys() {
            for (j, &e) in m.exponents().iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().checked_mul(&args[j])?;
                    powers[j].push(next);
                }
            }
        }
        let mut out = Poly::zero(out_dim);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(out_dim, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.checked_mul(&powers[j][e as usize])?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Largest absolute coefficient as a float (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Renders the polynomial with the given variable names, highest
    /// graded-lex term first, e.g. `x*y^2 + 2*x*z`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (j, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[j].clone()),
                    _ => factors.push(format!("{}^{}", names[j], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.dim)))
    }
}

// Operator sugar for tests and internal code where dimensions are known to
// agree. These panic on mismatch; use the `checked_*` methods otherwise.
impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}
