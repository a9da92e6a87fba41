//! Shared fixtures: corpus loading, random germs, and a small integer
//! polynomial type used as an oracle that shares no code with the crate.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use milnorlab::germ::{MapGerm, Poly, Rat};
use milnorlab::parse::parse_germ_file;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CORPUS: [&str; 5] = ["sabbah", "xy", "act", "square", "composed"];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.germ"))
}

pub fn corpus(name: &str) -> MapGerm {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_germ_file(&text).expect("corpus germ parses")
}

pub fn names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("x{i}")).collect()
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Random polynomial in `m` variables, total degree in [1, max_deg], no
/// constant term, small rational coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, m: usize, max_deg: u32, max_terms: usize) -> Poly {
    let n = rng.gen_range(1..=max_terms);
    let terms = (0..n).map(|_| {
        let deg = rng.gen_range(1..=max_deg);
        let mut e = vec![0u32; m];
        for _ in 0..deg {
            e[rng.gen_range(0..m)] += 1;
        }
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=4);
        (e, rat(if num == 0 { 1 } else { num }, den))
    });
    Poly::from_terms(m, terms.collect::<Vec<_>>()).expect("small polynomial")
}

pub fn random_germ(rng: &mut ChaCha8Rng, m: usize, p: usize, max_deg: u32) -> MapGerm {
    let comps = (0..p).map(|_| random_poly(rng, m, max_deg, 4)).collect();
    MapGerm::new(names(m), comps).expect("valid germ")
}

/// Integer polynomial: exponent vector → coefficient.
pub type IntPoly = BTreeMap<Vec<u32>, i64>;

pub fn ip_var(m: usize, i: usize) -> IntPoly {
    let mut e = vec![0; m];
    e[i] = 1;
    IntPoly::from([(e, 1)])
}

fn ip_clean(mut p: IntPoly) -> IntPoly {
    p.retain(|_, c| *c != 0);
    p
}

pub fn ip_add(a: &IntPoly, b: &IntPoly, sign: i64) -> IntPoly {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(e.clone()).or_insert(0) += sign * c;
    }
    ip_clean(out)
}

pub fn ip_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    ip_clean(out)
}

pub fn ip_diff(a: &IntPoly, i: usize) -> IntPoly {
    let mut out = IntPoly::new();
    for (e, c) in a {
        if e[i] > 0 {
            let mut e2 = e.clone();
            e2[i] -= 1;
            *out.entry(e2).or_insert(0) += c * e[i] as i64;
        }
    }
    ip_clean(out)
}

pub fn ip_neg(a: &IntPoly) -> IntPoly {
    a.iter().map(|(e, c)| (e.clone(), -c)).collect()
}

/// 3×3 determinant by cofactor expansion along the first row.
pub fn ip_det3(m: &[[IntPoly; 3]; 3]) -> IntPoly {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let a = ip_mul(&m[rows[0]][cols[0]], &m[rows[1]][cols[1]]);
        let b = ip_mul(&m[rows[0]][cols[1]], &m[rows[1]][cols[0]]);
        ip_add(&a, &b, -1)
    };
    let mut det = IntPoly::new();
    #[allow(clippy::needless_range_loop)]
    for c in 0..3 {
        let term = ip_mul(&m[0][c], &minor(0, c));
        det = ip_add(&det, &term, if c % 2 == 0 { 1 } else { -1 });
    }
    det
}

/// Converts a crate polynomial with integer coefficients.
pub fn to_int_poly(p: &Poly) -> IntPoly {
    p.terms()
        .map(|(mono, c)| {
            assert!(c.is_integer(), "non-integer coefficient {c}");
            (mono.exponents().to_vec(), c.to_integer().to_i64().expect("fits i64"))
        })
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub fn uniform_point(rng: &mut ChaCha8Rng, m: usize, half_width: f64) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-half_width..half_width)).collect()
}
