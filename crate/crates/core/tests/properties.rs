mod common;

use common::*;
use milnorlab::determinantal::{milnor_ideal, residual_system, singular_ideal, zero_fiber_ideal};
use milnorlab::germ::{Poly, PolyMat, Rat};
use milnorlab::numerics::single_linkage;
use milnorlab::parse::{parse_germ_file, parse_poly, format_germ};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_f64(c: &Rat) -> f64 {
    c.numer().to_string().parse::<f64>().unwrap() / c.denom().to_string().parse::<f64>().unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_prints_and_parses_back(seed in any::<u64>(), m in 1usize..4) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, m, 4, 6);
        let text = p.to_string_with(&names(m));
        prop_assert_eq!(parse_poly(&text, &names(m)).unwrap(), p);
    }

    #[test]
    fn germ_file_round_trip(seed in any::<u64>(), m in 2usize..4) {
        let mut r = rng(seed);
        let p = r.gen_range(1..=m);
        let g = random_germ(&mut r, m, p, 3).with_name("g");
        let back = parse_germ_file(&format_germ(&g)).unwrap();
        prop_assert_eq!(back.components(), g.components());
        prop_assert_eq!(back.name(), Some("g"));
    }

    #[test]
    fn chain_rule(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=3);
        let k = r.gen_range(1..=m);
        let p = r.gen_range(1..=k);
        let inner = random_germ(&mut r, m, k, 3);
        let outer = random_germ(&mut r, k, p, 3);
        let h = outer.compose(&inner).unwrap();
        let jg_f = outer.jacobian().substitute(inner.components()).unwrap();
        prop_assert_eq!(h.jacobian(), jg_f.checked_mul(&inner.jacobian()).unwrap());
    }

    #[test]
    fn compose_commutes_with_eval(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inner = random_germ(&mut r, 2, 2, 3);
        let outer = random_germ(&mut r, 2, 2, 3);
        let h = outer.compose(&inner).unwrap();
        let x = vec![rat(r.gen_range(-20..20), r.gen_range(1..9)), rat(r.gen_range(-20..20), r.gen_range(1..9))];
        prop_assert_eq!(h.eval(&x).unwrap(), outer.eval(&inner.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn determinant_is_alternating(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let entries: Vec<Poly> = (0..n * n).map(|_| random_poly(&mut r, 2, 2, 3)).collect();
        let a = PolyMat::new(n, n, entries).unwrap();
        let (i, j) = (0, r.gen_range(1..n));
        prop_assert_eq!(a.swap_rows(i, j).det().unwrap(), a.det().unwrap().neg());
        let mut rows: Vec<Vec<Poly>> = (0..n).map(|k| a.row(k).to_vec()).collect();
        rows[j] = rows[i].clone();
        prop_assert!(PolyMat::from_rows(rows).unwrap().det().unwrap().is_zero());
    }

    #[test]
    fn float_eval_matches_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_poly(&mut r, 3, 4, 6);
        let q: Vec<Rat> = (0..3).map(|_| rat(r.gen_range(-8..8), 8)).collect();
        let xf: Vec<f64> = q.iter().map(to_f64).collect();
        let exact_f = to_f64(&p.eval(&q).unwrap());
        let approx = p.eval_float(&xf).unwrap();
        prop_assert!((approx - exact_f).abs() <= 1e-12 * (1.0 + exact_f.abs()));
    }

    #[test]
    fn single_linkage_ignores_input_order(seed in any::<u64>(), n in 1usize..120) {
        let mut r = rng(seed);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| uniform_point(&mut r, 3, 1.0)).collect();
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut r);
        let h = r.gen_range(0.05..0.5);
        let mut a = single_linkage(&pts, h).sizes();
        let mut b = single_linkage(&shuffled, h).sizes();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn residual_gradients_match_central_differences() {
    let mut r = rng(5);
    for name in CORPUS {
        let g = corpus(name);
        for ideal in [singular_ideal(&g), milnor_ideal(&g), zero_fiber_ideal(&g)] {
            let sys = residual_system(&ideal);
            for _ in 0..20 {
                let x = uniform_point(&mut r, g.source_dim(), 1.0);
                let grad = sys.gradient_at(&x);
                let scale = grad.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for i in 0..x.len() {
                    let (mut xp, mut xm) = (x.clone(), x.clone());
                    xp[i] += 1e-6;
                    xm[i] -= 1e-6;
                    let fd = (sys.residual_at(&xp) - sys.residual_at(&xm)) / 2e-6;
                    assert!((fd - grad[i]).abs() <= 1e-5 * scale.max(1e-9), "{name}: {fd} vs {}", grad[i]);
                }
            }
        }
    }
}

#[test]
fn singular_minors_are_maximal_minors_of_the_jacobian() {
    let g = corpus("act");
    let minors = g.jacobian().minors(2).unwrap();
    assert_eq!(singular_ideal(&g).generators(), minors.as_slice());
}

#[test]
fn shipped_composite_matches_compose() {
    let h = corpus("square").compose(&corpus("act")).unwrap();
    let shipped = corpus("composed");
    assert_eq!(shipped.components(), h.components());
    assert_eq!(shipped.var_names(), h.var_names());
}
