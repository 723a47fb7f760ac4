use std::f64::consts::PI;

use circbut::arith::divisors;
use circbut::cyclotomic::{
    cyclotomic_polynomial, decompose_vanishing_sum, is_zero_sum, CycPoly, CyclotomicError,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FLOAT_ZERO_TOL: f64 = 1e-8;

fn float_sum(l: usize, coeffs: &[i64]) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(t, &c)| Complex64::from_polar(c as f64, 2.0 * PI * t as f64 / l as f64))
        .sum()
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn exact_zero_test_matches_float_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut zeros = 0;
    for _ in 0..100_000 {
        let l = rng.gen_range(1..=24);
        // Half of the samples start from a vanishing sum of whole cosets so
        // that both verdicts are exercised.
        let mut c = vec![0i64; l];
        if rng.gen_bool(0.5) {
            let divs: Vec<u64> = divisors(l as u64).into_iter().filter(|&d| d > 1).collect();
            if !divs.is_empty() {
                for _ in 0..rng.gen_range(1..=2) {
                    let d = divs[rng.gen_range(0..divs.len())] as usize;
                    let start = rng.gen_range(0..l);
                    for k in 0..d {
                        c[(start + k * (l / d)) % l] += 1;
                    }
                }
            }
            if rng.gen_bool(0.3) {
                c[rng.gen_range(0..l)] += 1;
            }
        } else {
            for v in c.iter_mut() {
                *v = rng.gen_range(0..=4);
            }
        }
        let c: Vec<i64> = c.into_iter().map(|v| v.min(4)).collect();
        let exact = is_zero_sum(&CycPoly::new(l, c.clone()).unwrap());
        let float = float_sum(l, &c).norm() < FLOAT_ZERO_TOL;
        assert_eq!(exact, float, "l={l} coeffs={c:?}");
        zeros += exact as usize;
    }
    assert!(zeros > 1000, "too few vanishing samples: {zeros}");
}

#[test]
fn cyclotomic_product_is_x_pow_l_minus_one() {
    for l in 1..=64usize {
        let mut prod = vec![1i64];
        for d in divisors(l as u64) {
            prod = poly_mul(&prod, cyclotomic_polynomial(d as usize).coeffs());
        }
        let mut expected = vec![0i64; l + 1];
        expected[0] = -1;
        expected[l] = 1;
        assert_eq!(prod, expected, "l={l}");
        let phi = cyclotomic_polynomial(l);
        assert_eq!(*phi.coeffs().last().unwrap(), 1);
        assert_eq!(phi.degree() as u64, circbut::arith::totient(l as u64));
    }
}

/// All nondecreasing sequences of `len` values in `0..m`.
fn multisets(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(m: usize, len: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in from..m {
            cur.push(v);
            rec(m, len, v, cur, out);
            cur.pop();
        }
    }
    rec(m, len, 0, &mut cur, &mut out);
    out
}

#[test]
fn decomposition_round_trip_is_exhaustive() {
    for (p, q) in [(2, 3), (2, 5), (3, 5)] {
        let m = p * q;
        let mut vanishing = 0;
        for values in multisets(m, p + q) {
            match decompose_vanishing_sum(&values, p, q) {
                Ok(d) => {
                    vanishing += 1;
                    assert_eq!(d.reconstruct(), values);
                    assert_eq!(d.p_plus().len(), p + 1);
                    assert_eq!(d.q_plus().len(), q + 1);
                }
                Err(CyclotomicError::NotVanishing) => {}
                Err(e) => panic!("({p},{q}) {values:?}: {e}"),
            }
        }
        // One vanishing multiset per value of r.
        assert_eq!(vanishing, m);
    }
}

proptest! {
    #[test]
    fn cyclic_product_matches_float(l in 1usize..=16, a in prop::collection::vec(-3i64..=3, 16), b in prop::collection::vec(-3i64..=3, 16)) {
        let x = CycPoly::new(l, a[..l].to_vec()).unwrap();
        let y = CycPoly::new(l, b[..l].to_vec()).unwrap();
        let prod = (&x * &y).eval();
        prop_assert!((prod - x.eval() * y.eval()).norm() < 1e-9);
        prop_assert!(((&x + &y).eval() - x.eval() - y.eval()).norm() < 1e-9);
        prop_assert!((x.conj().eval() - x.eval().conj()).norm() < 1e-9);
    }
}
