//! Explicit upper bounds for the moments, and the coverage threshold.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::covering::CoveringSystem;
use crate::distortion::PrimeTower;
use crate::friable::friable_tail_exact_top_q;
use crate::rational::{self, Rational};

type TopCache = Mutex<HashMap<(u32, usize, usize), Rational>>;

fn exact_top_cached(q: u32, t: usize, m: usize) -> Rational {
    static CACHE: OnceLock<TopCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&(q, t, m)) {
        return v.clone();
    }
    let v = friable_tail_exact_top_q(q, t, m);
    cache.lock().expect("cache lock").insert((q, t, m), v.clone());
    v
}

/// `s · Σ_{deg f ≥ deg d_1, ∂⁺f = deg p_j} q^{-deg f}`.
///
/// Bounds `M_j^{(1)}` only when `δ_i = 0` for every `i < j`.
pub fn m1_bound(system: &CoveringSystem, tower: &PrimeTower, j: usize) -> Rational {
    let top = exact_top_cached(system.field().q(), system.min_degree(), tower.prime_degree(j));
    rational::scale(&top, system.multiplicity() as u64)
}

/// `1 + Σ_{ν≥1} 2(2ν+1) x^ν` in closed form, `x = 1/P`.
pub fn prime_factor_term(norm: &BigInt) -> Rational {
    let one = Rational::one();
    let x = Rational::new(BigInt::one(), norm.clone());
    let rest = &one - &x;
    let two = Rational::from_integer(BigInt::from(2));
    &one + &two * (&two * &x / (&rest * &rest) + &x / &rest)
}

/// `s² / (|p_j| − 1)² · Π_{i<j} (1 + Σ_{ν≥1} 2(2ν+1)/|p_i|^ν)`.
pub fn m2_bound(system: &CoveringSystem, tower: &PrimeTower, j: usize) -> Rational {
    let q = BigInt::from(system.field().q());
    let norm = |i: usize| q.pow(tower.prime_degree(i) as u32);
    let s = BigInt::from(system.multiplicity());
    let pj = norm(j) - 1;
    let mut bound = Rational::new(&s * &s, &pj * &pj);
    for i in 1..j {
        bound *= prime_factor_term(&norm(i));
    }
    bound
}

/// `3(c + 3 log_q s) · ln(cs + 3s log_q s)`, in `f64`.
///
/// The outer logarithm is natural. Each operation rounds once, so the result
/// is within a few ulps of the real value away from the zero of the logarithm.
pub fn theorem_threshold(q: u32, s: u64, c: f64) -> f64 {
    let log_q_s = (s as f64).ln() / (q as f64).ln();
    let s = s as f64;
    3.0 * (c + 3.0 * log_q_s) * (c * s + 3.0 * s * log_q_s).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::rational::ratio;

    fn setup(pairs: &[(&str, &str)]) -> (CoveringSystem, PrimeTower) {
        let s = CoveringSystem::from_text_pairs(FieldSpec::prime(2).unwrap(), pairs).unwrap();
        let t = PrimeTower::build(&s);
        (s, t)
    }

    #[test]
    fn m1_examples() {
        let (s, t) = setup(&[("1", "x")]);
        assert_eq!(m1_bound(&s, &t, 1), ratio(3, 1));
        let (s2, t2) = setup(&[("1", "x"), ("0", "x")]);
        assert_eq!(m1_bound(&s2, &t2, 1), ratio(6, 1));
        // larger least modulus: geometric decay
        let (a, ta) = setup(&[("1", "x^3")]);
        let (b, tb) = setup(&[("1", "x^6")]);
        assert!(m1_bound(&b, &tb, 1) < m1_bound(&a, &ta, 1));
        assert_eq!(m1_bound(&a, &ta, 1), ratio(5, 4));
    }

    #[test]
    fn m2_examples() {
        assert_eq!(prime_factor_term(&BigInt::from(2)), ratio(11, 1));
        let (s, t) = setup(&[("1", "x")]);
        assert_eq!(m2_bound(&s, &t, 1), ratio(1, 1));
        let (s3, t3) = setup(&[("0", "x"), ("1", "x"), ("1", "x")]);
        assert_eq!(s3.multiplicity(), 3);
        assert_eq!(m2_bound(&s3, &t3, 1), ratio(9, 1));
        let (s, t) = setup(&[("1", "x"), ("1", "x^2+x+1")]);
        assert_eq!(m2_bound(&s, &t, 2), ratio(11, 9));
        // the closed form against a truncated series
        let p = BigInt::from(7);
        let mut series = ratio(1, 1);
        for nu in 1..200u32 {
            series += Rational::new(BigInt::from(2 * (2 * nu + 1)), p.pow(nu));
        }
        let diff = crate::rational::to_f64(&(prime_factor_term(&p) - series));
        assert!(diff.abs() < 1e-100);
    }

    #[test]
    fn threshold_examples() {
        let e = std::f64::consts::E;
        assert!((theorem_threshold(2, 1, e) - 3.0 * e).abs() < 1e-12);
        for c in [2.0, 10.0, 100.0] {
            let want = 3.0 * c * f64::ln(c);
            assert!(((theorem_threshold(3, 1, c) - want) / want).abs() < 1e-12);
        }
        let mut prev = 0.0;
        for c in 1..50 {
            let v = theorem_threshold(2, 3, c as f64);
            assert!(v > prev);
            prev = v;
        }
    }
}
