//! Exact counts of friable (smooth) monic polynomials.
//!
//! `ψ(n, m)` counts monic degree-`n` polynomials whose irreducible factors all
//! have degree at most `m`. It is the coefficient of `x^n` in
//! `Π_{d≤m} (1 - x^d)^{-π_q(d)}`, which we expand with exact big integers.
//! Substituting `x = 1/q` makes the series converge, so every tail sum
//! `Σ_{deg f ≥ t} q^{-deg f}` is the finite Euler product minus a finite
//! head, with no truncation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::FieldSpec;
use crate::rational::{from_uint, Rational};

/// Number of monic irreducibles of degree `d` over F_q: `(1/d) Σ_{e|d} μ(e) q^{d/e}`.
pub fn count_irreducibles(field: &FieldSpec, d: usize) -> BigUint {
    count_irreducibles_q(field.q(), d)
}

pub(crate) fn count_irreducibles_q(q: u32, d: usize) -> BigUint {
    if d == 0 {
        return BigUint::zero();
    }
    let q = BigInt::from(q);
    let mut total = BigInt::zero();
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        match mobius(e) {
            0 => {}
            s => total += BigInt::from(s) * q.pow((d / e) as u32),
        }
    }
    let (quot, rem) = total.div_rem(&BigInt::from(d));
    debug_assert!(rem.is_zero());
    quot.to_biguint().expect("count is nonnegative")
}

fn mobius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Exact table `ψ[v][μ]` for `0 ≤ v ≤ max_degree`, `1 ≤ μ ≤ max_smooth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriableTable {
    q: u32,
    max_degree: usize,
    max_smooth: usize,
    // columns[μ - 1][v]
    columns: Vec<Vec<BigUint>>,
    irreducible_counts: Vec<BigUint>,
}

impl FriableTable {
    pub fn new(field: &FieldSpec, max_degree: usize, max_smooth: usize) -> Self {
        Self::for_order(field.q(), max_degree, max_smooth)
    }

    pub(crate) fn for_order(q: u32, max_degree: usize, max_smooth: usize) -> Self {
        let irreducible_counts: Vec<BigUint> = (1..=max_smooth).map(|d| count_irreducibles_q(q, d)).collect();
        let mut series = vec![BigUint::zero(); max_degree + 1];
        series[0] = BigUint::one();
        let mut columns = Vec::with_capacity(max_smooth);
        for (i, count) in irreducible_counts.iter().enumerate() {
            let d = i + 1;
            // coefficients C(π + k - 1, k) of (1 - x^d)^{-π}
            let mut binom = vec![BigUint::one()];
            for k in 1..=max_degree / d {
                let next = &binom[k - 1] * (count + BigUint::from(k - 1)) / BigUint::from(k);
                binom.push(next);
            }
            let mut next = vec![BigUint::zero(); max_degree + 1];
            for (v, slot) in next.iter_mut().enumerate() {
                for (k, b) in binom.iter().enumerate().take(v / d + 1) {
                    if !series[v - d * k].is_zero() {
                        *slot += b * &series[v - d * k];
                    }
                }
            }
            series = next;
            columns.push(series.clone());
        }
        FriableTable { q, max_degree, max_smooth, columns, irreducible_counts }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn max_smooth(&self) -> usize {
        self.max_smooth
    }

    /// `ψ(v, μ)`; panics outside the table bounds.
    pub fn psi(&self, v: usize, mu: usize) -> &BigUint {
        assert!(mu >= 1 && mu <= self.max_smooth && v <= self.max_degree, "ψ({v},{mu}) outside table");
        &self.columns[mu - 1][v]
    }

    /// `π_q(d)` for `1 ≤ d ≤ max_smooth`.
    pub fn irreducibles(&self, d: usize) -> &BigUint {
        &self.irreducible_counts[d - 1]
    }

    /// CSV with header `n,m=1,…,m=M` and exact integer cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for mu in 1..=self.max_smooth {
            out.push_str(&format!(",m={mu}"));
        }
        out.push('\n');
        for v in 0..=self.max_degree {
            out.push_str(&v.to_string());
            for col in &self.columns {
                out.push(',');
                out.push_str(&col[v].to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// `ψ(n, m)`, the number of monic degree-`n` polynomials with all irreducible
/// factors of degree ≤ `m` (`m ≥ 1`).
pub fn psi(field: &FieldSpec, n: usize, m: usize) -> BigUint {
    FriableTable::new(field, n, m.max(1)).psi(n, m.max(1)).clone()
}

/// `Π_{d≤m} (1 - q^{-d})^{-π_q(d)} = Σ_{∂⁺f ≤ m} q^{-deg f}` (constants included).
pub fn euler_product(field: &FieldSpec, m: usize) -> Rational {
    euler_product_q(field.q(), m)
}

fn euler_product_q(q: u32, m: usize) -> Rational {
    let (n, d) = euler_parts(q, m);
    Rational::new_raw(n, d)
}

/// `(q^{Σ d π_q(d)}, Π (q^d - 1)^{π_q(d)})` over `d ≤ m`; the two are coprime.
fn euler_parts(q: u32, m: usize) -> (BigInt, BigInt) {
    let mut exponent = 0usize;
    let mut den = BigInt::one();
    for d in 1..=m {
        den *= irreducible_factor(q, d);
        exponent += d * irreducible_count(q, d);
    }
    (BigInt::from(q).pow(exponent as u32), den)
}

fn irreducible_count(q: u32, d: usize) -> usize {
    count_irreducibles_q(q, d).to_usize().expect("irreducible count fits in usize")
}

/// `(q^d - 1)^{π_q(d)}`.
fn irreducible_factor(q: u32, d: usize) -> BigInt {
    (BigInt::from(q).pow(d as u32) - BigInt::one()).pow(irreducible_count(q, d) as u32)
}

/// Unreduced `tail(t, m) = num / (D_m q^{t'})` with `t' = max(t - 1, 0)`, `m ≥ 1`.
fn tail_parts(q: u32, t: usize, m: usize) -> (BigInt, BigInt, BigInt) {
    let (n, d) = euler_parts(q, m);
    let shift = t.saturating_sub(1) as u32;
    let qt = BigInt::from(q).pow(shift);
    // head Σ_{v<t} ψ(v, m) q^{-v} = h / q^{t-1}
    let mut h = BigInt::zero();
    if t > 0 {
        let table = FriableTable::for_order(q, t - 1, m);
        for v in 0..t {
            h += BigInt::from(table.psi(v, m).clone()) * BigInt::from(q).pow(shift - v as u32);
        }
    }
    (n * &qt - h * &d, d, qt)
}

/// Exact `Σ_{deg f ≥ t, ∂⁺f ≤ m} q^{-deg f}` over monic f (constants count when `t = 0`).
/// For `m = 0` only the constant polynomial qualifies.
pub fn friable_tail(field: &FieldSpec, t: usize, m: usize) -> Rational {
    friable_tail_q(field.q(), t, m)
}

pub(crate) fn friable_tail_q(q: u32, t: usize, m: usize) -> Rational {
    if m == 0 {
        return if t == 0 { Rational::one() } else { Rational::zero() };
    }
    let (num, d, qt) = tail_parts(q, t, m);
    // num ≡ q^{Σ dπ + t'} mod D, so only the power of q can share factors
    let (num, den) = cancel_over(num, d * qt, &[BigInt::from(q)]);
    Rational::new_raw(num, den)
}

/// Cancels the common factor of `num / den`, given that every prime of `den`
/// divides one of the small `bases`. Only remainders mod the bases are taken.
fn cancel_over(mut num: BigInt, mut den: BigInt, bases: &[BigInt]) -> (BigInt, BigInt) {
    for b in bases {
        loop {
            let mut h = (&num % b).gcd(b).gcd(&(&den % b));
            if h.is_one() {
                break;
            }
            // common prime powers can be long; square while both still divide
            loop {
                let sq = &h * &h;
                if !(&num % &sq).is_zero() || !(&den % &sq).is_zero() {
                    break;
                }
                h = sq;
            }
            num /= &h;
            den /= &h;
        }
    }
    (num, den)
}

/// Exact `Σ_{deg f ≥ t, ∂⁺f = m} q^{-deg f}` over monic nonconstant f (`m ≥ 1`).
pub fn friable_tail_exact_top(field: &FieldSpec, t: usize, m: usize) -> Rational {
    friable_tail_exact_top_q(field.q(), t, m)
}

pub(crate) fn friable_tail_exact_top_q(q: u32, t: usize, m: usize) -> Rational {
    match m {
        0 => Rational::zero(),
        1 => friable_tail_q(q, t, 1) - friable_tail_q(q, t, 0),
        _ => {
            let (hi, d_hi, qt) = tail_parts(q, t, m);
            let (lo, _, _) = tail_parts(q, t, m - 1);
            // common denominator D_m q^{t'} with D_m = D_{m-1} (q^m - 1)^{π_q(m)}
            let num = hi - lo * irreducible_factor(q, m);
            // num is a unit mod (q^m - 1)^{π_q(m)}, so only D_{m-1} q^{t'} can share factors
            let mut bases = vec![BigInt::from(q)];
            bases.extend((1..m).map(|d| BigInt::from(q).pow(d as u32) - BigInt::one()).filter(|b| *b > BigInt::one()));
            let (num, den) = cancel_over(num, d_hi * qt, &bases);
            Rational::new_raw(num, den)
        }
    }
}

/// `Σ_{d≤N} π_q(d) / q^d`, the prime reciprocal sum up to norm `q^N`.
pub fn mertens_sum(field: &FieldSpec, max_degree: usize) -> Rational {
    let q = BigUint::from(field.q());
    (1..=max_degree)
        .fold(Rational::zero(), |acc, d| acc + from_uint(&count_irreducibles(field, d)) / from_uint(&q.pow(d as u32)))
}

/// `ψ(n, m) / (q^n e^{-n/2m})`, a floating diagnostic for the friable
/// estimate with unspecified constant. Meaningful for `n ≥ m ≥ 3`.
pub fn warlimont_ratio(field: &FieldSpec, n: usize, m: usize) -> f64 {
    let q = BigUint::from(field.q());
    let density = from_uint(&psi(field, n, m)) / from_uint(&q.pow(n as u32));
    crate::rational::to_f64(&density) * (n as f64 / (2.0 * m as f64)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::prime(q).unwrap()
    }

    #[test]
    fn irreducible_count_examples() {
        assert_eq!(count_irreducibles(&f(2), 1), BigUint::from(2u32));
        assert_eq!(count_irreducibles(&f(2), 2), BigUint::from(1u32));
        assert_eq!(count_irreducibles(&f(2), 4), BigUint::from(3u32));
        assert_eq!(count_irreducibles(&FieldSpec::new(2, 2, None).unwrap(), 1), BigUint::from(4u32));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&f(2), 2, 1), BigUint::from(3u32));
        assert_eq!(psi(&f(2), 5, 5), BigUint::from(32u32));
        assert_eq!(psi(&f(2), 0, 1), BigUint::from(1u32));
    }

    #[test]
    fn table_invariants() {
        let t = FriableTable::new(&f(3), 12, 12);
        for mu in 1..=12 {
            assert_eq!(t.psi(0, mu), &BigUint::one());
        }
        for v in 0..=12 {
            for mu in 1..=12 {
                if mu >= v {
                    assert_eq!(t.psi(v, mu), &BigUint::from(3u32).pow(v as u32));
                }
                if mu > 1 {
                    assert!(t.psi(v, mu) >= t.psi(v, mu - 1));
                }
            }
        }
    }

    #[test]
    fn psi_exceeds_u64() {
        let t = FriableTable::new(&f(2), 70, 70);
        assert_eq!(t.psi(70, 70), &(BigUint::one() << 70));
    }

    #[test]
    fn tail_examples() {
        assert_eq!(friable_tail(&f(2), 1, 1), ratio(3, 1));
        assert_eq!(friable_tail(&f(2), 0, 1), ratio(4, 1));
    }

    #[test]
    fn exact_top_examples() {
        assert_eq!(friable_tail_exact_top(&f(2), 1, 1), ratio(3, 1));
        // constants carry no top degree, so they are excluded even at t = 0
        assert_eq!(friable_tail_exact_top(&f(3), 0, 1), ratio(19, 8));
        assert_eq!(friable_tail_exact_top(&f(2), 2, 2), friable_tail(&f(2), 2, 2) - friable_tail(&f(2), 2, 1));
    }

    fn naive_tail(q: u32, t: usize, m: usize) -> Rational {
        let mut e = Rational::one();
        for d in 1..=m {
            let qd = BigInt::from(q).pow(d as u32);
            e *= num_traits::pow(Rational::new(qd.clone(), qd - 1), irreducible_count(q, d));
        }
        let table = FriableTable::for_order(q, t, m.max(1));
        for v in 0..t {
            let psi = if m == 0 { BigUint::from((v == 0) as u32) } else { table.psi(v, m).clone() };
            e -= from_uint(&psi) / from_uint(&BigUint::from(q).pow(v as u32));
        }
        e
    }

    #[test]
    fn reduced_forms_match_naive_arithmetic() {
        for q in [2, 3, 4] {
            for m in 0..=5 {
                for t in 0..=8 {
                    let tail = friable_tail_q(q, t, m);
                    assert_eq!(tail, naive_tail(q, t, m), "q={q} t={t} m={m}");
                    // new_raw must already be in lowest terms
                    assert_eq!(tail.clone().reduced(), tail);
                    if m >= 1 {
                        let top = friable_tail_exact_top_q(q, t, m);
                        assert_eq!(top, naive_tail(q, t, m) - naive_tail(q, t, m - 1));
                        assert_eq!(top.reduced(), top);
                    }
                }
            }
        }
    }

    #[test]
    fn mertens_examples() {
        assert_eq!(mertens_sum(&f(2), 1), ratio(1, 1));
        assert_eq!(mertens_sum(&f(2), 2), ratio(5, 4));
        assert_eq!(mertens_sum(&f(2), 3), ratio(3, 2));
    }

    #[test]
    fn friable_ratio_diagnostics_are_finite() {
        let r33 = warlimont_ratio(&f(2), 3, 3);
        assert!((r33 - 8.0 / (8.0 * (-0.5f64).exp())).abs() < 1e-12);
        let r63 = warlimont_ratio(&f(2), 6, 3);
        let r93 = warlimont_ratio(&f(2), 9, 3);
        assert!(r63.is_finite() && r63 > 0.0);
        assert!(r93 > 0.0 && r93 < 4.0 * r63);
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(got, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
