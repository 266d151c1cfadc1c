//! Univariate polynomials over F_q and the ring operations on them.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::algebra::field::{FieldElem, FieldSpec};
use crate::error::{Error, Result};

/// A polynomial in F_q[x], coefficients lowest degree first, no trailing zeros.
///
/// Ordering is by degree (zero polynomial first), then lexicographic on the
/// coefficient vector starting from the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FieldElem::ONE] }
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; k + 1];
        coeffs[k] = FieldElem::ONE;
        Poly { coeffs }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Builds a polynomial and strips trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Prime-field convenience: coefficients given as integers, constant term first.
    pub fn from_u32s(coeffs: &[u32]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| FieldElem(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElem::ONE
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElem::ONE)
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FieldSpec {
    /// `|f| = q^deg f`; `None` for the zero polynomial.
    pub fn norm(&self, f: &Poly) -> Option<BigUint> {
        f.degree().map(|d| BigUint::from(self.q()).pow(d as u32))
    }

    pub fn poly_add(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.add(f.coeff(i), g.coeff(i))).collect())
    }

    pub fn poly_sub(&self, f: &Poly, g: &Poly) -> Poly {
        let n = f.coeffs.len().max(g.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.sub(f.coeff(i), g.coeff(i))).collect())
    }

    pub fn poly_neg(&self, f: &Poly) -> Poly {
        Poly::from_coeffs(f.coeffs.iter().map(|&c| self.neg(c)).collect())
    }

    pub fn poly_scale(&self, f: &Poly, c: FieldElem) -> Poly {
        Poly::from_coeffs(f.coeffs.iter().map(|&a| self.mul(a, c)).collect())
    }

    pub fn poly_mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_zero() || g.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElem::ZERO; f.coeffs.len() + g.coeffs.len() - 1];
        for (i, &a) in f.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn poly_pow(&self, f: &Poly, k: u32) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| self.poly_mul(&acc, f))
    }

    /// Quotient and remainder with `deg r < deg g`.
    pub fn poly_divmod(&self, f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
        let lead = g.leading().ok_or(Error::DivisionByZero)?;
        let dg = g.coeffs.len() - 1;
        if f.coeffs.len() <= dg {
            return Ok((Poly::zero(), f.clone()));
        }
        let inv = self.inv(lead).ok_or(Error::DivisionByZero)?;
        let mut rem = f.coeffs.clone();
        let mut quot = vec![FieldElem::ZERO; f.coeffs.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = self.mul(rem[k + dg], inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &b) in g.coeffs.iter().enumerate() {
                rem[k + i] = self.sub(rem[k + i], self.mul(c, b));
            }
        }
        rem.truncate(dg);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn poly_rem(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        self.poly_divmod(f, g).map(|(_, r)| r)
    }

    /// True iff `g` divides `f`. Zero divides only zero.
    pub fn divides(&self, g: &Poly, f: &Poly) -> bool {
        if g.is_zero() {
            return f.is_zero();
        }
        self.poly_rem(f, g).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self, f: &Poly) -> Poly {
        match f.leading() {
            Some(c) if c != FieldElem::ONE => self.poly_scale(f, self.inv(c).expect("nonzero leading")),
            _ => f.clone(),
        }
    }

    /// Monic gcd. Fails only when both arguments are zero.
    pub fn poly_gcd(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        if f.is_zero() && g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.poly_rem(&a, &b)?;
            a = b;
            b = r;
        }
        Ok(self.monic(&a))
    }

    /// Monic lcm of two nonzero polynomials.
    pub fn poly_lcm(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        if f.is_zero() || g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let gcd = self.poly_gcd(f, g)?;
        let (q, _) = self.poly_divmod(&self.poly_mul(f, g), &gcd)?;
        Ok(self.monic(&q))
    }

    /// Extended Euclid: `(d, u, v)` with `u f + v g = d`, `d` monic.
    pub fn poly_xgcd(&self, f: &Poly, g: &Poly) -> Result<(Poly, Poly, Poly)> {
        if f.is_zero() && g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (quot, rem) = self.poly_divmod(&r0, &r1)?;
            let s2 = self.poly_sub(&s0, &self.poly_mul(&quot, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&quot, &t1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.inv(r0.leading().expect("nonzero gcd")).expect("nonzero");
        Ok((self.poly_scale(&r0, inv), self.poly_scale(&s0, inv), self.poly_scale(&t0, inv)))
    }

    /// Solves simultaneous congruences `r ≡ r_i mod m_i` for monic, nonconstant,
    /// pairwise coprime moduli. Returns `(r, Π m_i)` with `deg r < deg Π m_i`.
    pub fn crt(&self, pairs: &[(Poly, Poly)]) -> Result<(Poly, Poly)> {
        let mut residue = Poly::zero();
        let mut modulus = Poly::one();
        for (r, m) in pairs {
            if !m.is_monic() {
                return Err(Error::NotMonic);
            }
            if m.degree() == Some(0) {
                return Err(Error::DegreeZero);
            }
            let (d, u, _) = self.poly_xgcd(&modulus, m)?;
            if !d.is_one() {
                return Err(Error::NonCoprimeModuli);
            }
            // residue + modulus * u * (r - residue) ≡ r mod m, since u·modulus ≡ 1 mod m
            let diff = self.poly_rem(&self.poly_sub(r, &residue), m)?;
            let lift = self.poly_rem(&self.poly_mul(&u, &diff), m)?;
            let next_mod = self.poly_mul(&modulus, m);
            residue = self.poly_rem(&self.poly_add(&residue, &self.poly_mul(&modulus, &lift)), &next_mod)?;
            modulus = next_mod;
        }
        Ok((residue, modulus))
    }

    /// Base-q code `Σ c_i q^i` of a polynomial of degree below `width`.
    pub fn encode(&self, f: &Poly) -> u64 {
        let q = self.q() as u64;
        f.coeffs.iter().rev().fold(0u64, |acc, c| acc * q + c.0 as u64)
    }

    /// Inverse of [`FieldSpec::encode`].
    pub fn decode(&self, mut code: u64) -> Poly {
        let q = self.q() as u64;
        let mut coeffs = Vec::new();
        while code > 0 {
            coeffs.push(FieldElem((code % q) as u32));
            code /= q;
        }
        Poly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    #[test]
    fn square_in_char_two() {
        let f = f2();
        let x1 = Poly::from_u32s(&[1, 1]);
        assert_eq!(f.poly_mul(&x1, &x1), Poly::from_u32s(&[1, 0, 1]));
    }

    #[test]
    fn divmod_examples() {
        let f = f2();
        // x^2 + x by x
        let (q, r) = f.poly_divmod(&Poly::from_u32s(&[0, 1, 1]), &Poly::from_u32s(&[0, 1])).unwrap();
        assert_eq!((q, r), (Poly::from_u32s(&[1, 1]), Poly::zero()));
        // x^2 + x + 1 by x + 1: x(x+1) = x^2 + x, remainder 1
        let (q, r) = f.poly_divmod(&Poly::from_u32s(&[1, 1, 1]), &Poly::from_u32s(&[1, 1])).unwrap();
        assert_eq!((q, r), (Poly::from_u32s(&[0, 1]), Poly::one()));
        assert_eq!(f.poly_divmod(&Poly::one(), &Poly::zero()).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn gcd_lcm_examples() {
        let f = f2();
        let x = Poly::from_u32s(&[0, 1]);
        let x1 = Poly::from_u32s(&[1, 1]);
        assert_eq!(f.poly_gcd(&Poly::from_u32s(&[0, 1, 1]), &x).unwrap(), x);
        assert_eq!(f.poly_lcm(&x, &x1).unwrap(), Poly::from_u32s(&[0, 1, 1]));
        assert_eq!(f.poly_gcd(&Poly::zero(), &x1).unwrap(), x1);
        assert_eq!(f.poly_lcm(&Poly::zero(), &x1).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f.poly_gcd(&Poly::zero(), &Poly::zero()).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn gcd_is_monic_over_f3() {
        let f = FieldSpec::prime(3).unwrap();
        // 2x + 2 = 2(x + 1)
        let g = f.poly_gcd(&Poly::from_u32s(&[2, 2]), &Poly::from_u32s(&[1, 0, 2])).unwrap();
        assert!(g.is_monic());
    }

    #[test]
    fn crt_examples() {
        let f = f2();
        let x = Poly::from_u32s(&[0, 1]);
        let x1 = Poly::from_u32s(&[1, 1]);
        let (r, m) = f.crt(&[(Poly::one(), x.clone()), (Poly::zero(), x1.clone())]).unwrap();
        assert_eq!(r, x1);
        assert_eq!(m, Poly::from_u32s(&[0, 1, 1]));
        assert_eq!(f.crt(&[(Poly::zero(), x.clone())]).unwrap(), (Poly::zero(), x.clone()));
        let x2 = Poly::from_u32s(&[0, 0, 1]);
        assert_eq!(f.crt(&[(Poly::one(), x), (Poly::zero(), x2)]).unwrap_err(), Error::NonCoprimeModuli);
        assert_eq!(f.crt(&[(Poly::one(), Poly::from_u32s(&[0, 0]))]).unwrap_err(), Error::NotMonic);
    }

    #[test]
    fn crt_brute_force_oracle() {
        // enumerate the four residues mod x^2+x and keep those ≡ 1 mod x, ≡ 0 mod x+1
        let f = f2();
        let x = Poly::from_u32s(&[0, 1]);
        let x1 = Poly::from_u32s(&[1, 1]);
        let hits: Vec<Poly> = (0..4)
            .map(|c| f.decode(c))
            .filter(|r| f.poly_rem(r, &x).unwrap().is_one() && f.poly_rem(r, &x1).unwrap().is_zero())
            .collect();
        assert_eq!(hits, vec![x1]);
    }

    #[test]
    fn ordering_is_degree_then_constant_first() {
        let x2 = Poly::from_u32s(&[0, 0, 1]);
        let x2x = Poly::from_u32s(&[0, 1, 1]);
        let x21 = Poly::from_u32s(&[1, 0, 1]);
        assert!(Poly::zero() < Poly::one());
        assert!(Poly::one() < Poly::from_u32s(&[0, 1]));
        assert!(x2 < x2x && x2x < x21);
    }

    #[test]
    fn encode_decode() {
        let f = FieldSpec::prime(3).unwrap();
        for c in 0..243 {
            assert_eq!(f.encode(&f.decode(c)), c);
        }
        assert!(f.norm(&Poly::zero()).is_none());
        assert_eq!(f.norm(&Poly::from_u32s(&[1, 2, 1])).unwrap(), BigUint::from(9u32));
    }
}
