//! Trial-division factorization and enumeration of monic polynomials.

use crate::algebra::field::{FieldElem, FieldSpec};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

/// `unit · Π factor^exponent`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self, field: &FieldSpec) -> Poly {
        let prod = self.factors.iter().fold(Poly::one(), |acc, (p, e)| field.poly_mul(&acc, &field.poly_pow(p, *e)));
        field.poly_scale(&prod, self.unit)
    }
}

/// Iterates the q^n monic polynomials of degree n, lexicographic on the
/// coefficient vector from the constant term upward.
pub struct MonicIter {
    field: FieldSpec,
    degree: usize,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.done {
            return None;
        }
        let mut coeffs: Vec<FieldElem> = self.digits.iter().map(|&c| self.field.elem(c)).collect();
        coeffs.push(FieldElem::ONE);
        // advance: the highest non-leading coefficient varies fastest
        let q = self.field.q();
        let mut k = self.degree;
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.digits[k] += 1;
            if self.digits[k] < q {
                break;
            }
            self.digits[k] = 0;
        }
        Some(Poly::from_coeffs(coeffs))
    }
}

impl FieldSpec {
    pub fn monic_iter(&self, degree: usize) -> MonicIter {
        MonicIter { field: self.clone(), degree, digits: vec![0; degree], done: false }
    }

    /// All monic polynomials of degree `n`, in canonical order.
    pub fn enumerate_monic(&self, n: usize) -> Vec<Poly> {
        self.monic_iter(n).collect()
    }

    /// All monic irreducibles of degree `d`, in canonical order.
    pub fn enumerate_irreducibles(&self, d: usize) -> Vec<Poly> {
        if d == 0 {
            return Vec::new();
        }
        self.monic_iter(d).filter(|f| self.smallest_factor(f).is_none()).collect()
    }

    // Least monic divisor of degree in [1, deg f / 2], by trial division.
    fn smallest_factor(&self, f: &Poly) -> Option<Poly> {
        let n = f.degree()?;
        (1..=n / 2).find_map(|d| self.monic_iter(d).find(|g| self.divides(g, f)))
    }

    /// Irreducibility of a monic polynomial of positive degree.
    pub fn irreducible_test(&self, f: &Poly) -> Result<bool> {
        match f.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Err(Error::DegreeZero),
            Some(_) if !f.is_monic() => Err(Error::NotMonic),
            Some(_) => Ok(self.smallest_factor(f).is_none()),
        }
    }

    /// Factorization into monic irreducibles by trial division in canonical order.
    pub fn factor(&self, f: &Poly) -> Result<Factorization> {
        let unit = f.leading().ok_or(Error::ZeroPolynomial)?;
        let mut rest = self.monic(f);
        let mut factors = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            for g in self.monic_iter(d) {
                let mut e = 0;
                loop {
                    let (quot, rem) = self.poly_divmod(&rest, &g)?;
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quot;
                    e += 1;
                }
                if e > 0 {
                    factors.push((g, e));
                }
                if rest.degree().unwrap_or(0) < 2 * d {
                    break;
                }
            }
            d += 1;
        }
        if rest.degree().unwrap_or(0) >= 1 {
            factors.push((rest, 1));
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }
}
