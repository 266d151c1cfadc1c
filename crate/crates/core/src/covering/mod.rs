//! Covering systems of F_q[x] and the exhaustive coverage oracle.

mod io;
mod search;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::algebra::{FieldElem, FieldSpec, Poly};
use crate::error::{Error, Result};
use crate::rational::{inv_pow, Rational};

pub use io::{format_field_header, parse_field_header, parse_system, ProgressionJson, SystemJson};
pub use search::{monic_divisors, search_distinct};

/// Bound on exhaustive work: at most `2^bits` residues may be enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExhaustiveLimit {
    pub bits: u32,
}

impl Default for ExhaustiveLimit {
    fn default() -> Self {
        ExhaustiveLimit { bits: 24 }
    }
}

impl ExhaustiveLimit {
    pub fn new(bits: u32) -> Self {
        ExhaustiveLimit { bits: bits.clamp(1, 40) }
    }

    /// Number of residues modulo a degree-`degree` polynomial, if within the limit.
    pub fn residues(&self, field: &FieldSpec, degree: usize) -> Result<u64> {
        let needed = BigUint::from(field.q()).pow(degree as u32);
        if needed > BigUint::from(1u64) << self.bits {
            return Err(Error::ExhaustiveLimitExceeded { needed: needed.to_string(), limit_bits: self.bits });
        }
        Ok(needed.iter_u64_digits().next().unwrap_or(0))
    }
}

/// The class `offset + ⟨modulus⟩` with monic nonconstant modulus and reduced offset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArithmeticProgression {
    // field order matters for the derived Ord: modulus first
    modulus: Poly,
    offset: Poly,
}

impl ArithmeticProgression {
    pub fn new(field: &FieldSpec, offset: &Poly, modulus: &Poly) -> Result<Self> {
        match modulus.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::DegreeZero),
            _ if !modulus.is_monic() => return Err(Error::NotMonic),
            _ => {}
        }
        Ok(ArithmeticProgression { offset: field.poly_rem(offset, modulus)?, modulus: modulus.clone() })
    }

    pub fn offset(&self) -> &Poly {
        &self.offset
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn contains(&self, field: &FieldSpec, f: &Poly) -> bool {
        field.poly_rem(f, &self.modulus).map(|r| r == self.offset).unwrap_or(false)
    }
}

/// Outcome of the exhaustive coverage check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub covers: bool,
    /// Least uncovered residue mod Q, present iff `covers` is false.
    pub witness: Option<Poly>,
    pub lcm_degree: usize,
    pub residues_checked: u64,
}

/// A nonempty finite list of progressions, sorted by modulus then offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSystem {
    field: FieldSpec,
    progressions: Vec<ArithmeticProgression>,
}

impl CoveringSystem {
    pub fn new(field: FieldSpec, mut progressions: Vec<ArithmeticProgression>) -> Result<Self> {
        if progressions.is_empty() {
            return Err(Error::EmptySystem);
        }
        progressions.sort();
        Ok(CoveringSystem { field, progressions })
    }

    /// Builds a system from `(offset, modulus)` text pairs.
    pub fn from_text_pairs(field: FieldSpec, pairs: &[(&str, &str)]) -> Result<Self> {
        let progs = pairs
            .iter()
            .map(|(a, d)| ArithmeticProgression::new(&field, &field.parse_poly(a)?, &field.parse_poly(d)?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, progs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn progressions(&self) -> &[ArithmeticProgression] {
        &self.progressions
    }

    pub fn len(&self) -> usize {
        self.progressions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    /// Copy with one more progression.
    pub fn with(&self, prog: ArithmeticProgression) -> Self {
        let mut progressions = self.progressions.clone();
        progressions.push(prog);
        progressions.sort();
        CoveringSystem { field: self.field.clone(), progressions }
    }

    /// Largest number of progressions sharing one modulus.
    pub fn multiplicity(&self) -> usize {
        let mut counts: BTreeMap<&Poly, usize> = BTreeMap::new();
        for p in &self.progressions {
            *counts.entry(&p.modulus).or_default() += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    pub fn is_distinct(&self) -> bool {
        self.multiplicity() == 1
    }

    /// Least modulus degree, `deg d_1`.
    pub fn min_degree(&self) -> usize {
        self.progressions[0].modulus.degree().unwrap_or(0)
    }

    pub fn lcm_modulus(&self) -> Poly {
        self.progressions
            .iter()
            .fold(Poly::one(), |acc, p| self.field.poly_lcm(&acc, &p.modulus).expect("moduli are nonzero"))
    }

    /// `Σ 1/|d_i|`; coverage requires this to be at least one.
    pub fn density_sum(&self) -> Rational {
        let q = self.field.q() as u64;
        self.progressions
            .iter()
            .fold(Rational::zero(), |acc, p| acc + inv_pow(q, p.modulus.degree().unwrap_or(0) as u32))
    }

    /// Decides coverage by marking every member of every progression modulo Q.
    pub fn covers(&self, limit: ExhaustiveLimit) -> Result<CoverageReport> {
        let lcm = self.lcm_modulus();
        let n = lcm.degree().unwrap_or(0);
        let size = limit.residues(&self.field, n)?;
        let mut covered = vec![false; size as usize];
        for prog in &self.progressions {
            mark_members(&self.field, prog, n, &mut covered);
        }
        let witness = least_unmarked(&self.field, &covered);
        Ok(CoverageReport { covers: witness.is_none(), witness, lcm_degree: n, residues_checked: size })
    }
}

/// Marks the codes of all residues mod a degree-`n` modulus lying in `prog`
/// (whose modulus must divide it): `offset + modulus·k` for every `deg k < n - deg modulus`.
pub(crate) fn mark_members(field: &FieldSpec, prog: &ArithmeticProgression, n: usize, marks: &mut [bool]) {
    let q = field.q() as u64;
    let d = prog.modulus.coeffs();
    let free = n + 1 - d.len();
    let powers: Vec<u64> = (0..n).map(|i| q.pow(i as u32)).collect();
    let mut current: Vec<FieldElem> = (0..n).map(|i| prog.offset.coeff(i)).collect();
    let mut code = field.encode(&prog.offset);
    let mut digits = vec![0u32; free];
    loop {
        marks[code as usize] = true;
        // odometer step over the cofactor k
        let mut pos = 0;
        loop {
            if pos == free {
                return;
            }
            let old = field.elem(digits[pos]);
            let next = (digits[pos] + 1) % field.q();
            digits[pos] = next;
            let delta = field.sub(field.elem(next), old);
            for (j, &dj) in d.iter().enumerate() {
                let idx = pos + j;
                let before = current[idx];
                let after = field.add(before, field.mul(delta, dj));
                current[idx] = after;
                code = code - before.index() as u64 * powers[idx] + after.index() as u64 * powers[idx];
            }
            if next != 0 {
                break;
            }
            pos += 1;
        }
    }
}

// Least unmarked residue in canonical polynomial order. Codes in
// [q^k, q^{k+1}) are exactly the residues of degree k.
fn least_unmarked(field: &FieldSpec, marks: &[bool]) -> Option<Poly> {
    let first = marks.iter().position(|&m| !m)?;
    if first == 0 {
        return Some(Poly::zero());
    }
    let q = field.q() as usize;
    let mut hi = 1usize;
    while hi <= first {
        hi *= q;
    }
    (first..hi.min(marks.len())).filter(|&c| !marks[c]).map(|c| field.decode(c as u64)).min()
}
