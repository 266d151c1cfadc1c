//! Distortion parameters `δ_1, …, δ_J ∈ [0, ½]`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::covering::CoveringSystem;
use crate::distortion::PrimeTower;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Where a schedule came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// `δ_j = 0` for primes of degree at most `y = C + 3 log_q s`, `½` above.
    Auto {
        c: Rational,
        y: f64,
        zero_levels: usize,
    },
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaSchedule {
    deltas: Vec<Rational>,
    provenance: Provenance,
}

fn half() -> Rational {
    rational::ratio(1, 2)
}

impl DeltaSchedule {
    pub fn explicit(deltas: Vec<Rational>) -> Result<Self> {
        for d in &deltas {
            if d.is_negative() || *d > half() {
                return Err(Error::InvalidDelta(rational::to_text(d)));
            }
        }
        Ok(DeltaSchedule { deltas, provenance: Provenance::Explicit })
    }

    /// The same `δ` at every one of `levels` levels.
    pub fn uniform(levels: usize, delta: Rational) -> Result<Self> {
        Self::explicit(vec![delta; levels])
    }

    /// One rational per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut deltas = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let d = rational::parse(line).map_err(|e| Error::SystemFile { line: i + 1, message: e.to_string() })?;
            deltas.push(d);
        }
        Self::explicit(deltas)
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    /// `δ_j` for `1 ≤ j ≤ J`.
    pub fn delta(&self, j: usize) -> &Rational {
        &self.deltas[j - 1]
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Number of leading zero entries.
    pub fn zero_prefix(&self) -> usize {
        self.deltas.iter().take_while(|d| d.is_zero()).count()
    }

    /// `Some(k)` when the schedule is `k` zeros followed only by `½`.
    pub fn step_shape(&self) -> Option<usize> {
        let k = self.zero_prefix();
        self.deltas[k..].iter().all(|d| *d == half()).then_some(k)
    }

    pub(crate) fn check_length(&self, levels: usize) -> Result<()> {
        if self.deltas.len() != levels {
            return Err(Error::ScheduleLength { expected: levels, got: self.deltas.len() });
        }
        Ok(())
    }
}

/// Schedule with `δ_j = 0` exactly when `deg p_j ≤ C + 3 log_q s`.
pub fn schedule_auto(system: &CoveringSystem, tower: &PrimeTower, c: &Rational) -> Result<DeltaSchedule> {
    if c.is_negative() {
        return Err(Error::InvalidDelta(format!("C must be nonnegative, got {}", rational::to_text(c))));
    }
    let q = system.field().q();
    let s = system.multiplicity() as u64;
    let y = rational::to_f64(c) + 3.0 * (s as f64).ln() / (q as f64).ln();
    let zero_levels = (1..=tower.levels()).take_while(|&j| degree_within(tower.prime_degree(j), c, q, s)).count();
    let deltas = (1..=tower.levels()).map(|j| if j <= zero_levels { Rational::zero() } else { half() }).collect();
    Ok(DeltaSchedule { deltas, provenance: Provenance::Auto { c: c.clone(), y, zero_levels } })
}

/// Exact test of `deg ≤ C + 3 log_q s` for `C = a/b`: `q^{b·deg − a} ≤ s^{3b}`.
fn degree_within(deg: usize, c: &Rational, q: u32, s: u64) -> bool {
    let (a, b) = (c.numer(), c.denom());
    let lhs = b * BigInt::from(deg) - a;
    if !lhs.is_positive() {
        return true;
    }
    if s <= 1 {
        return false;
    }
    let (lf, bf) = (lhs.to_f64().unwrap_or(f64::INFINITY), b.to_f64().unwrap_or(f64::INFINITY));
    let (left, right) = (lf * (q as f64).ln(), 3.0 * bf * (s as f64).ln());
    let gap = (left - right).abs() / left.max(right);
    // exact powers only when the float comparison is too close to call
    if gap > 1e-9 || lf * (q as f64).log2() > 1e6 || 3.0 * bf * (s as f64).log2() > 1e6 {
        return left <= right;
    }
    let (Some(e1), Some(e2)) = (lhs.to_u32(), (b * 3u32).to_u32()) else {
        return left <= right;
    };
    num_traits::pow(BigUint::from(q), e1 as usize) <= num_traits::pow(BigUint::from(s), e2 as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::rational::ratio;

    fn tower_of(pairs: &[(&str, &str)]) -> (CoveringSystem, PrimeTower) {
        let s = CoveringSystem::from_text_pairs(FieldSpec::prime(2).unwrap(), pairs).unwrap();
        let t = PrimeTower::build(&s);
        (s, t)
    }

    #[test]
    fn auto_examples() {
        // primes of degree 1, 2, 3, 4
        let (s, t) = tower_of(&[("0", "x"), ("0", "x^2+x+1"), ("0", "x^3+x+1"), ("0", "x^4+x+1")]);
        let sch = schedule_auto(&s, &t, &ratio(3, 1)).unwrap();
        assert_eq!(sch.zero_prefix(), 3);
        assert_eq!(sch.step_shape(), Some(3));
        let sch = schedule_auto(&s, &t, &ratio(0, 1)).unwrap();
        assert!(sch.deltas().iter().all(|d| *d == ratio(1, 2)));
        // s = 2, C = 1 → y = 4
        let (s, t) = tower_of(&[("0", "x^4+x+1"), ("1", "x^4+x+1"), ("0", "x^5+x^2+1")]);
        let sch = schedule_auto(&s, &t, &ratio(1, 1)).unwrap();
        match sch.provenance() {
            Provenance::Auto { y, zero_levels, .. } => {
                assert!((y - 4.0).abs() < 1e-12);
                assert_eq!(*zero_levels, 1);
            }
            Provenance::Explicit => panic!("expected auto"),
        }
    }

    #[test]
    fn exact_boundary() {
        // s = 2, q = 2: 3 log_2 2 = 3 exactly, so degree 3 qualifies at C = 0 and degree 4 does not
        assert!(degree_within(3, &ratio(0, 1), 2, 2));
        assert!(!degree_within(4, &ratio(0, 1), 2, 2));
        // q = 8, s = 2: 3 log_8 2 = 1
        assert!(degree_within(2, &ratio(1, 1), 8, 2));
        assert!(!degree_within(3, &ratio(1, 1), 8, 2));
        assert!(degree_within(2, &ratio(5, 2), 2, 1));
        assert!(!degree_within(3, &ratio(5, 2), 2, 1));
    }

    #[test]
    fn validation() {
        assert!(matches!(DeltaSchedule::explicit(vec![ratio(3, 5)]), Err(Error::InvalidDelta(_))));
        assert!(matches!(DeltaSchedule::explicit(vec![ratio(-1, 5)]), Err(Error::InvalidDelta(_))));
        let s = DeltaSchedule::parse("# levels\n0\n1/2 # top\n\n0.5\n").unwrap();
        assert_eq!(s.deltas(), &[ratio(0, 1), ratio(1, 2), ratio(1, 2)]);
        assert_eq!(s.step_shape(), Some(1));
        assert_eq!(DeltaSchedule::parse("1/2\n0\n").unwrap().step_shape(), None);
        assert_eq!(DeltaSchedule::parse("1/3\n").unwrap().step_shape(), None);
        assert!(matches!(s.check_length(2), Err(Error::ScheduleLength { expected: 2, got: 3 })));
    }
}
