//! Exhaustive checks of the inequalities behind a certificate.
//!
//! Each check runs over every level, residue, and (for class masses) every
//! monic divisor of `Q` and every class modulo it, in exact arithmetic.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::covering::{CoveringSystem, ExhaustiveLimit};
use crate::distortion::{level_term, m1_bound, m2_bound, moments, DeltaSchedule, ExactRun, MeasureTable, ResidueGrid};
use crate::error::Result;
use crate::rational::Rational;

/// Outcome of [`audit`]; every flag is true when nothing failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub levels: usize,
    /// Every `P_j` is nonnegative and sums to 1.
    pub normalized: bool,
    /// `P_j(B_j) ≤ M1`, `P_j(B_j) ≤ M2/(4δ(1−δ))` when `δ > 0`.
    pub chain: bool,
    /// `P_k(B_j) = P_j(B_j)` for all `k ≥ j`.
    pub stable: bool,
    /// `α_j(r) ≤ Σ` over progressions of `B_j` meeting the fibre of `1/|p_j|^{e}`.
    pub alpha_union_bound: bool,
    /// `P_j(c mod m) ≤ q^{-deg m} Π_{p_i | m, i ≤ j} (1 − δ_i)^{-1}` for every `m | Q`.
    pub class_mass_bound: bool,
    /// Exact `M1 ≤ m1_bound` on levels with `δ_i = 0` for all `i < j`.
    pub first_moment_bound: bool,
    /// Exact `M2 ≤ m2_bound` on every level.
    pub second_moment_bound: bool,
    pub residues_checked: u64,
    pub divisors_checked: u64,
    pub classes_checked: u64,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn all_hold(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs every check for one system and schedule.
pub fn audit(system: &CoveringSystem, schedule: &DeltaSchedule, limit: ExhaustiveLimit) -> Result<AuditReport> {
    let run = ExactRun::new(system, schedule, limit)?;
    let tower = run.grid.tower();
    let levels = run.levels();
    let mut rep = AuditReport {
        levels,
        normalized: true,
        chain: true,
        stable: true,
        alpha_union_bound: true,
        class_mass_bound: true,
        first_moment_bound: true,
        second_moment_bound: true,
        ..Default::default()
    };

    for j in 0..=levels {
        let t = run.table(j);
        if t.total() != Rational::one() || t.values().iter().any(|m| *m < Rational::zero()) {
            rep.violations.push(format!("level {j}: measure not normalized"));
            rep.normalized = false;
        }
    }
    for j in 1..=levels {
        let sieve = run.sieve(j);
        let delta = schedule.delta(j);
        let m = moments(run.table(j - 1), sieve, &[1, 2]);
        let here = run.table(j).mass_of(&run.grid, sieve);
        if here > m[0] || here > level_term(delta, &m[0], &m[1]) {
            rep.violations.push(format!("level {j}: P_j(B_j) exceeds the moment bound"));
            rep.chain = false;
        }
        for k in j + 1..=levels {
            if run.table(k).mass_of(&run.grid, sieve) != here {
                rep.violations.push(format!("level {j}: P_{k}(B_j) differs from P_j(B_j)"));
                rep.stable = false;
            }
        }
        for r in 0..sieve.parents() {
            rep.residues_checked += 1;
            if u64::from(sieve.count(r)) > sieve.union_bound(r) {
                rep.violations.push(format!("level {j}: α exceeds the union bound at residue {r}"));
                rep.alpha_union_bound = false;
            }
        }
        if schedule.zero_prefix() >= j - 1 && m[0] > m1_bound(system, tower, j) {
            rep.violations.push(format!("level {j}: M1 exceeds m1_bound"));
            rep.first_moment_bound = false;
        }
        if m[1] > m2_bound(system, tower, j) {
            rep.violations.push(format!("level {j}: M2 exceeds m2_bound"));
            rep.second_moment_bound = false;
        }
    }
    for j in 0..=levels {
        let (divisors, classes, bad) = class_masses(&run.grid, run.table(j), schedule);
        rep.divisors_checked += divisors;
        rep.classes_checked += classes;
        if let Some(v) = bad {
            rep.violations.push(format!("level {j}: {v}"));
            rep.class_mass_bound = false;
        }
    }

    Ok(rep)
}

/// A marginal of `P_j` on classes mod `m = Π_{i≤j} p_i^{e_i}`, stored in CRT
/// coordinates with radix `q^{e_i deg p_i}` per prime. Each class holds the
/// multiset of table value ids it aggregates, as sorted `(id, count)` pairs.
struct Marginal {
    exps: Vec<u32>,
    radix: Vec<u64>,
    classes: Vec<Vec<(u32, u64)>>,
}

/// Checks the class-mass bound for every divisor `m | Q_j`; the lift to any
/// `m·ℓ` with `ℓ` coprime to `Q_j` scales both sides by `q^{-deg ℓ}`.
/// Returns (divisors visited, classes visited, first violation).
fn class_masses(grid: &ResidueGrid, table: &MeasureTable, schedule: &DeltaSchedule) -> (u64, u64, Option<String>) {
    let tower = grid.tower();
    let j = table.level();
    let q = BigInt::from(grid.field().q());
    let exps: Vec<u32> = (1..=j).map(|k| tower.exponent(k)).collect();
    let radix: Vec<u64> = (1..=j).map(|k| grid.local_size(k)).collect();
    let classes = table.ids().iter().map(|&id| vec![(id, 1)]).collect();
    let mut stack = vec![(Marginal { exps, radix, classes }, 0usize)];
    let (mut divisors, mut classes, mut bad) = (0u64, 0u64, None);
    while let Some((node, from)) = stack.pop() {
        divisors += 1;
        classes += node.classes.len() as u64;
        let degree: usize = node.exps.iter().enumerate().map(|(k, &e)| e as usize * tower.prime_degree(k + 1)).sum();
        let mut allowance = Rational::new(BigInt::one(), q.pow(degree as u32));
        for (k, &e) in node.exps.iter().enumerate() {
            if e > 0 {
                allowance /= Rational::one() - schedule.delta(k + 1);
            }
        }
        let signatures: HashSet<&Vec<(u32, u64)>> = node.classes.iter().collect();
        let over = signatures.into_iter().any(|sig| {
            let mass = sig.iter().fold(Rational::zero(), |acc, &(id, c)| {
                acc + &table.values()[id as usize] * Rational::from_integer(BigInt::from(c))
            });
            mass > allowance
        });
        if bad.is_none() && over {
            bad = Some(format!("class mass exceeds bound for exponents {:?}", node.exps));
        }
        for k in from..node.exps.len() {
            if node.exps[k] > 0 {
                stack.push((reduce(grid, &node, k), k));
            }
        }
    }
    (divisors, classes, bad)
}

/// Lowers the exponent of coordinate `k` by one.
fn reduce(grid: &ResidueGrid, node: &Marginal, k: usize) -> Marginal {
    let mut exps = node.exps.clone();
    exps[k] -= 1;
    let mut radix = node.radix.clone();
    let width = exps[k] as usize * grid.tower().prime_degree(k + 1);
    radix[k] = (grid.field().q() as u64).pow(width as u32);
    let low: u64 = node.radix[k + 1..].iter().product();
    let table = grid.reduce_table(k + 1, exps[k]);
    let new_len: u64 = radix.iter().product();
    let mut classes: Vec<Vec<(u32, u64)>> = vec![Vec::new(); new_len as usize];
    for (idx, sig) in node.classes.iter().enumerate() {
        let idx = idx as u64;
        let (hi, c, lo) = (idx / (node.radix[k] * low), (idx / low) % node.radix[k], idx % low);
        let target = &mut classes[((hi * radix[k] + table[c as usize] as u64) * low + lo) as usize];
        for &(id, n) in sig {
            match target.iter_mut().find(|(t, _)| *t == id) {
                Some((_, m)) => *m += n,
                None => target.push((id, n)),
            }
        }
    }
    for sig in &mut classes {
        sig.sort_unstable();
    }
    Marginal { exps, radix, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::rational::ratio;

    #[test]
    fn small_systems_pass() {
        let f2 = FieldSpec::prime(2).unwrap();
        let cases: &[&[(&str, &str)]] = &[
            &[("1", "x")],
            &[("0", "x"), ("1", "x")],
            &[("0", "x"), ("1", "x^2"), ("x", "x^2+x+1"), ("1", "x^3+x+1")],
            &[("0", "x^2"), ("1", "x^2+x"), ("x+1", "x^3+x^2+x+1")],
        ];
        for pairs in cases {
            let s = CoveringSystem::from_text_pairs(f2.clone(), pairs).unwrap();
            let levels = crate::distortion::PrimeTower::build(&s).levels();
            for d in [ratio(0, 1), ratio(1, 4), ratio(1, 2)] {
                let sch = DeltaSchedule::uniform(levels, d).unwrap();
                let rep = audit(&s, &sch, ExhaustiveLimit::default()).unwrap();
                assert!(rep.all_hold(), "{pairs:?}: {:?}", rep.violations);
                assert!(rep.class_mass_bound && rep.chain && rep.stable);
                assert!(rep.divisors_checked > 0);
            }
        }
    }

    #[test]
    fn divisor_count_matches_exponents() {
        // Q = x^2 (x+1): the final level visits (2+1)(1+1) = 6 divisors
        let s = CoveringSystem::from_text_pairs(FieldSpec::prime(2).unwrap(), &[("0", "x^2"), ("1", "x+1")]).unwrap();
        let run =
            ExactRun::new(&s, &DeltaSchedule::uniform(2, ratio(1, 2)).unwrap(), ExhaustiveLimit::default()).unwrap();
        let (divisors, classes, bad) =
            class_masses(&run.grid, run.table(2), &DeltaSchedule::uniform(2, ratio(1, 2)).unwrap());
        assert_eq!(divisors, 6);
        // Σ over divisors of their norms: (1+2+4)(1+2)
        assert_eq!(classes, 21);
        assert!(bad.is_none());
    }
}
