//! Certificates of non-coverage: `η = Σ_j term_j < 1`.

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::covering::{format_field_header, CoveringSystem, ExhaustiveLimit};
use crate::distortion::{
    m1_bound, m2_bound, measure_step, moments, BadSet, DeltaSchedule, LevelSieve, MeasureTable, PrimeTower, Provenance,
    ResidueGrid,
};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "NOT_COVERING_CERTIFIED")]
    NotCoveringCertified,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_text(r))
}

fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational::to_text(r)),
        None => s.serialize_none(),
    }
}

fn ser_rationals<S: Serializer>(rs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(rational::to_text))
}

/// One level of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub level: usize,
    pub prime: String,
    pub exponent: u32,
    /// Progressions in `B_j`.
    pub bad_progressions: usize,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact_m1: Option<Rational>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact_m2: Option<Rational>,
    /// Present only when every earlier `δ` is zero.
    #[serde(serialize_with = "ser_opt_rational")]
    pub bound_m1: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub bound_m2: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub term: Rational,
    /// `P_j(B_j)`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub measure_bad: Option<Rational>,
    /// `P_J(B_j)`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub measure_bad_final: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerEntry {
    pub prime: String,
    pub degree: usize,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleReport {
    pub source: &'static str,
    #[serde(serialize_with = "ser_opt_rational")]
    pub c: Option<Rational>,
    pub y: Option<f64>,
    #[serde(serialize_with = "ser_rationals")]
    pub deltas: Vec<Rational>,
}

impl ScheduleReport {
    fn new(schedule: &DeltaSchedule) -> Self {
        let (source, c, y) = match schedule.provenance() {
            Provenance::Auto { c, y, .. } => ("auto", Some(c.clone()), Some(*y)),
            Provenance::Explicit => ("explicit", None, None),
        };
        ScheduleReport { source, c, y, deltas: schedule.deltas().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub covers: bool,
    pub witness: Option<String>,
    pub residues_checked: u64,
    /// False only if a certified system covers; never expected.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub system_digest: String,
    pub field: String,
    pub lcm_modulus: String,
    pub multiplicity: usize,
    pub min_degree: usize,
    pub tower: Vec<TowerEntry>,
    pub mode: Mode,
    pub schedule: ScheduleReport,
    pub levels: Vec<MomentReport>,
    /// Exact in exact mode, an upper bound for the exact value in bounded mode.
    #[serde(serialize_with = "ser_rational")]
    pub eta: Rational,
    pub verdict: Verdict,
    /// Exact mode: every level satisfied `P_j(B_j) ≤ term_j` and `P_j(B_j) = P_J(B_j)`.
    pub chain_holds: Option<bool>,
    pub oracle: Option<OracleCheck>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::NotCoveringCertified
    }

    /// Pretty JSON; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Every level of the exact computation: sieves and measures `P_0, …, P_J`.
#[derive(Clone, Debug)]
pub struct ExactRun {
    pub grid: ResidueGrid,
    /// `sieves[j - 1]` is level `j`.
    pub sieves: Vec<LevelSieve>,
    /// `tables[j]` is `P_j`.
    pub tables: Vec<MeasureTable>,
}

impl ExactRun {
    pub fn new(system: &CoveringSystem, schedule: &DeltaSchedule, limit: ExhaustiveLimit) -> Result<Self> {
        let grid = ResidueGrid::new(system, limit)?;
        schedule.check_length(grid.levels())?;
        let mut sieves = Vec::with_capacity(grid.levels());
        let mut tables = vec![MeasureTable::uniform()];
        for j in 1..=grid.levels() {
            let sieve = LevelSieve::new(&grid, j);
            let next = measure_step(tables.last().expect("nonempty"), &sieve, schedule.delta(j));
            sieves.push(sieve);
            tables.push(next);
        }
        Ok(ExactRun { grid, sieves, tables })
    }

    pub fn levels(&self) -> usize {
        self.grid.levels()
    }

    pub fn sieve(&self, j: usize) -> &LevelSieve {
        &self.sieves[j - 1]
    }

    pub fn table(&self, j: usize) -> &MeasureTable {
        &self.tables[j]
    }
}

/// `term_j` from the first two moments: `M1` when `δ = 0`, else `min(M1, M2/(4δ(1−δ)))`.
pub fn level_term(delta: &Rational, m1: &Rational, m2: &Rational) -> Rational {
    if delta.is_zero() {
        return m1.clone();
    }
    let four = Rational::from_integer(4.into());
    let second = m2 / (four * delta * (Rational::one() - delta));
    if second < *m1 {
        second
    } else {
        m1.clone()
    }
}

/// Runs the distortion sieve and reports `η` with a verdict.
///
/// Bounded mode accepts only schedules of zeros followed by `½`s and never
/// enumerates residues mod `Q`; exact mode computes every `P_j`.
pub fn certify(
    system: &CoveringSystem,
    schedule: &DeltaSchedule,
    mode: Mode,
    limit: ExhaustiveLimit,
) -> Result<Certificate> {
    let tower = PrimeTower::build(system);
    schedule.check_length(tower.levels())?;
    let field = system.field();
    let mut levels = Vec::with_capacity(tower.levels());
    let mut chain_holds = None;
    match mode {
        Mode::Bounded => {
            let k = schedule.step_shape().ok_or_else(|| {
                let text: Vec<String> = schedule.deltas().iter().map(rational::to_text).collect();
                Error::ScheduleShapeInvalid(text.join(","))
            })?;
            for j in 1..=tower.levels() {
                let (b1, b2) = (m1_bound(system, &tower, j), m2_bound(system, &tower, j));
                let term = if j <= k { b1.clone() } else { b2.clone() };
                levels.push(report(system, &tower, schedule, j, Some(b1), b2, term)?);
            }
        }
        Mode::Exact => {
            let run = ExactRun::new(system, schedule, limit)?;
            let final_table = run.table(run.levels());
            let mut holds = true;
            for j in 1..=tower.levels() {
                let sieve = run.sieve(j);
                let m = moments(run.table(j - 1), sieve, &[1, 2]);
                let delta = schedule.delta(j);
                let term = level_term(delta, &m[0], &m[1]);
                let b1 = (schedule.zero_prefix() >= j - 1).then(|| m1_bound(system, &tower, j));
                let mut rep = report(system, &tower, schedule, j, b1, m2_bound(system, &tower, j), term)?;
                let here = run.table(j).mass_of(&run.grid, sieve);
                let last = final_table.mass_of(&run.grid, sieve);
                holds &= here <= rep.term && here == last;
                rep.exact_m1 = Some(m[0].clone());
                rep.exact_m2 = Some(m[1].clone());
                rep.measure_bad = Some(here);
                rep.measure_bad_final = Some(last);
                levels.push(rep);
            }
            chain_holds = Some(holds);
        }
    }
    let eta = levels.iter().fold(Rational::zero(), |acc, r| acc + &r.term);
    let verdict = if eta < Rational::one() { Verdict::NotCoveringCertified } else { Verdict::Inconclusive };
    let oracle = match system.covers(limit) {
        Ok(rep) => Some(OracleCheck {
            covers: rep.covers,
            witness: rep.witness.as_ref().map(|w| field.format_poly(w)),
            residues_checked: rep.residues_checked,
            consistent: !(rep.covers && verdict == Verdict::NotCoveringCertified),
        }),
        Err(Error::ExhaustiveLimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Certificate {
        system_digest: system.digest(),
        field: format_field_header(field),
        lcm_modulus: field.format_poly(tower.modulus()),
        multiplicity: system.multiplicity(),
        min_degree: system.min_degree(),
        tower: (1..=tower.levels())
            .map(|j| TowerEntry {
                prime: field.format_poly(tower.prime(j)),
                degree: tower.prime_degree(j),
                exponent: tower.exponent(j),
            })
            .collect(),
        mode,
        schedule: ScheduleReport::new(schedule),
        levels,
        eta,
        verdict,
        chain_holds,
        oracle,
    })
}

fn report(
    system: &CoveringSystem,
    tower: &PrimeTower,
    schedule: &DeltaSchedule,
    j: usize,
    bound_m1: Option<Rational>,
    bound_m2: Rational,
    term: Rational,
) -> Result<MomentReport> {
    Ok(MomentReport {
        level: j,
        prime: system.field().format_poly(tower.prime(j)),
        exponent: tower.exponent(j),
        bad_progressions: BadSet::new(system, tower, j)?.progressions.len(),
        delta: schedule.delta(j).clone(),
        exact_m1: None,
        exact_m2: None,
        bound_m1,
        bound_m2,
        term,
        measure_bad: None,
        measure_bad_final: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::rational::ratio;

    fn sys(pairs: &[(&str, &str)]) -> CoveringSystem {
        CoveringSystem::from_text_pairs(FieldSpec::prime(2).unwrap(), pairs).unwrap()
    }

    fn lim() -> ExhaustiveLimit {
        ExhaustiveLimit::default()
    }

    #[test]
    fn single_progression_half() {
        let s = sys(&[("1", "x")]);
        let sch = DeltaSchedule::uniform(1, ratio(1, 2)).unwrap();
        let c = certify(&s, &sch, Mode::Exact, lim()).unwrap();
        let l = &c.levels[0];
        assert_eq!(l.exact_m1, Some(ratio(1, 2)));
        assert_eq!(l.exact_m2, Some(ratio(1, 4)));
        assert_eq!(c.eta, ratio(1, 4));
        assert_eq!(c.verdict, Verdict::NotCoveringCertified);
        assert_eq!(c.chain_holds, Some(true));
        let o = c.oracle.unwrap();
        assert!(!o.covers && o.consistent);
        assert_eq!(o.witness.as_deref(), Some("0"));
        assert_eq!(l.measure_bad, Some(ratio(0, 1)));
    }

    #[test]
    fn single_progression_zero() {
        let s = sys(&[("1", "x")]);
        let sch = DeltaSchedule::uniform(1, ratio(0, 1)).unwrap();
        let c = certify(&s, &sch, Mode::Exact, lim()).unwrap();
        assert_eq!(c.eta, ratio(1, 2));
        assert!(c.is_certified());
        assert_eq!(c.levels[0].measure_bad, Some(ratio(1, 2)));
    }

    #[test]
    fn covering_pair_is_inconclusive() {
        let s = sys(&[("0", "x"), ("1", "x")]);
        for d in [ratio(0, 1), ratio(1, 3), ratio(1, 2)] {
            let c = certify(&s, &DeltaSchedule::uniform(1, d).unwrap(), Mode::Exact, lim()).unwrap();
            assert!(c.eta >= ratio(1, 1));
            assert_eq!(c.verdict, Verdict::Inconclusive);
            assert!(c.oracle.as_ref().unwrap().covers);
        }
    }

    #[test]
    fn bounded_mode_shape_and_values() {
        let s = sys(&[("1", "x^3"), ("0", "x^3+x+1")]);
        let bad = DeltaSchedule::explicit(vec![ratio(1, 2), ratio(0, 1)]).unwrap();
        assert!(matches!(certify(&s, &bad, Mode::Bounded, lim()), Err(Error::ScheduleShapeInvalid(_))));
        let third = DeltaSchedule::explicit(vec![ratio(0, 1), ratio(1, 3)]).unwrap();
        assert!(matches!(certify(&s, &third, Mode::Bounded, lim()), Err(Error::ScheduleShapeInvalid(_))));
        let good = DeltaSchedule::explicit(vec![ratio(0, 1), ratio(1, 2)]).unwrap();
        let c = certify(&s, &good, Mode::Bounded, lim()).unwrap();
        assert_eq!(c.levels[0].term, m1_bound(&s, &PrimeTower::build(&s), 1));
        assert_eq!(c.levels[1].term, c.levels[1].bound_m2);
        let exact = certify(&s, &good, Mode::Exact, lim()).unwrap();
        assert!(exact.eta <= c.eta);
    }

    #[test]
    fn schedule_length_mismatch() {
        let s = sys(&[("1", "x"), ("0", "x+1")]);
        let sch = DeltaSchedule::uniform(1, ratio(1, 2)).unwrap();
        assert!(matches!(certify(&s, &sch, Mode::Exact, lim()), Err(Error::ScheduleLength { .. })));
    }

    #[test]
    fn json_is_exact_and_stable() {
        let s = sys(&[("1", "x"), ("x", "x^2+x+1")]);
        let sch = DeltaSchedule::uniform(2, ratio(1, 2)).unwrap();
        let a = certify(&s, &sch, Mode::Exact, lim()).unwrap().to_json();
        let b = certify(&s, &sch, Mode::Exact, lim()).unwrap().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(v["eta"].as_str().unwrap().contains('/'));
        assert_eq!(v["verdict"], "NOT_COVERING_CERTIFIED");
        assert_eq!(v["levels"][0]["delta"], "1/2");
    }
}
