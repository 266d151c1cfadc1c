//! The distortion sieve: distorted measures `P_0, …, P_J` on residues mod the
//! partial products of the prime tower, their moments, and the certificate
//! `η = Σ_j term_j < 1` that proves a system leaves some residue uncovered.

mod bounds;
mod certify;
pub mod checks;
mod measure;
mod schedule;
mod tower;

pub use bounds::{m1_bound, m2_bound, prime_factor_term, theorem_threshold};
pub use certify::{
    certify, level_term, Certificate, ExactRun, Mode, MomentReport, OracleCheck, ScheduleReport, TowerEntry, Verdict,
};
pub use measure::{measure_step, moment, moments, LevelSieve, MeasureTable};
pub use schedule::{schedule_auto, DeltaSchedule, Provenance};
pub use tower::{BadSet, PrimeTower, ResidueGrid};

use crate::algebra::Poly;
use crate::covering::{CoveringSystem, ExhaustiveLimit};
use crate::error::Result;
use crate::rational::Rational;

pub fn build_tower(system: &CoveringSystem) -> PrimeTower {
    PrimeTower::build(system)
}

pub fn bad_set(system: &CoveringSystem, tower: &PrimeTower, j: usize) -> Result<BadSet> {
    BadSet::new(system, tower, j)
}

/// `α_j(r)`: the fraction of lifts of `r mod Q_{j-1}` to `Q_j` lying in `B_j`.
pub fn alpha(system: &CoveringSystem, j: usize, residue: &Poly, limit: ExhaustiveLimit) -> Result<Rational> {
    let tower = PrimeTower::build(system);
    tower.check_level(j)?;
    let grid = ResidueGrid::with_tower(system, tower, limit)?;
    Ok(LevelSieve::new(&grid, j).alpha(grid.index_of(j - 1, residue)))
}

/// `M_j^{(k)}` under the measure produced by `schedule` on levels below `j`.
pub fn moments_exact(
    system: &CoveringSystem,
    schedule: &DeltaSchedule,
    j: usize,
    k: u32,
    limit: ExhaustiveLimit,
) -> Result<Rational> {
    PrimeTower::build(system).check_level(j)?;
    let run = ExactRun::new(system, schedule, limit)?;
    Ok(moment(run.table(j - 1), run.sieve(j), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::error::Error;
    use crate::rational::ratio;

    #[test]
    fn alpha_examples() {
        let f = FieldSpec::prime(2).unwrap();
        let lim = ExhaustiveLimit::default();
        let s = CoveringSystem::from_text_pairs(f.clone(), &[("1", "x")]).unwrap();
        assert_eq!(alpha(&s, 1, &Poly::zero(), lim).unwrap(), ratio(1, 2));
        assert!(matches!(alpha(&s, 2, &Poly::zero(), lim), Err(Error::LevelOutOfRange { .. })));
        assert!(matches!(alpha(&s, 0, &Poly::zero(), lim), Err(Error::LevelOutOfRange { .. })));
        let s = CoveringSystem::from_text_pairs(f.clone(), &[("0", "x"), ("1", "x")]).unwrap();
        assert_eq!(alpha(&s, 1, &Poly::zero(), lim).unwrap(), ratio(1, 1));
        let s = CoveringSystem::from_text_pairs(f.clone(), &[("1", "x^2+x")]).unwrap();
        assert_eq!(alpha(&s, 1, &Poly::zero(), lim).unwrap(), ratio(0, 1));
        // B_2 = {1 mod x(x+1)}: half the lifts of 1 mod x, none of 0 mod x
        assert_eq!(alpha(&s, 2, &Poly::one(), lim).unwrap(), ratio(1, 2));
        assert_eq!(alpha(&s, 2, &Poly::zero(), lim).unwrap(), ratio(0, 1));
    }

    #[test]
    fn moments_examples() {
        let f = FieldSpec::prime(2).unwrap();
        let lim = ExhaustiveLimit::default();
        let s = CoveringSystem::from_text_pairs(f, &[("1", "x")]).unwrap();
        let sch = DeltaSchedule::uniform(1, ratio(1, 2)).unwrap();
        assert_eq!(moments_exact(&s, &sch, 1, 1, lim).unwrap(), ratio(1, 2));
        assert_eq!(moments_exact(&s, &sch, 1, 2, lim).unwrap(), ratio(1, 4));
    }
}
