use fqcover::covering::{parse_system, search_distinct, ExhaustiveLimit};
use fqcover::rational::ratio;
use fqcover::sample::{random_poly, random_system, SampleConfig, SampleKind};
use fqcover::{ArithmeticProgression, CoveringSystem, FieldSpec, Poly};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus(q: u64, n: usize, seed: u64) -> Vec<CoveringSystem> {
    let field = FieldSpec::prime(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SampleConfig { max_lcm_degree: if q == 2 { 10 } else { 7 }, max_progressions: 10 };
    (0..n).map(|i| random_system(&field, SampleKind::ALL[i % 4], config, &mut rng)).collect()
}

/// Membership of every residue mod Q tested one progression at a time.
fn covers_naive(s: &CoveringSystem) -> Option<Poly> {
    let field = s.field();
    let n = s.lcm_modulus().degree().unwrap();
    (0..(field.q() as u64).pow(n as u32))
        .map(|c| field.decode(c))
        .find(|f| !s.progressions().iter().any(|p| p.contains(field, f)))
}

#[test]
fn oracle_agrees_with_naive_membership() {
    let lim = ExhaustiveLimit::default();
    for (q, seed) in [(2, 1), (3, 2)] {
        for s in corpus(q, 300, seed) {
            let rep = s.covers(lim).unwrap();
            let naive = covers_naive(&s);
            assert_eq!(rep.covers, naive.is_none(), "{}", s.to_text());
            if let Some(w) = rep.witness {
                // the least uncovered residue in canonical order
                let mut all: Vec<Poly> = (0..rep.residues_checked).map(|c| s.field().decode(c)).collect();
                all.sort();
                let least = all.into_iter().find(|f| !s.progressions().iter().any(|p| p.contains(s.field(), f)));
                assert_eq!(Some(w), least);
            }
        }
    }
}

#[test]
fn witnesses_are_uncovered_and_density_bounds_hold() {
    let lim = ExhaustiveLimit::default();
    for (q, seed) in [(2, 3), (3, 4)] {
        for s in corpus(q, 600, seed) {
            let rep = s.covers(lim).unwrap();
            assert_eq!(rep.lcm_degree, s.lcm_modulus().degree().unwrap());
            if let Some(w) = &rep.witness {
                assert!(!rep.covers);
                assert!(s.progressions().iter().all(|p| !p.contains(s.field(), w)));
            }
            if s.density_sum() < ratio(1, 1) {
                assert!(!rep.covers, "{}", s.to_text());
            }
        }
    }
}

#[test]
fn adding_a_progression_preserves_coverage() {
    let lim = ExhaustiveLimit::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for (q, seed) in [(2, 6), (3, 7)] {
        let field = FieldSpec::prime(q).unwrap();
        for s in corpus(q, 600, seed) {
            let moduli: Vec<Poly> = s.progressions().iter().map(|p| p.modulus().clone()).collect();
            let d = moduli.choose(&mut rng).unwrap();
            let extra =
                ArithmeticProgression::new(&field, &random_poly(&field, d.degree().unwrap(), &mut rng), d).unwrap();
            let before = s.covers(lim).unwrap().covers;
            let after = s.with(extra).covers(lim).unwrap().covers;
            assert!(!before || after);
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn text_form_round_trips() {
    for (q, seed) in [(2, 8), (3, 9)] {
        for s in corpus(q, 200, seed) {
            assert_eq!(parse_system(&s.to_text()).unwrap(), s);
            assert_eq!(CoveringSystem::from_json(&s.to_json()).unwrap(), s);
        }
    }
}

#[test]
fn search_results_are_distinct_covers() {
    let lim = ExhaustiveLimit::default();
    let f2 = FieldSpec::prime(2).unwrap();
    let f3 = FieldSpec::prime(3).unwrap();
    let cases = [
        (&f2, 1, "x^3+x^2"),
        (&f2, 1, "x^4+x^3+x^2+x"),
        (&f2, 2, "x^6+x^5+x^3+x^2"),
        (&f3, 1, "x^2+x"),
        (&f3, 1, "x^3+2x"),
    ];
    let mut found = 0;
    for (field, d, bound) in cases {
        let bound = field.parse_poly(bound).unwrap();
        if let Some(s) = search_distinct(field, d, &bound, lim).unwrap() {
            found += 1;
            assert!(s.covers(lim).unwrap().covers);
            assert!(s.is_distinct());
            assert!(s.min_degree() >= d);
            assert!(s.progressions().iter().all(|p| field.divides(p.modulus(), &bound)));
        }
    }
    assert!(found >= 2);
    // a single admissible modulus cannot cover
    assert!(search_distinct(&f2, 2, &f2.parse_poly("x^2").unwrap(), lim).unwrap().is_none());
}
