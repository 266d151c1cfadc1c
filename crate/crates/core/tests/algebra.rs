use fqcover::{FieldSpec, Poly};
use proptest::prelude::*;

fn fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::new(2, 2, None).unwrap(),
        FieldSpec::new(3, 2, None).unwrap(),
        FieldSpec::new(2, 3, None).unwrap(),
    ]
}

fn poly_in(field: &FieldSpec, raw: &[u32]) -> Poly {
    Poly::from_coeffs(raw.iter().map(|&c| field.elem(c % field.q())).collect())
}

fn arb_case() -> impl Strategy<Value = (usize, Vec<u32>, Vec<u32>)> {
    (0..fields().len(), prop::collection::vec(any::<u32>(), 0..10), prop::collection::vec(any::<u32>(), 0..7))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn format_then_parse_is_identity((fi, a, _) in arb_case()) {
        let field = &fields()[fi];
        let f = poly_in(field, &a);
        prop_assert_eq!(field.parse_poly(&field.format_poly(&f)).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn ring_laws((fi, a, b) in arb_case(), c in prop::collection::vec(any::<u32>(), 0..5)) {
        let field = &fields()[fi];
        let (f, g, h) = (poly_in(field, &a), poly_in(field, &b), poly_in(field, &c));
        prop_assert_eq!(field.poly_mul(&f, &g), field.poly_mul(&g, &f));
        prop_assert_eq!(
            field.poly_mul(&f, &field.poly_add(&g, &h)),
            field.poly_add(&field.poly_mul(&f, &g), &field.poly_mul(&f, &h))
        );
        prop_assert_eq!(field.poly_sub(&field.poly_add(&f, &g), &g), f.clone());
        let fg = field.poly_mul(&f, &g);
        if !f.is_zero() && !g.is_zero() {
            prop_assert_eq!(fg.degree(), Some(f.degree().unwrap() + g.degree().unwrap()));
        }
    }

    #[test]
    fn division_identity((fi, a, b) in arb_case()) {
        let field = &fields()[fi];
        let (f, g) = (poly_in(field, &a), poly_in(field, &b));
        match field.poly_divmod(&f, &g) {
            Err(_) => prop_assert!(g.is_zero()),
            Ok((quot, rem)) => {
                prop_assert_eq!(field.poly_add(&field.poly_mul(&quot, &g), &rem), f);
                prop_assert!(rem.is_zero() || rem.degree() < g.degree());
            }
        }
    }

    #[test]
    fn gcd_and_xgcd((fi, a, b) in arb_case()) {
        let field = &fields()[fi];
        let (f, g) = (poly_in(field, &a), poly_in(field, &b));
        prop_assume!(!(f.is_zero() && g.is_zero()));
        let d = field.poly_gcd(&f, &g).unwrap();
        prop_assert!(d.is_monic());
        prop_assert!(field.divides(&d, &f) && field.divides(&d, &g));
        let (d2, u, v) = field.poly_xgcd(&f, &g).unwrap();
        prop_assert_eq!(&d2, &d);
        prop_assert_eq!(field.poly_add(&field.poly_mul(&u, &f), &field.poly_mul(&v, &g)), d);
    }

    #[test]
    fn crt_solves_and_relifts((fi, a, _) in arb_case(), picks in prop::collection::vec((any::<u16>(), 1u32..4), 1..6)) {
        let field = &fields()[fi];
        // pairwise coprime moduli: powers of distinct irreducibles, total degree ≤ 12
        let primes: Vec<Poly> = (1..=3).flat_map(|d| field.enumerate_irreducibles(d)).collect();
        let mut used = Vec::new();
        let mut moduli = Vec::new();
        let mut total = 0;
        for (pick, e) in picks {
            let p = &primes[pick as usize % primes.len()];
            let deg = p.degree().unwrap() * e as usize;
            if used.contains(p) || total + deg > 12 {
                continue;
            }
            used.push(p.clone());
            total += deg;
            moduli.push(field.poly_pow(p, e));
        }
        let pairs: Vec<(Poly, Poly)> = moduli
            .iter()
            .map(|m| (field.poly_rem(&poly_in(field, &a), m).unwrap(), m.clone()))
            .collect();
        let (x, prod) = field.crt(&pairs).unwrap();
        prop_assert!(x.is_zero() || x.degree() < prod.degree());
        for (r, m) in &pairs {
            prop_assert_eq!(&field.poly_rem(&x, m).unwrap(), r);
        }
        // a residue mod the product is recovered from its projections
        prop_assert_eq!(x, field.poly_rem(&poly_in(field, &a), &prod).unwrap());
    }
}

#[test]
fn factorization_reconstructs_every_monic_up_to_degree_8() {
    for q in [2u64, 3, 4] {
        let field = if q == 4 { FieldSpec::new(2, 2, None).unwrap() } else { FieldSpec::prime(q).unwrap() };
        for n in 1..=8 {
            for f in field.enumerate_monic(n) {
                let fac = field.factor(&f).unwrap();
                assert_eq!(fac.reconstruct(&field), f);
                for (p, e) in &fac.factors {
                    assert!(*e >= 1 && field.irreducible_test(p).unwrap());
                }
                let mut sorted = fac.factors.clone();
                sorted.sort();
                sorted.dedup_by(|a, b| a.0 == b.0);
                assert_eq!(sorted.len(), fac.factors.len());
            }
        }
    }
}

/// Irreducibles of degree `d` as the monic polynomials missed by all products of lower degrees.
fn sieve_irreducibles(field: &FieldSpec, d: usize) -> Vec<Poly> {
    let mut reducible = std::collections::HashSet::new();
    for a in 1..=d / 2 {
        for f in field.enumerate_monic(a) {
            for g in field.enumerate_monic(d - a) {
                reducible.insert(field.poly_mul(&f, &g));
            }
        }
    }
    field.enumerate_monic(d).into_iter().filter(|f| !reducible.contains(f)).collect()
}

#[test]
fn irreducible_counts_match_enumeration() {
    for q in [2u64, 3] {
        let field = FieldSpec::prime(q).unwrap();
        for d in 1..=8 {
            let sieved = sieve_irreducibles(&field, d);
            assert_eq!(field.enumerate_irreducibles(d), sieved);
            assert_eq!(fqcover::friable::count_irreducibles(&field, d), sieved.len().into());
        }
    }
}

#[test]
fn exhaustive_division_over_f2() {
    let field = FieldSpec::prime(2).unwrap();
    let dividends: Vec<Poly> = (0..1u64 << 9).map(|c| field.decode(c)).collect();
    let divisors: Vec<Poly> = (1..1u64 << 9).map(|c| field.decode(c)).collect();
    for f in &dividends {
        for g in &divisors {
            let (quot, rem) = field.poly_divmod(f, g).unwrap();
            assert_eq!(field.poly_add(&field.poly_mul(&quot, g), &rem), *f);
            assert!(rem.is_zero() || rem.degree() < g.degree());
        }
    }
}

#[test]
fn extension_field_axioms() {
    for field in fields() {
        let elems: Vec<_> = field.elements().collect();
        assert_eq!(elems.len() as u32, field.q());
        for &a in &elems {
            assert_eq!(field.add(a, field.neg(a)), field.elem(0));
            if !a.is_zero() {
                assert_eq!(field.mul(a, field.inv(a).unwrap()), field.elem(1));
            }
            for &b in &elems {
                assert_eq!(field.mul(a, b), field.mul(b, a));
                assert_eq!(field.sub(field.add(a, b), b), a);
            }
        }
    }
}
