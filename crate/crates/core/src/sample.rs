//! Random covering systems for property tests and corpus generation.
//!
//! All moduli divide one random monic `R`, so `deg Q ≤ deg R`. Half the time
//! `R` is a product of factors of degree at most 3, giving deeper prime towers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{FieldSpec, Poly};
use crate::covering::{monic_divisors, ArithmeticProgression, CoveringSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Independent progressions with random divisors of `R` as moduli.
    Random,
    /// A cover built by repeatedly splitting one progression by a prime of `R`.
    Refinement,
    /// A refinement cover with one progression deleted.
    Punctured,
    /// Few progressions with moduli of degree at least `deg R / 2`.
    Sparse,
}

impl SampleKind {
    pub const ALL: [SampleKind; 4] =
        [SampleKind::Random, SampleKind::Refinement, SampleKind::Punctured, SampleKind::Sparse];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    /// Upper bound on `deg R`, hence on `deg Q`.
    pub max_lcm_degree: usize,
    pub max_progressions: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { max_lcm_degree: 8, max_progressions: 12 }
    }
}

pub fn random_poly<R: Rng + ?Sized>(field: &FieldSpec, below_degree: usize, rng: &mut R) -> Poly {
    let coeffs = (0..below_degree).map(|_| field.elem(rng.gen_range(0..field.q()))).collect();
    Poly::from_coeffs(coeffs)
}

pub fn random_monic<R: Rng + ?Sized>(field: &FieldSpec, degree: usize, rng: &mut R) -> Poly {
    let mut coeffs = random_poly(field, degree, rng).coeffs().to_vec();
    coeffs.resize(degree, field.elem(0));
    coeffs.push(field.elem(1));
    Poly::from_coeffs(coeffs)
}

/// One random system of the given kind.
pub fn random_system<R: Rng + ?Sized>(
    field: &FieldSpec,
    kind: SampleKind,
    config: SampleConfig,
    rng: &mut R,
) -> CoveringSystem {
    let mut n = rng.gen_range(1..=config.max_lcm_degree.max(1));
    let mut r = random_base(field, n, rng);
    if matches!(kind, SampleKind::Refinement | SampleKind::Punctured) {
        // the first split uses the smallest prime of R, which must fit the budget
        let budget = config.max_progressions.max(field.q() as usize);
        while smallest_prime_norm(field, &r) > budget {
            n = rng.gen_range(1..=config.max_lcm_degree.max(1));
            r = random_base(field, n, rng);
        }
    }
    let divisors: Vec<Poly> =
        monic_divisors(field, &r).expect("monic").into_iter().filter(|d| d.degree().unwrap_or(0) >= 1).collect();
    let prog = |a: &Poly, d: &Poly| ArithmeticProgression::new(field, a, d).expect("monic modulus");
    let progs = match kind {
        SampleKind::Random => {
            let k = rng.gen_range(1..=config.max_progressions.max(1));
            (0..k)
                .map(|_| {
                    let d = divisors.choose(rng).expect("R has a nonconstant divisor");
                    prog(&random_poly(field, d.degree().unwrap_or(0), rng), d)
                })
                .collect()
        }
        SampleKind::Sparse => {
            let floor = n.div_ceil(2).max(1);
            let wide: Vec<&Poly> = divisors.iter().filter(|d| d.degree().unwrap_or(0) >= floor).collect();
            let k = rng.gen_range(1..=config.max_progressions.clamp(1, 4));
            (0..k)
                .map(|_| {
                    let d = *wide.choose(rng).expect("R itself qualifies");
                    prog(&random_poly(field, d.degree().unwrap_or(0), rng), d)
                })
                .collect()
        }
        SampleKind::Refinement | SampleKind::Punctured => {
            let mut cover = refine(field, &r, config.max_progressions.max(field.q() as usize), rng);
            if kind == SampleKind::Punctured && cover.len() > 1 {
                let i = rng.gen_range(0..cover.len());
                cover.remove(i);
            }
            cover.into_iter().map(|(a, d)| prog(&a, &d)).collect()
        }
    };
    CoveringSystem::new(field.clone(), progs).expect("at least one progression")
}

fn random_base<R: Rng + ?Sized>(field: &FieldSpec, n: usize, rng: &mut R) -> Poly {
    if rng.gen_bool(0.5) {
        return random_monic(field, n, rng);
    }
    let mut r = Poly::one();
    let mut left = n;
    while left > 0 {
        let d = rng.gen_range(1..=left.min(3));
        r = field.poly_mul(&r, &random_monic(field, d, rng));
        left -= d;
    }
    r
}

fn smallest_prime_norm(field: &FieldSpec, r: &Poly) -> usize {
    let fac = field.factor(r).expect("nonzero");
    let deg = fac.factors.iter().map(|(p, _)| p.degree().unwrap_or(0)).min().unwrap_or(0);
    (field.q() as usize).saturating_pow(deg as u32)
}

/// Splits `0 mod 1` into a cover whose moduli divide `r`, never exceeding
/// `max_len` progressions.
fn refine<R: Rng + ?Sized>(field: &FieldSpec, r: &Poly, max_len: usize, rng: &mut R) -> Vec<(Poly, Poly)> {
    let mut cover = vec![(Poly::zero(), Poly::one())];
    loop {
        let first = cover[0].1.is_one();
        if !first && rng.gen_bool(0.1) {
            break;
        }
        let room = (max_len + 1).saturating_sub(cover.len());
        let mut options = Vec::new();
        for (i, (_, d)) in cover.iter().enumerate() {
            let rest = field.poly_divmod(r, d).expect("d divides r").0;
            if rest.is_one() {
                continue;
            }
            for (p, _) in field.factor(&rest).expect("nonzero").factors {
                let children = field.q().pow(p.degree().unwrap_or(0) as u32) as usize;
                if children <= room {
                    options.push((i, p));
                }
            }
        }
        if first {
            options.truncate(1);
        }
        let Some((i, p)) = options.choose(rng).cloned() else { break };
        let (a, d) = cover.remove(i);
        let dp = field.poly_mul(&d, &p);
        for c in 0..field.q().pow(p.degree().unwrap_or(0) as u32) as u64 {
            let shift = field.poly_mul(&d, &field.decode(c));
            cover.push((field.poly_add(&a, &shift), dp.clone()));
        }
    }
    cover
}
