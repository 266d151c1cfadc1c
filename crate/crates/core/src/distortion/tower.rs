//! The prime tower `Q = Π p_j^{ν_j}` of a covering system, its bad sets, and a
//! coordinate system for residues modulo the partial products `Q_j`.
//!
//! A residue mod `Q_j` is stored as its CRT coordinates `(c_1, …, c_j)`, where
//! `c_k` is the base-q code of the residue mod `p_k^{ν_k}`, packed mixed-radix
//! with `c_1` most significant. Reducing mod `Q_{j-1}` is then integer division
//! by `L_j = q^{ν_j deg p_j}`, and the fibre over a parent is a contiguous block.

use crate::algebra::{FieldSpec, Poly};
use crate::covering::{ArithmeticProgression, CoveringSystem, ExhaustiveLimit};
use crate::error::{Error, Result};

/// Distinct prime divisors of `Q` in canonical order with their exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTower {
    field: FieldSpec,
    primes: Vec<Poly>,
    exponents: Vec<u32>,
    // partials[j] = Q_j, partials[0] = 1
    partials: Vec<Poly>,
}

impl PrimeTower {
    pub fn build(system: &CoveringSystem) -> Self {
        let field = system.field().clone();
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for prog in system.progressions() {
            let fac = field.factor(prog.modulus()).expect("moduli are nonzero");
            for (p, e) in fac.factors {
                match merged.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, cur)) => *cur = (*cur).max(e),
                    None => merged.push((p, e)),
                }
            }
        }
        merged.sort();
        let (primes, exponents): (Vec<Poly>, Vec<u32>) = merged.into_iter().unzip();
        let mut partials = vec![Poly::one()];
        for (p, &e) in primes.iter().zip(&exponents) {
            let next = field.poly_mul(partials.last().expect("nonempty"), &field.poly_pow(p, e));
            partials.push(next);
        }
        PrimeTower { field, primes, exponents, partials }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Number of distinct primes, `J`.
    pub fn levels(&self) -> usize {
        self.primes.len()
    }

    /// `p_j` for `1 ≤ j ≤ J`.
    pub fn prime(&self, j: usize) -> &Poly {
        &self.primes[j - 1]
    }

    /// `ν_j` for `1 ≤ j ≤ J`.
    pub fn exponent(&self, j: usize) -> u32 {
        self.exponents[j - 1]
    }

    pub fn prime_degree(&self, j: usize) -> usize {
        self.primes[j - 1].degree().unwrap_or(0)
    }

    /// `Q_j` for `0 ≤ j ≤ J`.
    pub fn partial(&self, j: usize) -> &Poly {
        &self.partials[j]
    }

    pub fn modulus(&self) -> &Poly {
        self.partials.last().expect("nonempty")
    }

    /// Exponent of each tower prime in `d` (which must divide `Q`).
    pub fn exponent_vector(&self, d: &Poly) -> Vec<u32> {
        self.primes
            .iter()
            .map(|p| {
                let mut e = 0;
                let mut rest = d.clone();
                while let Ok((quot, rem)) = self.field.poly_divmod(&rest, p) {
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quot;
                    e += 1;
                }
                e
            })
            .collect()
    }

    /// The level `j` with `d | Q_j` and `d ∤ Q_{j-1}`; 0 for `d = 1`.
    pub fn level_of(&self, d: &Poly) -> usize {
        self.exponent_vector(d).iter().rposition(|&e| e > 0).map_or(0, |k| k + 1)
    }

    pub(crate) fn check_level(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.levels() {
            return Err(Error::LevelOutOfRange { level: j, levels: self.levels() });
        }
        Ok(())
    }
}

/// The progressions first expressible modulo `Q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadSet {
    pub level: usize,
    pub progressions: Vec<ArithmeticProgression>,
}

impl BadSet {
    pub fn new(system: &CoveringSystem, tower: &PrimeTower, j: usize) -> Result<Self> {
        tower.check_level(j)?;
        let progressions = system.progressions().iter().filter(|p| tower.level_of(p.modulus()) == j).cloned().collect();
        Ok(BadSet { level: j, progressions })
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    /// Membership of any polynomial (its class mod `Q_j` decides).
    pub fn contains(&self, field: &FieldSpec, f: &Poly) -> bool {
        self.progressions.iter().any(|p| p.contains(field, f))
    }

    /// The residues mod `Q_j` lying in the set, sorted.
    pub fn lifted_classes(&self, tower: &PrimeTower, limit: ExhaustiveLimit) -> Result<Vec<Poly>> {
        let field = tower.field();
        let qj = tower.partial(self.level);
        let n = qj.degree().unwrap_or(0);
        let size = limit.residues(field, n)?;
        let mut marks = vec![false; size as usize];
        for p in &self.progressions {
            crate::covering::mark_members(field, p, n, &mut marks);
        }
        let mut out: Vec<Poly> =
            marks.iter().enumerate().filter(|(_, &m)| m).map(|(c, _)| field.decode(c as u64)).collect();
        out.sort();
        Ok(out)
    }
}

/// A progression compiled to CRT coordinates.
#[derive(Clone, Debug)]
pub(crate) struct CompiledProgression {
    // exps[k] = exponent of p_{k+1} in the modulus
    pub exps: Vec<u32>,
    // targets[k] = code of offset mod p_{k+1}^{exps[k]} (unused where exps[k] = 0)
    pub targets: Vec<u32>,
    // local codes c_level with c ≡ offset mod p_level^{exps}
    pub members: Vec<u32>,
}

/// CRT coordinates for residues modulo every `Q_j`.
#[derive(Clone, Debug)]
pub struct ResidueGrid {
    field: FieldSpec,
    tower: PrimeTower,
    // radix[k] = L_{k+1} = q^{ν_{k+1} deg p_{k+1}}
    radix: Vec<u64>,
    // sizes[j] = q^{deg Q_j}
    sizes: Vec<u64>,
    // reduce[k][e][c] = code of (c mod p_{k+1}^e)
    reduce: Vec<Vec<Vec<u32>>>,
    // prime_powers[k][e] = p_{k+1}^e
    prime_powers: Vec<Vec<Poly>>,
    pub(crate) progs: Vec<CompiledProgression>,
    // by_level[j] = indices into progs of B_j
    pub(crate) by_level: Vec<Vec<usize>>,
    multiplicity: usize,
    min_degree: usize,
}

impl ResidueGrid {
    pub fn new(system: &CoveringSystem, limit: ExhaustiveLimit) -> Result<Self> {
        Self::with_tower(system, PrimeTower::build(system), limit)
    }

    pub fn with_tower(system: &CoveringSystem, tower: PrimeTower, limit: ExhaustiveLimit) -> Result<Self> {
        let field = tower.field().clone();
        limit.residues(&field, tower.modulus().degree().unwrap_or(0))?;
        let levels = tower.levels();
        let q = field.q() as u64;
        let mut radix = Vec::with_capacity(levels);
        let mut sizes = vec![1u64];
        let mut reduce = Vec::with_capacity(levels);
        let mut prime_powers = Vec::with_capacity(levels);
        for j in 1..=levels {
            let width = tower.exponent(j) as usize * tower.prime_degree(j);
            let local = q.pow(width as u32);
            radix.push(local);
            sizes.push(sizes[j - 1] * local);
            let powers: Vec<Poly> = (0..=tower.exponent(j)).map(|e| field.poly_pow(tower.prime(j), e)).collect();
            let codes: Vec<Poly> = (0..local).map(|c| field.decode(c)).collect();
            let tables: Vec<Vec<u32>> = powers
                .iter()
                .map(|m| codes.iter().map(|c| field.encode(&field.poly_rem(c, m).expect("monic")) as u32).collect())
                .collect();
            reduce.push(tables);
            prime_powers.push(powers);
        }
        let mut progs = Vec::with_capacity(system.len());
        let mut by_level = vec![Vec::new(); levels + 1];
        for prog in system.progressions() {
            let exps = tower.exponent_vector(prog.modulus());
            let level = exps.iter().rposition(|&e| e > 0).map_or(0, |k| k + 1);
            let targets: Vec<u32> = exps
                .iter()
                .enumerate()
                .map(|(k, &e)| {
                    let r = field.poly_rem(prog.offset(), &prime_powers[k][e as usize]).expect("monic");
                    field.encode(&r) as u32
                })
                .collect();
            let (e_top, t_top) = (exps[level - 1] as usize, targets[level - 1]);
            let members =
                (0..radix[level - 1] as u32).filter(|&c| reduce[level - 1][e_top][c as usize] == t_top).collect();
            by_level[level].push(progs.len());
            progs.push(CompiledProgression { exps, targets, members });
        }
        Ok(ResidueGrid {
            field,
            tower,
            radix,
            sizes,
            reduce,
            prime_powers,
            progs,
            by_level,
            multiplicity: system.multiplicity(),
            min_degree: system.min_degree(),
        })
    }

    pub fn tower(&self) -> &PrimeTower {
        &self.tower
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn levels(&self) -> usize {
        self.tower.levels()
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    /// `q^{deg Q_j}`, the number of residues mod `Q_j`.
    pub fn size(&self, j: usize) -> u64 {
        self.sizes[j]
    }

    /// `q^{ν_j deg p_j}`, the number of lifts of a residue mod `Q_{j-1}` to `Q_j`.
    pub fn local_size(&self, j: usize) -> u64 {
        self.radix[j - 1]
    }

    /// Reduction table for coordinate `j`: code mod `p_j^e`.
    pub(crate) fn reduce_table(&self, j: usize, e: u32) -> &[u32] {
        &self.reduce[j - 1][e as usize]
    }

    /// Coordinates `(c_1, …, c_j)` of a level-`j` index.
    pub(crate) fn coords(&self, j: usize, mut idx: u64, out: &mut Vec<u32>) {
        out.clear();
        out.resize(j, 0);
        for k in (0..j).rev() {
            out[k] = (idx % self.radix[k]) as u32;
            idx /= self.radix[k];
        }
    }

    /// Index of `f mod Q_j`.
    pub fn index_of(&self, j: usize, f: &Poly) -> u64 {
        (0..j).fold(0u64, |acc, k| {
            let modulus = &self.prime_powers[k][self.tower.exponent(k + 1) as usize];
            let c = self.field.encode(&self.field.poly_rem(f, modulus).expect("monic"));
            acc * self.radix[k] + c
        })
    }

    /// The residue mod `Q_j` (degree below `deg Q_j`) with the given index.
    pub fn poly_of(&self, j: usize, idx: u64) -> Poly {
        if j == 0 {
            return Poly::zero();
        }
        let mut coords = Vec::new();
        self.coords(j, idx, &mut coords);
        let pairs: Vec<(Poly, Poly)> = coords
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                (self.field.decode(c as u64), self.prime_powers[k][self.tower.exponent(k + 1) as usize].clone())
            })
            .collect();
        self.field.crt(&pairs).expect("tower prime powers are coprime").0
    }

    /// Projection of a level-`k` index to level `j ≤ k`.
    pub fn project(&self, k: usize, j: usize, idx: u64) -> u64 {
        idx / (self.sizes[k] / self.sizes[j])
    }
}
