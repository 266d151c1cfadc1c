//! Fractions `α_j`, distorted measures `P_j`, and their moments, all exact.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::distortion::ResidueGrid;
use crate::rational::Rational;

/// `α_j` over every residue mod `Q_{j-1}`, and the bad set `B_j` mod `Q_j`.
#[derive(Clone, Debug)]
pub struct LevelSieve {
    level: usize,
    local: u64,
    // counts[r] = #{lifts of r lying in B_j}
    counts: Vec<u32>,
    // union_bound[r] = Σ over progressions of B_j meeting the fibre of r of their lift counts
    union_bound: Vec<u64>,
    in_bad: Vec<bool>,
}

impl LevelSieve {
    pub fn new(grid: &ResidueGrid, j: usize) -> Self {
        let local = grid.local_size(j);
        let parents = grid.size(j - 1);
        let mut counts = vec![0u32; parents as usize];
        let mut union_bound = vec![0u64; parents as usize];
        let mut in_bad = vec![false; (parents * local) as usize];
        let mut coords = Vec::new();
        let progs: Vec<_> = grid.by_level[j].iter().map(|&i| &grid.progs[i]).collect();
        for r in 0..parents {
            grid.coords(j - 1, r, &mut coords);
            let base = (r * local) as usize;
            for prog in &progs {
                let active = (0..j - 1).all(|k| {
                    let e = prog.exps[k];
                    e == 0 || grid.reduce_table(k + 1, e)[coords[k] as usize] == prog.targets[k]
                });
                if !active {
                    continue;
                }
                union_bound[r as usize] += prog.members.len() as u64;
                for &c in &prog.members {
                    let slot = &mut in_bad[base + c as usize];
                    if !*slot {
                        *slot = true;
                        counts[r as usize] += 1;
                    }
                }
            }
        }
        LevelSieve { level: j, local, counts, union_bound, in_bad }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of lifts of each residue mod `Q_{j-1}` to `Q_j`.
    pub fn local_size(&self) -> u64 {
        self.local
    }

    pub fn count(&self, parent: u64) -> u32 {
        self.counts[parent as usize]
    }

    /// `α_j(r)` for the residue with index `parent` mod `Q_{j-1}`.
    pub fn alpha(&self, parent: u64) -> Rational {
        Rational::new(BigInt::from(self.counts[parent as usize]), BigInt::from(self.local))
    }

    /// Sum over the progressions of `B_j` that meet the fibre of `parent` of the
    /// number of lifts each contains; never below `count(parent)`.
    pub fn union_bound(&self, parent: u64) -> u64 {
        self.union_bound[parent as usize]
    }

    /// Whether the residue with index `idx` mod `Q_j` lies in `B_j`.
    pub fn contains(&self, idx: u64) -> bool {
        self.in_bad[idx as usize]
    }

    pub fn parents(&self) -> u64 {
        self.counts.len() as u64
    }
}

/// Masses of `P_j` on the residues mod `Q_j`, exact and summing to 1.
///
/// Entry `r` is `P_j(r + ⟨Q_j⟩)`; since `P_j` is constant on each fibre mod `Q`,
/// the density on a single residue mod `Q` is this divided by `q^{deg Q − deg Q_j}`.
/// A level takes few distinct values, so entries are ids into a value list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureTable {
    level: usize,
    values: Vec<Rational>,
    ids: Vec<u32>,
}

#[derive(Default)]
struct Interner {
    values: Vec<Rational>,
    index: HashMap<Rational, u32>,
}

impl Interner {
    fn intern(&mut self, r: Rational) -> u32 {
        if let Some(&id) = self.index.get(&r) {
            return id;
        }
        let id = self.values.len() as u32;
        self.values.push(r.clone());
        self.index.insert(r, id);
        id
    }
}

impl MeasureTable {
    /// `P_0`, the uniform measure.
    pub fn uniform() -> Self {
        MeasureTable { level: 0, values: vec![Rational::one()], ids: vec![0] }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn mass(&self, idx: u64) -> &Rational {
        &self.values[self.ids[idx as usize] as usize]
    }

    /// The distinct masses taken by the table.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub(crate) fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        self.ids.iter().map(|&i| self.values[i as usize].clone()).collect()
    }

    /// `Σ mass(idx)` over the indices accepted by `keep`.
    pub fn sum_where(&self, mut keep: impl FnMut(u64) -> bool) -> Rational {
        let mut counts = vec![0u64; self.values.len()];
        for (idx, &id) in self.ids.iter().enumerate() {
            if keep(idx as u64) {
                counts[id as usize] += 1;
            }
        }
        weighted(&self.values, &counts)
    }

    pub fn total(&self) -> Rational {
        self.sum_where(|_| true)
    }

    /// `P_j(B_i)` for a bad set at level `i ≤ j`.
    pub fn mass_of(&self, grid: &ResidueGrid, sieve: &LevelSieve) -> Rational {
        let i = sieve.level();
        self.sum_where(|idx| sieve.contains(grid.project(self.level, i, idx)))
    }
}

fn weighted(values: &[Rational], counts: &[u64]) -> Rational {
    values
        .iter()
        .zip(counts)
        .filter(|(_, &c)| c > 0)
        .fold(Rational::zero(), |acc, (v, &c)| acc + v * Rational::from_integer(BigInt::from(c)))
}

/// `P_j` from `P_{j-1}` and `δ_j`.
pub fn measure_step(table: &MeasureTable, sieve: &LevelSieve, delta: &Rational) -> MeasureTable {
    assert_eq!(table.level + 1, sieve.level, "measure and sieve levels disagree");
    let local = sieve.local;
    let l = Rational::from_integer(BigInt::from(local));
    let one = Rational::one();
    let mut interner = Interner::default();
    // (parent id, count) -> (id inside B_j, id outside)
    let mut children: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
    let mut ids = Vec::with_capacity(table.ids.len() * local as usize);
    for (r, &pid) in table.ids.iter().enumerate() {
        let cnt = sieve.count(r as u64);
        let (id_in, id_out) = *children.entry((pid, cnt)).or_insert_with(|| {
            let alpha = sieve.alpha(r as u64);
            let (in_factor, out_factor) = if alpha.is_zero() {
                (one.clone(), one.clone())
            } else if alpha < *delta {
                (Rational::zero(), &one / (&one - &alpha))
            } else {
                let denom = &alpha * (&one - delta);
                ((&alpha - delta) / &denom, &alpha / &denom)
            };
            let share = &table.values[pid as usize] / &l;
            (interner.intern(&share * in_factor), interner.intern(&share * out_factor))
        });
        let base = r as u64 * local;
        ids.extend((0..local).map(|c| if sieve.contains(base + c) { id_in } else { id_out }));
    }
    MeasureTable { level: sieve.level, values: interner.values, ids }
}

/// `M_j^{(k)} = E_{j-1}[α_j^k]`.
pub fn moment(table: &MeasureTable, sieve: &LevelSieve, k: u32) -> Rational {
    moments(table, sieve, &[k]).pop().expect("one moment requested")
}

/// Several moments in one pass, grouped by the value of `α_j`.
pub fn moments(table: &MeasureTable, sieve: &LevelSieve, ks: &[u32]) -> Vec<Rational> {
    assert_eq!(table.level + 1, sieve.level, "measure and sieve levels disagree");
    let mut by_count: BTreeMap<u32, Vec<u64>> = BTreeMap::new();
    for (r, &id) in table.ids.iter().enumerate() {
        let c = sieve.count(r as u64);
        if c > 0 {
            by_count.entry(c).or_insert_with(|| vec![0; table.values.len()])[id as usize] += 1;
        }
    }
    let masses: Vec<(u32, Rational)> =
        by_count.into_iter().map(|(c, counts)| (c, weighted(&table.values, &counts))).collect();
    ks.iter()
        .map(|&k| {
            masses.iter().fold(Rational::zero(), |acc, (c, m)| {
                let a = Rational::new(BigInt::from(*c), BigInt::from(sieve.local));
                acc + num_traits::pow(a, k as usize) * m
            })
        })
        .collect()
}
