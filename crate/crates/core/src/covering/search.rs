//! Exhaustive search for distinct covering systems with moduli dividing a bound.

use crate::algebra::{FieldSpec, Poly};
use crate::covering::{ArithmeticProgression, CoveringSystem, ExhaustiveLimit};
use crate::error::{Error, Result};

/// Monic divisors of `f` (including 1 and `f`), sorted canonically.
pub fn monic_divisors(field: &FieldSpec, f: &Poly) -> Result<Vec<Poly>> {
    let fac = field.factor(f)?;
    let mut out = vec![Poly::one()];
    for (p, e) in &fac.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = field.poly_mul(&cur, p);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

struct Candidate {
    modulus: Poly,
    // classes[offset code] = residues mod the bound in that class
    classes: Vec<Vec<u32>>,
    // residue code mod the bound -> offset code mod this modulus
    reduce: Vec<u32>,
}

struct Search {
    candidates: Vec<Candidate>,
    hits: Vec<u16>,
    uncovered: usize,
    capacity: usize,
    used: Vec<bool>,
    chosen: Vec<(usize, u32)>,
}

impl Search {
    fn apply(&mut self, cand: usize, off: u32, sign: i8) {
        for &c in &self.candidates[cand].classes[off as usize] {
            let h = &mut self.hits[c as usize];
            if sign > 0 {
                if *h == 0 {
                    self.uncovered -= 1;
                }
                *h += 1;
            } else {
                *h -= 1;
                if *h == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }

    fn run(&mut self, from: usize) -> bool {
        if self.uncovered == 0 {
            return true;
        }
        if self.capacity < self.uncovered {
            return false;
        }
        let r = (from..self.hits.len()).find(|&c| self.hits[c] == 0).expect("some residue uncovered");
        for i in 0..self.candidates.len() {
            if self.used[i] {
                continue;
            }
            let off = self.candidates[i].reduce[r];
            let size = self.candidates[i].classes[off as usize].len();
            self.used[i] = true;
            self.capacity -= size;
            self.apply(i, off, 1);
            self.chosen.push((i, off));
            if self.run(r + 1) {
                return true;
            }
            self.chosen.pop();
            self.apply(i, off, -1);
            self.capacity += size;
            self.used[i] = false;
        }
        false
    }
}

/// Finds a distinct covering system whose moduli all divide `lcm_bound` and
/// have degree at least `min_degree`, or proves none exists.
///
/// Complete: the least uncovered residue must lie in some chosen progression,
/// and for each unused modulus that fixes the offset.
pub fn search_distinct(
    field: &FieldSpec,
    min_degree: usize,
    lcm_bound: &Poly,
    limit: ExhaustiveLimit,
) -> Result<Option<CoveringSystem>> {
    if !lcm_bound.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = lcm_bound.degree().unwrap_or(0);
    let size = limit.residues(field, n)? as usize;
    let residues: Vec<Poly> = (0..size as u64).map(|c| field.decode(c)).collect();
    let mut candidates = Vec::new();
    for d in monic_divisors(field, lcm_bound)? {
        let deg = d.degree().unwrap_or(0);
        if deg == 0 || deg < min_degree {
            continue;
        }
        let classes_len = field.q().pow(deg as u32) as usize;
        let mut classes = vec![Vec::new(); classes_len];
        let mut reduce = Vec::with_capacity(size);
        for (c, r) in residues.iter().enumerate() {
            let off = field.encode(&field.poly_rem(r, &d)?) as u32;
            classes[off as usize].push(c as u32);
            reduce.push(off);
        }
        candidates.push(Candidate { modulus: d, classes, reduce });
    }
    let capacity = candidates.iter().map(|c| size / c.classes.len()).sum();
    let mut search = Search {
        used: vec![false; candidates.len()],
        candidates,
        hits: vec![0; size],
        uncovered: size,
        capacity,
        chosen: Vec::new(),
    };
    if !search.run(0) {
        return Ok(None);
    }
    let progs = search
        .chosen
        .iter()
        .map(|&(i, off)| ArithmeticProgression::new(field, &field.decode(off as u64), &search.candidates[i].modulus))
        .collect::<Result<Vec<_>>>()?;
    CoveringSystem::new(field.clone(), progs).map(Some)
}
