//! Finite fields F_q with q = p^e.
//!
//! Prime fields use plain modular arithmetic. Extension fields use the power
//! basis of F_p[t]/(modulus) with packed elements `Σ c_i p^i` and log/antilog
//! tables built from a primitive element.

use std::fmt;
use std::sync::Arc;

use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

/// Largest extension field order we build tables for.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;

/// Largest characteristic accepted; products of two residues must fit in `u64`.
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

/// Monic irreducible moduli bundled for every non-prime q ≤ 64, low degree first
/// (the leading 1 included).
static BUNDLED_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),          // t^2+t+1
    (2, 3, &[1, 1, 0, 1]),       // t^3+t+1
    (2, 4, &[1, 1, 0, 0, 1]),    // t^4+t+1
    (2, 5, &[1, 0, 1, 0, 0, 1]), // t^5+t^2+1
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),    // t^2+1
    (3, 3, &[1, 2, 0, 1]), // t^3+2t+1
    (5, 2, &[2, 0, 1]),    // t^2+2
    (7, 2, &[1, 0, 1]),    // t^2+1
];

/// An element of F_q, packed as the base-p number of its power-basis coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Packed index in `[0, q)`.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    // Extension fields only: exp[i] = g^i for i in 0..q-1, log[exp[i]] = i.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The coefficient field F_q. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("e", &self.e())
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.e() == other.e() && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds F_{p^e}. For e > 1 the modulus is the list of e+1 coefficients over
    /// F_p, constant term first; when omitted a bundled modulus is used (q ≤ 64).
    pub fn new(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(Error::UnsupportedFieldSize(format!("characteristic {p} too large")));
        }
        if e == 0 {
            return Err(Error::UnsupportedFieldSize("extension degree must be at least 1".into()));
        }
        let p = p as u32;
        if e == 1 {
            return Ok(Self::prime_unchecked(p));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|&q| q <= MAX_EXTENSION_ORDER)
            .ok_or_else(|| Error::UnsupportedFieldSize(format!("{p}^{e} exceeds {MAX_EXTENSION_ORDER}")))?;
        let modulus: Vec<u32> = match modulus {
            Some(m) => m.to_vec(),
            None => BUNDLED_MODULI
                .iter()
                .find(|(bp, be, _)| *bp == p && *be == e)
                .map(|(_, _, m)| m.to_vec())
                .ok_or_else(|| {
                    Error::UnsupportedFieldSize(format!("no bundled modulus for q = {p}^{e}; supply one explicitly"))
                })?,
        };
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::ReducibleModulus(e));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::CoefficientOutOfRange { value: c.to_string(), p });
        }
        let base = Self::prime_unchecked(p);
        let mpoly = Poly::from_coeffs(modulus.iter().map(|&c| FieldElem(c)).collect());
        if !base.irreducible_test(&mpoly)? {
            return Err(Error::ReducibleModulus(e));
        }
        Ok(Self::extension_unchecked(p, e, q as u32, modulus))
    }

    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn prime_unchecked(p: u32) -> Self {
        FieldSpec { inner: Arc::new(FieldInner { p, e: 1, q: p, modulus: vec![0, 1], exp: vec![], log: vec![] }) }
    }

    fn extension_unchecked(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut field = FieldInner { p, e, q, modulus, exp: vec![], log: vec![] };
        let order = q - 1;
        let prime_factors = distinct_prime_factors(order as u64);
        let generator = (2..q)
            .find(|&g| prime_factors.iter().all(|&r| slow_pow(&field, g, (order as u64 / r) as u32) != 1))
            .unwrap_or(1); // q = 2 cannot reach here; F_{p^e} always has a generator
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(&field, x, generator);
        }
        field.exp = exp;
        field.log = log;
        FieldSpec { inner: Arc::new(field) }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn e(&self) -> u32 {
        self.inner.e
    }

    /// Field order q = p^e.
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Extension modulus over F_p, constant term first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.e == 1
    }

    /// Element from its power-basis coordinates `c_0, …, c_{e-1}`.
    pub fn elem_from_coords(&self, coords: &[u32]) -> Result<FieldElem> {
        if coords.len() != self.e() as usize {
            return Err(Error::Syntax(format!("expected {} coordinates, got {}", self.e(), coords.len())));
        }
        let mut packed = 0u64;
        for &c in coords.iter().rev() {
            if c >= self.p() {
                return Err(Error::CoefficientOutOfRange { value: c.to_string(), p: self.p() });
            }
            packed = packed * self.p() as u64 + c as u64;
        }
        Ok(FieldElem(packed as u32))
    }

    /// Power-basis coordinates `c_0, …, c_{e-1}`, each in `[0, p)`.
    pub fn coords(&self, a: FieldElem) -> Vec<u32> {
        let p = self.p();
        let mut v = a.0;
        (0..self.e())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// Element with packed index `i`; `i` must be below q.
    pub fn elem(&self, i: u32) -> FieldElem {
        debug_assert!(i < self.q());
        FieldElem(i)
    }

    /// All q elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q()).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElem((s % p as u64) as u32);
        }
        if p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.inner.p;
        if self.inner.e == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let inner = &*self.inner;
        if inner.e == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        let order = inner.q - 1;
        let s = (inner.log[a.0 as usize] + inner.log[b.0 as usize]) % order;
        FieldElem(inner.exp[s as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.inner;
        if inner.e == 1 {
            return Some(FieldElem(mod_pow(a.0 as u64, inner.p as u64 - 2, inner.p as u64) as u32));
        }
        let order = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Some(FieldElem(inner.exp[((order - l) % order) as usize]))
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Schoolbook multiplication in F_p[t]/(modulus), used only to build the tables.
fn slow_mul(f: &FieldInner, a: u32, b: u32) -> u32 {
    let (p, e) = (f.p as u64, f.e as usize);
    let digits = |mut v: u32| {
        (0..e)
            .map(|_| {
                let c = v as u64 % p;
                v /= f.p;
                c
            })
            .collect::<Vec<_>>()
    };
    let (x, y) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi * yj) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for i in 0..=e {
            let idx = k - e + i;
            prod[idx] = (prod[idx] + (p - c) * f.modulus[i] as u64) % p;
        }
    }
    prod[..e].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

fn slow_pow(f: &FieldInner, g: u32, mut k: u32) -> u32 {
    let (mut r, mut b) = (1u32, g);
    while k > 0 {
        if k & 1 == 1 {
            r = slow_mul(f, r, b);
        }
        b = slow_mul(f, b, b);
        k >>= 1;
    }
    r
}
