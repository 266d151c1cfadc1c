//! Text and JSON forms of covering systems.
//!
//! ```text
//! q=2                       # or q=2^2;modulus=t^2+t+1
//! 0 | x
//! 1 | x^2                   # offset | modulus
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{FieldSpec, Poly};
use crate::covering::{ArithmeticProgression, CoveringSystem};
use crate::error::{Error, Result};

fn line_err(line: usize, e: impl ToString) -> Error {
    Error::SystemFile { line, message: e.to_string() }
}

/// Parses the `q=` header line.
pub fn parse_field_header(text: &str) -> Result<FieldSpec> {
    let rest = text.trim().strip_prefix("q=").ok_or_else(|| Error::Syntax(format!("expected 'q=…', got '{text}'")))?;
    let (order, modulus) = match rest.split_once(';') {
        Some((o, m)) => {
            let m = m
                .trim()
                .strip_prefix("modulus=")
                .ok_or_else(|| Error::Syntax(format!("expected 'modulus=…', got '{m}'")))?;
            (o.trim(), Some(m))
        }
        None => (rest.trim(), None),
    };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| Error::Syntax(format!("bad number '{s}'")));
    let (p, e) = match order.split_once('^') {
        Some((p, e)) => (num(p)?, num(e)? as u32),
        None => (num(order)?, 1),
    };
    match modulus {
        None => FieldSpec::new(p, e, None),
        Some(m) => {
            let base = FieldSpec::prime(p)?;
            let poly = base.parse_poly_in(m, 't')?;
            let coeffs: Vec<u32> = poly.coeffs().iter().map(|c| c.index()).collect();
            FieldSpec::new(p, e, Some(&coeffs))
        }
    }
}

/// Header line for a field, inverse of [`parse_field_header`].
pub fn format_field_header(field: &FieldSpec) -> String {
    if field.is_prime_field() {
        return format!("q={}", field.p());
    }
    let base = FieldSpec::prime(field.p() as u64).expect("characteristic is prime");
    let m = base.format_poly_in(&Poly::from_u32s(field.modulus()), 't');
    format!("q={}^{};modulus={}", field.p(), field.e(), m)
}

/// Parses a covering-system file.
pub fn parse_system(text: &str) -> Result<CoveringSystem> {
    let mut field: Option<FieldSpec> = None;
    let mut progs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(f) = &field else {
            field = Some(parse_field_header(line).map_err(|e| line_err(line_no, e))?);
            continue;
        };
        let (a, d) = line.split_once('|').ok_or_else(|| line_err(line_no, "expected '<offset> | <modulus>'"))?;
        let a = f.parse_poly(a).map_err(|e| line_err(line_no, e))?;
        let d = f.parse_poly(d).map_err(|e| line_err(line_no, e))?;
        progs.push(ArithmeticProgression::new(f, &a, &d).map_err(|e| line_err(line_no, e))?);
    }
    let field = field.ok_or_else(|| line_err(0, "missing 'q=' header"))?;
    CoveringSystem::new(field, progs)
}

impl CoveringSystem {
    /// Canonical file text; `parse_system` of it gives back the same system.
    pub fn to_text(&self) -> String {
        let f = self.field();
        let mut out = format_field_header(f);
        out.push('\n');
        for p in self.progressions() {
            out.push_str(&format!("{} | {}\n", f.format_poly(p.offset()), f.format_poly(p.modulus())));
        }
        out
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    pub fn to_json(&self) -> SystemJson {
        let f = self.field();
        let base = FieldSpec::prime(f.p() as u64).expect("characteristic is prime");
        SystemJson {
            q: f.q(),
            p: f.p(),
            e: f.e(),
            modulus: base.format_poly_in(&Poly::from_u32s(f.modulus()), 't'),
            progressions: self
                .progressions()
                .iter()
                .map(|p| ProgressionJson { offset: f.format_poly(p.offset()), modulus: f.format_poly(p.modulus()) })
                .collect(),
        }
    }

    pub fn from_json(json: &SystemJson) -> Result<Self> {
        let base = FieldSpec::prime(json.p as u64)?;
        let field = if json.e == 1 {
            base
        } else {
            let m = base.parse_poly_in(&json.modulus, 't')?;
            let coeffs: Vec<u32> = m.coeffs().iter().map(|c| c.index()).collect();
            FieldSpec::new(json.p as u64, json.e, Some(&coeffs))?
        };
        let progs = json
            .progressions
            .iter()
            .map(|p| ArithmeticProgression::new(&field, &field.parse_poly(&p.offset)?, &field.parse_poly(&p.modulus)?))
            .collect::<Result<Vec<_>>>()?;
        CoveringSystem::new(field, progs)
    }
}

/// JSON mirror of the text file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    /// Extension modulus in `t` (`t` for prime fields).
    pub modulus: String,
    pub progressions: Vec<ProgressionJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionJson {
    pub offset: String,
    pub modulus: String,
}
