//! Polynomial text syntax.
//!
//! Terms are joined by `+`; a term is `c`, `x`, `x^k`, `cx` or `cx^k`. Over a
//! prime field `c` is a decimal integer below p; over F_{p^e} it is the tuple
//! `(c_{e-1},…,c_0)` of power-basis coordinates. Whitespace is ignored and `0`
//! is the zero polynomial. Output lists terms by descending degree and omits
//! zero and unit coefficients, e.g. `x^2+x+1`.

use crate::algebra::field::{FieldElem, FieldSpec};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

impl FieldSpec {
    /// Parses a polynomial in `x`.
    pub fn parse_poly(&self, text: &str) -> Result<Poly> {
        self.parse_poly_in(text, 'x')
    }

    /// Parses a polynomial in the given variable.
    pub fn parse_poly_in(&self, text: &str, var: char) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Syntax("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(Poly::zero());
        }
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for term in split_terms(&s)? {
            let (c, k) = self.parse_term(term, var)?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, FieldElem::ZERO);
            }
            coeffs[k] = self.add(coeffs[k], c);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    fn parse_term(&self, term: &str, var: char) -> Result<(FieldElem, usize)> {
        let (coef_text, rest) = match term.find(var) {
            Some(i) => (&term[..i], Some(&term[i + var.len_utf8()..])),
            None => (term, None),
        };
        let coef = if coef_text.is_empty() {
            if rest.is_none() {
                return Err(Error::Syntax(format!("empty term in '{term}'")));
            }
            FieldElem::ONE
        } else {
            self.parse_coefficient(coef_text)?
        };
        let exponent = match rest {
            None => 0,
            Some("") => 1,
            Some(r) => {
                let digits =
                    r.strip_prefix('^').ok_or_else(|| Error::Syntax(format!("unexpected '{r}' after {var}")))?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Syntax(format!("bad exponent '{digits}'")));
                }
                digits.parse::<usize>().map_err(|e| Error::Syntax(e.to_string()))?
            }
        };
        Ok((coef, exponent))
    }

    fn parse_coefficient(&self, text: &str) -> Result<FieldElem> {
        let p = self.p();
        let parse_digit = |d: &str| -> Result<u32> {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Syntax(format!("bad coefficient '{d}'")));
            }
            match d.parse::<u64>() {
                Ok(v) if v < p as u64 => Ok(v as u32),
                _ => Err(Error::CoefficientOutOfRange { value: d.to_string(), p }),
            }
        };
        if self.is_prime_field() {
            return Ok(self.elem(parse_digit(text)?));
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Syntax(format!("extension coefficient must be a tuple, got '{text}'")))?;
        let mut coords = inner.split(',').map(parse_digit).collect::<Result<Vec<u32>>>()?;
        coords.reverse();
        self.elem_from_coords(&coords)
    }

    /// Canonical text for a coefficient.
    pub fn format_elem(&self, c: FieldElem) -> String {
        if self.is_prime_field() {
            return c.index().to_string();
        }
        let coords: Vec<String> = self.coords(c).iter().rev().map(u32::to_string).collect();
        format!("({})", coords.join(","))
    }

    /// Canonical text for a polynomial in `x`.
    pub fn format_poly(&self, f: &Poly) -> String {
        self.format_poly_in(f, 'x')
    }

    pub fn format_poly_in(&self, f: &Poly, var: char) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (k, &c) in f.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coef = if c == FieldElem::ONE && k > 0 { String::new() } else { self.format_elem(c) };
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            terms.push(format!("{coef}{mono}"));
        }
        terms.join("+")
    }
}

// Split on '+' outside parentheses.
fn split_terms(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Syntax("unbalanced ')'".into()));
                }
            }
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Syntax("unbalanced '('".into()));
    }
    out.push(&s[start..]);
    if out.iter().any(|t| t.is_empty()) {
        return Err(Error::Syntax("empty term".into()));
    }
    Ok(out)
}
