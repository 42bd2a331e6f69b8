//! Exact sparse Laurent polynomials in `q = t^(1/4)`.
//!
//! Exponents count quarter-powers of `t`, so every power of `t` that shows up
//! in the state sum (`t^(±1/4)`, `t^(±1/2)`, `t^(3/4)`) is an integer power of
//! `q`. Coefficients are `i64` and every operation is overflow-checked.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("coefficient overflow in polynomial arithmetic")]
    Overflow,
    #[error("negative power of a polynomial that is not a single term")]
    NonMonomialInverse,
}

/// One `(exponent, coefficient)` record of the JSON term list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp_quarter: i32,
    pub coeff: i64,
}

/// Laurent polynomial in `q`, stored as exponent -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * q^exp`.
    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// The loop value `-t^(-1/2) - t^(1/2) = -q^-2 - q^2`.
    pub fn loop_factor() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(-2, -1);
        terms.insert(2, -1);
        Self { terms }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// merging repeated exponents and dropping zeros.
    pub fn from_terms<I>(iter: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (i32, i64)>,
    {
        let mut p = Self::zero();
        for (exp, coeff) in iter {
            p.add_term(exp, coeff)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: i32, coeff: i64) -> Result<(), PolyError> {
        if coeff == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot = slot.checked_add(coeff).ok_or(PolyError::Overflow)?;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// True when every exponent is a multiple of four, i.e. the polynomial
    /// is an honest Laurent polynomial in `t`.
    pub fn is_integral_in_t(&self) -> bool {
        self.terms.keys().all(|e| e.rem_euclid(4) == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<(), PolyError> {
        for (e, c) in other.terms() {
            self.add_term(e, c)?;
        }
        Ok(())
    }

    pub fn neg(&self) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(&e, &c)| c.checked_neg().map(|c| (e, c)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let exp = e1.checked_add(e2).ok_or(PolyError::Overflow)?;
                let coeff = c1.checked_mul(c2).ok_or(PolyError::Overflow)?;
                out.add_term(exp, coeff)?;
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: i64) -> Result<Self, PolyError> {
        if k == 0 {
            return Ok(Self::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|(&e, &c)| c.checked_mul(k).map(|c| (e, c)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { terms })
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i32) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|(&e, &c)| {
                e.checked_add(shift)
                    .map(|e| (e, c))
                    .ok_or(PolyError::Overflow)
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { terms })
    }

    /// Integer power. Negative powers are only defined for `±q^e`.
    pub fn pow(&self, k: i32) -> Result<Self, PolyError> {
        if k < 0 {
            let (exp, coeff) = match self.terms.iter().next() {
                Some((&e, &c)) if self.terms.len() == 1 && (c == 1 || c == -1) => (e, c),
                _ => return Err(PolyError::NonMonomialInverse),
            };
            let m = k.checked_neg().ok_or(PolyError::Overflow)?;
            let exp = exp.checked_mul(k).ok_or(PolyError::Overflow)?;
            let coeff = if coeff == -1 && m % 2 == 1 { -1 } else { 1 };
            return Ok(Self::monomial(coeff, exp));
        }
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Substitutes `t -> t^-1` (negates every exponent).
    pub fn mirror(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn to_json_terms(&self) -> Vec<Term> {
        self.terms()
            .map(|(exp_quarter, coeff)| Term { exp_quarter, coeff })
            .collect()
    }

    /// Inverse of [`to_json_terms`](Self::to_json_terms). Rejects zero
    /// coefficients and exponents that are not strictly ascending, so only
    /// canonical term lists are accepted.
    pub fn from_json_terms(terms: &[Term]) -> Result<Self, TermListError> {
        let mut out = BTreeMap::new();
        let mut last = None;
        for t in terms {
            if t.coeff == 0 {
                return Err(TermListError::ZeroCoefficient(t.exp_quarter));
            }
            if last.is_some_and(|l| l >= t.exp_quarter) {
                return Err(TermListError::NotAscending(t.exp_quarter));
            }
            last = Some(t.exp_quarter);
            out.insert(t.exp_quarter, t.coeff);
        }
        Ok(Self { terms: out })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_terms()).expect("term list serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TermListError> {
        let terms: Vec<Term> =
            serde_json::from_str(text).map_err(|e| TermListError::Json(e.to_string()))?;
        Self::from_json_terms(&terms)
    }

    /// Text form: in `t` when every exponent is a multiple of four, otherwise
    /// in `q` followed by a `[non-integral t-powers]` marker.
    pub fn render(&self) -> String {
        if self.is_integral_in_t() {
            self.write_terms('t', 4)
        } else {
            let mut out = self.write_terms('q', 1);
            out.push_str(" [non-integral t-powers]");
            out
        }
    }

    /// Renders in the quarter-power variable q = t^(1/4) unconditionally.
    pub fn render_in_q(&self) -> String {
        self.write_terms('q', 1)
    }

    fn write_terms(&self, var: char, divisor: i32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (exp, coeff)) in self.terms().enumerate() {
            let exp = exp / divisor;
            let mag = coeff.unsigned_abs();
            match (idx, coeff < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if exp == 0 {
                out.push_str(&mag.to_string());
                continue;
            }
            if mag != 1 {
                out.push_str(&mag.to_string());
            }
            out.push(var);
            if exp != 1 {
                out.push('^');
                out.push_str(&exp.to_string());
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermListError {
    #[error("malformed term list: {0}")]
    Json(String),
    #[error("zero coefficient at exponent {0}")]
    ZeroCoefficient(i32),
    #[error("exponent {0} is not strictly ascending")]
    NotAscending(i32),
}
