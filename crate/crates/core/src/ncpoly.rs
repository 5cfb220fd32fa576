//! Noncommutative polynomials over the complex numbers.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::Word;

/// An element of the free algebra `C<x_1, ..., x_g>`.
///
/// Coefficients are stored sparsely; a coefficient that becomes exactly zero
/// is removed. Iteration follows the canonical term order (degree, then
/// lexicographic word).
#[derive(Clone, PartialEq)]
pub struct NCPolynomial {
    g: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl NCPolynomial {
    pub fn zero(g: usize) -> Self {
        NCPolynomial {
            g,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial, i.e. `c` times the empty word.
    pub fn constant(g: usize, c: Complex64) -> Self {
        Self::monomial(g, Word::empty(), c)
    }

    pub fn one(g: usize) -> Self {
        Self::constant(g, Complex64::one())
    }

    /// The single variable `x_i` (1-based).
    pub fn var(g: usize, i: u32) -> Self {
        Self::monomial(g, Word::new(vec![i]), Complex64::one())
    }

    pub fn monomial(g: usize, word: Word, c: Complex64) -> Self {
        let mut p = Self::zero(g);
        p.add_term(word, c);
        p
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, combining like
    /// words. Every word is validated against `g`.
    pub fn from_terms<I>(g: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Complex64)>,
    {
        let mut p = Self::zero(g);
        for (w, c) in terms {
            w.validate(g)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Linear form `sum_i coeffs[i] x_{i+1}`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let g = coeffs.len();
        let mut p = Self::zero(g);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Word::new(vec![i as u32 + 1]), c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Complex64) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms.get(w).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    /// True iff every stored word has length `d`.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|w| w.len() == d)
    }

    /// The common degree of all terms; `Ok(None)` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let d = first.len();
        if self.is_homogeneous(d) {
            Ok(Some(d))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.g != other.g {
            return Err(Error::ArityMismatch {
                expected: self.g,
                found: other.g,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-Complex64::one()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.g);
        for (w, &c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Free-algebra product: the coefficient of `w` is the sum of
    /// `P_u * Q_v` over all splittings `w = u v`.
    pub fn nc_mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.g);
        for (u, &a) in &self.terms {
            for (v, &b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    /// `self^d` by repeated multiplication on the right; `d = 0` gives 1.
    pub fn nc_pow(&self, d: usize) -> Self {
        let mut acc = Self::one(self.g);
        for _ in 0..d {
            acc = acc.nc_mul(self).expect("same arity");
        }
        acc
    }

    /// Re-indexes the polynomial as one with a larger arity.
    pub fn with_arity(&self, g: usize) -> Result<Self> {
        Self::from_terms(g, self.terms.iter().map(|(w, &c)| (w.clone(), c)))
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCPolynomial(g={}, {})", self.g, self)
    }
}

/// Canonical text form, accepted back by [`crate::parse_ncpoly`].
impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (negative, coeff) = if c.im == 0.0 {
                let re = c.re;
                let neg = re.is_sign_negative();
                let mag = re.abs();
                (
                    neg,
                    if mag == 1.0 {
                        None
                    } else {
                        Some(format!("{mag}"))
                    },
                )
            } else {
                let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                (false, Some(format!("({}{}{}i)", c.re, sign, c.im.abs())))
            };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (coeff, w.is_empty()) {
                (Some(c), true) => f.write_str(&c)?,
                (Some(c), false) => write!(f, "{c}*{w}")?,
                (None, true) => f.write_str("1")?,
                (None, false) => write!(f, "{w}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    g: usize,
    terms: Vec<TermJson>,
}

impl Serialize for NCPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson {
                    word: w.indices().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        NCPolynomial::from_terms(
            raw.g,
            raw.terms
                .into_iter()
                .map(|t| (Word::new(t.word), Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
