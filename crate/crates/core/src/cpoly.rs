//! Commutative polynomials keyed by exponent vectors.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::Multidegree;

#[derive(Clone, PartialEq)]
pub struct CPolynomial {
    g: usize,
    terms: BTreeMap<Multidegree, Complex64>,
}

impl CPolynomial {
    pub fn zero(g: usize) -> Self {
        CPolynomial {
            g,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(g: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Multidegree, Complex64)>,
    {
        let mut p = Self::zero(g);
        for (m, c) in terms {
            if m.g() != g {
                return Err(Error::ArityMismatch {
                    expected: g,
                    found: m.g(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Linear form `sum_i coeffs[i] X_{i+1}`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let g = coeffs.len();
        let mut p = Self::zero(g);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; g];
            e[i] = 1;
            p.add_term(Multidegree::new(e), c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Multidegree, c: Complex64) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn coeff(&self, m: &Multidegree) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Complex64)> {
        self.terms.iter()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|m| m.total() == d)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.g);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, d: usize) -> Self {
        let mut acc = Self::zero(self.g);
        acc.add_term(Multidegree::new(vec![0; self.g]), Complex64::new(1.0, 0.0));
        for _ in 0..d {
            acc = acc.mul(self).expect("same arity");
        }
        acc
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
}

impl fmt::Debug for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPolynomial(g={}, {})", self.g, self)
    }
}

impl fmt::Display for CPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (j, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*X{}", j + 1)?,
                    _ => write!(f, "*X{}^{}", j + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    g: usize,
    terms: Vec<TermJson>,
}

impl Serialize for CPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exponents: m.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        CPolynomial::from_terms(
            raw.g,
            raw.terms
                .into_iter()
                .map(|t| (Multidegree::new(t.exponents), Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}
