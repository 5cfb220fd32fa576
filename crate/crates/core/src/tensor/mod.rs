//! Symmetric tensors, their decomposition, and the Waring pipeline.

mod cpd;
mod pipeline;
mod rank;
mod takagi;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{check_compatibility, multinomial_f64};
use crate::cpoly::CPolynomial;
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::{for_each_word, Multidegree, Word};

pub use cpd::{symmetric_cpd, CpdOutcome, RestartTrace};
pub use pipeline::{
    verify_decomposition, waring_decompose, Certificate, DecompositionConfig, DecompositionLog,
    DecompositionResult, LogEntry, Status, WaringDecomposition,
};
pub use rank::{binomial, generic_rank};
pub use takagi::{takagi, Takagi};

/// Order-`d` symmetric tensor on `C^g`, stored by multidegree. The dense
/// entry at word `a` is the stored value for `a`'s multidegree.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor {
    g: usize,
    d: usize,
    entries: BTreeMap<Multidegree, Complex64>,
}

impl SymmetricTensor {
    pub fn zero(g: usize, d: usize) -> Self {
        SymmetricTensor {
            g,
            d,
            entries: BTreeMap::new(),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, word: &[u32]) -> Complex64 {
        self.get_md(&Word::from(word).multidegree(self.g))
    }

    pub fn get_md(&self, m: &Multidegree) -> Complex64 {
        self.entries.get(m).copied().unwrap_or_else(Complex64::zero)
    }

    /// Nonzero entries by multidegree.
    pub fn entries(&self) -> impl Iterator<Item = (&Multidegree, &Complex64)> {
        self.entries.iter()
    }

    pub(crate) fn set(&mut self, m: Multidegree, c: Complex64) {
        if c.is_zero() {
            self.entries.remove(&m);
        } else {
            self.entries.insert(m, c);
        }
    }

    /// All `g^d` entries, words in lexicographic order (the last index
    /// varies fastest).
    pub fn dense(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.g.pow(self.d as u32));
        for_each_word(self.g, self.d, |w| out.push(self.get(w)));
        out
    }

    /// Builds a tensor from its dense entries, rejecting inputs whose
    /// entries differ within a symmetry class by more than `1e-12` relative
    /// to the largest entry.
    pub fn from_dense(g: usize, d: usize, data: &[Complex64]) -> Result<Self> {
        let expected = g
            .checked_pow(d as u32)
            .ok_or_else(|| Error::Overflow("g^d".into()))?;
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} entries, got {}",
                data.len()
            )));
        }
        let scale = data.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let mut first: BTreeMap<Multidegree, (Vec<u32>, Complex64)> = BTreeMap::new();
        let mut k = 0;
        let mut bad = None;
        for_each_word(g, d, |w| {
            let v = data[k];
            k += 1;
            let m = Word::from(w).multidegree(g);
            match first.get(&m) {
                None => {
                    first.insert(m, (w.to_vec(), v));
                }
                Some((w0, v0)) => {
                    let diff = (v - v0).norm();
                    if diff > 1e-12 * scale && bad.is_none() {
                        bad = Some((w0.clone(), w.to_vec(), diff));
                    }
                }
            }
        });
        if let Some((a, b, diff)) = bad {
            return Err(Error::Asymmetric { a, b, diff });
        }
        let mut t = SymmetricTensor::zero(g, d);
        for (m, (_, v)) in first {
            t.set(m, v);
        }
        Ok(t)
    }

    /// `sum_s v_s^{(x) d}`.
    pub fn from_vectors(g: usize, d: usize, vectors: &[Vec<Complex64>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != g) {
            return Err(Error::Shape(format!(
                "vector of length {} for dimension {g}",
                v.len()
            )));
        }
        let mut t = SymmetricTensor::zero(g, d);
        for m in Multidegree::all(g, d) {
            let mut acc = Complex64::zero();
            for v in vectors {
                acc += monomial_value(v, m.exponents());
            }
            t.set(m, acc);
        }
        Ok(t)
    }

    /// Frobenius norm over all `g^d` dense entries.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|(m, c)| eta_of(m) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn distance(&self, other: &SymmetricTensor) -> Result<f64> {
        if self.g != other.g || self.d != other.d {
            return Err(Error::Shape(format!(
                "tensor shapes ({}, {}) and ({}, {})",
                self.g, self.d, other.g, other.d
            )));
        }
        let mut keys: Vec<&Multidegree> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort();
        keys.dedup();
        Ok(keys
            .into_iter()
            .map(|m| eta_of(m) * (self.get_md(m) - other.get_md(m)).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

pub(crate) fn eta_of(m: &Multidegree) -> f64 {
    multinomial_f64(m.exponents().iter().map(|&e| e as usize))
}

pub(crate) fn monomial_value(v: &[Complex64], exps: &[u32]) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    for (x, &e) in v.iter().zip(exps) {
        if e > 0 {
            p *= x.powu(e);
        }
    }
    p
}

/// `T_a = pc[multidegree(a)] / eta(a)`, so that `sum_a T_a X^a = pc`.
pub fn tensor_from_cpoly(pc: &CPolynomial, d: usize) -> Result<SymmetricTensor> {
    if !pc.is_homogeneous(d) {
        return Err(Error::NotHomogeneous);
    }
    let mut t = SymmetricTensor::zero(pc.g(), d);
    for (m, &c) in pc.terms() {
        t.set(m.clone(), c / eta_of(m));
    }
    Ok(t)
}

/// For a 1-compatible polynomial the tensor entries are its coefficients.
pub fn tensor_from_ncpoly(p: &NCPolynomial) -> Result<SymmetricTensor> {
    let d = p.homogeneous_degree()?.unwrap_or(0);
    let report = check_compatibility(p, 1)?;
    if !report.compatible {
        return Err(Error::Invalid(
            "polynomial is not compatible; its coefficients do not form a symmetric tensor".into(),
        ));
    }
    let mut t = SymmetricTensor::zero(p.g(), d);
    for (w, &c) in p.terms() {
        t.set(w.multidegree(p.g()), c);
    }
    Ok(t)
}

/// Inverse of [`tensor_from_cpoly`].
pub fn cpoly_from_tensor(t: &SymmetricTensor) -> CPolynomial {
    let mut pc = CPolynomial::zero(t.g);
    for (m, &c) in &t.entries {
        pc.add_term(m.clone(), c * eta_of(m));
    }
    pc
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    word: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    g: usize,
    d: usize,
    entries: Vec<EntryJson>,
}

impl Serialize for SymmetricTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            g: self.g,
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|(m, c)| EntryJson {
                    word: m.representative().into_indices(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(d)?;
        let mut t = SymmetricTensor::zero(raw.g, raw.d);
        for e in raw.entries {
            let w = Word::checked(e.word, raw.g).map_err(D::Error::custom)?;
            if w.len() != raw.d {
                return Err(D::Error::custom(format!("entry {w:?} has wrong order")));
            }
            t.set(w.multidegree(raw.g), Complex64::new(e.re, e.im));
        }
        Ok(t)
    }
}
