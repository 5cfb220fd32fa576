use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::{for_each_word, Word};

/// Numbering of the length-`delta` blocks over `1..=g` as new variables
/// `z_1 .. z_{g^delta}`, in lexicographic block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexBijection {
    g: usize,
    delta: usize,
    blocks: Vec<Word>,
}

impl IndexBijection {
    pub fn new(g: usize, delta: usize) -> Result<Self> {
        if g == 0 || delta == 0 {
            return Err(Error::Invalid("g and delta must be positive".into()));
        }
        let n = (g as u64)
            .checked_pow(delta as u32)
            .filter(|&n| n <= u32::MAX as u64)
            .ok_or_else(|| Error::Overflow(format!("{g}^{delta} block variables")))?;
        let mut blocks = Vec::with_capacity(n as usize);
        for_each_word(g, delta, |b| blocks.push(Word::from(b)));
        Ok(IndexBijection { g, delta, blocks })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of block variables, `g^delta`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    /// The block for variable `z_k` (1-based).
    pub fn block(&self, k: u32) -> Option<&Word> {
        self.blocks.get((k as usize).checked_sub(1)?)
    }

    /// The 1-based variable index of `block`.
    pub fn index_of(&self, block: &[u32]) -> u32 {
        debug_assert_eq!(block.len(), self.delta);
        let mut k = 0u32;
        for &i in block {
            k = k * self.g as u32 + (i - 1);
        }
        k + 1
    }
}

impl Serialize for IndexBijection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexBijection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let blocks: Vec<Word> = Vec::deserialize(d)?;
        let delta = blocks.first().map(Word::len).unwrap_or(0);
        let g = blocks
            .iter()
            .flat_map(|b| b.indices().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let canon = IndexBijection::new(g, delta).map_err(D::Error::custom)?;
        if canon.blocks != blocks {
            return Err(D::Error::custom(
                "bijection must list all blocks in lexicographic order",
            ));
        }
        Ok(canon)
    }
}

/// Regroups each degree `delta * d` word into `d` blocks and renames every
/// block as a single variable, yielding a degree-`d` polynomial in
/// `g^delta` variables. Coefficients carry over unchanged.
pub fn phi_reduce(p: &NCPolynomial, delta: usize) -> Result<(NCPolynomial, IndexBijection)> {
    let bij = IndexBijection::new(p.g(), delta)?;
    if let Some(degree) = p.homogeneous_degree()? {
        if degree % delta != 0 {
            return Err(Error::DeltaDoesNotDivide { degree, delta });
        }
    }
    let terms = p.terms().map(|(w, &c)| {
        let z: Vec<u32> = w.indices().chunks(delta).map(|b| bij.index_of(b)).collect();
        (Word::new(z), c)
    });
    Ok((NCPolynomial::from_terms(bij.len(), terms)?, bij))
}

/// Substitutes each block variable back by its block of `x` letters.
pub fn phi_inverse(q: &NCPolynomial, bij: &IndexBijection) -> Result<NCPolynomial> {
    if q.g() != bij.len() {
        return Err(Error::ArityMismatch {
            expected: bij.len(),
            found: q.g(),
        });
    }
    let terms = q.terms().map(|(w, &c)| {
        let x: Vec<u32> = w
            .indices()
            .iter()
            .flat_map(|&k| {
                bij.block(k)
                    .expect("validated index")
                    .indices()
                    .iter()
                    .copied()
            })
            .collect();
        (Word::new(x), c)
    });
    NCPolynomial::from_terms(bij.g(), terms)
}
