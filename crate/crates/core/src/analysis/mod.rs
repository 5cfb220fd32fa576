//! Compatibility conditions, commutative collapse, and the block reductions
//! that turn a `(delta, d)` problem into a linear one.

mod collapse;
mod compat;
mod phi;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::Word;

pub use collapse::{collapse, lift};
pub use compat::{check_compatibility, check_compatibility_tol, CompatibilityReport, Witness};
pub use phi::{phi_inverse, phi_reduce, IndexBijection};

/// A length-`delta * d` word viewed as `d` consecutive blocks of length `delta`.
#[derive(Debug, Clone)]
pub struct BlockView<'a> {
    word: &'a Word,
    delta: usize,
}

impl<'a> BlockView<'a> {
    pub fn new(word: &'a Word, delta: usize) -> Result<Self> {
        if delta == 0 || !word.len().is_multiple_of(delta) {
            return Err(Error::DeltaDoesNotDivide {
                degree: word.len(),
                delta,
            });
        }
        Ok(BlockView { word, delta })
    }

    pub fn word(&self) -> &Word {
        self.word
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn blocks(&self) -> impl Iterator<Item = &'a [u32]> + '_ {
        self.word.indices().chunks(self.delta)
    }

    pub fn num_blocks(&self) -> usize {
        self.word.len() / self.delta
    }

    /// Number of blocks equal to `beta`.
    pub fn block_count(&self, beta: &[u32]) -> usize {
        self.blocks().filter(|b| *b == beta).count()
    }

    /// Total occurrences of letter `i` across all blocks.
    pub fn letter_count(&self, i: u32) -> usize {
        self.word.indices().iter().filter(|&&j| j == i).count()
    }

    /// The blocks sorted lexicographically and concatenated. Two words are
    /// delta-equivalent exactly when their keys agree.
    pub fn class_key(&self) -> Word {
        let mut blocks: Vec<&[u32]> = self.blocks().collect();
        blocks.sort_unstable();
        Word::new(blocks.concat())
    }
}

/// Multinomial coefficient `(sum k)! / prod k!`.
pub(crate) fn multinomial(counts: impl IntoIterator<Item = usize>) -> BigUint {
    let mut num = BigUint::one();
    let mut total = 0usize;
    for k in counts {
        // multiply incrementally: C(total + k, k) stays integral at each step
        for j in 1..=k {
            total += 1;
            num *= total;
            num /= j;
        }
    }
    num
}

pub(crate) fn multinomial_f64(counts: impl IntoIterator<Item = usize>) -> f64 {
    multinomial(counts).to_f64().unwrap_or(f64::INFINITY)
}

/// Number of words commutative-equivalent to `w`, i.e. `d! / prod_j (count of j)!`.
pub fn eta(w: &Word) -> Result<u64> {
    eta_big(w)
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("eta of a length-{} word exceeds u64", w.len())))
}

/// Exact [`eta`] without the `u64` range limit.
pub fn eta_big(w: &Word) -> BigUint {
    let mut idx = w.indices().to_vec();
    idx.sort_unstable();
    multinomial(run_lengths(&idx))
}

fn run_lengths<T: PartialEq>(sorted: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

/// Number of distinct block arrangements in the delta-class of `w`.
pub(crate) fn class_size(key: &Word, delta: usize) -> BigUint {
    let blocks: Vec<&[u32]> = key.indices().chunks(delta).collect();
    multinomial(run_lengths(&blocks))
}

/// `a ~_delta b`: the two words consist of the same multiset of
/// length-`delta` blocks.
pub fn delta_equivalent(a: &Word, b: &Word, delta: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let va = BlockView::new(a, delta)?;
    let vb = BlockView::new(b, delta)?;
    Ok(va.class_key() == vb.class_key())
}

/// A permutation of word positions, stored 0-based: applying it to `w`
/// yields `(w[pi[0]], w[pi[1]], ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(d: usize) -> Self {
        Permutation((0..d).collect())
    }

    /// Swaps positions `i` and `i + 1`.
    pub fn adjacent(d: usize, i: usize) -> Result<Self> {
        if i + 1 >= d {
            return Err(Error::InvalidPermutation(format!(
                "adjacent swap at {i} in length {d}"
            )));
        }
        let mut v: Vec<usize> = (0..d).collect();
        v.swap(i, i + 1);
        Ok(Permutation(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::new(self.0.iter().map(|&i| w.indices()[i]).collect())
    }
}

/// Acts on positions of every word of a homogeneous degree-`d` polynomial.
pub fn permute(p: &NCPolynomial, pi: &Permutation) -> Result<NCPolynomial> {
    if let Some(d) = p.homogeneous_degree()? {
        if d != pi.len() {
            return Err(Error::InvalidPermutation(format!(
                "length {} does not match degree {d}",
                pi.len()
            )));
        }
    }
    NCPolynomial::from_terms(p.g(), p.terms().map(|(w, &c)| (pi.apply(w), c)))
}
