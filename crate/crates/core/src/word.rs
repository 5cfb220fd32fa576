//! Index words and multidegrees.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered index tuple encoding the noncommutative monomial
/// `x_{i_1} x_{i_2} ... x_{i_d}`. Indices are 1-based.
///
/// Words order first by length and then lexicographically, which is the
/// canonical term order used for printing and serialization.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(indices: Vec<u32>) -> Self {
        Word(indices)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word and checks every index lies in `1..=g`.
    pub fn checked(indices: Vec<u32>, g: usize) -> Result<Self> {
        let w = Word(indices);
        w.validate(g)?;
        Ok(w)
    }

    pub fn validate(&self, g: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i as usize > g) {
            Some(&i) => Err(Error::IndexOutOfRange {
                var: format!("x{i}"),
                g,
            }),
            None => Ok(()),
        }
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn into_indices(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Counts occurrences of each letter: `exponents[j-1]` is the number of
    /// times `j` appears.
    pub fn multidegree(&self, g: usize) -> Multidegree {
        let mut exps = vec![0u32; g];
        for &i in &self.0 {
            exps[i as usize - 1] += 1;
        }
        Multidegree::new(exps)
    }

    /// Splits the word into consecutive length-`delta` blocks.
    pub fn blocks(&self, delta: usize) -> Result<Vec<&[u32]>> {
        if delta == 0 || !self.len().is_multiple_of(delta) {
            return Err(Error::DeltaDoesNotDivide {
                degree: self.len(),
                delta,
            });
        }
        Ok(self.0.chunks(delta).collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl From<&[u32]> for Word {
    fn from(v: &[u32]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Word {
    /// Prints `x1*x2^2*x1`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == v {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Exponent vector of a commutative monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multidegree(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn g(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// The sorted (nondecreasing) word with this multidegree.
    pub fn representative(&self) -> Word {
        let mut v = Vec::with_capacity(self.total());
        for (j, &e) in self.0.iter().enumerate() {
            v.extend(std::iter::repeat_n(j as u32 + 1, e as usize));
        }
        Word(v)
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All exponent vectors of length `g` summing to `d`, in lexicographic
    /// order of their representative words.
    pub fn all(g: usize, d: usize) -> Vec<Multidegree> {
        let mut out = Vec::new();
        for_each_sorted_word(g, d, &mut |w| out.push(Word::from(w).multidegree(g)));
        out
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Calls `f` on every nondecreasing word of length `d` over `1..=g`, in
/// lexicographic order.
pub(crate) fn for_each_sorted_word(g: usize, d: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(g: u32, d: usize, start: u32, buf: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if buf.len() == d {
            f(buf);
            return;
        }
        for i in start..=g {
            buf.push(i);
            rec(g, d, i, buf, f);
            buf.pop();
        }
    }
    if g == 0 && d > 0 {
        return;
    }
    let mut buf = Vec::with_capacity(d);
    rec(g as u32, d, 1, &mut buf, f);
}

/// Calls `f` on every word of length `d` over `1..=g`, in lexicographic order.
pub fn for_each_word(g: usize, d: usize, mut f: impl FnMut(&[u32])) {
    if g == 0 && d > 0 {
        return;
    }
    let mut buf = vec![1u32; d];
    loop {
        f(&buf);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if (buf[k] as usize) < g {
                buf[k] += 1;
                for b in &mut buf[k + 1..] {
                    *b = 1;
                }
                break;
            }
        }
    }
}

/// Rearranges `items` into the next lexicographically greater permutation.
/// Returns false (leaving `items` sorted ascending) when already at the last one.
/// Duplicates are handled, so iterating from sorted order visits each distinct
/// arrangement of a multiset exactly once.
pub(crate) fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}
