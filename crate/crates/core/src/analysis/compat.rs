use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{class_size, BlockView};
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::word::{next_permutation, Word};

/// Outcome of a delta-compatibility check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub compatible: bool,
    pub delta: usize,
    pub witness: Option<Witness>,
}

/// Two delta-equivalent words whose coefficients differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub a: Word,
    pub b: Word,
    #[serde(with = "crate::serde_c64")]
    pub coeff_a: Complex64,
    #[serde(with = "crate::serde_c64")]
    pub coeff_b: Complex64,
}

/// Exact check: every delta-class carries a single coefficient, counting
/// absent words as zero.
pub fn check_compatibility(p: &NCPolynomial, delta: usize) -> Result<CompatibilityReport> {
    check_compatibility_tol(p, delta, None)
}

/// As [`check_compatibility`], but coefficients within `tol` (absolute) of
/// each other count as equal. Intended for numerically produced inputs.
pub fn check_compatibility_tol(
    p: &NCPolynomial,
    delta: usize,
    tol: Option<f64>,
) -> Result<CompatibilityReport> {
    if delta == 0 {
        return Err(Error::Invalid("delta must be at least 1".into()));
    }
    let ok = CompatibilityReport {
        compatible: true,
        delta,
        witness: None,
    };
    let Some(degree) = p.homogeneous_degree()? else {
        return Ok(ok);
    };
    if degree == 0 || degree % delta != 0 {
        return Err(Error::DeltaDoesNotDivide { degree, delta });
    }

    let same = |x: Complex64, y: Complex64| match tol {
        None => x == y,
        Some(t) => (x - y).norm() <= t,
    };

    // class key -> present members in lexicographic order
    let mut classes: BTreeMap<Word, Vec<(&Word, Complex64)>> = BTreeMap::new();
    for (w, &c) in p.terms() {
        let key = BlockView::new(w, delta)?.class_key();
        classes.entry(key).or_default().push((w, c));
    }

    for (key, members) in &classes {
        let (first, c0) = members[0];
        let full = class_size(key, delta) == BigUint::from(members.len());
        if !full && !same(c0, Complex64::zero()) {
            let missing = first_missing(p, key, delta);
            return Ok(violation(
                delta,
                missing,
                Complex64::zero(),
                first.clone(),
                c0,
            ));
        }
        if let Some(&(w, c)) = members.iter().find(|(_, c)| !same(c0, *c)) {
            return Ok(violation(delta, first.clone(), c0, w.clone(), c));
        }
        // members equal but some absent; under tolerance they may all be ~0
        if !full {
            if let Some(&(w, c)) = members.iter().find(|(_, c)| !same(*c, Complex64::zero())) {
                let missing = first_missing(p, key, delta);
                return Ok(violation(delta, missing, Complex64::zero(), w.clone(), c));
            }
        }
    }
    Ok(ok)
}

fn violation(delta: usize, a: Word, ca: Complex64, b: Word, cb: Complex64) -> CompatibilityReport {
    CompatibilityReport {
        compatible: false,
        delta,
        witness: Some(Witness {
            a,
            b,
            coeff_a: ca,
            coeff_b: cb,
        }),
    }
}

/// Lexicographically first arrangement of the key's blocks absent from `p`.
fn first_missing(p: &NCPolynomial, key: &Word, delta: usize) -> Word {
    let mut blocks: Vec<&[u32]> = key.indices().chunks(delta).collect();
    loop {
        let w = Word::new(blocks.concat());
        if p.coeff(&w).is_zero() {
            return w;
        }
        if !next_permutation(&mut blocks) {
            unreachable!("class has an absent member");
        }
    }
}
