//! Waring decompositions of homogeneous noncommutative polynomials.
//!
//! A homogeneous polynomial `p` of degree `delta * d` in the free algebra
//! has a `(delta, d)` Waring decomposition when it can be written as
//! `p = H_1^d + ... + H_t^d` with every `H_s` homogeneous of degree `delta`.
//! The pipeline in [`tensor::waring_decompose`] checks the necessary
//! delta-compatibility condition, regroups blocks of `delta` letters into new
//! variables, collapses to a commutative form, and decomposes the associated
//! symmetric tensor. [`eval`] uses a decomposition to evaluate `p` on tuples
//! of matrices with far fewer matrix products than the monomial expansion.

pub mod analysis;
pub mod cpoly;
pub mod error;
pub mod eval;
pub mod matrix;
pub mod ncpoly;
mod parse;
pub mod tensor;
pub mod word;

use serde::{Deserialize, Serialize};

pub use analysis::{
    check_compatibility, check_compatibility_tol, collapse, delta_equivalent, eta, lift, permute,
    phi_inverse, phi_reduce, BlockView, CompatibilityReport, IndexBijection, Permutation, Witness,
};
pub use cpoly::CPolynomial;
pub use error::{Error, Result};
pub use eval::{
    bench, cost_compare, evaluate_naive, evaluate_waring, matrix_power, BenchRow, CostReport,
    OpCount,
};
pub use matrix::{CMatrix, MatrixTuple};
pub use ncpoly::NCPolynomial;
pub use parse::{parse_ncpoly, parse_ncpoly_with};
pub use tensor::{
    cpoly_from_tensor, generic_rank, symmetric_cpd, tensor_from_cpoly, tensor_from_ncpoly,
    verify_decomposition, waring_decompose, DecompositionConfig, DecompositionResult,
    SymmetricTensor, WaringDecomposition,
};
pub use word::{Multidegree, Word};

pub use num_complex::Complex64;

/// Coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Complex,
    Real,
}

/// Serializes a complex number as `[re, im]`.
pub(crate) mod serde_c64 {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([c.re, c.im])
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
