//! Shared inputs for the criterion benchmarks.

use ncwaring_core::{parse_ncpoly, MatrixTuple, NCPolynomial};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The cubic in three variables whose tensor has rank 4.
pub const CUBIC: &str = "x1^3 - 4*x2^3 - 4*x3^3 + 5*x1*x1*x2 + 5*x1*x2*x1 + 5*x2*x1*x1 \
    - 3*x1*x1*x3 - 3*x1*x3*x1 - 3*x3*x1*x1 + 7*x2*x2*x1 + 7*x2*x1*x2 + 7*x1*x2*x2 \
    - 11*x2*x2*x3 - 11*x2*x3*x2 - 11*x3*x2*x2 + 6*x3*x3*x1 + 6*x3*x1*x3 + 6*x1*x3*x3 \
    - 6*x3*x3*x2 - 6*x3*x2*x3 - 6*x2*x3*x3 + x1*x2*x3 + x1*x3*x2 + x2*x1*x3 \
    + x2*x3*x1 + x3*x1*x2 + x3*x2*x1";

/// Quartic with a 2-block structure and exactly three square terms.
pub const BLOCK_QUARTIC: &str = "x1^4 + x1*x2*x2*x1 + x2*x1*x1*x2 + x2^4";

pub fn cubic() -> NCPolynomial {
    parse_ncpoly(CUBIC, 3).expect("fixture parses")
}

pub fn block_quartic() -> NCPolynomial {
    parse_ncpoly(BLOCK_QUARTIC, 2).expect("fixture parses")
}

/// Seeded random tuple of `g` complex `n x n` matrices.
pub fn tuple(g: usize, n: usize, seed: u64) -> MatrixTuple {
    MatrixTuple::random(g, n, &mut ChaCha8Rng::seed_from_u64(seed))
}
