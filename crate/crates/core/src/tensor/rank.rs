use num_traits::ToPrimitive;

use crate::analysis::multinomial;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    multinomial([k, n - k]).to_u64().unwrap_or(u64::MAX)
}

/// Number of d-th powers of linear forms that suffice for a general
/// homogeneous degree-`d` form in `g` variables over C.
///
/// This is a property of generic forms; a particular polynomial may need
/// fewer or more terms. The decomposition pipeline only uses it as a hint.
pub fn generic_rank(g: usize, d: usize) -> u64 {
    if d <= 1 || g <= 1 {
        return 1;
    }
    if d == 2 {
        return g as u64;
    }
    let dim = binomial(g + d - 1, d);
    let base = dim.div_ceil(g as u64);
    match (d, g) {
        (3, 5) | (4, 3) | (4, 4) | (4, 5) => base + 1,
        _ => base,
    }
}
