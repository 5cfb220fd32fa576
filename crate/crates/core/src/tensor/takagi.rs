//! Symmetric factorization of complex symmetric matrices.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// `S = sum_i sigma_i u_i u_i^T` with orthonormal `u_i` (no conjugation).
#[derive(Debug, Clone)]
pub struct Takagi {
    /// Nonnegative, in descending order; one per row of `S`.
    pub singular_values: Vec<f64>,
    /// `u_i`, matching `singular_values`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl Takagi {
    /// Number of singular values above `rel_threshold * sigma_max`.
    pub fn rank(&self, rel_threshold: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        if top == 0.0 {
            return 0;
        }
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_threshold * top)
            .count()
    }

    /// The `k` leading terms as vectors `v_i = sqrt(sigma_i) u_i`, so that
    /// `sum v_i v_i^T` is the best rank-`k` symmetric approximation.
    pub fn factors(&self, k: usize) -> Vec<Vec<Complex64>> {
        self.singular_values
            .iter()
            .zip(&self.vectors)
            .take(k)
            .map(|(&s, u)| u.iter().map(|&x| x * s.sqrt()).collect())
            .collect()
    }
}

/// Takagi factorization of a complex symmetric `n x n` matrix given row-major.
///
/// Writing `S = A + iB` and `u = x + iy`, the relation `S conj(u) = sigma u`
/// is the real symmetric eigenproblem `[[A, B], [B, -A]] [x; y] = sigma [x; y]`.
/// Its spectrum is `{+-sigma_i}`; eigenvectors of the positive half give the
/// Takagi vectors.
pub fn takagi(n: usize, s: &[Complex64]) -> Takagi {
    assert_eq!(s.len(), n * n);
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // symmetrize so rounding in the input cannot break the eigensolver
            let c = (s[i * n + j] + s[j * n + i]) * 0.5;
            m[(i, j)] = c.re;
            m[(i, n + j)] = c.im;
            m[(n + i, j)] = c.im;
            m[(n + i, n + j)] = -c.re;
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut singular_values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        singular_values.push(eig.eigenvalues[k].max(0.0));
        let col = eig.eigenvectors.column(k);
        vectors.push((0..n).map(|i| Complex64::new(col[i], col[n + i])).collect());
    }
    Takagi {
        singular_values,
        vectors,
    }
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues descending.
pub(crate) fn real_symmetric_eigen(n: usize, s: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (s[i * n + j] + s[j * n + i]));
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    (values, vectors)
}
