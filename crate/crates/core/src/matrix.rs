//! Tuples of square complex matrices, the evaluation points.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// `g` square matrices of a common size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    n: usize,
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(n: usize, mats: Vec<CMatrix>) -> Result<Self> {
        for m in &mats {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        Ok(MatrixTuple { n, mats })
    }

    /// Entries i.i.d. complex Gaussian with variance `1/n`, so products of
    /// moderate length stay well scaled.
    pub fn random<R: Rng + ?Sized>(g: usize, n: usize, rng: &mut R) -> Self {
        let s = (0.5 / n.max(1) as f64).sqrt();
        let mats = (0..g)
            .map(|_| {
                CMatrix::from_fn(n, n, |_, _| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re * s, im * s)
                })
            })
            .collect();
        MatrixTuple { n, mats }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.mats.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    /// The matrix substituted for `x_i` (1-based).
    pub fn get(&self, i: u32) -> &CMatrix {
        &self.mats[i as usize - 1]
    }
}

#[derive(Serialize, Deserialize)]
struct TupleJson {
    n: usize,
    g: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

pub(crate) fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub(crate) fn matrix_from_rows(n: usize, rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: rows.len(),
            cols,
        });
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

impl Serialize for MatrixTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleJson {
            n: self.n,
            g: self.g(),
            matrices: self.mats.iter().map(matrix_rows).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TupleJson::deserialize(d)?;
        if raw.matrices.len() != raw.g {
            return Err(D::Error::custom(format!(
                "expected {} matrices, found {}",
                raw.g,
                raw.matrices.len()
            )));
        }
        let mats = raw
            .matrices
            .iter()
            .map(|rows| matrix_from_rows(raw.n, rows))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        MatrixTuple::new(raw.n, mats).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = MatrixTuple::random(2, 3, &mut rng);
        let s = serde_json::to_string(&x).unwrap();
        let back: MatrixTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["g"], 2);
        assert_eq!(v["matrices"][0][2][1].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rejects_ragged() {
        let bad = r#"{"n": 2, "g": 1, "matrices": [[[[1,0],[0,0]],[[0,0]]]]}"#;
        assert!(serde_json::from_str::<MatrixTuple>(bad).is_err());
        let miscount = r#"{"n": 1, "g": 2, "matrices": [[[[1,0]]]]}"#;
        assert!(serde_json::from_str::<MatrixTuple>(miscount).is_err());
    }
}
