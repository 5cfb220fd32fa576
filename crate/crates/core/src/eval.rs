//! Evaluating polynomials on matrix tuples, with operation counts.

use std::ops::{Add, AddAssign};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, MatrixTuple};
use crate::ncpoly::NCPolynomial;
use crate::tensor::{binomial, WaringDecomposition};

/// Matrix operations performed by an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCount {
    /// Matrix-matrix products.
    pub mults: u64,
    /// Matrix additions.
    pub adds: u64,
    /// Scalar-times-matrix products.
    pub scalar_mults: u64,
    /// Matrix powers taken as single operations. Their products are also
    /// included in `mults`.
    pub powers: u64,
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(self, o: OpCount) -> OpCount {
        OpCount {
            mults: self.mults + o.mults,
            adds: self.adds + o.adds,
            scalar_mults: self.scalar_mults + o.scalar_mults,
            powers: self.powers + o.powers,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, o: OpCount) {
        *self = *self + o;
    }
}

/// Products used by [`matrix_power`] for exponent `d`.
pub fn power_mults(d: usize) -> u64 {
    if d == 0 {
        return 0;
    }
    let bits = usize::BITS - d.leading_zeros();
    (bits - 1 + d.count_ones() - 1) as u64
}

/// `M^d` by left-to-right binary powering: square for every bit after the
/// leading one, then multiply by `M` when that bit is set.
pub fn matrix_power(m: &CMatrix, d: usize) -> Result<(CMatrix, OpCount)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut ops = OpCount {
        powers: 1,
        ..OpCount::default()
    };
    if d == 0 {
        return Ok((CMatrix::identity(m.nrows(), m.ncols()), ops));
    }
    let mut acc = m.clone();
    let bits = usize::BITS - d.leading_zeros();
    for b in (0..bits - 1).rev() {
        acc = &acc * &acc;
        ops.mults += 1;
        if d >> b & 1 == 1 {
            acc = &acc * m;
            ops.mults += 1;
        }
    }
    Ok((acc, ops))
}

fn check_tuple(g: usize, x: &MatrixTuple) -> Result<()> {
    if x.g() != g {
        return Err(Error::ArityMismatch {
            expected: g,
            found: x.g(),
        });
    }
    Ok(())
}

/// Product `X_{w_1} ... X_{w_k}` left to right; `k - 1` products.
fn monomial(word: &[u32], x: &MatrixTuple, ops: &mut OpCount) -> CMatrix {
    let Some((&first, rest)) = word.split_first() else {
        return CMatrix::identity(x.n(), x.n());
    };
    let mut acc = x.get(first).clone();
    for &i in rest {
        acc = &acc * x.get(i);
        ops.mults += 1;
    }
    acc
}

/// Sum of `P_a X^a` with every monomial computed independently.
pub fn evaluate_naive(p: &NCPolynomial, x: &MatrixTuple) -> Result<(CMatrix, OpCount)> {
    check_tuple(p.g(), x)?;
    let mut ops = OpCount::default();
    let mut acc: Option<CMatrix> = None;
    for (w, &c) in p.terms() {
        let term = monomial(w.indices(), x, &mut ops) * c;
        ops.scalar_mults += 1;
        acc = Some(match acc {
            None => term,
            Some(a) => {
                ops.adds += 1;
                a + term
            }
        });
    }
    Ok((acc.unwrap_or_else(|| CMatrix::zeros(x.n(), x.n())), ops))
}

/// `sum_s (sum_k A^s_k X^(block k))^d`. Each block monomial is computed
/// once and shared by all terms.
pub fn evaluate_waring(w: &WaringDecomposition, x: &MatrixTuple) -> Result<(CMatrix, OpCount)> {
    check_tuple(w.g(), x)?;
    let mut ops = OpCount::default();
    let basis: Vec<CMatrix> = if w.delta() == 1 {
        x.matrices().to_vec()
    } else {
        w.bijection()
            .blocks()
            .iter()
            .map(|b| monomial(b.indices(), x, &mut ops))
            .collect()
    };
    let mut acc: Option<CMatrix> = None;
    for v in w.terms() {
        let mut form: Option<CMatrix> = None;
        for (m, &a) in basis.iter().zip(v) {
            let term = m * a;
            ops.scalar_mults += 1;
            form = Some(match form {
                None => term,
                Some(f) => {
                    ops.adds += 1;
                    f + term
                }
            });
        }
        let form = form.unwrap_or_else(|| CMatrix::zeros(x.n(), x.n()));
        let (power, pops) = matrix_power(&form, w.d())?;
        ops += pops;
        acc = Some(match acc {
            None => power,
            Some(a) => {
                ops.adds += 1;
                a + power
            }
        });
    }
    Ok((acc.unwrap_or_else(|| CMatrix::zeros(x.n(), x.n())), ops))
}

/// Relative Frobenius distance `||a - b|| / ||a||` (absolute when `a = 0`).
pub fn relative_error(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = (a - b).norm();
    let base = a.norm();
    if base == 0.0 {
        diff
    } else {
        diff / base
    }
}

/// Closed-form operation counts for a dense degree-`d` form in `g`
/// variables versus a `t`-term Waring decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub g: usize,
    pub d: usize,
    pub t: usize,
    pub naive_mults: u64,
    pub waring_powers: u64,
    pub waring_adds: u64,
    pub waring_mults: u64,
    /// `ceil(C(g+d-1, d) / g) / g^d`.
    pub exact_ratio: f64,
    /// `(1/g) (e (g+d) / (g d))^d`.
    pub stirling_bound: f64,
}

pub fn cost_compare(g: usize, d: usize, t: usize) -> CostReport {
    let gd = (g as u64).saturating_pow(d as u32);
    let forms = binomial(g + d - 1, d);
    let needed = forms.div_ceil(g as u64);
    let (gf, df) = (g as f64, d as f64);
    CostReport {
        g,
        d,
        t,
        naive_mults: gd.saturating_mul(d.saturating_sub(1) as u64),
        waring_powers: t as u64,
        waring_adds: (t * g) as u64 - 1,
        waring_mults: t as u64 * power_mults(d),
        exact_ratio: needed as f64 / gd as f64,
        stirling_bound: (std::f64::consts::E * (gf + df) / (gf * df)).powf(df) / gf,
    }
}

/// One timed evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub trial: usize,
    pub method: String,
    pub wall_ns: u64,
    pub mults: u64,
    pub adds: u64,
    /// Relative Frobenius distance between the two evaluators on this tuple.
    pub max_rel_err: f64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "n,trial,method,wall_ns,mults,adds,max_rel_err";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:e}",
            self.n, self.trial, self.method, self.wall_ns, self.mults, self.adds, self.max_rel_err
        )
    }
}

/// Times naive and Waring evaluation on `trials` seeded random tuples for
/// each size. Tuple `(n, trial)` is drawn from its own stream, so rows do
/// not depend on which sizes are requested together.
pub fn bench(
    p: &NCPolynomial,
    w: &WaringDecomposition,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if p.g() != w.g() {
        return Err(Error::ArityMismatch {
            expected: p.g(),
            found: w.g(),
        });
    }
    let mut rows = Vec::with_capacity(sizes.len() * trials * 2);
    for &n in sizes {
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((n as u64) << 32) | trial as u64);
            let x = MatrixTuple::random(p.g(), n, &mut rng);
            let start = Instant::now();
            let (a, na) = evaluate_naive(p, &x)?;
            let t_naive = start.elapsed().as_nanos() as u64;
            let start = Instant::now();
            let (b, wa) = evaluate_waring(w, &x)?;
            let t_waring = start.elapsed().as_nanos() as u64;
            let err = relative_error(&a, &b);
            for (method, ns, ops) in [("naive", t_naive, na), ("waring", t_waring, wa)] {
                rows.push(BenchRow {
                    n,
                    trial,
                    method: method.into(),
                    wall_ns: ns,
                    mults: ops.mults,
                    adds: ops.adds,
                    max_rel_err: err,
                });
            }
        }
    }
    Ok(rows)
}
