use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cpd::{relative_residual, symmetric_cpd, RestartTrace, RANK_THRESHOLD};
use super::rank::binomial;
use super::takagi::takagi;
use super::tensor_from_cpoly;
use crate::analysis::{check_compatibility_tol, collapse, phi_inverse, phi_reduce};
use crate::analysis::{CompatibilityReport, IndexBijection};
use crate::error::{Error, Result};
use crate::ncpoly::NCPolynomial;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecompositionConfig {
    /// Largest number of terms to try. Always capped by the dimension of
    /// the space of degree-`d` forms.
    pub max_rank: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub conv_tol: f64,
    pub success_tol: f64,
    pub seed: u64,
    pub mode: Mode,
    /// Absolute tolerance for the compatibility check. `None` is exact.
    pub compat_tol: Option<f64>,
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        DecompositionConfig {
            max_rank: None,
            restarts: 20,
            max_iters: 500,
            conv_tol: 1e-12,
            success_tol: 1e-8,
            seed: 0,
            mode: Mode::Complex,
            compat_tol: None,
        }
    }
}

impl DecompositionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Invalid("restarts must be at least 1".into()));
        }
        if self.max_rank == Some(0) {
            return Err(Error::Invalid("max_rank must be at least 1".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.conv_tol) || !positive(self.success_tol) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        if self
            .compat_tol
            .is_some_and(|t| !(t.is_finite() && t >= 0.0))
        {
            return Err(Error::Invalid("compat_tol must be non-negative".into()));
        }
        Ok(())
    }
}

/// `p = sum_s H_s^d`, where `H_s = sum_k terms[s][k] * x^(block k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaringDecomposition {
    delta: usize,
    d: usize,
    bijection: IndexBijection,
    terms: Vec<Vec<Complex64>>,
}

impl WaringDecomposition {
    pub fn new(d: usize, bijection: IndexBijection, terms: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = bijection.len();
        if let Some(v) = terms.iter().find(|v| v.len() != n) {
            return Err(Error::Shape(format!(
                "term vector has length {}, expected {n}",
                v.len()
            )));
        }
        Ok(WaringDecomposition {
            delta: bijection.delta(),
            d,
            bijection,
            terms,
        })
    }

    /// Linear forms (`delta = 1`) in `g` variables.
    pub fn linear(g: usize, d: usize, terms: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(d, IndexBijection::new(g, 1)?, terms)
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn g(&self) -> usize {
        self.bijection.g()
    }

    /// Number of terms.
    pub fn t(&self) -> usize {
        self.terms.len()
    }

    pub fn bijection(&self) -> &IndexBijection {
        &self.bijection
    }

    pub fn terms(&self) -> &[Vec<Complex64>] {
        &self.terms
    }

    /// The degree-`delta` form `H_s` in the original variables.
    pub fn form(&self, s: usize) -> NCPolynomial {
        let z = NCPolynomial::linear(&self.terms[s]);
        phi_inverse(&z, &self.bijection).expect("arity matches bijection")
    }

    /// Symbolic expansion `sum_s H_s^d`.
    pub fn expand(&self) -> NCPolynomial {
        let mut acc = NCPolynomial::zero(self.g());
        for s in 0..self.t() {
            acc = acc.add(&self.form(s).nc_pow(self.d)).expect("same arity");
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    delta: usize,
    d: usize,
    bijection: IndexBijection,
    terms: Vec<Vec<[f64; 2]>>,
}

impl Serialize for WaringDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            delta: self.delta,
            d: self.d,
            bijection: self.bijection.clone(),
            terms: self
                .terms
                .iter()
                .map(|v| v.iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WaringDecomposition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DecompositionJson::deserialize(d)?;
        if raw.bijection.delta() != raw.delta {
            return Err(D::Error::custom(
                "bijection block length differs from delta",
            ));
        }
        let terms = raw
            .terms
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        WaringDecomposition::new(raw.d, raw.bijection, terms).map_err(D::Error::custom)
    }
}

/// Exact order-2 evidence that no decomposition with at most `max_rank`
/// terms exists: the coefficient matrix has larger rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: String,
    pub matrix_rank: usize,
    pub max_rank: usize,
    pub singular_values: Vec<f64>,
    /// Relative threshold: singular values above `threshold * max` count.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Success {
        decomposition: WaringDecomposition,
        t: usize,
        residual: f64,
    },
    HeuristicFailure {
        best_residual: f64,
        ranks_tried: Vec<usize>,
    },
    CertifiedNonexistence {
        certificate: Certificate,
    },
    Incompatible {
        report: CompatibilityReport,
    },
}

pub type LogEntry = RestartTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionLog {
    pub config: DecompositionConfig,
    pub entries: Vec<LogEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    #[serde(flatten)]
    pub status: Status,
    pub log: DecompositionLog,
}

impl DecompositionResult {
    pub fn decomposition(&self) -> Option<&WaringDecomposition> {
        match &self.status {
            Status::Success { decomposition, .. } => Some(decomposition),
            _ => None,
        }
    }
}

/// Searches for `p = sum_{s<=t} H_s^d` with `deg H_s = delta`, for
/// `t = 1, 2, ...` up to the configured cap.
pub fn waring_decompose(
    p: &NCPolynomial,
    delta: usize,
    cfg: &DecompositionConfig,
) -> Result<DecompositionResult> {
    cfg.validate()?;
    if delta == 0 {
        return Err(Error::Invalid("delta must be at least 1".into()));
    }
    let mut log = DecompositionLog {
        config: cfg.clone(),
        entries: Vec::new(),
    };
    if cfg.mode == Mode::Real && !p.is_real() {
        return Err(Error::ComplexInRealMode(
            "polynomial has complex coefficients".into(),
        ));
    }
    let Some(degree) = p.homogeneous_degree()? else {
        let decomposition =
            WaringDecomposition::new(0, IndexBijection::new(p.g(), delta)?, vec![])?;
        return Ok(DecompositionResult {
            status: Status::Success {
                decomposition,
                t: 0,
                residual: 0.0,
            },
            log,
        });
    };
    if degree == 0 || degree % delta != 0 {
        return Err(Error::DeltaDoesNotDivide { degree, delta });
    }
    let d = degree / delta;

    let report = check_compatibility_tol(p, delta, cfg.compat_tol)?;
    if !report.compatible {
        return Ok(DecompositionResult {
            status: Status::Incompatible { report },
            log,
        });
    }

    let (q, bij) = phi_reduce(p, delta)?;
    let n = bij.len();
    let tensor = tensor_from_cpoly(&collapse(&q), d)?;
    let dim = binomial(n + d - 1, d);
    let cap = cfg
        .max_rank
        .map_or(dim, |r| (r as u64).min(dim))
        .min(usize::MAX as u64) as usize;

    if d == 2 {
        let tk = takagi(n, &tensor.dense());
        let r = tk.rank(RANK_THRESHOLD);
        if cap < r {
            return Ok(DecompositionResult {
                status: Status::CertifiedNonexistence {
                    certificate: Certificate {
                        method: "matrix-rank".into(),
                        matrix_rank: r,
                        max_rank: cap,
                        singular_values: tk.singular_values.clone(),
                        threshold: RANK_THRESHOLD,
                    },
                },
                log,
            });
        }
    }

    let mut best = f64::INFINITY;
    let mut tried = Vec::new();
    for t in 1..=cap {
        let out = symmetric_cpd(&tensor, t, cfg);
        log.entries.extend(out.traces.iter().cloned());
        tried.push(t);
        best = best.min(out.residual);
        if let Some(vectors) = out.vectors {
            let vectors = normalize(vectors, d, cfg.mode);
            let residual = relative_residual(&tensor, &vectors, tensor.frobenius_norm());
            let decomposition = WaringDecomposition::new(d, bij, vectors)?;
            return Ok(DecompositionResult {
                status: Status::Success {
                    decomposition,
                    t,
                    residual,
                },
                log,
            });
        }
    }
    Ok(DecompositionResult {
        status: Status::HeuristicFailure {
            best_residual: best,
            ranks_tried: tried,
        },
        log,
    })
}

/// Rewrites each `v` as `lambda^(1/d) u`, with `u` of unit norm and its
/// largest entry real positive, and `lambda^(1/d)` the principal root (the
/// real root in real mode). Terms are then sorted by decreasing norm.
fn normalize(vectors: Vec<Vec<Complex64>>, d: usize, mode: Mode) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = vectors
        .into_iter()
        .map(|v| {
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return v;
            }
            let lead =
                v.iter().copied().fold(
                    Complex64::zero(),
                    |m, x| if x.norm() > m.norm() { x } else { m },
                );
            let phase = lead / lead.norm();
            let u: Vec<Complex64> = v.iter().map(|x| x / (phase * norm)).collect();
            let lambda = (phase * norm).powu(d as u32);
            let root = match mode {
                Mode::Real => {
                    let l = lambda.re;
                    Complex64::new(l.signum() * l.abs().powf(1.0 / d as f64), 0.0)
                }
                Mode::Complex => lambda.powf(1.0 / d as f64),
            };
            let mut w: Vec<Complex64> = u.iter().map(|x| x * root).collect();
            if mode == Mode::Real {
                w.iter_mut().for_each(|x| x.im = 0.0);
            }
            w
        })
        .collect();
    let norm = |v: &Vec<Complex64>| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    out.sort_by(|a, b| norm(b).total_cmp(&norm(a)));
    out
}

/// Expands `w` symbolically and compares with `p`. Returns whether the
/// largest coefficient difference is within `tol`, and that difference.
pub fn verify_decomposition(
    p: &NCPolynomial,
    w: &WaringDecomposition,
    tol: f64,
) -> Result<(bool, f64)> {
    if w.g() != p.g() {
        return Err(Error::ArityMismatch {
            expected: p.g(),
            found: w.g(),
        });
    }
    if let Some(deg) = p.homogeneous_degree()? {
        if w.t() > 0 && deg != w.delta() * w.d() {
            return Err(Error::Shape(format!(
                "polynomial has degree {deg}, decomposition has degree {}",
                w.delta() * w.d()
            )));
        }
    }
    let diff = p.sub(&w.expand())?;
    let err = diff.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    Ok((err <= tol, err))
}
