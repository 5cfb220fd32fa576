//! Seeded, restartable symmetric CP decomposition.
//!
//! For order `d >= 3` each restart runs Levenberg-Marquardt on the single
//! shared factor `A = [a_1 .. a_t]`, minimizing `||T - sum_s a_s^(x)d||_F`.
//! The model is holomorphic in `A`, so the Gauss-Newton normal matrix has a
//! closed form in terms of the Gram products `a_s^H a_s'` and never needs
//! the full Jacobian. Residuals and gradients are accumulated over
//! multidegrees weighted by class size, which reproduces the dense
//! Frobenius geometry exactly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::takagi::{real_symmetric_eigen, takagi};
use super::{eta_of, DecompositionConfig, SymmetricTensor};
use crate::word::Multidegree;
use crate::Mode;

/// Relative singular-value threshold for the exact order-2 path.
pub(crate) const RANK_THRESHOLD: f64 = 1e-10;

/// One restart of one rank attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub rank: usize,
    pub restart: usize,
    pub iterations: usize,
    /// Relative Frobenius residual, recomputed from the returned vectors.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpdOutcome {
    /// Best vectors found when their residual meets `success_tol`.
    pub vectors: Option<Vec<Vec<Complex64>>>,
    /// Best relative residual over all restarts.
    pub residual: f64,
    pub traces: Vec<RestartTrace>,
}

impl CpdOutcome {
    pub fn found(&self) -> Option<(&[Vec<Complex64>], f64)> {
        self.vectors.as_deref().map(|v| (v, self.residual))
    }
}

/// Looks for `rank` vectors with `||T - sum v_s^(x)d|| / ||T|| <= success_tol`.
pub fn symmetric_cpd(t: &SymmetricTensor, rank: usize, cfg: &DecompositionConfig) -> CpdOutcome {
    let norm = t.frobenius_norm();
    if rank == 0 || norm == 0.0 {
        let vectors = vec![vec![Complex64::zero(); t.g()]; rank];
        let residual = if norm == 0.0 { 0.0 } else { 1.0 };
        let ok = norm == 0.0 && rank > 0;
        return CpdOutcome {
            vectors: ok.then_some(vectors),
            residual,
            traces: vec![RestartTrace {
                rank,
                restart: 0,
                iterations: 0,
                residual,
            }],
        };
    }
    match t.d() {
        0 => CpdOutcome {
            vectors: None,
            residual: 1.0,
            traces: Vec::new(),
        },
        1 => {
            let v: Vec<Complex64> = (1..=t.g() as u32).map(|i| t.get(&[i])).collect();
            finish(t, rank, vec![(split(vec![v], rank, 1), 0)], cfg)
        }
        2 => order_two(t, rank, cfg),
        _ => {
            let problem = Problem::new(t, norm);
            let scale = norm.powf(1.0 / t.d() as f64);
            let runs: Vec<(Vec<Vec<Complex64>>, usize)> = (0..cfg.restarts)
                .into_par_iter()
                .map(|restart| {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(((rank as u64) << 32) | restart as u64);
                    let (a, iters) = problem.solve(rank, &mut rng, cfg);
                    let vectors = (0..rank)
                        .map(|s| {
                            a[s * problem.n..(s + 1) * problem.n]
                                .iter()
                                .map(|&x| x * scale)
                                .collect()
                        })
                        .collect();
                    (vectors, iters)
                })
                .collect();
            finish(t, rank, runs, cfg)
        }
    }
}

/// Scores every run against `t` independently of the optimizer and keeps
/// the best one (lowest residual, earliest restart on ties).
fn finish(
    t: &SymmetricTensor,
    rank: usize,
    runs: Vec<(Vec<Vec<Complex64>>, usize)>,
    cfg: &DecompositionConfig,
) -> CpdOutcome {
    let norm = t.frobenius_norm();
    let mut traces = Vec::with_capacity(runs.len());
    let mut best: Option<(f64, Vec<Vec<Complex64>>)> = None;
    for (restart, (vectors, iterations)) in runs.into_iter().enumerate() {
        let residual = relative_residual(t, &vectors, norm);
        traces.push(RestartTrace {
            rank,
            restart,
            iterations,
            residual,
        });
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, vectors));
        }
    }
    let (residual, vectors) = best.unwrap_or((f64::INFINITY, Vec::new()));
    CpdOutcome {
        vectors: (residual <= cfg.success_tol).then_some(vectors),
        residual,
        traces,
    }
}

pub(crate) fn relative_residual(t: &SymmetricTensor, vectors: &[Vec<Complex64>], norm: f64) -> f64 {
    match SymmetricTensor::from_vectors(t.g(), t.d(), vectors) {
        Ok(model) => t.distance(&model).map_or(f64::INFINITY, |e| e / norm),
        Err(_) => f64::INFINITY,
    }
}

/// Pads a list of factors to exactly `rank` terms by splitting the first
/// one into `k` equal parts, each scaled by `k^(-1/d)`.
fn split(mut vs: Vec<Vec<Complex64>>, rank: usize, d: usize) -> Vec<Vec<Complex64>> {
    if vs.is_empty() || vs.len() >= rank {
        return vs;
    }
    let k = rank - vs.len() + 1;
    let part = (k as f64).powf(-1.0 / d as f64);
    let first: Vec<Complex64> = vs.remove(0).into_iter().map(|x| x * part).collect();
    let mut out = vec![first; k];
    out.extend(vs);
    out
}

fn order_two(t: &SymmetricTensor, rank: usize, cfg: &DecompositionConfig) -> CpdOutcome {
    let n = t.g();
    let dense = t.dense();
    let norm = t.frobenius_norm();
    let (factors, exact_rank) = match cfg.mode {
        Mode::Complex => {
            let tk = takagi(n, &dense);
            let r = tk.rank(RANK_THRESHOLD);
            (tk.factors(r.min(rank)), r)
        }
        Mode::Real => {
            let re: Vec<f64> = dense.iter().map(|c| c.re).collect();
            let (vals, vecs) = real_symmetric_eigen(n, &re);
            let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let positive: Vec<Vec<Complex64>> = vals
                .iter()
                .zip(&vecs)
                .filter(|(&l, _)| l > RANK_THRESHOLD * top)
                .map(|(&l, q)| {
                    q.iter()
                        .map(|&x| Complex64::new(x * l.sqrt(), 0.0))
                        .collect()
                })
                .collect();
            let indefinite = vals.iter().any(|&l| l < -RANK_THRESHOLD * top);
            let r = if indefinite {
                usize::MAX
            } else {
                positive.len()
            };
            (positive.into_iter().take(rank).collect(), r)
        }
    };
    let vectors = if exact_rank <= rank {
        split(factors, rank, 2)
    } else {
        factors
    };
    let residual = relative_residual(t, &vectors, norm);
    CpdOutcome {
        vectors: (exact_rank <= rank && residual <= cfg.success_tol).then_some(vectors),
        residual,
        traces: vec![RestartTrace {
            rank,
            restart: 0,
            iterations: 0,
            residual,
        }],
    }
}

/// Target tensor in multidegree form, normalized to unit Frobenius norm.
struct Problem {
    n: usize,
    d: usize,
    /// Sparse exponent lists `(variable, exponent)` per multidegree.
    support: Vec<Vec<(usize, u32)>>,
    weight: Vec<f64>,
    target: Vec<Complex64>,
}

impl Problem {
    fn new(t: &SymmetricTensor, norm: f64) -> Self {
        let mds = Multidegree::all(t.g(), t.d());
        Problem {
            n: t.g(),
            d: t.d(),
            support: mds
                .iter()
                .map(|m| {
                    m.exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(j, &e)| (j, e))
                        .collect()
                })
                .collect(),
            weight: mds.iter().map(eta_of).collect(),
            target: mds.iter().map(|m| t.get_md(m) / norm).collect(),
        }
    }

    fn residual(&self, a: &[Complex64], rank: usize) -> (Vec<Complex64>, f64) {
        let mut cost = 0.0;
        let r: Vec<Complex64> = self
            .support
            .iter()
            .zip(&self.target)
            .zip(&self.weight)
            .map(|((sup, &b), &w)| {
                let mut model = Complex64::zero();
                for s in 0..rank {
                    let col = &a[s * self.n..(s + 1) * self.n];
                    model += sup
                        .iter()
                        .fold(Complex64::new(1.0, 0.0), |p, &(j, e)| p * col[j].powu(e));
                }
                let ri = b - model;
                cost += w * ri.norm_sqr();
                ri
            })
            .collect();
        (r, cost)
    }

    /// `J^H r`, accumulated per multidegree.
    fn gradient(&self, a: &[Complex64], rank: usize, r: &[Complex64]) -> DVector<Complex64> {
        let n = self.n;
        let mut g = DVector::<Complex64>::zeros(rank * n);
        for ((sup, &ri), &w) in self.support.iter().zip(r).zip(&self.weight) {
            let wr = ri * w;
            for s in 0..rank {
                let col = &a[s * n..(s + 1) * n];
                for (k, &(j, e)) in sup.iter().enumerate() {
                    let mut partial = Complex64::new(e as f64, 0.0) * col[j].powu(e - 1);
                    for (l, &(jj, ee)) in sup.iter().enumerate() {
                        if l != k {
                            partial *= col[jj].powu(ee);
                        }
                    }
                    g[s * n + j] += partial.conj() * wr;
                }
            }
        }
        g
    }

    /// Gauss-Newton matrix `J^H J`. For columns `a = a_s`, `b = a_s'` and
    /// `gamma = a^H b`, the `(j, j')` entry of block `(s, s')` is
    /// `d (delta_jj' gamma^(d-1) + (d-1) b_j conj(a_j') gamma^(d-2))`.
    fn normal_matrix(&self, a: &[Complex64], rank: usize) -> DMatrix<Complex64> {
        let (n, d) = (self.n, self.d);
        let dd = Complex64::new(d as f64, 0.0);
        let mut h = DMatrix::<Complex64>::zeros(rank * n, rank * n);
        for s in 0..rank {
            let x = &a[s * n..(s + 1) * n];
            for sp in 0..rank {
                let y = &a[sp * n..(sp + 1) * n];
                let gamma: Complex64 = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
                let g1 = gamma.powu(d as u32 - 1);
                let g2 = if d >= 2 {
                    gamma.powu(d as u32 - 2) * (d as f64 - 1.0)
                } else {
                    Complex64::zero()
                };
                for j in 0..n {
                    for jp in 0..n {
                        let mut v = y[j] * x[jp].conj() * g2;
                        if j == jp {
                            v += g1;
                        }
                        h[(s * n + j, sp * n + jp)] = v * dd;
                    }
                }
            }
        }
        h
    }

    fn init(&self, rank: usize, rng: &mut ChaCha8Rng, mode: Mode) -> Vec<Complex64> {
        let scale = 1.0 / (self.n as f64).sqrt();
        (0..rank * self.n)
            .map(|_| match mode {
                Mode::Complex => {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im) * (std::f64::consts::FRAC_1_SQRT_2 * scale)
                }
                Mode::Real => {
                    let re: f64 = rng.sample(StandardNormal);
                    Complex64::new(re * scale, 0.0)
                }
            })
            .collect()
    }

    /// One restart. Returns the factor (columns stacked) and the number of
    /// linear solves performed.
    fn solve(
        &self,
        rank: usize,
        rng: &mut ChaCha8Rng,
        cfg: &DecompositionConfig,
    ) -> (Vec<Complex64>, usize) {
        let mut a = self.init(rank, rng, cfg.mode);
        let (mut r, mut cost) = self.residual(&a, rank);
        let mut mu = -1.0;
        let mut nu = 2.0;
        let mut iters = 0;
        while iters < cfg.max_iters {
            if cost.sqrt() <= 1e-15 {
                break;
            }
            let h = self.normal_matrix(&a, rank);
            let g = self.gradient(&a, rank, &r);
            if mu < 0.0 {
                let top = (0..h.nrows()).map(|i| h[(i, i)].re).fold(0.0, f64::max);
                mu = 1e-3 * top.max(1e-12);
            }
            let mut accepted = false;
            while iters < cfg.max_iters {
                iters += 1;
                let mut damped = h.clone();
                for i in 0..damped.nrows() {
                    damped[(i, i)] += mu;
                }
                let step = damped.cholesky().map(|c| c.solve(&g));
                let Some(mut step) = step else {
                    mu *= nu;
                    nu *= 2.0;
                    continue;
                };
                if cfg.mode == Mode::Real {
                    step.iter_mut().for_each(|x| x.im = 0.0);
                }
                let trial: Vec<Complex64> =
                    a.iter().zip(step.iter()).map(|(x, dx)| x + dx).collect();
                let (r_new, cost_new) = self.residual(&trial, rank);
                let hs = &h * &step;
                let predicted = 2.0 * step.dotc(&g).re - step.dotc(&hs).re;
                let actual = cost - cost_new;
                if actual > 0.0 && predicted > 0.0 {
                    let rho = actual / predicted;
                    mu *= f64::max(1.0 / 3.0, 1.0 - (2.0 * rho - 1.0).powi(3));
                    nu = 2.0;
                    let rel = actual / cost;
                    a = trial;
                    r = r_new;
                    cost = cost_new;
                    accepted = true;
                    if rel < cfg.conv_tol {
                        return (a, iters);
                    }
                    break;
                }
                mu *= nu;
                nu *= 2.0;
                if mu > 1e30 {
                    return (a, iters);
                }
            }
            if !accepted {
                break;
            }
        }
        (a, iters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::collapse;
    use crate::parse_ncpoly;
    use crate::tensor::tensor_from_cpoly;

    fn cfg() -> DecompositionConfig {
        DecompositionConfig::default()
    }

    /// Finite-difference oracle for the holomorphic gradient and normal
    /// matrix: for a holomorphic residual, `J v ~ (r(a) - r(a + h v)) / h`.
    #[test]
    fn normal_matrix_and_gradient_match_finite_differences() {
        let p = parse_ncpoly("x1^3 + 2*x1*x1*x2 + 2*x1*x2*x1 + 2*x2*x1*x1 - x2^3", 2).unwrap();
        let t = tensor_from_cpoly(&collapse(&p), 3).unwrap();
        let prob = Problem::new(&t, t.frobenius_norm());
        let rank = 2;
        let a: Vec<Complex64> = [(0.3, 0.1), (-0.7, 0.2), (0.5, -0.4), (0.9, 0.6)]
            .iter()
            .map(|&(x, y)| Complex64::new(x, y))
            .collect();
        let (r0, _) = prob.residual(&a, rank);
        let p_len = a.len();
        let h = 1e-7;
        // dense Jacobian by forward differences, weighted by sqrt(eta)
        let mut jac = DMatrix::<Complex64>::zeros(r0.len(), p_len);
        for k in 0..p_len {
            let mut ap = a.clone();
            ap[k] += h;
            let (r1, _) = prob.residual(&ap, rank);
            for m in 0..r0.len() {
                jac[(m, k)] = (r0[m] - r1[m]) / h * prob.weight[m].sqrt();
            }
        }
        let wr = DVector::from_iterator(
            r0.len(),
            r0.iter().zip(&prob.weight).map(|(r, w)| r * w.sqrt()),
        );
        let g_fd = jac.adjoint() * wr;
        let h_fd = jac.adjoint() * &jac;
        let g = prob.gradient(&a, rank, &r0);
        let hm = prob.normal_matrix(&a, rank);
        assert!((g - g_fd).norm() < 1e-5, "gradient");
        assert!((hm - h_fd).norm() < 1e-5, "normal matrix");
    }

    #[test]
    fn cubic_fixture_has_rank_four() {
        let cubic = crate::tensor::tests::CUBIC;
        let p = parse_ncpoly(cubic, 3).unwrap();
        let t = tensor_from_cpoly(&collapse(&p), 3).unwrap();
        let out = symmetric_cpd(&t, 4, &cfg());
        let (vs, res) = out.found().expect("rank 4 decomposition");
        assert!(res <= 1e-8);
        let model = SymmetricTensor::from_vectors(3, 3, vs).unwrap();
        for (m, &c) in t.entries() {
            assert!((model.get_md(m) - c).norm() <= 1e-6);
        }
        assert_eq!(out.traces.len(), cfg().restarts);
    }

    #[test]
    fn rank_one_recovers_vector_up_to_root_of_unity() {
        let v = vec![
            Complex64::new(0.8, -0.3),
            Complex64::new(-1.1, 0.4),
            Complex64::new(0.2, 0.9),
        ];
        let t = SymmetricTensor::from_vectors(3, 3, std::slice::from_ref(&v)).unwrap();
        let out = symmetric_cpd(&t, 1, &cfg());
        let (vs, res) = out.found().unwrap();
        assert!(res <= 1e-10);
        let ratio = vs[0][0] / v[0];
        assert!((ratio.powu(3) - 1.0).norm() < 1e-8);
        for (x, y) in vs[0].iter().zip(&v) {
            assert!((x - ratio * y).norm() < 1e-8);
        }
    }

    #[test]
    fn order_two_counterexample_rank() {
        // Z11^2 + 2 Z12 Z21 + Z22^2
        let q = parse_ncpoly("x1^2 + x2*x3 + x3*x2 + x4^2", 4).unwrap();
        let t = tensor_from_cpoly(&collapse(&q), 2).unwrap();
        let two = symmetric_cpd(&t, 2, &cfg());
        assert!(two.found().is_none());
        assert!(two.residual > 0.1);
        // the coefficient matrix is a permutation matrix, so rank 4
        assert!(symmetric_cpd(&t, 3, &cfg()).found().is_none());
        let four = symmetric_cpd(&t, 4, &cfg());
        let (vs, res) = four.found().unwrap();
        assert_eq!(vs.len(), 4);
        assert!(res < 1e-12);
        // without Z22^2 the rank drops to 3
        let q3 = parse_ncpoly("x1^2 + x2*x3 + x3*x2", 4).unwrap();
        let t3 = tensor_from_cpoly(&collapse(&q3), 2).unwrap();
        assert!(symmetric_cpd(&t3, 2, &cfg()).found().is_none());
        assert_eq!(symmetric_cpd(&t3, 3, &cfg()).found().unwrap().0.len(), 3);
        let five = symmetric_cpd(&t, 5, &cfg());
        assert_eq!(five.found().unwrap().0.len(), 5);
        assert!(five.residual < 1e-12);
    }

    #[test]
    fn order_two_real_mode() {
        let mut c = cfg();
        c.mode = Mode::Real;
        // x1^2 - x2^2 is indefinite: no real sum of squares
        let q = parse_ncpoly("x1^2 - x2^2", 2).unwrap();
        let t = tensor_from_cpoly(&collapse(&q), 2).unwrap();
        assert!(symmetric_cpd(&t, 2, &c).found().is_none());
        // but it is fine over C
        assert!(symmetric_cpd(&t, 2, &cfg()).found().is_some());
        let psd = parse_ncpoly("x1^2 + x1*x2 + x2*x1 + 2*x2^2", 2).unwrap();
        let tp = tensor_from_cpoly(&collapse(&psd), 2).unwrap();
        let (vs, _) = symmetric_cpd(&tp, 2, &c)
            .found()
            .map(|(v, r)| (v.to_vec(), r))
            .unwrap();
        assert!(vs.iter().flatten().all(|x| x.im == 0.0));
    }

    #[test]
    fn restarts_are_deterministic() {
        let p = parse_ncpoly(crate::tensor::tests::CUBIC, 3).unwrap();
        let t = tensor_from_cpoly(&collapse(&p), 3).unwrap();
        let a = symmetric_cpd(&t, 3, &cfg());
        let b = symmetric_cpd(&t, 3, &cfg());
        assert_eq!(a, b);
        assert!(a.found().is_none());
    }

    #[test]
    fn degree_one_and_zero_tensor() {
        let t = SymmetricTensor::from_vectors(
            2,
            1,
            &[vec![Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0)]],
        )
        .unwrap();
        assert_eq!(symmetric_cpd(&t, 1, &cfg()).found().unwrap().0.len(), 1);
        let z = SymmetricTensor::zero(3, 3);
        assert!(symmetric_cpd(&z, 2, &cfg()).found().is_some());
    }
}
