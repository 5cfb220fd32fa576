use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncwaring_core::tensor::Status;
use ncwaring_core::{
    bench, check_compatibility_tol, collapse, evaluate_naive, evaluate_waring, generic_rank,
    parse_ncpoly_with, phi_reduce, verify_decomposition, waring_decompose, BenchRow, CMatrix,
    DecompositionConfig, MatrixTuple, Mode, NCPolynomial, OpCount, WaringDecomposition,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "ncwaring",
    version,
    about = "Waring decompositions of noncommutative polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check delta-compatibility. Exit 0 compatible, 2 incompatible.
    Check {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 1)]
        delta: usize,
        /// Absolute tolerance for coefficient equality (default: exact).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the commutative collapse.
    Collapse {
        #[command(flatten)]
        input: PolyInput,
    },
    /// Rename length-delta blocks as new variables.
    Reduce {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        delta: usize,
    },
    /// Search for a Waring decomposition. Exit 0 success, 2 incompatible,
    /// 3 heuristic failure, 4 certified nonexistence.
    Decompose {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 1)]
        delta: usize,
        #[arg(long)]
        max_rank: Option<usize>,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-12)]
        conv_tol: f64,
        /// Relative residual required for success.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Absolute tolerance for the compatibility check (default: exact).
        #[arg(long)]
        compat_tol: Option<f64>,
        #[arg(long, env = "NCWARING_SEED", default_value_t = 0)]
        seed: u64,
        /// Also write the decomposition alone to this file on success.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate on a matrix tuple, naively and/or through a decomposition.
    Eval {
        /// Polynomial file.
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        g: Option<usize>,
        /// Decomposition file as written by `decompose --out`.
        #[arg(long)]
        decomp: Option<PathBuf>,
        /// Matrix tuple file.
        #[arg(long)]
        matrices: PathBuf,
        /// Defaults to every method whose input is given.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Time naive against Waring evaluation; CSV on stdout.
    Bench {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = vec![8, 32, 128])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, env = "NCWARING_SEED", default_value_t = 0)]
        seed: u64,
        /// Coefficient tolerance the decomposition must verify to first.
        #[arg(long, default_value_t = 1e-6)]
        verify_tol: f64,
    },
    /// Generic Waring rank of a degree-d form in g variables.
    RankBound { g: usize, d: usize },
}

#[derive(Args)]
struct PolyInput {
    /// Polynomial file, or `-` for stdin.
    file: PathBuf,
    /// Number of variables.
    #[arg(long)]
    g: usize,
    /// Reject complex coefficients and search for real decompositions.
    #[arg(long)]
    real: bool,
}

impl PolyInput {
    fn mode(&self) -> Mode {
        if self.real {
            Mode::Real
        } else {
            Mode::Complex
        }
    }

    fn load(&self) -> Result<NCPolynomial> {
        read_poly(&self.file, self.g, self.mode())
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Naive,
    Waring,
    Both,
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_poly(path: &Path, g: usize, mode: Mode) -> Result<NCPolynomial> {
    let text = read_text(path)?;
    if text.trim().is_empty() {
        return Ok(NCPolynomial::zero(g));
    }
    parse_ncpoly_with(&text, g, mode).with_context(|| format!("parsing {}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct Evaluation {
    result: Vec<Vec<[f64; 2]>>,
    ops: OpCount,
}

fn evaluation(m: &CMatrix, ops: OpCount) -> Evaluation {
    Evaluation {
        result: (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect(),
        ops,
    }
}

#[derive(Serialize)]
struct EvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    naive: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    waring: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_rel_err: Option<f64>,
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { input, delta, tol } => {
            let p = input.load()?;
            let report = check_compatibility_tol(&p, delta, tol)?;
            emit(&report)?;
            Ok(if report.compatible { 0 } else { 2 })
        }
        Command::Collapse { input } => {
            emit(&collapse(&input.load()?))?;
            Ok(0)
        }
        Command::Reduce { input, delta } => {
            let (q, bijection) = phi_reduce(&input.load()?, delta)?;
            #[derive(Serialize)]
            struct Reduced {
                bijection: ncwaring_core::IndexBijection,
                polynomial: NCPolynomial,
            }
            emit(&Reduced {
                bijection,
                polynomial: q,
            })?;
            Ok(0)
        }
        Command::Decompose {
            input,
            delta,
            max_rank,
            restarts,
            max_iters,
            conv_tol,
            tol,
            compat_tol,
            seed,
            out,
        } => {
            let cfg = DecompositionConfig {
                max_rank,
                restarts,
                max_iters,
                conv_tol,
                success_tol: tol,
                seed,
                mode: input.mode(),
                compat_tol,
            };
            cfg.validate()?;
            let p = input.load()?;
            let result = waring_decompose(&p, delta, &cfg)?;
            emit(&result)?;
            let code = match &result.status {
                Status::Success { decomposition, .. } => {
                    if let Some(path) = out {
                        let text = serde_json::to_string_pretty(decomposition)?;
                        fs::write(&path, text + "\n")
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    0
                }
                Status::Incompatible { .. } => 2,
                Status::HeuristicFailure { .. } => 3,
                Status::CertifiedNonexistence { .. } => 4,
            };
            Ok(code)
        }
        Command::Eval {
            poly,
            g,
            decomp,
            matrices,
            method,
        } => {
            let x: MatrixTuple = read_json(&matrices)?;
            let w: Option<WaringDecomposition> = decomp.as_deref().map(read_json).transpose()?;
            let p = match poly {
                Some(path) => {
                    let g = g
                        .or(w.as_ref().map(WaringDecomposition::g))
                        .unwrap_or(x.g());
                    Some(read_poly(&path, g, Mode::Complex)?)
                }
                None => None,
            };
            let method = method.unwrap_or(match (&p, &w) {
                (Some(_), Some(_)) => Method::Both,
                (None, Some(_)) => Method::Waring,
                _ => Method::Naive,
            });
            let want_naive = matches!(method, Method::Naive | Method::Both);
            let want_waring = matches!(method, Method::Waring | Method::Both);
            let naive = match (&p, want_naive) {
                (Some(p), true) => Some(evaluate_naive(p, &x)?),
                (None, true) => bail!("naive evaluation needs --poly"),
                _ => None,
            };
            let waring = match (&w, want_waring) {
                (Some(w), true) => Some(evaluate_waring(w, &x)?),
                (None, true) => bail!("Waring evaluation needs --decomp"),
                _ => None,
            };
            let max_rel_err = match (&naive, &waring) {
                (Some((a, _)), Some((b, _))) => Some(ncwaring_core::eval::relative_error(a, b)),
                _ => None,
            };
            emit(&EvalReport {
                naive: naive.map(|(m, o)| evaluation(&m, o)),
                waring: waring.map(|(m, o)| evaluation(&m, o)),
                max_rel_err,
            })?;
            Ok(0)
        }
        Command::Bench {
            poly,
            g,
            decomp,
            sizes,
            trials,
            seed,
            verify_tol,
        } => {
            let p = read_poly(&poly, g, Mode::Complex)?;
            let w: WaringDecomposition = read_json(&decomp)?;
            let (ok, err) = verify_decomposition(&p, &w, verify_tol)?;
            if !ok {
                bail!("decomposition does not verify: max coefficient error {err:e}");
            }
            let rows = bench(&p, &w, &sizes, trials, seed)?;
            let mut out = io::stdout().lock();
            writeln!(out, "{}", BenchRow::CSV_HEADER)?;
            for r in &rows {
                writeln!(out, "{}", r.csv_line())?;
            }
            Ok(0)
        }
        Command::RankBound { g, d } => {
            if g == 0 || d == 0 {
                bail!("g and d must be positive");
            }
            println!("{}", generic_rank(g, d));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage-error code 2 would collide with "incompatible"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
