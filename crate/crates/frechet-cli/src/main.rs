//! Command-line surface: compute or decide approximate Frechet distances,
//! expose the exact oracle, generate synthetic curves, and render free-space
//! diagrams.
//!
//! Exit codes: 0 success, 2 usage or input error, 1 internal invariant
//! violation.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use frechet::approx::{approx_decide, approx_frechet, DecisionConfig};
use frechet::curves::Curve;
use frechet::error::Error;
use frechet::gen::{generate, Family};
use frechet::io::{parse_curve, write_curve};
use frechet::oracle::exact_frechet;
use frechet::render::render_fsd;
use frechet::simplification::build_subcurve_tree;
use frechet::sparsity::build_passage_index;

#[derive(Parser)]
#[command(name = "frechet", version, about = "Approximate continuous Frechet distance under the L-infinity norm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an O(alpha)-approximation with a two-sided certificate.
    Approx {
        p_file: PathBuf,
        q_file: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Approximate decision: YES if within c_total*delta, NO if above delta.
    Decide {
        p_file: PathBuf,
        q_file: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 4.0)]
        alpha: f64,
    },
    /// Exact Frechet distance via the free-space oracle (quadratic time).
    Exact {
        p_file: PathBuf,
        q_file: PathBuf,
        #[arg(long = "rel-tol", default_value_t = 1e-9)]
        rel_tol: f64,
    },
    /// Generate a synthetic curve on standard output.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Render the delta-free space of a pair as an SVG figure.
    Fsd {
        p_file: PathBuf,
        q_file: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run seeded benchmark trials and print one report line each.
    Bench {
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "sqrt")]
        alpha: Vec<String>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "walk")]
        family: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
}

/// Usage/input failure (exit 2) vs internal invariant failure (exit 1).
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotQuasiMonotone { .. } | Error::StarAssembly(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn load_curve(path: &PathBuf) -> Result<Curve, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_curve(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_pair(p_file: &PathBuf, q_file: &PathBuf) -> Result<(Curve, Curve), Failure> {
    let p = load_curve(p_file)?;
    let q = load_curve(q_file)?;
    if p.dim() != q.dim() {
        return Err(Failure::Input(format!(
            "dimension mismatch: {} is {}-dimensional, {} is {}-dimensional",
            p_file.display(),
            p.dim(),
            q_file.display(),
            q.dim()
        )));
    }
    Ok((p, q))
}

fn report_line(p: &Curve, q: &Curve, alpha: f64, eps: f64, r: &frechet::approx::ApproxResult, wall_ms: f64) -> String {
    format!(
        "m={} n={} d={} alpha={} eps={} value={} cert_lo={} cert_hi={} c_total={} wall_ms={:.3} decider_calls={}",
        p.len(),
        q.len(),
        p.dim(),
        alpha,
        eps,
        r.value,
        r.cert_lo,
        r.cert_hi,
        r.c_total,
        wall_ms,
        r.decider_calls
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Approx { p_file, q_file, alpha, eps } => {
            let (p, q) = load_pair(&p_file, &q_file)?;
            if !(1.0 <= alpha && alpha <= q.len() as f64) {
                return Err(Failure::Input(format!("alpha must lie in [1, n={}]", q.len())));
            }
            if !(eps > 0.0) {
                return Err(Failure::Input("eps must be positive".into()));
            }
            let start = Instant::now();
            let r = approx_frechet(&p, &q, alpha, eps)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            println!("{}", report_line(&p, &q, alpha, eps, &r, wall));
        }
        Command::Decide { p_file, q_file, delta, alpha } => {
            let (p, q) = load_pair(&p_file, &q_file)?;
            if !(delta >= 0.0) {
                return Err(Failure::Input("delta must be >= 0".into()));
            }
            if !(1.0 <= alpha && alpha <= q.len() as f64) {
                return Err(Failure::Input(format!("alpha must lie in [1, n={}]", q.len())));
            }
            let cfg = DecisionConfig::new(delta, alpha, q.len())?;
            let idx = build_passage_index(&q);
            let tree = build_subcurve_tree(&q);
            let yes = approx_decide(&p, &q, &cfg, &idx, &tree)?;
            println!("{}", if yes { "YES" } else { "NO" });
        }
        Command::Exact { p_file, q_file, rel_tol } => {
            let (p, q) = load_pair(&p_file, &q_file)?;
            if !(rel_tol > 0.0) {
                return Err(Failure::Input("rel-tol must be positive".into()));
            }
            let v = exact_frechet(&p, &q, rel_tol)?;
            println!("{v}");
        }
        Command::Gen { family, n, seed, dim } => {
            let family: Family = family.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
            let c = generate(family, n, dim, seed)?;
            print!("{}", write_curve(&c));
        }
        Command::Fsd { p_file, q_file, delta, svg } => {
            let (p, q) = load_pair(&p_file, &q_file)?;
            if !(delta >= 0.0) {
                return Err(Failure::Input("delta must be >= 0".into()));
            }
            let doc = render_fsd(&p, &q, delta)?;
            std::fs::write(&svg, doc).map_err(|e| Failure::Input(format!("{}: {e}", svg.display())))?;
        }
        Command::Bench { sizes, alpha, trials, seed, family, dim } => {
            let family: Family = family.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
            let sizes: Vec<usize> = sizes
                .iter()
                .map(|s| s.parse::<usize>().map_err(|_| Failure::Input(format!("bad size {s:?}"))))
                .collect::<Result<_, _>>()?;
            println!("# m=n per trial, family={family:?}, dim={dim}, seed={seed}");
            let mut trial_idx = 0u64;
            for &n in &sizes {
                if n < 2 {
                    return Err(Failure::Input(format!("size {n} too small")));
                }
                for a in &alpha {
                    let alpha_v = match a.as_str() {
                        "sqrt" => (n as f64).sqrt(),
                        "n" => n as f64,
                        other => other
                            .parse::<f64>()
                            .map_err(|_| Failure::Input(format!("bad alpha {other:?}")))?,
                    };
                    if !(1.0 <= alpha_v && alpha_v <= n as f64) {
                        return Err(Failure::Input(format!("alpha {alpha_v} outside [1, {n}]")));
                    }
                    for t in 0..trials {
                        let p = generate(family, n, dim, seed ^ (0xA5A5 + 2 * trial_idx))?;
                        let q = generate(family, n, dim, seed ^ (0xA5A5 + 2 * trial_idx + 1))?;
                        let eps = 0.5;
                        let start = Instant::now();
                        let r = approx_frechet(&p, &q, alpha_v, eps)?;
                        let wall = start.elapsed().as_secs_f64() * 1e3;
                        println!("{} trial={t}", report_line(&p, &q, alpha_v, eps, &r, wall));
                        trial_idx += 1;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal invariant violation: {msg}");
            ExitCode::from(1)
        }
    }
}
