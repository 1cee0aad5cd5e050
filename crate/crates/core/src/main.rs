use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dagcert::compression::{compress, parse_dag, unfold, Mode, UnfoldError};
use dagcert::dagcheck::{
    check_dag, corrupt, emit_trace, parse_trace, verify_trace, CheckResult, MutationKind,
};
use dagcert::formula::parse_corpus;
use dagcert::graph::{parse_graph, FAMILIES};
use dagcert::ndproof::parse_proof;
use dagcert::pipeline::{run_experiment, ExperimentConfig, WORKER_STACK};
use dagcert::prover::{decide, prove_beta_capped, ProverError, Verdict};
use dagcert::reduction::translate_beta;
use dagcert::stats::{f_min, family_report, ProofFamily};
use dagcert::Formula;

#[derive(Parser, Debug)]
#[command(
    name = "dagcert",
    version,
    about = "Implicational tautology certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Compression mode: subtree, label, or both (experiment only).
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest graph checked with the hamiltonicity oracle before proving.
    #[arg(long, global = true, default_value_t = 12)]
    oracle_cap: usize,
    /// Node budget for unfolding.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph edge list to its non-hamiltonicity formula.
    Reduce { graph: PathBuf },
    /// Decide a formula: a proof when valid, a countermodel otherwise.
    Decide { formula: PathBuf },
    /// Prove the non-hamiltonicity formula of a graph.
    ProveBeta { graph: PathBuf },
    /// Compress a proof into a DAG certificate.
    Compress { proof: PathBuf },
    /// Check a DAG certificate.
    Check {
        certificate: PathBuf,
        /// Verify this trace against the certificate instead of checking.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the checker trace here.
        #[arg(long)]
        emit_trace: Option<PathBuf>,
    },
    /// Expand a DAG certificate back into a proof tree.
    Unfold { certificate: PathBuf },
    /// Apply one seeded mutation to a certificate.
    Corrupt {
        certificate: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// Minimal proof sizes by conclusion size.
    Fmin {
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        #[arg(long, default_value_t = 12)]
        bound: usize,
        #[arg(long, default_value = "0..7")]
        sizes: String,
    },
    /// Run a graph family through the whole pipeline.
    Experiment {
        #[arg(long)]
        family: String,
        #[arg(long)]
        sizes: String,
    },
}

enum Failure {
    Reject(String),
    Usage(String),
}

use Failure::{Reject, Usage};

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn malformed(path: &Path, e: impl std::fmt::Display) -> Failure {
    Usage(format!("{}: {e}", path.display()))
}

fn single_mode(cli: &Cli) -> Result<Mode, Failure> {
    match cli.mode.as_deref() {
        None => Ok(Mode::Subtree),
        Some(s) => s.parse().map_err(|e: String| Usage(e)),
    }
}

fn modes(cli: &Cli) -> Result<Vec<Mode>, Failure> {
    match cli.mode.as_deref() {
        None | Some("both") => Ok(vec![Mode::Subtree, Mode::Label]),
        Some(_) => Ok(vec![single_mode(cli)?]),
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let bad = || Usage(format!("bad size range `{s}`, expected `a..b` or `n`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn one_formula(path: &Path) -> Result<Formula, Failure> {
    let text = read(path)?;
    let mut all =
        parse_corpus(&text).map_err(|(line, e)| malformed(path, format!("line {line}: {e}")))?;
    if all.len() != 1 {
        return Err(malformed(
            path,
            format!("expected one formula, found {}", all.len()),
        ));
    }
    Ok(all.remove(0))
}

fn prover_failure(e: ProverError) -> Failure {
    match e {
        ProverError::NotATautology => Reject(e.to_string()),
        ProverError::Capacity { .. } => Usage(e.to_string()),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Reduce { graph } => {
            let g = parse_graph(&read(graph)?).map_err(|e| malformed(graph, e))?;
            Ok(format!("{}\n", translate_beta(&g)))
        }
        Command::Decide { formula } => {
            let f = one_formula(formula)?;
            match decide(&f).map_err(prover_failure)? {
                Verdict::Valid(p) => Ok(p.to_text()),
                Verdict::Invalid(m) => {
                    emit(cli, &m.to_text())?;
                    Err(Reject(format!("invalid: {f}")))
                }
            }
        }
        Command::ProveBeta { graph } => {
            let g = parse_graph(&read(graph)?).map_err(|e| malformed(graph, e))?;
            let b = prove_beta_capped(&g, cli.oracle_cap).map_err(prover_failure)?;
            Ok(b.proof.to_text())
        }
        Command::Compress { proof } => {
            let p = parse_proof(&read(proof)?).map_err(|e| malformed(proof, e))?;
            let d = compress(&p, single_mode(cli)?).map_err(|e| Reject(e.to_string()))?;
            Ok(d.to_text())
        }
        Command::Check {
            certificate,
            trace,
            emit_trace: trace_out,
        } => {
            let d = parse_dag(&read(certificate)?).map_err(|e| malformed(certificate, e))?;
            if let Some(path) = trace {
                let t = parse_trace(&read(path)?).map_err(|e| malformed(path, e))?;
                return match verify_trace(&t, &d) {
                    Ok(true) => Ok(format!("trace verified: {} steps\n", t.len())),
                    Ok(false) => Err(Reject("trace does not match the checker run".into())),
                    Err(e) => Err(Reject(e.to_string())),
                };
            }
            if let Some(path) = trace_out {
                fs::write(path, emit_trace(&d).to_text()).map_err(|e| malformed(path, e))?;
            }
            match check_dag(&d) {
                CheckResult::Accept { conclusion, steps } => {
                    Ok(format!("accept {conclusion} steps={steps}\n"))
                }
                CheckResult::Reject {
                    reason,
                    location,
                    steps,
                } => Err(Reject(format!(
                    "reject {} at {location} steps={steps}",
                    reason.as_str()
                ))),
            }
        }
        Command::Unfold { certificate } => {
            let d = parse_dag(&read(certificate)?).map_err(|e| malformed(certificate, e))?;
            match unfold(&d, cli.budget) {
                Ok(p) => Ok(p.to_text()),
                Err(e @ UnfoldError::BudgetExceeded { .. }) => Err(Reject(e.to_string())),
                Err(e) => Err(malformed(certificate, e)),
            }
        }
        Command::Corrupt { certificate, kind } => {
            let kind: MutationKind = kind.parse().map_err(Usage)?;
            let d = parse_dag(&read(certificate)?).map_err(|e| malformed(certificate, e))?;
            let bad = corrupt(&d, cli.seed, kind).map_err(|e| Reject(e.to_string()))?;
            Ok(bad.to_text())
        }
        Command::Fmin {
            atoms,
            bound,
            sizes,
        } => {
            let sizes: Vec<usize> = parse_range(sizes)?.collect();
            let table = f_min(&sizes, *atoms, *bound).map_err(|e| Usage(e.to_string()))?;
            let mut out = String::new();
            if cli.format == Format::Csv {
                out.push_str("m,f_min\n");
            }
            for (m, v) in table {
                let v = v.map_or_else(|| "none".to_string(), |v| v.to_string());
                let _ = match cli.format {
                    Format::Csv => writeln!(out, "{m},{v}"),
                    Format::Text => writeln!(out, "F({m}) = {v}"),
                };
            }
            Ok(out)
        }
        Command::Experiment { family, sizes } => {
            if !FAMILIES.contains(&family.as_str()) {
                return Err(Usage(format!(
                    "unknown family `{family}`, expected one of {FAMILIES:?}"
                )));
            }
            let cfg = ExperimentConfig {
                family: family.clone(),
                sizes: parse_range(sizes)?,
                modes: modes(cli)?,
                seed: cli.seed,
                oracle_cap: cli.oracle_cap,
            };
            let fam = run_experiment(&cfg).map_err(|e| Usage(e.to_string()))?;
            let report = family_report(&fam).map_err(|e| Usage(e.to_string()))?;
            Ok(match cli.format {
                Format::Csv => report,
                Format::Text => summary(&fam, &report),
            })
        }
    }
}

fn summary(fam: &ProofFamily, report: &str) -> String {
    let mut out = format!("family {}\n", fam.name);
    for r in fam.rows() {
        let _ = writeln!(
            out,
            "{:<14} {:<8} m={:<5} tree={:<6} height={:<5} dag={}+{} steps={} {}",
            r.instance,
            r.mode,
            r.m,
            r.tree_size,
            r.tree_height,
            r.dag_nodes,
            r.dag_edges,
            r.checker_steps,
            if r.accepted { "accepted" } else { "rejected" }
        );
    }
    for s in fam.skipped() {
        let _ = writeln!(out, "{s:<14} skipped: hamiltonian");
    }
    for l in report.lines().filter(|l| l.starts_with('#')) {
        let _ = writeln!(out, "{}", &l[1..]);
    }
    out
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| malformed(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new()
        .stack_size(WORKER_STACK)
        .spawn(move || match run(&cli) {
            Ok(text) => match emit(&cli, &text) {
                Ok(()) => 0,
                Err(Usage(m) | Reject(m)) => {
                    eprintln!("error: {m}");
                    2
                }
            },
            Err(Reject(m)) => {
                eprintln!("{m}");
                1
            }
            Err(Usage(m)) => {
                eprintln!("error: {m}");
                2
            }
        });
    match worker.map(|h| h.join()) {
        Ok(Ok(code)) => ExitCode::from(code),
        _ => {
            eprintln!("error: internal failure");
            ExitCode::from(2)
        }
    }
}
