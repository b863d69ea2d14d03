//! Command-line front end.
//!
//! Exit codes: 0 success or eulerian, 1 a verified negative answer, 2 bad
//! input, 3 interchange budget exhausted or merging stalled.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eulergraph::interchange::MergeConfig;
use eulergraph::oracle::{brute_family_exists, brute_tour, SearchBudget};
use eulergraph::{
    build_incidence, emit, emit_family, emit_tour, find_family_subgraph, gen_complete,
    gen_random_covering, gen_sts, parse, parse_tour, solve_with, trails_from_subgraph,
    verify_euler_object, Error, EulerFamily, Execution, Hypergraph, Verdict,
};

#[derive(Parser)]
#[command(
    name = "eulergraph",
    version,
    about = "Euler tours and families of hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an Euler tour and print it as a certificate.
    Tour {
        file: PathBuf,
        /// Label of the vertex whose degree guides merging.
        #[arg(long)]
        pivot: Option<String>,
        /// Maximum number of interchange steps.
        #[arg(long)]
        budget: Option<usize>,
        /// Search on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Find an Euler family and print one closed trail per line.
    Family { file: PathBuf },
    /// Check a tour certificate against a hypergraph.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Print a generated covering hypergraph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Answer by exhaustive search (small inputs only).
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// All k-subsets of n vertices.
    Complete { n: usize, k: usize },
    /// A Steiner triple system of order n.
    Sts { n: usize },
    /// A seeded random covering k-hypergraph on n vertices.
    Random { n: usize, k: usize, seed: u64 },
}

#[derive(Subcommand)]
enum OracleQuery {
    Tour { file: PathBuf },
    Family { file: PathBuf },
}

const EULERIAN: u8 = 0;
const NEGATIVE: u8 = 1;
const INPUT: u8 = 2;
const STALLED: u8 = 3;

fn read(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INPUT
    })
}

fn load(path: &Path) -> Result<Hypergraph, u8> {
    parse(&read(path)?).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        INPUT
    })
}

fn report(e: Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::BudgetExhausted { report, .. } => {
            eprintln!(
                "stuck with {} non-trivial components after {} steps",
                report.nontrivial, report.stats.steps
            );
            STALLED
        }
        Error::CertificateViolation(_) => STALLED,
        _ => INPUT,
    }
}

fn tour(
    file: &Path,
    pivot: Option<String>,
    budget: Option<usize>,
    sequential: bool,
) -> Result<u8, u8> {
    let h = load(file)?;
    let pivot = match pivot {
        Some(label) => Some(h.vertex(&label).ok_or_else(|| {
            eprintln!("error: unknown pivot vertex `{label}`");
            INPUT
        })?),
        None => None,
    };
    let mut config = MergeConfig {
        budget,
        pivot,
        ..MergeConfig::default()
    };
    if sequential {
        config.search.execution = Execution::Sequential;
    }
    let k = h.uniformity().unwrap_or(0);
    let r = solve_with(&h, k, &config).map_err(report)?;
    eprintln!("verdict: {}", r.verdict.as_str());
    match r.verdict {
        Verdict::Eulerian => {
            if let Some(t) = &r.tour {
                print!("{}", emit_tour(&h, t));
            }
            Ok(EULERIAN)
        }
        Verdict::Neither => Ok(NEGATIVE),
        Verdict::QuasiEulerianOnly => {
            if let Some(f) = &r.family {
                print!("{}", emit_family(&h, f));
            }
            Ok(NEGATIVE)
        }
        Verdict::NotCoveringBestEffort => {
            if let Some(f) = &r.family {
                print!("{}", emit_family(&h, f));
            }
            Ok(STALLED)
        }
    }
}

fn family(file: &Path) -> Result<u8, u8> {
    let h = load(file)?;
    let host = std::sync::Arc::new(build_incidence(&h));
    match find_family_subgraph(&host) {
        Some(gf) => {
            let f = trails_from_subgraph(&gf).map_err(report)?;
            print!("{}", emit_family(&h, &f));
            Ok(EULERIAN)
        }
        None => {
            eprintln!("no Euler family");
            Ok(NEGATIVE)
        }
    }
}

fn verify(file: &Path, cert: &Path) -> Result<u8, u8> {
    let h = load(file)?;
    let walk = parse_tour(&h, &read(cert)?).map_err(|e| {
        eprintln!("error: {}: {e}", cert.display());
        INPUT
    })?;
    let r = verify_euler_object(&h, &EulerFamily::new(vec![walk]));
    if r.valid {
        println!("valid Euler tour");
        return Ok(EULERIAN);
    }
    println!("invalid");
    for v in &r.violations {
        println!("  {v}");
    }
    Ok(NEGATIVE)
}

fn generate(kind: GenKind) -> Result<u8, u8> {
    let h = match kind {
        GenKind::Complete { n, k } => gen_complete(n, k),
        GenKind::Sts { n } => gen_sts(n),
        GenKind::Random { n, k, seed } => gen_random_covering(n, k, seed),
    }
    .map_err(report)?;
    print!("{}", emit(&h).map_err(report)?);
    Ok(EULERIAN)
}

fn oracle(query: OracleQuery) -> Result<u8, u8> {
    let budget = SearchBudget::default();
    match query {
        OracleQuery::Tour { file } => {
            let h = load(&file)?;
            match brute_tour(&h, &budget).map_err(report)? {
                Some(t) => {
                    print!("{}", emit_tour(&h, &t));
                    Ok(EULERIAN)
                }
                None => {
                    eprintln!("no Euler tour");
                    Ok(NEGATIVE)
                }
            }
        }
        OracleQuery::Family { file } => {
            let h = load(&file)?;
            let exists = brute_family_exists(&h, &budget).map_err(report)?;
            println!("{exists}");
            Ok(if exists { EULERIAN } else { NEGATIVE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Tour {
            file,
            pivot,
            budget,
            sequential,
        } => tour(&file, pivot, budget, sequential),
        Command::Family { file } => family(&file),
        Command::Verify { file, cert } => verify(&file, &cert),
        Command::Gen { kind } => generate(kind),
        Command::Oracle { query } => oracle(query),
    };
    ExitCode::from(code.unwrap_or_else(|c| c))
}
