//! Command-line surface for the Brauer block-theory library.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use brauer::block::{block_key, enumerate_block};
use brauer::diagram::{gram_matrix, verify_block, verify_report_json};
use brauer::graphs::{mbs_graph, orbit_graph, par_e_graph};
use brauer::kl::{kl_polynomials, predict_decomposition, table_to_csv, table_to_json, PrPlusMode};
use brauer::partition::Partition;
use brauer::weight::{shift, Weight};

#[derive(Parser)]
#[command(name = "brauer", version, about = "Exact block theory, alcove geometry and Kazhdan-Lusztig combinatorics for the Brauer algebra B_n(delta)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Mbs,
    Orbit,
    #[value(name = "par-e")]
    ParE,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the block of a weight up to a degree bound.
    Blocks {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Dominant weight, e.g. "0", "2,2", "521^3".
        #[arg(long)]
        weight: String,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the facet signature and singularity degree of a weight.
    Facet {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        weight: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit one of the block graphs.
    Graph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Root weight for mbs/orbit (ignored for par-e).
        #[arg(long, default_value = "0")]
        weight: String,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Compute the table of parabolic Kazhdan-Lusztig polynomials.
    KlTable {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Root weight of the block (must lie in the fundamental alcove).
        #[arg(long, default_value = "0")]
        root: String,
        #[arg(long)]
        max_degree: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Predicted decomposition multiplicity [Delta(standard) : L(simple)].
    Predict {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Partition label of the standard module.
        #[arg(long)]
        standard: String,
        /// Partition label of the simple module.
        #[arg(long)]
        simple: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Gram matrix of the cellular form on a cell module of B_n.
    Gram {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long)]
        partition: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Verify predicted decompositions against Gram ranks over a block.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        /// Root weight of the block.
        #[arg(long)]
        weight: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("BRAUER_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    s.parse::<Weight>().map_err(|e| format!("invalid weight '{s}': {e}"))
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse::<Partition>().map_err(|e| format!("invalid partition '{s}': {e}"))
}

fn require_nonzero(delta: i64) -> Result<(), String> {
    if delta == 0 {
        Err("delta must be nonzero".to_string())
    } else {
        Ok(())
    }
}

fn run(cmd: Command) -> Result<String, String> {
    match cmd {
        Command::Blocks { delta, weight, max_degree, format } => {
            require_nonzero(delta)?;
            let w = parse_weight(&weight)?;
            let block = enumerate_block(&w, delta, max_degree);
            let members: Vec<String> = block.members.iter().map(|m| m.to_string()).collect();
            match format {
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::json!({
                        "delta": delta,
                        "weight": w.to_string(),
                        "max_degree": max_degree,
                        "members": members,
                    })
                )),
                Format::Text => Ok(members.join("\n") + "\n"),
                _ => Err("blocks supports --format json|text".to_string()),
            }
        }
        Command::Facet { delta, weight, format } => {
            require_nonzero(delta)?;
            let w = parse_weight(&weight)?;
            let x = shift(&w, delta);
            let sig = x.signature().map_err(|e| e.to_string())?;
            let slots: Vec<String> = sig
                .slots
                .iter()
                .map(|s| match s {
                    brauer::weight::Slot::Singleton(i) => format!("S({i})"),
                    brauer::weight::Slot::Doubleton(i, j) => format!("D({i},{j})"),
                })
                .collect();
            let sing = x.singularity_degree();
            let key = format!("{:?}", block_key(&w, delta));
            match format {
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::json!({
                        "delta": delta,
                        "weight": w.to_string(),
                        "signature": slots,
                        "singularity_degree": sing,
                        "block_key": key.to_string(),
                    })
                )),
                Format::Text => Ok(format!(
                    "weight {w}  delta {delta}\nsignature: {}\nsingularity degree: {sing}\nblock key: {key}\n",
                    slots.join(" ")
                )),
                _ => Err("facet supports --format json|text".to_string()),
            }
        }
        Command::Graph { kind, delta, weight, max_degree, format } => {
            require_nonzero(delta)?;
            fn render<T: std::fmt::Display>(
                g: &brauer::graphs::Digraph<T>,
                format: Format,
            ) -> Result<String, String> {
                match format {
                    Format::Dot => Ok(g.to_dot()),
                    Format::Json => Ok(format!("{}\n", g.to_json())),
                    _ => Err("graph supports --format dot|json".to_string()),
                }
            }
            match kind {
                GraphKind::Mbs => {
                    let root = parse_partition(&weight)?;
                    render(&mbs_graph(&root, delta, max_degree), format)
                }
                GraphKind::Orbit => {
                    let root = parse_weight(&weight)?;
                    render(&orbit_graph(&root, delta, max_degree), format)
                }
                GraphKind::ParE => render(&par_e_graph(max_degree), format),
            }
        }
        Command::KlTable { delta, root, max_degree, format } => {
            require_nonzero(delta)?;
            let root = parse_weight(&root)?;
            let table = kl_polynomials(delta, &root, max_degree, PrPlusMode::WholeBracket)
                .map_err(|e| e.to_string())?;
            match format {
                Format::Csv => Ok(table_to_csv(&table)),
                Format::Json => Ok(format!("{}\n", table_to_json(&table))),
                _ => Err("kl-table supports --format csv|json".to_string()),
            }
        }
        Command::Predict { delta, standard, simple, format } => {
            require_nonzero(delta)?;
            let lambda = parse_partition(&standard)?;
            let mu = parse_partition(&simple)?;
            let bound = lambda.degree().max(mu.degree()) as i64;
            let wl = Weight::from(&lambda.transpose());
            let root = find_alcove_root(&wl, delta, bound)?;
            let table = kl_polynomials(delta, &root, bound, PrPlusMode::WholeBracket)
                .map_err(|e| e.to_string())?;
            let mult = predict_decomposition(&table, &lambda, &mu).map_err(|e| e.to_string())?;
            match format {
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::json!({
                        "delta": delta,
                        "standard": lambda.to_string(),
                        "simple": mu.to_string(),
                        "multiplicity": mult,
                    })
                )),
                Format::Text => Ok(format!("{mult}\n")),
                _ => Err("predict supports --format json|text".to_string()),
            }
        }
        Command::Gram { n, delta, partition, format } => {
            require_nonzero(delta)?;
            let lambda = parse_partition(&partition)?;
            let dq = BigRational::from(BigInt::from(delta));
            let g = gram_matrix(n, &lambda, &dq).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => Ok(g.to_csv()),
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::json!({
                        "n": n,
                        "delta": delta,
                        "lambda": lambda.to_string(),
                        "dim": g.dim,
                        "rank": g.rank(),
                    })
                )),
                _ => Err("gram supports --format csv|json".to_string()),
            }
        }
        Command::Verify { n, delta, weight, format } => {
            require_nonzero(delta)?;
            let root = parse_weight(&weight)?;
            let table = kl_polynomials(delta, &root, n as i64, PrPlusMode::WholeBracket)
                .map_err(|e| e.to_string())?;
            let rows = verify_block(n, delta, &root, &table).map_err(|e| e.to_string())?;
            match format {
                Format::Json => Ok(format!("{}\n", verify_report_json(n, delta, &rows))),
                Format::Text => {
                    let mut out = String::new();
                    for r in &rows {
                        out.push_str(&format!(
                            "{}: dim {} predicted {} {}\n",
                            r.lambda,
                            r.dim_delta,
                            r.predicted_sum,
                            if r.pass { "pass" } else { "FAIL" }
                        ));
                    }
                    Ok(out)
                }
                _ => Err("verify supports --format json|text".to_string()),
            }
        }
    }
}

/// The fundamental-alcove (length 0) representative of the block of `w`.
fn find_alcove_root(w: &Weight, delta: i64, bound: i64) -> Result<Weight, String> {
    let block = enumerate_block(w, delta, bound);
    block
        .members
        .iter()
        .find(|m| brauer::kl::length(m, delta).map(|l| l == 0).unwrap_or(false))
        .cloned()
        .ok_or_else(|| format!("no regular fundamental-alcove representative in the block of {w}"))
}
