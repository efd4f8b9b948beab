//! `hgd`: Euler-genus distributions of cubic caterpillar-Halin graphs.
//!
//! Exit codes: 0 success, 1 engines disagree (or an internal consistency
//! check failed), 2 bad arguments, 3 enumeration budget exceeded, 4 outside
//! the supported domain.

mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hgd_core::embedding::{EmbeddedGraph, TreeStrategy};
use hgd_core::genfun::{self, Truncation};
use hgd_core::{compute, recurrence, Engine, EngineConfig, Error, Execution, GenusPolynomial, ParamTuple};

use cache::Cache;

#[derive(Parser)]
#[command(name = "hgd", version, about = "Euler-genus polynomials of cubic caterpillar-Halin graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Recurrence,
    Matrix,
    Embedding,
    Genfun,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Recurrence => Engine::Recurrence,
            EngineArg::Matrix => Engine::Matrix,
            EngineArg::Embedding => Engine::Embedding,
            EngineArg::Genfun => Engine::Genfun,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TreeArg {
    Bfs,
    Dfs,
}

#[derive(clap::Args, Clone)]
struct RunOpts {
    /// Maximum free bits for exhaustive engines (defaults: matrix 26, embedding 24).
    #[arg(long)]
    budget_bits: Option<u32>,
    /// Worker threads for exhaustive engines; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for cached results.
    #[arg(long, env = "HGD_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Uniform t truncation for the generating-function engine.
    #[arg(long)]
    trunc: Option<i64>,
    /// Spanning-tree strategy for the embedding engine.
    #[arg(long, value_enum, default_value_t = TreeArg::Bfs)]
    tree: TreeArg,
}

impl RunOpts {
    fn config(&self) -> EngineConfig {
        EngineConfig {
            budget_bits: self.budget_bits,
            execution: Execution::with_threads(self.threads),
            trunc: self.trunc,
            tree: match self.tree {
                TreeArg::Bfs => TreeStrategy::BfsFromStart,
                TreeArg::Dfs => TreeStrategy::DfsFromEnd,
            },
        }
    }

    fn cache(&self) -> Option<Cache> {
        self.cache_dir.as_ref().map(Cache::new)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Euler-genus polynomial of H_{m}.
    Dist {
        /// Comma-separated parameters, e.g. 2,2,4.
        #[arg(long)]
        m: ParamTuple,
        #[arg(long, value_enum, default_value_t = EngineArg::Recurrence)]
        engine: EngineArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run several engines and compare their outputs coefficient by coefficient.
    Crosscheck {
        #[arg(long)]
        m: ParamTuple,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [
            EngineArg::Recurrence, EngineArg::Matrix, EngineArg::Embedding, EngineArg::Genfun
        ])]
        engines: Vec<EngineArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Closed-form number of embeddings of Euler genus 0, 1 or 2.
    Closed {
        #[arg(long)]
        m: ParamTuple,
        #[arg(long)]
        genus: u32,
    },
    /// Canonical representative of the isomorphism class of H_{m}.
    Canon {
        #[arg(long)]
        m: ParamTuple,
    },
    /// Coefficient table of E^1(t_1..t_k, z) over the box t_j <= m_j.
    Series {
        #[arg(long)]
        m: ParamTuple,
        /// Use this bound for every t_j instead of m_j.
        #[arg(long)]
        trunc: Option<i64>,
    },
    /// Dump the graph H_{m} as JSON.
    Graph {
        #[arg(long)]
        m: ParamTuple,
        #[arg(long, value_enum, default_value_t = TreeArg::Bfs)]
        tree: TreeArg,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) => 2,
        Error::ResourceLimit { .. } => 3,
        Error::Unsupported(_) => 4,
        Error::InvariantViolation(_) => 1,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn run_engine(engine: Engine, m: &ParamTuple, run: &RunOpts) -> Result<GenusPolynomial, Error> {
    let cache = run.cache();
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(m, engine)) {
        return Ok(hit);
    }
    let poly = compute(engine, m, &run.config())?;
    if let Some(c) = &cache {
        if let Err(e) = c.put(m, engine, &poly) {
            eprintln!("warning: could not write cache: {e}");
        }
    }
    Ok(poly)
}

fn render(poly: &GenusPolynomial, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(poly).expect("polynomial serializes"),
        Format::Csv => {
            let mut out = String::from("genus,count");
            for (i, c) in poly.coeffs().iter().enumerate() {
                out.push_str(&format!("\n{i},{c}"));
            }
            out
        }
        Format::Text => poly.to_string(),
    }
}

fn crosscheck(m: &ParamTuple, engines: &[Engine], format: Format, run: &RunOpts) -> ExitCode {
    let mut results = Vec::new();
    for &e in engines {
        match run_engine(e, m, run) {
            Ok(p) => results.push((e, p)),
            Err(err) => return fail(err),
        }
    }
    let reference = &results[0].1;
    let first_diff = results.iter().filter_map(|(_, p)| reference.first_difference(p)).min();
    let names: Vec<&str> = engines.iter().map(|e| e.name()).collect();
    match format {
        Format::Json => {
            let by_engine: serde_json::Map<String, serde_json::Value> = results
                .iter()
                .map(|(e, p)| (e.name().to_string(), serde_json::to_value(p).expect("serializes")))
                .collect();
            let report = serde_json::json!({
                "tuple": m.to_string(),
                "match": first_diff.is_none(),
                "first_difference": first_diff,
                "results": by_engine,
            });
            println!("{report}");
        }
        Format::Text | Format::Csv => match first_diff {
            None => {
                println!("MATCH H({m}) engines={}", names.join(","));
                println!("{}", render(reference, Format::Json));
            }
            Some(g) => {
                println!("MISMATCH H({m}) first differing genus {g}");
                let width = results.iter().map(|(_, p)| p.coeffs().len()).max().unwrap_or(0);
                println!("genus,{}", names.join(","));
                for i in 0..width {
                    let row: Vec<String> = results.iter().map(|(_, p)| p.coeff(i).to_string()).collect();
                    let mark = if results.iter().any(|(_, p)| p.coeff(i) != reference.coeff(i)) { " *" } else { "" };
                    println!("{i},{}{mark}", row.join(","));
                }
            }
        },
    }
    if first_diff.is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Dist { m, engine, format, run } => match run_engine(engine.into(), &m, &run) {
            Ok(p) => {
                println!("{}", render(&p, format));
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Crosscheck { m, engines, format, run } => {
            let mut list: Vec<Engine> = Vec::new();
            for e in engines {
                if !list.contains(&e.into()) {
                    list.push(e.into());
                }
            }
            crosscheck(&m, &list, format, &run)
        }
        Command::Closed { m, genus } => match recurrence::closed_form_eps(&m, genus) {
            Ok(v) => {
                println!("{v}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Canon { m } => {
            println!("{}", m.canonicalize());
            ExitCode::SUCCESS
        }
        Command::Series { m, trunc } => {
            if m.k() < 2 {
                return fail(Error::Unsupported("series tables need k >= 2".into()));
            }
            let hi: Vec<i64> = match trunc {
                Some(n) => vec![n; m.k()],
                None => m.as_slice().iter().map(|&x| i64::from(x)).collect(),
            };
            match genfun::bundle(&Truncation::for_table(&hi)) {
                Ok(b) => {
                    println!("{}", serde_json::to_string(&b.e1.coefficient_table()).expect("serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Graph { m, tree } => {
            let strategy = match tree {
                TreeArg::Bfs => TreeStrategy::BfsFromStart,
                TreeArg::Dfs => TreeStrategy::DfsFromEnd,
            };
            match EmbeddedGraph::build_with_tree(&m.normalize_tail(), strategy) {
                Ok(g) => {
                    println!("{}", g.to_json());
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
