// Copyright 2026 The profp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use profp::bench::{
    bench_database, run_sweep, write_csv, BenchError, BenchSettings, Origin, Sweep,
};
use profp::miner::{itemset_support_pdf, write_tsv, MineError};
use profp::model::format_probability;
use profp::{
    build_tree, generate_synthetic, mine, parse_database, serialize_database, Algorithm, GenParams,
    MinSupport, MiningConfig, UncertainDatabase,
};

#[derive(Parser)]
#[command(
    name = "profp",
    version,
    about = "Probabilistic frequent itemset mining"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine probabilistic frequent itemsets and print them as TSV.
    Mine(MineArgs),
    /// Print the support distribution of one itemset.
    Spdf(SpdfArgs),
    /// Generate a synthetic uncertain database.
    Gen(GenArgs),
    /// Print tree and lookup-table sizes for a database.
    Stats(StatsArgs),
    /// Time the engines over a parameter sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Profp,
    Apriori,
    Bruteforce,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Algorithm {
        match a {
            Algo::Profp => Algorithm::ProFp,
            Algo::Apriori => Algorithm::Apriori,
            Algo::Bruteforce => Algorithm::BruteForce,
        }
    }
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    /// Minimum support. An integer is an absolute count; a value with a
    /// decimal point is a fraction in (0, 1) of the number of transactions
    /// N and becomes ceil(fraction * N), at least 1.
    #[arg(long)]
    minsup: String,
    /// Frequentness threshold in (0, 1]; an itemset is reported when
    /// P(support >= minsup) >= tau.
    #[arg(long)]
    tau: f64,
    #[arg(long, value_enum, default_value = "profp")]
    algo: Algo,
    /// Keep infrequent single items in the tree.
    #[arg(long)]
    no_prescan: bool,
    /// Fold in every uncertain transaction before deciding frequentness.
    #[arg(long)]
    no_early_stop: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Largest number of uncertain transactions the brute-force engine
    /// will enumerate for one itemset.
    #[arg(long, default_value_t = 20)]
    oracle_budget: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpdfArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated item labels, e.g. A,D.
    #[arg(long)]
    itemset: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    transactions: usize,
    #[arg(long)]
    items: usize,
    /// Probability that an item is absent from a transaction.
    #[arg(long)]
    p0: f64,
    /// Probability that an item is present for certain.
    #[arg(long)]
    p1: f64,
    /// Seed for the ChaCha8 generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepArg {
    Transactions,
    Items,
    Minsup,
    Certainty,
    Uncertainty,
}

impl From<SweepArg> for Sweep {
    fn from(s: SweepArg) -> Sweep {
        match s {
            SweepArg::Transactions => Sweep::Transactions,
            SweepArg::Items => Sweep::Items,
            SweepArg::Minsup => Sweep::MinSup,
            SweepArg::Certainty => Sweep::Certainty,
            SweepArg::Uncertainty => Sweep::Uncertainty,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark one database file instead of a synthetic sweep.
    #[arg(long, conflicts_with_all = ["sweep", "values"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "transactions")]
    sweep: SweepArg,
    /// Comma-separated sweep values; each sweep has its own defaults.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    transactions: usize,
    #[arg(long, default_value_t = 20)]
    items: usize,
    #[arg(long, default_value_t = 0.5)]
    p0: f64,
    #[arg(long, default_value_t = 0.2)]
    p1: f64,
    /// Share of uncertain cells kept fixed by the certainty sweep.
    #[arg(long, default_value_t = 0.3)]
    uncertain: f64,
    /// Minimum support, absolute or fractional as for `mine`.
    #[arg(long, default_value = "0.1")]
    minsup: String,
    #[arg(long, default_value_t = 0.9)]
    tau: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "profp,apriori"
    )]
    engines: Vec<Algo>,
    /// Build and measure the tree only; no engine is run.
    #[arg(long)]
    tree_only: bool,
    /// Report the fastest of this many runs.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Config(String),
    Oracle(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Config(_) => 2,
            Failure::Oracle(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Config(m) | Failure::Oracle(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<MineError> for Failure {
    fn from(e: MineError) -> Failure {
        match e {
            MineError::InvalidConfig(_) => Failure::Config(e.to_string()),
            MineError::Oracle(_) => Failure::Oracle(e.to_string()),
            MineError::Extraction(_) => Failure::Input(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Failure {
        match e {
            BenchError::Mine(m) => m.into(),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn read_db(path: &Path) -> Result<UncertainDatabase, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_database(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_minsup(s: &str) -> Result<MinSupport, Failure> {
    s.parse().map_err(Failure::Config)
}

fn cmd_mine(args: MineArgs) -> Result<(), Failure> {
    let min_sup = parse_minsup(&args.minsup)?;
    let db = read_db(&args.input)?;
    let mut cfg =
        MiningConfig::new(min_sup.resolve(db.len()), args.tau).with_algorithm(args.algo.into());
    cfg.prescan = !args.no_prescan;
    cfg.early_stop = !args.no_early_stop;
    cfg.threads = args.threads;
    cfg.oracle_budget.max_uncertain_entries = args.oracle_budget;
    cfg.validate()?;

    let start = Instant::now();
    let outcome = mine(&db, &cfg)?;
    let wall = start.elapsed();

    let mut out = open_output(args.output.as_deref())?;
    write_tsv(&mut out, &db, &outcome.results)?;
    out.flush()?;
    eprintln!(
        "{} PFIs, min_sup {}, {:.3} ms, {} early stops",
        outcome.results.len(),
        cfg.min_sup,
        wall.as_secs_f64() * 1e3,
        outcome.stats.early_stops.len()
    );
    Ok(())
}

fn cmd_spdf(args: SpdfArgs) -> Result<(), Failure> {
    let labels: Vec<&str> = args.itemset.split(',').map(str::trim).collect();
    if labels.iter().any(|l| l.is_empty()) {
        return Err(Failure::Config(format!(
            "malformed itemset {:?}",
            args.itemset
        )));
    }
    let db = read_db(&args.input)?;
    let pdf = match db.itemset(&labels) {
        Some(itemset) => {
            let tree = build_tree(&db);
            itemset_support_pdf(&tree, &itemset).map_err(|e| Failure::Input(e.to_string()))?
        }
        // an unknown item is never contained, so the support is 0
        None => profp::SupportPdf::new(0, vec![1.0]),
    };
    let mut out = open_output(args.output.as_deref())?;
    for (support, p) in pdf.iter() {
        writeln!(out, "{support}\t{}", format_probability(p))?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let params = GenParams {
        n_transactions: args.transactions,
        n_items: args.items,
        p0: args.p0,
        p1: args.p1,
        seed: args.seed,
    };
    let db = generate_synthetic(&params).map_err(|e| Failure::Config(e.to_string()))?;
    let mut out = open_output(args.output.as_deref())?;
    writeln!(
        out,
        "# profp gen transactions={} items={} p0={} p1={} seed={}",
        args.transactions, args.items, args.p0, args.p1, args.seed
    )?;
    out.write_all(serialize_database(&db).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), Failure> {
    let db = read_db(&args.input)?;
    let tree = build_tree(&db);
    let stats = tree.stats();
    let mut out = io::stdout().lock();
    writeln!(out, "transactions\t{}", db.len())?;
    writeln!(out, "items\t{}", db.items().len())?;
    writeln!(out, "entries\t{}", db.entry_count())?;
    writeln!(out, "uncertain_entries\t{}", db.uncertain_entry_count())?;
    writeln!(out, "tree_nodes\t{}", stats.node_count)?;
    writeln!(out, "tree_height\t{}", tree.height())?;
    writeln!(out, "uft_entries\t{}", stats.uft_entries)?;
    writeln!(out, "ufp_entries\t{}", stats.ufp_entries)?;
    writeln!(out, "lookup_size\t{}", tree.lookup().len())?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let min_sup = parse_minsup(&args.minsup)?;
    let settings = BenchSettings {
        transactions: args.transactions,
        items: args.items,
        p0: args.p0,
        p1: args.p1,
        uncertain: args.uncertain,
        min_sup,
        tau: args.tau,
        seed: args.seed,
        engines: if args.tree_only {
            Vec::new()
        } else {
            args.engines.iter().map(|&a| a.into()).collect()
        },
        repeats: args.repeats,
        threads: args.threads,
    };
    let rows = match &args.input {
        Some(path) => {
            let db = read_db(path)?;
            let origin = Origin {
                sweep: "file",
                value: db.len() as f64,
                p0: None,
                p1: None,
            };
            bench_database(&db, origin, min_sup, &settings)?
        }
        None => {
            let sweep: Sweep = args.sweep.into();
            let values = args
                .values
                .clone()
                .unwrap_or_else(|| sweep.default_values());
            run_sweep(sweep, &values, &settings)?
        }
    };
    let out = open_output(args.output.as_deref())?;
    write_csv(out, &rows).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Spdf(a) => cmd_spdf(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("profp: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
