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

//! Benchmark sweeps over synthetic databases. Each point times the tree
//! build and every requested engine and reports tree sizes, so the output
//! can be plotted directly.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::miner::{mine, Algorithm, MinSupport, MineError, MiningConfig};
use crate::model::{generate_synthetic, DbError, GenParams, UncertainDatabase};
use crate::tree::build_tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Number of transactions.
    Transactions,
    /// Number of items.
    Items,
    /// Fractional minimum support.
    MinSup,
    /// P1 with the uncertain share held fixed; P0 takes the rest.
    Certainty,
    /// P0 with P1 held fixed.
    Uncertainty,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::Transactions => "transactions",
            Sweep::Items => "items",
            Sweep::MinSup => "minsup",
            Sweep::Certainty => "certainty",
            Sweep::Uncertainty => "uncertainty",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            Sweep::Transactions => vec![1000.0, 2000.0, 4000.0, 8000.0],
            Sweep::Items => vec![5.0, 10.0, 15.0, 20.0, 25.0],
            Sweep::MinSup => vec![0.05, 0.1, 0.2, 0.3, 0.4],
            Sweep::Certainty => tenths(0..=7),
            Sweep::Uncertainty => tenths(0..=8).into_iter().rev().collect(),
        }
    }
}

fn tenths(range: std::ops::RangeInclusive<u32>) -> Vec<f64> {
    range.map(|k| k as f64 / 10.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSettings {
    pub transactions: usize,
    pub items: usize,
    pub p0: f64,
    pub p1: f64,
    /// Share of uncertain cells held fixed by the certainty sweep.
    pub uncertain: f64,
    pub min_sup: MinSupport,
    pub tau: f64,
    pub seed: u64,
    /// Engines to time. When empty only the tree is built and measured.
    pub engines: Vec<Algorithm>,
    /// Timings are the minimum over this many runs.
    pub repeats: usize,
    pub threads: usize,
}

impl Default for BenchSettings {
    fn default() -> Self {
        BenchSettings {
            transactions: 1000,
            items: 20,
            p0: 0.5,
            p1: 0.2,
            uncertain: 0.3,
            min_sup: MinSupport::Fraction {
                numerator: 1,
                denominator: 10,
            },
            tau: 0.9,
            seed: 7,
            engines: vec![Algorithm::ProFp, Algorithm::Apriori],
            repeats: 1,
            threads: 1,
        }
    }
}

/// One CSV row: a database, an engine, and what it cost.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub sweep: String,
    pub value: f64,
    pub transactions: usize,
    pub items: usize,
    pub p0: Option<f64>,
    pub p1: Option<f64>,
    pub minsup: u64,
    pub tau: f64,
    pub engine: String,
    pub wall_ms: Option<f64>,
    pub build_ms: f64,
    pub tree_nodes: usize,
    pub uft: usize,
    pub ufp: usize,
    pub lookup_size: usize,
    pub pfi_count: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Params(#[from] DbError),
    #[error(transparent)]
    Mine(#[from] MineError),
    #[error("invalid sweep value {value} for {sweep}: {reason}")]
    Value {
        sweep: &'static str,
        value: f64,
        reason: String,
    },
}

pub fn engine_name(algorithm: Algorithm) -> &'static str {
    match algorithm {
        Algorithm::ProFp => "profp",
        Algorithm::Apriori => "apriori",
        Algorithm::BruteForce => "bruteforce",
    }
}

/// Where a database came from, for the descriptive CSV columns.
#[derive(Clone, Copy, Debug)]
pub struct Origin<'a> {
    pub sweep: &'a str,
    pub value: f64,
    pub p0: Option<f64>,
    pub p1: Option<f64>,
}

fn min_time<T>(repeats: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = None;
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        best = Some(best.map_or(elapsed, |b: Duration| b.min(elapsed)));
        last = Some(out);
    }
    (best.unwrap(), last.unwrap())
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Times every engine of `settings` on `db`, one row each, or a single
/// `none` row with tree sizes only when no engine is selected. An empty
/// database gives no rows.
pub fn bench_database(
    db: &UncertainDatabase,
    origin: Origin<'_>,
    min_sup: MinSupport,
    settings: &BenchSettings,
) -> Result<Vec<BenchRow>, BenchError> {
    if db.is_empty() {
        return Ok(Vec::new());
    }
    let (build, tree) = min_time(settings.repeats, || build_tree(db));
    let stats = tree.stats();
    let lookup_size = tree.lookup().len();
    drop(tree);

    let min_sup = min_sup.resolve(db.len());
    let row = |engine: &str, wall: Option<Duration>, pfis: Option<usize>| BenchRow {
        sweep: origin.sweep.to_string(),
        value: origin.value,
        transactions: db.len(),
        items: db.items().len(),
        p0: origin.p0,
        p1: origin.p1,
        minsup: min_sup,
        tau: settings.tau,
        engine: engine.to_string(),
        wall_ms: wall.map(ms),
        build_ms: ms(build),
        tree_nodes: stats.node_count,
        uft: stats.uft_entries,
        ufp: stats.ufp_entries,
        lookup_size,
        pfi_count: pfis,
    };
    if settings.engines.is_empty() {
        return Ok(vec![row("none", None, None)]);
    }
    let mut rows = Vec::with_capacity(settings.engines.len());
    for &engine in &settings.engines {
        let mut cfg = MiningConfig::new(min_sup, settings.tau).with_algorithm(engine);
        cfg.threads = settings.threads;
        let (wall, outcome) = min_time(settings.repeats, || mine(db, &cfg));
        rows.push(row(
            engine_name(engine),
            Some(wall),
            Some(outcome?.results.len()),
        ));
    }
    Ok(rows)
}

/// Generator parameters and minimum support for one sweep point.
pub fn sweep_point(
    sweep: Sweep,
    value: f64,
    settings: &BenchSettings,
) -> Result<(GenParams, MinSupport), BenchError> {
    let bad = |reason: &str| BenchError::Value {
        sweep: sweep.name(),
        value,
        reason: reason.to_string(),
    };
    let count = |v: f64| {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(bad("expected a non-negative integer"))
        }
    };
    let mut params = GenParams {
        n_transactions: settings.transactions,
        n_items: settings.items,
        p0: settings.p0,
        p1: settings.p1,
        seed: settings.seed,
    };
    let mut min_sup = settings.min_sup;
    match sweep {
        Sweep::Transactions => params.n_transactions = count(value)?,
        Sweep::Items => params.n_items = count(value)?,
        Sweep::MinSup => min_sup = value.to_string().parse().map_err(|e: String| bad(&e))?,
        Sweep::Certainty => {
            params.p1 = value;
            params.p0 = clean(1.0 - settings.uncertain - value);
            if params.p0 < 0.0 {
                return Err(bad("p1 exceeds the certain share"));
            }
        }
        Sweep::Uncertainty => params.p0 = value,
    }
    params.validate()?;
    Ok((params, min_sup))
}

/// Rounds away decimal noise such as 1 - 0.3 - 0.1 = 0.6000000000000001.
fn clean(p: f64) -> f64 {
    (p * 1e12).round() / 1e12
}

/// Generates and times every point of a sweep.
pub fn run_sweep(
    sweep: Sweep,
    values: &[f64],
    settings: &BenchSettings,
) -> Result<Vec<BenchRow>, BenchError> {
    let mut rows = Vec::new();
    for &value in values {
        let (params, min_sup) = sweep_point(sweep, value, settings)?;
        let db = generate_synthetic(&params)?;
        let origin = Origin {
            sweep: sweep.name(),
            value,
            p0: Some(params.p0),
            p1: Some(params.p1),
        };
        rows.extend(bench_database(&db, origin, min_sup, settings)?);
    }
    Ok(rows)
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[BenchRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 16] = [
    "sweep",
    "value",
    "transactions",
    "items",
    "p0",
    "p1",
    "minsup",
    "tau",
    "engine",
    "wall_ms",
    "build_ms",
    "tree_nodes",
    "uft",
    "ufp",
    "lookup_size",
    "pfi_count",
];
