// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end.
//!
//! Solver subcommands print one JSON object. Exit codes: 0 on success, 2 when
//! no finite embedding exists or the optimum is below `--min-weight`, 1 on
//! input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::embedding::Embedding;
use crate::generate::{random_scheme, random_tree};
use crate::matching::{solve_all_deletions, solve_mwm, MatchingInstance, Side};
use crate::oracle::{oracle_best, OracleMode};
use crate::rooted::compute_tables;
use crate::tree::LabeledTree;
use crate::unrooted::{lawecse_unrooted_with_root, naive_unrooted_with_stats, SolveStats};
use crate::weights::WeightScheme;

#[derive(Debug, Parser)]
#[command(
    name = "lawecse",
    version,
    about = "Largest weight common subtree embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best embedding between the two trees, each rooted at a given vertex.
    Rooted(RootedArgs),
    /// Best embedding that maps the first root onto the second.
    RootToRoot(RootedArgs),
    /// Best embedding between the unrooted trees.
    Unrooted(UnrootedArgs),
    /// Exhaustive search on small trees.
    Oracle(OracleArgs),
    /// Maximum weight matching of a matrix read from standard input.
    Matching(MatchingArgs),
    /// Timing and work counters on random trees, as CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub tree1: PathBuf,
    #[arg(long)]
    pub tree2: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    /// Exit with code 2 if the optimum is below this weight.
    #[arg(long, allow_hyphen_values = true)]
    pub min_weight: Option<f64>,
    /// Leave out the mapping and the skipped vertices.
    #[arg(long)]
    pub no_mapping: bool,
}

#[derive(Debug, Args)]
pub struct RootedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Root of the first tree; defaults to its first vertex.
    #[arg(long)]
    pub root1: Option<String>,
    /// Root of the second tree; defaults to its first vertex.
    #[arg(long)]
    pub root2: Option<String>,
}

#[derive(Debug, Args)]
pub struct UnrootedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Run one rooted computation per pair of roots instead.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Rooted,
    RootToRoot,
    Unrooted,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "unrooted")]
    pub mode: OracleKind,
    #[arg(long)]
    pub root1: Option<String>,
    #[arg(long)]
    pub root2: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct MatchingArgs {
    /// Also report the optimum after deleting each vertex of this side.
    #[arg(long, value_enum)]
    pub deletions: Option<SideArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Opt,
    Naive,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma separated tree sizes.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..))]
    pub max_degree: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "opt")]
    pub algo: Algo,
    /// Leave the wall_ms column empty so output is reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut io::stdin().lock(), &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn run(cli: Cli, input: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Rooted(a) => solve_rooted(a, false, out),
        Command::RootToRoot(a) => solve_rooted(a, true, out),
        Command::Unrooted(a) => solve_unrooted(a, out),
        Command::Oracle(a) => solve_oracle(a, out),
        Command::Matching(a) => matching(a, input, out),
        Command::Bench(a) => bench(a, out),
    }
}

struct Inputs {
    t1: LabeledTree,
    t2: LabeledTree,
    scheme: WeightScheme,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(a: &InputArgs) -> Result<Inputs> {
    let t1 = LabeledTree::parse(&read(&a.tree1)?).with_context(|| a.tree1.display().to_string())?;
    let t2 = LabeledTree::parse(&read(&a.tree2)?).with_context(|| a.tree2.display().to_string())?;
    let scheme =
        WeightScheme::parse(&read(&a.weights)?).with_context(|| a.weights.display().to_string())?;
    Ok(Inputs { t1, t2, scheme })
}

fn vertex(t: &LabeledTree, id: Option<&str>, which: &str) -> Result<usize> {
    match id {
        None => Ok(0),
        Some(id) => match t.index_of(id) {
            Some(v) => Ok(v),
            None => bail!("{which}: unknown vertex {id:?}"),
        },
    }
}

/// Rounds to 12 significant digits; infinities become strings.
pub fn weight_json(w: f64) -> Value {
    if w == f64::NEG_INFINITY {
        json!("-inf")
    } else if w == f64::INFINITY {
        json!("inf")
    } else {
        let r: f64 = format!("{w:.11e}").parse().expect("formatted float parses");
        json!(r)
    }
}

fn emit(
    mode: &str,
    inputs: &Inputs,
    emb: Option<&Embedding>,
    stats: SolveStats,
    args: &InputArgs,
    out: &mut dyn Write,
) -> Result<i32> {
    let (t1, t2) = (&inputs.t1, &inputs.t2);
    let weight = emb.map_or(f64::NEG_INFINITY, |e| e.weight);
    let (status, code) = match (emb, args.min_weight) {
        (None, _) => ("infeasible", 2),
        (Some(_), Some(m)) if weight < m => ("below-min-weight", 2),
        _ => ("ok", 0),
    };
    let mut obj = json!({
        "mode": mode,
        "status": status,
        "weight": weight_json(weight),
        "stats": {
            "table_entries": stats.table_entries,
            "matching_solves": stats.matching_solves,
        },
    });
    if let Some(e) = emb {
        if let Some((r, s)) = e.roots {
            obj["roots"] = json!({"tree1": t1.id(r), "tree2": t2.id(s)});
        }
        if !args.no_mapping {
            let ids1: Vec<&str> = e.skipped1.iter().map(|&v| t1.id(v)).collect();
            let ids2: Vec<&str> = e.skipped2.iter().map(|&v| t2.id(v)).collect();
            obj["mapping"] = e
                .pairs
                .iter()
                .map(|&(a, b)| json!([t1.id(a), t2.id(b)]))
                .collect();
            obj["skipped"] = ids1.iter().chain(&ids2).map(|s| json!(s)).collect();
            obj["skipped_by_tree"] = json!({"tree1": ids1, "tree2": ids2});
        }
    } else if !args.no_mapping {
        obj["mapping"] = json!([]);
        obj["skipped"] = json!([]);
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&obj)?)?;
    Ok(code)
}

fn solve_rooted(a: RootedArgs, forced: bool, out: &mut dyn Write) -> Result<i32> {
    let inputs = load(&a.input)?;
    let r = vertex(&inputs.t1, a.root1.as_deref(), "--root1")?;
    let s = vertex(&inputs.t2, a.root2.as_deref(), "--root2")?;
    let (v1, v2) = (inputs.t1.root_at_index(r), inputs.t2.root_at_index(s));
    let table = compute_tables(&v1, &v2, &inputs.scheme);
    let emb = if forced {
        table.traceback((r, s)).ok()
    } else {
        table
            .best_pair()
            .map(|p| table.traceback(p).expect("best entry is finite"))
    };
    let stats = SolveStats {
        table_entries: table.table_entries(),
        matching_solves: table.matching_solves(),
        ..SolveStats::default()
    };
    let mode = if forced { "root-to-root" } else { "rooted" };
    emit(mode, &inputs, emb.as_ref(), stats, &a.input, out)
}

fn solve_unrooted(a: UnrootedArgs, out: &mut dyn Write) -> Result<i32> {
    let inputs = load(&a.input)?;
    let (emb, stats) = if a.naive {
        naive_unrooted_with_stats(&inputs.t1, &inputs.t2, &inputs.scheme)
    } else {
        lawecse_unrooted_with_root(&inputs.t1, 0, &inputs.t2, &inputs.scheme)
    };
    emit("unrooted", &inputs, emb.as_ref(), stats, &a.input, out)
}

fn solve_oracle(a: OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let inputs = load(&a.input)?;
    let r = vertex(&inputs.t1, a.root1.as_deref(), "--root1")?;
    let s = vertex(&inputs.t2, a.root2.as_deref(), "--root2")?;
    let (mode, name) = match a.mode {
        OracleKind::Rooted => (OracleMode::Rooted(r, s), "oracle-rooted"),
        OracleKind::RootToRoot => (OracleMode::RootToRoot(r, s), "oracle-root-to-root"),
        OracleKind::Unrooted => (OracleMode::Unrooted, "oracle-unrooted"),
    };
    let emb = oracle_best(&inputs.t1, &inputs.t2, &inputs.scheme, mode)?;
    emit(
        name,
        &inputs,
        emb.as_ref(),
        SolveStats::default(),
        &a.input,
        out,
    )
}

/// Whitespace separated matrix, one row per line; `inf`/`-inf` allowed,
/// `#` starts a comment.
pub fn parse_matrix(text: &str) -> Result<MatchingInstance> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| match tok {
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => match tok.parse::<f64>() {
                    Ok(w) if w.is_finite() => Ok(w),
                    _ => bail!("line {}: bad matrix entry {tok:?}", i + 1),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                bail!(
                    "line {}: expected {} entries, found {}",
                    i + 1,
                    first.len(),
                    row.len()
                );
            }
        }
        rows.push(row);
    }
    Ok(MatchingInstance::from_rows(&rows))
}

fn matching(a: MatchingArgs, input: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .context("cannot read standard input")?;
    let inst = parse_matrix(&text)?;
    let m = solve_mwm(&inst);
    let mut obj = json!({
        "rows": inst.rows(),
        "cols": inst.cols(),
        "weight": weight_json(m.weight),
        "pairs": m.pairs,
    });
    if let Some(side) = a.deletions {
        let side = match side {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        };
        let fam = solve_all_deletions(&inst, side);
        obj["deletions"] = fam.per_deleted.iter().map(|&w| weight_json(w)).collect();
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&obj)?)?;
    Ok(0)
}

const BENCH_VERTEX_LABELS: [&str; 3] = ["A", "B", "C"];
const BENCH_EDGE_LABELS: [&str; 2] = ["x", "y"];

fn bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    if a.sizes.contains(&0) {
        bail!("--sizes: sizes must be positive");
    }
    let cap = a.max_degree as usize;
    let algo = match a.algo {
        Algo::Opt => "opt",
        Algo::Naive => "naive",
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    writeln!(
        out,
        "size_T,size_T2,degree_cap,algo,trial,weight,work,matching_solves,wall_ms"
    )?;
    for &n in &a.sizes {
        for trial in 0..a.trials {
            let t1 = random_tree(&mut rng, n, cap, &BENCH_VERTEX_LABELS, &BENCH_EDGE_LABELS);
            let t2 = random_tree(&mut rng, n, cap, &BENCH_VERTEX_LABELS, &BENCH_EDGE_LABELS);
            let scheme =
                random_scheme(&mut rng, &BENCH_VERTEX_LABELS, &BENCH_EDGE_LABELS, 0.1, 0.3);
            let start = Instant::now();
            let (emb, stats) = match a.algo {
                Algo::Opt => lawecse_unrooted_with_root(&t1, 0, &t2, &scheme),
                Algo::Naive => naive_unrooted_with_stats(&t1, &t2, &scheme),
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let weight = weight_json(emb.map_or(f64::NEG_INFINITY, |e| e.weight));
            let weight = weight
                .as_str()
                .map_or_else(|| weight.to_string(), str::to_string);
            let wall = if a.no_timing {
                String::new()
            } else {
                format!("{ms:.3}")
            };
            writeln!(
                out,
                "{n},{n},{cap},{algo},{trial},{weight},{},{},{wall}",
                stats.work, stats.matching_solves
            )?;
        }
    }
    Ok(0)
}
