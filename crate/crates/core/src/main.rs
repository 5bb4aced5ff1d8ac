//! Command-line front end: build and query indexes from files, verify
//! against the brute-force model, benchmark with comparison accounting,
//! and generate adversarial lower-bound instances.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input
//! errors, 3 internal assertion (including any query-time oracle call).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::panic::AssertUnwindSafe;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pathmin::adversary::{
    check_distinguishability, check_distinguishability_height_two, generate_instance,
    height_two_instance, info_lower_bound, parameter_choice, AdversarialInstance, WeightChoice,
};
use pathmin::generate::{random_tree_with_height, shaped_tree, TreeShape};
use pathmin::oracle::CountingOracle;
use pathmin::reference::BruteForceModel;
use pathmin::tree::{format_tree, parse_tree};
use pathmin::{CompOrder, IntWeightOracle, PathMinIndex, QueryResult, RootedTree};

type CliError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(
    name = "pathmin",
    about = "Leaf-to-ancestor path-minimum index in the comparison-oracle model",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a tree file and answer queries from a file.
    ///
    /// Queries are lines `v l`; each response line is either `EMPTY` or
    /// `m pm` where `m` is the minimum node and `pm` its parent.
    Query {
        /// Tree file: `n root` header, then `u v w` edges.
        tree: PathBuf,
        /// Query file: one `v l` pair per line.
        queries: PathBuf,
    },
    /// Check index answers against the brute-force model.
    Verify {
        /// Verify this tree file instead of random trees.
        #[arg(long, conflicts_with_all = ["n", "height"])]
        tree: Option<PathBuf>,
        /// Number of nodes for random trees.
        #[arg(long)]
        n: Option<usize>,
        /// Exact height for random trees.
        #[arg(long)]
        height: Option<usize>,
        /// Base seed; defaults to $PATHMIN_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of random trees to check.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Checked (v, l) pairs per tree when exhaustive checking is too
        /// large (n > 300).
        #[arg(long, default_value_t = 20_000)]
        sample: usize,
        /// Damage one stored minimum after building, to prove the
        /// harness catches mismatches.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Measure preprocessing cost and query latency; emit CSV.
    Bench {
        /// Comma-separated shapes: path, star, random, caterpillar, binary.
        #[arg(long, value_delimiter = ',', default_values_t = TreeShape::ALL)]
        shapes: Vec<TreeShape>,
        /// Comma-separated node counts.
        #[arg(long, value_delimiter = ',', default_values_t = vec![256usize, 1024, 4096])]
        sizes: Vec<usize>,
        /// Base seed; defaults to $PATHMIN_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Timed queries per instance.
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Zero the wall-clock columns so identical seeds and flags
        /// produce byte-identical CSV.
        #[arg(long)]
        deterministic: bool,
    },
    /// Generate an adversarial instance; optionally run the counting check.
    Adversary {
        /// Spine length of one copy.
        #[arg(long)]
        x: Option<usize>,
        /// Number of weight-disjoint copies.
        #[arg(long, requires = "x")]
        q: Option<usize>,
        /// Derive x and q from a node budget (requires --height).
        #[arg(long, conflicts_with = "x", requires = "height")]
        n: Option<usize>,
        /// Height budget for --n.
        #[arg(long)]
        height: Option<usize>,
        /// Generate the height-two family with this many subtrees instead.
        #[arg(long, conflicts_with_all = ["x", "n"])]
        height_two: Option<usize>,
        /// Leaf interval choices: every leaf below the spine, or every
        /// leaf in its deepest admissible interval.
        #[arg(long, default_value = "max", value_parser = ["below", "max"])]
        choice: String,
        /// Pad with huge-valued leaves under the root to exactly this
        /// many nodes.
        #[arg(long)]
        pad_to: Option<usize>,
        /// Enumerate all weight choices and verify the answer-vector count.
        #[arg(long)]
        check: bool,
        /// Write the tree file here (otherwise stdout, report to stderr).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(AssertUnwindSafe(|| run(cli))) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
        // The panic hook has already printed the message.
        Err(_) => ExitCode::from(3),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Query { tree, queries } => cmd_query(&tree, &queries),
        Command::Verify {
            tree,
            n,
            height,
            seed,
            trials,
            sample,
            corrupt,
        } => cmd_verify(tree, n, height, resolve_seed(seed), trials, sample, corrupt),
        Command::Bench {
            shapes,
            sizes,
            seed,
            queries,
            csv,
            deterministic,
        } => cmd_bench(&shapes, &sizes, resolve_seed(seed), queries, csv, deterministic),
        Command::Adversary {
            x,
            q,
            n,
            height,
            height_two,
            choice,
            pad_to,
            check,
            out,
        } => cmd_adversary(x, q, n, height, height_two, &choice, pad_to, check, out),
    }
}

/// Explicit flag, then $PATHMIN_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("PATHMIN_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn cmd_query(tree_path: &PathBuf, queries_path: &PathBuf) -> Result<u8, CliError> {
    let (tree, oracle) = parse_tree(&read_file(tree_path)?)
        .map_err(|e| format!("{}: {e}", tree_path.display()))?;
    let counting = CountingOracle::new(&oracle);
    let index = PathMinIndex::build(tree, &counting);
    let guard = counting.snapshot();

    let text = read_file(queries_path)?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (v, l) = match (fields.next(), fields.next(), fields.next()) {
            (Some(v), Some(l), None) => {
                let v: usize = v.parse().map_err(|e| {
                    format!("{}: line {line_no}: bad node {v:?}: {e}", queries_path.display())
                })?;
                let l: usize = l.parse().map_err(|e| {
                    format!("{}: line {line_no}: bad hop count {l:?}: {e}", queries_path.display())
                })?;
                (v, l)
            }
            _ => {
                return Err(format!(
                    "{}: line {line_no}: expected `v l`, got {line:?}",
                    queries_path.display()
                )
                .into())
            }
        };
        match index.query(v, l) {
            Ok(QueryResult::Empty) => writeln!(out, "EMPTY")?,
            Ok(QueryResult::Min(m)) => {
                let pm = index.tree().parent(m).expect("minimum is never the root");
                writeln!(out, "{m} {pm}")?;
            }
            Err(e) => {
                out.flush()?;
                return Err(format!("{}: line {line_no}: {e}", queries_path.display()).into());
            }
        }
    }
    out.flush()?;
    assert!(
        counting.no_calls_since(guard),
        "oracle was consulted at query time"
    );
    Ok(0)
}

struct VerifyOutcome {
    pairs: u64,
    mismatch: Option<(usize, usize, QueryResult, QueryResult)>,
}

/// Compare every (or a sample of) valid (v, l) against the brute-force
/// model; panics if any query consults the oracle.
fn verify_tree(
    tree: &RootedTree,
    oracle: &IntWeightOracle,
    sample: usize,
    seed: u64,
    corrupt: bool,
) -> VerifyOutcome {
    let counting = CountingOracle::new(oracle);
    let mut index = PathMinIndex::build(tree.clone(), &counting);
    if corrupt {
        index.corrupt_one_stored_minimum();
    }
    let guard = counting.snapshot();
    let comp = CompOrder::new(oracle, tree.root());
    let model = BruteForceModel::new(tree, &comp);
    let n = tree.len();

    fn check_node(
        v: usize,
        index: &PathMinIndex,
        model: &BruteForceModel<'_>,
        pairs: &mut u64,
        mismatch: &mut Option<(usize, usize, QueryResult, QueryResult)>,
    ) {
        let mins = model.all_path_mins(v);
        for l in 0..=index.tree().depth(v) {
            let expected = if l == 0 {
                QueryResult::Empty
            } else {
                QueryResult::Min(mins[l - 1])
            };
            let got = index.query(v, l).expect("valid query");
            *pairs += 1;
            if got != expected && mismatch.is_none() {
                *mismatch = Some((v, l, expected, got));
            }
        }
    }

    let mut pairs = 0u64;
    let mut mismatch: Option<(usize, usize, QueryResult, QueryResult)> = None;
    if n <= 300 {
        for v in 0..n {
            check_node(v, &index, &model, &mut pairs, &mut mismatch);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed1d);
        let target = sample as u64;
        while pairs < target {
            let v = rng.random_range(0..n);
            check_node(v, &index, &model, &mut pairs, &mut mismatch);
        }
    }
    assert!(
        counting.no_calls_since(guard),
        "oracle was consulted at query time"
    );
    VerifyOutcome { pairs, mismatch }
}

fn cmd_verify(
    tree_file: Option<PathBuf>,
    n: Option<usize>,
    height: Option<usize>,
    seed: u64,
    trials: usize,
    sample: usize,
    corrupt: bool,
) -> Result<u8, CliError> {
    let mut total_pairs = 0u64;
    let mut run_one = |label: &str, tree: &RootedTree, oracle: &IntWeightOracle, seed: u64| {
        let outcome = verify_tree(tree, oracle, sample, seed, corrupt);
        total_pairs += outcome.pairs;
        match outcome.mismatch {
            Some((v, l, expected, got)) => {
                println!("FAIL {label}: query ({v}, {l}) expected {expected:?}, got {got:?}");
                false
            }
            None => {
                println!(
                    "{label}: n={} h={} pairs={} ok",
                    tree.len(),
                    tree.height(),
                    outcome.pairs
                );
                true
            }
        }
    };

    if let Some(path) = tree_file {
        let (tree, oracle) =
            parse_tree(&read_file(&path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        if !run_one("tree", &tree, &oracle, seed) {
            return Ok(1);
        }
    } else {
        let n = n.ok_or("--n is required in random mode (or pass --tree FILE)")?;
        let height = height.ok_or("--height is required in random mode")?;
        for trial in 0..trials {
            let trial_seed = seed.wrapping_add(trial as u64);
            let (tree, oracle) =
                random_tree_with_height(n, height, trial_seed).map_err(|e| e.to_string())?;
            let label = format!("trial {}/{trials}", trial + 1);
            if !run_one(&label, &tree, &oracle, trial_seed) {
                return Ok(1);
            }
        }
    }
    println!("PASS: {total_pairs} pairs checked, 0 mismatches, 0 query-time oracle calls");
    Ok(0)
}

fn cmd_bench(
    shapes: &[TreeShape],
    sizes: &[usize],
    seed: u64,
    queries: usize,
    csv: Option<PathBuf>,
    deterministic: bool,
) -> Result<u8, CliError> {
    let mut out = String::new();
    writeln!(
        out,
        "shape,n,h,build_ms,oracle_calls,calls_per_nlogh,queries,avg_query_ns,max_query_ns"
    )?;
    for (shape_idx, &shape) in shapes.iter().enumerate() {
        for &n in sizes {
            let derived = seed ^ ((shape_idx as u64 + 1) << 32) ^ (n as u64);
            let (tree, oracle) = shaped_tree(shape, n, derived).map_err(|e| e.to_string())?;
            let h = tree.height();
            let counting = CountingOracle::new(&oracle);
            let index = PathMinIndex::build(tree, &counting);
            let guard = counting.snapshot();
            let calls = counting.calls();
            let denom = (n as u64) * (h.max(2) as u64).ilog2() as u64;
            let calls_per_nlogh = calls as f64 / denom as f64;

            // Pre-drawn query mix, uniform over nodes then hop counts.
            let mut rng = ChaCha8Rng::seed_from_u64(derived ^ 0xbe7c);
            let plan: Vec<(usize, usize)> = (0..queries)
                .map(|_| {
                    let v = rng.random_range(0..n);
                    let l = rng.random_range(0..=index.tree().depth(v));
                    (v, l)
                })
                .collect();
            let mut max_ns = 0u128;
            let started = Instant::now();
            for &(v, l) in &plan {
                let t = Instant::now();
                let result = index.query(v, l).expect("plan is valid");
                let elapsed = t.elapsed().as_nanos();
                max_ns = max_ns.max(elapsed);
                std::hint::black_box(result);
            }
            let total = started.elapsed();
            assert!(
                counting.no_calls_since(guard),
                "oracle was consulted at query time"
            );

            let (build_ms, avg_ns, max_ns) = if deterministic {
                (0.0, 0.0, 0)
            } else {
                (
                    index.stats().build_time.as_secs_f64() * 1e3,
                    total.as_nanos() as f64 / queries.max(1) as f64,
                    max_ns,
                )
            };
            writeln!(
                out,
                "{shape},{n},{h},{build_ms:.3},{calls},{calls_per_nlogh:.4},{queries},{avg_ns:.1},{max_ns}"
            )?;
        }
    }
    match csv {
        Some(path) => fs::write(&path, out).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{out}"),
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_adversary(
    x: Option<usize>,
    q: Option<usize>,
    n: Option<usize>,
    height: Option<usize>,
    height_two: Option<usize>,
    choice: &str,
    pad_to: Option<usize>,
    check: bool,
    out: Option<PathBuf>,
) -> Result<u8, CliError> {
    let (instance, family): (AdversarialInstance, &str) = if let Some(subtrees) = height_two {
        let bits = vec![choice == "max"; subtrees];
        (
            height_two_instance(subtrees, &bits).map_err(|e| e.to_string())?,
            "height-two",
        )
    } else {
        let (x, q) = match (x, q, n, height) {
            (Some(x), Some(q), _, _) => (x, q),
            (None, _, Some(n), Some(h)) => parameter_choice(n, h).map_err(|e| e.to_string())?,
            _ => return Err("pass --x with --q, or --n with --height, or --height-two".into()),
        };
        let choice = match choice {
            "below" => WeightChoice::all_below(x, q),
            _ => WeightChoice::all_max(x, q),
        };
        (
            generate_instance(x, q, &choice, pad_to).map_err(|e| e.to_string())?,
            "spine",
        )
    };

    let text = format_tree(&instance.tree, &instance.oracle);
    let report_to_stdout = out.is_some();
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    let report = |line: String| {
        if report_to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    report(format!(
        "family={family} x={} q={} nodes={} height={}",
        instance.x,
        instance.q,
        instance.tree.len(),
        instance.tree.height()
    ));

    if check {
        let (result, floor) = if height_two.is_some() {
            let subtrees = instance.q;
            (
                check_distinguishability_height_two(subtrees).map_err(|e| e.to_string())?,
                subtrees as u64,
            )
        } else {
            (
                check_distinguishability(instance.x, instance.q).map_err(|e| e.to_string())?,
                info_lower_bound(instance.x, instance.q),
            )
        };
        report(format!(
            "vectors={} expected={} floor={floor}",
            result.vectors, result.expected
        ));
        let counting = CountingOracle::new(&instance.oracle);
        let index = PathMinIndex::build(instance.tree.clone(), &counting);
        let calls = index.stats().oracle_calls;
        report(format!("preprocess_calls={calls} floor_ok={}", calls >= floor));
        if !result.passed() || calls < floor {
            return Ok(1);
        }
    }
    Ok(0)
}
