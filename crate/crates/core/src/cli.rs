//! The `treedist` command line tool.
//!
//! Exit status is 0 on success, 2 when an input or a metric precondition
//! fails (the message carries the error code and the tree identifier), and
//! 1 when a file cannot be read or output cannot be written.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::run_bench;
use crate::error::TreeDistError;
use crate::generate::{random_trees, RandomSpec};
use crate::metric::{distance_matrix, Metric, MetricOptions};
use crate::newick::{parse, serialize, serialize_all};
use crate::rf::strict_consensus;
use crate::tree::{validate, Tree};

/// Threads used for matrix cells when set to a positive integer.
pub const THREADS_VAR: &str = "TREEDIST_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "treedist",
    version,
    about = "Distances between phylogenetic trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All-pairs distance matrix over every tree in FILE...
    Dist {
        #[arg(long, value_enum)]
        metric: Metric,
        /// Robinson-Foulds length on the trees as given (may be ambiguous
        /// or asymmetric; both are reported).
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Leave pendant edges out of the geodesic.
        #[arg(long)]
        no_pendant: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Random binary trees by sequential leaf insertion.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        rooted: bool,
    },
    /// Parse and check every tree.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Median time of one metric on random pairs of each size.
    Bench {
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repetitions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strict consensus of all trees in FILE.
    Consensus { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn tree(context: &str, e: &TreeDistError) -> Failure {
        Failure::Input(format!("{context}: [{}] {e}", e.code()))
    }

    fn status(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Io(_) => 1,
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn basename(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

/// Trees of every file, named `basename:index`.
fn read_trees(files: &[PathBuf]) -> Result<Vec<(String, Tree)>, Failure> {
    let mut out = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let doc = parse(&text).map_err(|e| Failure::tree(&path.display().to_string(), &e))?;
        let base = basename(path);
        out.extend(
            doc.trees
                .into_iter()
                .enumerate()
                .map(|(i, t)| (format!("{base}:{i}"), t)),
        );
    }
    Ok(out)
}

fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Dist {
            metric,
            raw,
            format,
            no_pendant,
            files,
        } => {
            let trees = read_trees(&files)?;
            let options = MetricOptions {
                raw,
                pendant: !no_pendant,
            };
            let report = thread_pool()
                .install(|| distance_matrix(metric, &trees, options))
                .map_err(|e| Failure::Input(format!("[{}] {e}", e.source_error().code())))?;
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json() + "\n",
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            if format == Format::Csv {
                for d in &report.diagnostics {
                    writeln!(out, "# {d}").map_err(io)?;
                }
            }
        }
        Command::Random {
            n,
            count,
            seed,
            weighted,
            rooted,
        } => {
            let spec = RandomSpec {
                leaves: n,
                rooted,
                weighted,
            };
            let trees = random_trees(spec, count, seed).map_err(|e| Failure::tree("random", &e))?;
            out.write_all(serialize_all(&trees, None).as_bytes())
                .map_err(io)?;
        }
        Command::Validate { files } => {
            let mut bad = 0;
            for (id, t) in read_trees(&files)? {
                let problems = validate(&t);
                if problems.is_empty() {
                    writeln!(
                        out,
                        "{id}: ok, {}, {} leaves, {}, {}",
                        if t.is_rooted() { "rooted" } else { "unrooted" },
                        t.leaf_count(),
                        if t.is_binary() {
                            "binary"
                        } else {
                            "multifurcating"
                        },
                        if t.is_weighted() {
                            "weighted"
                        } else {
                            "unweighted"
                        },
                    )
                    .map_err(io)?;
                } else {
                    bad += 1;
                    for p in problems {
                        writeln!(out, "{id}: {p}").map_err(io)?;
                    }
                }
            }
            if bad > 0 {
                return Err(Failure::Input(format!("{bad} invalid trees")));
            }
        }
        Command::Bench {
            metric,
            sizes,
            repetitions,
            seed,
        } => {
            let rows = run_bench(metric, &sizes, repetitions, seed)
                .map_err(|e| Failure::tree("bench", &e))?;
            writeln!(out, "metric\tleaves\tmedian_ms\tdoubling_ratio").map_err(io)?;
            let mut slow = Vec::new();
            for r in &rows {
                let ratio = r
                    .doubling_ratio
                    .map_or("-".to_owned(), |x| format!("{x:.2}"));
                writeln!(
                    out,
                    "{metric}\t{}\t{:.3}\t{ratio}",
                    r.leaves,
                    r.median.as_secs_f64() * 1e3
                )
                .map_err(io)?;
                if metric == Metric::Rf
                    && r.leaves >= 20_000
                    && r.doubling_ratio.is_some_and(|x| x > 2.5)
                {
                    slow.push(r.leaves);
                }
            }
            if !slow.is_empty() {
                return Err(Failure::Input(format!(
                    "rf scaling above 2.5x on doubling at {slow:?}"
                )));
            }
        }
        Command::Consensus { file } => {
            let trees: Vec<Tree> = read_trees(&[file])?.into_iter().map(|t| t.1).collect();
            let c = strict_consensus(&trees).map_err(|e| Failure::tree("consensus", &e))?;
            writeln!(out, "{}", serialize(&c, None)).map_err(io)?;
        }
    }
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit
/// status. Usage errors and `--help` are printed by clap.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = e.exit_code();
            let _ = write!(err, "{}", e.render());
            return status;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "treedist: {f}");
            f.status()
        }
    }
}
