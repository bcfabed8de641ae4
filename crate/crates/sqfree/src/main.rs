use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sqfree::audit::{run_audit, AuditConfig, Grid};
use sqfree::config::{parse_lengths, Budgets, RunConfig};
use sqfree::error::CliError;
use sqfree::export::{adjacency, to_dot};
use sqfree::report::{
    envelope, GraphReport, MinAReport, OrbitsReport, SimulateReport, TOOL, VERSION,
};
use sqfree_core::{prune_core, AvoidanceGraph, SolverConfig, Walk, Word};

/// Finite square avoidance: orbit partitions, minimal alphabets, avoidance graphs.
///
/// Lengths are given ascending, largest last: `--s 3,5` avoids squares vv with |v| = 3 or 5.
#[derive(Parser, Debug)]
#[command(name = "sqfree", version, about, long_about = None)]
struct Cli {
    /// Output format; `dot` only applies to `graph`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for parallel work (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit partition o(s) and its generic word.
    Orbits {
        #[arg(long)]
        s: String,
    },
    /// Predicted and exact minimal alphabet size with a witness.
    Mina {
        #[arg(long)]
        s: String,
        /// Largest block count searched (default: number of lengths + 2).
        #[arg(long)]
        k_max: Option<usize>,
        /// Search-node cap per block count.
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// Statistics, dead-ends and exports of the avoidance graph G(s).
    Graph {
        #[arg(long)]
        s: String,
        #[arg(long)]
        l: usize,
        /// Cap on l^N candidate words.
        #[arg(long)]
        vertex_cap: Option<u64>,
        /// List dead-end words.
        #[arg(long)]
        dead_ends: bool,
        /// List dead-start words.
        #[arg(long)]
        dead_starts: bool,
        /// Include the adjacency (vertices and arcs) in the report.
        #[arg(long)]
        adjacency: bool,
        /// Export or list the pruned core instead of the whole graph.
        #[arg(long)]
        core: bool,
    },
    /// Seeded random walk on the pruned core, as a letter stream.
    Walk {
        #[arg(long)]
        s: String,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        vertex_cap: Option<u64>,
    },
    /// The letter-by-letter sequential method, over one or more seeded trials.
    Simulate {
        #[arg(long)]
        s: String,
        #[arg(long)]
        l: usize,
        /// Seed of the first trial; trial k uses seed + k - 1.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Letters to append per trial.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Squarefree word to start from.
        #[arg(long, default_value = "")]
        prefix: String,
    },
    /// Full verification audit; exits 4 if any check fails.
    Verify {
        /// Instance grid, e.g. `r<=3,i1<=7,l<=3`.
        #[arg(long, default_value = "r<=3,i1<=7,l<=3")]
        grid: String,
        /// Seed for the core walks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Length of each core walk.
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long)]
        vertex_cap: Option<u64>,
        #[arg(long)]
        node_budget: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(io_error));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            drop(out);
            if format == Format::Json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("{e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn io_error(e: io::Error) -> CliError {
    CliError {
        kind: sqfree::error::ErrorKind::Runtime,
        message: format!("write failed: {e}"),
    }
}

fn emit<T: serde::Serialize>(
    out: &mut impl Write,
    format: Format,
    config: &RunConfig,
    result: &T,
    text: impl FnOnce() -> String,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let json =
                serde_json::to_string_pretty(&envelope(config, result)).expect("report serializes");
            writeln!(out, "{json}").map_err(io_error)
        }
        Format::Text => write!(out, "{}", text()).map_err(io_error),
        Format::Dot => Err(CliError::usage(
            "--format dot is only available for `graph`",
        )),
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure threads: {e}")))?;
    }
    let env = Budgets::from_env()?;
    let format = cli.format;
    match cli.command {
        Command::Orbits { s } => {
            let s = parse_lengths(&s)?;
            let mut config = RunConfig::new("orbits", env);
            config.s = Some(s.ascending().to_vec());
            let report = OrbitsReport::new(&s);
            emit(out, format, &config, &report, || report.render_text())
        }
        Command::Mina {
            s,
            k_max,
            node_budget,
        } => {
            let s = parse_lengths(&s)?;
            let budgets = env.with_overrides(None, node_budget);
            let k_max = k_max.unwrap_or(s.r() + 2);
            let mut config = RunConfig::new("mina", budgets);
            config.s = Some(s.ascending().to_vec());
            config.k_max = Some(k_max);
            let report = MinAReport::new(
                &s,
                SolverConfig {
                    k_max,
                    node_budget: budgets.node_budget,
                },
            )?;
            emit(out, format, &config, &report, || report.render_text())
        }
        Command::Graph {
            s,
            l,
            vertex_cap,
            dead_ends,
            dead_starts,
            adjacency: with_adjacency,
            core,
        } => {
            let s = parse_lengths(&s)?;
            let budgets = env.with_overrides(vertex_cap, None);
            let mut config = RunConfig::new("graph", budgets)
                .option("dead_ends", dead_ends)
                .option("dead_starts", dead_starts)
                .option("adjacency", with_adjacency)
                .option("core", core);
            config.s = Some(s.ascending().to_vec());
            config.l = Some(l);
            let g = AvoidanceGraph::build(&s, l, budgets.vertex_cap)?;
            let shown = if core { prune_core(&g) } else { g };
            if format == Format::Dot {
                let name = format!("G{s} l={l}{}", if core { " core" } else { "" });
                return write!(out, "{}", to_dot(&shown, &name)).map_err(io_error);
            }
            let adj = with_adjacency.then(|| adjacency(&shown));
            let report = GraphReport::new(&shown, dead_ends, dead_starts, adj);
            emit(out, format, &config, &report, || report.render_text())
        }
        Command::Walk {
            s,
            l,
            seed,
            steps,
            vertex_cap,
        } => {
            let s = parse_lengths(&s)?;
            let budgets = env.with_overrides(vertex_cap, None);
            let mut config = RunConfig::new("walk", budgets);
            config.s = Some(s.ascending().to_vec());
            config.l = Some(l);
            config.seed = Some(seed);
            config.steps = Some(steps);
            if format == Format::Dot {
                return Err(CliError::usage(
                    "--format dot is only available for `graph`",
                ));
            }
            let g = AvoidanceGraph::build(&s, l, budgets.vertex_cap)?;
            let walk = Walk::new(&prune_core(&g), seed)?;
            stream_walk(out, format, &config, walk, steps)
        }
        Command::Simulate {
            s,
            l,
            seed,
            steps,
            trials,
            prefix,
        } => {
            let s = parse_lengths(&s)?;
            let prefix: Word = prefix
                .parse()
                .map_err(|e| CliError::usage(format!("--prefix: {e}")))?;
            let mut config = RunConfig::new("simulate", env)
                .option("trials", trials)
                .option("prefix", &prefix);
            config.s = Some(s.ascending().to_vec());
            config.l = Some(l);
            config.seed = Some(seed);
            config.steps = Some(steps as u64);
            let report = SimulateReport::new(&s, l, &prefix, seed, steps, trials)?;
            emit(out, format, &config, &report, || report.render_text())
        }
        Command::Verify {
            grid,
            seed,
            steps,
            vertex_cap,
            node_budget,
        } => {
            let grid: Grid = grid.parse()?;
            let budgets = env.with_overrides(vertex_cap, node_budget);
            let mut config = RunConfig::new("verify", budgets).option(
                "grid",
                format!("r<={},i1<={},l<={}", grid.r_max, grid.i1_max, grid.l_max),
            );
            config.seed = Some(seed);
            config.steps = Some(steps as u64);
            let report = run_audit(&AuditConfig {
                grid,
                walk_seed: seed,
                walk_steps: steps,
                budgets,
            })?;
            emit(out, format, &config, &report, || report.render_text())?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                Err(CliError::verification(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

const CHUNK: u64 = 1000;

/// Text: the letters on one line. JSON: newline-delimited `start`, `letters` and `end` events.
fn stream_walk(
    out: &mut impl Write,
    format: Format,
    config: &RunConfig,
    walk: Walk,
    steps: u64,
) -> Result<(), CliError> {
    let mut letters = walk.take(steps as usize);
    match format {
        Format::Json => {
            let start = serde_json::json!({
                "event": "start",
                "tool": TOOL,
                "version": VERSION,
                "config": config,
                "config_hash": config.hash(),
            });
            writeln!(out, "{start}").map_err(io_error)?;
            let mut offset = 0u64;
            while offset < steps {
                let chunk: String = letters
                    .by_ref()
                    .take(CHUNK as usize)
                    .map(sqfree_core::word::letter_char)
                    .collect();
                let event =
                    serde_json::json!({ "event": "letters", "offset": offset, "letters": chunk });
                writeln!(out, "{event}").map_err(io_error)?;
                offset += chunk.len() as u64;
            }
            writeln!(
                out,
                "{}",
                serde_json::json!({ "event": "end", "steps": steps })
            )
            .map_err(io_error)
        }
        _ => {
            for a in letters {
                write!(out, "{}", sqfree_core::word::letter_char(a)).map_err(io_error)?;
            }
            writeln!(out).map_err(io_error)
        }
    }
}
