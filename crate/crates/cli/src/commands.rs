use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use stablereg::generators::generate;
use stablereg::rational::parse_ratio;
use stablereg::verify::EXHAUSTIVE_PART_LIMIT;
use stablereg::{
    check_delta_regularity, check_theorem, counting_measure, decompose, ladder_index, splitting_rank, BipartiteGraph,
    DecomposeConfig, DeltaMode, EpsPolicy, GeneratorSpec, Measure, Side, PRNG_ALGORITHM,
};

use crate::io::{graph_to_json, parse_graph, parse_measure};
use crate::report::{canonical, verification_json, PartitionReport};
use crate::CliError;

pub const THREADS_ENV: &str = "STABLEREG_THREADS";

#[derive(Parser, Debug)]
#[command(name = "stablereg", version, about = "Regularity partitions for stable bipartite graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a regularity partition and write its report.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        /// Rational `p/q`.
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        mu: Option<PathBuf>,
        #[arg(long)]
        nu: Option<PathBuf>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
        eps_policy: PolicyArg,
        /// Give vertices heavier than epsilon their own parts.
        #[arg(long)]
        peel_singletons: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-check a report against its graph from scratch.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        mu: Option<PathBuf>,
        #[arg(long)]
        nu: Option<PathBuf>,
        /// `auto` is exhaustive when every part is small enough, sampled otherwise.
        #[arg(long, value_enum, default_value_t = DeltaModeArg::Auto)]
        delta_mode: DeltaModeArg,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Largest half-graph embedded in the graph, up to `--max-k`.
    Ladder {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Splitting rank of a full side.
    Rank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Generate a graph from a JSON spec (inline or a file path).
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PolicyArg {
    Strict,
    Permissive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DeltaModeArg {
    Auto,
    Exhaustive,
    Sampled,
    Off,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Parse(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Parse(format!("cannot write output: {e}"))),
    }
}

fn load_measure(path: Option<&Path>, g: &BipartiteGraph, side: Side) -> Result<Measure, CliError> {
    match path {
        Some(p) => parse_measure(&read(p)?, g, side),
        None => Ok(counting_measure(g, side)),
    }
}

/// Applies `STABLEREG_THREADS` to the global thread pool.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Parse(format!("thread pool: {e}")))
}

/// Runs one subcommand, writing its primary output to `out`. Returns the
/// process exit code for completed runs.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Decompose { input, epsilon, mu, nu, max_iterations, eps_policy, peel_singletons, output } => {
            let g = parse_graph(&read(&input)?)?;
            let eps = parse_ratio(&epsilon).map_err(|e| CliError::Parse(format!("--epsilon: {e}")))?;
            let mu = load_measure(mu.as_deref(), &g, Side::Left)?;
            let nu = load_measure(nu.as_deref(), &g, Side::Right)?;
            let config = DecomposeConfig {
                max_iterations,
                eps_policy: match eps_policy {
                    PolicyArg::Strict => EpsPolicy::Strict,
                    PolicyArg::Permissive => EpsPolicy::Permissive,
                },
                peel_singletons,
            };
            let p = decompose(&g, &mu, &nu, &eps, &config)?;
            emit(out, output.as_deref(), &PartitionReport::from_partition(&p).to_canonical_json())?;
            Ok(0)
        }
        Command::Verify { input, report, mu, nu, delta_mode, budget, seed, output } => {
            let g = parse_graph(&read(&input)?)?;
            let partition = PartitionReport::parse(&read(&report)?)?.to_partition(&g)?;
            let mu = load_measure(mu.as_deref(), &g, Side::Left)?;
            let nu = load_measure(nu.as_deref(), &g, Side::Right)?;
            let theorem = check_theorem(&g, &mu, &nu, &partition)?;
            let small = partition
                .parts_left
                .iter()
                .chain(&partition.parts_right)
                .all(|p| p.members.len() <= EXHAUSTIVE_PART_LIMIT);
            let mode = match delta_mode {
                DeltaModeArg::Off => None,
                DeltaModeArg::Exhaustive => Some(DeltaMode::Exhaustive),
                DeltaModeArg::Sampled => Some(DeltaMode::Sampled { budget, seed }),
                DeltaModeArg::Auto if small => Some(DeltaMode::Exhaustive),
                DeltaModeArg::Auto => Some(DeltaMode::Sampled { budget, seed }),
            };
            let delta = mode.map(|m| check_delta_regularity(&g, &mu, &nu, &partition, m)).transpose()?;
            let value = verification_json(&theorem, delta.as_ref());
            emit(out, output.as_deref(), &canonical(&value))?;
            Ok(if value["verified"] == true { 0 } else { 1 })
        }
        Command::Ladder { input, max_k } => {
            let g = parse_graph(&read(&input)?)?;
            let li = ladder_index(&g, max_k);
            emit(out, None, &canonical(&serde_json::to_value(&li).expect("ladder index serializes")))?;
            Ok(0)
        }
        Command::Rank { input, side } => {
            let g = parse_graph(&read(&input)?)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let r = splitting_rank(&g, &g.full_set(side))?;
            let value = json!({ "side": side, "value": r.value, "witness_tree": r.witness_tree });
            emit(out, None, &canonical(&value))?;
            Ok(0)
        }
        Command::Gen { spec, output } => {
            let text = if spec.trim_start().starts_with('{') { spec.clone() } else { read(Path::new(&spec))? };
            let spec: GeneratorSpec =
                serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("generator spec: {e}")))?;
            let g = generate(&spec)?;
            match output {
                Some(path) => {
                    emit(out, Some(&path), &graph_to_json(&g))?;
                    let meta = json!({ "prng": PRNG_ALGORITHM, "spec": spec, "output": path.display().to_string() });
                    emit(out, None, &canonical(&meta))?;
                }
                None => emit(out, None, &graph_to_json(&g))?,
            }
            Ok(0)
        }
    }
}
