//! The `wvg` command-line tool.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use wvg_core::classify::{classify, ClassifyOptions};
use wvg_core::enumerator::{
    default_split_depth, oracle_complete_small, oracle_monotone_small, CountVisitor, EnumerationConfig,
    EnumerationStats, Enumerator, GameClass, Subtree, Visit, Visitor,
};
use wvg_core::format::{parse_game_file, write_game};
use wvg_core::minrep::{all_min_sum_reps, all_min_sum_reps_preserving_types};
use wvg_core::weightedness::{feasibility_lp, is_weighted};
use wvg_core::{CheckpointError, FormatError, GameError, Lattice};

pub use report::{render_report, report_fields};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("{path}: {source}")]
    Output { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Io(#[from] io::Error),
    #[error("{} is not a weighted game", .0.display())]
    NotWeighted(PathBuf),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(
    name = "wvg",
    version,
    about = "Complete simple games, weighted voting games and minimum-sum representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all complete simple or weighted voting games
    Enumerate(EnumerateArgs),
    /// Decide whether a game is weighted
    Check(CheckArgs),
    /// Minimum-sum integer representations of a game
    Minrep(MinrepArgs),
    /// Sweep all weighted games and report uniqueness and extremal data
    Classify(ClassifyArgs),
    /// Print the dual game
    Dual(GameArg),
    /// Brute-force counts for small voter numbers
    Oracle(OracleArgs),
    /// Count complete and weighted games for 1..=N voters
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct Workers {
    /// Worker threads
    #[arg(long, env = "WVG_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Prefix depth for the static work split (default depends on N)
    #[arg(long)]
    split_depth: Option<usize>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, short = 'n')]
    voters: usize,
    #[arg(long, value_enum, default_value_t = ClassArg::Complete)]
    class: ClassArg,
    /// Print only the number of games
    #[arg(long)]
    count_only: bool,
    /// Write games to FILE instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    workers: Workers,
    /// Only this subtree: comma-separated prefix, `!` suffix for the node alone
    #[arg(long)]
    subtree: Option<String>,
    /// Print node, LP and pivot counts
    #[arg(long)]
    stats: bool,
    /// Solve every LP from scratch
    #[arg(long)]
    no_warm_start: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ClassArg {
    Complete,
    Weighted,
}

impl From<ClassArg> for GameClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Complete => GameClass::Complete,
            ClassArg::Weighted => GameClass::Weighted,
        }
    }
}

#[derive(Args, Debug)]
struct GameArg {
    /// Game file in .csg format
    #[arg(long)]
    game: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    game: GameArg,
    /// Print the feasibility LP
    #[arg(long)]
    dump_lp: bool,
}

#[derive(Args, Debug)]
struct MinrepArgs {
    #[command(flatten)]
    game: GameArg,
    /// Print every optimal representation, not just the first
    #[arg(long)]
    all: bool,
    /// Equal weights for equally desirable voters
    #[arg(long)]
    preserve_types: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ReportKind {
    Nonunique,
    NonuniqueTypes,
    MaxParams,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, short = 'n')]
    voters: usize,
    #[arg(long, value_enum, default_value_t = ReportKind::Nonunique)]
    report: ReportKind,
    #[command(flatten)]
    workers: Workers,
    /// Persist finished tasks here and resume from them
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the non-unique games as .csg records with their representations
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OracleKind {
    Antichain,
    Monotone,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, short = 'n')]
    voters: usize,
    #[arg(long, value_enum, default_value_t = OracleKind::Antichain)]
    kind: OracleKind,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// Largest voter count
    #[arg(long, short = 'n')]
    voters: usize,
    #[command(flatten)]
    workers: Workers,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

/// Runs the tool on `argv` (including the program name) and returns the
/// exit status: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Enumerate(a) => enumerate(a, out, err),
        Command::Check(a) => check(a, out),
        Command::Minrep(a) => minrep(a, out),
        Command::Classify(a) => classify_cmd(a, out),
        Command::Dual(a) => {
            let g = parse_game_file(&a.game)?;
            let lattice = Lattice::new(g.n())?;
            write!(out, "{}", write_game(&g.dual(&lattice)))?;
            Ok(())
        }
        Command::Oracle(a) => oracle(a, out),
        Command::Stats(a) => stats(a, out),
    }
}

fn check_voters(n: usize) -> Result<(), CliError> {
    if n == 0 || n > wvg_core::MAX_VOTERS {
        return Err(CliError::Usage(format!(
            "--voters must be in 1..={}",
            wvg_core::MAX_VOTERS
        )));
    }
    Ok(())
}

fn write_stats(w: &mut dyn Write, s: &EnumerationStats) -> io::Result<()> {
    writeln!(w, "nodes {}", s.nodes)?;
    writeln!(w, "games {}", s.games)?;
    writeln!(w, "lp_solves {}", s.lp_solves)?;
    writeln!(w, "pruned {}", s.pruned)?;
    writeln!(w, "full_checks {}", s.full_checks)?;
    writeln!(w, "pivots {}", s.pivots)
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    check_voters(a.voters)?;
    let mut config = EnumerationConfig::new(a.voters, a.class.into());
    config.warm_start = !a.no_warm_start;
    let e = Enumerator::new(config)?;
    let tasks = match &a.subtree {
        Some(p) => vec![p.parse::<Subtree>().map_err(|e| CliError::Usage(e.to_string()))?],
        None => e.split(a.workers.split_depth.unwrap_or(default_split_depth(a.voters))),
    };
    let mut total = EnumerationStats::default();
    if a.count_only {
        e.run_streaming(&tasks, a.workers.jobs, CountVisitor::default, |_, s| total.merge(&s))?;
        writeln!(out, "{}", total.games)?;
        if a.stats {
            write_stats(out, &total)?;
        }
        return Ok(());
    }
    let mut file;
    let sink: &mut dyn Write = match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|source| CliError::Output {
                path: path.clone(),
                source,
            })?;
            file = BufWriter::new(f);
            &mut file
        }
        None => out,
    };
    let mut first = true;
    let mut write_result = Ok(());
    e.run_streaming(&tasks, a.workers.jobs, Records::default, |records, s| {
        total.merge(&s);
        for record in records.0 {
            if write_result.is_err() {
                return;
            }
            if !first {
                write_result = sink.write_all(b"\n");
            }
            first = false;
            if write_result.is_ok() {
                write_result = sink.write_all(record.as_bytes());
            }
        }
    })?;
    write_result?;
    sink.flush()?;
    if a.stats {
        write_stats(err, &total)?;
    }
    Ok(())
}

/// Collects `.csg` records of the visited games.
#[derive(Default)]
struct Records(Vec<String>);

impl Visitor for Records {
    fn visit(&mut self, v: &Visit<'_>) {
        self.0.push(write_game(&v.game()));
    }
}

fn check(a: CheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = parse_game_file(&a.game.game)?;
    let lattice = Lattice::new(g.n())?;
    if a.dump_lp {
        let lp = feasibility_lp(g.n(), g.min_winning(), &g.max_losing(&lattice));
        write!(out, "{lp}")?;
    }
    match is_weighted(&lattice, &g) {
        Some(rep) => {
            writeln!(out, "weighted: yes")?;
            let weights: Vec<String> = rep.weights.iter().map(|w| w.to_string()).collect();
            writeln!(out, "{}: {}", rep.quota, weights.join(" "))?;
        }
        None => writeln!(out, "weighted: no")?,
    }
    Ok(())
}

fn minrep(a: MinrepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = parse_game_file(&a.game.game)?;
    let lattice = Lattice::new(g.n())?;
    if is_weighted(&lattice, &g).is_none() {
        return Err(CliError::NotWeighted(a.game.game));
    }
    let result = if a.preserve_types {
        all_min_sum_reps_preserving_types(&lattice, &g)
    } else {
        all_min_sum_reps(&lattice, &g)
    };
    writeln!(out, "min_sum {}", result.min_sum)?;
    let shown = if a.all { result.reps.len() } else { 1 };
    for rep in result.reps.iter().take(shown) {
        let weights: Vec<String> = rep.weights.iter().map(|w| w.to_string()).collect();
        writeln!(out, "{}: {}", rep.quota, weights.join(" "))?;
    }
    if !a.all && result.reps.len() > 1 {
        writeln!(
            out,
            "# {} optimal representations, use --all to list them",
            result.reps.len()
        )?;
    }
    Ok(())
}

fn classify_cmd(a: ClassifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_voters(a.voters)?;
    let opts = ClassifyOptions {
        n: a.voters,
        types: a.report == ReportKind::NonuniqueTypes,
        jobs: a.workers.jobs,
        split_depth: a.workers.split_depth.unwrap_or(default_split_depth(a.voters)),
    };
    let report = classify(&opts, a.checkpoint.as_deref())?;
    if let Some(path) = &a.dump {
        let text = report::dump_nonunique(&report);
        std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
    }
    write!(out, "{}", render_report(&report, a.format))?;
    Ok(())
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match a.kind {
        OracleKind::Antichain => {
            let count = oracle_complete_small(a.voters).map_err(size_as_usage)?;
            writeln!(out, "complete {count}")?;
        }
        OracleKind::Monotone => {
            let (simple, complete, weighted) = oracle_monotone_small(a.voters).map_err(size_as_usage)?.counts();
            writeln!(out, "simple {simple}")?;
            writeln!(out, "complete {complete}")?;
            writeln!(out, "weighted {weighted}")?;
        }
    }
    Ok(())
}

fn size_as_usage(e: GameError) -> CliError {
    match e {
        GameError::UnsupportedSize { .. } | GameError::VoterCount(_) => CliError::Usage(e.to_string()),
        other => CliError::Game(other),
    }
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_voters(a.voters)?;
    let mut rows = Vec::new();
    for n in 1..=a.voters {
        let mut row = vec![("n".to_string(), n.to_string())];
        for class in [GameClass::Complete, GameClass::Weighted] {
            let e = Enumerator::new(EnumerationConfig::new(n, class))?;
            let tasks = e.split(a.workers.split_depth.unwrap_or(default_split_depth(n)));
            let mut total = EnumerationStats::default();
            e.run_streaming(&tasks, a.workers.jobs, CountVisitor::default, |_, s| total.merge(&s))?;
            row.push((class.to_string(), total.games.to_string()));
        }
        rows.push(row);
    }
    write!(out, "{}", report::render_rows(&rows, a.format))?;
    Ok(())
}
