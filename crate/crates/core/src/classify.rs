//! Sweeps over all weighted games of a given size: uniqueness of minimum-sum
//! representations, lower-bound statistics and extremal parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::enumerator::{
    default_split_depth, CountVisitor, EnumerationConfig, EnumerationStats, Enumerator, GameClass, Visit, Visitor,
    CANONICAL_ORDER_VERSION,
};
use crate::error::{CheckpointError, GameError};
use crate::minrep::{resolve, WeightRep};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Largest `n` for which the complete games are also counted.
pub const COMPLETE_COUNT_MAX_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub n: usize,
    /// Also resolve type-preserving representations.
    pub types: bool,
    pub jobs: usize,
    pub split_depth: usize,
}

impl ClassifyOptions {
    pub fn new(n: usize) -> Self {
        ClassifyOptions {
            n,
            types: true,
            jobs: 1,
            split_depth: default_split_depth(n),
        }
    }
}

/// A game without a unique minimum-sum representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonUniqueGame {
    pub min_winning: Vec<Coalition>,
    pub min_sum: u64,
    pub reps: Vec<WeightRep>,
    /// Type-preserving optima, when requested.
    pub type_reps: Option<Vec<WeightRep>>,
}

/// A parameter value together with the game attaining it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: u64,
    pub min_winning: Vec<Coalition>,
}

impl Extremum {
    /// Keeps the larger value; ties go to the lexicographically larger game,
    /// so merging is order independent.
    fn offer(&mut self, value: u64, w: &[Coalition]) {
        if value > self.value || (value == self.value && w > self.min_winning.as_slice()) {
            self.value = value;
            self.min_winning = w.to_vec();
        }
    }

    fn merge(&mut self, other: &Extremum) {
        self.offer(other.value, &other.min_winning);
    }
}

/// Mergeable per-task results.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub weighted: u64,
    pub nonunique_plain: u64,
    pub nonunique_types: u64,
    /// Number of minimum-sum representations → number of games.
    pub rep_histogram: BTreeMap<usize, u64>,
    pub types_rep_histogram: BTreeMap<usize, u64>,
    /// Games whose lower bounds already realise them.
    pub bound_tight: u64,
    /// Non-unique games whose minimum sum equals the lower-bound sum.
    pub nonunique_bound_tight: u64,
    /// Games with a non-integral optimum in the lower-bound iteration.
    pub fractional: u64,
    /// Largest denominator → number of fractional games.
    pub fractional_denominators: BTreeMap<u64, u64>,
    pub max_min_sum: Extremum,
    pub max_min_quota: Extremum,
    pub max_min_w1: Extremum,
    pub nonunique_games: Vec<NonUniqueGame>,
    pub enumeration: EnumerationStats,
    pub minrep_pivots: u64,
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.weighted += other.weighted;
        self.nonunique_plain += other.nonunique_plain;
        self.nonunique_types += other.nonunique_types;
        for (k, v) in &other.rep_histogram {
            *self.rep_histogram.entry(*k).or_default() += v;
        }
        for (k, v) in &other.types_rep_histogram {
            *self.types_rep_histogram.entry(*k).or_default() += v;
        }
        self.bound_tight += other.bound_tight;
        self.nonunique_bound_tight += other.nonunique_bound_tight;
        self.fractional += other.fractional;
        for (k, v) in &other.fractional_denominators {
            *self.fractional_denominators.entry(*k).or_default() += v;
        }
        self.max_min_sum.merge(&other.max_min_sum);
        self.max_min_quota.merge(&other.max_min_quota);
        self.max_min_w1.merge(&other.max_min_w1);
        self.nonunique_games.extend(other.nonunique_games.iter().cloned());
        self.nonunique_games.sort_by(|a, b| b.min_winning.cmp(&a.min_winning));
        self.enumeration.merge(&other.enumeration);
        self.minrep_pivots += other.minrep_pivots;
    }
}

struct ClassifyVisitor {
    types: bool,
    tally: Tally,
}

impl Visitor for ClassifyVisitor {
    fn visit(&mut self, visit: &Visit<'_>) {
        let game = visit.game();
        let t = &mut self.tally;
        let plain = resolve(visit.lattice, &game, false);
        t.weighted += 1;
        t.minrep_pivots += plain.stats.pivots;
        let count = plain.result.reps.len();
        *t.rep_histogram.entry(count).or_default() += 1;
        if plain.fast_path {
            t.bound_tight += 1;
        }
        if plain.bounds.is_fractional() {
            t.fractional += 1;
            *t.fractional_denominators
                .entry(plain.bounds.max_denominator())
                .or_default() += 1;
        }
        t.max_min_sum.offer(plain.result.min_sum, visit.min_winning);
        t.max_min_quota.offer(plain.min_quota(), visit.min_winning);
        t.max_min_w1.offer(plain.max_w1(), visit.min_winning);
        if plain.result.unique {
            // The single optimum is invariant under swapping equivalent
            // voters, so it is also the unique type-preserving optimum.
            if self.types {
                *t.types_rep_histogram.entry(1).or_default() += 1;
            }
            return;
        }
        t.nonunique_plain += 1;
        if plain.fast_path {
            t.nonunique_bound_tight += 1;
        }
        let type_reps = self.types.then(|| {
            let typed = resolve(visit.lattice, &game, true);
            t.minrep_pivots += typed.stats.pivots;
            let k = typed.result.reps.len();
            *t.types_rep_histogram.entry(k).or_default() += 1;
            if k > 1 {
                t.nonunique_types += 1;
            }
            typed.result.reps
        });
        t.nonunique_games.push(NonUniqueGame {
            min_winning: visit.min_winning.to_vec(),
            min_sum: plain.result.min_sum,
            reps: plain.result.reps,
            type_reps,
        });
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub order_version: u32,
    pub n: usize,
    pub types: bool,
    /// Number of complete games (only counted for small `n`).
    pub complete: Option<u64>,
    #[serde(flatten)]
    pub tally: Tally,
    /// Informational only.
    pub wall_seconds: f64,
}

impl ClassificationReport {
    pub fn max_parameters(&self) -> (u64, u64, u64) {
        (
            self.tally.max_min_sum.value,
            self.tally.max_min_quota.value,
            self.tally.max_min_w1.value,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    order_version: u32,
    n: usize,
    types: bool,
    split_depth: usize,
    tasks: usize,
}

fn task_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("task-{index:07}.json"))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CheckpointError + '_ {
    move |source| CheckpointError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn json_err(path: &Path) -> impl FnOnce(serde_json::Error) -> CheckpointError + '_ {
    move |source| CheckpointError::Json {
        path: path.to_path_buf(),
        source,
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CheckpointError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Opens (or creates) a checkpoint directory and returns the tallies of the
/// tasks already finished.
fn open_checkpoint(dir: &Path, manifest: &Manifest) -> Result<Vec<Option<Tally>>, CheckpointError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mpath = dir.join("manifest.json");
    if mpath.exists() {
        let text = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
        let found: Manifest = serde_json::from_str(&text).map_err(json_err(&mpath))?;
        if &found != manifest {
            return Err(CheckpointError::Mismatch {
                path: mpath,
                expected: serde_json::to_string(manifest).expect("serialisable"),
                found: text.trim().to_string(),
            });
        }
    } else {
        let text = serde_json::to_string_pretty(manifest).expect("serialisable");
        write_atomic(&mpath, &text)?;
    }
    let mut done = Vec::with_capacity(manifest.tasks);
    for i in 0..manifest.tasks {
        let p = task_path(dir, i);
        if p.exists() {
            let text = fs::read_to_string(&p).map_err(io_err(&p))?;
            done.push(Some(serde_json::from_str(&text).map_err(json_err(&p))?));
        } else {
            done.push(None);
        }
    }
    Ok(done)
}

/// Classifies every weighted game on `n` voters; with a checkpoint directory
/// finished tasks are persisted and skipped on the next run.
pub fn classify(opts: &ClassifyOptions, checkpoint: Option<&Path>) -> Result<ClassificationReport, CheckpointError> {
    let start = Instant::now();
    let e = Enumerator::new(EnumerationConfig::new(opts.n, GameClass::Weighted))?;
    let tasks = e.split(opts.split_depth);
    let manifest = Manifest {
        schema_version: REPORT_SCHEMA_VERSION,
        order_version: CANONICAL_ORDER_VERSION,
        n: opts.n,
        types: opts.types,
        split_depth: opts.split_depth.max(1),
        tasks: tasks.len(),
    };
    let mut done = match checkpoint {
        Some(dir) => open_checkpoint(dir, &manifest)?,
        None => vec![None; tasks.len()],
    };
    let pending: Vec<usize> = (0..tasks.len()).filter(|&i| done[i].is_none()).collect();
    let pending_tasks: Vec<_> = pending.iter().map(|&i| tasks[i].clone()).collect();
    let mut cursor = pending.iter();
    let mut write_error = None;
    e.run_streaming(
        &pending_tasks,
        opts.jobs,
        || ClassifyVisitor {
            types: opts.types,
            tally: Tally::default(),
        },
        |v, stats| {
            let index = *cursor.next().expect("one result per task");
            let mut tally = v.tally;
            tally.enumeration = stats;
            if let (Some(dir), None) = (checkpoint, &write_error) {
                let text = serde_json::to_string(&tally).expect("serialisable");
                if let Err(err) = write_atomic(&task_path(dir, index), &text) {
                    write_error = Some(err);
                }
            }
            done[index] = Some(tally);
        },
    )?;
    if let Some(err) = write_error {
        return Err(err);
    }
    let mut tally = Tally::default();
    for t in done.iter().flatten() {
        tally.merge(t);
    }
    let complete = (opts.n <= COMPLETE_COUNT_MAX_N).then(|| {
        let c = Enumerator::new(EnumerationConfig::new(opts.n, GameClass::Complete)).expect("valid n");
        c.run(&mut CountVisitor::default()).games
    });
    Ok(ClassificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        order_version: CANONICAL_ORDER_VERSION,
        n: opts.n,
        types: opts.types,
        complete,
        tally,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Maximum over all weighted games of (minimum Σw, smallest quota of a
/// minimum-sum representation, largest w_1 of one).
pub fn max_parameters(n: usize, jobs: usize) -> Result<(u64, u64, u64), GameError> {
    let opts = ClassifyOptions {
        types: false,
        jobs,
        ..ClassifyOptions::new(n)
    };
    match classify(&opts, None) {
        Ok(report) => Ok(report.max_parameters()),
        Err(CheckpointError::Game(e)) => Err(e),
        Err(other) => unreachable!("no checkpoint in use: {other}"),
    }
}
