//! Benchmark execution and run reports.
//!
//! A report is a JSON Lines file with three kinds of records, tagged by
//! `"type"`: one `row` per instance and run, one `aggregate` per run and one
//! `comparison` per pair of runs. Aggregates are recomputed from the rows by
//! [`check_report`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use anyhow::Context as _;
use regsynth_core::alpharegex::AlphaRegex;
use regsynth_core::bluefringe::BlueFringe;
use regsynth_core::clock::{Clock, Deadline};
use regsynth_core::examples::SplitLabeling;
use regsynth_core::framework::{
    synthesize_split, Engine, EngineFailure, PartExecutor, Sequential, SplitConfig, SplitStatus, Strategy, Task,
};
use regsynth_core::metrics::{aggregate, compare, fully_accurate, sem_acc, Aggregate, Comparison, Outcome};
use regsynth_core::oracle::member_by_spans;
use regsynth_core::splitter::{ground_truth_split, heuristic_runs_split, partition_from_labelings};
use regsynth_core::Regex;
use serde::{Deserialize, Serialize};

use crate::clock::{StdClock, Threads};
use crate::dataset::BenchmarkInstance;
use crate::predictions::Predictions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Alpharegex,
    Bluefringe,
}

impl EngineKind {
    pub fn engine(&self) -> Box<dyn Engine> {
        match self {
            EngineKind::Alpharegex => Box::new(AlphaRegex::default()),
            EngineKind::Bluefringe => Box::new(BlueFringe),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            EngineKind::Alpharegex => "alpharegex",
            EngineKind::Bluefringe => "bluefringe",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vanilla,
    Split,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitterKind {
    GroundTruth,
    FromFile(PathBuf),
    HeuristicRuns,
}

impl fmt::Display for SplitterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitterKind::GroundTruth => f.write_str("gt"),
            SplitterKind::FromFile(p) => write!(f, "file:{}", p.display()),
            SplitterKind::HeuristicRuns => f.write_str("runs"),
        }
    }
}

impl FromStr for SplitterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gt" => Ok(SplitterKind::GroundTruth),
            "runs" => Ok(SplitterKind::HeuristicRuns),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(SplitterKind::FromFile(p.into())),
                _ => Err(format!("unknown splitter {s:?}; expected gt, runs or file:PATH")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub engine: EngineKind,
    pub mode: Mode,
    pub splitter: SplitterKind,
    pub strategy: Strategy,
    pub fallback: bool,
    pub timeout: Duration,
}

impl RunConfig {
    pub fn vanilla(engine: EngineKind, timeout: Duration) -> Self {
        RunConfig {
            engine,
            mode: Mode::Vanilla,
            splitter: SplitterKind::GroundTruth,
            strategy: Strategy::default(),
            fallback: false,
            timeout,
        }
    }

    pub fn split(engine: EngineKind, splitter: SplitterKind, strategy: Strategy, timeout: Duration) -> Self {
        RunConfig {
            engine,
            mode: Mode::Split,
            splitter,
            strategy,
            fallback: false,
            timeout,
        }
    }

    /// Short name identifying the run inside a report.
    pub fn label(&self) -> String {
        match self.mode {
            Mode::Vanilla => format!("{}/vanilla", self.engine.as_str()),
            Mode::Split => format!(
                "{}/split/{}/{}{}",
                self.engine.as_str(),
                self.splitter,
                self.strategy.as_str(),
                if self.fallback { "+fallback" } else { "" }
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Timeout,
    SplitFailure,
    Infeasible,
    /// The engine claimed success but the harness check rejected the regex.
    Unverified,
    SplitterError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub run: String,
    pub instance: usize,
    pub engine: EngineKind,
    pub mode: Mode,
    pub splitter: Option<String>,
    pub strategy: Option<String>,
    pub status: Status,
    /// Seconds, for reading; `elapsed_ns` is authoritative.
    pub elapsed: f64,
    pub elapsed_ns: u64,
    pub sem_acc: f64,
    pub fully_accurate: bool,
    pub regex: Option<String>,
    #[serde(default)]
    pub used_fallback: bool,
    #[serde(default)]
    pub note: Option<String>,
}

impl Row {
    pub fn outcome(&self) -> Outcome {
        let elapsed = Duration::from_nanos(self.elapsed_ns);
        if self.status == Status::Success {
            Outcome {
                success: true,
                elapsed,
                sem_acc: self.sem_acc,
                fully_accurate: self.fully_accurate,
            }
        } else {
            Outcome::failure(elapsed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub run: String,
    pub timeout_ns: u64,
    pub instances: usize,
    pub success_rate: f64,
    pub mean_accuracy: f64,
    pub full_ratio: f64,
    pub mean_runtime: f64,
}

impl AggregateRow {
    fn new(run: &str, timeout: Duration, a: Aggregate) -> Self {
        AggregateRow {
            run: run.to_string(),
            timeout_ns: timeout.as_nanos() as u64,
            instances: a.instances,
            success_rate: a.success_rate,
            mean_accuracy: a.mean_accuracy,
            full_ratio: a.full_ratio,
            mean_runtime: a.mean_runtime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub run_a: String,
    pub run_b: String,
    pub decided: usize,
    pub win_ratio_a: f64,
    pub win_ratio_b: f64,
    pub runtime_a: f64,
    pub runtime_b: f64,
    pub joint_successes: usize,
    pub joint_runtime_a: f64,
    pub joint_runtime_b: f64,
}

impl ComparisonRow {
    fn new(a: &str, b: &str, c: Comparison) -> Self {
        ComparisonRow {
            run_a: a.to_string(),
            run_b: b.to_string(),
            decided: c.decided,
            win_ratio_a: c.win_ratio.0,
            win_ratio_b: c.win_ratio.1,
            runtime_a: c.runtime.0,
            runtime_b: c.runtime.1,
            joint_successes: c.joint_successes,
            joint_runtime_a: c.joint_runtime.0,
            joint_runtime_b: c.joint_runtime.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ReportLine {
    Row(Row),
    Aggregate(AggregateRow),
    Comparison(ComparisonRow),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    pub rows: Vec<Row>,
    pub aggregates: Vec<AggregateRow>,
    pub comparisons: Vec<ComparisonRow>,
}

/// Independent consistency check: every positive matches and no negative
/// does, decided by the span-set matcher rather than the automaton.
pub fn verify(r: &Regex, instance: &BenchmarkInstance) -> bool {
    let m = |w: &[u8]| member_by_spans(r, w).unwrap_or(false);
    r.is_complete() && instance.train.positives.iter().all(|p| m(p)) && !instance.train.negatives.iter().any(|n| m(n))
}

/// Labelings for an instance's training positives.
pub enum SplitSource {
    GroundTruth,
    Predictions(Predictions),
    HeuristicRuns,
}

impl SplitSource {
    pub fn load(kind: &SplitterKind) -> anyhow::Result<Self> {
        Ok(match kind {
            SplitterKind::GroundTruth => SplitSource::GroundTruth,
            SplitterKind::HeuristicRuns => SplitSource::HeuristicRuns,
            SplitterKind::FromFile(p) => SplitSource::Predictions(
                Predictions::load(p).with_context(|| format!("loading predictions from {}", p.display()))?,
            ),
        })
    }

    fn labelings(&self, instance: &BenchmarkInstance) -> Result<Vec<SplitLabeling>, String> {
        let positives = &instance.train.positives;
        match self {
            SplitSource::GroundTruth => match &instance.labelings {
                Some(ls) => Ok(ls.clone()),
                None => ground_truth_split(&instance.target, positives).map_err(|e| e.to_string()),
            },
            SplitSource::Predictions(p) => p.labelings_for(positives).map_err(|e| e.to_string()),
            SplitSource::HeuristicRuns => Ok(heuristic_runs_split(positives)),
        }
    }
}

struct Attempt {
    status: Status,
    regex: Option<Regex>,
    used_fallback: bool,
    note: Option<String>,
}

fn attempt(config: &RunConfig, engine: &dyn Engine, source: &SplitSource, inst: &BenchmarkInstance, deadline: &Deadline<'_>) -> Attempt {
    let failed = |status, note: Option<String>| Attempt {
        status,
        regex: None,
        used_fallback: false,
        note,
    };
    match config.mode {
        Mode::Vanilla => {
            let task = Task::plain(&inst.train.alphabet, &inst.train.positives, &inst.train.negatives);
            match engine.synthesize(&task, deadline) {
                Ok(r) => Attempt {
                    status: Status::Success,
                    regex: Some(r),
                    used_fallback: false,
                    note: None,
                },
                Err(EngineFailure::Timeout) => failed(Status::Timeout, None),
                Err(EngineFailure::Infeasible) => failed(Status::Infeasible, None),
            }
        }
        Mode::Split => {
            let labelings = match source.labelings(inst) {
                Ok(ls) => ls,
                Err(e) => return failed(Status::SplitterError, Some(e)),
            };
            let partition = match partition_from_labelings(&labelings) {
                Ok(p) => p,
                Err(e) => return failed(Status::SplitterError, Some(e.to_string())),
            };
            let split_config = SplitConfig {
                strategy: config.strategy,
                fallback: config.fallback,
            };
            let executor: &dyn PartExecutor = match config.strategy {
                Strategy::IndependentParallel => &Threads,
                _ => &Sequential,
            };
            let out = synthesize_split(&inst.train, &partition, engine, &split_config, deadline, executor);
            let status = match out.status {
                SplitStatus::Success => Status::Success,
                SplitStatus::Timeout => Status::Timeout,
                SplitStatus::SplitFailure => Status::SplitFailure,
            };
            let note = (status == Status::SplitFailure)
                .then(|| out.final_regex.as_ref().map(|r| format!("rejected candidate {r}")))
                .flatten();
            Attempt {
                status,
                regex: if status == Status::Success { out.final_regex } else { None },
                used_fallback: out.used_fallback,
                note,
            }
        }
    }
}

/// Runs one instance under `config.timeout` and scores it.
pub fn run_instance(
    config: &RunConfig,
    engine: &dyn Engine,
    source: &SplitSource,
    index: usize,
    inst: &BenchmarkInstance,
) -> Row {
    let clock = StdClock::new();
    let deadline = Deadline::after(&clock, config.timeout);
    let mut a = attempt(config, engine, source, inst, &deadline);
    let elapsed = clock.now();
    if a.status == Status::Success && elapsed > config.timeout {
        a.status = Status::Timeout;
        a.note = Some("finished after the timeout".into());
    }
    if a.status == Status::Success && !verify(a.regex.as_ref().expect("success has a regex"), inst) {
        a.status = Status::Unverified;
    }
    let (acc, full) = match (&a.regex, a.status) {
        (Some(r), Status::Success) => (
            sem_acc(r, &inst.eval.positives, &inst.eval.negatives),
            fully_accurate(r, &inst.eval.positives, &inst.eval.negatives),
        ),
        _ => (0.0, false),
    };
    let split = config.mode == Mode::Split;
    Row {
        run: config.label(),
        instance: index,
        engine: config.engine,
        mode: config.mode,
        splitter: split.then(|| config.splitter.to_string()),
        strategy: split.then(|| config.strategy.as_str().to_string()),
        status: a.status,
        elapsed: elapsed.as_secs_f64(),
        elapsed_ns: elapsed.as_nanos() as u64,
        sem_acc: acc,
        fully_accurate: full,
        regex: a.regex.map(|r| r.to_text()),
        used_fallback: a.used_fallback,
        note: a.note,
    }
}

/// Runs every instance of one configuration, `jobs` instances at a time.
pub fn run_benchmark(instances: &[BenchmarkInstance], config: &RunConfig, jobs: usize) -> anyhow::Result<Vec<Row>> {
    let source = SplitSource::load(&config.splitter)?;
    let engine = config.engine.engine();
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new(vec![None; instances.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(inst) = instances.get(i) else { break };
                let row = run_instance(config, engine.as_ref(), &source, i, inst);
                log::debug!("{} #{i}: {:?} in {:.3}s", row.run, row.status, row.elapsed);
                rows.lock().expect("no poisoned workers")[i] = Some(row);
            });
        }
    });
    let rows: Vec<Row> = rows
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("every instance ran"))
        .collect();
    let agg = aggregate(&rows.iter().map(Row::outcome).collect::<Vec<_>>(), config.timeout);
    log::info!(
        "{}: success {:.2}% acc {:.2} full {:.2}% runtime {:.3}s",
        config.label(),
        agg.success_rate,
        agg.mean_accuracy,
        agg.full_ratio,
        agg.mean_runtime
    );
    Ok(rows)
}

/// Groups rows by run label, keeping first-appearance order.
fn runs_of(rows: &[Row]) -> Vec<(String, Vec<&Row>)> {
    let mut runs: Vec<(String, Vec<&Row>)> = Vec::new();
    for r in rows {
        match runs.iter_mut().find(|(l, _)| *l == r.run) {
            Some((_, v)) => v.push(r),
            None => runs.push((r.run.clone(), vec![r])),
        }
    }
    for (_, v) in &mut runs {
        v.sort_by_key(|r| r.instance);
    }
    runs
}

/// Computes aggregate and comparison records for `rows`.
pub fn build_report(rows: Vec<Row>, timeout: Duration) -> RunReport {
    let runs = runs_of(&rows);
    let outcomes: Vec<Vec<Outcome>> = runs.iter().map(|(_, v)| v.iter().map(|r| r.outcome()).collect()).collect();
    let aggregates = runs
        .iter()
        .zip(&outcomes)
        .map(|((label, _), o)| AggregateRow::new(label, timeout, aggregate(o, timeout)))
        .collect();
    let mut comparisons = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            if outcomes[i].len() == outcomes[j].len() {
                comparisons.push(ComparisonRow::new(&runs[i].0, &runs[j].0, compare(&outcomes[i], &outcomes[j], timeout)));
            }
        }
    }
    drop(runs);
    RunReport {
        rows,
        aggregates,
        comparisons,
    }
}

impl RunReport {
    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let lines: Vec<ReportLine> = self
            .rows
            .iter()
            .cloned()
            .map(ReportLine::Row)
            .chain(self.aggregates.iter().cloned().map(ReportLine::Aggregate))
            .chain(self.comparisons.iter().cloned().map(ReportLine::Comparison))
            .collect();
        crate::dataset::write_jsonl(path, &lines)?;
        std::fs::write(path.with_extension("csv"), self.aggregate_csv())?;
        std::fs::write(path.with_extension("win.csv"), self.comparison_csv())?;
        Ok(())
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let mut report = RunReport::default();
        for line in crate::dataset::read_jsonl::<ReportLine>(path)? {
            match line {
                ReportLine::Row(r) => report.rows.push(r),
                ReportLine::Aggregate(a) => report.aggregates.push(a),
                ReportLine::Comparison(c) => report.comparisons.push(c),
            }
        }
        Ok(report)
    }

    /// One line per run: success rate, accuracy and full ratio.
    pub fn aggregate_csv(&self) -> String {
        let mut s = String::from("run,instances,succ,acc,full,runtime\n");
        for a in &self.aggregates {
            s += &format!(
                "{},{},{:.2},{:.2},{:.2},{:.3}\n",
                a.run, a.instances, a.success_rate, a.mean_accuracy, a.full_ratio, a.mean_runtime
            );
        }
        s
    }

    /// Win ratios and both runtime columns per pair of runs.
    pub fn comparison_csv(&self) -> String {
        let mut s = String::from("run_a,run_b,win_a,win_b,runtime_a,runtime_b,success_runtime_a,success_runtime_b,joint\n");
        for c in &self.comparisons {
            s += &format!(
                "{},{},{:.2},{:.2},{:.3},{:.3},{:.3},{:.3},{}\n",
                c.run_a,
                c.run_b,
                c.win_ratio_a,
                c.win_ratio_b,
                c.runtime_a,
                c.runtime_b,
                c.joint_runtime_a,
                c.joint_runtime_b,
                c.joint_successes
            );
        }
        s
    }

    pub fn aggregate(&self, run: &str) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|a| a.run == run)
    }

    pub fn rows_of<'a>(&'a self, run: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.run == run)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IntegrityError {
    #[error("report has no aggregate records")]
    NoAggregates,
    #[error("runs use different timeouts")]
    MixedTimeouts,
    #[error("aggregate for {0} does not match its rows")]
    Aggregate(String),
    #[error("comparison records do not match the rows")]
    Comparisons,
}

/// Recomputes aggregates and comparisons from the rows and requires exact
/// agreement with the stored records.
pub fn check_report(report: &RunReport) -> Result<(), IntegrityError> {
    let first = report.aggregates.first().ok_or(IntegrityError::NoAggregates)?;
    if report.aggregates.iter().any(|a| a.timeout_ns != first.timeout_ns) {
        return Err(IntegrityError::MixedTimeouts);
    }
    let rebuilt = build_report(report.rows.clone(), Duration::from_nanos(first.timeout_ns));
    for a in &rebuilt.aggregates {
        if report.aggregate(&a.run) != Some(a) {
            return Err(IntegrityError::Aggregate(a.run.clone()));
        }
    }
    if rebuilt.aggregates.len() != report.aggregates.len() {
        let stray = report.aggregates.iter().find(|a| rebuilt.aggregate(&a.run).is_none());
        return Err(IntegrityError::Aggregate(stray.map(|a| a.run.clone()).unwrap_or_default()));
    }
    if rebuilt.comparisons != report.comparisons {
        return Err(IntegrityError::Comparisons);
    }
    Ok(())
}
