use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context as _};
use clap::{Parser, Subcommand};
use regsynth::bench::{build_report, check_report, run_benchmark, EngineKind, Mode, RunConfig, RunReport, SplitterKind};
use regsynth::dataset::{load_dataset, make_instances, write_jsonl, MakeConfig, NegMode};
use regsynth_core::framework::Strategy;
use regsynth_core::random::gen_random_regexes;
use regsynth_core::Alphabet;

#[derive(Parser)]
#[command(name = "synth", version, about = "Regex synthesis from examples: datasets, benchmarks, reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write random regexes, one per line with their alphabet.
    GenRandom {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate example sets for a list of regexes.
    MakeDataset {
        #[arg(long)]
        regexes: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = NegMode::Symbol)]
        neg_mode: NegMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run engines over a dataset and write a report.
    Run {
        #[arg(long)]
        dataset: PathBuf,
        /// One or more engines, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "alpharegex")]
        engine: Vec<EngineKind>,
        /// One or more modes, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "vanilla")]
        mode: Vec<Mode>,
        /// gt, runs or file:PATH
        #[arg(long, default_value = "gt")]
        splitter: SplitterKind,
        /// seq, par or prefix-all; comma separated for several runs.
        #[arg(long, value_delimiter = ',', default_value = "seq", value_parser = parse_strategy)]
        strategy: Vec<Strategy>,
        /// Seconds per instance.
        #[arg(long, default_value_t = 3.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Retry failed splits with the bare engine on the remaining time.
        #[arg(long)]
        fallback: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a report's aggregates against its rows and print them.
    Score {
        #[arg(long)]
        report: PathBuf,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    Strategy::from_name(s).ok_or_else(|| format!("unknown strategy {s:?}; expected seq, par or prefix-all"))
}

fn read_lines(path: &PathBuf) -> anyhow::Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().map(str::to_string).collect())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::GenRandom {
            count,
            alphabet_size,
            seed,
            output,
        } => {
            let regexes = gen_random_regexes(count, alphabet_size, seed)?;
            let symbols: String = Alphabet::digits(alphabet_size)?.symbols().iter().map(|&b| b as char).collect();
            let text: String = regexes.iter().map(|r| format!("{}\t{symbols}\n", r.to_text())).collect();
            std::fs::write(&output, text).with_context(|| format!("writing {}", output.display()))?;
        }
        Command::MakeDataset {
            regexes,
            max_len,
            neg_mode,
            seed,
            output,
        } => {
            let lines = read_lines(&regexes)?;
            let (records, skips) = make_instances(&lines, &MakeConfig::new(max_len, neg_mode, seed));
            write_jsonl(&output, &records)?;
            let skip_path = output.with_extension("skips.jsonl");
            write_jsonl(&skip_path, &skips)?;
            eprintln!(
                "{} instances, {} skipped (reasons in {})",
                records.len(),
                skips.len(),
                skip_path.display()
            );
        }
        Command::Run {
            dataset,
            engine,
            mode,
            splitter,
            strategy,
            timeout,
            jobs,
            fallback,
            output,
        } => {
            if !(timeout.is_finite() && timeout > 0.0) {
                bail!("timeout must be a positive number of seconds");
            }
            let timeout = Duration::from_secs_f64(timeout);
            let instances = load_dataset(&dataset)?;
            if instances.is_empty() {
                bail!("{} holds no instances", dataset.display());
            }
            let mut configs = Vec::new();
            for &e in &engine {
                for &m in &mode {
                    match m {
                        Mode::Vanilla => configs.push(RunConfig::vanilla(e, timeout)),
                        Mode::Split => configs.extend(strategy.iter().map(|&s| RunConfig {
                            fallback,
                            ..RunConfig::split(e, splitter.clone(), s, timeout)
                        })),
                    }
                }
            }
            let mut rows = Vec::new();
            for c in &configs {
                rows.extend(run_benchmark(&instances, c, jobs)?);
            }
            let report = build_report(rows, timeout);
            report.write(&output)?;
            print!("{}", report.aggregate_csv());
        }
        Command::Score { report } => {
            let r = RunReport::read(&report)?;
            check_report(&r).with_context(|| format!("checking {}", report.display()))?;
            print!("{}", r.aggregate_csv());
            if !r.comparisons.is_empty() {
                print!("{}", r.comparison_csv());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
