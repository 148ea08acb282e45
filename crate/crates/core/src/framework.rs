//! Split synthesis: one subexpression per part of a split partition, glued
//! together with the partition's wildcard slots.
//!
//! For a partition with parts `P_1..P_S` and slots `W_0..W_S`, the final
//! regex is `W_0 R_1 W_1 ... R_S W_S` where each present slot is `.*` and
//! absent slots are dropped. Every `R_i` accepts all of `P_i`. Intermediate
//! parts reject `N \ P_i` (or, under [`Strategy::PrefixConditionedAll`], the
//! fixed prefix followed by `R_i` rejects it); the last part is synthesized so
//! that the whole concatenation rejects every string of `N`.

use alloc::vec::Vec;
use core::time::Duration;

use crate::alphabet::Alphabet;
use crate::clock::Deadline;
use crate::examples::ExamplePair;
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::Regex;
use crate::splitter::SplitPartition;
use crate::Word;

/// Fixed regexes around the subexpression being synthesized. A candidate
/// `R` is consistent when `prefix · R · suffix` rejects every negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub prefix: Regex,
    pub suffix: Regex,
}

impl Context {
    /// Whether the context is `ε · R · ε`.
    pub fn is_trivial(&self) -> bool {
        self.prefix == Regex::Epsilon && self.suffix == Regex::Epsilon
    }
}

/// One synthesis problem handed to an engine.
#[derive(Debug, Clone, Copy)]
pub struct Task<'a> {
    pub alphabet: &'a Alphabet,
    pub positives: &'a [Word],
    pub negatives: &'a [Word],
    pub context: Option<&'a Context>,
}

impl<'a> Task<'a> {
    pub fn plain(alphabet: &'a Alphabet, positives: &'a [Word], negatives: &'a [Word]) -> Self {
        Task {
            alphabet,
            positives,
            negatives,
            context: None,
        }
    }

    /// Whether `r` solves the task.
    pub fn accepts(&self, r: &Regex) -> bool {
        let mut scratch = Scratch::default();
        let Ok(pos) = Nfa::compile(r, HoleFill::Reject) else {
            return false;
        };
        if !self.positives.iter().all(|p| pos.matches_with(p, &mut scratch)) {
            return false;
        }
        let neg = match self.context {
            Some(ctx) => Nfa::compile_seq(&[&ctx.prefix, r, &ctx.suffix], HoleFill::Reject),
            None => Ok(pos),
        }
        .expect("compiled above");
        !self.negatives.iter().any(|n| neg.matches_with(n, &mut scratch))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, thiserror::Error)]
pub enum EngineFailure {
    #[error("synthesis timed out")]
    Timeout,
    /// The engine proved that no regex solves the task.
    #[error("no consistent regex exists")]
    Infeasible,
}

/// A regex synthesizer.
pub trait Engine: Sync {
    fn name(&self) -> &'static str;

    /// Returns a regex solving `task`, giving up once `deadline` passes.
    fn synthesize(&self, task: &Task<'_>, deadline: &Deadline<'_>) -> Result<Regex, EngineFailure>;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Parts `1..S-1` independently and in order, then the last part
    /// prefix-conditioned.
    #[default]
    IndependentSequential,
    /// As `IndependentSequential`, but parts `1..S-1` may run concurrently.
    IndependentParallel,
    /// Every part prefix-conditioned on all parts before it.
    PrefixConditionedAll,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::IndependentSequential,
        Strategy::IndependentParallel,
        Strategy::PrefixConditionedAll,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::IndependentSequential => "seq",
            Strategy::IndependentParallel => "par",
            Strategy::PrefixConditionedAll => "prefix-all",
        }
    }

    pub fn from_name(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

/// The result of synthesizing one part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartOutcome {
    pub result: Result<Regex, EngineFailure>,
    pub elapsed: Duration,
    pub engine_called: bool,
}

/// Runs independent part jobs. Results come back in job order.
pub trait PartExecutor: Sync {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> PartOutcome + Sync)) -> Vec<PartOutcome>;
}

/// Runs jobs one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PartExecutor for Sequential {
    fn run(&self, jobs: usize, job: &(dyn Fn(usize) -> PartOutcome + Sync)) -> Vec<PartOutcome> {
        (0..jobs).map(job).collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SplitConfig {
    pub strategy: Strategy,
    /// On split failure, retry with the bare engine on the whole example
    /// set using whatever time remains.
    pub fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitStatus {
    Success,
    Timeout,
    SplitFailure,
}

impl SplitStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitStatus::Success => "success",
            SplitStatus::Timeout => "timeout",
            SplitStatus::SplitFailure => "split-failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSynthesisResult {
    /// `R_1..R_k` for the parts synthesized before stopping.
    pub subregexes: Vec<Regex>,
    /// The concatenation; absent on timeout.
    pub final_regex: Option<Regex>,
    pub status: SplitStatus,
    pub part_elapsed: Vec<Duration>,
    pub total_elapsed: Duration,
    pub engine_calls: usize,
    /// Set when the reported regex came from the whole-set fallback.
    pub used_fallback: bool,
}

/// True iff `candidate` accepts every string of `part` and `prefix ·
/// candidate` rejects every string of `negatives`.
pub fn prefix_conditioned_accept(prefix: &Regex, candidate: &Regex, part: &[Word], negatives: &[Word]) -> bool {
    let mut scratch = Scratch::default();
    let Ok(c) = Nfa::compile(candidate, HoleFill::Reject) else {
        return false;
    };
    let Ok(joined) = Nfa::compile_seq(&[prefix, candidate], HoleFill::Reject) else {
        return false;
    };
    part.iter().all(|p| c.matches_with(p, &mut scratch)) && !negatives.iter().any(|n| joined.matches_with(n, &mut scratch))
}

fn slot(present: bool) -> Regex {
    if present {
        Regex::any_string()
    } else {
        Regex::Epsilon
    }
}

fn distinct(words: &[Word]) -> Vec<Word> {
    let mut v = words.to_vec();
    v.sort();
    v.dedup();
    v
}

struct PartJob {
    positives: Vec<Word>,
    negatives: Vec<Word>,
    context: Option<Context>,
}

impl PartJob {
    fn run(&self, alphabet: &Alphabet, engine: &dyn Engine, deadline: &Deadline<'_>) -> PartOutcome {
        let start = deadline.now();
        let (result, engine_called) = if let [only] = &self.positives[..] {
            (Ok(Regex::literal_word(only)), false)
        } else {
            let task = Task {
                alphabet,
                positives: &self.positives,
                negatives: &self.negatives,
                context: self.context.as_ref(),
            };
            (engine.synthesize(&task, deadline), true)
        };
        PartOutcome {
            result,
            elapsed: deadline.now().saturating_sub(start),
            engine_called,
        }
    }

    /// Some positive, placed in its context, already equals a negative: no
    /// candidate accepting the positives can work.
    fn hopeless(&self) -> bool {
        let Some(ctx) = &self.context else {
            return self.positives.iter().any(|p| self.negatives.contains(p));
        };
        let mut scratch = Scratch::default();
        self.positives.iter().any(|p| {
            let lit = Regex::literal_word(p);
            let nfa = Nfa::compile_seq(&[&ctx.prefix, &lit, &ctx.suffix], HoleFill::Reject).expect("complete");
            self.negatives.iter().any(|n| nfa.matches_with(n, &mut scratch))
        })
    }
}

fn contextual(prefix: Regex, suffix: Regex) -> Option<Context> {
    let ctx = Context { prefix, suffix };
    (!ctx.is_trivial()).then_some(ctx)
}

/// Synthesizes a regex for `pair` part by part.
///
/// All parts share `deadline`; each part may use whatever time is left.
pub fn synthesize_split(
    pair: &ExamplePair,
    partition: &SplitPartition,
    engine: &dyn Engine,
    config: &SplitConfig,
    deadline: &Deadline<'_>,
    executor: &dyn PartExecutor,
) -> SplitSynthesisResult {
    assert!(!pair.positives.is_empty(), "split synthesis needs at least one positive");
    let started = deadline.now();
    let s = partition.part_count();
    let slots: Vec<Regex> = partition.wildcard_slots.iter().map(|&w| slot(w)).collect();
    let parts: Vec<Vec<Word>> = (1..=s).map(|i| distinct(&partition.part(i))).collect();
    let minus_part = |i: usize| -> Vec<Word> {
        pair.negatives
            .iter()
            .filter(|n| parts[i - 1].binary_search(n).is_err())
            .cloned()
            .collect()
    };

    let mut out = SplitSynthesisResult {
        subregexes: Vec::new(),
        final_regex: None,
        status: SplitStatus::Timeout,
        part_elapsed: Vec::new(),
        total_elapsed: Duration::ZERO,
        engine_calls: 0,
        used_fallback: false,
    };
    let record = |out: &mut SplitSynthesisResult, o: &PartOutcome| {
        out.part_elapsed.push(o.elapsed);
        out.engine_calls += usize::from(o.engine_called);
    };

    // prefix for part i: W_0 R_1 W_1 ... R_{i-1} W_{i-1}
    let prefix_upto = |subs: &[Regex], i: usize| -> Regex {
        let mut seq = Vec::with_capacity(2 * i);
        seq.push(slots[0].clone());
        for (k, r) in subs.iter().take(i - 1).enumerate() {
            seq.push(r.clone());
            seq.push(slots[k + 1].clone());
        }
        Regex::concat_all(seq).simplify()
    };

    let mut failed = None;
    if s > 1 {
        match config.strategy {
            Strategy::IndependentSequential | Strategy::IndependentParallel => {
                let jobs: Vec<PartJob> = (1..s)
                    .map(|i| PartJob {
                        positives: parts[i - 1].clone(),
                        negatives: minus_part(i),
                        context: None,
                    })
                    .collect();
                let outcomes = if config.strategy == Strategy::IndependentParallel {
                    executor.run(jobs.len(), &|k| jobs[k].run(&pair.alphabet, engine, deadline))
                } else {
                    // stop at the first failed part
                    let mut v = Vec::new();
                    for job in &jobs {
                        let o = job.run(&pair.alphabet, engine, deadline);
                        let stop = o.result.is_err();
                        v.push(o);
                        if stop {
                            break;
                        }
                    }
                    v
                };
                for o in outcomes {
                    record(&mut out, &o);
                    match o.result {
                        Ok(r) if failed.is_none() => out.subregexes.push(r),
                        Ok(_) => {}
                        Err(e) => {
                            failed.get_or_insert(e);
                        }
                    }
                }
            }
            Strategy::PrefixConditionedAll => {
                for i in 1..s {
                    let job = PartJob {
                        positives: parts[i - 1].clone(),
                        negatives: minus_part(i),
                        context: contextual(prefix_upto(&out.subregexes, i), Regex::Epsilon),
                    };
                    if job.hopeless() {
                        failed = Some(EngineFailure::Infeasible);
                        break;
                    }
                    let o = job.run(&pair.alphabet, engine, deadline);
                    record(&mut out, &o);
                    match o.result {
                        Ok(r) => out.subregexes.push(r),
                        Err(e) => {
                            failed = Some(e);
                            break;
                        }
                    }
                }
            }
        }
    }

    if failed.is_none() && s > 0 {
        let last = PartJob {
            positives: parts[s - 1].clone(),
            negatives: pair.negatives.clone(),
            context: contextual(prefix_upto(&out.subregexes, s), slots[s].clone()),
        };
        if last.hopeless() {
            // Report a diagnostic final regex: the last part synthesized
            // without its prefix condition.
            let plain = PartJob {
                positives: last.positives.clone(),
                negatives: minus_part(s),
                context: None,
            };
            let o = plain.run(&pair.alphabet, engine, deadline);
            record(&mut out, &o);
            match o.result {
                Ok(r) => {
                    out.subregexes.push(r);
                    failed = Some(EngineFailure::Infeasible);
                }
                Err(e) => failed = Some(e),
            }
        } else {
            let o = last.run(&pair.alphabet, engine, deadline);
            record(&mut out, &o);
            match o.result {
                Ok(r) => out.subregexes.push(r),
                Err(e) => failed = Some(e),
            }
        }
    }

    if out.subregexes.len() == s {
        let mut seq = Vec::with_capacity(2 * s + 1);
        seq.push(slots[0].clone());
        for (k, r) in out.subregexes.iter().enumerate() {
            seq.push(r.clone());
            seq.push(slots[k + 1].clone());
        }
        let final_regex = Regex::concat_all(seq).simplify();
        let task = Task::plain(&pair.alphabet, &pair.positives, &pair.negatives);
        out.status = if failed.is_none() && task.accepts(&final_regex) {
            SplitStatus::Success
        } else {
            SplitStatus::SplitFailure
        };
        out.final_regex = Some(final_regex);
    } else {
        out.status = match failed {
            Some(EngineFailure::Infeasible) => SplitStatus::SplitFailure,
            _ => SplitStatus::Timeout,
        };
    }

    if out.status == SplitStatus::SplitFailure && config.fallback && !deadline.expired() {
        let task = Task::plain(&pair.alphabet, &pair.positives, &pair.negatives);
        out.engine_calls += 1;
        match engine.synthesize(&task, deadline) {
            Ok(r) => {
                out.final_regex = Some(r);
                out.status = SplitStatus::Success;
                out.used_fallback = true;
            }
            Err(EngineFailure::Timeout) => out.status = SplitStatus::Timeout,
            Err(EngineFailure::Infeasible) => {}
        }
    }
    out.total_elapsed = deadline.now().saturating_sub(started);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpharegex::AlphaRegex;
    use crate::clock::TickClock;
    use crate::examples::SplitLabeling;
    use crate::splitter::{heuristic_runs_split, partition_from_labelings};
    use alloc::vec;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.as_bytes().to_vec()).collect()
    }

    /// Answers with the star of the positives' symbols, counting calls.
    struct StarEngine(core::sync::atomic::AtomicUsize);

    impl Engine for StarEngine {
        fn name(&self) -> &'static str {
            "star"
        }

        fn synthesize(&self, task: &Task<'_>, _: &Deadline<'_>) -> Result<Regex, EngineFailure> {
            self.0.fetch_add(1, core::sync::atomic::Ordering::Relaxed);
            let mut syms: Vec<u8> = task.positives.concat();
            syms.sort();
            syms.dedup();
            let r = syms
                .into_iter()
                .map(Regex::Literal)
                .reduce(Regex::union)
                .map(Regex::star)
                .unwrap_or(Regex::Epsilon);
            if task.accepts(&r) {
                Ok(r)
            } else {
                Err(EngineFailure::Infeasible)
            }
        }
    }

    #[test]
    fn prefix_conditioning_examples() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let prefix = Regex::parse("ab*", &sigma).unwrap();
        let cand = Regex::parse("aaa?", &sigma).unwrap();
        let (p, n) = (words(&["aa", "aaa"]), words(&["aaaa"]));
        assert!(!prefix_conditioned_accept(&prefix, &cand, &p, &n));
        assert!(prefix_conditioned_accept(&Regex::Epsilon, &cand, &p, &n));
        assert!(prefix_conditioned_accept(&prefix, &cand, &p, &[]));
        assert!(!prefix_conditioned_accept(&Regex::Epsilon, &cand, &words(&["b"]), &[]));
    }

    #[test]
    fn runs_split_counterexample_is_a_split_failure() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let pair = ExamplePair::new(sigma, words(&["abbaaa", "abaaa", "aaa"]), words(&["aaaa"]));
        let partition = partition_from_labelings(&heuristic_runs_split(&pair.positives)).unwrap();
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = AlphaRegex::default();
        let res = synthesize_split(
            &pair,
            &partition,
            &engine,
            &SplitConfig::default(),
            &Deadline::never(&clock),
            &Sequential,
        );
        assert_eq!(res.status, SplitStatus::SplitFailure);
        assert!(res.final_regex.unwrap().matches(b"aaaa").unwrap());
    }

    #[test]
    fn singleton_parts_skip_the_engine() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let pair = ExamplePair::new(sigma, words(&["ab", "abb"]), words(&["b"]));
        let labels = [
            SplitLabeling::from_text(b"ab", "12").unwrap(),
            SplitLabeling::from_text(b"abb", "122").unwrap(),
        ];
        let partition = partition_from_labelings(&labels).unwrap();
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = StarEngine(Default::default());
        for strategy in Strategy::ALL {
            let config = SplitConfig { strategy, fallback: false };
            let res = synthesize_split(&pair, &partition, &engine, &config, &Deadline::never(&clock), &Sequential);
            assert_eq!(res.status, SplitStatus::Success);
            assert_eq!(res.engine_calls, 1);
            assert_eq!(res.final_regex.unwrap().to_text(), "ab*");
        }
    }

    #[test]
    fn wildcard_slots_become_any_string() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let pair = ExamplePair::new(sigma, words(&["ab", "aab"]), words(&["b"]));
        let labels = [
            SplitLabeling::from_text(b"ab", "10").unwrap(),
            SplitLabeling::from_text(b"aab", "110").unwrap(),
        ];
        let partition = partition_from_labelings(&labels).unwrap();
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = StarEngine(Default::default());
        let res = synthesize_split(
            &pair,
            &partition,
            &engine,
            &SplitConfig::default(),
            &Deadline::never(&clock),
            &Sequential,
        );
        // a* followed by .* would accept "b"
        assert_eq!(res.status, SplitStatus::SplitFailure);
        let pair = ExamplePair::new(pair.alphabet.clone(), pair.positives.clone(), words(&["b", "ba"]));
        let res = synthesize_split(
            &pair,
            &partition,
            &AlphaRegex::default(),
            &SplitConfig::default(),
            &Deadline::never(&clock),
            &Sequential,
        );
        assert_eq!(res.status, SplitStatus::Success);
        assert!(res.final_regex.unwrap().to_text().ends_with(".*"));
    }

    #[test]
    fn fallback_rescues_split_failures() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let pair = ExamplePair::new(sigma, words(&["abbaaa", "abaaa", "aaa"]), words(&["aaaa"]));
        let partition = partition_from_labelings(&heuristic_runs_split(&pair.positives)).unwrap();
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = AlphaRegex::default();
        let config = SplitConfig {
            strategy: Strategy::IndependentSequential,
            fallback: true,
        };
        let res = synthesize_split(&pair, &partition, &engine, &config, &Deadline::never(&clock), &Sequential);
        assert_eq!(res.status, SplitStatus::Success);
        assert!(res.used_fallback);
        let r = res.final_regex.unwrap();
        assert!(pair.positives.iter().all(|p| r.matches(p).unwrap()));
        assert!(!r.matches(b"aaaa").unwrap());
    }

    #[test]
    fn single_part_matches_the_bare_engine() {
        let sigma = Alphabet::new(b"01").unwrap();
        let pair = ExamplePair::new(sigma, words(&["0", "00", "010"]), words(&["1", "11"]));
        let labels: Vec<SplitLabeling> = pair
            .positives
            .iter()
            .map(|p| SplitLabeling::new(p.clone(), vec![1; p.len()]).unwrap())
            .collect();
        let partition = partition_from_labelings(&labels).unwrap();
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = AlphaRegex::default();
        let bare = engine
            .synthesize(
                &Task::plain(&pair.alphabet, &pair.positives, &pair.negatives),
                &Deadline::never(&clock),
            )
            .unwrap();
        for strategy in Strategy::ALL {
            let config = SplitConfig { strategy, fallback: false };
            let res = synthesize_split(&pair, &partition, &engine, &config, &Deadline::never(&clock), &Sequential);
            assert_eq!(res.final_regex.as_ref(), Some(&bare.simplify()));
        }
    }

    #[test]
    fn exhausted_deadline_reports_timeout() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let pair = ExamplePair::new(sigma, words(&["ab", "abab", "b"]), words(&["a", "ba"]));
        let labels: Vec<SplitLabeling> = pair
            .positives
            .iter()
            .map(|p| SplitLabeling::new(p.clone(), vec![1; p.len()]).unwrap())
            .collect();
        let partition = partition_from_labelings(&labels).unwrap();
        let clock = TickClock::new(Duration::from_secs(1));
        let deadline = Deadline::after(&clock, Duration::from_secs(1));
        let res = synthesize_split(
            &pair,
            &partition,
            &AlphaRegex::default(),
            &SplitConfig::default(),
            &deadline,
            &Sequential,
        );
        assert_eq!(res.status, SplitStatus::Timeout);
        assert!(res.final_regex.is_none());
    }
}
