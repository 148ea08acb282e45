//! Best-first enumerative synthesis over hole templates.
//!
//! The search starts from a single hole and repeatedly expands the leftmost
//! hole of the cheapest template into every symbol, the wildcard and the
//! four operator forms. Templates are kept in canonical form (simplified,
//! associativity normalized, union operands ordered, holes renumbered), so a
//! text key suffices to drop duplicates.
//!
//! Two checks discard templates that cannot lead to a solution:
//!
//! - over-approximation: fill every hole with `.*`; if some positive is
//!   rejected, every completion rejects it too.
//! - under-approximation: fill every hole with `∅`; if some negative is
//!   accepted, every completion accepts it too.
//!
//! Both rest on monotonicity of the regex operators in their operands.

use alloc::collections::BinaryHeap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use hashbrown::HashSet;

use crate::alphabet::Alphabet;
use crate::clock::{Clock, Deadline, SynthesisBudget, Throttle};
use crate::examples::ExamplePair;
use crate::framework::{Context, Engine, EngineFailure, Task};
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::Regex;
use crate::Word;

/// A search template and its priority.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    pub template: Regex,
    pub cost: usize,
}

impl SearchState {
    pub fn new(template: Regex) -> Self {
        let cost = template.cost();
        SearchState { template, cost }
    }

    /// The search root: a single hole.
    pub fn root() -> Self {
        SearchState::new(Regex::Hole(0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("template has no hole to expand")]
    NoHole,
}

/// Successors of `state`: its leftmost hole replaced by each alphabet
/// symbol, `.`, `□+□`, `□□`, `□*` and `□?`, in that order. Successors are
/// canonicalized and costed; duplicates are not removed here.
pub fn expand(state: &SearchState, alphabet: &Alphabet) -> Result<Vec<SearchState>, ExpandError> {
    let Some(hole) = leftmost_hole(&state.template) else {
        return Err(ExpandError::NoHole);
    };
    let fresh = max_hole_id(&state.template) + 1;
    let (h1, h2) = (Regex::Hole(fresh), Regex::Hole(fresh + 1));
    let fills = alphabet
        .symbols()
        .iter()
        .map(|&b| Regex::Literal(b))
        .chain([
            Regex::Wildcard,
            Regex::union(h1.clone(), h2.clone()),
            Regex::concat(h1.clone(), h2),
            Regex::star(h1.clone()),
            Regex::question(h1),
        ]);
    Ok(fills
        .map(|fill| {
            let t = substitute_hole(&state.template, hole, &fill);
            SearchState::new(canonicalize(&t))
        })
        .collect())
}

/// True when no completion of `template` can accept every positive.
pub fn prune_overapprox(template: &Regex, positives: &[Word]) -> bool {
    let nfa = Nfa::compile(template, HoleFill::AnyString).expect("holes are filled");
    let mut scratch = Scratch::default();
    positives.iter().any(|p| !nfa.matches_with(p, &mut scratch))
}

/// True when every completion of `template` accepts some negative.
pub fn prune_underapprox(template: &Regex, negatives: &[Word]) -> bool {
    let nfa = Nfa::compile(template, HoleFill::Nothing).expect("holes are filled");
    let mut scratch = Scratch::default();
    negatives.iter().any(|n| nfa.matches_with(n, &mut scratch))
}

/// The enumerative synthesizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaRegex {
    pub max_states: usize,
    /// Over/under-approximation pruning. Disabling it changes only speed.
    pub pruning: bool,
}

impl Default for AlphaRegex {
    fn default() -> Self {
        AlphaRegex {
            max_states: SynthesisBudget::DEFAULT_MAX_STATES,
            pruning: true,
        }
    }
}

/// The search ran out of time or states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("synthesis budget exhausted")]
pub struct Timeout;

/// Synthesizes a minimal-cost regex consistent with `pair`.
pub fn synthesize(pair: &ExamplePair, budget: SynthesisBudget, clock: &dyn Clock) -> Result<Regex, Timeout> {
    let engine = AlphaRegex {
        max_states: budget.max_states,
        ..AlphaRegex::default()
    };
    let deadline = Deadline::after(clock, budget.timeout);
    let task = Task::plain(&pair.alphabet, &pair.positives, &pair.negatives);
    engine.search(&task, &deadline, &mut |_| {}).map_err(|_| Timeout)
}

impl AlphaRegex {
    /// Runs the search, reporting every popped state to `observe`.
    pub fn search(
        &self,
        task: &Task<'_>,
        deadline: &Deadline<'_>,
        observe: &mut dyn FnMut(&SearchState),
    ) -> Result<Regex, EngineFailure> {
        assert!(!task.positives.is_empty(), "synthesis needs at least one positive");
        let checker = Checker::new(task, self.pruning);
        let throttle = Throttle::new(64);
        // states are stored as their canonical text, one allocation each
        let mut visited: HashSet<Rc<str>> = HashSet::new();
        let mut frontier = BinaryHeap::new();
        let mut seq = 0u64;
        let root: Rc<str> = Rc::from(SearchState::root().template.to_text());
        visited.insert(root.clone());
        frontier.push(Entry {
            priority: SearchState::root().cost,
            seq,
            key: root,
        });
        let mut popped = 0usize;
        while let Some(Entry { priority, key, .. }) = frontier.pop() {
            if throttle.expired(deadline) {
                return Err(EngineFailure::Timeout);
            }
            popped += 1;
            if popped > self.max_states {
                return Err(EngineFailure::Timeout);
            }
            let template = Regex::parse_unchecked(&key).expect("stored templates parse");
            let state = SearchState { template, cost: priority };
            observe(&state);
            if state.template.is_complete() {
                // only consistent complete templates are ever queued
                return Ok(state.template);
            }
            for succ in expand(&state, task.alphabet).expect("incomplete template") {
                let text: Rc<str> = Rc::from(succ.template.to_text());
                if visited.contains(&text) || !checker.keep(&succ.template) {
                    visited.insert(text);
                    continue;
                }
                visited.insert(text.clone());
                seq += 1;
                frontier.push(Entry {
                    priority: priority.max(succ.cost),
                    seq,
                    key: text,
                });
            }
        }
        // The space is infinite, so an empty frontier means every branch was
        // pruned: nothing is consistent.
        Err(EngineFailure::Infeasible)
    }
}

impl Engine for AlphaRegex {
    fn name(&self) -> &'static str {
        "alpharegex"
    }

    fn synthesize(&self, task: &Task<'_>, deadline: &Deadline<'_>) -> Result<Regex, EngineFailure> {
        self.search(task, deadline, &mut |_| {})
    }
}

struct Entry {
    priority: usize,
    seq: u64,
    key: Rc<str>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: cheapest first, then oldest first.
    fn cmp(&self, other: &Self) -> Ordering {
        (Reverse(self.priority), Reverse(self.seq)).cmp(&(Reverse(other.priority), Reverse(other.seq)))
    }
}

struct Checker<'t> {
    positives: &'t [Word],
    negatives: &'t [Word],
    context: Option<&'t Context>,
    pruning: bool,
    scratch: core::cell::RefCell<Scratch>,
}

impl<'t> Checker<'t> {
    fn new(task: &'t Task<'t>, pruning: bool) -> Self {
        Checker {
            positives: task.positives,
            negatives: task.negatives,
            context: task.context,
            pruning,
            scratch: Default::default(),
        }
    }

    /// Whether `t` may be queued. Complete templates are queued only when
    /// consistent.
    fn keep(&self, t: &Regex) -> bool {
        let complete = t.is_complete();
        if !complete && !self.pruning {
            return true;
        }
        let mut scratch = self.scratch.borrow_mut();
        let over = Nfa::compile(t, HoleFill::AnyString).expect("holes are filled");
        if self.positives.iter().any(|p| !over.matches_with(p, &mut scratch)) {
            return false;
        }
        let under = match self.context {
            Some(ctx) => Nfa::compile_seq(&[&ctx.prefix, t, &ctx.suffix], HoleFill::Nothing),
            None => Nfa::compile(t, HoleFill::Nothing),
        }
        .expect("holes are filled");
        !self.negatives.iter().any(|n| under.matches_with(n, &mut scratch))
    }
}

fn leftmost_hole(r: &Regex) -> Option<u32> {
    r.nodes().into_iter().find_map(|n| match n {
        Regex::Hole(id) => Some(*id),
        _ => None,
    })
}

fn max_hole_id(r: &Regex) -> u32 {
    r.nodes()
        .into_iter()
        .filter_map(|n| match n {
            Regex::Hole(id) => Some(*id),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn substitute_hole(r: &Regex, hole: u32, fill: &Regex) -> Regex {
    match r {
        Regex::Hole(id) if *id == hole => fill.clone(),
        Regex::Union(a, b) => Regex::union(substitute_hole(a, hole, fill), substitute_hole(b, hole, fill)),
        Regex::Concat(a, b) => Regex::concat(substitute_hole(a, hole, fill), substitute_hole(b, hole, fill)),
        Regex::Star(a) => Regex::star(substitute_hole(a, hole, fill)),
        Regex::Question(a) => Regex::question(substitute_hole(a, hole, fill)),
        other => other.clone(),
    }
}

/// Canonical representative of a template's equivalence class under
/// simplification, associativity and union commutativity.
///
/// Never increases cost, and holes come out numbered 0, 1, ... in
/// pre-order.
pub fn canonicalize(t: &Regex) -> Regex {
    let mut out = normalize(&t.simplify());
    let mut next = 0;
    renumber(&mut out, &mut next);
    out
}

fn normalize(r: &Regex) -> Regex {
    match r {
        Regex::Concat(..) => {
            let mut parts = Vec::new();
            flatten(r, true, &mut parts);
            Regex::concat_all(parts.iter().map(|p| normalize(p)))
        }
        Regex::Union(..) => {
            let mut parts = Vec::new();
            flatten(r, false, &mut parts);
            let (mut complete, open): (Vec<Regex>, Vec<Regex>) =
                parts.iter().map(|p| normalize(p)).partition(Regex::is_complete);
            complete.sort();
            complete.dedup();
            complete
                .into_iter()
                .chain(open)
                .reduce(Regex::union)
                .expect("union has operands")
        }
        Regex::Star(a) => Regex::star(normalize(a)),
        Regex::Question(a) => Regex::question(normalize(a)),
        other => other.clone(),
    }
}

fn flatten<'a>(r: &'a Regex, concat: bool, out: &mut Vec<&'a Regex>) {
    match (r, concat) {
        (Regex::Concat(a, b), true) | (Regex::Union(a, b), false) => {
            flatten(a, concat, out);
            flatten(b, concat, out);
        }
        _ => out.push(r),
    }
}

fn renumber(r: &mut Regex, next: &mut u32) {
    match r {
        Regex::Hole(id) => {
            *id = *next;
            *next += 1;
        }
        Regex::Union(a, b) | Regex::Concat(a, b) => {
            renumber(a, next);
            renumber(b, next);
        }
        Regex::Star(a) | Regex::Question(a) => renumber(a, next),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::TickClock;
    use core::time::Duration;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.as_bytes().to_vec()).collect()
    }

    fn pair(sigma: &[u8], p: &[&str], n: &[&str]) -> ExamplePair {
        ExamplePair::new(Alphabet::new(sigma).unwrap(), words(p), words(n))
    }

    fn run(pair: &ExamplePair) -> Result<Regex, Timeout> {
        let clock = TickClock::new(Duration::from_nanos(1));
        synthesize(pair, SynthesisBudget::new(Duration::from_secs(3600)).with_max_states(200_000), &clock)
    }

    #[test]
    fn root_expansion_has_one_successor_per_choice() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let succ = expand(&SearchState::root(), &sigma).unwrap();
        let texts: Vec<String> = succ.iter().map(|s| s.template.to_text()).collect();
        assert_eq!(texts, ["a", "b", ".", "@h{0}+@h{1}", "@h{0}@h{1}", "@h{0}*", "@h{0}?"]);
        assert_eq!(succ.iter().map(|s| s.cost).collect::<Vec<_>>(), [1, 1, 2, 3, 3, 2, 2]);
    }

    #[test]
    fn expansion_fills_leftmost_hole_only() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let state = SearchState::new(Regex::concat(Regex::Literal(b'a'), Regex::Hole(0)));
        for s in expand(&state, &sigma).unwrap() {
            assert!(s.template.to_text().starts_with('a'));
        }
        let done = SearchState::new(Regex::Literal(b'a'));
        assert_eq!(expand(&done, &sigma), Err(ExpandError::NoHole));
    }

    #[test]
    fn canonical_form_merges_commuted_unions() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let x = canonicalize(&Regex::parse("b+a", &sigma).unwrap());
        let y = canonicalize(&Regex::parse("a+b", &sigma).unwrap());
        assert_eq!(x, y);
        let x = canonicalize(&Regex::parse("a(ba)", &sigma).unwrap());
        assert_eq!(x.to_text(), "aba");
        let t = canonicalize(&Regex::union(Regex::Hole(7), Regex::Literal(b'a')));
        assert_eq!(t.to_text(), "a+@h{0}");
    }

    #[test]
    fn overapprox_examples() {
        let p = words(&["aa"]);
        assert!(prune_overapprox(&Regex::concat(Regex::Literal(b'b'), Regex::Hole(0)), &p));
        assert!(!prune_overapprox(&Regex::Hole(0), &p));
    }

    #[test]
    fn underapprox_examples() {
        let t = Regex::concat(Regex::Literal(b'a'), Regex::question(Regex::Hole(0)));
        assert!(prune_underapprox(&t, &words(&["a"])));
        assert!(!prune_underapprox(&Regex::Hole(0), &words(&["x"])));
    }

    #[test]
    fn prefers_literal_over_wildcard() {
        assert_eq!(run(&pair(b"ab", &["a"], &[])).unwrap().to_text(), "a");
    }

    #[test]
    fn finds_minimal_regex_for_zeros() {
        let r = run(&pair(b"01", &["0", "00"], &["1"])).unwrap();
        // 0* has cost 2 and is consistent; nothing of cost 1 is.
        assert_eq!(r.to_text(), "0*");
    }

    #[test]
    fn contradictory_examples_time_out() {
        assert_eq!(run(&pair(b"a", &["aaaa"], &["aaaa"])), Err(Timeout));
    }

    #[test]
    fn context_constrains_negatives() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let ctx = Context {
            prefix: Regex::parse("ab*", &sigma).unwrap(),
            suffix: Regex::Epsilon,
        };
        let (p, n) = (words(&["aa", "aaa"]), words(&["aaaa"]));
        let task = Task {
            alphabet: &sigma,
            positives: &p,
            negatives: &n,
            context: Some(&ctx),
        };
        let clock = TickClock::new(Duration::from_nanos(1));
        let engine = AlphaRegex {
            max_states: 20_000,
            pruning: true,
        };
        let out = engine.search(&task, &Deadline::never(&clock), &mut |_| {});
        assert_eq!(out, Err(EngineFailure::Timeout));
    }
}
