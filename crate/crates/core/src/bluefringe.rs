//! Evidence-driven state merging (red/blue framework) and conversion of the
//! learned automaton back to a regex.
//!
//! The learner starts from the prefix tree acceptor of the examples. The
//! root is red; the blue states are the non-red children of red states.
//! Each round either promotes a blue state that cannot be merged with any
//! red state, or performs the merge with the most label agreements. States
//! never labeled by an example end up accepting.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::clock::{Deadline, Throttle};
use crate::dfa::Dfa;
use crate::examples::ExamplePair;
use crate::framework::{Engine, EngineFailure, Task};
use crate::nfa::{HoleFill, Nfa, Scratch};
use crate::regex::Regex;
use crate::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Unknown,
    Accept,
    Reject,
}

/// A string given as both positive and negative.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("string {:?} is both positive and negative", crate::word_to_string(.0))]
pub struct ConflictError(pub Word);

/// Prefix tree acceptor. State 0 is the root; states are numbered in
/// length-lexicographic order of the prefixes they represent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Apta {
    alphabet: Alphabet,
    // delta[q * k + symbol index]
    delta: Vec<Option<usize>>,
    labels: Vec<Label>,
    // incoming edge index, None for the root
    parent: Vec<Option<usize>>,
}

impl Apta {
    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, q: usize) -> Label {
        self.labels[q]
    }

    pub fn next(&self, q: usize, symbol: u8) -> Option<usize> {
        let i = self.alphabet.index_of(symbol)?;
        self.delta[q * self.alphabet.len() + i]
    }

    /// The state reached by `w`, if any.
    pub fn walk(&self, w: &[u8]) -> Option<usize> {
        w.iter().try_fold(0, |q, &b| self.next(q, b))
    }
}

pub fn build_apta(pair: &ExamplePair) -> Result<Apta, ConflictError> {
    build(&pair.alphabet, &pair.positives, &pair.negatives)
}

fn build(alphabet: &Alphabet, positives: &[Word], negatives: &[Word]) -> Result<Apta, ConflictError> {
    let k = alphabet.len();
    let mut all: Vec<(&Word, Label)> = positives
        .iter()
        .map(|w| (w, Label::Accept))
        .chain(negatives.iter().map(|w| (w, Label::Reject)))
        .collect();
    all.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(b.0)));

    // insert every prefix in length-lex order so ids follow that order
    let mut prefixes: Vec<&[u8]> = all.iter().flat_map(|(w, _)| (0..=w.len()).map(move |i| &w[..i])).collect();
    prefixes.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    prefixes.dedup();

    let mut apta = Apta {
        alphabet: alphabet.clone(),
        delta: vec![None; k],
        labels: vec![Label::Unknown],
        parent: vec![None],
    };
    for p in prefixes.into_iter().skip(1) {
        let (&last, head) = p.split_last().expect("non-empty");
        let q = apta.walk(head).expect("shorter prefixes come first");
        let edge = q * k + alphabet.index_of(last).expect("symbol in alphabet");
        let id = apta.labels.len();
        apta.delta[edge] = Some(id);
        apta.delta.extend(core::iter::repeat_n(None, k));
        apta.labels.push(Label::Unknown);
        apta.parent.push(Some(edge));
    }
    for (w, label) in all {
        let q = apta.walk(w).expect("inserted");
        match apta.labels[q] {
            Label::Unknown => apta.labels[q] = label,
            l if l == label => {}
            _ => return Err(ConflictError(w.clone())),
        }
    }
    Ok(apta)
}

/// Learns a DFA from `pair`, which must not contain contradictory strings.
pub fn run_bluefringe(pair: &ExamplePair) -> Result<Dfa, ConflictError> {
    let apta = build_apta(pair)?;
    let clock = crate::clock::TickClock::default();
    Ok(learn(apta, &Deadline::never(&clock)).expect("no deadline"))
}

enum Undo {
    Label(usize, Label),
    Edge(usize, Option<usize>),
}

struct Hypothesis {
    k: usize,
    delta: Vec<Option<usize>>,
    labels: Vec<Label>,
}

impl Hypothesis {
    fn set_edge(&mut self, e: usize, t: Option<usize>, log: &mut Vec<Undo>) {
        log.push(Undo::Edge(e, self.delta[e]));
        self.delta[e] = t;
    }

    /// Redirects `edge` (the only edge into `blue`) to `red` and folds the
    /// tree under `blue` into the automaton from `red`. Returns the number
    /// of agreeing labels, or `None` on an accept/reject clash.
    fn merge(&mut self, red: usize, blue: usize, edge: usize, log: &mut Vec<Undo>) -> Option<usize> {
        self.set_edge(edge, Some(red), log);
        let mut score = 0;
        let mut stack = vec![(red, blue)];
        while let Some((r, b)) = stack.pop() {
            match (self.labels[r], self.labels[b]) {
                (Label::Accept, Label::Reject) | (Label::Reject, Label::Accept) => return None,
                (x, y) if x == y && x != Label::Unknown => score += 1,
                (Label::Unknown, y) if y != Label::Unknown => {
                    log.push(Undo::Label(r, Label::Unknown));
                    self.labels[r] = y;
                }
                _ => {}
            }
            for a in 0..self.k {
                if let Some(tb) = self.delta[b * self.k + a] {
                    match self.delta[r * self.k + a] {
                        Some(tr) => stack.push((tr, tb)),
                        None => self.set_edge(r * self.k + a, Some(tb), log),
                    }
                }
            }
        }
        Some(score)
    }

    fn undo(&mut self, log: &mut Vec<Undo>) {
        while let Some(u) = log.pop() {
            match u {
                Undo::Label(q, l) => self.labels[q] = l,
                Undo::Edge(e, t) => self.delta[e] = t,
            }
        }
    }
}

fn learn(apta: Apta, deadline: &Deadline<'_>) -> Result<Dfa, EngineFailure> {
    let k = apta.alphabet.len();
    let mut h = Hypothesis {
        k,
        delta: apta.delta,
        labels: apta.labels,
    };
    let throttle = Throttle::new(32);
    let mut is_red = vec![false; h.labels.len()];
    is_red[0] = true;
    let mut red = vec![0usize];
    let mut log = Vec::new();
    loop {
        let mut blue: Vec<(usize, usize)> = red
            .iter()
            .flat_map(|&r| (0..k).map(move |a| r * k + a))
            .filter_map(|e| h.delta[e].filter(|&t| !is_red[t]).map(|t| (t, e)))
            .collect();
        if blue.is_empty() {
            break;
        }
        blue.sort_unstable();
        let mut best: Option<(usize, usize, usize, usize)> = None;
        let mut promote = None;
        for &(b, e) in &blue {
            let mut mergeable = false;
            for &r in &red {
                if throttle.expired(deadline) {
                    return Err(EngineFailure::Timeout);
                }
                let score = h.merge(r, b, e, &mut log);
                h.undo(&mut log);
                if let Some(s) = score {
                    mergeable = true;
                    if best.is_none_or(|x| s > x.0) {
                        best = Some((s, r, b, e));
                    }
                }
            }
            if !mergeable {
                promote = Some(b);
                break;
            }
        }
        if let Some(b) = promote {
            is_red[b] = true;
            red.push(b);
            red.sort_unstable();
            continue;
        }
        let (_, r, b, e) = best.expect("some merge is possible");
        h.merge(r, b, e, &mut log).expect("checked");
        log.clear();
    }

    let mut dfa = Dfa::new(apta.alphabet.clone());
    let mut id = vec![usize::MAX; h.labels.len()];
    id[0] = 0;
    dfa.set_accepting(0, h.labels[0] != Label::Reject);
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        for (a, &sym) in apta.alphabet.symbols().iter().enumerate() {
            if let Some(t) = h.delta[q * k + a] {
                if id[t] == usize::MAX {
                    id[t] = dfa.add_state(h.labels[t] != Label::Reject);
                    queue.push_back(t);
                }
                dfa.set_transition(id[q], sym, id[t]);
            }
        }
    }
    Ok(dfa)
}

/// State elimination. Missing transitions reject. States are removed in
/// order of smallest in-degree × out-degree (lowest id on ties).
pub fn dfa_to_regex(d: &Dfa) -> Regex {
    let n = d.state_count();
    let sigma = d.alphabet().symbols();
    let mut reach = vec![false; n];
    let mut queue = VecDeque::from([d.start()]);
    reach[d.start()] = true;
    while let Some(q) = queue.pop_front() {
        for (_, t) in d.transitions(q) {
            if !reach[t] {
                reach[t] = true;
                queue.push_back(t);
            }
        }
    }
    let mut live: Vec<bool> = (0..n).map(|q| d.is_accepting(q)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            if !live[q] && d.transitions(q).any(|(_, t)| live[t]) {
                live[q] = true;
                changed = true;
            }
        }
    }
    let useful: Vec<bool> = (0..n).map(|q| reach[q] && live[q]).collect();
    if !useful[d.start()] {
        return Regex::Empty;
    }

    let (src, dst) = (n, n + 1);
    let mut edges: BTreeMap<(usize, usize), Regex> = BTreeMap::new();
    for q in (0..n).filter(|&q| useful[q]) {
        let mut by_target: BTreeMap<usize, Vec<u8>> = BTreeMap::new();
        for (b, t) in d.transitions(q).filter(|&(_, t)| useful[t]) {
            by_target.entry(t).or_default().push(b);
        }
        for (t, syms) in by_target {
            let label = if syms.len() == sigma.len() && sigma.len() > 1 {
                Regex::Wildcard
            } else {
                syms.into_iter().map(Regex::Literal).reduce(Regex::union).expect("non-empty")
            };
            edges.insert((q, t), label);
        }
        if d.is_accepting(q) {
            edges.insert((q, dst), Regex::Epsilon);
        }
    }
    edges.insert((src, d.start()), Regex::Epsilon);

    let mut remaining: Vec<usize> = (0..n).filter(|&q| useful[q]).collect();
    while !remaining.is_empty() {
        let degree = |x: usize| {
            let ins = edges.keys().filter(|&&(p, q)| q == x && p != x).count();
            let outs = edges.keys().filter(|&&(p, q)| p == x && q != x).count();
            ins * outs
        };
        let (pos, &x) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &x)| (degree(x), x))
            .expect("non-empty");
        remaining.remove(pos);
        let self_loop = edges.remove(&(x, x)).map(Regex::star);
        let ins: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|(&(_, q), _)| q == x)
            .map(|(&(p, _), r)| (p, r.clone()))
            .collect();
        let outs: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|(&(p, _), _)| p == x)
            .map(|(&(_, q), r)| (q, r.clone()))
            .collect();
        edges.retain(|&(p, q), _| p != x && q != x);
        for (p, rin) in &ins {
            for (q, rout) in &outs {
                let mut path = vec![rin.clone()];
                path.extend(self_loop.clone());
                path.push(rout.clone());
                let path = Regex::concat_all(path).simplify();
                let merged = match edges.remove(&(*p, *q)) {
                    Some(old) => Regex::union(old, path).simplify(),
                    None => path,
                };
                edges.insert((*p, *q), merged);
            }
        }
    }
    edges.remove(&(src, dst)).unwrap_or(Regex::Empty).simplify()
}

/// Strings `v` such that some negative is `u v w` with `u` in the prefix
/// language and `w` in the suffix language.
fn derived_negatives(prefix: &Regex, suffix: &Regex, negatives: &[Word]) -> Vec<Word> {
    let pre = Nfa::compile(prefix, HoleFill::Reject).expect("complete prefix");
    let suf = Nfa::compile(suffix, HoleFill::Reject).expect("complete suffix");
    let mut scratch = Scratch::default();
    let mut out = Vec::new();
    for n in negatives {
        let ends: Vec<usize> = (0..=n.len()).filter(|&j| suf.matches_with(&n[j..], &mut scratch)).collect();
        for i in (0..=n.len()).filter(|&i| pre.matches_with(&n[..i], &mut scratch)) {
            out.extend(ends.iter().filter(|&&j| j >= i).map(|&j| n[i..j].to_vec()));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The state-merging synthesizer. It never times out on its own account
/// except through the deadline, and reports `Infeasible` only for
/// contradictory examples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BlueFringe;

impl Engine for BlueFringe {
    fn name(&self) -> &'static str {
        "bluefringe"
    }

    fn synthesize(&self, task: &Task<'_>, deadline: &Deadline<'_>) -> Result<Regex, EngineFailure> {
        let derived;
        let negatives = match task.context {
            Some(ctx) => {
                derived = derived_negatives(&ctx.prefix, &ctx.suffix, task.negatives);
                &derived[..]
            }
            None => task.negatives,
        };
        let apta = build(task.alphabet, task.positives, negatives).map_err(|_| EngineFailure::Infeasible)?;
        let dfa = learn(apta, deadline)?;
        let r = dfa_to_regex(&dfa);
        debug_assert!(task.accepts(&r), "learned regex {r} is inconsistent");
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::TickClock;
    use crate::framework::Context;
    use crate::oracle::{all_strings, enumerate_language};
    use alloc::collections::BTreeSet;
    use core::time::Duration;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.as_bytes().to_vec()).collect()
    }

    fn pair(sigma: &[u8], p: &[&str], n: &[&str]) -> ExamplePair {
        ExamplePair::new(Alphabet::new(sigma).unwrap(), words(p), words(n))
    }

    #[test]
    fn apta_construction() {
        let a = build_apta(&pair(b"ab", &["a"], &["b"])).unwrap();
        assert_eq!(a.state_count(), 3);
        assert_eq!(a.label(0), Label::Unknown);
        assert_eq!(a.label(a.walk(b"a").unwrap()), Label::Accept);
        assert_eq!(a.label(a.walk(b"b").unwrap()), Label::Reject);

        let a = build_apta(&pair(b"a", &[""], &[])).unwrap();
        assert_eq!(a.label(0), Label::Accept);

        assert_eq!(
            build_apta(&pair(b"a", &["a"], &["a"])),
            Err(ConflictError(b"a".to_vec()))
        );
    }

    #[test]
    fn apta_has_one_state_per_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sigma = Alphabet::new(b"abc").unwrap();
        for _ in 0..50 {
            let mut gen = |count: usize| -> Vec<Word> {
                (0..count)
                    .map(|_| {
                        let len = rng.gen_range(0..6);
                        (0..len).map(|_| sigma.symbols()[rng.gen_range(0..3)]).collect()
                    })
                    .collect()
            };
            let p = gen(6);
            let n: Vec<Word> = gen(6).into_iter().filter(|w| !p.contains(w)).collect();
            let expected: BTreeSet<Word> = p.iter().chain(&n).flat_map(|w| (0..=w.len()).map(move |i| w[..i].to_vec())).collect();
            let a = build_apta(&ExamplePair::new(sigma.clone(), p.clone(), n)).unwrap();
            assert_eq!(a.state_count(), expected.len().max(1));
        }
    }

    fn even_a() -> Dfa {
        let sigma = Alphabet::new(b"a").unwrap();
        Dfa::from_regex(&Regex::parse("(aa)*", &sigma).unwrap(), &sigma).unwrap()
    }

    #[test]
    fn learns_even_length_strings() {
        let dfa = run_bluefringe(&pair(b"a", &["", "aa", "aaaa"], &["a", "aaa"])).unwrap();
        assert!(dfa.equivalent(&even_a()), "{}", dfa.to_text());
        assert_eq!(dfa.state_count(), 2);
    }

    #[test]
    fn identifies_even_length_from_all_short_strings() {
        let sigma = Alphabet::new(b"a").unwrap();
        let (p, n): (Vec<Word>, Vec<Word>) = all_strings(&sigma, 8).into_iter().partition(|w| w.len() % 2 == 0);
        let dfa = run_bluefringe(&ExamplePair::new(sigma, p, n)).unwrap();
        assert!(dfa.equivalent(&even_a()));
    }

    #[test]
    fn accepts_all_positives_and_is_deterministic() {
        let pr = pair(b"ab", &["a"], &[]);
        let dfa = run_bluefringe(&pr).unwrap();
        assert!(dfa.accepts(b"a"));
        let pr = pair(b"ab", &["ab", "aab", "b"], &["a", "ba", "bb"]);
        let d1 = run_bluefringe(&pr).unwrap();
        assert_eq!(d1, run_bluefringe(&pr).unwrap());
        assert!(pr.positives.iter().all(|w| d1.accepts(w)));
        assert!(!pr.negatives.iter().any(|w| d1.accepts(w)));
    }

    #[test]
    fn state_elimination_examples() {
        let sigma = Alphabet::new(b"a").unwrap();
        let mut d = Dfa::new(sigma.clone());
        d.set_accepting(0, true);
        d.set_transition(0, b'a', 0);
        assert_eq!(dfa_to_regex(&d).to_text(), "a*");

        let r = dfa_to_regex(&even_a());
        assert_eq!(
            enumerate_language(&r, &sigma, 8).unwrap().strings,
            all_strings(&sigma, 8).into_iter().filter(|w| w.len() % 2 == 0).collect()
        );

        let sigma = Alphabet::new(b"ab").unwrap();
        let mut d = Dfa::new(sigma.clone());
        d.set_accepting(0, true);
        d.set_transition(0, b'a', 0);
        d.set_transition(0, b'b', 0);
        assert_eq!(dfa_to_regex(&d).to_text(), ".*");
        assert_eq!(dfa_to_regex(&Dfa::new(sigma)), Regex::Empty);
    }

    #[test]
    fn state_elimination_round_trips_random_automata() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let sigma = Alphabet::new(if rng.gen_bool(0.5) { b"ab" } else { b"abc" }).unwrap();
            let states = rng.gen_range(1..=6);
            let mut d = Dfa::new(sigma.clone());
            for _ in 1..states {
                d.add_state(false);
            }
            for q in 0..states {
                d.set_accepting(q, rng.gen_bool(0.4));
                for &b in sigma.symbols() {
                    if rng.gen_bool(0.8) {
                        d.set_transition(q, b, rng.gen_range(0..states));
                    }
                }
            }
            let r = dfa_to_regex(&d);
            let back = Dfa::from_regex(&r, &sigma).unwrap();
            assert!(back.equivalent(&d), "{r}\n{}", d.to_text());
        }
    }

    #[test]
    fn engine_respects_context() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let ctx = Context {
            prefix: Regex::parse("ab*", &sigma).unwrap(),
            suffix: Regex::Epsilon,
        };
        let (p, n) = (words(&["a", "aa"]), words(&["ab", "abbb"]));
        let task = Task {
            alphabet: &sigma,
            positives: &p,
            negatives: &n,
            context: Some(&ctx),
        };
        let clock = TickClock::new(Duration::from_nanos(1));
        let r = BlueFringe.synthesize(&task, &Deadline::never(&clock)).unwrap();
        assert!(task.accepts(&r), "{r}");

        // "aa" after prefix "a" gives the negative "aaa"
        let n = words(&["aaa"]);
        let task = Task { negatives: &n, ..task };
        assert_eq!(
            BlueFringe.synthesize(&task, &Deadline::never(&clock)),
            Err(EngineFailure::Infeasible)
        );
    }

    #[test]
    fn derived_negatives_cover_every_factorization() {
        let sigma = Alphabet::new(b"ab").unwrap();
        let prefix = Regex::parse("a*", &sigma).unwrap();
        let got = derived_negatives(&prefix, &Regex::Epsilon, &words(&["aab"]));
        assert_eq!(got, words(&["aab", "ab", "b"]));
    }
}
