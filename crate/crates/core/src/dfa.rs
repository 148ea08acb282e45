//! Deterministic automata over an [`Alphabet`].
//!
//! Transitions may be partial; a missing transition rejects. Used as the
//! output of state merging, as a language-equivalence oracle (product
//! construction) and for counting the strings of a regex by length.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::alphabet::Alphabet;
use crate::nfa::{HoleFill, Nfa};
use crate::regex::{Regex, RegexError};
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    // delta[state][symbol index]
    delta: Vec<Vec<Option<usize>>>,
}

impl Dfa {
    /// A DFA with a single non-accepting start state and no transitions.
    pub fn new(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa {
            alphabet,
            start: 0,
            accepting: vec![false],
            delta: vec![vec![None; k]],
        }
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.delta.push(vec![None; self.alphabet.len()]);
        self.accepting.len() - 1
    }

    pub fn set_start(&mut self, q: usize) {
        self.start = q;
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    /// Adds `src --symbol--> dst`. Panics if `symbol` is outside the
    /// alphabet.
    pub fn set_transition(&mut self, src: usize, symbol: u8, dst: usize) {
        let i = self.alphabet.index_of(symbol).expect("symbol outside alphabet");
        self.delta[src][i] = Some(dst);
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: usize, symbol: u8) -> Option<usize> {
        self.alphabet.index_of(symbol).and_then(|i| self.delta[q][i])
    }

    /// Outgoing transitions of `q` as `(symbol, target)`.
    pub fn transitions(&self, q: usize) -> impl Iterator<Item = (u8, usize)> + '_ {
        self.alphabet
            .symbols()
            .iter()
            .zip(&self.delta[q])
            .filter_map(|(&b, t)| t.map(|t| (b, t)))
    }

    pub fn accepts(&self, w: &[u8]) -> bool {
        let mut q = self.start;
        for &b in w {
            match self.next(q, b) {
                Some(t) => q = t,
                None => return false,
            }
        }
        self.accepting[q]
    }

    /// Subset construction. The result is complete (it may contain a dead
    /// state).
    pub fn from_regex(r: &Regex, alphabet: &Alphabet) -> Result<Dfa, RegexError> {
        let nfa = Nfa::compile(r, HoleFill::Reject)?;
        let mut dfa = Dfa::new(alphabet.clone());
        let init = nfa.closure_of(&[nfa.start()]);
        dfa.set_accepting(0, nfa.is_accepting(&init));
        let mut index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        index.insert(init.clone(), 0);
        let mut queue = VecDeque::from([init]);
        while let Some(set) = queue.pop_front() {
            let src = index[&set];
            for &b in alphabet.symbols() {
                let succ = nfa.step(&set, b);
                let dst = match index.get(&succ) {
                    Some(&d) => d,
                    None => {
                        let d = dfa.add_state(nfa.is_accepting(&succ));
                        index.insert(succ.clone(), d);
                        queue.push_back(succ);
                        d
                    }
                };
                dfa.set_transition(src, b, dst);
            }
        }
        Ok(dfa)
    }

    /// Adds a rejecting sink so every transition is defined.
    pub fn completed(&self) -> Dfa {
        if self.delta.iter().all(|row| row.iter().all(Option::is_some)) {
            return self.clone();
        }
        let mut d = self.clone();
        let sink = d.add_state(false);
        for row in &mut d.delta {
            for t in row.iter_mut() {
                t.get_or_insert(sink);
            }
        }
        d
    }

    /// Accepts exactly the alphabet strings this DFA rejects.
    pub fn complement(&self) -> Dfa {
        let mut d = self.completed();
        for a in &mut d.accepting {
            *a = !*a;
        }
        d
    }

    /// A shortest string on which the two automata disagree, if any.
    /// Both must share an alphabet.
    pub fn distinguishing_word(&self, other: &Dfa) -> Option<Word> {
        assert_eq!(self.alphabet, other.alphabet, "alphabets differ");
        let accept = |d: &Dfa, q: Option<usize>| q.is_some_and(|q| d.accepting[q]);
        let start = (Some(self.start), Some(other.start));
        type Pair = (Option<usize>, Option<usize>);
        let mut seen: BTreeMap<Pair, (Option<Pair>, u8)> = BTreeMap::new();
        seen.insert(start, (None, 0));
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            if accept(self, pair.0) != accept(other, pair.1) {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some(&(Some(prev), b)) = seen.get(&cur) {
                    word.push(b);
                    cur = prev;
                }
                word.reverse();
                return Some(word);
            }
            for (i, &b) in self.alphabet.symbols().iter().enumerate() {
                let next = (
                    pair.0.and_then(|q| self.delta[q][i]),
                    pair.1.and_then(|q| other.delta[q][i]),
                );
                if next == (None, None) {
                    continue;
                }
                if let alloc::collections::btree_map::Entry::Vacant(e) = seen.entry(next) {
                    e.insert((Some(pair), b));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Language equivalence by product-automaton search.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.distinguishing_word(other).is_none()
    }

    /// Number of accepted strings of length at most `max_len`, saturating.
    pub fn count_accepted(&self, max_len: usize) -> u128 {
        let mut ways = vec![0u128; self.state_count()];
        ways[self.start] = 1;
        let mut total = if self.accepting[self.start] { 1u128 } else { 0 };
        for _ in 0..max_len {
            let mut next = vec![0u128; self.state_count()];
            for (q, &w) in ways.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for t in self.delta[q].iter().flatten() {
                    next[*t] = next[*t].saturating_add(w);
                }
            }
            ways = next;
            for (q, &w) in ways.iter().enumerate() {
                if self.accepting[q] {
                    total = total.saturating_add(w);
                }
            }
        }
        total
    }

    /// Keeps only states reachable from the start, renumbered in
    /// breadth-first order.
    pub fn trimmed(&self) -> Dfa {
        let mut order = vec![usize::MAX; self.state_count()];
        let mut queue = VecDeque::from([self.start]);
        let mut kept = Vec::new();
        order[self.start] = 0;
        kept.push(self.start);
        while let Some(q) = queue.pop_front() {
            for t in self.delta[q].iter().flatten() {
                if order[*t] == usize::MAX {
                    order[*t] = kept.len();
                    kept.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let mut d = Dfa::new(self.alphabet.clone());
        d.accepting = kept.iter().map(|&q| self.accepting[q]).collect();
        d.delta = kept
            .iter()
            .map(|&q| self.delta[q].iter().map(|t| t.map(|t| order[t])).collect())
            .collect();
        d
    }

    /// Debug export: one `src symbol dst` line per transition, then
    /// `start: q` and `accept: q1 q2 ...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for q in 0..self.state_count() {
            for (b, t) in self.transitions(q) {
                let _ = writeln!(out, "{q} {} {t}", b as char);
            }
        }
        let _ = writeln!(out, "start: {}", self.start);
        out.push_str("accept:");
        for q in (0..self.state_count()).filter(|&q| self.accepting[q]) {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(b"ab").unwrap()
    }

    #[test]
    fn subset_construction_agrees_with_nfa() {
        let sigma = ab();
        let r = Regex::parse("(a+b)*ab", &sigma).unwrap();
        let d = Dfa::from_regex(&r, &sigma).unwrap();
        for w in [&b""[..], b"ab", b"aab", b"ba", b"abab", b"abb"] {
            assert_eq!(d.accepts(w), r.matches(w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn equivalence_and_counterexample() {
        let sigma = ab();
        let even = Dfa::from_regex(&Regex::parse("(aa)*", &sigma).unwrap(), &sigma).unwrap();
        let even2 = Dfa::from_regex(&Regex::parse("(aa)*(aa)*", &sigma).unwrap(), &sigma).unwrap();
        let any_a = Dfa::from_regex(&Regex::parse("a*", &sigma).unwrap(), &sigma).unwrap();
        assert!(even.equivalent(&even2));
        assert_eq!(even.distinguishing_word(&any_a), Some(b"a".to_vec()));
    }

    #[test]
    fn complement_flips_membership() {
        let sigma = ab();
        let d = Dfa::from_regex(&Regex::parse("a*", &sigma).unwrap(), &sigma).unwrap();
        let c = d.complement();
        for w in [&b""[..], b"a", b"b", b"ab", b"aaa"] {
            assert_ne!(d.accepts(w), c.accepts(w));
        }
    }

    #[test]
    fn counts_strings_by_length() {
        let sigma = ab();
        let d = Dfa::from_regex(&Regex::parse("a*", &sigma).unwrap(), &sigma).unwrap();
        assert_eq!(d.count_accepted(10), 11);
        let all = Dfa::from_regex(&Regex::parse(".*", &sigma).unwrap(), &sigma).unwrap();
        assert_eq!(all.count_accepted(3), 1 + 2 + 4 + 8);
        let lit = Dfa::from_regex(&Regex::parse("ab", &sigma).unwrap(), &sigma).unwrap();
        assert_eq!(lit.count_accepted(15), 1);
    }

    #[test]
    fn partial_dfa_text_export() {
        let mut d = Dfa::new(ab());
        let q1 = d.add_state(true);
        d.set_transition(0, b'a', q1);
        d.set_transition(q1, b'a', 0);
        assert!(d.accepts(b"a"));
        assert!(!d.accepts(b"ab"));
        assert_eq!(d.to_text(), "0 a 1\n1 a 0\nstart: 0\naccept: 1\n");
        assert_eq!(d.completed().state_count(), 3);
    }
}
