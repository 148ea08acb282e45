//! Thompson construction and set-of-states simulation.
//!
//! Matching is always full-string. The simulation visits each instruction at
//! most once per input position, so a match costs O(|insts| · (|s| + 1))
//! regardless of the regex shape.

use alloc::vec;
use alloc::vec::Vec;

use crate::regex::{Regex, RegexError};

/// How to compile the holes of a search template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleFill {
    /// Holes are an error: only complete regexes compile.
    Reject,
    /// Each hole becomes `.*`, the largest completion.
    AnyString,
    /// Each hole becomes `∅`, the smallest completion.
    Nothing,
}

#[derive(Debug, Clone, Copy)]
enum Inst {
    Byte(u8, u32),
    Any(u32),
    Split(u32, u32),
    Match,
    Fail,
}

/// A compiled nondeterministic automaton.
#[derive(Debug, Clone)]
pub struct Nfa {
    insts: Vec<Inst>,
    start: u32,
}

impl Nfa {
    pub fn compile(r: &Regex, fill: HoleFill) -> Result<Nfa, RegexError> {
        Nfa::compile_seq(&[r], fill)
    }

    /// Compiles the concatenation of `parts` without building the
    /// concatenated tree.
    pub fn compile_seq(parts: &[&Regex], fill: HoleFill) -> Result<Nfa, RegexError> {
        let mut c = Compiler {
            insts: vec![Inst::Match],
            fill,
        };
        let mut next = 0;
        for r in parts.iter().rev() {
            next = c.compile(r, next)?;
        }
        Ok(Nfa {
            insts: c.insts,
            start: next,
        })
    }

    pub fn len(&self) -> usize {
        self.insts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.insts.is_empty()
    }

    pub fn matches(&self, s: &[u8]) -> bool {
        self.matches_with(s, &mut Scratch::default())
    }

    /// Like [`Nfa::matches`], reusing the caller's buffers.
    pub fn matches_with(&self, s: &[u8], scratch: &mut Scratch) -> bool {
        let n = self.insts.len();
        scratch.reset(n);
        let Scratch {
            cur, next, stack, ..
        } = scratch;
        let mut steps = 0usize;
        self.add_closure(self.start, cur, stack, &mut steps);
        for &byte in s {
            if cur.is_empty() {
                return false;
            }
            next.clear();
            for i in 0..cur.len() {
                match self.insts[cur.dense[i] as usize] {
                    Inst::Byte(b, to) if b == byte => self.add_closure(to, next, stack, &mut steps),
                    Inst::Any(to) => self.add_closure(to, next, stack, &mut steps),
                    _ => {}
                }
            }
            core::mem::swap(cur, next);
        }
        debug_assert!(steps <= 2 * n * (s.len() + 1), "simulation exceeded its step bound");
        (0..cur.len()).any(|i| matches!(self.insts[cur.dense[i] as usize], Inst::Match))
    }

    /// Accepting-state closure of `pc` into `set`.
    fn add_closure(&self, pc: u32, set: &mut SparseSet, stack: &mut Vec<u32>, steps: &mut usize) {
        let mut pc = pc;
        loop {
            if set.insert(pc) {
                *steps += 1;
                if let Inst::Split(a, b) = self.insts[pc as usize] {
                    stack.push(b);
                    pc = a;
                    continue;
                }
            }
            match stack.pop() {
                Some(next) => pc = next,
                None => break,
            }
        }
    }

    /// Deterministic successor sets, used by subset construction.
    pub(crate) fn closure_of(&self, pcs: &[u32]) -> Vec<u32> {
        let mut set = SparseSet::new(self.insts.len());
        let mut stack = Vec::new();
        let mut steps = 0;
        for &pc in pcs {
            self.add_closure(pc, &mut set, &mut stack, &mut steps);
        }
        let mut out: Vec<u32> = set.dense[..set.len]
            .iter()
            .copied()
            .filter(|&pc| !matches!(self.insts[pc as usize], Inst::Split(..) | Inst::Fail))
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn start(&self) -> u32 {
        self.start
    }

    /// Instructions reachable from `state` by consuming `byte`.
    pub(crate) fn step(&self, state: &[u32], byte: u8) -> Vec<u32> {
        let targets: Vec<u32> = state
            .iter()
            .filter_map(|&pc| match self.insts[pc as usize] {
                Inst::Byte(b, to) if b == byte => Some(to),
                Inst::Any(to) => Some(to),
                _ => None,
            })
            .collect();
        self.closure_of(&targets)
    }

    pub(crate) fn is_accepting(&self, state: &[u32]) -> bool {
        state.iter().any(|&pc| matches!(self.insts[pc as usize], Inst::Match))
    }
}

struct Compiler {
    insts: Vec<Inst>,
    fill: HoleFill,
}

impl Compiler {
    fn push(&mut self, inst: Inst) -> u32 {
        self.insts.push(inst);
        (self.insts.len() - 1) as u32
    }

    /// Compiles `r` so that a successful match continues at `next`; returns
    /// the entry instruction.
    fn compile(&mut self, r: &Regex, next: u32) -> Result<u32, RegexError> {
        Ok(match r {
            Regex::Empty => self.push(Inst::Fail),
            Regex::Epsilon => next,
            Regex::Literal(b) => self.push(Inst::Byte(*b, next)),
            Regex::Wildcard => self.push(Inst::Any(next)),
            Regex::Concat(a, b) => {
                let b = self.compile(b, next)?;
                self.compile(a, b)?
            }
            Regex::Union(a, b) => {
                let a = self.compile(a, next)?;
                let b = self.compile(b, next)?;
                self.push(Inst::Split(a, b))
            }
            Regex::Question(a) => {
                let a = self.compile(a, next)?;
                self.push(Inst::Split(a, next))
            }
            Regex::Star(a) => {
                let split = self.push(Inst::Split(0, next));
                let body = self.compile(a, split)?;
                self.insts[split as usize] = Inst::Split(body, next);
                split
            }
            Regex::Hole(_) => match self.fill {
                HoleFill::Reject => return Err(RegexError::Incomplete),
                HoleFill::Nothing => self.push(Inst::Fail),
                HoleFill::AnyString => {
                    let split = self.push(Inst::Split(0, next));
                    let any = self.push(Inst::Any(split));
                    self.insts[split as usize] = Inst::Split(any, next);
                    split
                }
            },
        })
    }
}

/// Reusable simulation buffers.
#[derive(Debug, Default)]
pub struct Scratch {
    cur: SparseSet,
    next: SparseSet,
    stack: Vec<u32>,
}

impl Scratch {
    fn reset(&mut self, n: usize) {
        self.cur.resize(n);
        self.next.resize(n);
        self.cur.clear();
        self.next.clear();
        self.stack.clear();
    }
}

#[derive(Debug, Default)]
struct SparseSet {
    dense: Vec<u32>,
    sparse: Vec<u32>,
    len: usize,
}

impl SparseSet {
    fn new(n: usize) -> Self {
        let mut s = SparseSet::default();
        s.resize(n);
        s
    }

    fn resize(&mut self, n: usize) {
        if self.sparse.len() < n {
            self.sparse.resize(n, 0);
            self.dense.resize(n, 0);
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn clear(&mut self) {
        self.len = 0;
    }

    fn contains(&self, x: u32) -> bool {
        let i = self.sparse[x as usize] as usize;
        i < self.len && self.dense[i] == x
    }

    fn insert(&mut self, x: u32) -> bool {
        if self.contains(x) {
            return false;
        }
        self.dense[self.len] = x;
        self.sparse[x as usize] = self.len as u32;
        self.len += 1;
        true
    }
}
