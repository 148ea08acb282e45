//! Regex AST shared by the matcher, the synthesizers and the generators.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::nfa::{HoleFill, Nfa};

pub(crate) mod parse;
mod print;
mod simplify;

/// Errors from operations that need a complete (hole-free) regex.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegexError {
    /// The regex still contains search holes.
    #[error("regex contains holes and cannot be matched")]
    Incomplete,
}

/// Regex syntax tree.
///
/// `Empty` denotes the empty language and only arises inside the search
/// engine; `Hole` is a placeholder leaf of a search template.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(u8),
    Wildcard,
    Union(Box<Regex>, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
    Question(Box<Regex>),
    Hole(u32),
}

impl Regex {
    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    pub fn question(a: Regex) -> Regex {
        Regex::Question(Box::new(a))
    }

    /// `.*`
    pub fn any_string() -> Regex {
        Regex::star(Regex::Wildcard)
    }

    /// Left-nested concatenation of `parts`; `Epsilon` when there are none.
    pub fn concat_all<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        parts
            .into_iter()
            .reduce(Regex::concat)
            .unwrap_or(Regex::Epsilon)
    }

    /// The regex whose only string is `w`.
    pub fn literal_word(w: &[u8]) -> Regex {
        Regex::concat_all(w.iter().map(|&b| Regex::Literal(b)))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) | Regex::Question(a) => 1 + a.size(),
            _ => 1,
        }
    }

    /// Search cost: one per node, plus one extra for every wildcard so that
    /// concrete symbols win ties. A hole costs one, the cheapest completion.
    pub fn cost(&self) -> usize {
        match self {
            Regex::Wildcard => 2,
            Regex::Union(a, b) | Regex::Concat(a, b) => 1 + a.cost() + b.cost(),
            Regex::Star(a) | Regex::Question(a) => 1 + a.cost(),
            _ => 1,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.hole_count() == 0
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Regex::Hole(_) => 1,
            Regex::Union(a, b) | Regex::Concat(a, b) => a.hole_count() + b.hole_count(),
            Regex::Star(a) | Regex::Question(a) => a.hole_count(),
            _ => 0,
        }
    }

    /// Full-string membership test. Fails on templates with holes.
    pub fn matches(&self, s: &[u8]) -> Result<bool, RegexError> {
        let nfa = Nfa::compile(self, HoleFill::Reject)?;
        Ok(nfa.matches(s))
    }

    /// Replaces every hole with a copy of `with`.
    pub fn fill_holes(&self, with: &Regex) -> Regex {
        match self {
            Regex::Hole(_) => with.clone(),
            Regex::Union(a, b) => Regex::union(a.fill_holes(with), b.fill_holes(with)),
            Regex::Concat(a, b) => Regex::concat(a.fill_holes(with), b.fill_holes(with)),
            Regex::Star(a) => Regex::star(a.fill_holes(with)),
            Regex::Question(a) => Regex::question(a.fill_holes(with)),
            other => other.clone(),
        }
    }

    /// Checks that every literal belongs to `alphabet`.
    pub fn uses_only(&self, alphabet: &Alphabet) -> bool {
        match self {
            Regex::Literal(b) => alphabet.contains(*b),
            Regex::Union(a, b) | Regex::Concat(a, b) => a.uses_only(alphabet) && b.uses_only(alphabet),
            Regex::Star(a) | Regex::Question(a) => a.uses_only(alphabet),
            _ => true,
        }
    }

    /// Flattens the top-level concatenation spine, left to right.
    pub fn concat_spine(&self) -> Vec<&Regex> {
        fn walk<'a>(r: &'a Regex, out: &mut Vec<&'a Regex>) {
            match r {
                Regex::Concat(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// `.`, `.*` or `.?`: the subexpressions whose symbols are labelled 0
    /// when splitting.
    pub fn is_wildcard_rooted(&self) -> bool {
        match self {
            Regex::Wildcard => true,
            Regex::Star(a) | Regex::Question(a) => **a == Regex::Wildcard,
            _ => false,
        }
    }

    /// Pre-order traversal of all nodes.
    pub fn nodes(&self) -> Vec<&Regex> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(r) = stack.pop() {
            out.push(r);
            match r {
                Regex::Union(a, b) | Regex::Concat(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Regex::Star(a) | Regex::Question(a) => stack.push(a),
                _ => {}
            }
        }
        out
    }

    /// Rebuilds the tree with the `index`-th pre-order node replaced by
    /// `f(node)`.
    pub fn replace_node(&self, index: usize, f: &mut dyn FnMut(&Regex) -> Regex) -> Regex {
        fn go(r: &Regex, counter: &mut usize, target: usize, f: &mut dyn FnMut(&Regex) -> Regex) -> Regex {
            let here = *counter;
            *counter += 1;
            if here == target {
                // Skip the subtree's indices so the counter stays consistent.
                *counter += r.size() - 1;
                return f(r);
            }
            match r {
                Regex::Union(a, b) => {
                    let a = go(a, counter, target, f);
                    Regex::union(a, go(b, counter, target, f))
                }
                Regex::Concat(a, b) => {
                    let a = go(a, counter, target, f);
                    Regex::concat(a, go(b, counter, target, f))
                }
                Regex::Star(a) => Regex::star(go(a, counter, target, f)),
                Regex::Question(a) => Regex::question(go(a, counter, target, f)),
                other => other.clone(),
            }
        }
        let mut counter = 0;
        go(self, &mut counter, index, f)
    }
}

impl core::fmt::Display for Regex {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::new(b"abc").unwrap()
    }

    #[test]
    fn size_counts_nodes() {
        assert_eq!(Regex::Literal(b'a').size(), 1);
        assert_eq!(Regex::star(Regex::Literal(b'a')).size(), 2);
        assert_eq!(Regex::parse("a*b*", &sigma()).unwrap().size(), 5);
    }

    #[test]
    fn cost_surcharges_wildcard() {
        assert_eq!(Regex::Literal(b'a').cost(), 1);
        assert_eq!(Regex::Wildcard.cost(), 2);
        assert_eq!(Regex::any_string().cost(), 3);
        assert_eq!(Regex::parse("00*", &Alphabet::new(b"01").unwrap()).unwrap().cost(), 4);
    }

    #[test]
    fn spine_and_wildcard_roots() {
        let r = Regex::parse("a*b*c*.*", &sigma()).unwrap();
        let spine = r.concat_spine();
        assert_eq!(spine.len(), 4);
        assert!(spine[3].is_wildcard_rooted());
        assert!(!spine[0].is_wildcard_rooted());
        assert_eq!(Regex::Literal(b'a').concat_spine().len(), 1);
    }

    #[test]
    fn holes_block_matching() {
        let t = Regex::concat(Regex::Literal(b'a'), Regex::Hole(0));
        assert!(!t.is_complete());
        assert_eq!(t.matches(b"a"), Err(RegexError::Incomplete));
        assert!(t.fill_holes(&Regex::any_string()).matches(b"abc").unwrap());
    }

    #[test]
    fn replace_node_by_preorder_index() {
        let r = Regex::parse("(ab)c", &sigma()).unwrap();
        // pre-order: Concat, Concat, a, b, c
        let out = r.replace_node(3, &mut |_| Regex::Epsilon);
        assert_eq!(out.to_text(), "a@epsilonc");
        let out = r.replace_node(1, &mut |_| Regex::Literal(b'b'));
        assert_eq!(out.to_text(), "bc");
        assert_eq!(r.nodes().len(), r.size());
    }
}
