//! Reduction of practical regexes to the toolkit's symbol-level syntax.
//!
//! Steps, in order:
//!
//! 1. reject backreferences, lookaround and negated classes;
//! 2. widen counted quantifiers `{n}`, `{n,m}`, `{n,}` to `*`;
//! 3. rewrite `X+` as `XX*`;
//! 4. replace literal words of three or more characters (and any literal
//!    word containing an uppercase letter, which would collide with the
//!    reserved symbols) by reserved symbols `A`..`Z`, one per distinct word,
//!    and every other non-alphanumeric literal by `!`;
//! 5. parse with the alphabet induced by the remaining symbols.
//!
//! Positive classes (`[...]`, `\d`, `\w`, `\s` and friends) become the
//! wildcard; anchors and lazy-quantifier markers are dropped.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::alphabet::Alphabet;
use crate::regex::Regex;

/// Why a raw regex was excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    Backreference,
    Lookaround,
    NegatedClass,
    Unparseable,
    TooManyReservedSymbols,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::Backreference => "backreference",
            RejectReason::Lookaround => "lookaround",
            RejectReason::NegatedClass => "negated-class",
            RejectReason::Unparseable => "unparseable",
            RejectReason::TooManyReservedSymbols => "too-many-reserved-symbols",
        }
    }
}

impl core::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A successfully reduced regex and its induced alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preprocessed {
    pub regex: Regex,
    pub alphabet: Alphabet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRegexRecord {
    pub source_text: String,
    pub simplified: Result<Preprocessed, RejectReason>,
    /// `(reserved symbol, original text)`; `!` may map to several originals.
    pub substitution_table: Vec<(u8, String)>,
    /// Set when a counted quantifier was widened to `*`, which enlarges the
    /// language.
    pub widened: bool,
}

const RESERVED: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
const PUNCT: u8 = b'!';

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lit(u8),
    Sym(u8),
    Any,
    Open,
    Close,
    Alt,
    Star,
    Plus,
    Opt,
    Counted,
}

pub fn preprocess_raw(source_text: &str) -> RawRegexRecord {
    let mut record = RawRegexRecord {
        source_text: source_text.to_string(),
        simplified: Err(RejectReason::Unparseable),
        substitution_table: Vec::new(),
        widened: false,
    };
    let toks = match tokenize(source_text.as_bytes()) {
        Ok(t) => t,
        Err(reason) => {
            record.simplified = Err(reason);
            return record;
        }
    };
    record.widened = toks.contains(&Tok::Counted);
    let toks = match substitute(&toks, &mut record.substitution_table) {
        Ok(t) => t,
        Err(reason) => {
            record.simplified = Err(reason);
            return record;
        }
    };
    let mut p = TokParser { toks: &toks, pos: 0 };
    let regex = match p.union() {
        Some(r) if p.pos == toks.len() => r.simplify(),
        _ => return record,
    };
    let symbols: Vec<u8> = toks
        .iter()
        .filter_map(|t| match t {
            Tok::Sym(b) => Some(*b),
            _ => None,
        })
        .collect();
    let alphabet = Alphabet::from_words([&symbols[..]]).unwrap_or_else(|| Alphabet::new(&[PUNCT]).expect("valid"));
    record.simplified = Ok(Preprocessed { regex, alphabet });
    record
}

fn tokenize(src: &[u8]) -> Result<Vec<Tok>, RejectReason> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i];
        i += 1;
        match c {
            b'\\' => {
                let Some(&e) = src.get(i) else {
                    return Err(RejectReason::Unparseable);
                };
                i += 1;
                match e {
                    b'1'..=b'9' | b'k' => return Err(RejectReason::Backreference),
                    b'D' | b'W' | b'S' => return Err(RejectReason::NegatedClass),
                    b'd' | b'w' | b's' => out.push(Tok::Any),
                    b'b' | b'B' | b'A' | b'z' | b'Z' => {}
                    b'n' => out.push(Tok::Lit(b'\n')),
                    b't' => out.push(Tok::Lit(b'\t')),
                    b'r' => out.push(Tok::Lit(b'\r')),
                    other => out.push(Tok::Lit(other)),
                }
            }
            b'[' => {
                if src.get(i) == Some(&b'^') {
                    return Err(RejectReason::NegatedClass);
                }
                // skip to the closing bracket; a leading ']' is a member
                let mut j = i;
                if src.get(j) == Some(&b']') {
                    j += 1;
                }
                while j < src.len() && src[j] != b']' {
                    if src[j] == b'\\' {
                        j += 1;
                    }
                    j += 1;
                }
                if j >= src.len() {
                    return Err(RejectReason::Unparseable);
                }
                i = j + 1;
                out.push(Tok::Any);
            }
            b'(' => {
                if src.get(i) == Some(&b'?') {
                    let rest = &src[i + 1..];
                    if rest.starts_with(b"=") || rest.starts_with(b"!") || rest.starts_with(b"<=") || rest.starts_with(b"<!") {
                        return Err(RejectReason::Lookaround);
                    } else if rest.starts_with(b":") {
                        i += 2;
                    } else if rest.starts_with(b"P<") || rest.starts_with(b"<") {
                        // named group: skip the name
                        match src[i..].iter().position(|&b| b == b'>') {
                            Some(k) => i += k + 1,
                            None => return Err(RejectReason::Unparseable),
                        }
                    } else if rest.starts_with(b"P=") {
                        return Err(RejectReason::Backreference);
                    } else {
                        return Err(RejectReason::Unparseable);
                    }
                }
                out.push(Tok::Open);
            }
            b')' => out.push(Tok::Close),
            b'|' => out.push(Tok::Alt),
            b'*' | b'+' | b'?' => {
                let quantifier_before = matches!(out.last(), Some(Tok::Star | Tok::Plus | Tok::Opt | Tok::Counted));
                if c == b'?' && quantifier_before {
                    continue; // lazy marker
                }
                if c == b'+' && quantifier_before {
                    continue; // possessive marker
                }
                out.push(match c {
                    b'*' => Tok::Star,
                    b'+' => Tok::Plus,
                    _ => Tok::Opt,
                });
            }
            b'{' => {
                let close = src[i..].iter().position(|&b| b == b'}');
                let body = close.map(|k| &src[i..i + k]);
                let counted = body.is_some_and(|b| {
                    !b.is_empty() && b[0].is_ascii_digit() && b.iter().all(|&x| x.is_ascii_digit() || x == b',')
                });
                if counted {
                    i += close.expect("checked") + 1;
                    out.push(Tok::Counted);
                } else {
                    out.push(Tok::Lit(b'{'));
                }
            }
            b'^' | b'$' => {}
            b'.' => out.push(Tok::Any),
            other => out.push(Tok::Lit(other)),
        }
    }
    Ok(out)
}

fn is_quantifier(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Star | Tok::Plus | Tok::Opt | Tok::Counted))
}

/// Replaces literal words and punctuation by toolkit symbols.
fn substitute(toks: &[Tok], table: &mut Vec<(u8, String)>) -> Result<Vec<Tok>, RejectReason> {
    let mut words: Vec<Vec<u8>> = Vec::new();
    let mut out = Vec::with_capacity(toks.len());
    let mut i = 0;
    while i < toks.len() {
        match toks[i] {
            Tok::Lit(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let mut j = i;
                while let Some(Tok::Lit(c)) = toks.get(j) {
                    if !(c.is_ascii_alphanumeric() || *c == b'_') {
                        break;
                    }
                    j += 1;
                }
                // a quantifier applies to the last character only
                let word_end = if is_quantifier(toks.get(j)) && j - i > 1 { j - 1 } else { j };
                let word: Vec<u8> = toks[i..word_end]
                    .iter()
                    .map(|t| match t {
                        Tok::Lit(c) => *c,
                        _ => unreachable!(),
                    })
                    .collect();
                let plain = word.iter().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
                if word.len() >= 3 || !plain {
                    let k = match words.iter().position(|w| *w == word) {
                        Some(k) => k,
                        None => {
                            if words.len() == RESERVED.len() {
                                return Err(RejectReason::TooManyReservedSymbols);
                            }
                            words.push(word.clone());
                            table.push((RESERVED[words.len() - 1], crate::word_to_string(&word)));
                            words.len() - 1
                        }
                    };
                    out.push(Tok::Sym(RESERVED[k]));
                } else {
                    out.extend(word.iter().map(|&c| Tok::Sym(if c == b'_' { PUNCT } else { c })));
                }
                i = word_end;
            }
            Tok::Lit(c) => {
                let original = crate::word_to_string(&[c]);
                if !table.iter().any(|(s, o)| *s == PUNCT && *o == original) {
                    table.push((PUNCT, original));
                }
                out.push(Tok::Sym(PUNCT));
                i += 1;
            }
            ref t => {
                out.push(t.clone());
                i += 1;
            }
        }
    }
    Ok(out)
}

struct TokParser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl TokParser<'_> {
    fn union(&mut self) -> Option<Regex> {
        let mut r = self.concat()?;
        while self.toks.get(self.pos) == Some(&Tok::Alt) {
            self.pos += 1;
            r = Regex::union(r, self.concat()?);
        }
        Some(r)
    }

    fn concat(&mut self) -> Option<Regex> {
        let mut parts = Vec::new();
        while let Some(t) = self.toks.get(self.pos) {
            if matches!(t, Tok::Alt | Tok::Close) {
                break;
            }
            parts.extend(self.postfix()?);
        }
        Some(Regex::concat_all(parts))
    }

    /// An atom and its quantifiers; a final `X+` comes back as `[X, X*]` so
    /// the enclosing concatenation stays flat.
    fn postfix(&mut self) -> Option<Vec<Regex>> {
        let mut r = self.atom()?;
        loop {
            r = match self.toks.get(self.pos) {
                Some(Tok::Star | Tok::Counted) => Regex::star(r),
                Some(Tok::Plus) if is_quantifier(self.toks.get(self.pos + 1)) => {
                    Regex::concat(r.clone(), Regex::star(r))
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                    return Some(alloc::vec![r.clone(), Regex::star(r)]);
                }
                Some(Tok::Opt) => Regex::question(r),
                _ => return Some(alloc::vec![r]),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Option<Regex> {
        let t = self.toks.get(self.pos)?;
        self.pos += 1;
        match t {
            Tok::Sym(b) => Some(Regex::Literal(*b)),
            Tok::Any => Some(Regex::Wildcard),
            Tok::Open => {
                let r = self.union()?;
                (self.toks.get(self.pos) == Some(&Tok::Close)).then(|| {
                    self.pos += 1;
                    r
                })
            }
            _ => None,
        }
    }
}
