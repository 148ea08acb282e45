//! Concrete syntax.
//!
//! ```text
//! union   := concat (('+' | '|') concat)*
//! concat  := postfix+
//! postfix := atom ('*' | '?')*
//! atom    := symbol | '\' byte | '.' | '(' union ')'
//!          | '@epsilon' | '@empty' | '@h{' digits '}'
//! ```
//!
//! Union and concatenation associate to the left.

use alloc::string::String;

use super::Regex;
use crate::alphabet::Alphabet;

/// Bytes with a syntactic role; a literal of one of these must be escaped.
pub(crate) const SPECIAL: &[u8] = b"\\.+|*?()@{}";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("symbol {:?} at byte {pos} is not in the alphabet", *.symbol as char)]
    UnknownSymbol { pos: usize, symbol: u8 },
}

impl Regex {
    /// Parses `text`, requiring every literal to belong to `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Regex, ParseError> {
        let mut p = Parser {
            input: text.as_bytes(),
            pos: 0,
            alphabet: Some(alphabet),
        };
        p.parse_all()
    }

    /// Parses without an alphabet check; callers typically derive the
    /// alphabet from the literals afterwards.
    pub fn parse_unchecked(text: &str) -> Result<Regex, ParseError> {
        let mut p = Parser {
            input: text.as_bytes(),
            pos: 0,
            alphabet: None,
        };
        p.parse_all()
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    alphabet: Option<&'a Alphabet>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn parse_all(&mut self) -> Result<Regex, ParseError> {
        let r = self.union()?;
        match self.peek() {
            None => Ok(r),
            Some(b')') => self.err("unbalanced ')'"),
            Some(_) => self.err("unexpected input"),
        }
    }

    fn union(&mut self) -> Result<Regex, ParseError> {
        let mut r = self.concat()?;
        while let Some(b'+' | b'|') = self.peek() {
            self.pos += 1;
            let rhs = self.concat()?;
            r = Regex::union(r, rhs);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex, ParseError> {
        let mut r: Option<Regex> = None;
        while let Some(b) = self.peek() {
            if matches!(b, b'+' | b'|' | b')') {
                break;
            }
            let next = self.postfix()?;
            r = Some(match r {
                None => next,
                Some(prev) => Regex::concat(prev, next),
            });
        }
        match r {
            Some(r) => Ok(r),
            None => self.err("expected an expression"),
        }
    }

    fn postfix(&mut self) -> Result<Regex, ParseError> {
        let mut r = self.atom()?;
        loop {
            match self.peek() {
                Some(b'*') => r = Regex::star(r),
                Some(b'?') => r = Regex::question(r),
                _ => return Ok(r),
            }
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex, ParseError> {
        let start = self.pos;
        let Some(b) = self.peek() else {
            return self.err("unexpected end of input");
        };
        match b {
            b'(' => {
                self.pos += 1;
                let r = self.union()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(r)
            }
            b'.' => {
                self.pos += 1;
                Ok(Regex::Wildcard)
            }
            b'@' => self.keyword(),
            b'\\' => {
                self.pos += 1;
                match self.peek() {
                    Some(c) => {
                        self.pos += 1;
                        self.symbol(c, start)
                    }
                    None => self.err("dangling escape"),
                }
            }
            b'*' | b'?' => self.err("quantifier without operand"),
            b'{' | b'}' => self.err("unexpected brace"),
            c => {
                self.pos += 1;
                self.symbol(c, start)
            }
        }
    }

    fn symbol(&self, c: u8, pos: usize) -> Result<Regex, ParseError> {
        match self.alphabet {
            Some(a) if !a.contains(c) => Err(ParseError::UnknownSymbol { pos, symbol: c }),
            _ => Ok(Regex::Literal(c)),
        }
    }

    fn keyword(&mut self) -> Result<Regex, ParseError> {
        let rest = &self.input[self.pos..];
        if rest.starts_with(b"@epsilon") {
            self.pos += 8;
            Ok(Regex::Epsilon)
        } else if rest.starts_with(b"@empty") {
            self.pos += 6;
            Ok(Regex::Empty)
        } else if rest.starts_with(b"@h{") {
            self.pos += 3;
            let digits_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits = core::str::from_utf8(&self.input[digits_start..self.pos]).unwrap_or("");
            let Ok(id) = digits.parse::<u32>() else {
                return self.err("bad hole id");
            };
            if self.peek() != Some(b'}') {
                return self.err("expected '}'");
            }
            self.pos += 1;
            Ok(Regex::Hole(id))
        } else {
            self.err("unknown @-keyword")
        }
    }
}
