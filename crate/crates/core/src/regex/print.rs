use alloc::string::String;
use core::fmt::Write;

use super::parse::SPECIAL;
use super::Regex;

// Binding strength, loosest first.
const UNION: u8 = 0;
const CONCAT: u8 = 1;
const POSTFIX: u8 = 2;
const ATOM: u8 = 3;

fn precedence(r: &Regex) -> u8 {
    match r {
        Regex::Union(..) => UNION,
        Regex::Concat(..) => CONCAT,
        Regex::Star(_) | Regex::Question(_) => POSTFIX,
        _ => ATOM,
    }
}

impl Regex {
    /// Canonical text with the fewest parentheses that still parses back to
    /// the same tree. Union is printed as `+`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_at(self, UNION, &mut out);
        out
    }
}

fn write_at(r: &Regex, min: u8, out: &mut String) {
    let wrap = precedence(r) < min;
    if wrap {
        out.push('(');
    }
    match r {
        Regex::Empty => out.push_str("@empty"),
        Regex::Epsilon => out.push_str("@epsilon"),
        Regex::Wildcard => out.push('.'),
        Regex::Hole(id) => {
            let _ = write!(out, "@h{{{id}}}");
        }
        Regex::Literal(b) => {
            if SPECIAL.contains(b) {
                out.push('\\');
            }
            out.push(*b as char);
        }
        // Both operators parse left-associatively, so only a right operand
        // of the same strength needs parentheses.
        Regex::Union(a, b) => {
            write_at(a, UNION, out);
            out.push('+');
            write_at(b, CONCAT, out);
        }
        Regex::Concat(a, b) => {
            write_at(a, CONCAT, out);
            write_at(b, POSTFIX, out);
        }
        Regex::Star(a) => {
            write_at(a, POSTFIX, out);
            out.push('*');
        }
        Regex::Question(a) => {
            write_at(a, POSTFIX, out);
            out.push('?');
        }
    }
    if wrap {
        out.push(')');
    }
}
