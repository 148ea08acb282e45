//! Regular expression synthesis from positive and negative examples.
//!
//! The crate provides two baseline synthesizers and a divide-and-conquer
//! driver that splits the positive strings into parts, synthesizes one
//! subexpression per part and concatenates the results:
//!
//! - [`alpharegex`]: best-first enumeration over hole templates with
//!   over/under-approximation pruning.
//! - [`bluefringe`]: evidence-driven state merging over a prefix tree
//!   acceptor, followed by state elimination back to a regex.
//! - [`framework`]: the split driver, parameterized by a [`framework::Engine`]
//!   and a [`framework::Strategy`].
//!
//! Everything here is `no_std` + `alloc`. Wall-clock time enters through the
//! [`clock::Clock`] trait and part-level parallelism through
//! [`framework::PartExecutor`]; the `regsynth` crate supplies std-backed
//! implementations of both, plus file formats and the `synth` CLI.
//!
//! ```
//! use regsynth_core::{Alphabet, Regex};
//!
//! let sigma = Alphabet::new(b"abc").unwrap();
//! let r = Regex::parse("a*b*c*.*", &sigma).unwrap();
//! assert!(r.matches(b"aabbccabca").unwrap());
//! assert_eq!(r.to_string(), "a*b*c*.*");
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alpharegex;
mod alphabet;
pub mod bluefringe;
pub mod clock;
pub mod dfa;
pub mod examples;
pub mod framework;
pub mod metrics;
pub mod nfa;
pub mod oracle;
pub mod random;
mod regex;
pub mod splitter;

pub use alphabet::{Alphabet, AlphabetError};
pub use regex::parse::ParseError;
pub use regex::{Regex, RegexError};

/// A string over an [`Alphabet`]; symbols are single bytes.
pub type Word = alloc::vec::Vec<u8>;

/// Renders a word for messages and file formats. Symbols are ASCII.
pub fn word_to_string(w: &[u8]) -> alloc::string::String {
    w.iter().map(|&b| b as char).collect()
}
