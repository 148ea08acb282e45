use alloc::vec::Vec;
use core::fmt;

/// Errors raised when building an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    /// No symbols were given.
    #[error("alphabet must not be empty")]
    Empty,
    /// A symbol was listed twice.
    #[error("duplicate symbol {:?} in alphabet", *.0 as char)]
    Duplicate(u8),
    /// A symbol outside printable ASCII.
    #[error("symbol 0x{0:02x} is not printable ASCII")]
    NotPrintable(u8),
}

/// A finite, non-empty set of single-byte symbols kept in ascending order.
///
/// The wildcard `.` is never a member: it stands for "any symbol of the
/// alphabet" wherever it appears in a regex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    /// Builds an alphabet from distinct printable ASCII bytes.
    pub fn new(symbols: &[u8]) -> Result<Self, AlphabetError> {
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        let mut sorted = symbols.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(AlphabetError::Duplicate(w[0]));
            }
        }
        if let Some(&b) = sorted.iter().find(|&&b| !(0x20..0x7f).contains(&b)) {
            return Err(AlphabetError::NotPrintable(b));
        }
        Ok(Alphabet { symbols: sorted })
    }

    /// The union of the symbols occurring in `words`, or `None` if they are
    /// all empty.
    pub fn from_words<'a, I>(words: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut seen = [false; 256];
        for w in words {
            for &b in w {
                seen[b as usize] = true;
            }
        }
        let symbols: Vec<u8> = (0u8..=255).filter(|&b| seen[b as usize]).collect();
        Alphabet::new(&symbols).ok()
    }

    /// The first `n` symbols of `0-9a-zA-Z`, used for random benchmarks.
    pub fn digits(n: usize) -> Result<Self, AlphabetError> {
        const POOL: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
        Alphabet::new(&POOL[..n.min(POOL.len())])
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, b: u8) -> bool {
        self.symbols.binary_search(&b).is_ok()
    }

    /// Position of `b` in the sorted symbol list.
    pub fn index_of(&self, b: u8) -> Option<usize> {
        self.symbols.binary_search(&b).ok()
    }

    /// True when every symbol of `w` belongs to the alphabet.
    pub fn covers(&self, w: &[u8]) -> bool {
        w.iter().all(|&b| self.contains(b))
    }

    /// Returns a new alphabet extended with the symbols of `w`.
    pub fn with_symbols(&self, w: &[u8]) -> Self {
        let mut all = self.symbols.clone();
        all.extend(w.iter().copied().filter(|b| !self.contains(*b)));
        all.sort_unstable();
        all.dedup();
        Alphabet { symbols: all }
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", crate::word_to_string(&self.symbols))
    }
}
