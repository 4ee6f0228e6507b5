//! Finite ordered alphabets for node labels and edge relations.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Symbol of the singleton alphabet used for unlabeled nodes and single-relation graphs.
pub const BLANK: &str = "_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("symbol must not be empty")]
    EmptySymbol,
}

/// A nonempty set of symbols, kept in lexicographic order.
///
/// Symbols are addressed by their index in that order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if symbols.iter().any(String::is_empty) {
            return Err(AlphabetError::EmptySymbol);
        }
        symbols.sort();
        for pair in symbols.windows(2) {
            if pair[0] == pair[1] {
                return Err(AlphabetError::Duplicate(pair[0].clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn blank() -> Self {
        Alphabet { symbols: vec![BLANK.to_string()] }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.binary_search_by(|s| s.as_str().cmp(symbol)).ok()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.index_of(symbol).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.symbols.iter()).finish()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(","))
    }
}

impl Serialize for Alphabet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.symbols.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let symbols = Vec::<String>::deserialize(deserializer)?;
        Alphabet::new(symbols).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_are_sorted_and_indexed() {
        let a = Alphabet::new(["c", "a", "b"]).unwrap();
        assert_eq!(a.symbols(), ["a", "b", "c"]);
        assert_eq!(a.index_of("b"), Some(1));
        assert_eq!(a.index_of("z"), None);
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(Alphabet::new(["a", "a"]), Err(AlphabetError::Duplicate("a".into())));
        assert_eq!(Alphabet::new(Vec::<String>::new()), Err(AlphabetError::Empty));
    }
}
