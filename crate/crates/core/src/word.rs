//! Words over small byte alphabets and finite languages.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet symbol {0:?} is not a single ASCII character")]
    BadSymbol(String),
    #[error("duplicate alphabet symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("word {word:?} uses letter {letter:?} outside the alphabet")]
    LetterOutsideAlphabet { word: String, letter: char },
    #[error("distinguished letter {0:?} is not in the alphabet")]
    MissingDistinguished(char),
    #[error("malformed power notation {0:?}")]
    BadPowerNotation(String),
}

/// A finite word; the empty word is allowed. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bytes(bytes: impl Into<Vec<u8>>) -> Self {
        Word(bytes.into())
    }

    /// Parses plain letters with optional `^k` exponents, e.g. `a^3ba^4` or `b^2`.
    /// A lone `1` denotes the empty word.
    pub fn parse_powers(s: &str) -> Result<Self, WordError> {
        if s == "1" {
            return Ok(Word::empty());
        }
        let bytes = s.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if !c.is_ascii_graphic() || c == b'^' || c.is_ascii_digit() {
                return Err(WordError::BadPowerNotation(s.to_string()));
            }
            i += 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let k: usize = s[start..i]
                    .parse()
                    .map_err(|_| WordError::BadPowerNotation(s.to_string()))?;
                out.extend(std::iter::repeat(c).take(k));
            } else {
                out.push(c);
            }
        }
        Ok(Word(out))
    }

    /// `a^r w a^v`.
    pub fn bayonet(r: usize, w: &Word, v: usize, a: u8) -> Self {
        let mut out = Vec::with_capacity(r + w.len() + v);
        out.extend(std::iter::repeat(a).take(r));
        out.extend_from_slice(&w.0);
        out.extend(std::iter::repeat(a).take(v));
        Word(out)
    }

    pub fn power(a: u8, k: usize) -> Self {
        Word(vec![a; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Splits `a^r u a^v` with `u` neither starting nor ending in `a`.
    pub fn strip_power(&self, a: u8) -> (usize, Word, usize) {
        let r = self.0.iter().take_while(|&&c| c == a).count();
        if r == self.0.len() {
            return (r, Word::empty(), 0);
        }
        let v = self.0.iter().rev().take_while(|&&c| c == a).count();
        (r, Word(self.0[r..self.0.len() - v].to_vec()), v)
    }

    /// Compact rendering with exponents, e.g. `a^2ba^4`.
    pub fn to_power_notation(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == c {
                j += 1;
            }
            out.push(c as char);
            if j - i > 1 {
                out.push('^');
                out.push_str(&(j - i).to_string());
            }
            i = j;
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.as_bytes().to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if !s.is_ascii() {
            return Err(serde::de::Error::custom("words must be ASCII"));
        }
        Ok(Word::from(s.as_str()))
    }
}

/// Ordered letters together with a distinguished letter `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<u8>,
    distinguished: u8,
}

impl Alphabet {
    pub fn new(letters: &[u8], distinguished: u8) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut seen = HashSet::new();
        for &c in letters {
            if !seen.insert(c) {
                return Err(WordError::DuplicateSymbol(c as char));
            }
        }
        if !seen.contains(&distinguished) {
            return Err(WordError::MissingDistinguished(distinguished as char));
        }
        Ok(Alphabet {
            letters: letters.to_vec(),
            distinguished,
        })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn distinguished(&self) -> u8 {
        self.distinguished
    }

    /// Letters other than the distinguished one.
    pub fn others(&self) -> Vec<u8> {
        self.letters
            .iter()
            .copied()
            .filter(|&c| c != self.distinguished)
            .collect()
    }
}

/// A finite set of words over an explicit alphabet, indexed for O(1) membership.
#[derive(Clone)]
pub struct FiniteLanguage {
    letters: Vec<u8>,
    words: BTreeSet<Word>,
    index: HashSet<Word>,
}

impl FiniteLanguage {
    /// Builds a language; letters used by the words must belong to `letters`.
    pub fn new(
        letters: &[u8],
        words: impl IntoIterator<Item = Word>,
    ) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        let mut sorted: Vec<u8> = Vec::new();
        for &c in letters {
            if sorted.contains(&c) {
                return Err(WordError::DuplicateSymbol(c as char));
            }
            sorted.push(c);
        }
        sorted.sort_unstable();
        let words: BTreeSet<Word> = words.into_iter().collect();
        for w in &words {
            if let Some(&c) = w.as_bytes().iter().find(|c| !sorted.contains(c)) {
                return Err(WordError::LetterOutsideAlphabet {
                    word: w.to_string(),
                    letter: c as char,
                });
            }
        }
        let index = words.iter().cloned().collect();
        Ok(FiniteLanguage {
            letters: sorted,
            words,
            index,
        })
    }

    /// Alphabet inferred from the words themselves.
    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        let words: Vec<Word> = words.into_iter().collect();
        let letters: BTreeSet<u8> = words.iter().flat_map(|w| w.as_bytes().iter().copied()).collect();
        let letters: Vec<u8> = letters.into_iter().collect();
        Self::new(&letters, words)
    }

    /// Convenience: words in power notation over the given letters.
    pub fn parse(letters: &str, words: &[&str]) -> Result<Self, WordError> {
        let ws = words
            .iter()
            .map(|w| Word::parse_powers(w))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(letters.as_bytes(), ws)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self, distinguished: u8) -> Result<Alphabet, WordError> {
        Alphabet::new(&self.letters, distinguished)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.index.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Same alphabet, different words.
    pub fn with_words(&self, words: impl IntoIterator<Item = Word>) -> Result<Self, WordError> {
        Self::new(&self.letters, words)
    }

    pub fn reversal(&self) -> FiniteLanguage {
        let words: BTreeSet<Word> = self.words.iter().map(Word::reversed).collect();
        let index = words.iter().cloned().collect();
        FiniteLanguage {
            letters: self.letters.clone(),
            words,
            index,
        }
    }

    pub fn union(&self, other: &FiniteLanguage) -> FiniteLanguage {
        let letters: BTreeSet<u8> = self.letters.iter().chain(&other.letters).copied().collect();
        let letters: Vec<u8> = letters.into_iter().collect();
        Self::new(&letters, self.words.iter().chain(&other.words).cloned())
            .expect("union of valid languages")
    }
}

impl fmt::Debug for FiniteLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter()).finish()
    }
}

impl PartialEq for FiniteLanguage {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && self.words == other.words
    }
}

impl Eq for FiniteLanguage {}

#[derive(Serialize, Deserialize)]
struct LanguageJson {
    alphabet: Vec<String>,
    words: Vec<Word>,
}

impl Serialize for FiniteLanguage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LanguageJson {
            alphabet: self.letters.iter().map(|&c| (c as char).to_string()).collect(),
            words: self.words.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteLanguage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = LanguageJson::deserialize(d)?;
        let mut letters = Vec::with_capacity(raw.alphabet.len());
        for sym in &raw.alphabet {
            let b = sym.as_bytes();
            if b.len() != 1 || !b[0].is_ascii_graphic() {
                return Err(serde::de::Error::custom(WordError::BadSymbol(sym.clone())));
            }
            letters.push(b[0]);
        }
        FiniteLanguage::new(&letters, raw.words).map_err(serde::de::Error::custom)
    }
}

/// Result of an unambiguity test on a product of languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductCheck {
    Unambiguous { cardinality: usize },
    Ambiguous {
        word: Word,
        first: Vec<Word>,
        second: Vec<Word>,
    },
}

impl ProductCheck {
    pub fn is_unambiguous(&self) -> bool {
        matches!(self, ProductCheck::Unambiguous { .. })
    }
}

/// Decides whether every word of `X1 X2 ... Xk` has exactly one factorization.
pub fn is_unambiguous_product(factors: &[FiniteLanguage]) -> ProductCheck {
    let mut seen: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
    seen.insert(Word::empty(), Vec::new());
    for factor in factors {
        let mut next: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for (prefix, parts) in &seen {
            for x in factor.iter() {
                let word = prefix.concat(x);
                let mut path = parts.clone();
                path.push(x.clone());
                if let Some(other) = next.get(&word) {
                    if let Some(rest) = complete_any(&factors[path.len()..]) {
                        let mut first = other.clone();
                        first.extend(rest.iter().cloned());
                        path.extend(rest.iter().cloned());
                        let full = first.iter().fold(Word::empty(), |acc, w| acc.concat(w));
                        return ProductCheck::Ambiguous {
                            word: full,
                            first,
                            second: path,
                        };
                    }
                    continue;
                }
                next.insert(word, path);
            }
        }
        seen = next;
    }
    ProductCheck::Unambiguous {
        cardinality: seen.len(),
    }
}

fn complete_any(rest: &[FiniteLanguage]) -> Option<Vec<Word>> {
    rest.iter().map(|f| f.iter().next().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_notation_roundtrip() {
        let w = Word::parse_powers("a^3ba^4").unwrap();
        assert_eq!(w.to_string(), "aaabaaaa");
        assert_eq!(w.to_power_notation(), "a^3ba^4");
        assert_eq!(Word::parse_powers("1").unwrap(), Word::empty());
        assert!(Word::parse_powers("a^").is_err());
    }

    #[test]
    fn shortlex_order() {
        let mut ws = vec![Word::from("ba"), Word::from("b"), Word::from("ab")];
        ws.sort();
        assert_eq!(ws, vec![Word::from("b"), Word::from("ab"), Word::from("ba")]);
    }

    #[test]
    fn strip_power_splits_outer_a() {
        let (r, u, v) = Word::from("aabaa").strip_power(b'a');
        assert_eq!((r, u.to_string(), v), (2, "b".to_string(), 2));
        let (r, u, v) = Word::from("aaa").strip_power(b'a');
        assert_eq!((r, u.is_empty(), v), (3, true, 0));
    }

    #[test]
    fn reversal_is_involution() {
        let x = FiniteLanguage::parse("ab", &["ab", "aab", "b"]).unwrap();
        assert_eq!(x.reversal().reversal(), x);
        assert!(x.reversal().contains(&Word::from("ba")));
    }

    #[test]
    fn rejects_foreign_letters() {
        assert!(matches!(
            FiniteLanguage::parse("a", &["ab"]),
            Err(WordError::LetterOutsideAlphabet { .. })
        ));
    }

    #[test]
    fn json_roundtrip_keeps_empty_word() {
        let json = r#"{"alphabet":["a","b"],"words":["aab",""]}"#;
        let x: FiniteLanguage = serde_json::from_str(json).unwrap();
        assert!(x.contains(&Word::empty()));
        let back: FiniteLanguage = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn unambiguous_products() {
        let a = FiniteLanguage::parse("ab", &["a"]).unwrap();
        let b = FiniteLanguage::parse("ab", &["b"]).unwrap();
        assert!(is_unambiguous_product(&[a, b]).is_unambiguous());

        let one_a = FiniteLanguage::parse("ab", &["1", "a"]).unwrap();
        match is_unambiguous_product(&[one_a.clone(), one_a]) {
            ProductCheck::Ambiguous { word, first, second } => {
                assert_eq!(word, Word::from("a"));
                assert_ne!(first, second);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }
}
