//! Built-in maximal codes used as golden data and as a test corpus.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::poly::{ExpSet, NoncommPoly};
use crate::word::{FiniteLanguage, Word, WordError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("fixture is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("fixture {0} gives neither words nor a factorization")]
    NoLanguage(String),
    #[error("factorization of {0} does not yield a 0/1 polynomial")]
    NotCharacteristic(String),
    #[error("listed words of {0} disagree with its factorization")]
    FactorizationMismatch(String),
    #[error("fixture letter must be a single character, got {0:?}")]
    BadLetter(String),
}

/// A grid of words as printed, with the factorization `(P, Q)` it is stated for.
#[derive(Clone, Debug)]
pub struct KnownArrangement {
    pub w: Word,
    pub p: ExpSet,
    pub q: ExpSet,
    pub grid: Vec<Vec<Word>>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub letter: u8,
    pub n: usize,
    language: FiniteLanguage,
    /// `(P, S)` with `X - 1 = P(A - 1)S`, when known.
    pub factorization: Option<(NoncommPoly, NoncommPoly)>,
    pub known_xw: Vec<(Word, Vec<Word>)>,
    pub known_arrangements: Vec<KnownArrangement>,
}

impl CorpusEntry {
    pub fn language(&self) -> FiniteLanguage {
        self.language.clone()
    }

    /// Expected `X_w` as exponent pairs, sorted.
    pub fn known_entries(&self, w: &Word) -> Option<Vec<(usize, usize)>> {
        let (_, words) = self.known_xw.iter().find(|(m, _)| m == w)?;
        let mut out: Vec<(usize, usize)> = words
            .iter()
            .map(|u| {
                let (r, _, v) = u.strip_power(self.letter);
                (r, v)
            })
            .collect();
        out.sort_unstable();
        Some(out)
    }

    pub fn from_json(text: &str) -> Result<Self, CorpusError> {
        let raw: RawEntry = serde_json::from_str(text)?;
        let letter = single_letter(&raw.letter)?;
        let mut letters = Vec::new();
        for s in &raw.alphabet {
            letters.push(single_letter(s)?);
        }
        let parse_all = |ws: &[String]| -> Result<Vec<Word>, WordError> {
            ws.iter().map(|s| Word::parse_powers(s)).collect()
        };
        let factorization = match (&raw.prefix_factor, &raw.suffix_factor) {
            (Some(p), Some(s)) => {
                let p = FiniteLanguage::new(&letters, parse_all(p)?)?;
                let s = FiniteLanguage::new(&letters, parse_all(s)?)?;
                Some((NoncommPoly::char_poly(&p), NoncommPoly::char_poly(&s)))
            }
            _ => None,
        };
        let language = match (&raw.words, &factorization) {
            (Some(ws), fact) => {
                let x = FiniteLanguage::new(&letters, parse_all(ws)?)?;
                if let Some((p, s)) = fact {
                    if factorized_words(&letters, p, s, &raw.name)? != x {
                        return Err(CorpusError::FactorizationMismatch(raw.name));
                    }
                }
                x
            }
            (None, Some((p, s))) => factorized_words(&letters, p, s, &raw.name)?,
            (None, None) => return Err(CorpusError::NoLanguage(raw.name)),
        };
        let mut known_xw = Vec::new();
        for (w, ws) in &raw.known_xw {
            known_xw.push((Word::parse_powers(w)?, parse_all(ws)?));
        }
        let mut known_arrangements = Vec::new();
        for k in &raw.known_arrangements {
            known_arrangements.push(KnownArrangement {
                w: Word::parse_powers(&k.w)?,
                p: ExpSet::new(k.p.iter().copied()),
                q: ExpSet::new(k.q.iter().copied()),
                grid: k
                    .grid
                    .iter()
                    .map(|row| parse_all(row))
                    .collect::<Result<_, _>>()?,
            });
        }
        Ok(CorpusEntry {
            name: raw.name,
            description: raw.description,
            letter,
            n: raw.n,
            language,
            factorization,
            known_xw,
            known_arrangements,
        })
    }

    /// The mirror-image code, without golden data.
    pub fn reversed(&self) -> CorpusEntry {
        CorpusEntry {
            name: format!("{}-reversed", self.name),
            description: format!("reversal of {}", self.name),
            letter: self.letter,
            n: self.n,
            language: self.language.reversal(),
            factorization: None,
            known_xw: Vec::new(),
            known_arrangements: Vec::new(),
        }
    }
}

fn single_letter(s: &str) -> Result<u8, CorpusError> {
    match s.as_bytes() {
        [c] => Ok(*c),
        _ => Err(CorpusError::BadLetter(s.to_string())),
    }
}

/// Support of `P(A - 1)S + 1`, which must be a 0/1 polynomial.
pub fn factorized_words(
    letters: &[u8],
    p: &NoncommPoly,
    s: &NoncommPoly,
    name: &str,
) -> Result<FiniteLanguage, CorpusError> {
    let mut a_minus_one = -&NoncommPoly::one();
    for &c in letters {
        a_minus_one = &a_minus_one + &NoncommPoly::monomial(Word::from_bytes(vec![c]), 1);
    }
    let x = &(&(p * &a_minus_one) * s) + &NoncommPoly::one();
    let words = x
        .as_characteristic()
        .ok_or_else(|| CorpusError::NotCharacteristic(name.to_string()))?;
    Ok(FiniteLanguage::new(letters, words)?)
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    #[serde(default)]
    description: String,
    letter: String,
    n: usize,
    alphabet: Vec<String>,
    words: Option<Vec<String>>,
    prefix_factor: Option<Vec<String>>,
    suffix_factor: Option<Vec<String>>,
    #[serde(default)]
    known_xw: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    known_arrangements: Vec<RawArrangement>,
}

#[derive(Deserialize)]
struct RawArrangement {
    w: String,
    #[serde(rename = "P")]
    p: Vec<usize>,
    #[serde(rename = "Q")]
    q: Vec<usize>,
    grid: Vec<Vec<String>>,
}

const ORDER8: &str = include_str!("../fixtures/order8.json");
const ORDER4: &str = include_str!("../fixtures/order4.json");
const ORDER5: &str = include_str!("../fixtures/order5.json");

/// 17-word code with `a^8`.
pub fn order8() -> CorpusEntry {
    CorpusEntry::from_json(ORDER8).expect("embedded fixture")
}

/// 13-word code with `a^4`.
pub fn order4() -> CorpusEntry {
    CorpusEntry::from_json(ORDER4).expect("embedded fixture")
}

/// Factorizing code with `a^5`, given by its positive factorization.
pub fn order5() -> CorpusEntry {
    CorpusEntry::from_json(ORDER5).expect("embedded fixture")
}

/// `{a^n} ∪ a^I B a^J` for an exact-sum pair `(I, J)`; this is `a^I (A - 1) a^J + 1`.
pub fn krasner_bayonet(name: &str, letters: &[u8], i: &ExpSet, j: &ExpSet) -> CorpusEntry {
    let a = letters[0];
    let n = i.len() * j.len();
    let mut words = vec![Word::power(a, n)];
    for &b in &letters[1..] {
        let mid = Word::from_bytes(vec![b]);
        for r in i.iter() {
            for v in j.iter() {
                words.push(Word::bayonet(r, &mid, v, a));
            }
        }
    }
    CorpusEntry {
        name: name.to_string(),
        description: format!("a^{n} together with a^{i:?} B a^{j:?}"),
        letter: a,
        n,
        language: FiniteLanguage::new(letters, words).expect("valid letters"),
        factorization: None,
        known_xw: Vec::new(),
        known_arrangements: Vec::new(),
    }
}

/// `{a^n} ∪ {a^i b : i < n}`, a maximal prefix code.
pub fn semaphore(n: usize) -> CorpusEntry {
    let mut words = vec![Word::power(b'a', n)];
    words.extend((0..n).map(|i| Word::bayonet(i, &Word::from("b"), 0, b'a')));
    CorpusEntry {
        name: format!("semaphore{n}"),
        description: format!("a^{n} together with a^i b for i < {n}"),
        letter: b'a',
        n,
        language: FiniteLanguage::new(b"ab", words).expect("valid letters"),
        factorization: None,
        known_xw: Vec::new(),
        known_arrangements: Vec::new(),
    }
}

/// Every corpus code: the three golden codes, their reversals, and generated codes.
pub fn all() -> Vec<CorpusEntry> {
    let (o8, o4, o5) = (order8(), order4(), order5());
    vec![
        o8.reversed(),
        o4.reversed(),
        o5.reversed(),
        o8,
        o4,
        o5,
        semaphore(3),
        semaphore(6),
        krasner_bayonet("krasner4", b"ab", &ExpSet::from([0, 2]), &ExpSet::from([0, 1])),
        krasner_bayonet("krasner6", b"abc", &ExpSet::from([0, 3]), &ExpSet::from([0, 1, 2])),
        krasner_bayonet("krasner9", b"ab", &ExpSet::from([0, 1, 2]), &ExpSet::from([0, 3, 6])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        assert_eq!(order8().language().len(), 17);
        assert_eq!(order4().language().len(), 13);
        let o5 = order5();
        assert!(o5.factorization.is_some());
        assert_eq!(o5.language().len(), 226);
        assert!(o5.language().contains(&Word::parse_powers("a^5").unwrap()));
    }

    #[test]
    fn known_entries_as_pairs() {
        let e = order5();
        assert_eq!(
            e.known_entries(&Word::from("b")).unwrap(),
            vec![(2, 7), (2, 8), (2, 9), (2, 10), (2, 11)]
        );
        let o8 = order8();
        let bab = o8.known_entries(&Word::from("bab")).unwrap();
        assert!(bab.contains(&(3, 2)));
        assert_eq!(bab.len(), 8);
    }

    #[test]
    fn factorization_mismatch_is_reported() {
        let text = r#"{"name":"t","letter":"a","n":1,"alphabet":["a","b"],
            "words":["a","b","ab"],"prefix_factor":["1"],"suffix_factor":["1"]}"#;
        assert!(matches!(
            CorpusEntry::from_json(text),
            Err(CorpusError::FactorizationMismatch(_))
        ));
    }

    #[test]
    fn generated_codes_have_expected_sizes() {
        let k = krasner_bayonet("k", b"abc", &ExpSet::from([0, 3]), &ExpSet::from([0, 1, 2]));
        assert_eq!(k.n, 6);
        assert_eq!(k.language().len(), 13);
        assert_eq!(semaphore(6).language().len(), 7);
    }
}
