//! The sets `X_w = a*wa* ∩ (X* \ (a^n X* ∪ X* a^n))` and their residue images.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::StarAutomaton;
use crate::code::{is_code, is_maximal_finite_code, order_of_letter, CodeError};
use crate::word::{FiniteLanguage, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XwError {
    #[error("no power of {0:?} belongs to the language")]
    NoPowerOfA(char),
    #[error("{0:?} must be nonempty and start and end with a letter other than the distinguished one")]
    WNotBayonetShape(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Exponent pairs `(r, v)` with `a^r w a^v ∈ X_w`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XwSet {
    pub w: Word,
    pub n: usize,
    pub entries: Vec<(usize, usize)>,
}

impl XwSet {
    pub fn new(w: Word, n: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut entries: Vec<(usize, usize)> = entries.into_iter().collect();
        entries.sort_unstable();
        entries.dedup();
        XwSet { w, n, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, e: (usize, usize)) -> bool {
        self.entries.binary_search(&e).is_ok()
    }

    pub fn word(&self, e: (usize, usize), a: u8) -> Word {
        Word::bayonet(e.0, &self.w, e.1, a)
    }

    pub fn words(&self, a: u8) -> Vec<Word> {
        self.entries.iter().map(|&e| self.word(e, a)).collect()
    }

    /// Residue pairs; a set of size `len()` iff the residue map is injective.
    pub fn residues(&self) -> BTreeSet<(usize, usize)> {
        self.entries
            .iter()
            .map(|&(r, v)| (r % self.n, v % self.n))
            .collect()
    }

    pub fn residues_injective(&self) -> bool {
        self.residues().len() == self.entries.len()
    }
}

/// `w ∈ B(a*B)*`: nonempty, first and last letters differ from `a`.
pub fn is_middle_shape(w: &Word, a: u8) -> bool {
    match (w.as_bytes().first(), w.as_bytes().last()) {
        (Some(&f), Some(&l)) => f != a && l != a,
        _ => false,
    }
}

/// Reusable extraction context: the `X*` automaton and the order of `a`.
#[derive(Clone, Debug)]
pub struct XwExtractor {
    x: FiniteLanguage,
    a: u8,
    n: usize,
    automaton: StarAutomaton,
}

impl XwExtractor {
    pub fn new(x: &FiniteLanguage, a: u8) -> Result<Self, XwError> {
        let n = order_of_letter(x, a)?.ok_or(XwError::NoPowerOfA(a as char))?;
        Ok(XwExtractor {
            x: x.clone(),
            a,
            n,
            automaton: StarAutomaton::build(x),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letter(&self) -> u8 {
        self.a
    }

    pub fn language(&self) -> &FiniteLanguage {
        &self.x
    }

    pub fn automaton(&self) -> &StarAutomaton {
        &self.automaton
    }

    /// Exclusive bound on `r` and `v` used by the search.
    pub fn bound(&self) -> usize {
        self.n + self.automaton.state_count()
    }

    /// Table `m[r][v] = (a^r w a^v ∈ X*)` for `r, v < bound()`.
    fn membership_grid(&self, w: &Word) -> Vec<Vec<bool>> {
        let m = &self.automaton;
        let bound = self.bound();
        let mut grid = vec![vec![false; bound]; bound];
        let mut left = m.initial();
        for row in grid.iter_mut() {
            let mut s = m.run(left, w.as_bytes());
            for cell in row.iter_mut() {
                *cell = m.is_accepting(s);
                s = m.step(s, self.a);
            }
            left = m.step(left, self.a);
        }
        grid
    }

    pub fn xw(&self, w: &Word) -> Result<XwSet, XwError> {
        if !is_middle_shape(w, self.a) {
            return Err(XwError::WNotBayonetShape(w.to_string()));
        }
        let n = self.n;
        let grid = self.membership_grid(w);
        let mut entries = Vec::new();
        for (r, row) in grid.iter().enumerate() {
            for (v, &inside) in row.iter().enumerate() {
                if inside && (r < n || !grid[r - n][v]) && (v < n || !row[v - n]) {
                    entries.push((r, v));
                }
            }
        }
        Ok(XwSet::new(w.clone(), n, entries))
    }

    /// `{(i mod n, j mod n) : a^i w a^j ∈ X*}`.
    pub fn ca(&self, w: &Word) -> Result<BTreeSet<(usize, usize)>, XwError> {
        if !is_middle_shape(w, self.a) {
            return Err(XwError::WNotBayonetShape(w.to_string()));
        }
        let n = self.n;
        let grid = self.membership_grid(w);
        let mut out = BTreeSet::new();
        for (r, row) in grid.iter().enumerate() {
            for (v, &inside) in row.iter().enumerate() {
                if inside {
                    out.insert((r % n, v % n));
                }
            }
        }
        Ok(out)
    }
}

pub fn compute_xw(x: &FiniteLanguage, a: u8, w: &Word) -> Result<XwSet, XwError> {
    XwExtractor::new(x, a)?.xw(w)
}

pub fn compute_ca(x: &FiniteLanguage, a: u8, w: &Word) -> Result<BTreeSet<(usize, usize)>, XwError> {
    XwExtractor::new(x, a)?.ca(w)
}

/// Checked properties of one `X_w`; failures are recorded, not raised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XwReport {
    pub w: Word,
    pub n: usize,
    pub cardinality: usize,
    pub language_maximal: bool,
    pub residues_unique: bool,
    pub cardinality_is_n: bool,
    pub code_with_power: bool,
    pub largest_exponent: usize,
    pub search_bound: usize,
}

impl XwReport {
    pub fn passes(&self) -> bool {
        self.residues_unique && self.cardinality_is_n && self.code_with_power
    }
}

pub fn verify_xw_properties(x: &FiniteLanguage, a: u8, w: &Word) -> Result<XwReport, XwError> {
    let ext = XwExtractor::new(x, a)?;
    verify_with(&ext, w)
}

pub fn verify_with(ext: &XwExtractor, w: &Word) -> Result<XwReport, XwError> {
    let xw = ext.xw(w)?;
    let x = ext.language();
    let language_maximal = is_maximal_finite_code(x).unwrap_or(false);
    let mut words = xw.words(ext.a);
    words.push(Word::power(ext.a, ext.n));
    let with_power = FiniteLanguage::new(x.letters(), words).map_err(CodeError::from)?;
    Ok(XwReport {
        w: w.clone(),
        n: ext.n,
        cardinality: xw.len(),
        language_maximal,
        residues_unique: xw.residues_injective(),
        cardinality_is_n: xw.len() == ext.n,
        code_with_power: is_code(&with_power)?.is_code,
        largest_exponent: xw.entries.iter().map(|&(r, v)| r.max(v)).max().unwrap_or(0),
        search_bound: ext.bound(),
    })
}

/// Factors of words of `X` in `B(a*B)*` with at most `max_b` letters other than `a`.
pub fn enumerate_middles(x: &FiniteLanguage, a: u8, max_b: usize) -> Vec<Word> {
    let mut out: BTreeSet<Word> = BTreeSet::new();
    for word in x.iter() {
        let bytes = word.as_bytes();
        for i in 0..bytes.len() {
            if bytes[i] == a {
                continue;
            }
            let mut count = 0;
            for j in i..bytes.len() {
                if bytes[j] != a {
                    count += 1;
                    if count > max_b {
                        break;
                    }
                    out.insert(Word::from_bytes(&bytes[i..=j]));
                }
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn w(s: &str) -> Word {
        Word::parse_powers(s).unwrap()
    }

    #[test]
    fn order8_golden_sets() {
        let e = corpus::order8();
        let ext = XwExtractor::new(&e.language(), b'a').unwrap();
        let xb = ext.xw(&w("b")).unwrap();
        assert_eq!(
            xb.entries,
            vec![(0, 2), (0, 6), (1, 2), (1, 6), (2, 0), (2, 4), (3, 0), (3, 4)]
        );
        let xbab = ext.xw(&w("bab")).unwrap();
        assert_eq!(Some(xbab.entries.clone()), e.known_entries(&w("bab")));
        assert!(xbab.words(b'a').contains(&w("a^3baba^2")));
    }

    #[test]
    fn order5_single_letter_middle() {
        let xb = compute_xw(&corpus::order5().language(), b'a', &w("b")).unwrap();
        assert_eq!(xb.entries, vec![(2, 7), (2, 8), (2, 9), (2, 10), (2, 11)]);
    }

    #[test]
    fn residue_images() {
        let ca = compute_ca(&corpus::order5().language(), b'a', &w("b")).unwrap();
        assert_eq!(ca, BTreeSet::from([(2, 0), (2, 1), (2, 2), (2, 3), (2, 4)]));
        let ca = compute_ca(&corpus::order8().language(), b'a', &w("b")).unwrap();
        assert_eq!(ca.len(), 8);
        let firsts: BTreeSet<usize> = ca.iter().map(|p| p.0).collect();
        assert_eq!(firsts, BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn shape_and_power_errors() {
        let x = corpus::order8().language();
        assert!(matches!(compute_xw(&x, b'a', &w("ab")), Err(XwError::WNotBayonetShape(_))));
        assert!(matches!(compute_xw(&x, b'a', &Word::empty()), Err(XwError::WNotBayonetShape(_))));
        let no_power = FiniteLanguage::parse("ab", &["b", "ab"]).unwrap();
        assert_eq!(compute_xw(&no_power, b'a', &w("b")), Err(XwError::NoPowerOfA('a')));
    }

    #[test]
    fn property_reports() {
        let r = verify_xw_properties(&corpus::order8().language(), b'a', &w("b")).unwrap();
        assert!(r.passes() && r.language_maximal);
        let r = verify_xw_properties(&corpus::order4().language(), b'a', &w("bb")).unwrap();
        assert!(r.passes());
        assert_eq!(r.cardinality, 4);
        let small = FiniteLanguage::parse("ab", &["a^2", "b"]).unwrap();
        let r = verify_xw_properties(&small, b'a', &w("b")).unwrap();
        assert_eq!(r.cardinality, 1);
        assert!(!r.cardinality_is_n && r.residues_unique && r.code_with_power);
        assert!(!r.language_maximal);
    }

    #[test]
    fn middles() {
        let x = corpus::order8().language();
        assert_eq!(enumerate_middles(&x, b'a', 3), vec![w("b"), w("bb"), w("bab")]);
        assert_eq!(enumerate_middles(&x, b'a', 1), vec![w("b")]);
        let four = enumerate_middles(&corpus::order4().language(), b'a', 2);
        assert_eq!(four, vec![w("b"), w("bb"), w("bab")]);
        assert_eq!(enumerate_middles(&corpus::order5().language(), b'a', 3).len(), 31);
    }

    #[test]
    fn cardinality_law_on_corpus() {
        for e in corpus::all() {
            let x = e.language();
            let ext = XwExtractor::new(&x, e.letter).unwrap();
            for m in enumerate_middles(&x, e.letter, 3) {
                let r = verify_with(&ext, &m).unwrap();
                assert!(r.passes(), "{} {}: {r:?}", e.name, m);
                assert!(r.largest_exponent + 1 < r.search_bound);
                assert_eq!(ext.ca(&m).unwrap(), ext.xw(&m).unwrap().residues());
            }
        }
    }
}
