//! Codehood, prefix/suffix tests, maximality, letter orders and composition.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::word::{FiniteLanguage, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("the empty word belongs to the language")]
    EmptyWordInX,
    #[error("not a code: {0}")]
    NotACode(DoubleFactorization),
    #[error("maximality needs an alphabet with at least two letters")]
    UnaryAlphabet,
    #[error("substitution is not a bijection onto the target code: {0}")]
    NotBijective(String),
    #[error("target of the substitution is not a code")]
    ZNotCode,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("{count} words exceed the bound {n}")]
    BoundViolated { count: usize, n: usize },
    #[error("two powers a^{0} and a^{1} lie in the language")]
    MultiplePowers(usize, usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Two distinct factorizations of the same word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleFactorization {
    pub word: Word,
    pub left: Vec<Word>,
    pub right: Vec<Word>,
}

impl DoubleFactorization {
    /// Both sides concatenate to `word` and differ as sequences.
    pub fn is_valid(&self, x: &FiniteLanguage) -> bool {
        let cat = |ws: &[Word]| ws.iter().fold(Word::empty(), |acc, w| acc.concat(w));
        self.left != self.right
            && cat(&self.left) == self.word
            && cat(&self.right) == self.word
            && self.left.iter().chain(&self.right).all(|w| x.contains(w))
    }
}

impl std::fmt::Display for DoubleFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |ws: &[Word]| {
            ws.iter()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
                .join("·")
        };
        write!(f, "{} = {} = {}", self.word, join(&self.left), join(&self.right))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub is_code: bool,
    pub counterexample: Option<DoubleFactorization>,
}

#[derive(Clone, Debug)]
enum Step {
    Init { top: Word, bottom: Word },
    Extend { word: Word, swap: bool },
}

fn reject_empty(x: &FiniteLanguage) -> Result<(), CodeError> {
    if x.contains(&Word::empty()) {
        Err(CodeError::EmptyWordInX)
    } else {
        Ok(())
    }
}

/// Sardinas–Patterson test over dangling suffixes, with witness reconstruction.
pub fn is_code(x: &FiniteLanguage) -> Result<CodeReport, CodeError> {
    reject_empty(x)?;
    let words: Vec<&Word> = x.iter().collect();
    let mut nodes: Vec<(Option<usize>, Step)> = Vec::new();
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut queue: VecDeque<(usize, Word)> = VecDeque::new();

    for &p in &words {
        for &q in &words {
            if p != q && p.is_prefix_of(q) {
                let s = Word::from_bytes(&q.as_bytes()[p.len()..]);
                if !index.contains_key(&s) {
                    let id = nodes.len();
                    nodes.push((
                        None,
                        Step::Init {
                            top: q.clone(),
                            bottom: p.clone(),
                        },
                    ));
                    index.insert(s.clone(), id);
                    queue.push_back((id, s));
                }
            }
        }
    }

    while let Some((id, s)) = queue.pop_front() {
        for &z in &words {
            if *z == s {
                let witness = rebuild(&nodes, id, z.clone());
                return Ok(CodeReport {
                    is_code: false,
                    counterexample: Some(witness),
                });
            }
            let (next, swap) = if s.is_prefix_of(z) {
                (Word::from_bytes(&z.as_bytes()[s.len()..]), true)
            } else if z.is_prefix_of(&s) {
                (Word::from_bytes(&s.as_bytes()[z.len()..]), false)
            } else {
                continue;
            };
            if !index.contains_key(&next) {
                let nid = nodes.len();
                nodes.push((
                    Some(id),
                    Step::Extend {
                        word: z.clone(),
                        swap,
                    },
                ));
                index.insert(next.clone(), nid);
                queue.push_back((nid, next));
            }
        }
    }
    Ok(CodeReport {
        is_code: true,
        counterexample: None,
    })
}

fn rebuild(nodes: &[(Option<usize>, Step)], last: usize, closing: Word) -> DoubleFactorization {
    let mut chain = Vec::new();
    let mut cur = Some(last);
    while let Some(id) = cur {
        chain.push(&nodes[id].1);
        cur = nodes[id].0;
    }
    chain.reverse();
    let (mut top, mut bottom) = (Vec::new(), Vec::new());
    for step in chain {
        match step {
            Step::Init { top: t, bottom: b } => {
                top.push(t.clone());
                bottom.push(b.clone());
            }
            Step::Extend { word, swap } => {
                bottom.push(word.clone());
                if *swap {
                    std::mem::swap(&mut top, &mut bottom);
                }
            }
        }
    }
    bottom.push(closing);
    let word = top.iter().fold(Word::empty(), |acc, w| acc.concat(w));
    DoubleFactorization {
        word,
        left: bottom,
        right: top,
    }
}

/// No word is a proper prefix of another.
pub fn is_prefix_code(x: &FiniteLanguage) -> Result<bool, CodeError> {
    reject_empty(x)?;
    let mut ws: Vec<&[u8]> = x.iter().map(Word::as_bytes).collect();
    ws.sort_unstable();
    Ok(ws.windows(2).all(|p| !p[1].starts_with(p[0])))
}

pub fn is_suffix_code(x: &FiniteLanguage) -> Result<bool, CodeError> {
    is_prefix_code(&x.reversal())
}

pub fn is_biprefix(x: &FiniteLanguage) -> Result<bool, CodeError> {
    Ok(is_prefix_code(x)? && is_suffix_code(x)?)
}

/// `sum over x of k^(-|x|)` for the uniform distribution on `k` letters.
pub fn bernoulli_measure(x: &FiniteLanguage) -> BigRational {
    let k = BigInt::from(x.letters().len());
    x.iter().fold(BigRational::zero(), |acc, w| {
        acc + BigRational::new(BigInt::one(), num::pow(k.clone(), w.len()))
    })
}

/// A finite code is maximal iff its uniform Bernoulli measure equals 1.
pub fn is_maximal_finite_code(x: &FiniteLanguage) -> Result<bool, CodeError> {
    if x.letters().len() < 2 {
        return Err(CodeError::UnaryAlphabet);
    }
    let report = is_code(x)?;
    if let Some(w) = report.counterexample {
        return Err(CodeError::NotACode(w));
    }
    Ok(bernoulli_measure(x).is_one())
}

/// The unique `n >= 1` with `a^n` in `X`.
pub fn order_of_letter(x: &FiniteLanguage, a: u8) -> Result<Option<usize>, CodeError> {
    let mut found: Option<usize> = None;
    for w in x.iter() {
        if !w.is_empty() && w.as_bytes().iter().all(|&c| c == a) {
            if let Some(m) = found {
                return Err(CodeError::MultiplePowers(m, w.len()));
            }
            found = Some(w.len());
        }
    }
    Ok(found)
}

/// All factorizations of `u` over `x`, at most `limit` of them.
pub fn factorizations(u: &Word, x: &FiniteLanguage, limit: usize) -> Vec<Vec<Word>> {
    let bytes = u.as_bytes();
    let n = bytes.len();
    // ends[i]: words of x that start at position i and fit
    let mut reach = vec![false; n + 1];
    reach[n] = true;
    for i in (0..n).rev() {
        reach[i] = x
            .iter()
            .any(|w| !w.is_empty() && bytes[i..].starts_with(w.as_bytes()) && reach[i + w.len()]);
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    collect_factorizations(bytes, 0, x, &reach, &mut stack, &mut out, limit);
    out
}

fn collect_factorizations(
    bytes: &[u8],
    pos: usize,
    x: &FiniteLanguage,
    reach: &[bool],
    stack: &mut Vec<Word>,
    out: &mut Vec<Vec<Word>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if pos == bytes.len() {
        out.push(stack.clone());
        return;
    }
    if !reach[pos] {
        return;
    }
    for w in x.iter() {
        let end = pos + w.len();
        if !w.is_empty() && end <= bytes.len() && bytes[pos..end] == *w.as_bytes() && reach[end] {
            stack.push(w.clone());
            collect_factorizations(bytes, end, x, reach, stack, out, limit);
            stack.pop();
        }
    }
}

fn require_code(z: &FiniteLanguage) -> Result<(), CodeError> {
    if z.contains(&Word::empty()) || !is_code(z)?.is_code {
        return Err(CodeError::ZNotCode);
    }
    Ok(())
}

/// Image of `y` under the morphism induced by a bijection from `y`'s letters onto `z`.
pub fn compose(
    y: &FiniteLanguage,
    z: &FiniteLanguage,
    beta: &BTreeMap<u8, Word>,
) -> Result<FiniteLanguage, CodeError> {
    require_code(z)?;
    let keys: BTreeSet<u8> = beta.keys().copied().collect();
    let letters: BTreeSet<u8> = y.letters().iter().copied().collect();
    if keys != letters {
        return Err(CodeError::NotBijective(
            "domain differs from the source alphabet".into(),
        ));
    }
    let images: BTreeSet<&Word> = beta.values().collect();
    if images.len() != beta.len() {
        return Err(CodeError::NotBijective("two letters share an image".into()));
    }
    if images.len() != z.len() || images.iter().any(|w| !z.contains(w)) {
        return Err(CodeError::NotBijective("image differs from the target code".into()));
    }
    let words = y.iter().map(|w| {
        w.as_bytes()
            .iter()
            .fold(Word::empty(), |acc, c| acc.concat(&beta[c]))
    });
    let out = FiniteLanguage::new(z.letters(), words)?;
    if cfg!(debug_assertions) && matches!(is_code(y), Ok(CodeReport { is_code: true, .. })) {
        assert!(is_code(&out)?.is_code, "composition of codes must be a code");
    }
    Ok(out)
}

/// `X ⊆ Z*` and every word of `Z` occurs in the factorization of some word of `X`.
pub fn decomposable_over(x: &FiniteLanguage, z: &FiniteLanguage) -> Result<bool, CodeError> {
    require_code(z)?;
    let mut used: BTreeSet<Word> = BTreeSet::new();
    for w in x.iter() {
        match factorizations(w, z, 1).into_iter().next() {
            Some(f) => used.extend(f),
            None => return Ok(false),
        }
    }
    Ok(used.len() == z.len())
}

/// For `X ⊆ a*ba*` with `X ∪ {a^n}` a code, returns the slack `n - Card(X)`.
pub fn bayonet_bound_check(
    x: &FiniteLanguage,
    a: u8,
    b: u8,
    n: usize,
) -> Result<usize, CodeError> {
    for w in x.iter() {
        let (_, mid, _) = w.strip_power(a);
        if mid.as_bytes() != [b] {
            return Err(CodeError::PreconditionFailed(format!(
                "{w} is not of the form a^r b a^v"
            )));
        }
    }
    let mut letters = x.letters().to_vec();
    if !letters.contains(&a) {
        letters.push(a);
    }
    let with_power = FiniteLanguage::new(&letters, x.iter().cloned().chain([Word::power(a, n)]))?;
    if !is_code(&with_power)?.is_code {
        return Err(CodeError::PreconditionFailed(
            "X together with a^n is not a code".into(),
        ));
    }
    n.checked_sub(x.len()).ok_or(CodeError::BoundViolated {
        count: x.len(),
        n,
    })
}
