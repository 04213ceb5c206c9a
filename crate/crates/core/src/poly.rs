//! Exact polynomial arithmetic: noncommutative polynomials over words, univariate
//! polynomials in the distinguished letter, and exponent multisets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::word::{FiniteLanguage, Word};

/// Finite map `Word -> integer`, zero coefficients never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct NoncommPoly {
    terms: BTreeMap<Word, BigInt>,
}

impl NoncommPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::empty(), 1)
    }

    pub fn monomial(w: Word, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c.into());
        p
    }

    /// Characteristic polynomial of a finite language.
    pub fn char_poly(x: &FiniteLanguage) -> Self {
        let mut p = Self::zero();
        for w in x.iter() {
            p.add_term(w.clone(), BigInt::one());
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Support, if every coefficient is 1.
    pub fn as_characteristic(&self) -> Option<Vec<Word>> {
        self.terms
            .iter()
            .map(|(w, c)| c.is_one().then(|| w.clone()))
            .collect()
    }
}

impl Add for &NoncommPoly {
    type Output = NoncommPoly;
    fn add(self, rhs: &NoncommPoly) -> NoncommPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Neg for &NoncommPoly {
    type Output = NoncommPoly;
    fn neg(self) -> NoncommPoly {
        NoncommPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Sub for &NoncommPoly {
    type Output = NoncommPoly;
    fn sub(self, rhs: &NoncommPoly) -> NoncommPoly {
        self + &(-rhs)
    }
}

impl Mul for &NoncommPoly {
    type Output = NoncommPoly;
    fn mul(self, rhs: &NoncommPoly) -> NoncommPoly {
        let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
        for (u, c) in &self.terms {
            for (v, d) in &rhs.terms {
                *acc.entry(u.concat(v)).or_insert_with(BigInt::zero) += c * d;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        NoncommPoly { terms: acc }
    }
}

impl fmt::Debug for NoncommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let word = w.to_power_notation();
            if !first {
                f.write_str(" ")?;
            }
            if mag.is_one() {
                write!(f, "{sign}{word}")?;
            } else {
                write!(f, "{sign}{mag}*{word}")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    word: Word,
    coeff: CoeffJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Small(i64),
    Big(String),
}

impl Serialize for NoncommPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(w, c)| TermJson {
                word: w.clone(),
                coeff: match c.to_i64() {
                    Some(v) => CoeffJson::Small(v),
                    None => CoeffJson::Big(c.to_string()),
                },
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NoncommPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<TermJson>::deserialize(d)?;
        let mut p = NoncommPoly::zero();
        for t in raw {
            let c = match t.coeff {
                CoeffJson::Small(v) => BigInt::from(v),
                CoeffJson::Big(s) => s.parse().map_err(serde::de::Error::custom)?,
            };
            p.add_term(t.word, c);
        }
        Ok(p)
    }
}

/// Dense univariate polynomial in `a`, coefficient `i` of `a^i`. Trailing zeros trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct UniPoly(Vec<i64>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn from_coeffs(mut c: Vec<i64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn monomial(k: usize, c: i64) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    /// `a^k - 1`.
    pub fn power_minus_one(k: usize) -> Self {
        &Self::monomial(k, 1) - &Self::monomial(0, 1)
    }

    /// `1 + a + ... + a^(k-1)`.
    pub fn geometric(k: usize) -> Self {
        Self::from_coeffs(vec![1; k])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Euclidean division by a divisor whose leading coefficient is a unit.
    /// Returns `None` if the divisor is zero or its leading coefficient is not ±1.
    pub fn div_rem(&self, divisor: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = divisor.degree()?;
        let lead = divisor.0[dd];
        if lead != 1 && lead != -1 {
            return None;
        }
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return Some((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![0i64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] * lead;
            quot[i] = c;
            if c != 0 {
                for (j, &dc) in divisor.0.iter().enumerate() {
                    rem[i + j] -= c * dc;
                }
            }
        }
        Some((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Quotient when the division is exact.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.0.len().max(rhs.0.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, &x) in self.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in rhs.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}a"),
                _ => format!("{c}a^{i}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExpSetError {
    #[error("elements {0} and {1} share a residue")]
    Collision(usize, usize),
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// Finite multiset of nonnegative integers, kept sorted.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExpSet(Vec<usize>);

impl ExpSet {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        ExpSet(v)
    }

    pub fn empty() -> Self {
        ExpSet(Vec::new())
    }

    pub fn singleton(x: usize) -> Self {
        ExpSet(vec![x])
    }

    /// `{0, 1, ..., n-1}`.
    pub fn interval(n: usize) -> Self {
        ExpSet((0..n).collect())
    }

    /// `{0, step, ..., (count-1)*step}`.
    pub fn progression(step: usize, count: usize) -> Self {
        ExpSet((0..count).map(|i| i * step).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn multiplicity(&self, x: usize) -> usize {
        self.0.iter().filter(|&&y| y == x).count()
    }

    /// True when every multiplicity is 1.
    pub fn is_characteristic(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    /// Multiset sum `{x + y}`.
    pub fn minkowski_sum(&self, other: &ExpSet) -> ExpSet {
        ExpSet::new(self.iter().flat_map(|x| other.iter().map(move |y| x + y)))
    }

    /// Multiset union.
    pub fn union(&self, other: &ExpSet) -> ExpSet {
        ExpSet::new(self.iter().chain(other.iter()))
    }

    pub fn shift(&self, k: usize) -> ExpSet {
        ExpSet(self.0.iter().map(|x| x + k).collect())
    }

    pub fn scale(&self, k: usize) -> ExpSet {
        ExpSet(self.0.iter().map(|x| x * k).collect())
    }

    /// Residues modulo `n` as a multiset (collisions kept).
    pub fn reduce_mod(&self, n: usize) -> ExpSet {
        ExpSet::new(self.iter().map(|x| x % n))
    }

    /// Residues modulo `n`, failing if two elements collide.
    pub fn residues_mod(&self, n: usize) -> Result<ExpSet, ExpSetError> {
        if n == 0 {
            return Err(ExpSetError::ZeroModulus);
        }
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for x in self.iter() {
            if let Some(&y) = owner.get(&(x % n)) {
                return Err(ExpSetError::Collision(y, x));
            }
            owner.insert(x % n, x);
        }
        Ok(ExpSet(owner.into_keys().collect()))
    }

    /// Elements below `bound`.
    pub fn below(&self, bound: usize) -> ExpSet {
        ExpSet(self.0.iter().copied().filter(|&x| x < bound).collect())
    }

    /// `a^H` as a univariate polynomial.
    pub fn to_poly(&self) -> UniPoly {
        let mut c = vec![0i64; self.max().map_or(0, |m| m + 1)];
        for x in self.iter() {
            c[x] += 1;
        }
        UniPoly::from_coeffs(c)
    }

    /// Inverse of [`ExpSet::to_poly`] when every coefficient is nonnegative.
    pub fn from_poly(p: &UniPoly) -> Option<ExpSet> {
        let mut out = Vec::new();
        for (i, &c) in p.coeffs().iter().enumerate() {
            if c < 0 {
                return None;
            }
            out.extend(std::iter::repeat(i).take(c as usize));
        }
        Some(ExpSet(out))
    }
}

impl fmt::Debug for ExpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl From<Vec<usize>> for ExpSet {
    fn from(v: Vec<usize>) -> Self {
        ExpSet::new(v)
    }
}

impl<const N: usize> From<[usize; N]> for ExpSet {
    fn from(v: [usize; N]) -> Self {
        ExpSet::new(v)
    }
}
