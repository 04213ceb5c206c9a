//! Factorizations `(R, T)` of the cyclic group `Z/nZ`.

mod hajos;
mod krasner;

pub use hajos::{
    ef_quotient, hajos_construct, hajos_recursive_step, is_hajos, krasner_companion,
    HajosSplit, HajosStep, HajosWitness, Side,
};
pub use krasner::{
    chain_of_krasner, enumerate_krasner, is_krasner, krasner_from_chain, DivisorChain,
    KrasnerPair,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{ExpSet, UniPoly};

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_BOUND: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZnError {
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("not a factorization of Z/{0}Z")]
    NotAFactorization(usize),
    #[error("not an exact-sum factorization of {{0,...,{0}}}")]
    NotKrasner(usize),
    #[error("not a Hajós factorization")]
    NotHajos,
    #[error("not a Hajós factorization for the divisor chain {0:?}")]
    NotHajosForChain(Vec<usize>),
    #[error("invalid shift choices: {0}")]
    InvalidChoices(String),
    #[error("invalid divisor chain: {0}")]
    InvalidChain(String),
}

/// A pair `(R, T)` with modulus `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ZnFactorization {
    pub n: usize,
    #[serde(rename = "R")]
    pub r: ExpSet,
    #[serde(rename = "T")]
    pub t: ExpSet,
}

impl ZnFactorization {
    pub fn new(r: ExpSet, t: ExpSet, n: usize) -> Self {
        ZnFactorization { n, r, t }
    }

    pub fn is_valid(&self) -> bool {
        is_factorization(&self.r, &self.t, self.n)
    }

    pub fn swapped(&self) -> Self {
        ZnFactorization {
            n: self.n,
            r: self.t.clone(),
            t: self.r.clone(),
        }
    }
}

/// Every residue mod `n` is `r + t` for exactly one pair.
pub fn is_factorization(r: &ExpSet, t: &ExpSet, n: usize) -> bool {
    if n == 0 || r.is_empty() || t.is_empty() || r.len() * t.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for x in r.iter() {
        for y in t.iter() {
            let z = (x + y) % n;
            if hit[z] {
                return false;
            }
            hit[z] = true;
        }
    }
    true
}

/// `H` with `a^R a^T = (1 + ... + a^(n-1)) + a^H (a^n - 1)`, for factorizations only.
pub fn defect_set(r: &ExpSet, t: &ExpSet, n: usize) -> Option<ExpSet> {
    if !is_factorization(r, t, n) {
        return None;
    }
    let excess = &(&r.to_poly() * &t.to_poly()) - &UniPoly::geometric(n);
    let q = excess.div_exact(&UniPoly::power_minus_one(n))?;
    ExpSet::from_poly(&q)
}

/// All factorizations with `R, T ⊆ {0..n-1}` and `0 ∈ R ∩ T`, ordered by
/// `(|T|, T, R)`.
pub fn enumerate_factorizations(n: usize, bound: usize) -> Result<Vec<ZnFactorization>, ZnError> {
    if n == 0 {
        return Err(ZnError::ZeroModulus);
    }
    if n > bound {
        return Err(ZnError::BoundExceeded { n, bound });
    }
    let mut out = Vec::new();
    for m in divisors(n) {
        // T of size m containing 0
        let mut t = vec![0usize];
        subsets_with_zero(n, m, 1, &mut t, &mut |t| {
            let tset = ExpSet::new(t.iter().copied());
            for r in tilings(n, t) {
                out.push(ZnFactorization::new(r, tset.clone(), n));
            }
        });
    }
    out.sort_by(|x, y| (x.t.len(), &x.t, &x.r).cmp(&(y.t.len(), &y.t, &y.r)));
    Ok(out)
}

fn subsets_with_zero(
    n: usize,
    size: usize,
    next: usize,
    cur: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if cur.len() == size {
        emit(cur);
        return;
    }
    let need = size - cur.len();
    for x in next..n {
        if n - x < need {
            break;
        }
        cur.push(x);
        subsets_with_zero(n, size, x + 1, cur, emit);
        cur.pop();
    }
}

/// All `R ∋ 0` whose translates `r + T` tile `Z/nZ`; exact cover choosing the
/// smallest uncovered residue first.
fn tilings(n: usize, t: &[usize]) -> Vec<ExpSet> {
    let mut covered = vec![false; n];
    for &x in t {
        covered[x] = true;
    }
    let mut r = vec![0usize];
    let mut out = Vec::new();
    cover(n, t, &mut covered, &mut r, &mut out);
    out
}

fn cover(n: usize, t: &[usize], covered: &mut [bool], r: &mut Vec<usize>, out: &mut Vec<ExpSet>) {
    let Some(z) = covered.iter().position(|&c| !c) else {
        out.push(ExpSet::new(r.iter().copied()));
        return;
    };
    for &y in t {
        let shift = (z + n - y) % n;
        if t.iter().all(|&x| !covered[(x + shift) % n]) {
            for &x in t {
                covered[(x + shift) % n] = true;
            }
            r.push(shift);
            cover(n, t, covered, r, out);
            r.pop();
            for &x in t {
                covered[(x + shift) % n] = false;
            }
        }
    }
}

/// Positive divisors in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Smallest `g` in `1..n` with `g + S = S` modulo `n`.
pub fn is_periodic_set(s: &ExpSet, n: usize) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let mut present = vec![false; n];
    for x in s.iter() {
        present[x % n] = true;
    }
    (1..n).find(|&g| (0..n).all(|z| present[z] == present[(z + g) % n]))
}

/// `R ≡ S ⊕ {0, p, ..., n - p}` for a periodic `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodDecomposition {
    pub p: usize,
    #[serde(rename = "S")]
    pub s: ExpSet,
}

impl PeriodDecomposition {
    /// `S ⊕ {0, p, ..., n - p}`.
    pub fn reassemble(&self, n: usize) -> ExpSet {
        self.s.minkowski_sum(&ExpSet::progression(self.p, n / self.p))
    }
}

pub fn factorization_period_decomposition(
    r: &ExpSet,
    t: &ExpSet,
    n: usize,
) -> Result<Option<PeriodDecomposition>, ZnError> {
    if !is_factorization(r, t, n) {
        return Err(ZnError::NotAFactorization(n));
    }
    let reduced = r.reduce_mod(n);
    let Some(p) = is_periodic_set(&reduced, n).or((reduced.len() == n).then_some(1)) else {
        return Ok(None);
    };
    let s = reduced.below(p);
    debug_assert!(is_factorization(&s, &t.reduce_mod(p), p));
    Ok(Some(PeriodDecomposition { p, s }))
}

/// Number of prime factors counted with multiplicity.
pub fn omega(mut n: usize) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}
