//! Exact-sum factorizations of `{0, ..., n-1}` and their divisor chains.

use serde::{Serialize, Serializer};

use super::ZnError;
use crate::poly::ExpSet;

/// `1 = k_0 | k_1 | ... | k_s = n`, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorChain(Vec<usize>);

impl DivisorChain {
    pub fn new(ks: Vec<usize>) -> Result<Self, ZnError> {
        if ks.first() != Some(&1) {
            return Err(ZnError::InvalidChain("must start at 1".into()));
        }
        for w in ks.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(ZnError::InvalidChain(format!("{} does not properly divide {}", w[0], w[1])));
            }
        }
        Ok(DivisorChain(ks))
    }

    /// `1 | n` (or just `1` when `n = 1`).
    pub fn trivial(n: usize) -> Self {
        if n == 1 {
            DivisorChain(vec![1])
        } else {
            DivisorChain(vec![1, n])
        }
    }

    pub fn n(&self) -> usize {
        *self.0.last().expect("chain is nonempty")
    }

    /// Number of steps `s`.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self, j: usize) -> usize {
        self.0[j]
    }

    /// `{0, k_{j-1}, ..., k_j - k_{j-1}}`, the exponents of `(a^{k_j} - 1)/(a^{k_{j-1}} - 1)`.
    pub fn factor(&self, j: usize) -> ExpSet {
        let (lo, hi) = (self.0[j - 1], self.0[j]);
        ExpSet::progression(lo, hi / lo)
    }

    /// Chain ending at `k_j`.
    pub fn truncated(&self, j: usize) -> DivisorChain {
        DivisorChain(self.0[..=j].to_vec())
    }

    /// Every divisor chain of `n`, shorter chains first.
    pub fn all(n: usize) -> Vec<DivisorChain> {
        let mut out = Vec::new();
        let mut cur = vec![1];
        extend_chains(n, &mut cur, &mut out);
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }
}

fn extend_chains(n: usize, cur: &mut Vec<usize>, out: &mut Vec<DivisorChain>) {
    let last = *cur.last().unwrap();
    if last == n {
        out.push(DivisorChain(cur.clone()));
        return;
    }
    for d in (last + 1)..=n {
        if d % last == 0 && n % d == 0 {
            cur.push(d);
            extend_chains(n, cur, out);
            cur.pop();
        }
    }
}

impl Serialize for DivisorChain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `(I, J)` whose exact sums `i + j` enumerate `{0, ..., n-1}` once each.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KrasnerPair {
    pub n: usize,
    #[serde(rename = "I")]
    pub i: ExpSet,
    #[serde(rename = "J")]
    pub j: ExpSet,
    pub chain: DivisorChain,
}

impl KrasnerPair {
    pub fn swapped(&self) -> KrasnerPair {
        KrasnerPair {
            n: self.n,
            i: self.j.clone(),
            j: self.i.clone(),
            chain: self.chain.clone(),
        }
    }

    /// True when `I` collects the even levels of the chain.
    pub fn i_is_even_side(&self) -> bool {
        self.n == 1 || !self.i.contains(1)
    }
}

pub fn is_krasner(i: &ExpSet, j: &ExpSet, n: usize) -> bool {
    if n == 0 || i.len() * j.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for x in i.iter() {
        for y in j.iter() {
            let z = x + y;
            if z >= n || hit[z] {
                return false;
            }
            hit[z] = true;
        }
    }
    true
}

/// `I` = product of the even-level factors, `J` = product of the odd-level ones.
pub fn krasner_from_chain(chain: &DivisorChain) -> KrasnerPair {
    let mut i = ExpSet::singleton(0);
    let mut j = ExpSet::singleton(0);
    for lvl in 1..=chain.len() {
        let f = chain.factor(lvl);
        if lvl % 2 == 0 {
            i = i.minkowski_sum(&f);
        } else {
            j = j.minkowski_sum(&f);
        }
    }
    KrasnerPair {
        n: chain.n(),
        i,
        j,
        chain: chain.clone(),
    }
}

/// Both orientations for every divisor chain of `n` (a single pair for `n = 1`).
pub fn enumerate_krasner(n: usize) -> Vec<KrasnerPair> {
    let mut out = Vec::new();
    for chain in DivisorChain::all(n) {
        let kp = krasner_from_chain(&chain);
        let swapped = kp.swapped();
        out.push(kp);
        if n > 1 {
            out.push(swapped);
        }
    }
    out
}

/// Recovers the divisor chain by peeling the initial interval of the side containing 1.
pub fn chain_of_krasner(i: &ExpSet, j: &ExpSet, n: usize) -> Result<DivisorChain, ZnError> {
    if !is_krasner(i, j, n) {
        return Err(ZnError::NotKrasner(n));
    }
    let mut ks = vec![1];
    peel(i, j, n, 1, &mut ks)?;
    DivisorChain::new(ks)
}

fn peel(x: &ExpSet, y: &ExpSet, n: usize, scale: usize, ks: &mut Vec<usize>) -> Result<(), ZnError> {
    if n == 1 {
        return Ok(());
    }
    let (with_one, other) = if x.contains(1) { (x, y) } else { (y, x) };
    let k1 = (1..=n).find(|&k| !with_one.contains(k)).unwrap_or(n);
    let rest = ExpSet::new(with_one.iter().filter(|v| v % k1 == 0));
    if ExpSet::interval(k1).minkowski_sum(&rest) != *with_one || other.iter().any(|v| v % k1 != 0) {
        return Err(ZnError::NotKrasner(n * scale));
    }
    ks.push(k1 * scale);
    let down = |s: &ExpSet| ExpSet::new(s.iter().map(|v| v / k1));
    peel(&down(other), &down(&rest), n / k1, scale * k1, ks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(v: &[usize]) -> ExpSet {
        ExpSet::new(v.iter().copied())
    }

    fn chain(v: &[usize]) -> DivisorChain {
        DivisorChain::new(v.to_vec()).unwrap()
    }

    #[test]
    fn from_chain_examples() {
        let kp = krasner_from_chain(&chain(&[1, 8]));
        assert_eq!((kp.i, kp.j), (es(&[0]), ExpSet::interval(8)));
        let kp = krasner_from_chain(&chain(&[1, 4, 8]));
        assert_eq!((kp.i, kp.j), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        // (1 + a^2) and (1 + a)(1 + a^4)
        let kp = krasner_from_chain(&chain(&[1, 2, 4, 8]));
        assert_eq!((kp.i, kp.j), (es(&[0, 2]), es(&[0, 1, 4, 5])));
    }

    #[test]
    fn krasner_examples() {
        assert!(is_krasner(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8));
        assert!(is_krasner(&es(&[0, 2]), &es(&[0, 1]), 4));
        assert!(is_krasner(&es(&[0, 3]), &es(&[0, 1, 2]), 6));
        assert!(!is_krasner(&es(&[0, 2]), &es(&[0, 1, 2]), 6));
    }

    #[test]
    fn chain_examples() {
        assert_eq!(chain_of_krasner(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8), Ok(chain(&[1, 4, 8])));
        assert_eq!(chain_of_krasner(&es(&[0]), &ExpSet::interval(8), 8), Ok(chain(&[1, 8])));
        assert_eq!(chain_of_krasner(&es(&[0, 2]), &es(&[0, 1]), 4), Ok(chain(&[1, 2, 4])));
        assert_eq!(chain_of_krasner(&es(&[0, 1]), &es(&[0, 1]), 4), Err(ZnError::NotKrasner(4)));
    }

    #[test]
    fn enumeration_examples() {
        let four = enumerate_krasner(4);
        assert_eq!(four.len(), 4);
        let pairs: Vec<(ExpSet, ExpSet)> = four.iter().map(|k| (k.i.clone(), k.j.clone())).collect();
        assert!(pairs.contains(&(es(&[0]), es(&[0, 1, 2, 3]))));
        assert!(pairs.contains(&(es(&[0, 2]), es(&[0, 1]))));
        assert!(pairs.contains(&(es(&[0, 1]), es(&[0, 2]))));
        assert_eq!(enumerate_krasner(5).len(), 2);
        let one = enumerate_krasner(1);
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].i.clone(), one[0].j.clone()), (es(&[0]), es(&[0])));
    }

    #[test]
    fn bad_chains_rejected() {
        assert!(DivisorChain::new(vec![2, 4]).is_err());
        assert!(DivisorChain::new(vec![1, 4, 6]).is_err());
        assert!(DivisorChain::new(vec![1, 4, 4]).is_err());
    }

    #[test]
    fn chain_roundtrip_up_to_sixteen() {
        for n in 1..=16 {
            for kp in enumerate_krasner(n) {
                assert!(is_krasner(&kp.i, &kp.j, n));
                let c = chain_of_krasner(&kp.i, &kp.j, n).unwrap();
                assert_eq!(c, kp.chain);
                let back = krasner_from_chain(&c);
                let same = (back.i == kp.i && back.j == kp.j) || (back.i == kp.j && back.j == kp.i);
                assert!(same);
            }
        }
    }
}
