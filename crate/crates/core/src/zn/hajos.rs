//! Hajós factorizations: recognition by exact division, construction from a
//! divisor chain, and the one-step recursive decomposition.

use serde::Serialize;

use super::krasner::{enumerate_krasner, krasner_from_chain, DivisorChain, KrasnerPair};
use super::{is_factorization, ZnError, ZnFactorization};
use crate::poly::{ExpSet, UniPoly};

/// `M` with `a^X = a^K (1 + a^M (a - 1))`, when `M` is a set of nonnegative exponents.
pub fn ef_quotient(x: &ExpSet, k: &ExpSet) -> Option<ExpSet> {
    let numer = &x.to_poly() - &k.to_poly();
    let denom = &k.to_poly() * &UniPoly::from_coeffs(vec![-1, 1]);
    let q = numer.div_exact(&denom)?;
    let m = ExpSet::from_poly(&q)?;
    m.is_characteristic().then_some(m)
}

/// Krasner pair `(I, J)` together with `M`, `L` satisfying both division identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HajosWitness {
    pub base: KrasnerPair,
    pub m: ExpSet,
    pub l: ExpSet,
}

impl HajosWitness {
    /// Re-checks `a^R = a^I (1 + a^M (a-1))` and `a^T = a^J (1 + a^L (a-1))`.
    pub fn verify(&self, r: &ExpSet, t: &ExpSet) -> bool {
        let a_minus_one = UniPoly::from_coeffs(vec![-1, 1]);
        let side = |x: &ExpSet, k: &ExpSet, m: &ExpSet| {
            let inner = &UniPoly::monomial(0, 1) + &(&m.to_poly() * &a_minus_one);
            x.to_poly() == &k.to_poly() * &inner
        };
        side(r, &self.base.i, &self.m) && side(t, &self.base.j, &self.l)
    }
}

impl Serialize for HajosWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(rename = "I")]
            i: &'a ExpSet,
            #[serde(rename = "J")]
            j: &'a ExpSet,
            #[serde(rename = "M")]
            m: &'a ExpSet,
            #[serde(rename = "L")]
            l: &'a ExpSet,
            chain: &'a DivisorChain,
        }
        Out {
            i: &self.base.i,
            j: &self.base.j,
            m: &self.m,
            l: &self.l,
            chain: &self.base.chain,
        }
        .serialize(s)
    }
}

fn witness_for(r: &ExpSet, t: &ExpSet, kp: &KrasnerPair) -> Option<HajosWitness> {
    let m = ef_quotient(r, &kp.i)?;
    let l = ef_quotient(t, &kp.j)?;
    Some(HajosWitness {
        base: kp.clone(),
        m,
        l,
    })
}

/// First Krasner pair of `Z/nZ` whose division identities hold for `(R, T)`.
pub fn is_hajos(r: &ExpSet, t: &ExpSet, n: usize) -> Result<Option<HajosWitness>, ZnError> {
    if !is_factorization(r, t, n) {
        return Err(ZnError::NotAFactorization(n));
    }
    Ok(enumerate_krasner(n).iter().find_map(|kp| witness_for(r, t, kp)))
}

/// The orientation of the chain's Krasner pair that `(R, T)` satisfies.
pub fn krasner_companion(
    r: &ExpSet,
    t: &ExpSet,
    n: usize,
    chain: &DivisorChain,
) -> Result<KrasnerPair, ZnError> {
    let fail = || ZnError::NotHajosForChain(chain.as_slice().to_vec());
    if chain.n() != n || !is_factorization(r, t, n) {
        return Err(fail());
    }
    let kp = krasner_from_chain(chain);
    let swapped = kp.swapped();
    [kp, swapped]
        .into_iter()
        .find(|k| witness_for(r, t, k).is_some())
        .ok_or_else(fail)
}

/// Builds `(R, T)` from a chain: `R` takes the shifted product at odd levels and the plain
/// product at even levels, `T` the reverse. `choices[j-1]` gives, for the side shifted at
/// level `j`, one multiplier `m < k_j / k_{j-1}` per current element (shift `m·k_{j-1}`).
pub fn hajos_construct(
    chain: &DivisorChain,
    choices: &[Vec<usize>],
) -> Result<ZnFactorization, ZnError> {
    if choices.len() != chain.len() {
        return Err(ZnError::InvalidChoices(format!(
            "expected {} shift vectors, got {}",
            chain.len(),
            choices.len()
        )));
    }
    let mut r: Vec<usize> = vec![0];
    let mut t: Vec<usize> = vec![0];
    for (lvl, shifts) in (1..=chain.len()).zip(choices) {
        let step = chain.k(lvl - 1);
        let g = chain.k(lvl) / step;
        let (shifted, product) = if lvl % 2 == 1 {
            (&mut r, &mut t)
        } else {
            (&mut t, &mut r)
        };
        if shifts.len() != shifted.len() {
            return Err(ZnError::InvalidChoices(format!(
                "level {lvl}: expected {} shifts, got {}",
                shifted.len(),
                shifts.len()
            )));
        }
        if let Some(&bad) = shifts.iter().find(|&&m| m >= g) {
            return Err(ZnError::InvalidChoices(format!(
                "level {lvl}: multiplier {bad} is not below {g}"
            )));
        }
        for (x, &m) in shifted.iter_mut().zip(shifts) {
            *x += m * step;
        }
        *product = product
            .iter()
            .flat_map(|&x| (0..g).map(move |m| x + m * step))
            .collect();
    }
    let n = chain.n();
    let out = ZnFactorization::new(ExpSet::new(r), ExpSet::new(t), n);
    debug_assert!(out.is_valid());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    R,
    T,
}

/// One step of the recursive decomposition of a Hajós pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HajosStep {
    /// One side is a singleton `{value}`, the other a full residue system.
    Base { singleton: Side, value: usize },
    Split(HajosSplit),
}

/// The `periodic` side equals `X1 + {0, h, ..., (g-1)h}` with `X1 ⊆ [0, h)`;
/// the other side reduces bijectively modulo `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HajosSplit {
    pub h: usize,
    pub g: usize,
    pub r1: ExpSet,
    pub t1: ExpSet,
    pub periodic: Side,
    pub chain: DivisorChain,
}

pub fn hajos_recursive_step(r: &ExpSet, t: &ExpSet, n: usize) -> Result<HajosStep, ZnError> {
    let r = r.residues_mod(n).map_err(|_| ZnError::NotAFactorization(n))?;
    let t = t.residues_mod(n).map_err(|_| ZnError::NotAFactorization(n))?;
    let w = is_hajos(&r, &t, n)?.ok_or(ZnError::NotHajos)?;
    let chain = w.base.chain.clone();
    if chain.len() <= 1 {
        return if r.len() == 1 {
            Ok(HajosStep::Base {
                singleton: Side::R,
                value: r.as_slice()[0],
            })
        } else {
            Ok(HajosStep::Base {
                singleton: Side::T,
                value: t.as_slice()[0],
            })
        };
    }
    let h = chain.k(chain.len() - 1);
    let g = n / h;
    let periodic_part = |x: &ExpSet| {
        let low = x.below(h);
        (low.minkowski_sum(&ExpSet::progression(h, g)) == *x).then_some(low)
    };
    let reduce = |x: &ExpSet| x.residues_mod(h).map_err(|_| ZnError::NotHajos);
    let (periodic, r1, t1) = if let Some(low) = periodic_part(&r) {
        (Side::R, low, reduce(&t)?)
    } else if let Some(low) = periodic_part(&t) {
        (Side::T, reduce(&r)?, low)
    } else {
        return Err(ZnError::NotHajos);
    };
    Ok(HajosStep::Split(HajosSplit {
        h,
        g,
        r1,
        t1,
        periodic,
        chain: chain.truncated(chain.len() - 1),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn::{enumerate_factorizations, DEFAULT_BOUND};

    fn es(v: &[usize]) -> ExpSet {
        ExpSet::new(v.iter().copied())
    }

    fn chain(v: &[usize]) -> DivisorChain {
        DivisorChain::new(v.to_vec()).unwrap()
    }

    #[test]
    fn krasner_input_has_empty_witness() {
        let w = is_hajos(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8).unwrap().unwrap();
        assert_eq!((w.base.i.clone(), w.base.j.clone()), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        assert!(w.m.is_empty() && w.l.is_empty());
    }

    #[test]
    fn shifted_factor_witness() {
        let w = is_hajos(&es(&[0, 12]), &es(&[0, 1, 2, 3]), 8).unwrap().unwrap();
        assert_eq!(w.base.i, es(&[0, 4]));
        assert_eq!(w.m, es(&[4, 5, 6, 7]));
        assert!(w.l.is_empty());
        assert!(w.verify(&es(&[0, 12]), &es(&[0, 1, 2, 3])));
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["chain"], serde_json::json!([1, 4, 8]));
        assert_eq!(json["M"], serde_json::json!([4, 5, 6, 7]));
    }

    #[test]
    fn non_factorization_rejected() {
        assert_eq!(
            is_hajos(&es(&[0, 1]), &es(&[0, 1]), 4),
            Err(ZnError::NotAFactorization(4))
        );
    }

    #[test]
    fn companion_examples() {
        let kp = krasner_companion(&es(&[0, 12]), &es(&[0, 1, 2, 3]), 8, &chain(&[1, 4, 8])).unwrap();
        assert_eq!((kp.i, kp.j), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        let kp = krasner_companion(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8, &chain(&[1, 4, 8])).unwrap();
        assert_eq!((kp.i, kp.j), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        let kp = krasner_companion(&ExpSet::interval(8), &es(&[0]), 8, &chain(&[1, 8])).unwrap();
        assert_eq!((kp.i, kp.j), (ExpSet::interval(8), es(&[0])));
        assert!(krasner_companion(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8, &chain(&[1, 8])).is_err());
    }

    #[test]
    fn construction_examples() {
        let f = hajos_construct(&chain(&[1, 8]), &[vec![3]]).unwrap();
        assert_eq!((f.r, f.t), (es(&[3]), ExpSet::interval(8)));
        let f = hajos_construct(&chain(&[1, 4, 8]), &[vec![0], vec![0, 0, 0, 0]]).unwrap();
        assert_eq!((f.r, f.t), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        let f = hajos_construct(&chain(&[1, 4, 8]), &[vec![2], vec![1, 0, 0, 1]]).unwrap();
        assert_eq!((f.r.clone(), f.t.clone()), (es(&[2, 6]), es(&[1, 2, 4, 7])));
        assert!(is_factorization(&f.r, &f.t, 8));
        assert!(is_hajos(&f.r, &f.t, 8).unwrap().is_some());
        assert!(hajos_construct(&chain(&[1, 4, 8]), &[vec![4], vec![0; 4]]).is_err());
        assert!(hajos_construct(&chain(&[1, 4, 8]), &[vec![0]]).is_err());
        assert!(hajos_construct(&chain(&[1, 4, 8]), &[vec![0], vec![0; 3]]).is_err());
    }

    #[test]
    fn constructions_pass_recognition() {
        // every choice vector for small chains
        for n in [4usize, 6, 8, 9, 12] {
            for c in DivisorChain::all(n) {
                for_each_choice(&c, &mut |choices| {
                    let f = hajos_construct(&c, choices).unwrap();
                    assert!(f.is_valid(), "{c:?} {choices:?}");
                    let kp = krasner_companion(&f.r, &f.t, n, &c).unwrap();
                    assert_eq!(kp.chain, c);
                    assert!(is_hajos(&f.r, &f.t, n).unwrap().is_some());
                });
            }
        }
    }

    fn for_each_choice(c: &DivisorChain, f: &mut dyn FnMut(&[Vec<usize>])) {
        fn go(
            c: &DivisorChain,
            lvl: usize,
            sizes: (usize, usize),
            acc: &mut Vec<Vec<usize>>,
            f: &mut dyn FnMut(&[Vec<usize>]),
        ) {
            if lvl > c.len() {
                f(acc);
                return;
            }
            let g = c.k(lvl) / c.k(lvl - 1);
            let (rs, ts) = sizes;
            let len = if lvl % 2 == 1 { rs } else { ts };
            let next = if lvl % 2 == 1 { (rs, ts * g) } else { (rs * g, ts) };
            let total = g.pow(len as u32);
            for code in 0..total {
                let mut v = Vec::with_capacity(len);
                let mut x = code;
                for _ in 0..len {
                    v.push(x % g);
                    x /= g;
                }
                acc.push(v);
                go(c, lvl + 1, next, acc, f);
                acc.pop();
            }
        }
        go(c, 1, (1, 1), &mut Vec::new(), f);
    }

    #[test]
    fn recursive_step_examples() {
        assert_eq!(
            hajos_recursive_step(&es(&[3]), &ExpSet::interval(8), 8),
            Ok(HajosStep::Base { singleton: Side::R, value: 3 })
        );
        match hajos_recursive_step(&es(&[0, 4]), &es(&[0, 1, 2, 3]), 8).unwrap() {
            HajosStep::Split(s) => {
                assert_eq!((s.h, s.g, s.periodic), (4, 2, Side::R));
                assert_eq!((s.r1, s.t1), (es(&[0]), es(&[0, 1, 2, 3])));
            }
            other => panic!("{other:?}"),
        }
        match hajos_recursive_step(&es(&[0, 1, 2, 3]), &es(&[0, 4]), 8).unwrap() {
            HajosStep::Split(s) => {
                assert_eq!((s.h, s.g, s.periodic), (4, 2, Side::T));
                assert_eq!((s.r1, s.t1), (es(&[0, 1, 2, 3]), es(&[0])));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_small_factorization_is_hajos() {
        for n in 1..=12 {
            for f in enumerate_factorizations(n, DEFAULT_BOUND).unwrap() {
                let w = is_hajos(&f.r, &f.t, n).unwrap().expect("Hajós witness");
                assert!(w.verify(&f.r, &f.t));
                assert!(hajos_recursive_step(&f.r, &f.t, n).is_ok());
            }
        }
    }
}
