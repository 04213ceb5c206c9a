//! Good arrangements over a Krasner pair, their recognition and construction,
//! and the small-`Ω(n)` decision procedures built on them.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{
    build_arrangement, companion_among, companion_for, Arrangement, ArrangementError, CompanionCert,
};
use crate::code::CodeError;
use crate::poly::ExpSet;
use crate::word::{FiniteLanguage, Word};
use crate::xw::{XwError, XwExtractor, XwSet};
use crate::zn::{
    chain_of_krasner, ef_quotient, enumerate_krasner, is_factorization, is_krasner, krasner_companion,
    krasner_from_chain, omega,
    DivisorChain, KrasnerPair, ZnError,
};

/// Node budget for the exhaustive placement search.
pub const SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoodError {
    #[error("the set has {card} elements but the Krasner pair factors {n}")]
    CardMismatch { card: usize, n: usize },
    #[error("({0:?}, {1:?}) is not a Krasner factorization")]
    NotKrasner(ExpSet, ExpSet),
    #[error("omega({n}) = {omega} exceeds 2")]
    OmegaTooLarge { n: usize, omega: u32 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("placement search exceeded {0} nodes")]
    SearchBudgetExceeded(usize),
    #[error("no Krasner pair certifies as a companion")]
    NoKrasnerCompanion,
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Zn(#[from] ZnError),
    #[error(transparent)]
    Xw(#[from] XwError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// How a row arrangement is generated, one node per divisor-chain level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Derivation {
    /// One column; row `p` is `{values[p]}`.
    Singletons { modulus: usize, values: Vec<usize> },
    /// `rows` copies of the full residue system; column `c` is constantly `column_values[c]`.
    Full {
        modulus: usize,
        rows: usize,
        column_values: Vec<usize>,
    },
    /// Periodic rows: column `c` is `placement[c].0 · h` plus sub-column `placement[c].1`.
    Union {
        modulus: usize,
        h: usize,
        g: usize,
        placement: Vec<(usize, usize)>,
        sub: Box<Derivation>,
    },
    /// Lifted rows: entry `(p, c)` is the sub entry plus `multipliers[p][c] · h`.
    Lift {
        modulus: usize,
        h: usize,
        multipliers: Vec<Vec<usize>>,
        sub: Box<Derivation>,
    },
}

impl Derivation {
    /// Rebuilds the (reduced) matrix the derivation describes.
    pub fn replay(&self) -> Vec<Vec<usize>> {
        match self {
            Derivation::Singletons { values, .. } => values.iter().map(|&v| vec![v]).collect(),
            Derivation::Full { rows, column_values, .. } => vec![column_values.clone(); *rows],
            Derivation::Union { h, placement, sub, .. } => sub
                .replay()
                .iter()
                .map(|row| placement.iter().map(|&(k, c)| k * h + row[c]).collect())
                .collect(),
            Derivation::Lift { h, multipliers, sub, .. } => sub
                .replay()
                .iter()
                .zip(multipliers)
                .map(|(row, mult)| row.iter().zip(mult).map(|(&e, &k)| e + k * h).collect())
                .collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Derivation::Singletons { .. } | Derivation::Full { .. } => 1,
            Derivation::Union { sub, .. } | Derivation::Lift { sub, .. } => 1 + sub.depth(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowsDerivation {
    /// Whether reduction modulo `n` changed any entry.
    pub reduced: bool,
    pub tree: Derivation,
}

fn distinct(row: &[usize]) -> bool {
    let mut v = row.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

fn rows_rec(matrix: &[Vec<usize>], chain: &DivisorChain, shadow: &ExpSet) -> Option<Derivation> {
    let modulus = chain.n();
    if matrix.iter().any(|row| !distinct(row) || row.len() != shadow.len()) {
        return None;
    }
    let cols = matrix.first().map_or(0, Vec::len);
    if chain.len() <= 1 {
        if cols == 1 {
            return Some(Derivation::Singletons {
                modulus,
                values: matrix.iter().map(|row| row[0]).collect(),
            });
        }
        let first = &matrix[0];
        if cols == modulus && matrix.iter().all(|row| row == first) {
            return Some(Derivation::Full {
                modulus,
                rows: matrix.len(),
                column_values: first.clone(),
            });
        }
        return None;
    }
    let h = chain.k(chain.len() - 1);
    let g = modulus / h;
    let sub_chain = chain.truncated(chain.len() - 1);
    let sub_shadow = shadow.below(h);
    if shadow.contains(h) {
        if cols % g != 0 {
            return None;
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); g];
        for c in 0..cols {
            let k = matrix[0][c] / h;
            if matrix.iter().any(|row| row[c] / h != k) {
                return None;
            }
            groups[k].push(c);
        }
        if groups.iter().any(|grp| grp.len() != cols / g) {
            return None;
        }
        let column = |c: usize| -> Vec<usize> { matrix.iter().map(|row| row[c] % h).collect() };
        let base: Vec<Vec<usize>> = groups[0].iter().map(|&c| column(c)).collect();
        let mut placement = vec![(0, 0); cols];
        for (k, grp) in groups.iter().enumerate() {
            let mut used = vec![false; base.len()];
            for &c in grp {
                let col = column(c);
                let slot = (0..base.len()).find(|&s| !used[s] && base[s] == col)?;
                used[slot] = true;
                placement[c] = (k, slot);
            }
        }
        let sub_matrix: Vec<Vec<usize>> = matrix
            .iter()
            .map(|row| groups[0].iter().map(|&c| row[c]).collect())
            .collect();
        let sub = rows_rec(&sub_matrix, &sub_chain, &sub_shadow)?;
        Some(Derivation::Union {
            modulus,
            h,
            g,
            placement,
            sub: Box::new(sub),
        })
    } else {
        let sub_matrix: Vec<Vec<usize>> = matrix.iter().map(|row| row.iter().map(|e| e % h).collect()).collect();
        let multipliers = matrix.iter().map(|row| row.iter().map(|e| e / h).collect()).collect();
        let sub = rows_rec(&sub_matrix, &sub_chain, &sub_shadow)?;
        Some(Derivation::Lift {
            modulus,
            h,
            multipliers,
            sub: Box::new(sub),
        })
    }
}

/// Whether the rows of `matrix`, each shaped like `shadow` (one side of the chain's
/// Krasner pair), form a good arrangement up to column order.
pub fn good_rows_check(matrix: &[Vec<usize>], chain: &DivisorChain, shadow: &ExpSet) -> Option<RowsDerivation> {
    let n = chain.n();
    let reduced_matrix: Vec<Vec<usize>> = matrix.iter().map(|row| row.iter().map(|e| e % n).collect()).collect();
    let reduced = reduced_matrix != matrix;
    rows_rec(&reduced_matrix, chain, shadow).map(|tree| RowsDerivation { reduced, tree })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodArrangementCert {
    pub grid: Arrangement,
    pub krasner: KrasnerPair,
    /// `M_p` with `a^{R_p} = a^I (1 + a^{M_p} (a - 1))` on residues.
    pub row_quotients: Vec<ExpSet>,
    /// `L_q` with `a^{T_q} = a^J (1 + a^{L_q} (a - 1))` on residues.
    pub column_quotients: Vec<ExpSet>,
    pub row_derivation: RowsDerivation,
    pub column_derivation: RowsDerivation,
}

/// Checks the three conditions for `(I, J)`: every (row, column) pair is a Hajós
/// factorization with companion `(I, J)`, and rows and columns are good.
pub fn is_good_arrangement(arr: &Arrangement, i: &ExpSet, j: &ExpSet) -> Option<GoodArrangementCert> {
    let n = arr.n;
    if !is_krasner(i, j, n) || arr.rows() != j.len() || arr.grid.iter().any(|row| row.len() != i.len()) {
        return None;
    }
    let chain = chain_of_krasner(i, j, n).ok()?;
    let rows: Vec<ExpSet> = (0..arr.rows()).map(|p| arr.row_set(p).residues_mod(n).ok()).collect::<Option<_>>()?;
    let cols: Vec<ExpSet> = (0..arr.columns())
        .map(|q| arr.column_set(q).residues_mod(n).ok())
        .collect::<Option<_>>()?;
    let row_quotients: Vec<ExpSet> = rows.iter().map(|r| ef_quotient(r, i)).collect::<Option<_>>()?;
    let column_quotients: Vec<ExpSet> = cols.iter().map(|t| ef_quotient(t, j)).collect::<Option<_>>()?;
    if !rows.iter().all(|r| cols.iter().all(|t| is_factorization(r, t, n))) {
        return None;
    }
    let left: Vec<Vec<usize>> = arr.grid.iter().map(|row| row.iter().map(|e| e.0).collect()).collect();
    let right_t: Vec<Vec<usize>> = arr
        .transposed()
        .iter()
        .map(|col| col.iter().map(|e| e.1).collect())
        .collect();
    let row_derivation = good_rows_check(&left, &chain, i)?;
    let column_derivation = good_rows_check(&right_t, &chain, j)?;
    Some(GoodArrangementCert {
        grid: arr.clone(),
        krasner: KrasnerPair {
            n,
            i: i.clone(),
            j: j.clone(),
            chain,
        },
        row_quotients,
        column_quotients,
        row_derivation,
        column_derivation,
    })
}

fn product_rec(r: &[usize], t: &[usize], chain: &DivisorChain, i: &ExpSet) -> Vec<Vec<(usize, usize)>> {
    if chain.len() <= 1 {
        // |R| = 1 gives one column, |T| = 1 one row
        return t.iter().map(|&tv| r.iter().map(|&rv| (rv, tv)).collect()).collect();
    }
    let h = chain.k(chain.len() - 1);
    let g = chain.n() / h;
    let sub_chain = chain.truncated(chain.len() - 1);
    if i.contains(h) {
        let r1: Vec<usize> = r.iter().copied().filter(|&x| x < h).collect();
        let t1: Vec<usize> = t.iter().map(|x| x % h).collect();
        let lift: BTreeMap<usize, usize> = t.iter().map(|&x| (x % h, x)).collect();
        let sub = product_rec(&r1, &t1, &sub_chain, &i.below(h));
        sub.iter()
            .map(|row| {
                (0..g)
                    .flat_map(|k| row.iter().map(move |&(rv, tv)| (rv + k * h, tv)))
                    .map(|(rv, tv)| (rv, lift[&tv]))
                    .collect()
            })
            .collect()
    } else {
        // the transposed construction for a^T w a^R, whose own I-side holds h
        let j = complement_side(i, chain);
        let swapped = product_rec(t, r, chain, &j);
        let rows = swapped.first().map_or(0, Vec::len);
        (0..rows)
            .map(|p| swapped.iter().map(|row| (row[p].1, row[p].0)).collect())
            .collect()
    }
}

/// The other member of the chain's Krasner pair.
fn complement_side(i: &ExpSet, chain: &DivisorChain) -> ExpSet {
    let kp = krasner_from_chain(chain);
    if kp.i == *i {
        kp.j
    } else {
        kp.i
    }
}

/// A good arrangement of `a^R w a^T`, rows indexed by `T` and columns by `R`.
pub fn product_good_arrangement(
    r: &ExpSet,
    t: &ExpSet,
    w: &Word,
    chain: &DivisorChain,
) -> Result<Arrangement, GoodError> {
    let n = chain.n();
    let kp = krasner_companion(r, t, n, chain)?;
    let rr = r.residues_mod(n).map_err(|_| ZnError::NotAFactorization(n))?;
    let tr = t.residues_mod(n).map_err(|_| ZnError::NotAFactorization(n))?;
    let back_r: BTreeMap<usize, usize> = r.iter().map(|x| (x % n, x)).collect();
    let back_t: BTreeMap<usize, usize> = t.iter().map(|x| (x % n, x)).collect();
    let grid = product_rec(rr.as_slice(), tr.as_slice(), chain, &kp.i)
        .into_iter()
        .map(|row| row.into_iter().map(|(x, y)| (back_r[&x], back_t[&y])).collect())
        .collect();
    Ok(Arrangement::from_grid(w.clone(), n, grid))
}

struct Search<'a> {
    entries: &'a [(usize, usize)],
    n: usize,
    rows: usize,
    cols: usize,
    i: &'a ExpSet,
    j: &'a ExpSet,
    w: &'a Word,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), GoodError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(GoodError::SearchBudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    fn row_ok(&self, members: &[usize]) -> bool {
        let left = ExpSet::new(members.iter().map(|&k| self.entries[k].0 % self.n));
        left.is_characteristic() && ef_quotient(&left, self.i).is_some()
    }

    fn rows(&mut self, used: &mut Vec<bool>, placed: &mut Vec<Vec<usize>>) -> Result<Option<GoodArrangementCert>, GoodError> {
        if placed.len() == self.rows {
            return Ok(self.leaf(placed));
        }
        let Some(first) = used.iter().position(|u| !u) else {
            return Ok(None);
        };
        let free: Vec<usize> = (first + 1..self.entries.len()).filter(|&k| !used[k]).collect();
        let mut combo = Vec::with_capacity(self.cols);
        self.combos(&free, 0, first, &mut combo, used, placed)
    }

    fn combos(
        &mut self,
        free: &[usize],
        start: usize,
        first: usize,
        combo: &mut Vec<usize>,
        used: &mut Vec<bool>,
        placed: &mut Vec<Vec<usize>>,
    ) -> Result<Option<GoodArrangementCert>, GoodError> {
        self.tick()?;
        if combo.len() + 1 == self.cols {
            let mut members = vec![first];
            members.extend(combo.iter().copied());
            if !self.row_ok(&members) {
                return Ok(None);
            }
            for &k in &members {
                used[k] = true;
            }
            let found = if placed.is_empty() {
                placed.push(members.clone());
                let r = self.rows(used, placed)?;
                placed.pop();
                r
            } else {
                let mut order = vec![usize::MAX; self.cols];
                self.permute(&members, 0, &mut order, used, placed)?
            };
            for &k in &members {
                used[k] = false;
            }
            return Ok(found);
        }
        for s in start..free.len() {
            if free.len() - s < self.cols - 1 - combo.len() {
                break;
            }
            combo.push(free[s]);
            let found = self.combos(free, s + 1, first, combo, used, placed)?;
            combo.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn permute(
        &mut self,
        members: &[usize],
        c: usize,
        order: &mut Vec<usize>,
        used: &mut Vec<bool>,
        placed: &mut Vec<Vec<usize>>,
    ) -> Result<Option<GoodArrangementCert>, GoodError> {
        self.tick()?;
        if c == self.cols {
            placed.push(order.clone());
            let r = self.rows(used, placed)?;
            placed.pop();
            return Ok(r);
        }
        for &k in members {
            if order[..c].contains(&k) {
                continue;
            }
            let v = self.entries[k].1 % self.n;
            if placed.iter().any(|row| self.entries[row[c]].1 % self.n == v) {
                continue;
            }
            order[c] = k;
            let found = self.permute(members, c + 1, order, used, placed)?;
            if found.is_some() {
                return Ok(found);
            }
        }
        order[c] = usize::MAX;
        Ok(None)
    }

    fn leaf(&self, placed: &[Vec<usize>]) -> Option<GoodArrangementCert> {
        let grid = placed
            .iter()
            .map(|row| row.iter().map(|&k| self.entries[k]).collect())
            .collect();
        let arr = Arrangement::from_grid(self.w.clone(), self.n, grid);
        is_good_arrangement(&arr, self.i, self.j)
    }
}

/// A good arrangement of `Y_w` with `(I, J)`, trying the companion grid first and
/// then every placement up to row and column order.
pub fn exists_good_arrangement(yw: &XwSet, i: &ExpSet, j: &ExpSet) -> Result<Option<GoodArrangementCert>, GoodError> {
    exists_good_arrangement_within(yw, i, j, SEARCH_BUDGET)
}

pub fn exists_good_arrangement_within(
    yw: &XwSet,
    i: &ExpSet,
    j: &ExpSet,
    budget: usize,
) -> Result<Option<GoodArrangementCert>, GoodError> {
    let n = i.len() * j.len();
    if !is_krasner(i, j, n) {
        return Err(GoodError::NotKrasner(i.clone(), j.clone()));
    }
    if yw.len() != n || yw.n != n {
        return Err(GoodError::CardMismatch { card: yw.len(), n });
    }
    if let Ok(arr) = build_arrangement(yw, j, i) {
        if let Some(cert) = is_good_arrangement(&arr, i, j) {
            return Ok(Some(cert));
        }
    }
    let mut search = Search {
        entries: &yw.entries,
        n,
        rows: j.len(),
        cols: i.len(),
        i,
        j,
        w: &yw.w,
        nodes: 0,
        budget,
    };
    let mut used = vec![false; yw.len()];
    search.rows(&mut used, &mut Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOutcome {
    #[serde(rename = "I")]
    pub i: ExpSet,
    #[serde(rename = "J")]
    pub j: ExpSet,
    /// `(T, R) = (J, I)` certifies as a companion.
    pub companion: bool,
    /// Every set has a good arrangement with `(I, J)`.
    pub good: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub middles: Vec<Word>,
    pub pairs: Vec<PairOutcome>,
    pub some_companion: bool,
    pub all_good_for_some_pair: bool,
    /// The two sides agree for every Krasner pair.
    pub holds: bool,
}

pub fn companion_krasner_equivalence(
    x: &FiniteLanguage,
    a: u8,
    middles: &[Word],
) -> Result<EquivalenceReport, GoodError> {
    let ext = XwExtractor::new(x, a)?;
    let xws = middles.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    equivalence_for(&xws, ext.n())
}

pub fn equivalence_for(xws: &[XwSet], n: usize) -> Result<EquivalenceReport, GoodError> {
    let mut pairs = Vec::new();
    for kp in enumerate_krasner(n) {
        let companion = companion_for(xws, &kp.j, &kp.i).is_ok();
        let mut good = true;
        for xw in xws {
            let found = match exists_good_arrangement(xw, &kp.i, &kp.j) {
                Err(GoodError::CardMismatch { .. }) => None,
                other => other?,
            };
            if found.is_none() {
                good = false;
                break;
            }
        }
        pairs.push(PairOutcome {
            i: kp.i,
            j: kp.j,
            companion,
            good,
        });
    }
    Ok(EquivalenceReport {
        n,
        middles: xws.iter().map(|x| x.w.clone()).collect(),
        some_companion: pairs.iter().any(|p| p.companion),
        all_good_for_some_pair: pairs.iter().any(|p| p.good),
        holds: pairs.iter().all(|p| p.companion == p.good),
        pairs,
    })
}

fn require_small_omega(n: usize) -> Result<(), GoodError> {
    let o = omega(n);
    if o > 2 {
        Err(GoodError::OmegaTooLarge { n, omega: o })
    } else {
        Ok(())
    }
}

/// For `Ω(n) ≤ 2`: a Krasner pair `(I, J)` such that `(T, R) = (J, I)` is a companion.
pub fn small_omega_companion(
    x: &FiniteLanguage,
    a: u8,
    middles: &[Word],
    bound: usize,
) -> Result<(KrasnerPair, CompanionCert), GoodError> {
    let ext = XwExtractor::new(x, a)?;
    require_small_omega(ext.n())?;
    let xws = middles.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    small_omega_for(&xws, ext.n(), bound)
}

pub fn small_omega_for(xws: &[XwSet], n: usize, bound: usize) -> Result<(KrasnerPair, CompanionCert), GoodError> {
    require_small_omega(n)?;
    let cert = companion_among(xws, n, bound)?.ok_or(GoodError::NoKrasnerCompanion)?;
    let krasner = enumerate_krasner(n);
    // Krasner pairs sharing the division identities with the found companion come first
    let (aligned, rest): (Vec<_>, Vec<_>) = krasner
        .into_iter()
        .partition(|kp| ef_quotient(&cert.r, &kp.i).is_some() && ef_quotient(&cert.t, &kp.j).is_some());
    for kp in aligned.into_iter().chain(rest) {
        if let Ok(c) = companion_for(xws, &kp.j, &kp.i) {
            return Ok((kp, c));
        }
    }
    Err(GoodError::NoKrasnerCompanion)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KrasnerLabel {
    #[serde(rename = "I")]
    pub i: ExpSet,
    #[serde(rename = "J")]
    pub j: ExpSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LetterCert {
    pub letter: String,
    pub cert: GoodArrangementCert,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    #[serde(rename = "I")]
    pub i: ExpSet,
    #[serde(rename = "J")]
    pub j: ExpSet,
    pub letter: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionDecision {
    pub decision: &'static str,
    pub n: usize,
    pub krasner: Option<KrasnerLabel>,
    pub certs: Vec<LetterCert>,
    pub failures: Vec<PairFailure>,
}

impl InclusionDecision {
    pub fn is_yes(&self) -> bool {
        self.decision == "YES"
    }
}

/// Splits `Y ⊆ a*Ba*` by its letter from `B`, as exponent sets.
pub fn split_by_letter(y: &FiniteLanguage, a: u8, n: usize) -> Result<Vec<(u8, XwSet)>, GoodError> {
    let mut by_letter: BTreeMap<u8, Vec<(usize, usize)>> =
        y.letters().iter().filter(|&&c| c != a).map(|&c| (c, Vec::new())).collect();
    for u in y.iter() {
        let (r, mid, v) = u.strip_power(a);
        if mid.len() != 1 {
            return Err(GoodError::PreconditionFailed(format!("{u} is not in a*Ba*")));
        }
        by_letter.entry(mid.as_bytes()[0]).or_default().push((r, v));
    }
    if by_letter.is_empty() {
        return Err(GoodError::PreconditionFailed("no letter other than the distinguished one".into()));
    }
    by_letter
        .into_iter()
        .map(|(b, entries)| {
            if entries.len() != n {
                return Err(GoodError::PreconditionFailed(format!(
                    "{} words use {}, expected {n}",
                    entries.len(),
                    b as char
                )));
            }
            Ok((b, XwSet::new(Word::from_bytes(vec![b]), n, entries)))
        })
        .collect()
}

/// Whether `Y ∪ {a^n}` embeds in a finite maximal code, for `Ω(n) ≤ 2`.
pub fn decide_inclusion(y: &FiniteLanguage, a: u8, n: usize) -> Result<InclusionDecision, GoodError> {
    if n == 0 {
        return Err(GoodError::PreconditionFailed("n must be positive".into()));
    }
    require_small_omega(n).map_err(|e| GoodError::PreconditionFailed(e.to_string()))?;
    let parts = split_by_letter(y, a, n)?;
    let mut failures = Vec::new();
    'pairs: for kp in enumerate_krasner(n) {
        let mut certs = Vec::new();
        for (b, yb) in &parts {
            match exists_good_arrangement(yb, &kp.i, &kp.j)? {
                Some(cert) => certs.push(LetterCert {
                    letter: (*b as char).to_string(),
                    cert,
                }),
                None => {
                    failures.push(PairFailure {
                        i: kp.i.clone(),
                        j: kp.j.clone(),
                        letter: (*b as char).to_string(),
                        reason: "no good arrangement".into(),
                    });
                    continue 'pairs;
                }
            }
        }
        return Ok(InclusionDecision {
            decision: "YES",
            n,
            krasner: Some(KrasnerLabel { i: kp.i, j: kp.j }),
            certs,
            failures,
        });
    }
    Ok(InclusionDecision {
        decision: "NO",
        n,
        krasner: None,
        certs: Vec::new(),
        failures,
    })
}
