//! Companion factorizations, arrangements of `X_w`, and the triangle inequality.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::code::{is_maximal_finite_code, CodeError};
use crate::poly::ExpSet;
use crate::word::{FiniteLanguage, Word};
use crate::xw::{XwError, XwExtractor, XwSet};
use crate::zn::{enumerate_factorizations, is_factorization, ZnError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("the language is not a finite maximal code")]
    NotMaximal,
    #[error("({t:?}, {r:?}) is not a companion factorization for {w}: {reason}")]
    NotCompanion { w: Word, t: ExpSet, r: ExpSet, reason: String },
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("malformed grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Xw(#[from] XwError),
    #[error(transparent)]
    Zn(#[from] ZnError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// The unique decomposition `(t + i, j + r)` of one residue pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub residue: (usize, usize),
    pub t: usize,
    pub entry: (usize, usize),
    pub r: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleEvidence {
    pub w: Word,
    pub unambiguous: bool,
    pub coverage: Vec<Cover>,
}

impl MiddleEvidence {
    pub fn lookup(&self, residue: (usize, usize)) -> Option<&Cover> {
        self.coverage
            .binary_search_by_key(&residue, |c| c.residue)
            .ok()
            .map(|i| &self.coverage[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompanionCert {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: ExpSet,
    #[serde(rename = "R")]
    pub r: ExpSet,
    pub middles: Vec<MiddleEvidence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompanionFailure {
    NotFactorization,
    NoMiddles,
    ExactCollision { w: Word, first: Cover, second: Cover },
    ResidueCollision { w: Word, first: Cover, second: Cover },
    Missing { w: Word, residue: (usize, usize) },
}

impl std::fmt::Display for CompanionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CompanionFailure::NotFactorization => write!(f, "not a factorization"),
            CompanionFailure::NoMiddles => write!(f, "no nonempty middle to certify"),
            CompanionFailure::ExactCollision { w, first, second } => write!(
                f,
                "{w}: product is ambiguous, {first:?} and {second:?} give the same word"
            ),
            CompanionFailure::ResidueCollision { w, first, second } => {
                write!(f, "{w}: {first:?} and {second:?} share residues")
            }
            CompanionFailure::Missing { w, residue } => {
                write!(f, "{w}: residue pair {residue:?} is not covered")
            }
        }
    }
}

/// Checks one `X_w` against `(T, R)`.
pub fn companion_evidence(xw: &XwSet, t: &ExpSet, r: &ExpSet) -> Result<MiddleEvidence, CompanionFailure> {
    let n = xw.n;
    let mut exact: BTreeMap<(usize, usize), Cover> = BTreeMap::new();
    let mut by_residue: BTreeMap<(usize, usize), Cover> = BTreeMap::new();
    for tv in t.iter() {
        for &(i, j) in &xw.entries {
            for rv in r.iter() {
                let (h, m) = (tv + i, j + rv);
                let cover = Cover {
                    residue: (h % n, m % n),
                    t: tv,
                    entry: (i, j),
                    r: rv,
                };
                if let Some(prev) = exact.insert((h, m), cover) {
                    return Err(CompanionFailure::ExactCollision {
                        w: xw.w.clone(),
                        first: prev,
                        second: cover,
                    });
                }
                if let Some(prev) = by_residue.insert(cover.residue, cover) {
                    return Err(CompanionFailure::ResidueCollision {
                        w: xw.w.clone(),
                        first: prev,
                        second: cover,
                    });
                }
            }
        }
    }
    for h in 0..n {
        for m in 0..n {
            if !by_residue.contains_key(&(h, m)) {
                return Err(CompanionFailure::Missing { w: xw.w.clone(), residue: (h, m) });
            }
        }
    }
    Ok(MiddleEvidence {
        w: xw.w.clone(),
        unambiguous: true,
        coverage: by_residue.into_values().collect(),
    })
}

/// Certifies `(T, R)` against every nonempty set in `xws`.
pub fn companion_for(xws: &[XwSet], t: &ExpSet, r: &ExpSet) -> Result<CompanionCert, CompanionFailure> {
    let Some(first) = xws.iter().find(|x| !x.is_empty()) else {
        return Err(CompanionFailure::NoMiddles);
    };
    let n = first.n;
    if !is_factorization(t, r, n) {
        return Err(CompanionFailure::NotFactorization);
    }
    let middles = xws
        .iter()
        .filter(|x| !x.is_empty())
        .map(|x| companion_evidence(x, t, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CompanionCert {
        n,
        t: t.clone(),
        r: r.clone(),
        middles,
    })
}

pub fn is_companion(
    ext: &XwExtractor,
    t: &ExpSet,
    r: &ExpSet,
    middles: &[Word],
) -> Result<Result<CompanionCert, CompanionFailure>, ArrangementError> {
    let xws = middles.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    Ok(companion_for(&xws, t, r))
}

/// First enumerated factorization that certifies; requires a finite maximal code.
pub fn find_companion(
    x: &FiniteLanguage,
    a: u8,
    middles: &[Word],
    bound: usize,
) -> Result<Option<CompanionCert>, ArrangementError> {
    if !is_maximal_finite_code(x)? {
        return Err(ArrangementError::NotMaximal);
    }
    let ext = XwExtractor::new(x, a)?;
    let xws = middles.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    companion_among(&xws, ext.n(), bound)
}

pub fn companion_among(xws: &[XwSet], n: usize, bound: usize) -> Result<Option<CompanionCert>, ArrangementError> {
    for f in enumerate_factorizations(n, bound)? {
        if let Ok(cert) = companion_for(xws, &f.t, &f.r) {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Every enumerated `(T, R)` that certifies.
pub fn all_companions(xws: &[XwSet], n: usize, bound: usize) -> Result<Vec<CompanionCert>, ArrangementError> {
    Ok(enumerate_factorizations(n, bound)?
        .into_iter()
        .filter_map(|f| companion_for(xws, &f.t, &f.r).ok())
        .collect())
}

/// An `m × ℓ` matrix of exponent pairs; rows are labelled by `T`, columns by `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    pub w: Word,
    pub n: usize,
    pub grid: Vec<Vec<(usize, usize)>>,
    pub row_labels: Vec<usize>,
    pub column_labels: Vec<usize>,
    /// Per column, the `T`-sequence bringing every left exponent to the column label.
    pub column_certificates: Vec<Vec<usize>>,
    /// Per row, the `R`-sequence bringing every right exponent to the row label.
    pub row_certificates: Vec<Vec<usize>>,
}

impl Arrangement {
    /// A bare grid without labels or certificates.
    pub fn from_grid(w: Word, n: usize, grid: Vec<Vec<(usize, usize)>>) -> Self {
        Arrangement {
            w,
            n,
            grid,
            row_labels: Vec::new(),
            column_labels: Vec::new(),
            column_certificates: Vec::new(),
            row_certificates: Vec::new(),
        }
    }

    pub fn from_words(w: &Word, a: u8, n: usize, rows: &[Vec<Word>]) -> Result<Self, ArrangementError> {
        let grid = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|u| {
                        let (r, mid, v) = u.strip_power(a);
                        if &mid == w {
                            Ok((r, v))
                        } else {
                            Err(ArrangementError::BadGrid(format!("{u} is not in a*{w}a*")))
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement::from_grid(w.clone(), n, grid))
    }

    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn columns(&self) -> usize {
        self.grid.first().map_or(0, Vec::len)
    }

    pub fn words(&self, a: u8) -> Vec<Vec<Word>> {
        self.grid
            .iter()
            .map(|row| row.iter().map(|&(r, v)| Word::bayonet(r, &self.w, v, a)).collect())
            .collect()
    }

    /// Left exponents of row `p`.
    pub fn row_set(&self, p: usize) -> ExpSet {
        ExpSet::new(self.grid[p].iter().map(|e| e.0))
    }

    /// Right exponents of column `q`.
    pub fn column_set(&self, q: usize) -> ExpSet {
        ExpSet::new(self.grid.iter().map(|row| row[q].1))
    }

    pub fn entries(&self) -> BTreeSet<(usize, usize)> {
        self.grid.iter().flatten().copied().collect()
    }

    pub fn transposed(&self) -> Vec<Vec<(usize, usize)>> {
        (0..self.columns())
            .map(|q| self.grid.iter().map(|row| row[q]).collect())
            .collect()
    }

    /// True when both grids have the same rows (as sets) and the same columns (as sets).
    pub fn same_up_to_order(&self, other: &Arrangement) -> bool {
        let sets = |g: &Vec<Vec<(usize, usize)>>| -> BTreeSet<BTreeSet<(usize, usize)>> {
            g.iter().map(|line| line.iter().copied().collect()).collect()
        };
        self.rows() == other.rows()
            && self.columns() == other.columns()
            && sets(&self.grid) == sets(&other.grid)
            && sets(&self.transposed()) == sets(&other.transposed())
    }
}

/// The grid `φ(a^{r_q} w a^{t_p})` over rows `T` and columns `R`.
pub fn build_arrangement(xw: &XwSet, t: &ExpSet, r: &ExpSet) -> Result<Arrangement, ArrangementError> {
    let evidence = companion_evidence(xw, t, r).map_err(|e| ArrangementError::NotCompanion {
        w: xw.w.clone(),
        t: t.clone(),
        r: r.clone(),
        reason: e.to_string(),
    })?;
    let n = xw.n;
    let rows: Vec<usize> = t.iter().collect();
    let cols: Vec<usize> = r.iter().collect();
    let mut grid = vec![Vec::with_capacity(cols.len()); rows.len()];
    let mut column_certificates = vec![Vec::with_capacity(rows.len()); cols.len()];
    let mut row_certificates = vec![Vec::with_capacity(cols.len()); rows.len()];
    for (p, &tp) in rows.iter().enumerate() {
        for (q, &rq) in cols.iter().enumerate() {
            let c = evidence
                .lookup((rq % n, tp % n))
                .expect("coverage is complete for a companion");
            grid[p].push(c.entry);
            column_certificates[q].push(c.t);
            row_certificates[p].push(c.r);
        }
    }
    let arr = Arrangement {
        w: xw.w.clone(),
        n,
        grid,
        row_labels: rows,
        column_labels: cols,
        column_certificates,
        row_certificates,
    };
    if arr.entries().len() != xw.len() || arr.rows() * arr.columns() != xw.len() {
        return Err(ArrangementError::NotBijective(format!(
            "{} grid cells hit {} of {} entries",
            arr.rows() * arr.columns(),
            arr.entries().len(),
            xw.len()
        )));
    }
    Ok(arr)
}

/// Kuhn's augmenting-path matching; `options[i]` lists admissible targets of `i`.
pub(crate) fn perfect_matching(options: &[Vec<usize>], targets: usize) -> Option<Vec<usize>> {
    fn augment(i: usize, options: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &t in &options[i] {
            if !seen[t] {
                seen[t] = true;
                if owner[t].map_or(true, |o| augment(o, options, seen, owner)) {
                    owner[t] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; targets];
    for i in 0..options.len() {
        let mut seen = vec![false; targets];
        if !augment(i, options, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; options.len()];
    for (t, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            out[*i] = t;
        }
    }
    Some(out)
}

/// One line (row or column) and the constant it was matched to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineCheck {
    pub index: usize,
    /// Label values `c` for which every exponent of the line can be brought to `c`.
    pub candidates: Vec<usize>,
    pub constant: Option<usize>,
    pub certificate: Option<Vec<usize>>,
}

/// Lines whose exponents, shifted by members of `shifts`, all reach a distinct
/// member of `labels` modulo `n`.
fn label_lines(lines: &[Vec<usize>], shifts: &ExpSet, labels: &ExpSet, n: usize) -> (Vec<LineCheck>, bool) {
    let label_list: Vec<usize> = labels.iter().collect();
    let shift_res: BTreeMap<usize, usize> = shifts.iter().map(|s| (s % n, s)).collect();
    let shift_of = |c: usize, e: usize| shift_res.get(&((c % n + n - e % n) % n)).copied();
    let options: Vec<Vec<usize>> = lines
        .iter()
        .map(|line| {
            (0..label_list.len())
                .filter(|&k| line.iter().all(|&e| shift_of(label_list[k], e).is_some()))
                .collect()
        })
        .collect();
    let matched = if lines.len() == label_list.len() {
        perfect_matching(&options, label_list.len())
    } else {
        None
    };
    let checks = lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let constant = matched.as_ref().map(|m| label_list[m[i]]);
            LineCheck {
                index: i,
                candidates: options[i].iter().map(|&k| label_list[k]).collect(),
                constant,
                certificate: constant
                    .map(|c| line.iter().map(|&e| shift_of(c, e).expect("admissible")).collect()),
            }
        })
        .collect();
    (checks, matched.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCheck {
    pub pair: &'static str,
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementReport {
    pub n: usize,
    pub shape_ok: bool,
    pub column_equations: Vec<LineCheck>,
    pub column_equations_ok: bool,
    pub row_equations: Vec<LineCheck>,
    pub row_equations_ok: bool,
    pub factorizations: Vec<FactorCheck>,
    pub factorizations_ok: bool,
    /// Whether certificates carried by the arrangement are themselves valid.
    pub supplied_certificates_ok: Option<bool>,
    pub passes: bool,
}

impl ArrangementReport {
    pub fn failed_factorizations(&self) -> impl Iterator<Item = &FactorCheck> {
        self.factorizations.iter().filter(|f| !f.ok)
    }
}

fn supplied_ok(arr: &Arrangement, t: &ExpSet, r: &ExpSet) -> Option<bool> {
    if arr.column_certificates.is_empty() && arr.row_certificates.is_empty() {
        return None;
    }
    let n = arr.n;
    let shape = arr.column_certificates.len() == arr.columns()
        && arr.row_certificates.len() == arr.rows()
        && arr.column_labels.len() == arr.columns()
        && arr.row_labels.len() == arr.rows();
    if !shape {
        return Some(false);
    }
    let cols = (0..arr.columns()).all(|q| {
        (0..arr.rows()).all(|p| {
            let tv = arr.column_certificates[q][p];
            t.contains(tv) && (arr.grid[p][q].0 + tv) % n == arr.column_labels[q] % n
        })
    });
    let rows = (0..arr.rows()).all(|p| {
        (0..arr.columns()).all(|q| {
            let rv = arr.row_certificates[p][q];
            r.contains(rv) && (arr.grid[p][q].1 + rv) % n == arr.row_labels[p] % n
        })
    });
    Some(cols && rows)
}

/// Column equations over `T` with labels in `R`, row equations over `R` with
/// labels in `T`, and the factorization pairs `(T, R_p)`, `(R_p, T_q)`, `(T_q, R)`.
pub fn verify_arrangement(arr: &Arrangement, t: &ExpSet, r: &ExpSet) -> ArrangementReport {
    let n = arr.n;
    let shape_ok = arr.rows() == t.len()
        && arr.grid.iter().all(|row| row.len() == r.len())
        && arr.rows() * arr.columns() == n;
    if !shape_ok {
        return ArrangementReport {
            n,
            shape_ok,
            column_equations: Vec::new(),
            column_equations_ok: false,
            row_equations: Vec::new(),
            row_equations_ok: false,
            factorizations: Vec::new(),
            factorizations_ok: false,
            supplied_certificates_ok: None,
            passes: false,
        };
    }
    let col_lines: Vec<Vec<usize>> = arr
        .transposed()
        .iter()
        .map(|c| c.iter().map(|e| e.0).collect())
        .collect();
    let row_lines: Vec<Vec<usize>> = arr.grid.iter().map(|row| row.iter().map(|e| e.1).collect()).collect();
    let (column_equations, column_equations_ok) = label_lines(&col_lines, t, r, n);
    let (row_equations, row_equations_ok) = label_lines(&row_lines, r, t, n);

    let mut factorizations = Vec::new();
    for p in 0..arr.rows() {
        factorizations.push(FactorCheck {
            pair: "T+R_p",
            row: Some(p),
            column: None,
            ok: is_factorization(t, &arr.row_set(p), n),
        });
    }
    for q in 0..arr.columns() {
        factorizations.push(FactorCheck {
            pair: "T_q+R",
            row: None,
            column: Some(q),
            ok: is_factorization(&arr.column_set(q), r, n),
        });
    }
    for p in 0..arr.rows() {
        for q in 0..arr.columns() {
            factorizations.push(FactorCheck {
                pair: "R_p+T_q",
                row: Some(p),
                column: Some(q),
                ok: is_factorization(&arr.row_set(p), &arr.column_set(q), n),
            });
        }
    }
    let factorizations_ok = factorizations.iter().all(|f| f.ok);
    let supplied_certificates_ok = supplied_ok(arr, t, r);
    ArrangementReport {
        n,
        shape_ok,
        passes: column_equations_ok
            && row_equations_ok
            && factorizations_ok
            && supplied_certificates_ok.unwrap_or(true),
        column_equations,
        column_equations_ok,
        row_equations,
        row_equations_ok,
        factorizations,
        factorizations_ok,
        supplied_certificates_ok,
    }
}

/// The same conditions phrased with `(P, Q)`: rows follow `P`, columns follow `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZhReport {
    #[serde(rename = "P")]
    pub p: ExpSet,
    #[serde(rename = "Q")]
    pub q: ExpSet,
    /// Each column reaches a distinct `q_m ∈ Q` by adding members of `P`.
    pub column_sequences_ok: bool,
    /// Each row reaches a distinct `p_k ∈ P` by adding members of `Q`.
    pub row_sequences_ok: bool,
    /// `(R_k, T_m)`, `(R_k, P)`, `(Q, T_m)` all factorizations.
    pub pairs_ok: bool,
    pub passes: bool,
    pub detail: ArrangementReport,
}

pub fn zh_theorem_form(arr: &Arrangement, p: &ExpSet, q: &ExpSet) -> ZhReport {
    let detail = verify_arrangement(arr, p, q);
    ZhReport {
        p: p.clone(),
        q: q.clone(),
        column_sequences_ok: detail.column_equations_ok,
        row_sequences_ok: detail.row_equations_ok,
        pairs_ok: detail.factorizations_ok,
        passes: detail.shape_ok
            && detail.column_equations_ok
            && detail.row_equations_ok
            && detail.factorizations_ok,
        detail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossFailure {
    pub first: usize,
    pub row: usize,
    pub second: usize,
    pub column: usize,
    pub factorization: bool,
    pub companion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub pairs_checked: usize,
    pub failures: Vec<CrossFailure>,
    pub passes: bool,
}

/// Rows of one arrangement against columns of another: `(R_p, T_q)` must be a
/// factorization and `(T, R) := (T_q, R_p)` a companion for every set in `xws`.
pub fn cross_check_middles(arrs: &[Arrangement], xws: &[XwSet]) -> CrossCheckReport {
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for (ia, a) in arrs.iter().enumerate() {
        for (ib, b) in arrs.iter().enumerate() {
            if ia == ib {
                continue;
            }
            for p in 0..a.rows() {
                let rp = a.row_set(p);
                for q in 0..b.columns() {
                    let tq = b.column_set(q);
                    pairs_checked += 1;
                    let factorization = is_factorization(&rp, &tq, a.n);
                    let companion = factorization && companion_for(xws, &tq, &rp).is_ok();
                    if !companion {
                        failures.push(CrossFailure {
                            first: ia,
                            row: p,
                            second: ib,
                            column: q,
                            factorization,
                            companion,
                        });
                    }
                }
            }
        }
    }
    CrossCheckReport {
        pairs_checked,
        passes: failures.is_empty(),
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub w: Word,
    /// `(k, #{(r, v) : r + v ≤ k})` for `k = 0..=max(r + v)`.
    pub counts: Vec<(usize, usize)>,
    /// The `k` with least slack `k + 1 - count`.
    pub tightest_k: Option<usize>,
    pub first_violation: Option<usize>,
    pub passes: bool,
}

pub fn triangle_audit(xw: &XwSet) -> TriangleReport {
    let top = xw.entries.iter().map(|&(r, v)| r + v).max();
    let mut counts = Vec::new();
    let mut tightest: Option<(i64, usize)> = None;
    let mut first_violation = None;
    if let Some(top) = top {
        let mut hist = vec![0usize; top + 1];
        for &(r, v) in &xw.entries {
            hist[r + v] += 1;
        }
        let mut acc = 0;
        for (k, h) in hist.iter().enumerate() {
            acc += h;
            counts.push((k, acc));
            let slack = (k + 1) as i64 - acc as i64;
            if tightest.map_or(true, |(s, _)| slack < s) {
                tightest = Some((slack, k));
            }
            if slack < 0 && first_violation.is_none() {
                first_violation = Some(k);
            }
        }
    }
    TriangleReport {
        w: xw.w.clone(),
        counts,
        tightest_k: tightest.map(|(_, k)| k),
        first_violation,
        passes: first_violation.is_none(),
    }
}

/// `(r, v) ↦ (i, j)` taken from a built arrangement: the cell's entry maps to
/// its (column label, row label).
pub fn arrangement_bijection(arr: &Arrangement) -> Vec<((usize, usize), (usize, usize))> {
    let mut out = Vec::new();
    for (p, row) in arr.grid.iter().enumerate() {
        for (q, &e) in row.iter().enumerate() {
            out.push((e, (arr.column_labels[q], arr.row_labels[p])));
        }
    }
    out.sort_unstable();
    out
}

/// Whether every `(r, v)` dominates its image `(i, j)`: `r ≥ i` and `v ≥ j`.
pub fn dominance_check(
    xw: &XwSet,
    i: &ExpSet,
    j: &ExpSet,
    phi: &[((usize, usize), (usize, usize))],
) -> Result<bool, ArrangementError> {
    let sources: BTreeSet<(usize, usize)> = phi.iter().map(|m| m.0).collect();
    let images: BTreeSet<(usize, usize)> = phi.iter().map(|m| m.1).collect();
    let domain: BTreeSet<(usize, usize)> = xw.entries.iter().copied().collect();
    if sources != domain || sources.len() != phi.len() {
        return Err(ArrangementError::NotBijective("map is not defined once on every entry".into()));
    }
    let target: BTreeSet<(usize, usize)> = i.iter().flat_map(|x| j.iter().map(move |y| (x, y))).collect();
    if images != target || images.len() != phi.len() {
        return Err(ArrangementError::NotBijective("image is not I × J".into()));
    }
    Ok(phi.iter().all(|&((r, v), (x, y))| r >= x && v >= y))
}

/// A dominating bijection onto `I × J`, if one exists.
pub fn dominating_bijection(
    xw: &XwSet,
    i: &ExpSet,
    j: &ExpSet,
) -> Option<Vec<((usize, usize), (usize, usize))>> {
    let target: Vec<(usize, usize)> = i.iter().flat_map(|x| j.iter().map(move |y| (x, y))).collect();
    if target.len() != xw.len() {
        return None;
    }
    let options: Vec<Vec<usize>> = xw
        .entries
        .iter()
        .map(|&(r, v)| (0..target.len()).filter(|&k| r >= target[k].0 && v >= target[k].1).collect())
        .collect();
    let m = perfect_matching(&options, target.len())?;
    Some(xw.entries.iter().enumerate().map(|(s, &e)| (e, target[m[s]])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::xw::enumerate_middles;
    use crate::zn::DEFAULT_BOUND;

    fn es(v: &[usize]) -> ExpSet {
        ExpSet::new(v.iter().copied())
    }

    fn w(s: &str) -> Word {
        Word::parse_powers(s).unwrap()
    }

    fn setup(e: &corpus::CorpusEntry) -> (XwExtractor, Vec<XwSet>) {
        let x = e.language();
        let ext = XwExtractor::new(&x, e.letter).unwrap();
        let xws = enumerate_middles(&x, e.letter, 3)
            .iter()
            .map(|m| ext.xw(m).unwrap())
            .collect();
        (ext, xws)
    }

    #[test]
    fn order8_companions() {
        let e = corpus::order8();
        let (ext, xws) = setup(&e);
        let cert = is_companion(&ext, &es(&[0, 4]), &es(&[0, 1, 2, 3]), &[w("b"), w("bab")])
            .unwrap()
            .unwrap();
        assert_eq!(cert.middles.len(), 2);
        assert!(cert.middles.iter().all(|m| m.unambiguous && m.coverage.len() == 64));
        let found = find_companion(&e.language(), b'a', &enumerate_middles(&e.language(), b'a', 3), DEFAULT_BOUND)
            .unwrap()
            .unwrap();
        assert_eq!((found.t, found.r), (es(&[0, 4]), es(&[0, 1, 2, 3])));
        let all: Vec<(ExpSet, ExpSet)> = all_companions(&xws, 8, DEFAULT_BOUND)
            .unwrap()
            .into_iter()
            .map(|c| (c.t, c.r))
            .collect();
        let expected: Vec<(ExpSet, ExpSet)> = [
            (&[0, 4][..], &[0, 1, 2, 3][..]),
            (&[0, 4], &[0, 1, 2, 7]),
            (&[0, 4], &[0, 1, 3, 6]),
            (&[0, 4], &[0, 1, 6, 7]),
            (&[0, 4], &[0, 2, 3, 5]),
            (&[0, 4], &[0, 2, 5, 7]),
            (&[0, 4], &[0, 3, 5, 6]),
            (&[0, 4], &[0, 5, 6, 7]),
            (&[0, 2, 4, 6], &[0, 1]),
            (&[0, 2, 4, 6], &[0, 3]),
            (&[0, 2, 4, 6], &[0, 5]),
            (&[0, 2, 4, 6], &[0, 7]),
        ]
        .iter()
        .map(|(t, r)| (es(t), es(r)))
        .collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn small_orders_companions() {
        let (_, xws) = setup(&corpus::order4());
        let all: Vec<(ExpSet, ExpSet)> = all_companions(&xws, 4, DEFAULT_BOUND)
            .unwrap()
            .into_iter()
            .map(|c| (c.t, c.r))
            .collect();
        assert_eq!(
            all,
            vec![
                (es(&[0]), es(&[0, 1, 2, 3])),
                (es(&[0, 1]), es(&[0, 2])),
                (es(&[0, 3]), es(&[0, 2]))
            ]
        );
        let failure = companion_for(&xws, &es(&[0, 2]), &es(&[0, 1])).unwrap_err();
        assert!(matches!(
            failure,
            CompanionFailure::ResidueCollision { .. } | CompanionFailure::ExactCollision { .. }
        ));
        let (_, xws) = setup(&corpus::order5());
        let found = companion_among(&xws, 5, DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!((found.t, found.r), (es(&[0, 1, 2, 3, 4]), es(&[0])));
    }

    #[test]
    fn non_maximal_rejected() {
        let x = FiniteLanguage::parse("ab", &["a^2", "ab"]).unwrap();
        assert_eq!(find_companion(&x, b'a', &[w("b")], DEFAULT_BOUND), Err(ArrangementError::NotMaximal));
    }

    #[test]
    fn builder_on_order8() {
        let e = corpus::order8();
        let (ext, _) = setup(&e);
        let (t, r) = (es(&[0, 4]), es(&[0, 1, 2, 3]));
        let xb = ext.xw(&w("b")).unwrap();
        let arr = build_arrangement(&xb, &t, &r).unwrap();
        assert_eq!(
            arr.words(b'a'),
            vec![
                vec![w("ba^6"), w("aba^6"), w("a^2b"), w("a^3b")],
                vec![w("ba^2"), w("aba^2"), w("a^2ba^4"), w("a^3ba^4")],
            ]
        );
        let report = verify_arrangement(&arr, &t, &r);
        assert!(report.passes, "{report:?}");
        assert_eq!(report.supplied_certificates_ok, Some(true));
        assert!(is_factorization(&es(&[0, 1, 2, 3]), &es(&[2, 6]), 8));

        let known = &e.known_arrangements[0];
        let printed = Arrangement::from_words(&known.w, b'a', 8, &known.grid).unwrap();
        assert_eq!(printed.entries(), arr.entries());
        let report = verify_arrangement(&printed, &known.p, &known.q);
        assert!(report.column_equations_ok && report.factorizations_ok);
        assert!(!report.row_equations_ok);
        assert!(!printed.same_up_to_order(&arr));
    }

    #[test]
    fn perturbed_grid_fails() {
        let (ext, _) = setup(&corpus::order8());
        let (t, r) = (es(&[0, 4]), es(&[0, 1, 2, 3]));
        let arr = build_arrangement(&ext.xw(&w("b")).unwrap(), &t, &r).unwrap();
        let mut bad = Arrangement::from_grid(arr.w.clone(), 8, arr.grid.clone());
        let tmp = bad.grid[0][0];
        bad.grid[0][0] = bad.grid[1][2];
        bad.grid[1][2] = tmp;
        let report = verify_arrangement(&bad, &t, &r);
        assert!(!report.column_equations_ok);
        assert!(!report.passes);
    }

    #[test]
    fn single_column_and_row() {
        let (_, xws) = setup(&corpus::order5());
        let (t, r) = (es(&[0, 1, 2, 3, 4]), es(&[0]));
        let arr = build_arrangement(&xws[0], &t, &r).unwrap();
        assert_eq!((arr.rows(), arr.columns()), (5, 1));
        assert!(verify_arrangement(&arr, &t, &r).passes);
        let e = corpus::order5();
        let known = &e.known_arrangements[0];
        let printed = Arrangement::from_words(&known.w, b'a', 5, &known.grid).unwrap();
        assert!(zh_theorem_form(&printed, &known.p, &known.q).passes);

        let e = corpus::order4();
        let (_, xws) = setup(&e);
        let (t, r) = (es(&[0]), es(&[0, 1, 2, 3]));
        for xw in &xws {
            let arr = build_arrangement(xw, &t, &r).unwrap();
            assert_eq!((arr.rows(), arr.columns()), (1, 4));
            assert!(verify_arrangement(&arr, &t, &r).passes);
        }
        for known in &e.known_arrangements {
            let printed = Arrangement::from_words(&known.w, b'a', 4, &known.grid).unwrap();
            assert!(zh_theorem_form(&printed, &known.p, &known.q).passes);
        }
    }

    #[test]
    fn not_companion_is_an_error() {
        let (ext, _) = setup(&corpus::order4());
        let xb = ext.xw(&w("b")).unwrap();
        assert!(matches!(
            build_arrangement(&xb, &es(&[0, 2]), &es(&[0, 1])),
            Err(ArrangementError::NotCompanion { .. })
        ));
    }

    #[test]
    fn cross_checks() {
        let (_, xws) = setup(&corpus::order8());
        let (t, r) = (es(&[0, 4]), es(&[0, 1, 2, 3]));
        let arrs: Vec<Arrangement> = xws.iter().map(|x| build_arrangement(x, &t, &r).unwrap()).collect();
        let report = cross_check_middles(&arrs, &xws);
        assert!(report.passes, "{report:?}");
        assert_eq!(report.pairs_checked, 3 * 2 * 2 * 4);
        assert!(cross_check_middles(&arrs[..1], &xws).passes);

        let mut corrupt = arrs.clone();
        corrupt[1].grid[0][0].0 += 1;
        let report = cross_check_middles(&corrupt, &xws);
        assert!(!report.passes);
        assert!(report.failures.iter().all(|f| f.first == 1 || f.second == 1));
    }

    #[test]
    fn triangle_counts() {
        let (ext, _) = setup(&corpus::order8());
        let report = triangle_audit(&ext.xw(&w("b")).unwrap());
        assert!(report.passes);
        assert_eq!(report.counts[2], (2, 2));
        let (ext, _) = setup(&corpus::order5());
        let report = triangle_audit(&ext.xw(&w("b")).unwrap());
        assert!(report.passes);
        assert_eq!(report.counts[8].1, 0);
        assert_eq!(report.counts[9].1, 1);
        let bad = XwSet::new(w("b"), 3, [(0, 0), (1, 0), (0, 1)]);
        assert_eq!(triangle_audit(&bad).first_violation, Some(1));
    }

    #[test]
    fn dominance() {
        let (ext, _) = setup(&corpus::order5());
        let xb = ext.xw(&w("b")).unwrap();
        let (t, r) = (es(&[0, 1, 2, 3, 4]), es(&[0]));
        let arr = build_arrangement(&xb, &t, &r).unwrap();
        let phi = arrangement_bijection(&arr);
        assert_eq!(dominance_check(&xb, &r, &t, &phi), Ok(true));

        let xs = XwSet::new(w("b"), 4, [(0, 0), (0, 1), (2, 0), (2, 1)]);
        let (i, j) = (es(&[0, 2]), es(&[0, 1]));
        let id: Vec<_> = xs.entries.iter().map(|&e| (e, e)).collect();
        assert_eq!(dominance_check(&xs, &i, &j, &id), Ok(true));
        let swapped = vec![((0, 0), (2, 0)), ((0, 1), (0, 1)), ((2, 0), (0, 0)), ((2, 1), (2, 1))];
        assert_eq!(dominance_check(&xs, &i, &j, &swapped), Ok(false));
        assert!(dominance_check(&xs, &i, &j, &id[..3]).is_err());
        assert!(dominating_bijection(&xs, &i, &j).is_some());
    }

    #[test]
    fn krasner_companion_implies_triangle() {
        for e in corpus::all() {
            let (_, xws) = setup(&e);
            let Some(cert) = companion_among(&xws, e.n, DEFAULT_BOUND).unwrap() else {
                panic!("{} has no companion", e.name)
            };
            for xw in &xws {
                let arr = build_arrangement(xw, &cert.t, &cert.r).unwrap();
                let report = verify_arrangement(&arr, &cert.t, &cert.r);
                assert!(report.passes, "{} {}", e.name, xw.w);
                assert_eq!(report.passes, zh_theorem_form(&arr, &cert.t, &cert.r).passes);
                if crate::zn::is_krasner(&cert.r, &cert.t, e.n) {
                    let phi = dominating_bijection(xw, &cert.r, &cert.t)
                        .unwrap_or_else(|| panic!("{} {}: no dominating bijection", e.name, xw.w));
                    assert_eq!(dominance_check(xw, &cert.r, &cert.t, &phi), Ok(true));
                }
                assert!(triangle_audit(xw).passes);
            }
        }
    }
}
