//! End-to-end run over one code: extraction, companion search, arrangements,
//! triangle audit, and the small-`Ω(n)` equivalence.

use serde::Serialize;

use crate::arrangement::{
    build_arrangement, companion_among, cross_check_middles, triangle_audit, verify_arrangement, Arrangement,
    ArrangementReport, CompanionCert, CrossCheckReport, TriangleReport,
};
use crate::code::{is_code, is_maximal_finite_code, CodeReport};
use crate::good::{equivalence_for, small_omega_for, EquivalenceReport, GoodError, KrasnerLabel};
use crate::word::{FiniteLanguage, Word};
use crate::xw::{enumerate_middles, verify_with, XwExtractor, XwReport, XwSet};
use crate::zn::omega;

/// Default cap on letters other than `a` in enumerated middles.
pub const DEFAULT_MIDDLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementEntry {
    pub arrangement: Arrangement,
    pub report: ArrangementReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallOmegaSection {
    pub krasner: Option<KrasnerLabel>,
    pub equivalence: EquivalenceReport,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub letter: String,
    pub n: usize,
    pub code: CodeReport,
    pub maximal: bool,
    pub middles: Vec<Word>,
    pub xw: Vec<XwSet>,
    pub xw_reports: Vec<XwReport>,
    pub companion: Option<CompanionCert>,
    pub arrangements: Vec<ArrangementEntry>,
    pub cross_check: Option<CrossCheckReport>,
    pub triangle: Vec<TriangleReport>,
    /// Present when `Ω(n) ≤ 2`.
    pub small_omega: Option<SmallOmegaSection>,
    pub passes: bool,
}

pub fn run_pipeline(x: &FiniteLanguage, a: u8, max_b: usize, bound: usize) -> Result<PipelineReport, GoodError> {
    let code = is_code(x)?;
    let maximal = code.is_code && is_maximal_finite_code(x)?;
    let ext = XwExtractor::new(x, a)?;
    let n = ext.n();
    let middles = enumerate_middles(x, a, max_b);
    let xws = middles.iter().map(|m| ext.xw(m)).collect::<Result<Vec<_>, _>>()?;
    let xw_reports = middles.iter().map(|m| verify_with(&ext, m)).collect::<Result<Vec<_>, _>>()?;
    let companion = companion_among(&xws, n, bound)?;
    let mut arrangements = Vec::new();
    let mut cross_check = None;
    if let Some(cert) = &companion {
        for xw in &xws {
            let arrangement = build_arrangement(xw, &cert.t, &cert.r)?;
            let report = verify_arrangement(&arrangement, &cert.t, &cert.r);
            arrangements.push(ArrangementEntry { arrangement, report });
        }
        let arrs: Vec<Arrangement> = arrangements.iter().map(|e| e.arrangement.clone()).collect();
        cross_check = Some(cross_check_middles(&arrs, &xws));
    }
    let triangle: Vec<TriangleReport> = xws.iter().map(triangle_audit).collect();
    let small_omega = if omega(n) <= 2 && !xws.is_empty() {
        let krasner = small_omega_for(&xws, n, bound)
            .ok()
            .map(|(kp, _)| KrasnerLabel { i: kp.i, j: kp.j });
        let equivalence = equivalence_for(&xws, n)?;
        Some(SmallOmegaSection {
            passes: krasner.is_some() && equivalence.holds,
            krasner,
            equivalence,
        })
    } else {
        None
    };
    let passes = code.is_code
        && maximal
        && xw_reports.iter().all(XwReport::passes)
        && companion.is_some()
        && arrangements.iter().all(|e| e.report.passes)
        && cross_check.as_ref().map_or(false, |c| c.passes)
        && triangle.iter().all(|t| t.passes)
        && small_omega.as_ref().map_or(true, |s| s.passes);
    Ok(PipelineReport {
        letter: (a as char).to_string(),
        n,
        code,
        maximal,
        middles,
        xw: xws,
        xw_reports,
        companion,
        arrangements,
        cross_check,
        triangle,
        small_omega,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::ExpSet;
    use crate::zn::DEFAULT_BOUND;

    #[test]
    fn order8_full_pass() {
        let r = run_pipeline(&corpus::order8().language(), b'a', DEFAULT_MIDDLES, DEFAULT_BOUND).unwrap();
        assert!(r.passes);
        let c = r.companion.unwrap();
        assert_eq!((c.t, c.r), (ExpSet::from([0, 4]), ExpSet::from([0, 1, 2, 3])));
        assert!(r.small_omega.is_none());
    }

    #[test]
    fn small_orders_pass_with_krasner() {
        for (e, i, j) in [
            (corpus::order4(), vec![0, 1, 2, 3], vec![0]),
            (corpus::order5(), vec![0], vec![0, 1, 2, 3, 4]),
        ] {
            let r = run_pipeline(&e.language(), b'a', DEFAULT_MIDDLES, DEFAULT_BOUND).unwrap();
            assert!(r.passes, "{}", e.name);
            let k = r.small_omega.unwrap().krasner.unwrap();
            assert_eq!((k.i, k.j), (ExpSet::new(i), ExpSet::new(j)));
        }
    }

    #[test]
    fn non_maximal_fails() {
        let x = FiniteLanguage::parse("ab", &["a^2", "b"]).unwrap();
        let r = run_pipeline(&x, b'a', DEFAULT_MIDDLES, DEFAULT_BOUND).unwrap();
        assert!(!r.passes && !r.maximal);
    }
}
