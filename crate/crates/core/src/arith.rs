//! Cone operations on fuzzy sets and Hukuhara differences.

use crate::error::{Error, Result};
use crate::grid::{AlphaGrid, DirectionGrid};
use crate::set::{CrispConvexSet, FuzzySet, Point};
use crate::support::{eval_support, eval_support_body, is_valid_support, reconstruct, reconstruct_level, Violation};

/// Level-wise Minkowski sum.
pub fn minkowski(f: &FuzzySet, g: &FuzzySet) -> Result<FuzzySet> {
    f.check_compatible(g)?;
    let bodies = f
        .bodies()
        .iter()
        .zip(g.bodies())
        .map(|(a, b)| a.minkowski(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(FuzzySet::from_parts_unchecked(f.agrid().clone(), bodies))
}

/// Level-wise scaling by `lambda >= 0`; `lambda = 0` gives `1_0`.
pub fn scale(lambda: f64, f: &FuzzySet) -> Result<FuzzySet> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::NegativeScale(lambda));
    }
    let bodies = f.bodies().iter().map(|b| b.scale_unchecked(lambda)).collect();
    Ok(FuzzySet::from_parts_unchecked(f.agrid().clone(), bodies))
}

/// Shifts every level body by `v`; the same as `minkowski(f, embed_point(v))`.
pub fn translate(f: &FuzzySet, v: &Point) -> Result<FuzzySet> {
    if v.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: v.dim() });
    }
    let bodies = f.bodies().iter().map(|b| b.translate(v)).collect();
    Ok(FuzzySet::from_parts_unchecked(f.agrid().clone(), bodies))
}

/// The singleton fuzzy set `1_v`.
pub fn embed_point(agrid: &AlphaGrid, v: &Point) -> FuzzySet {
    FuzzySet::point(agrid.clone(), v)
}

/// Crisp Hukuhara difference `a ⊖ b`: the `c` with `b + c = a`, if any.
///
/// Intervals use the closed form `[lo_a - lo_b, hi_a - hi_b]`, which exists
/// iff `a` is at least as wide as `b`. Polygons are handled on `dgrid`: the
/// difference exists iff `h_a - h_b` is grid-consistent within `tol`.
pub fn hukuhara_diff_crisp(
    a: &CrispConvexSet,
    b: &CrispConvexSet,
    dgrid: &DirectionGrid,
    tol: f64,
) -> Result<Option<CrispConvexSet>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    match (a, b) {
        (CrispConvexSet::Interval { lo: la, hi: ha }, CrispConvexSet::Interval { lo: lb, hi: hb }) => {
            let (lo, hi) = (la - lb, ha - hb);
            if hi >= lo {
                Ok(Some(CrispConvexSet::Interval { lo, hi }))
            } else if hi >= lo - tol {
                let mid = 0.5 * (lo + hi);
                Ok(Some(CrispConvexSet::Interval { lo: mid, hi: mid }))
            } else {
                Ok(None)
            }
        }
        _ => {
            let ha = eval_support_body(a, dgrid)?;
            let hb = eval_support_body(b, dgrid)?;
            let diff: Vec<f64> = ha.iter().zip(&hb).map(|(x, y)| x - y).collect();
            let Ok(body) = reconstruct_level(&diff, dgrid, tol) else {
                return Ok(None);
            };
            let consistent = (0..dgrid.len()).all(|j| (body.support(dgrid.direction(j)) - diff[j]).abs() <= tol);
            Ok(consistent.then_some(body))
        }
    }
}

/// Outcome of a fuzzy Hukuhara difference together with its certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum Difference {
    Exists(FuzzySet),
    /// Checks failed by `h_F - h_G`.
    Missing(Vec<Violation>),
}

impl Difference {
    pub fn into_option(self) -> Option<FuzzySet> {
        match self {
            Difference::Exists(f) => Some(f),
            Difference::Missing(_) => None,
        }
    }
}

/// `F ⊖ G` with the list of violated support-function checks when it does not exist.
pub fn hukuhara_difference(f: &FuzzySet, g: &FuzzySet, dgrid: &DirectionGrid, tol: f64) -> Result<Difference> {
    f.check_compatible(g)?;
    let diff = eval_support(f, dgrid)?.sub(&eval_support(g, dgrid)?)?;
    let report = is_valid_support(&diff, tol);
    if !report.valid {
        return Ok(Difference::Missing(report.violations));
    }
    if f.dim() == 1 {
        // closed form keeps interval arithmetic exact
        let bodies = f
            .bodies()
            .iter()
            .zip(g.bodies())
            .map(|(a, b)| hukuhara_diff_crisp(a, b, dgrid, tol).map(|c| c.expect("validated level")))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Difference::Exists(FuzzySet::with_tolerance(f.agrid().clone(), bodies, tol.max(1e-12))?));
    }
    Ok(Difference::Exists(reconstruct(&diff, tol)?))
}

/// Fuzzy Hukuhara difference `F ⊖ G`; `None` when it does not exist.
pub fn hukuhara_diff_fuzzy(f: &FuzzySet, g: &FuzzySet, dgrid: &DirectionGrid, tol: f64) -> Result<Option<FuzzySet>> {
    hukuhara_difference(f, g, dgrid, tol).map(Difference::into_option)
}
