//! Discretized support functions `s(α, u)` of fuzzy sets, the inverse
//! reconstruction from α-cuts, validity checks and the `d₂` / `d∞` metrics.

use crate::error::{Error, Result};
use crate::geometry::{intersect_halfplanes, polygon_from_clip, Vec2};
use crate::grid::{AlphaGrid, DirectionGrid};
use crate::set::{CrispConvexSet, FuzzySet, Point};

/// Support function sampled on an α-grid × direction grid, `values[k][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSurface {
    dgrid: DirectionGrid,
    agrid: AlphaGrid,
    values: Vec<f64>,
}

impl SupportSurface {
    /// Builds a surface from rows indexed by level. Values are not validated;
    /// use [`is_valid_support`] for that.
    pub fn new(dgrid: DirectionGrid, agrid: AlphaGrid, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != agrid.len() {
            return Err(Error::GridMismatch(format!(
                "{} rows for {} alpha levels",
                rows.len(),
                agrid.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dgrid.len()) {
            return Err(Error::GridMismatch(format!(
                "row of length {} for {} directions",
                r.len(),
                dgrid.len()
            )));
        }
        Ok(Self { dgrid, agrid, values: rows.concat() })
    }

    pub(crate) fn from_flat(dgrid: DirectionGrid, agrid: AlphaGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), dgrid.len() * agrid.len());
        Self { dgrid, agrid, values }
    }

    /// A zero surface (support of `1_0`).
    pub fn zeros(dgrid: DirectionGrid, agrid: AlphaGrid) -> Self {
        let n = dgrid.len() * agrid.len();
        Self { dgrid, agrid, values: vec![0.0; n] }
    }

    pub fn dgrid(&self) -> &DirectionGrid {
        &self.dgrid
    }

    pub fn agrid(&self) -> &AlphaGrid {
        &self.agrid
    }

    pub fn n_levels(&self) -> usize {
        self.agrid.len()
    }

    pub fn n_directions(&self) -> usize {
        self.dgrid.len()
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.dgrid.len() + j]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let n = self.dgrid.len();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.dgrid != other.dgrid {
            return Err(Error::GridMismatch("surfaces use different direction grids".into()));
        }
        if self.agrid != other.agrid {
            return Err(Error::GridMismatch("surfaces use different alpha grids".into()));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { dgrid: self.dgrid.clone(), agrid: self.agrid.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self {
            dgrid: self.dgrid.clone(),
            agrid: self.agrid.clone(),
            values: self.values.iter().map(|v| lambda * v).collect(),
        }
    }

    /// `Σ_i w_i S_i` over surfaces on a common grid.
    pub fn weighted_sum<'a>(terms: impl IntoIterator<Item = (f64, &'a SupportSurface)>) -> Result<Self> {
        let mut iter = terms.into_iter();
        let (w0, first) = iter
            .next()
            .ok_or_else(|| Error::InvalidSample("weighted sum of no surfaces".into()))?;
        let mut acc = first.scale(w0);
        for (w, s) in iter {
            acc.check_same_grid(s)?;
            for (a, b) in acc.values.iter_mut().zip(&s.values) {
                *a += w * b;
            }
        }
        Ok(acc)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// `Σ_k Σ_j wα_k wu_j s_kj²`.
    pub fn squared_norm(&self) -> f64 {
        let n = self.dgrid.len();
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| self.agrid.weights()[i / n] * self.dgrid.weights()[i % n] * v * v)
            .sum()
    }
}

/// `s[k][j] = sup { <u_j, y> : y ∈ bodies[k] }`.
pub fn eval_support(f: &FuzzySet, dgrid: &DirectionGrid) -> Result<SupportSurface> {
    if f.dim() != dgrid.dim() {
        return Err(Error::DimensionMismatch { expected: dgrid.dim(), found: f.dim() });
    }
    let mut values = Vec::with_capacity(f.agrid().len() * dgrid.len());
    for body in f.bodies() {
        for j in 0..dgrid.len() {
            values.push(body.support(dgrid.direction(j)));
        }
    }
    Ok(SupportSurface::from_flat(dgrid.clone(), f.agrid().clone(), values))
}

/// Support values of one crisp body on the grid.
pub fn eval_support_body(body: &CrispConvexSet, dgrid: &DirectionGrid) -> Result<Vec<f64>> {
    if body.dim() != dgrid.dim() {
        return Err(Error::DimensionMismatch { expected: dgrid.dim(), found: body.dim() });
    }
    Ok((0..dgrid.len()).map(|j| body.support(dgrid.direction(j))).collect())
}

/// Half-space intersection `{ y : <u_j, y> <= row[j] ∀ j }` of one level.
///
/// Rows whose intersection is empty by no more than `tol` collapse to a
/// single point. `Err(())` means the level is empty.
pub(crate) fn reconstruct_level(row: &[f64], dgrid: &DirectionGrid, tol: f64) -> std::result::Result<CrispConvexSet, ()> {
    if dgrid.dim() == 1 {
        let (hi, neg_lo) = (row[0], row[1]);
        let width = hi + neg_lo;
        return if width >= 0.0 {
            Ok(CrispConvexSet::Interval { lo: -neg_lo, hi })
        } else if width >= -tol {
            let mid = 0.5 * (hi - neg_lo);
            Ok(CrispConvexSet::Interval { lo: mid, hi: mid })
        } else {
            Err(())
        };
    }
    let normals: Vec<Vec2> = (0..dgrid.len()).map(|j| dgrid.direction2(j)).collect();
    let scale = 1.0 + row.iter().map(|b| b.abs()).fold(0.0, f64::max);
    let merge = 1e-9 * scale;
    if let Some(pts) = intersect_halfplanes(&normals, row, 1e-12 * scale) {
        return Ok(CrispConvexSet::Polygon(polygon_from_clip(pts, merge)));
    }
    // an empty-by-rounding level gets the smallest slack (within a factor 4) that
    // makes it nonempty, then collapses to the segment or point it approximates
    let mut slack = 4e-12 * scale;
    while slack < tol {
        if let Some(pts) = intersect_halfplanes(&normals, row, slack) {
            return Ok(CrispConvexSet::Polygon(polygon_from_clip(pts, slack.max(merge))));
        }
        slack *= 4.0;
    }
    match intersect_halfplanes(&normals, row, tol) {
        Some(pts) => Ok(CrispConvexSet::Polygon(polygon_from_clip(pts, tol.max(merge)))),
        None => Err(()),
    }
}

/// Rebuilds the fuzzy set whose level bodies are the half-space
/// intersections over the direction grid.
pub fn reconstruct(s: &SupportSurface, tol: f64) -> Result<FuzzySet> {
    let n = s.n_directions();
    let mut bodies = Vec::with_capacity(s.n_levels());
    let mut clamped: Vec<f64> = s.row(0).to_vec();
    for k in 0..s.n_levels() {
        if k > 0 {
            for j in 0..n {
                let v = s.get(k, j);
                let excess = v - clamped[j];
                if excess > tol || !v.is_finite() {
                    return Err(Error::NotMonotone { level: k - 1, direction: j, excess });
                }
                clamped[j] = clamped[j].min(v);
            }
        }
        if clamped.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSet(format!("non-finite support value at level {k}")));
        }
        let body = reconstruct_level(&clamped, s.dgrid(), tol).map_err(|_| Error::EmptyLevel { level: k })?;
        bodies.push(body);
    }
    FuzzySet::with_tolerance(s.agrid().clone(), bodies, tol.max(1e-9))
}

/// One failed check of [`is_valid_support`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite { level: usize, direction: usize },
    /// `s[level + 1][direction] > s[level][direction] + tol`.
    NotMonotone { level: usize, direction: usize, excess: f64 },
    /// `s(α, u) + s(α, -u) < -tol` for the antipodal pair `(direction, antipode)`.
    NotNormal { level: usize, direction: usize, antipode: usize, deficit: f64 },
    /// The half-space intersection of the level is empty.
    EmptyLevel { level: usize },
    /// Reconstructing the level and re-evaluating misses the value by `gap`.
    Inconsistent { level: usize, direction: usize, gap: f64 },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NonFinite { .. } => "non_finite",
            Violation::NotMonotone { .. } => "not_monotone",
            Violation::NotNormal { .. } => "not_normal",
            Violation::EmptyLevel { .. } => "empty_level",
            Violation::Inconsistent { .. } => "inconsistent",
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Violation::NonFinite { level, .. }
            | Violation::NotMonotone { level, .. }
            | Violation::NotNormal { level, .. }
            | Violation::EmptyLevel { level }
            | Violation::Inconsistent { level, .. } => *level,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// No grid direction is the zero vector, so `f(0) = 0` holds vacuously.
    pub origin_value_vacuous: bool,
}

/// Checks that `s` is (within `tol`) the support surface of a fuzzy set:
/// finite, monotone in α, antipodally normal, and reproduced by
/// reconstruct-then-evaluate at every level.
pub fn is_valid_support(s: &SupportSurface, tol: f64) -> ValidityReport {
    let dgrid = s.dgrid();
    let n = dgrid.len();
    let mut violations = Vec::new();
    let origin_value_vacuous = (0..n).all(|j| dgrid.direction(j).iter().any(|c| *c != 0.0));

    for k in 0..s.n_levels() {
        for j in 0..n {
            if !s.get(k, j).is_finite() {
                violations.push(Violation::NonFinite { level: k, direction: j });
            }
        }
    }
    if !violations.is_empty() {
        return ValidityReport { valid: false, violations, origin_value_vacuous };
    }

    for k in 0..s.n_levels() - 1 {
        for j in 0..n {
            let excess = s.get(k + 1, j) - s.get(k, j);
            if excess > tol {
                violations.push(Violation::NotMonotone { level: k, direction: j, excess });
            }
        }
    }

    for k in 0..s.n_levels() {
        for j in 0..n {
            if let Some(a) = dgrid.antipode(j) {
                if a > j {
                    let sum = s.get(k, j) + s.get(k, a);
                    if sum < -tol {
                        violations.push(Violation::NotNormal { level: k, direction: j, antipode: a, deficit: -sum });
                    }
                }
            }
        }
        match reconstruct_level(s.row(k), dgrid, tol) {
            Ok(body) => {
                for j in 0..n {
                    let gap = s.get(k, j) - body.support(dgrid.direction(j));
                    if gap.abs() > tol {
                        violations.push(Violation::Inconsistent { level: k, direction: j, gap });
                    }
                }
            }
            Err(()) => violations.push(Violation::EmptyLevel { level: k }),
        }
    }

    ValidityReport { valid: violations.is_empty(), violations, origin_value_vacuous }
}

/// Quadrature `d₂` distance between two surfaces on identical grids.
pub fn d2(a: &SupportSurface, b: &SupportSurface) -> Result<f64> {
    Ok(a.sub(b)?.squared_norm().sqrt())
}

/// `d₂` between fuzzy sets, through their surfaces on `dgrid`.
pub fn d2_sets(f: &FuzzySet, g: &FuzzySet, dgrid: &DirectionGrid) -> Result<f64> {
    f.check_compatible(g)?;
    d2(&eval_support(f, dgrid)?, &eval_support(g, dgrid)?)
}

/// Largest level-wise Hausdorff distance.
pub fn dinf(f: &FuzzySet, g: &FuzzySet) -> Result<f64> {
    f.check_compatible(g)?;
    let mut d: f64 = 0.0;
    for (a, b) in f.bodies().iter().zip(g.bodies()) {
        d = d.max(a.hausdorff(b)?);
    }
    Ok(d)
}

pub fn steiner(k: &CrispConvexSet) -> Point {
    k.steiner()
}

/// Generalized Steiner point `Σ_k wα_k st(bodies[k])`.
pub fn gsteiner(f: &FuzzySet) -> Point {
    let mut acc = Point::zeros(f.dim());
    for (w, body) in f.agrid().weights().iter().zip(f.bodies()) {
        acc = acc.add(&body.steiner().scale(*w));
    }
    acc
}
