//! Points, crisp convex bodies and fuzzy sets as stacks of nested level bodies.

use crate::error::{Error, Result};
use crate::geometry::{Polygon, Vec2};
use crate::grid::AlphaGrid;

/// Default geometric tolerance: exact-arithmetic paths in 1-D, polygon paths in 2-D.
pub fn default_tolerance(dim: usize) -> f64 {
    if dim == 1 {
        1e-9
    } else {
        1e-6
    }
}

/// A point of `R^d`, `d ∈ {1, 2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > 2 {
            return Err(Error::InvalidSet(format!(
                "points must have 1 or 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSet("point has non-finite coordinates".into()));
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn as_vec2(&self) -> Vec2 {
        [self.0[0], self.0.get(1).copied().unwrap_or(0.0)]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self(self.0.iter().map(|a| lambda * a).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Self(vec![x])
    }
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Self(v.to_vec())
    }
}

/// Nonempty compact convex subset of `R^1` (an interval) or `R^2` (a polygon).
#[derive(Debug, Clone, PartialEq)]
pub enum CrispConvexSet {
    Interval { lo: f64, hi: f64 },
    Polygon(Polygon),
}

impl CrispConvexSet {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidSet("interval endpoints must be finite".into()));
        }
        if lo > hi {
            return Err(Error::InvalidSet(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(Self::Interval { lo, hi })
    }

    pub fn polygon(vertices: Vec<Vec2>) -> Result<Self> {
        Polygon::new(vertices).map(Self::Polygon)
    }

    /// The singleton `{p}`.
    pub fn point(p: &Point) -> Self {
        match p.dim() {
            1 => Self::Interval { lo: p.0[0], hi: p.0[0] },
            _ => Self::Polygon(Polygon::point(p.as_vec2())),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Polygon(_) => 2,
        }
    }

    /// `sup { <u, y> : y ∈ self }` for a direction `u` of matching dimension.
    pub fn support(&self, u: &[f64]) -> f64 {
        match self {
            Self::Interval { lo, hi } => {
                if u[0] >= 0.0 {
                    u[0] * hi
                } else {
                    u[0] * lo
                }
            }
            Self::Polygon(p) => p.support([u[0], u[1]]),
        }
    }

    /// Steiner point: the midpoint of an interval, the exterior-angle
    /// weighted vertex average of a polygon.
    pub fn steiner(&self) -> Point {
        match self {
            Self::Interval { lo, hi } => Point(vec![0.5 * (lo + hi)]),
            Self::Polygon(p) => Point(p.steiner().to_vec()),
        }
    }

    pub fn translate(&self, v: &Point) -> Self {
        match self {
            Self::Interval { lo, hi } => Self::Interval { lo: lo + v.0[0], hi: hi + v.0[0] },
            Self::Polygon(p) => Self::Polygon(p.translate(v.as_vec2())),
        }
    }

    pub(crate) fn scale_unchecked(&self, lambda: f64) -> Self {
        match self {
            Self::Interval { lo, hi } => {
                if lambda == 0.0 {
                    Self::Interval { lo: 0.0, hi: 0.0 }
                } else {
                    Self::Interval { lo: lambda * lo, hi: lambda * hi }
                }
            }
            Self::Polygon(p) => Self::Polygon(p.scale(lambda)),
        }
    }

    pub fn minkowski(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Interval { lo: a, hi: b }, Self::Interval { lo: c, hi: d }) => {
                Ok(Self::Interval { lo: a + c, hi: b + d })
            }
            (Self::Polygon(p), Self::Polygon(q)) => Ok(Self::Polygon(p.minkowski(q))),
            _ => Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() }),
        }
    }

    /// `sup_{a ∈ self} dist(a, other)`; zero iff `self ⊆ other`.
    pub fn excess_over(&self, other: &Self) -> Result<f64> {
        match (self, other) {
            (Self::Interval { lo: a, hi: b }, Self::Interval { lo: c, hi: d }) => {
                Ok((c - a).max(b - d).max(0.0))
            }
            (Self::Polygon(p), Self::Polygon(q)) => Ok(p.excess_over(q)),
            _ => Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() }),
        }
    }

    pub fn hausdorff(&self, other: &Self) -> Result<f64> {
        match (self, other) {
            (Self::Interval { lo: a, hi: b }, Self::Interval { lo: c, hi: d }) => {
                Ok((a - c).abs().max((b - d).abs()))
            }
            (Self::Polygon(p), Self::Polygon(q)) => Ok(p.hausdorff(q)),
            _ => Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() }),
        }
    }

    /// Interval length or polygon diameter.
    pub fn width(&self) -> f64 {
        match self {
            Self::Interval { lo, hi } => hi - lo,
            Self::Polygon(p) => p.diameter(),
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        match self {
            Self::Interval { lo, hi } => p.0[0] >= lo - tol && p.0[0] <= hi + tol,
            Self::Polygon(q) => q.contains(p.as_vec2(), tol),
        }
    }
}

/// Fuzzy convex set stored as its level bodies on an [`AlphaGrid`].
///
/// `bodies[k]` is the α-cut at `agrid.levels()[k]`; `bodies[0]` plays the
/// role of the (compact) support set and the last body is the nonempty core.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySet {
    agrid: AlphaGrid,
    bodies: Vec<CrispConvexSet>,
}

impl FuzzySet {
    /// Checks nestedness with [`default_tolerance`] for the bodies' dimension.
    pub fn new(agrid: AlphaGrid, bodies: Vec<CrispConvexSet>) -> Result<Self> {
        let dim = bodies.first().map(CrispConvexSet::dim).unwrap_or(1);
        Self::with_tolerance(agrid, bodies, default_tolerance(dim))
    }

    pub fn with_tolerance(agrid: AlphaGrid, bodies: Vec<CrispConvexSet>, tol: f64) -> Result<Self> {
        if bodies.len() != agrid.len() {
            return Err(Error::GridMismatch(format!(
                "{} level bodies for {} alpha levels",
                bodies.len(),
                agrid.len()
            )));
        }
        let dim = bodies[0].dim();
        if let Some(b) = bodies.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
        }
        for k in 0..bodies.len() - 1 {
            let excess = bodies[k + 1].excess_over(&bodies[k])?;
            if excess > tol {
                return Err(Error::NotNested { outer: k, inner: k + 1, excess });
            }
        }
        Ok(Self { agrid, bodies })
    }

    /// The indicator `1_A`: every level equals `A`.
    pub fn crisp(agrid: AlphaGrid, body: CrispConvexSet) -> Self {
        let bodies = vec![body; agrid.len()];
        Self { agrid, bodies }
    }

    /// The singleton fuzzy set `1_v`.
    pub fn point(agrid: AlphaGrid, v: &Point) -> Self {
        Self::crisp(agrid, CrispConvexSet::point(v))
    }

    pub(crate) fn from_parts_unchecked(agrid: AlphaGrid, bodies: Vec<CrispConvexSet>) -> Self {
        Self { agrid, bodies }
    }

    pub fn dim(&self) -> usize {
        self.bodies[0].dim()
    }

    pub fn agrid(&self) -> &AlphaGrid {
        &self.agrid
    }

    pub fn bodies(&self) -> &[CrispConvexSet] {
        &self.bodies
    }

    pub fn level(&self, k: usize) -> &CrispConvexSet {
        &self.bodies[k]
    }

    /// Support set (level 0).
    pub fn support_set(&self) -> &CrispConvexSet {
        &self.bodies[0]
    }

    pub fn core(&self) -> &CrispConvexSet {
        &self.bodies[self.bodies.len() - 1]
    }

    /// True when every level is a single point within `tol`.
    pub fn is_singleton(&self, tol: f64) -> bool {
        self.bodies.iter().all(|b| b.width() <= tol)
    }

    pub(crate) fn check_compatible(&self, other: &FuzzySet) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if self.agrid != other.agrid {
            return Err(Error::GridMismatch("fuzzy sets use different alpha grids".into()));
        }
        Ok(())
    }
}
