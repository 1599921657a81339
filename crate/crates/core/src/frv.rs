//! Fuzzy random variables as finite weighted atom lists: Aumann expectation,
//! centering, `Δ₂`, expected squared `d₂`, and sample generators.
//!
//! "Almost surely" means "for every atom": zero-weight atoms are not allowed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::translate;
use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::grid::{AlphaGrid, DirectionGrid};
use crate::set::{default_tolerance, CrispConvexSet, FuzzySet, Point};
use crate::support::{d2, eval_support, gsteiner, SupportSurface};

const WEIGHT_TOL: f64 = 1e-12;

/// Seed of the deterministic sample generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

/// Empirical law of a fuzzy random variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FrvSample {
    weights: Vec<f64>,
    values: Vec<FuzzySet>,
}

impl FrvSample {
    pub fn new(atoms: Vec<(f64, FuzzySet)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidSample("a sample needs at least one atom".into()));
        }
        let (weights, values): (Vec<f64>, Vec<FuzzySet>) = atoms.into_iter().unzip();
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidSample(format!("atom {i} has weight {w}; weights must be positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidSample(format!("weights sum to {total}, expected 1")));
        }
        for v in &values[1..] {
            values[0].check_compatible(v)?;
        }
        Ok(Self { weights, values })
    }

    /// Equal weights `1/n`.
    pub fn uniform(values: Vec<FuzzySet>) -> Result<Self> {
        let n = values.len();
        Self::new(values.into_iter().map(|v| (1.0 / n as f64, v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[FuzzySet] {
        &self.values
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, &FuzzySet)> {
        self.weights.iter().copied().zip(&self.values)
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn agrid(&self) -> &AlphaGrid {
        self.values[0].agrid()
    }

    /// Same weights, new values (one per atom).
    pub fn with_values(&self, values: Vec<FuzzySet>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::InvalidSample(format!("{} values for {} atoms", values.len(), self.len())));
        }
        Self::new(self.weights.iter().copied().zip(values).collect())
    }

    /// Support surfaces of all atoms.
    pub fn surfaces(&self, dgrid: &DirectionGrid) -> Result<Vec<SupportSurface>> {
        self.values.iter().map(|v| eval_support(v, dgrid)).collect()
    }

    /// `Σ_i w_i gs(X_i)`.
    pub fn mean_gsteiner(&self) -> Point {
        self.atoms()
            .fold(Point::zeros(self.dim()), |acc, (w, v)| acc.add(&gsteiner(v).scale(w)))
    }
}

/// Aumann expectation: the level-wise weighted Minkowski average of the atoms.
/// Its support function is the weighted average of the atoms' support functions.
pub fn aumann_expectation(x: &FrvSample) -> FuzzySet {
    let agrid = x.agrid().clone();
    let bodies = (0..agrid.len())
        .map(|k| match x.values[0].level(k) {
            CrispConvexSet::Interval { .. } => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for (w, v) in x.atoms() {
                    if let CrispConvexSet::Interval { lo: a, hi: b } = v.level(k) {
                        lo += w * a;
                        hi += w * b;
                    }
                }
                CrispConvexSet::Interval { lo, hi }
            }
            CrispConvexSet::Polygon(_) => {
                let polys = x.atoms().filter_map(|(w, v)| match v.level(k) {
                    CrispConvexSet::Polygon(p) => Some((w, p)),
                    CrispConvexSet::Interval { .. } => None,
                });
                CrispConvexSet::Polygon(Polygon::weighted_sum(polys))
            }
        })
        .collect();
    FuzzySet::from_parts_unchecked(agrid, bodies)
}

/// Centered sample `X̃ = X ⊕ 1_{-gs(X)}` and the removed Steiner points.
pub fn center(x: &FrvSample) -> Result<(FrvSample, Vec<Point>)> {
    let mut values = Vec::with_capacity(x.len());
    let mut shifts = Vec::with_capacity(x.len());
    for v in x.values() {
        let gs = gsteiner(v);
        values.push(translate(v, &gs.scale(-1.0))?);
        shifts.push(gs);
    }
    Ok((x.with_values(values)?, shifts))
}

fn check_coupled(x: &FrvSample, y: &FrvSample) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidSample(format!("coupled samples need equal atom counts ({} vs {})", x.len(), y.len())));
    }
    if let Some(i) = (0..x.len()).find(|&i| (x.weights[i] - y.weights[i]).abs() > WEIGHT_TOL) {
        return Err(Error::InvalidSample(format!("atom {i} has different weights in the coupled samples")));
    }
    Ok(())
}

/// `Δ₂(X, Y) = E d₂(X, Y)` for samples coupled atom by atom.
pub fn delta2(x: &FrvSample, y: &FrvSample, dgrid: &DirectionGrid) -> Result<f64> {
    check_coupled(x, y)?;
    let mut total = 0.0;
    for (i, (w, a)) in x.atoms().enumerate() {
        a.check_compatible(&y.values[i])?;
        total += w * d2(&eval_support(a, dgrid)?, &eval_support(&y.values[i], dgrid)?)?;
    }
    Ok(total)
}

/// `E[d₂(X, B)²]`.
pub fn expected_sq_d2(x: &FrvSample, b: &FuzzySet, dgrid: &DirectionGrid) -> Result<f64> {
    x.values[0].check_compatible(b)?;
    let hb = eval_support(b, dgrid)?;
    let mut total = 0.0;
    for (w, a) in x.atoms() {
        let d = d2(&eval_support(a, dgrid)?, &hb)?;
        total += w * d * d;
    }
    Ok(total)
}

/// Standard normal variates by Marsaglia's polar method.
pub(crate) struct PolarNormal {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl PolarNormal {
    pub(crate) fn new(seed: RngSeed) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed.0), spare: None }
    }

    pub(crate) fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u: f64 = self.rng.random_range(-1.0..1.0);
            let v: f64 = self.rng.random_range(-1.0..1.0);
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// `n` equally weighted atoms `M ⊕ 1_{ξ_i}` with `ξ_i` i.i.d. `N(0, σ² I)`.
///
/// Deterministic given `seed` (ChaCha8 stream, polar method).
pub fn gen_gaussian_translation(m: &FuzzySet, sigma: f64, n: usize, seed: RngSeed) -> Result<FrvSample> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidConfig(format!("sigma must be nonnegative, got {sigma}")));
    }
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let gs = gsteiner(m);
    if gs.norm() > default_tolerance(m.dim()) {
        return Err(Error::ShapeNotCentered { norm: gs.norm() });
    }
    let mut normal = PolarNormal::new(seed);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let xi: Vec<f64> = (0..m.dim()).map(|_| sigma * normal.next()).collect();
        values.push(translate(m, &Point::new(xi)?)?);
    }
    FrvSample::uniform(values)
}

/// Atoms `1_{[-ω_i, ω_i]}` with `ω_i = (i - 1/2)/n`, uniform weights.
pub fn gen_interval_family(n: usize, agrid: &AlphaGrid) -> Result<FrvSample> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let values = (1..=n)
        .map(|i| {
            let w = (i as f64 - 0.5) / n as f64;
            FuzzySet::crisp(agrid.clone(), CrispConvexSet::Interval { lo: -w, hi: w })
        })
        .collect();
    FrvSample::uniform(values)
}
