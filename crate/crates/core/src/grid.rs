//! Discretization grids: unit directions on the sphere and membership levels.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

/// Finite set of unit directions with normalized quadrature weights.
///
/// In dimension 1 the grid is always `{+1, -1}` with weights `(1/2, 1/2)`.
/// In dimension 2 directions are sorted by angle in `[0, 2π)`, pairwise
/// distinct, and consecutive gaps (cyclically) are strictly below `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<[f64; 2]>,
    weights: Vec<f64>,
    angles: Vec<f64>,
}

impl DirectionGrid {
    pub fn one_dim() -> Self {
        Self {
            dim: 1,
            directions: vec![[1.0, 0.0], [-1.0, 0.0]],
            weights: vec![0.5, 0.5],
            angles: vec![0.0, PI],
        }
    }

    /// `n` equally spaced angles `2πj/n` with uniform weights.
    pub fn uniform_2d(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "a planar direction grid needs at least 3 directions, got {n}"
            )));
        }
        let angles: Vec<f64> = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        let directions = angles.iter().map(|t| [t.cos(), t.sin()]).collect();
        Ok(Self {
            dim: 2,
            directions,
            weights: vec![1.0 / n as f64; n],
            angles,
        })
    }

    /// The default grid: `{±1}` for `dim == 1`, 64 uniform directions for `dim == 2`.
    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            1 => Ok(Self::one_dim()),
            2 => Self::uniform_2d(64),
            _ => Err(Error::InvalidGrid(format!("unsupported dimension {dim}"))),
        }
    }

    pub fn new(dim: usize, directions: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if directions.len() != weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} directions but {} weights",
                directions.len(),
                weights.len()
            )));
        }
        check_weights(&weights, "direction")?;
        match dim {
            1 => {
                let expected = Self::one_dim();
                let ok = directions.len() == 2
                    && directions[0].len() == 1
                    && directions[1].len() == 1
                    && (directions[0][0] - 1.0).abs() <= UNIT_TOL
                    && (directions[1][0] + 1.0).abs() <= UNIT_TOL
                    && weights.iter().all(|w| (w - 0.5).abs() <= UNIT_TOL);
                if ok {
                    Ok(expected)
                } else {
                    Err(Error::InvalidGrid(
                        "a 1-dimensional grid must be {+1, -1} with weights (1/2, 1/2)".into(),
                    ))
                }
            }
            2 => {
                let mut dirs = Vec::with_capacity(directions.len());
                let mut angles = Vec::with_capacity(directions.len());
                for (j, d) in directions.iter().enumerate() {
                    if d.len() != 2 {
                        return Err(Error::DimensionMismatch { expected: 2, found: d.len() });
                    }
                    let norm = d[0].hypot(d[1]);
                    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
                        return Err(Error::InvalidGrid(format!(
                            "direction {j} has norm {norm}, expected 1"
                        )));
                    }
                    let mut t = d[1].atan2(d[0]);
                    if t < 0.0 {
                        t += 2.0 * PI;
                    }
                    dirs.push([d[0], d[1]]);
                    angles.push(t);
                }
                if dirs.len() < 3 {
                    return Err(Error::InvalidGrid("need at least 3 directions".into()));
                }
                for j in 1..angles.len() {
                    if angles[j] <= angles[j - 1] {
                        return Err(Error::InvalidGrid(format!(
                            "directions {} and {j} are not sorted by angle or coincide",
                            j - 1
                        )));
                    }
                }
                let grid = Self { dim: 2, directions: dirs, weights, angles };
                if grid.max_gap() >= PI {
                    return Err(Error::InvalidGrid(
                        "consecutive directions must be less than π apart".into(),
                    ));
                }
                Ok(grid)
            }
            _ => Err(Error::InvalidGrid(format!("unsupported dimension {dim}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Direction `j` as a slice of length `dim`.
    pub fn direction(&self, j: usize) -> &[f64] {
        &self.directions[j][..self.dim]
    }

    pub(crate) fn direction2(&self, j: usize) -> [f64; 2] {
        self.directions[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.angles[j]
    }

    /// Angular gap from direction `j` to its successor (cyclic).
    pub fn gap_after(&self, j: usize) -> f64 {
        let n = self.len();
        if j + 1 < n {
            self.angles[j + 1] - self.angles[j]
        } else {
            self.angles[0] + 2.0 * PI - self.angles[j]
        }
    }

    pub fn max_gap(&self) -> f64 {
        (0..self.len()).map(|j| self.gap_after(j)).fold(0.0, f64::max)
    }

    /// Index of the direction `-u_j`, if it is on the grid.
    pub fn antipode(&self, j: usize) -> Option<usize> {
        let u = self.directions[j];
        self.directions
            .iter()
            .position(|v| (v[0] + u[0]).abs() <= 1e-9 && (v[1] + u[1]).abs() <= 1e-9)
    }

    /// Upper bound on the Hausdorff distance between a convex body of the
    /// given diameter and the polygon cut out by its supporting half-planes
    /// at the grid directions: `diameter * tan(max_gap / 2) / 2`.
    ///
    /// The polygon contains the body; each of its vertices lies in the
    /// triangle spanned by the two touching points and sits at height at
    /// most `|pq| sin a sin b / sin(a + b)` above the chord, with
    /// `a + b` equal to the gap between the two normals.
    pub fn hausdorff_bound(&self, diameter: f64) -> f64 {
        if self.dim == 1 {
            return 0.0;
        }
        diameter * (0.5 * self.max_gap()).tan() / 2.0
    }

    /// Per-direction coefficients `c_j` of the linear map `b ↦ Σ_j c_j b_j`
    /// giving the Steiner point of the polygon with support values `b` on
    /// this grid (valid when `b` is grid-consistent).
    pub(crate) fn steiner_coefficients(&self) -> Vec<[f64; 2]> {
        if self.dim == 1 {
            return vec![[0.5, 0.0], [-0.5, 0.0]];
        }
        let n = self.len();
        let mut coeffs = vec![[0.0; 2]; n];
        for j in 0..n {
            // Vertex between lines j and j+1:
            // v = b_j u_j + ((b_{j+1} - b_j cos g) / sin g) t_j,
            // weighted by its exterior angle g / 2π.
            let g = self.gap_after(j);
            let w = g / (2.0 * PI);
            let u = self.directions[j];
            let t = [-u[1], u[0]];
            let (s, c) = g.sin_cos();
            let next = (j + 1) % n;
            coeffs[j][0] += w * (u[0] - c / s * t[0]);
            coeffs[j][1] += w * (u[1] - c / s * t[1]);
            coeffs[next][0] += w * t[0] / s;
            coeffs[next][1] += w * t[1] / s;
        }
        coeffs
    }

    /// Sparse coefficients of the per-level shape functional `ℓ_j(b)`.
    ///
    /// In dimension 1 there is a single functional, the interval width
    /// `b_0 + b_1`. In dimension 2, `ℓ_j` is the length of the edge with
    /// outer normal `u_j` of the polygon cut out by the half-planes
    /// `<u, y> <= b`; support values are grid-consistent iff all `ℓ_j >= 0`.
    pub(crate) fn shape_functionals(&self) -> Vec<Vec<(usize, f64)>> {
        if self.dim == 1 {
            return vec![vec![(0, 1.0), (1, 1.0)]];
        }
        let n = self.len();
        (0..n)
            .map(|j| {
                let prev = (j + n - 1) % n;
                let next = (j + 1) % n;
                let g1 = self.gap_after(prev);
                let g2 = self.gap_after(j);
                vec![
                    (prev, 1.0 / g1.sin()),
                    (j, -(g1.cos() / g1.sin() + g2.cos() / g2.sin())),
                    (next, 1.0 / g2.sin()),
                ]
            })
            .collect()
    }
}

/// Membership levels `0 = α_0 < … < α_m = 1` with quadrature weights for `∫_0^1 · dα`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    levels: Vec<f64>,
    weights: Vec<f64>,
}

impl AlphaGrid {
    /// `m + 1` uniform levels `k/m` with trapezoidal weights.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGrid("need at least one level interval (m >= 1)".into()));
        }
        let levels: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
        let h = 1.0 / m as f64;
        let weights = (0..=m)
            .map(|k| if k == 0 || k == m { 0.5 * h } else { h })
            .collect();
        Ok(Self { levels, weights })
    }

    pub fn new(levels: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidGrid("need at least the levels 0 and 1".into()));
        }
        if levels.len() != weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} levels but {} weights",
                levels.len(),
                weights.len()
            )));
        }
        if levels[0] != 0.0 || *levels.last().unwrap() != 1.0 {
            return Err(Error::InvalidGrid("levels must start at 0 and end at 1".into()));
        }
        for k in 1..levels.len() {
            if !(levels[k] > levels[k - 1]) {
                return Err(Error::InvalidGrid(format!(
                    "levels must be strictly increasing (levels {} and {k})",
                    k - 1
                )));
            }
        }
        check_weights(&weights, "level")?;
        Ok(Self { levels, weights })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of levels (`m + 1`).
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

fn check_weights(weights: &[f64], what: &str) -> Result<()> {
    if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidGrid(format!("{what} weight {j} is {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidGrid(format!("{what} weights sum to {total}, expected 1")));
    }
    Ok(())
}
