//! Primal active-set solver for weighted least-squares projections onto a
//! polyhedron:
//!
//! ```text
//! minimize   Σ_i g_i (x_i - e_i)²
//! subject to lower_r <= a_r · x <= upper_r   for every row r
//! ```
//!
//! Work happens in the scaled variables `z = √g ⊙ x`, where the objective is
//! a plain squared distance. The working set is kept as an incrementally
//! orthogonalized basis of its (unit) constraint normals.

use crate::error::{Error, Result};

/// Sparse linear constraint `lower <= Σ c · x[i] <= upper`; `lower == upper` is an equality.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SolverControl {
    pub max_iterations: usize,
    /// Multipliers above `-multiplier_tol` count as nonnegative.
    pub multiplier_tol: f64,
    /// Steps shorter than this (in scaled variables) count as zero.
    pub step_floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Largest bound violation over all rows at `x`.
    pub residual: f64,
}

/// One-sided scaled constraint `a · z >= l` with `|a| = 1`.
struct Half {
    a: Vec<(usize, f64)>,
    l: f64,
    equality: bool,
}

impl Half {
    fn dot(&self, z: &[f64]) -> f64 {
        self.a.iter().map(|(i, c)| c * z[*i]).sum()
    }
}

/// Orthonormal basis of the working-set normals with the triangular factor
/// `R` of `A_Wᵀ = Q R` (column `c` of `R` stored as `r[c]`).
struct Basis {
    n: usize,
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl Basis {
    fn new(n: usize) -> Self {
        Self { n, q: Vec::new(), r: Vec::new() }
    }

    fn len(&self) -> usize {
        self.q.len()
    }

    /// Appends a sparse normal; `false` (and no change) when it is dependent.
    fn push(&mut self, a: &[(usize, f64)]) -> bool {
        let mut v = vec![0.0; self.n];
        for (i, c) in a {
            v[*i] += c;
        }
        let mut coeffs = vec![0.0; self.q.len() + 1];
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for (c, q) in self.q.iter().enumerate() {
                let p = dot(q, &v);
                coeffs[c] += p;
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= 1e-9 {
            return false;
        }
        for vi in &mut v {
            *vi /= norm;
        }
        coeffs[self.q.len()] = norm;
        self.q.push(v);
        self.r.push(coeffs);
        true
    }

    fn truncate(&mut self, len: usize) {
        self.q.truncate(len);
        self.r.truncate(len);
    }

    /// `v - Q Qᵀ v`.
    fn project_out(&self, v: &mut [f64]) {
        for _ in 0..2 {
            for q in &self.q {
                let p = dot(q, v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
    }

    /// Least-squares `λ` with `A_Wᵀ λ ≈ v`, i.e. `R λ = Qᵀ v`.
    fn multipliers(&self, v: &[f64]) -> Vec<f64> {
        let k = self.len();
        let y: Vec<f64> = self.q.iter().map(|q| dot(q, v)).collect();
        let mut lambda = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = y[i];
            for j in i + 1..k {
                s -= self.r[j][i] * lambda[j];
            }
            lambda[i] = s / self.r[i][i];
        }
        lambda
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residual(rows: &[Row], x: &[f64]) -> f64 {
    rows.iter()
        .map(|r| {
            let v: f64 = r.coeffs.iter().map(|(i, c)| c * x[*i]).sum();
            (r.lower - v).max(v - r.upper).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// Solves the projection starting from the feasible point `x0`.
///
/// Weights must be nonnegative; zero weights are floored at a tiny multiple
/// of the largest so the minimizer stays unique.
pub(crate) fn solve(weights: &[f64], target: &[f64], rows: &[Row], x0: &[f64], ctl: SolverControl) -> Result<Solution> {
    let n = weights.len();
    let gmax = weights.iter().cloned().fold(0.0, f64::max);
    if !(gmax > 0.0) || target.len() != n || x0.len() != n {
        return Err(Error::InvalidConfig("projection needs positive weights and matching dimensions".into()));
    }
    let sqrt_g: Vec<f64> = weights.iter().map(|g| g.max(1e-12 * gmax).sqrt()).collect();

    let mut halves = Vec::new();
    for row in rows {
        let scaled: Vec<(usize, f64)> = row.coeffs.iter().map(|(i, c)| (*i, c / sqrt_g[*i])).collect();
        let norm = scaled.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let unit = |sign: f64| scaled.iter().map(|(i, c)| (*i, sign * c / norm)).collect::<Vec<_>>();
        if row.lower == row.upper {
            halves.push(Half { a: unit(1.0), l: row.lower / norm, equality: true });
            continue;
        }
        if row.lower.is_finite() {
            halves.push(Half { a: unit(1.0), l: row.lower / norm, equality: false });
        }
        if row.upper.is_finite() {
            halves.push(Half { a: unit(-1.0), l: -row.upper / norm, equality: false });
        }
    }

    let ze: Vec<f64> = target.iter().zip(&sqrt_g).map(|(e, s)| e * s).collect();
    let mut z: Vec<f64> = x0.iter().zip(&sqrt_g).map(|(x, s)| x * s).collect();

    let mut basis = Basis::new(n);
    let mut working: Vec<usize> = Vec::new();
    let mut in_working = vec![false; halves.len()];
    for (h, half) in halves.iter().enumerate() {
        // dependent equalities are implied by the ones kept
        if half.equality && basis.push(&half.a) {
            working.push(h);
            in_working[h] = true;
        }
        if half.equality {
            in_working[h] = true;
        }
    }
    let n_eq = working.len();
    // blocking rows found dependent on the working set; skipped until the next release
    let mut shadowed: Vec<usize> = Vec::new();

    let mut iterations = 0;
    loop {
        if iterations >= ctl.max_iterations {
            let x: Vec<f64> = z.iter().zip(&sqrt_g).map(|(v, s)| v / s).collect();
            return Err(Error::SolverDidNotConverge { iterations, residual: residual(rows, &x) });
        }
        iterations += 1;

        let grad: Vec<f64> = z.iter().zip(&ze).map(|(a, b)| a - b).collect();
        let mut p: Vec<f64> = grad.iter().map(|v| -v).collect();
        basis.project_out(&mut p);
        let pnorm = dot(&p, &p).sqrt();

        if pnorm <= ctl.step_floor {
            // stationary on the working face: ∇ = A_Wᵀ λ
            let lambda = basis.multipliers(&grad);
            let worst = (n_eq..working.len())
                .filter(|&c| lambda[c] < -ctl.multiplier_tol)
                .min_by(|&a, &b| lambda[a].total_cmp(&lambda[b]));
            match worst {
                None => break,
                Some(c) => {
                    for h in shadowed.drain(..) {
                        in_working[h] = false;
                    }
                    in_working[working[c]] = false;
                    let rest: Vec<usize> = working.drain(c..).skip(1).collect();
                    basis.truncate(c);
                    for h in rest {
                        if basis.push(&halves[h].a) {
                            working.push(h);
                        } else {
                            in_working[h] = false;
                        }
                    }
                }
            }
            continue;
        }

        let mut step = 1.0;
        let mut blocking = None;
        for (h, half) in halves.iter().enumerate() {
            if in_working[h] {
                continue;
            }
            let ap = half.dot(&p);
            if ap >= -1e-14 * pnorm {
                continue;
            }
            let slack = (half.dot(&z) - half.l).max(0.0);
            let t = slack / -ap;
            if t < step {
                step = t;
                blocking = Some(h);
            }
        }
        for (zi, pi) in z.iter_mut().zip(&p) {
            *zi += step * pi;
        }
        if let Some(h) = blocking {
            if basis.push(&halves[h].a) {
                working.push(h);
            } else {
                shadowed.push(h);
            }
            in_working[h] = true;
        }
    }

    let x: Vec<f64> = z.iter().zip(&sqrt_g).map(|(v, s)| v / s).collect();
    let residual = residual(rows, &x);
    Ok(Solution { x, iterations, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SolverControl {
        SolverControl { max_iterations: 1000, multiplier_tol: 1e-12, step_floor: 1e-13 }
    }

    fn row(coeffs: &[(usize, f64)], lower: f64, upper: f64) -> Row {
        Row { coeffs: coeffs.to_vec(), lower, upper }
    }

    #[test]
    fn unconstrained_hits_target() {
        let s = solve(&[1.0, 2.0], &[3.0, -1.0], &[], &[0.0, 0.0], ctl()).unwrap();
        assert!((s.x[0] - 3.0).abs() < 1e-14 && (s.x[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn box_projection_clips() {
        let rows = [row(&[(0, 1.0)], -1.0, 1.0), row(&[(1, 1.0)], -1.0, 1.0)];
        let s = solve(&[1.0, 1.0], &[3.0, 0.5], &rows, &[0.0, 0.0], ctl()).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-14 && (s.x[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn weighted_halfplane_projection() {
        // KKT: x = 2 - λ/2, y = 2 - λ/8, x + y = 1, so λ = 24/5
        let rows = [row(&[(0, 1.0), (1, 1.0)], f64::NEG_INFINITY, 1.0)];
        let s = solve(&[1.0, 4.0], &[2.0, 2.0], &rows, &[0.0, 0.0], ctl()).unwrap();
        assert!((s.x[0] + 0.4).abs() < 1e-12, "{:?}", s.x);
        assert!((s.x[1] - 1.4).abs() < 1e-12, "{:?}", s.x);
    }

    #[test]
    fn dependent_equalities_are_tolerated() {
        let rows = [
            row(&[(0, 1.0), (1, -1.0)], 0.0, 0.0),
            row(&[(0, 2.0), (1, -2.0)], 0.0, 0.0),
            row(&[(1, 1.0), (0, -1.0)], 0.0, 0.0),
        ];
        let s = solve(&[1.0, 1.0], &[1.0, 3.0], &rows, &[0.0, 0.0], ctl()).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_start_releases_constraints() {
        // many constraints active at the start, optimum in the interior of most
        let rows = [
            row(&[(0, 1.0)], 0.0, f64::INFINITY),
            row(&[(1, 1.0)], 0.0, f64::INFINITY),
            row(&[(0, 1.0), (1, 1.0)], 0.0, f64::INFINITY),
            row(&[(0, 1.0), (1, -1.0)], f64::NEG_INFINITY, 0.0),
        ];
        let s = solve(&[1.0, 1.0], &[3.0, 1.0], &rows, &[0.0, 0.0], ctl()).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12, "{:?}", s.x);
        assert!(s.residual < 1e-14);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let rows = [row(&[(0, 1.0)], -1.0, 1.0)];
        let tight = SolverControl { max_iterations: 1, ..ctl() };
        assert!(matches!(
            solve(&[1.0], &[5.0], &rows, &[0.0], tight),
            Err(Error::SolverDidNotConverge { .. })
        ));
    }
}
