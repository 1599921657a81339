//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's geometry or solver: oracles work on raw
//! endpoints, vertex lists and dense linear algebra.

#![allow(dead_code)]

use hukuhara_core::{AlphaGrid, CrispConvexSet, FrvSample, FuzzySet};
use proptest::prelude::*;

pub const LATTICE: f64 = 0.125;

/// Level endpoints `(lo, hi)` of a 1-D fuzzy set in lattice units, levels 0, 1/2, 1.
pub type LatticeSet = [(i64, i64); 3];

pub fn three_levels() -> AlphaGrid {
    AlphaGrid::uniform(2).unwrap()
}

pub fn lattice_fuzzy(s: &LatticeSet) -> FuzzySet {
    let bodies = s
        .iter()
        .map(|(lo, hi)| CrispConvexSet::interval(*lo as f64 * LATTICE, *hi as f64 * LATTICE).unwrap())
        .collect();
    FuzzySet::new(three_levels(), bodies).unwrap()
}

pub fn lattice_sample(atoms: &[LatticeSet], weights: &[f64]) -> FrvSample {
    FrvSample::new(weights.iter().copied().zip(atoms.iter().map(lattice_fuzzy)).collect()).unwrap()
}

/// `Σ_i w_i d₂(X_i, B)²` for 1-D sets given by endpoints, levels weighted (1/4, 1/2, 1/4).
pub fn interval_objective(atoms: &[[(f64, f64); 3]], weights: &[f64], b: &[(f64, f64); 3]) -> f64 {
    const WA: [f64; 3] = [0.25, 0.5, 0.25];
    atoms
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            w * (0..3)
                .map(|k| WA[k] * 0.5 * ((x[k].1 - b[k].1).powi(2) + (x[k].0 - b[k].0).powi(2)))
                .sum::<f64>()
        })
        .sum()
}

fn to_real(s: &LatticeSet) -> [(f64, f64); 3] {
    s.map(|(lo, hi)| (lo as f64 * LATTICE, hi as f64 * LATTICE))
}

/// `X ⊖ B` exists for lattice endpoints: each level of `B` is at most as wide
/// and the level-wise differences stay nested.
pub fn lattice_difference_exists(x: &LatticeSet, b: &LatticeSet) -> bool {
    let d: Vec<(i64, i64)> = (0..3).map(|k| (x[k].0 - b[k].0, x[k].1 - b[k].1)).collect();
    d.iter().all(|(lo, hi)| lo <= hi) && (0..2).all(|k| d[k].0 <= d[k + 1].0 && d[k + 1].1 <= d[k].1)
}

/// Exhaustive search over nested, centered lattice sets `B` with every
/// `X_i ⊖ B` defined. Returns the smallest objective and its argmin.
pub fn lattice_search(atoms: &[LatticeSet], weights: &[f64]) -> (f64, LatticeSet) {
    let r = atoms.iter().flat_map(|a| a.iter().flat_map(|(lo, hi)| [lo.abs(), hi.abs()])).max().unwrap();
    let real: Vec<[(f64, f64); 3]> = atoms.iter().map(to_real).collect();
    let mut best = (f64::INFINITY, [(0, 0); 3]);
    for lo0 in -r..=r {
        for lo1 in lo0..=r {
            for lo2 in lo1..=r {
                for hi2 in lo2..=r {
                    for hi1 in hi2..=r {
                        for hi0 in hi1..=r {
                            // generalized Steiner point (1/4, 1/2, 1/4 weights of midpoints) is zero
                            if (lo0 + hi0) + 2 * (lo1 + hi1) + (lo2 + hi2) != 0 {
                                continue;
                            }
                            let b = [(lo0, hi0), (lo1, hi1), (lo2, hi2)];
                            if !atoms.iter().all(|x| lattice_difference_exists(x, &b)) {
                                continue;
                            }
                            let obj = interval_objective(&real, weights, &to_real(&b));
                            if obj < best.0 {
                                best = (obj, b);
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

/// Solves `M y = r` by Gaussian elimination with partial pivoting; `None` if singular.
pub fn dense_solve(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-10 {
            return None;
        }
        m.swap(c, p);
        r.swap(c, p);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
            r[i] -= f * r[c];
        }
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * y[j]).sum();
        y[i] = (r[i] - s) / m[i][i];
    }
    Some(y)
}

/// Exact continuous minimizer for 3-level 1-D instances by enumerating
/// active faces of the constraint polyhedron.
///
/// Variables `x = (lo_0, lo_1, lo_2, hi_0, hi_1, hi_2)`; one equality (zero
/// generalized Steiner point) and 14 one-sided rows. Every face with at most
/// five active rows is solved as an equality-constrained least-squares
/// problem; the best primal-feasible face solution is the optimum.
pub fn face_enumeration(atoms: &[[(f64, f64); 3]], weights: &[f64]) -> (f64, [(f64, f64); 3]) {
    const WA: [f64; 3] = [0.25, 0.5, 0.25];
    let lo = |k: usize| k;
    let hi = |k: usize| 3 + k;
    let min_over = |f: &dyn Fn(&[(f64, f64); 3]) -> f64| atoms.iter().map(f).fold(f64::INFINITY, f64::min);

    // rows a·x >= d
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let unit = |pairs: &[(usize, f64)]| {
        let mut a = vec![0.0; 6];
        for (i, c) in pairs {
            a[*i] += c;
        }
        a
    };
    for k in 0..3 {
        let u = min_over(&|x| x[k].1 - x[k].0).max(0.0);
        rows.push((unit(&[(hi(k), 1.0), (lo(k), -1.0)]), 0.0));
        rows.push((unit(&[(hi(k), -1.0), (lo(k), 1.0)]), -u));
    }
    for k in 0..2 {
        let nlo = min_over(&|x| x[k + 1].0 - x[k].0).max(0.0);
        rows.push((unit(&[(lo(k + 1), 1.0), (lo(k), -1.0)]), 0.0));
        rows.push((unit(&[(lo(k + 1), -1.0), (lo(k), 1.0)]), -nlo));
        let nhi = min_over(&|x| x[k].1 - x[k + 1].1).max(0.0);
        rows.push((unit(&[(hi(k), 1.0), (hi(k + 1), -1.0)]), 0.0));
        rows.push((unit(&[(hi(k), -1.0), (hi(k + 1), 1.0)]), -nhi));
    }
    let eq = unit(&[(lo(0), 1.0), (hi(0), 1.0), (lo(1), 2.0), (hi(1), 2.0), (lo(2), 1.0), (hi(2), 1.0)]);

    // objective Σ g (x - t)² up to a constant
    let mut g = [0.0; 6];
    let mut t = [0.0; 6];
    for k in 0..3 {
        g[lo(k)] = WA[k] * 0.5;
        g[hi(k)] = WA[k] * 0.5;
        t[lo(k)] = atoms.iter().zip(weights).map(|(x, w)| w * x[k].0).sum();
        t[hi(k)] = atoms.iter().zip(weights).map(|(x, w)| w * x[k].1).sum();
    }

    let mut best = (f64::INFINITY, [(0.0, 0.0); 3]);
    let n_rows = rows.len();
    for mask in 0u32..(1 << n_rows) {
        if mask.count_ones() > 5 {
            continue;
        }
        let active: Vec<usize> = (0..n_rows).filter(|i| mask & (1 << i) != 0).collect();
        let mut cons: Vec<(Vec<f64>, f64)> = vec![(eq.clone(), 0.0)];
        cons.extend(active.iter().map(|&i| rows[i].clone()));
        let size = 6 + cons.len();
        let mut m = vec![vec![0.0; size]; size];
        let mut r = vec![0.0; size];
        for i in 0..6 {
            m[i][i] = 2.0 * g[i];
            r[i] = 2.0 * g[i] * t[i];
        }
        for (c, (a, d)) in cons.iter().enumerate() {
            for i in 0..6 {
                m[i][6 + c] = -a[i];
                m[6 + c][i] = a[i];
            }
            r[6 + c] = *d;
        }
        let Some(y) = dense_solve(m, r) else { continue };
        let x = &y[..6];
        let feasible = rows.iter().all(|(a, d)| a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>() >= d - 1e-10);
        if !feasible {
            continue;
        }
        let b = [(x[0], x[3]), (x[1], x[4]), (x[2], x[5])];
        let obj = interval_objective(atoms, weights, &b);
        if obj < best.0 {
            best = (obj, b);
        }
    }
    best
}

/// Random nested lattice set with endpoints in `[-r, r]` units.
pub fn random_lattice_set(rng: &mut impl rand::Rng, r: i64, symmetric: bool) -> LatticeSet {
    loop {
        if symmetric {
            let a0 = rng.random_range(0..=r);
            let a1 = rng.random_range(0..=a0);
            let a2 = rng.random_range(0..=a1);
            return [(-a0, a0), (-a1, a1), (-a2, a2)];
        }
        let mut v: Vec<i64> = (0..6).map(|_| rng.random_range(-r..=r)).collect();
        v.sort_unstable();
        let s = [(v[0], v[5]), (v[1], v[4]), (v[2], v[3])];
        if (s[0].0 + s[0].1) + 2 * (s[1].0 + s[1].1) + (s[2].0 + s[2].1) == 0 {
            return s;
        }
    }
}

/// Support function of a vertex list.
pub fn vertex_support(vertices: &[[f64; 2]], u: [f64; 2]) -> f64 {
    vertices.iter().map(|v| v[0] * u[0] + v[1] * u[1]).fold(f64::NEG_INFINITY, f64::max)
}

/// Steiner point `(1/π) ∫ h(u) u dθ` by the rectangle rule on `n` directions.
pub fn quadrature_steiner(vertices: &[[f64; 2]], n: usize) -> [f64; 2] {
    let mut s = [0.0; 2];
    for j in 0..n {
        let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let u = [th.cos(), th.sin()];
        let h = vertex_support(vertices, u);
        s[0] += h * u[0];
        s[1] += h * u[1];
    }
    [2.0 * s[0] / n as f64, 2.0 * s[1] / n as f64]
}

/// Largest pairwise vertex distance.
pub fn vertex_diameter(vertices: &[[f64; 2]]) -> f64 {
    let mut d: f64 = 0.0;
    for a in vertices {
        for b in vertices {
            d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
        }
    }
    d
}

/// Fuzzy interval with level `k` equal to `[c - l_k, c + r_k]`, where the
/// spreads shrink by the given fractions from one level to the next.
pub fn shrinking_interval(agrid: &AlphaGrid, c: f64, l0: f64, r0: f64, shrink: &[(f64, f64)]) -> FuzzySet {
    let (mut l, mut r) = (l0, r0);
    let bodies = (0..agrid.len())
        .map(|k| {
            if k > 0 {
                l *= 1.0 - shrink[k - 1].0;
                r *= 1.0 - shrink[k - 1].1;
            }
            CrispConvexSet::interval(c - l, c + r).unwrap()
        })
        .collect();
    FuzzySet::new(agrid.clone(), bodies).unwrap()
}

/// Strategy for 1-D fuzzy sets on `agrid` with endpoints in a moderate range.
pub fn arb_fuzzy_interval(agrid: AlphaGrid) -> impl Strategy<Value = FuzzySet> {
    let m = agrid.len();
    (-2.0..2.0f64, 0.0..1.5f64, 0.0..1.5f64, prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), m - 1))
        .prop_map(move |(c, l, r, shrink)| shrinking_interval(&agrid, c, l, r, &shrink))
}

/// Nested polygon stack: level `k` is the level-0 polygon shrunk toward its
/// vertex centroid by the running product of `1 - shrink`.
pub fn shrinking_polygon(agrid: &AlphaGrid, points: &[[f64; 2]], shrink: &[f64]) -> FuzzySet {
    let hull = hukuhara_core::Polygon::hull(points).unwrap();
    let v = hull.vertices().to_vec();
    let n = v.len() as f64;
    let c = v.iter().fold([0.0, 0.0], |acc, p| [acc[0] + p[0] / n, acc[1] + p[1] / n]);
    let mut lambda = 1.0;
    let bodies = (0..agrid.len())
        .map(|k| {
            if k > 0 {
                lambda *= 1.0 - shrink[k - 1];
            }
            let pts = v.iter().map(|p| [c[0] + lambda * (p[0] - c[0]), c[1] + lambda * (p[1] - c[1])]).collect();
            CrispConvexSet::polygon(pts).unwrap()
        })
        .collect();
    FuzzySet::new(agrid.clone(), bodies).unwrap()
}

pub fn arb_fuzzy_polygon(agrid: AlphaGrid) -> impl Strategy<Value = FuzzySet> {
    let m = agrid.len();
    (prop::collection::vec((-1.5..1.5f64, -1.5..1.5f64), 3..8), prop::collection::vec(0.0..0.6f64, m - 1))
        .prop_map(move |(pts, shrink)| {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            shrinking_polygon(&agrid, &pts, &shrink)
        })
}

/// Strategy for positive weights summing to one.
pub fn arb_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1u32..10, n).prop_map(|raw| {
        let total: u32 = raw.iter().sum();
        raw.iter().map(|r| *r as f64 / total as f64).collect()
    })
}
