//! Hukuhara sets of fuzzy random variables: membership, the projection
//! `C_X`, the decomposition `X = 1_{gs(X)} ⊕ C_X ⊕ Y`, the translation
//! criterion and falsification probes for maximality.

use crate::arith::{hukuhara_difference, minkowski, translate, Difference};
use crate::error::{Error, Result};
use crate::frv::{aumann_expectation, center, expected_sq_d2, FrvSample};
use crate::grid::DirectionGrid;
use crate::qp::{self, Row, SolverControl};
use crate::set::{default_tolerance, CrispConvexSet, FuzzySet, Point};
use crate::support::{d2_sets, gsteiner, reconstruct, SupportSurface, Violation};

/// Whether `X_i ⊖ B` exists for one atom, with the failed checks if not.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomCertificate {
    pub atom: usize,
    pub exists: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HukuharaMembership {
    /// `gs_ok` and every atom difference exists.
    pub verdict: bool,
    pub per_atom: Vec<AtomCertificate>,
    pub gs_ok: bool,
    /// `|gs(B)|`.
    pub gs_norm: f64,
}

impl HukuharaMembership {
    /// Fraction of the atoms (by count) whose difference exists.
    pub fn existing_fraction(&self) -> f64 {
        self.per_atom.iter().filter(|c| c.exists).count() as f64 / self.per_atom.len() as f64
    }
}

/// Is `B` in `H_X`: centered, and `X_i ⊖ B` exists for every atom.
pub fn membership(b: &FuzzySet, x: &FrvSample, dgrid: &DirectionGrid, tol: f64) -> Result<HukuharaMembership> {
    x.values()[0].check_compatible(b)?;
    let gs_norm = gsteiner(b).norm();
    let gs_ok = gs_norm <= tol;
    let mut per_atom = Vec::with_capacity(x.len());
    for (atom, v) in x.values().iter().enumerate() {
        let cert = match hukuhara_difference(v, b, dgrid, tol)? {
            Difference::Exists(_) => AtomCertificate { atom, exists: true, violations: Vec::new() },
            Difference::Missing(violations) => AtomCertificate { atom, exists: false, violations },
        };
        per_atom.push(cert);
    }
    let verdict = gs_ok && per_atom.iter().all(|c| c.exists);
    Ok(HukuharaMembership { verdict, per_atom, gs_ok, gs_norm })
}

/// Controls of the `C_X` projection solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    pub max_iterations: usize,
    /// Optimality tolerance on the solver's multipliers (scaled units).
    pub objective_tol: f64,
    /// Bounds narrower than this become equalities; also the tolerance used
    /// to rebuild `C` and `Y` from support values.
    pub feasibility_tol: f64,
    /// Steps shorter than this count as zero.
    pub step_floor: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        Self { max_iterations: 20_000, objective_tol: 1e-12, feasibility_tol: 1e-9, step_floor: 1e-13 }
    }
}

impl ProjectionConfig {
    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if self.max_iterations == 0
            || !positive(self.objective_tol)
            || !positive(self.feasibility_tol)
            || !positive(self.step_floor)
        {
            return Err(Error::InvalidConfig(format!("tolerances and the iteration cap must be positive: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    pub c: FuzzySet,
    /// Residual atoms with `h_{Y_i} = h_{X_i} - h_C`, weights of `X`.
    pub y: FrvSample,
    /// `E[d₂(X, C)²]`.
    pub objective: f64,
    pub iterations: usize,
    /// Largest constraint violation of the solver's support values.
    pub feasibility_residual: f64,
}

/// Feasible-set rows for `B ∈ H_X` in the surface variables `b[k * n + j]`.
fn hukuhara_rows(surfaces: &[SupportSurface], dgrid: &DirectionGrid, alpha_weights: &[f64], tol: f64) -> Vec<Row> {
    let m = alpha_weights.len();
    let n = dgrid.len();
    let idx = |k: usize, j: usize| k * n + j;
    let bounded = |coeffs: Vec<(usize, f64)>, upper: f64| {
        let upper = upper.max(0.0);
        Row { coeffs, lower: 0.0, upper: if upper <= tol { 0.0 } else { upper } }
    };
    let mut rows = Vec::new();

    let functionals = dgrid.shape_functionals();
    for k in 0..m {
        for f in &functionals {
            let upper = surfaces
                .iter()
                .map(|s| f.iter().map(|(j, c)| c * s.get(k, *j)).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            rows.push(bounded(f.iter().map(|(j, c)| (idx(k, *j), *c)).collect(), upper));
        }
    }
    for k in 0..m.saturating_sub(1) {
        for j in 0..n {
            let upper = surfaces.iter().map(|s| s.get(k, j) - s.get(k + 1, j)).fold(f64::INFINITY, f64::min);
            rows.push(bounded(vec![(idx(k, j), 1.0), (idx(k + 1, j), -1.0)], upper));
        }
    }
    let steiner = dgrid.steiner_coefficients();
    for c in 0..dgrid.dim() {
        let coeffs = (0..m)
            .flat_map(|k| (0..n).map(move |j| (k, j)))
            .map(|(k, j)| (idx(k, j), alpha_weights[k] * steiner[j][c]))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        rows.push(Row { coeffs, lower: 0.0, upper: 0.0 });
    }
    rows
}

/// `C_X`: the minimizer of `E[d₂(X, B)²]` over `B ∈ H_X` on the grid.
///
/// Uses `E[d₂(X, B)²] = ‖h_B - h_{EX}‖² + E[d₂(X, EX)²]`, so this is the
/// weighted projection of `h_{EX}` onto the polyhedron of surfaces `b` with
/// `b` and every `h_{X_i} - b` valid, and `gs(b) = 0`. The set `1_0` (`b = 0`)
/// is always feasible and is the starting point.
pub fn project_cx(x: &FrvSample, dgrid: &DirectionGrid, cfg: &ProjectionConfig) -> Result<DecompositionResult> {
    cfg.validate()?;
    let center_tol = default_tolerance(x.dim());
    for (atom, v) in x.values().iter().enumerate() {
        let norm = gsteiner(v).norm();
        if norm > center_tol {
            return Err(Error::NotCentered { atom, norm });
        }
    }
    let surfaces = x.surfaces(dgrid)?;
    let agrid = x.agrid();
    let n = dgrid.len();

    let mean = SupportSurface::weighted_sum(x.weights().iter().copied().zip(&surfaces))?;
    let weights: Vec<f64> = (0..agrid.len() * n).map(|i| agrid.weights()[i / n] * dgrid.weights()[i % n]).collect();
    let rows = hukuhara_rows(&surfaces, dgrid, agrid.weights(), cfg.feasibility_tol);
    let ctl = SolverControl {
        max_iterations: cfg.max_iterations,
        multiplier_tol: cfg.objective_tol,
        step_floor: cfg.step_floor,
    };
    let sol = qp::solve(&weights, mean.values(), &rows, &vec![0.0; weights.len()], ctl)?;

    let hc = SupportSurface::from_flat(dgrid.clone(), agrid.clone(), sol.x);
    let rebuild_tol = cfg.feasibility_tol.max(sol.residual * 10.0);
    let c = reconstruct(&hc, rebuild_tol)?;
    let y_values = surfaces
        .iter()
        .map(|s| reconstruct(&s.sub(&hc)?, rebuild_tol))
        .collect::<Result<Vec<_>>>()?;
    let y = x.with_values(y_values)?;
    let objective = expected_sq_d2(x, &c, dgrid)?;
    Ok(DecompositionResult { c, y, objective, iterations: sol.iterations, feasibility_residual: sol.residual })
}

/// Centers `X`, projects, and returns the result with the removed `gs(X_i)`.
///
/// For every atom, `translate(C ⊕ Y_i, gs_i) = X_i` within tolerance.
pub fn decompose(x: &FrvSample, dgrid: &DirectionGrid, cfg: &ProjectionConfig) -> Result<(DecompositionResult, Vec<Point>)> {
    let (centered, trace) = center(x)?;
    Ok((project_cx(&centered, dgrid, cfg)?, trace))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranslationReport {
    /// `d₂(E X, C_{X̃} ⊕ 1_{E gs(X)}) <= tol`.
    pub verdict: bool,
    pub d2_gap: f64,
    /// Largest level-0 width over the residual atoms `Y_i`.
    pub max_residual_width: f64,
    /// The residual-width route: every `Y_i` is a singleton within `tol`.
    pub residuals_singleton: bool,
    pub decomposition: DecompositionResult,
}

/// Is `X` a translation `M ⊕ 1_ξ`: compares `E X` with `C_{X̃} ⊕ 1_{E gs(X)}`.
pub fn is_translation(x: &FrvSample, tol: f64, dgrid: &DirectionGrid, cfg: &ProjectionConfig) -> Result<TranslationReport> {
    let (res, trace) = decompose(x, dgrid, cfg)?;
    let mean_gs = x
        .weights()
        .iter()
        .zip(&trace)
        .fold(Point::zeros(x.dim()), |acc, (w, g)| acc.add(&g.scale(*w)));
    let predicted = translate(&res.c, &mean_gs)?;
    let d2_gap = d2_sets(&aumann_expectation(x), &predicted, dgrid)?;
    let max_residual_width = res.y.values().iter().map(|v| v.support_set().width()).fold(0.0, f64::max);
    Ok(TranslationReport {
        verdict: d2_gap <= tol,
        d2_gap,
        max_residual_width,
        residuals_singleton: max_residual_width <= tol,
        decomposition: res,
    })
}

/// An enlargement of `C` that stayed in `H_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeWitness {
    /// Levels `0..=level` were dilated.
    pub level: usize,
    /// Grid direction of the dilating segment.
    pub direction: usize,
    pub enlarged: FuzzySet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalityReport {
    /// No probe survived. A falsification test, not a proof.
    pub maximal: bool,
    pub probes: usize,
    pub witnesses: Vec<ProbeWitness>,
}

/// Dilates levels `0..=k` of `C` by the centered segment
/// `[-step u_j, step u_j]` for every level `k` and grid direction `j` (one
/// per antipodal pair) and checks whether the result stays in `H_X`.
///
/// The segment is symmetric, so probes keep `gs = 0` and stay nested while
/// strictly containing `C`.
pub fn maximality_probe(
    c: &FuzzySet,
    x: &FrvSample,
    probe_step: f64,
    dgrid: &DirectionGrid,
    tol: f64,
) -> Result<MaximalityReport> {
    if !(probe_step > 0.0) || !probe_step.is_finite() {
        return Err(Error::InvalidConfig(format!("probe step must be positive, got {probe_step}")));
    }
    let base = membership(c, x, dgrid, tol)?;
    if !base.verdict {
        let failed = base.per_atom.iter().filter(|a| !a.exists).count();
        return Err(Error::Infeasible(format!(
            "|gs| = {:.3e}, {failed} atoms without a difference",
            base.gs_norm
        )));
    }
    let mut witnesses = Vec::new();
    let mut probes = 0;
    for j in 0..dgrid.len() {
        if dgrid.antipode(j).is_some_and(|a| a < j) {
            continue;
        }
        let u = dgrid.direction(j);
        let segment = match c.dim() {
            1 => CrispConvexSet::Interval { lo: -probe_step, hi: probe_step },
            _ => CrispConvexSet::polygon(vec![
                [-probe_step * u[0], -probe_step * u[1]],
                [probe_step * u[0], probe_step * u[1]],
            ])?,
        };
        for k in 0..c.agrid().len() {
            probes += 1;
            let bodies = c
                .bodies()
                .iter()
                .enumerate()
                .map(|(i, b)| if i <= k { b.minkowski(&segment) } else { Ok(b.clone()) })
                .collect::<Result<Vec<_>>>()?;
            let enlarged = FuzzySet::from_parts_unchecked(c.agrid().clone(), bodies);
            if membership(&enlarged, x, dgrid, tol)?.verdict {
                witnesses.push(ProbeWitness { level: k, direction: j, enlarged });
            }
        }
    }
    Ok(MaximalityReport { maximal: witnesses.is_empty(), probes, witnesses })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    /// False only when the expectation is a singleton but some atom is not.
    pub consistent: bool,
    /// The expectation is a singleton within `tol`.
    pub applicable: bool,
    /// First atom that is not a singleton.
    pub witness: Option<usize>,
}

/// A sample whose expectation is a singleton must consist of singletons.
pub fn degenerate_expectation_check(x: &FrvSample, tol: f64) -> DegeneracyReport {
    degenerate_expectation_check_with(x, &aumann_expectation(x), tol)
}

/// [`degenerate_expectation_check`] against a claimed expectation, so that
/// inconsistent inputs can be detected.
pub fn degenerate_expectation_check_with(x: &FrvSample, expectation: &FuzzySet, tol: f64) -> DegeneracyReport {
    if !expectation.is_singleton(tol) {
        return DegeneracyReport { consistent: true, applicable: false, witness: None };
    }
    let witness = x.values().iter().position(|v| !v.is_singleton(tol));
    DegeneracyReport { consistent: witness.is_none(), applicable: true, witness }
}

/// `C ⊕ Y_i` translated back by `gs_i` for every atom.
pub fn recompose(res: &DecompositionResult, trace: &[Point]) -> Result<Vec<FuzzySet>> {
    res.y
        .values()
        .iter()
        .zip(trace)
        .map(|(y, g)| translate(&minkowski(&res.c, y)?, g))
        .collect()
}

/// `E[d₂(X, C)²]` through the expectation: `‖h_C - h_{EX}‖² + E[d₂(X, EX)²]`.
pub fn bias_variance_split(x: &FrvSample, b: &FuzzySet, dgrid: &DirectionGrid) -> Result<(f64, f64)> {
    let ex = aumann_expectation(x);
    let bias = d2_sets(b, &ex, dgrid)?;
    Ok((bias * bias, expected_sq_d2(x, &ex, dgrid)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frv::gen_interval_family;
    use crate::grid::AlphaGrid;
    use crate::support::dinf;

    fn agrid() -> AlphaGrid {
        AlphaGrid::uniform(4).unwrap()
    }

    fn crisp(lo: f64, hi: f64) -> FuzzySet {
        FuzzySet::crisp(agrid(), CrispConvexSet::interval(lo, hi).unwrap())
    }

    fn tri(a: f64) -> FuzzySet {
        let g = agrid();
        let bodies = g.levels().iter().map(|al| CrispConvexSet::interval(-a * (1.0 - al), a * (1.0 - al)).unwrap()).collect();
        FuzzySet::new(g, bodies).unwrap()
    }

    #[test]
    fn zero_is_always_a_member() {
        let g = DirectionGrid::one_dim();
        let x = gen_interval_family(20, &agrid()).unwrap();
        let zero = crisp(0.0, 0.0);
        assert!(membership(&zero, &x, &g, 1e-9).unwrap().verdict);
    }

    #[test]
    fn expectation_of_interval_family_is_not_a_member() {
        let g = DirectionGrid::one_dim();
        let x = gen_interval_family(100, &agrid()).unwrap();
        let m = membership(&aumann_expectation(&x), &x, &g, 1e-9).unwrap();
        assert!(!m.verdict && m.gs_ok);
        assert!((m.existing_fraction() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_atom_projects_to_itself() {
        let g = DirectionGrid::one_dim();
        let f = tri(0.8);
        let x = FrvSample::uniform(vec![f.clone()]).unwrap();
        let res = project_cx(&x, &g, &ProjectionConfig::default()).unwrap();
        assert!(dinf(&res.c, &f).unwrap() < 1e-12);
        assert!(res.y.values()[0].is_singleton(1e-12));
        assert!(res.objective < 1e-20);
    }

    #[test]
    fn not_centered_is_rejected() {
        let g = DirectionGrid::one_dim();
        let x = FrvSample::uniform(vec![crisp(0.0, 1.0)]).unwrap();
        assert!(matches!(project_cx(&x, &g, &ProjectionConfig::default()), Err(Error::NotCentered { atom: 0, .. })));
    }

    #[test]
    fn singleton_decomposition() {
        let g = DirectionGrid::one_dim();
        let v = Point::from(0.6);
        let x = FrvSample::uniform(vec![FuzzySet::point(agrid(), &v)]).unwrap();
        let (res, trace) = decompose(&x, &g, &ProjectionConfig::default()).unwrap();
        assert!(res.c.is_singleton(0.0) && gsteiner(&res.c).norm() < 1e-15);
        assert!(res.y.values()[0].is_singleton(0.0));
        assert_eq!(trace, vec![v]);
    }

    #[test]
    fn shifted_interval_family_projects_to_the_half_interval() {
        let g = DirectionGrid::one_dim();
        let n = 50;
        let values = (1..=n)
            .map(|i| {
                let w = (i as f64 - 0.5) / n as f64;
                crisp(-w - 0.5, w + 0.5)
            })
            .collect();
        let x = FrvSample::uniform(values).unwrap();
        let res = project_cx(&x, &g, &ProjectionConfig::default()).unwrap();
        // the narrowest atom bounds C by width 1 + 1/n
        let w = 0.5 + 0.5 / n as f64;
        assert!(dinf(&res.c, &crisp(-w, w)).unwrap() < 1e-12);
        let probe = maximality_probe(&res.c, &x, 1e-3, &g, 1e-9).unwrap();
        assert!(probe.maximal);
        let half = crate::arith::scale(0.5, &res.c).unwrap();
        let probe = maximality_probe(&half, &x, 1e-2, &g, 1e-9).unwrap();
        assert!(!probe.maximal && !probe.witnesses.is_empty());
    }

    #[test]
    fn degeneracy_checks() {
        let pts = FrvSample::uniform(vec![
            FuzzySet::point(agrid(), &Point::from(0.1)),
            FuzzySet::point(agrid(), &Point::from(0.5)),
        ])
        .unwrap();
        let r = degenerate_expectation_check(&pts, 1e-12);
        assert!(r.consistent && r.applicable);
        let fam = gen_interval_family(10, &agrid()).unwrap();
        let r = degenerate_expectation_check(&fam, 1e-12);
        assert!(r.consistent && !r.applicable);
        let claimed = FuzzySet::point(agrid(), &Point::from(0.0));
        let r = degenerate_expectation_check_with(&fam, &claimed, 1e-12);
        assert!(!r.consistent && r.witness == Some(0));
    }
}
