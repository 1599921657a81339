//! JSON documents for fuzzy sets, samples and decomposition reports, plus
//! CSV dumps of support surfaces.
//!
//! Documents carry their grids explicitly; nothing is defaulted on parse.
//! Numbers are written at full precision, so 1-D documents roundtrip exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frv::{gen_gaussian_translation, gen_interval_family, FrvSample, RngSeed};
use crate::grid::{AlphaGrid, DirectionGrid};
use crate::hukuhara::{DecompositionResult, ProjectionConfig};
use crate::set::{CrispConvexSet, FuzzySet, Point};
use crate::support::{eval_support, SupportSurface};

const DOC_WEIGHT_TOL: f64 = 1e-9;

/// One level body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyDocument {
    Interval([f64; 2]),
    Polygon(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzySetDocument {
    pub dimension: usize,
    pub alpha_levels: Vec<f64>,
    pub alpha_weights: Vec<f64>,
    pub bodies: Vec<BodyDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDocument {
    pub weight: f64,
    pub bodies: Vec<BodyDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Sample generators usable in place of explicit atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeneratorDocument {
    /// Atoms `1_{[-ω_i, ω_i]}`, `ω_i = (i - 1/2)/n`.
    Interval { n: usize },
    /// Atoms `shape ⊕ 1_ξ`, `ξ ~ N(0, sigma² I)`.
    Gaussian { n: usize, sigma: f64, seed: u64, shape: Vec<BodyDocument> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrvDocument {
    pub dimension: usize,
    pub alpha_levels: Vec<f64>,
    pub alpha_weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomDocument>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorDocument>,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn body_from_document(dim: usize, body: &BodyDocument, level: usize, alpha: f64) -> Result<CrispConvexSet> {
    let at = |msg: String| Error::Parse(format!("level {level} (alpha {alpha}): {msg}"));
    match (dim, body) {
        (1, BodyDocument::Interval([lo, hi])) => CrispConvexSet::interval(*lo, *hi).map_err(|e| at(e.to_string())),
        (2, BodyDocument::Polygon(v)) => CrispConvexSet::polygon(v.clone()).map_err(|e| at(e.to_string())),
        (1, BodyDocument::Polygon(_)) => Err(at("polygon body in a 1-dimensional document".into())),
        (2, BodyDocument::Interval(_)) => Err(at("interval body in a 2-dimensional document".into())),
        _ => Err(Error::Parse(format!("dimension must be 1 or 2, got {dim}"))),
    }
}

fn body_to_document(body: &CrispConvexSet) -> BodyDocument {
    match body {
        CrispConvexSet::Interval { lo, hi } => BodyDocument::Interval([*lo, *hi]),
        CrispConvexSet::Polygon(p) => BodyDocument::Polygon(p.vertices().to_vec()),
    }
}

fn alpha_grid(levels: &[f64], weights: &[f64]) -> Result<AlphaGrid> {
    AlphaGrid::new(levels.to_vec(), weights.to_vec()).map_err(|e| Error::Parse(e.to_string()))
}

fn fuzzy_from_bodies(dim: usize, agrid: &AlphaGrid, bodies: &[BodyDocument]) -> Result<FuzzySet> {
    if bodies.len() != agrid.len() {
        return Err(Error::Parse(format!("{} bodies for {} alpha levels", bodies.len(), agrid.len())));
    }
    let levels = agrid.levels();
    let parsed = bodies
        .iter()
        .enumerate()
        .map(|(k, b)| body_from_document(dim, b, k, levels[k]))
        .collect::<Result<Vec<_>>>()?;
    FuzzySet::new(agrid.clone(), parsed).map_err(|e| match e {
        Error::NotNested { outer, inner, excess } => Error::Parse(format!(
            "not nested: level {inner} (alpha {}) is not contained in level {outer} (alpha {}), excess {excess:.3e}",
            levels[inner], levels[outer]
        )),
        other => Error::Parse(other.to_string()),
    })
}

impl FuzzySetDocument {
    pub fn from_fuzzy(f: &FuzzySet, label: Option<String>) -> Self {
        Self {
            dimension: f.dim(),
            alpha_levels: f.agrid().levels().to_vec(),
            alpha_weights: f.agrid().weights().to_vec(),
            bodies: f.bodies().iter().map(body_to_document).collect(),
            label,
        }
    }

    pub fn to_fuzzy(&self) -> Result<FuzzySet> {
        let agrid = alpha_grid(&self.alpha_levels, &self.alpha_weights)?;
        fuzzy_from_bodies(self.dimension, &agrid, &self.bodies)
    }
}

impl FrvDocument {
    pub fn from_sample(x: &FrvSample) -> Self {
        let atoms = x
            .atoms()
            .map(|(weight, v)| AtomDocument { weight, bodies: v.bodies().iter().map(body_to_document).collect(), label: None })
            .collect();
        Self {
            dimension: x.dim(),
            alpha_levels: x.agrid().levels().to_vec(),
            alpha_weights: x.agrid().weights().to_vec(),
            atoms: Some(atoms),
            generator: None,
        }
    }

    /// Builds the sample, running the generator stanza if present.
    /// Explicit weights summing to `1 ± 1e-9` are renormalized.
    pub fn to_sample(&self) -> Result<FrvSample> {
        let agrid = alpha_grid(&self.alpha_levels, &self.alpha_weights)?;
        match (&self.atoms, &self.generator) {
            (Some(_), Some(_)) => Err(Error::Parse("'atoms' and 'generator' are mutually exclusive".into())),
            (None, None) => Err(Error::Parse("document needs either 'atoms' or 'generator'".into())),
            (Some(atoms), None) => {
                if atoms.is_empty() {
                    return Err(Error::Parse("'atoms' is empty".into()));
                }
                let total: f64 = atoms.iter().map(|a| a.weight).sum();
                if !((total - 1.0).abs() <= DOC_WEIGHT_TOL) {
                    return Err(Error::Parse(format!("atom weights sum to {total}, expected 1")));
                }
                let mut values = Vec::with_capacity(atoms.len());
                for (i, a) in atoms.iter().enumerate() {
                    if !(a.weight > 0.0) {
                        return Err(Error::Parse(format!("atom {i} has non-positive weight {}", a.weight)));
                    }
                    let f = fuzzy_from_bodies(self.dimension, &agrid, &a.bodies)
                        .map_err(|e| Error::Parse(format!("atom {i}: {}", strip_parse(&e))))?;
                    values.push((a.weight / total, f));
                }
                FrvSample::new(values).map_err(|e| Error::Parse(e.to_string()))
            }
            (None, Some(GeneratorDocument::Interval { n })) => {
                if self.dimension != 1 {
                    return Err(Error::Parse("the interval family is 1-dimensional".into()));
                }
                gen_interval_family(*n, &agrid).map_err(|e| Error::Parse(e.to_string()))
            }
            (None, Some(GeneratorDocument::Gaussian { n, sigma, seed, shape })) => {
                let m = fuzzy_from_bodies(self.dimension, &agrid, shape)
                    .map_err(|e| Error::Parse(format!("shape: {}", strip_parse(&e))))?;
                gen_gaussian_translation(&m, *sigma, *n, RngSeed(*seed))
            }
        }
    }
}

fn strip_parse(e: &Error) -> String {
    match e {
        Error::Parse(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn parse_fuzzy_document(text: &str) -> Result<FuzzySetDocument> {
    serde_json::from_str(text).map_err(syntax)
}

/// Parses and validates a fuzzy-set document.
pub fn parse_fuzzy(text: &str) -> Result<FuzzySet> {
    parse_fuzzy_document(text)?.to_fuzzy()
}

pub fn parse_frv_document(text: &str) -> Result<FrvDocument> {
    serde_json::from_str(text).map_err(syntax)
}

pub fn parse_frv(text: &str) -> Result<FrvSample> {
    parse_frv_document(text)?.to_sample()
}

pub fn emit_fuzzy(f: &FuzzySet, label: Option<String>) -> String {
    to_json(&FuzzySetDocument::from_fuzzy(f, label))
}

pub fn emit_frv(x: &FrvSample) -> String {
    to_json(&FrvDocument::from_sample(x))
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Echo of the projection controls in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub max_iterations: usize,
    pub objective_tol: f64,
    pub feasibility_tol: f64,
    pub step_floor: f64,
    pub directions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub c: FuzzySetDocument,
    pub y: FrvDocument,
    pub objective: f64,
    pub iterations: usize,
    pub feasibility_residual: f64,
    pub gs_trace: Vec<Vec<f64>>,
    pub config: ConfigDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DecompositionReport {
    pub fn new(
        result: &DecompositionResult,
        trace: &[Point],
        cfg: &ProjectionConfig,
        dgrid: &DirectionGrid,
        seed: Option<u64>,
    ) -> Self {
        Self {
            c: FuzzySetDocument::from_fuzzy(&result.c, None),
            y: FrvDocument::from_sample(&result.y),
            objective: result.objective,
            iterations: result.iterations,
            feasibility_residual: result.feasibility_residual,
            gs_trace: trace.iter().map(|p| p.coords().to_vec()).collect(),
            config: ConfigDocument {
                max_iterations: cfg.max_iterations,
                objective_tol: cfg.objective_tol,
                feasibility_tol: cfg.feasibility_tol,
                step_floor: cfg.step_floor,
                directions: dgrid.len(),
            },
            seed,
        }
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("formatted float parses");
    // avoid emitting negative zero
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Rounds every number in a JSON value; integers are left alone.
pub fn round_json(value: &mut serde_json::Value, digits: usize) {
    match value {
        serde_json::Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_significant(x, digits)) {
                    *n = r;
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(|v| round_json(v, digits)),
        serde_json::Value::Object(map) => map.values_mut().for_each(|v| round_json(v, digits)),
        _ => {}
    }
}

/// Serializes `value` as pretty JSON, optionally rounded.
pub fn to_json_rounded<T: Serialize>(value: &T, digits: Option<usize>) -> String {
    let mut v = serde_json::to_value(value).expect("documents serialize");
    if let Some(d) = digits {
        round_json(&mut v, d);
    }
    to_json(&v)
}

/// CSV rows `alpha,direction,u1[,u2],value`, one per level and direction.
pub fn surface_csv(s: &SupportSurface, digits: Option<usize>) -> String {
    let fmt = |x: f64| match digits {
        Some(d) => round_significant(x, d).to_string(),
        None => x.to_string(),
    };
    let dgrid = s.dgrid();
    let mut out = String::from(if dgrid.dim() == 1 { "alpha,direction,u1,value\n" } else { "alpha,direction,u1,u2,value\n" });
    for (k, alpha) in s.agrid().levels().iter().enumerate() {
        for j in 0..dgrid.len() {
            let u: Vec<String> = dgrid.direction(j).iter().map(|c| fmt(*c)).collect();
            let _ = writeln!(out, "{},{j},{},{}", fmt(*alpha), u.join(","), fmt(s.get(k, j)));
        }
    }
    out
}

/// Writes `path` (JSON report) and the CSV dump of `h_C` next to it with
/// extension `csv`. Returns the CSV path.
pub fn emit_report(report: &DecompositionReport, c_surface: &SupportSurface, path: &Path, digits: Option<usize>) -> std::io::Result<PathBuf> {
    std::fs::write(path, to_json_rounded(report, digits))?;
    let csv = path.with_extension("csv");
    std::fs::write(&csv, surface_csv(c_surface, digits))?;
    Ok(csv)
}

/// Support surface of `C` for [`emit_report`].
pub fn report_surface(result: &DecompositionResult, dgrid: &DirectionGrid) -> Result<SupportSurface> {
    eval_support(&result.c, dgrid)
}
