//! Command dispatch for the `hukuhara` binary.
//!
//! Every command reads JSON documents, writes JSON (or CSV) rounded to
//! [`DIGITS`] significant digits, and maps failures to a stable code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use hukuhara_core::io::{
    emit_report, parse_frv_document, parse_fuzzy, parse_fuzzy_document, report_surface, round_significant, surface_csv,
    to_json_rounded, DecompositionReport, FrvDocument, FuzzySetDocument, GeneratorDocument,
};
use hukuhara_core::{
    aumann_expectation, d2_sets, decompose, dinf, gen_gaussian_translation, gen_interval_family, hukuhara_difference,
    is_translation, membership, AlphaGrid, CrispConvexSet, Difference, DirectionGrid, FrvSample, FuzzySet,
    ProjectionConfig, RngSeed, Violation,
};
use serde_json::{json, Value};

/// Significant digits of every number the CLI prints.
pub const DIGITS: usize = 12;

pub const EXIT_OK: i32 = 0;
/// A verdict of nonexistence where existence was asked for.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] hukuhara_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Library(e) => e.code(),
            CliError::Io { .. } => "io_error",
            CliError::Usage(_) => "usage",
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "hukuhara", version, about = "Support-function tools for fuzzy sets and fuzzy random samples")]
struct Cli {
    /// Number of directions of the planar grid (ignored for 1-D data).
    #[arg(long, global = true, default_value_t = 64)]
    directions: usize,
    /// Exit 0 on negative verdicts.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Aumann expectation of a sample, as a fuzzy-set document.
    Expect {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decomposition X = C + Y: C, the residual atoms, objective and gs trace.
    Decompose {
        input: PathBuf,
        /// Report path; the support surface of C goes next to it as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Separate path for the CSV support-surface dump.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Is the fuzzy set in the Hukuhara set of the sample.
    Member {
        #[arg(long)]
        set: PathBuf,
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fuzzy Hukuhara difference LEFT - RIGHT.
    Hdiff {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the sample a random translation of a fixed shape.
    IsTranslation {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write a sample document from a generator.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of alpha levels minus one (uniform grid).
        #[arg(long, default_value_t = 20)]
        levels: usize,
        /// Fuzzy-set document of the translated shape (gaussian family);
        /// defaults to the symmetric triangular number on [-1, 1].
        #[arg(long)]
        shape: Option<PathBuf>,
        /// Write the generator stanza instead of the generated atoms.
        #[arg(long)]
        stanza: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-atom d2 and dinf and the sample distance as CSV.
    Metrics {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Interval,
    Gaussian,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 20_000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-12)]
    objective_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    feasibility_tol: f64,
    #[arg(long, default_value_t = 1e-13)]
    step_floor: f64,
}

impl SolverArgs {
    fn config(&self) -> ProjectionConfig {
        ProjectionConfig {
            max_iterations: self.max_iterations,
            objective_tol: self.objective_tol,
            feasibility_tol: self.feasibility_tol,
            step_floor: self.step_floor,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
/// Command output goes to `out` unless redirected with `--out`; diagnostics go to `err`.
pub fn run_command<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(positive) if positive || cli.lenient => EXIT_OK,
        Ok(_) => EXIT_NEGATIVE,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            EXIT_ERROR
        }
    }
}

/// Runs the command; `Ok(false)` is a negative verdict.
fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<bool> {
    match &cli.command {
        Command::Expect { input, out: path } => {
            let (_, x) = read_sample(input)?;
            let doc = FuzzySetDocument::from_fuzzy(&aumann_expectation(&x), None);
            emit(out, path.as_deref(), &to_json_rounded(&doc, Some(DIGITS)))?;
            Ok(true)
        }
        Command::Decompose { input, out: path, csv, solver } => {
            let (doc, x) = read_sample(input)?;
            let dgrid = direction_grid(x.dim(), cli.directions)?;
            let cfg = solver.config();
            let (result, trace) = decompose(&x, &dgrid, &cfg)?;
            let report = DecompositionReport::new(&result, &trace, &cfg, &dgrid, generator_seed(&doc));
            let surface = report_surface(&result, &dgrid)?;
            match path {
                Some(p) => {
                    emit_report(&report, &surface, p, Some(DIGITS)).map_err(|source| CliError::Io { path: p.clone(), source })?;
                }
                None => emit(out, None, &to_json_rounded(&report, Some(DIGITS)))?,
            }
            if let Some(c) = csv {
                write_file(c, &surface_csv(&surface, Some(DIGITS)))?;
            }
            Ok(true)
        }
        Command::Member { set, input, tol, out: path } => {
            let b = read_fuzzy(set)?;
            let (_, x) = read_sample(input)?;
            let dgrid = direction_grid(x.dim(), cli.directions)?;
            let m = membership(&b, &x, &dgrid, *tol)?;
            let atoms: Vec<Value> = m
                .per_atom
                .iter()
                .map(|c| json!({ "atom": c.atom, "exists": c.exists, "violations": violations_json(&c.violations) }))
                .collect();
            let report = json!({
                "member": m.verdict,
                "gs_centered": m.gs_ok,
                "gs_norm": m.gs_norm,
                "existing_fraction": m.existing_fraction(),
                "atoms": atoms,
            });
            emit(out, path.as_deref(), &to_json_rounded(&report, Some(DIGITS)))?;
            Ok(m.verdict)
        }
        Command::Hdiff { left, right, tol, out: path } => {
            let f = read_fuzzy(left)?;
            let g = read_fuzzy(right)?;
            let dgrid = direction_grid(f.dim(), cli.directions)?;
            match hukuhara_difference(&f, &g, &dgrid, *tol)? {
                Difference::Exists(d) => {
                    let doc = FuzzySetDocument::from_fuzzy(&d, None);
                    emit(out, path.as_deref(), &to_json_rounded(&doc, Some(DIGITS)))?;
                    Ok(true)
                }
                Difference::Missing(v) => {
                    let report = json!({ "exists": false, "violations": violations_json(&v) });
                    emit(out, path.as_deref(), &to_json_rounded(&report, Some(DIGITS)))?;
                    Ok(false)
                }
            }
        }
        Command::IsTranslation { input, tol, out: path, solver } => {
            let (_, x) = read_sample(input)?;
            let dgrid = direction_grid(x.dim(), cli.directions)?;
            let r = is_translation(&x, *tol, &dgrid, &solver.config())?;
            let report = json!({
                "translation": r.verdict,
                "d2_gap": r.d2_gap,
                "max_residual_width": r.max_residual_width,
                "residuals_singleton": r.residuals_singleton,
                "objective": r.decomposition.objective,
            });
            emit(out, path.as_deref(), &to_json_rounded(&report, Some(DIGITS)))?;
            Ok(r.verdict)
        }
        Command::Gen { family, n, sigma, seed, levels, shape, stanza, out: path } => {
            let doc = generate(*family, *n, *sigma, *seed, *levels, shape.as_deref(), *stanza)?;
            emit(out, path.as_deref(), &to_json_rounded(&doc, Some(DIGITS)))?;
            Ok(true)
        }
        Command::Metrics { left, right, out: path } => {
            let table = metrics(left, right, cli.directions)?;
            emit(out, path.as_deref(), &table)?;
            Ok(true)
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}

fn read_fuzzy(path: &Path) -> CliResult<FuzzySet> {
    Ok(parse_fuzzy(&read_text(path)?)?)
}

fn read_sample(path: &Path) -> CliResult<(FrvDocument, FrvSample)> {
    let doc = parse_frv_document(&read_text(path)?)?;
    let x = doc.to_sample()?;
    Ok((doc, x))
}

fn generator_seed(doc: &FrvDocument) -> Option<u64> {
    match &doc.generator {
        Some(GeneratorDocument::Gaussian { seed, .. }) => Some(*seed),
        _ => None,
    }
}

fn direction_grid(dim: usize, directions: usize) -> CliResult<DirectionGrid> {
    Ok(match dim {
        1 => DirectionGrid::one_dim(),
        _ => DirectionGrid::uniform_2d(directions)?,
    })
}

/// Symmetric triangular fuzzy number with α-cuts `[-(1-α), 1-α]`.
fn triangular(agrid: &AlphaGrid) -> CliResult<FuzzySet> {
    let bodies = agrid
        .levels()
        .iter()
        .map(|a| CrispConvexSet::interval(-(1.0 - a), 1.0 - a))
        .collect::<hukuhara_core::Result<Vec<_>>>()?;
    Ok(FuzzySet::new(agrid.clone(), bodies)?)
}

fn generate(
    family: Family,
    n: usize,
    sigma: f64,
    seed: u64,
    levels: usize,
    shape: Option<&Path>,
    stanza: bool,
) -> CliResult<FrvDocument> {
    let (m, generator) = match family {
        Family::Interval => {
            if shape.is_some() {
                return Err(CliError::Usage("--shape applies to the gaussian family only".into()));
            }
            (None, GeneratorDocument::Interval { n })
        }
        Family::Gaussian => {
            let m = match shape {
                Some(p) => read_fuzzy(p)?,
                None => triangular(&AlphaGrid::uniform(levels)?)?,
            };
            let bodies = FuzzySetDocument::from_fuzzy(&m, None).bodies;
            (Some(m), GeneratorDocument::Gaussian { n, sigma, seed, shape: bodies })
        }
    };
    let agrid = match &m {
        Some(m) => m.agrid().clone(),
        None => AlphaGrid::uniform(levels)?,
    };
    if stanza {
        // validate the stanza by running it once
        let doc = FrvDocument {
            dimension: m.as_ref().map_or(1, FuzzySet::dim),
            alpha_levels: agrid.levels().to_vec(),
            alpha_weights: agrid.weights().to_vec(),
            atoms: None,
            generator: Some(generator),
        };
        doc.to_sample()?;
        return Ok(doc);
    }
    let x = match &m {
        Some(m) => gen_gaussian_translation(m, sigma, n, RngSeed(seed))?,
        None => gen_interval_family(n, &agrid)?,
    };
    Ok(FrvDocument::from_sample(&x))
}

/// A sample, or a fuzzy set broadcast over the other side's atoms.
enum Operand {
    Sample(FrvSample),
    Set(FuzzySet),
}

fn read_operand(path: &Path) -> CliResult<Operand> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| hukuhara_core::Error::Parse(e.to_string()))?;
    if value.get("bodies").is_some() {
        Ok(Operand::Set(parse_fuzzy_document(&text)?.to_fuzzy()?))
    } else {
        Ok(Operand::Sample(parse_frv_document(&text)?.to_sample()?))
    }
}

/// Rows `atom,weight,d2,dinf`, then `total` with `E d2` and `max dinf`.
fn metrics(left: &Path, right: &Path, directions: usize) -> CliResult<String> {
    let (a, b) = (read_operand(left)?, read_operand(right)?);
    let pairs: Vec<(f64, &FuzzySet, &FuzzySet)> = match (&a, &b) {
        (Operand::Set(f), Operand::Set(g)) => vec![(1.0, f, g)],
        (Operand::Sample(x), Operand::Set(g)) => x.atoms().map(|(w, f)| (w, f, g)).collect(),
        (Operand::Set(f), Operand::Sample(y)) => y.atoms().map(|(w, g)| (w, f, g)).collect(),
        (Operand::Sample(x), Operand::Sample(y)) => {
            if x.len() != y.len() || x.weights().iter().zip(y.weights()).any(|(p, q)| (p - q).abs() > 1e-12) {
                return Err(hukuhara_core::Error::InvalidSample("samples are not coupled atom by atom".into()).into());
            }
            x.atoms().zip(y.values()).map(|((w, f), g)| (w, f, g)).collect()
        }
    };
    let dgrid = direction_grid(pairs[0].1.dim(), directions)?;
    let fmt = |v: f64| round_significant(v, DIGITS).to_string();
    let mut table = String::from("atom,weight,d2,dinf\n");
    let (mut mean_d2, mut max_dinf) = (0.0, 0.0f64);
    for (i, (w, f, g)) in pairs.iter().enumerate() {
        let d = d2_sets(f, g, &dgrid)?;
        let h = dinf(f, g)?;
        mean_d2 += w * d;
        max_dinf = max_dinf.max(h);
        table.push_str(&format!("{i},{},{},{}\n", fmt(*w), fmt(d), fmt(h)));
    }
    table.push_str(&format!("total,1,{},{}\n", fmt(mean_d2), fmt(max_dinf)));
    Ok(table)
}

fn violations_json(violations: &[Violation]) -> Vec<Value> {
    violations
        .iter()
        .map(|v| {
            let mut entry = json!({ "kind": v.kind(), "level": v.level() });
            let fields = match v {
                Violation::NonFinite { direction, .. } => json!({ "direction": direction }),
                Violation::NotMonotone { direction, excess, .. } => json!({ "direction": direction, "excess": excess }),
                Violation::NotNormal { direction, antipode, deficit, .. } => {
                    json!({ "direction": direction, "antipode": antipode, "deficit": deficit })
                }
                Violation::EmptyLevel { .. } => json!({}),
                Violation::Inconsistent { direction, gap, .. } => json!({ "direction": direction, "gap": gap }),
            };
            if let (Some(e), Value::Object(extra)) = (entry.as_object_mut(), fields) {
                e.extend(extra);
            }
            entry
        })
        .collect()
}
