//! Support-function calculus for fuzzy convex sets in one and two dimensions,
//! finite-sample fuzzy random variables, and the decomposition of a fuzzy
//! random variable into a random translation, a deterministic shape `C_X`
//! and a residual.
//!
//! Fuzzy sets are stacks of nested convex level bodies on an [`AlphaGrid`];
//! support functions are sampled on a [`DirectionGrid`].

mod arith;
mod error;
mod frv;
mod geometry;
mod grid;
mod hukuhara;
pub mod io;
mod qp;
mod set;
mod support;

pub use arith::{embed_point, hukuhara_diff_crisp, hukuhara_diff_fuzzy, hukuhara_difference, minkowski, scale, translate, Difference};
pub use error::{Error, Result};
pub use frv::{aumann_expectation, center, delta2, expected_sq_d2, gen_gaussian_translation, gen_interval_family, FrvSample, RngSeed};
pub use geometry::{Polygon, Vec2};
pub use grid::{AlphaGrid, DirectionGrid};
pub use hukuhara::{
    bias_variance_split, decompose, degenerate_expectation_check, degenerate_expectation_check_with, is_translation,
    maximality_probe, membership, project_cx, recompose, AtomCertificate, DecompositionResult, DegeneracyReport,
    HukuharaMembership, MaximalityReport, ProbeWitness, ProjectionConfig, TranslationReport,
};
pub use set::{default_tolerance, CrispConvexSet, FuzzySet, Point};
pub use support::{
    d2, d2_sets, dinf, eval_support, eval_support_body, gsteiner, is_valid_support, reconstruct, steiner, SupportSurface,
    ValidityReport, Violation,
};
