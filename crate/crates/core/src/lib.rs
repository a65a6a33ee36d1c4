//! Minimal-norm and regularised interpolation in finite-dimensional weighted
//! l^p spaces, with duality-map certificates of optimality.
//!
//! The crate is organised around a handful of executable facts about
//! reflexive, smooth, strictly convex spaces (1 < p < ∞):
//!
//! - [`space`]: weighted l^p geometry — norms, the bilinear pairing, and the
//!   duality mapping J with identity gauge, satisfying ⟨J(f), f⟩ = ‖f‖² and
//!   ‖J(f)‖_q = ‖f‖.
//! - [`solver`]: minimal-norm interpolation through its concave dual, with
//!   representer-form solutions carrying certificate residuals; a
//!   brute-force null-space oracle; the regularised problem and its λ → 0
//!   path back to the interpolant.
//! - [`regulariser`]: the admissibility story — Ω is admissible exactly when
//!   it is nondecreasing along tangents, equivalently a nondecreasing
//!   function of the norm. Samplers hunt for counterexamples, a tangent walk
//!   and radial mollification reproduce the constructions behind that
//!   equivalence, an independence harness confirms the solution does not
//!   depend on which admissible regulariser is used, and a witness
//!   construction realises the duality-map intersection theorem.
//! - [`rkbs`]: a quadrature-sampled reproducing kernel Banach space on
//!   [−1/2, 1/2] with Fourier features, the sinc kernel, minimal-norm
//!   interpolation and the explicit dual map.
//! - [`nonreflexive`]: the l¹ demonstrator where the span of two functionals
//!   misses the duality-map image and norming vectors escape to infinity.
//!
//! Everything is deterministic given explicit seeds, immutable after
//! construction, and safe for concurrent reads.

pub mod nonreflexive;
mod optim;
pub mod quad;
pub mod regulariser;
pub mod rkbs;
pub mod scalar;
pub mod solver;
pub mod space;

pub use scalar::Scalar;
pub use space::{Element, Functional, PNormSpace, SpaceError};

pub use solver::{
    dual_gradient, dual_objective, oracle_min_norm, regularisation_path, solve_min_norm,
    solve_regularised, verify_representer, InterpolationProblem, LossSpec, OracleOptions,
    PathPoint, RepresenterSolution, SolverError, VerificationReport,
};

pub use regulariser::{
    beurling_livingston_witness, independence_check, make_admissible, mollify_radial,
    parse_regulariser, random_tangent, tangent_walk, test_radial_symmetry,
    test_tangential_monotonicity, AdmissibilityReport, BlwWitness, EvalError,
    IndependenceReport, MonotoneFn, ParseError, RadialSymmetryReport, RegulariserError,
    RegulariserSpec, TangentWalk, Verdict,
};

pub use rkbs::{sinc, Interpolant, Rkbs1D, RkbsError, RkbsFunction};

pub use nonreflexive::{
    norming_analysis, span_peaking_scan, DemoError, L1Truncation, NormingAnalysis,
    SpanPeakingReport,
};
