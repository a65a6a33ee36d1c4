//! Regulariser specifications and the executable characterisation tests.
//!
//! A regulariser Ω: B → ℝ is admissible when every consistent interpolation
//! problem has a solution whose dual element lies in the span of the
//! constraint functionals. Admissibility is equivalent to Ω being
//! nondecreasing along tangential directions, and (off a countable set of
//! jump radii) to Ω being a nondecreasing function of the norm. This module
//! ships both sides of that story:
//!
//! - [`make_admissible`] builds Ω = h∘norm from a monotone profile, and
//!   [`parse_regulariser`] compiles the expression mini-language;
//! - [`test_tangential_monotonicity`] and [`test_radial_symmetry`] are
//!   refutation-style samplers: a pass is statistical evidence, a recorded
//!   counterexample is a proof;
//! - [`tangent_walk`] reproduces the out-and-back construction that extends
//!   the tangential bound along rays: it locates t₀ with
//!   λ·⟨J(f_t₀), f̂⟩ = ‖f_t₀‖² by bracketing and bisection;
//! - [`mollify_radial`] smooths Ω along rays with a bump supported on
//!   [−1, 0], the step that upgrades "nondecreasing along tangents" to
//!   "nondecreasing function of the norm";
//! - [`independence_check`] solves one problem under several admissible
//!   regularisers and confirms the solutions coincide with the minimal-norm
//!   interpolant.

mod blw;
mod expr;

pub use blw::{beurling_livingston_witness, BlwWitness};
pub use expr::{BinOp, EvalError, Expr, ParseError, UnaryFn};

use crate::solver::{
    minimize_over_feasible, solve_min_norm, InterpolationProblem, OracleOptions, SolverError,
};
use crate::space::{Element, PNormSpace, SpaceError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// Absolute violation threshold for the admissibility samplers; Ω values in
/// the shipped tests are O(1).
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// Tangent magnitudes each sampled direction is scaled to.
pub const TANGENT_MAGNITUDES: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

const MAX_RECORDED_COUNTEREXAMPLES: usize = 8;

#[derive(Debug, Error)]
pub enum RegulariserError {
    #[error("custom table is not nondecreasing at knot {index}")]
    NonMonotoneTable { index: usize },
    #[error("custom table needs at least one finite knot")]
    EmptyTable,
    #[error("regulariser '{text}' is not an admissible strictly increasing norm composition")]
    NotAdmissible { text: String },
    #[error("regulariser list must not be empty")]
    EmptyRegulariserList,
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("tangent walk needs lambda > 1, got {0}")]
    WalkLambda(f64),
    #[error("tangent direction vanishes after projection onto ker J(f)")]
    DegenerateTangent,
    #[error("no sign change up to the guaranteed bracket bound; this signals a bug, not a math failure")]
    BracketNotFound,
    #[error("bisection stalled at residual {residual:.3e} > tol {tol:.3e}")]
    WalkStalled { residual: f64, tol: f64 },
    #[error("mollification direction must be unit norm, got {0}")]
    NotUnitDirection(f64),
    #[error("mollification radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("quadrature order {0} rejected; need at least 2")]
    QuadratureOrder(usize),
    #[error("subspace basis must not be empty")]
    EmptyBasis,
    #[error("subspace basis is linearly dependent near vector {index}")]
    DependentBasis { index: usize },
    #[error("witness search stalled at annihilator residual {residual:.3e} > tol {tol:.3e}")]
    WitnessNotConverged { residual: f64, tol: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("solver failure: {0}")]
    Solver(#[from] SolverError),
}

/// Named monotone profile h for norm-composed regularisers.
#[derive(Debug, Clone, PartialEq)]
pub enum MonotoneFn {
    Identity,
    Square,
    ExpMinusOne,
    /// Piecewise-linear nondecreasing table over (t, h(t)) knots; values are
    /// clamped outside the knot range and equal abscissae encode jumps.
    Table(Vec<(f64, f64)>),
}

impl MonotoneFn {
    /// Validated table constructor: knots are sorted by abscissa and the
    /// values must be nondecreasing in that order.
    pub fn table(mut knots: Vec<(f64, f64)>) -> Result<Self, RegulariserError> {
        knots.retain(|(t, v)| t.is_finite() && v.is_finite());
        if knots.is_empty() {
            return Err(RegulariserError::EmptyTable);
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (index, pair) in knots.windows(2).enumerate() {
            if pair[1].1 < pair[0].1 {
                return Err(RegulariserError::NonMonotoneTable { index: index + 1 });
            }
        }
        Ok(MonotoneFn::Table(knots))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            MonotoneFn::Identity => t,
            MonotoneFn::Square => t * t,
            MonotoneFn::ExpMinusOne => t.exp() - 1.0,
            MonotoneFn::Table(knots) => {
                if t <= knots[0].0 {
                    return knots[0].1;
                }
                if t >= knots[knots.len() - 1].0 {
                    return knots[knots.len() - 1].1;
                }
                let mut upper = 1;
                while knots[upper].0 < t {
                    upper += 1;
                }
                let (t0, v0) = knots[upper - 1];
                let (t1, v1) = knots[upper];
                if t1 == t0 {
                    v1
                } else {
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }

    fn name(&self) -> String {
        match self {
            MonotoneFn::Identity => "norm".into(),
            MonotoneFn::Square => "norm^2".into(),
            MonotoneFn::ExpMinusOne => "exp(norm) - 1".into(),
            MonotoneFn::Table(knots) => format!("table[{} knots] of norm", knots.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum RegKind {
    Monotone(MonotoneFn),
    Expr(Expr),
}

/// A compiled regulariser: either a monotone composition with the norm or a
/// parsed expression over `norm` and coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulariserSpec {
    source: String,
    kind: RegKind,
    claims_admissible: bool,
}

impl RegulariserSpec {
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Metadata only: true when the spec is known (for monotone
    /// compositions) or sampled (for coordinate-free expressions) to be a
    /// nondecreasing function of the norm.
    pub fn claims_admissible(&self) -> bool {
        self.claims_admissible
    }

    pub fn eval(&self, space: &PNormSpace, f: &Element<f64>) -> Result<f64, EvalError> {
        match &self.kind {
            RegKind::Monotone(h) => Ok(h.eval(space.norm(f)?)),
            RegKind::Expr(expr) => expr.eval(space, f),
        }
    }

    /// Canonical text form; parses back to an equivalent spec for
    /// expression-backed regularisers.
    pub fn pretty(&self) -> String {
        match &self.kind {
            RegKind::Monotone(h) => h.name(),
            RegKind::Expr(expr) => expr.to_string(),
        }
    }

    /// Radial profile g(t) = Ω(t·e) probed in a one-dimensional unit-weight
    /// space, defined for coordinate-free regularisers and monotone
    /// compositions.
    fn radial_profile(&self, t: f64) -> Option<f64> {
        let space = PNormSpace::new(1, 2.0).expect("valid probe space");
        self.eval(&space, &Element::new(vec![t])).ok()
    }

    fn profile_grid() -> Vec<f64> {
        let mut ts = vec![0.0];
        let mut t = 1e-3_f64;
        while t <= 100.0 {
            ts.push(t);
            t *= 1.23;
        }
        ts
    }

    /// Sampled check that the radial profile is nondecreasing. For
    /// expressions this is a heuristic (a grid can miss a dip); for monotone
    /// compositions it holds by construction.
    pub fn radially_nondecreasing_sampled(&self) -> bool {
        if let RegKind::Expr(expr) = &self.kind {
            if expr.contains_coord() {
                return false;
            }
        }
        let grid = Self::profile_grid();
        let mut previous = f64::NEG_INFINITY;
        for t in grid {
            let Some(v) = self.radial_profile(t) else {
                return false;
            };
            if !v.is_finite() || v < previous - 1e-12 * (1.0 + previous.abs()) {
                return false;
            }
            previous = previous.max(v);
        }
        true
    }

    /// Sampled check that the radial profile is strictly increasing, the
    /// precondition of the regulariser-independence harness.
    pub fn radially_strictly_increasing_sampled(&self) -> bool {
        if !self.radially_nondecreasing_sampled() {
            return false;
        }
        let grid = Self::profile_grid();
        let mut values = grid.iter().map(|&t| self.radial_profile(t));
        let Some(Some(mut previous)) = values.next() else {
            return false;
        };
        for v in values {
            let Some(v) = v else { return false };
            if v <= previous {
                return false;
            }
            previous = v;
        }
        true
    }
}

/// Ω(f) = h(‖f‖) for a nondecreasing profile h; admissible by construction.
pub fn make_admissible(h: MonotoneFn) -> RegulariserSpec {
    RegulariserSpec {
        source: h.name(),
        claims_admissible: true,
        kind: RegKind::Monotone(h),
    }
}

/// Compile an expression; `claims_admissible` is set only when the text is a
/// coordinate-free, sampled-nondecreasing function of `norm`.
pub fn parse_regulariser(text: &str) -> Result<RegulariserSpec, ParseError> {
    let parsed = expr::parse_expr(text)?;
    let mut spec = RegulariserSpec {
        source: text.to_string(),
        kind: RegKind::Expr(parsed),
        claims_admissible: false,
    };
    spec.claims_admissible = spec.radially_nondecreasing_sampled();
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    CounterexampleFound,
}

/// A recorded violation of tangential monotonicity: a point, an exact
/// tangent at it, and the strictly decreasing Ω values.
#[derive(Debug, Clone)]
pub struct TangentialCounterexample {
    pub f: Element<f64>,
    pub tangent: Element<f64>,
    pub omega_f: f64,
    pub omega_perturbed: f64,
    /// |⟨J(f), f_T⟩|, recomputed when the counterexample is recorded.
    pub tangency: f64,
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub samples_tested: usize,
    pub counterexamples: Vec<TangentialCounterexample>,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Debug, Clone)]
pub struct RadialWitness {
    pub f: Element<f64>,
    pub g: Element<f64>,
    pub omega_f: f64,
    pub omega_g: f64,
}

#[derive(Debug, Clone)]
pub struct RadialSymmetryReport {
    pub verdict: Verdict,
    pub samples_tested: usize,
    pub witnesses: Vec<RadialWitness>,
    pub seed: u64,
    pub tol: f64,
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn random_element<R: Rng>(space: &PNormSpace, rng: &mut R) -> Element<f64> {
    Element::new((0..space.dim()).map(|_| standard_normal(rng)).collect())
}

fn random_nonzero_element<R: Rng>(space: &PNormSpace, rng: &mut R) -> Element<f64> {
    loop {
        let f = random_element(space, rng);
        if space.norm(&f).unwrap_or(0.0) > 1e-6 {
            return f;
        }
    }
}

/// Projection v − (⟨J(f), v⟩/⟨J(f), f⟩)·f, which annihilates ⟨J(f), ·⟩ by
/// construction (up to rounding).
fn project_onto_tangent_space(
    space: &PNormSpace,
    f: &Element<f64>,
    v: &Element<f64>,
) -> Result<Element<f64>, SpaceError> {
    let l = space.duality_map(f)?;
    let lv = space.pairing(&l, v)?;
    let lf = space.pairing(&l, f)?;
    Ok(v.add_scaled(-lv / lf, f))
}

/// A random unit tangent at `f`: a normal draw projected onto ker J(f) and
/// normalised to unit p-norm.
pub fn random_tangent<R: Rng>(
    space: &PNormSpace,
    f: &Element<f64>,
    rng: &mut R,
) -> Result<Element<f64>, RegulariserError> {
    if space.norm(f)? == 0.0 {
        return Err(RegulariserError::ZeroElement);
    }
    for _ in 0..64 {
        let v = random_element(space, rng);
        let tangent = project_onto_tangent_space(space, f, &v)?;
        let nt = space.norm(&tangent)?;
        if nt > 1e-9 {
            return Ok(tangent.scale(1.0 / nt));
        }
    }
    Err(RegulariserError::DegenerateTangent)
}

/// Sample the Lemma criterion Ω(f + f_T) ≥ Ω(f) over random points and exact
/// tangents at four magnitudes; refutation-only, so a pass is statistical
/// evidence while every recorded counterexample re-verifies.
pub fn test_tangential_monotonicity(
    omega: &RegulariserSpec,
    space: &PNormSpace,
    n_samples: usize,
    seed: u64,
) -> Result<AdmissibilityReport, RegulariserError> {
    let tol = ADMISSIBILITY_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();

    for _ in 0..n_samples {
        let f = random_nonzero_element(space, &mut rng);
        let omega_f = omega.eval(space, &f)?;
        let v = random_element(space, &mut rng);
        let raw_tangent = project_onto_tangent_space(space, &f, &v)?;
        let nt = space.norm(&raw_tangent)?;
        if nt < 1e-9 {
            continue;
        }
        let unit = raw_tangent.scale(1.0 / nt);
        for magnitude in TANGENT_MAGNITUDES {
            let tangent = unit.scale(magnitude);
            let omega_perturbed = omega.eval(space, &f.add(&tangent))?;
            if omega_perturbed < omega_f - tol {
                let l = space.duality_map(&f)?;
                let tangency = space.pairing(&l, &tangent)?.abs();
                let lf = space.pairing(&l, &f)?;
                if tangency <= 1e-10 * (1.0 + lf.abs())
                    && counterexamples.len() < MAX_RECORDED_COUNTEREXAMPLES
                {
                    counterexamples.push(TangentialCounterexample {
                        f: f.clone(),
                        tangent,
                        omega_f,
                        omega_perturbed,
                        tangency,
                    });
                }
            }
        }
    }

    Ok(AdmissibilityReport {
        verdict: if counterexamples.is_empty() {
            Verdict::Pass
        } else {
            Verdict::CounterexampleFound
        },
        samples_tested: n_samples,
        counterexamples,
        seed,
        tol,
    })
}

/// Sample constancy of Ω on spheres: pairs (f, g) with ‖g‖ rescaled to ‖f‖.
/// Random radii avoid the measure-zero jump set almost surely.
pub fn test_radial_symmetry(
    omega: &RegulariserSpec,
    space: &PNormSpace,
    n_samples: usize,
    seed: u64,
) -> Result<RadialSymmetryReport, RegulariserError> {
    let tol = ADMISSIBILITY_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();

    for _ in 0..n_samples {
        let f = random_nonzero_element(space, &mut rng);
        let g_raw = random_nonzero_element(space, &mut rng);
        let scale = space.norm(&f)? / space.norm(&g_raw)?;
        let g = g_raw.scale(scale);
        let omega_f = omega.eval(space, &f)?;
        let omega_g = omega.eval(space, &g)?;
        if (omega_f - omega_g).abs() > tol && witnesses.len() < MAX_RECORDED_COUNTEREXAMPLES {
            witnesses.push(RadialWitness {
                f,
                g,
                omega_f,
                omega_g,
            });
        }
    }

    Ok(RadialSymmetryReport {
        verdict: if witnesses.is_empty() {
            Verdict::Pass
        } else {
            Verdict::CounterexampleFound
        },
        samples_tested: n_samples,
        witnesses,
        seed,
        tol,
    })
}

/// Certificate of the tangent-walk root: the positive start value, the
/// bracket that contains the sign change, and the residual at the root.
#[derive(Debug, Clone)]
pub struct WalkCertificate {
    pub phi_at_zero: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    /// The unit tangent actually walked (input after projection).
    pub tangent: Element<f64>,
}

#[derive(Debug, Clone)]
pub struct TangentWalk {
    pub t0: f64,
    pub f_t0: Element<f64>,
    pub certificate: WalkCertificate,
}

/// Walk f_t = f̂ + t·f_T along a tangent until λ·⟨J(f_t), f̂⟩ = ‖f_t‖².
///
/// φ(0) = (λ−1)‖f̂‖² > 0, and φ(t) < 0 once ‖f_t‖ > λ‖f̂‖, so a sign change
/// is guaranteed; it is located by doubling and then bisection. The supplied
/// direction is projected onto ker J(f̂) and normalised before walking.
pub fn tangent_walk(
    space: &PNormSpace,
    f_hat: &Element<f64>,
    direction: &Element<f64>,
    lambda: f64,
    tol: f64,
) -> Result<TangentWalk, RegulariserError> {
    let nf = space.norm(f_hat)?;
    if nf == 0.0 {
        return Err(RegulariserError::ZeroElement);
    }
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(RegulariserError::WalkLambda(lambda));
    }
    let projected = project_onto_tangent_space(space, f_hat, direction)?;
    let nt = space.norm(&projected)?;
    if nt < 1e-12 {
        return Err(RegulariserError::DegenerateTangent);
    }
    let tangent = projected.scale(1.0 / nt);

    let phi = |t: f64| -> Result<f64, SpaceError> {
        let f_t = f_hat.add_scaled(t, &tangent);
        let j = space.duality_map(&f_t)?;
        let n_t = space.norm(&f_t)?;
        Ok(lambda * space.pairing(&j, f_hat)? - n_t * n_t)
    };

    let phi_at_zero = (lambda - 1.0) * nf * nf;

    // ‖f_t‖ ≥ t − ‖f̂‖ for a unit tangent, so φ is negative well before this
    // bound; not finding a sign change means the implementation is broken.
    let bound = 8.0 * (lambda + 1.0) * nf + 8.0;
    let mut lo = 0.0;
    let mut hi = nf.max(1e-3);
    loop {
        if phi(hi)? <= 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > bound {
            return Err(RegulariserError::BracketNotFound);
        }
    }
    let bracket = (lo, hi);

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        if hi - lo < 5e-16 * (1.0 + mid.abs()) {
            break;
        }
        if phi(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let residual = phi(mid)?.abs();
    if residual > tol {
        return Err(RegulariserError::WalkStalled { residual, tol });
    }
    Ok(TangentWalk {
        t0: mid,
        f_t0: f_hat.add_scaled(mid, &tangent),
        certificate: WalkCertificate {
            phi_at_zero,
            bracket,
            residual,
            tangent,
        },
    })
}

fn bump(t: f64) -> f64 {
    let u = 2.0 * t + 1.0;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn mollifier_normalisation(order: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("mollifier cache");
    *guard.entry(order).or_insert_with(|| {
        let (nodes, weights) = crate::quad::gauss_legendre_on(-1.0, 0.0, order);
        nodes
            .iter()
            .zip(&weights)
            .map(|(&t, &w)| w * bump(t))
            .sum()
    })
}

/// Radially mollified value Ω̃(s·f₀) = ∫ ρ(t)·Ω((s−t)·f₀) dt with the bump
/// ρ(t) ∝ exp(−1/(1−(2t+1)²)) supported on [−1, 0].
///
/// The normalisation ∫ρ = 1 is computed once per quadrature order with the
/// same rule, so constants mollify to themselves exactly; for admissible Ω
/// the result is nondecreasing in s.
pub fn mollify_radial(
    omega: &RegulariserSpec,
    space: &PNormSpace,
    direction: &Element<f64>,
    s: f64,
    order: usize,
) -> Result<f64, RegulariserError> {
    if order < 2 {
        return Err(RegulariserError::QuadratureOrder(order));
    }
    let nd = space.norm(direction)?;
    if (nd - 1.0).abs() > 1e-10 {
        return Err(RegulariserError::NotUnitDirection(nd));
    }
    if !(s >= 0.0) {
        return Err(RegulariserError::NegativeRadius(s));
    }
    let normalisation = mollifier_normalisation(order);
    let (nodes, weights) = crate::quad::gauss_legendre_on(-1.0, 0.0, order);
    let mut acc = 0.0;
    for (&t, &w) in nodes.iter().zip(&weights) {
        let density = w * bump(t) / normalisation;
        acc += density * omega.eval(space, &direction.scale(s - t))?;
    }
    Ok(acc)
}

/// Comparison of solutions of one interpolation problem across several
/// admissible regularisers and the minimal-norm route.
#[derive(Debug)]
pub struct IndependenceReport {
    pub labels: Vec<String>,
    pub solutions: Vec<Element<f64>>,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Solve min{Ω(f) : constraints} for each regulariser through the
/// null-space search and compare everything pairwise (the minimal-norm
/// solution included). Strict convexity of the norm and strictly increasing
/// profiles make the solution unique, so all routes must coincide.
pub fn independence_check(
    problem: &InterpolationProblem<f64>,
    regs: &[RegulariserSpec],
    tol: f64,
) -> Result<IndependenceReport, RegulariserError> {
    if regs.is_empty() {
        return Err(RegulariserError::EmptyRegulariserList);
    }
    for reg in regs {
        if !reg.claims_admissible() || !reg.radially_strictly_increasing_sampled() {
            return Err(RegulariserError::NotAdmissible {
                text: reg.source().to_string(),
            });
        }
    }

    let space = problem.space().clone();
    let mut labels = vec!["min-norm".to_string()];
    let mut solutions = vec![solve_min_norm(problem, 1e-9, 500)
        .map_err(RegulariserError::Solver)?
        .f0];

    for reg in regs {
        let failure: RefCell<Option<EvalError>> = RefCell::new(None);
        let solution = minimize_over_feasible(
            problem,
            |f| match reg.eval(&space, f) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::INFINITY
                }
            },
            &OracleOptions::default(),
        )?;
        // tolerate transient evaluation failures during the search, but not
        // at the returned point
        reg.eval(&space, &solution)?;
        labels.push(reg.source().to_string());
        solutions.push(solution);
    }

    let mut max_deviation = 0.0_f64;
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            let gap = space.norm(&solutions[i].sub(&solutions[j]))?;
            max_deviation = max_deviation.max(gap);
        }
    }

    Ok(IndependenceReport {
        labels,
        solutions,
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    })
}
