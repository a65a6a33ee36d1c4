//! Minimal-norm and regularised interpolation.
//!
//! The interpolation problem is: minimise ‖f‖ subject to ⟨L_i, f⟩ = y_i for
//! finitely many functionals. It is solved through its concave Fenchel dual
//!
//!   D(c) = Re⟨c, y⟩ − ½·‖Σ_i c_i L_i‖_q²,
//!
//! maximised over the dual coefficients c by damped Newton steps with a
//! finite-difference Hessian. The gradient of D is exactly the constraint
//! residual y − A·J_q(Σ c_i L_i), so on convergence the recovered point
//! f₀ = J_q(Σ c_i L_i) is feasible, and Σ c_i L_i ∈ J(f₀) holds by
//! construction: that combination peaks at f₀ and matches its norm, which is
//! the optimality certificate carried by [`RepresenterSolution`].
//!
//! A brute-force oracle ([`oracle_min_norm`]) minimises over an explicit
//! null-space parametrisation of the feasible set and is kept independent of
//! the dual route. [`solve_regularised`] and [`regularisation_path`] handle
//! the penalised variant E(Af, y) + λ·Ω(f) and its λ → 0 limit.

use crate::optim;
use crate::regulariser::RegulariserSpec;
use crate::scalar::{pack, unpack, Scalar};
use crate::space::{Element, Functional, PNormSpace, SpaceError};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use thiserror::Error;

/// Relative cutoff for rank decisions in the orthogonal decomposition of the
/// constraint matrix.
pub const RANK_TOL: f64 = 1e-10;

/// Scale factor for declaring a constraint system inconsistent: the least
/// squares residual is compared against this times (1 + ‖y‖_∞).
const INFEASIBILITY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("problem is infeasible: least-squares constraint residual {residual:.3e} exceeds {tol:.3e}")]
    Infeasible { residual: f64, tol: f64 },
    #[error("no convergence after {iterations} iterations: worst certificate residual {residual:.3e} > {tol:.3e}")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },
    #[error("null-space dimension {dim} exceeds the oracle limit {limit}")]
    NullSpaceTooLarge { dim: usize, limit: usize },
    #[error("a problem needs at least one constraint")]
    NoConstraints,
    #[error("functional {index} is zero")]
    ZeroFunctional { index: usize },
    #[error("targets length {got} does not match the {expected} functionals")]
    TargetCount { expected: usize, got: usize },
    #[error("coefficient vector length {got} does not match the {expected} functionals")]
    CoefficientCount { expected: usize, got: usize },
    #[error("regularisation parameter {0} must be strictly positive")]
    InvalidLambda(f64),
    #[error("lambda list must be non-empty, positive and strictly decreasing")]
    LambdaOrder,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("regulariser evaluation failed: {0}")]
    Regulariser(#[from] crate::regulariser::EvalError),
}

/// Constraint data: m functionals and their target values on one space.
#[derive(Debug, Clone)]
pub struct InterpolationProblem<S: Scalar> {
    space: PNormSpace,
    functionals: Vec<Functional<S>>,
    targets: Vec<S>,
}

impl<S: Scalar> InterpolationProblem<S> {
    pub fn new(
        space: PNormSpace,
        functionals: Vec<Functional<S>>,
        targets: Vec<S>,
    ) -> Result<Self, SolverError> {
        if functionals.is_empty() {
            return Err(SolverError::NoConstraints);
        }
        if targets.len() != functionals.len() {
            return Err(SolverError::TargetCount {
                expected: functionals.len(),
                got: targets.len(),
            });
        }
        for (index, l) in functionals.iter().enumerate() {
            if l.len() != space.dim() {
                return Err(SpaceError::DimensionMismatch {
                    dim: space.dim(),
                    got: l.len(),
                }
                .into());
            }
            if l.is_zero() {
                return Err(SolverError::ZeroFunctional { index });
            }
        }
        Ok(Self {
            space,
            functionals,
            targets,
        })
    }

    pub fn space(&self) -> &PNormSpace {
        &self.space
    }

    pub fn functionals(&self) -> &[Functional<S>] {
        &self.functionals
    }

    pub fn targets(&self) -> &[S] {
        &self.targets
    }

    /// Number of constraints m.
    pub fn constraint_count(&self) -> usize {
        self.functionals.len()
    }

    /// Σ_i c_i L_i.
    pub fn combined(&self, c: &[S]) -> Result<Functional<S>, SolverError> {
        if c.len() != self.functionals.len() {
            return Err(SolverError::CoefficientCount {
                expected: self.functionals.len(),
                got: c.len(),
            });
        }
        Ok(Functional::combine(c, &self.functionals))
    }

    /// Constraint values (⟨L_i, f⟩)_i.
    pub fn apply(&self, f: &Element<S>) -> Result<Vec<S>, SolverError> {
        self.functionals
            .iter()
            .map(|l| self.space.pairing(l, f).map_err(SolverError::from))
            .collect()
    }

    /// max_i |⟨L_i, f⟩ − y_i|.
    pub fn feasibility_residual(&self, f: &Element<S>) -> Result<f64, SolverError> {
        let values = self.apply(f)?;
        Ok(values
            .iter()
            .zip(&self.targets)
            .map(|(&v, &y)| (v - y).modulus())
            .fold(0.0, f64::max))
    }

    /// Constraint matrix with the pairing weights folded in, so that plain
    /// matrix multiplication realises f ↦ (⟨L_i, f⟩)_i.
    fn matrix(&self) -> DMatrix<S> {
        let w = self.space.weights();
        DMatrix::from_fn(self.functionals.len(), self.space.dim(), |i, j| {
            self.functionals[i].coords()[j] * S::from_real(w[j])
        })
    }
}

/// Solution of the minimal-norm problem in representer form, with the
/// residuals that certify Σ c_i L_i ∈ J(f₀).
#[derive(Debug, Clone)]
pub struct RepresenterSolution<S: Scalar> {
    pub f0: Element<S>,
    /// Dual coefficients over the constraint functionals (complex when the
    /// space is complex: the real span of the realified constraints is the
    /// complex span of the L_i).
    pub c: Vec<S>,
    /// max_i |⟨L_i, f₀⟩ − y_i|.
    pub feasibility_residual: f64,
    /// Hölder gap of Σ c_i L_i at f₀.
    pub peaking_residual: f64,
    /// |‖Σ c_i L_i‖_q − ‖f₀‖_p|.
    pub norm_match_residual: f64,
    pub iterations: usize,
    pub tol: f64,
}

/// One recomputed certificate residual.
#[derive(Debug, Clone, Copy)]
pub struct ResidualCheck {
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualCheck {
    fn new(value: f64, tol: f64) -> Self {
        Self {
            value,
            tol,
            pass: value <= tol,
        }
    }
}

/// Independent re-verification of a [`RepresenterSolution`]; recomputes all
/// three residuals from the solution data alone.
#[derive(Debug, Clone, Copy)]
pub struct VerificationReport {
    pub feasibility: ResidualCheck,
    pub peaking: ResidualCheck,
    pub norm_match: ResidualCheck,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.feasibility.pass && self.peaking.pass && self.norm_match.pass
    }
}

/// Error functional of the regularised problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossSpec {
    /// E(v, y) = Σ_i |v_i − y_i|².
    Square,
    /// E(v, y) = Σ_i |v_i − y_i|.
    Absolute,
}

impl LossSpec {
    pub fn eval<S: Scalar>(&self, values: &[S], targets: &[S]) -> f64 {
        values
            .iter()
            .zip(targets)
            .map(|(&v, &y)| {
                let d = (v - y).modulus();
                match self {
                    LossSpec::Square => d * d,
                    LossSpec::Absolute => d,
                }
            })
            .sum()
    }
}

/// Concave dual objective D(c) = Re⟨c, y⟩ − ½‖Σ c_i L_i‖_q².
pub fn dual_objective<S: Scalar>(
    problem: &InterpolationProblem<S>,
    c: &[S],
) -> Result<f64, SolverError> {
    let combined = problem.combined(c)?;
    let dual_norm = problem.space.dual_norm(&combined)?;
    let mut inner = S::zero();
    for (&ci, &yi) in c.iter().zip(problem.targets()) {
        inner += ci * yi;
    }
    Ok(inner.real() - 0.5 * dual_norm * dual_norm)
}

/// Gradient of the dual objective: the constraint residual
/// y − A·J_q(Σ c_i L_i).
///
/// For complex scalars the steepest-ascent direction in the real
/// parametrisation of c is the componentwise conjugate of this residual.
pub fn dual_gradient<S: Scalar>(
    problem: &InterpolationProblem<S>,
    c: &[S],
) -> Result<Vec<S>, SolverError> {
    let combined = problem.combined(c)?;
    let f = problem.space.inverse_duality_map(&combined)?;
    let values = problem.apply(&f)?;
    Ok(problem
        .targets()
        .iter()
        .zip(values)
        .map(|(&y, v)| y - v)
        .collect())
}

/// Least-squares particular solution plus rank data from the SVD of the
/// constraint matrix; detects inconsistent systems.
struct FeasiblePoint<S: Scalar> {
    particular: Vec<S>,
    rank: usize,
    matrix: DMatrix<S>,
}

fn feasible_point<S: Scalar>(
    problem: &InterpolationProblem<S>,
) -> Result<FeasiblePoint<S>, SolverError> {
    let a = problem.matrix();
    let y = DVector::from_vec(problem.targets().to_vec());
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().fold(0.0_f64, |m, &s| m.max(s));
    let eps = if sigma_max > 0.0 {
        RANK_TOL * sigma_max
    } else {
        RANK_TOL
    };
    let rank = svd.rank(eps);
    let particular = svd
        .solve(&y, eps)
        .expect("SVD factors were requested");
    let residual = (&a * &particular - &y)
        .iter()
        .map(|v| v.modulus())
        .fold(0.0, f64::max);
    let y_scale = problem
        .targets()
        .iter()
        .map(|t| t.modulus())
        .fold(0.0, f64::max);
    let tol = INFEASIBILITY_TOL * (1.0 + y_scale);
    if residual > tol {
        return Err(SolverError::Infeasible { residual, tol });
    }
    Ok(FeasiblePoint {
        particular: particular.iter().copied().collect(),
        rank,
        matrix: a,
    })
}

/// Solve the minimal-norm interpolation problem by maximising the dual.
///
/// On success every certificate residual is at most `tol`; the coefficient
/// scaling ‖Σ c_i L_i‖_q = ‖f₀‖_p comes out of the dual route directly
/// because f₀ = J_q(Σ c_i L_i) and J_q is an isometry.
pub fn solve_min_norm<S: Scalar>(
    problem: &InterpolationProblem<S>,
    tol: f64,
    max_iter: usize,
) -> Result<RepresenterSolution<S>, SolverError> {
    feasible_point(problem)?;

    let m = problem.constraint_count();
    let value = |packed: &[f64]| -> f64 {
        let c = unpack::<S>(packed);
        dual_objective(problem, &c).unwrap_or(f64::NEG_INFINITY)
    };
    let gradient = |packed: &[f64]| -> Vec<f64> {
        let c = unpack::<S>(packed);
        let residual = dual_gradient(problem, &c).expect("validated problem");
        let conjugated: Vec<S> = residual.into_iter().map(|r| r.conjugate()).collect();
        pack(&conjugated)
    };

    // |r_i| ≤ √components · max packed component, so this packed tolerance
    // guarantees the scalar residual bound checked below.
    let packed_tol = 0.999 * tol / (S::COMPONENTS as f64).sqrt();
    let start = vec![0.0; m * S::COMPONENTS];
    let result = optim::newton_max(start, &value, &gradient, packed_tol, max_iter);

    let c = unpack::<S>(&result.x);
    let combined = problem.combined(&c)?;
    let f0 = problem.space.inverse_duality_map(&combined)?;
    let feasibility_residual = problem.feasibility_residual(&f0)?;
    let peaking_residual = problem.space.peaking_gap(&combined, &f0)?.max(0.0);
    let norm_match_residual =
        (problem.space.dual_norm(&combined)? - problem.space.norm(&f0)?).abs();

    let worst = feasibility_residual
        .max(peaking_residual)
        .max(norm_match_residual);
    if worst > tol {
        return Err(SolverError::NonConvergence {
            iterations: result.iterations,
            residual: worst,
            tol,
        });
    }
    Ok(RepresenterSolution {
        f0,
        c,
        feasibility_residual,
        peaking_residual,
        norm_match_residual,
        iterations: result.iterations,
        tol,
    })
}

/// Recompute all three certificate residuals of `solution` from scratch.
pub fn verify_representer<S: Scalar>(
    solution: &RepresenterSolution<S>,
    problem: &InterpolationProblem<S>,
    tol: f64,
) -> Result<VerificationReport, SolverError> {
    let combined = problem.combined(&solution.c)?;
    let feasibility = problem.feasibility_residual(&solution.f0)?;
    let peaking = problem.space.peaking_gap(&combined, &solution.f0)?;
    let norm_match =
        (problem.space.dual_norm(&combined)? - problem.space.norm(&solution.f0)?).abs();
    Ok(VerificationReport {
        feasibility: ResidualCheck::new(feasibility, tol),
        peaking: ResidualCheck::new(peaking, tol),
        norm_match: ResidualCheck::new(norm_match, tol),
    })
}

/// Options for the brute-force feasible-set searches.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Odd number of grid nodes per dimension at each refinement level.
    pub grid_points: usize,
    /// Number of coarse-to-fine levels.
    pub grid_levels: usize,
    /// Largest admissible null-space dimension (counted in scalar
    /// coordinates of the space's field).
    pub max_null_dim: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grid_points: 9,
            grid_levels: 16,
            max_null_dim: 3,
        }
    }
}

fn hermitian_dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x.conjugate() * y;
    }
    acc
}

fn euclidean_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter()
        .map(|x| x.modulus_squared())
        .sum::<f64>()
        .sqrt()
}

/// Hermitian-orthonormal basis of the null space of `a`, built by modified
/// Gram–Schmidt over the conjugated rows followed by greedy completion with
/// standard basis vectors. A vector is a null vector of `a` exactly when it
/// is orthogonal to every conjugated row.
fn null_space_basis<S: Scalar>(a: &DMatrix<S>) -> Vec<Vec<S>> {
    let (m, n) = a.shape();
    let mut basis: Vec<Vec<S>> = Vec::new();

    let orthogonalise = |v: &mut Vec<S>, basis: &[Vec<S>]| {
        // two passes keep the completion orthogonal at working precision
        for _ in 0..2 {
            for b in basis {
                let coeff = hermitian_dot(b, v);
                for (vj, &bj) in v.iter_mut().zip(b) {
                    *vj -= coeff * bj;
                }
            }
        }
    };

    for i in 0..m {
        let mut v: Vec<S> = (0..n).map(|j| a[(i, j)].conjugate()).collect();
        let scale = euclidean_norm(&v);
        orthogonalise(&mut v, &basis);
        let remaining = euclidean_norm(&v);
        if remaining > RANK_TOL.max(RANK_TOL * scale) {
            let inv = S::from_real(1.0 / remaining);
            basis.push(v.into_iter().map(|x| x * inv).collect());
        }
    }
    let rank = basis.len();

    while basis.len() < n {
        let mut best: Option<(f64, Vec<S>)> = None;
        for j in 0..n {
            let mut v = vec![S::zero(); n];
            v[j] = S::one();
            orthogonalise(&mut v, &basis);
            let remaining = euclidean_norm(&v);
            if best.as_ref().is_none_or(|(r, _)| remaining > *r) {
                best = Some((remaining, v));
            }
        }
        let (remaining, v) = best.expect("n > 0");
        let inv = S::from_real(1.0 / remaining);
        basis.push(v.into_iter().map(|x| x * inv).collect());
    }

    basis.split_off(rank)
}

/// Minimise an arbitrary objective over the feasible set {f : A f = y},
/// parametrised as f_part + N·z over a null-space basis N, by coarse grid
/// refinement, simplex descent and a pattern-search polish.
pub(crate) fn minimize_over_feasible<S, F>(
    problem: &InterpolationProblem<S>,
    objective: F,
    options: &OracleOptions,
) -> Result<Element<S>, SolverError>
where
    S: Scalar,
    F: Fn(&Element<S>) -> f64,
{
    let feasible = feasible_point(problem)?;
    let n = problem.space.dim();
    let null_dim = n - feasible.rank;
    let limit = options.max_null_dim / S::COMPONENTS;
    if null_dim > limit {
        return Err(SolverError::NullSpaceTooLarge {
            dim: null_dim,
            limit,
        });
    }
    if null_dim == 0 {
        return Ok(Element::new(feasible.particular));
    }

    let null_basis = null_space_basis(&feasible.matrix);
    debug_assert_eq!(null_basis.len(), null_dim);

    let assemble = |packed: &[f64]| -> Element<S> {
        let z = unpack::<S>(packed);
        let mut coords = feasible.particular.clone();
        for (zc, direction) in z.iter().zip(&null_basis) {
            for (acc, &d) in coords.iter_mut().zip(direction) {
                *acc += *zc * d;
            }
        }
        Element::new(coords)
    };
    let cost = |packed: &[f64]| objective(&assemble(packed));

    // The minimiser satisfies ‖f‖_{p,w} ≤ ‖f_part‖_{p,w}, which bounds the
    // Euclidean length of z through the weighted-norm embedding constant;
    // the local stages may still leave this box freely.
    let part_norm = problem.space.norm(&Element::new(feasible.particular.clone()))?;
    let p = problem.space.p();
    let w_min = problem
        .space
        .weights()
        .iter()
        .fold(f64::INFINITY, |m, &w| m.min(w));
    let embed = w_min.powf(-1.0 / p) * (n as f64).powf((0.5 - 1.0 / p).max(0.0));
    let radius = 2.0 * embed * part_norm + 1.0;

    let packed_dim = null_dim * S::COMPONENTS;
    let seed = optim::grid_refine(
        &cost,
        vec![0.0; packed_dim],
        radius,
        options.grid_points,
        options.grid_levels,
    );
    let (seed, _) = optim::nelder_mead(&cost, &seed, 1e-4, 2000);
    let (best, _) = optim::compass_polish(&cost, seed, 1e-5, 1e-11);
    Ok(assemble(&best))
}

/// Independent brute-force minimal-norm oracle over the null-space
/// parametrisation of the feasible set.
pub fn oracle_min_norm<S: Scalar>(
    problem: &InterpolationProblem<S>,
    options: &OracleOptions,
) -> Result<Element<S>, SolverError> {
    let space = problem.space().clone();
    minimize_over_feasible(
        problem,
        move |f| space.norm(f).unwrap_or(f64::INFINITY),
        options,
    )
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Minimise E(Af, y) + λ·Ω(f) over the whole space by multi-start
/// first-order descent with numeric gradients: eight seeded random starts
/// plus the minimal-norm solution (and zero) as warm starts.
pub fn solve_regularised(
    problem: &InterpolationProblem<f64>,
    omega: &RegulariserSpec,
    lambda: f64,
    loss: LossSpec,
    seed: u64,
) -> Result<Element<f64>, SolverError> {
    solve_regularised_with_starts(problem, omega, lambda, loss, seed, &[])
}

pub(crate) fn solve_regularised_with_starts(
    problem: &InterpolationProblem<f64>,
    omega: &RegulariserSpec,
    lambda: f64,
    loss: LossSpec,
    seed: u64,
    extra_starts: &[Element<f64>],
) -> Result<Element<f64>, SolverError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(SolverError::InvalidLambda(lambda));
    }
    let space = problem.space();
    let n = space.dim();

    let eval_failure: RefCell<Option<crate::regulariser::EvalError>> = RefCell::new(None);
    let objective = |packed: &[f64]| -> f64 {
        let f = Element::new(packed.to_vec());
        let values = match problem.apply(&f) {
            Ok(v) => v,
            Err(_) => return f64::INFINITY,
        };
        let fit = loss.eval(&values, problem.targets());
        match omega.eval(space, &f) {
            Ok(om) => fit + lambda * om,
            Err(e) => {
                eval_failure.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    for e in extra_starts {
        starts.push(e.coords().to_vec());
    }
    if let Ok(min_norm) = solve_min_norm(problem, 1e-9, 500) {
        starts.push(min_norm.f0.into_coords());
    } else if let Ok(feasible) = feasible_point(problem) {
        starts.push(feasible.particular);
    }
    starts.push(vec![0.0; n]);
    let scale = problem
        .targets()
        .iter()
        .fold(1.0_f64, |m, t| m.max(t.abs()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        starts.push((0..n).map(|_| scale * standard_normal(&mut rng)).collect());
    }

    let mut runs: Vec<optim::DescentResult> = starts
        .into_iter()
        .map(|start| optim::bb_min(start, &objective, 1e-10, 4000))
        .collect();
    runs.sort_by(|a, b| a.value.total_cmp(&b.value));
    let best = &runs[0];

    if !best.value.is_finite() {
        if let Some(err) = eval_failure.into_inner() {
            return Err(SolverError::Regulariser(err));
        }
        return Err(SolverError::NonConvergence {
            iterations: 4000,
            residual: f64::INFINITY,
            tol: 1e-10,
        });
    }

    let gradient_small = best.grad_norm <= 1e-6 * (1.0 + best.value.abs());
    let restarts_agree = runs
        .get(1)
        .is_some_and(|second| (second.value - best.value).abs() <= 1e-7 * (1.0 + best.value.abs()));
    if !gradient_small && !restarts_agree {
        return Err(SolverError::NonConvergence {
            iterations: 4000,
            residual: best.grad_norm,
            tol: 1e-6,
        });
    }
    Ok(Element::new(runs.swap_remove(0).x))
}

/// One step of the λ → 0 experiment.
#[derive(Debug, Clone)]
pub struct PathPoint {
    pub lambda: f64,
    pub solution: Element<f64>,
    /// ‖f_λ − f*‖_p against the minimal-norm interpolant f*.
    pub distance_to_interpolant: f64,
}

/// Solve the regularised problem along a strictly decreasing λ list and
/// report the distance to the minimal-norm interpolant at every λ. Each
/// solve warm-starts from the previous solution and the interpolant.
pub fn regularisation_path(
    problem: &InterpolationProblem<f64>,
    omega: &RegulariserSpec,
    loss: LossSpec,
    lambdas: &[f64],
    seed: u64,
) -> Result<Vec<PathPoint>, SolverError> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(SolverError::LambdaOrder);
    }
    if lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SolverError::LambdaOrder);
    }

    let interpolant = solve_min_norm(problem, 1e-9, 500)?;
    let mut previous: Option<Element<f64>> = None;
    let mut path = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut warm = vec![interpolant.f0.clone()];
        if let Some(prev) = &previous {
            warm.push(prev.clone());
        }
        let solution =
            solve_regularised_with_starts(problem, omega, lambda, loss, seed, &warm)?;
        let distance_to_interpolant = problem
            .space()
            .norm(&solution.sub(&interpolant.f0))?;
        previous = Some(solution.clone());
        path.push(PathPoint {
            lambda,
            solution,
            distance_to_interpolant,
        });
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regulariser::{make_admissible, MonotoneFn};

    fn unit_space(dim: usize, p: f64) -> PNormSpace {
        PNormSpace::new(dim, p).unwrap()
    }

    fn problem(
        space: PNormSpace,
        rows: &[&[f64]],
        targets: &[f64],
    ) -> InterpolationProblem<f64> {
        InterpolationProblem::new(
            space,
            rows.iter().map(|r| Functional::new(r.to_vec())).collect(),
            targets.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn construction_rejects_bad_data() {
        let space = unit_space(2, 2.0);
        assert!(matches!(
            InterpolationProblem::<f64>::new(space.clone(), vec![], vec![]),
            Err(SolverError::NoConstraints)
        ));
        assert!(matches!(
            InterpolationProblem::new(
                space.clone(),
                vec![Functional::new(vec![0.0, 0.0])],
                vec![1.0]
            ),
            Err(SolverError::ZeroFunctional { index: 0 })
        ));
        assert!(matches!(
            InterpolationProblem::new(
                space,
                vec![Functional::new(vec![1.0, 0.0])],
                vec![1.0, 2.0]
            ),
            Err(SolverError::TargetCount { .. })
        ));
    }

    #[test]
    fn symmetric_single_constraint_forces_equal_coordinates() {
        for &p in &[1.3, 2.0, 3.0, 5.0] {
            let pb = problem(unit_space(2, p), &[&[1.0, 1.0]], &[2.0]);
            let sol = solve_min_norm(&pb, 1e-10, 200).unwrap();
            assert!((sol.f0.coords()[0] - 1.0).abs() < 1e-8, "p = {p}");
            assert!((sol.f0.coords()[1] - 1.0).abs() < 1e-8, "p = {p}");
        }
    }

    #[test]
    fn p2_single_constraint_matches_normal_equations() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, 2.0]], &[1.0]);
        let sol = solve_min_norm(&pb, 1e-10, 200).unwrap();
        assert!((sol.f0.coords()[0] - 0.2).abs() < 1e-9);
        assert!((sol.f0.coords()[1] - 0.4).abs() < 1e-9);
        assert!((sol.c[0] - 0.2).abs() < 1e-9);
    }

    #[test]
    fn p4_single_constraint_closed_form() {
        // minimiser of ‖f‖₄ under f₁ + 2f₂ = 1 is t·(1, 2^{1/3}) with
        // t = 1/(1 + 2^{4/3}), by Hölder equality
        let pb = problem(unit_space(2, 4.0), &[&[1.0, 2.0]], &[1.0]);
        let sol = solve_min_norm(&pb, 1e-10, 300).unwrap();
        let t = 1.0 / (1.0 + 2.0_f64.powf(4.0 / 3.0));
        assert!((sol.f0.coords()[0] - t).abs() < 1e-8);
        assert!((sol.f0.coords()[1] - t * 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-8);
        assert!(sol.feasibility_residual <= 1e-10);
        assert!(sol.peaking_residual <= 1e-10);
        assert!(sol.norm_match_residual <= 1e-10);
    }

    #[test]
    fn zero_targets_give_zero_solution() {
        let pb = problem(unit_space(3, 3.0), &[&[1.0, -1.0, 0.5]], &[0.0]);
        let sol = solve_min_norm(&pb, 1e-12, 100).unwrap();
        assert!(sol.f0.is_zero());
        assert_eq!(sol.c, vec![0.0]);
        let report = verify_representer(&sol, &pb, 1e-12).unwrap();
        assert!(report.pass());
    }

    #[test]
    fn inconsistent_duplicate_rows_are_infeasible() {
        let pb = problem(
            unit_space(2, 2.0),
            &[&[1.0, 2.0], &[1.0, 2.0]],
            &[1.0, 2.0],
        );
        assert!(matches!(
            solve_min_norm(&pb, 1e-9, 100),
            Err(SolverError::Infeasible { .. })
        ));
    }

    #[test]
    fn consistent_dependent_rows_are_solved() {
        let pb = problem(
            unit_space(2, 2.0),
            &[&[1.0, 2.0], &[2.0, 4.0]],
            &[1.0, 2.0],
        );
        let sol = solve_min_norm(&pb, 1e-9, 200).unwrap();
        assert!((sol.f0.coords()[0] - 0.2).abs() < 1e-7);
        assert!((sol.f0.coords()[1] - 0.4).abs() < 1e-7);
    }

    #[test]
    fn verify_flags_null_space_perturbations() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, 2.0]], &[1.0]);
        let mut sol = solve_min_norm(&pb, 1e-10, 200).unwrap();
        // (2, −1) annihilates the constraint, so feasibility survives but
        // peaking breaks
        sol.f0 = sol.f0.add_scaled(0.1, &Element::new(vec![2.0, -1.0]));
        let report = verify_representer(&sol, &pb, 1e-9).unwrap();
        assert!(report.feasibility.pass);
        assert!(!report.peaking.pass);
        assert!(report.peaking.value > 1e-4);
        assert!(!report.pass());
    }

    #[test]
    fn oracle_matches_p4_closed_form() {
        let pb = problem(unit_space(2, 4.0), &[&[1.0, 2.0]], &[1.0]);
        let oracle = oracle_min_norm(&pb, &OracleOptions::default()).unwrap();
        let t = 1.0 / (1.0 + 2.0_f64.powf(4.0 / 3.0));
        assert!((oracle.coords()[0] - t).abs() < 1e-4);
        assert!((oracle.coords()[1] - t * 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-4);
    }

    #[test]
    fn oracle_matches_pseudo_inverse_at_p2() {
        let rows: [&[f64]; 2] = [&[1.0, 0.5, -0.25, 2.0], &[0.0, 1.0, 1.0, -1.0]];
        let y = [1.0, -0.5];
        let pb = problem(unit_space(4, 2.0), &rows, &y);
        let oracle = oracle_min_norm(&pb, &OracleOptions::default()).unwrap();

        // normal equations: f = Aᵀ(AAᵀ)⁻¹y
        let a = DMatrix::from_fn(2, 4, |i, j| rows[i][j]);
        let gram = &a * a.transpose();
        let alpha = gram.lu().solve(&DVector::from_column_slice(&y)).unwrap();
        let pinv = a.transpose() * alpha;
        for j in 0..4 {
            assert!(
                (oracle.coords()[j] - pinv[j]).abs() < 1e-6,
                "coordinate {j}: {} vs {}",
                oracle.coords()[j],
                pinv[j]
            );
        }
    }

    #[test]
    fn oracle_zero_targets() {
        let pb = problem(unit_space(3, 3.0), &[&[1.0, 1.0, -1.0]], &[0.0]);
        let oracle = oracle_min_norm(&pb, &OracleOptions::default()).unwrap();
        assert!(pb.space().norm(&oracle).unwrap() < 1e-6);
    }

    #[test]
    fn oracle_rejects_large_null_spaces() {
        let pb = problem(unit_space(6, 2.0), &[&[1.0; 6]], &[1.0]);
        assert!(matches!(
            oracle_min_norm(&pb, &OracleOptions::default()),
            Err(SolverError::NullSpaceTooLarge { dim: 5, .. })
        ));
    }

    #[test]
    fn regularised_matches_ridge_closed_form() {
        // minimiser of ‖Af − y‖² + λ‖f‖² is (AᵀA + λI)⁻¹Aᵀy
        let rows: [&[f64]; 2] = [&[1.0, 0.5, -1.0], &[0.25, -2.0, 0.5]];
        let y = [1.0, 0.5];
        let lambda = 0.1;
        let pb = problem(unit_space(3, 2.0), &rows, &y);
        let omega = make_admissible(MonotoneFn::Square);
        let sol = solve_regularised(&pb, &omega, lambda, LossSpec::Square, 0).unwrap();

        let a = DMatrix::from_fn(2, 3, |i, j| rows[i][j]);
        let rhs = a.transpose() * DVector::from_column_slice(&y);
        let mut normal = a.transpose() * &a;
        for i in 0..3 {
            normal[(i, i)] += lambda;
        }
        let closed = normal.lu().solve(&rhs).unwrap();
        for j in 0..3 {
            assert!(
                (sol.coords()[j] - closed[j]).abs() < 1e-6,
                "coordinate {j}: {} vs {}",
                sol.coords()[j],
                closed[j]
            );
        }
    }

    #[test]
    fn large_lambda_drives_solution_to_zero() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, 1.0]], &[2.0]);
        let omega = make_admissible(MonotoneFn::Square);
        let sol = solve_regularised(&pb, &omega, 1e8, LossSpec::Square, 1).unwrap();
        assert!(pb.space().norm(&sol).unwrap() < 1e-4);
    }

    #[test]
    fn regularised_zero_targets_stay_zero() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, -1.0]], &[0.0]);
        let omega = make_admissible(MonotoneFn::Square);
        let sol = solve_regularised(&pb, &omega, 0.5, LossSpec::Square, 2).unwrap();
        assert!(pb.space().norm(&sol).unwrap() < 1e-7);
    }

    #[test]
    fn path_requires_decreasing_lambdas() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, 1.0]], &[2.0]);
        let omega = make_admissible(MonotoneFn::Square);
        assert!(matches!(
            regularisation_path(&pb, &omega, LossSpec::Square, &[1e-3, 1e-2], 0),
            Err(SolverError::LambdaOrder)
        ));
        assert!(matches!(
            regularisation_path(&pb, &omega, LossSpec::Square, &[], 0),
            Err(SolverError::LambdaOrder)
        ));
    }

    #[test]
    fn path_stays_on_the_symmetric_ray() {
        let pb = problem(unit_space(2, 2.0), &[&[1.0, 1.0]], &[2.0]);
        let omega = make_admissible(MonotoneFn::Square);
        let path = regularisation_path(
            &pb,
            &omega,
            LossSpec::Square,
            &[1e-1, 1e-2, 1e-3],
            0,
        )
        .unwrap();
        for point in &path {
            let c = point.solution.coords();
            assert!((c[0] - c[1]).abs() < 1e-6, "λ = {}", point.lambda);
        }
    }

    #[test]
    fn dual_objective_and_gradient_are_consistent() {
        let pb = problem(
            unit_space(3, 3.0),
            &[&[1.0, 0.5, -0.5], &[0.0, 1.0, 1.0]],
            &[1.0, 0.25],
        );
        let c = vec![0.3, -0.7];
        let g = dual_gradient(&pb, &c).unwrap();
        for i in 0..2 {
            let h = 1e-6;
            let mut cp = c.clone();
            cp[i] += h;
            let mut cm = c.clone();
            cm[i] -= h;
            let fd = (dual_objective(&pb, &cp).unwrap() - dual_objective(&pb, &cm).unwrap())
                / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-5 * (1.0 + g[i].abs()));
        }
    }
}
