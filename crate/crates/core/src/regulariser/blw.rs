//! Constructive witness for the duality-map intersection theorem: given a
//! subspace W, a point x₀ and a functional u₀, there is a z ∈ W with
//! J(x₀ + z) ∩ (W° − u₀) nonempty.
//!
//! The witness is found by minimising the convex coercive functional
//!
//!   G(z) = ½‖x₀ + z‖² + ⟨u₀, z⟩,   z ∈ span(W),
//!
//! whose gradient along a basis vector w is ⟨J(x₀ + z) + u₀, w⟩ (the
//! quadratic term is the integral of the identity gauge, and its subgradient
//! is the duality map). At the minimum that pairing vanishes on all of W, so
//! L = J(x₀ + z) satisfies L + u₀ ∈ W° — exactly the claimed intersection.

use super::RegulariserError;
use crate::optim;
use crate::space::{Element, Functional, PNormSpace};

/// A computed intersection witness with its two certificate residuals.
#[derive(Debug, Clone)]
pub struct BlwWitness {
    /// The subspace shift z = Σ_k a_k w_k.
    pub z: Element<f64>,
    /// Coefficients a over the supplied basis.
    pub coefficients: Vec<f64>,
    /// L = J(x₀ + z).
    pub functional: Functional<f64>,
    /// Peaking gap plus norm mismatch of L at x₀ + z; zero up to rounding by
    /// construction, recomputed independently here.
    pub membership_residual: f64,
    /// max_k |⟨L + u₀, w_k⟩| over the basis.
    pub annihilator_residual: f64,
    pub iterations: usize,
}

fn check_independent(basis: &[Element<f64>]) -> Result<(), RegulariserError> {
    let n = basis[0].len();
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for (index, b) in basis.iter().enumerate() {
        let mut v: Vec<f64> = b.coords().to_vec();
        let scale: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for u in &ortho {
            let coeff: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vj, uj) in v.iter_mut().zip(u) {
                *vj -= coeff * uj;
            }
        }
        let remaining: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if remaining <= 1e-10 * scale.max(1.0) || index >= n {
            return Err(RegulariserError::DependentBasis { index });
        }
        for vj in v.iter_mut() {
            *vj /= remaining;
        }
        ortho.push(v);
    }
    Ok(())
}

/// Find z ∈ span(`w_basis`) and L ∈ J(x₀ + z) with L + u₀ annihilating the
/// subspace, certifying both memberships to `tol`.
pub fn beurling_livingston_witness(
    space: &PNormSpace,
    w_basis: &[Element<f64>],
    x0: &Element<f64>,
    u0: &Functional<f64>,
    tol: f64,
) -> Result<BlwWitness, RegulariserError> {
    if w_basis.is_empty() {
        return Err(RegulariserError::EmptyBasis);
    }
    for w in w_basis {
        space.norm(w)?; // dimension check
    }
    space.norm(x0)?;
    space.dual_norm(u0)?;
    check_independent(w_basis)?;

    let shift = |coeffs: &[f64]| -> Element<f64> {
        let mut z = x0.clone();
        for (&a, w) in coeffs.iter().zip(w_basis) {
            z = z.add_scaled(a, w);
        }
        z
    };

    // maximise −G; its gradient is −⟨J(x₀+z) + u₀, w_k⟩
    let value = |coeffs: &[f64]| -> f64 {
        let point = shift(coeffs);
        let norm = space.norm(&point).expect("validated dimensions");
        let mut linear = 0.0;
        for (&a, w) in coeffs.iter().zip(w_basis) {
            linear += a * space.pairing(u0, w).expect("validated dimensions");
        }
        -(0.5 * norm * norm + linear)
    };
    let gradient = |coeffs: &[f64]| -> Vec<f64> {
        let point = shift(coeffs);
        let j = space.duality_map(&point).expect("validated dimensions");
        w_basis
            .iter()
            .map(|w| {
                -(space.pairing(&j, w).expect("validated dimensions")
                    + space.pairing(u0, w).expect("validated dimensions"))
            })
            .collect()
    };

    let start = vec![0.0; w_basis.len()];
    let result = optim::newton_max(start, &value, &gradient, 0.95 * tol, 500);

    let coefficients = result.x;
    let mut z = Element::zeros(space.dim());
    for (&a, w) in coefficients.iter().zip(w_basis) {
        z = z.add_scaled(a, w);
    }
    let point = x0.add(&z);
    let functional = space.duality_map(&point)?;

    let membership_residual = space.peaking_gap(&functional, &point)?.max(0.0)
        + (space.dual_norm(&functional)? - space.norm(&point)?).abs();
    let mut annihilator_residual = 0.0_f64;
    for w in w_basis {
        let gap = space.pairing(&functional, w)? + space.pairing(u0, w)?;
        annihilator_residual = annihilator_residual.max(gap.abs());
    }

    if annihilator_residual > tol || membership_residual > tol {
        return Err(RegulariserError::WitnessNotConverged {
            residual: annihilator_residual.max(membership_residual),
            tol,
        });
    }
    Ok(BlwWitness {
        z,
        coefficients,
        functional,
        membership_residual,
        annihilator_residual,
        iterations: result.iterations,
    })
}
