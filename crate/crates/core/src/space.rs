//! Finite-dimensional weighted l^p spaces with their duality mapping.
//!
//! A [`PNormSpace`] carries a dimension, an exponent 1 < p < ∞ and strictly
//! positive weights w. Primal vectors ([`Element`]) live in the space with
//! norm ‖f‖ = (Σ_j w_j |f_j|^p)^{1/p}; dual vectors ([`Functional`]) are
//! measured in the conjugate exponent q = p/(p−1) with the same weights, and
//! the two are paired bilinearly: ⟨L, f⟩ = Σ_j w_j L_j f_j.
//!
//! In this range the space is reflexive, smooth and strictly convex, so the
//! duality mapping with identity gauge is single-valued:
//!
//!   J(f)_j = ‖f‖^{2−p} · |f_j|^{p−1} · phase(f_j),
//!
//! where phase is the sign for real scalars and the conjugated unit phase for
//! complex ones (so that ⟨J(f), f⟩ is real under the bilinear pairing). It
//! satisfies ⟨J(f), f⟩ = ‖f‖² and ‖J(f)‖_q = ‖f‖, and its inverse is the
//! duality mapping of the conjugate space.

use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("exponent p = {0} is outside the reflexive range (1, inf)")]
    InvalidExponent(f64),
    #[error("space dimension must be at least 1")]
    EmptySpace,
    #[error("weights length {got} does not match dimension {dim}")]
    WeightCount { dim: usize, got: usize },
    #[error("weight {index} is {value}; weights must be strictly positive and finite")]
    InvalidWeight { index: usize, value: f64 },
    #[error("coordinate vector has length {got}, space has dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
}

/// A finite-dimensional weighted l^p space over real or complex scalars.
///
/// The scalar field is chosen per operation via the [`Scalar`] parameter of
/// [`Element`] and [`Functional`]; the space itself only stores the geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PNormSpace {
    dim: usize,
    p: f64,
    q: f64,
    weights: Vec<f64>,
}

impl PNormSpace {
    /// Space with unit weights.
    pub fn new(dim: usize, p: f64) -> Result<Self, SpaceError> {
        Self::with_weights(dim, p, vec![1.0; dim])
    }

    /// Space with explicit quadrature/measure weights.
    pub fn with_weights(dim: usize, p: f64, weights: Vec<f64>) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::EmptySpace);
        }
        if !p.is_finite() || p <= 1.0 {
            return Err(SpaceError::InvalidExponent(p));
        }
        if weights.len() != dim {
            return Err(SpaceError::WeightCount {
                dim,
                got: weights.len(),
            });
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(SpaceError::InvalidWeight { index, value });
            }
        }
        let q = p / (p - 1.0);
        // 1/p + 1/q = 1 must hold to machine precision; q = p/(p−1) can only
        // break it through overflow, which InvalidExponent has excluded.
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-15 {
            return Err(SpaceError::InvalidExponent(p));
        }
        Ok(Self {
            dim,
            p,
            q,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent q = p/(p−1), cached at construction.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The conjugate space: exponent q, same weights. Duality maps of the
    /// pair are mutually inverse.
    pub fn conjugate(&self) -> PNormSpace {
        PNormSpace {
            dim: self.dim,
            p: self.q,
            q: self.p,
            weights: self.weights.clone(),
        }
    }

    fn check_len(&self, got: usize) -> Result<(), SpaceError> {
        if got == self.dim {
            Ok(())
        } else {
            Err(SpaceError::DimensionMismatch { dim: self.dim, got })
        }
    }

    fn weighted_norm(&self, coords: &[impl Scalar], exponent: f64) -> f64 {
        let sum: f64 = coords
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| w * c.modulus().powf(exponent))
            .sum();
        sum.powf(1.0 / exponent)
    }

    /// Primal norm ‖f‖ = (Σ_j w_j |f_j|^p)^{1/p}.
    pub fn norm<S: Scalar>(&self, f: &Element<S>) -> Result<f64, SpaceError> {
        self.check_len(f.len())?;
        Ok(self.weighted_norm(f.coords(), self.p))
    }

    /// Dual norm: the q-norm with the same weights.
    pub fn dual_norm<S: Scalar>(&self, l: &Functional<S>) -> Result<f64, SpaceError> {
        self.check_len(l.len())?;
        Ok(self.weighted_norm(l.coords(), self.q))
    }

    /// Bilinear pairing ⟨L, f⟩ = Σ_j w_j L_j f_j (no conjugation).
    pub fn pairing<S: Scalar>(&self, l: &Functional<S>, f: &Element<S>) -> Result<S, SpaceError> {
        self.check_len(l.len())?;
        self.check_len(f.len())?;
        let mut acc = S::zero();
        for ((&lj, &fj), &wj) in l.coords().iter().zip(f.coords()).zip(&self.weights) {
            acc += lj * fj * S::from_real(wj);
        }
        Ok(acc)
    }

    /// Duality mapping with identity gauge.
    ///
    /// Components with f_j = 0 map to 0 (the limit is well defined since
    /// p − 1 > 0, and special-casing avoids 0 to a negative power for p < 2).
    pub fn duality_map<S: Scalar>(&self, f: &Element<S>) -> Result<Functional<S>, SpaceError> {
        self.check_len(f.len())?;
        let nf = self.weighted_norm(f.coords(), self.p);
        if nf == 0.0 {
            return Ok(Functional::new(vec![S::zero(); self.dim]));
        }
        let scale = nf.powf(2.0 - self.p);
        let coords = f
            .coords()
            .iter()
            .map(|&fj| {
                let m = fj.modulus();
                if m == 0.0 {
                    S::zero()
                } else {
                    // |f_j|^{p−1} · conj(f_j)/|f_j|, conjugated phase so the
                    // bilinear pairing ⟨J(f), f⟩ comes out real.
                    fj.conjugate().unscale(m).scale(scale * m.powf(self.p - 1.0))
                }
            })
            .collect();
        Ok(Functional::new(coords))
    }

    /// Inverse of [`PNormSpace::duality_map`]: the duality map of the
    /// conjugate space applied to the functional's coordinates.
    pub fn inverse_duality_map<S: Scalar>(
        &self,
        l: &Functional<S>,
    ) -> Result<Element<S>, SpaceError> {
        let dual = self
            .conjugate()
            .duality_map(&Element::new(l.coords().to_vec()))?;
        Ok(Element::new(dual.into_coords()))
    }

    /// Hölder gap ‖L‖_q·‖f‖_p − Re⟨L, f⟩.
    ///
    /// Nonnegative by Hölder's inequality, and zero exactly when L peaks at
    /// f; in particular `peaking_gap(J(f), f) = 0`. For real scalars the real
    /// part is the pairing itself.
    pub fn peaking_gap<S: Scalar>(&self, l: &Functional<S>, f: &Element<S>) -> Result<f64, SpaceError> {
        let product = self.dual_norm(l)? * self.norm(f)?;
        let paired = self.pairing(l, f)?;
        Ok(product - paired.real())
    }
}

/// A primal vector f of a [`PNormSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Element<S: Scalar> {
    coords: Vec<S>,
}

/// A dual vector L of a [`PNormSpace`], measured in the conjugate exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional<S: Scalar> {
    coords: Vec<S>,
}

macro_rules! coord_vector {
    ($name:ident) => {
        impl<S: Scalar> $name<S> {
            pub fn new(coords: Vec<S>) -> Self {
                Self { coords }
            }

            pub fn zeros(dim: usize) -> Self {
                Self {
                    coords: vec![S::zero(); dim],
                }
            }

            pub fn coords(&self) -> &[S] {
                &self.coords
            }

            pub fn into_coords(self) -> Vec<S> {
                self.coords
            }

            pub fn len(&self) -> usize {
                self.coords.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coords.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.coords.iter().all(|c| c.modulus() == 0.0)
            }

            pub fn scale(&self, t: S) -> Self {
                Self {
                    coords: self.coords.iter().map(|&c| c * t).collect(),
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len(), other.len());
                Self {
                    coords: self
                        .coords
                        .iter()
                        .zip(other.coords.iter())
                        .map(|(&a, &b)| a + b)
                        .collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len(), other.len());
                Self {
                    coords: self
                        .coords
                        .iter()
                        .zip(other.coords.iter())
                        .map(|(&a, &b)| a - b)
                        .collect(),
                }
            }

            /// self + t·other.
            pub fn add_scaled(&self, t: S, other: &Self) -> Self {
                debug_assert_eq!(self.len(), other.len());
                Self {
                    coords: self
                        .coords
                        .iter()
                        .zip(other.coords.iter())
                        .map(|(&a, &b)| a + b * t)
                        .collect(),
                }
            }

            /// Σ_i c_i v_i over matching-length vectors.
            pub fn combine(coeffs: &[S], vectors: &[Self]) -> Self {
                assert_eq!(coeffs.len(), vectors.len());
                assert!(!vectors.is_empty());
                let dim = vectors[0].len();
                let mut coords = vec![S::zero(); dim];
                for (&c, v) in coeffs.iter().zip(vectors) {
                    for (acc, &x) in coords.iter_mut().zip(v.coords()) {
                        *acc += c * x;
                    }
                }
                Self { coords }
            }
        }
    };
}

coord_vector!(Element);
coord_vector!(Functional);

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn re(coords: &[f64]) -> Element<f64> {
        Element::new(coords.to_vec())
    }

    fn fu(coords: &[f64]) -> Functional<f64> {
        Functional::new(coords.to_vec())
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            PNormSpace::new(2, 1.0),
            Err(SpaceError::InvalidExponent(_))
        ));
        assert!(matches!(
            PNormSpace::new(2, f64::INFINITY),
            Err(SpaceError::InvalidExponent(_))
        ));
        assert!(matches!(PNormSpace::new(0, 2.0), Err(SpaceError::EmptySpace)));
        assert!(matches!(
            PNormSpace::with_weights(2, 2.0, vec![1.0, 0.0]),
            Err(SpaceError::InvalidWeight { index: 1, .. })
        ));
        assert!(matches!(
            PNormSpace::with_weights(2, 2.0, vec![1.0]),
            Err(SpaceError::WeightCount { .. })
        ));
    }

    #[test]
    fn conjugate_exponent_is_cached_and_consistent() {
        for &p in &[1.2, 1.5, 2.0, 3.0, 4.0, 8.0] {
            let space = PNormSpace::new(3, p).unwrap();
            assert!((1.0 / space.p() + 1.0 / space.q() - 1.0).abs() <= 1e-15);
            assert_eq!(space.conjugate().p(), space.q());
        }
    }

    #[test]
    fn norm_euclidean_identity() {
        let space = PNormSpace::new(2, 2.0).unwrap();
        assert_eq!(space.norm(&re(&[3.0, 4.0])).unwrap(), 5.0);
    }

    #[test]
    fn norm_p4_matches_direct_formula() {
        let space = PNormSpace::new(2, 4.0).unwrap();
        let n = space.norm(&re(&[1.0, 1.0])).unwrap();
        assert!((n - 2.0_f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn norm_of_zero_is_zero() {
        for &p in &[1.2, 2.0, 7.5] {
            let space = PNormSpace::new(3, p).unwrap();
            assert_eq!(space.norm(&Element::<f64>::zeros(3)).unwrap(), 0.0);
        }
    }

    #[test]
    fn norm_dimension_mismatch() {
        let space = PNormSpace::new(3, 2.0).unwrap();
        assert!(matches!(
            space.norm(&re(&[1.0, 2.0])),
            Err(SpaceError::DimensionMismatch { dim: 3, got: 2 })
        ));
    }

    #[test]
    fn dual_norm_examples() {
        let e2 = PNormSpace::new(2, 2.0).unwrap();
        assert_eq!(e2.dual_norm(&fu(&[3.0, 4.0])).unwrap(), 5.0);

        let e4 = PNormSpace::new(2, 4.0).unwrap();
        let n = e4.dual_norm(&fu(&[1.0, 1.0])).unwrap();
        assert!((n - 2.0_f64.powf(0.75)).abs() < 1e-15);

        assert_eq!(e4.dual_norm(&Functional::<f64>::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn pairing_examples() {
        let space = PNormSpace::new(2, 2.0).unwrap();
        assert_eq!(space.pairing(&fu(&[1.0, 0.0]), &re(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(space.pairing(&fu(&[1.0, 2.0]), &re(&[3.0, 4.0])).unwrap(), 11.0);

        let weighted = PNormSpace::with_weights(2, 2.0, vec![0.5, 0.5]).unwrap();
        assert_eq!(
            weighted.pairing(&fu(&[1.0, 1.0]), &re(&[1.0, 1.0])).unwrap(),
            1.0
        );
    }

    #[test]
    fn duality_map_is_identity_at_p2() {
        let space = PNormSpace::new(2, 2.0).unwrap();
        let j = space.duality_map(&re(&[3.0, 4.0])).unwrap();
        assert!((j.coords()[0] - 3.0).abs() < 1e-12);
        assert!((j.coords()[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn duality_map_p4_example() {
        let space = PNormSpace::new(2, 4.0).unwrap();
        let f = re(&[1.0, 1.0]);
        let j = space.duality_map(&f).unwrap();
        let expected = 2.0_f64.powf(-0.5);
        assert!((j.coords()[0] - expected).abs() < 1e-12);
        assert!((j.coords()[1] - expected).abs() < 1e-12);

        let nf = space.norm(&f).unwrap();
        assert!((space.pairing(&j, &f).unwrap() - nf * nf).abs() < 1e-12);
        assert!((space.dual_norm(&j).unwrap() - nf).abs() < 1e-12);
    }

    #[test]
    fn duality_map_of_zero_is_zero() {
        let space = PNormSpace::new(4, 1.5).unwrap();
        let j = space.duality_map(&Element::<f64>::zeros(4)).unwrap();
        assert!(j.is_zero());
        let inv = space.inverse_duality_map(&Functional::<f64>::zeros(4)).unwrap();
        assert!(inv.is_zero());
    }

    #[test]
    fn inverse_duality_map_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = PNormSpace::new(5, 4.0).unwrap();
        for _ in 0..100 {
            let f = re(&(0..5)
                .map(|_| rng.random_range(-2.0..2.0))
                .collect::<Vec<f64>>());
            let back = space
                .inverse_duality_map(&space.duality_map(&f).unwrap())
                .unwrap();
            let err = space.norm(&back.sub(&f)).unwrap();
            assert!(err < 1e-8 * (1.0 + space.norm(&f).unwrap()), "err = {err}");
        }
    }

    #[test]
    fn peaking_gap_examples() {
        let space = PNormSpace::new(2, 2.0).unwrap();
        assert_eq!(
            space.peaking_gap(&fu(&[1.0, 0.0]), &re(&[0.0, 1.0])).unwrap(),
            1.0
        );
        assert_eq!(
            space
                .peaking_gap(&Functional::zeros(2), &re(&[1.0, 2.0]))
                .unwrap(),
            0.0
        );

        let p3 = PNormSpace::new(3, 3.0).unwrap();
        let f = re(&[0.3, -1.2, 0.7]);
        let gap = p3.peaking_gap(&p3.duality_map(&f).unwrap(), &f).unwrap();
        assert!(gap.abs() < 1e-12);
    }

    #[test]
    fn complex_duality_map_pairs_to_real_norm_squared() {
        let space = PNormSpace::new(3, 3.0).unwrap();
        let f = Element::new(vec![
            Complex64::new(1.0, -0.5),
            Complex64::new(0.0, 2.0),
            Complex64::new(-0.3, 0.1),
        ]);
        let j = space.duality_map(&f).unwrap();
        let paired = space.pairing(&j, &f).unwrap();
        let nf = space.norm(&f).unwrap();
        assert!(paired.im.abs() < 1e-12);
        assert!((paired.re - nf * nf).abs() < 1e-12);
        assert!((space.dual_norm(&j).unwrap() - nf).abs() < 1e-12);

        let back = space.inverse_duality_map(&j).unwrap();
        let err = space.norm(&back.sub(&f)).unwrap();
        assert!(err < 1e-10);
    }
}
