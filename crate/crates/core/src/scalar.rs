//! Scalar abstraction over the coefficient field of a space.
//!
//! Real spaces use `f64`; the sampled RKBS construction works over
//! `Complex64` because its feature maps are complex exponentials. The
//! optimisers run on a flat real parametrisation, so the only thing added
//! on top of [`ComplexField`] is packing a scalar into its real components.

use nalgebra::ComplexField;
use num_complex::Complex64;

/// Coefficient scalar of a weighted l^p space.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    /// Number of real components: 1 for `f64`, 2 for `Complex64`.
    const COMPONENTS: usize;

    /// Real components; the second entry is 0 for real scalars.
    fn components(self) -> [f64; 2];

    /// Rebuild from the `COMPONENTS` leading entries of `parts`.
    fn from_components(parts: &[f64]) -> Self;
}

impl Scalar for f64 {
    const COMPONENTS: usize = 1;

    fn components(self) -> [f64; 2] {
        [self, 0.0]
    }

    fn from_components(parts: &[f64]) -> Self {
        parts[0]
    }
}

impl Scalar for Complex64 {
    const COMPONENTS: usize = 2;

    fn components(self) -> [f64; 2] {
        [self.re, self.im]
    }

    fn from_components(parts: &[f64]) -> Self {
        Complex64::new(parts[0], parts[1])
    }
}

/// Flatten a scalar vector into its real components.
pub(crate) fn pack<S: Scalar>(v: &[S]) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() * S::COMPONENTS);
    for s in v {
        let c = s.components();
        out.extend_from_slice(&c[..S::COMPONENTS]);
    }
    out
}

/// Inverse of [`pack`].
pub(crate) fn unpack<S: Scalar>(parts: &[f64]) -> Vec<S> {
    debug_assert_eq!(parts.len() % S::COMPONENTS, 0);
    parts
        .chunks_exact(S::COMPONENTS)
        .map(|chunk| S::from_components(chunk))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_roundtrip_real() {
        let v = vec![1.0, -2.5, 0.0];
        assert_eq!(unpack::<f64>(&pack(&v)), v);
    }

    #[test]
    fn pack_unpack_roundtrip_complex() {
        let v = vec![Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)];
        assert_eq!(pack(&v), vec![1.0, -2.0, 0.5, 3.0]);
        assert_eq!(unpack::<Complex64>(&pack(&v)), v);
    }
}
