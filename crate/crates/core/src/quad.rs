//! Gauss–Legendre quadrature nodes and weights.
//!
//! Nodes are the roots of the Legendre polynomial P_n, found by Newton
//! iteration on the three-term recurrence; weights are 2/((1−x²)·P_n'(x)²).
//! The rule is exact for polynomials of degree 2n−1 and converges spectrally
//! for entire integrands, which is why the sampled RKBS uses it.

use std::f64::consts::PI;

/// P_n(x) and its derivative via the Legendre recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 1..n {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes (ascending) and weights on the reference interval [−1, 1].
///
/// The grid is exactly symmetric: the upper half mirrors the lower half and
/// odd rules get the midpoint 0 exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mirror = n - 1 - k;
        let mut x = if k == mirror {
            0.0
        } else {
            (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos()
        };
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        if k == mirror {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // k starts at the root closest to +1
        nodes[mirror] = x;
        nodes[k] = -x;
        weights[mirror] = w;
        weights[k] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped onto [a, b].
pub fn gauss_legendre_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule_is_exact() {
        let (x, w) = gauss_legendre(2);
        let expected = 1.0 / 3.0_f64.sqrt();
        assert!((x[0] + expected).abs() < 1e-15);
        assert!((x[1] - expected).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        assert!((w[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rules_integrate_monomials_exactly() {
        for n in 1..=12 {
            let (xs, ws) = gauss_legendre(n);
            for degree in 0..2 * n {
                let quad: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(x, w)| w * x.powi(degree as i32))
                    .sum();
                let exact = if degree % 2 == 0 {
                    2.0 / (degree as f64 + 1.0)
                } else {
                    0.0
                };
                assert!(
                    (quad - exact).abs() < 1e-13,
                    "n = {n}, degree = {degree}: {quad} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn grid_is_exactly_symmetric() {
        for n in [2, 3, 8, 33, 512] {
            let (xs, ws) = gauss_legendre(n);
            for k in 0..n {
                assert_eq!(xs[k], -xs[n - 1 - k]);
                assert_eq!(ws[k], ws[n - 1 - k]);
            }
        }
    }

    #[test]
    fn mapped_rule_scales_weights() {
        let (xs, ws) = gauss_legendre_on(-0.5, 0.5, 7);
        let total: f64 = ws.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(xs.iter().all(|x| (-0.5..=0.5).contains(x)));
        // second moment of the unit interval
        let m2: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x * x).sum();
        assert!((m2 - 1.0 / 12.0).abs() < 1e-15);
    }
}
