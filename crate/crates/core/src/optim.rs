//! Small dense optimisation routines shared by the solvers.
//!
//! Everything here works on a flat `&[f64]` parametrisation; complex
//! unknowns are packed into real component pairs by the callers. The
//! problems are tiny (a handful of dual coefficients or null-space
//! coordinates), so dense finite-difference Hessians and tensor grids are
//! the right tool.

use nalgebra::{DMatrix, DVector};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Central-difference gradient with per-coordinate step 1e−6·(1 + |x_j|).
pub(crate) fn numeric_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        let h = 1e-6 * (1.0 + x[j].abs());
        probe[j] = x[j] + h;
        let fp = f(&probe);
        probe[j] = x[j] - h;
        let fm = f(&probe);
        probe[j] = x[j];
        g[j] = (fp - fm) / (2.0 * h);
    }
    g
}

pub(crate) struct AscentResult {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Damped Newton ascent on a smooth concave objective.
///
/// The Hessian is a central finite difference of the supplied analytic
/// gradient. When the Newton system is singular or yields a non-ascent
/// direction the ridge −μI is escalated, falling back to plain gradient
/// ascent; steps are backtracked on an Armijo condition so the objective
/// never decreases.
pub(crate) fn newton_max<V, G>(
    mut x: Vec<f64>,
    value: &V,
    gradient: &G,
    grad_tol: f64,
    max_iter: usize,
) -> AscentResult
where
    V: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let d = x.len();
    if d == 0 {
        return AscentResult { x, iterations: 0 };
    }
    let mut iterations = 0;
    for _ in 0..max_iter {
        let g = gradient(&x);
        if inf_norm(&g) <= grad_tol {
            return AscentResult { x, iterations };
        }
        iterations += 1;

        let mut hess = DMatrix::<f64>::zeros(d, d);
        let mut probe = x.clone();
        for j in 0..d {
            let h = 1e-6 * (1.0 + x[j].abs());
            probe[j] = x[j] + h;
            let gp = gradient(&probe);
            probe[j] = x[j] - h;
            let gm = gradient(&probe);
            probe[j] = x[j];
            for i in 0..d {
                hess[(i, j)] = (gp[i] - gm[i]) / (2.0 * h);
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let v = 0.5 * (hess[(i, j)] + hess[(j, i)]);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }

        let minus_g = DVector::from_iterator(d, g.iter().map(|v| -v));
        let mut direction: Option<Vec<f64>> = None;
        for &mu in &[0.0, 1e-10, 1e-6, 1e-2, 1.0] {
            let mut damped = hess.clone();
            for i in 0..d {
                damped[(i, i)] -= mu;
            }
            if let Some(step) = damped.lu().solve(&minus_g) {
                let dir: Vec<f64> = step.iter().copied().collect();
                let slope = dot(&g, &dir);
                if dir.iter().all(|v| v.is_finite()) && slope > 0.0 {
                    direction = Some(dir);
                    break;
                }
            }
        }
        let dir = direction.unwrap_or_else(|| g.clone());
        let slope = dot(&g, &dir);

        let f0 = value(&x);
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let xt: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            let ft = value(&xt);
            if ft.is_finite() && ft >= f0 + 1e-4 * t * slope {
                x = xt;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    AscentResult { x, iterations }
}

pub(crate) struct DescentResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
}

/// Monotone Barzilai–Borwein descent with numeric gradients.
///
/// The BB1 step length adapts to the local curvature, which is what lets the
/// regularisation-path solves stay accurate when λ flattens one direction of
/// the objective; an Armijo backtrack keeps every accepted step a strict
/// improvement.
pub(crate) fn bb_min<F: Fn(&[f64]) -> f64>(
    mut x: Vec<f64>,
    f: &F,
    grad_tol: f64,
    max_iter: usize,
) -> DescentResult {
    let mut fx = f(&x);
    if !fx.is_finite() {
        let grad_norm = f64::INFINITY;
        return DescentResult { x, value: fx, grad_norm };
    }
    let mut g = numeric_gradient(f, &x);
    let mut alpha = 1.0 / (1.0 + inf_norm(&g));
    for _ in 0..max_iter {
        let gnorm = inf_norm(&g);
        if gnorm <= grad_tol {
            break;
        }
        let gg = dot(&g, &g);
        let mut t = alpha.clamp(1e-12, 1e12);
        let mut accepted = false;
        for _ in 0..60 {
            let xt: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - t * gi).collect();
            let ft = f(&xt);
            if ft.is_finite() && ft <= fx - 1e-4 * t * gg {
                let gt = numeric_gradient(f, &xt);
                let mut sy = 0.0;
                let mut ss = 0.0;
                for j in 0..x.len() {
                    let s = xt[j] - x[j];
                    sy += s * (gt[j] - g[j]);
                    ss += s * s;
                }
                alpha = if sy > 0.0 {
                    (ss / sy).clamp(1e-12, 1e12)
                } else {
                    (2.0 * t).clamp(1e-12, 1e12)
                };
                x = xt;
                fx = ft;
                g = gt;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let grad_norm = inf_norm(&g);
    DescentResult {
        x,
        value: fx,
        grad_norm,
    }
}

/// Nelder–Mead simplex descent.
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let d = x0.len();
    if d == 0 {
        return (x0.to_vec(), f(x0));
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(x0.to_vec());
    for j in 0..d {
        let mut v = x0.to_vec();
        v[j] += scale.max(1e-12);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[d];
        let second_worst = order[d - 1];

        let spread = values[worst] - values[best];
        let diameter = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread <= 1e-15 * (1.0 + values[best].abs()) && diameter <= 1e-12 {
            break;
        }

        let mut centroid = vec![0.0; d];
        for (idx, v) in simplex.iter().enumerate() {
            if idx == worst {
                continue;
            }
            for j in 0..d {
                centroid[j] += v[j] / d as f64;
            }
        }

        let point_along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = point_along(1.0);
        let fr = f(&reflected);
        if fr < values[best] {
            let expanded = point_along(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let contracted = if fr < values[worst] {
                point_along(0.5)
            } else {
                point_along(-0.5)
            };
            let fc = f(&contracted);
            if fc < values[worst].min(fr) {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let anchor = simplex[best].clone();
                for (idx, v) in simplex.iter_mut().enumerate() {
                    if idx == best {
                        continue;
                    }
                    for j in 0..d {
                        v[j] = anchor[j] + 0.5 * (v[j] - anchor[j]);
                    }
                    values[idx] = f(v);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=d {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex.swap_remove(best), values[best])
}

/// Coordinate pattern search with a shrinking step; a robust polish pass
/// after the simplex.
pub(crate) fn compass_polish<F: Fn(&[f64]) -> f64>(
    f: &F,
    mut x: Vec<f64>,
    step0: f64,
    step_min: f64,
) -> (Vec<f64>, f64) {
    let mut fx = f(&x);
    let mut step = step0.max(step_min);
    while step >= step_min {
        let mut improved = false;
        for j in 0..x.len() {
            for sign in [1.0, -1.0] {
                let orig = x[j];
                x[j] = orig + sign * step;
                let ft = f(&x);
                if ft < fx {
                    fx = ft;
                    improved = true;
                } else {
                    x[j] = orig;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Coarse-to-fine tensor grid search; the seeding stage of the brute-force
/// oracles. Returns the best point found (the running center is always a
/// candidate, so accuracy only improves with each level).
pub(crate) fn grid_refine<F: Fn(&[f64]) -> f64>(
    f: &F,
    mut center: Vec<f64>,
    mut radius: f64,
    points: usize,
    levels: usize,
) -> Vec<f64> {
    let d = center.len();
    if d == 0 {
        return center;
    }
    assert!(points >= 3 && points % 2 == 1, "need an odd grid so the center is a node");
    let total = points.pow(d as u32);
    let mut best_value = f(&center);
    for _ in 0..levels {
        let mut best = center.clone();
        for flat in 0..total {
            let mut idx = flat;
            let mut candidate = vec![0.0; d];
            for coord in candidate.iter_mut() {
                let k = idx % points;
                idx /= points;
                *coord = -radius + 2.0 * radius * k as f64 / (points - 1) as f64;
            }
            for (c, o) in candidate.iter_mut().zip(&center) {
                *c += o;
            }
            let v = f(&candidate);
            if v < best_value {
                best_value = v;
                best = candidate;
            }
        }
        center = best;
        // next level spans two cells of the current one
        radius = 2.0 * radius / (points - 1) as f64;
    }
    center
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_max_concave_quadratic() {
        // maximum of −(x−1)² − 2(y+3)² at (1, −3)
        let value = |x: &[f64]| -(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 3.0).powi(2);
        let gradient =
            |x: &[f64]| vec![-2.0 * (x[0] - 1.0), -4.0 * (x[1] + 3.0)];
        let res = newton_max(vec![10.0, 10.0], &value, &gradient, 1e-12, 100);
        assert!((res.x[0] - 1.0).abs() < 1e-9);
        assert!((res.x[1] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn bb_min_ill_conditioned_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] + 1e-4 * x[1] * x[1];
        let res = bb_min(vec![3.0, 5.0], &f, 1e-12, 5000);
        assert!(res.value < 1e-16, "value = {}", res.value);
    }

    #[test]
    fn nelder_mead_plus_polish_on_rosenbrock() {
        let f = |x: &[f64]| {
            let a = 1.0 - x[0];
            let b = x[1] - x[0] * x[0];
            a * a + 100.0 * b * b
        };
        let (x, _) = nelder_mead(&f, &[-1.2, 1.0], 0.5, 4000);
        let (x, fx) = compass_polish(&f, x, 1e-3, 1e-12);
        assert!(fx < 1e-14);
        assert!((x[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn grid_refine_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 0.7).powi(2) + (x[1] + 0.2).powi(2);
        let x = grid_refine(&f, vec![0.0, 0.0], 4.0, 9, 20);
        assert!((x[0] - 0.7).abs() < 1e-4);
        assert!((x[1] + 0.2).abs() < 1e-4);
    }
}
