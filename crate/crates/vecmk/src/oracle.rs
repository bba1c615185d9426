//! Brute-force reference computations, independent of the iterative solver
//! path they cross-check.
//!
//! The bounded-Lipschitz maximization for a scalar measure on two or three
//! points is solved by exhaustive grid search: all but the last coordinate
//! range over a uniform grid on [-1, 1], and the last coordinate is maximized
//! exactly (the constraint as a function of one coordinate is convex
//! piecewise-linear, so its feasible set is an interval whose endpoints solve
//! one of finitely many piece equations).

use std::sync::Arc;

use crate::space::FiniteMetricSpace;

/// Exact maximum of `w_last * t` over the feasible values of the last
/// coordinate, the others fixed. Returns None when no feasible value exists.
///
/// `fixed`: (value, distance-to-last-point) per fixed point;
/// `a`: max norm of fixed values; `l`: Lipschitz constant among fixed pairs.
fn best_last_coordinate(fixed: &[(f64, f64)], a: f64, l: f64, w_last: f64) -> Option<f64> {
    const TOL: f64 = 1e-9;
    if a + l > 1.0 + TOL {
        return None;
    }
    let g = |t: f64| -> f64 {
        let sup = a.max(t.abs());
        let mut lip = l;
        for &(fi, di) in fixed {
            lip = lip.max((t - fi).abs() / di);
        }
        sup + lip
    };

    let mut candidates: Vec<f64> = vec![0.0, a, -a, 1.0 - l, -(1.0 - l)];
    for &(fi, di) in fixed {
        candidates.push(fi);
        // sup-piece = a, lip-piece from this fixed point
        candidates.push(fi + (1.0 - a) * di);
        candidates.push(fi - (1.0 - a) * di);
        // sup-piece = |t|, lip-piece from this fixed point: four sign combos
        candidates.push((di + fi) / (di + 1.0));
        candidates.push((fi - di) / (1.0 + di));
        if (di - 1.0).abs() > 1e-15 {
            candidates.push((di - fi) / (di - 1.0));
            candidates.push((di + fi) / (1.0 - di));
        }
    }

    let mut best: Option<f64> = None;
    for &t in &candidates {
        if !t.is_finite() || g(t) > 1.0 + TOL {
            continue;
        }
        best = Some(match best {
            None => t,
            Some(b) => {
                if w_last > 0.0 {
                    b.max(t)
                } else if w_last < 0.0 {
                    b.min(t)
                } else {
                    b
                }
            }
        });
    }
    best
}

/// Grid search for the scalar bounded-Lipschitz supremum
/// sup { sum_i f_i w_i : max|f_i| + max |f_i - f_j|/d_ij <= 1 }
/// on spaces of two or three points. `step` is the grid pitch per gridded
/// coordinate (the last coordinate is exact).
///
/// # Panics
/// Panics when the space has more than three points: an exhaustive grid over
/// four or more coordinates is computationally infeasible at useful pitches.
pub fn mk_grid_search(space: &Arc<FiniteMetricSpace>, weights: &[f64], step: f64) -> f64 {
    let m = space.len();
    assert!(m == 2 || m == 3, "grid oracle supports 2 or 3 points, got {m}");
    assert_eq!(weights.len(), m);
    assert!(step > 0.0);

    let ticks: i64 = (1.0 / step).round() as i64;
    let grid = |k: i64| k as f64 * step;
    let mut best = 0.0f64; // f = 0 is always feasible

    match m {
        2 => {
            let d = space.dist(0, 1);
            for k in -ticks..=ticks {
                let f0 = grid(k);
                if f0.abs() > 1.0 {
                    continue;
                }
                if let Some(t) = best_last_coordinate(&[(f0, d)], f0.abs(), 0.0, weights[1]) {
                    best = best.max(weights[0] * f0 + weights[1] * t);
                }
            }
        }
        3 => {
            let d01 = space.dist(0, 1);
            let d02 = space.dist(0, 2);
            let d12 = space.dist(1, 2);
            for k0 in -ticks..=ticks {
                let f0 = grid(k0);
                for k1 in -ticks..=ticks {
                    let f1 = grid(k1);
                    let a = f0.abs().max(f1.abs());
                    let l = (f0 - f1).abs() / d01;
                    if a + l > 1.0 + 1e-9 {
                        continue;
                    }
                    if let Some(t) =
                        best_last_coordinate(&[(f0, d02), (f1, d12)], a, l, weights[2])
                    {
                        best = best.max(weights[0] * f0 + weights[1] * f1 + weights[2] * t);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    best
}
