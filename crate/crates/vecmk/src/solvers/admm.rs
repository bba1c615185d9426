//! Splitting-method solver for the conic dual pair behind the norm
//! computations.
//!
//! For node budget `s` (optional) and pair budget `r`, the primal problem is
//!
//!   P(s, r):  max <f, mu> = sum_i (f_i | u_i)
//!             s.t. ||f_i|| <= s (when s is finite),
//!                  ||f_i - f_j|| <= r d_ij for all pairs,
//!
//! and its conic dual, over node residuals rho and pair flows pi, is
//!
//!   D(s, r):  min s * sum_i ||rho_i|| + r * sum_e d_e ||pi_e||
//!             s.t. rho_i + div(pi)_i = u_i   (rho absent when s is infinite).
//!
//! Every iterate's affine-projected dual point is feasible and yields a valid
//! upper bound; the multiplier estimate of the coupling constraint converges
//! to the primal maximizer and, after a feasibility cleanup, yields a valid
//! lower bound. A projected supergradient ascent runs alongside and
//! contributes primal candidates, with a diminishing c/sqrt(k) step schedule
//! calibrated to the measure's total variation.
//!
//! The affine projection uses the closed-form inverse of I + L for the
//! complete-graph incidence Laplacian L = mI - J, so no linear solves happen
//! inside the loop.

use std::sync::Arc;

use crate::solvers::dykstra::Dykstra;
use crate::solvers::SolverConfig;
use crate::space::FiniteMetricSpace;

/// Constraint radii: `s = None` drops the node constraint entirely (the
/// Lipschitz-only problem, finite exactly on balanced measures).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub s: Option<f64>,
    pub r: f64,
}

/// Certified output of one dual-pair solve, in the measure's original scale.
#[derive(Debug, Clone)]
pub struct PairSolution {
    pub lower: f64,
    pub upper: f64,
    /// Best feasible primal iterate, flat m*n.
    pub f: Vec<f64>,
    /// Dual witness attaining `upper`: node residuals (zero when the node
    /// block is absent) and lexicographic upper-triangle edge flows.
    pub rho: Vec<f64>,
    pub pi: Vec<f64>,
    pub sum_rho: f64,
    pub cost_pi: f64,
    /// min over checkpoints of max(sum_rho, cost_pi); a budget-independent
    /// upper bound for the full bounded-Lipschitz family, with its witness.
    pub mk_bound: f64,
    pub mk_rho: Vec<f64>,
    pub mk_pi: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// (lower, upper) after each checkpoint; brackets only tighten.
    pub trace: Vec<(f64, f64)>,
}

/// Warm-startable solver state, reusable across nearby budgets.
#[derive(Debug, Clone)]
pub struct EngineState {
    z_rho: Vec<f64>,
    w_rho: Vec<f64>,
    z_pi: Vec<f64>,
    w_pi: Vec<f64>,
    beta: f64,
    sg_f: Vec<f64>,
    sg_k: usize,
}

const CHECK_EVERY: usize = 25;
const SG_STEPS_PER_CHECK: usize = 2;
const SG_SWEEP_CAP: usize = 12;

struct Engine {
    m: usize,
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    u: Vec<f64>, // normalized atoms, centered when the node block is absent
    s: Option<f64>,
    r: f64,
    diam: f64,
}

#[inline]
fn block_norm(v: &[f64], i: usize, n: usize) -> f64 {
    v[i * n..(i + 1) * n].iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Engine {
    fn lip_constant(&self, f: &[f64]) -> f64 {
        let n = self.n;
        let mut lip: f64 = 0.0;
        for &(a, b, d) in &self.edges {
            let diff: f64 = (0..n)
                .map(|k| {
                    let t = f[a * n + k] - f[b * n + k];
                    t * t
                })
                .sum::<f64>()
                .sqrt();
            lip = lip.max(diff / d);
        }
        lip
    }

    /// Maps any candidate onto the feasible set: node clip, then a global
    /// rescale against the Lipschitz budget (both operations only shrink the
    /// other constraint's slack, so the result is feasible).
    fn make_feasible(&self, f: &mut [f64]) {
        let n = self.n;
        if self.r == 0.0 {
            let mut mean = vec![0.0; n];
            for i in 0..self.m {
                for k in 0..n {
                    mean[k] += f[i * n + k] / self.m as f64;
                }
            }
            if let Some(s) = self.s {
                let norm = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > s {
                    mean.iter_mut().for_each(|x| *x *= s / norm);
                }
            }
            for i in 0..self.m {
                f[i * n..(i + 1) * n].copy_from_slice(&mean);
            }
            return;
        }
        if let Some(s) = self.s {
            for i in 0..self.m {
                let norm = block_norm(f, i, n);
                if norm > s {
                    let c = s / norm;
                    f[i * n..(i + 1) * n].iter_mut().for_each(|x| *x *= c);
                }
            }
        }
        let lip = self.lip_constant(f);
        if lip > self.r {
            let c = self.r / lip;
            f.iter_mut().for_each(|x| *x *= c);
        }
    }
}

/// Solves the dual pair for the given budget, producing a certified bracket.
/// `iter_cap` overrides the config's iteration budget when present (the
/// golden-section driver shares one budget across many inner solves).
pub fn solve_pair(
    space: &Arc<FiniteMetricSpace>,
    atoms: &[f64],
    n: usize,
    budget: Budget,
    cfg: &SolverConfig,
    warm: Option<EngineState>,
    iter_cap: Option<usize>,
) -> (PairSolution, Option<EngineState>) {
    let m = space.len();
    debug_assert_eq!(atoms.len(), m * n);
    let scale: f64 = (0..m).map(|i| block_norm(atoms, i, n)).sum();

    let mut edges = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in (a + 1)..m {
            edges.push((a, b, space.dist(a, b)));
        }
    }
    let e_count = edges.len();

    if scale == 0.0 {
        // zero-measure fast path; also avoids dividing by the calibration
        return (
            PairSolution {
                lower: 0.0,
                upper: 0.0,
                f: vec![0.0; m * n],
                rho: vec![0.0; m * n],
                pi: vec![0.0; e_count * n],
                sum_rho: 0.0,
                cost_pi: 0.0,
                mk_bound: 0.0,
                mk_rho: vec![0.0; m * n],
                mk_pi: vec![0.0; e_count * n],
                iterations: 0,
                converged: true,
                trace: vec![(0.0, 0.0)],
            },
            None,
        );
    }

    let has_rho = budget.s.is_some();
    let mut u: Vec<f64> = atoms.iter().map(|x| x / scale).collect();
    if !has_rho {
        // the flow divergence always sums to zero, so center the atoms; the
        // caller's balance tolerance bounds the perturbation
        for k in 0..n {
            let mean: f64 = (0..m).map(|i| u[i * n + k]).sum::<f64>() / m as f64;
            for i in 0..m {
                u[i * n + k] -= mean;
            }
        }
    }

    let eng = Engine {
        m,
        n,
        edges,
        u,
        s: budget.s,
        r: budget.r,
        diam: space.diameter(),
    };

    let mut st = warm.filter(|w| {
        w.z_pi.len() == e_count * n && w.z_rho.len() == if has_rho { m * n } else { 0 }
    });
    let mut state = st.take().unwrap_or_else(|| EngineState {
        z_rho: vec![0.0; if has_rho { m * n } else { 0 }],
        w_rho: vec![0.0; if has_rho { m * n } else { 0 }],
        z_pi: vec![0.0; e_count * n],
        w_pi: vec![0.0; e_count * n],
        beta: 1.0,
        sg_f: vec![0.0; m * n],
        sg_k: 0,
    });

    let mut x_rho = vec![0.0; state.z_rho.len()];
    let mut x_pi = vec![0.0; e_count * n];
    let mut resid = vec![0.0; m * n];
    let mut lambda = vec![0.0; m * n];
    let mut f_hat = vec![0.0; m * n];
    let mut div_pi = vec![0.0; m * n];
    let mut zc_rho = state.z_rho.clone();
    let mut zc_pi = state.z_pi.clone();

    let mut f_best = vec![0.0; m * n];
    let mut lower = 0.0; // f = 0 is always feasible
    let mut upper = f64::INFINITY;
    let mut rho_wit = vec![0.0; m * n];
    let mut pi_wit = vec![0.0; e_count * n];
    let mut sum_rho_wit = 0.0;
    let mut cost_pi_wit = 0.0;
    let mut mk_bound = f64::INFINITY;
    let mut mk_rho = vec![0.0; m * n];
    let mut mk_pi = vec![0.0; e_count * n];
    let mut trace = Vec::new();

    // supergradient calibration: step scale from the feasible set's size in
    // normalized units (total variation of u is 1 after scaling)
    let sg_scale = match budget.s {
        Some(s) if budget.r > 0.0 => s.min(budget.r * eng.diam),
        Some(s) => s,
        None => budget.r * eng.diam,
    };
    let mut dykstra = Dykstra::new(space, n, budget.s, budget.r);

    let max_iter = iter_cap.unwrap_or(cfg.max_iter).max(1);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;

        // x-step: exact projection onto {rho + div(pi) = u}
        resid.copy_from_slice(&eng.u);
        if has_rho {
            for (res, (z, w)) in resid.iter_mut().zip(state.z_rho.iter().zip(&state.w_rho)) {
                *res -= z - w;
            }
        }
        for (e, &(a, b, _)) in eng.edges.iter().enumerate() {
            for k in 0..n {
                let v = state.z_pi[e * n + k] - state.w_pi[e * n + k];
                resid[b * n + k] -= v;
                resid[a * n + k] += v;
            }
        }
        for k in 0..n {
            let colsum: f64 = (0..m).map(|i| resid[i * n + k]).sum();
            if has_rho {
                // (I + L)^{-1} = (I + J) / (m + 1) for the complete graph
                for i in 0..m {
                    lambda[i * n + k] = (resid[i * n + k] + colsum) / (m as f64 + 1.0);
                }
            } else {
                // L restricted to zero-sum vectors is m * I
                for i in 0..m {
                    lambda[i * n + k] = (resid[i * n + k] - colsum / m as f64) / m as f64;
                }
            }
        }
        if has_rho {
            for i in 0..m * n {
                x_rho[i] = (state.z_rho[i] - state.w_rho[i]) + lambda[i];
            }
        }
        for (e, &(a, b, _)) in eng.edges.iter().enumerate() {
            for k in 0..n {
                x_pi[e * n + k] = (state.z_pi[e * n + k] - state.w_pi[e * n + k])
                    + lambda[b * n + k]
                    - lambda[a * n + k];
            }
        }

        let checkpoint = iterations % CHECK_EVERY == 0 || iterations == max_iter;
        if checkpoint {
            // dual bound from the affine-feasible x
            let s_eff = budget.s.unwrap_or(0.0);
            let sum_rho: f64 = if has_rho {
                (0..m).map(|i| block_norm(&x_rho, i, n)).sum()
            } else {
                0.0
            };
            let cost_pi: f64 = eng
                .edges
                .iter()
                .enumerate()
                .map(|(e, &(_, _, d))| d * block_norm(&x_pi, e, n))
                .sum();
            let upper_cand = s_eff * sum_rho + budget.r * cost_pi;
            if upper_cand < upper {
                upper = upper_cand;
                if has_rho {
                    rho_wit.copy_from_slice(&x_rho);
                }
                pi_wit.copy_from_slice(&x_pi);
                sum_rho_wit = sum_rho;
                cost_pi_wit = cost_pi;
            }
            if has_rho {
                // Budget-free bound for the bounded-Lipschitz family. The
                // plain max can stall above the optimum when the dual optimal
                // set is flat, so rebalance along flow scaling: for any theta
                // in [0,1], (u - theta div(pi), theta pi) is also feasible,
                // and the bound is convex in theta.
                div_pi.iter_mut().for_each(|x| *x = 0.0);
                for (e, &(a, b, _)) in eng.edges.iter().enumerate() {
                    for k in 0..n {
                        div_pi[b * n + k] += x_pi[e * n + k];
                        div_pi[a * n + k] -= x_pi[e * n + k];
                    }
                }
                let bound_at = |theta: f64| -> f64 {
                    let mut srho = 0.0;
                    for i in 0..m {
                        let norm: f64 = (0..n)
                            .map(|k| {
                                let v = eng.u[i * n + k] - theta * div_pi[i * n + k];
                                v * v
                            })
                            .sum::<f64>()
                            .sqrt();
                        srho += norm;
                    }
                    srho.max(theta * cost_pi)
                };
                let (mut t_lo, mut t_hi) = (0.0f64, 1.0f64);
                for _ in 0..60 {
                    let t1 = t_lo + (t_hi - t_lo) / 3.0;
                    let t2 = t_hi - (t_hi - t_lo) / 3.0;
                    if bound_at(t1) <= bound_at(t2) {
                        t_hi = t2;
                    } else {
                        t_lo = t1;
                    }
                }
                let theta = 0.5 * (t_lo + t_hi);
                let cand = sum_rho.max(cost_pi).min(bound_at(theta));
                if cand < mk_bound {
                    mk_bound = cand;
                    if bound_at(theta) <= sum_rho.max(cost_pi) {
                        for i in 0..m * n {
                            mk_rho[i] = eng.u[i] - theta * div_pi[i];
                        }
                        mk_pi.iter_mut().zip(&x_pi).for_each(|(o, &x)| *o = theta * x);
                    } else {
                        mk_rho.copy_from_slice(&x_rho);
                        mk_pi.copy_from_slice(&x_pi);
                    }
                }
            }

            // primal candidate from the coupling multiplier estimate
            if has_rho {
                for i in 0..m * n {
                    f_hat[i] = state.beta * state.w_rho[i];
                }
            } else {
                f_hat.iter_mut().for_each(|x| *x = 0.0);
                for (e, &(a, b, _)) in eng.edges.iter().enumerate() {
                    for k in 0..n {
                        let y = state.beta * state.w_pi[e * n + k];
                        f_hat[b * n + k] += y / m as f64;
                        f_hat[a * n + k] -= y / m as f64;
                    }
                }
            }
            eng.make_feasible(&mut f_hat);
            let obj = dot(&f_hat, &eng.u);
            if obj > lower {
                lower = obj;
                f_best.copy_from_slice(&f_hat);
                state.sg_f.copy_from_slice(&f_hat);
            }

            // projected supergradient ascent on the same feasible set
            if sg_scale > 0.0 && budget.r > 0.0 {
                for _ in 0..SG_STEPS_PER_CHECK {
                    state.sg_k += 1;
                    let alpha = sg_scale / (state.sg_k as f64).sqrt();
                    for i in 0..m * n {
                        state.sg_f[i] += alpha * eng.u[i];
                    }
                    dykstra.project(&mut state.sg_f, cfg.feas_tol, SG_SWEEP_CAP);
                    eng.make_feasible(&mut state.sg_f);
                    let obj = dot(&state.sg_f, &eng.u);
                    if obj > lower {
                        lower = obj;
                        f_best.copy_from_slice(&state.sg_f);
                    }
                }
            }

            trace.push((lower * scale, upper * scale));
            let mid = 0.5 * (lower + upper) * scale;
            if (upper - lower) * scale <= cfg.tol_gap * mid.abs().max(1.0) {
                converged = true;
            }

            // residual balancing keeps the two ADMM residuals comparable
            let mut pr2 = 0.0;
            for i in 0..x_rho.len() {
                let d = x_rho[i] - state.z_rho[i];
                pr2 += d * d;
            }
            for i in 0..x_pi.len() {
                let d = x_pi[i] - state.z_pi[i];
                pr2 += d * d;
            }
            let mut dr2 = 0.0;
            for i in 0..state.z_rho.len() {
                let d = state.z_rho[i] - zc_rho[i];
                dr2 += d * d;
            }
            for i in 0..state.z_pi.len() {
                let d = state.z_pi[i] - zc_pi[i];
                dr2 += d * d;
            }
            let (pr, dr) = (pr2.sqrt(), state.beta * dr2.sqrt());
            if pr > 10.0 * dr && state.beta < 1e8 {
                state.beta *= 2.0;
                state.w_rho.iter_mut().for_each(|x| *x *= 0.5);
                state.w_pi.iter_mut().for_each(|x| *x *= 0.5);
            } else if dr > 10.0 * pr && state.beta > 1e-8 {
                state.beta *= 0.5;
                state.w_rho.iter_mut().for_each(|x| *x *= 2.0);
                state.w_pi.iter_mut().for_each(|x| *x *= 2.0);
            }
            zc_rho.copy_from_slice(&state.z_rho);
            zc_pi.copy_from_slice(&state.z_pi);

            if converged {
                break;
            }
        }

        // z-step: blockwise shrinkage of x + w
        if has_rho {
            let tau = budget.s.unwrap() / state.beta;
            for i in 0..m {
                let mut t2 = 0.0;
                for k in 0..n {
                    let t = x_rho[i * n + k] + state.w_rho[i * n + k];
                    state.z_rho[i * n + k] = t;
                    t2 += t * t;
                }
                let norm = t2.sqrt();
                let c = if norm <= tau { 0.0 } else { 1.0 - tau / norm };
                for k in 0..n {
                    state.z_rho[i * n + k] *= c;
                }
            }
        }
        for (e, &(_, _, d)) in eng.edges.iter().enumerate() {
            let tau = budget.r * d / state.beta;
            let mut t2 = 0.0;
            for k in 0..n {
                let t = x_pi[e * n + k] + state.w_pi[e * n + k];
                state.z_pi[e * n + k] = t;
                t2 += t * t;
            }
            let norm = t2.sqrt();
            let c = if norm <= tau { 0.0 } else { 1.0 - tau / norm };
            for k in 0..n {
                state.z_pi[e * n + k] *= c;
            }
        }

        // w-step
        for i in 0..state.w_rho.len() {
            state.w_rho[i] += x_rho[i] - state.z_rho[i];
        }
        for i in 0..state.w_pi.len() {
            state.w_pi[i] += x_pi[i] - state.z_pi[i];
        }
    }

    let sol = PairSolution {
        lower: lower * scale,
        upper: upper * scale,
        f: f_best,
        rho: rho_wit.iter().map(|x| x * scale).collect(),
        pi: pi_wit.iter().map(|x| x * scale).collect(),
        sum_rho: sum_rho_wit * scale,
        cost_pi: cost_pi_wit * scale,
        mk_bound: if mk_bound.is_finite() { mk_bound * scale } else { upper * scale },
        mk_rho: mk_rho.iter().map(|x| x * scale).collect(),
        mk_pi: mk_pi.iter().map(|x| x * scale).collect(),
        iterations,
        converged,
        trace,
    };
    (sol, Some(state))
}
