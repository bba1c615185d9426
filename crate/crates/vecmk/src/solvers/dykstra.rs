//! Dykstra's alternating projections onto intersections of norm-ball
//! constraints on function samples. Plain cyclic projection would converge to
//! a point of the intersection but not the nearest one, which breaks the
//! Fejer property the tests rely on.

use crate::functions::FunctionSample;
use crate::solvers::{SolverConfig, SolverError};
use crate::space::FiniteMetricSpace;

/// Shared projection kernel on flat real coordinates. Constraints:
/// `||f_i|| <= s` per node (when `s` is finite) and `||f_i - f_j|| <= r d_ij`
/// per pair. Each pairwise projection moves the two values toward their
/// midpoint along their difference.
pub(crate) struct Dykstra {
    m: usize,
    n: usize,
    s: Option<f64>,
    r: f64,
    edges: Vec<(usize, usize, f64)>,
    node_corr: Vec<f64>, // m*n
    pair_corr: Vec<f64>, // E*2n
}

impl Dykstra {
    pub fn new(space: &FiniteMetricSpace, n: usize, s: Option<f64>, r: f64) -> Self {
        let m = space.len();
        let mut edges = Vec::with_capacity(m * (m - 1) / 2);
        for a in 0..m {
            for b in (a + 1)..m {
                edges.push((a, b, space.dist(a, b)));
            }
        }
        let e = edges.len();
        Self {
            m,
            n,
            s,
            r,
            edges,
            node_corr: vec![0.0; m * n],
            pair_corr: vec![0.0; e * 2 * n],
        }
    }

    pub fn reset(&mut self) {
        self.node_corr.iter_mut().for_each(|x| *x = 0.0);
        self.pair_corr.iter_mut().for_each(|x| *x = 0.0);
    }

    fn node_norm(f: &[f64], i: usize, n: usize) -> f64 {
        f[i * n..(i + 1) * n].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum constraint violation of `f`.
    pub fn violation(&self, f: &[f64]) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        if let Some(s) = self.s {
            for i in 0..self.m {
                worst = worst.max(Self::node_norm(f, i, n) - s);
            }
        }
        for &(a, b, d) in &self.edges {
            let diff: f64 = (0..n)
                .map(|k| {
                    let t = f[a * n + k] - f[b * n + k];
                    t * t
                })
                .sum::<f64>()
                .sqrt();
            worst = worst.max(diff - self.r * d);
        }
        worst.max(0.0)
    }

    /// Runs sweeps until the violation drops below `feas_tol` or the sweep
    /// cap is hit. Returns (sweeps used, final violation).
    pub fn project(&mut self, f: &mut [f64], feas_tol: f64, max_sweeps: usize) -> (usize, f64) {
        self.reset();
        let n = self.n;
        for sweep in 1..=max_sweeps {
            if let Some(s) = self.s {
                for i in 0..self.m {
                    // v = f_i + correction; project onto the s-ball
                    let mut vnorm2 = 0.0;
                    for k in 0..n {
                        let v = f[i * n + k] + self.node_corr[i * n + k];
                        f[i * n + k] = v;
                        vnorm2 += v * v;
                    }
                    let vnorm = vnorm2.sqrt();
                    let scale = if vnorm > s { s / vnorm } else { 1.0 };
                    for k in 0..n {
                        let v = f[i * n + k];
                        let p = v * scale;
                        self.node_corr[i * n + k] = v - p;
                        f[i * n + k] = p;
                    }
                }
            }
            for (e, &(a, b, d)) in self.edges.iter().enumerate() {
                let cap = self.r * d;
                let corr = &mut self.pair_corr[e * 2 * n..(e + 1) * 2 * n];
                let mut diff2 = 0.0;
                for k in 0..n {
                    let va = f[a * n + k] + corr[k];
                    let vb = f[b * n + k] + corr[n + k];
                    f[a * n + k] = va;
                    f[b * n + k] = vb;
                    let t = va - vb;
                    diff2 += t * t;
                }
                let diff = diff2.sqrt();
                if diff > cap {
                    // pull both endpoints toward their midpoint
                    let t = 0.5 * (diff - cap) / diff;
                    for k in 0..n {
                        let va = f[a * n + k];
                        let vb = f[b * n + k];
                        let shift = t * (va - vb);
                        let pa = va - shift;
                        let pb = vb + shift;
                        corr[k] = va - pa;
                        corr[n + k] = vb - pb;
                        f[a * n + k] = pa;
                        f[b * n + k] = pb;
                    }
                } else {
                    corr.iter_mut().for_each(|x| *x = 0.0);
                }
            }
            let v = self.violation(f);
            if v <= feas_tol {
                return (sweep, v);
            }
        }
        (max_sweeps, self.violation(f))
    }
}

/// Projects a function sample onto {lip_constant <= r} by Dykstra's
/// alternating projections over the pairwise constraints. Complex input is
/// embedded into real coordinates first (the embedding is an isometry, so
/// the projection commutes with it); the result is always real-valued.
pub fn project_lip_ball(
    f: &FunctionSample,
    r: f64,
    cfg: &SolverConfig,
) -> Result<FunctionSample, SolverError> {
    if r < 0.0 {
        return Err(SolverError::InvalidBudget { s: None, r });
    }
    let (mut flat, n) = f.real_coords();
    let space = f.space().clone();
    if r == 0.0 {
        // the zero-radius ball is the constants; the nearest one is the mean
        let m = space.len();
        let mut mean = vec![0.0; n];
        for i in 0..m {
            for k in 0..n {
                mean[k] += flat[i * n + k] / m as f64;
            }
        }
        for i in 0..m {
            flat[i * n..(i + 1) * n].copy_from_slice(&mean);
        }
        return Ok(FunctionSample::from_real_coords(space, &flat, n));
    }
    let mut dykstra = Dykstra::new(&space, n, None, r);
    let cap = cfg.max_iter.max(1);
    let (sweeps, violation) = dykstra.project(&mut flat, cfg.feas_tol, cap);
    if violation > cfg.feas_tol {
        return Err(SolverError::ProjectionNonConvergence { sweeps, violation });
    }
    Ok(FunctionSample::from_real_coords(space, &flat, n))
}
