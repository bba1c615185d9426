//! Convex-optimization machinery shared by the norm computations:
//! constraint-set projections, supergradient ascent, flow-based dual
//! minimization, and certificate assembly.
//!
//! The solver stack operates on real coordinates only; complex instances are
//! embedded by the callers (the embedding preserves every computed norm).

mod admm;
mod ascent;
mod dykstra;
mod exact;

pub use admm::{solve_pair, Budget, EngineState, PairSolution};
pub use ascent::{beckmann_min, maximize_linear_over_ball, BallConstraint};
pub(crate) use ascent::certificate_from_pair;
pub use dykstra::project_lip_ball;
pub use exact::scalar_kr_exact;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::FunctionSample;
use crate::linalg::HVector;
use crate::space::FiniteMetricSpace;

/// Solver configuration; all fields optional in JSON with these defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol_gap: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub feas_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol_gap: 1e-8, max_iter: 50_000, seed: 0, feas_tol: 1e-9 }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver did not close the duality gap within the iteration cap (bracket [{}, {}])",
            .0.lower_bound, .0.upper_bound)]
    NonConvergence(Box<NormCertificate>),
    #[error("projection did not reach feasibility within {sweeps} sweeps (violation {violation:e})")]
    ProjectionNonConvergence { sweeps: usize, violation: f64 },
    #[error("measure is not balanced: ||mu(T)|| = {mass_norm:e}")]
    NotBalanced { mass_norm: f64 },
    #[error("operation requires a scalar real measure, got dimension {dim}")]
    NotScalar { dim: usize },
    #[error("operation requires real coordinates; embed complex input first")]
    RequiresRealField,
    #[error("constraint radii must be nonnegative, got s = {s:?}, r = {r}")]
    InvalidBudget { s: Option<f64>, r: f64 },
}

/// Flow variables of the conic dual: one real vector per ordered point pair,
/// diagonal zero. Divergence is the net inflow per point; the cost weights
/// each pair by its distance.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    m: usize,
    n: usize,
    data: Vec<f64>, // m*m*n, row-major over (i, j), diagonal blocks zero
}

impl FlowField {
    pub fn zero(m: usize, n: usize) -> Self {
        Self { m, n, data: vec![0.0; m * m * n] }
    }

    /// Builds the field from upper-triangle edge flows in lexicographic edge
    /// order (0,1), (0,2), ..., (m-2,m-1).
    pub fn from_edge_flows(m: usize, n: usize, edge_flows: &[f64]) -> Self {
        let mut field = Self::zero(m, n);
        let mut e = 0;
        for a in 0..m {
            for b in (a + 1)..m {
                field.data[(a * m + b) * n..(a * m + b + 1) * n]
                    .copy_from_slice(&edge_flows[e * n..(e + 1) * n]);
                e += 1;
            }
        }
        field
    }

    pub fn points(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &[f64] {
        &self.data[(i * self.m + j) * self.n..(i * self.m + j + 1) * self.n]
    }

    /// cost(pi) = sum over i != j of d(t_i, t_j) ||pi_ij||.
    pub fn cost(&self, space: &FiniteMetricSpace) -> f64 {
        let mut total = 0.0;
        for i in 0..self.m {
            for j in 0..self.m {
                if i != j {
                    let block = self.get(i, j);
                    let norm = block.iter().map(|x| x * x).sum::<f64>().sqrt();
                    total += space.dist(i, j) * norm;
                }
            }
        }
        total
    }

    /// divergence(pi)_i = sum_j (pi_ji - pi_ij), one vector per point.
    pub fn divergence(&self) -> Vec<Vec<f64>> {
        let mut div = vec![vec![0.0; self.n]; self.m];
        for i in 0..self.m {
            for j in 0..self.m {
                if i == j {
                    continue;
                }
                let out = self.get(i, j).to_vec();
                for k in 0..self.n {
                    div[i][k] -= out[k];
                    div[j][k] += out[k];
                }
            }
        }
        div
    }
}

/// Certified output of a norm computation: a bracket [lower, upper], the
/// midpoint as the reported value, and the witnesses attaining each side.
#[derive(Debug, Clone)]
pub struct NormCertificate {
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub gap: f64,
    pub primal_witness: FunctionSample,
    pub dual_witness: DualWitness,
    pub iterations: usize,
}

/// Dual-side witness: a bare flow for the Lipschitz-only problem, or a
/// residual decomposition mu = rho + div(pi) for the split problems.
#[derive(Debug, Clone)]
pub enum DualWitness {
    Flow(FlowField),
    Split { residual: Vec<HVector>, flow: FlowField },
}

impl DualWitness {
    pub fn flow(&self) -> &FlowField {
        match self {
            DualWitness::Flow(f) => f,
            DualWitness::Split { flow, .. } => flow,
        }
    }
}

impl NormCertificate {
    pub(crate) fn exact(
        value: f64,
        primal_witness: FunctionSample,
        dual_witness: DualWitness,
    ) -> Self {
        Self {
            value,
            lower_bound: value,
            upper_bound: value,
            gap: 0.0,
            primal_witness,
            dual_witness,
            iterations: 0,
        }
    }

    pub(crate) fn zero(space: Arc<FiniteMetricSpace>, n: usize) -> Self {
        let m = space.len();
        let f = FunctionSample::from_real_coords(space, &vec![0.0; m * n], n);
        Self::exact(0.0, f, DualWitness::Flow(FlowField::zero(m, n)))
    }

    /// Midpoint of the certified bracket; property tests compare endpoints,
    /// never the midpoint alone.
    pub(crate) fn from_bracket(
        lower: f64,
        upper: f64,
        primal_witness: FunctionSample,
        dual_witness: DualWitness,
        iterations: usize,
    ) -> Self {
        let gap = (upper - lower).max(0.0);
        Self {
            value: 0.5 * (lower + upper),
            lower_bound: lower,
            upper_bound: upper,
            gap,
            primal_witness,
            dual_witness,
            iterations,
        }
    }

    pub fn converged(&self, cfg: &SolverConfig) -> bool {
        self.gap <= cfg.tol_gap * self.value.abs().max(1.0)
    }
}

/// JSON form of a certificate, as emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub witness_f: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl CertificateReport {
    pub fn new(kind: &str, cert: &NormCertificate) -> Self {
        let (flat, n) = cert.primal_witness.real_coords();
        let witness_f = flat.chunks(n).map(|c| c.to_vec()).collect();
        Self {
            kind: kind.to_string(),
            value: cert.value,
            lower: cert.lower_bound,
            upper: cert.upper_bound,
            gap: cert.gap,
            witness_f,
            iterations: cert.iterations,
        }
    }
}
