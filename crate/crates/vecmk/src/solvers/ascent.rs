//! Public solver entry points: the linear maximization over the constrained
//! function balls (primal side, bracketed by its paired dual) and the
//! flow-based dual minimization (Beckmann form).

use crate::measures::DiscreteVectorMeasure;
use crate::solvers::admm::{solve_pair, Budget};
use crate::solvers::{DualWitness, FlowField, NormCertificate, SolverConfig, SolverError};
use crate::functions::FunctionSample;
use crate::linalg::{Field, HVector};

/// Constraint set for the linear maximization: Lipschitz ball only, or a
/// split sup/Lipschitz budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BallConstraint {
    LipOnly(f64),
    BLSplit(f64, f64),
}

fn require_real(mu: &DiscreteVectorMeasure) -> Result<(), SolverError> {
    if mu.field() != Field::Real {
        return Err(SolverError::RequiresRealField);
    }
    Ok(())
}

pub(crate) fn certificate_from_pair(
    mu: &DiscreteVectorMeasure,
    sol: &crate::solvers::PairSolution,
    split_witness: bool,
) -> NormCertificate {
    let space = mu.space().clone();
    let n = mu.dim();
    let witness = FunctionSample::from_real_coords(space.clone(), &sol.f, n);
    let flow = FlowField::from_edge_flows(space.len(), n, &sol.pi);
    let dual = if split_witness {
        let residual = sol.rho.chunks(n).map(|c| HVector::Real(c.to_vec())).collect();
        DualWitness::Split { residual, flow }
    } else {
        DualWitness::Flow(flow)
    };
    NormCertificate::from_bracket(sol.lower, sol.upper, witness, dual, sol.iterations)
}

/// Supergradient ascent on <f, mu> over the requested ball, with projection
/// after each step, certified by the dual splitting maintained alongside.
/// The measure must be real; complex inputs are embedded by the callers.
pub fn maximize_linear_over_ball(
    mu: &DiscreteVectorMeasure,
    constraint: BallConstraint,
    cfg: &SolverConfig,
) -> Result<NormCertificate, SolverError> {
    require_real(mu)?;
    let (budget, split) = match constraint {
        BallConstraint::LipOnly(r) => {
            if r < 0.0 {
                return Err(SolverError::InvalidBudget { s: None, r });
            }
            if !mu.is_balanced() {
                // the objective is unbounded along constant functions
                return Err(SolverError::NotBalanced { mass_norm: mu.total_mass().norm() });
            }
            (Budget { s: None, r }, false)
        }
        BallConstraint::BLSplit(s, r) => {
            if s < 0.0 || r < 0.0 {
                return Err(SolverError::InvalidBudget { s: Some(s), r });
            }
            (Budget { s: Some(s), r }, true)
        }
    };
    let (atoms, n) = mu.real_coords();
    let (sol, _) = solve_pair(mu.space(), &atoms, n, budget, cfg, None, None);
    let cert = certificate_from_pair(mu, &sol, split);
    if sol.converged {
        Ok(cert)
    } else {
        Err(SolverError::NonConvergence(Box::new(cert)))
    }
}

/// Minimizes the flow cost sum d(t_i, t_j) ||pi_ij|| subject to the flow's
/// divergence matching the measure's atoms. By weak duality the result upper
/// bounds the Lipschitz-ball supremum; the certificate's lower bound comes
/// from the recovered potentials, closing the gap.
pub fn beckmann_min(
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<NormCertificate, SolverError> {
    require_real(mu)?;
    if !mu.is_balanced() {
        return Err(SolverError::NotBalanced { mass_norm: mu.total_mass().norm() });
    }
    let (atoms, n) = mu.real_coords();
    let (sol, _) = solve_pair(mu.space(), &atoms, n, Budget { s: None, r: 1.0 }, cfg, None, None);
    let cert = certificate_from_pair(mu, &sol, false);
    if sol.converged {
        Ok(cert)
    } else {
        Err(SolverError::NonConvergence(Box::new(cert)))
    }
}
