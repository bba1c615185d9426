//! Public norm and distance computations: variation, Monge-Kantorovich,
//! modified Monge-Kantorovich, Hanin, weak* seminorms, and the metrics these
//! norms induce on the underlying space.
//!
//! Complex measures are embedded into real coordinates before any solve;
//! multiplying a function by a unit scalar changes neither its sup norm nor
//! its Lipschitz constant, so the supremum of |integral| equals the supremum
//! of the real part, which the embedding computes.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functions::{integrate, FunctionError, FunctionSample};
use crate::linalg::HVector;
use crate::measures::{DiscreteVectorMeasure, MeasureError};
use crate::solvers::{
    solve_pair, Budget, DualWitness, FlowField, NormCertificate, PairSolution, SolverConfig,
    SolverError,
};
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Variation,
    MK,
    MKStar,
    Hanin,
}

impl NormKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormKind::Variation => "variation",
            NormKind::MK => "mk",
            NormKind::MKStar => "mkstar",
            NormKind::Hanin => "hanin",
        }
    }
}

#[derive(Debug, Error)]
pub enum NormError {
    /// The modified Monge-Kantorovich norm is infinite off the balanced
    /// subspace; a typed error is more testable than an infinity sentinel.
    #[error("measure has nonzero total mass (||mu(T)|| = {mass_norm:e}); the modified Monge-Kantorovich norm is finite only on balanced measures")]
    MassNotZero { mass_norm: f64 },
    #[error("expected a unit vector, got norm {norm}")]
    NotUnitVector { norm: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// The variation norm |mu|(T) with its exact certificate: the witness takes
/// each value along its own atom, and the trivial decomposition rho = mu,
/// pi = 0 matches the value from above.
pub fn variation_norm(mu: &DiscreteVectorMeasure) -> NormCertificate {
    let real = mu.to_real();
    let (atoms, n) = real.real_coords();
    let m = real.space().len();
    let value = real.total_variation();
    let mut witness = vec![0.0; m * n];
    for i in 0..m {
        let norm: f64 = atoms[i * n..(i + 1) * n].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for k in 0..n {
                witness[i * n + k] = atoms[i * n + k] / norm;
            }
        }
    }
    let f = FunctionSample::from_real_coords(real.space().clone(), &witness, n);
    let residual = atoms.chunks(n).map(|c| HVector::Real(c.to_vec())).collect();
    let dual = DualWitness::Split { residual, flow: FlowField::zero(m, n) };
    NormCertificate::exact(value, f, dual)
}

/// The Monge-Kantorovich norm: supremum of |integral of f| over the unit
/// ball of ||f|| + ||f||_L.
///
/// Splitting the budget as sup <= s, Lipschitz <= 1-s turns the problem into
/// a one-dimensional concave maximization over s in [0, 1] (feasible sets
/// are superadditive under convex combinations of budgets), solved by
/// golden-section search over certified inner solves. For any inner dual
/// splitting mu = rho + div(pi), max over s of the weighted bound equals
/// max(sum||rho_i||, cost(pi)), which is a budget-free upper bound; the
/// certificate keeps the best one seen.
pub fn mk_norm(
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<NormCertificate, NormError> {
    let real = mu.to_real();
    let (atoms, n) = real.real_coords();
    let space = real.space().clone();
    let m = space.len();
    let tv = real.total_variation();
    if tv == 0.0 {
        return Ok(NormCertificate::zero(space, n));
    }

    // exact evaluation at s = 1: constant functions, value ||mu(T)||
    let mut mass = vec![0.0; n];
    for i in 0..m {
        for k in 0..n {
            mass[k] += atoms[i * n + k];
        }
    }
    let mass_norm: f64 = mass.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut lower = mass_norm;
    let mut f_best = vec![0.0; m * n];
    if mass_norm > 0.0 {
        for i in 0..m {
            for k in 0..n {
                f_best[i * n + k] = mass[k] / mass_norm;
            }
        }
    }
    // Theorem-5 style bound from the trivial splitting rho = mu, pi = 0
    let mut upper = tv;
    let mut rho_best = atoms.clone();
    let mut pi_best = vec![0.0; m * (m - 1) / 2 * n];
    let mut iterations = 0usize;
    // dual splittings from earlier probes, kept to balance sum||rho|| against
    // cost(pi) across probes: the constraint set is affine, so convex
    // combinations of splittings are splittings
    let mut snaps: Vec<DualSnap> = Vec::new();
    let edge_dist: Vec<f64> = {
        let mut d = Vec::with_capacity(m * (m - 1) / 2);
        for a in 0..m {
            for b in (a + 1)..m {
                d.push(space.dist(a, b));
            }
        }
        d
    };

    let finish = |lower: f64,
                  upper: f64,
                  f_best: &[f64],
                  rho: &[f64],
                  pi: &[f64],
                  iterations: usize| {
        let witness = FunctionSample::from_real_coords(space.clone(), f_best, n);
        let residual = rho.chunks(n).map(|c| HVector::Real(c.to_vec())).collect();
        let flow = FlowField::from_edge_flows(m, n, pi);
        NormCertificate::from_bracket(
            lower,
            upper,
            witness,
            DualWitness::Split { residual, flow },
            iterations,
        )
    };
    let tol_ok =
        |lo: f64, up: f64| (up - lo) <= cfg.tol_gap * (0.5 * (lo + up)).abs().max(1.0);

    if tol_ok(lower, upper) {
        return Ok(finish(lower, upper, &f_best, &rho_best, &pi_best, 0));
    }

    let probe_cap = (cfg.max_iter / 16).max(2000);
    let mut warm = None;
    let mut probe = |s: f64,
                     warm: &mut Option<crate::solvers::EngineState>,
                     lower: &mut f64,
                     upper: &mut f64,
                     f_best: &mut Vec<f64>,
                     rho_best: &mut Vec<f64>,
                     pi_best: &mut Vec<f64>,
                     snaps: &mut Vec<DualSnap>,
                     iterations: &mut usize|
     -> f64 {
        let (sol, state) = solve_pair(
            &space,
            &atoms,
            n,
            Budget { s: Some(s), r: 1.0 - s },
            cfg,
            warm.take(),
            Some(probe_cap),
        );
        *warm = state;
        *iterations += sol.iterations;
        if sol.lower > *lower {
            *lower = sol.lower;
            f_best.copy_from_slice(&sol.f);
        }
        if sol.mk_bound < *upper {
            *upper = sol.mk_bound;
            rho_best.copy_from_slice(&sol.mk_rho);
            pi_best.copy_from_slice(&sol.mk_pi);
        }
        let snap =
            DualSnap { rho: sol.rho.clone(), pi: sol.pi.clone(), a: sol.sum_rho, b: sol.cost_pi };
        for old in snaps.iter() {
            if (old.a - old.b).signum() == (snap.a - snap.b).signum() {
                continue;
            }
            let (bound, rho_c, pi_c) = balance_splittings(old, &snap, &edge_dist, n);
            if bound < *upper {
                *upper = bound;
                rho_best.copy_from_slice(&rho_c);
                pi_best.copy_from_slice(&pi_c);
            }
        }
        snaps.push(snap);
        snaps.sort_by(|p, q| {
            (p.a - p.b).abs().partial_cmp(&(q.a - q.b).abs()).unwrap()
        });
        // keep the most balanced few on each side
        let mut plus = 0;
        let mut minus = 0;
        snaps.retain(|p| {
            if p.a >= p.b {
                plus += 1;
                plus <= 4
            } else {
                minus += 1;
                minus <= 4
            }
        });
        0.5 * (sol.lower + sol.upper)
    };

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut v1 = probe(
        x1, &mut warm, &mut lower, &mut upper, &mut f_best, &mut rho_best, &mut pi_best,
        &mut snaps, &mut iterations,
    );
    let mut v2 = probe(
        x2, &mut warm, &mut lower, &mut upper, &mut f_best, &mut rho_best, &mut pi_best,
        &mut snaps, &mut iterations,
    );
    let mut evals = 2usize;
    loop {
        if tol_ok(lower, upper) {
            return Ok(finish(lower, upper, &f_best, &rho_best, &pi_best, iterations));
        }
        if evals >= 64 || iterations >= cfg.max_iter || (b - a) < 1e-12 {
            break;
        }
        if v1 < v2 {
            a = x1;
            x1 = x2;
            v1 = v2;
            x2 = a + INV_PHI * (b - a);
            v2 = probe(
                x2, &mut warm, &mut lower, &mut upper, &mut f_best, &mut rho_best,
                &mut pi_best, &mut snaps, &mut iterations,
            );
        } else {
            b = x2;
            x2 = x1;
            v2 = v1;
            x1 = b - INV_PHI * (b - a);
            v1 = probe(
                x1, &mut warm, &mut lower, &mut upper, &mut f_best, &mut rho_best,
                &mut pi_best, &mut snaps, &mut iterations,
            );
        }
        evals += 1;
    }
    if tol_ok(lower, upper) {
        return Ok(finish(lower, upper, &f_best, &rho_best, &pi_best, iterations));
    }
    Err(NormError::Solver(SolverError::NonConvergence(Box::new(finish(
        lower, upper, &f_best, &rho_best, &pi_best, iterations,
    )))))
}

/// One dual splitting mu = rho + div(pi) with its norm sums
/// a = sum_i ||rho_i|| and b = cost(pi).
struct DualSnap {
    rho: Vec<f64>,
    pi: Vec<f64>,
    a: f64,
    b: f64,
}

/// Minimizes max(sum||rho||, cost(pi)) over convex combinations of two
/// splittings; the objective is convex in the mixing weight, so ternary
/// search is exact. Returns the bound with its witness.
fn balance_splittings(
    p: &DualSnap,
    q: &DualSnap,
    edge_dist: &[f64],
    n: usize,
) -> (f64, Vec<f64>, Vec<f64>) {
    let m = p.rho.len() / n;
    let eval = |gamma: f64| -> f64 {
        let mut srho = 0.0;
        for i in 0..m {
            let norm: f64 = (0..n)
                .map(|k| {
                    let v = (1.0 - gamma) * p.rho[i * n + k] + gamma * q.rho[i * n + k];
                    v * v
                })
                .sum::<f64>()
                .sqrt();
            srho += norm;
        }
        let mut cost = 0.0;
        for (e, &d) in edge_dist.iter().enumerate() {
            let norm: f64 = (0..n)
                .map(|k| {
                    let v = (1.0 - gamma) * p.pi[e * n + k] + gamma * q.pi[e * n + k];
                    v * v
                })
                .sum::<f64>()
                .sqrt();
            cost += d * norm;
        }
        srho.max(cost)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..48 {
        let t1 = lo + (hi - lo) / 3.0;
        let t2 = hi - (hi - lo) / 3.0;
        if eval(t1) <= eval(t2) {
            hi = t2;
        } else {
            lo = t1;
        }
    }
    let gamma = 0.5 * (lo + hi);
    let rho_c: Vec<f64> = p
        .rho
        .iter()
        .zip(&q.rho)
        .map(|(&x, &y)| (1.0 - gamma) * x + gamma * y)
        .collect();
    let pi_c: Vec<f64> = p
        .pi
        .iter()
        .zip(&q.pi)
        .map(|(&x, &y)| (1.0 - gamma) * x + gamma * y)
        .collect();
    (eval(gamma), rho_c, pi_c)
}

/// The modified Monge-Kantorovich norm: supremum of |integral of f| over
/// {||f||_L <= 1}, finite exactly on balanced measures. The primal
/// Lipschitz-ball maximization is bracketed by the flow-based dual minimum.
pub fn mkstar_norm(
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<NormCertificate, NormError> {
    if !mu.is_balanced() {
        return Err(NormError::MassNotZero { mass_norm: mu.total_mass().norm() });
    }
    let real = mu.to_real();
    let (atoms, n) = real.real_coords();
    let (sol, _) =
        solve_pair(real.space(), &atoms, n, Budget { s: None, r: 1.0 }, cfg, None, None);
    finish_pair(&real, &sol, false)
}

/// Extended-value variant: +infinity off the balanced subspace instead of an
/// error.
pub enum ExtendedNorm {
    Finite(NormCertificate),
    Infinite,
}

pub fn mkstar_norm_extended(
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<ExtendedNorm, NormError> {
    if !mu.is_balanced() {
        return Ok(ExtendedNorm::Infinite);
    }
    mkstar_norm(mu, cfg).map(ExtendedNorm::Finite)
}

/// The Hanin norm: inf over balanced nu of ||nu||*_MK + ||mu - nu||.
/// Substituting nu = div(pi) and the Beckmann form of ||nu||*_MK makes this
/// the single convex program min cost(pi) + sum_i ||mu_i - div(pi)_i||, whose
/// primal side is the maximization over {||f|| <= 1, ||f||_L <= 1}.
pub fn hanin_norm(
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<NormCertificate, NormError> {
    let real = mu.to_real();
    let (atoms, n) = real.real_coords();
    let (sol, _) = solve_pair(
        real.space(),
        &atoms,
        n,
        Budget { s: Some(1.0), r: 1.0 },
        cfg,
        None,
        None,
    );
    finish_pair(&real, &sol, true)
}

fn finish_pair(
    real: &DiscreteVectorMeasure,
    sol: &PairSolution,
    split: bool,
) -> Result<NormCertificate, NormError> {
    let cert = crate::solvers::certificate_from_pair(real, sol, split);
    if sol.converged {
        Ok(cert)
    } else {
        Err(NormError::Solver(SolverError::NonConvergence(Box::new(cert))))
    }
}

/// Dispatch by norm kind.
pub fn norm_certificate(
    kind: NormKind,
    mu: &DiscreteVectorMeasure,
    cfg: &SolverConfig,
) -> Result<NormCertificate, NormError> {
    match kind {
        NormKind::Variation => Ok(variation_norm(mu)),
        NormKind::MK => mk_norm(mu, cfg),
        NormKind::MKStar => mkstar_norm(mu, cfg),
        NormKind::Hanin => hanin_norm(mu, cfg),
    }
}

/// The weak* seminorm p_f(mu) = |integral of f with respect to mu|.
pub fn weak_seminorm(
    f: &FunctionSample,
    mu: &DiscreteVectorMeasure,
) -> Result<f64, FunctionError> {
    Ok(integrate(f, mu)?.abs())
}

/// The metric the chosen norm induces on the space:
/// rho_p(t, s) = p(delta_t x - delta_s x) for a fixed unit vector x.
/// Pair solves are independent and run concurrently; each is deterministic,
/// so scheduling does not affect the result.
pub fn induced_metric(
    space: &Arc<FiniteMetricSpace>,
    kind: NormKind,
    x: &HVector,
    cfg: &SolverConfig,
) -> Result<Vec<Vec<f64>>, NormError> {
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(NormError::NotUnitVector { norm });
    }
    let m = space.len();
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let entries: Result<Vec<f64>, NormError> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mu = DiscreteVectorMeasure::dirac_difference(space.clone(), i, j, x)?;
            Ok(norm_certificate(kind, &mu, cfg)?.value)
        })
        .collect();
    let entries = entries?;
    let mut matrix = vec![vec![0.0; m]; m];
    for (&(i, j), &v) in pairs.iter().zip(&entries) {
        matrix[i][j] = v;
        matrix[j][i] = v;
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn two_point(d: f64) -> Arc<FiniteMetricSpace> {
        Arc::new(
            FiniteMetricSpace::validate(
                vec!["a".into(), "b".into()],
                vec![vec![0.0, d], vec![d, 0.0]],
            )
            .unwrap(),
        )
    }

    fn random_space(rng: &mut StdRng, m: usize) -> Arc<FiniteMetricSpace> {
        let scale = rng.gen_range(0.4..3.0);
        let coords: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0) * scale).collect())
            .collect();
        Arc::new(
            FiniteMetricSpace::from_euclidean_coords(
                (0..m).map(|i| i.to_string()).collect(),
                &coords,
            )
            .unwrap(),
        )
    }

    fn random_unit(rng: &mut StdRng, dim: usize) -> HVector {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-3 {
                return HVector::Real(v.iter().map(|x| x / n).collect());
            }
        }
    }

    #[test]
    fn dirac_mk_norm_is_one() {
        let mut rng = StdRng::seed_from_u64(101);
        let cfg = SolverConfig::default();
        for _ in 0..5 {
            let m = rng.gen_range(2..7);
            let s = random_space(&mut rng, m);
            let x = random_unit(&mut rng, 3);
            let t = rng.gen_range(0..m);
            let mu = DiscreteVectorMeasure::dirac(s, t, x).unwrap();
            let cert = mk_norm(&mu, &cfg).unwrap();
            assert!((cert.value - 1.0).abs() < 1e-6, "got {}", cert.value);
        }
    }

    #[test]
    fn two_point_closed_forms() {
        let cfg = SolverConfig::default();
        for d in [0.5, 1.0, 3.0] {
            let s = two_point(d);
            let x = HVector::Real(vec![1.0]);
            let mu = DiscreteVectorMeasure::dirac_difference(s, 0, 1, &x).unwrap();

            let mk = mk_norm(&mu, &cfg).unwrap();
            assert!((mk.value - 2.0 * d / (2.0 + d)).abs() < 1e-6, "mk d={d}: {}", mk.value);

            let mkstar = mkstar_norm(&mu, &cfg).unwrap();
            assert!((mkstar.value - d).abs() < 1e-6, "mkstar d={d}: {}", mkstar.value);

            let hanin = hanin_norm(&mu, &cfg).unwrap();
            assert!((hanin.value - d.min(2.0)).abs() < 1e-6, "hanin d={d}: {}", hanin.value);

            let var = variation_norm(&mu);
            assert!((var.value - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mkstar_dirac_difference_is_the_distance() {
        let mut rng = StdRng::seed_from_u64(103);
        let cfg = SolverConfig::default();
        for _ in 0..5 {
            let m = rng.gen_range(2..7);
            let s = random_space(&mut rng, m);
            let dim = rng.gen_range(1..4);
            let x = random_unit(&mut rng, dim);
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            let mu = DiscreteVectorMeasure::dirac_difference(s.clone(), i, j, &x).unwrap();
            let cert = mkstar_norm(&mu, &cfg).unwrap();
            assert!(
                (cert.value - s.dist(i, j)).abs() < 1e-6,
                "{} vs {}",
                cert.value,
                s.dist(i, j)
            );
        }
    }

    #[test]
    fn mkstar_rejects_unbalanced_measures() {
        let s = two_point(1.0);
        let mu = DiscreteVectorMeasure::dirac(s, 0, HVector::Real(vec![1.0])).unwrap();
        match mkstar_norm(&mu, &SolverConfig::default()) {
            Err(NormError::MassNotZero { mass_norm }) => assert!((mass_norm - 1.0).abs() < 1e-12),
            other => panic!("expected MassNotZero, got {other:?}"),
        }
        match mkstar_norm_extended(&mu, &SolverConfig::default()).unwrap() {
            ExtendedNorm::Infinite => {}
            ExtendedNorm::Finite(_) => panic!("expected infinite extension"),
        }
    }

    #[test]
    fn hanin_dirac_is_one() {
        let mut rng = StdRng::seed_from_u64(107);
        let cfg = SolverConfig::default();
        for _ in 0..5 {
            let m = rng.gen_range(2..7);
            let s = random_space(&mut rng, m);
            let x = random_unit(&mut rng, 2);
            let mu = DiscreteVectorMeasure::dirac(s, rng.gen_range(0..m), x).unwrap();
            let cert = hanin_norm(&mu, &cfg).unwrap();
            assert!((cert.value - 1.0).abs() < 1e-6, "got {}", cert.value);
        }
    }

    #[test]
    fn complex_dirac_difference_matches_real_theory() {
        // a complex unit atom embeds to a real unit atom; Theorem-19 value
        let s = two_point(0.8);
        let cfg = SolverConfig::default();
        let x = HVector::Complex(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        assert!((x.norm() - 1.0).abs() < 1e-15);
        let mu = DiscreteVectorMeasure::dirac_difference(s, 0, 1, &x).unwrap();
        assert_eq!(mu.field(), Field::Complex);
        let cert = mkstar_norm(&mu, &cfg).unwrap();
        assert!((cert.value - 0.8).abs() < 1e-6);
    }

    #[test]
    fn mk_dominated_by_variation_and_distance() {
        let mut rng = StdRng::seed_from_u64(109);
        let cfg = SolverConfig::default();
        for _ in 0..5 {
            let m = rng.gen_range(2..6);
            let s = random_space(&mut rng, m);
            let x = random_unit(&mut rng, 2);
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            let mu = DiscreteVectorMeasure::dirac_difference(s.clone(), i, j, &x).unwrap();
            let cert = mk_norm(&mu, &cfg).unwrap();
            assert!(cert.lower_bound <= s.dist(i, j) + 1e-9);
            assert!(cert.lower_bound <= mu.total_variation() + 1e-9);
        }
    }

    #[test]
    fn induced_metric_mkstar_reproduces_the_distance_matrix() {
        let mut rng = StdRng::seed_from_u64(113);
        let cfg = SolverConfig::default();
        let s = random_space(&mut rng, 5);
        let x = random_unit(&mut rng, 2);
        let rho = induced_metric(&s, NormKind::MKStar, &x, &cfg).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!(
                    (rho[i][j] - s.dist(i, j)).abs() < 1e-6,
                    "({i},{j}): {} vs {}",
                    rho[i][j],
                    s.dist(i, j)
                );
            }
        }
    }

    #[test]
    fn induced_metric_variation_is_discrete() {
        let mut rng = StdRng::seed_from_u64(127);
        let s = random_space(&mut rng, 4);
        let x = random_unit(&mut rng, 3);
        let rho = induced_metric(&s, NormKind::Variation, &x, &SolverConfig::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.0 } else { 2.0 };
                assert!((rho[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn induced_metric_requires_unit_vector() {
        let s = two_point(1.0);
        let x = HVector::Real(vec![2.0]);
        assert!(matches!(
            induced_metric(&s, NormKind::MK, &x, &SolverConfig::default()),
            Err(NormError::NotUnitVector { .. })
        ));
    }

    #[test]
    fn weak_seminorm_against_dirac() {
        let s = two_point(1.0);
        let f = FunctionSample::new(
            s.clone(),
            vec![HVector::Real(vec![1.0, 2.0]), HVector::Real(vec![0.5, -1.0])],
        )
        .unwrap();
        let x = HVector::Real(vec![0.25, 0.5]);
        let mu = DiscreteVectorMeasure::dirac(s, 1, x.clone()).unwrap();
        let p = weak_seminorm(&f, &mu).unwrap();
        let want = f.value(1).inner(&x).unwrap().abs();
        assert!((p - want).abs() < 1e-15);
    }

    #[test]
    fn mk_norm_zero_measure() {
        let s = two_point(1.0);
        let mu = DiscreteVectorMeasure::zero(s, Field::Real, 2);
        let cert = mk_norm(&mu, &SolverConfig::default()).unwrap();
        assert_eq!(cert.value, 0.0);
        assert_eq!(cert.gap, 0.0);
    }

    #[test]
    fn certificates_bracket_scalar_exact_values() {
        let mut rng = StdRng::seed_from_u64(131);
        let cfg = SolverConfig::default();
        for _ in 0..8 {
            let m = rng.gen_range(2..5);
            let s = random_space(&mut rng, m);
            let mut w: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = w.iter().sum::<f64>() / m as f64;
            w.iter_mut().for_each(|v| *v -= mean);
            let mu = DiscreteVectorMeasure::new(
                s,
                w.iter().map(|&v| HVector::Real(vec![v])).collect(),
            )
            .unwrap();
            let exact = crate::solvers::scalar_kr_exact(&mu).unwrap();
            let cert = mkstar_norm(&mu, &cfg).unwrap();
            assert!(
                cert.lower_bound <= exact + 1e-7 && exact <= cert.upper_bound + 1e-7,
                "exact {exact} outside [{}, {}]",
                cert.lower_bound,
                cert.upper_bound
            );
            assert!((cert.value - exact).abs() < 1e-6);
        }
    }
}
