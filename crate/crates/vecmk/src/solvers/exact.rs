//! Exact reference solver for the scalar Lipschitz-dual linear program
//!
//!   max sum_i f_i mu_i   s.t.  |f_i - f_j| <= d_ij,
//!
//! for balanced scalar measures. The feasible set, pinned at f_0 = 0 (the
//! objective is shift-invariant on balanced measures), is a compact polytope
//! whose vertices are determined by spanning trees of the complete graph with
//! an orientation sign per edge: walking the tree from the root assigns
//! f_child = f_parent +- d(parent, child). Enumerating all trees (Prufer
//! sequences) and sign patterns visits every vertex, so the maximum over
//! feasible candidates is the exact optimum. Ties break lexicographically by
//! enumeration order, which is deterministic.
//!
//! This path is independent of the iterative solvers it checks.

use std::sync::Arc;

use crate::linalg::{Field, HVector};
use crate::measures::DiscreteVectorMeasure;
use crate::solvers::SolverError;
use crate::space::FiniteMetricSpace;

/// Exact optimum of the scalar Kantorovich-Rubinstein program. Intended for
/// small spaces: the enumeration visits m^(m-2) * 2^(m-1) candidates.
pub fn scalar_kr_exact(mu: &DiscreteVectorMeasure) -> Result<f64, SolverError> {
    if mu.dim() != 1 || mu.field() != Field::Real {
        return Err(SolverError::NotScalar { dim: mu.dim() });
    }
    if !mu.is_balanced() {
        return Err(SolverError::NotBalanced { mass_norm: mu.total_mass().norm() });
    }
    let weights: Vec<f64> = mu
        .atoms()
        .iter()
        .map(|a| match a {
            HVector::Real(v) => v[0],
            HVector::Complex(_) => unreachable!(),
        })
        .collect();
    Ok(scalar_kr_exact_weights(mu.space(), &weights))
}

pub(crate) fn scalar_kr_exact_weights(space: &Arc<FiniteMetricSpace>, weights: &[f64]) -> f64 {
    let m = space.len();
    if weights.iter().all(|w| *w == 0.0) {
        return 0.0;
    }
    let mut best = 0.0f64; // f = 0 is feasible
    let mut f = vec![0.0; m];
    for_each_spanning_tree(m, |edges| {
        // orient each tree edge both ways
        for signs in 0..(1u32 << (m - 1)) {
            if !assign_from_tree(space, edges, signs, &mut f) {
                continue;
            }
            if !feasible(space, &f) {
                continue;
            }
            let obj: f64 = f.iter().zip(weights).map(|(a, b)| a * b).sum();
            if obj > best {
                best = obj;
            }
        }
    });
    best
}

/// Walks the tree from node 0 assigning f values; returns false only if the
/// tree is malformed (never happens for Prufer-decoded trees).
fn assign_from_tree(
    space: &FiniteMetricSpace,
    edges: &[(usize, usize)],
    signs: u32,
    f: &mut [f64],
) -> bool {
    let m = f.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m]; // (neighbor, edge idx)
    for (idx, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, idx));
        adj[b].push((a, idx));
    }
    let mut seen = vec![false; m];
    let mut stack = vec![0usize];
    seen[0] = true;
    f[0] = 0.0;
    let mut visited = 1;
    while let Some(i) = stack.pop() {
        for &(j, idx) in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                visited += 1;
                let sign = if signs & (1 << idx) != 0 { 1.0 } else { -1.0 };
                f[j] = f[i] + sign * space.dist(i, j);
                stack.push(j);
            }
        }
    }
    visited == m
}

fn feasible(space: &FiniteMetricSpace, f: &[f64]) -> bool {
    let m = f.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if (f[i] - f[j]).abs() > space.dist(i, j) + 1e-12 {
                return false;
            }
        }
    }
    true
}

/// Enumerates all labeled spanning trees of K_m via Prufer sequences, calling
/// the visitor with each tree's edge list.
fn for_each_spanning_tree<F: FnMut(&[(usize, usize)])>(m: usize, mut visit: F) {
    if m == 2 {
        visit(&[(0, 1)]);
        return;
    }
    let len = m - 2;
    let mut seq = vec![0usize; len];
    let mut edges = vec![(0usize, 0usize); m - 1];
    loop {
        prufer_decode(&seq, m, &mut edges);
        visit(&edges);
        // next sequence in base m
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            seq[pos] += 1;
            if seq[pos] < m {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

fn prufer_decode(seq: &[usize], m: usize, edges: &mut [(usize, usize)]) {
    let mut degree = vec![1usize; m];
    for &s in seq {
        degree[s] += 1;
    }
    let mut used = vec![false; m];
    let mut k = 0;
    for &s in seq {
        // smallest leaf not yet used
        let leaf = (0..m).find(|&i| degree[i] == 1 && !used[i]).unwrap();
        used[leaf] = true;
        degree[s] -= 1;
        edges[k] = (leaf.min(s), leaf.max(s));
        k += 1;
    }
    let rest: Vec<usize> = (0..m).filter(|&i| !used[i] && degree[i] == 1).collect();
    edges[k] = (rest[0], rest[1]);
}
