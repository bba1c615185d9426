//! Finite metric spaces: validated distance matrices, distances to sets,
//! diameters, and a uniform interval discretizer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for the metric-axiom checks. Inputs often come from
/// floating-point coordinate computations, so strict equality would reject
/// legitimate geometric instances.
pub const METRIC_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("a metric space needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("distance matrix is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("label count {labels} does not match matrix side {side}")]
    LabelMismatch { labels: usize, side: usize },
    #[error("dist[{i}][{i}] = {value} but the diagonal must be zero")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("dist[{i}][{j}] = 0 for distinct points {i} and {j}")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("dist[{i}][{j}] = {dij} differs from dist[{j}][{i}] = {dji}")]
    NotSymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("triangle inequality fails at ({i},{j},{via}): d({i},{j}) = {dij} > {bound} = d({i},{via}) + d({via},{j})")]
    TriangleViolation { i: usize, j: usize, via: usize, dij: f64, bound: f64 },
    #[error("distance entry at ({i},{j}) is not a finite nonnegative number: {value}")]
    BadEntry { i: usize, j: usize, value: f64 },
    #[error("point set must be nonempty")]
    EmptySet,
    #[error("point index {0} out of range for a space with {1} points")]
    UnknownPoint(usize, usize),
    #[error("interval grid needs A > 0 and m >= 2, got A = {a}, m = {m}")]
    BadGridSize { a: f64, m: usize },
    #[error("unsupported metric {0:?} for coordinate input")]
    UnknownMetric(String),
}

/// A finite metric space: labeled points and a validated distance matrix.
///
/// Points are indexed `0..m-1` internally; labels are for I/O only.
/// Immutable after validation, safe to share across concurrent readers.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    m: usize,
    dist: Vec<f64>, // row-major m*m
}

impl FiniteMetricSpace {
    /// Validates the metric axioms and builds the space, or reports the first
    /// violated axiom. Rows are scanned in index order, so the reported
    /// offender is deterministic.
    pub fn validate(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self, SpaceError> {
        let m = dist.len();
        if m < 2 {
            return Err(SpaceError::TooFewPoints(m));
        }
        for (row, r) in dist.iter().enumerate() {
            if r.len() != m {
                return Err(SpaceError::NotSquare { row, len: r.len(), expected: m });
            }
        }
        if labels.len() != m {
            return Err(SpaceError::LabelMismatch { labels: labels.len(), side: m });
        }
        let mut flat = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let v = dist[i][j];
                if !v.is_finite() || v < 0.0 {
                    return Err(SpaceError::BadEntry { i, j, value: v });
                }
                flat[i * m + j] = v;
            }
        }
        for i in 0..m {
            let v = flat[i * m + i];
            if v.abs() > METRIC_TOL {
                return Err(SpaceError::NonzeroDiagonal { i, value: v });
            }
            flat[i * m + i] = 0.0;
        }
        for i in 0..m {
            for j in 0..m {
                if i != j && flat[i * m + j] <= METRIC_TOL {
                    return Err(SpaceError::ZeroOffDiagonal { i, j });
                }
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let dij = flat[i * m + j];
                let dji = flat[j * m + i];
                if (dij - dji).abs() > METRIC_TOL {
                    return Err(SpaceError::NotSymmetric { i, j, dij, dji });
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                if j == i {
                    continue;
                }
                for via in 0..m {
                    if via == i || via == j {
                        continue;
                    }
                    let dij = flat[i * m + j];
                    let bound = flat[i * m + via] + flat[via * m + j];
                    if dij > bound + METRIC_TOL {
                        return Err(SpaceError::TriangleViolation { i, j, via, dij, bound });
                    }
                }
            }
        }
        Ok(Self { labels, m, dist: flat })
    }

    /// Builds the space from point coordinates under the Euclidean metric,
    /// then validates the derived matrix.
    pub fn from_euclidean_coords(
        labels: Vec<String>,
        coords: &[Vec<f64>],
    ) -> Result<Self, SpaceError> {
        let m = coords.len();
        let mut dist = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let d2: f64 = coords[i]
                    .iter()
                    .zip(coords[j].iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                dist[i][j] = d2.sqrt();
            }
        }
        Self::validate(labels, dist)
    }

    /// m equally spaced points 0, A/(m-1), ..., A with the absolute-difference
    /// metric; a discretization of the interval [0, A].
    pub fn interval_grid(a: f64, m: usize) -> Result<Self, SpaceError> {
        if !(a > 0.0) || m < 2 {
            return Err(SpaceError::BadGridSize { a, m });
        }
        let step = a / (m - 1) as f64;
        let labels = (0..m).map(|i| format!("{}", i as f64 * step)).collect();
        let mut dist = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                dist[i][j] = (i as f64 - j as f64).abs() * step;
            }
        }
        Self::validate(labels, dist)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false // validation enforces m >= 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.m + j]
    }

    pub fn dist_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|i| self.dist[i * self.m..(i + 1) * self.m].to_vec())
            .collect()
    }

    /// diam(T) = max over all pairs of dist.
    pub fn diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }

    /// d1(t, A) = min over a in A of d(t, a); zero exactly when t lies in A.
    pub fn dist_point_set(&self, t: usize, set: &[usize]) -> Result<f64, SpaceError> {
        if set.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        self.check_point(t)?;
        let mut best = f64::INFINITY;
        for &a in set {
            self.check_point(a)?;
            best = best.min(self.dist(t, a));
        }
        Ok(best)
    }

    /// delta(A, B) = min over pairs (a, b) of d(a, b).
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Result<f64, SpaceError> {
        if a.is_empty() || b.is_empty() {
            return Err(SpaceError::EmptySet);
        }
        let mut best = f64::INFINITY;
        for &i in a {
            best = best.min(self.dist_point_set(i, b)?);
        }
        Ok(best)
    }

    pub fn check_point(&self, t: usize) -> Result<(), SpaceError> {
        if t >= self.m {
            return Err(SpaceError::UnknownPoint(t, self.m));
        }
        Ok(())
    }

    /// Complement of a point set, in ascending index order.
    pub fn complement(&self, set: &[usize]) -> Vec<usize> {
        (0..self.m).filter(|i| !set.contains(i)).collect()
    }
}

/// JSON form: either an explicit matrix or Euclidean coordinates from which
/// the matrix is derived and then validated.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<FiniteMetricSpace, SpaceError> {
        match (&self.dist, &self.coords) {
            (Some(d), _) => FiniteMetricSpace::validate(self.labels.clone(), d.clone()),
            (None, Some(c)) => {
                match self.metric.as_deref() {
                    None | Some("euclidean") => {}
                    Some(other) => return Err(SpaceError::UnknownMetric(other.to_string())),
                }
                FiniteMetricSpace::from_euclidean_coords(self.labels.clone(), c)
            }
            (None, None) => Err(SpaceError::TooFewPoints(0)),
        }
    }

    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        Self {
            labels: space.labels().to_vec(),
            dist: Some(space.dist_rows()),
            coords: None,
            metric: None,
        }
    }
}
