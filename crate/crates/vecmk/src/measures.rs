//! Discrete vector measures on a finite metric space: one Hilbert-space atom
//! per point, set evaluation, variation, and linear arithmetic.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{Field, HVector, LinalgError, Scalar};
use crate::space::{FiniteMetricSpace, SpaceError};

/// Relative balance tolerance for membership in cabv(X, 0): float sums of
/// canceling atoms rarely hit exact zero.
pub const BALANCE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("measure lives on a different space")]
    SpaceMismatch,
    #[error("atom count {0} does not match point count {1}")]
    AtomCountMismatch(usize, usize),
    #[error("atoms must share dimension and field")]
    MixedAtoms,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An atomic vector measure: atom `i` is the value on the singleton of point
/// `i`. Sigma-additivity is automatic on a finite space.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteVectorMeasure {
    space: Arc<FiniteMetricSpace>,
    atoms: Vec<HVector>,
}

impl DiscreteVectorMeasure {
    pub fn new(
        space: Arc<FiniteMetricSpace>,
        atoms: Vec<HVector>,
    ) -> Result<Self, MeasureError> {
        if atoms.len() != space.len() {
            return Err(MeasureError::AtomCountMismatch(atoms.len(), space.len()));
        }
        let field = atoms[0].field();
        let dim = atoms[0].dim();
        if atoms.iter().any(|a| a.field() != field || a.dim() != dim) {
            return Err(MeasureError::MixedAtoms);
        }
        Ok(Self { space, atoms })
    }

    pub fn zero(space: Arc<FiniteMetricSpace>, field: Field, dim: usize) -> Self {
        let atoms = (0..space.len()).map(|_| HVector::zero(field, dim)).collect();
        Self { space, atoms }
    }

    /// The Dirac measure with atom `x` at point `t`: total variation ||x||.
    pub fn dirac(
        space: Arc<FiniteMetricSpace>,
        t: usize,
        x: HVector,
    ) -> Result<Self, MeasureError> {
        space.check_point(t)?;
        let mut atoms: Vec<HVector> = (0..space.len())
            .map(|_| HVector::zero(x.field(), x.dim()))
            .collect();
        atoms[t] = x;
        Ok(Self { space, atoms })
    }

    /// delta_a x - delta_b x, the building block of the induced metrics.
    pub fn dirac_difference(
        space: Arc<FiniteMetricSpace>,
        a: usize,
        b: usize,
        x: &HVector,
    ) -> Result<Self, MeasureError> {
        let da = Self::dirac(space.clone(), a, x.clone())?;
        let db = Self::dirac(space, b, x.clone())?;
        da.sub(&db)
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn atoms(&self) -> &[HVector] {
        &self.atoms
    }

    pub fn atom(&self, t: usize) -> &HVector {
        &self.atoms[t]
    }

    pub fn field(&self) -> Field {
        self.atoms[0].field()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    /// mu(A) for A a set of point indices; duplicate indices count once.
    pub fn evaluate(&self, set: &[usize]) -> Result<HVector, MeasureError> {
        let mut seen = vec![false; self.space.len()];
        let mut acc = HVector::zero(self.field(), self.dim());
        for &t in set {
            self.space.check_point(t)?;
            if !seen[t] {
                seen[t] = true;
                acc = acc.add(&self.atoms[t])?;
            }
        }
        Ok(acc)
    }

    /// |mu|(T) = sum of atom norms; the singleton partition attains the
    /// supremum over partitions by the triangle inequality.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(HVector::norm).sum()
    }

    /// mu(T), the total mass.
    pub fn total_mass(&self) -> HVector {
        let mut acc = HVector::zero(self.field(), self.dim());
        for a in &self.atoms {
            acc = acc.add(a).expect("atoms are homogeneous");
        }
        acc
    }

    /// Membership in cabv(X, 0) up to the balance tolerance.
    pub fn is_balanced(&self) -> bool {
        self.total_mass().norm() <= BALANCE_TOL * self.total_variation().max(1.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, MeasureError> {
        if self.space != other.space {
            return Err(MeasureError::SpaceMismatch);
        }
        let atoms = self
            .atoms
            .iter()
            .zip(&other.atoms)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { space: self.space.clone(), atoms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MeasureError> {
        self.add(&other.scale(&Scalar::Real(-1.0))?)
    }

    pub fn scale(&self, alpha: &Scalar) -> Result<Self, MeasureError> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| a.scale(alpha))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { space: self.space.clone(), atoms })
    }

    /// Real embedding: complex atoms become interleaved (Re, Im) real atoms.
    /// Every norm computed downstream is preserved.
    pub fn to_real(&self) -> Self {
        if self.field() == Field::Real {
            return self.clone();
        }
        let atoms = self.atoms.iter().map(|a| a.complexify_to_real()).collect();
        Self { space: self.space.clone(), atoms }
    }

    /// Flat row-major (point-major) real coordinates, for the solver stack.
    pub fn real_coords(&self) -> (Vec<f64>, usize) {
        let real = self.to_real();
        let n = real.dim();
        let mut flat = Vec::with_capacity(real.space.len() * n);
        for a in &real.atoms {
            match a {
                HVector::Real(v) => flat.extend_from_slice(v),
                HVector::Complex(_) => unreachable!("to_real() embeds"),
            }
        }
        (flat, n)
    }
}
