//! Coordinate Hilbert space: real or complex vectors, inner products, and the
//! real embedding of the complex case.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("scalar field mismatch: {0:?} vs {1:?}")]
    FieldMismatch(Field, Field),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Real,
    Complex,
}

/// Scalar over the tagged field. Complex values carry a `Complex64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn zero(field: Field) -> Self {
        match field {
            Field::Real => Scalar::Real(0.0),
            Field::Complex => Scalar::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Real(_) => Field::Real,
            Scalar::Complex(_) => Field::Complex,
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            Scalar::Real(x) => x.abs(),
            Scalar::Complex(z) => z.norm(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Real(x) => Scalar::Real(*x),
            Scalar::Complex(z) => Scalar::Complex(z.conj()),
        }
    }

    pub fn re(&self) -> f64 {
        match self {
            Scalar::Real(x) => *x,
            Scalar::Complex(z) => z.re,
        }
    }

    /// Promotes to a complex value regardless of field.
    pub fn as_complex(&self) -> Complex64 {
        match self {
            Scalar::Real(x) => Complex64::new(*x, 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a + b),
            _ => Scalar::Complex(self.as_complex() + other.as_complex()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a * b),
            _ => Scalar::Complex(self.as_complex() * other.as_complex()),
        }
    }
}

/// Element of the coordinate Hilbert space R^n or C^n.
#[derive(Debug, Clone, PartialEq)]
pub enum HVector {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl HVector {
    pub fn zero(field: Field, dim: usize) -> Self {
        match field {
            Field::Real => HVector::Real(vec![0.0; dim]),
            Field::Complex => HVector::Complex(vec![Complex64::new(0.0, 0.0); dim]),
        }
    }

    /// Canonical basis vector e_k.
    pub fn basis(field: Field, dim: usize, k: usize) -> Self {
        let mut v = Self::zero(field, dim);
        match &mut v {
            HVector::Real(x) => x[k] = 1.0,
            HVector::Complex(x) => x[k] = Complex64::new(1.0, 0.0),
        }
        v
    }

    pub fn field(&self) -> Field {
        match self {
            HVector::Real(_) => Field::Real,
            HVector::Complex(_) => Field::Complex,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            HVector::Real(v) => v.len(),
            HVector::Complex(v) => v.len(),
        }
    }

    fn check_compat(&self, other: &HVector) -> Result<(), LinalgError> {
        if self.field() != other.field() {
            return Err(LinalgError::FieldMismatch(self.field(), other.field()));
        }
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// (x|y) = sum_i x_i * conj(y_i); conjugate-symmetric in the complex case.
    pub fn inner(&self, other: &HVector) -> Result<Scalar, LinalgError> {
        self.check_compat(other)?;
        match (self, other) {
            (HVector::Real(a), HVector::Real(b)) => {
                Ok(Scalar::Real(a.iter().zip(b).map(|(x, y)| x * y).sum()))
            }
            (HVector::Complex(a), HVector::Complex(b)) => Ok(Scalar::Complex(
                a.iter().zip(b).map(|(x, y)| x * y.conj()).sum(),
            )),
            _ => unreachable!("fields already checked"),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            HVector::Real(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            HVector::Complex(v) => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    pub fn add(&self, other: &HVector) -> Result<HVector, LinalgError> {
        self.check_compat(other)?;
        Ok(match (self, other) {
            (HVector::Real(a), HVector::Real(b)) => {
                HVector::Real(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (HVector::Complex(a), HVector::Complex(b)) => {
                HVector::Complex(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &HVector) -> Result<HVector, LinalgError> {
        self.check_compat(other)?;
        Ok(match (self, other) {
            (HVector::Real(a), HVector::Real(b)) => {
                HVector::Real(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            (HVector::Complex(a), HVector::Complex(b)) => {
                HVector::Complex(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => unreachable!(),
        })
    }

    /// Scales by a scalar of the same field; a real scalar also scales a
    /// complex vector.
    pub fn scale(&self, alpha: &Scalar) -> Result<HVector, LinalgError> {
        match (self, alpha) {
            (HVector::Real(v), Scalar::Real(a)) => {
                Ok(HVector::Real(v.iter().map(|x| a * x).collect()))
            }
            (HVector::Complex(v), a) => {
                let a = a.as_complex();
                Ok(HVector::Complex(v.iter().map(|z| a * z).collect()))
            }
            (HVector::Real(_), Scalar::Complex(_)) => {
                Err(LinalgError::FieldMismatch(Field::Real, Field::Complex))
            }
        }
    }

    /// Interleaved (Re, Im) embedding of a complex vector into R^{2n}.
    /// A real vector embeds as itself. The embedding is a linear isometry
    /// over real scalars, and Re (x|y) equals the real inner product of the
    /// embeddings.
    pub fn embed_real(&self) -> Vec<f64> {
        match self {
            HVector::Real(v) => v.clone(),
            HVector::Complex(v) => {
                let mut out = Vec::with_capacity(2 * v.len());
                for z in v {
                    out.push(z.re);
                    out.push(z.im);
                }
                out
            }
        }
    }

    pub fn complexify_to_real(&self) -> HVector {
        HVector::Real(self.embed_real())
    }
}

// JSON form: real entries as numbers, complex entries as [re, im] pairs.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl Serialize for HVector {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            HVector::Real(v) => v.serialize(ser),
            HVector::Complex(v) => {
                let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
                pairs.serialize(ser)
            }
        }
    }
}

impl<'de> Deserialize<'de> for HVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let entries = Vec::<EntryRepr>::deserialize(de)?;
        let complex = entries.iter().any(|e| matches!(e, EntryRepr::Pair(_)));
        if complex {
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                match e {
                    EntryRepr::Pair([re, im]) => out.push(Complex64::new(re, im)),
                    EntryRepr::Real(_) => {
                        return Err(D::Error::custom(
                            "vector mixes plain numbers with [re, im] pairs",
                        ))
                    }
                }
            }
            Ok(HVector::Complex(out))
        } else {
            Ok(HVector::Real(
                entries
                    .into_iter()
                    .map(|e| match e {
                        EntryRepr::Real(x) => x,
                        EntryRepr::Pair(_) => unreachable!(),
                    })
                    .collect(),
            ))
        }
    }
}
