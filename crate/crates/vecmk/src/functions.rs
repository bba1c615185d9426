//! Function samples on a finite metric space: sup/Lipschitz/BL norms, the
//! sesquilinear integral, the Lipschitz Urysohn-type construction, and the
//! two-point separating function.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{Field, HVector, LinalgError, Scalar};
use crate::measures::DiscreteVectorMeasure;
use crate::space::{FiniteMetricSpace, SpaceError};

#[derive(Debug, Error)]
pub enum FunctionError {
    #[error("function lives on a different space")]
    SpaceMismatch,
    #[error("value count {0} does not match point count {1}")]
    ValueCountMismatch(usize, usize),
    #[error("values must share dimension and field")]
    MixedValues,
    #[error("H must be nonempty")]
    EmptyH,
    #[error("D must be a proper subset of the space")]
    DIsWholeSpace,
    #[error("H must be contained in D")]
    HNotInsideD,
    #[error("points must be distinct")]
    EqualPoints,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A function T -> X given by one Hilbert-space value per point. On a finite
/// space every such function is simple, continuous and Lipschitz.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSample {
    space: Arc<FiniteMetricSpace>,
    values: Vec<HVector>,
}

impl FunctionSample {
    pub fn new(
        space: Arc<FiniteMetricSpace>,
        values: Vec<HVector>,
    ) -> Result<Self, FunctionError> {
        if values.len() != space.len() {
            return Err(FunctionError::ValueCountMismatch(values.len(), space.len()));
        }
        let field = values[0].field();
        let dim = values[0].dim();
        if values.iter().any(|v| v.field() != field || v.dim() != dim) {
            return Err(FunctionError::MixedValues);
        }
        Ok(Self { space, values })
    }

    /// The constant function t -> v.
    pub fn constant(space: Arc<FiniteMetricSpace>, v: HVector) -> Self {
        let values = (0..space.len()).map(|_| v.clone()).collect();
        Self { space, values }
    }

    /// Scalar-valued sample from plain numbers.
    pub fn scalar(space: Arc<FiniteMetricSpace>, values: &[f64]) -> Result<Self, FunctionError> {
        Self::new(
            space,
            values.iter().map(|&x| HVector::Real(vec![x])).collect(),
        )
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn values(&self) -> &[HVector] {
        &self.values
    }

    pub fn value(&self, t: usize) -> &HVector {
        &self.values[t]
    }

    pub fn field(&self) -> Field {
        self.values[0].field()
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    /// ||f|| = max_i ||f(t_i)||.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(HVector::norm).fold(0.0, f64::max)
    }

    /// ||f||_L = max over pairs of ||f(x)-f(y)|| / d(x,y); zero iff constant.
    /// Exact max over pairs, which is what feeds the brute-force oracles.
    pub fn lip_constant(&self) -> f64 {
        let m = self.space.len();
        let mut lip: f64 = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                let diff = self.values[i]
                    .sub(&self.values[j])
                    .expect("values are homogeneous")
                    .norm();
                lip = lip.max(diff / self.space.dist(i, j));
            }
        }
        lip
    }

    /// ||f||_BL = ||f|| + ||f||_L.
    pub fn bl_norm(&self) -> f64 {
        self.sup_norm() + self.lip_constant()
    }

    pub fn add(&self, other: &Self) -> Result<Self, FunctionError> {
        if self.space != other.space {
            return Err(FunctionError::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { space: self.space.clone(), values })
    }

    pub fn scale(&self, alpha: &Scalar) -> Result<Self, FunctionError> {
        let values = self
            .values
            .iter()
            .map(|v| v.scale(alpha))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { space: self.space.clone(), values })
    }

    /// Real embedding; preserves sup, Lipschitz and BL norms.
    pub fn to_real(&self) -> Self {
        if self.field() == Field::Real {
            return self.clone();
        }
        let values = self.values.iter().map(|v| v.complexify_to_real()).collect();
        Self { space: self.space.clone(), values }
    }

    /// Flat row-major real coordinates, for the solver stack.
    pub fn real_coords(&self) -> (Vec<f64>, usize) {
        let real = self.to_real();
        let n = real.dim();
        let mut flat = Vec::with_capacity(real.space.len() * n);
        for v in &real.values {
            match v {
                HVector::Real(x) => flat.extend_from_slice(x),
                HVector::Complex(_) => unreachable!(),
            }
        }
        (flat, n)
    }

    pub fn from_real_coords(
        space: Arc<FiniteMetricSpace>,
        flat: &[f64],
        n: usize,
    ) -> Self {
        let values = flat.chunks(n).map(|c| HVector::Real(c.to_vec())).collect();
        Self { space, values }
    }
}

/// The integral of a simple function against a vector measure:
/// sum_i (f(t_i) | mu({t_i})). Linear in f, conjugate-linear in mu, and
/// |integral| <= ||mu|| ||f||.
pub fn integrate(
    f: &FunctionSample,
    mu: &DiscreteVectorMeasure,
) -> Result<Scalar, FunctionError> {
    if f.space() != mu.space() {
        return Err(FunctionError::SpaceMismatch);
    }
    let mut acc = Scalar::zero(f.field());
    for (v, a) in f.values().iter().zip(mu.atoms()) {
        acc = acc.add(&v.inner(a)?);
    }
    Ok(acc)
}

/// The Urysohn-type construction: for nonempty H inside a proper subset D,
/// builds g(t) = d1(t, C_D) / (d1(t, C_D) + d1(t, H)), then returns
/// f = g / ||g||_BL together with M = 1 / ||g||_BL. The result satisfies
/// ||f||_BL = 1, 0 <= f <= M, f = M on H and f = 0 outside D.
pub fn urysohn(
    space: &Arc<FiniteMetricSpace>,
    h: &[usize],
    d: &[usize],
) -> Result<(FunctionSample, f64), FunctionError> {
    if h.is_empty() {
        return Err(FunctionError::EmptyH);
    }
    for &t in h.iter().chain(d.iter()) {
        space.check_point(t)?;
    }
    let complement = space.complement(d);
    if complement.is_empty() {
        return Err(FunctionError::DIsWholeSpace);
    }
    if h.iter().any(|t| !d.contains(t)) {
        return Err(FunctionError::HNotInsideD);
    }
    let delta = space.set_distance(h, &complement)?;
    // the paper's positivity bound: the denominator never drops below
    // delta(H, C_D) > 0
    assert!(delta > 0.0, "validated spaces have positive off-diagonal distances");
    let mut g = Vec::with_capacity(space.len());
    for t in 0..space.len() {
        let dc = space.dist_point_set(t, &complement)?;
        let dh = space.dist_point_set(t, h)?;
        let denom = dc + dh;
        debug_assert!(denom >= delta - 1e-15);
        g.push(dc / denom);
    }
    let g = FunctionSample::scalar(space.clone(), &g)?;
    let bl = g.bl_norm();
    let f = g.scale(&Scalar::Real(1.0 / bl))?;
    Ok((f, 1.0 / bl))
}

/// The separating function of two distinct points:
/// g(t) = d(t,a) / (d(t,a) + d(t,b)), with g(a) = 0, g(b) = 1, 0 <= g <= 1
/// and Lipschitz constant at most 1/d(a,b).
pub fn separating_g(
    space: &Arc<FiniteMetricSpace>,
    a: usize,
    b: usize,
) -> Result<FunctionSample, FunctionError> {
    space.check_point(a)?;
    space.check_point(b)?;
    if a == b {
        return Err(FunctionError::EqualPoints);
    }
    let mut g = Vec::with_capacity(space.len());
    for t in 0..space.len() {
        let da = space.dist(t, a);
        let db = space.dist(t, b);
        // triangle inequality keeps the denominator at least d(a,b) > 0
        g.push(da / (da + db));
    }
    FunctionSample::scalar(space.clone(), &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use num_complex::Complex64;
    use proptest::prelude::*;
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

    #[test]
    fn norms_of_constant_function() {
        let s = two_point(1.0);
        let v = HVector::Real(vec![3.0, 4.0]);
        let f = FunctionSample::constant(s, v);
        assert_eq!(f.lip_constant(), 0.0);
        assert_eq!(f.sup_norm(), 5.0);
        assert_eq!(f.bl_norm(), 5.0);
    }

    #[test]
    fn norms_on_two_points() {
        let s = two_point(1.0);
        let f = FunctionSample::scalar(s, &[0.0, 1.0]).unwrap();
        assert_eq!(f.lip_constant(), 1.0);
        assert_eq!(f.sup_norm(), 1.0);
        assert_eq!(f.bl_norm(), 2.0);
    }

    #[test]
    fn distance_to_point_is_one_lipschitz() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_space(&mut rng, 6);
            let a = rng.gen_range(0..6);
            let x = HVector::Real(vec![0.6, 0.8]);
            let values: Vec<HVector> = (0..6)
                .map(|t| x.scale(&Scalar::Real(s.dist(t, a))).unwrap())
                .collect();
            let f = FunctionSample::new(s, values).unwrap();
            assert!(f.lip_constant() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn integral_against_dirac_reads_off_the_value() {
        let s = two_point(1.0);
        let f = FunctionSample::new(
            s.clone(),
            vec![
                HVector::Real(vec![1.0, 2.0]),
                HVector::Real(vec![-1.0, 0.5]),
            ],
        )
        .unwrap();
        let x = HVector::Real(vec![0.25, -0.5]);
        let mu = DiscreteVectorMeasure::dirac(s, 1, x.clone()).unwrap();
        let got = integrate(&f, &mu).unwrap();
        let want = f.value(1).inner(&x).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn integral_of_zero_function_vanishes() {
        let s = two_point(1.0);
        let f = FunctionSample::constant(s.clone(), HVector::zero(Field::Real, 2));
        let mu = DiscreteVectorMeasure::dirac(s, 0, HVector::Real(vec![1.0, 1.0])).unwrap();
        assert_eq!(integrate(&f, &mu).unwrap(), Scalar::Real(0.0));
    }

    #[test]
    fn rank_one_product_rule() {
        // integral of (f x) against (mu y) = (integral of f against mu) * (x|y)
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let s = random_space(&mut rng, 4);
            let fvals: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let muvals: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let cx = |rng: &mut StdRng| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            let x = HVector::Complex((0..3).map(|_| cx(&mut rng)).collect());
            let y = HVector::Complex((0..3).map(|_| cx(&mut rng)).collect());
            let fx = FunctionSample::new(
                s.clone(),
                fvals
                    .iter()
                    .map(|&c| x.scale(&Scalar::Real(c)).unwrap())
                    .collect(),
            )
            .unwrap();
            let muy = DiscreteVectorMeasure::new(
                s.clone(),
                muvals
                    .iter()
                    .map(|&c| y.scale(&Scalar::Real(c)).unwrap())
                    .collect(),
            )
            .unwrap();
            let lhs = integrate(&fx, &muy).unwrap().as_complex();
            let scalar_int: f64 = fvals.iter().zip(&muvals).map(|(a, b)| a * b).sum();
            let rhs = Complex64::new(scalar_int, 0.0) * x.inner(&y).unwrap().as_complex();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn integral_bounded_by_variation_times_sup() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let s = random_space(&mut rng, 5);
            let dim = rng.gen_range(1..4);
            let mk_vec = |rng: &mut StdRng| {
                HVector::Complex(
                    (0..dim)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        })
                        .collect(),
                )
            };
            let f = FunctionSample::new(s.clone(), (0..5).map(|_| mk_vec(&mut rng)).collect())
                .unwrap();
            let mu =
                DiscreteVectorMeasure::new(s.clone(), (0..5).map(|_| mk_vec(&mut rng)).collect())
                    .unwrap();
            let lhs = integrate(&f, &mu).unwrap().abs();
            assert!(lhs <= mu.total_variation() * f.sup_norm() + 1e-12);
        }
    }

    #[test]
    fn sesquilinearity_over_complex_scalars() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..100 {
            let s = random_space(&mut rng, 3);
            let dim = 2;
            let mk_vec = |rng: &mut StdRng| {
                HVector::Complex(
                    (0..dim)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        })
                        .collect(),
                )
            };
            let f = FunctionSample::new(s.clone(), (0..3).map(|_| mk_vec(&mut rng)).collect())
                .unwrap();
            let g = FunctionSample::new(s.clone(), (0..3).map(|_| mk_vec(&mut rng)).collect())
                .unwrap();
            let mu =
                DiscreteVectorMeasure::new(s.clone(), (0..3).map(|_| mk_vec(&mut rng)).collect())
                    .unwrap();
            let nu =
                DiscreteVectorMeasure::new(s.clone(), (0..3).map(|_| mk_vec(&mut rng)).collect())
                    .unwrap();
            let alpha = Scalar::Complex(Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ));
            let beta = Scalar::Complex(Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ));

            // linear in the function slot
            let combo = f.scale(&alpha).unwrap().add(&g.scale(&beta).unwrap()).unwrap();
            let lhs = integrate(&combo, &mu).unwrap().as_complex();
            let rhs = alpha.as_complex() * integrate(&f, &mu).unwrap().as_complex()
                + beta.as_complex() * integrate(&g, &mu).unwrap().as_complex();
            assert!((lhs - rhs).norm() < 1e-12);

            // conjugate-linear in the measure slot
            let mcombo = mu.scale(&alpha).unwrap().add(&nu.scale(&beta).unwrap()).unwrap();
            let lhs = integrate(&f, &mcombo).unwrap().as_complex();
            let rhs = alpha.as_complex().conj() * integrate(&f, &mu).unwrap().as_complex()
                + beta.as_complex().conj() * integrate(&f, &nu).unwrap().as_complex();
            assert!((lhs - rhs).norm() < 1e-12);

            // the real embedding reproduces the real part
            let er = integrate(&f.to_real(), &mu.to_real()).unwrap().re();
            assert!((er - integrate(&f, &mu).unwrap().re()).abs() < 1e-12);
        }
    }

    #[test]
    fn urysohn_two_point_closed_form() {
        let s = two_point(1.0);
        // H = D = {point 0}; complement is {point 1}
        let (f, m) = urysohn(&s, &[0], &[0]).unwrap();
        assert!((m - 0.5).abs() < 1e-15);
        assert!((f.value(0).norm() - 0.5).abs() < 1e-15);
        assert!(f.value(1).norm() < 1e-15);
        assert!((f.bl_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn urysohn_properties_on_random_spaces() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..30 {
            let m = rng.gen_range(3..8);
            let s = random_space(&mut rng, m);
            // random nonempty H inside proper D
            let dsize = rng.gen_range(1..m);
            let mut idx: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                let j = rng.gen_range(0..=i);
                idx.swap(i, j);
            }
            let d: Vec<usize> = idx[..dsize].to_vec();
            let hsize = rng.gen_range(1..=dsize);
            let h: Vec<usize> = d[..hsize].to_vec();

            let (f, mcap) = urysohn(&s, &h, &d).unwrap();
            assert!((f.bl_norm() - 1.0).abs() < 1e-12);
            assert!(mcap > 0.0 && mcap < 1.0);
            for t in 0..m {
                let v = match f.value(t) {
                    HVector::Real(x) => x[0],
                    _ => unreachable!(),
                };
                assert!(v >= -1e-15 && v <= mcap + 1e-15);
            }
            for &t in &h {
                assert!((f.value(t).norm() - mcap).abs() < 1e-12);
            }
            for t in s.complement(&d) {
                assert!(f.value(t).norm() < 1e-15);
            }

            // the raw g obeys the proof's Lipschitz bound 2 diam / delta^2
            let complement = s.complement(&d);
            let delta = s.set_distance(&h, &complement).unwrap();
            let g = f.scale(&Scalar::Real(1.0 / mcap)).unwrap();
            let bound = 2.0 * s.diameter() / (delta * delta);
            assert!(g.lip_constant() <= bound + 1e-9);
        }
    }

    #[test]
    fn urysohn_error_paths() {
        let s = Arc::new(FiniteMetricSpace::interval_grid(1.0, 3).unwrap());
        assert!(matches!(urysohn(&s, &[], &[0]), Err(FunctionError::EmptyH)));
        assert!(matches!(
            urysohn(&s, &[0], &[0, 1, 2]),
            Err(FunctionError::DIsWholeSpace)
        ));
        assert!(matches!(
            urysohn(&s, &[2], &[0, 1]),
            Err(FunctionError::HNotInsideD)
        ));
    }

    #[test]
    fn separating_g_two_point() {
        let s = two_point(0.25);
        let g = separating_g(&s, 0, 1).unwrap();
        assert_eq!(g.value(0).norm(), 0.0);
        assert_eq!(g.value(1).norm(), 1.0);
        assert!((g.lip_constant() - 4.0).abs() < 1e-12);
        assert!(matches!(separating_g(&s, 1, 1), Err(FunctionError::EqualPoints)));
    }

    #[test]
    fn separating_g_lipschitz_bound_on_random_spaces() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..25 {
            let s = random_space(&mut rng, 8);
            let a = rng.gen_range(0..8);
            let mut b = rng.gen_range(0..8);
            if b == a {
                b = (b + 1) % 8;
            }
            let g = separating_g(&s, a, b).unwrap();
            for t in 0..8 {
                let v = g.value(t).norm();
                assert!((-1e-15..=1.0 + 1e-15).contains(&v));
            }
            assert!(g.lip_constant() <= 1.0 / s.dist(a, b) + 1e-9);
        }
    }

    proptest! {
        #[test]
        fn bl_norm_dominates_parts(vals in proptest::collection::vec(-5.0f64..5.0, 4)) {
            let s = Arc::new(FiniteMetricSpace::interval_grid(2.0, 4).unwrap());
            let f = FunctionSample::scalar(s, &vals).unwrap();
            prop_assert!(f.bl_norm() >= f.sup_norm());
            prop_assert!(f.bl_norm() >= f.lip_constant());
            let residue = (f.bl_norm() - f.sup_norm() - f.lip_constant()).abs();
            prop_assert!(residue < 1e-12 * f.bl_norm().max(1.0));
        }
    }
}
