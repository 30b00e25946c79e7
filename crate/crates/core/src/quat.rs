//! Unit-quaternion algebra on the 3-sphere.
//!
//! Provides the Hamilton product, conjugation, the logarithmic and
//! exponential maps between the sphere and its tangent spaces, hemisphere
//! alignment of sampled trajectories, geodesic distance, and the Karcher
//! (Fréchet) mean.
//!
//! Conventions:
//! - scalar-first storage `(w, [x, y, z])`;
//! - `q` and `-q` encode the same orientation;
//! - tangent vectors carry the *half* rotation angle: for a rotation of
//!   angle θ about unit axis `n`, `log` returns `(θ/2)·n`. Body angular
//!   velocities are therefore `2·log(..)/dt`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// A 3-vector living in a tangent space of the unit-quaternion sphere.
///
/// Values produced by [`log_map`] satisfy `‖ζ‖ < π`.
pub type TangentVector<T> = Vec3<T>;

/// Vector-part magnitude below which the log map takes its zero branch.
pub fn log_zero_tol<T: Real>() -> T {
    T::of(1e-12)
}

/// Vector-part magnitude below which a near-antipodal input is rejected.
pub fn antipode_tol<T: Real>() -> T {
    T::of(1e-9)
}

/// A quaternion of unit norm representing a 3-D orientation.
///
/// Constructors normalize; algebraic operations preserve the unit norm to
/// floating-point accuracy without renormalizing, so norm drift under long
/// integrations is observable via [`UnitQuaternion::norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion<T> {
    w: T,
    v: Vec3<T>,
}

impl<T: Real> UnitQuaternion<T> {
    /// Build from components, normalizing to unit length.
    ///
    /// Fails with [`Error::DegenerateInput`] when the norm is too small to
    /// define a direction.
    pub fn new(w: T, x: T, y: T, z: T) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n < T::of(1e-6) {
            return Err(Error::DegenerateInput(format!(
                "quaternion norm {} too small to normalize",
                n.as_f64()
            )));
        }
        Ok(Self {
            w: w / n,
            v: Vec3::new(x / n, y / n, z / n),
        })
    }

    /// Build from raw components that are already unit norm.
    ///
    /// Used internally where the algebra guarantees the invariant; keeping
    /// the raw bits is what makes norm-drift measurements meaningful.
    pub(crate) fn from_parts_raw(w: T, v: Vec3<T>) -> Self {
        debug_assert!(
            ((w * w + v.norm_squared()).sqrt() - T::one()).abs() < T::of(1e-6),
            "from_parts_raw called with a non-unit quaternion"
        );
        Self { w, v }
    }

    /// The identity orientation `1 + [0 0 0]`.
    pub fn identity() -> Self {
        Self {
            w: T::one(),
            v: Vec3::zero(),
        }
    }

    /// Rotation of `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Result<Self> {
        let n = axis.norm();
        if n < T::of(1e-12) {
            return Err(Error::DegenerateInput("zero rotation axis".into()));
        }
        let half = angle / T::of(2.0);
        Ok(Self::from_parts_raw(half.cos(), axis.scale(half.sin() / n)))
    }

    /// Real (scalar) part ν.
    pub fn scalar(&self) -> T {
        self.w
    }

    /// Imaginary (vector) part u.
    pub fn vector(&self) -> Vec3<T> {
        self.v
    }

    /// Components in `(w, x, y, z)` order.
    pub fn into_components(self) -> (T, T, T, T) {
        (self.w, self.v.x, self.v.y, self.v.z)
    }

    /// ℓ₂ norm of the stored components. Unit to floating-point accuracy.
    pub fn norm(&self) -> T {
        (self.w * self.w + self.v.norm_squared()).sqrt()
    }

    /// 4-vector dot product with another quaternion.
    pub fn dot(&self, rhs: &Self) -> T {
        self.w * rhs.w + self.v.dot(rhs.v)
    }

    /// Conjugate `ν + (−u)`. Equals the inverse for unit quaternions.
    pub fn conjugate(&self) -> Self {
        Self {
            w: self.w,
            v: -self.v,
        }
    }

    /// Antipode `−q`: the same orientation on the opposite hemisphere.
    pub fn antipode(&self) -> Self {
        Self {
            w: -self.w,
            v: -self.v,
        }
    }

    /// Hamilton product
    /// `q1*q2 = (ν1ν2 − u1ᵀu2) + (ν1u2 + ν2u1 + u1×u2)`.
    pub fn product(&self, rhs: &Self) -> Self {
        let w = self.w * rhs.w - self.v.dot(rhs.v);
        let v = rhs.v.scale(self.w) + self.v.scale(rhs.w) + self.v.cross(rhs.v);
        Self::from_parts_raw(w, v)
    }

    /// Logarithmic map at identity: `S³ → R³`.
    ///
    /// Returns `arccos(ν)·u/‖u‖` (computed as `atan2(‖u‖, ν)` for accuracy),
    /// the zero vector when the vector part vanishes, and
    /// [`Error::Antipodal`] within [`antipode_tol`] of `−1 + [0 0 0]`,
    /// the single point excluded from the domain.
    pub fn log(&self) -> Result<TangentVector<T>> {
        let un = self.v.norm();
        if un < log_zero_tol::<T>() {
            if self.w < T::zero() && un < antipode_tol::<T>() {
                return Err(Error::Antipodal);
            }
            return Ok(Vec3::zero());
        }
        let angle = un.atan2(self.w);
        Ok(self.v.scale(angle / un))
    }

    /// Exponential map at identity: `R³ → S³`.
    ///
    /// Returns `cos‖ζ‖ + sin‖ζ‖·ζ/‖ζ‖`; identity for `ζ = 0`. The domain is
    /// restricted to `‖ζ‖ < π` where the map is bijective;
    /// [`Error::Domain`] otherwise.
    pub fn exp(zeta: TangentVector<T>) -> Result<Self> {
        let n = zeta.norm();
        if n >= T::PI() {
            return Err(Error::Domain { norm: n.as_f64() });
        }
        if n < T::of(1e-12) {
            // sin(n)/n = 1 to double precision here
            return Ok(Self::from_parts_raw(n.cos(), zeta));
        }
        Ok(Self::from_parts_raw(n.cos(), zeta.scale(n.sin() / n)))
    }

    /// Whether `self` and `other` are the same orientation (up to sign)
    /// within `tol` radians of geodesic angle.
    pub fn same_orientation(&self, other: &Self, tol: T) -> bool {
        let d = geodesic_distance(self, other);
        d <= tol || (T::PI() - d).abs() <= tol
    }
}

impl<T: Real> std::ops::Mul for UnitQuaternion<T> {
    type Output = UnitQuaternion<T>;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<T: Real> std::ops::Neg for UnitQuaternion<T> {
    type Output = UnitQuaternion<T>;
    fn neg(self) -> Self {
        self.antipode()
    }
}

/// `Log(q1 * q̄2)`: tangent coordinates of `q1` in the chart anchored at `q2`.
pub fn log_map<T: Real>(q1: &UnitQuaternion<T>, q2: &UnitQuaternion<T>) -> Result<TangentVector<T>> {
    q1.product(&q2.conjugate()).log()
}

/// `Exp(ζ) * q2`: the point reached from `q2` along the geodesic direction ζ.
pub fn exp_map<T: Real>(zeta: TangentVector<T>, q2: &UnitQuaternion<T>) -> Result<UnitQuaternion<T>> {
    Ok(UnitQuaternion::exp(zeta)?.product(q2))
}

/// Geodesic angle `‖log_map(q1, q2)‖ ∈ [0, π]`, symmetric in its arguments.
pub fn geodesic_distance<T: Real>(q1: &UnitQuaternion<T>, q2: &UnitQuaternion<T>) -> T {
    let q = q1.product(&q2.conjugate());
    q.v.norm().atan2(q.w)
}

/// Sign-flip successive samples so every adjacent pair has a positive
/// 4-vector dot product (Assumption 1). The flip is the antipode `−q`,
/// which leaves the orientation unchanged.
pub fn hemisphere_align<T: Real>(samples: &[UnitQuaternion<T>]) -> Vec<UnitQuaternion<T>> {
    let mut out = Vec::with_capacity(samples.len());
    for q in samples {
        match out.last() {
            Some(prev) => {
                let flipped = if q.dot(prev) < T::zero() { q.antipode() } else { *q };
                out.push(flipped);
            }
            None => out.push(*q),
        }
    }
    out
}

/// Settings for the iterative Karcher mean.
#[derive(Debug, Clone, Copy)]
pub struct KarcherConfig<T> {
    /// Stop when the mean tangent update norm falls at or below this.
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for KarcherConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::of(1e-10),
            max_iter: 100,
        }
    }
}

/// Karcher (Fréchet/MLE) mean of a set of orientations: the minimizer of the
/// summed squared geodesic distance, found by iterative tangent-space
/// averaging.
///
/// The input should be hemisphere-aligned and contained in a geodesic ball
/// where the mean is unique. Initializes at the normalized 4-vector
/// arithmetic mean.
pub fn karcher_mean<T: Real>(
    samples: &[UnitQuaternion<T>],
    config: &KarcherConfig<T>,
) -> Result<UnitQuaternion<T>> {
    if samples.is_empty() {
        return Err(Error::DegenerateInput("empty sample set has no mean".into()));
    }
    let inv_len = T::one() / T::of_usize(samples.len());
    let mut sw = T::zero();
    let mut sv = Vec3::zero();
    for q in samples {
        sw += q.scalar();
        sv += q.vector();
    }
    let mut mean = UnitQuaternion::new(sw, sv.x, sv.y, sv.z).map_err(|_| {
        Error::DegenerateInput("4-vector mean vanished; samples are not localized".into())
    })?;

    let mut residual = T::infinity();
    for _ in 0..config.max_iter {
        let mut m = Vec3::zero();
        for q in samples {
            m += log_map(q, &mean)?;
        }
        m = m.scale(inv_len);
        residual = m.norm();
        if residual <= config.tol {
            return Ok(mean);
        }
        mean = exp_map(m, &mean)?;
    }
    Err(Error::NoConvergence {
        iterations: config.max_iter,
        residual: residual.as_f64(),
    })
}

// Serialized as an object with explicit component names. Loading keeps the
// exact stored bits when the norm error is at most 1e-9 so that a save/load
// round trip is bit-faithful; larger deviations up to 1e-3 are renormalized
// and anything worse is rejected.
impl<T: Real + Serialize> Serialize for UnitQuaternion<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = QuatRepr {
            w: self.w,
            x: self.v.x,
            y: self.v.y,
            z: self.v.z,
        };
        repr.serialize(serializer)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for UnitQuaternion<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = QuatRepr::<T>::deserialize(deserializer)?;
        let n = (repr.w * repr.w + repr.x * repr.x + repr.y * repr.y + repr.z * repr.z).sqrt();
        let err = (n - T::one()).abs();
        if err > T::of(1e-3) {
            return Err(D::Error::custom(format!(
                "quaternion norm error {} exceeds 1e-3",
                err.as_f64()
            )));
        }
        if err > T::of(1e-9) {
            return Ok(UnitQuaternion::new(repr.w, repr.x, repr.y, repr.z)
                .expect("norm within 1e-3 of one is normalizable"));
        }
        Ok(UnitQuaternion::from_parts_raw(
            repr.w,
            Vec3::new(repr.x, repr.y, repr.z),
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct QuatRepr<T> {
    w: T,
    x: T,
    y: T,
    z: T,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type Q = UnitQuaternion<f64>;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Q {
        Q::new(w, x, y, z).unwrap()
    }

    /// Rotation-matrix oracle: compose two rotations as 3x3 matrices and
    /// compare against the matrix of the quaternion product.
    fn rotation_matrix(qq: &Q) -> [[f64; 3]; 3] {
        let (w, x, y, z) = qq.into_components();
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    fn mat_mul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for (k, bk) in b.iter().enumerate() {
                    c[i][j] += a[i][k] * bk[j];
                }
            }
        }
        c
    }

    #[test]
    fn product_identity_and_inverse() {
        let any = q(0.3, -0.5, 0.7, 0.2);
        let id = Q::identity();
        assert_eq!(id.product(&any), any);
        let back = any.product(&any.conjugate());
        assert_abs_diff_eq!(back.scalar(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(back.vector().norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn product_composes_two_quarter_turns() {
        let c45 = FRAC_PI_4.cos();
        let half_x = q(c45, c45, 0.0, 0.0); // 90 deg about x
        let composed = half_x.product(&half_x);
        assert_abs_diff_eq!(composed.scalar(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(composed.vector().x, 1.0, epsilon = 1e-15);

        // independent check through rotation matrices
        let expected = mat_mul(rotation_matrix(&half_x), rotation_matrix(&half_x));
        let got = rotation_matrix(&composed);
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(got[i][j], expected[i][j], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn conjugate_basics() {
        assert_eq!(Q::identity().conjugate(), Q::identity());
        let i = q(0.0, 1.0, 0.0, 0.0);
        assert_eq!(i.conjugate().vector().x, -1.0);
        let any = q(0.4, 0.3, -0.2, 0.6);
        assert_eq!(any.conjugate().conjugate(), any);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let any = q(-0.2, 0.8, 0.1, -0.3);
        let z = log_map(&any, &any).unwrap();
        assert!(z.norm() < 1e-12);
    }

    #[test]
    fn log_map_closed_form_axis_angle() {
        // rotation of theta = pi/2 about x, relative to identity: zeta = [theta/2, 0, 0]
        let theta = FRAC_PI_2;
        let rot = q((theta / 2.0).cos(), (theta / 2.0).sin(), 0.0, 0.0);
        let z = log_map(&rot, &Q::identity()).unwrap();
        assert_abs_diff_eq!(z.x, FRAC_PI_4, epsilon = 1e-15);
        assert_abs_diff_eq!(z.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn log_rejects_antipode() {
        let minus_one = Q::identity().antipode();
        assert!(matches!(minus_one.log(), Err(Error::Antipodal)));
        let base = q(0.5, 0.5, 0.5, 0.5);
        assert!(matches!(
            log_map(&base.antipode(), &base),
            Err(Error::Antipodal)
        ));
    }

    #[test]
    fn exp_basics() {
        let any = q(0.1, 0.7, -0.7, 0.05);
        assert_eq!(exp_map(Vec3::zero(), &any).unwrap(), any);
        let e = Q::exp(Vec3::new(FRAC_PI_2, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(e.scalar(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.vector().x, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_rejects_out_of_domain() {
        assert!(matches!(
            Q::exp(Vec3::new(PI, 0.0, 0.0)),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            Q::exp(Vec3::new(2.0, 2.0, 2.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn geodesic_distance_is_symmetric_and_matches_log_norm() {
        let a = q(0.9, 0.1, -0.3, 0.2);
        let b = q(-0.1, 0.6, 0.5, 0.4);
        let d1 = geodesic_distance(&a, &b);
        let d2 = geodesic_distance(&b, &a);
        assert_abs_diff_eq!(d1, d2, epsilon = 1e-12);
        assert_abs_diff_eq!(d1, log_map(&a, &b).unwrap().norm(), epsilon = 1e-12);
    }

    #[test]
    fn antipodal_pair_is_the_same_orientation() {
        let a = q(0.3, -0.5, 0.7, 0.2);
        assert!(a.same_orientation(&a.antipode(), 1e-12));
        assert!(a.same_orientation(&a, 1e-12));
        let rotated = a.product(&q(0.9, 0.1, 0.0, 0.0));
        assert!(!a.same_orientation(&rotated, 1e-3));
    }

    #[test]
    fn hemisphere_align_flips_only_where_needed() {
        let a = q(0.9, 0.1, -0.3, 0.2);
        assert_eq!(hemisphere_align(&[a, a]), vec![a, a]);
        let aligned = hemisphere_align(&[a, a.antipode()]);
        assert_eq!(aligned, vec![a, a]);
    }

    #[test]
    fn karcher_mean_of_identical_points() {
        let a = q(0.2, -0.4, 0.8, 0.1);
        let mean = karcher_mean(&[a; 7], &KarcherConfig::default()).unwrap();
        assert!(geodesic_distance(&mean, &a) < 1e-12);
    }

    #[test]
    fn karcher_mean_of_symmetric_pair_is_identity() {
        let th = 0.6_f64;
        let plus = q((th / 2.0).cos(), (th / 2.0).sin(), 0.0, 0.0);
        let minus = q((th / 2.0).cos(), -(th / 2.0).sin(), 0.0, 0.0);
        let mean = karcher_mean(&[plus, minus], &KarcherConfig::default()).unwrap();
        assert!(geodesic_distance(&mean, &Q::identity()) < 1e-12);
    }

    #[test]
    fn karcher_mean_reports_no_convergence() {
        let a = q(0.9, 0.1, -0.3, 0.2);
        let b = q(0.2, 0.8, 0.3, -0.1);
        let cfg = KarcherConfig {
            tol: 0.0,
            max_iter: 2,
        };
        assert!(matches!(
            karcher_mean(&[a, b], &cfg),
            Err(Error::NoConvergence { iterations: 2, .. })
        ));
    }

    #[test]
    fn serde_round_trip_is_bit_faithful() {
        let a = q(0.3, -0.55, 0.71, 0.12);
        let text = serde_json::to_string(&a).unwrap();
        let back: Q = serde_json::from_str(&text).unwrap();
        let (w1, x1, y1, z1) = a.into_components();
        let (w2, x2, y2, z2) = back.into_components();
        assert_eq!(w1.to_bits(), w2.to_bits());
        assert_eq!(x1.to_bits(), x2.to_bits());
        assert_eq!(y1.to_bits(), y2.to_bits());
        assert_eq!(z1.to_bits(), z2.to_bits());
    }

    #[test]
    fn serde_rejects_far_from_unit() {
        let bad = r#"{"w": 2.0, "x": 0.0, "y": 0.0, "z": 0.0}"#;
        assert!(serde_json::from_str::<Q>(bad).is_err());
        let fixable = r#"{"w": 1.0000001, "x": 0.0, "y": 0.0, "z": 0.0}"#;
        let fixed: Q = serde_json::from_str(fixable).unwrap();
        assert_abs_diff_eq!(fixed.norm(), 1.0, epsilon = 1e-15);
    }
}
