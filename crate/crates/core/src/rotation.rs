//! Rotation of 3-vectors by quaternions, `r' = q r q^-1`, with an
//! independent Rodrigues-matrix path for cross-checking.

use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};

use crate::algebra::AlgebraDef;
use crate::error::{Error, Result};
use crate::hcnumber::HNumber;
use crate::ops::{conjug, in_multi, norma, scalar_mul};
use crate::registry::builtins;
use crate::scalar::Scalar;

pub type Vec3 = [f64; 3];

/// Axis (any nonzero length) and angle in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationSpec {
    axis: Vec3,
    pub angle: f64,
}

impl RotationSpec {
    pub fn new(axis: Vec3, angle: f64) -> Result<Self> {
        let len = norm(&axis);
        if len == 0.0 || !len.is_finite() {
            return Err(Error::ZeroAxis);
        }
        Ok(RotationSpec {
            axis: axis.map(|c| c / len),
            angle,
        })
    }

    /// Unit axis.
    pub fn axis(&self) -> Vec3 {
        self.axis
    }
}

pub fn norm(v: &Vec3) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn quaternions() -> &'static AlgebraDef {
    static H: OnceLock<AlgebraDef> = OnceLock::new();
    H.get_or_init(|| builtins().into_iter().find(|d| d.name() == "H").expect("H is built in"))
}

/// `[cos(θ/2), sin(θ/2) u]`.
pub fn quat_from_rotation(spec: &RotationSpec) -> HNumber {
    let (s, c) = (spec.angle / 2.0).sin_cos();
    let u = spec.axis;
    HNumber::from_f64(&[c, s * u[0], s * u[1], s * u[2]])
}

/// `q / |q|`.
pub fn normalize(q: &HNumber) -> Result<HNumber> {
    let q = q.promote_to_float()?;
    let n2 = norma(&q, quaternions())?.as_f64().unwrap();
    if n2 <= 0.0 || !n2.is_finite() {
        return Err(Error::ZeroQuaternion);
    }
    scalar_mul(&Scalar::Float(1.0 / n2.sqrt()), &q)
}

/// Angle and unit axis of a quaternion, after normalization. The axis of
/// a rotation by 0 is reported as `(1, 0, 0)`.
pub fn rotation_of(q: &HNumber) -> Result<(f64, Vec3)> {
    let v = normalize(q)?.to_f64().unwrap();
    let angle = 2.0 * v[0].clamp(-1.0, 1.0).acos();
    let vec = [v[1], v[2], v[3]];
    let len = norm(&vec);
    if len < 1e-15 {
        return Ok((angle, [1.0, 0.0, 0.0]));
    }
    Ok((angle, vec.map(|c| c / len)))
}

fn inverse(q: &HNumber) -> Result<HNumber> {
    let h = quaternions();
    let n2 = norma(q, h)?.as_f64().unwrap();
    scalar_mul(&Scalar::Float(1.0 / n2), &conjug(q, h)?)
}

fn embed(r: &Vec3) -> HNumber {
    HNumber::from_f64(&[0.0, r[0], r[1], r[2]])
}

fn vector_part(x: &HNumber) -> Vec3 {
    let v = x.to_f64().expect("float quaternion");
    debug_assert!(v[0].abs() <= 1e-12 * (1.0 + v.iter().map(|c| c.abs()).fold(0.0, f64::max)));
    [v[1], v[2], v[3]]
}

/// `q r q^-1` with `q` normalized first.
pub fn rotate(r: &Vec3, q: &HNumber) -> Result<Vec3> {
    let h = quaternions();
    let q = normalize(q)?;
    let out = in_multi(&in_multi(&q, &embed(r), h)?, &inverse(&q)?, h)?;
    Ok(vector_part(&out))
}

/// `p q r q^-1 p^-1`: first `q`, then `p`.
pub fn rotate2(r: &Vec3, q: &HNumber, p: &HNumber) -> Result<Vec3> {
    let h = quaternions();
    let (q, p) = (normalize(q)?, normalize(p)?);
    let pq = in_multi(&p, &q, h)?;
    let pqr = in_multi(&pq, &embed(r), h)?;
    let pqrq = in_multi(&pqr, &inverse(&q)?, h)?;
    let out = in_multi(&pqrq, &inverse(&p)?, h)?;
    Ok(vector_part(&out))
}

/// `R = I + sin θ K + (1 - cos θ) K^2`, `K` the cross-product matrix of the
/// unit axis.
pub fn rotation_matrix_oracle(spec: &RotationSpec) -> Matrix3<f64> {
    let [x, y, z] = spec.axis;
    let k = Matrix3::new(0.0, -z, y, z, 0.0, -x, -y, x, 0.0);
    let (s, c) = spec.angle.sin_cos();
    Matrix3::identity() + k * s + k * k * (1.0 - c)
}

pub fn apply(m: &Matrix3<f64>, r: &Vec3) -> Vec3 {
    let v = m * Vector3::from_column_slice(r);
    [v.x, v.y, v.z]
}

/// The two-step example: `(1, 2, 3)` turned by π/3 about `(0, 1, 0)`, then
/// by π/2 about `(1, 0, 0)`. The result is
/// `(1/2 + 3√3/2, √3/2 - 3/2, 2)`, of squared length 14 like the input.
pub mod example {
    use super::Vec3;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    pub const POINT: Vec3 = [1.0, 2.0, 3.0];
    pub const AXIS1: Vec3 = [0.0, 1.0, 0.0];
    pub const ANGLE1: f64 = FRAC_PI_3;
    pub const AXIS2: Vec3 = [1.0, 0.0, 0.0];
    pub const ANGLE2: f64 = FRAC_PI_2;

    pub fn expected() -> Vec3 {
        let r3 = 3f64.sqrt();
        [0.5 + 1.5 * r3, r3 / 2.0 - 1.5, 2.0]
    }

    /// The value `3 e2 + (√3 + 1/2) e3 + (√3 - 1/2) e4` sometimes quoted
    /// for this example; its squared length is 15.5, so no rotation of
    /// `(1, 2, 3)` produces it.
    pub fn quoted() -> Vec3 {
        let r3 = 3f64.sqrt();
        [3.0, r3 + 0.5, r3 - 0.5]
    }
}
