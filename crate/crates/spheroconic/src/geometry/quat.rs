use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::mat3::Mat3;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;

/// Rotation quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn identity() -> Self {
        Quaternion::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Result<Quaternion<T>> {
        let n = self.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::NonUnitQuaternion {
                norm: n.into_f64(),
            });
        }
        Ok(Quaternion::new(
            self.w / n,
            self.x / n,
            self.y / n,
            self.z / n,
        ))
    }

    pub fn conjugate(&self) -> Quaternion<T> {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn mul(&self, o: &Quaternion<T>) -> Quaternion<T> {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }

    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Result<Quaternion<T>> {
        let u = axis
            .normalized()
            .ok_or_else(|| Error::domain("rotation axis must be nonzero"))?;
        let half = angle * T::from_f64(0.5);
        let (s, c) = (half.sin(), half.cos());
        Ok(Quaternion::new(c, u.x * s, u.y * s, u.z * s))
    }

    /// Extract a unit quaternion from a rotation matrix, picking the most
    /// stable of the four Shepperd branches. The result is canonicalized to
    /// `w >= 0` (both signs describe the same rotation).
    pub fn from_rotation_matrix(r: &Mat3<T>) -> Quaternion<T> {
        let m = &r.rows;
        let quarter = T::from_f64(0.25);
        let one = T::one();
        let t0 = one + m[0][0] + m[1][1] + m[2][2];
        let t1 = one + m[0][0] - m[1][1] - m[2][2];
        let t2 = one - m[0][0] + m[1][1] - m[2][2];
        let t3 = one - m[0][0] - m[1][1] + m[2][2];
        let q = if t0 >= t1 && t0 >= t2 && t0 >= t3 {
            let s = t0.sqrt() * T::from_f64(2.0);
            Quaternion::new(
                quarter * s,
                (m[2][1] - m[1][2]) / s,
                (m[0][2] - m[2][0]) / s,
                (m[1][0] - m[0][1]) / s,
            )
        } else if t1 >= t2 && t1 >= t3 {
            let s = t1.sqrt() * T::from_f64(2.0);
            Quaternion::new(
                (m[2][1] - m[1][2]) / s,
                quarter * s,
                (m[0][1] + m[1][0]) / s,
                (m[0][2] + m[2][0]) / s,
            )
        } else if t2 >= t3 {
            let s = t2.sqrt() * T::from_f64(2.0);
            Quaternion::new(
                (m[0][2] - m[2][0]) / s,
                (m[0][1] + m[1][0]) / s,
                quarter * s,
                (m[1][2] + m[2][1]) / s,
            )
        } else {
            let s = t3.sqrt() * T::from_f64(2.0);
            Quaternion::new(
                (m[1][0] - m[0][1]) / s,
                (m[0][2] + m[2][0]) / s,
                (m[1][2] + m[2][1]) / s,
                quarter * s,
            )
        };
        let q = q.normalized().expect("rotation matrix yields unit quaternion");
        if q.w < T::zero() {
            Quaternion::new(-q.w, -q.x, -q.y, -q.z)
        } else {
            q
        }
    }
}

/// Rotation matrix of a quaternion.
///
/// Inputs within `1e-6` of unit length are renormalized first; anything
/// further off is rejected as [`Error::NonUnitQuaternion`].
pub fn quaternion_rotation<T: Real>(q: &Quaternion<T>) -> Result<Mat3<T>> {
    let n = q.norm();
    if (n - T::one()).abs() > T::from_f64(1e-6) {
        return Err(Error::NonUnitQuaternion {
            norm: n.into_f64(),
        });
    }
    let q = q.normalized()?;
    let (w, x, y, z) = (q.w, q.x, q.y, q.z);
    let two = T::from_f64(2.0);
    Ok(Mat3::new([
        [
            w * w + x * x - y * y - z * z,
            two * (x * y - w * z),
            two * (x * z + w * y),
        ],
        [
            two * (x * y + w * z),
            w * w - x * x + y * y - z * z,
            two * (y * z - w * x),
        ],
        [
            two * (x * z - w * y),
            two * (y * z + w * x),
            w * w - x * x - y * y + z * z,
        ],
    ]))
}

impl<T: Serialize> Serialize for Quaternion<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        seq.serialize_element(&self.w)?;
        seq.serialize_element(&self.x)?;
        seq.serialize_element(&self.y)?;
        seq.serialize_element(&self.z)?;
        seq.end()
    }
}
