use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;

/// A point of the elliptic plane, stored as a canonical unit vector.
///
/// Antipodal vectors name the same point, so construction normalizes the
/// input and then flips the sign to make the first nonzero coordinate of
/// `(z, y, x)` positive. Two equal points therefore compare equal as raw
/// vectors, and hashing/deduplication can use the stored coordinates
/// directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    v: Vec3<T>,
}

impl<T: Real> SpherePoint<T> {
    /// Build a point from any nonzero vector; the direction is kept, the
    /// length and overall sign are not.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        Self::from_vec3(Vec3::new(x, y, z))
    }

    pub fn from_vec3(v: Vec3<T>) -> Result<Self> {
        if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
            return Err(Error::domain("point coordinates must be finite"));
        }
        let unit = v
            .normalized()
            .ok_or_else(|| Error::domain("cannot normalize the zero vector to a point"))?;
        Ok(SpherePoint {
            v: canonicalize(unit),
        })
    }

    pub fn x(&self) -> T {
        self.v.x
    }

    pub fn y(&self) -> T {
        self.v.y
    }

    pub fn z(&self) -> T {
        self.v.z
    }

    pub fn as_vec3(&self) -> Vec3<T> {
        self.v
    }

    pub fn as_array(&self) -> [T; 3] {
        self.v.as_array()
    }

    /// Elliptic distance: the acute angle between the two spanned lines
    /// through the origin, in `[0, pi/2]`.
    ///
    /// Computed as `atan2(|p x q|, |p . q|)`, which stays accurate for
    /// nearly equal points where `acos` of the dot product loses half the
    /// significant digits.
    pub fn elliptic_distance(&self, other: &SpherePoint<T>) -> T {
        let c = self.v.cross(other.v).norm();
        let d = self.v.dot(other.v).abs();
        c.atan2(d)
    }
}

/// Flip the sign so the first nonzero coordinate of `(z, y, x)` is positive.
fn canonicalize<T: Real>(v: Vec3<T>) -> Vec3<T> {
    let zero = T::zero();
    let keep = if v.z != zero {
        v.z > zero
    } else if v.y != zero {
        v.y > zero
    } else {
        v.x >= zero
    };
    if keep {
        v
    } else {
        -v
    }
}

impl<T: Serialize> Serialize for SpherePoint<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.v.x)?;
        seq.serialize_element(&self.v.y)?;
        seq.serialize_element(&self.v.z)?;
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antipodes_collapse() {
        let p = SpherePoint::new(0.3, -0.4, 0.5).unwrap();
        let q = SpherePoint::new(-0.3, 0.4, -0.5).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.elliptic_distance(&q), 0.0);
    }

    #[test]
    fn equator_points_canonicalize_on_y() {
        let p = SpherePoint::new(0.6, -0.8, 0.0).unwrap();
        assert!(p.y() > 0.0);
    }

    #[test]
    fn distance_is_acute() {
        let p = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        let q = SpherePoint::new(1.0, 10.0, 0.0).unwrap();
        let d = p.elliptic_distance(&q);
        assert!(d > 0.0 && d <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(SpherePoint::<f64>::new(0.0, 0.0, 0.0).is_err());
    }
}
