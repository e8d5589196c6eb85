use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::eigen::eigen_sym3;
use crate::geometry::mat3::Mat3;
use crate::geometry::point::SpherePoint;
use crate::geometry::quat::{quaternion_rotation, Quaternion};
use crate::geometry::symmat::SymMat3;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;

/// Default tolerance for [`classify_point`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Relative eigenvalue-gap threshold below which a conic counts as a circle.
pub const CIRCLE_TOL: f64 = 1e-9;

/// A nondegenerate conic of the elliptic plane.
///
/// The quadratic form is `R diag(nu1, nu2, -1) R'` where `R` is the rotation
/// of `orientation`; `nu1 >= nu2 > 0`. In this frame the center is the image
/// of the z-axis, the major symmetry axis (half-tangent `a = 1/sqrt(nu2)`)
/// runs along the image of the y-axis and the minor one (`b = 1/sqrt(nu1)`)
/// along the image of the x-axis. Points `x` with `x' M x < 0` are interior.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Conic<T> {
    pub nu1: T,
    pub nu2: T,
    pub orientation: Quaternion<T>,
}

/// Semi-axes of a conic, as tangents and as angles.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SemiAxes<T> {
    /// Tangent of the major semi-axis angle, `1/sqrt(nu2)`.
    pub a: T,
    /// Tangent of the minor semi-axis angle, `1/sqrt(nu1)`.
    pub b: T,
    /// Major semi-axis angle `alpha = atan(a)`.
    pub alpha: T,
    /// Minor semi-axis angle `beta = atan(b)`.
    pub beta: T,
}

/// Where a point sits relative to a conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

impl<T: Real> Conic<T> {
    pub fn new(nu1: T, nu2: T, orientation: Quaternion<T>) -> Result<Self> {
        if !(nu2 > T::zero()) || !(nu1 >= nu2) || !nu1.is_finite() {
            return Err(Error::domain(format!(
                "conic eigenvalues must satisfy nu1 >= nu2 > 0, got nu1 = {nu1}, nu2 = {nu2}"
            )));
        }
        let orientation = {
            let n = orientation.norm();
            if (n - T::one()).abs() > T::from_f64(1e-6) {
                return Err(Error::NonUnitQuaternion { norm: n.into_f64() });
            }
            orientation.normalized()?
        };
        Ok(Conic {
            nu1,
            nu2,
            orientation,
        })
    }

    pub fn rotation(&self) -> Mat3<T> {
        quaternion_rotation(&self.orientation).expect("orientation is kept unit")
    }

    /// The defining quadratic form, normalized so the center eigenvalue
    /// is exactly -1.
    pub fn matrix(&self) -> SymMat3<T> {
        SymMat3::diag(self.nu1, self.nu2, -T::one()).conjugated(&self.rotation())
    }

    pub fn semi_axes(&self) -> SemiAxes<T> {
        let a = T::one() / self.nu2.sqrt();
        let b = T::one() / self.nu1.sqrt();
        SemiAxes {
            a,
            b,
            alpha: a.atan(),
            beta: b.atan(),
        }
    }

    pub fn center(&self) -> SpherePoint<T> {
        SpherePoint::from_vec3(self.rotation().col(2)).expect("rotation column is unit")
    }

    pub fn is_circle(&self) -> bool {
        self.nu1 - self.nu2 <= T::from_f64(CIRCLE_TOL) * self.nu1
    }

    /// The conic with the same shape, rotated by `q` (exactly, without a
    /// round trip through the matrix form).
    pub fn transformed(&self, q: &Quaternion<T>) -> Result<Conic<T>> {
        Conic::new(self.nu1, self.nu2, q.mul(&self.orientation))
    }
}

/// Center of a conic and, unless it is a circle, the unit directions of its
/// major and minor symmetry axes (in that order).
pub fn center_and_axes<T: Real>(
    conic: &Conic<T>,
) -> (SpherePoint<T>, Option<SpherePoint<T>>, Option<SpherePoint<T>>) {
    let r = conic.rotation();
    let center = SpherePoint::from_vec3(r.col(2)).expect("unit column");
    if conic.is_circle() {
        (center, None, None)
    } else {
        let major = SpherePoint::from_vec3(r.col(1)).expect("unit column");
        let minor = SpherePoint::from_vec3(r.col(0)).expect("unit column");
        (center, Some(major), Some(minor))
    }
}

/// Recover a [`Conic`] from any symmetric matrix of signature `(2, 1)`.
///
/// The matrix is rescaled so the negative eigenvalue becomes -1; matrices
/// whose eigenvalue signs are not two-positive/one-negative (with magnitudes
/// above `1e-10` of the largest) are rejected as [`Error::NotAConic`].
pub fn normalize_conic<T: Real>(m: &SymMat3<T>) -> Result<Conic<T>> {
    let eig = eigen_sym3(m);
    let [l1, l2, l3] = eig.eigenvalues;
    let scale = l1.abs().max(l2.abs()).max(l3.abs());
    let tol = scale * T::from_f64(1e-10);
    if !(l2 > tol && l3 < -tol) {
        return Err(Error::NotAConic {
            eigenvalues: [l1.into_f64(), l2.into_f64(), l3.into_f64()],
        });
    }
    let nu1 = l1 / -l3;
    let nu2 = l2 / -l3;

    let circle = nu1 - nu2 <= T::from_f64(CIRCLE_TOL) * nu1;
    let orientation = if circle {
        // The in-plane angle of the eigenbasis is arbitrary for circles; use
        // the minimal rotation taking the z-axis to the center instead, so
        // equal circles get equal orientations.
        let c = eig.basis.col(2);
        let c = if c.z < T::zero() { -c } else { c };
        let e3 = Vec3::new(T::zero(), T::zero(), T::one());
        let axis = e3.cross(c);
        let q = Quaternion::new(T::one() + c.z, axis.x, axis.y, axis.z);
        q.normalized()?
    } else {
        Quaternion::from_rotation_matrix(&eig.basis)
    };
    Conic::new(nu1, nu2, orientation)
}

/// Classify a point against a conic using the sign of the normalized
/// quadratic form: values below `-tol` are interior, above `tol` exterior.
pub fn classify_point<T: Real>(conic: &Conic<T>, p: &SpherePoint<T>, tol: T) -> PointClass {
    let val = conic.matrix().quad_form(p.as_vec3());
    if val < -tol {
        PointClass::Interior
    } else if val > tol {
        PointClass::Exterior
    } else {
        PointClass::Boundary
    }
}
