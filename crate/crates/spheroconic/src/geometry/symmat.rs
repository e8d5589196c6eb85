use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::mat3::Mat3;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;

/// Symmetric 3x3 matrix, stored as its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat3<T> {
    pub m11: T,
    pub m12: T,
    pub m13: T,
    pub m22: T,
    pub m23: T,
    pub m33: T,
}

impl<T: Real> SymMat3<T> {
    pub fn new(m11: T, m12: T, m13: T, m22: T, m23: T, m33: T) -> Self {
        SymMat3 {
            m11,
            m12,
            m13,
            m22,
            m23,
            m33,
        }
    }

    pub fn diag(d1: T, d2: T, d3: T) -> Self {
        let z = T::zero();
        SymMat3::new(d1, z, z, d2, z, d3)
    }

    pub fn identity() -> Self {
        SymMat3::diag(T::one(), T::one(), T::one())
    }

    /// Accept a full 3x3 row array, verifying symmetry to a small relative
    /// tolerance and averaging the off-diagonal pairs.
    pub fn from_rows(rows: [[T; 3]; 3]) -> Result<Self> {
        let scale = rows
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &x| acc.max(x.abs()))
            .max(T::one());
        let tol = scale * T::from_f64(1e-9);
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if (rows[i][j] - rows[j][i]).abs() > tol {
                return Err(Error::domain(format!(
                    "matrix is not symmetric: entry ({i},{j}) differs from ({j},{i})"
                )));
            }
        }
        let half = T::from_f64(0.5);
        Ok(SymMat3::new(
            rows[0][0],
            (rows[0][1] + rows[1][0]) * half,
            (rows[0][2] + rows[2][0]) * half,
            rows[1][1],
            (rows[1][2] + rows[2][1]) * half,
            rows[2][2],
        ))
    }

    pub fn to_mat3(&self) -> Mat3<T> {
        Mat3::new([
            [self.m11, self.m12, self.m13],
            [self.m12, self.m22, self.m23],
            [self.m13, self.m23, self.m33],
        ])
    }

    pub fn rows(&self) -> [[T; 3]; 3] {
        self.to_mat3().rows
    }

    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        self.to_mat3().mul_vec(v)
    }

    /// `v' M v`.
    pub fn quad_form(&self, v: Vec3<T>) -> T {
        v.dot(self.apply(v))
    }

    pub fn trace(&self) -> T {
        self.m11 + self.m22 + self.m33
    }

    pub fn det(&self) -> T {
        self.m11 * (self.m22 * self.m33 - self.m23 * self.m23)
            - self.m12 * (self.m12 * self.m33 - self.m23 * self.m13)
            + self.m13 * (self.m12 * self.m23 - self.m22 * self.m13)
    }

    /// Adjugate (transpose of the cofactor matrix); symmetric again, and
    /// satisfies `M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> SymMat3<T> {
        SymMat3::new(
            self.m22 * self.m33 - self.m23 * self.m23,
            self.m13 * self.m23 - self.m12 * self.m33,
            self.m12 * self.m23 - self.m13 * self.m22,
            self.m11 * self.m33 - self.m13 * self.m13,
            self.m12 * self.m13 - self.m11 * self.m23,
            self.m11 * self.m22 - self.m12 * self.m12,
        )
    }

    /// Frobenius inner product `tr(A B)` of two symmetric matrices; the
    /// off-diagonal products appear twice.
    pub fn frob_dot(&self, o: &SymMat3<T>) -> T {
        let two = T::from_f64(2.0);
        self.m11 * o.m11
            + self.m22 * o.m22
            + self.m33 * o.m33
            + two * (self.m12 * o.m12 + self.m13 * o.m13 + self.m23 * o.m23)
    }

    /// `R M R'` for a (not necessarily orthogonal) matrix `R`.
    pub fn conjugated(&self, r: &Mat3<T>) -> SymMat3<T> {
        let full = r.mul(&self.to_mat3()).mul(&r.transpose());
        // The product of a symmetric matrix with R on both sides is symmetric
        // up to rounding; average to keep the type honest.
        let half = T::from_f64(0.5);
        SymMat3::new(
            full.rows[0][0],
            (full.rows[0][1] + full.rows[1][0]) * half,
            (full.rows[0][2] + full.rows[2][0]) * half,
            full.rows[1][1],
            (full.rows[1][2] + full.rows[2][1]) * half,
            full.rows[2][2],
        )
    }

    pub fn scale(&self, s: T) -> SymMat3<T> {
        SymMat3::new(
            self.m11 * s,
            self.m12 * s,
            self.m13 * s,
            self.m22 * s,
            self.m23 * s,
            self.m33 * s,
        )
    }

    pub fn add(&self, o: &SymMat3<T>) -> SymMat3<T> {
        SymMat3::new(
            self.m11 + o.m11,
            self.m12 + o.m12,
            self.m13 + o.m13,
            self.m22 + o.m22,
            self.m23 + o.m23,
            self.m33 + o.m33,
        )
    }

    pub fn sub(&self, o: &SymMat3<T>) -> SymMat3<T> {
        self.add(&o.scale(-T::one()))
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, o: &SymMat3<T>, t: T) -> SymMat3<T> {
        self.scale(T::one() - t).add(&o.scale(t))
    }
}

impl<T: Real + Serialize> Serialize for SymMat3<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.rows();
        let mut seq = serializer.serialize_seq(Some(3))?;
        for row in &rows {
            seq.serialize_element(&[row[0], row[1], row[2]])?;
        }
        seq.end()
    }
}
