//! Blending two conics along the matrix segment between their normalized
//! matrices, and area sweeps along that segment.
//!
//! For normalized matrices `M0`, `M1` (smallest eigenvalue −1) the blend at
//! `λ` is the conic of `M_λ = (1−λ)M0 + λM1`. Any point interior to both
//! endpoint conics stays interior for every `λ` because the quadratic form
//! interpolates linearly. The blend is only meaningful when such a common
//! interior point exists — otherwise `M_λ` can lose its (2,1) signature —
//! so both entry points verify one before doing anything else.
//!
//! The bundled fixture pair demonstrates that equal-area conics can have
//! blends whose area *exceeds* the endpoints everywhere between them, i.e.
//! the area is not quasiconvex along matrix segments.

use serde::Serialize;

use crate::area::{area_normalized, AreaValue};
use crate::error::{Error, Result};
use crate::geometry::conic::{normalize_conic, Conic};
use crate::geometry::mat3::Mat3;
use crate::geometry::symmat::SymMat3;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;
use crate::variation::check_normalized_matrix;

/// Margin for the strict `all_above_endpoints` comparison.
const ABOVE_ENDPOINTS_TOL: f64 = 1e-9;

/// Areas of blended conics along a λ grid.
#[derive(Debug, Clone, Serialize)]
pub struct BlendSweep<T> {
    /// Interior grid, each entry strictly between 0 and 1.
    pub lambdas: Vec<T>,
    /// Blend area per grid entry, in steradians.
    pub areas: Vec<T>,
    /// Endpoint areas.
    pub area0: T,
    pub area1: T,
    /// True when every grid area exceeds both endpoint areas by more than
    /// 1e−9.
    pub all_above_endpoints: bool,
}

fn spherical_mid<T: Real>(c0: Vec3<T>, c1: Vec3<T>, t: T) -> Vec3<T> {
    // Interpolate along the shorter arc; the centers are elliptic points,
    // so flip one representative if they face away from each other.
    let mut c1 = c1;
    let mut d = c0.dot(c1);
    if d < T::zero() {
        c1 = -c1;
        d = -d;
    }
    let omega = d.min(T::one()).acos();
    if omega < T::from_f64(1e-9) {
        return c0;
    }
    let s = omega.sin();
    let w0 = ((T::one() - t) * omega).sin() / s;
    let w1 = (t * omega).sin() / s;
    c0 * w0 + c1 * w1
}

/// Find a point interior to both quadratic forms, or report why not.
///
/// Tries the deepest point of each conic (its center), then scans the
/// geodesic between the two centers. A matrix segment between conics with
/// disjoint interiors has no such point and the blend is refused.
fn common_interior_point<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>) -> Result<Vec3<T>> {
    let c0 = normalize_conic(m0)?.center().as_vec3();
    let c1 = normalize_conic(m1)?.center().as_vec3();
    let depth = |p: Vec3<T>| -> T {
        let q0 = m0.quad_form(p);
        let q1 = m1.quad_form(p);
        -(q0.max(q1)) // positive iff interior to both
    };
    let mut best = c0;
    let mut best_depth = depth(c0);
    for i in 1..=64 {
        let t = T::from_f64(i as f64 / 64.0);
        let p = match spherical_mid(c0, c1, t).normalized() {
            Some(p) => p,
            None => continue,
        };
        let d = depth(p);
        if d > best_depth {
            best_depth = d;
            best = p;
        }
    }
    if best_depth > T::zero() {
        Ok(best)
    } else {
        Err(Error::precondition(
            "the two conics have no detectable common interior point; blending disjoint conics is undefined",
        ))
    }
}

fn check_blend_inputs<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>) -> Result<()> {
    check_normalized_matrix(m0, "M0")?;
    check_normalized_matrix(m1, "M1")?;
    common_interior_point(m0, m1)?;
    Ok(())
}

/// The conic of `(1−λ)M0 + λM1` for normalized `M0`, `M1` sharing an
/// interior point. At `λ ∈ {0, 1}` this reproduces the input conic.
pub fn blend<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>, lambda: T) -> Result<Conic<T>> {
    if !(lambda >= T::zero() && lambda <= T::one()) {
        return Err(Error::domain(format!(
            "blend parameter must lie in [0, 1], got {lambda}"
        )));
    }
    check_blend_inputs(m0, m1)?;
    normalize_conic(&m0.lerp(m1, lambda))
}

/// Evaluate the blend area on a grid of interior λ values.
///
/// The endpoint areas are always computed and recorded separately in
/// `area0`/`area1`, so grid entries must lie strictly inside `(0, 1)`.
pub fn sweep<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>, grid: &[T]) -> Result<BlendSweep<T>> {
    for &l in grid {
        if !(l > T::zero() && l < T::one()) {
            return Err(Error::domain(format!(
                "sweep grid entries must lie strictly in (0, 1), got {l}"
            )));
        }
    }
    check_blend_inputs(m0, m1)?;
    let area_of = |m: &SymMat3<T>| -> Result<AreaValue<T>> {
        let c = normalize_conic(m)?;
        area_normalized(c.nu1, c.nu2)
    };
    let area0 = area_of(m0)?.area;
    let area1 = area_of(m1)?.area;
    let mut areas = Vec::with_capacity(grid.len());
    for &l in grid {
        areas.push(area_of(&m0.lerp(m1, l))?.area);
    }
    let floor = area0.max(area1) + T::from_f64(ABOVE_ENDPOINTS_TOL);
    let all_above_endpoints = !areas.is_empty() && areas.iter().all(|&a| a > floor);
    Ok(BlendSweep {
        lambdas: grid.to_vec(),
        areas,
        area0,
        area1,
        all_above_endpoints,
    })
}

/// The congruent equal-area pair whose blend areas all exceed the endpoint
/// area: `M0 = diag(1/16, 1/36, −1)` and `M1 = R·M0·Rᵀ` for a fixed product
/// of three rotations (about x by π/60, a y-rotation by π/36, about z by
/// π/6, composed in exactly that order).
pub fn example1_fixture<T: Real>() -> (SymMat3<T>, SymMat3<T>) {
    let m0 = SymMat3::diag(
        T::from_f64(1.0 / 16.0),
        T::from_f64(1.0 / 36.0),
        -T::one(),
    );
    let (s1, c1) = (T::PI() / T::from_f64(60.0)).sin_cos();
    let (s2, c2) = (T::PI() / T::from_f64(36.0)).sin_cos();
    let (s3, c3) = (T::PI() / T::from_f64(6.0)).sin_cos();
    let o = T::zero();
    let i = T::one();
    let r1 = Mat3::new([[i, o, o], [o, c1, -s1], [o, s1, c1]]);
    // The y-rotation is used in the sign convention with −sin in the top
    // right; its transpose would rotate the other way and produce a
    // different (non-matching) fixture.
    let r2 = Mat3::new([[c2, o, -s2], [o, i, o], [s2, o, c2]]);
    let r3 = Mat3::new([[c3, -s3, o], [s3, c3, o], [o, o, i]]);
    let r = r1.mul(&r2).mul(&r3);
    let m1 = m0.conjugated(&r);
    (m0, m1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::area_from_eigenvalues;
    use crate::geometry::eigen::eigen_sym3;

    #[test]
    fn blend_endpoints_reproduce_inputs() {
        let (m0, m1) = example1_fixture::<f64>();
        let c0 = normalize_conic(&m0).unwrap();
        let b0 = blend(&m0, &m1, 0.0).unwrap();
        assert_eq!(b0.nu1, c0.nu1);
        assert_eq!(b0.nu2, c0.nu2);
        let c1 = normalize_conic(&m1).unwrap();
        let b1 = blend(&m0, &m1, 1.0).unwrap();
        assert!((b1.nu1 - c1.nu1).abs() < 1e-15);
        assert!((b1.nu2 - c1.nu2).abs() < 1e-15);
    }

    #[test]
    fn blend_of_identical_conics_is_identity() {
        let m = SymMat3::diag(2.0f64, 1.0, -1.0);
        let b = blend(&m, &m, 0.5).unwrap();
        assert_eq!(b.nu1, 2.0);
        assert_eq!(b.nu2, 1.0);
    }

    #[test]
    fn blend_rejects_bad_lambda_and_unnormalized_input() {
        let m = SymMat3::diag(2.0f64, 1.0, -1.0);
        assert!(blend(&m, &m, -0.1).is_err());
        assert!(blend(&m, &m, 1.1).is_err());
        let unnorm = SymMat3::diag(2.0f64, 1.0, -3.0);
        assert!(blend(&unnorm, &m, 0.5).is_err());
    }

    #[test]
    fn fixture_matrices_are_congruent() {
        let (m0, m1) = example1_fixture::<f64>();
        assert_eq!(m0.m11, 1.0 / 16.0);
        assert_eq!(m0.m22, 1.0 / 36.0);
        assert_eq!(m0.m33, -1.0);
        let e = eigen_sym3(&m1);
        assert!((e.eigenvalues[0] - 1.0 / 16.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0 / 36.0).abs() < 1e-12);
        assert!((e.eigenvalues[2] + 1.0).abs() < 1e-12);
        let a0 = area_from_eigenvalues(1.0 / 16.0, 1.0 / 36.0, -1.0).unwrap();
        let a1 = area_from_eigenvalues(
            e.eigenvalues[0],
            e.eigenvalues[1],
            e.eigenvalues[2],
        )
        .unwrap();
        assert!((a0.area - a1.area).abs() < 1e-10);
        assert!((a0.area - 4.9909228897829525).abs() < 1e-8);
    }

    #[test]
    fn fixture_conics_share_interior() {
        let (m0, m1) = example1_fixture::<f64>();
        let p = common_interior_point(&m0, &m1).unwrap();
        assert!(m0.quad_form(p) < 0.0);
        assert!(m1.quad_form(p) < 0.0);
    }

    #[test]
    fn fixture_sweep_rises_above_equal_endpoints() {
        let (m0, m1) = example1_fixture::<f64>();
        let grid: Vec<f64> = (1..=19).map(|k| k as f64 / 20.0).collect();
        let s = sweep(&m0, &m1, &grid).unwrap();
        assert!((s.area0 - s.area1).abs() < 1e-10);
        assert!(s.all_above_endpoints);
        for &a in &s.areas {
            assert!(a > s.area0 + 1e-3);
        }
        // Midpoint has the largest area on this symmetric sweep.
        let mid = s.areas[9];
        assert!((mid - 5.003787063051082).abs() < 1e-8, "{mid}");
        assert!(s.areas.iter().all(|&a| a <= mid));
    }

    #[test]
    fn interior_points_stay_interior_along_blend() {
        let (m0, m1) = example1_fixture::<f64>();
        let p = common_interior_point(&m0, &m1).unwrap();
        for k in 1..20 {
            let lam = k as f64 / 20.0;
            let m = m0.lerp(&m1, lam);
            assert!(m.quad_form(p) < 0.0);
        }
    }

    #[test]
    fn smallest_eigenvalue_stays_above_minus_one() {
        let (m0, m1) = example1_fixture::<f64>();
        for k in 0..=20 {
            let lam = k as f64 / 20.0;
            let e = eigen_sym3(&m0.lerp(&m1, lam));
            assert!(e.eigenvalues[2] >= -1.0 - 1e-12);
            assert!(e.eigenvalues[2] <= -0.99);
        }
    }

    #[test]
    fn concentric_coaxial_sweep_dips_below_endpoints() {
        // Convexity in the eigenvalues: the segment between diag(2,1,-1)
        // and diag(1,2,-1) passes through rounder conics of smaller area.
        let m0 = SymMat3::diag(2.0f64, 1.0, -1.0);
        let m1 = SymMat3::diag(1.0f64, 2.0, -1.0);
        let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let s = sweep(&m0, &m1, &grid).unwrap();
        assert!((s.area0 - s.area1).abs() < 1e-12);
        assert!(!s.all_above_endpoints);
        for &a in &s.areas {
            assert!(a < s.area0 - 1e-4);
        }
    }

    #[test]
    fn constant_sweep_for_equal_inputs() {
        let m = SymMat3::diag(3.0f64, 2.0, -1.0);
        let grid = [0.25f64, 0.5, 0.75];
        let s = sweep(&m, &m, &grid).unwrap();
        for &a in &s.areas {
            assert_eq!(a, s.area0);
        }
        assert!(!s.all_above_endpoints);
    }

    #[test]
    fn sweep_rejects_endpoint_grid_values() {
        let m = SymMat3::diag(2.0f64, 1.0, -1.0);
        assert!(sweep(&m, &m, &[0.0, 0.5]).is_err());
        assert!(sweep(&m, &m, &[0.5, 1.0]).is_err());
    }

    #[test]
    fn disjoint_interiors_refused() {
        // Two tiny circles around orthogonal centers: interiors disjoint.
        let m0 = SymMat3::diag(100.0f64, 100.0, -1.0);
        let m1 = SymMat3::diag(-1.0f64, 100.0, 100.0);
        let r = blend(&m0, &m1, 0.5);
        assert!(matches!(r, Err(Error::Precondition(_))), "{r:?}");
    }
}
