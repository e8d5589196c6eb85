//! Point–line duality on the sphere and minimal-measure enclosing conics
//! of line sets.
//!
//! A great line is the great circle orthogonal to its *pole*; the polar
//! maps swap a point with the line it is pole of. A line has at most one
//! real intersection with a conic exactly when its pole lies inside or on
//! the *dual conic*, the conic traced by the poles of all tangent lines.
//! The natural size of a set of lines is the area of the corresponding
//! set of poles, so enclosing a line set with minimal measure reduces to
//! enclosing the pole set with a minimal-area conic and dualizing back.

use serde::Serialize;

use crate::area::{area_from_axes, DEFAULT_QUAD_TOL};
use crate::error::{Error, Result};
use crate::geometry::conic::{classify_point, normalize_conic, Conic, PointClass};
use crate::geometry::point::SpherePoint;
use crate::geometry::quat::Quaternion;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;
use crate::solver::{
    solve_fixed_axes, solve_fixed_center, solve_general, PointSet, SolveResult, SolverConfig,
};

/// Recorded reading of the dual conic's size: semi-axis *tangents* are
/// reciprocated, `(a, b) -> (1/b, 1/a)`. Reciprocating the semi-axis
/// angles themselves (or taking their complements) is not used.
pub const DUAL_AXES_CONVENTION: &str =
    "dual conic semi-axis tangents are reciprocals of the primal tangents: (a, b) -> (1/b, 1/a)";

/// A great circle, stored by its pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreatLine<T> {
    pole: SpherePoint<T>,
}

impl<T: Real> GreatLine<T> {
    pub fn new(pole: SpherePoint<T>) -> Self {
        GreatLine { pole }
    }

    /// Build the line orthogonal to the given (not necessarily unit)
    /// normal direction.
    pub fn from_normal(n: Vec3<T>) -> Result<Self> {
        Ok(GreatLine {
            pole: SpherePoint::from_vec3(n)?,
        })
    }

    pub fn pole(&self) -> &SpherePoint<T> {
        &self.pole
    }

    /// True when `x` lies on the line within `tol` (i.e. is orthogonal to
    /// the pole).
    pub fn contains_point(&self, x: &SpherePoint<T>, tol: T) -> bool {
        self.pole.as_vec3().dot(x.as_vec3()).abs() <= tol
    }
}

/// The pole of a line. Exact: returns the stored canonical point.
pub fn polar_of_line<T: Real>(line: &GreatLine<T>) -> SpherePoint<T> {
    line.pole
}

/// The line whose pole is `p`. Exact inverse of [`polar_of_line`].
pub fn polar_of_point<T: Real>(p: &SpherePoint<T>) -> GreatLine<T> {
    GreatLine { pole: *p }
}

/// The conic of poles of the tangent lines of `c`.
///
/// For `M = R diag(ν1, ν2, −1) Rᵀ` the dual is the conic of the inverse
/// matrix: same axes and center, eigenvalues `(1/ν1, 1/ν2, −1)`, hence
/// semi-axis tangents `(1/b, 1/a)`. Computed from the sign-corrected
/// adjugate, which needs no division by near-zero quantities.
pub fn dual_conic<T: Real>(c: &Conic<T>) -> Result<Conic<T>> {
    let adj = c.matrix().adjugate();
    normalize_conic(&adj.scale(-T::one()))
}

/// Whether every real intersection of `line` with `c` is a single point —
/// i.e. the line misses the conic's interior.
///
/// Evaluated by two independent routes that must agree:
/// 1. restrict the quadratic form to the line and count real zeros via
///    the discriminant of the restricted 2×2 form;
/// 2. classify the line's pole against the dual conic.
///
/// `tol` widens the boundary band symmetrically in both routes (scaled to
/// the ν3 = −1 normalization). Disagreement of the routes reports an
/// internal inconsistency.
pub fn contains_line<T: Real>(c: &Conic<T>, line: &GreatLine<T>, tol: T) -> Result<bool> {
    if !(tol >= T::zero()) || !tol.is_finite() {
        return Err(Error::domain(format!(
            "classification tolerance must be nonnegative and finite, got {tol}"
        )));
    }
    let l = line.pole.as_vec3();

    // Route 1: an orthonormal basis (e, f) of the line's plane turns the
    // restriction of M into a 2x2 form; the line meets the conic twice,
    // once, or never according to the sign of that form's determinant.
    let helper = if l.x.abs() < T::from_f64(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let e = helper
        .cross(l)
        .normalized()
        .expect("helper direction is not parallel to the pole");
    let f = l.cross(e);
    let m = c.matrix();
    let qee = m.quad_form(e);
    let qff = m.quad_form(f);
    let qef = e.dot(m.apply(f));
    // Scale by 1/(nu1 nu2) = -1/det M so the discriminant is in the same
    // units as the dual conic's normalized quadratic form.
    let disc = (qee * qff - qef * qef) / (c.nu1 * c.nu2);
    let direct = disc >= -tol;

    // Route 2: pole against the dual conic.
    let dual = dual_conic(c)?;
    let by_dual = classify_point(&dual, &line.pole, tol) != PointClass::Exterior;

    if direct != by_dual {
        return Err(Error::InternalInconsistency(format!(
            "line containment routes disagree: restricted discriminant {disc} vs dual-side class \
             {:?} at tolerance {tol}",
            classify_point(&dual, &line.pole, tol)
        )));
    }
    Ok(direct)
}

/// Measure of the set of all lines contained in `c`: the area of the dual
/// conic's interior.
pub fn measure_of_conic<T: Real>(c: &Conic<T>) -> Result<T> {
    let axes = dual_conic(c)?.semi_axes();
    Ok(area_from_axes(axes.a, axes.b, T::from_f64(DEFAULT_QUAD_TOL))?.area)
}

/// Which point-solver a line-set solve delegates to. The frame or center
/// constraint transfers unchanged: a conic and its dual share axes and
/// center.
#[derive(Debug, Clone)]
pub enum LineSetMode<T> {
    FixedAxes { frame: Quaternion<T> },
    FixedCenter { center: SpherePoint<T> },
    General { config: SolverConfig<T> },
}

/// Minimal-measure conic containing every line of the set.
///
/// Dualizes the lines to their poles, encloses the poles with a
/// minimal-area conic in the requested mode, and returns the dual of that
/// solution. In the result, `area` is the *measure* of the returned conic
/// (equal to the area of the pole-side solution), `active_points` indexes
/// the input lines that are tangent to the conic, and the certificate —
/// when present — certifies uniqueness of the pole-side solution, which
/// transfers to the line side because dualization is a bijection.
pub fn solve_line_set<T: Real>(
    lines: &[GreatLine<T>],
    mode: &LineSetMode<T>,
) -> Result<SolveResult<T>> {
    let poles: Vec<SpherePoint<T>> = lines.iter().map(|l| l.pole).collect();
    let ps = PointSet::new(poles)?;
    let result = match mode {
        LineSetMode::FixedAxes { frame } => solve_fixed_axes(&ps, frame)?,
        LineSetMode::FixedCenter { center } => solve_fixed_center(&ps, center)?,
        LineSetMode::General { config } => solve_general(&ps, config)?,
    };

    // The solver indexes the deduplicated pole set; report input lines.
    let mut active_lines = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if let Some(j) = ps.points().iter().position(|p| p == &line.pole) {
            if result.active_points.contains(&j) {
                active_lines.push(i);
            }
        }
    }

    Ok(SolveResult {
        conic: dual_conic(&result.conic)?,
        area: result.area,
        active_points: active_lines,
        mode: result.mode,
        certificate: result.certificate,
        iterations: result.iterations,
        converged: result.converged,
    })
}
