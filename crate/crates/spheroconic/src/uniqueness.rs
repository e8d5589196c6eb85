//! Uniqueness certificates for minimal-area enclosing conics.
//!
//! The key object is the indicator integral `J(v)`. For a circle of radius
//! `r` with `v = 1/tan^2(r)`, the sign of `J(v)` tells whether the circle is
//! a strict local minimizer among conics through it: positive means yes.
//! `J` is increasing on `[0, 2]`, diverges to `-inf` at `v = 0`, and equals
//! `3*pi/4` at `v = 2`, so it has a single root `v0`. The circle radius
//! corresponding to `v0`,
//!
//! ```text
//! R = arctan(1 / sqrt(v0)) ~= 0.8790883421590705   (v0 ~= 0.685934438805307)
//! ```
//!
//! is the largest radius below which inscribed circles still certify
//! uniqueness. A candidate conic that (1) contains a circle of radius
//! `rho <= R` and (2) has area strictly below the area of the conic with
//! semi-axis tangents `(tan R, tan rho)` is the unique minimal-area conic
//! for its point set.

use std::sync::OnceLock;

use serde::Serialize;

use crate::area::{area_from_axes, area_normalized, DEFAULT_QUAD_TOL};
use crate::error::{Error, Result};
use crate::geometry::conic::Conic;
use crate::geometry::point::SpherePoint;
use crate::scalar::Real;

/// Quadrature tolerance for evaluations of `J` inside the root search.
const V0_QUAD_TOL: f64 = 1e-12;

/// How the inscribed-circle radius handed to [`certify`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RhoSource {
    /// The caller supplied `rho` directly.
    UserSupplied,
    /// `rho` is the inscribed-circle radius of a point-set hull.
    InscribedCircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Both certificate conditions hold: the candidate is the unique
    /// minimal-area conic.
    Unique,
    /// At least one condition failed. This does not disprove minimality or
    /// uniqueness; it only means this certificate cannot establish it.
    Inconclusive,
}

/// Outcome of a uniqueness check. `verdict` is `Unique` exactly when
/// `condition1_met && condition2_met`.
///
/// The area bound is evaluated with *tangent* arguments,
/// `area_from_axes(tan R, tan rho)` — not with the angles themselves; see
/// [`BOUND_CONVENTION`], which is embedded in every certificate.
#[derive(Debug, Clone, Serialize)]
pub struct UniquenessCertificate<T> {
    /// Radius of a circle contained in the candidate conic, in `(0, R]`.
    pub rho: T,
    /// Critical radius `arctan(1/sqrt(v0))`.
    #[serde(rename = "R")]
    pub r_critical: T,
    /// Root of the indicator integral `J`.
    pub v0: T,
    /// Area of the comparison conic with semi-axis tangents `(tan R, tan rho)`.
    pub area_bound: T,
    /// Area of the candidate conic.
    pub candidate_area: T,
    /// `rho > 0` and the candidate's minor axis admits the circle
    /// (`beta >= rho`).
    pub condition1_met: bool,
    /// `candidate_area < area_bound` (strict).
    pub condition2_met: bool,
    /// Informational side check: `tan(alpha)^{-2} > v0` for the candidate's
    /// major semi-axis `alpha`. Not part of the verdict.
    pub major_axis_ok: bool,
    pub verdict: Verdict,
    pub rho_source: RhoSource,
    /// Records which argument convention the bound uses.
    pub bound_convention: &'static str,
}

/// The convention note embedded in every certificate.
pub const BOUND_CONVENTION: &str =
    "area_bound = area_from_axes(tan(R), tan(rho)); radian-argument form area_from_axes(R, rho) is not used";

/// The indicator integral `J(v)` for `0 <= v <= 2`.
///
/// With the substitution `t = sin(u)` both pieces become regular inside
/// their intervals (the raw `t`-form has an inverse-square-root endpoint
/// singularity that slows adaptive quadrature to a crawl):
///
/// ```text
/// J(v) = int_0^{asin w} (1 + v - 3 sin^2 u) du
///      + int_{asin w}^{pi/2} (1 + v - 3 sin^2 u) * sqrt(1+v) / sqrt(1 + v - sin^2 u) du,
/// w = sqrt((1+v)/3).
/// ```
///
/// `J(2) = 3*pi/4` exactly. At `v = 0` the second integrand behaves like
/// `-2/cos(u)` near `pi/2` and the integral diverges; this function returns
/// `-inf` there rather than failing.
#[allow(non_snake_case)]
pub fn J_of_v<T: Real>(v: T) -> Result<T> {
    J_of_v_with_tol(v, T::from_f64(V0_QUAD_TOL).max(T::epsilon() * T::from_f64(64.0)))
}

#[allow(non_snake_case)]
pub(crate) fn J_of_v_with_tol<T: Real>(v: T, tol: T) -> Result<T> {
    let two = T::from_f64(2.0);
    if !(v >= T::zero() && v <= two) {
        return Err(Error::domain(format!(
            "J(v) requires 0 <= v <= 2, got v = {v}"
        )));
    }
    if v == T::zero() {
        return Ok(T::neg_infinity());
    }
    let three = T::from_f64(3.0);
    let one_plus = T::one() + v;
    let w = (one_plus / three).sqrt().min(T::one());
    let split = w.asin();
    let half = T::from_f64(0.5);

    let first = crate::quadrature::integrate(
        |u: T| {
            let s = u.sin();
            one_plus - three * s * s
        },
        T::zero(),
        split,
        tol * half,
    )?;
    let mut total = first.value;
    if split < T::FRAC_PI_2() {
        let root = one_plus.sqrt();
        let second = crate::quadrature::integrate(
            |u: T| {
                let s2 = {
                    let s = u.sin();
                    s * s
                };
                (one_plus - three * s2) * root / (one_plus - s2).sqrt()
            },
            split,
            T::FRAC_PI_2(),
            tol * half,
        )?;
        total = total + second.value;
    }
    Ok(total)
}

/// Locate the root `v0` of `J` by bisection on `[0, 2]` followed by a
/// bracketed secant polish.
///
/// The endpoints are never evaluated (`J(0)` diverges). On return the final
/// bracket has width at most `tol` and `|J(v0)|` is below the internal
/// quadrature tolerance (1e-12 for `f64`).
pub fn find_v0<T: Real>(tol: T) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(Error::domain(format!(
            "find_v0 requires tol > 0, got {tol}"
        )));
    }
    let qtol = T::from_f64(V0_QUAD_TOL).max(T::epsilon() * T::from_f64(64.0));
    let j = |v: T| J_of_v_with_tol(v, qtol);

    let mut lo = T::zero();
    let mut hi = T::from_f64(2.0);
    // Keep bisecting to at least 1e-3 so both bracket ends carry evaluated
    // values for the secant stage.
    let width_target = tol.min(T::from_f64(1e-3));
    let mut f_lo: Option<T> = None;
    let mut f_hi: Option<T> = None;
    while hi - lo > width_target {
        let mid = (lo + hi) * T::from_f64(0.5);
        if !(mid > lo && mid < hi) {
            break;
        }
        let fm = j(mid)?;
        if fm < T::zero() {
            lo = mid;
            f_lo = Some(fm);
        } else {
            hi = mid;
            f_hi = Some(fm);
        }
    }
    let (mut a, mut fa) = (lo, f_lo.expect("root is interior; negative side was evaluated"));
    let (mut b, mut fb) = (hi, f_hi.expect("root is interior; positive side was evaluated"));

    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..40 {
        if best.1.abs() <= qtol {
            break;
        }
        let denom = fb - fa;
        let mut x = if denom.abs() > T::zero() {
            (a * fb - b * fa) / denom
        } else {
            (a + b) * T::from_f64(0.5)
        };
        if !(x > a && x < b) {
            x = (a + b) * T::from_f64(0.5);
        }
        if !(x > a && x < b) {
            break;
        }
        let fx = j(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx < T::zero() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Ok(best.0)
}

static V0_CACHE: OnceLock<(f64, f64)> = OnceLock::new();

/// Cached `(v0, R)` pair at tolerance 1e-10, computed once per process.
pub(crate) fn cached_v0_radius() -> (f64, f64) {
    *V0_CACHE.get_or_init(|| {
        let v0 = find_v0::<f64>(1e-10)
            .expect("J is smooth on the evaluated part of (0, 2]; the search cannot fail");
        (v0, (1.0 / v0.sqrt()).atan())
    })
}

/// The critical radius `R = arctan(1/sqrt(v0))`, from the cached root.
#[allow(non_snake_case)]
pub fn radius_R<T: Real>() -> T {
    T::from_f64(cached_v0_radius().1)
}

/// Check the two uniqueness conditions for a candidate conic known to
/// contain a circle of radius `rho` (for an enclosing conic of a point set,
/// any inscribed-circle radius of the point set works).
///
/// Requires `0 < rho <= R`; values outside that range are a domain error —
/// the certificate's premise needs the inscribed circle to be no larger
/// than the critical radius.
pub fn certify<T: Real>(candidate: &Conic<T>, rho: T) -> Result<UniquenessCertificate<T>> {
    certify_with_source(candidate, rho, RhoSource::UserSupplied)
}

/// [`certify`], but with an explicit record of where `rho` came from.
pub fn certify_with_source<T: Real>(
    candidate: &Conic<T>,
    rho: T,
    rho_source: RhoSource,
) -> Result<UniquenessCertificate<T>> {
    let (v0_f, r_f) = cached_v0_radius();
    let v0 = T::from_f64(v0_f);
    let r_critical = T::from_f64(r_f);
    if !(rho > T::zero() && rho < T::FRAC_PI_2()) {
        return Err(Error::domain(format!(
            "certify requires 0 < rho < pi/2, got rho = {rho}"
        )));
    }
    if rho > r_critical {
        return Err(Error::domain(format!(
            "rho = {rho} exceeds the critical radius R = {r_critical}; the certificate needs rho <= R"
        )));
    }
    let axes = candidate.semi_axes();
    let condition1_met = axes.beta >= rho;
    let tol = T::from_f64(DEFAULT_QUAD_TOL);
    let area_bound = area_from_axes(r_critical.tan(), rho.tan(), tol)?.area;
    let candidate_area = area_normalized(candidate.nu1, candidate.nu2)?.area;
    let condition2_met = candidate_area < area_bound;
    let verdict = if condition1_met && condition2_met {
        Verdict::Unique
    } else {
        Verdict::Inconclusive
    };
    Ok(UniquenessCertificate {
        rho,
        r_critical,
        v0,
        area_bound,
        candidate_area,
        condition1_met,
        condition2_met,
        major_axis_ok: candidate.nu2 > v0,
        verdict,
        rho_source,
        bound_convention: BOUND_CONVENTION,
    })
}

/// Radius of the largest circle inscribed in the spherical convex hull of
/// the points. Fails with `DegenerateInput` for fewer than three points,
/// points on a single great circle, or sets spanning beyond a hemisphere.
pub fn inscribed_circle_radius<T: Real>(points: &[SpherePoint<T>]) -> Result<T> {
    let hull = crate::hull::spherical_hull(points).map_err(|e| match e {
        Error::Unbounded(msg) => Error::DegenerateInput(msg),
        other => other,
    })?;
    Ok(crate::hull::inscribed_circle(&hull).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quat::Quaternion;

    #[test]
    fn j_at_two_is_three_quarter_pi() {
        let j = J_of_v(2.0f64).unwrap();
        assert!((j - 3.0 * std::f64::consts::PI / 4.0).abs() < 1e-12, "{j}");
    }

    #[test]
    fn j_diverges_at_zero_and_changes_sign() {
        assert_eq!(J_of_v(0.0f64).unwrap(), f64::NEG_INFINITY);
        assert!(J_of_v(0.5f64).unwrap() < 0.0);
        assert!(J_of_v(0.9f64).unwrap() > 0.0);
        // Close to the divergence the value is very negative but finite.
        assert!(J_of_v(1e-4f64).unwrap() < -3.0);
    }

    #[test]
    fn j_domain() {
        assert!(J_of_v(-0.1f64).is_err());
        assert!(J_of_v(2.00001f64).is_err());
        assert!(J_of_v(f64::NAN).is_err());
    }

    #[test]
    fn v0_and_radius() {
        let v0 = find_v0::<f64>(1e-10).unwrap();
        assert!((v0 - 0.685934438805307).abs() < 1e-9, "{v0}");
        assert!(J_of_v(v0).unwrap().abs() <= 1e-12);
        let (v0_cached, r) = cached_v0_radius();
        assert!((v0_cached - v0).abs() < 1e-10);
        assert!((r - 0.8790883421590705).abs() < 1e-9);
        // Round trip: tan(R)^{-2} recovers v0.
        let back = 1.0 / (radius_R::<f64>().tan().powi(2));
        assert!((back - v0_cached).abs() < 1e-12);
    }

    #[test]
    fn find_v0_rejects_bad_tol() {
        assert!(find_v0::<f64>(0.0).is_err());
        assert!(find_v0::<f64>(-1.0).is_err());
        assert!(find_v0::<f64>(f64::NAN).is_err());
    }

    #[test]
    fn small_circle_is_unique() {
        let t = 0.1f64.tan();
        let nu = 1.0 / (t * t);
        let c = Conic::new(nu, nu, Quaternion::identity()).unwrap();
        let cert = certify(&c, 0.1).unwrap();
        assert!(cert.condition1_met);
        assert!(cert.condition2_met);
        assert_eq!(cert.verdict, Verdict::Unique);
        assert!(cert.major_axis_ok);
        assert_eq!(cert.rho_source, RhoSource::UserSupplied);
    }

    #[test]
    fn wide_conic_is_inconclusive_for_every_rho() {
        // Semi-axis tangents 6 and 4: the area (~4.99) exceeds the largest
        // possible bound area(tan R, tan R) ~ 2.28, so condition 2 can
        // never hold.
        let c = Conic::new(1.0 / 16.0, 1.0 / 36.0, Quaternion::identity()).unwrap();
        let r = radius_R::<f64>();
        for rho in [1e-3, 0.1, 0.5, r] {
            let cert = certify(&c, rho).unwrap();
            assert!(!cert.condition2_met);
            assert_eq!(cert.verdict, Verdict::Inconclusive);
        }
    }

    #[test]
    fn certify_rejects_out_of_range_rho() {
        let c = Conic::new(4.0, 4.0, Quaternion::identity()).unwrap();
        assert!(certify(&c, 0.0).is_err());
        assert!(certify(&c, -0.3).is_err());
        assert!(certify(&c, std::f64::consts::FRAC_PI_2).is_err());
        let r = radius_R::<f64>();
        assert!(certify(&c, r + 1e-6).is_err());
        assert!(certify(&c, r).is_ok());
    }

    #[test]
    fn bound_grows_with_rho() {
        let t = 0.3f64.tan();
        let c = Conic::new(1.0 / (t * t), 1.0 / (t * t), Quaternion::identity()).unwrap();
        let mut last = 0.0;
        for rho in [0.05, 0.15, 0.3, 0.6, 0.85] {
            let cert = certify(&c, rho).unwrap();
            assert!(cert.area_bound > last);
            last = cert.area_bound;
        }
    }

    #[test]
    fn inscribed_radius_of_symmetric_triangle() {
        // Equilateral triangle at polar angle 0.5 around the pole; the
        // enumeration must match the frozen reference value.
        let pts: Vec<SpherePoint<f64>> = (0..3)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                SpherePoint::new(0.5f64.sin() * phi.cos(), 0.5f64.sin() * phi.sin(), 0.5f64.cos())
                    .unwrap()
            })
            .collect();
        let r = inscribed_circle_radius(&pts).unwrap();
        assert!((r - 0.26664662693797636).abs() < 1e-12, "{r}");
    }

    #[test]
    fn inscribed_radius_rejects_collinear() {
        let pts = vec![
            SpherePoint::new(0.1f64, 0.0, 1.0).unwrap(),
            SpherePoint::new(0.2f64, 0.0, 1.0).unwrap(),
            SpherePoint::new(0.3f64, 0.0, 1.0).unwrap(),
        ];
        assert!(matches!(
            inscribed_circle_radius(&pts),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn certificate_serializes_with_uppercase_r() {
        // rho strictly below the circle radius: the beta >= rho comparison
        // is exact, so equality up to rounding must not be relied on.
        let t = 0.2f64.tan();
        let c = Conic::new(1.0 / (t * t), 1.0 / (t * t), Quaternion::identity()).unwrap();
        let cert = certify(&c, 0.19).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"R\":"));
        assert!(json.contains("\"verdict\":\"Unique\""));
        assert!(json.contains("tan(R)") || json.contains("bound_convention"));
    }
}
