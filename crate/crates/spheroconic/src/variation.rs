//! First variation of the blend area at `lambda = 0`.
//!
//! For a pencil `M_lambda = (1 - lambda) M0 + lambda M1` of conic matrices,
//! the derivative of the enclosed area at `lambda = 0` is computed along
//! four independent routes:
//!
//! * implicit eigenvalue rates chained through the area gradient,
//! * a direct quadrature formula in the frame of `M0`,
//! * a closed form in complete elliptic integrals,
//! * specialized closed forms for the concentric ("coaxial") and half-turn
//!   configurations, the latter with its degree-four Bernstein expansion.
//!
//! The routes are deliberately kept as separate code paths; their agreement
//! is a test obligation, not an implementation shortcut.

use serde::Serialize;

use crate::area::{area_gradient3, elliptic_KE, modulus_f, DEFAULT_QUAD_TOL};
use crate::error::{Error, Result};
use crate::geometry::conic::Conic;
use crate::geometry::eigen::eigen_sym3;
use crate::geometry::mat3::Mat3;
use crate::geometry::point::SpherePoint;
use crate::geometry::symmat::SymMat3;
use crate::quadrature::integrate;
use crate::scalar::Real;

/// Eigenvalue gap below which the closed-form rates are refused (their
/// common denominator `N1` vanishes linearly in the gap).
pub const MIN_SPECTRAL_GAP: f64 = 1e-8;

/// The coefficients of the closed-form variation rates, together with the
/// normalizer `N1` and the inputs they were computed from.
#[derive(Debug, Clone, Copy, Serialize)]
#[allow(non_snake_case)]
pub struct ABCCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub n1: T,
    pub nu01: T,
    pub nu02: T,
}

/// Degree-four Bernstein coefficients of the cleared-denominator rate
/// difference between the half-turn and coaxial configurations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BernsteinCoefficients<T> {
    pub p0: T,
    pub p1: T,
    pub p2: T,
    pub p3: T,
    pub p4: T,
}

impl<T: Real> BernsteinCoefficients<T> {
    pub fn as_array(&self) -> [T; 5] {
        [self.p0, self.p1, self.p2, self.p3, self.p4]
    }

    /// Evaluate `sum_i p_i B^4_i(t)` with the Bernstein basis on `[0, 1]`.
    pub fn evaluate(&self, t: T) -> T {
        let one = T::one();
        let s = one - t;
        let four = T::from_f64(4.0);
        let six = T::from_f64(6.0);
        self.p0 * s * s * s * s
            + self.p1 * four * t * s * s * s
            + self.p2 * six * t * t * s * s
            + self.p3 * four * t * t * t * s
            + self.p4 * t * t * t * t
    }
}

/// Everything the first-variation analysis produces for one matrix pair.
#[derive(Debug, Clone, Serialize)]
pub struct VariationReport<T> {
    /// Rate from the quadrature formula.
    pub d_integral: T,
    /// Rate from the elliptic closed form.
    pub d_elliptic: T,
    /// `(d nu1 / d lambda, d nu2 / d lambda, d nu3 / d lambda)` at 0.
    pub eigen_rates: (T, T, T),
    pub abc: Option<ABCCoefficients<T>>,
    pub bernstein: Option<BernsteinCoefficients<T>>,
}

fn check_gap<T: Real>(nu01: T, nu02: T) -> Result<()> {
    if !(nu02 > T::zero()) || !nu01.is_finite() || nu01 < nu02 {
        return Err(Error::domain(format!(
            "base eigenvalues must satisfy nu01 >= nu02 > 0, got ({nu01}, {nu02})"
        )));
    }
    let gap = nu01 - nu02;
    if gap < T::from_f64(MIN_SPECTRAL_GAP) {
        return Err(Error::DegenerateSpectrum {
            gap: gap.into_f64(),
            min_gap: MIN_SPECTRAL_GAP,
        });
    }
    Ok(())
}

fn check_target_pair<T: Real>(nu11: T, nu12: T) -> Result<()> {
    if !(nu12 > T::zero()) || !(nu11 >= nu12) || !nu11.is_finite() {
        return Err(Error::domain(format!(
            "target eigenvalues must satisfy nu11 >= nu12 > 0, got ({nu11}, {nu12})"
        )));
    }
    Ok(())
}

/// Verify a matrix is in the normalized chart: signature `(2,1)` with the
/// negative eigenvalue within `1e-6` of exactly `-1`.
pub(crate) fn check_normalized_matrix<T: Real>(m: &SymMat3<T>, which: &str) -> Result<[T; 3]> {
    let eig = eigen_sym3(m);
    let [l1, l2, l3] = eig.eigenvalues;
    if !(l2 > T::zero()) || (l3 + T::one()).abs() > T::from_f64(1e-6) {
        return Err(Error::domain(format!(
            "{which} must be normalized with eigenvalues nu1 >= nu2 > 0 and nu3 = -1, got ({}, {}, {})",
            l1.into_f64(),
            l2.into_f64(),
            l3.into_f64()
        )));
    }
    Ok(eig.eigenvalues)
}

/// Derivatives of the three eigenvalues of the pencil
/// `(1 - lambda) M0 + lambda M1` at `lambda = 0`, by implicit
/// differentiation of the characteristic polynomial:
/// `d nu_i / d lambda = tr(adj(M0 - nu_i I) (M1 - M0)) / tr(adj(M0 - nu_i I))`.
pub fn eigenvalue_rates<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>) -> Result<(T, T, T)> {
    let nus = check_normalized_matrix(m0, "M0")?;
    check_normalized_matrix(m1, "M1")?;
    let gap = (nus[0] - nus[1]).min(nus[1] - nus[2]);
    if gap < T::from_f64(MIN_SPECTRAL_GAP) {
        return Err(Error::DegenerateSpectrum {
            gap: gap.into_f64(),
            min_gap: MIN_SPECTRAL_GAP,
        });
    }
    let diff = m1.sub(m0);
    let mut rates = [T::zero(); 3];
    for (i, &nu) in nus.iter().enumerate() {
        let shifted = SymMat3::new(
            m0.m11 - nu,
            m0.m12,
            m0.m13,
            m0.m22 - nu,
            m0.m23,
            m0.m33 - nu,
        );
        let adj = shifted.adjugate();
        rates[i] = adj.frob_dot(&diff) / adj.trace();
    }
    Ok((rates[0], rates[1], rates[2]))
}

fn check_normal_position<T: Real>(c0: &Conic<T>) -> Result<()> {
    let q = c0.orientation;
    let tilt = q.x.abs().max(q.y.abs()).max(q.z.abs());
    if (q.w.abs() - T::one()).abs() > T::from_f64(1e-9) || tilt > T::from_f64(1e-9) {
        return Err(Error::domain(
            "base conic must be in normal position (identity orientation)",
        ));
    }
    Ok(())
}

/// First variation of the area by direct quadrature:
///
/// ```text
/// rate = -2 int_0^{pi/2} [ s^2 (G1 + nu01 G3) + c^2 (G2 + nu02 G3) ] / N dphi,
/// N = sqrt(u) (1 + u)^{3/2},   u = nu01 s^2 + nu02 c^2,
/// ```
///
/// where `G_i` are the diagonal entries of `M1` in the frame of the base
/// conic `C0`, which must be in normal position.
pub fn rate_integral<T: Real>(c0: &Conic<T>, m1: &SymMat3<T>) -> Result<T> {
    check_normal_position(c0)?;
    check_gap(c0.nu1, c0.nu2)?;
    check_normalized_matrix(m1, "M1")?;
    let (g1, g2, g3) = (m1.m11, m1.m22, m1.m33);
    let (nu01, nu02) = (c0.nu1, c0.nu2);
    let q = integrate(
        move |phi: T| {
            let s = phi.sin();
            let c = phi.cos();
            let s2 = s * s;
            let c2 = c * c;
            let u = nu01 * s2 + nu02 * c2;
            let n = u.sqrt() * (T::one() + u).powf(T::from_f64(1.5));
            (s2 * (g1 + nu01 * g3) + c2 * (g2 + nu02 * g3)) / n
        },
        T::zero(),
        T::FRAC_PI_2(),
        T::from_f64(DEFAULT_QUAD_TOL),
    )?;
    Ok(-T::from_f64(2.0) * q.value)
}

/// The same first variation through the elliptic closed form, as an
/// independent code path from [`rate_integral`].
pub fn rate_elliptic<T: Real>(c0: &Conic<T>, m1: &SymMat3<T>) -> Result<T> {
    check_normal_position(c0)?;
    check_gap(c0.nu1, c0.nu2)?;
    check_normalized_matrix(m1, "M1")?;
    let (g1, g2, g3) = (m1.m11, m1.m22, m1.m33);
    let (nu01, nu02) = (c0.nu1, c0.nu2);
    let f = modulus_f(nu01, nu02)?;
    let ke = elliptic_KE(f)?;
    let one = T::one();
    let n1 = (nu01 * (one + nu02)).sqrt() * (nu01 - nu02) * (one + nu01);
    let term_k = (one + nu01) * (nu02 * g1 - nu01 * g2) * ke.k_bar;
    let term_e =
        nu01 * (nu01 * (g3 - g2) + nu02 * (g1 - g3) + (g1 - g2)) * ke.e_bar;
    Ok(T::from_f64(2.0) * (term_k - term_e) / n1)
}

/// Closed-form rate coefficients `A`, `B`, `C` and normalizer `N1`.
///
/// `A` and `C` are assembled from the cancellation-free `K - E` so they stay
/// accurate to full relative precision as `nu01 -> nu02` (all three vanish
/// linearly with the gap, as does `N1`).
pub fn abc_coefficients<T: Real>(nu01: T, nu02: T) -> Result<ABCCoefficients<T>> {
    check_gap(nu01, nu02)?;
    let f = modulus_f(nu01, nu02)?;
    let ke = elliptic_KE(f)?;
    let one = T::one();
    let two = T::from_f64(2.0);
    let a = -two * nu01 * (one + nu01) * ke.k_minus_e;
    let b = -two * nu01 * (nu01 - nu02) * ke.e_bar;
    // Algebraically 2(1+nu01) nu02 K - 2 nu01 (1+nu02) E; both summands of
    // the rewrite are O(gap), avoiding the cancellation of the printed form.
    let c = two * nu02 * (one + nu01) * ke.k_minus_e - two * ke.e_bar * (nu01 - nu02);
    let n1 = (nu01 * (one + nu02)).sqrt() * (nu01 - nu02) * (one + nu01);
    Ok(ABCCoefficients {
        a,
        b,
        c,
        n1,
        nu01,
        nu02,
    })
}

/// Rate for the concentric configuration: `M1` shares the center of the
/// base conic and is rotated in-plane by `zeta`.
pub fn rate_coaxial<T: Real>(nu0: (T, T), nu1: (T, T), zeta: T) -> Result<T> {
    check_target_pair(nu1.0, nu1.1)?;
    let abc = abc_coefficients(nu0.0, nu0.1)?;
    let (s, c) = (zeta.sin(), zeta.cos());
    let s2 = s * s;
    let c2 = c * c;
    let num = (abc.a * s2 + abc.c * c2) * nu1.0 + (abc.a * c2 + abc.c * s2) * nu1.1 - abc.b;
    Ok(num / abc.n1)
}

/// Rate for the half-turn configuration: the target conic is the in-plane
/// rotation by `zeta` followed by the half-turn about the axis `r`.
///
/// `r` must satisfy the normalization `r1^2 + r2^2 <= r3^2` (one of the two
/// spherical midpoints of the centers always does).
pub fn rate_halfturn<T: Real>(
    nu0: (T, T),
    nu1: (T, T),
    zeta: T,
    r: &SpherePoint<T>,
) -> Result<T> {
    check_target_pair(nu1.0, nu1.1)?;
    let abc = abc_coefficients(nu0.0, nu0.1)?;
    let (r1, r2, r3) = (r.x(), r.y(), r.z());
    let excess = r1 * r1 + r2 * r2 - r3 * r3;
    if excess > T::from_f64(1e-12) {
        return Err(Error::precondition(format!(
            "half-turn axis must satisfy r1^2 + r2^2 <= r3^2, violated by {}",
            excess.into_f64()
        )));
    }
    let (a, b, c) = (abc.a, abc.b, abc.c);
    let (nu11, nu12) = nu1;
    let (sz, cz) = (zeta.sin(), zeta.cos());
    let s2 = sz * sz;
    let c2 = cz * cz;
    let cs = cz * sz;
    let two = T::from_f64(2.0);
    let four = T::from_f64(4.0);

    let coax_num = (a * s2 + c * c2) * nu11 + (a * c2 + c * s2) * nu12 - b;

    let r1s = r1 * r1;
    let r2s = r2 * r2;
    let r3s = r3 * r3;
    let quartic = r1s * r1s + r2s * r2s + r3s * r3s;

    let w12 = (-two * c * c2 + four * c * s2 - two * a * s2 + four * a * c2) * nu11
        + (-two * c * s2 + four * c * c2 - two * a * c2 + four * a * s2) * nu12
        - two * b;
    let w13 = (four * b * c2 - two * c * c2 + two * a * s2) * nu11
        + (four * b * s2 - two * c * s2 + two * a * c2) * nu12
        + two * b
        - four * c;
    let w23 = (-two * a * s2 + four * b * s2 + two * c * c2) * nu11
        + (-two * a * c2 + four * b * c2 + two * c * s2) * nu12
        - four * a
        + two * b;
    let w_mix = four * cs * (a - c) * nu11 - four * cs * (a - c) * nu12;
    let w_center = -four * cs * (-two * b + c + a) * nu11
        + four * cs * (-two * b + c + a) * nu12;

    let num = coax_num * quartic
        + w12 * r1s * r2s
        + w13 * r1s * r3s
        + w23 * r2s * r3s
        + w_mix * (r1 * r2 * r2s - r1 * r1s * r2)
        + w_center * r1 * r2 * r3s;
    Ok(num / abc.n1)
}

/// Bernstein coefficients of the degree-four polynomial
///
/// ```text
/// P(t) = [rate_halfturn(zeta(t)) - rate_coaxial(zeta(t))] * N1 * (1 + t^2)^2,
/// zeta(t) = 2 arctan(t),
/// ```
///
/// whose sign over `(0, 1)` decides which of the two configurations grows
/// faster. The squared-norm factor `S = (r1^2+r2^2+r3^2)^2 - 1` is kept in
/// the expressions even though it vanishes for unit `r`; in particular
/// `p0 = 0` exactly when `r1 = r2 = 0`.
pub fn bernstein_coefficients<T: Real>(
    nu0: (T, T),
    nu1: (T, T),
    r: &SpherePoint<T>,
) -> Result<BernsteinCoefficients<T>> {
    check_target_pair(nu1.0, nu1.1)?;
    let abc = abc_coefficients(nu0.0, nu0.1)?;
    let (r1, r2, r3) = (r.x(), r.y(), r.z());
    let excess = r1 * r1 + r2 * r2 - r3 * r3;
    if excess > T::from_f64(1e-12) {
        return Err(Error::precondition(format!(
            "half-turn axis must satisfy r1^2 + r2^2 <= r3^2, violated by {}",
            excess.into_f64()
        )));
    }
    let (a, b, c) = (abc.a, abc.b, abc.c);
    let (nu11, nu12) = nu1;
    let one = T::one();
    let two = T::from_f64(2.0);
    let three = T::from_f64(3.0);
    let four = T::from_f64(4.0);

    let r1s = r1 * r1;
    let r2s = r2 * r2;
    let r3s = r3 * r3;
    let norm2 = r1s + r2s + r3s;
    let s_norm = norm2 * norm2 - one;
    let m1 = r1 * r2 * r3s;
    let m2 = r1 * r2 * r2s - r1 * r1s * r2;
    let dnu = nu11 - nu12;

    let base = (c * nu11 + a * nu12 - b) * s_norm
        + four * r1s * r2s * (a - c) * dnu
        + four * r1s * r3s * (b - c) * (one + nu11)
        + four * r2s * r3s * (b - a) * (one + nu12);

    let p0 = base;
    let p1 = base + two * m1 * (two * b - a - c) * dnu + two * m2 * (a - c) * dnu;
    let p2 = (two * ((a + c) * (nu11 + nu12) - two * b) * s_norm
        + T::from_f64(8.0) * r1s * r3s * (b - c) * (two + nu11 + nu12)
        + T::from_f64(8.0) * r2s * r3s * (b - a) * (two + nu11 + nu12)
        + T::from_f64(12.0) * m1 * (two * b - a - c) * dnu
        + T::from_f64(12.0) * m2 * (a - c) * dnu)
        / three;
    let p3 = two * (a * nu11 + c * nu12 - b) * s_norm
        + T::from_f64(8.0) * r1s * r2s * (c - a) * dnu
        + T::from_f64(8.0) * r1s * r3s * (b - c) * (one + nu12)
        + T::from_f64(8.0) * r2s * r3s * (b - a) * (one + nu11)
        + four * m1 * (two * b - a - c) * dnu
        + four * m2 * (a - c) * dnu;
    let p4 = four * (a * nu11 + c * nu12 - b) * s_norm
        + T::from_f64(16.0) * r1s * r2s * (c - a) * dnu
        + T::from_f64(16.0) * r1s * r3s * (b - c) * (one + nu12)
        + T::from_f64(16.0) * r2s * r3s * (b - a) * (one + nu11);

    Ok(BernsteinCoefficients { p0, p1, p2, p3, p4 })
}

/// Chain-rule rate: area gradient dotted with the eigenvalue rates,
/// including the scale slot. Used as the third independent route.
pub fn rate_chain_rule<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>) -> Result<T> {
    let nus = check_normalized_matrix(m0, "M0")?;
    let rates = eigenvalue_rates(m0, m1)?;
    let (g1, g2, g3) = area_gradient3(nus[0], nus[1], T::from_f64(DEFAULT_QUAD_TOL))?;
    Ok(g1 * rates.0 + g2 * rates.1 + g3 * rates.2)
}

/// Assemble the full first-variation report for a matrix pair. The base
/// matrix may be in any frame; computations happen in its eigenframe.
pub fn variation_report<T: Real>(m0: &SymMat3<T>, m1: &SymMat3<T>) -> Result<VariationReport<T>> {
    let nus = check_normalized_matrix(m0, "M0")?;
    check_normalized_matrix(m1, "M1")?;
    check_gap(nus[0], nus[1])?;

    let basis = eigen_sym3(m0).basis;
    let d1 = m1.conjugated(&basis.transpose());
    let c0 = Conic::new(nus[0], nus[1], crate::geometry::quat::Quaternion::identity())?;
    let d_integral = rate_integral(&c0, &d1)?;
    let d_elliptic = rate_elliptic(&c0, &d1)?;
    let eigen_rates = eigenvalue_rates(m0, m1)?;
    let abc = abc_coefficients(nus[0], nus[1])?;
    Ok(VariationReport {
        d_integral,
        d_elliptic,
        eigen_rates,
        abc: Some(abc),
        bernstein: None,
    })
}

/// In-plane rotation by `zeta` about the z-axis.
pub(crate) fn rotation_z<T: Real>(zeta: T) -> Mat3<T> {
    let (s, c) = (zeta.sin(), zeta.cos());
    let z = T::zero();
    let o = T::one();
    Mat3::new([[c, -s, z], [s, c, z], [z, z, o]])
}

/// Half-turn (rotation by pi) about the axis `r`: `2 r r' - I`.
pub(crate) fn half_turn<T: Real>(r: &SpherePoint<T>) -> Mat3<T> {
    let v = r.as_vec3();
    let two = T::from_f64(2.0);
    let one = T::one();
    Mat3::new([
        [two * v.x * v.x - one, two * v.x * v.y, two * v.x * v.z],
        [two * v.x * v.y, two * v.y * v.y - one, two * v.y * v.z],
        [two * v.x * v.z, two * v.y * v.z, two * v.z * v.z - one],
    ])
}

/// Report for the half-turn configuration: builds
/// `M1 = Q diag(nu11, nu12, -1) Q'` with `Q` the half-turn about `r`
/// composed after the in-plane rotation by `zeta`, and includes the
/// Bernstein coefficients.
pub fn variation_report_halfturn<T: Real>(
    nu0: (T, T),
    nu1: (T, T),
    zeta: T,
    r: &SpherePoint<T>,
) -> Result<VariationReport<T>> {
    let m0 = SymMat3::diag(nu0.0, nu0.1, -T::one());
    let q = half_turn(r).mul(&rotation_z(zeta));
    let m1 = SymMat3::diag(nu1.0, nu1.1, -T::one()).conjugated(&q);
    let mut report = variation_report(&m0, &m1)?;
    report.bernstein = Some(bernstein_coefficients(nu0, nu1, r)?);
    Ok(report)
}
