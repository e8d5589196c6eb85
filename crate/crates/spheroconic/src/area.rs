//! Area of a sphero-conic and its derivatives in the eigenvalue chart.
//!
//! For the normal form `diag(nu1, nu2, -1)` the enclosed area is
//!
//! ```text
//! area(nu1, nu2) = 2 pi - 4 * int_0^{pi/2} sqrt(u / (1 + u)) dphi,
//! u(phi) = nu1 sin^2 phi + nu2 cos^2 phi,
//! ```
//!
//! using the quarter-period symmetry of the integrand. Gradient and Hessian
//! come from differentiating the same integrand under the integral sign.
//! Complete elliptic integrals (used by the closed-form variation rates) are
//! evaluated by arithmetic–geometric-mean iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::Real;

/// Default absolute quadrature tolerance for area evaluations.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// An area together with the quadrature error bound it was computed under.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AreaValue<T> {
    /// Steradians, in `[0, 2 pi)`.
    pub area: T,
    pub quadrature_error_estimate: T,
}

/// Complete elliptic integrals of the first and second kind at a common
/// modulus, plus their difference computed without cancellation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EllipticPair<T> {
    /// `K(f)`, first kind.
    pub k_bar: T,
    /// `E(f)`, second kind.
    pub e_bar: T,
    /// The modulus the pair was evaluated at.
    pub f: T,
    /// `K(f) - E(f)`, computed directly from the AGM correction sum so it
    /// keeps full relative accuracy as `f -> 0` (where K and E agree to
    /// O(f^2) and naive subtraction loses all digits).
    pub k_minus_e: T,
}

fn check_normalized_pair<T: Real>(nu1: T, nu2: T) -> Result<()> {
    if !(nu2 > T::zero()) || !(nu1 >= nu2) || !nu1.is_finite() {
        return Err(Error::domain(format!(
            "eigenvalues must satisfy nu1 >= nu2 > 0, got nu1 = {nu1}, nu2 = {nu2}"
        )));
    }
    Ok(())
}

/// Shared integrand factory: `u(phi)` for the normal form.
fn u_of_phi<T: Real>(nu1: T, nu2: T) -> impl Fn(T) -> T {
    move |phi: T| {
        let s = phi.sin();
        let c = phi.cos();
        nu1 * s * s + nu2 * c * c
    }
}

pub(crate) fn area_normalized_with_tol<T: Real>(nu1: T, nu2: T, tol: T) -> Result<AreaValue<T>> {
    check_normalized_pair(nu1, nu2)?;
    let u = u_of_phi(nu1, nu2);
    let q = integrate(
        move |phi| {
            let u = u(phi);
            (u / (T::one() + u)).sqrt()
        },
        T::zero(),
        T::FRAC_PI_2(),
        tol * T::from_f64(0.25),
    )?;
    let four = T::from_f64(4.0);
    let area = T::TAU() - four * q.value;
    Ok(AreaValue {
        area: area.max(T::zero()),
        quadrature_error_estimate: four * q.error_estimate,
    })
}

/// Area from the semi-axis tangents `a = tan(alpha)`, `b = tan(beta)`.
///
/// Symmetric in its two arguments; the underlying eigenvalues are
/// `nu1 = 1/b^2`, `nu2 = 1/a^2`.
pub fn area_from_axes<T: Real>(a: T, b: T, tol: T) -> Result<AreaValue<T>> {
    if !(a > T::zero() && b > T::zero()) || !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "semi-axis tangents must be positive and finite, got a = {a}, b = {b}"
        )));
    }
    let big = a.max(b);
    let small = a.min(b);
    let nu1 = T::one() / (small * small);
    let nu2 = T::one() / (big * big);
    area_normalized_with_tol(nu1, nu2, tol)
}

/// Area from a full eigenvalue triple `(nu1, nu2, nu3)`, which must have the
/// conic sign pattern `nu1 >= nu2 > 0 > nu3`. Invariant under positive
/// rescaling of the whole triple.
pub fn area_from_eigenvalues<T: Real>(nu1: T, nu2: T, nu3: T) -> Result<AreaValue<T>> {
    if !(nu3 < T::zero()) {
        return Err(Error::domain(format!(
            "third eigenvalue must be negative, got nu3 = {nu3}"
        )));
    }
    check_normalized_pair(nu1, nu2)?;
    area_normalized(nu1 / -nu3, nu2 / -nu3)
}

/// Area in the normalized chart (`nu3 = -1`), at the library default
/// quadrature tolerance.
pub fn area_normalized<T: Real>(nu1: T, nu2: T) -> Result<AreaValue<T>> {
    area_normalized_with_tol(nu1, nu2, T::from_f64(DEFAULT_QUAD_TOL))
}

/// Gradient of `area_normalized`; both components are strictly negative.
pub fn area_gradient<T: Real>(nu1: T, nu2: T) -> Result<(T, T)> {
    let (g1, g2, _) = area_gradient3(nu1, nu2, T::from_f64(DEFAULT_QUAD_TOL))?;
    Ok((g1, g2))
}

/// Gradient of the three-eigenvalue area at `(nu1, nu2, -1)`, including the
/// derivative in the third slot. Satisfies the Euler relation
/// `nu1 g1 + nu2 g2 - g3 = 0` (the area is scale-invariant).
pub(crate) fn area_gradient3<T: Real>(nu1: T, nu2: T, tol: T) -> Result<(T, T, T)> {
    check_normalized_pair(nu1, nu2)?;
    let two = T::from_f64(2.0);
    let u = u_of_phi(nu1, nu2);
    let g1 = integrate(
        {
            let u = u_of_phi(nu1, nu2);
            move |phi: T| {
                let s = phi.sin();
                let uu = u(phi);
                s * s / (uu.sqrt() * (T::one() + uu).powf(T::from_f64(1.5)))
            }
        },
        T::zero(),
        T::FRAC_PI_2(),
        tol,
    )?
    .value;
    let g2 = integrate(
        {
            let u = u_of_phi(nu1, nu2);
            move |phi: T| {
                let c = phi.cos();
                let uu = u(phi);
                c * c / (uu.sqrt() * (T::one() + uu).powf(T::from_f64(1.5)))
            }
        },
        T::zero(),
        T::FRAC_PI_2(),
        tol,
    )?
    .value;
    let g3 = integrate(
        move |phi: T| {
            let uu = u(phi);
            uu.sqrt() / (T::one() + uu).powf(T::from_f64(1.5))
        },
        T::zero(),
        T::FRAC_PI_2(),
        tol,
    )?
    .value;
    Ok((-two * g1, -two * g2, -two * g3))
}

/// Hessian of `area_normalized` in `(nu1, nu2)`, as
/// `[[d11, d12], [d12, d22]]`. Positive definite on the whole domain.
pub fn area_hessian<T: Real>(nu1: T, nu2: T) -> Result<[[T; 2]; 2]> {
    check_normalized_pair(nu1, nu2)?;
    let tol = T::from_f64(DEFAULT_QUAD_TOL);
    // Common kernel J(u) = (1 + 4u) / (u^{3/2} (1 + u)^{5/2}); the three
    // entries weight it by s^4, s^2 c^2 and c^4 respectively.
    let kernel = move |uu: T| {
        (T::one() + T::from_f64(4.0) * uu)
            / (uu.powf(T::from_f64(1.5)) * (T::one() + uu).powf(T::from_f64(2.5)))
    };
    let entry = |sp: i32, cp: i32| -> Result<T> {
        let u = u_of_phi(nu1, nu2);
        Ok(integrate(
            move |phi| {
                let s = phi.sin();
                let c = phi.cos();
                let mut w = T::one();
                for _ in 0..sp {
                    w = w * s;
                }
                for _ in 0..cp {
                    w = w * c;
                }
                kernel(u(phi)) * w
            },
            T::zero(),
            T::FRAC_PI_2(),
            tol,
        )?
        .value)
    };
    let h11 = entry(4, 0)?;
    let h12 = entry(2, 2)?;
    let h22 = entry(0, 4)?;
    Ok([[h11, h12], [h12, h22]])
}

/// Complete elliptic integrals `K(z)` and `E(z)` in the modulus convention
/// (`z = k`, not the parameter `m = k^2`), via AGM iteration.
///
/// The correction sum of the AGM yields `K - E = K * sum` directly, which is
/// what populates the cancellation-free `k_minus_e` field. Below
/// `z = 1e-8` a truncated series is used instead.
#[allow(non_snake_case)]
pub fn elliptic_KE<T: Real>(z: T) -> Result<EllipticPair<T>> {
    if !(z >= T::zero() && z < T::one()) {
        return Err(Error::domain(format!(
            "elliptic modulus must lie in [0, 1), got {z}"
        )));
    }
    let half_pi = T::FRAC_PI_2();
    let z2 = z * z;
    if z < T::from_f64(1e-8) {
        let z4 = z2 * z2;
        let k = half_pi
            * (T::one() + z2 * T::from_f64(0.25) + z4 * T::from_f64(9.0 / 64.0));
        let e = half_pi
            * (T::one() - z2 * T::from_f64(0.25) - z4 * T::from_f64(3.0 / 64.0));
        let k_minus_e = half_pi * (z2 * T::from_f64(0.5) + z4 * T::from_f64(3.0 / 16.0));
        return Ok(EllipticPair {
            k_bar: k,
            e_bar: e,
            f: z,
            k_minus_e,
        });
    }
    let mut a = T::one();
    let mut b = (T::one() - z2).sqrt();
    let mut sum = z2 * T::from_f64(0.5);
    let mut pow = T::one();
    for _ in 0..64 {
        let c = (a - b) * T::from_f64(0.5);
        if c.abs() <= a.abs() * T::epsilon() {
            break;
        }
        sum = sum + pow * c * c;
        pow = pow * T::from_f64(2.0);
        let an = (a + b) * T::from_f64(0.5);
        b = (a * b).sqrt();
        a = an;
    }
    let k = half_pi / a;
    let k_minus_e = k * sum;
    Ok(EllipticPair {
        k_bar: k,
        e_bar: k - k_minus_e,
        f: z,
        k_minus_e,
    })
}

/// Modulus of the elliptic-integral form of the variation rate:
/// `f = sqrt((nu1 - nu2) / (nu1 (1 + nu2)))`.
pub fn modulus_f<T: Real>(nu1: T, nu2: T) -> Result<T> {
    check_normalized_pair(nu1, nu2)?;
    Ok(((nu1 - nu2) / (nu1 * (T::one() + nu2))).sqrt())
}
