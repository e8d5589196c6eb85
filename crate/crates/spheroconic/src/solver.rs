//! Minimal-area enclosing conics of finite point sets.
//!
//! Three modes, in increasing generality:
//!
//! * **fixed axes** — the conic's orientation frame is prescribed; only the
//!   two eigenvalues vary. The containment constraints are linear in
//!   `(ν1, ν2)` and the area is convex there, so the optimum is unique.
//! * **fixed center** — only the center is prescribed. Working in the frame
//!   that moves the center to the pole, the free parameters are the three
//!   entries of the upper-left block (the last row/column is pinned to
//!   `(0, 0, −1)`); the area is a strictly convex function of that block
//!   and the constraints stay linear, so again the optimum is unique.
//! * **general** — nothing is prescribed. Minimize over the center with the
//!   fixed-center solver as inner problem, from several starting centers,
//!   then polish jointly over all five parameters. Global optimality is
//!   *not* guaranteed by the search itself; the result carries a
//!   uniqueness certificate, and when the certificate verdict is `Unique`
//!   the multistart results are cross-checked for agreement.
//!
//! The convex inner problems are solved with a logarithmic barrier and
//! damped Newton steps on the analytic area gradient and Hessian, barrier
//! weight decreasing from 1 to 1e−9 by factors of 10.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::area::{area_gradient, area_hessian, area_normalized};
use crate::error::{Error, Result};
use crate::geometry::conic::Conic;
use crate::geometry::mat3::Mat3;
use crate::geometry::point::SpherePoint;
use crate::geometry::quat::{quaternion_rotation, Quaternion};
use crate::geometry::symmat::SymMat3;
use crate::geometry::vec3::Vec3;
use crate::hull::{hull_contains, inscribed_circle, spherical_hull, SphericalHull};
use crate::scalar::Real;
use crate::uniqueness::{certify_with_source, radius_R, RhoSource, UniquenessCertificate, Verdict};

/// Default absolute tolerance on `pᵀMp` for counting a point as active.
pub const DEFAULT_ACTIVE_TOL: f64 = 1e-7;

/// A point whose rotated third coordinate is this close to zero cannot be
/// enclosed by any conic of the requested frame/center.
const POLE_DISTANCE_TOL: f64 = 1e-12;

const BARRIER_MU_MIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveMode {
    FixedAxes,
    FixedCenter,
    General,
}

/// A validated input point set: at least three distinct elliptic points,
/// not all on one great circle, contained in an open hemisphere.
#[derive(Debug, Clone, Serialize)]
pub struct PointSet<T> {
    points: Vec<SpherePoint<T>>,
    #[serde(skip)]
    pub(crate) hull: SphericalHull<T>,
}

impl<T: Real> PointSet<T> {
    /// Canonicalizes and deduplicates the points, then verifies the
    /// invariants. Fails with `DegenerateInput` (too few points or all on
    /// one great circle) or `Unbounded` (no hemisphere contains them).
    pub fn new(points: Vec<SpherePoint<T>>) -> Result<Self> {
        let mut pts: Vec<SpherePoint<T>> = Vec::with_capacity(points.len());
        for p in points {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let hull = spherical_hull(&pts)?;
        Ok(PointSet { points: pts, hull })
    }

    pub fn points(&self) -> &[SpherePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of the spherical convex hull vertices, counterclockwise as
    /// seen from the enclosing cap's center.
    pub fn hull_vertex_indices(&self) -> &[usize] {
        &self.hull.hull_indices
    }

    /// Unit representatives of the points, sign-chosen so that all lie in
    /// one open hemisphere. Order matches [`Self::points`].
    pub fn coherent_representatives(&self) -> &[Vec3<T>] {
        &self.hull.reps
    }
}

/// Knobs for [`solve_general`]. `Default` gives a deterministic,
/// moderately thorough search.
#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig<T> {
    /// Perturbed starting centers tried in addition to the enclosing-cap
    /// center.
    pub multistart_count: usize,
    /// Maximum spread of per-start optimal areas tolerated when the
    /// certificate says the optimum is unique.
    pub agreement_tol: T,
    /// Absolute tolerance on `pᵀMp` for the reported active set.
    pub active_tol: T,
    /// Seed for the deterministic start perturbations.
    pub seed: u64,
    /// Perturbation radius as a fraction of the enclosing-cap radius.
    pub perturbation_scale: T,
    /// Evaluation budget of the five-parameter simplex polish.
    pub polish_evals: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        SolverConfig {
            multistart_count: 8,
            agreement_tol: T::from_f64(1e-4),
            active_tol: T::from_f64(DEFAULT_ACTIVE_TOL),
            seed: 0x0517,
            perturbation_scale: T::from_f64(0.25),
            polish_evals: 400,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult<T> {
    pub conic: Conic<T>,
    /// Area of `conic` in steradians.
    pub area: T,
    /// Indices into the point set with `|pᵀMp|` at most the active
    /// tolerance (1e−7 unless configured otherwise).
    pub active_points: Vec<usize>,
    pub mode: SolveMode,
    /// Only produced by the general mode.
    pub certificate: Option<UniquenessCertificate<T>>,
    /// Newton iterations spent across all inner solves.
    pub iterations: usize,
    pub converged: bool,
}

/// Smallest spherical cap containing the set: center and angular radius.
/// The radius is below π/2 (larger sets are rejected by `PointSet::new`)
/// and the cap is determined by at most three support points.
pub fn min_enclosing_circle<T: Real>(ps: &PointSet<T>) -> Result<(SpherePoint<T>, T)> {
    let cap = &ps.hull.cap;
    debug_assert!(cap.support.as_slice().len() <= 3);
    Ok((SpherePoint::from_vec3(cap.center)?, cap.radius))
}

/// Indices of points lying on the conic boundary within `tol`.
///
/// `pᵀMp` is evaluated on the normalized matrix (smallest eigenvalue −1),
/// so the tolerance is an absolute one.
pub fn active_points<T: Real>(result: &SolveResult<T>, ps: &PointSet<T>, tol: T) -> Vec<usize> {
    active_indices(&result.conic, ps, tol)
}

fn active_indices<T: Real>(conic: &Conic<T>, ps: &PointSet<T>, tol: T) -> Vec<usize> {
    let m = conic.matrix();
    ps.points
        .iter()
        .enumerate()
        .filter(|(_, p)| m.quad_form(p.as_vec3()).abs() <= tol)
        .map(|(i, _)| i)
        .collect()
}

// ---------------------------------------------------------------------------
// symmetric wrappers: the area API requires nu1 >= nu2, the solvers don't.

fn area_value_sym<T: Real>(x: [T; 2]) -> Result<T> {
    let (a, b) = if x[0] >= x[1] { (x[0], x[1]) } else { (x[1], x[0]) };
    Ok(area_normalized(a, b)?.area)
}

fn area_grad_sym<T: Real>(x: [T; 2]) -> Result<[T; 2]> {
    if x[0] >= x[1] {
        let (g1, g2) = area_gradient(x[0], x[1])?;
        Ok([g1, g2])
    } else {
        let (g1, g2) = area_gradient(x[1], x[0])?;
        Ok([g2, g1])
    }
}

fn area_hess_sym<T: Real>(x: [T; 2]) -> Result<[[T; 2]; 2]> {
    if x[0] >= x[1] {
        area_hessian(x[0], x[1])
    } else {
        let h = area_hessian(x[1], x[0])?;
        Ok([[h[1][1], h[0][1]], [h[0][1], h[0][0]]])
    }
}

// ---------------------------------------------------------------------------
// barrier Newton, two variables (fixed axes)

/// Barrier objective: area + μ Σ −log(1 − cᵢ·x). `None` when infeasible.
fn barrier2_value<T: Real>(x: [T; 2], cons: &[[T; 2]], mu: T) -> Option<T> {
    if !(x[0] > T::zero() && x[1] > T::zero()) {
        return None;
    }
    let mut b = area_value_sym(x).ok()?;
    for c in cons {
        let slack = T::one() - c[0] * x[0] - c[1] * x[1];
        if !(slack > T::zero()) {
            return None;
        }
        b = b - mu * slack.ln();
    }
    Some(b)
}

fn barrier2_derivs<T: Real>(
    x: [T; 2],
    cons: &[[T; 2]],
    mu: T,
) -> Result<([T; 2], [[T; 2]; 2])> {
    let mut g = area_grad_sym(x)?;
    let mut h = area_hess_sym(x)?;
    for c in cons {
        let slack = T::one() - c[0] * x[0] - c[1] * x[1];
        let w1 = mu / slack;
        let w2 = w1 / slack;
        g[0] = g[0] + w1 * c[0];
        g[1] = g[1] + w1 * c[1];
        h[0][0] = h[0][0] + w2 * c[0] * c[0];
        h[0][1] = h[0][1] + w2 * c[0] * c[1];
        h[1][0] = h[0][1];
        h[1][1] = h[1][1] + w2 * c[1] * c[1];
    }
    Ok((g, h))
}

fn solve2<T: Real>(h: [[T; 2]; 2], g: [T; 2]) -> Option<[T; 2]> {
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if !(det.abs() > T::zero()) {
        return None;
    }
    Some([
        (-g[0] * h[1][1] + g[1] * h[0][1]) / det,
        (-g[1] * h[0][0] + g[0] * h[1][0]) / det,
    ])
}

fn barrier_schedule<T: Real>() -> Vec<T> {
    let mut mus = Vec::new();
    let mut mu = 1.0f64;
    while mu >= BARRIER_MU_MIN {
        mus.push(T::from_f64(mu));
        mu /= 10.0;
    }
    mus
}

/// Gaussian elimination with partial pivoting for the small KKT saddle
/// systems (at most 6 unknowns).
fn solve_small<T: Real>(a: &mut [Vec<T>], b: &mut [T]) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in (col + 1)..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if !(a[piv][col].abs() > T::from_f64(1e-300)) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in (col + 1)..n {
            s = s - a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

/// Terminal active-set Newton polish shared by the two fixed modes.
///
/// The barrier path stops at `mu = 1e-9`, which parks every active
/// constraint at slack ≈ mu/λ and leaves a stationarity residual of the
/// same order. A few Newton steps on the KKT system of the detected active
/// set move the iterate onto the constraint boundary with machine-precision
/// complementarity. Constraints whose multiplier comes out negative are
/// dropped and the subproblem re-solved; if anything goes wrong (rank
/// deficiency, infeasibility, failure to stay in the domain) the barrier
/// point is kept unchanged.
fn kkt_polish<T: Real, const N: usize>(
    x0: [T; N],
    cons: &[[T; N]],
    derivs: &mut dyn FnMut([T; N]) -> Result<([T; N], [[T; N]; N])>,
    in_domain: &dyn Fn([T; N]) -> bool,
) -> ([T; N], usize) {
    let slack = |x: &[T; N], c: &[T; N]| {
        let mut s = T::one();
        for j in 0..N {
            s = s - c[j] * x[j];
        }
        s
    };
    // Candidate active set: every constraint parked near its boundary by
    // the barrier. The 1e-3 net is deliberately wide; constraints that do
    // not belong are shed by the multiplier-sign loop below.
    let mut active: Vec<usize> = (0..cons.len())
        .filter(|&i| slack(&x0, &cons[i]) <= T::from_f64(1e-3))
        .collect();
    active.sort_by(|&i, &j| {
        slack(&x0, &cons[i])
            .partial_cmp(&slack(&x0, &cons[j]))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    active.truncate(N); // Carathéodory: N gradients suffice in N variables
    let mut steps = 0usize;
    'outer: loop {
        if active.is_empty() {
            return (x0, steps);
        }
        let k = active.len();
        let mut x = x0;
        let mut lambda = vec![T::zero(); k];
        for _ in 0..12 {
            steps += 1;
            let (g, h) = match derivs(x) {
                Ok(d) => d,
                Err(_) => return (x0, steps),
            };
            // Saddle system in (dx, λ): H dx + Cᵀλ = −g, C dx = s.
            let dim = N + k;
            let mut a = vec![vec![T::zero(); dim]; dim];
            let mut rhs = vec![T::zero(); dim];
            for i in 0..N {
                for j in 0..N {
                    a[i][j] = h[i][j];
                }
                for (m, &ci) in active.iter().enumerate() {
                    a[i][N + m] = cons[ci][i];
                    a[N + m][i] = cons[ci][i];
                }
                rhs[i] = -g[i];
            }
            for (m, &ci) in active.iter().enumerate() {
                rhs[N + m] = slack(&x, &cons[ci]);
            }
            let sol = match solve_small(&mut a, &mut rhs) {
                Some(s) => s,
                None => {
                    // Rank-deficient active set: drop the loosest member.
                    if k > 1 {
                        active.pop();
                        continue 'outer;
                    }
                    return (x0, steps);
                }
            };
            let mut xn = x;
            let mut dx_norm = T::zero();
            for i in 0..N {
                xn[i] = x[i] + sol[i];
                dx_norm = dx_norm.max(sol[i].abs());
            }
            if !in_domain(xn) {
                return (x0, steps);
            }
            for (m, l) in lambda.iter_mut().enumerate() {
                *l = sol[N + m];
            }
            x = xn;
            if dx_norm <= T::from_f64(1e-14) * (T::one() + x.iter().fold(T::zero(), |a, &v| a.max(v.abs()))) {
                break;
            }
        }
        // Shed constraints that want to pull the wrong way.
        if let Some(worst) = (0..k)
            .filter(|&m| lambda[m] < -T::from_f64(1e-9))
            .min_by(|&a, &b| lambda[a].partial_cmp(&lambda[b]).unwrap_or(std::cmp::Ordering::Equal))
        {
            active.remove(worst);
            continue 'outer;
        }
        // Full feasibility: the polished point must still contain every
        // point (active slacks are zero within roundoff).
        for c in cons {
            if slack(&x, c) < -T::from_f64(1e-12) {
                return (x0, steps);
            }
        }
        return (x, steps);
    }
}

fn fixed_axes_inner<T: Real>(cons: &[[T; 2]], start: [T; 2]) -> Result<([T; 2], usize, bool)> {
    let mut x = start;
    let mut iterations = 0usize;
    let mut converged = false;
    for mu in barrier_schedule::<T>() {
        let mut value = barrier2_value(x, cons, mu).ok_or_else(|| {
            Error::InternalInconsistency("barrier iterate left the feasible region".into())
        })?;
        for _ in 0..60 {
            iterations += 1;
            let (g, h) = barrier2_derivs(x, cons, mu)?;
            let step = match solve2(h, g) {
                Some(s) => s,
                None => [-g[0], -g[1]],
            };
            let slope = g[0] * step[0] + g[1] * step[1];
            if !(slope < T::zero()) {
                break; // ascent or zero direction: stationary for this mu
            }
            let mut t = T::one();
            let mut moved = false;
            for _ in 0..50 {
                let cand = [x[0] + t * step[0], x[1] + t * step[1]];
                if let Some(v) = barrier2_value(cand, cons, mu) {
                    if v <= value + T::from_f64(0.25) * t * slope {
                        x = cand;
                        value = v;
                        moved = true;
                        break;
                    }
                }
                t = t * T::from_f64(0.5);
            }
            if !moved {
                break;
            }
            // Newton decrement: stop when the remaining model decrease is
            // negligible for this barrier weight.
            if -slope <= T::from_f64(1e-14).max(mu * T::from_f64(1e-10)) {
                converged = true;
                break;
            }
        }
    }
    // Final stationarity: the Newton decrement at the last mu is tiny.
    let mu_last = T::from_f64(BARRIER_MU_MIN);
    let (g, h) = barrier2_derivs(x, cons, mu_last)?;
    if let Some(s) = solve2(h, g) {
        let dec = -(g[0] * s[0] + g[1] * s[1]);
        converged = dec.abs() <= T::from_f64(1e-10);
    }
    let (x, polish_steps) = kkt_polish(
        x,
        cons,
        &mut |y: [T; 2]| Ok((area_grad_sym(y)?, area_hess_sym(y)?)),
        &|y: [T; 2]| y[0] > T::zero() && y[1] > T::zero(),
    );
    Ok((x, iterations + polish_steps, converged))
}

/// Quaternion for the z-rotation swapping the two axis directions.
fn quarter_turn_z<T: Real>() -> Quaternion<T> {
    let h = T::FRAC_PI_2() * T::from_f64(0.5);
    Quaternion::new(h.cos(), T::zero(), T::zero(), h.sin())
}

/// Minimal-area conic with the orientation frame of `frame` containing all
/// points. In frame coordinates every point must satisfy
/// `ν1 p₁² + ν2 p₂² ≤ p₃²`; a point on the frame's polar great circle
/// (`p₃ = 0`) makes the problem infeasible.
pub fn solve_fixed_axes<T: Real>(ps: &PointSet<T>, frame: &Quaternion<T>) -> Result<SolveResult<T>> {
    let (cons, s) = axes_constraints(ps, frame)?;
    finish_fixed_axes(ps, frame, &cons, [s, s])
}

/// [`solve_fixed_axes`] started from a caller-supplied eigenvalue pair
/// `(ν_x, ν_y)` in the frame's coordinates. The pair must be strictly
/// feasible (positive, with every point strictly inside the conic it
/// defines). The problem has a unique optimum, so every interior start
/// converges to the same conic; exposing the start makes that property
/// observable and allows warm starts.
pub fn solve_fixed_axes_from<T: Real>(
    ps: &PointSet<T>,
    frame: &Quaternion<T>,
    start: (T, T),
) -> Result<SolveResult<T>> {
    let (cons, _) = axes_constraints(ps, frame)?;
    let feasible = start.0 > T::zero()
        && start.1 > T::zero()
        && cons
            .iter()
            .all(|c| c[0] * start.0 + c[1] * start.1 < T::one());
    if !feasible {
        return Err(Error::Infeasible(
            "the starting eigenvalue pair is not strictly feasible for the point set".into(),
        ));
    }
    finish_fixed_axes(ps, frame, &cons, [start.0, start.1])
}

/// Per-point constraint rows `(p₁²/p₃², p₂²/p₃²)` in frame coordinates
/// (the conic contains a point iff `row · (ν1, ν2) ≤ 1`), plus a strictly
/// feasible default start value.
fn axes_constraints<T: Real>(
    ps: &PointSet<T>,
    frame: &Quaternion<T>,
) -> Result<(Vec<[T; 2]>, T)> {
    let r = quaternion_rotation(frame)?;
    let rt = r.transpose();
    let mut cons: Vec<[T; 2]> = Vec::with_capacity(ps.len());
    let mut cmax = T::zero();
    for p in &ps.points {
        let q = rt.mul_vec(p.as_vec3());
        let z2 = q.z * q.z;
        if z2 <= T::from_f64(POLE_DISTANCE_TOL * POLE_DISTANCE_TOL) {
            return Err(Error::Infeasible(format!(
                "point {:?} lies on the frame's polar great circle; no conic in this frame contains it",
                p.as_array()
            )));
        }
        let c = [q.x * q.x / z2, q.y * q.y / z2];
        cmax = cmax.max(c[0] + c[1]);
        cons.push(c);
    }
    if !(cmax > T::zero()) {
        return Err(Error::DegenerateInput(
            "all points coincide with the frame center".into(),
        ));
    }
    Ok((cons, T::from_f64(0.5) / cmax))
}

fn finish_fixed_axes<T: Real>(
    ps: &PointSet<T>,
    frame: &Quaternion<T>,
    cons: &[[T; 2]],
    start: [T; 2],
) -> Result<SolveResult<T>> {
    let (x, iterations, converged) = fixed_axes_inner(cons, start)?;

    let conic = if x[0] >= x[1] {
        Conic::new(x[0], x[1], *frame)?
    } else {
        Conic::new(x[1], x[0], frame.mul(&quarter_turn_z()))?
    };
    let area = area_value_sym(x)?;
    let active = active_indices(&conic, ps, T::from_f64(DEFAULT_ACTIVE_TOL));
    Ok(SolveResult {
        conic,
        area,
        active_points: active,
        mode: SolveMode::FixedAxes,
        certificate: None,
        iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// barrier Newton, three variables (fixed center)

/// Eigenvalues and rotation angle of the symmetric block
/// `[[m11, m12], [m12, m22]]`, eigenvalues in decreasing order.
fn eig2<T: Real>(m: [T; 3]) -> (T, T, T) {
    let half = T::from_f64(0.5);
    let s = half * (m[0] + m[2]);
    let d = (half * (m[0] - m[2])).hypot(m[1]);
    let theta = half * (T::from_f64(2.0) * m[1]).atan2(m[0] - m[2]);
    (s + d, s - d, theta)
}

fn block_pd<T: Real>(m: [T; 3]) -> Option<T> {
    let det = m[0] * m[2] - m[1] * m[1];
    if m[0] > T::zero() && det > T::zero() {
        Some(det)
    } else {
        None
    }
}

fn barrier3_value<T: Real>(m: [T; 3], cons: &[[T; 3]], mu: T) -> Option<T> {
    let det = block_pd(m)?;
    let (n1, n2, _) = eig2(m);
    if !(n2 > T::zero()) {
        return None;
    }
    let mut b = area_normalized(n1, n2).ok()?.area - mu * det.ln();
    for c in cons {
        let slack = T::one() - (c[0] * m[0] + c[1] * m[1] + c[2] * m[2]);
        if !(slack > T::zero()) {
            return None;
        }
        b = b - mu * slack.ln();
    }
    Some(b)
}

/// Gradient and Hessian of `area ∘ eig` on the block slice, by the spectral
/// chain rule. Near an eigenvalue crossing the divided difference
/// `(g1 − g2)/(ν1 − ν2)` degrades; it then equals `H11 − H12` in the limit,
/// which is used as the guard value.
fn area_block_derivs<T: Real>(m: [T; 3]) -> Result<([T; 3], [[T; 3]; 3])> {
    let (n1, n2, theta) = eig2(m);
    let (g1, g2) = area_gradient(n1, n2)?;
    let h = area_hessian(n1, n2)?;
    let (s, c) = theta.sin_cos();
    let two = T::from_f64(2.0);
    let a1 = [c * c, two * c * s, s * s];
    let a2 = [s * s, -two * c * s, c * c];
    let be = [-c * s, c * c - s * s, c * s];
    let gap = n1 - n2;
    let dd = if gap > T::from_f64(1e-9) * n1.max(T::one()) {
        (g1 - g2) / gap
    } else {
        h[0][0] - h[0][1]
    };
    let mut grad = [T::zero(); 3];
    let mut hess = [[T::zero(); 3]; 3];
    for j in 0..3 {
        grad[j] = g1 * a1[j] + g2 * a2[j];
        for l in 0..3 {
            hess[j][l] = h[0][0] * a1[j] * a1[l]
                + h[0][1] * (a1[j] * a2[l] + a2[j] * a1[l])
                + h[1][1] * a2[j] * a2[l]
                + two * dd * be[j] * be[l];
        }
    }
    Ok((grad, hess))
}

fn barrier3_derivs<T: Real>(
    m: [T; 3],
    cons: &[[T; 3]],
    mu: T,
) -> Result<([T; 3], [[T; 3]; 3])> {
    let (mut g, mut h) = area_block_derivs(m)?;
    let det = block_pd(m).ok_or_else(|| {
        Error::InternalInconsistency("barrier iterate lost positive definiteness".into())
    })?;
    // −log det block: gradient −(i11, 2 i12, i22), Hessian the quadratic
    // form of the inverse entries.
    let i11 = m[2] / det;
    let i12 = -m[1] / det;
    let i22 = m[0] / det;
    let two = T::from_f64(2.0);
    g[0] = g[0] - mu * i11;
    g[1] = g[1] - mu * two * i12;
    g[2] = g[2] - mu * i22;
    let pi = [
        [i11 * i11, two * i11 * i12, i12 * i12],
        [
            two * i11 * i12,
            two * (i11 * i22 + i12 * i12),
            two * i12 * i22,
        ],
        [i12 * i12, two * i12 * i22, i22 * i22],
    ];
    for j in 0..3 {
        for l in 0..3 {
            h[j][l] = h[j][l] + mu * pi[j][l];
        }
    }
    for c in cons {
        let slack = T::one() - (c[0] * m[0] + c[1] * m[1] + c[2] * m[2]);
        let w1 = mu / slack;
        let w2 = w1 / slack;
        for j in 0..3 {
            g[j] = g[j] + w1 * c[j];
            for l in 0..3 {
                h[j][l] = h[j][l] + w2 * c[j] * c[l];
            }
        }
    }
    Ok((g, h))
}

fn solve3<T: Real>(h: [[T; 3]; 3], g: [T; 3]) -> Option<[T; 3]> {
    let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    if !(det.abs() > T::zero()) {
        return None;
    }
    let adj = |r: usize, c: usize| -> T {
        let (r1, r2) = match r {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c1, c2) = match c {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = h[r1][c1] * h[r2][c2] - h[r1][c2] * h[r2][c1];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut s = [T::zero(); 3];
    for i in 0..3 {
        // inverse = adjᵀ/det, so entry (i, j) of the inverse is adj(j, i).
        s[i] = -(adj(0, i) * g[0] + adj(1, i) * g[1] + adj(2, i) * g[2]) / det;
    }
    Some(s)
}

fn fixed_center_inner<T: Real>(cons: &[[T; 3]], start: [T; 3]) -> Result<([T; 3], usize, bool)> {
    let mut m = start;
    let mut iterations = 0usize;
    let mut converged = false;
    for mu in barrier_schedule::<T>() {
        let mut value = barrier3_value(m, cons, mu).ok_or_else(|| {
            Error::InternalInconsistency("barrier iterate left the feasible region".into())
        })?;
        for _ in 0..80 {
            iterations += 1;
            let (g, h) = barrier3_derivs(m, cons, mu)?;
            let step = match solve3(h, g) {
                Some(s) => s,
                None => [-g[0], -g[1], -g[2]],
            };
            let slope = g[0] * step[0] + g[1] * step[1] + g[2] * step[2];
            if !(slope < T::zero()) {
                break;
            }
            let mut t = T::one();
            let mut moved = false;
            for _ in 0..50 {
                let cand = [m[0] + t * step[0], m[1] + t * step[1], m[2] + t * step[2]];
                if let Some(v) = barrier3_value(cand, cons, mu) {
                    if v <= value + T::from_f64(0.25) * t * slope {
                        m = cand;
                        value = v;
                        moved = true;
                        break;
                    }
                }
                t = t * T::from_f64(0.5);
            }
            if !moved {
                break;
            }
            if -slope <= T::from_f64(1e-14).max(mu * T::from_f64(1e-10)) {
                converged = true;
                break;
            }
        }
    }
    let mu_last = T::from_f64(BARRIER_MU_MIN);
    let (g, h) = barrier3_derivs(m, cons, mu_last)?;
    if let Some(s) = solve3(h, g) {
        let dec = -(g[0] * s[0] + g[1] * s[1] + g[2] * s[2]);
        converged = dec.abs() <= T::from_f64(1e-10);
    }
    let (m, polish_steps) = kkt_polish(
        m,
        cons,
        &mut |y: [T; 3]| area_block_derivs(y),
        &|y: [T; 3]| block_pd(y).is_some(),
    );
    Ok((m, iterations + polish_steps, converged))
}

/// Rotation taking the pole `(0,0,1)` to `c` (minimal-angle choice).
fn rotation_to<T: Real>(c: Vec3<T>) -> Quaternion<T> {
    let w = T::one() + c.z;
    if w <= T::from_f64(1e-12) {
        // c is (numerically) the antipode of the pole: half-turn about x.
        return Quaternion::new(T::zero(), T::one(), T::zero(), T::zero());
    }
    let n = (w * w + c.y * c.y + c.x * c.x).sqrt();
    Quaternion::new(w / n, -c.y / n, c.x / n, T::zero())
}

struct CenterProblem<T> {
    rotation: Mat3<T>,
    cons: Vec<[T; 3]>,
    start: [T; 3],
}

/// Build constraints for a prescribed center; `None`-like failure is
/// `Infeasible` when a point is a quarter-turn away from the center.
fn center_problem<T: Real>(ps: &PointSet<T>, c: Vec3<T>) -> Result<CenterProblem<T>> {
    let rotation = quaternion_rotation(&rotation_to(c))?;
    let rt = rotation.transpose();
    let mut cons = Vec::with_capacity(ps.len());
    let mut cmax = T::zero();
    for p in &ps.points {
        let q = rt.mul_vec(p.as_vec3());
        let z2 = q.z * q.z;
        if z2 <= T::from_f64(POLE_DISTANCE_TOL * POLE_DISTANCE_TOL) {
            return Err(Error::Infeasible(format!(
                "point {:?} lies on the polar great circle of the center; no conic centered there contains it",
                p.as_array()
            )));
        }
        let c3 = [q.x * q.x / z2, T::from_f64(2.0) * q.x * q.y / z2, q.y * q.y / z2];
        cmax = cmax.max(c3[0] + c3[2]);
        cons.push(c3);
    }
    if !(cmax > T::zero()) {
        return Err(Error::DegenerateInput(
            "all points coincide with the requested center".into(),
        ));
    }
    let s = T::from_f64(0.5) / cmax;
    Ok(CenterProblem {
        rotation,
        cons,
        start: [s, T::zero(), s],
    })
}

fn conic_from_block<T: Real>(rotation: &Mat3<T>, m: [T; 3]) -> Result<Conic<T>> {
    let block = SymMat3::new(m[0], m[1], T::zero(), m[2], T::zero(), -T::one());
    crate::geometry::conic::normalize_conic(&block.conjugated(rotation))
}

/// Hemisphere representative of the center aligned with the hull's cap.
fn center_rep<T: Real>(ps: &PointSet<T>, center: &SpherePoint<T>) -> Vec3<T> {
    let mut c = center.as_vec3();
    if c.dot(ps.hull.cap.center) < T::zero() {
        c = -c;
    }
    c
}

/// Minimal-area conic with prescribed center containing all points. The
/// center must lie strictly inside the spherical convex hull of the set.
pub fn solve_fixed_center<T: Real>(
    ps: &PointSet<T>,
    center: &SpherePoint<T>,
) -> Result<SolveResult<T>> {
    let (problem, _) = center_setup(ps, center)?;
    let start = problem.start;
    finish_fixed_center(ps, &problem, start)
}

/// [`solve_fixed_center`] started from a caller-supplied conic. The start
/// must share the prescribed center and strictly contain every point. As
/// with the fixed-axes mode, the optimum is unique, so any interior start
/// converges to the same conic.
pub fn solve_fixed_center_from<T: Real>(
    ps: &PointSet<T>,
    center: &SpherePoint<T>,
    start: &Conic<T>,
) -> Result<SolveResult<T>> {
    let (problem, c) = center_setup(ps, center)?;
    if start.center().as_vec3().dot(c).abs() < T::one() - T::from_f64(1e-9) {
        return Err(Error::domain(
            "starting conic's center must equal the prescribed center".to_string(),
        ));
    }
    // In the problem frame the start is block-diagonal: its free part is
    // the 2x2 block over the plane orthogonal to the center.
    let d = start.matrix().conjugated(&problem.rotation.transpose());
    let block = [d.m11, d.m12, d.m22];
    let feasible = block_pd(block).is_some()
        && problem
            .cons
            .iter()
            .all(|r| r[0] * block[0] + r[1] * block[1] + r[2] * block[2] < T::one());
    if !feasible {
        return Err(Error::Infeasible(
            "the starting conic does not strictly contain every point".into(),
        ));
    }
    finish_fixed_center(ps, &problem, block)
}

fn center_setup<T: Real>(
    ps: &PointSet<T>,
    center: &SpherePoint<T>,
) -> Result<(CenterProblem<T>, Vec3<T>)> {
    let c = center_rep(ps, center);
    if !hull_contains(&ps.hull, c, -T::from_f64(1e-12)) {
        return Err(Error::CenterOutsideHull);
    }
    Ok((center_problem(ps, c)?, c))
}

fn finish_fixed_center<T: Real>(
    ps: &PointSet<T>,
    problem: &CenterProblem<T>,
    start: [T; 3],
) -> Result<SolveResult<T>> {
    let (m, iterations, converged) = fixed_center_inner(&problem.cons, start)?;
    let conic = conic_from_block(&problem.rotation, m)?;
    let area = area_normalized(conic.nu1, conic.nu2)?.area;
    let active = active_indices(&conic, ps, T::from_f64(DEFAULT_ACTIVE_TOL));
    Ok(SolveResult {
        conic,
        area,
        active_points: active,
        mode: SolveMode::FixedCenter,
        certificate: None,
        iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// general mode

/// Deterministic Nelder–Mead. Non-finite objective values act as walls.
/// Returns the best vertex, its value and the number of evaluations used.
fn nelder_mead<T: Real, const N: usize>(
    f: &mut dyn FnMut(&[T; N]) -> T,
    start: [T; N],
    step: [T; N],
    max_evals: usize,
    ftol: T,
) -> ([T; N], T, usize) {
    let clean = |v: T| if v.is_nan() { T::infinity() } else { v };
    let mut evals = 0usize;
    let mut eval = |x: &[T; N], evals: &mut usize| -> T {
        *evals += 1;
        clean(f(x))
    };
    let mut simplex: Vec<([T; N], T)> = Vec::with_capacity(N + 1);
    let v0 = eval(&start, &mut evals);
    simplex.push((start, v0));
    for i in 0..N {
        let mut x = start;
        x[i] = x[i] + step[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let half = T::from_f64(0.5);
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        if worst.is_finite() && (worst - best).abs() <= ftol {
            break;
        }
        // Centroid of all but the worst vertex.
        let mut centroid = [T::zero(); N];
        for v in simplex.iter().take(N) {
            for i in 0..N {
                centroid[i] = centroid[i] + v.0[i];
            }
        }
        let inv = T::one() / T::from_f64(N as f64);
        for c in centroid.iter_mut() {
            *c = *c * inv;
        }
        let lerp = |a: &[T; N], b: &[T; N], t: T| -> [T; N] {
            let mut out = [T::zero(); N];
            for i in 0..N {
                out[i] = a[i] + t * (b[i] - a[i]);
            }
            out
        };
        let reflected = lerp(&centroid, &simplex[N].0, -T::one());
        let fr = eval(&reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &simplex[N].0, -T::from_f64(2.0));
            let fe = eval(&expanded, &mut evals);
            simplex[N] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
        } else {
            let contracted = if fr < simplex[N].1 {
                lerp(&centroid, &simplex[N].0, -half)
            } else {
                lerp(&centroid, &simplex[N].0, half)
            };
            let fc = eval(&contracted, &mut evals);
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let best_x = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    v.0 = lerp(&best_x, &v.0, half);
                    v.1 = eval(&v.0, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    (simplex[0].0, simplex[0].1, evals)
}

fn tangent_basis<T: Real>(c: Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    let helper = if c.x.abs() < T::from_f64(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let b1 = helper
        .cross(c)
        .normalized()
        .expect("helper is not parallel to c");
    let b2 = c.cross(b1);
    (b1, b2)
}

struct StartOutcome<T> {
    conic: Conic<T>,
    area: T,
    iterations: usize,
    converged: bool,
}

/// One multistart branch: 2-D center search with the fixed-center solver
/// as inner objective, then a joint five-parameter simplex polish.
fn general_branch<T: Real>(
    ps: &PointSet<T>,
    start_center: Vec3<T>,
    config: &SolverConfig<T>,
) -> Option<StartOutcome<T>> {
    let (b1, b2) = tangent_basis(ps.hull.cap.center);
    let mut inner_iters = 0usize;

    let center_at = |t: &[T; 2]| -> Option<Vec3<T>> {
        (start_center + b1 * t[0] + b2 * t[1]).normalized()
    };
    // Outer 2-D search over the center.
    let mut objective = |t: &[T; 2]| -> T {
        let c = match center_at(t) {
            Some(c) => c,
            None => return T::infinity(),
        };
        if !hull_contains(&ps.hull, c, T::zero()) {
            return T::infinity();
        }
        let problem = match center_problem(ps, c) {
            Ok(p) => p,
            Err(_) => return T::infinity(),
        };
        match fixed_center_inner(&problem.cons, problem.start) {
            Ok((m, it, _)) => {
                inner_iters += it;
                let (n1, n2, _) = eig2(m);
                match area_normalized(n1, n2) {
                    Ok(a) => a.area,
                    Err(_) => T::infinity(),
                }
            }
            Err(_) => T::infinity(),
        }
    };
    let scale = T::from_f64(0.15) * ps.hull.cap.radius.max(T::from_f64(1e-3));
    let (t_best, _, _) = nelder_mead::<T, 2>(
        &mut objective,
        [T::zero(), T::zero()],
        [scale, scale],
        60,
        T::from_f64(1e-12),
    );

    let c_best = center_at(&t_best)?;
    if !hull_contains(&ps.hull, c_best, T::zero()) {
        return None;
    }
    let problem = center_problem(ps, c_best).ok()?;
    let (m_best, it, inner_converged) = fixed_center_inner(&problem.cons, problem.start).ok()?;
    inner_iters += it;
    let (n1, n2, _) = eig2(m_best);
    let mut best_area = area_normalized(n1, n2).ok()?.area;
    let mut best_conic = conic_from_block(&problem.rotation, m_best).ok()?;

    // Joint polish: center offsets and the three block entries.
    let mut polish = |x: &[T; 5]| -> T {
        let c = match (c_best + b1 * x[0] + b2 * x[1]).normalized() {
            Some(c) => c,
            None => return T::infinity(),
        };
        let m = [x[2], x[3], x[4]];
        if block_pd(m).is_none() {
            return T::infinity();
        }
        let problem = match center_problem(ps, c) {
            Ok(p) => p,
            Err(_) => return T::infinity(),
        };
        for con in &problem.cons {
            let slack = T::one() - (con[0] * m[0] + con[1] * m[1] + con[2] * m[2]);
            if !(slack >= T::zero()) {
                return T::infinity();
            }
        }
        let (n1, n2, _) = eig2(m);
        match area_normalized(n1, n2) {
            Ok(a) => a.area,
            Err(_) => T::infinity(),
        }
    };
    let d = T::from_f64(1e-3);
    let mstep = T::from_f64(1e-3) * (m_best[0].abs() + m_best[2].abs()).max(T::one());
    let (px, pv, _) = nelder_mead::<T, 5>(
        &mut polish,
        [T::zero(), T::zero(), m_best[0], m_best[1], m_best[2]],
        [d, d, mstep, mstep, mstep],
        config.polish_evals,
        T::from_f64(1e-13),
    );
    if pv.is_finite() && pv < best_area {
        if let Some(c) = (c_best + b1 * px[0] + b2 * px[1]).normalized() {
            if let Ok(problem) = center_problem(ps, c) {
                if let Ok(conic) = conic_from_block(&problem.rotation, [px[2], px[3], px[4]]) {
                    best_area = pv;
                    best_conic = conic;
                }
            }
        }
    }
    Some(StartOutcome {
        conic: best_conic,
        area: best_area,
        iterations: inner_iters,
        converged: inner_converged,
    })
}

/// Lexicographic tie-break key: `(ν1, ν2, center coordinates)`.
fn lex_before<T: Real>(a: &Conic<T>, b: &Conic<T>) -> bool {
    let ka = (a.nu1, a.nu2, a.center().as_array());
    let kb = (b.nu1, b.nu2, b.center().as_array());
    ka.partial_cmp(&kb) == Some(std::cmp::Ordering::Less)
}

/// Minimal-area enclosing conic with free center and axes.
///
/// Multistart local search (see module docs); the returned certificate is
/// produced with the inscribed-circle radius of the point set (clamped to
/// the critical radius `R`). `converged = false` flags either inner-solver
/// trouble or multistart disagreement despite a `Unique` verdict — the
/// best conic found is still returned.
pub fn solve_general<T: Real>(ps: &PointSet<T>, config: &SolverConfig<T>) -> Result<SolveResult<T>> {
    let cap = &ps.hull.cap;
    let (rho_raw, incenter) = inscribed_circle(&ps.hull);
    let (b1, b2) = tangent_basis(cap.center);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut starts: Vec<Vec3<T>> = vec![cap.center];
    for _ in 0..config.multistart_count {
        let phi = T::from_f64(rng.gen_range(0.0..std::f64::consts::TAU));
        let amp = T::from_f64(rng.gen_range(0.0..1.0)) * config.perturbation_scale * cap.radius;
        let dir = b1 * phi.cos() + b2 * phi.sin();
        let mut c = cap.center * amp.cos() + dir * amp.sin();
        // Pull toward the incenter until strictly inside the hull.
        let inc = incenter.as_vec3();
        let mut tries = 0;
        while !hull_contains(&ps.hull, c, T::zero()) && tries < 24 {
            c = match ((c + inc) * T::from_f64(0.5)).normalized() {
                Some(v) => v,
                None => inc,
            };
            tries += 1;
        }
        if let Some(c) = c.normalized() {
            starts.push(c);
        }
    }

    let mut outcomes: Vec<StartOutcome<T>> = Vec::new();
    for s in starts {
        if let Some(o) = general_branch(ps, s, config) {
            outcomes.push(o);
        }
    }
    if outcomes.is_empty() {
        return Err(Error::Infeasible(
            "no multistart branch produced a feasible conic".into(),
        ));
    }
    let mut best = 0usize;
    for i in 1..outcomes.len() {
        let better = outcomes[i].area < outcomes[best].area - T::from_f64(1e-10)
            || (outcomes[i].area <= outcomes[best].area + T::from_f64(1e-10)
                && lex_before(&outcomes[i].conic, &outcomes[best].conic));
        if better {
            best = i;
        }
    }
    let rho = rho_raw.min(radius_R::<T>());
    let certificate = certify_with_source(&outcomes[best].conic, rho, RhoSource::InscribedCircle)?;
    let mut agreement_ok = true;
    if certificate.verdict == Verdict::Unique {
        for o in &outcomes {
            if (o.area - outcomes[best].area).abs() > config.agreement_tol {
                agreement_ok = false;
            }
        }
    }
    let iterations = outcomes.iter().map(|o| o.iterations).sum();
    let converged = outcomes[best].converged && agreement_ok;
    let conic = outcomes[best].conic;
    let area = outcomes[best].area;
    let active = active_indices(&conic, ps, config.active_tol);
    Ok(SolveResult {
        conic,
        area,
        active_points: active,
        mode: SolveMode::General,
        certificate: Some(certificate),
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::conic::{classify_point, PointClass};

    fn pt(x: f64, y: f64, z: f64) -> SpherePoint<f64> {
        SpherePoint::new(x, y, z).unwrap()
    }

    fn symmetric_four(u: f64) -> PointSet<f64> {
        PointSet::new(vec![
            pt(u.sin(), 0.0, u.cos()),
            pt(-u.sin(), 0.0, u.cos()),
            pt(0.0, u.sin(), u.cos()),
            pt(0.0, -u.sin(), u.cos()),
        ])
        .unwrap()
    }

    fn assert_feasible(res: &SolveResult<f64>, ps: &PointSet<f64>) {
        for p in ps.points() {
            let class = classify_point(&res.conic, p, 1e-7);
            assert!(
                class == PointClass::Interior || class == PointClass::Boundary,
                "point {:?} classified {class:?}",
                p.as_array()
            );
        }
    }

    #[test]
    fn pointset_validation() {
        assert!(PointSet::new(vec![pt(0.1, 0.0, 1.0), pt(0.0, 0.1, 1.0)]).is_err());
        // Duplicate elliptic points collapse.
        let ps = PointSet::new(vec![
            pt(0.1, 0.0, 1.0),
            pt(-0.1, 0.0, -1.0), // same elliptic point as the first
            pt(0.0, 0.1, 1.0),
            pt(0.1, 0.1, 1.0),
        ])
        .unwrap();
        assert_eq!(ps.len(), 3);
        // Collinear sets refused.
        assert!(matches!(
            PointSet::new(vec![pt(0.1, 0.0, 1.0), pt(0.2, 0.0, 1.0), pt(0.3, 0.0, 1.0)]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn enclosing_circle_of_triangle() {
        let u = 0.4f64;
        let pts: Vec<SpherePoint<f64>> = (0..3)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                pt(u.sin() * a.cos(), u.sin() * a.sin(), u.cos())
            })
            .collect();
        let ps = PointSet::new(pts).unwrap();
        let (c, r) = min_enclosing_circle(&ps).unwrap();
        assert!((r - 0.4).abs() < 1e-12);
        assert!(c.z().abs() > 1.0 - 1e-12);
    }

    #[test]
    fn fixed_axes_symmetric_square() {
        let u = 0.4f64;
        let ps = symmetric_four(u);
        let res = solve_fixed_axes(&ps, &Quaternion::identity()).unwrap();
        let expect = 1.0 / u.tan().powi(2);
        assert!(res.converged);
        assert!(
            (res.conic.nu1 - expect).abs() < 1e-6 && (res.conic.nu2 - expect).abs() < 1e-6,
            "nu = ({}, {})",
            res.conic.nu1,
            res.conic.nu2
        );
        assert_eq!(res.active_points, vec![0, 1, 2, 3]);
        assert_feasible(&res, &ps);
    }

    #[test]
    fn fixed_axes_two_pairs_kkt() {
        // Pairs at different polar angles on the two axes: each pair's
        // constraint is active at the optimum (2 constraints, 2 variables).
        let (u, w) = (0.5f64, 0.3f64);
        let ps = PointSet::new(vec![
            pt(u.sin(), 0.0, u.cos()),
            pt(-u.sin(), 0.0, u.cos()),
            pt(0.0, w.sin(), w.cos()),
            pt(0.0, -w.sin(), w.cos()),
        ])
        .unwrap();
        let res = solve_fixed_axes(&ps, &Quaternion::identity()).unwrap();
        assert!(res.converged);
        assert_feasible(&res, &ps);
        let m = res.conic.matrix();
        for p in ps.points() {
            assert!(m.quad_form(p.as_vec3()) < 1e-7);
        }
        // The two constraints decouple (one bounds nu_x, the other nu_y)
        // and the area decreases in both, so the optimum is exactly the
        // corner nu = (cot^2 u, cot^2 w). The barrier method lands within
        // its duality gap, about (#constraints) * (final barrier weight).
        let corner = {
            let n1 = 1.0 / u.tan().powi(2);
            let n2 = 1.0 / w.tan().powi(2);
            area_normalized(n1.max(n2), n1.min(n2)).unwrap().area
        };
        assert!((res.area - corner).abs() <= 1e-7, "{} vs {}", res.area, corner);
    }

    #[test]
    fn fixed_axes_infeasible_on_polar_point() {
        let ps = PointSet::new(vec![
            pt(1.0, 0.0, 0.0),
            pt(0.1, 0.0, 1.0),
            pt(0.0, 0.1, 1.0),
            pt(-0.1, -0.05, 1.0),
        ])
        .unwrap();
        assert!(matches!(
            solve_fixed_axes(&ps, &Quaternion::identity()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn fixed_axes_warm_starts_reach_the_same_optimum() {
        let pts = vec![
            pt(0.35, 0.05, 1.0),
            pt(-0.2, 0.25, 1.0),
            pt(0.1, -0.3, 1.0),
            pt(-0.15, -0.2, 1.0),
        ];
        let ps = PointSet::new(pts).unwrap();
        let id = Quaternion::identity();
        let base = solve_fixed_axes(&ps, &id).unwrap();
        // One deep-interior start, one lopsided near-feasibility start.
        let a = solve_fixed_axes_from(&ps, &id, (1e-3, 1e-3)).unwrap();
        let b = solve_fixed_axes_from(&ps, &id, (0.5, 1e-4)).unwrap();
        for r in [&a, &b] {
            assert!(r.converged);
            assert!((r.conic.nu1 - base.conic.nu1).abs() < 1e-8);
            assert!((r.conic.nu2 - base.conic.nu2).abs() < 1e-8);
        }
        // A pair violating some point's constraint is refused.
        assert!(matches!(
            solve_fixed_axes_from(&ps, &id, (base.conic.nu1 * 4.0, base.conic.nu2 * 4.0)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn fixed_center_warm_starts_reach_the_same_optimum() {
        let pts = vec![pt(0.3, 0.1, 1.0), pt(-0.25, 0.2, 1.0), pt(0.05, -0.3, 1.0)];
        let ps = PointSet::new(pts).unwrap();
        let pole = pt(0.0, 0.0, 1.0);
        let base = solve_fixed_center(&ps, &pole).unwrap();
        // Generous circle and a slightly eccentric ellipse about the pole.
        let circle = Conic::new(2.0, 2.0, Quaternion::identity()).unwrap();
        let ellipse = Conic::new(
            3.0,
            1.5,
            Quaternion::from_axis_angle(Vec3::new(0.0, 0.0, 1.0), 0.4).unwrap(),
        )
        .unwrap();
        for start in [&circle, &ellipse] {
            let r = solve_fixed_center_from(&ps, &pole, start).unwrap();
            assert!(r.converged);
            let (ma, mb) = (r.conic.matrix().rows(), base.conic.matrix().rows());
            for i in 0..3 {
                for j in 0..3 {
                    assert!((ma[i][j] - mb[i][j]).abs() < 1e-8);
                }
            }
        }
        // Wrong center or a conic cutting a point off is refused.
        let off_center = pt(0.3, 0.0, 1.0);
        let shifted = circle
            .transformed(
                &Quaternion::from_axis_angle(
                    Vec3::new(0.0, 1.0, 0.0),
                    off_center.as_vec3().x.atan2(1.0),
                )
                .unwrap(),
            )
            .unwrap();
        assert!(solve_fixed_center_from(&ps, &pole, &shifted).is_err());
        let tiny = Conic::new(200.0, 200.0, Quaternion::identity()).unwrap();
        assert!(matches!(
            solve_fixed_center_from(&ps, &pole, &tiny),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn fixed_center_matches_fixed_axes_on_symmetric_set() {
        let u = 0.35f64;
        let ps = symmetric_four(u);
        let pole = pt(0.0, 0.0, 1.0);
        let rc = solve_fixed_center(&ps, &pole).unwrap();
        let ra = solve_fixed_axes(&ps, &Quaternion::identity()).unwrap();
        assert!(rc.converged);
        assert!((rc.area - ra.area).abs() < 1e-7, "{} vs {}", rc.area, ra.area);
        // Symmetry forces the off-diagonal entry to vanish: the conic is a
        // circle about the pole.
        assert!((rc.conic.nu1 - rc.conic.nu2).abs() < 1e-6);
        assert_feasible(&rc, &ps);
    }

    #[test]
    fn fixed_center_triangle_all_active() {
        let pts = vec![pt(0.3, 0.1, 1.0), pt(-0.25, 0.2, 1.0), pt(0.05, -0.3, 1.0)];
        let ps = PointSet::new(pts).unwrap();
        // Spherical centroid as center: generic position, three active
        // constraints pin down all three block parameters.
        let centroid = {
            let mut s = Vec3::zero();
            for p in ps.points() {
                s = s + p.as_vec3();
            }
            SpherePoint::from_vec3(s).unwrap()
        };
        let res = solve_fixed_center(&ps, &centroid).unwrap();
        assert!(res.converged);
        assert_feasible(&res, &ps);
        assert_eq!(res.active_points.len(), 3);
    }

    #[test]
    fn fixed_center_rejects_outside_center() {
        let ps = PointSet::new(vec![pt(0.3, 0.0, 1.0), pt(-0.3, 0.2, 1.0), pt(0.0, -0.3, 1.0)])
            .unwrap();
        let outside = pt(0.9, 0.0, 1.0);
        assert!(matches!(
            solve_fixed_center(&ps, &outside),
            Err(Error::CenterOutsideHull)
        ));
    }

    #[test]
    fn fixed_center_equivariance() {
        let pts = vec![pt(0.3, 0.1, 1.0), pt(-0.2, 0.25, 1.0), pt(0.1, -0.3, 1.0), pt(0.35, 0.3, 1.0)];
        let ps = PointSet::new(pts.clone()).unwrap();
        let center = pt(0.05, 0.02, 1.0);
        let res = solve_fixed_center(&ps, &center).unwrap();

        let q = Quaternion::from_axis_angle(Vec3::new(0.3f64, -0.5, 0.8), 0.7).unwrap();
        let r = quaternion_rotation(&q).unwrap();
        let rot_pts: Vec<SpherePoint<f64>> = pts
            .iter()
            .map(|p| SpherePoint::from_vec3(r.mul_vec(p.as_vec3())).unwrap())
            .collect();
        let rps = PointSet::new(rot_pts).unwrap();
        let rcenter = SpherePoint::from_vec3(r.mul_vec(center.as_vec3())).unwrap();
        let rres = solve_fixed_center(&rps, &rcenter).unwrap();

        assert!((res.area - rres.area).abs() < 1e-8);
        // Rotating the unrotated solution matrix must give the rotated
        // solution matrix.
        let m_rotated = res.conic.matrix().conjugated(&r);
        let m_direct = rres.conic.matrix();
        let mut dist: f64 = 0.0;
        let a = m_rotated.rows();
        let b = m_direct.rows();
        for i in 0..3 {
            for j in 0..3 {
                dist = dist.max((a[i][j] - b[i][j]).abs());
            }
        }
        assert!(dist < 1e-7, "matrix distance {dist}");
    }

    #[test]
    fn fixed_modes_monotone_under_added_point() {
        let base = vec![pt(0.3, 0.1, 1.0), pt(-0.25, 0.2, 1.0), pt(0.05, -0.3, 1.0)];
        let ps = PointSet::new(base.clone()).unwrap();
        let res = solve_fixed_axes(&ps, &Quaternion::identity()).unwrap();
        // Add a point interior to the found conic: optimum unchanged.
        let mut with_interior = base.clone();
        with_interior.push(pt(0.02, 0.03, 1.0));
        let ps2 = PointSet::new(with_interior).unwrap();
        let res2 = solve_fixed_axes(&ps2, &Quaternion::identity()).unwrap();
        assert!((res2.area - res.area).abs() < 1e-9);
        // Add a point outside it: area must grow.
        let mut with_exterior = base;
        with_exterior.push(pt(0.45, 0.3, 1.0));
        let ps3 = PointSet::new(with_exterior).unwrap();
        let res3 = solve_fixed_axes(&ps3, &Quaternion::identity()).unwrap();
        assert!(res3.area > res.area + 1e-9);
    }

    #[test]
    fn general_recovers_circumscribed_circle() {
        // Five points on a circle of radius 0.2 about the pole.
        let r = 0.2f64;
        let pts: Vec<SpherePoint<f64>> = (0..5)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 5.0 + 0.2;
                pt(r.sin() * a.cos(), r.sin() * a.sin(), r.cos())
            })
            .collect();
        let ps = PointSet::new(pts).unwrap();
        let config = SolverConfig {
            multistart_count: 4,
            ..SolverConfig::default()
        };
        let res = solve_general(&ps, &config).unwrap();
        let cap_area = 2.0 * std::f64::consts::PI * (1.0 - r.cos());
        assert!(
            (res.area - cap_area).abs() < 1e-6,
            "area {} vs cap {}",
            res.area,
            cap_area
        );
        let cert = res.certificate.as_ref().unwrap();
        assert_eq!(cert.verdict, Verdict::Unique);
        assert!(res.converged);
        assert_feasible(&res, &ps);
        assert_eq!(res.active_points.len(), 5);
    }

    #[test]
    fn general_on_wide_set_is_inconclusive() {
        // Spread comparable to the critical radius: certificate cannot
        // conclude uniqueness, but a feasible conic is still returned.
        let r = 1.1f64;
        let pts: Vec<SpherePoint<f64>> = (0..6)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / 6.0 + 0.1;
                pt(r.sin() * a.cos(), r.sin() * a.sin(), r.cos())
            })
            .collect();
        let ps = PointSet::new(pts).unwrap();
        let config = SolverConfig {
            multistart_count: 2,
            ..SolverConfig::default()
        };
        let res = solve_general(&ps, &config).unwrap();
        assert_eq!(
            res.certificate.as_ref().unwrap().verdict,
            Verdict::Inconclusive
        );
        assert_feasible(&res, &ps);
    }

    #[test]
    fn active_point_report_consistency() {
        let u = 0.4f64;
        let ps = symmetric_four(u);
        let res = solve_fixed_axes(&ps, &Quaternion::identity()).unwrap();
        let idx = active_points(&res, &ps, 1e-7);
        assert_eq!(idx, res.active_points);
        // A loose tolerance keeps everything; a zero-ish tolerance may
        // drop points but never invents new ones.
        let all = active_points(&res, &ps, 1.0);
        assert_eq!(all.len(), ps.len());
    }

    #[test]
    fn chain_rule_block_derivatives_match_finite_differences() {
        let m = [1.4f64, 0.3, 0.9];
        let (g, h) = area_block_derivs(m).unwrap();
        let obj = |m: [f64; 3]| -> f64 {
            let (n1, n2, _) = eig2(m);
            area_normalized(n1, n2).unwrap().area
        };
        let hstep = 1e-5;
        for j in 0..3 {
            let mut mp = m;
            let mut mm = m;
            mp[j] += hstep;
            mm[j] -= hstep;
            let fd = (obj(mp) - obj(mm)) / (2.0 * hstep);
            assert!((g[j] - fd).abs() < 1e-7, "grad[{j}] {} vs {fd}", g[j]);
        }
        for j in 0..3 {
            for l in 0..3 {
                let mut pp = m;
                let mut pm = m;
                let mut mp_ = m;
                let mut mm_ = m;
                pp[j] += hstep;
                pp[l] += hstep;
                pm[j] += hstep;
                pm[l] -= hstep;
                mp_[j] -= hstep;
                mp_[l] += hstep;
                mm_[j] -= hstep;
                mm_[l] -= hstep;
                let fd = (obj(pp) - obj(pm) - obj(mp_) + obj(mm_)) / (4.0 * hstep * hstep);
                assert!((h[j][l] - fd).abs() < 1e-5, "hess[{j}][{l}] {} vs {fd}", h[j][l]);
            }
        }
    }

    #[test]
    fn logdet_barrier_derivatives_match_finite_differences() {
        let m = [1.2f64, -0.4, 2.0];
        // Extract the pure logdet part by subtracting the area part.
        let mu = 1.0;
        let (ga, ha) = area_block_derivs(m).unwrap();
        let (g, h) = barrier3_derivs(m, &[], mu).unwrap();
        let logdet = |m: [f64; 3]| -> f64 { -(m[0] * m[2] - m[1] * m[1]).ln() };
        let hstep = 1e-6;
        for j in 0..3 {
            let mut mp = m;
            let mut mm = m;
            mp[j] += hstep;
            mm[j] -= hstep;
            let fd = (logdet(mp) - logdet(mm)) / (2.0 * hstep);
            assert!(((g[j] - ga[j]) - fd).abs() < 1e-6);
        }
        for j in 0..3 {
            for l in 0..3 {
                let mut pp = m;
                let mut pm = m;
                let mut mp_ = m;
                let mut mm_ = m;
                pp[j] += hstep;
                pp[l] += hstep;
                pm[j] += hstep;
                pm[l] -= hstep;
                mp_[j] -= hstep;
                mp_[l] += hstep;
                mm_[j] -= hstep;
                mm_[l] -= hstep;
                let fd =
                    (logdet(pp) - logdet(pm) - logdet(mp_) + logdet(mm_)) / (4.0 * hstep * hstep);
                assert!(((h[j][l] - ha[j][l]) - fd).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn nelder_mead_minimizes_quadratic() {
        let mut f = |x: &[f64; 2]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let (x, v, _) = nelder_mead::<f64, 2>(&mut f, [0.0, 0.0], [0.5, 0.5], 200, 1e-14);
        assert!(v < 1e-10);
        assert!((x[0] - 1.5).abs() < 1e-5 && (x[1] + 0.5).abs() < 1e-5);
    }
}
