//! Shared oracles for the integration suite.
//!
//! Everything here is deliberately written from first principles — direct
//! quadrature of the spherical area in polar coordinates, brute-force grid
//! searches with golden-section refinement, a penalty simplex descent — so
//! that the library's elliptic-integral and interior-point paths are checked
//! against computations that share none of their code or structure.

#![allow(dead_code)] // each integration-test binary uses a subset

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spheroconic::{Quaternion, SpherePoint, SymMat3, Vec3};

/// Trapezoid rule over one full period of a smooth periodic integrand;
/// converges geometrically in `n`.
fn trapezoid_period(f: impl Fn(f64) -> f64, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += f(k as f64 * h);
    }
    sum * h
}

/// Interior area of the conic `nu1 x^2 + nu2 y^2 = z^2` on the unit sphere,
/// by direct integration in polar coordinates: the boundary colatitude at
/// azimuth `phi` satisfies `tan^2(theta) g(phi) = 1` with
/// `g = nu1 cos^2 + nu2 sin^2`, so the enclosed area is
/// `int_0^{2pi} (1 - sqrt(g / (1 + g))) dphi`. Symmetric in the arguments.
pub fn area_oracle_n(nu1: f64, nu2: f64, n: usize) -> f64 {
    trapezoid_period(
        |phi| {
            let c = phi.cos();
            let s = phi.sin();
            let g = nu1 * c * c + nu2 * s * s;
            1.0 - (g / (1.0 + g)).sqrt()
        },
        std::f64::consts::TAU,
        n,
    )
}

/// [`area_oracle_n`] at a node count that is converged to machine precision
/// for eigenvalues within a few orders of magnitude of 1.
pub fn area_oracle(nu1: f64, nu2: f64) -> f64 {
    area_oracle_n(nu1, nu2, 4096)
}

/// Largest elliptic distance (angle between spanned lines) from `c` to the
/// set.
fn max_elliptic_distance(points: &[[f64; 3]], c: [f64; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for p in points {
        let dot = c[0] * p[0] + c[1] * p[1] + c[2] * p[2];
        let cr = [
            c[1] * p[2] - c[2] * p[1],
            c[2] * p[0] - c[0] * p[2],
            c[0] * p[1] - c[1] * p[0],
        ];
        let cross = (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]).sqrt();
        worst = worst.max(cross.atan2(dot.abs()));
    }
    worst
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Minimal enclosing cap of an elliptic point set by brute force: a global
/// Fibonacci-sphere scan followed by a shrinking local pattern search.
/// Returns (center, radius). Accuracy is limited only by the 60 halvings of
/// the pattern step.
pub fn elliptic_mec_oracle(points: &[[f64; 3]]) -> ([f64; 3], f64) {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let n = 4001;
    let mut best_c = [0.0, 0.0, 1.0];
    let mut best_r = f64::INFINITY;
    for k in 0..n {
        // Fibonacci sphere: only the upper half is needed (elliptic
        // distance ignores sign), but scanning all of it costs little.
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let phi = std::f64::consts::TAU * (k as f64 / golden).fract();
        let s = (1.0 - z * z).sqrt();
        let c = [s * phi.cos(), s * phi.sin(), z];
        let r = max_elliptic_distance(points, c);
        if r < best_r {
            best_r = r;
            best_c = c;
        }
    }
    let mut step = 0.5;
    for _ in 0..60 {
        let mut improved = false;
        // Tangent directions at the current center.
        let anchor = if best_c[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let u = normalize3([
            best_c[1] * anchor[2] - best_c[2] * anchor[1],
            best_c[2] * anchor[0] - best_c[0] * anchor[2],
            best_c[0] * anchor[1] - best_c[1] * anchor[0],
        ]);
        let v = [
            best_c[1] * u[2] - best_c[2] * u[1],
            best_c[2] * u[0] - best_c[0] * u[2],
            best_c[0] * u[1] - best_c[1] * u[0],
        ];
        for (du, dv) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (0.7, 0.7),
            (0.7, -0.7),
            (-0.7, 0.7),
            (-0.7, -0.7),
        ] {
            let cand = normalize3([
                best_c[0] + step * (du * u[0] + dv * v[0]),
                best_c[1] + step * (du * u[1] + dv * v[1]),
                best_c[2] + step * (du * u[2] + dv * v[2]),
            ]);
            let r = max_elliptic_distance(points, cand);
            if r < best_r {
                best_r = r;
                best_c = cand;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best_c, best_r)
}

/// Result of a 1-D boundary walk for the axis-aligned enclosing problem.
#[derive(Debug, Clone, Copy)]
pub struct AxesOracle {
    pub nu: (f64, f64),
    pub area: f64,
}

/// Minimal-area conic `nu_x x^2 + nu_y y^2 <= z^2` over points given in the
/// conic's own frame, by exhaustive search along the feasibility boundary.
///
/// The feasible region in `(nu_x, nu_y)` is the polygon under the concave
/// piecewise-linear envelope `nu_y = min_i (z_i^2 - nu_x x_i^2) / y_i^2`,
/// and the area decreases in both eigenvalues, so the optimum lies on that
/// envelope: a dense grid over `nu_x` followed by golden-section refinement
/// around the best bracket finds it. `quad_n` is the node count for the
/// area quadrature (256 is plenty for the 1e-4 comparisons; pass more for
/// tighter work).
pub fn fixed_axes_oracle_n(
    coords: &[[f64; 3]],
    grid_n: usize,
    golden_iters: usize,
    quad_n: usize,
) -> AxesOracle {
    let mut nu_x_max = f64::INFINITY;
    for p in coords {
        if p[0] * p[0] > 1e-30 {
            nu_x_max = nu_x_max.min(p[2] * p[2] / (p[0] * p[0]));
        }
    }
    // All x-coordinates vanishing would mean a common great circle through
    // the frame's y-z plane; the callers only feed non-collinear sets.
    assert!(nu_x_max.is_finite(), "degenerate oracle input");
    let envelope = |nu_x: f64| -> f64 {
        let mut nu_y = f64::INFINITY;
        for p in coords {
            if p[1] * p[1] > 1e-30 {
                nu_y = nu_y.min((p[2] * p[2] - nu_x * p[0] * p[0]) / (p[1] * p[1]));
            }
        }
        nu_y
    };
    let value = |nu_x: f64| -> f64 {
        let nu_y = envelope(nu_x);
        if !(nu_y > 0.0) {
            return f64::INFINITY;
        }
        area_oracle_n(nu_x, nu_y, quad_n)
    };
    // Dense sweep: half the nodes linear in (0, nu_x_max), half log-spaced
    // to catch optima many orders of magnitude below the cap.
    let mut ts = Vec::with_capacity(grid_n);
    let half = grid_n / 2;
    for k in 1..=half {
        ts.push(k as f64 / (half as f64 + 1.0));
    }
    for k in 0..(grid_n - half) {
        ts.push(10f64.powf(-9.0 * (k as f64 + 1.0) / (grid_n - half) as f64));
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best_k = 0;
    let mut best_v = f64::INFINITY;
    for (k, &t) in ts.iter().enumerate() {
        let v = value(t * nu_x_max);
        if v < best_v {
            best_v = v;
            best_k = k;
        }
    }
    let mut lo = if best_k == 0 { 1e-12 } else { ts[best_k - 1] } * nu_x_max;
    let mut hi = if best_k + 1 == ts.len() {
        (1.0 - 1e-12) * nu_x_max
    } else {
        ts[best_k + 1] * nu_x_max
    };
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = value(x1);
    let mut f2 = value(x2);
    for _ in 0..golden_iters {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = value(x2);
        }
    }
    let nu_x = 0.5 * (lo + hi);
    let nu_y = envelope(nu_x);
    AxesOracle {
        nu: (nu_x, nu_y),
        area: area_oracle_n(nu_x, nu_y, quad_n.max(2048)),
    }
}

pub fn fixed_axes_oracle(coords: &[[f64; 3]]) -> AxesOracle {
    fixed_axes_oracle_n(coords, 2000, 200, 512)
}

/// Result of the two-level search for the fixed-center problem.
#[derive(Debug, Clone, Copy)]
pub struct CenterOracle {
    pub psi: f64,
    pub nu: (f64, f64),
    pub area: f64,
}

/// Minimal-area conic with a prescribed center, by sweeping the in-plane
/// axis angle `psi` (outer grid + golden refinement) and solving the
/// axis-aligned problem on the rotated coordinates at every angle. `coords`
/// are the points expressed in any orthonormal frame whose third axis is
/// the center.
pub fn fixed_center_oracle(coords: &[[f64; 3]]) -> CenterOracle {
    let rotated = |psi: f64| -> Vec<[f64; 3]> {
        let (s, c) = psi.sin_cos();
        coords
            .iter()
            .map(|p| [c * p[0] + s * p[1], -s * p[0] + c * p[1], p[2]])
            .collect()
    };
    let solve_at = |psi: f64, fine: bool| -> AxesOracle {
        let (g, gi, q) = if fine { (900, 220, 512) } else { (300, 120, 256) };
        fixed_axes_oracle_n(&rotated(psi), g, gi, q)
    };
    let m = 120;
    let mut best_k = 0;
    let mut best = f64::INFINITY;
    for k in 0..m {
        let psi = std::f64::consts::FRAC_PI_2 * k as f64 / m as f64;
        let v = solve_at(psi, false).area;
        if v < best {
            best = v;
            best_k = k;
        }
    }
    let step = std::f64::consts::FRAC_PI_2 / m as f64;
    let mut lo = (best_k as f64 - 1.0) * step;
    let mut hi = (best_k as f64 + 1.0) * step;
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = solve_at(x1, false).area;
    let mut f2 = solve_at(x2, false).area;
    for _ in 0..50 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = solve_at(x1, false).area;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = solve_at(x2, false).area;
        }
    }
    let psi = 0.5 * (lo + hi);
    let fine = solve_at(psi, true);
    CenterOracle {
        psi,
        nu: fine.nu,
        area: fine.area,
    }
}

/// Deterministic Nelder–Mead for the test-side minimizers. Returns the best
/// vertex after `max_evals` function evaluations (or earlier on simplex
/// collapse).
pub fn nelder_mead<const N: usize>(
    f: &mut dyn FnMut(&[f64; N]) -> f64,
    start: [f64; N],
    step: [f64; N],
    max_evals: usize,
) -> ([f64; N], f64) {
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let mut evals = 0;
    let mut eval = |x: &[f64; N], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    simplex.push((start, eval(&start, &mut evals)));
    for i in 0..N {
        let mut x = start;
        x[i] += step[i];
        simplex.push((x, eval(&x, &mut evals)));
    }
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[N].1 - simplex[0].1;
        if spread.abs() < 1e-15 * simplex[0].1.abs().max(1e-300) {
            break;
        }
        let mut centroid = [0.0; N];
        for v in simplex.iter().take(N) {
            for i in 0..N {
                centroid[i] += v.0[i] / N as f64;
            }
        }
        let worst = simplex[N];
        let mut refl = [0.0; N];
        for i in 0..N {
            refl[i] = centroid[i] + (centroid[i] - worst.0[i]);
        }
        let fr = eval(&refl, &mut evals);
        if fr < simplex[0].1 {
            let mut exp = [0.0; N];
            for i in 0..N {
                exp[i] = centroid[i] + 2.0 * (centroid[i] - worst.0[i]);
            }
            let fe = eval(&exp, &mut evals);
            simplex[N] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (refl, fr);
        } else {
            let mut con = [0.0; N];
            for i in 0..N {
                con[i] = centroid[i] + 0.5 * (worst.0[i] - centroid[i]);
            }
            let fc = eval(&con, &mut evals);
            if fc < worst.1 {
                simplex[N] = (con, fc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for i in 0..N {
                        v.0[i] = best[i] + 0.5 * (v.0[i] - best[i]);
                    }
                    v.1 = eval(&v.0, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (simplex[0].0, simplex[0].1)
}

/// Stationarity residual of the Karush–Kuhn–Tucker conditions: the distance
/// from `grad_f` to the cone spanned (with non-negative weights) by the
/// active-constraint gradients, relative to `|grad_f|`. Exhaustively tries
/// every subset of the active set of size at most the dimension, solving
/// each tiny least-squares system by normal equations.
pub fn kkt_residual(grad_f: &[f64], active_grads: &[Vec<f64>]) -> f64 {
    let dim = grad_f.len();
    let norm_f = grad_f.iter().map(|g| g * g).sum::<f64>().sqrt().max(1e-300);
    let resid_for = |subset: &[usize]| -> Option<f64> {
        let k = subset.len();
        if k == 0 {
            return Some(1.0); // residual is |grad_f| itself
        }
        // Normal equations G'G lambda = G' grad_f.
        let mut gtg = vec![vec![0.0; k]; k];
        let mut gtf = vec![0.0; k];
        for (a, &ia) in subset.iter().enumerate() {
            for (b, &ib) in subset.iter().enumerate() {
                gtg[a][b] = (0..dim)
                    .map(|d| active_grads[ia][d] * active_grads[ib][d])
                    .sum();
            }
            gtf[a] = (0..dim).map(|d| active_grads[ia][d] * grad_f[d]).sum();
        }
        let lambda = solve_dense(&mut gtg, &mut gtf)?;
        if lambda.iter().any(|&l| l < -1e-9) {
            return None;
        }
        let mut r2 = 0.0;
        for d in 0..dim {
            let mut model = 0.0;
            for (a, &ia) in subset.iter().enumerate() {
                model += lambda[a] * active_grads[ia][d];
            }
            r2 += (grad_f[d] - model) * (grad_f[d] - model);
        }
        Some(r2.sqrt() / norm_f)
    };
    let n = active_grads.len();
    let mut best = resid_for(&[]).unwrap();
    let mut subset = Vec::new();
    // Enumerate subsets by bitmask; active sets here are tiny.
    for mask in 1u32..(1 << n.min(16)) {
        if (mask.count_ones() as usize) > dim {
            continue;
        }
        subset.clear();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                subset.push(i);
            }
        }
        if let Some(r) = resid_for(&subset) {
            best = best.min(r);
        }
    }
    best
}

/// Gaussian elimination with partial pivoting for the tiny systems above.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in (col + 1)..n {
            s -= a[col][k] * x[k];
        }
        x[col] = s / a[col][col];
    }
    Some(x)
}

pub fn frobenius(a: &SymMat3<f64>, b: &SymMat3<f64>) -> f64 {
    let (ra, rb) = (a.rows(), b.rows());
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (ra[i][j] - rb[i][j]) * (ra[i][j] - rb[i][j]);
        }
    }
    s.sqrt()
}

pub fn rand_unit_vec(rng: &mut ChaCha8Rng) -> Vec3<f64> {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

pub fn rand_rotation(rng: &mut ChaCha8Rng) -> Quaternion<f64> {
    let axis = rand_unit_vec(rng);
    let angle: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    Quaternion::from_axis_angle(axis, angle).unwrap()
}

/// Random cloud of `n` points within angular `radius` of `center`;
/// rejection-free (uniform in a disc of the tangent chart, then projected).
pub fn rand_cap_points(
    rng: &mut ChaCha8Rng,
    n: usize,
    center: Vec3<f64>,
    radius: f64,
) -> Vec<SpherePoint<f64>> {
    let anchor = if center.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let u = center.cross(anchor).normalized().unwrap();
    let v = center.cross(u);
    (0..n)
        .map(|_| {
            let theta = radius * rng.gen_range(0.0f64..1.0).sqrt();
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let dir = u * phi.cos() + v * phi.sin();
            let p = center * theta.cos() + dir * theta.sin();
            SpherePoint::new(p.x, p.y, p.z).unwrap()
        })
        .collect()
}
