//! Spherical convex hulls of elliptic point sets.
//!
//! Elliptic points are antipodal pairs, so "the hull" only makes sense after
//! choosing one representative vector per point such that all of them fit in
//! an open hemisphere. The canonical choice here comes from the minimal
//! enclosing cap *of the elliptic set*: the center minimizing the largest
//! elliptic distance to the points. Signing every point toward that center
//! gives representatives in an open hemisphere whenever the optimal radius
//! is below π/2, and different coherent assignments of the same set (which
//! genuinely exist for widely spread sets) are resolved the same way every
//! time. The hull boundary is then built in a gnomonic chart around the cap
//! center, along with the largest inscribed circle.
//!
//! Everything here is deterministic; the cap search is an exact enumeration
//! over candidate support sets, not a randomized incremental algorithm.

use crate::error::{Error, Result};
use crate::geometry::point::SpherePoint;
use crate::geometry::vec3::Vec3;
use crate::scalar::Real;

/// A minimal enclosing spherical cap.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cap<T> {
    pub center: Vec3<T>,
    /// Angular radius in radians.
    pub radius: T,
    /// Indices of points on the cap boundary that determine it (at most 3).
    pub support: Vec3Support,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Vec3Support {
    pub indices: [usize; 3],
    pub len: usize,
}

impl Vec3Support {
    pub fn as_slice(&self) -> &[usize] {
        &self.indices[..self.len]
    }
}

/// Convex hull data for a hemisphere-bounded elliptic point set.
#[derive(Debug, Clone)]
pub(crate) struct SphericalHull<T> {
    /// One coherent unit representative per input point, all inside a
    /// common open hemisphere. Order matches the input.
    pub reps: Vec<Vec3<T>>,
    pub cap: Cap<T>,
    /// Indices into `reps` of the hull vertices, counterclockwise in the
    /// gnomonic chart around the cap center.
    pub hull_indices: Vec<usize>,
    /// Inward unit normals of the hull edges (edge k runs from hull vertex
    /// k to k+1); `dot(x, n) > 0` for x strictly inside.
    pub edge_normals: Vec<Vec3<T>>,
}

/// Margin keeping hulls strictly inside an open hemisphere.
const HEMISPHERE_MARGIN: f64 = 1e-9;

fn unit<T: Real>(v: Vec3<T>) -> Vec3<T> {
    v.normalized().expect("nonzero vector")
}

/// Smallest eigenvalue of the (PSD) scatter matrix `sum v v'`; points lie on
/// a common great circle exactly when it vanishes.
fn scatter_min_eigenvalue<T: Real>(reps: &[Vec3<T>]) -> T {
    use crate::geometry::eigen::eigen_sym3;
    use crate::geometry::symmat::SymMat3;
    let mut m = SymMat3::diag(T::zero(), T::zero(), T::zero());
    for v in reps {
        m.m11 = m.m11 + v.x * v.x;
        m.m12 = m.m12 + v.x * v.y;
        m.m13 = m.m13 + v.x * v.z;
        m.m22 = m.m22 + v.y * v.y;
        m.m23 = m.m23 + v.y * v.z;
        m.m33 = m.m33 + v.z * v.z;
    }
    eigen_sym3(&m).eigenvalues[2]
}

/// Elliptic distance between two directions: the angle between the lines
/// they span, in [0, π/2]. Antipodal sign choices fold in automatically.
fn elliptic_distance<T: Real>(c: Vec3<T>, p: Vec3<T>) -> T {
    c.cross(p).norm().atan2(c.dot(p).abs())
}

/// Largest elliptic distance from `c` to any vector in the set.
fn elliptic_radius_about<T: Real>(raw: &[Vec3<T>], c: Vec3<T>) -> T {
    let mut worst = T::zero();
    for &p in raw {
        let d = elliptic_distance(c, p);
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Minimal enclosing cap of an elliptic point set: the center minimizing the
/// largest elliptic distance to the points, found by exact enumeration.
///
/// At the optimum, the set of farthest points (each folded to the sign
/// nearest the center) pins the center down: a single farthest point means
/// the center is that point itself, two put it at the geodesic midpoint of
/// their folded representatives, and three or more hold it at a direction
/// equidistant from some three of them. The candidate list below — every
/// input direction, both sign mixtures of every pair midpoint, and all four
/// relative sign mixtures of every triple's equidistance direction — is
/// therefore exhaustive. Ties go to the earliest candidate in this fixed
/// order, which keeps results deterministic.
///
/// O(n⁴) worst case; fine for the modest point counts this crate targets
/// (tens, not thousands).
pub(crate) fn elliptic_min_cap<T: Real>(points: &[SpherePoint<T>]) -> Cap<T> {
    let raw: Vec<Vec3<T>> = points.iter().map(|p| p.as_vec3()).collect();
    let n = raw.len();
    let mut best = Cap {
        center: raw[0],
        radius: elliptic_radius_about(&raw, raw[0]),
        support: Vec3Support {
            indices: [0, usize::MAX, usize::MAX],
            len: 1,
        },
    };
    let consider = |c: Option<Vec3<T>>, support: Vec3Support, best: &mut Cap<T>| {
        if let Some(c) = c {
            let radius = elliptic_radius_about(&raw, c);
            if radius < best.radius {
                *best = Cap {
                    center: c,
                    radius,
                    support,
                };
            }
        }
    };
    let signs = [T::one(), -T::one()];
    for i in 1..n {
        let support = Vec3Support {
            indices: [i, usize::MAX, usize::MAX],
            len: 1,
        };
        consider(Some(raw[i]), support, &mut best);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let support = Vec3Support {
                indices: [i, j, usize::MAX],
                len: 2,
            };
            for s in signs {
                consider((raw[i] + raw[j] * s).normalized(), support, &mut best);
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let support = Vec3Support {
                    indices: [i, j, k],
                    len: 3,
                };
                for s2 in signs {
                    let d1 = raw[i] - raw[j] * s2;
                    for s3 in signs {
                        let d2 = raw[i] - raw[k] * s3;
                        // Near-parallel differences give no stable direction;
                        // such degenerate triples are covered by pair and
                        // single candidates.
                        consider(d1.cross(d2).normalized(), support, &mut best);
                    }
                }
            }
        }
    }
    best
}

/// Pick coherent hemisphere representatives for a set of elliptic points.
///
/// The canonical assignment signs every point toward the minimal enclosing
/// cap's center. The cap is computed in the elliptic metric, so it does not
/// depend on any prior sign choice, and whenever its radius stays below π/2
/// (minus a safety margin) the signed representatives all lie strictly
/// inside an open hemisphere. A radius at or beyond that bound means no
/// assignment keeps the set bounded, and the hull is refused.
pub(crate) fn coherent_reps<T: Real>(points: &[SpherePoint<T>]) -> Result<(Vec<Vec3<T>>, Cap<T>)> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("empty point set".into()));
    }
    let cap = elliptic_min_cap(points);
    let margin = T::from_f64(HEMISPHERE_MARGIN);
    if !(cap.radius < T::FRAC_PI_2() - margin) {
        return Err(Error::Unbounded(
            "point set spans beyond an open hemisphere; no bounded hull exists".into(),
        ));
    }
    let reps = points
        .iter()
        .map(|p| {
            let v = p.as_vec3();
            if v.dot(cap.center) < T::zero() {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok((reps, cap))
}

/// Build the full hull structure for ≥ 3 points.
pub(crate) fn spherical_hull<T: Real>(points: &[SpherePoint<T>]) -> Result<SphericalHull<T>> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    let (reps, cap) = coherent_reps(points)?;
    let min_eig = scatter_min_eigenvalue(&reps);
    if min_eig <= T::from_f64(1e-18) * T::from_f64(points.len() as f64) {
        return Err(Error::DegenerateInput(
            "points lie on a single great circle".into(),
        ));
    }

    // Gnomonic chart around the cap center.
    let c = cap.center;
    let helper = if c.x.abs() < T::from_f64(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let b1 = unit(helper.cross(c));
    let b2 = c.cross(b1);
    let chart: Vec<(T, T)> = reps
        .iter()
        .map(|v| {
            let d = v.dot(c);
            (v.dot(b1) / d, v.dot(b2) / d)
        })
        .collect();

    let hull_indices = monotone_chain(&chart);
    if hull_indices.len() < 3 {
        return Err(Error::DegenerateInput(
            "points lie on a single great circle".into(),
        ));
    }

    // Interior reference for the normal signs.
    let mut centroid = Vec3::zero();
    for &i in &hull_indices {
        centroid = centroid + reps[i];
    }
    let centroid = unit(centroid);
    let mut edge_normals = Vec::with_capacity(hull_indices.len());
    for k in 0..hull_indices.len() {
        let a = reps[hull_indices[k]];
        let b = reps[hull_indices[(k + 1) % hull_indices.len()]];
        let mut n = unit(a.cross(b));
        if n.dot(centroid) < T::zero() {
            n = -n;
        }
        edge_normals.push(n);
    }

    Ok(SphericalHull {
        reps,
        cap,
        hull_indices,
        edge_normals,
    })
}

/// Andrew's monotone chain in the chart plane; returns indices of the hull
/// in counterclockwise order. Collinear points on the boundary are dropped.
fn monotone_chain<T: Real>(pts: &[(T, T)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        pts[i]
            .partial_cmp(&pts[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    idx.dedup_by(|&mut i, &mut j| pts[i] == pts[j]);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| -> T {
        let (ox, oy) = pts[o];
        let (ax, ay) = pts[a];
        let (bx, by) = pts[b];
        (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= T::zero()
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= T::zero()
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Largest circle inscribed in the hull: maximize the minimum of
/// `dot(center, n_k)` over the inward edge normals; the optimum is attained
/// where one, two, or three constraints are active, so it suffices to
/// enumerate normals, pairwise bisectors, and triple-equality directions.
/// The inscribed radius is `arcsin` of the optimal value.
pub(crate) fn inscribed_circle<T: Real>(hull: &SphericalHull<T>) -> (T, SpherePoint<T>) {
    let normals = &hull.edge_normals;
    let score = |c: Vec3<T>| -> T {
        let mut worst = T::infinity();
        for n in normals {
            worst = worst.min(c.dot(*n));
        }
        worst
    };
    let mut best_c = unit(hull.cap.center);
    let mut best = score(best_c);
    let mut consider = |c: Option<Vec3<T>>| {
        if let Some(c) = c.and_then(|c| c.normalized()) {
            let s = score(c);
            if s > best {
                best = s;
                best_c = c;
            }
        }
    };
    let m = normals.len();
    for i in 0..m {
        consider(Some(normals[i]));
        for j in (i + 1)..m {
            consider(Some(normals[i] + normals[j]));
            for k in (j + 1)..m {
                let d1 = normals[i] - normals[j];
                let d2 = normals[i] - normals[k];
                let c = d1.cross(d2);
                consider(Some(c));
                consider(Some(-c));
            }
        }
    }
    let radius = best.min(T::one()).max(-T::one()).asin();
    (
        radius,
        SpherePoint::from_vec3(best_c).expect("incenter is a unit vector"),
    )
}

/// Whether a hemisphere representative `x` lies inside the hull, with
/// signed slack: positive `tol` admits slightly-outside points.
pub(crate) fn hull_contains<T: Real>(hull: &SphericalHull<T>, x: Vec3<T>, tol: T) -> bool {
    hull.edge_normals.iter().all(|n| x.dot(*n) >= -tol)
}
