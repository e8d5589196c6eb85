use crate::geometry::mat3::Mat3;
use crate::geometry::point::SpherePoint;
use crate::geometry::symmat::SymMat3;
use crate::scalar::Real;

/// Spectral decomposition of a symmetric 3x3 matrix.
///
/// Eigenvalues are sorted in descending order; `eigenvectors[i]` is the
/// canonical representative of the eigendirection for `eigenvalues[i]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: [T; 3],
    pub eigenvectors: [SpherePoint<T>; 3],
    /// Proper rotation whose columns are eigenvectors in the same order
    /// (signs chosen for `det = +1`, independent of the canonical points).
    pub(crate) basis: Mat3<T>,
}

/// Diagonalize a symmetric matrix with cyclic Jacobi rotations.
///
/// The iteration is unconditionally convergent for symmetric input and is
/// run until the off-diagonal mass is at rounding level, so residual and
/// orthogonality are accurate to a few ulps of the matrix scale.
pub fn eigen_sym3<T: Real>(m: &SymMat3<T>) -> EigenDecomposition<T> {
    let mut a = m.rows();
    let mut v = Mat3::<T>::identity().rows;
    let frob = m.frob_dot(m).sqrt().max(T::min_positive_value());
    let threshold = frob * T::from_f64(1e-15);

    for _sweep in 0..30 {
        let off = (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]).sqrt();
        if off <= threshold {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq.abs() <= threshold * T::from_f64(1e-2) {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (T::from_f64(2.0) * apq);
            let t = {
                let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                let t = T::one() / denom;
                if theta < T::zero() {
                    -t
                } else {
                    t
                }
            };
            let c = T::one() / (t * t + T::one()).sqrt();
            let s = t * c;

            // Update rows/columns p and q of A.
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            // Re-symmetrize the rotated pair exactly.
            a[p][q] = T::zero();
            a[q][p] = T::zero();

            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        a[j][j]
            .partial_cmp(&a[i][i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let eigenvalues = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
    let mut basis = Mat3::new([[T::zero(); 3]; 3]);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..3 {
            basis.rows[k][dst] = v[k][src];
        }
    }
    if basis.det() < T::zero() {
        for k in 0..3 {
            basis.rows[k][2] = -basis.rows[k][2];
        }
    }

    let eigenvectors = [
        SpherePoint::from_vec3(basis.col(0)).expect("unit eigenvector"),
        SpherePoint::from_vec3(basis.col(1)).expect("unit eigenvector"),
        SpherePoint::from_vec3(basis.col(2)).expect("unit eigenvector"),
    ];

    EigenDecomposition {
        eigenvalues,
        eigenvectors,
        basis,
    }
}
