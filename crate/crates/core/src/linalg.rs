//! Small dense symmetric linear algebra on row-major slices.

use crate::Scalar;

/// Condition number above which inversion switches to a pseudo-inverse.
pub const MAX_CONDITION: f64 = 1e12;

/// Eigen-decomposition of a symmetric `n × n` matrix by cyclic Jacobi
/// rotations. Returns eigenvalues and the eigenvectors as columns of a
/// row-major matrix.
pub fn symmetric_eigen<T: Scalar>(a: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag = diag + m[i * n + i] * m[i * n + i];
            for j in i + 1..n {
                off = off + m[i * n + j] * m[i * n + j];
            }
        }
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i * n + i]).collect(), v)
}

/// Inverse of a symmetric positive semi-definite matrix. When the condition
/// number exceeds [`MAX_CONDITION`] the Moore-Penrose pseudo-inverse is
/// returned instead. The flag reports which one was used.
pub fn inverse_or_pinv<T: Scalar>(a: &[T], n: usize) -> (Vec<T>, bool) {
    let (vals, vecs) = symmetric_eigen(a, n);
    let max = vals.iter().fold(T::zero(), |m, &l| m.max(l.abs()));
    let min = vals.iter().fold(T::infinity(), |m, &l| m.min(l));
    let singular = min.is_nan() || min <= T::zero() || max / min > T::of(MAX_CONDITION);
    let cutoff = max
        * T::of(MAX_CONDITION)
            .recip()
            .max(T::epsilon() * T::of(n as f64));
    let mut out = vec![T::zero(); n * n];
    for (k, &l) in vals.iter().enumerate() {
        if singular && l <= cutoff {
            continue;
        }
        let inv = l.recip();
        for i in 0..n {
            let vi = vecs[i * n + k] * inv;
            for j in 0..n {
                out[i * n + j] = out[i * n + j] + vi * vecs[j * n + k];
            }
        }
    }
    (out, singular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        c
    }

    #[test]
    fn inverse_of_well_conditioned_matrix() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let (inv, singular) = inverse_or_pinv(&a, 3);
        assert!(!singular);
        let id = matmul(&a, &inv, 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(
                    id[i * 3 + j],
                    if i == j { 1.0 } else { 0.0 },
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn eigenvalues_of_diagonal_and_rank_one() {
        let (vals, _) = symmetric_eigen(&[2.0f64, 0.0, 0.0, 5.0], 2);
        let mut vals = vals;
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, vec![2.0, 5.0]);

        // All-ones 3x3: eigenvalues 0, 0, 3.
        let (mut vals, _) = symmetric_eigen(&[1.0f64; 9], 3);
        vals.sort_by(f64::total_cmp);
        assert_relative_eq!(vals[2], 3.0, epsilon = 1e-12);
        assert!(vals[0].abs() < 1e-12 && vals[1].abs() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_on_singular_input() {
        let a = [1.0f64; 4];
        let (pinv, singular) = inverse_or_pinv(&a, 2);
        assert!(singular);
        // pinv of [[1,1],[1,1]] is [[.25,.25],[.25,.25]].
        for x in pinv {
            assert_relative_eq!(x, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_precision_agrees() {
        let a = [4.0f32, 1.0, 1.0, 3.0];
        let (inv, _) = inverse_or_pinv(&a, 2);
        let det = 11.0f32;
        assert_relative_eq!(inv[0], 3.0 / det, epsilon = 1e-6);
        assert_relative_eq!(inv[1], -1.0 / det, epsilon = 1e-6);
    }
}
