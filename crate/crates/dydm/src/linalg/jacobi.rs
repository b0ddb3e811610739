//! Cyclic Jacobi eigendecomposition for symmetric matrices.
//!
//! Plane rotations annihilate one off-diagonal entry at a time; sweeping
//! repeatedly drives the off-diagonal Frobenius norm to zero. The accumulated
//! rotation product yields orthonormal eigenvectors by construction.

use super::{EigenPair, SymMatrix};
use crate::error::{Error, Result};

const OFF_DIAG_THRESHOLD: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

fn off_diag_frobenius(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = a[i * n + j];
            acc += 2.0 * v * v;
        }
    }
    acc.sqrt()
}

/// Decomposes a symmetric matrix into a descending spectrum and orthonormal
/// eigenvectors. Exact eigenvalue ties keep the pre-sort (rotation) order of
/// their vectors.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenPair> {
    let n = m.n();
    if !m.is_finite() {
        return Err(Error::numeric("matrix has non-finite entries"));
    }
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    // Threshold scales with the input so convergence is size-independent.
    let scale = m.frobenius_norm();
    let threshold = OFF_DIAG_THRESHOLD * scale.max(f64::MIN_POSITIVE);

    let mut converged = off_diag_frobenius(&a, n) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                residual: off_diag_frobenius(&a, n),
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Smaller-angle root; t = 1/(2*theta) when theta overflows.
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        let new_ip = aip - s * (aiq + tau * aip);
                        let new_iq = aiq + s * (aip - tau * aiq);
                        a[i * n + p] = new_ip;
                        a[p * n + i] = new_ip;
                        a[i * n + q] = new_iq;
                        a[q * n + i] = new_iq;
                    }
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
        sweeps += 1;
        converged = off_diag_frobenius(&a, n) <= threshold;
    }

    // Sort descending; stable so that exact ties keep vector order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].partial_cmp(&a[i * n + i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| a[k * n + k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[dst * n + i] = v[i * n + src];
        }
    }

    Ok(EigenPair { values, vectors, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn reconstruction_residual(m: &SymMatrix, pair: &EigenPair) -> f64 {
        let n = m.n();
        let lam = &pair.values;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += lam[k] * pair.vector(k)[i] * pair.vector(k)[j];
                }
                worst = worst.max((acc - m.get(i, j)).abs());
            }
        }
        worst
    }

    #[test]
    fn identity_spectrum() {
        let m = SymMatrix::diag(&[1.0, 1.0, 1.0]);
        let pair = eig_sym(&m).unwrap();
        assert_eq!(pair.values, &[1.0, 1.0, 1.0]);
        assert!(pair.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn diagonal_sorting() {
        let m = SymMatrix::diag(&[2.0, -1.0, 5.0]);
        let pair = eig_sym(&m).unwrap();
        assert_eq!(pair.values, &[5.0, 2.0, -1.0]);
        // Vector of the top eigenvalue is e_2.
        assert!((pair.vector(0)[2].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complete_bipartite_spectrum() {
        // K_{3,3}: eigenvalues (3, 0, 0, 0, 0, -3).
        let m = SymMatrix::from_fn(6, |i, j| {
            if (i < 3) != (j < 3) {
                1.0
            } else {
                0.0
            }
        });
        let pair = eig_sym(&m).unwrap();
        let vals = &pair.values;
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[5] + 3.0).abs() < 1e-12);
        for v in &vals[1..5] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn random_matrices_reconstruct_and_stay_orthonormal() {
        let mut rng = crate::rng::stream_rng(11, "jacobi-test", 0);
        for &n in &[2usize, 5, 17, 50] {
            let m = SymMatrix::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let pair = eig_sym(&m).unwrap();
            assert!(pair.orthonormality_defect() <= 1e-10, "n={n}");
            let resid = reconstruction_residual(&m, &pair);
            assert!(
                resid <= 1e-9 * (1.0 + m.max_abs()),
                "n={n} residual={resid:e}"
            );
            // Frobenius reconstruction bound from the op contract.
            assert!(resid * (n as f64) <= 1e-10 * m.frobenius_norm().max(1.0) * (n as f64));
        }
    }
}
