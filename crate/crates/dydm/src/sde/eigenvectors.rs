//! Eigenvector flow conditioned on an eigenvalue path.
//!
//! Conditioned on the spectrum, each eigenvector obeys
//! `dv_k = -alpha/2 sum_{l!=k} (lambda_k - lambda_l)^{-2} v_k dt
//!        + sqrt(alpha) sum_{l!=k} (lambda_k - lambda_l)^{-1} v_l dw_{lk}`
//! with a shared symmetric noise matrix `w_{lk} = w_{kl}` independent of the
//! eigenvalue noise. Euler steps preserve orthonormality only to leading
//! order, so the integrator re-orthonormalises after every step unless the
//! raw mode is requested.

use super::DysonParams;
use crate::error::{Error, Result};
use crate::linalg::EigenPair;
use crate::sde::SpectralPath;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthoMode {
    /// Modified Gram-Schmidt after every step.
    Projected,
    /// No projection; norm and orthogonality wander with the step size.
    Raw,
}

#[derive(Clone, Debug)]
pub struct EigenPath {
    pub times: Vec<f64>,
    pub frames: Vec<EigenPair>,
}

/// One raw Euler step. `vectors` holds unit eigenvectors column-major,
/// `noise_sym` is a symmetric n*n matrix of standard normals (diagonal
/// unused). Writes the updated frame into `out`.
pub fn eigenvector_step_raw(
    vectors: &[f64],
    lambda: &[f64],
    alpha: f64,
    dt: f64,
    noise_sym: &[f64],
    out: &mut [f64],
) -> Result<()> {
    let n = lambda.len();
    debug_assert_eq!(vectors.len(), n * n);
    debug_assert_eq!(out.len(), n * n);
    let root = (alpha * dt).sqrt();
    for k in 0..n {
        let mut s2 = 0.0;
        for l in 0..n {
            if l == k {
                continue;
            }
            let gap = lambda[k] - lambda[l];
            if gap == 0.0 {
                return Err(Error::ZeroGap(k.min(l)));
            }
            s2 += 1.0 / (gap * gap);
        }
        let decay = 1.0 - 0.5 * alpha * s2 * dt;
        for i in 0..n {
            out[k * n + i] = decay * vectors[k * n + i];
        }
        for l in 0..n {
            if l == k {
                continue;
            }
            let coeff = root * noise_sym[l * n + k] / (lambda[k] - lambda[l]);
            for i in 0..n {
                out[k * n + i] += coeff * vectors[l * n + i];
            }
        }
    }
    Ok(())
}

fn modified_gram_schmidt(vectors: &mut [f64], n: usize) {
    for k in 0..n {
        for l in 0..k {
            let dot: f64 = (0..n).map(|i| vectors[k * n + i] * vectors[l * n + i]).sum();
            for i in 0..n {
                vectors[k * n + i] -= dot * vectors[l * n + i];
            }
        }
        let norm: f64 = (0..n)
            .map(|i| vectors[k * n + i] * vectors[k * n + i])
            .sum::<f64>()
            .sqrt();
        for i in 0..n {
            vectors[k * n + i] /= norm;
        }
    }
}

fn fill_symmetric_noise(rng: &mut impl Rng, n: usize, out: &mut [f64]) {
    for i in 0..n {
        for j in i..n {
            let z: f64 = rng.sample(StandardNormal);
            out[i * n + j] = z;
            out[j * n + i] = z;
        }
    }
}

/// Integrates the eigenvector flow along a recorded eigenvalue path,
/// evaluating coefficients at the left endpoint of each interval. Returns a
/// frame per path time stamp.
pub fn simulate_eigenvectors(
    pair0: &EigenPair,
    path: &SpectralPath,
    p: &DysonParams,
    mode: OrthoMode,
    rng: &mut impl Rng,
) -> Result<EigenPath> {
    let n = pair0.n;
    if path.states.is_empty() || path.states[0].len() != n {
        return Err(Error::SizeMismatch(
            path.states.first().map_or(0, |s| s.len()),
            n,
        ));
    }
    let mut frames = Vec::with_capacity(path.times.len());
    frames.push(pair0.clone());
    let mut current = pair0.vectors.clone();
    let mut next = vec![0.0; n * n];
    let mut noise = vec![0.0; n * n];
    for i in 1..path.times.len() {
        let dt = path.times[i] - path.times[i - 1];
        let lambda = path.states[i - 1].values();
        fill_symmetric_noise(rng, n, &mut noise);
        eigenvector_step_raw(&current, lambda, p.alpha, dt, &noise, &mut next)?;
        std::mem::swap(&mut current, &mut next);
        if mode == OrthoMode::Projected {
            modified_gram_schmidt(&mut current, n);
        }
        frames.push(EigenPair {
            values: path.states[i].values().to_vec(),
            vectors: current.clone(),
            n,
        });
    }
    Ok(EigenPath {
        times: path.times.clone(),
        frames,
    })
}
