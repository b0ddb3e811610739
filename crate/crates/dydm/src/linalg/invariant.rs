//! Sampling and density of the stationary law.
//!
//! The matrix OU process is stationary under the Gaussian ensemble with
//! entry variances alpha*(1+delta_ij)/(2*beta); its ordered spectrum is then
//! distributed as exp(-U(lambda)) with
//! U = beta/(2 alpha) * sum lambda_k^2 - sum_{k<l} ln|lambda_k - lambda_l|.

use super::{eig_sym, Spectrum, SymMatrix};
use crate::error::Result;
use rand::Rng;
use rand_distr::StandardNormal;

/// Draws a symmetric matrix from the stationary law of the matrix OU process:
/// diagonal variance alpha/beta, off-diagonal variance alpha/(2*beta).
pub fn sample_invariant_matrix(n: usize, alpha: f64, beta: f64, rng: &mut impl Rng) -> SymMatrix {
    let sd_diag = (alpha / beta).sqrt();
    let sd_off = (alpha / (2.0 * beta)).sqrt();
    SymMatrix::from_fn(n, |i, j| {
        let z: f64 = rng.sample(StandardNormal);
        if i == j {
            sd_diag * z
        } else {
            sd_off * z
        }
    })
}

/// Stationary spectrum draw: sample the invariant matrix, eigendecompose,
/// nudge exact ties apart (a measure-zero event) so the result lies strictly
/// inside the Weyl chamber.
pub fn sample_invariant_spectrum(
    n: usize,
    alpha: f64,
    beta: f64,
    rng: &mut impl Rng,
) -> Result<Spectrum> {
    let m = sample_invariant_matrix(n, alpha, beta, rng);
    let pair = eig_sym(&m)?;
    let mut values = pair.values;
    for i in 1..values.len() {
        if values[i] >= values[i - 1] {
            let sep = 1e-12 * (1.0 + values[i - 1].abs());
            values[i] = values[i - 1] - sep;
        }
    }
    Spectrum::new(values)
}

/// log p_inv(lambda) up to the normalizing constant: -U(lambda).
pub fn invariant_log_density(lambda: &[f64], alpha: f64, beta: f64) -> f64 {
    let mut u = 0.0;
    for v in lambda {
        u += beta / (2.0 * alpha) * v * v;
    }
    for k in 0..lambda.len() {
        for l in (k + 1)..lambda.len() {
            u -= (lambda[k] - lambda[l]).abs().ln();
        }
    }
    -u
}

/// grad log p_inv: component k is sum_{l != k} 1/(lambda_k - lambda_l)
/// - (beta/alpha) lambda_k, i.e. the forward drift divided by alpha.
pub fn invariant_score(lambda: &[f64], alpha: f64, beta: f64, out: &mut [f64]) {
    let n = lambda.len();
    out[..n].fill(0.0);
    for k in 0..n {
        for l in (k + 1)..n {
            let r = 1.0 / (lambda[k] - lambda[l]);
            out[k] += r;
            out[l] -= r;
        }
    }
    for k in 0..n {
        out[k] -= beta / alpha * lambda[k];
    }
}
