//! Drift of the spectral SDE.

use super::DysonParams;
use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Writes the drift
/// `alpha * sum_{l != k} 1/(lambda_k - lambda_l) - beta * lambda_k`
/// into `out`. Repulsion terms are accumulated pairwise with opposite signs,
/// so they cancel exactly in the component sum:
/// `sum_k drift_k == -beta * sum_k lambda_k` in floating point.
pub fn dyson_drift_into(lambda: &[f64], p: &DysonParams, out: &mut [f64]) -> Result<()> {
    let n = lambda.len();
    assert_eq!(out.len(), n);
    out.fill(0.0);
    for k in 0..n {
        for l in (k + 1)..n {
            let gap = lambda[k] - lambda[l];
            if gap == 0.0 {
                return Err(Error::ZeroGap(k));
            }
            let r = p.alpha / gap;
            out[k] += r;
            out[l] -= r;
        }
    }
    for k in 0..n {
        out[k] -= p.beta * lambda[k];
    }
    Ok(())
}

pub fn dyson_drift(lambda: &Spectrum, p: &DysonParams) -> Result<Vec<f64>> {
    let mut out = vec![0.0; lambda.len()];
    dyson_drift_into(lambda.values(), p, &mut out)?;
    Ok(out)
}
