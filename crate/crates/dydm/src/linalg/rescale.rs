//! Affine spectrum rescaling with epsilon-perturbation of degenerate
//! eigenvalues.
//!
//! Preprocessing maps the dataset's extreme eigenvalues onto
//! [lambda_min, lambda_max] and splits tied eigenvalues by epsilon so every
//! spectrum starts strictly inside the Weyl chamber. Postprocessing merges
//! clusters tighter than epsilon back to equality and inverts the affine map.

use super::{Spectrum, SymMatrix};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute gap (in rescaled units) below which eigenvalues count as a tie.
/// Well above eigensolver rounding (~1e-13) and well below any genuine
/// spectral gap surviving the epsilon rule.
pub const TIE_TOL: f64 = 1e-9;

/// Cap on the perturbation magnitude, in rescaled units.
pub const EPSILON_CAP: f64 = 1e-4;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PerturbationEvent {
    /// Index of the spectrum within the dataset, when known.
    pub sample: usize,
    /// Eigenvalue positions that formed one degenerate group.
    pub indices: Vec<usize>,
}

/// Invertible affine map plus the perturbation rule, persisted alongside
/// preprocessed datasets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RescaleMap {
    pub scale: f64,
    pub offset: f64,
    /// Perturbation magnitude in rescaled units.
    pub epsilon: f64,
    #[serde(default)]
    pub perturbation_log: Vec<PerturbationEvent>,
}

/// Fits the affine map sending the dataset's largest eigenvalue to
/// `lambda_max` and its smallest to `lambda_min`, and derives epsilon as half
/// the smallest surviving gap, capped at 1e-4.
pub fn fit_rescale(spectra: &[Vec<f64>], lambda_min: f64, lambda_max: f64) -> Result<RescaleMap> {
    if spectra.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if lambda_max <= lambda_min {
        return Err(Error::config("lambda_max must exceed lambda_min"));
    }
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for s in spectra {
        for v in s {
            hi = hi.max(*v);
            lo = lo.min(*v);
        }
    }
    if !(hi - lo).is_finite() || hi - lo <= 0.0 {
        return Err(Error::DegenerateRange);
    }
    let scale = (lambda_max - lambda_min) / (hi - lo);
    let offset = lambda_min - scale * lo;

    // Smallest non-tie adjacent gap across the dataset, in rescaled units.
    let mut min_gap = f64::INFINITY;
    for s in spectra {
        for w in s.windows(2) {
            let gap = (w[0] - w[1]) * scale;
            if gap > TIE_TOL {
                min_gap = min_gap.min(gap);
            }
        }
    }
    let epsilon = if min_gap.is_finite() {
        (min_gap / 2.0).min(EPSILON_CAP)
    } else {
        EPSILON_CAP
    };

    Ok(RescaleMap {
        scale,
        offset,
        epsilon,
        perturbation_log: Vec::new(),
    })
}

impl RescaleMap {
    pub fn identity() -> Self {
        RescaleMap {
            scale: 1.0,
            offset: 0.0,
            epsilon: EPSILON_CAP,
            perturbation_log: Vec::new(),
        }
    }

    /// Rescales a descending eigenvalue vector and splits tied groups so the
    /// result is strictly ordered. Perturbed groups are appended to the log
    /// under `sample_index`.
    pub fn apply(&mut self, values: &[f64], sample_index: usize) -> Result<Spectrum> {
        let (spectrum, groups) = self.apply_inner(values)?;
        for indices in groups {
            self.perturbation_log.push(PerturbationEvent {
                sample: sample_index,
                indices,
            });
        }
        Ok(spectrum)
    }

    /// [`RescaleMap::apply`] without touching the perturbation log.
    pub fn apply_unlogged(&self, values: &[f64]) -> Result<Spectrum> {
        Ok(self.apply_inner(values)?.0)
    }

    fn apply_inner(&self, values: &[f64]) -> Result<(Spectrum, Vec<Vec<usize>>)> {
        let n = values.len();
        let mut out: Vec<f64> = values.iter().map(|v| self.scale * v + self.offset).collect();
        for w in out.windows(2) {
            if w[1] - w[0] > TIE_TOL {
                return Err(Error::config("eigenvalues must be sorted descending"));
            }
        }
        let mut groups = Vec::new();
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && out[end - 1] - out[end] <= TIE_TOL {
                end += 1;
            }
            let m = end - start;
            if m > 1 {
                // Clearance to the nearest distinct neighbours bounds the
                // spread so the merge rule cannot swallow them.
                let center: f64 = out[start..end].iter().sum::<f64>() / m as f64;
                let mut clearance = f64::INFINITY;
                if start > 0 {
                    clearance = clearance.min(out[start - 1] - center);
                }
                if end < n {
                    clearance = clearance.min(center - out[end]);
                }
                let sep = self.epsilon.min(clearance / (m as f64 + 2.0));
                for (j, v) in out[start..end].iter_mut().enumerate() {
                    *v = center + sep * ((m - 1) as f64 / 2.0 - j as f64);
                }
                groups.push((start..end).collect());
            }
            start = end;
        }
        Ok((Spectrum::new(out)?, groups))
    }

    /// Merges eigenvalue clusters with adjacent gaps at most epsilon back to
    /// their mean, then inverts the affine map. The output may contain ties
    /// and is therefore a plain descending vector.
    pub fn invert(&self, spectrum: &Spectrum) -> Vec<f64> {
        let vals = spectrum.values();
        let n = vals.len();
        let merge_tol = self.epsilon * (1.0 + 1e-9);
        let mut out = Vec::with_capacity(n);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && vals[end - 1] - vals[end] <= merge_tol {
                end += 1;
            }
            let mean: f64 = vals[start..end].iter().sum::<f64>() / (end - start) as f64;
            for _ in start..end {
                out.push((mean - self.offset) / self.scale);
            }
            start = end;
        }
        out
    }
}
