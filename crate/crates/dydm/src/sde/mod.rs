//! Forward spectral diffusion: drift, adaptive step control, path simulation,
//! the matrix-level OU oracle, and the conditioned eigenvector flow.

mod controller;
mod drift;
mod eigenvectors;
mod forward;
mod matrix_ou;

pub use controller::{backward_step_size, forward_step_size, max_step_for_gap, STEP_MARGIN};
pub use drift::{dyson_drift, dyson_drift_into};
pub use eigenvectors::{
    eigenvector_step_raw, simulate_eigenvectors, EigenPath, OrthoMode,
};
pub use forward::{simulate_forward, simulate_forward_batch, ForwardOptions};
pub use matrix_ou::{simulate_matrix_ou, OuMode};

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use serde::{Deserialize, Serialize};

/// Coefficients of the spectral SDE
/// `d lambda_k = (alpha sum_{l!=k} 1/(lambda_k - lambda_l) - beta lambda_k) dt
///  + sqrt(2 alpha) dW_k`
/// together with the integration horizon and step-control limits.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DysonParams {
    /// Repulsion/diffusion coefficient (> 0).
    pub alpha: f64,
    /// Confinement coefficient (>= 0; the invariant law needs > 0).
    pub beta: f64,
    /// Integration horizon T.
    pub t_horizon: f64,
    /// Steps with a controller bound below this are skipped with fresh noise.
    #[serde(default = "default_dt_min_marker")]
    pub dt_min: f64,
    /// Global cap on any Euler step, bounding discretisation error far from
    /// the chamber boundary.
    #[serde(default = "default_dt_cap")]
    pub dt_cap: f64,
}

fn default_dt_min_marker() -> f64 {
    -1.0 // replaced by 1e-9 * T in validate()
}

fn default_dt_cap() -> f64 {
    0.05
}

impl DysonParams {
    pub fn new(alpha: f64, beta: f64, t_horizon: f64) -> Result<Self> {
        let mut p = DysonParams {
            alpha,
            beta,
            t_horizon,
            dt_min: default_dt_min_marker(),
            dt_cap: default_dt_cap(),
        };
        p.validate()?;
        Ok(p)
    }

    /// Table defaults: alpha = beta = 1, T = 12.
    pub fn standard() -> Self {
        DysonParams::new(1.0, 1.0, 12.0).expect("valid defaults")
    }

    pub fn validate(&mut self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return Err(Error::config("alpha must be positive"));
        }
        if !(self.beta >= 0.0) {
            return Err(Error::config("beta must be non-negative"));
        }
        if !(self.t_horizon > 0.0) {
            return Err(Error::config("t_horizon must be positive"));
        }
        if self.dt_min < 0.0 {
            self.dt_min = 1e-9 * self.t_horizon;
        }
        if !(self.dt_min > 0.0 && self.dt_cap > 0.0) {
            return Err(Error::config("dt_min and dt_cap must be positive"));
        }
        Ok(())
    }

    /// beta / alpha, the single parameter left after time rescaling.
    pub fn eta(&self) -> f64 {
        self.beta / self.alpha
    }
}

/// One segment of a piecewise-uniform time grid.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

/// Fixed time grid on [0, T]. The training objective is evaluated on grid
/// points only; the adaptive controller governs sub-steps in between.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct ScheduleGrid {
    segments: Vec<Segment>,
    times: Vec<f64>,
}

impl ScheduleGrid {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::config("schedule needs at least one segment"));
        }
        if segments[0].from != 0.0 {
            return Err(Error::config("schedule must start at t = 0"));
        }
        let mut times = vec![0.0];
        let mut cursor = 0.0;
        for seg in &segments {
            if seg.from != cursor {
                return Err(Error::config("schedule segments must be contiguous"));
            }
            if !(seg.step > 0.0) || seg.to <= seg.from {
                return Err(Error::config("segment steps and spans must be positive"));
            }
            let span = seg.to - seg.from;
            let count = (span / seg.step).round().max(1.0) as usize;
            for i in 1..=count {
                times.push(seg.from + span * i as f64 / count as f64);
            }
            cursor = seg.to;
        }
        // Exact segment boundaries; interior points strictly increasing.
        debug_assert!(times.windows(2).all(|w| w[1] > w[0]));
        Ok(ScheduleGrid { segments, times })
    }

    /// Exponential grid: step sizes double across eight bands from dt/64 near
    /// t = 0 up to 2*dt at the horizon. Bands past `t_horizon` are truncated.
    pub fn exponential(dt: f64, t_horizon: f64) -> Result<Self> {
        let bands: [(f64, f64, f64); 8] = [
            (0.0, 0.125, dt / 64.0),
            (0.125, 0.25, dt / 32.0),
            (0.25, 0.5, dt / 16.0),
            (0.5, 1.0, dt / 8.0),
            (1.0, 2.0, dt / 4.0),
            (2.0, 3.0, dt / 2.0),
            (3.0, 7.0, dt),
            (7.0, f64::INFINITY, 2.0 * dt),
        ];
        let mut segments = Vec::new();
        for (from, to, step) in bands {
            if from >= t_horizon {
                break;
            }
            segments.push(Segment {
                from,
                to: to.min(t_horizon),
                step,
            });
        }
        ScheduleGrid::new(segments)
    }

    /// Grid used throughout: dt = 0.05, T = 12.
    pub fn standard() -> Self {
        ScheduleGrid::exponential(0.05, 12.0).expect("valid standard grid")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Index of the largest grid time strictly below `t`, if any.
    pub fn prev_index(&self, t: f64) -> Option<usize> {
        match self.times.partition_point(|&x| x < t) {
            0 => None,
            k => Some(k - 1),
        }
    }

    /// Indices (j, j+1) with t_j <= t <= t_{j+1}; clamps at the ends.
    pub fn bracket(&self, t: f64) -> (usize, usize) {
        let k = self.times.partition_point(|&x| x <= t);
        if k == 0 {
            (0, 1.min(self.times.len() - 1))
        } else if k >= self.times.len() {
            (self.times.len() - 2, self.times.len() - 1)
        } else {
            (k - 1, k)
        }
    }

    /// Hex digest of the grid content, embedded in checkpoints.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        for t in &self.times {
            h.update(t.to_le_bytes());
        }
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl TryFrom<Vec<Segment>> for ScheduleGrid {
    type Error = Error;
    fn try_from(segments: Vec<Segment>) -> Result<Self> {
        ScheduleGrid::new(segments)
    }
}

impl From<ScheduleGrid> for Vec<Segment> {
    fn from(g: ScheduleGrid) -> Vec<Segment> {
        g.segments
    }
}

/// A forward trajectory recorded exactly at schedule grid points.
#[derive(Clone, Debug)]
pub struct SpectralPath {
    pub times: Vec<f64>,
    pub states: Vec<Spectrum>,
}

impl SpectralPath {
    pub fn terminal(&self) -> &Spectrum {
        self.states.last().expect("non-empty path")
    }
}

/// Parameters and time map of the eta-normalised SDE: running the
/// (alpha, beta) dynamics until time s is the same as running the
/// (1, eta)-SDE until time alpha * s.
#[derive(Clone, Debug)]
pub struct TimeRescaling {
    pub params: DysonParams,
    /// rescaled time = factor * original time; factor = alpha.
    pub factor: f64,
}

impl TimeRescaling {
    pub fn to_rescaled(&self, t: f64) -> f64 {
        self.factor * t
    }

    /// The map T(t) = t / alpha back to the original clock.
    pub fn to_original(&self, t: f64) -> f64 {
        t / self.factor
    }
}

/// Reduces (alpha, beta) to the single parameter eta = beta/alpha via a
/// linear change of clock.
pub fn rescale_time(p: &DysonParams) -> TimeRescaling {
    let params = DysonParams {
        alpha: 1.0,
        beta: p.eta(),
        t_horizon: p.alpha * p.t_horizon,
        dt_min: p.alpha * p.dt_min,
        dt_cap: p.alpha * p.dt_cap,
    };
    TimeRescaling {
        params,
        factor: p.alpha,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_shape() {
        let g = ScheduleGrid::standard();
        assert_eq!(g.times()[0], 0.0);
        assert_eq!(g.t_end(), 12.0);
        // 160+80+80+80+80+40+80+50 intervals.
        assert_eq!(g.len(), 651);
        assert!((g.times()[1] - 0.05 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn truncated_grid_ends_at_horizon() {
        let g = ScheduleGrid::exponential(0.05, 2.5).unwrap();
        assert_eq!(g.t_end(), 2.5);
        let g = ScheduleGrid::exponential(0.05, 0.1).unwrap();
        assert_eq!(g.t_end(), 0.1);
    }

    #[test]
    fn bracket_and_prev() {
        let g = ScheduleGrid::standard();
        assert_eq!(g.prev_index(0.0), None);
        let (a, b) = g.bracket(6.99);
        assert!(g.times()[a] <= 6.99 && 6.99 <= g.times()[b]);
        let (a, b) = g.bracket(12.0);
        assert_eq!(b, g.len() - 1);
        assert_eq!(a, g.len() - 2);
    }

    #[test]
    fn eta_reduction() {
        let p = DysonParams::new(0.1, 0.5, 1.0).unwrap();
        let r = rescale_time(&p);
        assert!((r.params.beta - 5.0).abs() < 1e-12);
        assert!((r.params.alpha - 1.0).abs() < 1e-12);
        // gamma-time t corresponds to original time 10 t.
        assert!((r.to_original(1.0) - 10.0).abs() < 1e-12);
        let p = DysonParams::new(2.0, 2.0, 1.0).unwrap();
        assert!((rescale_time(&p).params.beta - 1.0).abs() < 1e-12);
    }
}
