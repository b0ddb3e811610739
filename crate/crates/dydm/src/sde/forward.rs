//! Forward Euler-Maruyama simulation on the schedule grid.

use super::controller::step_bound_from_drift;
use super::drift::dyson_drift_into;
use super::{DysonParams, ScheduleGrid, SpectralPath};
use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::rng::{fill_standard_normal, stream_rng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct ForwardOptions {
    /// Fraction of the controller bound actually taken.
    pub safety: f64,
    /// Consecutive sub-`dt_min` bounds tolerated before declaring the path
    /// stuck.
    pub max_skips: usize,
}

impl Default for ForwardOptions {
    fn default() -> Self {
        ForwardOptions {
            safety: 0.9,
            max_skips: 10_000,
        }
    }
}

/// Simulates the spectral SDE from `lambda0` over the grid, recording the
/// state at every grid point. Step sizes are
/// `min(controller_bound * safety, dt_cap, distance to the next grid point)`;
/// bounds below `dt_min` are skipped with fresh noise.
pub fn simulate_forward(
    lambda0: &Spectrum,
    p: &DysonParams,
    grid: &ScheduleGrid,
    rng: &mut ChaCha8Rng,
    opts: ForwardOptions,
) -> Result<SpectralPath> {
    let n = lambda0.len();
    let mut state: Vec<f64> = lambda0.values().to_vec();
    let mut times = Vec::with_capacity(grid.len());
    let mut states = Vec::with_capacity(grid.len());
    times.push(0.0);
    states.push(lambda0.clone());

    let mut drift = vec![0.0; n];
    let mut noise = vec![0.0; n];
    let mut t = 0.0;

    for idx in 1..grid.len() {
        let t_fix = grid.times()[idx];
        let mut skips = 0usize;
        while t < t_fix {
            fill_standard_normal(rng, &mut noise);
            dyson_drift_into(&state, p, &mut drift)?;
            let bound = step_bound_from_drift(&state, &drift, &noise, p.alpha)?;
            if bound < p.dt_min {
                skips += 1;
                if skips > opts.max_skips {
                    return Err(Error::StuckPath {
                        t,
                        skips,
                        partial: Box::new(SpectralPath { times, states }),
                    });
                }
                continue;
            }
            skips = 0;
            let wanted = (bound * opts.safety).min(p.dt_cap);
            let remaining = t_fix - t;
            let (dt, snapped) = if wanted >= remaining {
                (remaining, true)
            } else {
                (wanted, false)
            };
            let root = (2.0 * p.alpha * dt).sqrt();
            for k in 0..n {
                state[k] += drift[k] * dt + root * noise[k];
            }
            t = if snapped { t_fix } else { t + dt };
        }
        // The controller guarantees strict ordering at every accepted step.
        if !crate::linalg::strictly_descending(&state) {
            return Err(Error::numeric(format!("ordering lost at t = {t}")));
        }
        times.push(t_fix);
        states.push(Spectrum::new_unchecked(state.clone()));
    }

    Ok(SpectralPath { times, states })
}

/// Simulates `count` paths with per-path derived noise streams, starting from
/// `starts[i % starts.len()]`. Parallel across paths; output order is by path
/// index, so results are identical for any thread count.
pub fn simulate_forward_batch(
    starts: &[Spectrum],
    count: usize,
    p: &DysonParams,
    grid: &ScheduleGrid,
    seed: u64,
    opts: ForwardOptions,
) -> Result<Vec<SpectralPath>> {
    if starts.is_empty() {
        return Err(Error::EmptyDataset);
    }
    crate::parallel::try_map_indexed(count, |i| {
        let mut rng = stream_rng(seed, "forward-path", i as u64);
        simulate_forward(&starts[i % starts.len()], p, grid, &mut rng, opts)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::ScheduleGrid;

    #[test]
    fn paths_hit_every_grid_point_in_order() {
        let p = DysonParams::new(1.0, 1.0, 2.0).unwrap();
        let grid = ScheduleGrid::exponential(0.05, 2.0).unwrap();
        let s0 = Spectrum::new(vec![1.0, 0.0, -1.0]).unwrap();
        let mut rng = stream_rng(1, "fw-test", 0);
        let path = simulate_forward(&s0, &p, &grid, &mut rng, ForwardOptions::default()).unwrap();
        assert_eq!(path.times, grid.times());
        for s in &path.states {
            assert!(s.min_gap() > 0.0);
        }
    }

    #[test]
    fn n1_terminal_law_is_the_ou_marginal() {
        // x(T) ~ N(x0 e^{-beta T}, alpha/beta (1 - e^{-2 beta T})).
        let (alpha, beta, t) = (1.0, 1.0, 1.5);
        let p = DysonParams::new(alpha, beta, t).unwrap();
        let grid = ScheduleGrid::exponential(0.05, t).unwrap();
        let x0 = 2.0;
        let starts = vec![Spectrum::new(vec![x0]).unwrap()];
        let paths =
            simulate_forward_batch(&starts, 10_000, &p, &grid, 5, ForwardOptions::default())
                .unwrap();
        let mut xs: Vec<f64> = paths.iter().map(|p| p.terminal().values()[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mean = x0 * (-beta * t).exp();
        let sd = (alpha / beta * (1.0 - (-2.0 * beta * t).exp())).sqrt();
        let pval = crate::stats::ks_test_sorted(&xs, |x| crate::stats::normal_cdf(x, mean, sd));
        assert!(pval > 0.001, "KS p = {pval}");
    }

    #[test]
    fn batch_is_deterministic_in_path_index() {
        let p = DysonParams::new(1.0, 1.0, 0.5).unwrap();
        let grid = ScheduleGrid::exponential(0.05, 0.5).unwrap();
        let starts = vec![Spectrum::new(vec![1.0, -1.0]).unwrap()];
        let a = simulate_forward_batch(&starts, 4, &p, &grid, 9, ForwardOptions::default())
            .unwrap();
        let b = simulate_forward_batch(&starts, 4, &p, &grid, 9, ForwardOptions::default())
            .unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.terminal().values(), y.terminal().values());
        }
    }
}
