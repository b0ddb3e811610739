//! Adaptive step-size control.
//!
//! Non-crossing holds with probability one for the exact dynamics, so
//! conditioning an Euler step on keeping every adjacent gap positive does not
//! change the marginals. Given the state and the exact noise vector about to
//! be used, the post-step gap is a quadratic in tau = sqrt(dt):
//!
//! `gap(t + dt) = gap + f * dt + g * sqrt(dt)`
//!
//! whose first positive root is the crossing step. The returned bound is the
//! minimum over adjacent pairs, pulled `STEP_MARGIN` inside the exact root so
//! that stepping at the bound itself strictly preserves every gap.

use super::drift::dyson_drift_into;
use super::DysonParams;
use crate::error::{Error, Result};
use crate::linalg::Spectrum;

/// Relative margin between the returned bound and the exact crossing step.
pub const STEP_MARGIN: f64 = 1e-3;

/// Largest dt with `gap + f*dt + g*sqrt(dt) > 0` guaranteed, deflated by
/// [`STEP_MARGIN`]. Requires `gap > 0`. Returns infinity when no positive
/// crossing exists.
pub fn max_step_for_gap(gap: f64, f: f64, g: f64) -> f64 {
    debug_assert!(gap > 0.0);
    let crossing = if f == 0.0 {
        if g >= 0.0 {
            return f64::INFINITY;
        }
        let tau = gap / -g;
        tau * tau
    } else if f > 0.0 {
        // gap/f > 0: no positive root unless g < 0 and the discriminant is
        // non-negative; then both roots are positive and the smaller one is
        // the first crossing.
        if g >= 0.0 {
            return f64::INFINITY;
        }
        let disc = g * g - 4.0 * gap * f;
        if disc <= 0.0 {
            return f64::INFINITY;
        }
        // Cancellation-free form of the smaller root.
        let tau = 2.0 * gap / (-g + disc.sqrt());
        tau * tau
    } else {
        // f < 0: roots have opposite signs; the positive one is the crossing.
        let disc = g * g - 4.0 * gap * f;
        let tau = (g + disc.sqrt()) / (-2.0 * f);
        tau * tau
    };
    crossing * (1.0 - STEP_MARGIN)
}

/// Minimum over adjacent pairs given a precomputed drift vector.
pub(crate) fn step_bound_from_drift(
    lambda: &[f64],
    drift: &[f64],
    noise: &[f64],
    alpha: f64,
) -> Result<f64> {
    let n = lambda.len();
    let diffusion = (2.0 * alpha).sqrt();
    let mut bound = f64::INFINITY;
    for k in 0..n.saturating_sub(1) {
        let gap = lambda[k] - lambda[k + 1];
        if gap <= 0.0 {
            return Err(Error::ZeroGap(k));
        }
        let f = drift[k] - drift[k + 1];
        let g = diffusion * (noise[k] - noise[k + 1]);
        bound = bound.min(max_step_for_gap(gap, f, g));
    }
    Ok(bound)
}

/// Maximum admissible forward Euler step for the given noise: every adjacent
/// gap stays positive for any dt up to and including the returned value.
pub fn forward_step_size(lambda: &Spectrum, noise: &[f64], p: &DysonParams) -> Result<f64> {
    let mut drift = vec![0.0; lambda.len()];
    dyson_drift_into(lambda.values(), p, &mut drift)?;
    step_bound_from_drift(lambda.values(), &drift, noise, p.alpha)
}

/// Maximum admissible reverse step. The reverse update is
/// `lambda(t - dt) = lambda(t) - drift_rev * dt + sqrt(2 alpha dt) * noise`,
/// so the gap quadratic uses the negated reverse-drift difference.
pub fn backward_step_size(
    lambda: &Spectrum,
    score: &[f64],
    noise: &[f64],
    p: &DysonParams,
) -> Result<f64> {
    let mut drift = vec![0.0; lambda.len()];
    crate::sample::backward_drift_into(lambda.values(), score, p, &mut drift)?;
    for d in drift.iter_mut() {
        *d = -*d;
    }
    step_bound_from_drift(lambda.values(), &drift, noise, p.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::fill_standard_normal;

    fn params() -> DysonParams {
        DysonParams::new(1.0, 1.0, 1.0).unwrap()
    }

    /// Gap of pair k after an explicit forward Euler substitution.
    fn gap_after_step(lambda: &[f64], noise: &[f64], p: &DysonParams, dt: f64, k: usize) -> f64 {
        let mut drift = vec![0.0; lambda.len()];
        dyson_drift_into(lambda, p, &mut drift).unwrap();
        let root = (2.0 * p.alpha * dt).sqrt();
        let step = |i: usize| lambda[i] + drift[i] * dt + root * noise[i];
        step(k) - step(k + 1)
    }

    #[test]
    fn widening_pair_is_unbounded() {
        // f > 0 (repulsion dominates) and g > 0: any step admissible.
        let s = Spectrum::new(vec![0.05, -0.05]).unwrap();
        let noise = [1.0, -1.0];
        let bound = forward_step_size(&s, &noise, &params()).unwrap();
        assert!(bound.is_infinite());
    }

    #[test]
    fn any_smaller_step_keeps_the_gap() {
        let p = params();
        let mut rng = crate::rng::stream_rng(17, "controller-test", 0);
        let mut noise = vec![0.0; 4];
        for _ in 0..2000 {
            let s = crate::linalg::sample_invariant_spectrum(4, 1.0, 1.0, &mut rng).unwrap();
            fill_standard_normal(&mut rng, &mut noise);
            let bound = forward_step_size(&s, &noise, &p).unwrap();
            for frac in [1.0, 0.5, 0.1, 1e-3] {
                let dt = if bound.is_finite() {
                    bound * frac
                } else {
                    1e3 * frac
                };
                for k in 0..3 {
                    assert!(
                        gap_after_step(s.values(), &noise, &p, dt, k) > 0.0,
                        "gap {k} crossed at dt = {dt}"
                    );
                }
            }
        }
    }

    #[test]
    fn bound_matches_bisection_oracle() {
        let p = params();
        let mut rng = crate::rng::stream_rng(18, "controller-test", 1);
        let mut noise = vec![0.0; 3];
        let mut finite = 0;
        for _ in 0..500 {
            let s = crate::linalg::sample_invariant_spectrum(3, 1.0, 1.0, &mut rng).unwrap();
            fill_standard_normal(&mut rng, &mut noise);
            let bound = forward_step_size(&s, &noise, &p).unwrap();
            let mut drift = vec![0.0; 3];
            dyson_drift_into(s.values(), &p, &mut drift).unwrap();
            let oracle =
                crate::verify::bisect_crossing_step(s.values(), &drift, &noise, p.alpha);
            match oracle {
                Some(dt_star) => {
                    finite += 1;
                    let expect = dt_star * (1.0 - STEP_MARGIN);
                    assert!(
                        (bound - expect).abs() <= 0.01 * dt_star,
                        "bound {bound} vs crossing {dt_star}"
                    );
                }
                None => assert!(bound > 1e8, "oracle found no crossing, bound {bound}"),
            }
        }
        assert!(finite > 100, "too few finite cases to be meaningful");
    }
}
