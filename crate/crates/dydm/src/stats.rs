//! Statistical test helpers used by the verification suites.

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

/// Standard normal CDF via erf.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    0.5 * (1.0 + erf((x - mean) / (sd * std::f64::consts::SQRT_2)))
}

/// Abramowitz-Stegun 7.1.26 rational approximation, |error| < 1.5e-7, made
/// antisymmetric. Accurate enough for test significance levels of 1e-3.
fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let y = 1.0
        - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
            + 0.254829592)
            * t
            * (-x * x).exp();
    sign * y
}

/// Kolmogorov-Smirnov statistic of sorted samples against a CDF.
pub fn ks_statistic_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = cdf(*x);
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    d
}

/// One-sample KS p-value (asymptotic, with the Stephens small-sample
/// correction). Samples must be sorted ascending.
pub fn ks_test_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let d = ks_statistic_sorted(sorted, cdf);
    let n = sorted.len() as f64;
    kolmogorov_sf((n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d)
}

/// Two-sample KS p-value (asymptotic).
pub fn ks_two_sample(a: &mut Vec<f64>, b: &mut Vec<f64>) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = (-2.0 * jf * jf * x * x).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Upper-tail p-value of a chi-square statistic.
pub fn chi_square_p(stat: f64, dof: usize) -> f64 {
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    1.0 - dist.cdf(stat)
}

/// Exact two-sided binomial test: observing `k` successes in `n` trials at
/// success probability `p`.
pub fn binomial_two_sided_p(k: u64, n: u64, p: f64) -> f64 {
    let dist = Binomial::new(p, n).expect("valid binomial");
    let lower = dist.cdf(k);
    let upper = if k == 0 { 1.0 } else { 1.0 - dist.cdf(k - 1) };
    (2.0 * lower.min(upper)).min(1.0)
}

/// Least-squares slope of y against x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn ks_accepts_matching_normal_samples() {
        let mut rng = crate::rng::stream_rng(9, "stats-test", 0);
        let mut xs: Vec<f64> = (0..5000).map(|_| rng.sample(StandardNormal)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let p = ks_test_sorted(&xs, |x| normal_cdf(x, 0.0, 1.0));
        assert!(p > 0.001, "p = {p}");
        // Shifted distribution must be rejected decisively.
        let p_bad = ks_test_sorted(&xs, |x| normal_cdf(x, 0.5, 1.0));
        assert!(p_bad < 1e-10);
    }

    #[test]
    fn chi_square_tail_values() {
        // chi^2 with 1 dof: P(X > 3.841) ~ 0.05.
        assert!((chi_square_p(3.841, 1) - 0.05).abs() < 0.001);
    }

    #[test]
    fn binomial_test_is_calibrated() {
        assert!(binomial_two_sided_p(500, 1000, 0.5) > 0.9);
        assert!(binomial_two_sided_p(400, 1000, 0.5) < 1e-6);
    }

    #[test]
    fn slope_of_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.0];
        assert!((fit_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}
