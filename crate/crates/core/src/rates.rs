//! Quantitative targets and empirical rate fits: the predicted L1-L1 growth
//! exponents as functions of (n, a, sigma), and least-squares slope extraction
//! from norm time series in log coordinates.

use crate::error::{Error, Result};

/// Predicted exponents of the (1+t)-power factors in the L1-L1 estimates,
/// plus the Sobolev data orders they require.
///
/// alpha_* bound ||  |D|^a u ||, beta_* bound || |D|^a u_t ||; the *_u0/*_u1
/// split is by which datum the factor multiplies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremRates {
    pub alpha_u0: f64,
    pub alpha_u1: f64,
    pub beta_u0: f64,
    pub beta_u1: f64,
    /// data regularity orders (for u0, for u1) entering the u estimate
    pub sob_u_data: (f64, f64),
    /// data regularity orders (for u0, for u1) entering the u_t estimate
    pub sob_ut_data: (f64, f64),
}

/// Exponents of the main theorem:
/// alpha_u0 = (2 + floor(n/2))/2 - a/(2 sigma), alpha_u1 = alpha_u0 + 1/2,
/// beta_u0 = (1 + floor(n/2))/2 - a/(2 sigma),  beta_u1 = alpha_u0.
pub fn theorem_rates(n: usize, a: f64, sigma: f64) -> Result<TheoremRates> {
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if !(a >= 0.0) {
        return Err(Error::Domain(format!("derivative order must be >= 0, got {a}")));
    }
    if !(sigma > 1.0) {
        return Err(Error::Domain(format!("sigma must exceed 1, got {sigma}")));
    }
    let half_n = (n / 2) as f64;
    let shift = a / (2.0 * sigma);
    let positive_part = (a - sigma).max(0.0);
    Ok(TheoremRates {
        alpha_u0: 0.5 * (2.0 + half_n) - shift,
        alpha_u1: 1.0 + 0.5 * (1.0 + half_n) - shift,
        beta_u0: 0.5 * (1.0 + half_n) - shift,
        beta_u1: 0.5 * (2.0 + half_n) - shift,
        sob_u_data: (a, positive_part),
        sob_ut_data: (2.0 * sigma + positive_part, 2.0 * sigma + positive_part),
    })
}

/// Result of a least-squares rate fit over a trailing window.
///
/// For power-law fits `exponent` is the slope of log(value) against log(1+t);
/// for exponential fits it is the decay rate c (minus the slope against t).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub window: (f64, f64),
}

fn windowed<'a>(
    times: &'a [f64],
    values: &'a [f64],
    window_fraction: f64,
) -> Result<(&'a [f64], &'a [f64])> {
    if times.len() != values.len() {
        return Err(Error::Fit("times and values differ in length".into()));
    }
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::Fit(format!(
            "window fraction must lie in (0, 1], got {window_fraction}"
        )));
    }
    let keep = ((times.len() as f64 * window_fraction).ceil() as usize).min(times.len());
    let start = times.len() - keep;
    let (t, v) = (&times[start..], &values[start..]);
    if t.len() < 8 {
        return Err(Error::Fit(format!("need at least 8 samples in window, have {}", t.len())));
    }
    if v.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::Fit("all values must be positive for a log fit".into()));
    }
    if t.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Fit("times must be strictly increasing".into()));
    }
    Ok((t, v))
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, rms)
}

/// Slope of log(values) against log(1+t) over the trailing window.
pub fn fit_power_law(times: &[f64], values: &[f64], window_fraction: f64) -> Result<RateFit> {
    let (t, v) = windowed(times, values, window_fraction)?;
    let xs: Vec<f64> = t.iter().map(|t| (1.0 + t).ln()).collect();
    let ys: Vec<f64> = v.iter().map(|v| v.ln()).collect();
    let (slope, intercept, rms) = least_squares(&xs, &ys);
    Ok(RateFit { exponent: slope, intercept, rms_residual: rms, window: (t[0], t[t.len() - 1]) })
}

/// Decay rate c = -slope of log(values) against t over the trailing window.
pub fn fit_exponential(times: &[f64], values: &[f64], window_fraction: f64) -> Result<RateFit> {
    let (t, v) = windowed(times, values, window_fraction)?;
    let ys: Vec<f64> = v.iter().map(|v| v.ln()).collect();
    let (slope, intercept, rms) = least_squares(t, &ys);
    Ok(RateFit {
        exponent: -slope,
        intercept,
        rms_residual: rms,
        window: (t[0], t[t.len() - 1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_rates_low_dimensions() {
        let r = theorem_rates(1, 0.0, 2.0).unwrap();
        assert_eq!(r.alpha_u0, 1.0);
        assert_eq!(r.alpha_u1, 1.5);
        assert_eq!(r.beta_u0, 0.5);
        assert_eq!(r.beta_u1, 1.0);
        let r2 = theorem_rates(2, 0.0, 2.0).unwrap();
        assert_eq!(r2.alpha_u0, 1.5);
        assert_eq!(r2.alpha_u1, 2.0);
    }

    #[test]
    fn theorem_rates_at_a_two_sigma() {
        let sigma = 1.7;
        let r = theorem_rates(1, 2.0 * sigma, sigma).unwrap();
        assert!((r.alpha_u0 - 0.0).abs() < 1e-15);
        assert!((r.alpha_u1 - 0.5).abs() < 1e-15);
        assert_eq!(r.sob_u_data, (2.0 * sigma, sigma));
        assert_eq!(r.sob_ut_data, (3.0 * sigma, 3.0 * sigma));
    }

    #[test]
    fn theorem_rate_identities() {
        for n in 1..=5 {
            for a in [0.0, 0.7, 3.0] {
                for sigma in [1.25, 2.0, 4.0] {
                    let r = theorem_rates(n, a, sigma).unwrap();
                    assert!((r.alpha_u1 - r.alpha_u0 - 0.5).abs() < 1e-15);
                    assert!((r.beta_u1 - r.beta_u0 - 0.5).abs() < 1e-15);
                    // monotone shift in a
                    let delta = 0.3;
                    let r2 = theorem_rates(n, a + delta, sigma).unwrap();
                    assert!(
                        (r2.alpha_u0 - (r.alpha_u0 - delta / (2.0 * sigma))).abs() < 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn power_law_recovers_synthetic_exponent() {
        let times: Vec<f64> = (0..50).map(|i| 1.0 + i as f64 * 2.0).collect();
        let values: Vec<f64> = times.iter().map(|t| (1.0 + t).powf(1.5)).collect();
        let fit = fit_power_law(&times, &values, 0.5).unwrap();
        assert!((fit.exponent - 1.5).abs() <= 1e-9);
        assert!(fit.rms_residual <= 1e-12);
    }

    #[test]
    fn power_law_constant_series() {
        let times: Vec<f64> = (0..20).map(|i| 1.0 + i as f64).collect();
        let values = vec![3.7; 20];
        let fit = fit_power_law(&times, &values, 1.0).unwrap();
        assert!(fit.exponent.abs() <= 1e-12);
    }

    #[test]
    fn power_law_with_bounded_oscillation() {
        // (1+t)^1.5 (2 + sin t) on the default log-spaced grid: the bounded
        // oscillation averages out and the slope lands within 0.1.
        let times = crate::oracle::log_grid(1.0, 100.0, 48);
        let values: Vec<f64> =
            times.iter().map(|t| (1.0 + t).powf(1.5) * (2.0 + t.sin())).collect();
        let fit = fit_power_law(&times, &values, 0.5).unwrap();
        assert!((fit.exponent - 1.5).abs() <= 0.1, "exponent {}", fit.exponent);
    }

    #[test]
    fn exponential_recovers_rate() {
        let times: Vec<f64> = (0..40).map(|i| 0.5 * i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| (-0.3 * t).exp()).collect();
        let fit = fit_exponential(&times, &values, 0.5).unwrap();
        assert!((fit.exponent - 0.3).abs() <= 1e-9);
    }

    #[test]
    fn exponential_with_polynomial_correction() {
        // e^-t (1+t) over [5, 20]: rate pulled slightly below 1.
        let times: Vec<f64> = (0..31).map(|i| 5.0 + 0.5 * i as f64).collect();
        let values: Vec<f64> = times.iter().map(|t| (-t).exp() * (1.0 + t)).collect();
        let fit = fit_exponential(&times, &values, 1.0).unwrap();
        assert!((0.8..=1.0).contains(&fit.exponent), "rate {}", fit.exponent);
    }

    #[test]
    fn exponential_constant_is_zero_rate() {
        let times: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let values = vec![5.0; 20];
        let fit = fit_exponential(&times, &values, 1.0).unwrap();
        assert!(fit.exponent.abs() <= 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        let times: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let mut values = vec![1.0; 20];
        values[3] = 0.0;
        assert!(fit_power_law(&times, &values, 1.0).is_err());
        let short: Vec<f64> = (0..5).map(|i| i as f64).collect();
        assert!(fit_power_law(&short, &vec![1.0; 5], 1.0).is_err());
        assert!(fit_power_law(&times, &vec![1.0; 20], 0.0).is_err());
    }

    #[test]
    fn fits_robust_to_small_noise() {
        // +-1% multiplicative noise moves the exponent by well under 0.05.
        let times: Vec<f64> = (0..60).map(|i| 1.0 + i as f64).collect();
        let values: Vec<f64> = times
            .iter()
            .enumerate()
            .map(|(i, t)| (1.0 + t).powf(1.2) * (1.0 + 0.01 * ((i * 2654435761) % 200) as f64 / 100.0 - 0.01))
            .collect();
        let fit = fit_power_law(&times, &values, 0.5).unwrap();
        assert!((fit.exponent - 1.2).abs() <= 0.05, "exponent {}", fit.exponent);
    }
}
