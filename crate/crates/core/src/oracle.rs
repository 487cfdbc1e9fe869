//! Independent brute-force references used to validate the closed forms:
//! classical RK4 on the mode ODE y'' + M y' + M y = 0 and adaptive Simpson
//! quadrature for the shift function phi. Nothing in here is ever used on the
//! measurement path; it exists to be disagreed with.

use crate::error::{Error, Result};
use crate::symbols::{self, ModeStrength};

/// State (y, v) = (u-hat, d/dt u-hat) of one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub y: f64,
    pub v: f64,
}

/// Classical 4th-order Runge-Kutta integration of the mode ODE.
///
/// The step size is capped at min(0.1, 1/M) regardless of the requested step
/// count, so stiff large-band modes stay inside the stability region.
pub fn rk4_mode(m: f64, t_end: f64, steps: usize, y0: f64, v0: f64) -> Result<ModeState> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::Domain(format!("rk4_mode requires M >= 0, got {m}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!("rk4_mode requires t >= 0, got {t_end}")));
    }
    if t_end == 0.0 {
        return Ok(ModeState { y: y0, v: v0 });
    }
    let cap = if m > 0.0 { (1.0 / m).min(0.1) } else { 0.1 };
    let needed = (t_end / cap).ceil() as usize;
    let steps = steps.max(16).max(needed);
    let h = t_end / steps as f64;

    let f = |y: f64, v: f64| (v, -m * (v + y));
    let (mut y, mut v) = (y0, v0);
    for _ in 0..steps {
        let (k1y, k1v) = f(y, v);
        let (k2y, k2v) = f(y + 0.5 * h * k1y, v + 0.5 * h * k1v);
        let (k3y, k3v) = f(y + 0.5 * h * k2y, v + 0.5 * h * k2v);
        let (k4y, k4v) = f(y + h * k3y, v + h * k3v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if !y.is_finite() || !v.is_finite() {
            return Err(Error::Numerical(format!(
                "rk4_mode overflow at M={m}, t_end={t_end}"
            )));
        }
    }
    Ok(ModeState { y, v })
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let fc = f(c);
    (c, fc, (b - a) / 6.0 * (fa + 4.0 * fc + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let (ml, fml, left) = simpson(f, a, fa, m, fm);
    let (mr, fmr, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps || depth >= 40 {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, fa, ml, fml, m, fm, left, eps / 2.0, depth + 1)
            + adaptive(f, m, fm, mr, fmr, b, fb, right, eps / 2.0, depth + 1)
    }
}

/// phi(M) by adaptive Simpson quadrature of -1 + int_0^1 (1 - 4s/M)^(-1/2) ds.
///
/// The integrand is smooth on [0, 1] whenever M > 4 (then 4/M < 1).
pub fn phi_quadrature(m: f64, tol: f64) -> Result<f64> {
    if !(m > 4.0) {
        return Err(Error::Domain(format!("phi_quadrature requires M > 4, got {m}")));
    }
    if !(tol >= 1e-12) {
        return Err(Error::Domain(format!("tolerance must be >= 1e-12, got {tol}")));
    }
    let c = 4.0 / m;
    let f = move |s: f64| 1.0 / (1.0 - c * s).sqrt();
    let (a, b) = (0.0, 1.0);
    let (fa, fb) = (f(a), f(b));
    let (mid, fmid, whole) = simpson(&f, a, fa, b, fb);
    Ok(adaptive(&f, a, fa, mid, fmid, b, fb, whole, tol, 0) - 1.0)
}

/// Max relative disagreement between the closed-form kernel values and RK4,
/// over all (M, t) sample pairs and both canonical initial conditions.
///
/// The error at each sample is measured against the state norm |y| + |v| of
/// the closed form, which never vanishes, so the sweep stays meaningful at the
/// isolated zeros of the oscillatory kernels.
pub fn kernel_consistency_sweep(m_samples: &[f64], t_samples: &[f64]) -> Result<f64> {
    if m_samples.is_empty() || t_samples.is_empty() {
        return Err(Error::Domain("kernel_consistency_sweep needs nonempty samples".into()));
    }
    let mut worst = 0.0_f64;
    for &m in m_samples {
        for &t in t_samples {
            let kv = symbols::kernel_values(ModeStrength::new(m)?, t)?;
            // h M <= 0.05 keeps the fast transient accurate, not just stable
            let h = if m > 0.0 { (0.05 / m).min(0.005) } else { 0.005 };
            let steps = ((t / h).ceil() as usize).max(16);
            let from_u0 = rk4_mode(m, t, steps, 1.0, 0.0)?;
            let from_u1 = rk4_mode(m, t, steps, 0.0, 1.0)?;
            let scale0 = (kv.k0.abs() + kv.dt_k0.abs()).max(1e-300);
            let scale1 = (kv.k1.abs() + kv.dt_k1.abs()).max(1e-300);
            let e0 = (from_u0.y - kv.k0).abs().max((from_u0.v - kv.dt_k0).abs()) / scale0;
            let e1 = (from_u1.y - kv.k1).abs().max((from_u1.v - kv.dt_k1).abs()) / scale1;
            worst = worst.max(e0).max(e1);
        }
    }
    Ok(worst)
}

/// Log-spaced sample grid, endpoints included.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
