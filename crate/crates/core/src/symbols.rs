//! Characteristic roots and solution multipliers of the Fourier-mode ODE
//!
//! ```text
//! y'' + M y' + M y = 0,     M = |xi|^(2 sigma),
//! ```
//!
//! which governs each frequency mode of u_tt + (-Delta)^sigma u + (-Delta)^sigma u_t = 0.
//! Everything here is a pure function of the mode strength M and time t. The
//! confluent point M = 4 (double root) is handled by divided-difference forms
//! built on sinh(z)/z, so no code path ever divides by lambda1 - lambda2.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Model parameters: exponent sigma > 1, spatial dimension n, derivative order a >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaParams {
    pub sigma: f64,
    pub n: usize,
    pub a: f64,
}

impl SigmaParams {
    pub fn new(sigma: f64, n: usize, a: f64) -> Result<Self> {
        if !(sigma > 1.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("sigma must exceed 1, got {sigma}")));
        }
        if n == 0 {
            return Err(Error::Domain("dimension n must be >= 1".into()));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("derivative order a must be >= 0, got {a}")));
        }
        Ok(Self { sigma, n, a })
    }

    /// Mode strength M = rho^(2 sigma) of a frequency modulus rho.
    pub fn mode_strength(&self, rho: f64) -> ModeStrength {
        ModeStrength(rho.powf(2.0 * self.sigma))
    }
}

/// The single scalar all symbols depend on: M = |xi|^(2 sigma) >= 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ModeStrength(pub f64);

impl ModeStrength {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("mode strength must be finite and >= 0, got {m}")));
        }
        Ok(Self(m))
    }
}

/// The two roots of lambda^2 + M lambda + M = 0.
///
/// `lambda1` carries the "+sqrt" branch: it is the slowly decaying root on the
/// large band (lambda1 -> -1 as M -> infinity) and the root with positive
/// imaginary part below the confluence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    /// D = M^2 - 4M.
    pub discriminant: f64,
}

/// Values of the solution multipliers at one (M, t).
///
/// K0, K1 solve the mode ODE with data (1, 0) and (0, 1); dtK0, dtK1 are their
/// time derivatives, satisfying dtK0 = -M K1 and dtK1 = K0 - M K1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub k0: f64,
    pub k1: f64,
    pub dt_k0: f64,
    pub dt_k1: f64,
}

/// Large-frequency split symbols: the four pieces the solution multipliers
/// decompose into when the roots are real and distinct (M > 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSymbols {
    /// lambda2 e^(lambda1 t) / (lambda1 - lambda2)
    pub s1_0: f64,
    /// lambda1 e^(lambda2 t) / (lambda1 - lambda2)
    pub s2_0: f64,
    /// e^(lambda1 t) / (lambda1 - lambda2)
    pub s1_1: f64,
    /// e^(lambda2 t) / (lambda1 - lambda2)
    pub s2_1: f64,
}

/// Characteristic roots lambda_{1,2} = (-M +- sqrt(M^2 - 4M)) / 2.
///
/// For M > 4 the fast root is computed directly and the slow one recovered
/// through Vieta (lambda1 lambda2 = M), which avoids the catastrophic
/// cancellation in -M + sqrt(M^2 - 4M) for large M.
pub fn char_roots(m: ModeStrength) -> Result<RootPair> {
    let m = m.0;
    if m < 0.0 {
        return Err(Error::Domain(format!("char_roots requires M >= 0, got {m}")));
    }
    let disc = m * m - 4.0 * m;
    if m == 0.0 {
        return Ok(RootPair {
            lambda1: Complex64::new(0.0, 0.0),
            lambda2: Complex64::new(0.0, 0.0),
            discriminant: disc,
        });
    }
    if m < 4.0 {
        let im = (m * (4.0 - m)).sqrt() / 2.0;
        let re = -m / 2.0;
        Ok(RootPair {
            lambda1: Complex64::new(re, im),
            lambda2: Complex64::new(re, -im),
            discriminant: disc,
        })
    } else {
        let root = disc.sqrt();
        let l2 = 0.5 * (-m - root);
        // Vieta: exact to relative rounding even when the direct formula cancels.
        let l1 = if l2 == 0.0 { 0.0 } else { m / l2 };
        Ok(RootPair {
            lambda1: Complex64::new(l1, 0.0),
            lambda2: Complex64::new(l2, 0.0),
            discriminant: disc,
        })
    }
}

/// Shift function phi with lambda1 = -1 - phi on the large band.
///
/// Closed form of the integral -1 + int_0^1 (1 - 4s/M)^(-1/2) ds, written as
/// (1 - q)/(1 + q) with q = sqrt(1 - 4/M) so that it stays accurate as M grows
/// (phi ~ 1/M). For 4/M below 1e-4 the series in c = 4/M is used instead:
/// rounding 1 - c before the square root would cap phi's relative accuracy at
/// eps/c, which the derivative audits can feel.
pub fn phi(m: ModeStrength) -> Result<f64> {
    let m = m.0;
    if m <= 4.0 {
        return Err(Error::Domain(format!("phi requires M > 4, got {m}")));
    }
    let c = 4.0 / m;
    if c <= 1e-4 {
        return Ok(c / 4.0 * (1.0 + c / 2.0 + 5.0 * c * c / 16.0));
    }
    let q = (1.0 - c).sqrt();
    Ok((1.0 - q) / (1.0 + q))
}

/// sinh-type divided difference S(w) = sinh(sqrt w)/sqrt w for w >= 0,
/// sin(sqrt -w)/sqrt(-w) for w < 0, with a shared Taylor series near 0.
/// Second return is the matching C(w) = cosh / cos.
fn sinch_cosh(w: f64) -> (f64, f64) {
    if w.abs() <= 1e-8 {
        // Both branches share the series in w; truncation error < 1e-16 here.
        let s = 1.0 + w / 6.0 + w * w / 120.0;
        let c = 1.0 + w / 2.0 + w * w / 24.0;
        (s, c)
    } else if w > 0.0 {
        let z = w.sqrt();
        (z.sinh() / z, z.cosh())
    } else {
        let z = (-w).sqrt();
        (z.sin() / z, z.cos())
    }
}

/// Solution multipliers K0, K1 and their time derivatives at one (M, t).
///
/// Uses K1 = e^(-Mt/2) t S(w), K0 = e^(-Mt/2)[C(w) + (Mt/2) S(w)] with
/// w = M(M-4)t^2/4, which is the quotient formula rewritten so that it is
/// continuous through the double root at M = 4. Far above the confluence
/// (sqrt w >= 30) the factored two-exponential forms are used instead, to keep
/// cosh from overflowing; they are algebraically identical there.
pub fn kernel_values(m: ModeStrength, t: f64) -> Result<KernelValues> {
    let m_val = m.0;
    if m_val < 0.0 {
        return Err(Error::Domain(format!("kernel_values requires M >= 0, got {m_val}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("kernel_values requires t >= 0, got {t}")));
    }
    let w = m_val * (m_val - 4.0) * t * t / 4.0;
    let kv = if w > 900.0 {
        // s = sqrt(w) >= 30: real, well-separated roots.
        let roots = char_roots(m)?;
        let (l1, l2) = (roots.lambda1.re, roots.lambda2.re);
        let delta = l1 - l2;
        let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
        KernelValues {
            k0: (l1 * e2 - l2 * e1) / delta,
            k1: (e1 - e2) / delta,
            dt_k0: -m_val * (e1 - e2) / delta,
            dt_k1: (l1 * e1 - l2 * e2) / delta,
        }
    } else {
        let (s, c) = sinch_cosh(w);
        let pre = (-m_val * t / 2.0).exp();
        let half_mt = m_val * t / 2.0;
        KernelValues {
            k0: pre * (c + half_mt * s),
            k1: pre * t * s,
            dt_k0: -m_val * pre * t * s,
            dt_k1: pre * (c - half_mt * s),
        }
    };
    if !(kv.k0.is_finite() && kv.k1.is_finite() && kv.dt_k0.is_finite() && kv.dt_k1.is_finite()) {
        return Err(Error::Numerical(format!(
            "kernel_values produced a non-finite value at M={m_val}, t={t}"
        )));
    }
    Ok(kv)
}

/// The four large-band split symbols at one (M, t); requires M > 4 so the
/// roots are real and distinct.
pub fn split_symbols(m: ModeStrength, t: f64) -> Result<SplitSymbols> {
    if m.0 <= 4.0 {
        return Err(Error::Domain(format!(
            "split_symbols is only defined on the large band M > 4, got {}",
            m.0
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("split_symbols requires t >= 0, got {t}")));
    }
    let roots = char_roots(m)?;
    let (l1, l2) = (roots.lambda1.re, roots.lambda2.re);
    let delta = l1 - l2;
    let (e1, e2) = ((l1 * t).exp(), (l2 * t).exp());
    Ok(SplitSymbols {
        s1_0: l2 * e1 / delta,
        s2_0: l1 * e2 / delta,
        s1_1: e1 / delta,
        s2_1: e2 / delta,
    })
}
