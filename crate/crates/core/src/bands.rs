//! Smooth three-band partition of unity chi_1 + chi_2 + chi_3 = 1 on frequency
//! moduli, with the plateau/support radii 4^(-1/sigma), 3^(-1/sigma),
//! 3^(1/sigma), 4^(1/sigma). The interpolant is the canonical exp(-1/s) ramp,
//! so every derivative vanishes at the plateau junctions.

use crate::error::{Error, Result};

/// The four transition radii; 0 < r1 < r2 < 1 < r3 < r4 for every sigma > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandThresholds {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

impl BandThresholds {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 1.0) {
            return Err(Error::Domain(format!("sigma must exceed 1, got {sigma}")));
        }
        Ok(Self {
            r1: 4.0_f64.powf(-1.0 / sigma),
            r2: 3.0_f64.powf(-1.0 / sigma),
            r3: 3.0_f64.powf(1.0 / sigma),
            r4: 4.0_f64.powf(1.0 / sigma),
        })
    }
}

/// Frequency-band selector for evolution and kernel studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    All,
    One,
    Two,
    Three,
}

impl Band {
    pub fn label(&self) -> &'static str {
        match self {
            Band::All => "all",
            Band::One => "1",
            Band::Two => "2",
            Band::Three => "3",
        }
    }

    /// chi_band(rho); Band::All is the constant 1.
    pub fn weight(&self, rho: f64, sigma: f64) -> f64 {
        match self {
            Band::All => 1.0,
            Band::One => chi(1, rho, sigma).expect("band index 1 is valid"),
            Band::Two => chi(2, rho, sigma).expect("band index 2 is valid"),
            Band::Three => chi(3, rho, sigma).expect("band index 3 is valid"),
        }
    }
}

fn bump(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// C-infinity monotone ramp: 1 for s <= 0, 0 for s >= 1, built from
/// g(s) = exp(-1/s) as g(1-s) / (g(1-s) + g(s)).
pub fn transition(s: f64) -> f64 {
    if s <= 0.0 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let up = bump(1.0 - s);
    up / (up + bump(s))
}

/// Band cutoff chi_k(rho) for k in {1, 2, 3}.
///
/// chi_1 ramps down on [r1, r2], chi_3 ramps up on [r3, r4], and
/// chi_2 := 1 - chi_1 - chi_3, so the three always sum to 1 exactly.
pub fn chi(k: u8, rho: f64, sigma: f64) -> Result<f64> {
    let th = BandThresholds::new(sigma)?;
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("rho must be >= 0, got {rho}")));
    }
    let c1 = transition((rho - th.r1) / (th.r2 - th.r1));
    let c3 = transition((th.r4 - rho) / (th.r4 - th.r3));
    match k {
        1 => Ok(c1),
        3 => Ok(c3),
        2 => Ok(1.0 - c1 - c3),
        other => Err(Error::Domain(format!("invalid band index {other}, expected 1|2|3"))),
    }
}
