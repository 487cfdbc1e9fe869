//! Periodic discretization of R^n (n <= 3) on the box [-L, L)^n with the
//! continuum Fourier convention
//!
//! ```text
//! u-hat(xi) = int u(x) e^(-i x.xi) dx,    u(x) = (2 pi)^(-n) int u-hat e^(i x.xi) dxi,
//! ```
//!
//! realized as Riemann sums on the lattice xi_k = (pi/L) k, k in [-N/2, N/2)^n.
//! With this scaling `inverse(forward(u)) == u` holds to rounding, Parseval
//! takes the form dx^n sum|u|^2 = (2 pi)^(-n) (pi/L)^n sum|u-hat|^2, and kernel
//! L1 norms are directly comparable to continuum operator norms.
//!
//! All norm reductions use a fixed-shape pairwise tree, so results are
//! bit-identical regardless of thread count.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

/// Torus discretization: n axes, N points per axis (power of two), box [-L, L)^n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub points_per_axis: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(n: usize, points_per_axis: usize, half_width: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Domain(format!("dimension must be 1, 2 or 3, got {n}")));
        }
        if points_per_axis < 16 || !points_per_axis.is_power_of_two() {
            return Err(Error::Domain(format!(
                "points per axis must be a power of two >= 16, got {points_per_axis}"
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Domain(format!("half width must be positive, got {half_width}")));
        }
        Ok(Self { n, points_per_axis, half_width })
    }

    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    /// Grid spacing dx = 2L/N.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Volume element dx^n.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.n as i32)
    }

    /// Frequency lattice spacing pi/L.
    pub fn dxi(&self) -> f64 {
        std::f64::consts::PI / self.half_width
    }

    /// Physical coordinate of an axis index: x = -L + i dx.
    pub fn coordinate(&self, axis_index: usize) -> f64 {
        -self.half_width + axis_index as f64 * self.dx()
    }

    /// Signed lattice integer of an axis index: 0..N/2 then -N/2..-1.
    pub fn signed_wavenumber(&self, axis_index: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let i = axis_index as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Integer squared norm sum k_d^2 of the flat index's lattice vector.
    fn squared_wavenumber(&self, flat: usize) -> u64 {
        let n_axis = self.points_per_axis;
        let mut rem = flat;
        let mut acc: u64 = 0;
        for _ in 0..self.n {
            let k = self.signed_wavenumber(rem % n_axis);
            acc += (k * k) as u64;
            rem /= n_axis;
        }
        acc
    }

    /// Frequency modulus |xi| of a flat index.
    pub fn rho(&self, flat: usize) -> f64 {
        self.dxi() * (self.squared_wavenumber(flat) as f64).sqrt()
    }

    /// Parity of the sum of axis indices: the (-1)^(sum k) phase linking the
    /// DFT to the centered Riemann sum.
    fn index_parity(&self, flat: usize) -> bool {
        let n_axis = self.points_per_axis;
        let mut rem = flat;
        let mut parity = 0usize;
        for _ in 0..self.n {
            parity ^= rem % n_axis & 1;
            rem /= n_axis;
        }
        parity == 1
    }
}

/// Samples of a real-valued function on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub spec: GridSpec,
    pub samples: Vec<f64>,
}

impl RealField {
    pub fn new(spec: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != spec.total_points() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                spec.total_points(),
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("real field contains non-finite samples".into()));
        }
        Ok(Self { spec, samples })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, samples: vec![0.0; spec.total_points()] }
    }

    /// Sample a function of the physical coordinates.
    pub fn from_fn(spec: GridSpec, f: impl Fn(&[f64]) -> f64 + Sync) -> Self {
        let n_axis = spec.points_per_axis;
        let samples = (0..spec.total_points())
            .into_par_iter()
            .map(|flat| {
                let mut x = [0.0; 3];
                let mut rem = flat;
                for d in 0..spec.n {
                    // row-major: last axis has stride 1
                    x[spec.n - 1 - d] = spec.coordinate(rem % n_axis);
                    rem /= n_axis;
                }
                f(&x[..spec.n])
            })
            .collect();
        Self { spec, samples }
    }
}

/// Fourier coefficients on the frequency lattice, stored in FFT index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub spec: GridSpec,
    pub coefficients: Vec<Complex64>,
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    }
}

/// Unnormalized FFT along every axis of the row-major buffer.
fn fft_all_axes(spec: &GridSpec, data: &mut [Complex64], forward: bool) {
    let n_axis = spec.points_per_axis;
    let fft = plan(n_axis, forward);
    let mut stride = 1usize;
    for _ in 0..spec.n {
        let block = n_axis * stride;
        if stride == 1 {
            data.par_chunks_exact_mut(block).for_each_init(
                || vec![Complex64::default(); fft.get_inplace_scratch_len()],
                |scratch, line| fft.process_with_scratch(line, scratch),
            );
        } else {
            data.par_chunks_exact_mut(block).for_each_init(
                || {
                    (
                        vec![Complex64::default(); n_axis],
                        vec![Complex64::default(); fft.get_inplace_scratch_len()],
                    )
                },
                |(line, scratch), chunk| {
                    for inner in 0..stride {
                        for (j, v) in line.iter_mut().enumerate() {
                            *v = chunk[j * stride + inner];
                        }
                        fft.process_with_scratch(line, scratch);
                        for (j, v) in line.iter().enumerate() {
                            chunk[j * stride + inner] = *v;
                        }
                    }
                },
            );
        }
        stride *= n_axis;
    }
}

/// Forward transform: Riemann-sum approximation of the continuum Fourier
/// transform on the lattice.
pub fn forward(field: &RealField) -> SpectralField {
    let spec = field.spec;
    let mut data: Vec<Complex64> =
        field.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_all_axes(&spec, &mut data, true);
    let scale = spec.cell_volume();
    data.par_iter_mut().enumerate().for_each(|(i, c)| {
        let s = if spec.index_parity(i) { -scale } else { scale };
        *c *= s;
    });
    SpectralField { spec, coefficients: data }
}

/// Inverse transform back to a real field; the imaginary residual is dropped.
pub fn inverse(field: &SpectralField) -> RealField {
    let spec = field.spec;
    let mut data = field.coefficients.clone();
    data.par_iter_mut().enumerate().for_each(|(i, c)| {
        if spec.index_parity(i) {
            *c = -*c;
        }
    });
    fft_all_axes(&spec, &mut data, false);
    let scale = (2.0 * spec.half_width).powi(-(spec.n as i32));
    let samples = data.par_iter().map(|c| c.re * scale).collect();
    RealField { spec, samples }
}

/// Largest |Im| left behind by `inverse`; a conjugate-symmetry diagnostic.
pub fn inverse_imag_residual(field: &SpectralField) -> f64 {
    let spec = field.spec;
    let mut data = field.coefficients.clone();
    data.par_iter_mut().enumerate().for_each(|(i, c)| {
        if spec.index_parity(i) {
            *c = -*c;
        }
    });
    fft_all_axes(&spec, &mut data, false);
    let scale = (2.0 * spec.half_width).powi(-(spec.n as i32));
    data.iter().map(|c| (c.im * scale).abs()).fold(0.0, f64::max)
}

/// Evaluate a radial function once per distinct lattice modulus.
///
/// Returns one value per flat index; the function may fail (and names the
/// offending rho via its own error).
pub fn radial_table<T: Copy>(
    spec: &GridSpec,
    f: impl Fn(f64) -> Result<T>,
) -> Result<Vec<T>> {
    let mut cache: HashMap<u64, T> = HashMap::new();
    let mut out = Vec::with_capacity(spec.total_points());
    for flat in 0..spec.total_points() {
        let s = spec.squared_wavenumber(flat);
        let v = match cache.get(&s) {
            Some(v) => *v,
            None => {
                let rho = spec.dxi() * (s as f64).sqrt();
                let v = f(rho)?;
                cache.insert(s, v);
                v
            }
        };
        out.push(v);
    }
    Ok(out)
}

/// Coefficient-wise product with a radial multiplier m(|xi|).
pub fn apply_radial_multiplier(
    field: &SpectralField,
    m: impl Fn(f64) -> f64,
) -> Result<SpectralField> {
    let table = radial_table(&field.spec, |rho| {
        let v = m(rho);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "radial multiplier produced a non-finite value at rho = {rho}"
            )))
        }
    })?;
    let coefficients = field
        .coefficients
        .iter()
        .zip(table.iter())
        .map(|(c, &v)| c * v)
        .collect();
    Ok(SpectralField { spec: field.spec, coefficients })
}

/// Riesz weight rho^a, with 0^a := 0 for a > 0 and 0^0 := 1.
pub fn riesz(a: f64) -> Result<impl Fn(f64) -> f64 + Copy + Send + Sync> {
    if !(a >= 0.0) {
        return Err(Error::Domain(format!("riesz order must be >= 0, got {a}")));
    }
    Ok(move |rho: f64| {
        if rho == 0.0 {
            if a == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            rho.powf(a)
        }
    })
}

/// Bessel weight (1 + rho^2)^(a/2).
pub fn bessel(a: f64) -> Result<impl Fn(f64) -> f64 + Copy + Send + Sync> {
    if !(a >= 0.0) {
        return Err(Error::Domain(format!("bessel order must be >= 0, got {a}")));
    }
    Ok(move |rho: f64| (1.0 + rho * rho).powf(a / 2.0))
}

/// Fixed-shape pairwise sum: bit-reproducible for a given slice length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const SEQ: usize = 128;
    const PAR_MIN: usize = 1 << 16;
    if values.len() <= SEQ {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    let (lo, hi) = values.split_at(mid);
    if values.len() >= PAR_MIN {
        let (a, b) = rayon::join(|| pairwise_sum(lo), || pairwise_sum(hi));
        a + b
    } else {
        pairwise_sum(lo) + pairwise_sum(hi)
    }
}

fn pairwise_map_sum(values: &[f64], f: impl Fn(usize, f64) -> f64 + Copy + Sync) -> f64 {
    // Same tree as pairwise_sum, with a per-element map that sees the global index.
    fn go(values: &[f64], offset: usize, f: impl Fn(usize, f64) -> f64 + Copy + Sync) -> f64 {
        const SEQ: usize = 128;
        const PAR_MIN: usize = 1 << 16;
        if values.len() <= SEQ {
            return values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(offset + i, v))
                .sum();
        }
        let mid = values.len() / 2;
        let (lo, hi) = values.split_at(mid);
        if values.len() >= PAR_MIN {
            let (a, b) = rayon::join(|| go(lo, offset, f), || go(hi, offset + mid, f));
            a + b
        } else {
            go(lo, offset, f) + go(hi, offset + mid, f)
        }
    }
    go(values, 0, f)
}

/// L1 norm: dx^n sum |u|, pairwise-reduced.
pub fn l1_norm(field: &RealField) -> f64 {
    field.spec.cell_volume() * pairwise_map_sum(&field.samples, |_, v| v.abs())
}

/// Fraction of the L1 mass carried by points within shell_fraction * L of the
/// box boundary (sup-norm distance). A truncation-validity monitor.
pub fn boundary_mass(field: &RealField, shell_fraction: f64) -> Result<f64> {
    if !(shell_fraction > 0.0 && shell_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "shell fraction must lie in (0,1), got {shell_fraction}"
        )));
    }
    let spec = field.spec;
    let n_axis = spec.points_per_axis;
    let cut = spec.half_width * (1.0 - shell_fraction);
    let in_shell = move |flat: usize| -> bool {
        let mut rem = flat;
        for _ in 0..spec.n {
            let x = spec.coordinate(rem % n_axis);
            if x.abs() >= cut {
                return true;
            }
            rem /= n_axis;
        }
        false
    };
    let total = pairwise_map_sum(&field.samples, |_, v| v.abs());
    if total == 0.0 {
        return Ok(0.0);
    }
    let shell = pairwise_map_sum(&field.samples, move |i, v| {
        if in_shell(i) {
            v.abs()
        } else {
            0.0
        }
    });
    Ok(shell / total)
}

/// CSV snapshot: one row per grid point, x-coordinates then the value,
/// row-major order, 17 significant digits.
pub fn write_csv(field: &RealField, out: &mut dyn Write) -> Result<()> {
    let spec = field.spec;
    let n_axis = spec.points_per_axis;
    let header: &str = match spec.n {
        1 => "x,value",
        2 => "x,y,value",
        _ => "x,y,z,value",
    };
    writeln!(out, "{header}")?;
    let mut coords = vec![0.0; spec.n];
    for (flat, v) in field.samples.iter().enumerate() {
        let mut rem = flat;
        for d in (0..spec.n).rev() {
            coords[d] = spec.coordinate(rem % n_axis);
            rem /= n_axis;
        }
        for c in &coords {
            write!(out, "{c:.16e},")?;
        }
        writeln!(out, "{v:.16e}")?;
    }
    Ok(())
}
