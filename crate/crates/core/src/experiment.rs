//! Experiment orchestration: build kernel fields or evolved solutions on a
//! time grid, record L1 norm series, fit rates, compare against the predicted
//! exponents, and persist one CSV per record plus a JSON report.
//!
//! Records run independently in parallel; the report is assembled in a fixed
//! order and floats are written with 17 significant digits, so reruns are
//! byte-identical regardless of thread count.

use crate::audit::{audit_symbol_bound, AuditRequest, BoundId, BoundReport};
use crate::bands::Band;
use crate::config::{DataKind, DataWhich, ExperimentConfig};
use crate::error::{Error, Result};
use crate::evolve::{self, kernel_data_order};
use crate::grid::{self, GridSpec, RealField};
use crate::rates::{self, RateFit};
use crate::symbols::SigmaParams;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Shell fraction used by the torus-truncation monitor.
pub const MONITOR_SHELL_FRACTION: f64 = 0.05;
/// Solution runs abort when the monitor exceeds this.
pub const MONITOR_ABORT_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyMode {
    /// Evolve the configured data and record solution norms (j = 0: u, j = 1: u_t).
    Simulate,
    /// Record kernel-field operator norms for all four (i, j) multipliers.
    KernelNorms,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecordReport {
    pub study: &'static str,
    pub a: f64,
    pub band: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    pub j: usize,
    pub bessel_order: f64,
    pub csv: String,
    pub fit_kind: &'static str,
    pub fit: RateFit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical_exponent: Option<f64>,
    pub margin: f64,
    pub pass: bool,
    pub boundary_mass_max: f64,
    #[serde(skip)]
    pub series: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvironmentBlock {
    pub sigma: f64,
    pub dim: usize,
    #[serde(rename = "N")]
    pub points_per_axis: usize,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub boundary_mass_max: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub environment: EnvironmentBlock,
    pub records: Vec<RecordReport>,
    pub pass: bool,
}

/// Initial data sampled from the configured profile. Multi-dimensional
/// profiles are radial around the (center, 0, ..) point.
pub fn initial_data(cfg: &ExperimentConfig, spec: GridSpec) -> (RealField, RealField) {
    let w = cfg.data.width;
    let c = cfg.data.center;
    let kind = cfg.data.kind;
    let shape = move |x: &[f64], shift: f64| {
        let mut r2 = (x[0] - shift) * (x[0] - shift);
        for v in &x[1..] {
            r2 += v * v;
        }
        (-r2 / (2.0 * w * w)).exp()
    };
    let profile = move |x: &[f64]| match kind {
        DataKind::Gaussian => shape(x, c),
        DataKind::GaussianDerivative => -(x[0] - c) / (w * w) * shape(x, c),
        DataKind::SumOfGaussians => shape(x, c) + 0.5 * shape(x, -c),
    };
    let field = RealField::from_fn(spec, profile);
    match cfg.data.which {
        DataWhich::U0 => (field, RealField::zeros(spec)),
        DataWhich::U1 => (RealField::zeros(spec), field),
        DataWhich::Both => (field.clone(), field),
    }
}

fn growth_band(band: Band) -> bool {
    matches!(band, Band::All | Band::One)
}

/// Predicted growth exponent of the (i, j) kernel norm on the small band.
pub fn kernel_growth_exponent(n: usize, a: f64, sigma: f64, i: usize, j: usize) -> Result<f64> {
    let r = rates::theorem_rates(n, a, sigma)?;
    Ok(match (i, j) {
        (0, 0) => r.alpha_u0,
        (1, 0) => r.alpha_u1,
        (0, 1) => r.beta_u0,
        _ => r.beta_u1,
    })
}

/// Predicted growth exponent of a solution norm, combining the data factors
/// that are actually present.
pub fn solution_growth_exponent(
    n: usize,
    a: f64,
    sigma: f64,
    j: usize,
    which: DataWhich,
) -> Result<f64> {
    let r = rates::theorem_rates(n, a, sigma)?;
    let (from_u0, from_u1) = if j == 0 { (r.alpha_u0, r.alpha_u1) } else { (r.beta_u0, r.beta_u1) };
    Ok(match which {
        DataWhich::U0 => from_u0,
        DataWhich::U1 => from_u1,
        DataWhich::Both => from_u0.max(from_u1),
    })
}

fn finish_record(
    cfg: &ExperimentConfig,
    mut record: RecordReport,
    times: &[f64],
    values: &[f64],
    theoretical: Option<f64>,
) -> Result<RecordReport> {
    let growth = theoretical.is_some();
    let fit = if growth {
        rates::fit_power_law(times, values, cfg.fits.window_fraction)?
    } else {
        rates::fit_exponential(times, values, cfg.fits.window_fraction)?
    };
    record.fit = fit;
    record.fit_kind = if growth { "power_law" } else { "exponential" };
    record.theoretical_exponent = theoretical;
    match theoretical {
        Some(th) => {
            record.margin = th + cfg.fits.growth_tol - fit.exponent;
            record.pass = fit.exponent <= th + cfg.fits.growth_tol;
        }
        None => {
            record.margin = fit.exponent - cfg.fits.min_decay_rate;
            record.pass = fit.exponent >= cfg.fits.min_decay_rate;
        }
    }
    record.series = times.iter().copied().zip(values.iter().copied()).collect();
    Ok(record)
}

fn blank_record(study: &'static str, a: f64, band: Band, i: Option<usize>, j: usize) -> RecordReport {
    let csv = match i {
        Some(i) => format!("kernel_a{a}_band{}_i{i}_j{j}.csv", band.label()),
        None => format!("solution_a{a}_band{}_j{j}.csv", band.label()),
    };
    RecordReport {
        study,
        a,
        band: band.label().to_string(),
        i,
        j,
        bessel_order: 0.0,
        csv,
        fit_kind: "",
        fit: RateFit { exponent: 0.0, intercept: 0.0, rms_residual: 0.0, window: (0.0, 0.0) },
        theoretical_exponent: None,
        margin: 0.0,
        pass: false,
        boundary_mass_max: 0.0,
        series: Vec::new(),
    }
}

fn simulate_band(
    cfg: &ExperimentConfig,
    params: &SigmaParams,
    f0: &grid::SpectralField,
    f1: &grid::SpectralField,
    band: Band,
    times: &[f64],
) -> Result<(Vec<RecordReport>, f64)> {
    let n_a = cfg.a_list.len();
    let mut norms = vec![vec![0.0; times.len()]; n_a * 2];
    let mut bms = vec![vec![0.0; times.len()]; 2];
    let mut monitor_max = 0.0_f64;
    for (ti, &t) in times.iter().enumerate() {
        let (u_hat, ut_hat) = evolve::evolve_spectral(params, f0, f1, t, band)?;
        for (j, hat) in [&u_hat, &ut_hat].into_iter().enumerate() {
            let plain = grid::inverse(hat);
            let bm = grid::boundary_mass(&plain, MONITOR_SHELL_FRACTION)?;
            bms[j][ti] = bm;
            monitor_max = monitor_max.max(bm);
            if bm > MONITOR_ABORT_THRESHOLD {
                return Err(Error::Numerical(format!(
                    "boundary mass {bm:.3e} exceeds {MONITOR_ABORT_THRESHOLD:.0e} at t={t} (band {}); enlarge L",
                    band.label()
                )));
            }
            for (ai, &a) in cfg.a_list.iter().enumerate() {
                let field = if a == 0.0 {
                    plain.clone()
                } else {
                    let riesz = grid::riesz(a)?;
                    grid::inverse(&grid::apply_radial_multiplier(hat, riesz)?)
                };
                norms[ai * 2 + j][ti] = grid::l1_norm(&field);
            }
        }
    }
    let mut out = Vec::new();
    for (ai, &a) in cfg.a_list.iter().enumerate() {
        for j in 0..2 {
            let mut rec = blank_record("solution", a, band, None, j);
            rec.boundary_mass_max =
                bms[j].iter().cloned().fold(0.0, f64::max);
            let theoretical = if growth_band(band) {
                Some(solution_growth_exponent(cfg.dim, a, cfg.sigma, j, cfg.data.which)?)
            } else {
                None
            };
            out.push(finish_record(cfg, rec, times, &norms[ai * 2 + j], theoretical)?);
        }
    }
    Ok((out, monitor_max))
}

fn kernel_record(
    cfg: &ExperimentConfig,
    params: &SigmaParams,
    spec: &GridSpec,
    band: Band,
    a: f64,
    i: usize,
    j: usize,
    times: &[f64],
) -> Result<RecordReport> {
    // Band-3 (and whole-space) kernels carry the Sobolev data weight so their
    // symbols stay bounded; bands 1-2 are measured plain.
    let bessel_order = match band {
        Band::Three | Band::All => kernel_data_order(i, j, a, cfg.sigma),
        _ => 0.0,
    };
    let mut values = Vec::with_capacity(times.len());
    let mut bm_max = 0.0_f64;
    for &t in times {
        let field = evolve::kernel_field(params, spec, i, j, a, band, t, bessel_order)?;
        values.push(grid::l1_norm(&field));
        bm_max = bm_max.max(grid::boundary_mass(&field, MONITOR_SHELL_FRACTION)?);
    }
    let mut rec = blank_record("kernel", a, band, Some(i), j);
    rec.bessel_order = bessel_order;
    rec.boundary_mass_max = bm_max;
    let theoretical = if growth_band(band) {
        Some(kernel_growth_exponent(cfg.dim, a, cfg.sigma, i, j)?)
    } else {
        None
    };
    finish_record(cfg, rec, times, &values, theoretical)
}

/// Run the configured study: one record per (a, band, j) for solutions, one
/// per (a, band, i, j) for kernel norms. Records run in parallel; the merge
/// order is fixed by the config.
pub fn run_experiment(cfg: &ExperimentConfig, mode: StudyMode) -> Result<ExperimentReport> {
    cfg.validate()?;
    let spec = GridSpec::new(cfg.dim, cfg.grid.points_per_axis, cfg.grid.half_width)?;
    let params = SigmaParams::new(cfg.sigma, cfg.dim, 0.0)?;
    let times = cfg.times.sample_times();

    let (records, monitor_max) = match mode {
        StudyMode::Simulate => {
            let (u0, u1) = initial_data(cfg, spec);
            let f0 = grid::forward(&u0);
            let f1 = grid::forward(&u1);
            let per_band: Vec<(Vec<RecordReport>, f64)> = cfg
                .bands
                .par_iter()
                .map(|b| simulate_band(cfg, &params, &f0, &f1, b.to_band(), &times))
                .collect::<Result<_>>()?;
            let monitor =
                per_band.iter().map(|(_, m)| *m).fold(0.0, f64::max);
            (per_band.into_iter().flat_map(|(r, _)| r).collect::<Vec<_>>(), monitor)
        }
        StudyMode::KernelNorms => {
            let mut keys = Vec::new();
            for b in &cfg.bands {
                for &a in &cfg.a_list {
                    for i in 0..2 {
                        for j in 0..2 {
                            keys.push((b.to_band(), a, i, j));
                        }
                    }
                }
            }
            let recs: Vec<RecordReport> = keys
                .par_iter()
                .map(|&(band, a, i, j)| kernel_record(cfg, &params, &spec, band, a, i, j, &times))
                .collect::<Result<_>>()?;
            let monitor = recs.iter().map(|r| r.boundary_mass_max).fold(0.0, f64::max);
            (recs, monitor)
        }
    };

    let pass = records.iter().all(|r| r.pass);
    Ok(ExperimentReport {
        config: cfg.clone(),
        environment: EnvironmentBlock {
            sigma: cfg.sigma,
            dim: cfg.dim,
            points_per_axis: cfg.grid.points_per_axis,
            half_width: cfg.grid.half_width,
            boundary_mass_max: monitor_max,
        },
        records,
        pass,
    })
}

/// The Lemma-style audit sweep: every bound family at the given sigma, the
/// B11 powers {-1, 1/2, 1}, j in {0,1}, b in {0, sigma}, radial derivative
/// orders up to `alpha_max`.
pub fn standard_audit_cases(sigma: f64, alpha_max: u32) -> Vec<AuditRequest> {
    let edge = 4.0_f64.powf(1.0 / sigma);
    let rho_range = (1.05 * edge * (1.0 + 1e-9), 1e3 * edge);
    let mut cases = Vec::new();
    let mut push = |bound, p: f64, j: u32, b: f64, alpha: u32| {
        let mut req = AuditRequest::new(bound, sigma);
        req.p = p;
        req.j = j;
        req.b = b;
        req.alpha = alpha;
        req.rho_range = rho_range;
        req.t_range = (0.5, 10.0);
        cases.push(req);
    };
    for alpha in 0..=alpha_max {
        for p in [-1.0, 0.5, 1.0] {
            push(BoundId::B11, p, 0, 0.0, alpha);
        }
        push(BoundId::B3, 1.0, 0, 0.0, alpha);
        for bound in [BoundId::B14, BoundId::B15, BoundId::B16, BoundId::B17] {
            for j in 0..=1 {
                for b in [0.0, sigma] {
                    push(bound, 1.0, j, b, alpha);
                }
            }
        }
    }
    cases
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditRecord {
    pub bound: BoundId,
    pub sigma: f64,
    pub p: f64,
    pub j: u32,
    pub b: f64,
    pub alpha: u32,
    pub sup_ratio: f64,
    pub argmax_rho: f64,
    pub argmax_t: f64,
    pub samples_count: usize,
    pub decade_sups: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditRunReport {
    pub config: ExperimentConfig,
    pub audits: Vec<AuditRecord>,
    pub pass: bool,
}

/// Run the standard audit sweep for the configured sigma.
pub fn run_audits(cfg: &ExperimentConfig) -> Result<AuditRunReport> {
    cfg.validate()?;
    let cases = standard_audit_cases(cfg.sigma, 2);
    let reports: Vec<(AuditRequest, BoundReport)> = cases
        .par_iter()
        .map(|req| audit_symbol_bound(req).map(|rep| (*req, rep)))
        .collect::<Result<_>>()?;
    let audits: Vec<AuditRecord> = reports
        .into_iter()
        .map(|(req, rep)| {
            let pass = rep.sup_ratio.is_finite() && rep.decade_stable(10.0);
            AuditRecord {
                bound: req.bound,
                sigma: req.sigma,
                p: req.p,
                j: req.j,
                b: req.b,
                alpha: req.alpha,
                sup_ratio: rep.sup_ratio,
                argmax_rho: rep.argmax_rho,
                argmax_t: rep.argmax_t,
                samples_count: rep.samples_count,
                decade_sups: rep.decade_sups,
                pass,
            }
        })
        .collect();
    let pass = audits.iter().all(|a| a.pass);
    Ok(AuditRunReport { config: cfg.clone(), audits, pass })
}

struct SciFloats;

impl serde_json::ser::Formatter for SciFloats {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with every f64 printed at 17 significant digits, so identical
/// runs produce identical bytes.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Numerical(format!("report serialization failed: {e}")))?;
    buf.push(b'\n');
    Ok(buf)
}

/// Write one CSV per record (schema `t,norm`) plus `<name>.json` into `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    for rec in &report.records {
        let mut f = std::fs::File::create(dir.join(&rec.csv))?;
        writeln!(f, "t,norm")?;
        for (t, v) in &rec.series {
            writeln!(f, "{t:.16e},{v:.16e}")?;
        }
    }
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, to_json_bytes(report)?)?;
    Ok(path)
}

/// Write the audit report JSON into `dir`.
pub fn write_audit_report(report: &AuditRunReport, dir: &Path, name: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, to_json_bytes(report)?)?;
    Ok(path)
}
