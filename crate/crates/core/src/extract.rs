//! Temporal-mode quadrature extraction, shot-noise calibration and the
//! mode-bandwidth scan.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::QuadratureSample;
use crate::numeric::mean_variance;
use crate::synth::mode::same_dt;
use crate::synth::{build_temporal_mode, TemporalMode, TimeTrace, TraceSet, VACUUM_VARIANCE};
use crate::tomography::{reconstruct_populations, wigner_origin, Estimator, TomographySettings};

/// Minimum number of vacuum traces accepted for calibration.
pub const MIN_CALIBRATION_TRACES: usize = 100;

fn check_grid(dt: f64, n_samples: usize, mode: &TemporalMode) -> Result<()> {
    if n_samples != mode.n_samples() {
        return Err(Error::Mismatch(format!(
            "trace has {n_samples} samples, mode has {}",
            mode.n_samples()
        )));
    }
    if !same_dt(dt, mode.dt()) {
        return Err(Error::Mismatch(format!("trace dt {dt} differs from mode dt {}", mode.dt())));
    }
    Ok(())
}

fn project<T: Copy + Into<f64>>(samples: &[T], mode: &TemporalMode) -> f64 {
    samples
        .iter()
        .zip(mode.samples())
        .map(|(&s, f)| s.into() * f)
        .sum::<f64>()
        * mode.dt()
}

/// `x = sum_k f_k s_k dt`, paired with the trace phase.
pub fn extract_quadrature(trace: &TimeTrace, mode: &TemporalMode) -> Result<QuadratureSample> {
    check_grid(trace.dt, trace.samples.len(), mode)?;
    Ok(QuadratureSample::new(project(&trace.samples, mode), trace.theta))
}

/// Extracts every trace of a set, in order.
pub fn extract_all(traces: &TraceSet, mode: &TemporalMode) -> Result<Vec<QuadratureSample>> {
    if traces.is_empty() {
        return Ok(Vec::new());
    }
    check_grid(traces.dt, traces.n_samples, mode)?;
    Ok(traces
        .data
        .par_chunks(traces.n_samples)
        .zip(traces.thetas.par_iter())
        .map(|(row, &theta)| QuadratureSample::new(project(row, mode), theta))
        .collect())
}

/// Factor that brings the vacuum matched-filter variance to 1/2.
pub fn calibrate_shot_noise(vacuum: &TraceSet, mode: &TemporalMode) -> Result<f64> {
    if vacuum.len() < MIN_CALIBRATION_TRACES {
        return Err(Error::TooFewTraces {
            needed: MIN_CALIBRATION_TRACES,
            got: vacuum.len(),
        });
    }
    let xs: Vec<f64> = extract_all(vacuum, mode)?.iter().map(|s| s.x).collect();
    let (_, var) = mean_variance(&xs);
    if !(var > 0.0) {
        return Err(Error::param("vacuum", "calibration traces have zero variance"));
    }
    Ok((VACUUM_VARIANCE / var).sqrt())
}

/// Multiplies extracted quadratures by a calibration factor.
pub fn apply_calibration(samples: &mut [QuadratureSample], scale: f64) {
    samples.iter_mut().for_each(|s| s.x *= scale);
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub gamma: f64,
    pub populations: Vec<f64>,
    pub rho11: f64,
    pub wigner_origin: f64,
    /// Shot-noise scale applied at this bandwidth, if a vacuum run was given.
    pub calibration: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaScan {
    /// Argmax of `rho_11`, ties toward the smaller bandwidth.
    pub gamma_star: f64,
    /// Argmin of `W(0,0)` on the same grid.
    pub gamma_wigner: f64,
    pub points: Vec<ScanPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSettings {
    pub tomography: TomographySettings,
    pub estimator: Estimator,
}

fn check_scan_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("gamma_grid", "empty grid"));
    }
    if grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::param("gamma_grid", "bandwidths must be positive and finite"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("gamma_grid", "grid must be strictly increasing"));
    }
    Ok(())
}

/// Builds a scan grid `start, start + step, ..., <= stop`.
pub fn gamma_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && stop >= start) {
        return Err(Error::param("gamma_grid", format!("bad range {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

/// Reconstructs the state for every mode bandwidth in `gamma_grid` and picks
/// the one with the largest single-photon weight. When `vacuum` is given, each
/// bandwidth is calibrated against it first.
pub fn scan_gamma(
    traces: &TraceSet,
    vacuum: Option<&TraceSet>,
    gamma_grid: &[f64],
    settings: &ScanSettings,
) -> Result<GammaScan> {
    check_scan_grid(gamma_grid)?;
    let points: Vec<ScanPoint> = gamma_grid
        .par_iter()
        .map(|&gamma| -> Result<ScanPoint> {
            let mode = build_temporal_mode(gamma, traces.dt, traces.n_samples)?;
            let mut samples = extract_all(traces, &mode)?;
            let scale = match vacuum {
                Some(vac) => {
                    let scale = calibrate_shot_noise(vac, &mode)?;
                    apply_calibration(&mut samples, scale);
                    Some(scale)
                }
                None => None,
            };
            let populations = reconstruct_populations(&samples, &settings.tomography, settings.estimator)?;
            Ok(ScanPoint {
                gamma,
                rho11: populations.get(1).copied().unwrap_or(0.0),
                wigner_origin: wigner_origin(&populations),
                populations,
                calibration: scale,
            })
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    let mut most_negative = 0;
    for (k, p) in points.iter().enumerate() {
        if p.rho11 > points[best].rho11 {
            best = k;
        }
        if p.wigner_origin < points[most_negative].wigner_origin {
            most_negative = k;
        }
    }
    Ok(GammaScan {
        gamma_star: points[best].gamma,
        gamma_wigner: points[most_negative].gamma,
        points,
    })
}
