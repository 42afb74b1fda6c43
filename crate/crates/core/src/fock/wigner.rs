//! Wigner function on the Fock basis via generalized Laguerre polynomials.
//!
//! Convention: vacuum variance 1/2, so `W_{|n>}(x,p) = (-1)^n/pi e^{-r^2} L_n(2 r^2)`
//! and `|W| <= 1/pi` for every state.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::numeric::linspace;

/// `L_0^{(alpha)}(y), ..., L_{n_max}^{(alpha)}(y)`.
fn laguerre_table(n_max: usize, alpha: f64, y: f64) -> Vec<f64> {
    let mut l = vec![0.0; n_max + 1];
    l[0] = 1.0;
    if n_max >= 1 {
        l[1] = 1.0 + alpha - y;
    }
    for j in 1..n_max {
        let jf = j as f64;
        l[j + 1] = ((2.0 * jf + 1.0 + alpha - y) * l[j] - (jf + alpha) * l[j - 1]) / (jf + 1.0);
    }
    l
}

/// `W(x, p)`.
pub fn wigner(rho: &DensityMatrix, x: f64, p: f64) -> Result<f64> {
    rho.ensure_physical()?;
    Ok(wigner_unchecked(rho, x, p))
}

pub(crate) fn wigner_unchecked(rho: &DensityMatrix, x: f64, p: f64) -> f64 {
    let n_max = rho.n_max();
    let r2 = x * x + p * p;
    let gauss = (-r2).exp() / PI;
    // 2 alpha^* with alpha = (x + i p)/sqrt(2)
    let beta = Complex64::new(x, -p) * std::f64::consts::SQRT_2;
    let mut total = 0.0;
    let mut beta_pow = Complex64::new(1.0, 0.0);
    for d in 0..=n_max {
        let lag = laguerre_table(n_max - d, d as f64, 2.0 * r2);
        let mut acc = Complex64::new(0.0, 0.0);
        // ratio = sqrt(n!/(n+d)!), updated as n increases
        let mut ratio = (1..=d).map(|k| 1.0 / k as f64).product::<f64>().sqrt();
        for (n, &l) in lag.iter().enumerate().take(n_max - d + 1) {
            if n > 0 {
                ratio *= (n as f64 / (n + d) as f64).sqrt();
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += rho.element(n + d, n) * (sign * ratio * l);
        }
        let term = acc * beta_pow;
        total += if d == 0 { term.re } else { 2.0 * term.re };
        beta_pow *= beta;
    }
    total * gauss
}

/// Wigner function sampled on a rectangular phase-space grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// `values[i][j] = W(x_axis[i], p_axis[j])`.
    pub values: Vec<Vec<f64>>,
}

pub fn wigner_grid(
    rho: &DensityMatrix,
    x_range: (f64, f64),
    p_range: (f64, f64),
    resolution: usize,
) -> Result<WignerGrid> {
    rho.ensure_physical()?;
    for (name, (lo, hi)) in [("x_range", x_range), ("p_range", p_range)] {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::param(name, format!("empty range [{lo}, {hi}]")));
        }
    }
    if resolution < 2 {
        return Err(Error::param("resolution", "need at least 2 points per axis"));
    }
    let x_axis = linspace(x_range.0, x_range.1, resolution);
    let p_axis = linspace(p_range.0, p_range.1, resolution);
    let values = x_axis
        .iter()
        .map(|&x| p_axis.iter().map(|&p| wigner_unchecked(rho, x, p)).collect())
        .collect();
    Ok(WignerGrid {
        x_axis,
        p_axis,
        values,
    })
}

impl WignerGrid {
    pub fn cell_area(&self) -> f64 {
        let step = |a: &[f64]| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
        step(&self.x_axis) * step(&self.p_axis)
    }

    /// Riemann sum of the grid times the cell area.
    pub fn integral(&self) -> f64 {
        self.values.iter().flatten().sum::<f64>() * self.cell_area()
    }

    /// `(x, p, W)` at the grid minimum.
    pub fn minimum(&self) -> (f64, f64, f64) {
        let mut best = (self.x_axis[0], self.p_axis[0], f64::INFINITY);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if w < best.2 {
                    best = (self.x_axis[i], self.p_axis[j], w);
                }
            }
        }
        best
    }

    /// CSV with a header row of p values and a leading column of x values.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x\\p".to_string()];
        header.extend(self.p_axis.iter().map(|p| format!("{p}")));
        w.write_record(&header)?;
        for (x, row) in self.x_axis.iter().zip(&self.values) {
            let mut record = vec![format!("{x}")];
            record.extend(row.iter().map(|v| format!("{v}")));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}
