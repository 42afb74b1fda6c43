//! Projector tables and the parallel likelihood/`R` reduction.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::settings::ProjectorGrid;
use crate::error::{Error, Result};
use crate::fock::{projector_amplitudes, QuadratureSample};
use crate::numeric::CompensatedSum;

/// Projectors per reduction chunk. Fixed so that results do not depend on the
/// thread count.
const CHUNK: usize = 1024;

/// `|x_j, theta_j>` amplitude vectors with multiplicities.
#[derive(Debug, Clone)]
pub(crate) struct Projectors {
    pub dim: usize,
    /// Row-major, `dim` amplitudes per projector.
    pub amps: Vec<Complex64>,
    pub weights: Vec<f64>,
    /// Representative sample for each projector, for error reporting.
    pub origin: Vec<QuadratureSample>,
    pub origin_index: Vec<usize>,
    pub total_weight: f64,
}

impl Projectors {
    pub fn build(samples: &[QuadratureSample], n_max: usize, grid: ProjectorGrid) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let points: Vec<(QuadratureSample, f64, usize)> = match grid {
            ProjectorGrid::PerSample => samples.iter().enumerate().map(|(i, s)| (*s, 1.0, i)).collect(),
            ProjectorGrid::Binned { n_x, n_theta } => bin_samples(samples, n_x, n_theta),
        };
        let dim = n_max + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); points.len() * dim];
        amps.par_chunks_mut(dim).zip(points.par_iter()).for_each(|(row, (s, _, _))| {
            row.copy_from_slice(&projector_amplitudes(n_max, s.x, s.theta));
        });
        let weights: Vec<f64> = points.iter().map(|p| p.1).collect();
        Ok(Self {
            dim,
            amps,
            total_weight: weights.iter().sum(),
            weights,
            origin: points.iter().map(|p| p.0).collect(),
            origin_index: points.iter().map(|p| p.2).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Log-likelihood and `R = (1/N) sum_j w_j Pi_j / Tr(rho Pi_j)` in one pass.
    pub fn evaluate(&self, rho: &DMatrix<Complex64>) -> Result<(f64, DMatrix<Complex64>)> {
        let dim = self.dim;
        // rho in row-major order for the inner loop
        let rho_rm: Vec<Complex64> = (0..dim * dim).map(|k| rho[(k / dim, k % dim)]).collect();
        let partials: Vec<Result<(CompensatedSum, Vec<Complex64>)>> = (0..self.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(self.len());
                let mut ll = CompensatedSum::new();
                let mut r = vec![Complex64::new(0.0, 0.0); dim * dim];
                for j in lo..hi {
                    let v = &self.amps[j * dim..(j + 1) * dim];
                    // rho is Hermitian, so only its upper triangle is needed
                    let mut p = 0.0;
                    for m in 0..dim {
                        let row = &rho_rm[m * dim..(m + 1) * dim];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for n in m + 1..dim {
                            acc += row[n] * v[n];
                        }
                        p += row[m].re * v[m].norm_sqr() + 2.0 * (v[m].conj() * acc).re;
                    }
                    if !(p > 0.0 && p.is_finite()) {
                        let s = self.origin[j];
                        return Err(Error::Underflow {
                            index: self.origin_index[j],
                            x: s.x,
                            theta: s.theta,
                            value: p,
                        });
                    }
                    let weight = self.weights[j];
                    ll.add(weight * p.ln());
                    let c = weight / p;
                    for m in 0..dim {
                        let vm = v[m] * c;
                        let row = &mut r[m * dim..(m + 1) * dim];
                        for n in m..dim {
                            row[n] += vm * v[n].conj();
                        }
                    }
                }
                Ok((ll, r))
            })
            .collect();
        let mut ll = CompensatedSum::new();
        let mut re = vec![CompensatedSum::new(); dim * dim];
        let mut im = vec![CompensatedSum::new(); dim * dim];
        for part in partials {
            let (l, r) = part?;
            ll.add(l.value());
            for k in 0..dim * dim {
                re[k].add(r[k].re);
                im[k].add(r[k].im);
            }
        }
        let norm = 1.0 / self.total_weight;
        let r = DMatrix::from_fn(dim, dim, |m, n| {
            let (a, b) = if n >= m { (m, n) } else { (n, m) };
            let z = Complex64::new(re[a * dim + b].value(), im[a * dim + b].value()) * norm;
            if n >= m {
                z
            } else {
                z.conj()
            }
        });
        Ok((ll.value(), r))
    }
}

/// Pools samples into a rectangular grid; each occupied bin becomes one
/// projector at the mean `(x, theta)` of its members.
fn bin_samples(samples: &[QuadratureSample], n_x: usize, n_theta: usize) -> Vec<(QuadratureSample, f64, usize)> {
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| (a.min(s.x), b.max(s.x)));
    let width = ((hi - lo) / n_x as f64).max(f64::MIN_POSITIVE);
    let mut sums = vec![(0.0f64, 0.0f64, 0usize, usize::MAX); n_x * n_theta];
    for (i, s) in samples.iter().enumerate() {
        let bx = (((s.x - lo) / width) as usize).min(n_x - 1);
        let bt = ((s.theta / PI * n_theta as f64) as usize).min(n_theta - 1);
        let cell = &mut sums[bt * n_x + bx];
        cell.0 += s.x;
        cell.1 += s.theta;
        cell.2 += 1;
        cell.3 = cell.3.min(i);
    }
    sums.into_iter()
        .filter(|c| c.2 > 0)
        .map(|(sx, st, count, first)| {
            let n = count as f64;
            (QuadratureSample { x: sx / n, theta: st / n }, n, first)
        })
        .collect()
}
