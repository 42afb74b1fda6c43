//! Photon-number distribution by expectation maximization on the
//! phase-averaged density `p(x) = sum_n rho_nn psi_n(x)^2`.

use rayon::prelude::*;
use serde::Serialize;

use super::settings::TomographySettings;
use crate::error::{Error, Result};
use crate::fock::{fill_fock_wavefunctions, QuadratureSample};
use crate::numeric::CompensatedSum;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalResult {
    pub populations: Vec<f64>,
    pub loglik_history: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
}

pub fn reconstruct_diagonal(samples: &[QuadratureSample], settings: &TomographySettings) -> Result<DiagonalResult> {
    settings.validate()?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let dim = settings.n_max + 1;
    let mut table = vec![0.0; samples.len() * dim];
    table.par_chunks_mut(dim).zip(samples.par_iter()).for_each(|(row, s)| {
        fill_fock_wavefunctions(s.x, row);
        row.iter_mut().for_each(|v| *v *= *v);
    });
    let n = samples.len() as f64;
    let mut pops = vec![1.0 / dim as f64; dim];

    let evaluate = |pops: &[f64]| -> Result<(f64, Vec<f64>)> {
        let partials: Vec<Result<(CompensatedSum, Vec<f64>)>> = (0..samples.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(samples.len());
                let mut ll = CompensatedSum::new();
                let mut acc = vec![0.0; dim];
                for j in lo..hi {
                    let row = &table[j * dim..(j + 1) * dim];
                    let p: f64 = row.iter().zip(pops).map(|(t, r)| t * r).sum();
                    if !(p > 0.0 && p.is_finite()) {
                        return Err(Error::Underflow {
                            index: j,
                            x: samples[j].x,
                            theta: samples[j].theta,
                            value: p,
                        });
                    }
                    ll.add(p.ln());
                    for (a, t) in acc.iter_mut().zip(row) {
                        *a += t / p;
                    }
                }
                Ok((ll, acc))
            })
            .collect();
        let mut ll = CompensatedSum::new();
        let mut acc = vec![CompensatedSum::new(); dim];
        for part in partials {
            let (l, a) = part?;
            ll.add(l.value());
            for (dst, v) in acc.iter_mut().zip(a) {
                dst.add(v);
            }
        }
        Ok((ll.value(), acc.iter().map(|a| a.value() / n).collect()))
    };

    let (mut ll, mut grad) = evaluate(&pops)?;
    let mut history = vec![ll];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < settings.max_iters {
        iterations += 1;
        for (p, g) in pops.iter_mut().zip(&grad) {
            *p *= g;
        }
        let total: f64 = pops.iter().sum();
        pops.iter_mut().for_each(|p| *p /= total);
        let (ll_new, grad_new) = evaluate(&pops)?;
        let rel = (ll_new - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
        ll = ll_new;
        grad = grad_new;
        history.push(ll);
        if rel < settings.loglik_rel_tol {
            converged = true;
            break;
        }
    }
    Ok(DiagonalResult {
        populations: pops,
        loglik_history: history,
        iterations_used: iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_input_stays_normalized() {
        let samples = vec![QuadratureSample::new(0.4, 0.0); 10];
        let res = reconstruct_diagonal(&samples, &TomographySettings { n_max: 6, ..Default::default() }).unwrap();
        assert!((res.populations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(res.populations.iter().all(|p| *p >= 0.0));
        for w in res.loglik_history.windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(reconstruct_diagonal(&[], &TomographySettings::default()), Err(Error::EmptySamples)));
    }
}
