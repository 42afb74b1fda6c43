//! Inverse-CDF sampling of homodyne outcomes.
//!
//! The density is tabulated on a grid sized to the state's Fock support and
//! treated as piecewise linear, so the CDF is piecewise quadratic and each
//! draw inverts it exactly within its segment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::{DensityMatrix, QuadratureDistribution};

const GRID_POINTS: usize = 4097;

#[derive(Debug, Clone)]
pub struct QuadratureSampler {
    x0: f64,
    h: f64,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
}

impl QuadratureSampler {
    pub fn new(rho: &DensityMatrix, theta: f64) -> Result<Self> {
        let dist = QuadratureDistribution::new(rho, theta)?;
        let half = dist.support_half_width();
        let h = 2.0 * half / (GRID_POINTS - 1) as f64;
        let x0 = -half;
        let pdf: Vec<f64> = (0..GRID_POINTS).map(|i| dist.pdf(x0 + i as f64 * h)).collect();
        let mut cdf = Vec::with_capacity(GRID_POINTS);
        cdf.push(0.0);
        for i in 1..GRID_POINTS {
            let prev = cdf[i - 1];
            cdf.push(prev + 0.5 * h * (pdf[i - 1] + pdf[i]));
        }
        let total = cdf[GRID_POINTS - 1];
        cdf.iter_mut().for_each(|c| *c /= total);
        let pdf = pdf.into_iter().map(|p| p / total).collect();
        Ok(Self { x0, h, pdf, cdf })
    }

    /// Maps a uniform variate in `[0, 1)` to a quadrature value.
    pub fn invert(&self, u: f64) -> f64 {
        let i = match self.cdf.binary_search_by(|c| c.partial_cmp(&u).unwrap()) {
            Ok(i) => return self.x0 + i as f64 * self.h,
            Err(i) => i.clamp(1, self.cdf.len() - 1) - 1,
        };
        let target = u - self.cdf[i];
        let (p0, p1) = (self.pdf[i], self.pdf[i + 1]);
        let slope = (p1 - p0) / self.h;
        // solve p0 t + slope t^2 / 2 = target for t in [0, h]
        let t = if slope.abs() < 1e-300 {
            if p0 > 0.0 { target / p0 } else { 0.5 * self.h }
        } else {
            let disc = (p0 * p0 + 2.0 * slope * target).max(0.0);
            2.0 * target / (p0 + disc.sqrt())
        };
        self.x0 + (i as f64 + (t / self.h).clamp(0.0, 1.0)) * self.h
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.invert(rng.random::<f64>())
    }
}

/// Draws one quadrature value for `rho` at phase `theta`.
pub fn sample_quadrature(rho: &DensityMatrix, theta: f64, rng_seed: u64) -> Result<f64> {
    let sampler = QuadratureSampler::new(rho, theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    Ok(sampler.sample(&mut rng))
}
