use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::DensityMatrix;
use super::wavefunction::fill_fock_wavefunctions;
use crate::error::Result;

/// One homodyne outcome: quadrature `x` measured at local-oscillator phase `theta`.
///
/// The phase is stored reduced to `[0, pi)`. Because `|x, theta + pi> = |-x, theta>`
/// exactly, the reduction flips the sign of `x` and is valid for every state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSample {
    pub x: f64,
    pub theta: f64,
}

impl QuadratureSample {
    pub fn new(x: f64, theta: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut x = x;
        if t >= PI {
            t -= PI;
            x = -x;
        }
        // rem_euclid can round up to exactly the modulus
        if t >= PI {
            t = 0.0;
        }
        Self { x, theta: t }
    }
}

/// Homodyne projector amplitudes `<n|x,theta> = e^{i n theta} psi_n(x)`.
pub fn projector_amplitudes(n_max: usize, x: f64, theta: f64) -> Vec<Complex64> {
    let mut psi = vec![0.0; n_max + 1];
    fill_fock_wavefunctions(x, &mut psi);
    psi.iter()
        .enumerate()
        .map(|(n, &p)| Complex64::from_polar(p, n as f64 * theta))
        .collect()
}

/// `<v| rho |v>` for an amplitude vector `v`.
pub(crate) fn expectation(rho: &DensityMatrix, v: &[Complex64]) -> f64 {
    let e = rho.entries();
    let dim = v.len();
    let mut acc = 0.0;
    for m in 0..dim {
        let mut row = Complex64::new(0.0, 0.0);
        for n in 0..dim {
            row += e[(m, n)] * v[n];
        }
        acc += (v[m].conj() * row).re;
    }
    acc
}

/// Quadrature distribution `p(x | theta) = sum_{m,n} rho_mn e^{i(n-m)theta} psi_m(x) psi_n(x)`.
pub fn quadrature_pdf(rho: &DensityMatrix, theta: f64, x: f64) -> Result<f64> {
    rho.ensure_physical()?;
    Ok(quadrature_pdf_unchecked(rho, theta, x))
}

pub(crate) fn quadrature_pdf_unchecked(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    let v = projector_amplitudes(rho.n_max(), x, theta);
    expectation(rho, &v).max(0.0)
}

/// Evaluates `p(x | theta)` for a fixed state and phase without re-validating.
#[derive(Debug, Clone)]
pub struct QuadratureDistribution {
    /// Hermitian kernel `K_mn = Re(rho_mn e^{i(n-m)theta})`, the only part that survives the double sum.
    kernel: Vec<f64>,
    dim: usize,
}

impl QuadratureDistribution {
    pub fn new(rho: &DensityMatrix, theta: f64) -> Result<Self> {
        rho.ensure_physical()?;
        let dim = rho.dim();
        let mut kernel = vec![0.0; dim * dim];
        for m in 0..dim {
            for n in 0..dim {
                let phase = Complex64::from_polar(1.0, (n as f64 - m as f64) * theta);
                kernel[m * dim + n] = (rho.element(m, n) * phase).re;
            }
        }
        Ok(Self { kernel, dim })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let mut psi = vec![0.0; self.dim];
        fill_fock_wavefunctions(x, &mut psi);
        let mut acc = 0.0;
        for m in 0..self.dim {
            let row = &self.kernel[m * self.dim..(m + 1) * self.dim];
            let inner: f64 = row.iter().zip(&psi).map(|(k, p)| k * p).sum();
            acc += psi[m] * inner;
        }
        acc.max(0.0)
    }

    /// Half-width beyond which the density is negligible (< 1e-16 relative).
    pub fn support_half_width(&self) -> f64 {
        // psi_n is concentrated within |x| < sqrt(2n+1); the Gaussian tail adds ~9 units.
        (2.0 * (self.dim - 1) as f64 + 1.0).sqrt() + 9.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = 0.5 * (f(a) + f(b));
        for i in 1..n {
            s += f(a + i as f64 * h);
        }
        s * h
    }

    #[test]
    fn sample_phase_reduction_preserves_outcome() {
        let amps = [Complex64::new(0.5, 0.2), Complex64::new(0.1, -0.7), Complex64::new(0.3, 0.3)];
        let rho = DensityMatrix::pure(&amps).unwrap();
        for &(x, theta) in &[(0.7, 4.0), (-1.2, -0.5), (0.3, 7.5), (0.9, PI)] {
            let s = QuadratureSample::new(x, theta);
            assert!((0.0..PI).contains(&s.theta));
            let a = quadrature_pdf(&rho, theta, x).unwrap();
            let b = quadrature_pdf(&rho, s.theta, s.x).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn vacuum_peak() {
        let rho = DensityMatrix::vacuum(4);
        for &theta in &[0.0, 0.7, 2.5] {
            let p = quadrature_pdf(&rho, theta, 0.0).unwrap();
            assert!((p - 1.0 / PI.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_photon_closed_form() {
        let rho = DensityMatrix::fock(1, 6).unwrap();
        for &x in &[-2.0f64, -0.5, 0.0, 0.3, 1.7] {
            let exact = 2.0 * x * x * (-x * x).exp() / PI.sqrt();
            assert!((quadrature_pdf(&rho, 1.1, x).unwrap() - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn reference_like_mixture_has_nonzero_dip() {
        let rho = DensityMatrix::from_diagonal(&[0.18, 0.79, 0.03]).unwrap();
        // At x = 0 only even Fock states contribute: 0.18 psi_0^2 + 0.03 psi_2^2,
        // psi_2(0)^2 = 1/(2 sqrt(pi)).
        let dip = quadrature_pdf(&rho, 0.0, 0.0).unwrap();
        let expect = (0.18 + 0.03 * 0.5) / PI.sqrt();
        assert!((dip - expect).abs() < 1e-14);
        let peak = quadrature_pdf(&rho, 0.0, 1.0).unwrap();
        assert!(dip > 0.05 && peak > dip);
    }

    #[test]
    fn second_moment_is_n_plus_half() {
        for n in 0..=6 {
            let rho = DensityMatrix::fock(n, 8).unwrap();
            let m2 = integrate(|x| x * x * quadrature_pdf_unchecked(&rho, 0.3, x), -12.0, 12.0, 24000);
            assert!((m2 - (n as f64 + 0.5)).abs() < 1e-6, "n={n}: {m2}");
        }
    }

    #[test]
    fn rejects_unphysical_state() {
        let rho = super::super::loss::invert_loss(&DensityMatrix::fock(1, 3).unwrap(), 0.5)
            .unwrap()
            .state;
        assert!(quadrature_pdf(&rho, 0.0, 0.0).is_err());
        assert!(QuadratureDistribution::new(&rho, 0.0).is_err());
    }

    #[test]
    fn distribution_matches_direct_evaluation() {
        let amps = [Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.4), Complex64::new(0.0, -0.6)];
        let rho = DensityMatrix::pure(&amps).unwrap();
        let dist = QuadratureDistribution::new(&rho, 0.9).unwrap();
        for &x in &[-2.2, -0.1, 0.4, 3.0] {
            assert!((dist.pdf(x) - quadrature_pdf(&rho, 0.9, x).unwrap()).abs() < 1e-14);
        }
    }
}
