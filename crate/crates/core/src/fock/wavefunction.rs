//! Harmonic-oscillator eigenfunctions in the vacuum-variance-1/2 convention.
//!
//! `psi_0(x) = pi^(-1/4) exp(-x^2/2)` and the three-term recurrence
//! `psi_n = sqrt(2/n) x psi_{n-1} - sqrt((n-1)/n) psi_{n-2}` keeps every
//! intermediate bounded, unlike the factorial closed form.

use std::f64::consts::PI;

/// `psi_n(x)`.
pub fn fock_wavefunction(n: usize, x: f64) -> f64 {
    let mut out = vec![0.0; n + 1];
    fill_fock_wavefunctions(x, &mut out);
    out[n]
}

/// `psi_0(x), ..., psi_{n_max}(x)`.
pub fn fock_wavefunctions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    fill_fock_wavefunctions(x, &mut out);
    out
}

/// Writes `psi_k(x)` into `out[k]` for every `k < out.len()`.
pub fn fill_fock_wavefunctions(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if out.len() > 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for n in 2..out.len() {
        let nf = n as f64;
        out[n] = (2.0 / nf).sqrt() * x * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: physicists' Hermite polynomial from its explicit sum.
    fn hermite_oracle(n: usize, x: f64) -> f64 {
        let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
        let mut h = 0.0;
        for m in 0..=n / 2 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            h += sign * (2.0 * x).powi((n - 2 * m) as i32) / (fact(m) * fact(n - 2 * m));
        }
        h *= fact(n);
        h * (-0.5 * x * x).exp() / (2f64.powi(n as i32) * fact(n) * PI.sqrt()).sqrt()
    }

    #[test]
    fn ground_state_peak_and_odd_parity() {
        assert!((fock_wavefunction(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert!((fock_wavefunction(0, 0.0) - 0.7511255444649425).abs() < 1e-15);
        assert_eq!(fock_wavefunction(1, 0.0), 0.0);
    }

    #[test]
    fn matches_hermite_oracle() {
        // psi_2(1) = (4 - 2) e^{-1/2} / sqrt(8 sqrt(pi)), frozen from the oracle.
        let frozen = 0.3221441825567376;
        assert!((hermite_oracle(2, 1.0) - frozen).abs() < 1e-14);
        assert!((fock_wavefunction(2, 1.0) - frozen).abs() < 1e-10);
        for n in 0..=12 {
            for &x in &[-3.1, -1.0, -0.2, 0.0, 0.7, 1.9, 4.2] {
                let a = fock_wavefunction(n, x);
                let b = hermite_oracle(n, x);
                assert!((a - b).abs() < 1e-10, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn orthonormal_on_fine_grid() {
        // Trapezoid rule is spectrally accurate for these Gaussian-decaying integrands.
        let h = 0.005;
        let xs: Vec<f64> = (-4000..=4000).map(|i| i as f64 * h).collect();
        let table: Vec<Vec<f64>> = xs.iter().map(|&x| fock_wavefunctions(8, x)).collect();
        for m in 0..=8 {
            for n in 0..=8 {
                let s: f64 = table.iter().map(|p| p[m] * p[n]).sum::<f64>() * h;
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-10, "<{m}|{n}> = {s}");
            }
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let v = fock_wavefunctions(200, 5.0);
        assert!(v.iter().all(|p| p.is_finite() && p.abs() < 1.0));
    }
}
