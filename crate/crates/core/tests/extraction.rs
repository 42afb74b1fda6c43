mod common;

use herald_core::extract::{
    apply_calibration, calibrate_shot_noise, extract_all, gamma_grid, scan_gamma, ScanSettings,
};
use herald_core::fock::{apply_loss, DensityMatrix};
use herald_core::synth::{
    build_temporal_mode, run_acquisition, synthesize_trace, NoiseModel, PhaseSchedule, TraceSet,
};
use herald_core::tomography::{reconstruct_diagonal, Estimator, TomographySettings};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn vacuum_run(n: usize, gamma: f64, n_samples: usize, seed: u64) -> TraceSet {
    let mode = build_temporal_mode(gamma, 0.2e-9, n_samples).unwrap();
    run_acquisition(&DensityMatrix::vacuum(2), n, &mode, &NoiseModel::NONE, PhaseSchedule::default(), seed)
        .unwrap()
        .traces
}

#[test]
fn noiseless_synthesis_round_trips_signal() {
    let mode = build_temporal_mode(65e6, 0.2e-9, 500).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..200 {
        let x_sig = -3.0 + 0.03 * k as f64;
        let t = synthesize_trace(x_sig, &mode, &NoiseModel::NONE, &mut rng);
        let x = herald_core::extract::extract_quadrature(&t, &mode).unwrap().x;
        // phase reduction may flip the sign
        assert!((x.abs() - x_sig.abs()).abs() < 1e-9);
    }
}

#[test]
fn vacuum_extraction_variance_and_chi_square() {
    let traces = vacuum_run(100_000, 65e6, 200, 21);
    let mode = build_temporal_mode(65e6, 0.2e-9, 200).unwrap();
    let xs: Vec<f64> = extract_all(&traces, &mode).unwrap().iter().map(|s| s.x).collect();
    let n = xs.len() as f64;
    let var = xs.iter().map(|x| x * x).sum::<f64>() / n;
    assert!((var - 0.5).abs() < 0.01, "{var}");

    // 40 equal-width bins over [-3, 3] plus two tails, probabilities by Simpson
    // integration of exp(-x^2)/sqrt(pi).
    let pdf = |x: f64| (-x * x).exp() / PI.sqrt();
    let integrate = |a: f64, b: f64| {
        let m = 200;
        let h = (b - a) / m as f64;
        let mut s = pdf(a) + pdf(b);
        for k in 1..m {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * pdf(a + k as f64 * h);
        }
        s * h / 3.0
    };
    let edges: Vec<f64> = (0..=38).map(|k| -3.0 + 6.0 * k as f64 / 38.0).collect();
    let mut expected = vec![integrate(-12.0, -3.0)];
    expected.extend(edges.windows(2).map(|w| integrate(w[0], w[1])));
    expected.push(integrate(3.0, 12.0));
    let mut counts = vec![0usize; expected.len()];
    for &x in &xs {
        let k = if x < -3.0 {
            0
        } else if x >= 3.0 {
            expected.len() - 1
        } else {
            1 + (((x + 3.0) / 6.0 * 38.0) as usize).min(37)
        };
        counts[k] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(&expected)
        .map(|(&c, &p)| (c as f64 - n * p).powi(2) / (n * p))
        .sum();
    // 99th percentile of chi-square with 39 degrees of freedom
    assert!(chi2 < 62.428, "{chi2}");
}

#[test]
fn calibration_scales() {
    let traces = vacuum_run(100_000, 65e6, 200, 22);
    let mode = build_temporal_mode(65e6, 0.2e-9, 200).unwrap();
    let scale = calibrate_shot_noise(&traces, &mode).unwrap();
    assert!((scale - 1.0).abs() < 0.02, "{scale}");

    let mut samples = extract_all(&traces, &mode).unwrap();
    apply_calibration(&mut samples, scale);
    let var = samples.iter().map(|s| s.x * s.x).sum::<f64>() / samples.len() as f64;
    assert!((var - 0.5).abs() < 0.01, "{var}");

    let mut tripled = traces.clone();
    tripled.scale(3.0);
    let s3 = calibrate_shot_noise(&tripled, &mode).unwrap();
    assert!((s3 * 3.0 - 1.0).abs() < 0.02, "{s3}");

    let mut short = TraceSet::new(traces.dt, traces.n_samples);
    for i in 0..99 {
        short.push(&traces.trace(i)).unwrap();
    }
    assert!(calibrate_shot_noise(&short, &mode).is_err());
}

#[test]
fn parseval_bound() {
    let traces = vacuum_run(500, 65e6, 200, 23);
    let mode = build_temporal_mode(65e6, 0.2e-9, 200).unwrap();
    let xs = extract_all(&traces, &mode).unwrap();
    for (i, s) in xs.iter().enumerate() {
        let energy: f64 = traces.row(i).iter().map(|&v| (v as f64).powi(2)).sum::<f64>() * traces.dt;
        assert!(s.x.abs() <= energy.sqrt() * (1.0 + 1e-12));
    }
}

#[test]
fn mode_mismatch_penalty_follows_overlap() {
    let dt = 0.2e-9;
    let n_samples = 1000;
    let source = DensityMatrix::fock(1, 6).unwrap();
    let true_mode = build_temporal_mode(60e6, dt, n_samples).unwrap();
    let run =
        run_acquisition(&source, 40_000, &true_mode, &NoiseModel::NONE, PhaseSchedule::default(), 24).unwrap();
    let settings = TomographySettings { n_max: 6, ..Default::default() };
    let rho11 = |gamma: f64| {
        let mode = build_temporal_mode(gamma, dt, n_samples).unwrap();
        let s = extract_all(&run.traces, &mode).unwrap();
        reconstruct_diagonal(&s, &settings).unwrap().populations[1]
    };
    let matched = rho11(60e6);
    for gamma in [20e6, 240e6] {
        let other = build_temporal_mode(gamma, dt, n_samples).unwrap();
        let overlap = true_mode.overlap(&other).unwrap();
        let predicted = overlap * overlap;
        let ratio = rho11(gamma) / matched;
        assert!((ratio / predicted - 1.0).abs() < 0.05, "gamma {gamma}: {ratio} vs {predicted}");
    }
}

#[test]
fn scan_recovers_synthesis_bandwidth() {
    let dt = 0.2e-9;
    let n_samples = 500;
    let source = apply_loss(&common::reference_like(), 0.9).unwrap();
    let mode = build_temporal_mode(60e6, dt, n_samples).unwrap();
    let noise = NoiseModel::reference();
    let run = run_acquisition(&source, 20_000, &mode, &noise, PhaseSchedule::default(), 25).unwrap();
    let vacuum = run_acquisition(&DensityMatrix::vacuum(2), 5_000, &mode, &noise, PhaseSchedule::default(), 26)
        .unwrap()
        .traces;
    let grid = gamma_grid(40e6, 90e6, 5e6).unwrap();
    assert_eq!(grid.len(), 11);
    let settings =
        ScanSettings { tomography: TomographySettings { n_max: 6, ..Default::default() }, estimator: Estimator::Diagonal };
    let scan = scan_gamma(&run.traces, Some(&vacuum), &grid, &settings).unwrap();
    assert!((scan.gamma_star - 60e6).abs() <= 5e6 + 1.0, "{}", scan.gamma_star);
    assert_eq!(scan.gamma_star, scan.gamma_wigner);
    assert_eq!(scan.points.len(), 11);
    assert!(scan.points.iter().all(|p| p.calibration.is_some()));

    let single = scan_gamma(&run.traces, None, &[75e6], &settings).unwrap();
    assert_eq!(single.gamma_star, 75e6);
    assert!(scan_gamma(&run.traces, None, &[70e6, 60e6], &settings).is_err());
}
