//! Split-step solver against closed-form free evolution and exact symmetries.

mod common;

use std::f64::consts::{PI, TAU};

use common::{derivative, rel};
use dst_core::dispersion::WellSpec;
use dst_core::evolve::{evolve, kinetic_dispersion, stationary_well, EvolveOptions, Propagator, TimeCorrection};
use dst_core::{Packet, Scales, UnitPreset};
use num_complex::Complex;
use rustfft::FftPlanner;

/// Density of a free Gaussian of initial spread `sigma0` after time `t`.
fn free_density(x: f64, t: f64, center: f64, sigma0: f64, k0: f64, mass: f64, hbar: f64) -> f64 {
    let sigma = sigma0 * (1.0 + (hbar * t / (2.0 * mass * sigma0 * sigma0)).powi(2)).sqrt();
    let mean = center + hbar * k0 * t / mass;
    (-(x - mean).powi(2) / (2.0 * sigma * sigma)).exp() / (sigma * TAU.sqrt())
}

#[test]
fn continuum_matches_free_gaussian() {
    let s = Scales::continuum(1.0, 1.0).unwrap();
    let (n, x0, dx) = (4096, -128.0, 256.0 / 4096.0);
    let (center, sigma0, k0, mass) = (-20.0, 1.0, TAU, 1.0);
    let psi = Packet::gaussian(n, x0, dx, center, sigma0, k0).unwrap();
    // Three dispersion times 2mσ²/ħ.
    let tau = 2.0 * mass * sigma0 * sigma0 / s.hbar();
    let dt = 0.01;
    let steps = (3.0 * tau / dt).ceil() as usize;
    let mut opts = EvolveOptions::free(n, dt, steps, TimeCorrection::None);
    opts.observe_every = 100;
    opts.record_every = Some(steps / 3);
    let tr = evolve(&psi, &opts, mass, &s).unwrap();

    let hbar = s.hbar();
    for o in &tr.observables {
        let sigma = sigma0 * (1.0 + (hbar * o.t / (2.0 * mass * sigma0 * sigma0)).powi(2)).sqrt();
        let mean = center + hbar * k0 * o.t / mass;
        assert!((o.x_mean - mean).abs() < 0.005 * sigma, "t = {}", o.t);
        assert!(rel(o.dx, sigma) < 0.005, "t = {}", o.t);
    }
    for (t, frame) in &tr.frames {
        let rho = frame.density();
        let exact: Vec<f64> = (0..n)
            .map(|i| free_density(frame.position(i), *t, center, sigma0, k0, mass, hbar))
            .collect();
        let peak = exact.iter().cloned().fold(0.0, f64::max);
        let worst = rho.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 0.005 * peak, "t = {t}: {worst} vs peak {peak}");
    }
    assert!(tr.observables.last().unwrap().t >= 3.0 * tau - 1e-9);
}

#[test]
fn centroid_follows_multiplier_slope() {
    let (n, x0, dx) = (4096, -128.0, 256.0 / 4096.0);
    let (k0, sigma, mass, dt, t_end) = (20.0, 2.0, 1.0, 0.01, 20.0f64);
    for l_p in [0.0, 0.05, 0.1] {
        let s = Scales::natural_with_planck_length(l_p).unwrap();
        let psi = Packet::gaussian(n, x0, dx, -60.0, sigma, k0).unwrap();
        let steps = (t_end / dt).round() as usize;
        let mut opts = EvolveOptions::free(n, dt, steps, TimeCorrection::None);
        opts.observe_every = steps;
        let tr = evolve(&psi, &opts, mass, &s).unwrap();
        let (first, last) = (tr.observables[0], *tr.observables.last().unwrap());
        let speed = (last.x_mean - first.x_mean) / (last.t - first.t);
        let oracle = derivative(|k| kinetic_dispersion(k, mass, &s), k0, 1e-3) / s.hbar();
        assert!(rel(speed, oracle) < 0.01, "L_p = {l_p}: {speed} vs {oracle}");
    }
}

#[test]
fn per_mode_evolution_is_unitary() {
    let s = Scales::preset(UnitPreset::Natural);
    let n = 4096;
    let psi = Packet::gaussian(n, -128.0, 256.0 / n as f64, 0.0, 2.0, 5.0).unwrap();
    let mut opts = EvolveOptions::free(n, 0.01, 10_000, TimeCorrection::PerMode);
    opts.observe_every = 10_000;
    let tr = evolve(&psi, &opts, 1.0, &s).unwrap();
    for o in &tr.observables {
        assert!((o.norm - 1.0).abs() < 1e-10, "norm {}", o.norm);
    }
}

#[test]
fn free_norm_drift_over_thousand_steps() {
    let n = 1024;
    for l_p in [0.0, 0.1, 1.0] {
        let s = Scales::natural_with_planck_length(l_p).unwrap();
        let psi = Packet::gaussian(n, -32.0, 64.0 / n as f64, 0.0, 1.0, 3.0).unwrap();
        let mut opts = EvolveOptions::free(n, 0.01, 1000, TimeCorrection::None);
        opts.observe_every = 1000;
        let tr = evolve(&psi, &opts, 10.0, &s).unwrap();
        assert!((tr.observables.last().unwrap().norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn harmonic_time_reversal() {
    let s = Scales::preset(UnitPreset::Natural);
    let n = 1024;
    let (x0, dx) = (-16.0, 32.0 / n as f64);
    let psi0 = Packet::gaussian(n, x0, dx, 1.5, 0.7, 4.0).unwrap();
    let potential: Vec<f64> = (0..n).map(|i| 0.5 * psi0.position(i).powi(2)).collect();
    for correction in [TimeCorrection::None, TimeCorrection::PerMode] {
        let mut forward = Propagator::new(&psi0, &potential, 1.0, correction, 0.01, &s).unwrap();
        let mut backward = Propagator::new(&psi0, &potential, 1.0, correction, -0.01, &s).unwrap();
        let mut psi = psi0.clone();
        for _ in 0..200 {
            forward.step(&mut psi);
        }
        assert!(psi
            .samples()
            .iter()
            .zip(psi0.samples())
            .any(|(a, b)| (a - b).norm() > 1e-3));
        for _ in 0..200 {
            backward.step(&mut psi);
        }
        let worst = psi
            .samples()
            .iter()
            .zip(psi0.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "{correction:?}: {worst}");
    }
}

/// Apply the modified kinetic operator between hard walls through an odd
/// periodic extension, independently of the library's spectral code.
fn hard_wall_kinetic(samples: &[f64], width: f64, mass: f64, s: &Scales) -> Vec<f64> {
    let interior = samples.len();
    let period = 2 * (interior + 1);
    let mut buf = vec![Complex::new(0.0, 0.0); period];
    for (j, &v) in samples.iter().enumerate() {
        buf[j + 1] = Complex::new(v, 0.0);
        buf[period - 1 - j] = Complex::new(-v, 0.0);
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(period).process(&mut buf);
    for (i, z) in buf.iter_mut().enumerate() {
        let bin = if i <= period / 2 {
            i as f64
        } else {
            i as f64 - period as f64
        };
        // The extended period is 2L.
        let k = PI * bin / width;
        *z *= kinetic_dispersion(k, mass, s);
    }
    planner.plan_fft_inverse(period).process(&mut buf);
    (0..interior).map(|j| buf[j + 1].re / period as f64).collect()
}

#[test]
fn sine_basis_spectrum_cross_check() {
    let s = Scales::preset(UnitPreset::Natural);
    let (width, mass, n_grid) = (3.0, 1.0, 511);
    let spec = WellSpec::new(width, mass, 40).unwrap();
    let modes = stationary_well(&spec, n_grid + 1, &s).unwrap();
    let h = width / (n_grid + 1) as f64;
    for mode in &modes {
        let n = mode.n as f64;
        let v: Vec<f64> = (1..=n_grid).map(|j| (n * PI * j as f64 * h / width).sin()).collect();
        let kv = hard_wall_kinetic(&v, width, mass, &s);
        let rayleigh = kv.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|b| b * b).sum::<f64>();
        assert!(
            rel(rayleigh, mode.energy) < 1e-10,
            "n = {}: {rayleigh} vs {}",
            mode.n,
            mode.energy
        );
        let residual = kv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - mode.energy * b).abs())
            .fold(0.0, f64::max);
        assert!(residual < 1e-10 * mode.energy.max(1e-300) + 1e-13);
    }
    assert!(rel(modes[0].energy, 0.125 / 9.0 * (-1.0 / 72.0f64).exp()) < 1e-14);
}

#[test]
fn continuum_well_is_textbook() {
    let s = Scales::continuum(1.0, 1.0).unwrap();
    let spec = WellSpec::new(1.0, 1.0, 50).unwrap();
    for mode in stationary_well(&spec, 256, &s).unwrap() {
        let n = mode.n as f64;
        assert!(rel(mode.energy, n * n / 8.0) < 1e-14);
        assert!(!mode.trans_planckian);
    }
}
