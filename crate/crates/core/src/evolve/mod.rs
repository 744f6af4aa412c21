//! Split-step spectral solver for the Planck-modified Schrödinger equation.
//!
//! The spatial operator `-(ħ²/2m) exp(2κ L_p² ∂²ₓ) ∂²ₓ` with `κ = 1/(16π²)`
//! is diagonal in Fourier space with multiplier
//!
//! ```text
//! K(k) = (ħ²k²/2m) · exp(-L_p² k² / (8π²))
//! ```
//!
//! The time operator `iħ exp(κ T_p² ∂²ₜ) ∂ₜ` acts on a stationary mode
//! `e^(-iωt)` as `ħω exp(-κ T_p² ω²)`, so each spatial mode evolves with the
//! frequency solving `ħω exp(-T_p²ω²/(16π²)) = K(k)` on the monotonic
//! branch. [`TimeCorrection::None`] uses `ω = K/ħ` instead.
//!
//! Evolution is Strang split: half potential phase, full kinetic phase in
//! Fourier space, half potential phase. Every factor is unit modulus.

pub mod dump;

use num_complex::Complex;

use crate::dispersion::WellSpec;
use crate::error::{Error, Result};
use crate::packet::{Spectral, WavePacket};
use crate::roots::invert_gaussian_ramp;
use crate::scalar::{gaussian_ramp_supremum, Real};
use crate::uncertainty::moments_with;
use crate::units::PlanckScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TimeCorrection {
    None,
    #[default]
    PerMode,
}

impl TimeCorrection {
    pub fn name(self) -> &'static str {
        match self {
            TimeCorrection::None => "NONE",
            TimeCorrection::PerMode => "PER_MODE",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [TimeCorrection::None, TimeCorrection::PerMode]
            .into_iter()
            .find(|t| t.name() == name)
    }
}

/// Fourier multiplier of the modified kinetic operator at angular wavenumber `k`.
pub fn kinetic_dispersion<T: Real>(k: T, mass: T, scales: &PlanckScales<T>) -> T {
    let hbar = scales.hbar();
    let l_p = scales.planck_length();
    let damping = (-(l_p * l_p * k * k) / (T::lit(8.0) * T::PI() * T::PI())).exp();
    hbar * hbar * k * k / (T::lit(2.0) * mass) * damping
}

/// Critical frequency `2√2π/T_p` where `ħω exp(-κT_p²ω²)` peaks.
pub fn critical_frequency<T: Real>(scales: &PlanckScales<T>) -> T {
    T::lit(2.0) * T::SQRT_2() * T::PI() / scales.planck_time()
}

/// Largest mode energy the per-mode frequency solve accepts: `(h/T_p)·√2·e^(-1/2)`.
pub fn mode_energy_supremum<T: Real>(scales: &PlanckScales<T>) -> T {
    gaussian_ramp_supremum::<T>() * scales.h() / scales.planck_time()
}

/// Angular frequency of a stationary mode with spatial eigenvalue `energy`.
pub fn mode_frequency<T: Real>(energy: T, correction: TimeCorrection, scales: &PlanckScales<T>) -> Result<T> {
    if !(energy >= T::zero()) || !energy.is_finite() {
        return Err(Error::Domain {
            quantity: "mode energy",
            value: energy.as_f64(),
            requirement: "must be finite and >= 0",
        });
    }
    let hbar = scales.hbar();
    let t_p = scales.planck_time();
    if correction == TimeCorrection::None || t_p == T::zero() {
        return Ok(energy / hbar);
    }
    // With u = ω T_p / 2π the equation reads u·exp(-u²/4) = E T_p / h.
    let h = scales.h();
    let v = energy * t_p / h;
    if v > gaussian_ramp_supremum::<T>() {
        return Err(Error::NoSolution {
            what: "mode frequency",
            detail: format!(
                "mode energy {energy} exceeds {} (attained at omega_crit = {})",
                mode_energy_supremum(scales),
                critical_frequency(scales)
            ),
        });
    }
    let u = invert_gaussian_ramp(v)?;
    Ok(u * T::TAU() / t_p)
}

/// Per-step options for [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOptions<T> {
    pub dt: T,
    pub steps: usize,
    pub time_correction: TimeCorrection,
    /// Potential sampled on the packet grid.
    pub potential: Vec<T>,
    /// Record observables every this many steps (step 0 and the last step
    /// are always recorded).
    pub observe_every: usize,
    /// Store full packets every this many steps, if set.
    pub record_every: Option<usize>,
}

impl<T: Real> EvolveOptions<T> {
    pub fn free(n: usize, dt: T, steps: usize, time_correction: TimeCorrection) -> Self {
        EvolveOptions {
            dt,
            steps,
            time_correction,
            potential: vec![T::zero(); n],
            observe_every: 1,
            record_every: None,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::validation("dt", format!("must be > 0, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::validation("steps", "must be >= 1"));
        }
        if self.potential.len() != n {
            return Err(Error::validation(
                "potential",
                format!("{} samples for a grid of {n}", self.potential.len()),
            ));
        }
        if self.observe_every == 0 || self.record_every == Some(0) {
            return Err(Error::validation("stride", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables<T> {
    pub t: T,
    pub norm: T,
    pub x_mean: T,
    pub p_mean: T,
    pub dx: T,
    pub dp: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub observables: Vec<Observables<T>>,
    pub frames: Vec<(T, WavePacket<T>)>,
}

/// Precomputed Strang step for one grid, mass, potential and time step.
pub struct Propagator<T: Real> {
    kinetic_phase: Vec<Complex<T>>,
    potential_half_phase: Vec<Complex<T>>,
    omega: Vec<T>,
    spectral: Spectral<T>,
    dt: T,
}

impl<T: Real> Propagator<T> {
    /// `dt` may be negative (backward evolution).
    pub fn new(
        grid: &WavePacket<T>,
        potential: &[T],
        mass: T,
        correction: TimeCorrection,
        dt: T,
        scales: &PlanckScales<T>,
    ) -> Result<Self> {
        if !(mass > T::zero()) || !mass.is_finite() {
            return Err(Error::validation("mass", format!("must be > 0, got {mass}")));
        }
        if dt == T::zero() || !dt.is_finite() {
            return Err(Error::validation(
                "dt",
                format!("must be finite and non-zero, got {dt}"),
            ));
        }
        if potential.len() != grid.len() {
            return Err(Error::validation("potential", "length differs from grid"));
        }
        if potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("potential", "must be bounded"));
        }
        let omega = grid
            .wavenumbers()
            .into_iter()
            .map(|k| mode_frequency(kinetic_dispersion(k, mass, scales), correction, scales))
            .collect::<Result<Vec<_>>>()?;
        let omega_max = omega.iter().fold(T::zero(), |a, &w| a.max(w));
        let phase = omega_max * dt.abs();
        if !(phase < T::PI()) {
            return Err(Error::PhaseWrap {
                phase: phase.as_f64(),
                dt_max: (T::PI() / omega_max).as_f64(),
            });
        }
        let hbar = scales.hbar();
        let half = T::lit(0.5);
        Ok(Propagator {
            kinetic_phase: omega.iter().map(|&w| Complex::from_polar(T::one(), -w * dt)).collect(),
            potential_half_phase: potential
                .iter()
                .map(|&v| Complex::from_polar(T::one(), -v * dt * half / hbar))
                .collect(),
            omega,
            spectral: Spectral::new(grid.len()),
            dt,
        })
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Mode frequencies in FFT bin order.
    pub fn frequencies(&self) -> &[T] {
        &self.omega
    }

    pub fn step(&mut self, psi: &mut WavePacket<T>) {
        assert_eq!(
            psi.len(),
            self.kinetic_phase.len(),
            "packet grid differs from propagator grid"
        );
        let buf = psi.samples_mut();
        mul_in_place(buf, &self.potential_half_phase);
        self.spectral.forward(buf);
        mul_in_place(buf, &self.kinetic_phase);
        self.spectral.inverse(buf);
        mul_in_place(buf, &self.potential_half_phase);
    }
}

fn mul_in_place<T: Real>(buf: &mut [Complex<T>], phase: &[Complex<T>]) {
    buf.iter_mut().zip(phase).for_each(|(z, &f)| *z = *z * f);
}

/// Evolve `psi0` for `opts.steps` steps of `opts.dt`.
pub fn evolve<T: Real>(
    psi0: &WavePacket<T>,
    opts: &EvolveOptions<T>,
    mass: T,
    scales: &PlanckScales<T>,
) -> Result<Trajectory<T>> {
    opts.validate(psi0.len())?;
    let mut propagator = Propagator::new(psi0, &opts.potential, mass, opts.time_correction, opts.dt, scales)?;
    let mut psi = psi0.clone();
    let mut spectral = Spectral::new(psi.len());
    let mut work = psi.samples().to_vec();
    let mut observe = |t: T, psi: &WavePacket<T>| {
        let m = moments_with(psi, &mut work, &mut spectral, scales);
        Observables {
            t,
            norm: psi.norm(),
            x_mean: m.x_mean,
            p_mean: m.p_mean,
            dx: m.dx,
            dp: m.dp,
        }
    };

    let mut trajectory = Trajectory {
        observables: vec![observe(T::zero(), &psi)],
        frames: Vec::new(),
    };
    if opts.record_every.is_some() {
        trajectory.frames.push((T::zero(), psi.clone()));
    }
    for step in 1..=opts.steps {
        propagator.step(&mut psi);
        let t = opts.dt * T::from_count(step);
        if step % opts.observe_every == 0 || step == opts.steps {
            trajectory.observables.push(observe(t, &psi));
        }
        if let Some(every) = opts.record_every {
            if step % every == 0 || step == opts.steps {
                trajectory.frames.push((t, psi.clone()));
            }
        }
    }
    Ok(trajectory)
}

/// One level of the hard-wall spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellMode<T> {
    pub n: usize,
    pub wavenumber: T,
    pub energy: T,
    /// `None` when the energy exceeds the per-mode frequency supremum.
    pub omega: Option<T>,
    /// `k_n L_p / 2π ≥ 10`: the Gaussian factor has crushed the level.
    pub trans_planckian: bool,
}

/// Spectrum of the modified kinetic operator between hard walls.
///
/// Hard walls are diagonalized by the sine basis `sin(nπx/L)`, so the
/// eigenvalue of mode `n` is `K(nπ/L)`. A grid of `n_grid` interior points
/// supports `n_grid` modes; levels are reported up to `min(n_max, n_grid)`.
pub fn stationary_well<T: Real>(
    spec: &WellSpec<T>,
    n_grid: usize,
    scales: &PlanckScales<T>,
) -> Result<Vec<WellMode<T>>> {
    spec.validate()?;
    if n_grid < 256 {
        return Err(Error::validation(
            "grid size",
            format!("need at least 256 points, got {n_grid}"),
        ));
    }
    let l_p = scales.planck_length();
    Ok((1..=spec.n_max.min(n_grid))
        .map(|n| {
            let k = T::from_count(n) * T::PI() / spec.width;
            let energy = kinetic_dispersion(k, spec.mass, scales);
            WellMode {
                n,
                wavenumber: k,
                energy,
                omega: mode_frequency(energy, TimeCorrection::PerMode, scales).ok(),
                trans_planckian: k * l_p / T::TAU() >= T::lit(10.0),
            }
        })
        .collect())
}
