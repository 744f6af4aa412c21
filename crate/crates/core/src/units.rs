//! Unit systems and Planck scales.
//!
//! Every unit system is generated from three base constants: the action
//! constant `h`, the speed of light `c` and the gravitational constant `G`.
//! The derived scales are
//!
//! ```text
//! hbar = h / 2π
//! L_p  = sqrt(G hbar / c³)
//! T_p  = L_p / c
//! E_p  = h / T_p          (default convention)
//! ```
//!
//! `E_p` only ever appears inside correction terms. The `ħ/T_p` convention
//! is available through [`EnergyConvention`] and rescales every
//! energy-axis correction by `(2π)²`.
//!
//! This module also houses the clock-and-mirror length measurement bound,
//! which motivates a minimal length in the first place.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// CODATA 2018 values (exact for `h` and `c`).
pub mod si {
    pub const PLANCK_CONSTANT: f64 = 6.626_070_15e-34;
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    pub const GRAVITATIONAL_CONSTANT: f64 = 6.674_30e-11;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitPreset {
    /// `h = c = L_p = T_p = E_p = 1`, so `hbar = 1/2π` and `G = 2π`.
    Natural,
    /// SI units with CODATA constants.
    Si,
    /// `hbar = c = G = 1`, so `L_p = T_p = 1` and `h = 2π`.
    PlanckGrav,
}

impl UnitPreset {
    pub const ALL: [UnitPreset; 3] = [UnitPreset::Natural, UnitPreset::Si, UnitPreset::PlanckGrav];

    pub fn name(self) -> &'static str {
        match self {
            UnitPreset::Natural => "NATURAL",
            UnitPreset::Si => "SI",
            UnitPreset::PlanckGrav => "PLANCK_GRAV",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// How the Planck energy is derived from the other scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EnergyConvention {
    /// `E_p = h / T_p`.
    #[default]
    ActionOverTime,
    /// `E_p = hbar / T_p`.
    ReducedActionOverTime,
}

impl EnergyConvention {
    pub fn name(self) -> &'static str {
        match self {
            EnergyConvention::ActionOverTime => "H_OVER_TP",
            EnergyConvention::ReducedActionOverTime => "HBAR_OVER_TP",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::ActionOverTime, Self::ReducedActionOverTime]
            .into_iter()
            .find(|c| c.name() == name)
    }
}

/// Optional replacements for the base constants of a preset.
///
/// At most two of `h`, `c`, `G` may be overridden; everything else is
/// recomputed from the resulting base triple.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScaleOverrides<T> {
    pub h: Option<T>,
    pub c: Option<T>,
    pub g: Option<T>,
    pub energy: Option<EnergyConvention>,
}

/// A consistent set of fundamental and Planck scales.
///
/// Values are immutable after construction. Planck length and time may be
/// zero (the continuum limit), in which case `G = 0` and `E_p = ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckScales<T> {
    h: T,
    hbar: T,
    c: T,
    g: T,
    l_p: T,
    t_p: T,
    e_p: T,
    energy: EnergyConvention,
}

impl<T: Real> PlanckScales<T> {
    pub fn preset(preset: UnitPreset) -> Self {
        let one = T::one();
        match preset {
            UnitPreset::Natural => PlanckScales {
                h: one,
                hbar: one / T::TAU(),
                c: one,
                g: T::TAU(),
                l_p: one,
                t_p: one,
                e_p: one,
                energy: EnergyConvention::ActionOverTime,
            },
            UnitPreset::PlanckGrav => PlanckScales {
                h: T::TAU(),
                hbar: one,
                c: one,
                g: one,
                l_p: one,
                t_p: one,
                e_p: T::TAU(),
                energy: EnergyConvention::ActionOverTime,
            },
            UnitPreset::Si => Self::derive(
                T::lit(si::PLANCK_CONSTANT),
                T::lit(si::SPEED_OF_LIGHT),
                T::lit(si::GRAVITATIONAL_CONSTANT),
                EnergyConvention::ActionOverTime,
            ),
        }
    }

    /// Build scales from the base triple `(h, c, G)`.
    pub fn from_constants(h: T, c: T, g: T) -> Result<Self> {
        check_positive("h", h)?;
        check_positive("c", c)?;
        check_positive("G", g)?;
        Ok(Self::derive(h, c, g, EnergyConvention::ActionOverTime))
    }

    /// Scales with a prescribed Planck length; `G` is solved for.
    ///
    /// `l_p = 0` yields the continuum limit.
    pub fn with_planck_length(h: T, c: T, l_p: T) -> Result<Self> {
        check_positive("h", h)?;
        check_positive("c", c)?;
        if !(l_p >= T::zero()) || !l_p.is_finite() {
            return Err(Error::validation("L_p", format!("must be finite and >= 0, got {l_p}")));
        }
        let hbar = h / T::TAU();
        let t_p = l_p / c;
        Ok(PlanckScales {
            h,
            hbar,
            c,
            g: l_p * l_p * c * c * c / hbar,
            l_p,
            t_p,
            e_p: h / t_p,
            energy: EnergyConvention::ActionOverTime,
        })
    }

    /// Natural units (`h = c = 1`) with the given Planck length.
    pub fn natural_with_planck_length(l_p: T) -> Result<Self> {
        Self::with_planck_length(T::one(), T::one(), l_p)
    }

    /// `L_p = T_p = 0`, `E_p = ∞`: no Planck-scale correction anywhere.
    pub fn continuum(h: T, c: T) -> Result<Self> {
        Self::with_planck_length(h, c, T::zero())
    }

    fn derive(h: T, c: T, g: T, energy: EnergyConvention) -> Self {
        let hbar = h / T::TAU();
        let l_p = (g * hbar / (c * c * c)).sqrt();
        let t_p = l_p / c;
        let e_p = match energy {
            EnergyConvention::ActionOverTime => h / t_p,
            EnergyConvention::ReducedActionOverTime => hbar / t_p,
        };
        PlanckScales {
            h,
            hbar,
            c,
            g,
            l_p,
            t_p,
            e_p,
            energy,
        }
    }

    /// Replace the energy convention, recomputing `E_p`.
    pub fn with_energy_convention(mut self, energy: EnergyConvention) -> Self {
        self.energy = energy;
        self.e_p = match energy {
            EnergyConvention::ActionOverTime => self.h / self.t_p,
            EnergyConvention::ReducedActionOverTime => self.hbar / self.t_p,
        };
        self
    }

    #[inline]
    pub fn h(&self) -> T {
        self.h
    }
    #[inline]
    pub fn hbar(&self) -> T {
        self.hbar
    }
    #[inline]
    pub fn c(&self) -> T {
        self.c
    }
    #[inline]
    pub fn g(&self) -> T {
        self.g
    }
    #[inline]
    pub fn planck_length(&self) -> T {
        self.l_p
    }
    #[inline]
    pub fn planck_time(&self) -> T {
        self.t_p
    }
    #[inline]
    pub fn planck_energy(&self) -> T {
        self.e_p
    }
    #[inline]
    pub fn energy_convention(&self) -> EnergyConvention {
        self.energy
    }

    /// True when there is no minimal length.
    pub fn is_continuum(&self) -> bool {
        self.l_p == T::zero()
    }

    /// Check the constitutive relations to `1e-12` relative (looser for `f32`).
    pub fn check_invariants(&self) -> Result<()> {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        check_positive("h", self.h)?;
        check_positive("hbar", self.hbar)?;
        check_positive("c", self.c)?;
        if self.is_continuum() {
            if self.t_p != T::zero() || self.g != T::zero() {
                return Err(Error::validation("T_p", "continuum scales need T_p = G = 0"));
            }
        } else {
            check_positive("G", self.g)?;
            check_positive("L_p", self.l_p)?;
            check_positive("T_p", self.t_p)?;
            check_positive("E_p", self.e_p)?;
            check_relation("T_p", self.t_p, self.l_p / self.c, tol)?;
            let action = match self.energy {
                EnergyConvention::ActionOverTime => self.h,
                EnergyConvention::ReducedActionOverTime => self.hbar,
            };
            check_relation("E_p", self.e_p, action / self.t_p, tol)?;
        }
        check_relation("hbar", self.hbar, self.h / T::TAU(), tol)
    }
}

/// Build scales from a preset with optional base-constant overrides.
pub fn make_scales<T: Real>(preset: UnitPreset, overrides: &ScaleOverrides<T>) -> Result<PlanckScales<T>> {
    let base = PlanckScales::<T>::preset(preset);
    let named = [("h", overrides.h), ("c", overrides.c), ("G", overrides.g)];
    let mut count = 0;
    for (field, value) in named {
        if let Some(v) = value {
            check_positive(field, v)?;
            count += 1;
            if count > 2 {
                return Err(Error::validation(field, "at most two of h, c, G may be overridden"));
            }
        }
    }
    let energy = overrides.energy.unwrap_or_default();
    let scales = if count == 0 {
        base.with_energy_convention(energy)
    } else {
        PlanckScales::derive(
            overrides.h.unwrap_or(base.h),
            overrides.c.unwrap_or(base.c),
            overrides.g.unwrap_or(base.g),
            energy,
        )
    };
    scales.check_invariants()?;
    Ok(scales)
}

fn check_positive<T: Real>(field: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, format!("must be finite and > 0, got {value}")))
    }
}

fn check_relation<T: Real>(field: &'static str, actual: T, expected: T, tol: T) -> Result<()> {
    if ((actual - expected) / expected).abs() <= tol {
        Ok(())
    } else {
        Err(Error::validation(
            field,
            format!("inconsistent scales: {actual} != {expected}"),
        ))
    }
}

/// Length uncertainty contributed by a clock of a given mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementUncertainty<T> {
    /// `sqrt(hbar L / (m c))`
    pub quantum: T,
    /// `G m / c²`
    pub gravitational: T,
    pub total: T,
}

/// Optimal clock mass and the resulting minimal uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockOptimum<T> {
    pub mass: T,
    pub total: T,
}

/// Lower bound `(L L_p²)^(1/3)` on the uncertainty of a length measurement.
pub fn measurement_floor<T: Real>(length: T, scales: &PlanckScales<T>) -> T {
    (length * scales.l_p * scales.l_p).cbrt()
}

pub fn length_measurement_uncertainty<T: Real>(
    length: T,
    clock_mass: T,
    scales: &PlanckScales<T>,
) -> Result<MeasurementUncertainty<T>> {
    check_positive("length", length)?;
    check_positive("clock mass", clock_mass)?;
    let quantum = (scales.hbar * length / (clock_mass * scales.c)).sqrt();
    let gravitational = scales.g * clock_mass / (scales.c * scales.c);
    Ok(MeasurementUncertainty {
        quantum,
        gravitational,
        total: quantum + gravitational,
    })
}

/// Minimize `a m^(-1/2) + b m` over the clock mass.
///
/// The minimum is `3·2^(-2/3)·(L L_p²)^(1/3)` at `m* = (a / 2b)^(2/3)`.
/// In the continuum (`G = 0`) the optimum runs off to infinite mass with
/// zero uncertainty.
pub fn optimal_clock_mass<T: Real>(length: T, scales: &PlanckScales<T>) -> Result<ClockOptimum<T>> {
    check_positive("length", length)?;
    let a = (scales.hbar * length / scales.c).sqrt();
    let b = scales.g / (scales.c * scales.c);
    if b == T::zero() {
        return Ok(ClockOptimum {
            mass: T::infinity(),
            total: T::zero(),
        });
    }
    let mass = (a / (b + b)).powf(T::lit(2.0 / 3.0));
    let total = T::lit(3.0) * T::lit(2.0).powf(T::lit(-2.0 / 3.0)) * (a * a * b).cbrt();
    Ok(ClockOptimum { mass, total })
}
