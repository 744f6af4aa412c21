//! Planck-corrected dispersion relations, relativistic mass and the
//! infinite square well spectrum.
//!
//! With both space and time discrete the mass shell is
//!
//! ```text
//! E² − p²c² = m0²c⁴ + (3E² + p²c²)(E² − p²c²) / (8 E_p²)
//! ```
//!
//! which is quadratic in `X = E²`. Photons (`m0 = 0`) keep `E = pc` exactly.
//! The single-axis variants correct only the momentum term, with opposite
//! signs.

use crate::error::{Error, Result};
use crate::kinematics::{extremal_scales, invert_length, Branch, DiscretenessVariant, KinematicState, RelationForm};
use crate::scalar::Real;
use crate::units::PlanckScales;

/// `1 / (8 E_p²)`; zero in the continuum.
#[inline]
fn epsilon<T: Real>(scales: &PlanckScales<T>) -> T {
    let e_p = scales.planck_energy();
    T::one() / (T::lit(8.0) * e_p * e_p)
}

/// `3 L_p² p² / (8 h²)`, the single-axis momentum correction.
#[inline]
fn axis_correction<T: Real>(p: T, scales: &PlanckScales<T>) -> T {
    let u = scales.planck_length() * p / scales.h();
    T::lit(3.0) * u * u / T::lit(8.0)
}

/// Residual of the variant's mass-shell relation (zero on shell).
pub fn dispersion_residual<T: Real>(
    state: &KinematicState<T>,
    variant: DiscretenessVariant,
    scales: &PlanckScales<T>,
) -> T {
    let c = scales.c();
    let e2 = state.e * state.e;
    let pp = state.p * state.p * c * c;
    let mm = state.m0 * state.m0 * c * c * c * c;
    match variant {
        DiscretenessVariant::Both => {
            let shell = e2 - pp;
            shell - mm - (T::lit(3.0) * e2 + pp) * shell * epsilon(scales)
        }
        DiscretenessVariant::SpaceOnly => e2 - mm - pp * (T::one() - axis_correction(state.p, scales)),
        DiscretenessVariant::TimeOnly => e2 - mm - pp * (T::one() + axis_correction(state.p, scales)),
        DiscretenessVariant::Continuum => e2 - pp - mm,
    }
}

/// Residual of the first-order form `E² − p²c² − m0²c⁴(1 + (3E² + p²c²)/(8E_p²))`.
///
/// Only the two-axis relation has a distinct first-order form; the single
/// axis variants and the continuum return their exact residual.
pub fn dispersion_first_order<T: Real>(
    state: &KinematicState<T>,
    variant: DiscretenessVariant,
    scales: &PlanckScales<T>,
) -> T {
    if variant != DiscretenessVariant::Both {
        return dispersion_residual(state, variant, scales);
    }
    let c = scales.c();
    let e2 = state.e * state.e;
    let pp = state.p * state.p * c * c;
    let mm = state.m0 * state.m0 * c * c * c * c;
    e2 - pp - mm * (T::one() + (T::lit(3.0) * e2 + pp) * epsilon(scales))
}

/// Energy on the mass shell for momentum `p` and rest mass `m0`.
///
/// For [`DiscretenessVariant::Both`] this is the root of
/// `3εX² − (1+2εP)X + (P+M−εP²) = 0` continuous with `X = P+M` at `ε = 0`,
/// evaluated in rationalized form so the small-`ε` limit is exact.
pub fn solve_energy<T: Real>(p: T, m0: T, variant: DiscretenessVariant, scales: &PlanckScales<T>) -> Result<T> {
    if !p.is_finite() {
        return Err(Error::Domain {
            quantity: "momentum",
            value: p.as_f64(),
            requirement: "must be finite",
        });
    }
    if !(m0 >= T::zero()) || !m0.is_finite() {
        return Err(Error::Domain {
            quantity: "rest mass",
            value: m0.as_f64(),
            requirement: "must be finite and >= 0",
        });
    }
    let c = scales.c();
    let pp = p * p * c * c;
    let mm = m0 * m0 * c * c * c * c;
    let x = match variant {
        DiscretenessVariant::Both => {
            let eps = epsilon(scales);
            let b = T::one() + T::lit(2.0) * eps * pp;
            let constant = pp + mm - eps * pp * pp;
            let disc = b * b - T::lit(12.0) * eps * constant;
            if disc < T::zero() {
                return Err(Error::NoSolution {
                    what: "mass shell",
                    detail: format!("negative discriminant {disc}"),
                });
            }
            let x = T::lit(2.0) * constant / (b + disc.sqrt());
            if x < T::zero() {
                return Err(Error::NoSolution {
                    what: "mass shell",
                    detail: format!("no positive energy: E² = {x}"),
                });
            }
            x
        }
        DiscretenessVariant::SpaceOnly => mm + pp * (T::one() - axis_correction(p, scales)),
        DiscretenessVariant::TimeOnly => mm + pp * (T::one() + axis_correction(p, scales)),
        DiscretenessVariant::Continuum => pp + mm,
    };
    if x < T::zero() {
        return Err(Error::NoSolution {
            what: "mass shell",
            detail: format!("E² = {x} is negative beyond the momentum cutoff"),
        });
    }
    Ok(x.sqrt())
}

/// Nonrelativistic energy `(p²/2m)(1 − L_p²p²/(2h²))`.
pub fn energy_nonrelativistic<T: Real>(p: T, m: T, scales: &PlanckScales<T>) -> Result<T> {
    if !(m > T::zero()) {
        return Err(Error::Domain {
            quantity: "mass",
            value: m.as_f64(),
            requirement: "must be > 0",
        });
    }
    let u = scales.planck_length() * p / scales.h();
    Ok(p * p / (T::lit(2.0) * m) * (T::one() - u * u / T::lit(2.0)))
}

/// Relativistic mass `[γ + (3E0²/(16E_p²))γ³] m0` with `E0 = m0c²`.
pub fn relativistic_mass<T: Real>(v: T, m0: T, scales: &PlanckScales<T>) -> Result<T> {
    let c = scales.c();
    if !(v.abs() < c) {
        return Err(Error::Domain {
            quantity: "velocity",
            value: v.as_f64(),
            requirement: "|v| must be below c",
        });
    }
    if !(m0 >= T::zero()) || !m0.is_finite() {
        return Err(Error::Domain {
            quantity: "rest mass",
            value: m0.as_f64(),
            requirement: "must be finite and >= 0",
        });
    }
    let beta = v / c;
    let gamma = (T::one() - beta * beta).sqrt().recip();
    let e0 = m0 * c * c;
    let e_p = scales.planck_energy();
    let correction = T::lit(3.0) * e0 * e0 / (T::lit(16.0) * e_p * e_p);
    Ok((gamma + correction * gamma * gamma * gamma) * m0)
}

/// First-order photon group velocity for each variant.
///
/// Space-only discreteness speeds photons up, time-only slows them down and
/// with both the speed stays `c`.
pub fn photon_group_velocity_first_order<T: Real>(p: T, variant: DiscretenessVariant, scales: &PlanckScales<T>) -> T {
    let c = scales.c();
    let u = scales.planck_length() * p / scales.h();
    let shift = T::lit(3.0) * u * u / T::lit(16.0);
    match variant {
        DiscretenessVariant::SpaceOnly => c * (T::one() + shift),
        DiscretenessVariant::TimeOnly => c * (T::one() - shift),
        DiscretenessVariant::Both | DiscretenessVariant::Continuum => c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellSpec<T> {
    pub width: T,
    pub mass: T,
    pub n_max: usize,
}

impl<T: Real> WellSpec<T> {
    pub const MAX_LEVELS: usize = 1_000_000;

    pub fn new(width: T, mass: T, n_max: usize) -> Result<Self> {
        let spec = WellSpec { width, mass, n_max };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > T::zero()) || !self.width.is_finite() {
            return Err(Error::validation(
                "well width",
                format!("must be > 0, got {}", self.width),
            ));
        }
        if !(self.mass > T::zero()) || !self.mass.is_finite() {
            return Err(Error::validation(
                "particle mass",
                format!("must be > 0, got {}", self.mass),
            ));
        }
        if self.n_max == 0 || self.n_max > Self::MAX_LEVELS {
            return Err(Error::validation(
                "n_max",
                format!("must lie in [1, {}], got {}", Self::MAX_LEVELS, self.n_max),
            ));
        }
        Ok(())
    }

    /// Textbook level `n²h² / (8 m L²)`.
    pub fn unrevised_level(&self, n: usize, scales: &PlanckScales<T>) -> T {
        let n = T::from_count(n);
        let h = scales.h();
        n * n * h * h / (T::lit(8.0) * self.mass * self.width * self.width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WellModel {
    /// `E_n' = E_n (1 + T_p² E_n² / (4h²))`.
    #[default]
    PaperFormula,
    /// Quantize `λ_n = 2L/n`, invert the corrected wavelength on the low
    /// momentum branch and evaluate the nonrelativistic energy.
    SpatialQuantization,
}

impl WellModel {
    pub fn name(self) -> &'static str {
        match self {
            WellModel::PaperFormula => "PAPER_FORMULA",
            WellModel::SpatialQuantization => "SPATIAL_QUANTIZATION",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [WellModel::PaperFormula, WellModel::SpatialQuantization]
            .into_iter()
            .find(|m| m.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellLevel<T> {
    pub n: usize,
    pub unrevised: T,
    /// `None` when the level's wavelength is below the minimal wavelength.
    pub revised: Option<T>,
}

pub fn well_levels<T: Real>(
    spec: &WellSpec<T>,
    model: WellModel,
    scales: &PlanckScales<T>,
) -> Result<Vec<WellLevel<T>>> {
    spec.validate()?;
    let h = scales.h();
    let t_p = scales.planck_time();
    let lambda_min = extremal_scales(DiscretenessVariant::Both, RelationForm::Linear, scales).lambda_min;
    (1..=spec.n_max)
        .map(|n| {
            let unrevised = spec.unrevised_level(n, scales);
            let revised = match model {
                WellModel::PaperFormula => {
                    let r = t_p * unrevised / h;
                    Some(unrevised * (T::one() + r * r / T::lit(4.0)))
                }
                WellModel::SpatialQuantization => {
                    let lambda = T::lit(2.0) * spec.width / T::from_count(n);
                    if lambda < lambda_min {
                        None
                    } else {
                        let p = invert_length(
                            lambda,
                            DiscretenessVariant::Both,
                            RelationForm::Linear,
                            Branch::LowP,
                            scales,
                        )?;
                        Some(energy_nonrelativistic(p, spec.mass, scales)?)
                    }
                }
            };
            Ok(WellLevel { n, unrevised, revised })
        })
        .collect()
}
