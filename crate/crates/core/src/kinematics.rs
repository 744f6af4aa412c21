//! Planck-corrected de Broglie relations.
//!
//! With a minimal length the wavelength of a particle of momentum `p` is
//!
//! ```text
//! linear:       λ = h/p + L_p² p / (4h)
//! exponential:  λ = (h/p) · exp(L_p² p² / (4h²))
//! ```
//!
//! and the period mirrors it with `(E, T_p)` in place of `(p, L_p)`. Which
//! axis carries the correction is chosen by [`DiscretenessVariant`].
//!
//! Signed kinematics only enters through [`planck_transform`]; the
//! wavelength and period operations act on magnitudes.

use crate::error::{Error, Result};
use crate::roots::{default_rtol, invert_gaussian_ramp, newton_bisect};
use crate::scalar::{gaussian_ramp_supremum, Real};
use crate::units::PlanckScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DiscretenessVariant {
    /// Minimal length and minimal time.
    #[default]
    Both,
    /// Minimal length only; time is continuous.
    SpaceOnly,
    /// Minimal time only; space is continuous.
    TimeOnly,
    /// No minimal unit on either axis.
    Continuum,
}

impl DiscretenessVariant {
    pub const ALL: [Self; 4] = [Self::Both, Self::SpaceOnly, Self::TimeOnly, Self::Continuum];

    pub fn name(self) -> &'static str {
        match self {
            Self::Both => "BOTH",
            Self::SpaceOnly => "SPACE_ONLY",
            Self::TimeOnly => "TIME_ONLY",
            Self::Continuum => "CONTINUUM",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    /// Whether the wavelength relation carries a Planck correction.
    pub fn corrects_space(self) -> bool {
        matches!(self, Self::Both | Self::SpaceOnly)
    }

    /// Whether the period relation carries a Planck correction.
    pub fn corrects_time(self) -> bool {
        matches!(self, Self::Both | Self::TimeOnly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RelationForm {
    #[default]
    Linear,
    Exponential,
}

impl RelationForm {
    pub const ALL: [Self; 2] = [Self::Linear, Self::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "LINEAR",
            Self::Exponential => "EXPONENTIAL",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Space,
    Time,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Space => "SPACE",
            Axis::Time => "TIME",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Axis::Space, Axis::Time].into_iter().find(|a| a.name() == name)
    }

    /// Planck unit of the axis (`L_p` or `T_p`).
    fn planck_unit<T: Real>(self, scales: &PlanckScales<T>) -> T {
        match self {
            Axis::Space => scales.planck_length(),
            Axis::Time => scales.planck_time(),
        }
    }
}

/// Root selection for wavelength inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Branch {
    /// The root below the extremal momentum.
    #[default]
    LowP,
    /// The trans-Planckian root above it.
    HighP,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::LowP => "LOW_P",
            Branch::HighP => "HIGH_P",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Branch::LowP, Branch::HighP].into_iter().find(|b| b.name() == name)
    }
}

/// A `(p, E, m0)` triple tested against a dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState<T> {
    pub p: T,
    pub e: T,
    pub m0: T,
}

impl<T: Real> KinematicState<T> {
    pub fn new(p: T, e: T, m0: T) -> Result<Self> {
        if !p.is_finite() || !e.is_finite() {
            return Err(Error::validation("state", "p and E must be finite"));
        }
        if !(m0 >= T::zero()) || !m0.is_finite() {
            return Err(Error::validation("m0", format!("must be finite and >= 0, got {m0}")));
        }
        Ok(KinematicState { p, e, m0 })
    }
}

/// Shared body of the wavelength and period relations.
///
/// `x` is momentum or energy, `unit` the Planck length or time.
fn corrected_relation<T: Real>(
    quantity: &'static str,
    x: T,
    unit: T,
    corrected: bool,
    form: RelationForm,
    h: T,
) -> Result<T> {
    let x = x.abs();
    if x == T::zero() || !x.is_finite() {
        return Err(Error::Domain {
            quantity,
            value: x.as_f64(),
            requirement: "must be finite and non-zero",
        });
    }
    let base = h / x;
    if !corrected || unit == T::zero() {
        return Ok(base);
    }
    let value = match form {
        RelationForm::Linear => base + unit * unit * x / (T::lit(4.0) * h),
        RelationForm::Exponential => {
            let arg = unit * x / h;
            base * (arg * arg / T::lit(4.0)).exp()
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        // exp overflows once u²/4 exceeds ln(MAX).
        let limit = T::lit(2.0) * T::max_value().ln().sqrt() * h / unit;
        Err(Error::Saturation {
            quantity,
            argument: x.as_f64(),
            limit: limit.as_f64(),
        })
    }
}

/// Wavelength of a particle with momentum `p`.
pub fn debroglie_length<T: Real>(
    p: T,
    variant: DiscretenessVariant,
    form: RelationForm,
    scales: &PlanckScales<T>,
) -> Result<T> {
    corrected_relation(
        "momentum",
        p,
        scales.planck_length(),
        variant.corrects_space(),
        form,
        scales.h(),
    )
}

/// Period of a particle with energy `e`.
pub fn debroglie_period<T: Real>(
    e: T,
    variant: DiscretenessVariant,
    form: RelationForm,
    scales: &PlanckScales<T>,
) -> Result<T> {
    corrected_relation(
        "energy",
        e,
        scales.planck_time(),
        variant.corrects_time(),
        form,
        scales.h(),
    )
}

/// Bounded energy–momentum map `x ↦ x·exp(-u²x²/(4h²))` with `u = L_p` or `T_p`.
pub fn planck_transform<T: Real>(x: T, axis: Axis, scales: &PlanckScales<T>) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Domain {
            quantity: "transform argument",
            value: x.as_f64(),
            requirement: "must be finite",
        });
    }
    let u = axis.planck_unit(scales) * x / scales.h();
    Ok(x * (-u * u / T::lit(4.0)).exp())
}

/// Supremum of `|planck_transform|`: `√2·e^(-1/2)·h/unit`.
///
/// This is strictly below the nominal value space bound `h/unit`.
pub fn transform_supremum<T: Real>(axis: Axis, scales: &PlanckScales<T>) -> T {
    gaussian_ramp_supremum::<T>() * scales.h() / axis.planck_unit(scales)
}

/// Inverse of [`planck_transform`] on the monotonic branch `|x| ≤ √2·h/unit`.
pub fn invert_planck_transform<T: Real>(y: T, axis: Axis, scales: &PlanckScales<T>) -> Result<T> {
    if !y.is_finite() {
        return Err(Error::Domain {
            quantity: "transformed value",
            value: y.as_f64(),
            requirement: "must be finite",
        });
    }
    let unit = axis.planck_unit(scales);
    if unit == T::zero() {
        return Ok(y);
    }
    let h = scales.h();
    let v = y.abs() * unit / h;
    let sup = gaussian_ramp_supremum::<T>();
    // Allow a few ulp of slack so the supremum itself round-trips.
    if v > sup * (T::one() + T::epsilon() * T::lit(4.0)) {
        return Err(Error::OutOfRange {
            map: "planck transform",
            quantity: "transformed value",
            value: y.as_f64(),
            supremum: transform_supremum(axis, scales).as_f64(),
        });
    }
    let u = invert_gaussian_ramp(v)?;
    Ok((u * h / unit).copysign(y))
}

/// Minimum wavelength and period with the momentum and energy attaining them.
///
/// `None` for an extremal argument means the axis is uncorrected: the
/// infimum 0 is approached as the argument grows without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalScales<T> {
    pub lambda_min: T,
    pub p_star: Option<T>,
    pub period_min: T,
    pub e_star: Option<T>,
}

fn extremum<T: Real>(unit: T, corrected: bool, form: RelationForm, h: T) -> (T, Option<T>) {
    if !corrected || unit == T::zero() {
        return (T::zero(), None);
    }
    match form {
        RelationForm::Linear => (unit, Some(T::lit(2.0) * h / unit)),
        RelationForm::Exponential => ((T::E() / T::lit(2.0)).sqrt() * unit, Some(T::SQRT_2() * h / unit)),
    }
}

pub fn extremal_scales<T: Real>(
    variant: DiscretenessVariant,
    form: RelationForm,
    scales: &PlanckScales<T>,
) -> ExtremalScales<T> {
    let h = scales.h();
    let (lambda_min, p_star) = extremum(scales.planck_length(), variant.corrects_space(), form, h);
    let (period_min, e_star) = extremum(scales.planck_time(), variant.corrects_time(), form, h);
    ExtremalScales {
        lambda_min,
        p_star,
        period_min,
        e_star,
    }
}

/// Momentum with the given wavelength.
///
/// On a corrected axis two momenta share every wavelength above the minimum;
/// `branch` picks one. Uncorrected axes have the single root `h/λ`.
pub fn invert_length<T: Real>(
    lambda: T,
    variant: DiscretenessVariant,
    form: RelationForm,
    branch: Branch,
    scales: &PlanckScales<T>,
) -> Result<T> {
    let h = scales.h();
    let l_p = scales.planck_length();
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::Domain {
            quantity: "wavelength",
            value: lambda.as_f64(),
            requirement: "must be finite and > 0",
        });
    }
    if !variant.corrects_space() || l_p == T::zero() {
        return match branch {
            Branch::LowP => Ok(h / lambda),
            Branch::HighP => Err(Error::NoSolution {
                what: "wavelength inversion",
                detail: "uncorrected axis has no high-momentum root".into(),
            }),
        };
    }
    let ext = extremal_scales(variant, form, scales);
    let lambda_min = ext.lambda_min;
    let p_star = ext.p_star.expect("corrected axis has an extremum");
    if lambda < lambda_min {
        return Err(Error::NoSolution {
            what: "wavelength inversion",
            detail: format!("wavelength {lambda} is below the minimum {lambda_min}"),
        });
    }
    match form {
        RelationForm::Linear => {
            // L_p² p² / (4h) − λ p + h = 0; roots multiply to 4h²/L_p².
            let disc = ((lambda - l_p) * (lambda + l_p)).max(T::zero()).sqrt();
            let two_h = T::lit(2.0) * h;
            Ok(match branch {
                Branch::LowP => two_h / (lambda + disc),
                Branch::HighP => two_h * (lambda + disc) / (l_p * l_p),
            })
        }
        RelationForm::Exponential => {
            // In u = p L_p / h: −ln u + u²/4 = ln(λ/L_p), extremum at u = √2.
            let target = (lambda / l_p).ln();
            let quarter = T::lit(0.25);
            let f = |u: T| (quarter * u * u - u.ln() - target, T::lit(0.5) * u - u.recip());
            let u_star = T::SQRT_2();
            if f(u_star).0 >= T::zero() {
                // At the minimum up to rounding.
                return Ok(p_star);
            }
            let u = match branch {
                Branch::LowP => {
                    // f(u) ≥ u²/4 > 0 at u = L_p/λ < √2.
                    let lo = (l_p / lambda).min(u_star);
                    newton_bisect(f, lo, u_star, lo, T::zero(), default_rtol())?
                }
                Branch::HighP => {
                    let mut hi = T::lit(3.0).max(T::lit(4.0) * target.abs().sqrt());
                    while f(hi).0 <= T::zero() {
                        hi = hi * T::lit(2.0);
                    }
                    newton_bisect(f, u_star, hi, hi, T::zero(), default_rtol())?
                }
            };
            Ok(u * h / l_p)
        }
    }
}

/// Kinematic group velocity `p c² / E`, from `p = m v_g` and `E = m c²`.
///
/// This is deliberately not `∂E/∂p`.
pub fn group_velocity<T: Real>(e: T, p: T, scales: &PlanckScales<T>) -> Result<T> {
    if !(e > T::zero()) || !e.is_finite() {
        return Err(Error::Domain {
            quantity: "energy",
            value: e.as_f64(),
            requirement: "must be finite and > 0",
        });
    }
    let c = scales.c();
    Ok(p * c * c / e)
}
