//! Photon time-of-flight delays from wavelength-dependent light speed.
//!
//! A photon of momentum `p` crossing a distance `D` at constant group
//! velocity arrives `Δt = D (1/v_g − 1/c)` after a speed-`c` reference.

use crate::dispersion::{photon_group_velocity_first_order, solve_energy};
use crate::error::{Error, Result};
use crate::kinematics::{debroglie_length, group_velocity, DiscretenessVariant, RelationForm};
use crate::scalar::Real;
use crate::units::PlanckScales;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DelayFormula {
    /// Expansion of the group velocity to order `L_p²p²`.
    #[default]
    FirstOrder,
    /// `p c² / E` on the exact photon mass shell.
    Exact,
}

impl DelayFormula {
    pub fn name(self) -> &'static str {
        match self {
            DelayFormula::FirstOrder => "FIRST_ORDER",
            DelayFormula::Exact => "EXACT",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [DelayFormula::FirstOrder, DelayFormula::Exact]
            .into_iter()
            .find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TofScenario<T> {
    pub distance: T,
    pub momenta: Vec<T>,
    pub variant: DiscretenessVariant,
    pub formula: DelayFormula,
}

impl<T: Real> TofScenario<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.distance > T::zero()) || !self.distance.is_finite() {
            return Err(Error::validation(
                "distance",
                format!("must be > 0, got {}", self.distance),
            ));
        }
        if let Some(p) = self.momenta.iter().find(|&&p| !(p > T::zero()) || !p.is_finite()) {
            return Err(Error::validation("p_values", format!("momenta must be > 0, got {p}")));
        }
        Ok(())
    }
}

/// Photon group velocity under the chosen formula.
pub fn photon_group_velocity<T: Real>(
    p: T,
    variant: DiscretenessVariant,
    formula: DelayFormula,
    scales: &PlanckScales<T>,
) -> Result<T> {
    match formula {
        DelayFormula::FirstOrder => Ok(photon_group_velocity_first_order(p, variant, scales)),
        DelayFormula::Exact => {
            let e = solve_energy(p, T::zero(), variant, scales)?;
            group_velocity(e, p, scales)
        }
    }
}

/// Arrival delay relative to propagation at `c`; negative means early.
pub fn tof_delay<T: Real>(
    p: T,
    distance: T,
    variant: DiscretenessVariant,
    formula: DelayFormula,
    scales: &PlanckScales<T>,
) -> Result<T> {
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::Domain {
            quantity: "momentum",
            value: p.as_f64(),
            requirement: "must be finite and > 0",
        });
    }
    if !(distance > T::zero()) || !distance.is_finite() {
        return Err(Error::Domain {
            quantity: "distance",
            value: distance.as_f64(),
            requirement: "must be finite and > 0",
        });
    }
    if matches!(variant, DiscretenessVariant::Both | DiscretenessVariant::Continuum) {
        return Ok(T::zero());
    }
    let v = photon_group_velocity(p, variant, formula, scales)?;
    Ok(distance * (v.recip() - scales.c().recip()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayRow<T> {
    pub p: T,
    pub wavelength: T,
    pub group_velocity: T,
    pub delay: T,
}

/// One row per momentum, in input order.
pub fn delay_sweep<T: Real>(scenario: &TofScenario<T>, scales: &PlanckScales<T>) -> Result<Vec<DelayRow<T>>> {
    scenario.validate()?;
    scenario
        .momenta
        .iter()
        .map(|&p| {
            Ok(DelayRow {
                p,
                wavelength: debroglie_length(p, scenario.variant, RelationForm::Linear, scales)?,
                group_velocity: photon_group_velocity(p, scenario.variant, scenario.formula, scales)?,
                delay: tof_delay(p, scenario.distance, scenario.variant, scenario.formula, scales)?,
            })
        })
        .collect()
}
