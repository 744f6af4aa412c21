//! Matter-wave kinematics with a minimal length and time.
//!
//! Planck-corrected de Broglie relations, bounded energy–momentum
//! transforms, modified dispersion relations, a generalized uncertainty
//! relation, a split-step spectral solver for the modified Schrödinger
//! equation and photon time-of-flight delays.
//!
//! Every operation is generic over the floating point type through
//! [`Real`]; the aliases at the crate root fix it to `f64`.

pub mod dispersion;
pub mod error;
pub mod evolve;
pub mod kinematics;
pub mod packet;
pub mod phenomenology;
pub mod roots;
pub mod scalar;
pub mod uncertainty;
pub mod units;

pub use error::{Error, Result};
pub use kinematics::{Axis, Branch, DiscretenessVariant, RelationForm};
pub use scalar::Real;
pub use units::{EnergyConvention, UnitPreset};

pub type Scales = units::PlanckScales<f64>;
pub type Scales32 = units::PlanckScales<f32>;
pub type Overrides = units::ScaleOverrides<f64>;
pub type State = kinematics::KinematicState<f64>;
pub type Packet = packet::WavePacket<f64>;
pub type Packet32 = packet::WavePacket<f32>;
pub type Well = dispersion::WellSpec<f64>;
pub type EvolveOpts = evolve::EvolveOptions<f64>;
pub type Tof = phenomenology::TofScenario<f64>;
