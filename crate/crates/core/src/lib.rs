//! Levitated electromechanics: a charged nano- or micro-particle in a Paul
//! trap, read out and cooled through an RLC circuit.
//!
//! * [`model`]: particle, trap and circuit types with closed-form rates.
//! * [`noise`]: fluctuation-dissipation force sampling per noise channel.
//! * [`dynamics`]: stochastic integration of the reduced (particle only)
//!   and coupled (particle plus circuit) equations of motion.
//! * [`feedback`], [`sensing`]: closed-form cooling and detection limits.
//! * [`analysis`]: spectra, secular temperatures and damping fits.
//! * [`quantum`]: Gaussian moment dynamics of the particle-circuit system.
//!
//! The physics is generic over [`Scalar`] (`f32`/`f64`); the aliases at the
//! crate root name the `f64` instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod constants;
pub mod dynamics;
mod error;
pub mod feedback;
pub mod mathieu;
pub mod model;
pub mod noise;
pub mod quantum;
mod scalar;
pub mod sensing;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ParticleSpecF64 = model::ParticleSpec<f64>;
pub type ParticleSpecF32 = model::ParticleSpec<f32>;
pub type TrapConfigF64 = model::TrapConfig<f64>;
pub type TrapConfigF32 = model::TrapConfig<f32>;
pub type CircuitConfigF64 = model::CircuitConfig<f64>;
pub type CircuitConfigF32 = model::CircuitConfig<f32>;
pub type DerivedParamsF64 = model::DerivedParams<f64>;
pub type NoiseEnvironmentF64 = noise::NoiseEnvironment<f64>;
pub type FeedbackConfigF64 = feedback::FeedbackConfig<f64>;
pub type SystemF64 = dynamics::System<f64>;
pub type SystemF32 = dynamics::System<f32>;
pub type TrajectoryF64 = dynamics::Trajectory<f64>;
pub type TrajectoryF32 = dynamics::Trajectory<f32>;
pub type SensingQueryF64 = sensing::SensingQuery<f64>;
