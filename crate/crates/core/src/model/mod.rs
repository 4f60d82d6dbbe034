//! Domain types and closed-form derived quantities: particle, Paul trap,
//! RLC circuit, damping rates and charge limits.

mod circuit;
mod derived;
mod particle;
mod rates;
mod trap;

pub use circuit::{effective_resistance, CircuitConfig, ResolvedCircuit, Topology, Tuning};
pub use derived::DerivedParams;
pub use particle::{derive_mass, ParticleSpec};
pub use rates::{
    adiabatic_damping_rate, charge_limits, electrode_heating_rate, electrode_noise_psd,
    gas_damping_rate, mirror_shift_fraction, resistive_damping_rate, resonant_damping_rate,
    ChargeLimits, ElectrodeNoise, GasParams, Material,
};
pub use trap::{stability_params, StabilityParams, TrapConfig, MATHIEU_Q_BOUNDARY};
