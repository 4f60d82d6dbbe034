#![allow(dead_code)]

use levem_core::dynamics::System;
use levem_core::feedback::FeedbackConfig;
use levem_core::model::{CircuitConfig, GasParams, ParticleSpec, TrapConfig};
use levem_core::noise::NoiseEnvironment;

pub const KB: f64 = 1.380_649e-23;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const E: f64 = 1.602_176_634e-19;
pub const AMU: f64 = 1.660_539_066_60e-27;
pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// 1 um silica in the reference trap with a series circuit.
pub fn system(charge_e: f64, resistance: f64, quality_factor: f64, t_r: f64) -> System {
    system_with(
        charge_e,
        CircuitConfig::series(resistance, quality_factor, t_r),
        1e-10,
        FeedbackConfig::default(),
    )
}

pub fn system_with(
    charge_e: f64,
    circuit: CircuitConfig,
    pressure_mbar: f64,
    feedback: FeedbackConfig,
) -> System {
    let mut noise = NoiseEnvironment::new(circuit.temperature, 0);
    noise.gas = GasParams::nitrogen_mbar(pressure_mbar);
    System::new(
        ParticleSpec::silica(1e-6, charge_e).unwrap(),
        TrapConfig::reference(),
        circuit,
        noise,
        feedback,
    )
    .unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
