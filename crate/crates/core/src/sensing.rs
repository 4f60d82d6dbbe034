//! Detection and sensitivity limits of a resistively read-out particle.
//!
//! A particle in equilibrium with the circuit at `T_R` is visible above the
//! Johnson noise in bandwidth `dnu` when its damping exceeds `4 dnu`; the
//! thermal force noise at that damping sets the force sensitivity.

use crate::constants::{hbar, k_b};
use crate::error::{Error, Result};
use crate::model::{
    effective_resistance, resistive_damping_rate, stability_params, CircuitConfig, ParticleSpec,
    ResolvedCircuit, TrapConfig,
};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingQuery<T: Scalar = f64> {
    pub particle: ParticleSpec<T>,
    pub trap: TrapConfig<T>,
    /// Read-out circuit; its temperature is `T_R`.
    pub circuit: CircuitConfig<T>,
    /// Detection bandwidth `dnu` [Hz].
    pub bandwidth: T,
    /// Secular frequency [rad/s]; from the trap when unset.
    pub omega_z: Option<T>,
    /// Particle damping [1/s]; the on-resonance resistive rate when unset.
    pub gamma: Option<T>,
}

impl<T: Scalar> SensingQuery<T> {
    pub fn new(
        particle: ParticleSpec<T>,
        trap: TrapConfig<T>,
        circuit: CircuitConfig<T>,
        bandwidth: T,
    ) -> Self {
        Self {
            particle,
            trap,
            circuit,
            bandwidth,
            omega_z: None,
            gamma: None,
        }
    }

    fn check_bandwidth(&self) -> Result<()> {
        if !(self.bandwidth > T::zero()) {
            return Err(Error::invalid("bandwidth", "must be positive"));
        }
        Ok(())
    }

    pub fn temperature(&self) -> T {
        self.circuit.temperature
    }

    pub fn omega(&self) -> Result<T> {
        match self.omega_z {
            Some(w) if w > T::zero() => Ok(w),
            Some(_) => Err(Error::invalid("omega_z", "must be positive")),
            None => Ok(stability_params(&self.trap, &self.particle)?.omega_z),
        }
    }

    pub fn resolved_circuit(&self) -> Result<ResolvedCircuit<T>> {
        self.circuit.resolve(self.omega()?)
    }

    pub fn r_eff(&self) -> Result<T> {
        let w = self.omega()?;
        Ok(effective_resistance(&self.circuit.resolve(w)?, w))
    }

    /// On-resonance resistive damping `(q eta / d)^2 R_eff / M`.
    pub fn gamma_res(&self) -> Result<T> {
        Ok(resistive_damping_rate(
            &self.particle,
            &self.trap,
            self.r_eff()?,
        ))
    }

    /// Damping used by the velocity and force limits.
    pub fn damping(&self) -> Result<T> {
        match self.gamma {
            Some(g) if g >= T::zero() => Ok(g),
            Some(_) => Err(Error::invalid("gamma", "must be non-negative")),
            None => self.gamma_res(),
        }
    }
}

/// `sqrt(4 k_B T_R dnu / (M gamma))`.
pub fn min_velocity<T: Scalar>(query: &SensingQuery<T>) -> Result<T> {
    query.check_bandwidth()?;
    let gamma = query.damping()?;
    if !(gamma > T::zero()) {
        return Err(Error::invalid("gamma", "must be positive"));
    }
    Ok(
        (T::lit(4.0) * k_b::<T>() * query.temperature() * query.bandwidth
            / (query.particle.mass() * gamma))
            .sqrt(),
    )
}

/// `min_velocity / w_z`.
pub fn min_displacement<T: Scalar>(query: &SensingQuery<T>) -> Result<T> {
    Ok(min_velocity(query)? / query.omega()?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection<T: Scalar = f64> {
    /// `gamma_res > 4 dnu`.
    pub detectable: bool,
    /// Peak signal over Johnson noise, `I_max R_eff / V_R = sqrt(gamma_res / (4 dnu))`.
    pub margin: T,
}

/// Whether a particle thermalised with the circuit stands out of the
/// resistor noise. Uses the resistive damping of the configured particle.
pub fn detection_requirement<T: Scalar>(query: &SensingQuery<T>) -> Result<Detection<T>> {
    query.check_bandwidth()?;
    let gamma = query.gamma_res()?;
    let required = T::lit(4.0) * query.bandwidth;
    Ok(Detection {
        detectable: gamma > required,
        margin: (gamma / required).sqrt(),
    })
}

/// `gamma sqrt(k_B T_R M)` at the query damping, which must reach `4 dnu`.
pub fn min_force<T: Scalar>(query: &SensingQuery<T>) -> Result<T> {
    query.check_bandwidth()?;
    let gamma = query.damping()?;
    let required = T::lit(4.0) * query.bandwidth;
    if gamma < required {
        return Err(Error::BelowDetectionLimit {
            gamma: gamma.as_f64(),
            required: required.as_f64(),
        });
    }
    Ok(gamma * (k_b::<T>() * query.temperature() * query.particle.mass()).sqrt())
}

/// Force limit at the optimal damping `gamma = 4 dnu`.
pub fn min_force_at_detection_limit<T: Scalar>(query: &SensingQuery<T>) -> Result<T> {
    min_force(&SensingQuery {
        gamma: Some(T::lit(4.0) * query.bandwidth),
        ..*query
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassLimit<T: Scalar = f64> {
    /// Minimum `|q| / sqrt(M)` [C/kg^(1/2)], `sqrt(2 dnu / R_eff) d / eta`.
    pub threshold: T,
    /// Largest detectable mass at the given charge [kg], `(q eta / d)^2 R_eff / (2 dnu)`.
    pub max_mass: T,
}

pub fn detectable_charge_to_mass<T: Scalar>(
    trap: &TrapConfig<T>,
    r_eff: T,
    bandwidth: T,
    charge: T,
) -> Result<MassLimit<T>> {
    if !(r_eff > T::zero()) {
        return Err(Error::invalid("r_eff", "must be positive"));
    }
    if !(bandwidth > T::zero()) {
        return Err(Error::invalid("bandwidth", "must be positive"));
    }
    let two = T::lit(2.0);
    let g = charge * trap.eta / trap.d;
    Ok(MassLimit {
        threshold: (two * bandwidth / r_eff).sqrt() * trap.d / trap.eta,
        max_mass: g * g * r_eff / (two * bandwidth),
    })
}

/// Zero-point amplitude `sqrt(hbar / (2 M w))` and thermal occupancy
/// `k_B T / (hbar w)`.
pub fn zero_point_and_occupancy<T: Scalar>(
    particle: &ParticleSpec<T>,
    omega_z: T,
    temperature: T,
) -> Result<(T, T)> {
    if !(omega_z > T::zero()) {
        return Err(Error::invalid("omega_z", "must be positive"));
    }
    if !(temperature >= T::zero()) {
        return Err(Error::invalid("temperature", "must be non-negative"));
    }
    let z_zpf = (hbar::<T>() / (T::lit(2.0) * particle.mass() * omega_z)).sqrt();
    Ok((z_zpf, k_b::<T>() * temperature / (hbar::<T>() * omega_z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const MHZ: f64 = 2.0 * PI * 1e6;

    fn query(radius: f64, t_r: f64) -> SensingQuery {
        SensingQuery::new(
            ParticleSpec::silica(radius, 1e5).unwrap(),
            TrapConfig::reference(),
            CircuitConfig::series(100e6, 100.0, t_r),
            1.0,
        )
    }

    #[test]
    fn velocity_and_displacement() {
        let q = SensingQuery {
            gamma: Some(1e3),
            omega_z: Some(MHZ),
            ..query(500e-9, 300.0)
        };
        // sqrt(4 k_B 300 / (1.1519e-15 * 1e3))
        let v = min_velocity(&q).unwrap();
        assert!((v / 1.199e-4 - 1.0).abs() < 2e-3, "{v:e}");
        let z = min_displacement(&q).unwrap();
        assert!((z / 1.908e-11 - 1.0).abs() < 2e-3, "{z:e}");
        let cold = SensingQuery {
            circuit: CircuitConfig::series(100e6, 100.0, 5e-3),
            ..q
        };
        assert!((min_displacement(&cold).unwrap() / 7.79e-14 - 1.0).abs() < 3e-3);
        let zero = SensingQuery {
            circuit: CircuitConfig::series(100e6, 100.0, 0.0),
            ..q
        };
        assert_eq!(min_velocity(&zero).unwrap(), 0.0);
        let fast = SensingQuery {
            omega_z: Some(2.0 * MHZ),
            ..q
        };
        assert!((min_displacement(&fast).unwrap() * 2.0 / z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn force_limits() {
        let q = SensingQuery {
            gamma: Some(4.0),
            ..query(100e-9, 300.0)
        };
        let f = min_force(&q).unwrap();
        assert!((f / 7.81e-19 - 1.0).abs() < 3e-3, "{f:e}");
        let cold = SensingQuery {
            circuit: CircuitConfig::series(100e6, 100.0, 5e-3),
            ..q
        };
        assert!((min_force(&cold).unwrap() / 3.19e-21 - 1.0).abs() < 3e-3);
        let slow = SensingQuery {
            gamma: Some(3.0),
            ..q
        };
        assert!(matches!(
            min_force(&slow),
            Err(Error::BelowDetectionLimit { .. })
        ));
        assert_eq!(min_force_at_detection_limit(&slow).unwrap(), f);
    }

    #[test]
    fn detection_margin() {
        let base = query(1e-6, 300.0);
        let gamma = base.gamma_res().unwrap();
        let at = |bw: f64| {
            detection_requirement(&SensingQuery {
                bandwidth: bw,
                ..base
            })
            .unwrap()
        };
        let edge = at(gamma / 4.0);
        assert!(!edge.detectable && (edge.margin - 1.0).abs() < 1e-12);
        let two = at(gamma / 16.0);
        assert!(two.detectable && (two.margin - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mass_limit() {
        let trap = TrapConfig::<f64>::reference();
        let e = 1.602_176_634e-19;
        let m = detectable_charge_to_mass(&trap, 1e12, 1.0, e).unwrap();
        let amu = m.max_mass / 1.660_539_066_60e-27;
        assert!((amu / 4.947e6 - 1.0).abs() < 1e-3, "{amu:e}");
        assert!(e / m.max_mass.sqrt() >= m.threshold * (1.0 - 1e-12));
        let far = TrapConfig { d: 2e-3, ..trap };
        let m_far = detectable_charge_to_mass(&far, 1e12, 1.0, e).unwrap();
        assert!((m_far.max_mass * 4.0 / m.max_mass - 1.0).abs() < 1e-12);
        let m2 = detectable_charge_to_mass(&trap, 1e12, 1.0, 2.0 * e).unwrap();
        assert!((m2.max_mass / (4.0 * m.max_mass) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_point() {
        let p = ParticleSpec::silica(500e-9, 1.0).unwrap();
        let (z, _) = zero_point_and_occupancy(&p, MHZ, 0.0).unwrap();
        assert!((z / 8.55e-14 - 1.0).abs() < 3e-3, "{z:e}");
        let (_, n) = zero_point_and_occupancy(&p, MHZ, 5e-3).unwrap();
        assert!((n - 104.2).abs() < 0.2, "{n}");
        assert_eq!(zero_point_and_occupancy(&p, MHZ, 0.0).unwrap().1, 0.0);
    }
}
