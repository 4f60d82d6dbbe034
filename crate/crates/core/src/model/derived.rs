use crate::error::Result;
use crate::model::{
    adiabatic_damping_rate, charge_limits, effective_resistance, gas_damping_rate,
    mirror_shift_fraction, resistive_damping_rate, stability_params, CircuitConfig, GasParams,
    Material, ParticleSpec, ResolvedCircuit, StabilityParams, TrapConfig,
};
use crate::Scalar;

/// Mirror-charge frequency shift above which the neglected image force
/// is reported.
pub const MIRROR_SHIFT_WARNING: f64 = 1e-3;

/// Everything that follows from particle, trap, circuit and gas with the
/// circuit tuned to the secular frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams<T: Scalar = f64> {
    pub a_z: T,
    pub q_z: T,
    pub omega_z: T,
    pub circuit: ResolvedCircuit<T>,
    pub r_eff: T,
    pub gamma_res: T,
    pub gamma_ad: T,
    pub gamma_gas: T,
    /// `(1 - G) gamma_res` when feedback is active, else zero.
    pub gamma_fb: T,
    pub mirror_shift: T,
    pub warnings: Vec<String>,
}

impl<T: Scalar> DerivedParams<T> {
    pub fn compute(
        particle: &ParticleSpec<T>,
        trap: &TrapConfig<T>,
        circuit: &CircuitConfig<T>,
        gas: &GasParams<T>,
        feedback_gain: Option<T>,
    ) -> Result<Self> {
        gas.validate()?;
        let stab = stability_params(trap, particle)?;
        Self::at_frequency(particle, trap, circuit, gas, feedback_gain, stab)
    }

    /// Same quantities for a static well at `omega` (no drive, `a_z = q_z = 0`),
    /// so uncharged particles are admitted.
    pub fn harmonic(
        particle: &ParticleSpec<T>,
        trap: &TrapConfig<T>,
        circuit: &CircuitConfig<T>,
        gas: &GasParams<T>,
        feedback_gain: Option<T>,
        omega: T,
    ) -> Result<Self> {
        gas.validate()?;
        trap.validate()?;
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(crate::Error::invalid("omega", "must be positive"));
        }
        let stab = StabilityParams {
            a_z: T::zero(),
            q_z: T::zero(),
            omega_z: omega,
        };
        Self::at_frequency(particle, trap, circuit, gas, feedback_gain, stab)
    }

    fn at_frequency(
        particle: &ParticleSpec<T>,
        trap: &TrapConfig<T>,
        circuit: &CircuitConfig<T>,
        gas: &GasParams<T>,
        feedback_gain: Option<T>,
        stab: StabilityParams<T>,
    ) -> Result<Self> {
        let resolved = circuit.resolve(stab.omega_z)?;
        let r_eff = effective_resistance(&resolved, stab.omega_z);
        let gamma_res = resistive_damping_rate(particle, trap, r_eff);
        let gamma_fb = feedback_gain.map_or(T::zero(), |g| (T::one() - g) * gamma_res);
        let mirror_shift = mirror_shift_fraction(
            particle.charge(),
            particle.mass(),
            resolved.capacitance,
            trap.d,
            stab.omega_z,
        );

        let mut warnings = Vec::new();
        let limits = charge_limits(particle.radius(), Material::<T>::Conductor, T::zero())?;
        if !limits.allows(particle.charge_e()) {
            warnings.push(format!(
                "charge {:e} e exceeds the capacity [{:e}, {:e}] e of a sphere of radius {:e} m",
                particle.charge_e().as_f64(),
                limits.q_neg_max.as_f64(),
                limits.q_pos_max.as_f64(),
                particle.radius().as_f64()
            ));
        }
        if mirror_shift.as_f64() > MIRROR_SHIFT_WARNING {
            warnings.push(format!(
                "mirror-charge frequency shift {:.3e} exceeds {MIRROR_SHIFT_WARNING:e}; image forces are not modelled",
                mirror_shift.as_f64()
            ));
        }

        Ok(Self {
            a_z: stab.a_z,
            q_z: stab.q_z,
            omega_z: stab.omega_z,
            circuit: resolved,
            r_eff,
            gamma_res,
            gamma_ad: adiabatic_damping_rate(particle, trap, &resolved),
            gamma_gas: gas_damping_rate(particle, gas),
            gamma_fb,
            mirror_shift,
            warnings,
        })
    }
}
