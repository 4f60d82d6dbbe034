use crate::constants::{amu, hbar, k_b, MBAR, VACUUM_PERMITTIVITY};
use crate::error::{Error, Result};
use crate::model::{ParticleSpec, ResolvedCircuit, Topology, TrapConfig};
use crate::Scalar;

/// On-resonance resistive friction rate `(q eta / d)^2 R_eff / M`.
pub fn resistive_damping_rate<T: Scalar>(
    particle: &ParticleSpec<T>,
    trap: &TrapConfig<T>,
    r_eff: T,
) -> T {
    let g = particle.charge() * trap.eta / trap.d;
    (g / particle.mass()) * g * r_eff
}

/// Circuit-eliminated friction rate `q^2 / (M C Gamma d^2)` of a resonant
/// series circuit. Equals [`resistive_damping_rate`] with `eta = 1`.
pub fn resonant_damping_rate<T: Scalar>(charge: T, mass: T, capacitance: T, gamma: T, d: T) -> T {
    let g = charge / d;
    (g / mass) * (g / (capacitance * gamma))
}

/// Friction when the circuit follows the particle adiabatically:
/// `Gamma L (q eta)^2 / (M d^2)` for a series circuit, zero for a parallel
/// one (the capacitor is shorted out).
pub fn adiabatic_damping_rate<T: Scalar>(
    particle: &ParticleSpec<T>,
    trap: &TrapConfig<T>,
    circuit: &ResolvedCircuit<T>,
) -> T {
    match circuit.topology {
        Topology::Parallel => T::zero(),
        Topology::Series => {
            let g = particle.charge() * trap.eta / trap.d;
            circuit.gamma * circuit.inductance * (g / particle.mass()) * g
        }
    }
}

/// Background gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams<T: Scalar = f64> {
    /// Pressure [Pa].
    pub pressure: T,
    /// Gas temperature [K].
    pub temperature: T,
    /// Molecular mass [kg].
    pub molecule_mass: T,
}

impl<T: Scalar> GasParams<T> {
    /// N2 at 300 K.
    pub fn nitrogen(pressure: T) -> Self {
        Self {
            pressure,
            temperature: T::lit(300.0),
            molecule_mass: T::lit(28.0) * amu(),
        }
    }

    pub fn nitrogen_mbar(pressure_mbar: T) -> Self {
        Self::nitrogen(pressure_mbar * T::lit(MBAR))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pressure >= T::zero()) {
            return Err(Error::invalid("pressure", "must be non-negative"));
        }
        if !(self.temperature > T::zero()) {
            return Err(Error::invalid("gas temperature", "must be positive"));
        }
        if !(self.molecule_mass > T::zero()) {
            return Err(Error::invalid("molecule_mass", "must be positive"));
        }
        Ok(())
    }

    /// Ideal-gas number density `P / (k_B T)`.
    pub fn number_density(&self) -> T {
        self.pressure / (k_b::<T>() * self.temperature)
    }

    /// Kinetic-theory mean speed `sqrt(8 k_B T / (pi m))`.
    pub fn mean_speed(&self) -> T {
        (T::lit(8.0) * k_b::<T>() * self.temperature / (T::PI() * self.molecule_mass)).sqrt()
    }
}

/// `(4 pi / 3) m n r^2 v_th / M`.
pub fn gas_damping_rate<T: Scalar>(particle: &ParticleSpec<T>, gas: &GasParams<T>) -> T {
    let r = particle.radius();
    T::lit(4.0 / 3.0)
        * T::PI()
        * (gas.molecule_mass / particle.mass())
        * gas.number_density()
        * r
        * r
        * gas.mean_speed()
}

/// Power-law electric field noise of the electrode surfaces,
/// `S_E = g_E w^-alpha r'^(-/+beta) T_E^chi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectrodeNoise<T: Scalar = f64> {
    pub g_e: T,
    pub alpha: T,
    pub beta: T,
    pub chi: T,
    /// Noise grows as the electrodes come closer (`r'^-beta`) when set.
    pub inverse_distance: bool,
}

impl<T: Scalar> Default for ElectrodeNoise<T> {
    fn default() -> Self {
        Self {
            g_e: T::lit(1e-12),
            alpha: T::one(),
            beta: T::lit(3.0),
            chi: T::lit(2.0),
            inverse_distance: true,
        }
    }
}

/// Field noise spectral density [V^2 m^-2 / Hz] at angular frequency `omega`
/// for electrode temperature `t_e`.
pub fn electrode_noise_psd<T: Scalar>(
    omega: T,
    r_prime: T,
    noise: &ElectrodeNoise<T>,
    t_e: T,
) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::invalid("omega", "must be positive"));
    }
    if !(r_prime > T::zero()) {
        return Err(Error::invalid("r_prime", "must be positive"));
    }
    if !(t_e >= T::zero()) {
        return Err(Error::invalid(
            "electrode temperature",
            "must be non-negative",
        ));
    }
    let distance = if noise.inverse_distance {
        r_prime.powf(-noise.beta)
    } else {
        r_prime.powf(noise.beta)
    };
    Ok(noise.g_e * omega.powf(-noise.alpha) * distance * t_e.powf(noise.chi))
}

/// Heating rate in quanta per second, `q^2 S_E / (4 M hbar w_z)`.
pub fn electrode_heating_rate<T: Scalar>(
    particle: &ParticleSpec<T>,
    s_e: T,
    omega_z: T,
) -> Result<T> {
    if !(omega_z > T::zero()) {
        return Err(Error::invalid("omega_z", "must be positive"));
    }
    let q = particle.charge();
    Ok((q / (T::lit(4.0) * particle.mass())) * (q / hbar::<T>()) * (s_e / omega_z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material<T: Scalar = f64> {
    Conductor,
    Dielectric { relative_permittivity: T },
}

impl<T: Scalar> Material<T> {
    /// Pauthenier field-enhancement factor.
    pub fn p_factor(&self) -> T {
        match *self {
            Material::Conductor => T::lit(3.0),
            Material::Dielectric {
                relative_permittivity: e,
            } => T::lit(3.0) * e / (e + T::lit(2.0)),
        }
    }
}

/// Charge capacity, in multiples of `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeLimits<T: Scalar = f64> {
    pub q_neg_max: T,
    pub q_pos_max: T,
    /// Field-charging (Pauthenier) limit in the given field.
    pub q_pauthenier: T,
    pub p_factor: T,
}

impl<T: Scalar> ChargeLimits<T> {
    pub fn allows(&self, charge_e: T) -> bool {
        charge_e <= self.q_pos_max && charge_e >= self.q_neg_max
    }
}

/// `q_neg/e = -1 - 0.7 (r/nm)^2`, `q_pos/e = 1 + 21 (r/nm)^2`,
/// `q_max = 4 pi eps0 r^2 p E`.
pub fn charge_limits<T: Scalar>(
    radius: T,
    material: Material<T>,
    field: T,
) -> Result<ChargeLimits<T>> {
    if !(radius > T::zero()) {
        return Err(Error::invalid("radius", "must be positive"));
    }
    let r_nm = radius / T::lit(1e-9);
    let p = material.p_factor();
    let q_field = T::lit(4.0)
        * T::PI()
        * T::lit(VACUUM_PERMITTIVITY / crate::constants::ELEMENTARY_CHARGE)
        * radius
        * radius
        * p
        * field;
    Ok(ChargeLimits {
        q_neg_max: -T::one() - T::lit(0.7) * r_nm * r_nm,
        q_pos_max: T::one() + T::lit(21.0) * r_nm * r_nm,
        q_pauthenier: q_field,
        p_factor: p,
    })
}

/// Fractional frequency shift from mirror charges, `q^2 / (M C d^2 w_z^2)`.
pub fn mirror_shift_fraction<T: Scalar>(charge: T, mass: T, capacitance: T, d: T, omega_z: T) -> T {
    let g = charge / (d * omega_z);
    (g / mass) * (g / capacitance)
}
