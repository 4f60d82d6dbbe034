//! Stochastic forces from the fluctuation-dissipation theorem.
//!
//! Every dissipative channel with rate `gamma_i` at temperature `T_i` comes
//! with a white force `<F(t+tau) F(t)> = 2 k_B T_i gamma_i M delta(tau)`.
//! Discretised on a step `dt` this is a zero-mean Gaussian with variance
//! `2 k_B T_i gamma_i M / dt`. Each channel draws from its own counter-based
//! ChaCha stream, so channels are independent and a run is reproducible
//! regardless of which channels are enabled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::constants::k_b;
use crate::error::{Error, Result};
use crate::model::{ElectrodeNoise, GasParams, ParticleSpec};
use crate::Scalar;

/// Random stream `stream` of run `seed`.
pub fn channel_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub fn standard_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Noise parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseEnvironment<T: Scalar = f64> {
    pub gas: GasParams<T>,
    /// Resistor temperature `T_R` [K].
    pub circuit_temperature: T,
    /// Feedback amplifier noise voltage `V_fb` [V].
    pub feedback_noise_voltage: T,
    /// Amplifier resistance used to convert `V_fb` into a temperature [ohm].
    pub amp_resistance: T,
    /// Amplifier bandwidth [Hz].
    pub amp_bandwidth: T,
    pub electrode: ElectrodeNoise<T>,
    /// Electrode temperature; the circuit temperature when unset.
    pub electrode_temperature: Option<T>,
    pub rng_seed: u64,
}

impl<T: Scalar> NoiseEnvironment<T> {
    pub fn new(circuit_temperature: T, rng_seed: u64) -> Self {
        Self {
            gas: GasParams::nitrogen_mbar(T::lit(1e-10)),
            circuit_temperature,
            feedback_noise_voltage: T::lit(1e-10),
            amp_resistance: T::lit(50.0),
            amp_bandwidth: T::one(),
            electrode: ElectrodeNoise::default(),
            electrode_temperature: None,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.gas.validate()?;
        if !(self.circuit_temperature >= T::zero()) {
            return Err(Error::invalid(
                "circuit_temperature",
                "must be non-negative",
            ));
        }
        if let Some(t) = self.electrode_temperature {
            if !(t >= T::zero()) {
                return Err(Error::invalid(
                    "electrode_temperature",
                    "must be non-negative",
                ));
            }
        }
        Ok(())
    }

    pub fn electrode_temperature(&self) -> T {
        self.electrode_temperature
            .unwrap_or(self.circuit_temperature)
    }

    pub fn feedback_noise_temperature(&self) -> Result<T> {
        feedback_noise_temperature(
            self.feedback_noise_voltage,
            self.amp_resistance,
            self.amp_bandwidth,
        )
    }
}

/// Rate, temperature and mass of one thermal channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseChannelStats<T: Scalar = f64> {
    pub damping_rate: T,
    pub temperature: T,
    pub mass: T,
}

impl<T: Scalar> NoiseChannelStats<T> {
    /// Force autocorrelation strength `2 k_B T gamma M` [N^2 s].
    pub fn diffusion(&self) -> T {
        T::lit(2.0) * k_b::<T>() * self.temperature * self.damping_rate * self.mass
    }

    /// Per-step force standard deviation `sqrt(2 k_B T gamma M / dt)`.
    pub fn force_std(&self, dt: T) -> T {
        (T::lit(2.0) * k_b::<T>() * self.temperature).sqrt()
            * (self.damping_rate * self.mass / dt).sqrt()
    }
}

/// One white-noise force sample held over a step `dt`.
pub fn thermal_force_sample<T: Scalar, R: Rng + ?Sized>(
    channel: &NoiseChannelStats<T>,
    dt: T,
    rng: &mut R,
) -> T {
    let xi: T = standard_normal(rng);
    if channel.temperature == T::zero() || channel.damping_rate == T::zero() {
        return T::zero();
    }
    channel.force_std(dt) * xi
}

/// Electrode field-noise force, variance `q^2 S_E(w_z) / dt`.
pub fn electrode_force_sample<T: Scalar, R: Rng + ?Sized>(
    particle: &ParticleSpec<T>,
    s_e: T,
    dt: T,
    rng: &mut R,
) -> T {
    let xi: T = standard_normal(rng);
    particle.charge() * (s_e / dt).sqrt() * xi
}

/// Johnson-Nyquist voltage `sqrt(4 k_B T_R R_eff bandwidth)`.
pub fn circuit_voltage_noise<T: Scalar>(temperature: T, r_eff: T, bandwidth: T) -> Result<T> {
    if !(bandwidth > T::zero()) {
        return Err(Error::invalid("bandwidth", "must be positive"));
    }
    Ok((T::lit(4.0) * k_b::<T>() * temperature * r_eff * bandwidth).sqrt())
}

/// Noise temperature `V_fb^2 / (4 k_B R_amp B)` of a feedback amplifier.
pub fn feedback_noise_temperature<T: Scalar>(v_fb: T, r_amp: T, bandwidth: T) -> Result<T> {
    if !(r_amp > T::zero()) {
        return Err(Error::invalid("amp_resistance", "must be positive"));
    }
    if !(bandwidth > T::zero()) {
        return Err(Error::invalid("amp_bandwidth", "must be positive"));
    }
    Ok((v_fb / (T::lit(4.0) * k_b::<T>() * r_amp * bandwidth)) * v_fb)
}

/// Inverse of [`feedback_noise_temperature`].
pub fn feedback_noise_voltage<T: Scalar>(t_noise: T, r_amp: T, bandwidth: T) -> T {
    (T::lit(4.0) * k_b::<T>() * t_noise * r_amp * bandwidth).sqrt()
}
