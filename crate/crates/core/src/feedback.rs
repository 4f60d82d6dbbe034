//! Cold-damping feedback through the pickup circuit.
//!
//! The amplified pickup voltage is fed back with gain `G`, so the particle
//! sees `(1 - G) U`. Damping and resistor noise shrink by `(1 - G)` while the
//! amplifier adds its own noise `G V_fb` in quadrature.

use crate::error::{Error, Result};
use crate::noise::feedback_noise_temperature;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackConfig<T: Scalar = f64> {
    pub gain: T,
    /// Amplifier noise voltage `V_fb` [V].
    pub noise_voltage: T,
    /// [ohm]
    pub amp_resistance: T,
    /// [Hz]
    pub bandwidth: T,
    pub enabled: bool,
    /// Permits `G >= 1` (net amplification, heating).
    pub allow_amplification: bool,
}

impl<T: Scalar> Default for FeedbackConfig<T> {
    fn default() -> Self {
        Self {
            gain: T::zero(),
            noise_voltage: T::lit(1e-10),
            amp_resistance: T::lit(50.0),
            bandwidth: T::one(),
            enabled: false,
            allow_amplification: false,
        }
    }
}

impl<T: Scalar> FeedbackConfig<T> {
    pub fn with_gain(gain: T) -> Self {
        Self {
            gain,
            enabled: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gain.is_finite() || self.gain < T::zero() {
            return Err(Error::invalid("gain", "must be finite and non-negative"));
        }
        if self.gain >= T::one() && !self.allow_amplification {
            return Err(Error::invalid(
                "gain",
                "G >= 1 amplifies the motion; set allow_amplification to permit it",
            ));
        }
        if !(self.noise_voltage >= T::zero()) {
            return Err(Error::invalid("noise_voltage", "must be non-negative"));
        }
        feedback_noise_temperature(self.noise_voltage, self.amp_resistance, self.bandwidth)
            .map(|_| ())
    }

    /// Gain actually applied (zero when disabled).
    pub fn effective_gain(&self) -> T {
        if self.enabled {
            self.gain
        } else {
            T::zero()
        }
    }

    /// Amplifier noise temperature `T_fb^n` [K].
    pub fn noise_temperature(&self) -> Result<T> {
        feedback_noise_temperature(self.noise_voltage, self.amp_resistance, self.bandwidth)
    }

    pub fn equilibrium_temperature(&self, t_r: T) -> Result<T> {
        equilibrium_temperature(t_r, self.noise_temperature()?, self.effective_gain())
    }
}

/// Voltage seen by the particle, `(1 - G) U`.
pub fn feedback_voltage<T: Scalar>(u: T, gain: T) -> T {
    (T::one() - gain) * u
}

/// `(1 - G) R_eff`.
pub fn feedback_resistance<T: Scalar>(r_eff: T, gain: T) -> T {
    (T::one() - gain) * r_eff
}

/// `(1 - G) gamma`.
pub fn feedback_damping<T: Scalar>(gamma: T, gain: T) -> T {
    (T::one() - gain) * gamma
}

/// `sqrt((1 - G)^2 V_R^2 + G^2 V_fb^2)`.
pub fn total_noise_voltage<T: Scalar>(v_r: T, v_fb: T, gain: T) -> T {
    ((T::one() - gain) * v_r).hypot(gain * v_fb)
}

/// `T_CM = (1 - G) T_R + G^2 T_fb / (1 - G)`.
pub fn equilibrium_temperature<T: Scalar>(t_r: T, t_fb: T, gain: T) -> Result<T> {
    if !(gain < T::one()) {
        return Err(Error::DivergentTemperature {
            gain: gain.as_f64(),
        });
    }
    let x = T::one() - gain;
    Ok(x * t_r + gain * gain * t_fb / x)
}

/// Gain minimising the feedback temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalGain<T: Scalar = f64> {
    /// `1 - sqrt(T_fb / T_R)`.
    pub approx_gain: T,
    /// `2 sqrt(T_fb T_R)`.
    pub approx_temperature: T,
    /// Exact minimiser `1 - sqrt(T_fb / (T_R + T_fb))`.
    pub exact_gain: T,
    /// `2 sqrt(T_fb (T_R + T_fb)) - 2 T_fb`.
    pub exact_temperature: T,
}

/// Writing `x = 1 - G` the temperature is `x (T_R + T_fb) + T_fb / x - 2 T_fb`,
/// whose minimum is found in closed form.
pub fn optimal_gain<T: Scalar>(t_r: T, t_fb: T) -> Result<OptimalGain<T>> {
    if !(t_fb > T::zero()) || !(t_r > T::zero()) {
        return Err(Error::invalid(
            "temperature",
            "T_R and T_fb must be positive",
        ));
    }
    if t_fb >= t_r {
        return Err(Error::NoCoolingBenefit {
            noise_temperature: t_fb.as_f64(),
            circuit_temperature: t_r.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let x = (t_fb / (t_r + t_fb)).sqrt();
    Ok(OptimalGain {
        approx_gain: T::one() - (t_fb / t_r).sqrt(),
        approx_temperature: two * (t_fb * t_r).sqrt(),
        exact_gain: T::one() - x,
        exact_temperature: two * (t_fb * (t_r + t_fb)).sqrt() - two * t_fb,
    })
}
