use crate::error::{Error, Result};
use crate::mathieu;
use crate::model::ParticleSpec;
use crate::Scalar;

/// Edge of the lowest Mathieu stability region on the `a = 0` axis.
pub const MATHIEU_Q_BOUNDARY: f64 = 0.908_046;

/// Quadrupole (Paul) trap driven by `U_DC + U_0 cos(w_D t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig<T: Scalar = f64> {
    /// AC drive amplitude [V].
    pub u0: T,
    /// DC voltage [V].
    pub udc: T,
    /// Drive angular frequency [rad/s].
    pub drive_freq: T,
    /// Half the RF electrode separation [m].
    pub r0: T,
    /// Endcap (pick-up) electrode separation [m].
    pub d: T,
    /// Geometric factor, shared by the trapping field and the pick-up current.
    pub eta: T,
    /// Trap centre to endcap distance [m], used by the electrode noise model.
    pub r_prime: T,
}

impl<T: Scalar> TrapConfig<T> {
    pub fn new(u0: T, udc: T, drive_freq: T, r0: T, d: T, eta: T, r_prime: T) -> Result<Self> {
        let trap = Self {
            u0,
            udc,
            drive_freq,
            r0,
            d,
            eta,
            r_prime,
        };
        trap.validate()?;
        Ok(trap)
    }

    /// `U_0 = 3000 V`, `U_DC = 0`, `f_D = 100 kHz`, `r_0 = 500 um`,
    /// `d = 1 mm`, `eta = 0.8`, `r' = d/2`.
    pub fn reference() -> Self {
        Self {
            u0: T::lit(3000.0),
            udc: T::zero(),
            drive_freq: T::lit(2.0 * std::f64::consts::PI * 100e3),
            r0: T::lit(500e-6),
            d: T::lit(1e-3),
            eta: T::lit(0.8),
            r_prime: T::lit(0.5e-3),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v > T::zero() && v.is_finite();
        if !pos(self.drive_freq) {
            return Err(Error::invalid("drive_freq", "must be positive"));
        }
        if !pos(self.r0) {
            return Err(Error::invalid("r0", "must be positive"));
        }
        if !pos(self.d) {
            return Err(Error::invalid("d", "must be positive"));
        }
        if !pos(self.r_prime) {
            return Err(Error::invalid("r_prime", "must be positive"));
        }
        if !(self.eta > T::zero() && self.eta <= T::one()) {
            return Err(Error::invalid(
                "eta",
                format!("must lie in (0, 1], got {}", self.eta),
            ));
        }
        if !self.u0.is_finite() || !self.udc.is_finite() {
            return Err(Error::invalid("u0/udc", "must be finite"));
        }
        Ok(())
    }

    pub fn drive_freq_hz(&self) -> T {
        self.drive_freq / (T::lit(2.0) * T::PI())
    }
}

/// Mathieu parameters and the resulting secular frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams<T: Scalar = f64> {
    pub a_z: T,
    pub q_z: T,
    /// Secular angular frequency [rad/s].
    pub omega_z: T,
}

/// `a_z = 4 U_DC eta q / (M w_D^2 r0^2)`, `q_z = -2 U_0 eta q / (M w_D^2 r0^2)`,
/// secular frequency `(w_D/2) sqrt(a_z + q_z^2/2)`.
///
/// Fails with [`Error::Untrapped`] when there is no confining secular
/// potential and with [`Error::UnstableTrap`] outside the lowest stability
/// region (the `|q_z| < 0.908` bound on the `a_z = 0` axis, a Floquet
/// multiplier check otherwise).
pub fn stability_params<T: Scalar>(
    trap: &TrapConfig<T>,
    particle: &ParticleSpec<T>,
) -> Result<StabilityParams<T>> {
    trap.validate()?;
    let two = T::lit(2.0);
    let q = particle.charge();
    // grouped so that the f32 intermediates stay in range
    let scale =
        (trap.eta * q / particle.mass()) / (trap.drive_freq * trap.drive_freq * trap.r0 * trap.r0);
    let a_z = T::lit(4.0) * trap.udc * scale;
    let q_z = -two * trap.u0 * scale;

    let (a, qq) = (a_z.as_f64(), q_z.as_f64());
    let beta_sq = a_z + q_z * q_z / two;
    if (a == 0.0 && qq == 0.0) || !(beta_sq > T::zero()) {
        return Err(Error::Untrapped { a_z: a, q_z: qq });
    }
    let stable = if a == 0.0 {
        qq.abs() < MATHIEU_Q_BOUNDARY
    } else {
        mathieu::is_stable(a, qq)
    };
    if !stable {
        return Err(Error::UnstableTrap { a_z: a, q_z: qq });
    }
    let omega_z = trap.drive_freq / two * beta_sq.sqrt();
    Ok(StabilityParams { a_z, q_z, omega_z })
}
