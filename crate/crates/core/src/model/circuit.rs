use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Series,
    Parallel,
}

/// How the circuit is specified besides its resistance: by quality factor
/// or by inductance. The other is derived with the circuit tuned to the
/// particle (`w_LC = w_z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tuning<T: Scalar = f64> {
    QualityFactor(T),
    Inductance(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitConfig<T: Scalar = f64> {
    pub topology: Topology,
    /// Resistance [ohm].
    pub resistance: T,
    pub tuning: Tuning<T>,
    /// Resistor temperature [K].
    pub temperature: T,
}

impl<T: Scalar> CircuitConfig<T> {
    pub fn series(resistance: T, quality_factor: T, temperature: T) -> Self {
        Self {
            topology: Topology::Series,
            resistance,
            tuning: Tuning::QualityFactor(quality_factor),
            temperature,
        }
    }

    pub fn parallel(resistance: T, quality_factor: T, temperature: T) -> Self {
        Self {
            topology: Topology::Parallel,
            ..Self::series(resistance, quality_factor, temperature)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resistance > T::zero()) || !self.resistance.is_finite() {
            return Err(Error::invalid("resistance", "must be positive"));
        }
        if !(self.temperature >= T::zero()) || !self.temperature.is_finite() {
            return Err(Error::invalid(
                "circuit temperature",
                "must be non-negative",
            ));
        }
        match self.tuning {
            Tuning::QualityFactor(q) if !(q > T::zero()) || !q.is_finite() => {
                Err(Error::invalid("quality_factor", "must be positive"))
            }
            Tuning::Inductance(l) if !(l > T::zero()) || !l.is_finite() => {
                Err(Error::invalid("inductance", "must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Derives `L`, `C`, `Gamma` and `Q_f` for resonance at `omega_lc`.
    ///
    /// Series: `Gamma = R/L`. Parallel: `Gamma = 1/(R C)`. Both: `Q_f = w/Gamma`.
    pub fn resolve(&self, omega_lc: T) -> Result<ResolvedCircuit<T>> {
        self.validate()?;
        if !(omega_lc > T::zero()) || !omega_lc.is_finite() {
            return Err(Error::invalid("omega_lc", "must be positive"));
        }
        let r = self.resistance;
        let w = omega_lc;
        let (inductance, capacitance) = match (self.topology, self.tuning) {
            (Topology::Series, Tuning::QualityFactor(q)) => {
                let l = q * r / w;
                (l, T::one() / (w * w * l))
            }
            (Topology::Parallel, Tuning::QualityFactor(q)) => {
                let c = q / (w * r);
                (T::one() / (w * w * c), c)
            }
            (_, Tuning::Inductance(l)) => (l, T::one() / (w * w * l)),
        };
        let gamma = match self.topology {
            Topology::Series => r / inductance,
            Topology::Parallel => T::one() / (r * capacitance),
        };
        Ok(ResolvedCircuit {
            topology: self.topology,
            resistance: r,
            inductance,
            capacitance,
            gamma,
            quality_factor: w / gamma,
            omega_lc: w,
            temperature: self.temperature,
        })
    }
}

/// Circuit with every element value fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedCircuit<T: Scalar = f64> {
    pub topology: Topology,
    pub resistance: T,
    pub inductance: T,
    pub capacitance: T,
    /// Circuit damping rate [1/s].
    pub gamma: T,
    pub quality_factor: T,
    pub omega_lc: T,
    pub temperature: T,
}

/// Resistance seen by the induced current on resonance:
/// `Q_f^2 R` (series) or `w_z L Q_f` (parallel).
pub fn effective_resistance<T: Scalar>(circuit: &ResolvedCircuit<T>, omega_z: T) -> T {
    match circuit.topology {
        Topology::Series => circuit.quality_factor * circuit.quality_factor * circuit.resistance,
        Topology::Parallel => omega_z * circuit.inductance * circuit.quality_factor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const W: f64 = 2.0 * PI * 3e3;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn series_effective_resistance() {
        let c = CircuitConfig::series(100e6, 100.0, 300.0)
            .resolve(W)
            .unwrap();
        assert!(rel(effective_resistance(&c, W), 1e12) < 1e-12);
        let unity = CircuitConfig::series(100e6, 1.0, 300.0).resolve(W).unwrap();
        assert!(rel(effective_resistance(&unity, W), 100e6) < 1e-12);
    }

    #[test]
    fn parallel_effective_resistance() {
        // L = 1 H, Q_f = 100 at 3 kHz: w L Q_f = 1.885e6 ohm, which also fixes R
        let r = W * 1.0 * 100.0;
        let c = CircuitConfig {
            topology: Topology::Parallel,
            resistance: r,
            tuning: Tuning::Inductance(1.0),
            temperature: 300.0,
        }
        .resolve(W)
        .unwrap();
        assert!(rel(c.quality_factor, 100.0) < 1e-12);
        let r_eff = effective_resistance(&c, W);
        assert!(rel(r_eff, 1.884_955_6e6) < 1e-7, "{r_eff}");
    }

    #[test]
    fn damping_and_quality_factor_consistent() {
        for topology in [Topology::Series, Topology::Parallel] {
            for tuning in [Tuning::QualityFactor(37.0), Tuning::Inductance(2.5e3)] {
                let c = CircuitConfig {
                    topology,
                    resistance: 4.2e6,
                    tuning,
                    temperature: 4.0,
                }
                .resolve(W)
                .unwrap();
                let gamma = match topology {
                    Topology::Series => c.resistance / c.inductance,
                    Topology::Parallel => 1.0 / (c.resistance * c.capacitance),
                };
                assert!(rel(c.gamma, gamma) < 1e-12);
                assert!(rel(c.quality_factor, W / c.gamma) < 1e-12);
                assert!(rel(1.0 / (c.inductance * c.capacitance).sqrt(), W) < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_circuits() {
        assert!(CircuitConfig::series(0.0, 100.0, 300.0).resolve(W).is_err());
        assert!(CircuitConfig::series(1.0, 100.0, -1.0).resolve(W).is_err());
        assert!(CircuitConfig::series(1.0, 0.0, 1.0).resolve(W).is_err());
        assert!(CircuitConfig::series(1.0, 1.0, 1.0).resolve(0.0).is_err());
    }
}
