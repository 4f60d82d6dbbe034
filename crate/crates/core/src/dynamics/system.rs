use crate::error::Result;
use crate::feedback::FeedbackConfig;
use crate::model::{electrode_noise_psd, CircuitConfig, DerivedParams, ParticleSpec, TrapConfig};
use crate::noise::NoiseEnvironment;
use crate::Scalar;

/// Confining potential of the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    /// Mathieu drive `z'' = -(w_D^2/4)(a - 2q cos w_D t) z`.
    Paul { a: f64, q: f64, omega_d: f64 },
    /// Static harmonic well.
    Harmonic { omega: f64 },
}

impl Potential {
    /// Spring constant per unit mass `k(t)` [1/s^2].
    #[inline]
    pub fn spring(&self, t: f64) -> f64 {
        match *self {
            Potential::Paul { a, q, omega_d } => {
                0.25 * omega_d * omega_d * (a - 2.0 * q * (omega_d * t).cos())
            }
            Potential::Harmonic { omega } => omega * omega,
        }
    }

    /// Time derivative of [`Potential::spring`].
    #[inline]
    pub fn spring_rate(&self, t: f64) -> f64 {
        match *self {
            Potential::Paul { q, omega_d, .. } => 0.5 * q * omega_d.powi(3) * (omega_d * t).sin(),
            Potential::Harmonic { .. } => 0.0,
        }
    }

    /// Micromotion modulation `1 - (q/2) cos w_D t` and its companion
    /// `(q w_D / 2) sin w_D t` used to separate secular from driven motion.
    #[inline]
    pub fn micromotion(&self, t: f64) -> (f64, f64) {
        match *self {
            Potential::Paul { q, omega_d, .. } => {
                let (s, c) = (omega_d * t).sin_cos();
                (1.0 - 0.5 * q * c, 0.5 * q * omega_d * s)
            }
            Potential::Harmonic { .. } => (1.0, 0.0),
        }
    }

    /// Fastest rate present in the potential.
    pub fn fastest_rate(&self) -> f64 {
        match *self {
            Potential::Paul { omega_d, .. } => omega_d,
            Potential::Harmonic { omega } => omega,
        }
    }

    /// Period the default step is derived from.
    pub fn reference_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.fastest_rate()
    }
}

/// A particle in a trap, coupled to a circuit, with its noise environment.
///
/// The circuit is always tuned to the secular frequency. Its temperature
/// and the feedback amplifier settings are authoritative over the
/// duplicates held by the noise environment.
#[derive(Debug, Clone, PartialEq)]
pub struct System<T: Scalar = f64> {
    pub particle: ParticleSpec<T>,
    pub trap: TrapConfig<T>,
    pub circuit_config: CircuitConfig<T>,
    pub noise: NoiseEnvironment<T>,
    pub feedback: FeedbackConfig<T>,
    pub derived: DerivedParams<T>,
    pub potential: Potential,
}

impl<T: Scalar> System<T> {
    pub fn new(
        particle: ParticleSpec<T>,
        trap: TrapConfig<T>,
        circuit_config: CircuitConfig<T>,
        noise: NoiseEnvironment<T>,
        feedback: FeedbackConfig<T>,
    ) -> Result<Self> {
        Self::build(particle, trap, circuit_config, noise, feedback, None)
    }

    /// A static harmonic well at `omega` instead of the Paul drive, with the
    /// circuit tuned to it. Trap stability is not required, so the particle
    /// may be uncharged.
    pub fn harmonic(
        particle: ParticleSpec<T>,
        trap: TrapConfig<T>,
        circuit_config: CircuitConfig<T>,
        noise: NoiseEnvironment<T>,
        feedback: FeedbackConfig<T>,
        omega: T,
    ) -> Result<Self> {
        Self::build(particle, trap, circuit_config, noise, feedback, Some(omega))
    }

    fn build(
        particle: ParticleSpec<T>,
        trap: TrapConfig<T>,
        circuit_config: CircuitConfig<T>,
        mut noise: NoiseEnvironment<T>,
        feedback: FeedbackConfig<T>,
        omega: Option<T>,
    ) -> Result<Self> {
        feedback.validate()?;
        noise.circuit_temperature = circuit_config.temperature;
        noise.feedback_noise_voltage = feedback.noise_voltage;
        noise.amp_resistance = feedback.amp_resistance;
        noise.amp_bandwidth = feedback.bandwidth;
        noise.validate()?;
        let gain = feedback.enabled.then_some(feedback.gain);
        let (derived, potential) = match omega {
            None => {
                let d =
                    DerivedParams::compute(&particle, &trap, &circuit_config, &noise.gas, gain)?;
                let pot = Potential::Paul {
                    a: d.a_z.as_f64(),
                    q: d.q_z.as_f64(),
                    omega_d: trap.drive_freq.as_f64(),
                };
                (d, pot)
            }
            Some(w) => (
                DerivedParams::harmonic(&particle, &trap, &circuit_config, &noise.gas, gain, w)?,
                Potential::Harmonic { omega: w.as_f64() },
            ),
        };
        Ok(Self {
            particle,
            trap,
            circuit_config,
            noise,
            feedback,
            derived,
            potential,
        })
    }

    /// Replaces the Paul drive by a static harmonic well at `omega` and
    /// retunes the circuit to it.
    pub fn with_harmonic(self, omega: T) -> Result<Self> {
        Self::harmonic(
            self.particle,
            self.trap,
            self.circuit_config,
            self.noise,
            self.feedback,
            omega,
        )
    }

    pub fn omega_z(&self) -> T {
        self.derived.omega_z
    }

    pub fn gain(&self) -> T {
        self.feedback.effective_gain()
    }

    /// Electrode field-noise density at the secular frequency.
    pub fn electrode_psd(&self) -> Result<T> {
        electrode_noise_psd(
            self.derived.omega_z,
            self.trap.r_prime,
            &self.noise.electrode,
            self.noise.electrode_temperature(),
        )
    }

    /// Particle friction rate of the reduced model, gas plus resistive
    /// (reduced by feedback).
    pub fn reduced_damping_rate(&self) -> T {
        self.derived.gamma_gas + (T::one() - self.gain()) * self.derived.gamma_res
    }

    /// Steady temperature of the reduced model with gas, resistor and
    /// feedback noise: the friction-weighted mean of the bath temperatures.
    pub fn equilibrium_temperature(&self) -> Result<T> {
        let d = &self.derived;
        let g = self.gain();
        let t_fb = if g > T::zero() {
            self.feedback.noise_temperature()?
        } else {
            T::zero()
        };
        let gamma = self.reduced_damping_rate();
        if !(gamma > T::zero()) {
            return Err(crate::Error::invalid(
                "damping",
                "no friction, no equilibrium",
            ));
        }
        let one = T::one();
        let heat = d.gamma_gas * self.noise.gas.temperature
            + d.gamma_res
                * ((one - g) * (one - g) * self.circuit_config.temperature + g * g * t_fb);
        Ok(heat / gamma)
    }

    /// `key = value` description of every input.
    pub fn snapshot(&self) -> Vec<(String, String)> {
        let p = &self.particle;
        let tr = &self.trap;
        let c = &self.derived.circuit;
        let n = &self.noise;
        let f = &self.feedback;
        let e = |x: T| format!("{:e}", x.as_f64());
        vec![
            ("particle.radius_m", e(p.radius())),
            ("particle.density_kg_m3", e(p.density())),
            ("particle.charge_e", e(p.charge_e())),
            ("trap.u0_v", e(tr.u0)),
            ("trap.udc_v", e(tr.udc)),
            ("trap.drive_freq_hz", e(tr.drive_freq_hz())),
            ("trap.r0_m", e(tr.r0)),
            ("trap.d_m", e(tr.d)),
            ("trap.eta", e(tr.eta)),
            ("trap.r_prime_m", e(tr.r_prime)),
            (
                "circuit.topology",
                format!("{:?}", c.topology).to_lowercase(),
            ),
            ("circuit.resistance_ohm", e(c.resistance)),
            ("circuit.inductance_h", e(c.inductance)),
            ("circuit.capacitance_f", e(c.capacitance)),
            ("circuit.quality_factor", e(c.quality_factor)),
            ("circuit.temperature_k", e(c.temperature)),
            ("gas.pressure_pa", e(n.gas.pressure)),
            ("gas.temperature_k", e(n.gas.temperature)),
            ("gas.molecule_mass_kg", e(n.gas.molecule_mass)),
            ("electrode.g_e", e(n.electrode.g_e)),
            ("electrode.alpha", e(n.electrode.alpha)),
            ("electrode.beta", e(n.electrode.beta)),
            ("electrode.chi", e(n.electrode.chi)),
            (
                "electrode.inverse_distance",
                n.electrode.inverse_distance.to_string(),
            ),
            ("electrode.temperature_k", e(n.electrode_temperature())),
            ("feedback.enabled", f.enabled.to_string()),
            ("feedback.gain", e(f.gain)),
            ("feedback.noise_voltage_v", e(f.noise_voltage)),
            ("feedback.amp_resistance_ohm", e(f.amp_resistance)),
            ("feedback.bandwidth_hz", e(f.bandwidth)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// Which equations are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModelKind {
    /// Particle only, circuit folded into friction and noise.
    #[default]
    Reduced,
    /// Particle and circuit charge/flux.
    Coupled,
}

/// Time-stepping scheme for the deterministic part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Classical Runge-Kutta drift between two half noise kicks.
    #[default]
    Rk4Split,
    /// Stochastic Heun (trapezoidal predictor-corrector) with additive noise.
    Heun,
}

/// Per-mechanism switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Channels {
    pub gas: bool,
    /// Circuit resistor (reduced model: `gamma_res`; coupled: `Gamma`).
    pub resistive: bool,
    /// Feedback amplifier noise (reduced model only).
    pub feedback: bool,
    /// Electrode field noise (no associated friction).
    pub electrode: bool,
}

impl Channels {
    pub const NONE: Self = Self {
        gas: false,
        resistive: false,
        feedback: false,
        electrode: false,
    };

    pub const ALL: Self = Self {
        gas: true,
        resistive: true,
        feedback: true,
        electrode: true,
    };
}

impl Default for Channels {
    /// Everything except electrode noise.
    fn default() -> Self {
        Self {
            electrode: false,
            ..Self::ALL
        }
    }
}

/// Initial particle state. The circuit always starts at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// Secular position and velocity drawn at this temperature [K].
    Thermal(f64),
    /// Explicit position [m] and velocity [m/s].
    State { z: f64, v: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimPlan {
    pub model: ModelKind,
    pub scheme: Scheme,
    /// Step [s]; the default is a two-hundredth of the fastest period,
    /// shortened further if the stability guard requires.
    pub dt: Option<f64>,
    pub duration: f64,
    /// Keep every n-th step.
    pub decimation: usize,
    pub damping: Channels,
    pub noise: Channels,
    pub initial: InitialCondition,
}

impl SimPlan {
    pub fn new(duration: f64) -> Self {
        Self {
            model: ModelKind::Reduced,
            scheme: Scheme::Rk4Split,
            dt: None,
            duration,
            decimation: 1,
            damping: Channels::ALL,
            noise: Channels::default(),
            initial: InitialCondition::Thermal(0.0),
        }
    }

    pub fn noiseless(mut self) -> Self {
        self.noise = Channels::NONE;
        self
    }
}

/// Phase-space point; `q` and `phi` stay zero in the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimState<T: Scalar = f64> {
    pub t: f64,
    pub z: T,
    pub p: T,
    /// Capacitor charge [C].
    pub q: T,
    /// Inductor flux [V s].
    pub phi: T,
}
