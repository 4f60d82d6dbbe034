use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::BOLTZMANN;
use crate::dynamics::{
    InitialCondition, ModelKind, Potential, Scheme, SimPlan, SimState, System, Trajectory,
    TrajectoryMeta,
};
use crate::error::{Error, Result};
use crate::model::Topology;
use crate::noise::{channel_rng, standard_normal};
use crate::Scalar;

/// Largest admissible `dt` times the fastest rate of the system.
pub const STABILITY_GUARD: f64 = 0.05;

/// Default number of steps per fastest period.
pub const STEPS_PER_PERIOD: f64 = 200.0;

/// Independent random force sources. The discriminant is the RNG stream;
/// stream 0 draws initial conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseChannel {
    Gas = 1,
    Resistive = 2,
    Feedback = 3,
    Electrode = 4,
}

/// Component a noise channel kicks: particle velocity, capacitor charge or
/// inductor flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Velocity = 1,
    Charge = 2,
    Flux = 3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelKick<T: Scalar> {
    pub channel: NoiseChannel,
    pub target: Target,
    /// Standard deviation of the per-step increment of the target.
    pub std: T,
}

/// Fixed-step integrator for one system and plan.
///
/// The state is `(z, v, Q, Phi)`; the reduced model leaves the circuit
/// entries at zero. Coefficients are formed in `f64` and cast once so that
/// `f32` runs avoid underflow in intermediate products.
#[derive(Debug, Clone)]
pub struct Integrator<T: Scalar> {
    pub model: ModelKind,
    pub scheme: Scheme,
    pub dt: f64,
    pub potential: Potential,
    pub mass: f64,
    /// Total particle friction rate [1/s].
    pub gamma_total: f64,
    /// Noise power delivered to the particle, `sum D_i / 2M` [W].
    pub heating_power: f64,
    pub kicks: Vec<ChannelKick<T>>,
    dt_t: T,
    gamma_v: T,
    kappa_m: T,
    kappa: T,
    inv_l: T,
    inv_c: T,
    gamma_q: T,
    gamma_phi: T,
}

impl<T: Scalar> Integrator<T> {
    pub fn new(system: &System<T>, plan: &SimPlan) -> Result<Self> {
        let d = &system.derived;
        let c = &d.circuit;
        let mass = system.particle.mass().as_f64();
        let charge = system.particle.charge().as_f64();
        let omega_z = d.omega_z.as_f64();
        let gain = system.gain().as_f64();
        let coupled = plan.model == ModelKind::Coupled;
        if coupled && gain != 0.0 {
            return Err(Error::invalid(
                "feedback",
                "feedback is only modelled in the reduced model",
            ));
        }
        if !(plan.duration > 0.0) || !plan.duration.is_finite() {
            return Err(Error::invalid("duration", "must be positive"));
        }
        if plan.decimation == 0 {
            return Err(Error::invalid("decimation", "must be at least 1"));
        }

        let gamma_gas = if plan.damping.gas {
            d.gamma_gas.as_f64()
        } else {
            0.0
        };
        let gamma_res = d.gamma_res.as_f64();
        let gamma_total = gamma_gas
            + if !coupled && plan.damping.resistive {
                (1.0 - gain) * gamma_res
            } else {
                0.0
            };

        let big_gamma = if coupled && plan.damping.resistive {
            c.gamma.as_f64()
        } else {
            0.0
        };
        let mut rates = vec![system.potential.fastest_rate(), omega_z, gamma_total];
        if coupled {
            rates.extend([big_gamma, c.omega_lc.as_f64()]);
        }
        let fastest = rates.into_iter().fold(0.0, f64::max);
        let limit = STABILITY_GUARD / fastest;
        let dt = match plan.dt {
            Some(dt) if !(dt > 0.0) || !dt.is_finite() => {
                return Err(Error::invalid("dt", "must be positive"))
            }
            Some(dt) if dt > limit => return Err(Error::StepTooLarge { dt, limit }),
            Some(dt) => dt,
            None => (system.potential.reference_period() / STEPS_PER_PERIOD).min(limit),
        };
        if plan.duration < dt {
            return Err(Error::invalid("duration", "must be at least one step"));
        }

        // momentum diffusion constants D [N^2 s] and their targets
        let kt = |t: f64| BOLTZMANN * t;
        let t_r = c.temperature.as_f64();
        let mut sources: Vec<(NoiseChannel, Target, f64)> = Vec::new();
        if plan.noise.gas && gamma_gas > 0.0 {
            let t_gas = system.noise.gas.temperature.as_f64();
            sources.push((
                NoiseChannel::Gas,
                Target::Velocity,
                2.0 * mass * gamma_gas * kt(t_gas),
            ));
        }
        if plan.noise.electrode {
            let s_e = system.electrode_psd()?.as_f64();
            sources.push((
                NoiseChannel::Electrode,
                Target::Velocity,
                charge * charge * s_e,
            ));
        }
        if coupled {
            if plan.noise.resistive && big_gamma > 0.0 {
                let (target, inertia) = match c.topology {
                    Topology::Series => (Target::Flux, c.inductance.as_f64()),
                    Topology::Parallel => (Target::Charge, c.capacitance.as_f64()),
                };
                sources.push((
                    NoiseChannel::Resistive,
                    target,
                    2.0 * big_gamma * inertia * kt(t_r),
                ));
            }
        } else if plan.damping.resistive {
            if plan.noise.resistive {
                let x = 1.0 - gain;
                sources.push((
                    NoiseChannel::Resistive,
                    Target::Velocity,
                    2.0 * mass * gamma_res * x * x * kt(t_r),
                ));
            }
            if plan.noise.feedback && gain != 0.0 {
                let t_fb = system.feedback.noise_temperature()?.as_f64();
                sources.push((
                    NoiseChannel::Feedback,
                    Target::Velocity,
                    2.0 * mass * gamma_res * gain * gain * kt(t_fb),
                ));
            }
        }
        let heating_power = sources
            .iter()
            .filter(|s| s.1 == Target::Velocity)
            .map(|s| s.2 / (2.0 * mass))
            .sum();
        let kicks = sources
            .into_iter()
            .filter(|s| s.2 > 0.0)
            .map(|(channel, target, diff)| {
                let scale = if target == Target::Velocity {
                    1.0 / mass
                } else {
                    1.0
                };
                ChannelKick {
                    channel,
                    target,
                    std: T::lit((diff * dt).sqrt() * scale),
                }
            })
            .collect();

        let (kappa, inv_l, inv_c, gamma_q, gamma_phi) = if coupled {
            let cap = c.capacitance.as_f64();
            let kappa = charge * system.trap.eta.as_f64() / (cap * system.trap.d.as_f64());
            let (gq, gp) = match c.topology {
                Topology::Series => (0.0, big_gamma),
                Topology::Parallel => (big_gamma, 0.0),
            };
            (kappa, 1.0 / c.inductance.as_f64(), 1.0 / cap, gq, gp)
        } else {
            (0.0, 0.0, 0.0, 0.0, 0.0)
        };

        Ok(Self {
            model: plan.model,
            scheme: plan.scheme,
            dt,
            potential: system.potential,
            mass,
            gamma_total,
            heating_power,
            kicks,
            dt_t: T::lit(dt),
            gamma_v: T::lit(gamma_total),
            kappa_m: T::lit(kappa / mass),
            kappa: T::lit(kappa),
            inv_l: T::lit(inv_l),
            inv_c: T::lit(inv_c),
            gamma_q: T::lit(gamma_q),
            gamma_phi: T::lit(gamma_phi),
        })
    }

    #[inline]
    fn deriv(&self, k: T, s: &[T; 4]) -> [T; 4] {
        let [z, v, q, phi] = *s;
        [
            v,
            -k * z - self.gamma_v * v - self.kappa_m * q,
            phi * self.inv_l - self.gamma_q * q,
            -q * self.inv_c - self.kappa * z - self.gamma_phi * phi,
        ]
    }

    /// Noise-free time derivative of a state.
    pub fn rhs(&self, s: &SimState<T>) -> SimState<T> {
        let m = T::lit(self.mass);
        let d = self.deriv(
            T::lit(self.potential.spring(s.t)),
            &[s.z, s.p / m, s.q, s.phi],
        );
        SimState {
            t: 1.0,
            z: d[0],
            p: d[1] * m,
            q: d[2],
            phi: d[3],
        }
    }

    /// Advances `s = (z, v, Q, Phi)` from `t` by one step with the given
    /// noise increments.
    #[inline]
    pub fn step(&self, s: &mut [T; 4], t: f64, noise: &[T; 4]) {
        let h = self.dt_t;
        let half = T::lit(0.5);
        let k1 = T::lit(self.potential.spring(t));
        let k3 = T::lit(self.potential.spring(t + self.dt));
        let axpy =
            |a: &[T; 4], b: &[T; 4], c: T| -> [T; 4] { std::array::from_fn(|i| a[i] + b[i] * c) };
        match self.scheme {
            Scheme::Rk4Split => {
                let k2 = T::lit(self.potential.spring(t + 0.5 * self.dt));
                for i in 1..4 {
                    s[i] = s[i] + half * noise[i];
                }
                let d1 = self.deriv(k1, s);
                let d2 = self.deriv(k2, &axpy(s, &d1, half * h));
                let d3 = self.deriv(k2, &axpy(s, &d2, half * h));
                let d4 = self.deriv(k3, &axpy(s, &d3, h));
                let sixth = h / T::lit(6.0);
                for i in 0..4 {
                    s[i] = s[i] + sixth * (d1[i] + T::lit(2.0) * (d2[i] + d3[i]) + d4[i]);
                }
                for i in 1..4 {
                    s[i] = s[i] + half * noise[i];
                }
            }
            Scheme::Heun => {
                let d1 = self.deriv(k1, s);
                let mut pred = axpy(s, &d1, h);
                for i in 1..4 {
                    pred[i] = pred[i] + noise[i];
                }
                let d2 = self.deriv(k3, &pred);
                for i in 0..4 {
                    s[i] = s[i] + half * h * (d1[i] + d2[i]) + noise[i];
                }
            }
        }
    }

    pub fn steps(&self, duration: f64) -> u64 {
        (duration / self.dt).round().max(1.0) as u64
    }
}

/// Integrates one trajectory. Runs with the same seed are bit-identical.
pub fn integrate<T: Scalar>(
    system: &System<T>,
    plan: &SimPlan,
    seed: u64,
) -> Result<Trajectory<T>> {
    let integ = Integrator::new(system, plan)?;
    let mass = integ.mass;
    let mut init_rng = channel_rng(seed, 0);
    let xi_z: f64 = standard_normal(&mut init_rng);
    let xi_v: f64 = standard_normal(&mut init_rng);
    let (z0, v0) = match plan.initial {
        InitialCondition::Thermal(t_in) => {
            if !(t_in >= 0.0) {
                return Err(Error::invalid(
                    "initial temperature",
                    "must be non-negative",
                ));
            }
            let omega_z = system.derived.omega_z.as_f64();
            let v_s = xi_v * (BOLTZMANN * t_in / mass).sqrt();
            let z_s = xi_z * (BOLTZMANN * t_in / mass).sqrt() / omega_z;
            let (modulation, _) = integ.potential.micromotion(0.0);
            (z_s * modulation, v_s * modulation)
        }
        InitialCondition::State { z, v } => (z, v),
    };

    let mut rngs: Vec<ChaCha8Rng> = integ
        .kicks
        .iter()
        .map(|k| channel_rng(seed, k.channel as u64))
        .collect();
    let coupled = plan.model == ModelKind::Coupled;
    let n_steps = integ.steps(plan.duration);
    let n_out = (n_steps / plan.decimation as u64 + 1) as usize;
    let mut traj = Trajectory::with_capacity(n_out, coupled);

    let mut s = [T::lit(z0), T::lit(v0), T::zero(), T::zero()];
    for n in 0..=n_steps {
        let t = n as f64 * integ.dt;
        if n % plan.decimation as u64 == 0 {
            if s.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    t,
                    detail: format!(
                        "z = {}, v = {}, Q = {}, Phi = {}",
                        s[0].as_f64(),
                        s[1].as_f64(),
                        s[2].as_f64(),
                        s[3].as_f64()
                    ),
                });
            }
            traj.push(t, &s);
        }
        if n == n_steps {
            break;
        }
        let mut noise = [T::zero(); 4];
        for (kick, rng) in integ.kicks.iter().zip(rngs.iter_mut()) {
            let xi: T = standard_normal(rng);
            noise[kick.target as usize] = noise[kick.target as usize] + kick.std * xi;
        }
        integ.step(&mut s, t, &noise);
    }

    traj.meta = TrajectoryMeta {
        seed,
        dt: integ.dt,
        sample_interval: integ.dt * plan.decimation as f64,
        model: plan.model,
        mass,
        charge: system.particle.charge().as_f64(),
        omega_z: system.derived.omega_z.as_f64(),
        potential: integ.potential,
        gamma_total: integ.gamma_total,
        heating_power: integ.heating_power,
        relaxation_rate: match plan.model {
            ModelKind::Reduced => integ.gamma_total,
            ModelKind::Coupled if plan.damping.resistive => {
                integ.gamma_total + system.derived.gamma_res.as_f64()
            }
            ModelKind::Coupled => integ.gamma_total,
        },
        snapshot: system.snapshot(),
    };
    Ok(traj)
}

/// Runs `count` trajectories with seeds `base_seed + i` in parallel; the
/// result is ordered by index.
pub fn run_ensemble<T: Scalar>(
    system: &System<T>,
    plan: &SimPlan,
    base_seed: u64,
    count: usize,
) -> Result<Vec<Trajectory<T>>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| integrate(system, plan, base_seed.wrapping_add(i)))
        .collect()
}
