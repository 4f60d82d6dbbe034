//! Stochastic equations of motion.
//!
//! The reduced model integrates the particle alone,
//! `z'' = -k(t) z - gamma z' + F/M`, with the circuit folded into a friction
//! rate and its Johnson noise. The coupled model keeps the circuit charge
//! `Q` and flux `Phi`:
//!
//! ```text
//! Q'   = Phi/L                 (- Gamma Q + noise, parallel)
//! Phi' = -Q/C - kappa z        (- Gamma Phi + noise, series)
//! p'   = -M k(t) z - kappa Q - gamma_gas p + noise,   kappa = q eta / (C d)
//! ```
//!
//! The default scheme is classical RK4 for the drift with the additive noise
//! applied as two half kicks around it; stochastic Heun is available too.
//! The drive phase is evaluated in `f64` from the step count.

mod integrator;
mod observables;
mod system;
mod trajectory;

pub use integrator::{
    integrate, run_ensemble, ChannelKick, Integrator, NoiseChannel, Target, STABILITY_GUARD,
    STEPS_PER_PERIOD,
};
pub use observables::{
    coupled_energy, frequency_response, induced_current, pickup_voltage, FrequencyResponse,
};
pub use system::{
    Channels, InitialCondition, ModelKind, Potential, Scheme, SimPlan, SimState, System,
};
pub use trajectory::{Trajectory, TrajectoryMeta};
