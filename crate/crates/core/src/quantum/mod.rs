//! Gaussian moment dynamics of a particle in a harmonic well coupled to a
//! series RLC circuit.
//!
//! For quadratic Hamiltonians and linear Lindblad operators the master
//! equation closes on first and second moments of `x = (z, p, Q, Phi)`:
//!
//! ```text
//! d<x>/dt   = A <x>
//! dSigma/dt = A Sigma + Sigma A^T + D
//! ```
//!
//! `Sigma` is the symmetrised covariance `<{dx_i, dx_j}>/2`. The resistor
//! damps `Phi` at rate `Gamma` and diffuses it with `2 Gamma L k_B T_R`; the
//! quantum correction adds charge diffusion `Gamma hbar^2 / (8 L k_B T_R)`,
//! which keeps the state physical down to low temperature. Linear algebra is
//! done in zero-point units with time measured in `1/w_z`.

mod generators;
mod lyapunov;
mod state;

pub use generators::{moment_generators, MomentGenerators};
pub use lyapunov::solve_lyapunov;
pub use state::{
    evolve, hurwitz_spectrum, lyapunov_residual, occupancy, propagate, steady_state, GaussianState,
};
