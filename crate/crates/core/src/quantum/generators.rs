use nalgebra::{Matrix4, Vector4};

use crate::constants::{BOLTZMANN, HBAR};
use crate::dynamics::{Potential, System};
use crate::error::{Error, Result};
use crate::model::Topology;
use crate::Scalar;

/// Drift and diffusion of the moment equations, in SI units, with the
/// scale factors of the dimensionless form.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentGenerators {
    pub drift: Matrix4<f64>,
    pub diffusion: Matrix4<f64>,
    /// Zero-point units `(z0, p0, Q0, Phi0)` with `z0 p0 = Q0 Phi0 = hbar`.
    pub scale: Vector4<f64>,
    pub omega_z: f64,
    pub mass: f64,
    pub temperature: f64,
    pub quantum: bool,
}

impl MomentGenerators {
    fn s(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&self.scale)
    }

    fn s_inv(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&self.scale.map(|x| 1.0 / x))
    }

    /// Drift in zero-point units per `1/w_z`.
    pub fn scaled_drift(&self) -> Matrix4<f64> {
        self.s_inv() * self.drift * self.s() / self.omega_z
    }

    pub fn scaled_diffusion(&self) -> Matrix4<f64> {
        self.s_inv() * self.diffusion * self.s_inv() / self.omega_z
    }

    /// SI covariance from a dimensionless one.
    pub fn unscale_cov(&self, cov: &Matrix4<f64>) -> Matrix4<f64> {
        self.s() * cov * self.s()
    }

    pub fn scale_cov(&self, cov: &Matrix4<f64>) -> Matrix4<f64> {
        self.s_inv() * cov * self.s_inv()
    }
}

/// Builds `A` and `D` for a system with a static harmonic potential and a
/// series circuit. `quantum` adds the charge diffusion of the exact
/// Lindblad operator, which requires `T_R > 0`.
pub fn moment_generators<T: Scalar>(system: &System<T>, quantum: bool) -> Result<MomentGenerators> {
    let Potential::Harmonic { omega } = system.potential else {
        return Err(Error::UnsupportedPotential(
            "moment dynamics need a static harmonic potential; the Paul drive is time dependent",
        ));
    };
    let c = &system.derived.circuit;
    if c.topology != Topology::Series {
        return Err(Error::UnsupportedTopology(
            "moment dynamics are defined for the series circuit",
        ));
    }
    let m = system.particle.mass().as_f64();
    let l = c.inductance.as_f64();
    let cap = c.capacitance.as_f64();
    let gamma = c.gamma.as_f64();
    let t_r = c.temperature.as_f64();
    let kappa =
        (system.particle.charge() * system.trap.eta).as_f64() / (cap * system.trap.d.as_f64());
    if quantum && !(t_r > 0.0) {
        return Err(Error::invalid(
            "circuit temperature",
            "the quantum diffusion term needs T_R > 0",
        ));
    }

    #[rustfmt::skip]
    let drift = Matrix4::new(
        0.0,                1.0 / m, 0.0,        0.0,
        -m * omega * omega, 0.0,     -kappa,     0.0,
        0.0,                0.0,     0.0,        1.0 / l,
        -kappa,             0.0,     -1.0 / cap, -gamma,
    );
    let mut diffusion = Matrix4::zeros();
    diffusion[(3, 3)] = 2.0 * gamma * l * BOLTZMANN * t_r;
    if quantum {
        diffusion[(2, 2)] = gamma * HBAR * HBAR / (8.0 * l * BOLTZMANN * t_r);
    }
    let w_lc = c.omega_lc.as_f64();
    let scale = Vector4::new(
        (HBAR / (m * omega)).sqrt(),
        (HBAR * m * omega).sqrt(),
        (HBAR / (l * w_lc)).sqrt(),
        (HBAR * l * w_lc).sqrt(),
    );
    Ok(MomentGenerators {
        drift,
        diffusion,
        scale,
        omega_z: omega,
        mass: m,
        temperature: t_r,
        quantum,
    })
}
