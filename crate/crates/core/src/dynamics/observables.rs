use crate::dynamics::{Potential, SimState, System};
use crate::error::{Error, Result};
use crate::model::{ParticleSpec, ResolvedCircuit, Topology, TrapConfig};
use crate::Scalar;

/// Image current `-(q eta / d) v` driven into the pickup electrodes.
pub fn induced_current<T: Scalar>(
    velocity: T,
    particle: &ParticleSpec<T>,
    trap: &TrapConfig<T>,
) -> T {
    -(particle.charge() * trap.eta / trap.d) * velocity
}

/// Voltage `I R_eff` developed across the tuned circuit.
pub fn pickup_voltage<T: Scalar>(current: T, r_eff: T) -> T {
    current * r_eff
}

/// Dispersive and dissipative parts of the force exerted by the driven
/// circuit on a particle oscillating at `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyResponse<T: Scalar = f64> {
    /// Change of the squared oscillation frequency [1/s^2],
    /// `-g (w_LC^2 - w^2) / D`.
    pub spring_shift: T,
    /// Friction rate [1/s], `g Gamma / D`.
    pub damping: T,
}

/// Eliminates a series circuit in the frequency domain. With
/// `g = (q eta)^2 w_LC^2 / (M C d^2)` and
/// `D = (w_LC^2 - w^2)^2 + w^2 Gamma^2` the circuit adds friction `g Gamma / D`,
/// which is `q^2 / (M C Gamma d^2)` on resonance and the adiabatic rate as
/// `w -> 0`.
pub fn frequency_response<T: Scalar>(
    omega: T,
    particle: &ParticleSpec<T>,
    trap: &TrapConfig<T>,
    circuit: &ResolvedCircuit<T>,
) -> Result<FrequencyResponse<T>> {
    if circuit.topology != Topology::Series {
        return Err(Error::UnsupportedTopology(
            "frequency response is defined for the series circuit",
        ));
    }
    let (w, w0, gamma) = (
        omega.as_f64(),
        circuit.omega_lc.as_f64(),
        circuit.gamma.as_f64(),
    );
    let qe = (particle.charge() * trap.eta).as_f64();
    let g = qe * qe * w0 * w0
        / (particle.mass().as_f64() * circuit.capacitance.as_f64() * trap.d.as_f64().powi(2));
    let detuning = w0 * w0 - w * w;
    let denom = detuning * detuning + w * w * gamma * gamma;
    Ok(FrequencyResponse {
        spring_shift: T::lit(-g * detuning / denom),
        damping: T::lit(g * gamma / denom),
    })
}

/// Total energy `p^2/2M + M w^2 z^2/2 + Q^2/2C + Phi^2/2L + kappa z Q` of the
/// coupled system in a harmonic well.
pub fn coupled_energy<T: Scalar>(system: &System<T>, s: &SimState<T>) -> Result<f64> {
    let Potential::Harmonic { omega } = system.potential else {
        return Err(Error::UnsupportedPotential(
            "energy is conserved only for a static harmonic well",
        ));
    };
    let c = &system.derived.circuit;
    let m = system.particle.mass().as_f64();
    let cap = c.capacitance.as_f64();
    let kappa =
        (system.particle.charge() * system.trap.eta).as_f64() / (cap * system.trap.d.as_f64());
    let (z, p, q, phi) = (s.z.as_f64(), s.p.as_f64(), s.q.as_f64(), s.phi.as_f64());
    Ok(p * p / (2.0 * m)
        + 0.5 * m * omega * omega * z * z
        + q * q / (2.0 * cap)
        + phi * phi / (2.0 * c.inductance.as_f64())
        + kappa * z * q)
}
