use crate::constants::k_b;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{ParticleSpec, TrapConfig};
use crate::Scalar;

/// Relative residual above which a fit is flagged.
const POOR_FIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// Decay rate of `A exp(-rate t)` [1/s].
    pub rate: f64,
    pub amplitude: f64,
    /// RMS residual of the logarithm.
    pub residual: f64,
}

/// Least squares of `ln y = ln A - rate t`.
pub fn fit_exponential(times: &[f64], values: &[f64]) -> Result<ExponentialFit> {
    if times.len() != values.len() || times.len() < 3 {
        return Err(Error::TrajectoryTooShort {
            len: times.len().min(values.len()),
            needed: 3,
        });
    }
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::invalid(
            "values",
            "an exponential fit needs positive data",
        ));
    }
    let n = times.len() as f64;
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let tm = times.iter().sum::<f64>() / n;
    let lm = ly.iter().sum::<f64>() / n;
    let sxx: f64 = times.iter().map(|t| (t - tm).powi(2)).sum();
    let sxy: f64 = times
        .iter()
        .zip(&ly)
        .map(|(t, l)| (t - tm) * (l - lm))
        .sum();
    let slope = sxy / sxx;
    let intercept = lm - slope * tm;
    let residual = (times
        .iter()
        .zip(&ly)
        .map(|(t, l)| (l - intercept - slope * t).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ExponentialFit {
        rate: -slope,
        amplitude: intercept.exp(),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingFit {
    /// Friction rate [1/s].
    pub rate: f64,
    /// RMS misfit relative to the RMS energy change.
    pub residual: f64,
    pub poor_fit: bool,
}

/// [`fit_damping_rate_window`] over the whole trajectory.
pub fn fit_damping_rate<T: Scalar>(traj: &Trajectory<T>) -> Result<DampingFit> {
    fit_damping_rate_window(traj, f64::NEG_INFINITY, f64::INFINITY)
}

/// Friction rate from the particle energy balance
///
/// ```text
/// E(t) - E(t0) = W_drive(t) - gamma * int M v^2 dt + P_noise (t - t0)
/// ```
///
/// with `E = M v^2/2 + M k(t) z^2/2` and drive work `int M k'(t) z^2/2 dt`.
/// The rate follows by linear least squares. This holds in every damping
/// regime of the reduced model, overdamped included; on a noiseless
/// harmonic run it reduces to the decay rate of the energy envelope.
pub fn fit_damping_rate_window<T: Scalar>(
    traj: &Trajectory<T>,
    t0: f64,
    t1: f64,
) -> Result<DampingFit> {
    let lo = traj.index_at(t0);
    let hi = traj.index_at(t1).min(traj.len());
    if hi < lo + 5 {
        return Err(Error::TrajectoryTooShort {
            len: hi.saturating_sub(lo),
            needed: 5,
        });
    }
    let m = traj.meta.mass;
    let pot = traj.meta.potential;
    let at = |i: usize| (traj.times[i], traj.z[i].as_f64(), traj.v[i].as_f64());
    let energy = |t: f64, z: f64, v: f64| 0.5 * m * (v * v + pot.spring(t) * z * z);
    let drive = |t: f64, z: f64| 0.5 * m * pot.spring_rate(t) * z * z;

    // The drive power oscillates at w_D with an amplitude far above the
    // dissipated power, so both integrals use Simpson's rule over sample
    // pairs and only every other sample enters the regression.
    let (t_start, z0, v0) = at(lo);
    let e0 = energy(t_start, z0, v0);
    let (mut work, mut dissipation) = (0.0, 0.0);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    let mut xs = Vec::with_capacity((hi - lo) / 2);
    let mut ys = Vec::with_capacity((hi - lo) / 2);
    let mut i = lo;
    while i + 2 < hi {
        let (ta, za, va) = at(i);
        let (tb, zb, vb) = at(i + 1);
        let (tc, zc, vc) = at(i + 2);
        let h = (tc - ta) / 6.0;
        work += h * (drive(ta, za) + 4.0 * drive(tb, zb) + drive(tc, zc));
        dissipation += h * m * (va * va + 4.0 * vb * vb + vc * vc);
        let y = energy(tc, zc, vc) - e0 - work - traj.meta.heating_power * (tc - t_start);
        let x = -dissipation;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
        xs.push(x);
        ys.push(y);
        i += 2;
    }
    if sxx == 0.0 {
        return Err(Error::invalid(
            "trajectory",
            "the particle never moves; no damping to fit",
        ));
    }
    let rate = sxy / sxx;
    let misfit: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - rate * x).powi(2))
        .sum();
    let residual = (misfit / syy.max(f64::MIN_POSITIVE)).sqrt();
    Ok(DampingFit {
        rate,
        residual,
        poor_fit: residual > POOR_FIT || rate <= 0.0,
    })
}

/// Equipartition peak current `(q eta / d) sqrt(k_B T / M)`.
pub fn peak_current<T: Scalar>(
    particle: &ParticleSpec<T>,
    trap: &TrapConfig<T>,
    t_cm: T,
) -> Result<T> {
    if !(t_cm >= T::zero()) {
        return Err(Error::invalid("temperature", "must be non-negative"));
    }
    Ok(particle.charge().abs() * trap.eta / trap.d * (k_b::<T>() * t_cm / particle.mass()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_envelope() {
        let t: Vec<f64> = (0..500).map(|i| i as f64 * 1e-5).collect();
        let y: Vec<f64> = t.iter().map(|t| 3.0 * (-1e3 * t).exp()).collect();
        let f = fit_exponential(&t, &y).unwrap();
        assert!((f.rate / 1e3 - 1.0).abs() < 1e-9);
        assert!((f.amplitude - 3.0).abs() < 1e-9);
        assert!(fit_exponential(&t, &vec![0.0; 500]).is_err());
    }

    #[test]
    fn peak_current_reference() {
        let p = ParticleSpec::silica(1e-6, 1e6).unwrap();
        let trap = TrapConfig::reference();
        let i: f64 = peak_current(&p, &trap, 300.0).unwrap();
        assert!((i / 8.6e-14 - 1.0).abs() < 0.01, "{i:e}");
        assert_eq!(peak_current(&p, &trap, 0.0).unwrap(), 0.0);
    }
}
