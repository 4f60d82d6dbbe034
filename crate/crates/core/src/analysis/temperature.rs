use crate::analysis::estimate_psd;
use crate::constants::BOLTZMANN;
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::Scalar;

const BATCHES: usize = 20;
const MIN_SAMPLES: usize = 200;
/// Averaging windows shorter than this many correlation times `1/gamma`
/// are flagged.
const MIN_CORRELATION_TIMES: f64 = 20.0;

/// Secular temperature with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureEstimate {
    /// [K]
    pub temperature: f64,
    /// [K]; doubled when `insufficient` is set.
    pub std_error: f64,
    pub samples: usize,
    /// Too few samples or correlation times after the burn-in.
    pub insufficient: bool,
}

/// Secular position and velocity with the micromotion divided out:
/// `z = z_s (1 - (q/2) cos w_D t)`, `v = v_s (1 - (q/2) cos w_D t) + (q w_D/2) sin(w_D t) z_s`.
pub fn secular_series<T: Scalar>(traj: &Trajectory<T>) -> (Vec<f64>, Vec<f64>) {
    let pot = traj.meta.potential;
    traj.times
        .iter()
        .zip(traj.z.iter().zip(&traj.v))
        .map(|(&t, (z, v))| {
            let (m, s) = pot.micromotion(t);
            let z_s = z.as_f64() / m;
            (z_s, (v.as_f64() - s * z_s) / m)
        })
        .unzip()
}

/// Secular energy `M v_s^2 / 2 + M w_z^2 z_s^2 / 2` per sample [J].
pub fn secular_energy<T: Scalar>(traj: &Trajectory<T>) -> Vec<f64> {
    let (z, v) = secular_series(traj);
    let (m, w) = (traj.meta.mass, traj.meta.omega_z);
    z.iter()
        .zip(&v)
        .map(|(z, v)| 0.5 * m * (v * v + w * w * z * z))
        .collect()
}

/// `T = M <v_s^2> / k_B` over samples after `burn_in` seconds.
///
/// The demodulation presumes secular motion slower than the drive; for an
/// overdamped particle (`gamma > w_D`) use the lab-frame velocity instead.
pub fn estimate_temperature<T: Scalar>(
    traj: &Trajectory<T>,
    burn_in: f64,
) -> Result<TemperatureEstimate> {
    let start = traj.index_at(burn_in);
    let n = traj.len().saturating_sub(start);
    if n < 2 {
        return Err(Error::TrajectoryTooShort { len: n, needed: 2 });
    }
    let (_, v) = secular_series(traj);
    let scale = traj.meta.mass / BOLTZMANN;
    let t2: Vec<f64> = v[start..].iter().map(|v| scale * v * v).collect();
    let temperature = t2.iter().sum::<f64>() / n as f64;

    let batches = BATCHES.min(n);
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| t2[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let mb = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mb).powi(2)).sum::<f64>() / (batches - 1).max(1) as f64;
    let mut std_error = (var / batches as f64).sqrt();

    let span = traj.times[traj.len() - 1] - traj.times[start];
    let insufficient = n < MIN_SAMPLES || span * traj.meta.relaxation_rate < MIN_CORRELATION_TIMES;
    if insufficient {
        std_error *= 2.0;
    }
    Ok(TemperatureEstimate {
        temperature,
        std_error,
        samples: n,
        insufficient,
    })
}

/// Mean over independent runs, with the standard error of that mean.
pub fn ensemble_temperature<T: Scalar>(
    runs: &[Trajectory<T>],
    burn_in: f64,
) -> Result<TemperatureEstimate> {
    if runs.len() < 2 {
        return Err(Error::TrajectoryTooShort {
            len: runs.len(),
            needed: 2,
        });
    }
    let each = runs
        .iter()
        .map(|r| estimate_temperature(r, burn_in))
        .collect::<Result<Vec<_>>>()?;
    let k = each.len() as f64;
    let mean = each.iter().map(|e| e.temperature).sum::<f64>() / k;
    let var = each
        .iter()
        .map(|e| (e.temperature - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    Ok(TemperatureEstimate {
        temperature: mean,
        std_error: (var / k).sqrt(),
        samples: each.iter().map(|e| e.samples).sum(),
        insufficient: each.iter().any(|e| e.insufficient),
    })
}

/// `M w_z^2 / k_B` times the integrated spectrum of the secular position.
pub fn psd_temperature<T: Scalar>(
    traj: &Trajectory<T>,
    burn_in: f64,
    segment_length: usize,
) -> Result<f64> {
    let start = traj.index_at(burn_in);
    let (z, _) = secular_series(traj);
    let spec = estimate_psd(&z[start..], traj.sample_interval(), segment_length, 0.5)?;
    Ok(traj.meta.mass * traj.meta.omega_z.powi(2) * spec.integrate() / BOLTZMANN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Potential;
    use crate::noise::{channel_rng, standard_normal};

    fn synthetic(v: Vec<f64>, dt: f64, mass: f64, gamma: f64) -> Trajectory<f64> {
        let mut t = Trajectory::with_capacity(v.len(), false);
        t.times = (0..v.len()).map(|i| i as f64 * dt).collect();
        t.z = vec![0.0; v.len()];
        t.v = v;
        t.meta.mass = mass;
        t.meta.gamma_total = gamma;
        t.meta.relaxation_rate = gamma;
        t.meta.sample_interval = dt;
        t.meta.potential = Potential::Harmonic { omega: 1.0 };
        t
    }

    #[test]
    fn zero_trajectory_is_cold() {
        let t = synthetic(vec![0.0; 1000], 1e-3, 1.0, 1e3);
        assert_eq!(estimate_temperature(&t, 0.0).unwrap().temperature, 0.0);
    }

    #[test]
    fn unbiased_on_ornstein_uhlenbeck() {
        // exact OU update, 2e5 correlation times
        let (gamma, dt, mass, temp) = (1.0f64, 0.5f64, 1e-20f64, 300.0f64);
        let sigma = (BOLTZMANN * temp / mass).sqrt();
        let a = (-gamma * dt).exp();
        let b = sigma * (1.0 - a * a).sqrt();
        let mut rng = channel_rng(5, 1);
        let mut x = sigma * standard_normal::<f64, _>(&mut rng);
        let v: Vec<f64> = (0..400_000)
            .map(|_| {
                x = a * x + b * standard_normal::<f64, _>(&mut rng);
                x
            })
            .collect();
        let est = estimate_temperature(&synthetic(v, dt, mass, gamma), 0.0).unwrap();
        assert!((est.temperature / temp - 1.0).abs() < 0.02, "{est:?}");
        assert!(!est.insufficient);
        assert!(est.std_error > 0.0 && est.std_error < 0.02 * temp);
    }

    #[test]
    fn short_runs_are_flagged() {
        let t = synthetic(vec![1.0; 100], 1e-3, 1.0, 1.0);
        assert!(estimate_temperature(&t, 0.0).unwrap().insufficient);
        assert!(estimate_temperature(&t, 1.0).is_err());
    }
}
