use std::io::Write;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::Scalar;

/// One-sided power spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freq_hz: Vec<f64>,
    /// [unit^2 / Hz] of the input, m^2/Hz for positions.
    pub psd: Vec<f64>,
    pub segment_length: usize,
    pub overlap: f64,
    pub segments: usize,
    pub window: &'static str,
}

impl Spectrum {
    pub fn resolution(&self) -> f64 {
        self.freq_hz.get(1).copied().unwrap_or(0.0)
    }

    /// `sum PSD df`, the variance of the input.
    pub fn integrate(&self) -> f64 {
        self.psd.iter().sum::<f64>() * self.resolution()
    }

    /// Power between `f_lo` and `f_hi` inclusive.
    pub fn band_power(&self, f_lo: f64, f_hi: f64) -> f64 {
        self.freq_hz
            .iter()
            .zip(&self.psd)
            .filter(|(f, _)| **f >= f_lo && **f <= f_hi)
            .map(|(_, p)| p)
            .sum::<f64>()
            * self.resolution()
    }

    /// Frequency of the largest bin above `f_min`.
    pub fn peak_frequency(&self, f_min: f64) -> f64 {
        self.peak_frequency_in(f_min, f64::INFINITY)
    }

    /// Frequency of the largest bin in `[f_lo, f_hi]`.
    pub fn peak_frequency_in(&self, f_lo: f64, f_hi: f64) -> f64 {
        self.freq_hz
            .iter()
            .zip(&self.psd)
            .filter(|(f, _)| **f >= f_lo && **f <= f_hi)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0.0, |(f, _)| *f)
    }

    pub fn write_csv<W: Write>(&self, mut w: W, header: &[(String, String)]) -> Result<()> {
        for (k, v) in header {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "# window = {}", self.window)?;
        writeln!(w, "# segment_length = {}", self.segment_length)?;
        writeln!(w, "# overlap = {}", self.overlap)?;
        writeln!(w, "# segments = {}", self.segments)?;
        writeln!(w, "freq_hz,psd_m2_per_hz")?;
        for (f, p) in self.freq_hz.iter().zip(&self.psd) {
            writeln!(w, "{f:e},{p:e}")?;
        }
        Ok(())
    }
}

/// Welch estimate: mean-removed Hann-windowed segments, averaged
/// periodograms, one-sided, normalised so the spectrum integrates to the
/// variance.
pub fn estimate_psd(
    samples: &[f64],
    sample_interval: f64,
    segment_length: usize,
    overlap: f64,
) -> Result<Spectrum> {
    if segment_length < 4 {
        return Err(Error::invalid("segment_length", "must be at least 4"));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::invalid("overlap", "must lie in [0, 1)"));
    }
    if !(sample_interval > 0.0) {
        return Err(Error::invalid("sample_interval", "must be positive"));
    }
    if samples.len() < 2 * segment_length {
        return Err(Error::TrajectoryTooShort {
            len: samples.len(),
            needed: 2 * segment_length,
        });
    }
    let n = segment_length;
    let hop = ((n as f64 * (1.0 - overlap)).round() as usize).max(1);
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    let w2: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let bins = n / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    let mut segments = 0;
    let mut start = 0;
    while start + n <= samples.len() {
        let seg = &samples[start..start + n];
        let mean = seg.iter().sum::<f64>() / n as f64;
        for ((b, x), w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    let fs = 1.0 / sample_interval;
    let scale = 1.0 / (fs * w2 * segments as f64);
    let psd = acc
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let one_sided = if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
                1.0
            } else {
                2.0
            };
            a * scale * one_sided
        })
        .collect();
    Ok(Spectrum {
        freq_hz: (0..bins).map(|k| k as f64 * fs / n as f64).collect(),
        psd,
        segment_length: n,
        overlap,
        segments,
        window: "hann",
    })
}

/// Position spectrum of a trajectory.
pub fn estimate_trajectory_psd<T: Scalar>(
    traj: &Trajectory<T>,
    segment_length: usize,
    overlap: f64,
) -> Result<Spectrum> {
    let z: Vec<f64> = traj.z.iter().map(|x| x.as_f64()).collect();
    estimate_psd(&z, traj.sample_interval(), segment_length, overlap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{channel_rng, standard_normal};

    #[test]
    fn sinusoid_power() {
        let (fs, f0, a) = (1e4, 1234.5, 0.7);
        let x: Vec<f64> = (0..1 << 16)
            .map(|i| a * (2.0 * std::f64::consts::PI * f0 * i as f64 / fs).sin())
            .collect();
        let s = estimate_psd(&x, 1.0 / fs, 4096, 0.5).unwrap();
        assert!((s.integrate() / (a * a / 2.0) - 1.0).abs() < 0.02);
        assert!((s.peak_frequency(0.0) - f0).abs() <= s.resolution());
    }

    #[test]
    fn white_noise_is_flat() {
        let mut rng = channel_rng(3, 0);
        let sigma = 2.5;
        let x: Vec<f64> = (0..1 << 18)
            .map(|_| sigma * standard_normal::<f64, _>(&mut rng))
            .collect();
        let s = estimate_psd(&x, 1e-3, 1024, 0.5).unwrap();
        assert!((s.integrate() / (sigma * sigma) - 1.0).abs() < 0.05);
        let level = 2.0 * sigma * sigma * 1e-3;
        let mid = &s.psd[10..500];
        let mean = mid.iter().sum::<f64>() / mid.len() as f64;
        assert!((mean / level - 1.0).abs() < 0.05);
    }

    #[test]
    fn short_input_rejected() {
        assert!(matches!(
            estimate_psd(&[0.0; 100], 1.0, 64, 0.5),
            Err(Error::TrajectoryTooShort { .. })
        ));
    }
}
