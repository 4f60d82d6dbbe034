//! Quantities extracted from trajectories: spectra, secular temperatures,
//! damping fits and induced-current levels.

mod fit;
mod spectrum;
mod temperature;

pub use fit::{
    fit_damping_rate, fit_damping_rate_window, fit_exponential, peak_current, DampingFit,
    ExponentialFit,
};
pub use spectrum::{estimate_psd, estimate_trajectory_psd, Spectrum};
pub use temperature::{
    ensemble_temperature, estimate_temperature, psd_temperature, secular_energy, secular_series,
    TemperatureEstimate,
};
