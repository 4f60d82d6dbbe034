//! Run configuration: a TOML file with one section per component and
//! unit-suffixed keys. Every field has a default, so an empty file
//! describes a 1 um silica sphere carrying 1e5 e in a 100 kHz trap read
//! out by a 100 MOhm, Q = 100 series circuit at 300 K.

use std::path::Path;

use levem_core::dynamics::{InitialCondition, ModelKind, Scheme, SimPlan, System};
use levem_core::feedback::FeedbackConfig;
use levem_core::model::{
    CircuitConfig, ElectrodeNoise, GasParams, ParticleSpec, Topology, TrapConfig, Tuning,
};
use levem_core::noise::NoiseEnvironment;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::CliError;

const AMU: f64 = 1.660_539_066_60e-27;
const MBAR: f64 = 100.0;
const TAU: f64 = 2.0 * std::f64::consts::PI;
/// Prefix of embedded configuration lines in output headers.
pub const HEADER_PREFIX: &str = "# config.";

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub particle: ParticleSection,
    pub trap: TrapSection,
    pub circuit: CircuitSection,
    pub gas: GasSection,
    pub feedback: FeedbackSection,
    pub electrode: ElectrodeSection,
    pub simulation: SimulationSection,
    pub sweep: SweepSection,
    pub sense: SenseSection,
    pub quantum: QuantumSection,
    pub psd: PsdSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParticleSection {
    pub radius_m: f64,
    pub density_kg_m3: f64,
    pub charge_e: f64,
}

impl Default for ParticleSection {
    fn default() -> Self {
        Self {
            radius_m: 1e-6,
            density_kg_m3: 2200.0,
            charge_e: 1e5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrapSection {
    pub u0_v: f64,
    pub udc_v: f64,
    pub drive_freq_hz: f64,
    pub r0_m: f64,
    pub d_m: f64,
    pub eta: f64,
    /// Defaults to half of `d_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_prime_m: Option<f64>,
}

impl Default for TrapSection {
    fn default() -> Self {
        Self {
            u0_v: 3000.0,
            udc_v: 0.0,
            drive_freq_hz: 100e3,
            r0_m: 500e-6,
            d_m: 1e-3,
            eta: 0.8,
            r_prime_m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyName {
    Series,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CircuitSection {
    pub topology: TopologyName,
    pub resistance_ohm: f64,
    pub quality_factor: f64,
    /// Fixes `L` instead of the quality factor when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inductance_h: Option<f64>,
    pub temperature_k: f64,
}

impl Default for CircuitSection {
    fn default() -> Self {
        Self {
            topology: TopologyName::Series,
            resistance_ohm: 100e6,
            quality_factor: 100.0,
            inductance_h: None,
            temperature_k: 300.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GasSection {
    /// Exactly one of the two pressures may be given; 1e-10 mbar otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_mbar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure_pa: Option<f64>,
    pub temperature_k: f64,
    pub molecule_mass_amu: f64,
}

impl Default for GasSection {
    fn default() -> Self {
        Self {
            pressure_mbar: None,
            pressure_pa: None,
            temperature_k: 300.0,
            molecule_mass_amu: 28.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeedbackSection {
    pub enabled: bool,
    pub gain: f64,
    pub noise_voltage_v: f64,
    pub amp_resistance_ohm: f64,
    pub bandwidth_hz: f64,
    pub allow_amplification: bool,
}

impl Default for FeedbackSection {
    fn default() -> Self {
        let f = FeedbackConfig::<f64>::default();
        Self {
            enabled: f.enabled,
            gain: f.gain,
            noise_voltage_v: f.noise_voltage,
            amp_resistance_ohm: f.amp_resistance,
            bandwidth_hz: f.bandwidth,
            allow_amplification: f.allow_amplification,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElectrodeSection {
    /// Adds electrode field noise to the simulated forces.
    pub enabled: bool,
    pub g_e: f64,
    pub alpha: f64,
    pub beta: f64,
    pub chi: f64,
    pub inverse_distance: bool,
    /// Defaults to the circuit temperature.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

impl Default for ElectrodeSection {
    fn default() -> Self {
        let e = ElectrodeNoise::<f64>::default();
        Self {
            enabled: false,
            g_e: e.g_e,
            alpha: e.alpha,
            beta: e.beta,
            chi: e.chi,
            inverse_distance: e.inverse_distance,
            temperature_k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Reduced,
    Coupled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Rk4,
    Heun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub model: ModelName,
    pub scheme: SchemeName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    pub duration_s: f64,
    pub decimation: usize,
    pub seed: u64,
    /// Thermal start at this temperature unless `initial_z_m` is set.
    pub initial_temperature_k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_z_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_v_m_s: Option<f64>,
    /// Replaces the Paul drive by a static well at this frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harmonic_freq_hz: Option<f64>,
    /// Defaults to five relaxation times, at most half the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in_s: Option<f64>,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            model: ModelName::Reduced,
            scheme: SchemeName::Rk4,
            dt_s: None,
            duration_s: 0.5,
            decimation: 50,
            seed: 0,
            initial_temperature_k: 300.0,
            initial_z_m: None,
            initial_v_m_s: None,
            harmonic_freq_hz: None,
            burn_in_s: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    /// Dotted key of the swept input, e.g. `circuit.resistance_ohm`.
    pub parameter: String,
    pub values: Vec<f64>,
    pub replicates: usize,
    /// Also fit the friction rate from a noise-free ring-down per point.
    pub fit_damping: bool,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            parameter: "circuit.resistance_ohm".into(),
            values: vec![1e6, 1e7, 1e8],
            replicates: 1,
            fit_damping: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SenseSection {
    pub bandwidth_hz: f64,
    /// Damping for the velocity and force limits; the resistive rate otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_per_s: Option<f64>,
    /// Secular frequency; from the trap otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secular_freq_hz: Option<f64>,
}

impl Default for SenseSection {
    fn default() -> Self {
        Self {
            bandwidth_hz: 1.0,
            gamma_per_s: None,
            secular_freq_hz: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumSection {
    /// Harmonic frequency; the trap secular frequency otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub freq_hz: Option<f64>,
    /// Zero-point corrected resistor noise.
    pub quantum_diffusion: bool,
    /// Evolution from a thermal particle state, skipped when zero.
    pub duration_s: f64,
    pub steps: usize,
    pub initial_temperature_k: f64,
}

impl Default for QuantumSection {
    fn default() -> Self {
        Self {
            freq_hz: None,
            quantum_diffusion: true,
            duration_s: 0.0,
            steps: 200,
            initial_temperature_k: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsdSection {
    pub segment_length: usize,
    pub overlap: f64,
    /// Trajectory file to analyse; a fresh simulation otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
}

impl Default for PsdSection {
    fn default() -> Self {
        Self {
            segment_length: 4096,
            overlap: 0.5,
            input: None,
        }
    }
}

fn config_err(msg: impl std::fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}

/// Reads a TOML file, or recovers the configuration embedded in the header
/// of a previous output file.
pub fn load_table(path: &Path) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    if text.lines().any(|l| l.starts_with(HEADER_PREFIX)) {
        return table_from_header(&text);
    }
    text.parse::<Table>()
        .map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// Applies `key=value` overrides; the value is read as TOML and falls back
/// to a bare string.
pub fn apply_override(table: &mut Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| config_err(format!("override `{assignment}` is not key=value")))?;
    let value = parse_value(raw.trim());
    set_path(table, key.trim(), value)
}

fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

pub fn set_path(table: &mut Table, key: &str, value: Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let leaf = parts
        .pop()
        .filter(|l| !l.is_empty())
        .ok_or_else(|| config_err(format!("bad key `{key}`")))?;
    let mut node = table;
    for part in parts {
        node = node
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()))
            .as_table_mut()
            .ok_or_else(|| config_err(format!("`{part}` in `{key}` is not a section")))?;
    }
    node.insert(leaf.to_string(), value);
    Ok(())
}

fn table_from_header(text: &str) -> Result<Table, CliError> {
    let mut table = Table::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix(HEADER_PREFIX) {
            let (key, raw) = rest
                .split_once(" = ")
                .ok_or_else(|| config_err(format!("malformed header line `{line}`")))?;
            set_path(&mut table, key, parse_value(raw))?;
        }
    }
    Ok(table)
}

impl RunConfig {
    pub fn from_table(table: Table) -> Result<Self, CliError> {
        let cfg: RunConfig = Value::Table(table).try_into().map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_table(&self) -> Table {
        Table::try_from(self).expect("configuration serialises")
    }

    /// `# config.section.key = value` lines, sorted by section.
    pub fn header_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (section, body) in self.to_table() {
            if let Value::Table(t) = body {
                for (k, v) in t {
                    out.push(format!("{HEADER_PREFIX}{section}.{k} = {v}"));
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.gas.pressure_mbar.is_some() && self.gas.pressure_pa.is_some() {
            return Err(config_err(
                "give gas.pressure_mbar or gas.pressure_pa, not both",
            ));
        }
        if !(self.simulation.duration_s > 0.0) {
            return Err(config_err("simulation.duration_s must be positive"));
        }
        if self.simulation.decimation == 0 {
            return Err(config_err("simulation.decimation must be at least 1"));
        }
        if self.sweep.replicates == 0 {
            return Err(config_err("sweep.replicates must be at least 1"));
        }
        Ok(())
    }

    pub fn particle(&self) -> Result<ParticleSpec, CliError> {
        let p = &self.particle;
        Ok(ParticleSpec::new(p.radius_m, p.density_kg_m3, p.charge_e)?)
    }

    pub fn trap(&self) -> Result<TrapConfig, CliError> {
        let t = &self.trap;
        Ok(TrapConfig::new(
            t.u0_v,
            t.udc_v,
            TAU * t.drive_freq_hz,
            t.r0_m,
            t.d_m,
            t.eta,
            t.r_prime_m.unwrap_or(0.5 * t.d_m),
        )?)
    }

    pub fn circuit(&self) -> CircuitConfig {
        let c = &self.circuit;
        CircuitConfig {
            topology: match c.topology {
                TopologyName::Series => Topology::Series,
                TopologyName::Parallel => Topology::Parallel,
            },
            resistance: c.resistance_ohm,
            tuning: c
                .inductance_h
                .map_or(Tuning::QualityFactor(c.quality_factor), Tuning::Inductance),
            temperature: c.temperature_k,
        }
    }

    pub fn gas(&self) -> GasParams {
        let g = &self.gas;
        let pressure = g
            .pressure_pa
            .or(g.pressure_mbar.map(|p| p * MBAR))
            .unwrap_or(1e-10 * MBAR);
        GasParams {
            pressure,
            temperature: g.temperature_k,
            molecule_mass: g.molecule_mass_amu * AMU,
        }
    }

    pub fn feedback(&self) -> FeedbackConfig {
        let f = &self.feedback;
        FeedbackConfig {
            gain: f.gain,
            noise_voltage: f.noise_voltage_v,
            amp_resistance: f.amp_resistance_ohm,
            bandwidth: f.bandwidth_hz,
            enabled: f.enabled,
            allow_amplification: f.allow_amplification,
        }
    }

    pub fn noise(&self) -> NoiseEnvironment {
        let e = &self.electrode;
        let mut n = NoiseEnvironment::new(self.circuit.temperature_k, self.simulation.seed);
        n.gas = self.gas();
        n.electrode = ElectrodeNoise {
            g_e: e.g_e,
            alpha: e.alpha,
            beta: e.beta,
            chi: e.chi,
            inverse_distance: e.inverse_distance,
        };
        n.electrode_temperature = e.temperature_k;
        n
    }

    /// The simulated system; a static well when `harmonic_freq_hz` is set.
    pub fn system(&self) -> Result<System, CliError> {
        let (p, t, c, n, f) = (
            self.particle()?,
            self.trap()?,
            self.circuit(),
            self.noise(),
            self.feedback(),
        );
        Ok(match self.simulation.harmonic_freq_hz {
            Some(hz) => System::harmonic(p, t, c, n, f, TAU * hz)?,
            None => System::new(p, t, c, n, f)?,
        })
    }

    pub fn plan(&self) -> SimPlan {
        let s = &self.simulation;
        let mut plan = SimPlan::new(s.duration_s);
        plan.model = match s.model {
            ModelName::Reduced => ModelKind::Reduced,
            ModelName::Coupled => ModelKind::Coupled,
        };
        plan.scheme = match s.scheme {
            SchemeName::Rk4 => Scheme::Rk4Split,
            SchemeName::Heun => Scheme::Heun,
        };
        plan.dt = s.dt_s;
        plan.decimation = s.decimation;
        plan.noise.electrode = self.electrode.enabled;
        plan.initial = match s.initial_z_m {
            Some(z) => InitialCondition::State {
                z,
                v: s.initial_v_m_s.unwrap_or(0.0),
            },
            None => InitialCondition::Thermal(s.initial_temperature_k),
        };
        plan
    }
}
