use std::io::{BufRead, Write};

use crate::dynamics::{ModelKind, Potential};
use crate::error::{Error, Result};
use crate::Scalar;

/// Run metadata, enough to interpret and replay the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub seed: u64,
    /// Integration step [s].
    pub dt: f64,
    /// Spacing of the stored samples [s].
    pub sample_interval: f64,
    pub model: ModelKind,
    /// [kg]
    pub mass: f64,
    /// [C]
    pub charge: f64,
    /// Secular angular frequency [rad/s].
    pub omega_z: f64,
    pub potential: Potential,
    /// Particle friction rate [1/s].
    pub gamma_total: f64,
    /// Mean noise power delivered to the particle [W].
    pub heating_power: f64,
    /// Rate at which the particle energy relaxes, including the circuit
    /// in the coupled model [1/s].
    pub relaxation_rate: f64,
    /// Configuration as `key = value` pairs.
    pub snapshot: Vec<(String, String)>,
}

impl Default for TrajectoryMeta {
    fn default() -> Self {
        Self {
            seed: 0,
            dt: 0.0,
            sample_interval: 0.0,
            model: ModelKind::Reduced,
            mass: 0.0,
            charge: 0.0,
            omega_z: 0.0,
            potential: Potential::Harmonic { omega: 0.0 },
            gamma_total: 0.0,
            heating_power: 0.0,
            relaxation_rate: 0.0,
            snapshot: Vec::new(),
        }
    }
}

impl TrajectoryMeta {
    /// Temperature of the combined particle baths, `P / (gamma k_B)`.
    pub fn bath_temperature(&self) -> f64 {
        if self.gamma_total > 0.0 {
            self.heating_power / (self.gamma_total * crate::constants::BOLTZMANN)
        } else {
            f64::INFINITY
        }
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = vec![
            ("seed".into(), self.seed.to_string()),
            ("dt_s".into(), format!("{:e}", self.dt)),
            (
                "sample_interval_s".into(),
                format!("{:e}", self.sample_interval),
            ),
            ("model".into(), format!("{:?}", self.model).to_lowercase()),
            ("mass_kg".into(), format!("{:e}", self.mass)),
            ("charge_c".into(), format!("{:e}", self.charge)),
            ("omega_z_rad_s".into(), format!("{:e}", self.omega_z)),
            (
                "gamma_total_per_s".into(),
                format!("{:e}", self.gamma_total),
            ),
            (
                "heating_power_w".into(),
                format!("{:e}", self.heating_power),
            ),
            (
                "relaxation_rate_per_s".into(),
                format!("{:e}", self.relaxation_rate),
            ),
        ];
        match self.potential {
            Potential::Paul { a, q, omega_d } => out.extend([
                ("potential".into(), "paul".into()),
                ("potential.a".into(), format!("{a:e}")),
                ("potential.q".into(), format!("{q:e}")),
                ("potential.omega_d_rad_s".into(), format!("{omega_d:e}")),
            ]),
            Potential::Harmonic { omega } => out.extend([
                ("potential".into(), "harmonic".into()),
                ("potential.omega_rad_s".into(), format!("{omega:e}")),
            ]),
        }
        out.extend(self.snapshot.iter().cloned());
        out
    }

    /// Inverse of [`TrajectoryMeta::to_pairs`]; unknown keys go to the snapshot.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut meta = Self::default();
        let (mut a, mut q, mut omega) = (0.0, 0.0, 0.0);
        let mut kind = "harmonic".to_string();
        for (k, v) in pairs {
            let num = || -> Result<f64> {
                v.parse::<f64>().map_err(|e| Error::Parse {
                    line: 0,
                    reason: format!("{k}: {e}"),
                })
            };
            match k.as_str() {
                "seed" => {
                    meta.seed = v.parse().map_err(|e| Error::Parse {
                        line: 0,
                        reason: format!("seed: {e}"),
                    })?
                }
                "dt_s" => meta.dt = num()?,
                "sample_interval_s" => meta.sample_interval = num()?,
                "model" => {
                    meta.model = match v.as_str() {
                        "coupled" => ModelKind::Coupled,
                        _ => ModelKind::Reduced,
                    }
                }
                "mass_kg" => meta.mass = num()?,
                "charge_c" => meta.charge = num()?,
                "omega_z_rad_s" => meta.omega_z = num()?,
                "gamma_total_per_s" => meta.gamma_total = num()?,
                "heating_power_w" => meta.heating_power = num()?,
                "relaxation_rate_per_s" => meta.relaxation_rate = num()?,
                "potential" => kind = v.clone(),
                "potential.a" => a = num()?,
                "potential.q" => q = num()?,
                "potential.omega_d_rad_s" | "potential.omega_rad_s" => omega = num()?,
                _ => meta.snapshot.push((k.clone(), v.clone())),
            }
        }
        meta.potential = if kind == "paul" {
            Potential::Paul {
                a,
                q,
                omega_d: omega,
            }
        } else {
            Potential::Harmonic { omega }
        };
        Ok(meta)
    }
}

/// Uniformly sampled particle (and optionally circuit) coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T: Scalar = f64> {
    pub times: Vec<f64>,
    pub z: Vec<T>,
    /// Velocity [m/s].
    pub v: Vec<T>,
    /// Capacitor charge [C], coupled model only.
    pub q: Option<Vec<T>>,
    /// Inductor flux [V s], coupled model only.
    pub phi: Option<Vec<T>>,
    pub meta: TrajectoryMeta,
}

impl<T: Scalar> Trajectory<T> {
    pub fn with_capacity(n: usize, circuit: bool) -> Self {
        Self {
            times: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            q: circuit.then(|| Vec::with_capacity(n)),
            phi: circuit.then(|| Vec::with_capacity(n)),
            meta: TrajectoryMeta::default(),
        }
    }

    pub(crate) fn push(&mut self, t: f64, s: &[T; 4]) {
        self.times.push(t);
        self.z.push(s[0]);
        self.v.push(s[1]);
        if let Some(q) = self.q.as_mut() {
            q.push(s[2]);
        }
        if let Some(phi) = self.phi.as_mut() {
            phi.push(s[3]);
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn sample_interval(&self) -> f64 {
        if self.meta.sample_interval > 0.0 {
            self.meta.sample_interval
        } else if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            0.0
        }
    }

    /// First index with `t >= t0`.
    pub fn index_at(&self, t0: f64) -> usize {
        self.times.partition_point(|&t| t < t0)
    }

    /// Converts every sample to `f64`.
    pub fn to_f64(&self) -> Trajectory<f64> {
        let conv = |v: &Vec<T>| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        Trajectory {
            times: self.times.clone(),
            z: conv(&self.z),
            v: conv(&self.v),
            q: self.q.as_ref().map(conv),
            phi: self.phi.as_ref().map(conv),
            meta: self.meta.clone(),
        }
    }

    /// Writes `#`-prefixed metadata lines, a header row `t,z,v[,Q,Phi]` and
    /// one row per sample with shortest round-trip floats.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in self.meta.to_pairs() {
            writeln!(w, "# {k} = {v}")?;
        }
        let circuit = self.q.is_some() && self.phi.is_some();
        writeln!(w, "{}", if circuit { "t,z,v,Q,Phi" } else { "t,z,v" })?;
        for i in 0..self.len() {
            write!(
                w,
                "{:e},{:e},{:e}",
                self.times[i],
                self.z[i].as_f64(),
                self.v[i].as_f64()
            )?;
            if let (Some(q), Some(phi)) = (&self.q, &self.phi) {
                write!(w, ",{:e},{:e}", q[i].as_f64(), phi[i].as_f64())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

impl Trajectory<f64> {
    /// Parses the output of [`Trajectory::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut traj = Trajectory::<f64>::with_capacity(0, false);
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    pairs.push((k.trim().to_string(), v.trim().to_string()));
                }
                continue;
            }
            let Some(cols) = &header else {
                let cols: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
                match cols
                    .iter()
                    .map(String::as_str)
                    .collect::<Vec<_>>()
                    .as_slice()
                {
                    ["t", "z", "v"] => {}
                    ["t", "z", "v", "Q", "Phi"] => {
                        traj.q = Some(Vec::new());
                        traj.phi = Some(Vec::new());
                    }
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            reason: format!("unexpected header `{line}`"),
                        })
                    }
                }
                header = Some(cols);
                continue;
            };
            let vals = line
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: lineno,
                    reason: e.to_string(),
                })?;
            if vals.len() != cols.len() {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("expected {} columns, found {}", cols.len(), vals.len()),
                });
            }
            let mut s = [0.0; 4];
            s[..vals.len() - 1].copy_from_slice(&vals[1..]);
            traj.push(vals[0], &s);
        }
        if header.is_none() {
            return Err(Error::Parse {
                line: 0,
                reason: "missing header row".into(),
            });
        }
        traj.meta = TrajectoryMeta::from_pairs(&pairs)?;
        Ok(traj)
    }
}
