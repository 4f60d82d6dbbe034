use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use levem_core::analysis::{estimate_temperature, estimate_trajectory_psd, fit_damping_rate};
use levem_core::dynamics::{integrate, Channels, InitialCondition, SimPlan, System, Trajectory};
use levem_core::model::{charge_limits, Material};
use levem_core::quantum::{
    evolve, hurwitz_spectrum, lyapunov_residual, moment_generators, occupancy, steady_state,
    GaussianState,
};
use levem_core::sensing::{
    detectable_charge_to_mass, detection_requirement, min_displacement, min_force,
    min_force_at_detection_limit, min_velocity, zero_point_and_occupancy, SensingQuery,
};
use nalgebra::{Matrix4, Vector4};
use rayon::prelude::*;
use toml::{Table, Value};

use crate::config::{set_path, RunConfig};
use crate::CliError;

const TAU: f64 = 2.0 * std::f64::consts::PI;
const HBAR: f64 = 1.054_571_817e-34;
const KB: f64 = 1.380_649e-23;
const AMU: f64 = 1.660_539_066_60e-27;

fn header(command: &str, cfg: &RunConfig) -> Vec<String> {
    let mut lines = vec![
        format!("# levem {command}"),
        format!("# seed = {}", cfg.simulation.seed),
    ];
    lines.extend(cfg.header_lines());
    lines
}

fn header_pairs(command: &str, cfg: &RunConfig) -> Vec<(String, String)> {
    header(command, cfg)
        .into_iter()
        .filter_map(|l| {
            l.strip_prefix("# ")
                .and_then(|l| l.split_once(" = "))
                .map(|(k, v)| (k.into(), v.into()))
        })
        .chain([("command".to_string(), command.to_string())])
        .collect()
}

fn create(out: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    Ok((path.clone(), BufWriter::new(File::create(path)?)))
}

/// Writes a report to stdout and, when `out` is given, to `out/name`.
fn report(
    command: &str,
    cfg: &RunConfig,
    body: &[(String, String)],
    out: Option<&Path>,
    name: &str,
) -> Result<(), CliError> {
    let mut text = header(command, cfg).join("\n");
    text.push('\n');
    for (k, v) in body {
        text.push_str(&format!("{k} = {v}\n"));
    }
    print!("{text}");
    if let Some(dir) = out {
        let (_, mut w) = create(dir, name)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

fn e(x: f64) -> String {
    format!("{x:e}")
}

pub fn derive(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let sys = cfg.system()?;
    let d = &sys.derived;
    let c = &d.circuit;
    let m = sys.particle.mass();
    let limits = charge_limits(sys.particle.radius(), Material::Conductor, 0.0)?;
    let mut body: Vec<(String, String)> = [
        ("mass_kg", e(m)),
        ("mass_amu", e(m / AMU)),
        ("a_z", e(d.a_z)),
        ("q_z", e(d.q_z)),
        ("omega_z_rad_s", e(d.omega_z)),
        ("secular_freq_hz", e(d.omega_z / TAU)),
        ("omega_lc_rad_s", e(c.omega_lc)),
        ("circuit_gamma_per_s", e(c.gamma)),
        ("quality_factor", e(c.quality_factor)),
        ("inductance_h", e(c.inductance)),
        ("capacitance_f", e(c.capacitance)),
        ("r_eff_ohm", e(d.r_eff)),
        ("gamma_res_per_s", e(d.gamma_res)),
        ("gamma_ad_per_s", e(d.gamma_ad)),
        ("gamma_gas_per_s", e(d.gamma_gas)),
        ("gamma_fb_per_s", e(d.gamma_fb)),
        ("mirror_shift", e(d.mirror_shift)),
        ("charge_limit_neg_e", e(limits.q_neg_max)),
        ("charge_limit_pos_e", e(limits.q_pos_max)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    for w in &d.warnings {
        eprintln!("warning: {w}");
        body.push(("warning".into(), w.clone()));
    }
    report("derive", cfg, &body, out, "derived.txt")
}

fn burn_in(cfg: &RunConfig, traj: &Trajectory) -> f64 {
    cfg.simulation
        .burn_in_s
        .unwrap_or_else(|| (5.0 / traj.meta.relaxation_rate).min(0.5 * cfg.simulation.duration_s))
}

fn write_trajectory(cfg: &RunConfig, traj: &Trajectory, out: &Path) -> Result<PathBuf, CliError> {
    let (path, mut w) = create(out, "trajectory.csv")?;
    for line in header("simulate", cfg) {
        writeln!(w, "{line}")?;
    }
    traj.write_csv(&mut w)?;
    w.flush()?;
    Ok(path)
}

pub fn simulate(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let sys = cfg.system()?;
    let traj = integrate(&sys, &cfg.plan(), cfg.simulation.seed)?;
    let path = write_trajectory(cfg, &traj, out)?;
    println!(
        "wrote {} ({} samples, dt = {:e} s)",
        path.display(),
        traj.len(),
        traj.meta.dt
    );
    match estimate_temperature(&traj, burn_in(cfg, &traj)) {
        Ok(t) => println!(
            "secular temperature {:.4e} +- {:.2e} K{}",
            t.temperature,
            t.std_error,
            if t.insufficient {
                " (short run, error widened)"
            } else {
                ""
            }
        ),
        Err(e) => println!("secular temperature unavailable: {e}"),
    }
    Ok(())
}

struct SweepRow {
    index: usize,
    value: f64,
    replicate: usize,
    seed: u64,
    fields: Result<[f64; 8], String>,
}

fn sweep_point(
    table: &Table,
    parameter: &str,
    value: f64,
    seed: u64,
    fit: bool,
) -> Result<[f64; 8], String> {
    let mut t = table.clone();
    set_path(&mut t, parameter, Value::Float(value)).map_err(|e| e.to_string())?;
    set_path(&mut t, "simulation.seed", Value::Integer(seed as i64)).map_err(|e| e.to_string())?;
    let cfg = RunConfig::from_table(t).map_err(|e| e.to_string())?;
    let sys = cfg.system().map_err(|e| e.to_string())?;
    let d = &sys.derived;
    let expected = sys.equilibrium_temperature().unwrap_or(f64::NAN);
    let traj = integrate(&sys, &cfg.plan(), seed).map_err(|e| e.to_string())?;
    let (t_cm, t_err) = match estimate_temperature(&traj, burn_in(&cfg, &traj)) {
        Ok(t) => (t.temperature, t.std_error),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let gamma_fit = if fit && traj.meta.gamma_total > 0.0 {
        let plan = SimPlan {
            duration: (0.5 / traj.meta.gamma_total).min(cfg.simulation.duration_s),
            decimation: 1,
            initial: InitialCondition::State { z: 1e-7, v: 0.0 },
            noise: Channels::NONE,
            ..cfg.plan()
        };
        integrate(&sys, &plan, seed)
            .and_then(|t| fit_damping_rate(&t))
            .map_or(f64::NAN, |f| f.rate)
    } else {
        f64::NAN
    };
    Ok([
        d.omega_z,
        d.gamma_res,
        d.gamma_gas,
        traj.meta.gamma_total,
        expected,
        t_cm,
        t_err,
        gamma_fit,
    ])
}

pub fn sweep(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let s = &cfg.sweep;
    // the swept key must exist so that typos are configuration errors
    let mut probe = cfg.to_table();
    set_path(
        &mut probe,
        &s.parameter,
        Value::Float(s.values.first().copied().unwrap_or(0.0)),
    )?;
    if let Err(e) = RunConfig::from_table(probe) {
        return Err(CliError::Config(format!(
            "sweep.parameter `{}`: {e}",
            s.parameter
        )));
    }
    let table = cfg.to_table();
    let points: Vec<(usize, f64, usize)> = s
        .values
        .iter()
        .flat_map(|&v| (0..s.replicates).map(move |r| (v, r)))
        .enumerate()
        .map(|(i, (v, r))| (i, v, r))
        .collect();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(index, value, replicate)| {
            let seed = cfg.simulation.seed + index as u64;
            SweepRow {
                index,
                value,
                replicate,
                seed,
                fields: sweep_point(&table, &s.parameter, value, seed, s.fit_damping),
            }
        })
        .collect();
    let (path, mut w) = create(out, "sweep.csv")?;
    for line in header("sweep", cfg) {
        writeln!(w, "{line}")?;
    }
    writeln!(
        w,
        "index,value,replicate,seed,status,omega_z_rad_s,gamma_res_per_s,gamma_gas_per_s,gamma_total_per_s,t_expected_k,t_cm_k,t_cm_err_k,gamma_fit_per_s"
    )?;
    let mut failures = 0;
    for r in &rows {
        write!(w, "{},{:e},{},{},", r.index, r.value, r.replicate, r.seed)?;
        match &r.fields {
            Ok(f) => {
                write!(w, "ok")?;
                for x in f {
                    write!(w, ",{x:e}")?;
                }
            }
            Err(msg) => {
                failures += 1;
                write!(w, "\"error: {}\"", msg.replace('"', "'"))?;
                for _ in 0..8 {
                    write!(w, ",NaN")?;
                }
            }
        }
        writeln!(w)?;
    }
    w.flush()?;
    println!(
        "wrote {} ({} points, {failures} failed)",
        path.display(),
        rows.len()
    );
    Ok(())
}

pub fn sense(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    let s = &cfg.sense;
    let particle = cfg.particle()?;
    let trap = cfg.trap()?;
    let query = SensingQuery {
        omega_z: s.secular_freq_hz.map(|f| TAU * f),
        gamma: s.gamma_per_s,
        ..SensingQuery::new(particle, trap, cfg.circuit(), s.bandwidth_hz)
    };
    let omega = query.omega()?;
    let r_eff = query.r_eff()?;
    let detection = detection_requirement(&query)?;
    let (z_zpf, n_th) = zero_point_and_occupancy(&particle, omega, query.temperature())?;
    let limit = detectable_charge_to_mass(&trap, r_eff, s.bandwidth_hz, particle.charge())?;
    let body: Vec<(String, String)> = vec![
        ("omega_z_rad_s", e(omega)),
        ("temperature_k", e(query.temperature())),
        ("bandwidth_hz", e(s.bandwidth_hz)),
        ("r_eff_ohm", e(r_eff)),
        ("gamma_res_per_s", e(query.gamma_res()?)),
        ("gamma_per_s", e(query.damping()?)),
        ("min_velocity_m_s", e(min_velocity(&query)?)),
        ("min_displacement_m", e(min_displacement(&query)?)),
        ("detectable", detection.detectable.to_string()),
        ("detection_margin", e(detection.margin)),
        (
            "min_force_n",
            min_force(&query).map_or_else(|e| format!("unavailable ({e})"), e),
        ),
        (
            "min_force_at_detection_limit_n",
            e(min_force_at_detection_limit(&query)?),
        ),
        ("charge_to_mass_threshold_c_kg12", e(limit.threshold)),
        ("max_detectable_mass_amu", e(limit.max_mass / AMU)),
        ("zero_point_m", e(z_zpf)),
        ("thermal_occupancy", e(n_th)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    report("sense", cfg, &body, out, "sense.txt")
}

fn quantum_system(cfg: &RunConfig) -> Result<System, CliError> {
    let omega = match cfg.quantum.freq_hz {
        Some(f) => TAU * f,
        None => cfg.system()?.derived.omega_z,
    };
    let (p, t, c, n, f) = (
        cfg.particle()?,
        cfg.trap()?,
        cfg.circuit(),
        cfg.noise(),
        cfg.feedback(),
    );
    Ok(System::harmonic(p, t, c, n, f, omega)?)
}

pub fn quantum(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let q = &cfg.quantum;
    let sys = quantum_system(cfg)?;
    let gen = moment_generators(&sys, q.quantum_diffusion)?;
    let omega = gen.omega_z;
    let m = gen.mass;
    let state = steady_state(&gen)?;
    let max_real = hurwitz_spectrum(&gen)
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let nu = state.symplectic_eigenvalues();
    let t_r = sys.circuit_config.temperature;
    let bose = if t_r > 0.0 {
        1.0 / ((HBAR * omega / (KB * t_r)).exp() - 1.0)
    } else {
        0.0
    };
    let mut body: Vec<(String, String)> = vec![
        ("omega_rad_s".into(), e(omega)),
        ("circuit_temperature_k".into(), e(t_r)),
        ("quantum_diffusion".into(), q.quantum_diffusion.to_string()),
        ("max_drift_real_part_per_s".into(), e(max_real)),
        (
            "lyapunov_residual".into(),
            e(lyapunov_residual(&gen, &state)),
        ),
        ("occupancy".into(), e(occupancy(&state, omega, m))),
        ("bose_einstein_occupancy".into(), e(bose)),
        (
            "symplectic_eigenvalues_hbar".into(),
            format!("{:e} {:e}", nu[0], nu[1]),
        ),
        (
            "heisenberg".into(),
            state.satisfies_heisenberg().to_string(),
        ),
    ];
    let names = ["z", "p", "Q", "Phi"];
    for i in 0..4 {
        for j in i..4 {
            body.push((
                format!("cov.{}.{}", names[i], names[j]),
                e(state.cov[(i, j)]),
            ));
        }
    }
    let (path, mut w) = create(out, "quantum.txt")?;
    for line in header("quantum", cfg) {
        writeln!(w, "{line}")?;
    }
    for (k, v) in &body {
        writeln!(w, "{k} = {v}")?;
        println!("{k} = {v}");
    }
    w.flush()?;
    println!("wrote {}", path.display());

    if q.duration_s > 0.0 && q.steps > 0 {
        // thermal particle at the requested temperature, circuit at its steady marginal
        let n0 = if q.initial_temperature_k > 0.0 {
            1.0 / ((HBAR * omega / (KB * q.initial_temperature_k)).exp() - 1.0)
        } else {
            0.0
        };
        let mut cov = Matrix4::zeros();
        cov[(0, 0)] = (n0 + 0.5) * HBAR / (m * omega);
        cov[(1, 1)] = (n0 + 0.5) * HBAR * m * omega;
        for i in 2..4 {
            for j in 2..4 {
                cov[(i, j)] = state.cov[(i, j)];
            }
        }
        let start = GaussianState {
            mean: Vector4::zeros(),
            cov,
            scale: gen.scale,
        };
        let states = evolve(&gen, &start, q.duration_s / q.steps as f64, q.steps)?;
        let (path, mut w) = create(out, "moments.csv")?;
        for line in header("quantum", cfg) {
            writeln!(w, "{line}")?;
        }
        writeln!(
            w,
            "t,mean_z,mean_p,var_z,var_p,occupancy,min_symplectic_eigenvalue"
        )?;
        for (k, s) in states.iter().enumerate() {
            let t = k as f64 * q.duration_s / q.steps as f64;
            writeln!(
                w,
                "{t:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                s.mean[0],
                s.mean[1],
                s.cov[(0, 0)],
                s.cov[(1, 1)],
                occupancy(s, omega, m),
                s.symplectic_eigenvalues()[0]
            )?;
        }
        w.flush()?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn psd(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let p = &cfg.psd;
    let traj = match &p.input {
        Some(file) => {
            let f = File::open(file).map_err(|e| CliError::Config(format!("{file}: {e}")))?;
            Trajectory::read_csv(BufReader::new(f))?
        }
        None => integrate(&cfg.system()?, &cfg.plan(), cfg.simulation.seed)?,
    };
    let spec = estimate_trajectory_psd(&traj, p.segment_length, p.overlap)?;
    let mut pairs = header_pairs("psd", cfg);
    pairs.extend(
        traj.meta
            .to_pairs()
            .into_iter()
            .map(|(k, v)| (format!("trajectory.{k}"), v)),
    );
    let (path, w) = create(out, "psd.csv")?;
    spec.write_csv(w, &pairs)?;
    println!(
        "wrote {} ({} bins, resolution {:e} Hz, peak {:e} Hz)",
        path.display(),
        spec.freq_hz.len(),
        spec.resolution(),
        spec.peak_frequency(0.0)
    );
    Ok(())
}
