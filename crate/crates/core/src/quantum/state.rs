use nalgebra::{Complex, DMatrix, Matrix4, SMatrix, Vector4};

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Error, Result};
use crate::quantum::{solve_lyapunov, MomentGenerators};

/// Real parts above this (in units of `w_z`) count as undamped.
const HURWITZ_TOL: f64 = -1e-13;

/// Mean and symmetrised covariance of `(z, p, Q, Phi)` in SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
    /// Zero-point units the checks are performed in.
    pub scale: Vector4<f64>,
}

fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let j = Matrix4::new(
        0.0, 1.0, 0.0, 0.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, -1.0, 0.0,
    );
    j
}

impl GaussianState {
    fn scaled_cov(&self) -> Matrix4<f64> {
        let s = Matrix4::from_diagonal(&self.scale.map(|x| 1.0 / x));
        s * self.cov * s
    }

    /// Smallest eigenvalue of the dimensionless covariance.
    pub fn min_eigenvalue(&self) -> f64 {
        self.scaled_cov().symmetric_eigenvalues().min()
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        let c = self.scaled_cov();
        self.min_eigenvalue() >= -1e-12 * c.trace().abs().max(1.0)
    }

    /// Symplectic eigenvalues in units of `hbar`, ascending. The
    /// uncertainty principle demands both be at least 1/2.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let m = symplectic_form() * self.scaled_cov();
        let mut nu: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
        nu.sort_by(f64::total_cmp);
        [0.5 * (nu[0] + nu[1]), 0.5 * (nu[2] + nu[3])]
    }

    pub fn satisfies_heisenberg(&self) -> bool {
        self.symplectic_eigenvalues()[0] >= 0.5 - 1e-9
    }
}

/// Mean particle phonon number `E / (hbar w_z) - 1/2` with
/// `E = Sigma_pp / 2M + M w_z^2 Sigma_zz / 2`.
pub fn occupancy(state: &GaussianState, omega_z: f64, mass: f64) -> f64 {
    let e = state.cov[(1, 1)] / (2.0 * mass) + 0.5 * mass * omega_z * omega_z * state.cov[(0, 0)];
    e / (HBAR * omega_z) - 0.5
}

/// Eigenvalues of the drift matrix [1/s].
pub fn hurwitz_spectrum(gen: &MomentGenerators) -> Vec<Complex<f64>> {
    gen.scaled_drift()
        .complex_eigenvalues()
        .iter()
        .map(|z| z * gen.omega_z)
        .collect()
}

/// `|A S + S A^T + D| / |D|` (Frobenius, dimensionless units).
pub fn lyapunov_residual(gen: &MomentGenerators, state: &GaussianState) -> f64 {
    let a = gen.scaled_drift();
    let d = gen.scaled_diffusion();
    let s = gen.scale_cov(&state.cov);
    (a * s + s * a.transpose() + d).norm() / d.norm()
}

fn to_dmatrix(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Stationary state of the moment equations.
///
/// An uncharged particle does not couple to the circuit and has no
/// dissipation of its own; it is then assigned the Gibbs state of its well
/// at the circuit temperature while the circuit block relaxes as usual.
pub fn steady_state(gen: &MomentGenerators) -> Result<GaussianState> {
    let a = gen.scaled_drift();
    let d = gen.scaled_diffusion();
    let uncoupled = gen.drift[(1, 2)] == 0.0 && gen.drift[(3, 0)] == 0.0;
    let cov = if uncoupled {
        let n_th = if gen.temperature == 0.0 {
            0.0
        } else if gen.quantum {
            0.5 / (HBAR * gen.omega_z / (2.0 * BOLTZMANN * gen.temperature)).tanh()
        } else {
            BOLTZMANN * gen.temperature / (HBAR * gen.omega_z)
        };
        let ac = DMatrix::from_fn(2, 2, |i, j| a[(i + 2, j + 2)]);
        let dc = DMatrix::from_fn(2, 2, |i, j| d[(i + 2, j + 2)]);
        check_hurwitz(&ac)?;
        let xc = solve_lyapunov(&ac, &dc)?;
        let mut x = Matrix4::zeros();
        x[(0, 0)] = n_th;
        x[(1, 1)] = n_th;
        for i in 0..2 {
            for j in 0..2 {
                x[(i + 2, j + 2)] = xc[(i, j)];
            }
        }
        x
    } else {
        let ad = to_dmatrix(&a);
        check_hurwitz(&ad)?;
        let x = solve_lyapunov(&ad, &to_dmatrix(&d))?;
        Matrix4::from_fn(|i, j| x[(i, j)])
    };
    Ok(GaussianState {
        mean: Vector4::zeros(),
        cov: gen.unscale_cov(&cov),
        scale: gen.scale,
    })
}

fn check_hurwitz(a: &DMatrix<f64>) -> Result<()> {
    let max_real = a
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_real >= HURWITZ_TOL {
        return Err(Error::NoSteadyState { max_real });
    }
    Ok(())
}

/// One-step propagator `(Phi, Q)` over `tau` (units of `1/w_z`) from the
/// Van Loan block exponential.
fn propagator(a: &Matrix4<f64>, d: &Matrix4<f64>, tau: f64) -> (Matrix4<f64>, Matrix4<f64>) {
    let mut big = SMatrix::<f64, 8, 8>::zeros();
    big.fixed_view_mut::<4, 4>(0, 0).copy_from(&(-a * tau));
    big.fixed_view_mut::<4, 4>(0, 4).copy_from(&(d * tau));
    big.fixed_view_mut::<4, 4>(4, 4)
        .copy_from(&(a.transpose() * tau));
    let e = big.exp();
    let phi: Matrix4<f64> = e.fixed_view::<4, 4>(4, 4).transpose();
    let q = phi * e.fixed_view::<4, 4>(0, 4);
    (phi, 0.5 * (q + q.transpose()))
}

/// Exact moments after time `t` [s].
pub fn propagate(gen: &MomentGenerators, state: &GaussianState, t: f64) -> GaussianState {
    let (phi, q) = propagator(
        &gen.scaled_drift(),
        &gen.scaled_diffusion(),
        t * gen.omega_z,
    );
    advance(gen, state, &phi, &q)
}

fn advance(
    gen: &MomentGenerators,
    state: &GaussianState,
    phi: &Matrix4<f64>,
    q: &Matrix4<f64>,
) -> GaussianState {
    let s = Matrix4::from_diagonal(&gen.scale);
    let s_inv = Matrix4::from_diagonal(&gen.scale.map(|x| 1.0 / x));
    let mean = s * phi * s_inv * state.mean;
    let c = gen.scale_cov(&state.cov);
    let c = phi * c * phi.transpose() + q;
    GaussianState {
        mean,
        cov: gen.unscale_cov(&(0.5 * (c + c.transpose()))),
        scale: gen.scale,
    }
}

/// States at `dt, 2 dt, ..., steps dt` after `initial` (which is included
/// first). Fails if the covariance leaves the positive semidefinite cone.
pub fn evolve(
    gen: &MomentGenerators,
    initial: &GaussianState,
    dt: f64,
    steps: usize,
) -> Result<Vec<GaussianState>> {
    let (phi, q) = propagator(
        &gen.scaled_drift(),
        &gen.scaled_diffusion(),
        dt * gen.omega_z,
    );
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial.clone());
    for k in 1..=steps {
        let next = advance(gen, &out[k - 1], &phi, &q);
        if !next.is_positive_semidefinite() || next.cov.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                t: k as f64 * dt,
                detail: format!(
                    "covariance lost positivity (min eigenvalue {:e})",
                    next.min_eigenvalue()
                ),
            });
        }
        out.push(next);
    }
    Ok(out)
}
