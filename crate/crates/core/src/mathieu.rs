//! Floquet analysis of the Mathieu equation `z'' + (a - 2q cos 2s) z = 0`.
//!
//! The lab-frame equation of motion `z'' = -(w_D^2/4)(a - 2q cos(w_D t)) z`
//! maps onto this form with `s = w_D t / 2`, so the drive period is `pi`.

const STEPS_PER_PERIOD: usize = 4000;

/// Monodromy matrix over one drive period, columns are the evolved
/// fundamental solutions `(z, z')` started from `(1, 0)` and `(0, 1)`.
pub fn monodromy(a: f64, q: f64) -> [[f64; 2]; 2] {
    let h = std::f64::consts::PI / STEPS_PER_PERIOD as f64;
    let accel = |s: f64, z: f64| -(a - 2.0 * q * (2.0 * s).cos()) * z;
    let mut cols = [[1.0, 0.0], [0.0, 1.0]];
    for col in cols.iter_mut() {
        let (mut z, mut v) = (col[0], col[1]);
        for n in 0..STEPS_PER_PERIOD {
            let s = n as f64 * h;
            let (k1z, k1v) = (v, accel(s, z));
            let (k2z, k2v) = (v + 0.5 * h * k1v, accel(s + 0.5 * h, z + 0.5 * h * k1z));
            let (k3z, k3v) = (v + 0.5 * h * k2v, accel(s + 0.5 * h, z + 0.5 * h * k2z));
            let (k4z, k4v) = (v + h * k3v, accel(s + h, z + h * k3z));
            z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        *col = [z, v];
    }
    // transpose so that m[i][j] is row i, column j
    [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
}

/// Half trace of the monodromy matrix. Motion is bounded iff `|Δ| < 1`.
pub fn half_trace(a: f64, q: f64) -> f64 {
    let m = monodromy(a, q);
    0.5 * (m[0][0] + m[1][1])
}

/// Floquet multiplier of largest modulus.
pub fn max_multiplier(a: f64, q: f64) -> f64 {
    let d = half_trace(a, q);
    if d.abs() <= 1.0 {
        1.0
    } else {
        d.abs() + (d * d - 1.0).sqrt()
    }
}

pub fn is_stable(a: f64, q: f64) -> bool {
    half_trace(a, q).abs() < 1.0
}

/// Characteristic exponent `beta` in `[0, 1]` for stable parameters, from
/// `cos(pi beta) = Δ`. Secular frequency is `beta * w_D / 2`.
pub fn beta(a: f64, q: f64) -> Option<f64> {
    let d = half_trace(a, q);
    if d.abs() < 1.0 {
        Some(d.acos() / std::f64::consts::PI)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_determinant() {
        // Liouville: the flow is area preserving
        for &q in &[0.1, 0.5, 0.9, 1.2] {
            let m = monodromy(0.0, q);
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert!((det - 1.0).abs() < 1e-10, "q={q}: det={det}");
        }
    }

    #[test]
    fn boundary_near_0_908() {
        assert!(is_stable(0.0, 0.90));
        assert!(is_stable(0.0, 0.908));
        assert!(!is_stable(0.0, 0.9085));
        assert!(!is_stable(0.0, 1.0));
    }

    #[test]
    fn small_q_beta_matches_adiabatic_approximation() {
        let q: f64 = 0.05;
        let b = beta(0.0, q).unwrap();
        assert!((b - q / 2f64.sqrt()).abs() / b < 1e-3);
    }

    #[test]
    fn harmonic_limit() {
        // q = 0: z'' + a z = 0, beta = sqrt(a)
        let b = beta(0.09, 0.0).unwrap();
        assert!((b - 0.3).abs() < 1e-9);
        assert!(!is_stable(-0.01, 0.0));
    }
}
