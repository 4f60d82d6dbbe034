use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Solves `A X + X A^T + D = 0` for symmetric `X` as a linear system in the
/// `n (n + 1) / 2` independent entries.
pub fn solve_lyapunov(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let k = pairs.len();
    let mut lhs = DMatrix::zeros(k, k);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        let mut e = DMatrix::zeros(n, n);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        let image = a * &e + &e * a.transpose();
        for (row, &(r, s)) in pairs.iter().enumerate() {
            lhs[(row, col)] = image[(r, s)];
        }
    }
    let rhs = DMatrix::from_iterator(k, 1, pairs.iter().map(|&(r, s)| -d[(r, s)]));
    let sol = lhs
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("Lyapunov operator is singular"))?;
    let mut x = DMatrix::zeros(n, n);
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        x[(i, j)] = sol[idx];
        x[(j, i)] = sol[idx];
    }
    Ok(x)
}
