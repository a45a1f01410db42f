//! Plain reference implementations used as test oracles: every equation is
//! flattened over all `t`-digits into one linear system over `K`, with no
//! digit induction and no twist.

use super::{alpha_of, at_digit, digit_matrix, ring_of, RMatrix};
use crate::coeffs::{linalg, Elem, Matrix};
use crate::error::Result;

/// Solve the `R`-linear equation `op(Y) = X` as one system over `K` in all
/// `alpha * rows * cols` digit coordinates.
pub fn flattened_solve(op: &dyn Fn(&RMatrix) -> RMatrix, rows: usize, cols: usize, x: &RMatrix) -> Result<RMatrix> {
    let ring = ring_of(x);
    let alpha = alpha_of(x) as usize;
    let n = rows * cols;
    let zero = Elem::zero(&ring);
    let flatten = |m: &RMatrix| -> Vec<Elem> {
        (0..alpha).flat_map(|l| digit_matrix(m, l).entries().to_vec()).collect()
    };
    let mut columns = Vec::with_capacity(alpha * n);
    for l in 0..alpha {
        for idx in 0..n {
            let mut e = Matrix::zeros(rows, cols, &zero);
            e.set(idx / cols, idx % cols, Elem::one(&ring));
            columns.push(flatten(&op(&at_digit(&e, alpha as u32, l))));
        }
    }
    let a = Matrix::from_columns(&columns);
    let sol = linalg::solve(&a, &flatten(x), i64::MAX)?;
    let mut y = at_digit(&Matrix::zeros(rows, cols, &zero), alpha as u32, 0);
    for l in 0..alpha {
        let block = Matrix::from_fn(rows, cols, |i, j| sol[l * n + i * cols + j].clone());
        y = y.add(&at_digit(&block, alpha as u32, l));
    }
    Ok(y)
}

/// `Phi_i Y - Y Phi_j = X` by [`flattened_solve`].
pub fn sylvester_flat(phi_i: &RMatrix, phi_j: &RMatrix, x: &RMatrix) -> Result<RMatrix> {
    let op = |y: &RMatrix| phi_i.mul(y).sub(&y.mul(phi_j));
    flattened_solve(&op, phi_i.rows(), phi_j.rows(), x)
}

/// `sum B^(i-1) Y B^(M-i) = X` by [`flattened_solve`].
pub fn sum_conjugation_flat(b: &RMatrix, m: i64, x: &RMatrix) -> Result<RMatrix> {
    let op = |y: &RMatrix| {
        let mut acc = y.sub(y);
        for i in 0..m as u64 {
            acc = acc.add(&b.pow(i).mul(y).mul(&b.pow(m as u64 - 1 - i)));
        }
        acc
    };
    flattened_solve(&op, b.rows(), b.rows(), x)
}

/// Untwisted Newton iteration `W <- W + S_W^{-1}(Phi - W^M)` from `seed`,
/// each step a flattened solve.
pub fn mth_root_newton(phi: &RMatrix, m: i64, seed: &RMatrix) -> Result<RMatrix> {
    let mut w = seed.clone();
    for _ in 0..200 {
        let resid = phi.sub(&w.pow(m as u64));
        if resid.is_zero() {
            return Ok(w);
        }
        w = w.add(&sum_conjugation_flat(&w, m, &resid)?);
    }
    Err(crate::error::Error::PrecisionExhausted("Newton iteration did not converge".into()))
}
