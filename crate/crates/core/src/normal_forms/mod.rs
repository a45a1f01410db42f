//! Matrix normal forms over the point ring `R = K_k[t]/(t^alpha)`: twisted
//! Sylvester solves, residual splitting, block diagonalization, twisted
//! `M`-th roots and the extension of cocycles from `M Gamma` to `Gamma`.
//!
//! Constants of `R` are fixed by `exp(partial_beta)`, so every twist that
//! appears here acts trivially on `R`-matrices; [`act_point`] records this.
//! Linear equations are solved digit by digit in `t`: the operator is
//! `R`-linear and its action on the digit-`l` unknowns only sees `theta`
//! of the data, so each step is one linear system over `K`.

mod extend;
pub mod reference;
mod roots;
mod split;
mod sylvester;

pub use extend::extend_cocycle;
pub use roots::{binomial_min_valuation, binomial_root_series, mth_root_seed, sum_conjugation_solve, twisted_mth_root, twisted_product};
pub use split::{block_diagonalize, hensel_split, simultaneous_canonical_form, CanonicalForm};
pub use sylvester::twisted_sylvester;

use std::sync::Arc;

use crate::bdr::BdrElement;
use crate::coeffs::{linalg, Elem, Fq, FqPoly, Matrix, RingCtx};
use crate::error::{Error, Result};
use crate::toric::GammaVector;

/// Matrices over the point ring.
pub type RMatrix = Matrix<BdrElement>;
/// Matrices over the cyclotomic coefficient field.
pub type KMatrix = Matrix<Elem>;

/// `exp(partial_beta)` on a point-ring matrix: the identity.
pub fn act_point(_beta: &GammaVector, m: &RMatrix) -> RMatrix {
    m.clone()
}

pub(crate) fn alpha_of(m: &RMatrix) -> u32 {
    m.get(0, 0).alpha()
}

pub(crate) fn ring_of(m: &RMatrix) -> Arc<RingCtx> {
    m.get(0, 0).ring().clone()
}

/// Digit `l` of every entry.
pub fn digit_matrix(m: &RMatrix, l: usize) -> KMatrix {
    m.map(|x| x.digit(l).clone())
}

pub fn theta_matrix(m: &RMatrix) -> KMatrix {
    digit_matrix(m, 0)
}

/// `t^l k` as a point-ring matrix.
pub fn at_digit(k: &KMatrix, alpha: u32, l: usize) -> RMatrix {
    k.map(|x| {
        let mut d = vec![Elem::zero(x.ring()); alpha as usize];
        if l < alpha as usize {
            d[l] = x.clone();
        }
        BdrElement::from_digits(d)
    })
}

pub fn constant_matrix(k: &KMatrix, alpha: u32) -> RMatrix {
    at_digit(k, alpha, 0)
}

pub(crate) fn identity_r(ring: &Arc<RingCtx>, alpha: u32, n: usize) -> RMatrix {
    Matrix::identity(n, &BdrElement::one(ring, alpha))
}

/// Residues of an integral `K`-matrix.
pub fn residual_matrix(k: &KMatrix) -> Result<Matrix<Fq>> {
    let rows = (0..k.rows()).map(|i| k.row(i).iter().map(|x| x.residue()).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Characteristic polynomial of the residual matrix of `theta(m)`.
pub fn residual_charpoly(m: &RMatrix) -> Result<FqPoly> {
    let k = theta_matrix(m);
    let f = ring_of(m).residue_field().clone();
    let c = k.charpoly();
    let coeffs = c.iter().map(|x| x.residue()).collect::<Result<Vec<_>>>()?;
    Ok(FqPoly::from_coeffs(&f, coeffs))
}

/// Solve `op(Y) = X` for an `R`-linear `op` on `rows x cols` matrices, one
/// `t`-digit at a time. Pivots of valuation above `margin` are rejected.
pub(crate) fn staircase_solve(
    op: &dyn Fn(&RMatrix) -> RMatrix,
    rows: usize,
    cols: usize,
    x: &RMatrix,
    margin: i64,
) -> Result<RMatrix> {
    let ring = ring_of(x);
    let alpha = alpha_of(x);
    let n = rows * cols;
    let zero = BdrElement::zero(&ring, alpha);
    let mut columns = Vec::with_capacity(n);
    for idx in 0..n {
        let mut e = Matrix::zeros(rows, cols, &zero);
        e.set(idx / cols, idx % cols, BdrElement::one(&ring, alpha));
        columns.push(theta_matrix(&op(&e)).entries().to_vec());
    }
    let a = Matrix::from_columns(&columns);
    let mut y = Matrix::zeros(rows, cols, &zero);
    for l in 0..alpha as usize {
        let resid = x.sub(&op(&y));
        let rhs = digit_matrix(&resid, l).entries().to_vec();
        let sol = linalg::solve(&a, &rhs, margin)?;
        let mut it = sol.into_iter();
        let step = Matrix::from_fn(rows, cols, |_, _| it.next().unwrap());
        y = y.add(&at_digit(&step, alpha, l));
    }
    Ok(y)
}

pub(crate) fn check_square(m: &RMatrix, what: &str) -> Result<()> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::Shape(format!("{what} must be a nonempty square matrix")));
    }
    Ok(())
}

#[cfg(test)]
mod tests;
