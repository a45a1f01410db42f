use super::{act_point, check_square, residual_charpoly, ring_of, staircase_solve, RMatrix};
use crate::error::{Error, Result};
use crate::toric::GammaVector;

/// The unique `Y` with `Phi_i Y - act_beta(Y) Phi_j = X`, for residually
/// disjoint spectra of `Phi_i` and `Phi_j`.
pub fn twisted_sylvester(phi_i: &RMatrix, phi_j: &RMatrix, beta: &GammaVector, x: &RMatrix) -> Result<RMatrix> {
    check_square(phi_i, "Phi_i")?;
    check_square(phi_j, "Phi_j")?;
    let (a, b) = (phi_i.rows(), phi_j.rows());
    if x.rows() != a || x.cols() != b {
        return Err(Error::Shape(format!("X must be {a} x {b}")));
    }
    let f = ring_of(phi_i).residue_field().clone();
    let (g, _, _) = residual_charpoly(phi_i)?.ext_gcd(&residual_charpoly(phi_j)?, &f);
    if g.degree() != Some(0) {
        return Err(Error::SpectraNotDisjoint);
    }
    let op = |y: &RMatrix| phi_i.mul(y).sub(&act_point(beta, y).mul(phi_j));
    // the residual operator is invertible, so every pivot is a unit
    staircase_solve(&op, a, b, x, 0)
}
