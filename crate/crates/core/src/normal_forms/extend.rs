use super::roots::simple_seed;
use super::{simultaneous_canonical_form, twisted_mth_root, RMatrix};
use crate::coeffs::Matrix;
use crate::error::{Error, Result};
use crate::rh::{cocycle_check, cocycle_eval, Cocycle, ToricMatrix, TwistTag};
use crate::toric::{GammaVector, ToricElement};

fn point_matrix(m: &ToricMatrix) -> Result<RMatrix> {
    m.try_map(|x| {
        let x0 = x.coeff(0, &vec![0; x.dim()]);
        if x.num_terms() > 1 || (x.num_terms() == 1 && x0.is_zero()) {
            return Err(Error::DomainViolation("cocycle extension needs point-ring coefficients".into()));
        }
        Ok(x0)
    })
}

/// Extend a cocycle on `M Gamma` (scale divisible by `M`) to the cocycle on
/// `Gamma` whose restriction is `Psi`, by simultaneous canonical form and
/// blockwise twisted `M`-th roots with commuting series seeds.
pub fn extend_cocycle(psi: &Cocycle, m: i64) -> Result<Cocycle> {
    if psi.twist() != TwistTag::ExpDerivation {
        return Err(Error::TwistMismatch);
    }
    if m < 1 || psi.scale() % m != 0 {
        return Err(Error::DomainViolation(format!("scale {} is not a multiple of M = {m}", psi.scale())));
    }
    if !cocycle_check(psi)?.0 {
        return Err(Error::NotACocycle("the input fails the twisted commutation".into()));
    }
    let ring = psi.ring().clone();
    let d = psi.dim();
    let mats = psi.mats().iter().map(point_matrix).collect::<Result<Vec<_>>>()?;
    let cf = simultaneous_canonical_form(&mats, psi.scale())?;
    let new_scale = psi.scale() / m;
    let v = &cf.conjugator;
    let v_inv = v.inverse()?;
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let beta = GammaVector::basis(d, i, new_scale);
        let roots = cf.blocks[i]
            .iter()
            .zip(&cf.eigenvalues)
            .map(|(b, e)| twisted_mth_root(b, &beta, m, &simple_seed(b, &e[i], m, true)?))
            .collect::<Result<Vec<_>>>()?;
        let phi_i = v.mul(&Matrix::block_diag(&roots)).mul(&v_inv);
        out.push(phi_i.map(|c| ToricElement::constant(&ring, d, c.clone())));
    }
    let phi = Cocycle::with_scale(&ring, new_scale, TwistTag::ExpDerivation, out)?;
    if !cocycle_check(&phi)?.0 {
        return Err(Error::ExtensionCommutationFailure);
    }
    for i in 0..d {
        if cocycle_eval(&phi, &psi.generator(i))? != psi.mats()[i] {
            return Err(Error::ExtensionCommutationFailure);
        }
    }
    Ok(phi)
}
