//! Seeded inputs for the matrix normal-form algorithms.

use std::sync::Arc;

use crate::bdr::{BdrElement, BdrRing};
use crate::coeffs::Matrix;
use crate::error::Result;
use crate::normal_forms::RMatrix;
use crate::random::Sampler;
use crate::rh::{cocycle_eval, Cocycle, TwistTag};
use crate::toric::ToricElement;

/// `V (D + U + p E + t F) V^-1` with residual eigenvalues `eig` (as
/// integers), `U` strictly upper triangular when `jordan` is set, and `E, F`
/// random.
pub fn with_spectrum(s: &mut Sampler, b: &Arc<BdrRing>, eig: &[i64], jordan: bool) -> RMatrix {
    let r = eig.len();
    let v = s.invertible_constant(b, r);
    let core = Matrix::from_fn(r, r, |i, j| if i == j { b.from_int(eig[i]) } else { b.zero() });
    let upper = s.matrix(r, r, |s| s.bdr(b, 0, 0));
    let upper = Matrix::from_fn(r, r, |i, j| if jordan && i < j { upper.get(i, j).clone() } else { b.zero() });
    let noise = s.matrix(r, r, |s| s.bdr(b, 1, 0));
    let m = core.add(&upper).add(&noise);
    v.mul(&m).mul(&v.inverse().expect("unit determinant"))
}

/// Two disjoint sets of residues mod `p` of sizes `a` and `b`.
pub fn disjoint_spectra(s: &mut Sampler, p: u64, a: usize, b: usize) -> (Vec<i64>, Vec<i64>) {
    let p = p as i64;
    let split = s.int(1, p - 1);
    let left: Vec<i64> = (0..a).map(|_| s.int(0, split - 1)).collect();
    let right: Vec<i64> = (0..b).map(|_| s.int(split, p - 1)).collect();
    (left, right)
}

/// Inputs `(Phi_i, Phi_j, X)` of a twisted Sylvester equation.
pub fn sylvester(s: &mut Sampler, b: &Arc<BdrRing>, ri: usize, rj: usize) -> (RMatrix, RMatrix, RMatrix) {
    let (ei, ej) = disjoint_spectra(s, b.p(), ri, rj);
    let jordan = s.coin();
    let pi = with_spectrum(s, b, &ei, jordan);
    let pj = with_spectrum(s, b, &ej, !jordan);
    let x = s.matrix(ri, rj, |s| s.bdr(b, 0, 0));
    (pi, pj, x)
}

/// A matrix whose reduction mod `t` is block diagonal of the given types
/// with pairwise disjoint residual spectra.
pub fn block_input(s: &mut Sampler, b: &Arc<BdrRing>, types: &[usize]) -> RMatrix {
    let p = b.p() as i64;
    let mut pool: Vec<i64> = (0..p).collect();
    let blocks: Vec<RMatrix> = types
        .iter()
        .map(|&n| {
            let lam = pool.remove(s.int(0, pool.len() as i64 - 1) as usize);
            with_spectrum(s, b, &vec![lam; n], true)
        })
        .collect();
    let r: usize = types.iter().sum();
    let h = Matrix::block_diag(&blocks);
    let f = s.matrix(r, r, |s| s.bdr(b, 0, 0).mul_t_pow(1));
    // keep the reduction mod t block diagonal
    h.add(&f)
}

/// Random block types summing to at most `r_max`, at least two blocks
/// when possible.
pub fn block_types(s: &mut Sampler, p: u64, r_max: usize) -> Vec<usize> {
    let nblocks = (s.int(1, 3) as usize).min(p as usize).min(r_max);
    let mut types = vec![1; nblocks];
    let mut total = nblocks;
    while total < r_max && s.coin() {
        let i = s.int(0, nblocks as i64 - 1) as usize;
        types[i] += 1;
        total += 1;
    }
    types
}

/// A matrix with a twisted `M`-th root: `R^M` for `R` with unit residual
/// eigenvalues, semisimple modulo `p`.
pub fn power_input(s: &mut Sampler, b: &Arc<BdrRing>, r: usize, m: i64) -> RMatrix {
    let p = b.p() as i64;
    let eig: Vec<i64> = (0..r).map(|_| s.int(1, p - 1)).collect();
    let root = with_spectrum(s, b, &eig, false);
    root.pow(m as u64)
}

/// A cocycle on `Gamma` with constant commuting values congruent to the
/// identity modulo `p^2`, and its restriction to `M Gamma`.
pub fn extension_pair(s: &mut Sampler, b: &Arc<BdrRing>, d: usize, r: usize, m: i64) -> Result<(Cocycle, Cocycle)> {
    let v = s.invertible_constant(b, r);
    let v_inv = v.inverse()?;
    let mats: Vec<_> = (0..d)
        .map(|_| {
            let diag: Vec<BdrElement> = (0..r).map(|_| b.one().add(&s.bdr(b, 2, 0))).collect();
            let c = v.mul(&Matrix::diagonal(&diag)).mul(&v_inv);
            c.map(|x| ToricElement::constant(b, d, x.clone()))
        })
        .collect();
    let full = Cocycle::with_scale(b, 1, TwistTag::ExpDerivation, mats)?;
    let restricted = (0..d).map(|i| cocycle_eval(&full, &full.generator(i).scale(m))).collect::<Result<Vec<_>>>()?;
    let sub = Cocycle::with_scale(b, m, TwistTag::ExpDerivation, restricted)?;
    Ok((full, sub))
}
