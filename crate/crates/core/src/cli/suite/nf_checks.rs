use super::instances::{block_input, block_types, extension_pair, power_input, sylvester as sylvester_input};
use super::{ensure, lib, ring, Check};
use crate::bdr::BdrElement;
use crate::coeffs::Matrix;
use crate::normal_forms::reference::{mth_root_newton, sum_conjugation_flat, sylvester_flat};
use crate::normal_forms::{
    act_point, block_diagonalize, hensel_split, mth_root_seed, residual_charpoly, sum_conjugation_solve, theta_matrix,
    twisted_mth_root, twisted_product, twisted_sylvester, RMatrix,
};
use crate::random::Sampler;
use crate::rh::{cocycle_check, cocycle_eval};
use crate::toric::GammaVector;

fn beta() -> GammaVector {
    GammaVector::basis(1, 0, 1)
}

fn pick_p(s: &mut Sampler) -> u64 {
    [3, 5, 7][s.int(0, 2) as usize]
}

pub(super) fn sylvester(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x07);
    for case in 0..50 {
        let p = pick_p(&mut s);
        let alpha = s.int(1, 3) as u32;
        let b = ring(p, 1, 10, alpha);
        let (ri, rj) = (s.int(1, 3) as usize, s.int(1, 3) as usize);
        let (pi, pj, x) = sylvester_input(&mut s, &b, ri, rj);
        let msg = |what: &str| format!("case {case} (p={p} alpha={alpha} {ri}x{rj}): {what}");
        let y = lib(twisted_sylvester(&pi, &pj, &beta(), &x), "solve")?;
        ensure(pi.mul(&y).sub(&act_point(&beta(), &y).mul(&pj)) == x, || msg("nonzero residual"))?;
        ensure(lib(sylvester_flat(&pi, &pj, &x), "oracle")? == y, || msg("differs from the flattened solve"))?;
    }
    Ok(50)
}

/// Check one block diagonalization; returns the split.
fn check_block_diag(h: &RMatrix, types: &[usize]) -> std::result::Result<(RMatrix, RMatrix), String> {
    let (m, hd) = lib(block_diagonalize(h, types, &beta()), "block diagonalize")?;
    let (ring, alpha) = (h.get(0, 0).ring(), h.get(0, 0).alpha());
    let b_one = BdrElement::one(ring, alpha);
    let t = BdrElement::t(ring, alpha);
    let q = Matrix::identity(h.rows(), &b_one).add(&m.map(|e| e.mul(&t)));
    ensure(lib(q.inverse(), "inverse")?.mul(h).mul(&act_point(&beta(), &q)) == hd, || "conjugation identity fails".into())?;
    let mut start = 0;
    for (u, &n) in types.iter().enumerate() {
        for i in start..start + n {
            for j in 0..h.cols() {
                let inside = (start..start + n).contains(&j);
                ensure(inside || hd.get(i, j).is_zero(), || format!("block {u}: off-diagonal entry ({i},{j}) is nonzero"))?;
            }
        }
        start += n;
    }
    ensure(theta_matrix(&hd) == theta_matrix(h), || "blocks differ from the input mod t".into())?;
    Ok((m, hd))
}

pub(super) fn block_diagonal(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x08);
    for case in 0..25 {
        let p = pick_p(&mut s);
        let alpha = s.int(2, 3) as u32;
        let b = ring(p, 1, 10, alpha);
        let types = block_types(&mut s, p, 3);
        let h = block_input(&mut s, &b, &types);
        check_block_diag(&h, &types).map_err(|e| format!("case {case} (p={p} alpha={alpha} types {types:?}): {e}"))?;
    }
    Ok(25)
}

fn pick_m(s: &mut Sampler, p: u64) -> i64 {
    if s.coin() {
        2
    } else {
        p as i64
    }
}

pub(super) fn mth_roots(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x09);
    for case in 0..25 {
        let p = pick_p(&mut s);
        let alpha = s.int(1, 3) as u32;
        let b = ring(p, 1, 10, alpha);
        let r = s.int(1, 3) as usize;
        let m = pick_m(&mut s, p);
        let phi = power_input(&mut s, &b, r, m);
        let msg = |what: &str| format!("case {case} (p={p} alpha={alpha} r={r} M={m}): {what}");
        let seed_m = lib(mth_root_seed(&phi, m), "seed")?;
        let root = lib(twisted_mth_root(&phi, &beta(), m, &seed_m), "root")?;
        ensure(twisted_product(&root, &beta(), m) == phi, || msg("product differs from the input"))?;
        let again = lib(twisted_mth_root(&phi, &beta(), m, &lib(mth_root_seed(&phi, m), "seed")?), "root")?;
        ensure(format!("{root:?}") == format!("{again:?}"), || msg("rerun is not bitwise identical"))?;
    }
    Ok(25)
}

pub(super) fn extension(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x0a);
    for case in 0..10 {
        let p = if s.coin() { 3 } else { 5 };
        let b = ring(p, 1, 10, 2);
        let m = p as i64;
        let (_, sub) = lib(extension_pair(&mut s, &b, 2, 2, m), "generator")?;
        let ext = lib(crate::normal_forms::extend_cocycle(&sub, m), "extend")?;
        let msg = |what: &str| format!("case {case} (p={p}): {what}");
        ensure(lib(cocycle_check(&ext), "check")?.0, || msg("extension is not a cocycle"))?;
        for i in 0..2 {
            let restricted = lib(cocycle_eval(&ext, &sub.generator(i)), "eval")?;
            ensure(restricted == sub.mats()[i], || msg("restriction differs"))?;
        }
    }
    Ok(10)
}

/// At `alpha = 1` every algorithm against the untwisted reference.
pub(super) fn degeneration(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x0b);
    for case in 0..25 {
        let p = pick_p(&mut s);
        let b = ring(p, 1, 10, 1);
        degenerate_case(&mut s, &b).map_err(|e| format!("case {case} (p={p}): {e}"))?;
    }
    Ok(25)
}

fn degenerate_case(s: &mut Sampler, b: &std::sync::Arc<crate::bdr::BdrRing>) -> std::result::Result<(), String> {
    let p = b.p();
    let msg = |what: &str| what.to_string();
    {
        let (ri, rj) = (s.int(1, 3) as usize, s.int(1, 3) as usize);
        let (pi, pj, x) = sylvester_input(s, b, ri, rj);
        let y = lib(twisted_sylvester(&pi, &pj, &beta(), &x), "sylvester")?;
        ensure(y == lib(sylvester_flat(&pi, &pj, &x), "oracle")?, || msg("Sylvester"))?;
        ensure(pi.mul(&y).sub(&y.mul(&pj)) == x, || msg("plain Sylvester residual"))?;

        let r = s.int(1, 3) as usize;
        let m = pick_m(s, p);
        let phi = power_input(s, b, r, m);
        let w = lib(mth_root_seed(&phi, m), "seed")?;
        let root = lib(twisted_mth_root(&phi, &beta(), m, &w), "root")?;
        ensure(root == lib(mth_root_newton(&phi, m, &w), "oracle")?, || msg("M-th root"))?;
        ensure(root.pow(m as u64) == phi, || msg("plain power"))?;
        let rhs = s.matrix(r, r, |s| s.bdr(b, 0, 0));
        let z = lib(sum_conjugation_solve(&root, m, &rhs), "sum conjugation")?;
        ensure(z == lib(sum_conjugation_flat(&root, m, &rhs), "oracle")?, || msg("sum conjugation"))?;

        let cf = lib(hensel_split(&phi), "split")?;
        let v = &cf.conjugator;
        ensure(lib(v.inverse(), "inverse")?.mul(&phi).mul(v) == cf.assembled(0), || msg("split conjugation"))?;
        let f = b.cyclo().residue_field().clone();
        for (blk, ev) in cf.blocks[0].iter().zip(&cf.eigenvalues) {
            let chi = lib(residual_charpoly(blk), "charpoly")?;
            let lin = crate::coeffs::FqPoly::linear(&f, &ev[0]);
            let want = (0..blk.rows()).fold(crate::coeffs::FqPoly::one(&f), |acc, _| acc.mul(&lin, &f));
            ensure(chi == want, || msg("block spectrum"))?;
        }
        let types = cf.types.clone();
        let (mm, hd) = check_block_diag(&cf.assembled(0), &types).map_err(|e| msg(&e))?;
        ensure(mm.is_zero() && hd == cf.assembled(0), || msg("block diagonalization is not the identity"))?;
    }
    Ok(())
}
