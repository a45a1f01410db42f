use std::cmp::Ordering;

use super::{
    act_point, alpha_of, check_square, identity_r, residual_charpoly, residual_matrix, ring_of, theta_matrix,
    twisted_sylvester, KMatrix, RMatrix,
};
use crate::bdr::BdrElement;
use crate::coeffs::{Elem, Fq, FqPoly, Matrix, ResidueField};
use crate::error::{Error, Result};
use crate::toric::GammaVector;

/// A common block decomposition `V^{-1} psi_i act(V) = diag(blocks[i][0], ...)`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub conjugator: RMatrix,
    /// Block sizes `(m_1, ..., m_u)`.
    pub types: Vec<usize>,
    /// `blocks[i][u]`: block `u` of the `i`-th transformed matrix.
    pub blocks: Vec<Vec<RMatrix>>,
    /// `eigenvalues[u][i]`: the residual eigenvalue of block `u` of matrix `i`.
    pub eigenvalues: Vec<Vec<Fq>>,
}

impl CanonicalForm {
    /// The block-diagonal matrix for input `i`.
    pub fn assembled(&self, i: usize) -> RMatrix {
        Matrix::block_diag(&self.blocks[i])
    }
}

fn cmp_tuple(f: &ResidueField, a: &[Fq], b: &[Fq]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match f.cmp(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Distinct residual eigenvalues with multiplicities, in canonical order.
fn residual_spectrum(psi: &RMatrix) -> Result<Vec<(Fq, usize)>> {
    let ring = ring_of(psi);
    let f = ring.residue_field().clone();
    let mut chi = residual_charpoly(psi)?;
    let mut roots = Vec::new();
    for a in f.elements() {
        let lin = FqPoly::linear(&f, &a);
        let mut mult = 0;
        loop {
            let (q, r) = chi.div_rem(&lin, &f);
            if r.degree().is_some() {
                break;
            }
            chi = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((a, mult));
        }
    }
    let leftover = chi.degree().unwrap_or(0);
    if leftover > 0 {
        let degree = min_factor_degree(&chi, &f);
        return Err(Error::ResidueFieldTooSmall { degree, s: f.degree() });
    }
    roots.sort_by(|a, b| f.cmp(&a.0, &b.0));
    Ok(roots)
}

/// Smallest degree of an irreducible factor of `g` over `F_q`: the least `i`
/// with `gcd(x^(q^i) - x, g) != 1`.
fn min_factor_degree(g: &FqPoly, f: &ResidueField) -> usize {
    let n = g.degree().unwrap_or(0);
    let x = FqPoly(vec![f.zero(), f.one()]);
    let mut xq = x.clone();
    for i in 1..=n {
        let mut acc = FqPoly::one(f);
        for _ in 0..f.order() {
            acc = acc.mul(&xq, f).div_rem(g, f).1;
        }
        xq = acc;
        let (d, _, _) = g.ext_gcd(&xq.sub(&x, f), f);
        if d.degree() != Some(0) {
            return i;
        }
    }
    n
}

fn eval_poly(poly: &FqPoly, psi: &RMatrix) -> RMatrix {
    let ring = ring_of(psi);
    let alpha = alpha_of(psi);
    let n = psi.rows();
    let mut acc = Matrix::zeros(n, n, &BdrElement::zero(&ring, alpha));
    for c in poly.0.iter().rev() {
        let c = BdrElement::constant(&Elem::lift_residue(&ring, c), alpha);
        acc = acc.mul(psi).add(&identity_r(&ring, alpha, n).scale(&c));
    }
    acc
}

/// Lift a residual idempotent commuting with `psi` by `E -> 3E^2 - 2E^3`.
fn lift_idempotent(mut e: RMatrix) -> Result<RMatrix> {
    for _ in 0..128 {
        let e2 = e.mul(&e);
        if e2.sub(&e).is_zero() {
            return Ok(e);
        }
        let e3 = e2.mul(&e);
        e = e2.add(&e2).add(&e2).sub(&e3).sub(&e3);
    }
    Err(Error::PrecisionExhausted("idempotent lifting did not converge".into()))
}

/// Spectral projectors for the residual eigenvalues, from the Bezout identity
/// `a P_u + b prod_{j != u} P_j = 1` with `P_u = (T - lambda_u)^{m_u}`.
fn spectral_projectors(psi: &RMatrix, spectrum: &[(Fq, usize)]) -> Result<Vec<RMatrix>> {
    let ring = ring_of(psi);
    let alpha = alpha_of(psi);
    let n = psi.rows();
    if spectrum.len() == 1 {
        return Ok(vec![identity_r(&ring, alpha, n)]);
    }
    let f = ring.residue_field().clone();
    let factors: Vec<FqPoly> = spectrum
        .iter()
        .map(|(lam, m)| {
            let lin = FqPoly::linear(&f, lam);
            (0..*m).fold(FqPoly::one(&f), |acc, _| acc.mul(&lin, &f))
        })
        .collect();
    let mut out = Vec::with_capacity(spectrum.len());
    for u in 0..factors.len() {
        let others = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != u)
            .fold(FqPoly::one(&f), |acc, (_, p)| acc.mul(p, &f));
        let (g, _, b) = factors[u].ext_gcd(&others, &f);
        let g0 = f.inv(&g.0[0]).ok_or(Error::SpectraNotDisjoint)?;
        let e = b.mul(&others, &f).scale(&g0, &f);
        out.push(lift_idempotent(eval_poly(&e, psi))?);
    }
    Ok(out)
}

/// Indices of a maximal set of independent columns over `F_q`.
fn pivot_columns(m: &Matrix<Fq>, f: &ResidueField) -> Vec<usize> {
    let mut rows: Vec<Vec<Fq>> = (0..m.rows()).map(|i| m.row(i)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        let Some(i) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else { continue };
        rows.swap(r, i);
        let inv = f.inv(&rows[r][c]).unwrap();
        for i in 0..rows.len() {
            if i != r && !f.is_zero(&rows[i][c]) {
                let factor = f.mul(&rows[i][c], &inv);
                for cc in 0..m.cols() {
                    let t = f.mul(&factor, &rows[r][cc]);
                    rows[i][cc] = f.sub(&rows[i][cc], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `V` whose column groups span the images of the spectral projectors of `psi`.
fn split_once(psi: &RMatrix) -> Result<(RMatrix, Vec<(Fq, usize)>)> {
    let spectrum = residual_spectrum(psi)?;
    let projectors = spectral_projectors(psi, &spectrum)?;
    let f = ring_of(psi).residue_field().clone();
    let mut cols = Vec::new();
    for (e, (_, m)) in projectors.iter().zip(&spectrum) {
        let piv = pivot_columns(&residual_matrix(&theta_matrix(e))?, &f);
        if piv.len() != *m {
            return Err(Error::AmbiguousAtPrecision);
        }
        cols.extend(piv.iter().map(|&c| e.column(c)));
    }
    Ok((Matrix::from_columns(&cols), spectrum))
}

fn offsets(types: &[usize]) -> Vec<usize> {
    let mut o = vec![0];
    for t in types {
        o.push(o.last().unwrap() + t);
    }
    o
}

fn extract_blocks(m: &RMatrix, types: &[usize]) -> Result<Vec<RMatrix>> {
    let o = offsets(types);
    for (u, &tu) in types.iter().enumerate() {
        for (v, &tv) in types.iter().enumerate() {
            if u != v && !m.submatrix(o[u], o[v], tu, tv).is_zero() {
                return Err(Error::PrecisionExhausted("block structure lost at precision".into()));
            }
        }
    }
    Ok(types.iter().enumerate().map(|(u, &t)| m.submatrix(o[u], o[u], t, t)).collect())
}

/// Recursive splitting: by `mats[0]`, then each block by the remaining matrices.
fn refine(mats: &[RMatrix]) -> Result<(RMatrix, Vec<usize>, Vec<Vec<Fq>>)> {
    let (v0, spectrum) = split_once(&mats[0])?;
    let v0_inv = v0.inverse()?;
    let types0: Vec<usize> = spectrum.iter().map(|s| s.1).collect();
    if mats.len() == 1 {
        return Ok((v0, types0, spectrum.into_iter().map(|s| vec![s.0]).collect()));
    }
    let conj: Vec<RMatrix> = mats[1..].iter().map(|m| v0_inv.mul(m).mul(&v0)).collect();
    let blocks: Vec<Vec<RMatrix>> = conj.iter().map(|m| extract_blocks(m, &types0)).collect::<Result<_>>()?;
    let mut inner = Vec::new();
    let mut types = Vec::new();
    let mut eig = Vec::new();
    for (u, (lam, _)) in spectrum.iter().enumerate() {
        let sub: Vec<RMatrix> = blocks.iter().map(|b| b[u].clone()).collect();
        let (vu, tu, eu) = refine(&sub)?;
        inner.push(vu);
        types.extend(tu);
        eig.extend(eu.into_iter().map(|e| std::iter::once(lam.clone()).chain(e).collect::<Vec<_>>()));
    }
    Ok((v0.mul(&Matrix::block_diag(&inner)), types, eig))
}

fn form(mats: &[RMatrix], beta_scale: i64) -> Result<CanonicalForm> {
    let (v, types, eigenvalues) = refine(mats)?;
    let v_inv = v.inverse()?;
    let d = mats.len();
    let blocks = mats
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let beta = GammaVector::basis(d, i, beta_scale);
            extract_blocks(&v_inv.mul(m).mul(&act_point(&beta, &v)), &types)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalForm { conjugator: v, types, blocks, eigenvalues })
}

/// Split `psi` by its residual eigenvalues: `V^{-1} psi V` is block diagonal,
/// each block with a single residual eigenvalue, blocks in canonical order.
pub fn hensel_split(psi: &RMatrix) -> Result<CanonicalForm> {
    check_square(psi, "psi")?;
    form(std::slice::from_ref(psi), 1)
}

/// A common canonical form of matrices satisfying the twisted commutation on
/// `scale * Gamma`; blocks are ordered by their tuples of residual eigenvalues.
pub fn simultaneous_canonical_form(psis: &[RMatrix], scale: i64) -> Result<CanonicalForm> {
    if psis.is_empty() {
        return Err(Error::Shape("need at least one matrix".into()));
    }
    let d = psis.len();
    for m in psis {
        check_square(m, "psi")?;
        if m.rows() != psis[0].rows() {
            return Err(Error::Shape("matrices differ in size".into()));
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let bi = GammaVector::basis(d, i, scale);
            let bj = GammaVector::basis(d, j, scale);
            let lhs = psis[i].mul(&act_point(&bi, &psis[j]));
            let rhs = psis[j].mul(&act_point(&bj, &psis[i]));
            if !lhs.sub(&rhs).is_zero() {
                return Err(Error::NotCommuting);
            }
        }
    }
    let cf = form(psis, scale)?;
    let f = ring_of(&psis[0]).residue_field().clone();
    debug_assert!(cf.eigenvalues.windows(2).all(|w| cmp_tuple(&f, &w[0], &w[1]) == Ordering::Less));
    Ok(cf)
}

/// For `H` whose diagonal blocks (sizes `types`) are residually disjoint and
/// whose off-diagonal blocks are divisible by `t`: `M` with
/// `(I + tM)^{-1} H act_beta(I + tM)` block diagonal, and that block-diagonal matrix.
pub fn block_diagonalize(h: &RMatrix, types: &[usize], beta: &GammaVector) -> Result<(RMatrix, RMatrix)> {
    check_square(h, "H")?;
    if types.iter().sum::<usize>() != h.rows() || types.contains(&0) {
        return Err(Error::Shape("block sizes must partition the matrix".into()));
    }
    let ring = ring_of(h);
    let alpha = alpha_of(h);
    let n = h.rows();
    let o = offsets(types);
    let theta: KMatrix = theta_matrix(h);
    for (u, &tu) in types.iter().enumerate() {
        for (v, &tv) in types.iter().enumerate() {
            if u != v && !theta.submatrix(o[u], o[v], tu, tv).is_zero() {
                return Err(Error::DomainViolation("off-diagonal blocks must be divisible by t".into()));
            }
        }
    }
    let id = identity_r(&ring, alpha, n);
    let mut cur = h.clone();
    let mut p = id.clone();
    for l in 1..alpha {
        let mut y = Matrix::zeros(n, n, &BdrElement::zero(&ring, alpha));
        for (u, &tu) in types.iter().enumerate() {
            for (v, &tv) in types.iter().enumerate() {
                if u == v {
                    continue;
                }
                let x = cur.submatrix(o[u], o[v], tu, tv).map(|e| {
                    BdrElement::constant(&e.digit(l as usize).neg(), alpha)
                });
                let a = cur.submatrix(o[u], o[u], tu, tu);
                let b = cur.submatrix(o[v], o[v], tv, tv);
                y.set_block(o[u], o[v], &twisted_sylvester(&a, &b, beta, &x)?);
            }
        }
        let q = id.add(&y.map(|e| e.mul_t_pow(l)));
        cur = q.inverse()?.mul(&cur).mul(&act_point(beta, &q));
        p = p.mul(&q);
    }
    let m = if alpha == 1 {
        Matrix::zeros(n, n, &BdrElement::zero(&ring, alpha))
    } else {
        p.sub(&id).try_map(|e| Ok(e.div_t_pow(1)?.lift(alpha)))?
    };
    let blocks = extract_blocks(&cur, types)?;
    Ok((m, Matrix::block_diag(&blocks)))
}
