use std::sync::Arc;

use super::reference::{mth_root_newton, sum_conjugation_flat, sylvester_flat};
use super::*;
use crate::bdr::{BdrRing, PrecisionProfile};
use crate::random::Sampler;
use crate::rh::{cocycle_check, cocycle_eval, Cocycle, TwistTag};
use crate::toric::ToricElement;

fn ring(p: u64, alpha: u32, s: usize) -> Arc<BdrRing> {
    BdrRing::new(PrecisionProfile::new(p, 1, 10, alpha, 1).unwrap().with_s(s)).unwrap()
}

fn rmat(b: &BdrRing, rows: &[&[i64]]) -> RMatrix {
    Matrix::from_fn(rows.len(), rows[0].len(), |i, j| b.from_int(rows[i][j]))
}

fn beta() -> GammaVector {
    GammaVector::basis(1, 0, 1)
}

#[test]
fn split_examples() {
    let b = ring(5, 2, 1);
    let one = hensel_split(&rmat(&b, &[&[1, 0], &[0, 6]])).unwrap();
    assert_eq!(one.types, vec![2]);
    let psi = rmat(&b, &[&[1, 0], &[0, 2]]);
    let two = hensel_split(&psi).unwrap();
    assert_eq!(two.types, vec![1, 1]);
    let v = &two.conjugator;
    assert_eq!(v.inverse().unwrap().mul(&psi).mul(v), two.assembled(0));
    assert_eq!(*two.blocks[0][0].get(0, 0), b.from_int(1));
    assert_eq!(*two.blocks[0][1].get(0, 0), b.from_int(2));

    // x^2 - 2 is irreducible mod 5
    let companion = |b: &BdrRing| rmat(b, &[&[0, 2], &[1, 0]]);
    let err = hensel_split(&companion(&b)).unwrap_err();
    assert!(matches!(err, Error::ResidueFieldTooSmall { degree: 2, s: 1 }), "{err:?}");
    let b2 = ring(5, 2, 2);
    let cf = hensel_split(&companion(&b2)).unwrap();
    assert_eq!(cf.types, vec![1, 1]);
    let v = &cf.conjugator;
    assert_eq!(v.inverse().unwrap().mul(&companion(&b2)).mul(v), cf.assembled(0));
}

#[test]
fn sylvester_examples() {
    let b = BdrRing::new(PrecisionProfile::new(7, 1, 10, 1, 1).unwrap()).unwrap();
    let y = twisted_sylvester(&rmat(&b, &[&[2]]), &rmat(&b, &[&[5]]), &beta(), &rmat(&b, &[&[1]])).unwrap();
    assert_eq!(*y.get(0, 0), b.from_rational(-1, 3));
    let zero = twisted_sylvester(&rmat(&b, &[&[2]]), &rmat(&b, &[&[5]]), &beta(), &rmat(&b, &[&[0]])).unwrap();
    assert!(zero.is_zero());
    let same = twisted_sylvester(&rmat(&b, &[&[2]]), &rmat(&b, &[&[9]]), &beta(), &rmat(&b, &[&[1]]));
    assert!(matches!(same, Err(Error::SpectraNotDisjoint)));
}

#[test]
fn sylvester_matches_flattened_oracle() {
    let b = ring(5, 3, 1);
    let mut s = Sampler::new(11);
    for _ in 0..5 {
        // residual spectra {0, 1} and {2, 3} up to p-adic noise
        let pi = rmat(&b, &[&[0, 1], &[0, 1]]).add(&s.matrix(2, 2, |s| s.bdr(&b, 1, 0)));
        let pj = rmat(&b, &[&[2, 0], &[7, 3]]).add(&s.matrix(2, 2, |s| s.bdr(&b, 1, 0)));
        let x = s.matrix(2, 2, |s| s.bdr(&b, 0, 0));
        let y = twisted_sylvester(&pi, &pj, &beta(), &x).unwrap();
        assert_eq!(pi.mul(&y).sub(&act_point(&beta(), &y).mul(&pj)), x);
        assert_eq!(y, sylvester_flat(&pi, &pj, &x).unwrap());
    }
}

#[test]
fn block_diagonalize_examples() {
    let b = ring(5, 2, 1);
    let t = b.t();
    let h = Matrix::from_rows(vec![vec![b.one(), t.clone()], vec![t.clone(), b.from_int(2)]]);
    let (m, hd) = block_diagonalize(&h, &[1, 1], &beta()).unwrap();
    let id = Matrix::identity(2, &b.one());
    let q = id.add(&m.map(|e| e.mul(&t)));
    assert_eq!(q.inverse().unwrap().mul(&h).mul(&act_point(&beta(), &q)), hd);
    assert!(hd.get(0, 1).is_zero() && hd.get(1, 0).is_zero());
    assert_eq!(theta_matrix(&hd), theta_matrix(&h));

    let diag = rmat(&b, &[&[1, 0], &[0, 2]]);
    let (m0, same) = block_diagonalize(&diag, &[1, 1], &beta()).unwrap();
    assert!(m0.is_zero());
    assert_eq!(same, diag);
    assert!(matches!(block_diagonalize(&rmat(&b, &[&[1, 1], &[0, 2]]), &[1, 1], &beta()), Err(Error::DomainViolation(_))));
}

#[test]
fn simultaneous_examples() {
    let b = ring(7, 2, 1);
    let psis = [rmat(&b, &[&[1, 0], &[0, 2]]), rmat(&b, &[&[3, 0], &[0, 4]])];
    let cf = simultaneous_canonical_form(&psis, 1).unwrap();
    assert_eq!(cf.types, vec![1, 1]);
    let f = b.cyclo().residue_field();
    assert_eq!(cf.eigenvalues, vec![vec![f.from_int(1), f.from_int(3)], vec![f.from_int(2), f.from_int(4)]]);
    let id = rmat(&b, &[&[1, 0], &[0, 1]]);
    let triv = simultaneous_canonical_form(&[id.clone(), id.clone()], 1).unwrap();
    assert_eq!(triv.types, vec![2]);
    assert_eq!(triv.conjugator, id);
    let nc = simultaneous_canonical_form(&[rmat(&b, &[&[1, 1], &[0, 1]]), rmat(&b, &[&[1, 0], &[1, 1]])], 1);
    assert!(matches!(nc, Err(Error::NotCommuting)));
    // d = 1 is hensel_split
    let psi = rmat(&b, &[&[1, 2], &[3, 0]]);
    let a = simultaneous_canonical_form(std::slice::from_ref(&psi), 1).unwrap();
    let h = hensel_split(&psi).unwrap();
    assert_eq!(a.conjugator, h.conjugator);
    assert_eq!(a.types, h.types);
}

#[test]
fn binomial_examples() {
    let b = ring(3, 2, 1);
    let zero = rmat(&b, &[&[0, 0], &[0, 0]]);
    assert_eq!(binomial_root_series(&zero, &zero, 3).unwrap(), rmat(&b, &[&[1, 0], &[0, 1]]));
    let u = rmat(&b, &[&[0, 1], &[0, 0]]);
    let w = binomial_root_series(&u, &zero, 2).unwrap();
    let half = b.from_rational(1, 2);
    assert_eq!(*w.get(0, 1), half);
    assert_eq!(w.mul(&w), u.add(&rmat(&b, &[&[1, 0], &[0, 1]])));
    let mut s = Sampler::new(5);
    for m in [3, 2, 9] {
        let x = s.matrix(2, 2, |s| s.bdr(&b, 3, 3));
        let w = binomial_root_series(&zero, &x, m).unwrap();
        assert_eq!(w.pow(m as u64), x.add(&rmat(&b, &[&[1, 0], &[0, 1]])), "M = {m}");
    }
    let x = s.matrix(2, 2, |s| s.bdr(&b, 1, 1));
    assert!(matches!(binomial_root_series(&zero, &x, 3), Err(Error::DomainViolation(_))));
    assert_eq!(binomial_min_valuation(1, 3, 3), 2);
    assert_eq!(binomial_min_valuation(2, 5, 5), 3);
}

#[test]
fn sum_conjugation_examples() {
    let b = BdrRing::new(PrecisionProfile::new(7, 1, 10, 1, 1).unwrap()).unwrap();
    let y = sum_conjugation_solve(&rmat(&b, &[&[3]]), 2, &rmat(&b, &[&[1]])).unwrap();
    assert_eq!(*y.get(0, 0), b.from_rational(1, 6));
    let b = ring(3, 3, 1);
    let mut s = Sampler::new(8);
    for m in [2, 3] {
        let bm = rmat(&b, &[&[2, 1], &[0, 2]]).add(&s.matrix(2, 2, |s| s.bdr(&b, 1, 0)));
        let x = s.matrix(2, 2, |s| s.bdr(&b, 0, 0));
        let y = sum_conjugation_solve(&bm, m, &x).unwrap();
        let mut acc = x.sub(&x);
        for i in 0..m as u64 {
            acc = acc.add(&bm.pow(i).mul(&y).mul(&bm.pow(m as u64 - 1 - i)));
        }
        assert_eq!(acc, x);
        assert_eq!(y, sum_conjugation_flat(&bm, m, &x).unwrap());
    }
}

#[test]
fn mth_root_examples() {
    let b = BdrRing::new(PrecisionProfile::new(7, 1, 10, 1, 1).unwrap()).unwrap();
    let r = twisted_mth_root(&rmat(&b, &[&[4]]), &beta(), 2, &rmat(&b, &[&[9]])).unwrap();
    assert_eq!(r, rmat(&b, &[&[2]]));
    let id = rmat(&b, &[&[1, 0], &[0, 1]]);
    assert_eq!(twisted_mth_root(&id, &beta(), 3, &id).unwrap(), id);
    assert!(matches!(mth_root_seed(&rmat(&b, &[&[3]]), 2), Err(Error::ResidueRootMissing { m: 2 })));

    let b = ring(3, 3, 1);
    let mut s = Sampler::new(21);
    for m in [2, 4, 3] {
        let phi = if m == 3 {
            let r = rmat(&b, &[&[2, 0], &[0, 2]]).add(&s.matrix(2, 2, |s| s.bdr(&b, 1, 0)));
            r.pow(3)
        } else {
            rmat(&b, &[&[4, 1], &[0, 4]]).add(&s.matrix(2, 2, |s| s.bdr(&b, 2, 0)))
        };
        let seed = mth_root_seed(&phi, m).unwrap();
        let r1 = twisted_mth_root(&phi, &beta(), m, &seed).unwrap();
        assert_eq!(twisted_product(&r1, &beta(), m), phi, "M = {m}");
        let r2 = twisted_mth_root(&phi, &beta(), m, &seed).unwrap();
        assert_eq!(r1.map(|x| x.canonical(20)).entries(), r2.map(|x| x.canonical(20)).entries());
        // seeds equal mod t give equal roots
        let shifted = seed.add(&s.matrix(2, 2, |s| s.bdr(&b, 0, 0)).map(|x| x.mul_t_pow(1)));
        assert_eq!(twisted_mth_root(&phi, &beta(), m, &shifted).unwrap(), r1);
    }
    let b1 = BdrRing::new(PrecisionProfile::new(3, 1, 10, 1, 1).unwrap()).unwrap();
    let phi = rmat(&b1, &[&[1, 9], &[0, 10]]);
    let seed = mth_root_seed(&phi, 2).unwrap();
    assert_eq!(twisted_mth_root(&phi, &beta(), 2, &seed).unwrap(), mth_root_newton(&phi, 2, &seed).unwrap());
}

fn point_cocycle(b: &Arc<BdrRing>, scale: i64, mats: Vec<RMatrix>) -> Cocycle {
    let d = mats.len();
    let mats = mats.into_iter().map(|m| m.map(|x| ToricElement::constant(b, d, x.clone()))).collect();
    Cocycle::with_scale(b, scale, TwistTag::ExpDerivation, mats).unwrap()
}

#[test]
fn extend_examples() {
    let b = ring(3, 2, 1);
    let id = rmat(&b, &[&[1, 0], &[0, 1]]);
    let triv = extend_cocycle(&point_cocycle(&b, 3, vec![id.clone(), id.clone()]), 3).unwrap();
    assert_eq!(triv, point_cocycle(&b, 1, vec![id.clone(), id.clone()]));

    let c0 = b.from_int(5);
    let psi = b.exp_small(&b.t().mul(&c0).mul_int(3)).unwrap();
    let out = extend_cocycle(&point_cocycle(&b, 3, vec![Matrix::from_fn(1, 1, |_, _| psi.clone())]), 3).unwrap();
    let want = b.exp_small(&b.t().mul(&c0)).unwrap();
    assert_eq!(out, point_cocycle(&b, 1, vec![Matrix::from_fn(1, 1, |_, _| want.clone())]));

    // a commuting pair congruent to 1 mod p^2, its 9-th power, two routes back
    let mut s = Sampler::new(2);
    let v = s.invertible_constant(&b, 2);
    let v_inv = v.inverse().unwrap();
    let mats: Vec<RMatrix> = (0..2)
        .map(|_| {
            let diag: Vec<_> = (0..2).map(|_| b.one().add(&s.bdr(&b, 2, 0))).collect();
            v.mul(&Matrix::diagonal(&diag)).mul(&v_inv)
        })
        .collect();
    let psi = point_cocycle(&b, 9, mats.iter().map(|m| m.pow(9)).collect());
    let one_step = extend_cocycle(&psi, 9).unwrap();
    let two_step = extend_cocycle(&extend_cocycle(&psi, 3).unwrap(), 3).unwrap();
    assert_eq!(one_step, two_step);
    assert!(cocycle_check(&one_step).unwrap().0);
    for i in 0..2 {
        assert_eq!(cocycle_eval(&one_step, &psi.generator(i)).unwrap(), psi.mats()[i]);
    }
}
