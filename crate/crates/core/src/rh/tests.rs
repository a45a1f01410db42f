use super::*;
use crate::bdr::PrecisionProfile;
use crate::random::{random_cocycle, random_connection, Sampler};

fn ring(p: u64, alpha: u32) -> Arc<BdrRing> {
    BdrRing::new(PrecisionProfile::new(p, 2, 12, alpha, 1).unwrap()).unwrap()
}

fn constant(b: &Arc<BdrRing>, d: usize, rows: &[&[i64]]) -> ToricMatrix {
    Matrix::from_fn(rows.len(), rows.len(), |i, j| ToricElement::constant(b, d, b.from_int(rows[i][j])))
}

#[test]
fn check_examples() {
    let b = ring(5, 2);
    let id = identity(&b, 2, 2);
    let phi = Cocycle::new(&b, 1, TwistTag::ExpDerivation, vec![id.clone(), id.clone()]).unwrap();
    assert!(cocycle_check(&phi).unwrap().0);
    let e12 = constant(&b, 2, &[&[1, 1], &[0, 1]]);
    let e21 = constant(&b, 2, &[&[1, 0], &[1, 1]]);
    let bad = Cocycle::new(&b, 1, TwistTag::ExpDerivation, vec![e12, e21]).unwrap();
    let (ok, res) = cocycle_check(&bad).unwrap();
    assert!(!ok && !res[0].is_zero());

    let c1 = constant(&b, 2, &[&[0, 1], &[0, 0]]);
    let c2 = constant(&b, 2, &[&[0, 0], &[1, 0]]);
    assert!(!integrability_check(&TConnection::new(&b, vec![c1, c2]).unwrap()).0);
}

#[test]
fn eval_is_twisted_product() {
    let b = ring(3, 3);
    let phi = random_cocycle(3, &b, 2, 2, 1).unwrap();
    assert!(cocycle_check(&phi).unwrap().0);
    let b0 = phi.generator(0);
    let two = cocycle_eval(&phi, &b0.scale(2)).unwrap();
    let direct = phi.mats()[0].mul(&TwistTag::ExpDerivation.act_matrix(&b0, &phi.mats()[0]).unwrap());
    assert_eq!(two, direct);
    assert_eq!(cocycle_eval(&phi, &b0).unwrap(), phi.mats()[0]);
    // both orders of a mixed element agree
    let b1 = phi.generator(1);
    let g = b0.add(&b1);
    let a = phi.mats()[0].mul(&TwistTag::ExpDerivation.act_matrix(&b0, &phi.mats()[1]).unwrap());
    let c = phi.mats()[1].mul(&TwistTag::ExpDerivation.act_matrix(&b1, &phi.mats()[0]).unwrap());
    assert_eq!(cocycle_eval(&phi, &g).unwrap(), a);
    assert_eq!(a, c);
    // inverse element
    let inv = cocycle_eval(&phi, &b0.scale(-1)).unwrap();
    let back = inv.mul(&TwistTag::ExpDerivation.act_matrix(&b0.scale(-1), &phi.mats()[0]).unwrap());
    assert_eq!(back, identity(&b, 2, 2));
    assert!(matches!(cocycle_eval(&phi, &GammaVector(vec![1, 0])), Err(Error::DomainViolation(_))));
}

#[test]
fn scalar_log_oracle() {
    // Phi = exp(p c0 t) on p Gamma: phi = c0 t
    let b = ring(5, 3);
    let c0 = b.from_int(7);
    let x = b.t().mul(&c0).mul_int(5);
    let phi_1 = ToricElement::constant(&b, 1, b.exp_small(&x).unwrap());
    let phi = Cocycle::new(&b, 1, TwistTag::ExpDerivation, vec![Matrix::from_fn(1, 1, |_, _| phi_1.clone())]).unwrap();
    let nabla = log_correspondence(&phi).unwrap();
    assert_eq!(*nabla.mats()[0].get(0, 0), ToricElement::constant(&b, 1, b.t().mul(&c0)));
    assert_eq!(exp_correspondence(&nabla, 1).unwrap(), phi);
}

#[test]
fn blockwise_scalar_exponentials() {
    let b = ring(3, 3);
    let phis = [[2i64, 5], [4, 1]];
    let mats = phis
        .iter()
        .map(|row| {
            let diag: Vec<ToricElement> =
                row.iter().map(|&c| ToricElement::constant(&b, 2, b.from_int(c).add(&b.t()))).collect();
            Matrix::diagonal(&diag)
        })
        .collect();
    let nabla = TConnection::new(&b, mats).unwrap();
    let phi = exp_correspondence(&nabla, 2).unwrap();
    for (i, row) in phis.iter().enumerate() {
        for (l, &c) in row.iter().enumerate() {
            let want = b.exp_small(&b.from_int(9 * c).add(&b.t().mul_int(9))).unwrap();
            assert_eq!(*phi.mats()[i].get(l, l), ToricElement::constant(&b, 2, want));
        }
    }
}

#[test]
fn identity_and_trivial_gauges() {
    let b = ring(5, 2);
    let id = identity(&b, 1, 2);
    let phi = Cocycle::new(&b, 2, TwistTag::ExpDerivation, vec![id.clone()]).unwrap();
    let nabla = log_correspondence(&phi).unwrap();
    assert!(nabla.mats()[0].is_zero());
    assert_eq!(exp_correspondence(&nabla, 2).unwrap(), phi);
    let mut s = Sampler::new(1);
    let conn = random_connection(&mut s, &b, 1, 2, 1).unwrap();
    assert_eq!(gauge_transform(&conn, &id).unwrap(), conn);
    let c = Matrix::identity(2, &ToricElement::constant(&b, 1, b.from_int(6)));
    let c = c.map(|x| x.clone());
    assert_eq!(gauge_transform(&conn, &c).unwrap(), conn);
}

#[test]
fn roundtrip_and_intertwining() {
    for (seed, p, alpha, d, r, m) in [(1u64, 3u64, 3u32, 2usize, 2usize, 1u32), (2, 5, 2, 1, 3, 2), (3, 3, 2, 2, 1, 2)] {
        let b = ring(p, alpha);
        let phi = random_cocycle(seed, &b, d, r, m).unwrap();
        assert!(cocycle_check(&phi).unwrap().0);
        let nabla = log_correspondence(&phi).unwrap();
        assert!(integrability_check(&nabla).0);
        assert_eq!(exp_correspondence(&nabla, m).unwrap(), phi, "seed {seed}");

        let mut s = Sampler::new(seed + 100);
        let v = s.toric_gauge(&b, d, r, m);
        let lhs = log_correspondence(&cocycle_gauge(&phi, &v).unwrap()).unwrap();
        let rhs = gauge_transform(&nabla, &v).unwrap();
        assert_eq!(lhs, rhs, "seed {seed}");

        // additivity in gamma: the operator log at 2 beta is twice the one at beta
        let doubled = (0..d).map(|i| cocycle_eval(&phi, &phi.generator(i).scale(2)).unwrap()).collect();
        let phi2 = Cocycle::with_scale(&b, 2 * phi.scale(), phi.twist(), doubled).unwrap();
        assert_eq!(log_correspondence(&phi2).unwrap(), nabla);
    }
}

#[test]
fn gauge_composition() {
    let b = ring(3, 2);
    let mut s = Sampler::new(9);
    let conn = random_connection(&mut s, &b, 2, 2, 1).unwrap();
    let v1 = s.toric_gauge(&b, 2, 2, 1);
    let v2 = s.toric_gauge(&b, 2, 2, 1);
    let two_step = gauge_transform(&gauge_transform(&conn, &v1).unwrap(), &v2).unwrap();
    assert_eq!(two_step, gauge_transform(&conn, &v1.mul(&v2)).unwrap());
    assert!(integrability_check(&two_step).0);
}

#[test]
fn domain_checks() {
    let b = ring(5, 2);
    let big = constant(&b, 1, &[&[1, 5], &[0, 1]]);
    let phi = Cocycle::new(&b, 1, TwistTag::ExpDerivation, vec![big]).unwrap();
    assert!(matches!(log_correspondence(&phi), Err(Error::DomainViolation(_))));
    let g = Cocycle::new(&b, 1, TwistTag::Galois, vec![identity(&b, 1, 1)]).unwrap();
    assert!(matches!(log_correspondence(&g), Err(Error::TwistMismatch)));
    let c1 = constant(&b, 2, &[&[0, 1], &[0, 0]]);
    let c2 = constant(&b, 2, &[&[0, 0], &[1, 0]]);
    let nabla = TConnection::new(&b, vec![c1, c2]).unwrap();
    assert!(matches!(exp_correspondence(&nabla, 3), Err(Error::NotIntegrable)));
    let mut s = Sampler::new(4);
    let conn = random_connection(&mut s, &b, 1, 2, 1).unwrap();
    assert!(minimal_level(&conn, 2) <= 1);
}

fn min_abs(mats: &[ToricMatrix]) -> i64 {
    mats.iter()
        .flat_map(|m| m.entries().iter())
        .flat_map(|x| x.terms().map(|(_, c)| c.abs_prec()).collect::<Vec<_>>())
        .min()
        .unwrap_or(i64::MAX)
}

#[test]
fn precision_stays_meaningful() {
    let b = ring(3, 3);
    let phi = random_cocycle(1, &b, 2, 2, 1).unwrap();
    let nabla = log_correspondence(&phi).unwrap();
    let back = exp_correspondence(&nabla, 1).unwrap();
    assert!(min_abs(nabla.mats()) >= 6);
    assert!(min_abs(back.mats()) >= 6);
}
