use super::*;
use crate::random::Sampler;

#[test]
fn identities_hold_for_the_default_profile() {
    let b = BdrRing::new(PrecisionProfile::default()).unwrap();
    let suite = identity_suite(&b);
    assert!(suite.len() >= 10);
    for (name, ok) in suite {
        assert!(ok, "{name}");
    }
}

#[test]
fn align_down_and_up() {
    let lo = ring(3, 1, 8, 2);
    let hi = ring(3, 1, 12, 2);
    let mut s = Sampler::new(1);
    let x = s.bdr(&hi, 0, 1);
    let down = x.align(&lo);
    assert_eq!(down.abs_prec(), 8);
    assert_eq!(down.align(&hi), x);
    assert!(down.align(&hi).abs_prec() <= 9);
}

#[test]
fn fast_checks_pass() {
    for id in [1, 2, 11] {
        let o = run_criterion(id, 5);
        assert!(o.pass, "{o}");
    }
    assert!(!run_criterion(13, 0).pass);
}
