use proptest::prelude::*;
use serde_json::Value;

use super::json::{self, Payload};
use super::run;
use crate::bdr::{BdrElement, BdrRing, PrecisionProfile};
use crate::coeffs::Elem;
use crate::random::{random_cocycle, random_connection, Sampler};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bdrplus").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn reserialize(profile: &PrecisionProfile, p: &Payload) -> (String, String) {
    let first = json::to_string(profile, p);
    let (_, back) = json::from_str(&first).unwrap();
    (first, json::to_string(profile, &back))
}

fn profile() -> PrecisionProfile {
    PrecisionProfile::new(3, 2, 10, 2, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_values_roundtrip(seed in any::<u64>()) {
        let prof = profile();
        let b = BdrRing::new(prof).unwrap();
        let mut s = Sampler::new(seed);
        let shift = s.int(-2, 3);
        let (rest, cut) = (s.int(0, 2), s.int(4, 12));
        let x = s.bdr(&b, shift, rest).truncate(cut);
        let (a, c) = reserialize(&prof, &Payload::Bdr(x.clone()));
        prop_assert_eq!(a, c);
        let level = s.int(0, 2) as u32;
        let y = s.toric(&b, 2, level, 3, 9);
        let (a, c) = reserialize(&prof, &Payload::Toric(y));
        prop_assert_eq!(a, c);
        let m = s.matrix(2, 3, |s| s.bdr(&b, 0, 1));
        let (a, c) = reserialize(&prof, &Payload::BdrMatrix(m));
        prop_assert_eq!(a, c);
        let tm = s.toric_gauge(&b, 2, 2, 1);
        let (a, c) = reserialize(&prof, &Payload::ToricMatrix(tm));
        prop_assert_eq!(a, c);
    }

    #[test]
    fn rh_values_roundtrip(seed in any::<u64>()) {
        let prof = profile();
        let b = BdrRing::new(prof).unwrap();
        let mut s = Sampler::new(seed);
        let nabla = random_connection(&mut s, &b, 1, 2, 1).unwrap();
        let (a, c) = reserialize(&prof, &Payload::Connection(nabla));
        prop_assert_eq!(a, c);
        let phi = random_cocycle(seed, &b, 1, 1, 1).unwrap();
        let (a, c) = reserialize(&prof, &Payload::Cocycle(phi.clone()));
        prop_assert_eq!(a, c);
        let (_, back) = json::from_str(&json::to_string(&prof, &Payload::Cocycle(phi.clone()))).unwrap();
        match back {
            Payload::Cocycle(q) => prop_assert_eq!(q, phi),
            _ => prop_assert!(false),
        }
    }
}

#[test]
fn precision_survives_serialization() {
    let b = BdrRing::new(profile()).unwrap();
    let k = b.cyclo();
    let x = BdrElement::from_digits(vec![Elem::from_int(k, 7).truncate(3), Elem::one(k).truncate(6)]);
    let text = json::to_string(b.profile(), &Payload::Bdr(x.clone()));
    let (_, back) = json::from_str(&text).unwrap();
    let Payload::Bdr(y) = back else { panic!("wrong payload") };
    assert_eq!(y.digits()[0].abs_prec(), 3);
    assert_eq!(y.digits()[1].abs_prec(), 6);
    assert_eq!(y, x);
}

#[test]
fn rejects_unknown_versions_and_garbage() {
    let b = BdrRing::new(profile()).unwrap();
    let text = json::to_string(b.profile(), &Payload::Bdr(b.t()));
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["schema_version"] = Value::from(99);
    assert!(json::parse_document(&v).is_err());
    assert!(json::from_str("{").is_err());
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["payload"]["digits"][1]["coeffs"][0] = Value::from("12x");
    assert!(json::parse_document(&v).is_err());
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["profile"]["p"] = Value::from("4");
    assert!(json::parse_document(&v).is_err());
}

#[test]
fn constants_match_hand_derivatives() {
    let (code, out, _) = cli(&["constants", "--profile", "3,1,8,2,1", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let b = BdrRing::new(PrecisionProfile::new(3, 1, 8, 2, 1).unwrap()).unwrap();
    let k = b.cyclo();
    let digit = |name: &str, i: usize| json::elem_from_json(k, &v["constants"][name]["digits"][i]).unwrap();
    // t = 0 + 1 t
    assert!(digit("t", 0).is_zero());
    assert_eq!(digit("t", 1), Elem::one(k));
    // zeta_3 = 1 + y
    assert_eq!(digit("zeta_3", 0), Elem::from_poly(k, &[1, 1]));
    assert!(digit("zeta_3", 1).is_zero());
    // xi = Phi_3(zeta e^(t/3)); its t-derivative at 0 is (2 zeta + 1) zeta / 3 = -(3 + y)/3
    assert!(digit("xi", 0).is_zero());
    assert_eq!(digit("xi", 1), Elem::from_poly(k, &[-3, -1]).mul_pow_p(-1));
    // q^(1/3) = zeta e^(t/3)
    assert_eq!(digit("q^(1/3)", 1), Elem::from_poly(k, &[1, 1]).mul_pow_p(-1));
    assert_eq!(v["profile"]["N"], Value::from(8));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["constants", "--profile", "4,1,8,2,1"]).0, 2);
    assert_eq!(cli(&["selftest", "--only", "13"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
    let (code, _, err) = cli(&["log", "--in", "/nonexistent/file.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
    assert_eq!(cli(&["verify-identities", "--profile", "5,2,12,3,1"]).0, 0);
}

#[test]
fn deterministic_reports() {
    let a = cli(&["selftest", "--seed", "42", "--only", "1,2,11"]);
    let b = cli(&["selftest", "--seed", "42", "--only", "1,2,11"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
    let c = cli(&["random-cocycle", "--seed", "3", "--profile", "3,2,10,2,1", "--d", "1", "--r", "2"]);
    let d = cli(&["random-cocycle", "--seed", "3", "--profile", "3,2,10,2,1", "--d", "1", "--r", "2"]);
    assert_eq!(c.0, 0);
    assert_eq!(c, d);
}

#[test]
fn file_pipeline() {
    let dir = std::env::temp_dir().join(format!("bdrplus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let phi = dir.join("phi.json");
    let nabla = dir.join("nabla.json");
    let back = dir.join("back.json");
    let p = |x: &std::path::Path| x.to_str().unwrap().to_string();
    let prof = ["--profile", "3,2,10,2,1"];
    assert_eq!(cli(&[&["random-cocycle", "--seed", "5", "--m", "1", "--out", &p(&phi)], &prof[..]].concat()).0, 0);
    assert_eq!(cli(&["log", "--in", &p(&phi), "--out", &p(&nabla)]).0, 0);
    assert_eq!(cli(&["exp", "--in", &p(&nabla), "--m", "1", "--out", &p(&back)]).0, 0);
    let (_, a) = json::from_str(&std::fs::read_to_string(&phi).unwrap()).unwrap();
    let (_, c) = json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    match (a, c) {
        (Payload::Cocycle(a), Payload::Cocycle(c)) => assert_eq!(a, c),
        _ => panic!("wrong payloads"),
    }
    let (code, out, _) = cli(&["roundtrip", "--in", &p(&phi)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(cli(&["sylvester", "--in", &p(&phi)]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn generated_commands_succeed() {
    for args in [
        vec!["sylvester", "--profile", "5,1,10,2,1", "--seed", "1"],
        vec!["blockdiag", "--profile", "5,1,10,3,1", "--seed", "2", "--json"],
        vec!["mroot", "--profile", "5,1,10,2,1", "--M", "5", "--r", "2"],
        vec!["extend", "--profile", "3,1,10,2,1", "--seed", "4", "--json"],
        vec!["exp", "--profile", "3,2,10,2,1", "--d", "2", "--r", "1"],
    ] {
        let (code, out, err) = cli(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
    }
}
