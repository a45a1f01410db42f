use std::sync::Arc;

use super::{ensure, lib, ring, Check};
use crate::bdr::lattice::LatticeModel;
use crate::bdr::BdrRing;
use crate::random::{random_cocycle, Sampler};
use crate::rh::{cocycle_check, cocycle_gauge, exp_correspondence_with, gauge_transform, integrability_check, log_correspondence};
use crate::toric::{GammaVector, ToricElement};

/// Every structural identity of the period ring, by name.
pub fn identity_suite(b: &Arc<BdrRing>) -> Vec<(String, bool)> {
    let prof = *b.profile();
    let alpha = prof.alpha;
    let mut out = Vec::new();
    let mut push = |name: String, ok: bool| out.push((name, ok));
    let (xi, t) = (b.xi(), b.t());
    push("theta(xi) = 0".into(), b.theta(&xi).is_zero());
    push("theta(t) = 0".into(), b.theta(&t).is_zero());
    let unit = b.unit_t_over_xi();
    push("t = xi * unit".into(), xi.mul(&unit) == t);
    push("t/xi is a unit".into(), b.inv_if_unit(&unit).is_ok());
    push(format!("xi^{alpha} = 0"), xi.pow(alpha as u64).is_zero());
    push(format!("t^{alpha} = 0"), t.pow(alpha as u64).is_zero());
    push(format!("xi^{} != 0", alpha - 1), alpha == 1 || !xi.pow(alpha as u64 - 1).is_zero());
    push("log q = t".into(), b.log_near_one(&b.q()).map(|l| l == t).unwrap_or(false));
    for n in 1..=prof.k {
        let pn = prof.p.pow(n);
        let ok = b.zeta(n).map(|z| z.pow(pn) == b.one() && z.pow(pn / prof.p) != b.one()).unwrap_or(false);
        push(format!("zeta_{pn} is a primitive {pn}-th root of unity"), ok);
        push(format!("q^(1/{pn}) = zeta_{pn} exp(t/{pn})"), root_identity(b, n).unwrap_or(false));
    }
    if let Ok(m) = LatticeModel::new(prof) {
        let ok = m.t_series(alpha).map(|ts| b.from_lattice(&ts) == t).unwrap_or(false);
        push("t agrees with the lattice log series".into(), ok);
        push("xi agrees with the lattice model".into(), b.from_lattice(&m.xi(alpha)) == xi);
    }
    out
}

/// `q^(1/p^n)` from the lattice model against `zeta_{p^n} exp(t / p^n)`.
fn root_identity(b: &BdrRing, n: u32) -> crate::error::Result<bool> {
    let m = LatticeModel::new(*b.profile())?;
    let lhs = b.from_lattice(&m.q_root(n, b.alpha()));
    let rhs = b.zeta(n)?.mul(&b.exp_small(&b.t().mul_pow_p(-(n as i64)))?);
    Ok(lhs == rhs && lhs == b.q_root(n)?)
}

pub(super) fn root_of_unity() -> Check {
    let mut cases = 0;
    for p in [3, 5] {
        for alpha in [2, 3] {
            let b = ring(p, 2, 12, alpha);
            for n in [1, 2] {
                ensure(lib(root_identity(&b, n), "identity")?, || format!("p={p} alpha={alpha} n={n}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

pub(super) fn kernel() -> Check {
    let mut cases = 0;
    for (p, k, n, alpha) in [(3, 1, 8, 2), (3, 2, 10, 3), (5, 2, 12, 3), (7, 1, 8, 2), (5, 1, 10, 1)] {
        let b = ring(p, k, n, alpha);
        for (name, ok) in identity_suite(&b) {
            ensure(ok, || format!("{name} fails for profile {}", b.profile()))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn random_gamma(s: &mut Sampler, d: usize) -> GammaVector {
    GammaVector((0..d).map(|_| s.int(-6, 6)).collect())
}

pub(super) fn action_compatibility(seed: u64) -> Check {
    let b = ring(3, 2, 10, 2);
    let mut s = Sampler::new(seed ^ 0x03);
    for case in 0..100 {
        let level = s.int(0, 2) as u32;
        let x = s.toric(&b, 2, level, 3, 9);
        let g = random_gamma(&mut s, 2);
        let direct = lib(x.natural_act(&g), "natural action")?;
        let star_after = lib(x.exp_derivation_act(&g).galois_act(&g), "galois action")?;
        let star_before = lib(x.galois_act(&g), "galois action")?.exp_derivation_act(&g);
        ensure(direct == star_after && direct == star_before, || format!("case {case}: composition orders differ"))?;
        ensure(x.exp_derivation_act(&g) == x.exp_derivation_closed(&g), || format!("case {case}: closed form differs"))?;
    }
    Ok(100)
}

/// `R_{n'}` by averaging `gamma_*` over `p^{n'} Gamma / p^n Gamma`.
fn average_trace(x: &ToricElement, n_prime: u32, n: u32) -> crate::error::Result<ToricElement> {
    let p = x.ring().p() as i64;
    let d = x.dim();
    let span = p.pow(n - n_prime);
    let step = p.pow(n_prime);
    let mut acc = ToricElement::zero(x.ring(), d);
    for idx in 0..span.pow(d as u32) {
        let g = GammaVector((0..d).map(|i| step * ((idx / span.pow(i as u32)) % span)).collect());
        acc = acc.add(&x.galois_act(&g)?);
    }
    let e = ((n - n_prime) as i64) * d as i64;
    Ok(acc.map_coeffs(|c| c.mul_pow_p(-e)))
}

pub(super) fn traces(seed: u64) -> Check {
    let b = ring(3, 2, 10, 2);
    let mut s = Sampler::new(seed ^ 0x04);
    for case in 0..100 {
        let n = s.int(1, 2) as u32;
        let n_prime = s.int(0, n as i64 - 1) as u32;
        let x = s.toric(&b, 2, n, 4, 9);
        let g = random_gamma(&mut s, 2);
        let r = lib(x.normalized_trace(n_prime), "trace")?;
        let msg = |what: &str| format!("case {case} (n={n}, n'={n_prime}): {what}");
        ensure(lib(r.normalized_trace(n_prime), "trace")? == r, || msg("not idempotent"))?;
        let lhs = lib(lib(x.galois_act(&g), "galois")?.normalized_trace(n_prime), "trace")?;
        ensure(lhs == lib(r.galois_act(&g), "galois")?, || msg("not Galois-equivariant"))?;
        ensure(lib(average_trace(&x, n_prime, n), "average")? == r, || msg("differs from the average"))?;
        let (head, tail) = lib(x.trace_complement(n_prime), "complement")?;
        ensure(head.add(&tail) == x, || msg("head + tail differs from x"))?;
        ensure(lib(tail.normalized_trace(n_prime), "trace")?.is_zero(), || msg("tail has a trace"))?;
    }
    Ok(100)
}

/// Parameters of seeded cocycle `i`: `(p, alpha, d, r, m)`.
fn cocycle_params(s: &mut Sampler) -> (u64, u32, usize, usize, u32) {
    let p = if s.coin() { 3 } else { 5 };
    (p, s.int(1, 3) as u32, s.int(1, 2) as usize, s.int(1, 3) as usize, s.int(0, 2) as u32)
}

/// Smallest absolute precision among the coefficients of `mats`.
fn min_precision(mats: &[crate::rh::ToricMatrix]) -> i64 {
    mats.iter()
        .flat_map(|m| m.entries().iter())
        .flat_map(|e| e.terms().map(|(_, c)| c.abs_prec()).collect::<Vec<_>>())
        .min()
        .unwrap_or(i64::MAX)
}

pub(super) fn roundtrip(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x05);
    for case in 0..50 {
        let (p, alpha, d, r, m) = cocycle_params(&mut s);
        let b = ring(p, 2, 12, alpha);
        let phi = lib(random_cocycle(s.int(0, i64::MAX) as u64, &b, d, r, m), "generator")?;
        let msg = |what: &str| format!("case {case} (p={p} alpha={alpha} d={d} r={r} m={m}): {what}");
        ensure(lib(cocycle_check(&phi), "check")?.0, || msg("generator is not a cocycle"))?;
        let nabla = lib(log_correspondence(&phi), "log")?;
        ensure(integrability_check(&nabla).0, || msg("log is not integrable"))?;
        let back = lib(exp_correspondence_with(&nabla, phi.scale(), phi.twist(), 2), "exp")?;
        ensure(back == phi, || msg("exp(log) differs"))?;
        let kept = min_precision(back.mats()).min(min_precision(nabla.mats()));
        ensure(kept >= 6, || msg(&format!("only {kept} digits survive")))?;
    }
    Ok(50)
}

pub(super) fn intertwining(seed: u64) -> Check {
    let mut s = Sampler::new(seed ^ 0x06);
    for case in 0..25 {
        let (p, alpha, d, r, m) = cocycle_params(&mut s);
        let b = ring(p, 2, 12, alpha);
        let phi = lib(random_cocycle(s.int(0, i64::MAX) as u64, &b, d, r, m), "generator")?;
        let v = s.toric_gauge(&b, d, r, m);
        let lhs = lib(log_correspondence(&lib(cocycle_gauge(&phi, &v), "cocycle gauge")?), "log")?;
        let rhs = lib(gauge_transform(&lib(log_correspondence(&phi), "log")?, &v), "gauge")?;
        ensure(lhs == rhs, || format!("case {case} (p={p} alpha={alpha} d={d} r={r} m={m})"))?;
    }
    Ok(25)
}
