//! Checks 1 to 9 at `N` and `N + 4` on the same inputs: the `N + 4` results,
//! aligned down, must agree with the `N`-digit results.

use std::sync::Arc;

use super::instances::{block_input, block_types, power_input, sylvester as sylvester_input};
use super::ring_checks::identity_suite;
use super::{ensure, lib, ring, Align, Check};
use crate::bdr::{BdrElement, BdrRing};
use crate::normal_forms::{block_diagonalize, mth_root_seed, twisted_mth_root, twisted_sylvester};
use crate::random::{random_cocycle, Sampler};
use crate::rh::{cocycle_gauge, log_correspondence};
use crate::toric::GammaVector;

const EXTRA: u32 = 4;

fn pair(p: u64, k: u32, n: u32, alpha: u32) -> (Arc<BdrRing>, Arc<BdrRing>) {
    (ring(p, k, n, alpha), ring(p, k, n + EXTRA, alpha))
}

fn agree<T: Align + PartialEq>(lo: &T, hi: &T, b: &Arc<BdrRing>, what: &str) -> std::result::Result<(), String> {
    ensure(*lo == hi.align(b), || format!("{what}: N and N+{EXTRA} results disagree"))
}

fn constants(b: &BdrRing) -> crate::error::Result<Vec<BdrElement>> {
    let k = b.profile().k;
    let mut out = vec![b.t(), b.xi(), b.unit_t_over_xi(), b.q()];
    for n in 1..=k {
        out.push(b.zeta(n)?);
        out.push(b.q_root(n)?);
        out.push(b.exp_small(&b.t().mul_pow_p(-(n as i64)))?);
    }
    Ok(out)
}

fn beta() -> GammaVector {
    GammaVector::basis(1, 0, 1)
}

pub(super) fn metamorphism(seed: u64) -> Check {
    let mut cases = 0;
    let mut s = Sampler::new(seed ^ 0x0c);

    for (p, k, n, alpha) in [(3, 2, 12, 2), (5, 2, 12, 3), (3, 1, 8, 2), (7, 1, 8, 3)] {
        let (lo, hi) = pair(p, k, n, alpha);
        let (cl, ch) = (lib(constants(&lo), "constants")?, lib(constants(&hi), "constants")?);
        for (i, (a, b)) in cl.iter().zip(&ch).enumerate() {
            agree(a, b, &lo, &format!("constant {i} at profile {}", lo.profile()))?;
        }
        let (il, ih) = (identity_suite(&lo), identity_suite(&hi));
        ensure(il == ih, || format!("identity verdicts differ at profile {}", lo.profile()))?;
        cases += 1;
    }

    let (lo, hi) = pair(3, 2, 10, 2);
    for case in 0..20 {
        let level = s.int(0, 2) as u32;
        let x = s.toric(&hi, 2, level, 3, 9);
        let g = GammaVector(vec![s.int(-6, 6), s.int(-6, 6)]);
        let xl = x.align(&lo);
        let what = format!("toric case {case}");
        agree(&lib(xl.natural_act(&g), "action")?, &lib(x.natural_act(&g), "action")?, &lo, &what)?;
        let np = s.int(0, level as i64) as u32;
        agree(&lib(xl.normalized_trace(np), "trace")?, &lib(x.normalized_trace(np), "trace")?, &lo, &what)?;
        cases += 1;
    }

    for case in 0..10 {
        let p = if s.coin() { 3 } else { 5 };
        let (alpha, d, r, m) = (s.int(1, 3) as u32, s.int(1, 2) as usize, s.int(1, 3) as usize, s.int(0, 2) as u32);
        let (lo, hi) = pair(p, 2, 12, alpha);
        let phi = lib(random_cocycle(s.int(0, i64::MAX) as u64, &hi, d, r, m), "generator")?;
        let v = s.toric_gauge(&hi, d, r, m);
        let what = format!("cocycle case {case}");
        let nl = lib(log_correspondence(&phi.align(&lo)), "log")?;
        agree(&nl, &lib(log_correspondence(&phi), "log")?, &lo, &what)?;
        let gl = lib(cocycle_gauge(&phi.align(&lo), &v.align(&lo)), "gauge")?;
        agree(&gl, &lib(cocycle_gauge(&phi, &v), "gauge")?, &lo, &what)?;
        cases += 1;
    }

    for case in 0..15 {
        let p = [3, 5, 7][s.int(0, 2) as usize];
        let alpha = s.int(1, 3) as u32;
        let (lo, hi) = pair(p, 1, 10, alpha);
        let what = format!("normal form case {case} (p={p} alpha={alpha})");
        let (ri, rj) = (s.int(1, 3) as usize, s.int(1, 3) as usize);
        let (pi, pj, x) = sylvester_input(&mut s, &hi, ri, rj);
        let yh = lib(twisted_sylvester(&pi, &pj, &beta(), &x), "sylvester")?;
        let yl = lib(twisted_sylvester(&pi.align(&lo), &pj.align(&lo), &beta(), &x.align(&lo)), "sylvester")?;
        agree(&yl, &yh, &lo, &what)?;

        if alpha > 1 {
            let types = block_types(&mut s, p, 3);
            let h = block_input(&mut s, &hi, &types);
            let (mh, dh) = lib(block_diagonalize(&h, &types, &beta()), "block diagonalize")?;
            let (ml, dl) = lib(block_diagonalize(&h.align(&lo), &types, &beta()), "block diagonalize")?;
            agree(&ml, &mh, &lo, &what)?;
            agree(&dl, &dh, &lo, &what)?;
        }

        let m = if s.coin() { 2 } else { p as i64 };
        let r = s.int(1, 3) as usize;
        let phi = power_input(&mut s, &hi, r, m);
        let rh = lib(twisted_mth_root(&phi, &beta(), m, &lib(mth_root_seed(&phi, m), "seed")?), "root")?;
        let pl = phi.align(&lo);
        let rl = lib(twisted_mth_root(&pl, &beta(), m, &lib(mth_root_seed(&pl, m), "seed")?), "root")?;
        agree(&rl, &rh, &lo, &what)?;
        cases += 1;
    }
    Ok(cases)
}
