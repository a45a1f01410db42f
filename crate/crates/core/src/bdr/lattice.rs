//! The integral q-expansion lattice `Z_p[z] / (xi^a)`, `1 + z = q^(1/p^k)`,
//! `xi = Phi_{p^k}(1 + z)`.
//!
//! Arithmetic here is plain truncated polynomial arithmetic. It serves as an
//! independent model of the period ring: [`super::BdrRing::from_lattice`]
//! maps it into the t-expansion representation.

use std::sync::Arc;

use super::PrecisionProfile;
use crate::coeffs::{Elem, RingCtx, RingKind};
use crate::error::{Error, Result};

pub struct LatticeModel {
    profile: PrecisionProfile,
    rings: Vec<Arc<RingCtx>>,
}

impl LatticeModel {
    /// Rings `Z_p[z]/(xi^a)` for `a = 1..=alpha + 1`.
    pub fn new(profile: PrecisionProfile) -> Result<Self> {
        profile.validate()?;
        let PrecisionProfile { p, k, n, alpha, s, .. } = profile;
        let rings = (1..=alpha + 1).map(|a| RingCtx::bdr(p, n, s, k, a)).collect::<Result<Vec<_>>>()?;
        Ok(LatticeModel { profile, rings })
    }

    pub fn profile(&self) -> &PrecisionProfile {
        &self.profile
    }

    pub fn ring_at(&self, a: u32) -> &Arc<RingCtx> {
        &self.rings[a as usize - 1]
    }

    pub fn alpha_of(x: &Elem) -> u32 {
        match x.ring().kind() {
            RingKind::Bdr { alpha, .. } => alpha,
            _ => panic!("not a lattice element"),
        }
    }

    pub fn z(&self, a: u32) -> Elem {
        Elem::generator(self.ring_at(a))
    }

    pub fn xi(&self, a: u32) -> Elem {
        let mut coeffs: Vec<i64> = self.ring_at(1).modulus_low().iter().map(|&c| c as i64).collect();
        coeffs.push(1);
        Elem::from_poly(self.ring_at(a), &coeffs)
    }

    /// `(1 + z)^(p^(k - j))`.
    pub fn q_root(&self, j: u32, a: u32) -> Elem {
        let ring = self.ring_at(a);
        Elem::one(ring).add(&self.z(a)).pow(self.profile.p.pow(self.profile.k - j))
    }

    /// `t = p^k sum_j (-1)^(j+1) z^j / j`, summed until the tail provably vanishes.
    ///
    /// From `z^D = xi - p h(z)` one gets `v_p(z^j mod xi^a) >= floor(j/D) - a + 1`,
    /// so the `j`-th term has valuation at least
    /// `k + floor(j/D) - a + 1 - floor(log_p j)`.
    pub fn t_series(&self, a: u32) -> Result<Elem> {
        let PrecisionProfile { p, k, n, .. } = self.profile;
        let ring = self.ring_at(a);
        let d = self.profile.xi_degree() as f64;
        let target = (n + k) as f64;
        let lp = (p as f64).ln();
        // continuous lower bound, increasing for j > D / ln p
        let bound = |j: f64| k as f64 + j / d - a as f64 - j.ln() / lp;
        let z = Elem::generator(ring);
        let mut zj = z.clone();
        let mut sum = Elem::zero_prec(ring, n as i64 + k as i64);
        let mut j: i64 = 1;
        loop {
            if (j as f64) > d && bound(j as f64) >= target + 1e-9 {
                break;
            }
            if j > 1_000_000 {
                return Err(Error::PrecisionExhausted("t series did not terminate".into()));
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let term = zj.mul(&Elem::from_rational(ring, sign, j)).mul_pow_p(k as i64);
            sum = sum.add(&term);
            zj = zj.mul(&z);
            j += 1;
        }
        Ok(sum)
    }

    /// Euclidean division by the monic `xi`: `Z_p[z]/(xi^a) -> Z_p[z]/(xi^(a-1))`.
    pub fn divide_by_xi(&self, x: &Elem) -> Result<Elem> {
        let a = Self::alpha_of(x);
        if a < 2 {
            return Err(Error::NotDivisible("division by xi needs alpha >= 2".into()));
        }
        let target = self.ring_at(a - 1);
        if x.is_zero() {
            return Ok(Elem::zero_prec(target, x.abs_prec()));
        }
        let s = self.profile.s;
        let d = self.profile.xi_degree();
        let big = x.ring().pow_p(self.profile.n) as u128;
        let xi_low = self.ring_at(1).modulus_low();
        let (val, num) = x.digits();
        let mut r: Vec<u128> = num.iter().map(|&c| c as u128).collect();
        let len = r.len() / s;
        let mut q = vec![0u64; (len - d) * s];
        for i in (d..len).rev() {
            for j in 0..s {
                let c = r[i * s + j] % big;
                r[i * s + j] = 0;
                q[(i - d) * s + j] = c as u64;
                if c == 0 {
                    continue;
                }
                let negc = big - c;
                for (t, &m) in xi_low.iter().enumerate() {
                    let idx = (i - d + t) * s + j;
                    r[idx] = (r[idx] + negc * m as u128) % big;
                }
            }
        }
        let mr = x.ring().pow_p(x.rel_prec() as u32) as u128;
        if r.iter().any(|&c| c % mr != 0) {
            return Err(Error::NotDivisible("theta does not vanish".into()));
        }
        Ok(Elem::from_parts(target, val, x.abs_prec(), q))
    }

    /// Substitution `z -> (1 + z')^p - 1` into the level-`(k+1)` lattice.
    pub fn level_raise(&self, x: &Elem, target: &LatticeModel) -> Result<Elem> {
        let (a, b) = (&self.profile, &target.profile);
        if a.p != b.p || a.n != b.n || a.s != b.s || b.k != a.k + 1 {
            return Err(Error::InvalidProfile("level_raise needs the same p, N, s and k + 1".into()));
        }
        let ring = target.ring_at(Self::alpha_of(x));
        if x.is_zero() {
            return Ok(Elem::zero_prec(ring, x.abs_prec()));
        }
        let s = a.s;
        let zp = Elem::one(ring).add(&Elem::generator(ring)).pow(a.p).sub(&Elem::one(ring));
        let (val, num) = x.digits();
        let mut acc = Elem::zero(ring);
        for i in (0..num.len() / s).rev() {
            let mut c = vec![0u64; ring.rank()];
            c[..s].copy_from_slice(&num[i * s..(i + 1) * s]);
            acc = acc.mul(&zp).add(&Elem::from_coords(ring, c));
        }
        Ok(acc.truncate(x.rel_prec()).mul_pow_p(val))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u64, k: u32, n: u32, alpha: u32) -> LatticeModel {
        LatticeModel::new(PrecisionProfile::new(p, k, n, alpha, 1).unwrap()).unwrap()
    }

    #[test]
    fn xi_power_vanishes() {
        let m = model(5, 2, 12, 3);
        assert!(m.xi(3).pow(3).is_zero());
        assert!(!m.xi(3).pow(2).is_zero());
    }

    #[test]
    fn t_series_matches_finite_mu_series() {
        // mu = q - 1 = xi * z * prod_{j<k} Phi_{p^j}(1+z) is nilpotent, so
        // log(1 + mu) is a finite sum in the lattice
        for (p, k, alpha) in [(3u64, 1u32, 2u32), (3, 2, 3), (5, 2, 3), (5, 1, 2)] {
            let m = model(p, k, 10, alpha);
            let ring = m.ring_at(alpha);
            let mu = m.q_root(0, alpha).sub(&Elem::one(ring));
            let mut oracle = Elem::zero(ring);
            let mut pw = mu.clone();
            for n in 1..alpha as i64 {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                oracle = oracle.add(&pw.mul(&Elem::from_rational(ring, sign, n)));
                pw = pw.mul(&mu);
            }
            assert_eq!(m.t_series(alpha).unwrap(), oracle, "p={p} k={k} alpha={alpha}");
        }
    }

    #[test]
    fn euclidean_division() {
        let m = model(3, 1, 8, 3);
        let xi = m.xi(3);
        assert_eq!(m.divide_by_xi(&xi.mul(&xi)).unwrap(), m.xi(2));
        assert!(matches!(m.divide_by_xi(&Elem::one(m.ring_at(3))), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn level_raise_tower() {
        let lo = model(3, 1, 8, 2);
        let hi = model(3, 2, 8, 2);
        let raised = lo.level_raise(&lo.q_root(1, 2), &hi).unwrap();
        assert_eq!(raised, hi.q_root(1, 2));
        assert_eq!(raised, hi.q_root(2, 2).pow(3));
        let xi = lo.level_raise(&lo.xi(2), &hi).unwrap();
        assert!(xi.map_poly(hi.ring_at(1)).is_zero());
    }
}
