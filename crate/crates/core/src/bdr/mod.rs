//! The level-k model of the truncated de Rham period ring `B_alpha`.
//!
//! `Z_p[z]/(xi^alpha)` with `1 + z = q^(1/p^k)` becomes, after inverting `p`,
//! the ring `K_k[t]/(t^alpha)` with `K_k = Q_p(zeta_{p^k})` (tensored with the
//! degree-s unramified extension). The identification sends
//! `1 + z -> zeta_{p^k} exp(t / p^k)`; it maps `xi` to `t` times a unit and
//! `log q` to `t`. Elements are stored in the t-expansion, where roots of unity
//! are integral constants and division by `t` is a digit shift.

mod element;
pub mod lattice;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use element::BdrElement;

use crate::coeffs::{CycloElement, Elem, RingCtx};
use crate::error::{Error, Result};

/// `(p, k, N, alpha, s, n_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionProfile {
    pub p: u64,
    pub k: u32,
    pub n: u32,
    pub alpha: u32,
    pub s: usize,
    pub n_max: u32,
}

impl Default for PrecisionProfile {
    fn default() -> Self {
        PrecisionProfile { p: 5, k: 2, n: 12, alpha: 3, s: 1, n_max: 2 }
    }
}

impl fmt::Display for PrecisionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.p, self.k, self.n, self.alpha, self.s)
    }
}

impl PrecisionProfile {
    /// Profile with `n_max = k`.
    pub fn new(p: u64, k: u32, n: u32, alpha: u32, s: usize) -> Result<Self> {
        let prof = PrecisionProfile { p, k, n, alpha, s, n_max: k };
        prof.validate()?;
        Ok(prof)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || (2..self.p).take_while(|d| d * d <= self.p).any(|d| self.p.is_multiple_of(d)) {
            return Err(Error::InvalidProfile(format!("p = {} must be an odd prime", self.p)));
        }
        if self.n < 4 {
            return Err(Error::InvalidProfile(format!("N = {} is below 4", self.n)));
        }
        if self.k < 1 || self.alpha < 1 || self.s < 1 {
            return Err(Error::InvalidProfile("k, alpha and s must be at least 1".into()));
        }
        if self.n_max > self.k {
            return Err(Error::InvalidProfile(format!("n_max = {} exceeds k = {}", self.n_max, self.k)));
        }
        match self.p.checked_pow(self.n) {
            Some(m) if m <= crate::coeffs::ring::MAX_MODULUS => Ok(()),
            _ => Err(Error::InvalidProfile(format!("p^N = {}^{} is too large", self.p, self.n))),
        }
    }

    pub fn with_digits(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn with_alpha(mut self, alpha: u32) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    /// Degree of `xi`, i.e. `phi(p^k)`.
    pub fn xi_degree(&self) -> usize {
        ((self.p - 1) * self.p.pow(self.k - 1)) as usize
    }
}

struct Constants {
    z: BdrElement,
    q_roots: Vec<BdrElement>,
    zetas: Vec<BdrElement>,
    xi_ext: BdrElement,
    unit_t: BdrElement,
}

/// Arithmetic context of one precision profile.
pub struct BdrRing {
    profile: PrecisionProfile,
    cyclo: Arc<RingCtx>,
    consts: OnceLock<std::result::Result<Constants, Error>>,
}

impl fmt::Debug for BdrRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BdrRing({})", self.profile)
    }
}

impl BdrRing {
    pub fn new(profile: PrecisionProfile) -> Result<Arc<Self>> {
        profile.validate()?;
        let cyclo = RingCtx::cyclotomic(profile.p, profile.n, profile.s, profile.k)?;
        let ring = Arc::new(BdrRing { profile, cyclo, consts: OnceLock::new() });
        ring.consts()?;
        Ok(ring)
    }

    pub fn profile(&self) -> &PrecisionProfile {
        &self.profile
    }

    pub fn p(&self) -> u64 {
        self.profile.p
    }

    pub fn alpha(&self) -> u32 {
        self.profile.alpha
    }

    /// The cyclotomic coefficient ring (target of theta).
    pub fn cyclo(&self) -> &Arc<RingCtx> {
        &self.cyclo
    }

    pub fn zero(&self) -> BdrElement {
        BdrElement::zero(&self.cyclo, self.alpha())
    }

    pub fn one(&self) -> BdrElement {
        BdrElement::one(&self.cyclo, self.alpha())
    }

    pub fn from_int(&self, c: i64) -> BdrElement {
        BdrElement::from_int(&self.cyclo, self.alpha(), c)
    }

    pub fn from_rational(&self, num: i64, den: i64) -> BdrElement {
        BdrElement::from_rational(&self.cyclo, self.alpha(), num, den)
    }

    /// A cyclotomic element viewed in `B_a`.
    pub fn constant(&self, c: &CycloElement, a: u32) -> BdrElement {
        BdrElement::constant(c, a)
    }

    pub fn theta(&self, a: &BdrElement) -> CycloElement {
        a.theta()
    }

    pub fn inv_if_unit(&self, a: &BdrElement) -> Result<BdrElement> {
        a.inv()
    }

    fn consts(&self) -> Result<&Constants> {
        self.consts.get_or_init(|| self.build_constants()).as_ref().map_err(|e| e.clone())
    }

    fn build_constants(&self) -> std::result::Result<Constants, Error> {
        let PrecisionProfile { p, k, alpha, .. } = self.profile;
        let ext = alpha + 1;
        let r = &self.cyclo;
        // 1 + z = zeta_{p^k} exp(t / p^k): digit j is zeta_{p^k} / (p^{kj} j!)
        let zeta_k = Elem::one(r).add(&Elem::generator(r));
        let mut digits = Vec::with_capacity(ext as usize);
        let mut fact = 1i64;
        for j in 0..ext as i64 {
            if j > 0 {
                fact *= j;
            }
            digits.push(zeta_k.mul(&Elem::from_rational(r, 1, fact)).mul_pow_p(-(k as i64) * j));
        }
        let one_plus_z = BdrElement::from_digits(digits);
        let z = one_plus_z.sub(&BdrElement::one(r, ext));
        let mut q_roots_ext = vec![one_plus_z.clone(); k as usize + 1];
        let mut cur = one_plus_z;
        for j in (0..=k as usize).rev() {
            q_roots_ext[j] = cur.clone();
            cur = cur.pow(p);
        }
        // xi = Phi_{p^k}(1 + z) = Phi_p(q^(1/p))
        let mut xi_ext = BdrElement::zero(r, ext);
        let mut pw = BdrElement::one(r, ext);
        for _ in 0..p {
            xi_ext = xi_ext.add(&pw);
            pw = pw.mul(&q_roots_ext[1]);
        }
        let w = xi_ext.div_t_pow(1)?;
        let unit_t = w.inv()?;
        let q_roots: Vec<BdrElement> = q_roots_ext.iter().map(|x| x.project(alpha)).collect();
        let t = BdrElement::t(r, alpha);
        let zetas = (0..=k)
            .map(|n| q_roots[n as usize].mul(&exp_nilpotent(&t.mul_pow_p(-(n as i64)).neg())))
            .collect();
        Ok(Constants { z, q_roots, zetas, xi_ext, unit_t })
    }

    /// `z = q^(1/p^k) - 1` in `B_a`, `a <= alpha + 1`.
    pub fn z_at(&self, a: u32) -> BdrElement {
        self.consts().expect("constants built at construction").z.project(a)
    }

    pub fn z(&self) -> BdrElement {
        self.z_at(self.alpha())
    }

    /// `q^(1/p^j) = (1 + z)^(p^(k - j))` for `j <= k`.
    pub fn q_root(&self, j: u32) -> Result<BdrElement> {
        if j > self.profile.k {
            return Err(Error::LevelExceedsK { level: j, k: self.profile.k });
        }
        Ok(self.consts()?.q_roots[j as usize].clone())
    }

    pub fn q(&self) -> BdrElement {
        self.consts().expect("constants built at construction").q_roots[0].clone()
    }

    pub fn mu(&self) -> BdrElement {
        self.q().sub(&self.one())
    }

    pub fn xi(&self) -> BdrElement {
        self.xi_at(self.alpha())
    }

    /// `xi` in `B_a`, `a <= alpha + 1`.
    pub fn xi_at(&self, a: u32) -> BdrElement {
        self.consts().expect("constants built at construction").xi_ext.project(a)
    }

    pub fn t(&self) -> BdrElement {
        BdrElement::t(&self.cyclo, self.alpha())
    }

    pub fn t_at(&self, a: u32) -> BdrElement {
        BdrElement::t(&self.cyclo, a)
    }

    /// The primitive `p^n`-th root of unity `q^(1/p^n) exp(-t/p^n)`.
    pub fn zeta(&self, n: u32) -> Result<BdrElement> {
        if n > self.profile.k {
            return Err(Error::LevelExceedsK { level: n, k: self.profile.k });
        }
        Ok(self.consts()?.zetas[n as usize].clone())
    }

    /// `t / xi`, a unit of `B_alpha`.
    pub fn unit_t_over_xi(&self) -> BdrElement {
        self.consts().expect("constants built at construction").unit_t.clone()
    }

    /// Exact division by `xi`: `B_a -> B_(a-1)`.
    pub fn divide_by_xi(&self, x: &BdrElement) -> Result<BdrElement> {
        let a = x.alpha();
        if a < 2 {
            return Err(Error::NotDivisible("division by xi needs alpha >= 2".into()));
        }
        let q = x.div_t_pow(1)?;
        Ok(q.mul(&self.unit_t_over_xi().project(a - 1)))
    }

    /// `b` with `t^j b = x`: `B_a -> B_(a-j)`.
    pub fn divide_by_t(&self, x: &BdrElement, j: u32) -> Result<BdrElement> {
        x.div_t_pow(j)
    }

    /// `exp(x)` for `theta(x)` divisible by `p^2`.
    pub fn exp_small(&self, x: &BdrElement) -> Result<BdrElement> {
        self.exp_small_with(x, 2)
    }

    /// `exp(x)` for `theta(x)` divisible by `p^c`, `c >= 2`.
    pub fn exp_small_with(&self, x: &BdrElement, c: u32) -> Result<BdrElement> {
        let x0 = x.theta();
        check_domain(&x0, c.max(2))?;
        let head = exp_cyclo(&x0, self.profile.p);
        let mut x1 = x.clone();
        let digits: Vec<Elem> = x1.digits().to_vec();
        x1 = BdrElement::from_digits(
            digits.iter().enumerate().map(|(i, d)| if i == 0 { Elem::zero(d.ring()) } else { d.clone() }).collect(),
        );
        Ok(exp_nilpotent(&x1).scale(&head))
    }

    /// `log(u)` for `theta(u - 1)` divisible by `p^2`.
    pub fn log_near_one(&self, u: &BdrElement) -> Result<BdrElement> {
        self.log_near_one_with(u, 2)
    }

    pub fn log_near_one_with(&self, u: &BdrElement, c: u32) -> Result<BdrElement> {
        let r = u.ring();
        let u0 = u.theta();
        let x0 = u0.sub(&Elem::one(r));
        check_domain(&x0, c.max(2))?;
        let head = log1p_cyclo(&x0, self.profile.p);
        // u = u0 (1 + y) with theta(y) = 0
        let y = u.scale(&u0.inv()?).sub(&BdrElement::one(r, u.alpha()));
        let mut tail = BdrElement::zero(r, u.alpha());
        let mut pw = y.clone();
        for j in 1..u.alpha() as i64 {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            tail = tail.add(&pw.scale(&Elem::from_rational(r, sign, j)));
            pw = pw.mul(&y);
        }
        Ok(tail.add(&BdrElement::constant(&head, u.alpha())))
    }

    /// The tower inclusion into the level-`(k+1)` profile: `t -> t`, `zeta_{p^k} -> zeta_{p^(k+1)}^p`.
    pub fn level_raise(&self, x: &BdrElement, target: &BdrRing) -> Result<BdrElement> {
        let (a, b) = (&self.profile, &target.profile);
        if a.p != b.p || a.n != b.n || a.s != b.s || b.k != a.k + 1 {
            return Err(Error::InvalidProfile("level_raise needs the same p, N, s and k + 1".into()));
        }
        let tr = target.cyclo();
        let image = Elem::one(tr).add(&Elem::generator(tr)).pow(a.p).sub(&Elem::one(tr));
        Ok(x.map_digits(|d| substitute(d, &image)))
    }

    /// Image of a lattice element `f(z)` (from [`lattice::LatticeModel`]) in the t-expansion.
    pub fn from_lattice(&self, e: &Elem) -> BdrElement {
        let a = lattice::LatticeModel::alpha_of(e);
        let z = self.z_at(a);
        let s = self.profile.s;
        let r = &self.cyclo;
        if e.is_zero() {
            return BdrElement::zero(r, a).truncate(e.abs_prec());
        }
        let (val, num) = e.digits();
        let mut acc = BdrElement::zero(r, a);
        for i in (0..num.len() / s).rev() {
            let mut c = vec![0u64; r.rank()];
            c[..s].copy_from_slice(&num[i * s..(i + 1) * s]);
            let c = Elem::from_parts(r, 0, e.rel_prec(), c);
            acc = acc.mul(&z).add(&BdrElement::constant(&c, a));
        }
        acc.mul_pow_p(val)
    }
}

/// Evaluate the x-polynomial numerator of `d` at `image` (same p, N, s).
fn substitute(d: &Elem, image: &Elem) -> Elem {
    let tr = image.ring();
    if d.is_zero() {
        return Elem::zero_prec(tr, d.abs_prec());
    }
    let s = tr.unramified_degree();
    let (val, num) = d.digits();
    let mut acc = Elem::zero(tr);
    for i in (0..num.len() / s).rev() {
        let mut c = vec![0u64; tr.rank()];
        c[..s].copy_from_slice(&num[i * s..(i + 1) * s]);
        acc = acc.mul(image).add(&Elem::from_coords(tr, c));
    }
    acc.truncate(d.rel_prec()).mul_pow_p(val)
}

fn check_domain(x0: &Elem, c: u32) -> Result<()> {
    match x0.valuation() {
        Some(v) if v < c as i64 => {
            Err(Error::DomainViolation(format!("theta-part has valuation {v}, need at least {c}")))
        }
        _ => Ok(()),
    }
}

/// `exp(w t)` for a cyclotomic scalar `w`: digit `j` is `w^j / j!`.
pub fn exp_nilpotent_scaled(ring: &BdrRing, w: &Elem) -> BdrElement {
    let mut digits = Vec::with_capacity(ring.alpha() as usize);
    let mut term = Elem::one(ring.cyclo());
    for j in 0..ring.alpha() as i64 {
        if j > 0 {
            term = term.mul(w).div_int(j);
        }
        digits.push(term.clone());
    }
    BdrElement::from_digits(digits)
}

/// `exp` of an element with `theta(x) = 0`: the finite sum up to `x^(alpha-1)`.
pub(crate) fn exp_nilpotent(x: &BdrElement) -> BdrElement {
    let mut term = BdrElement::one(x.ring(), x.alpha());
    let mut sum = term.clone();
    for j in 1..x.alpha() as i64 {
        term = term.mul(x).div_int(j);
        sum = sum.add(&term);
    }
    sum
}

/// `exp(x)` on the cyclotomic ring for `v_p(x) >= 2`; stops once
/// `n (v - 1/(p-1))` reaches the absolute precision of `x`.
fn exp_cyclo(x: &Elem, p: u64) -> Elem {
    let r = x.ring();
    let Some(v) = x.valuation() else {
        return Elem::one(r);
    };
    let p = p as i64;
    let target = x.abs_prec().max(1);
    let mut term = Elem::one(r);
    let mut sum = term.clone();
    let mut n = 1i64;
    while n * (v * (p - 1) - 1) < target * (p - 1) {
        term = term.mul(x).div_int(n);
        sum = sum.add(&term);
        n += 1;
    }
    sum.truncate(target)
}

/// `log(1 + x)` on the cyclotomic ring for `v_p(x) >= 2`; the term bound
/// `n v - floor(log_p n)` is strictly increasing.
fn log1p_cyclo(x: &Elem, p: u64) -> Elem {
    let r = x.ring();
    let Some(v) = x.valuation() else {
        return Elem::zero_prec(r, x.abs_prec());
    };
    let p = p as i64;
    let target = x.abs_prec().max(1);
    let mut pw = x.clone();
    let mut sum = Elem::zero_prec(r, target);
    let mut n = 1i64;
    while n * v - ilog(n, p) < target {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        sum = sum.add(&pw.mul(&Elem::from_rational(r, sign, n)));
        pw = pw.mul(x);
        n += 1;
    }
    sum
}

/// `floor(log_p n)` for `n >= 1`.
fn ilog(mut n: i64, p: i64) -> i64 {
    let mut e = 0;
    while n >= p {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::lattice::LatticeModel;
    use super::*;

    fn ring(p: u64, k: u32, n: u32, alpha: u32) -> Arc<BdrRing> {
        BdrRing::new(PrecisionProfile::new(p, k, n, alpha, 1).unwrap()).unwrap()
    }

    #[test]
    fn xi_power_vanishes() {
        let b = ring(5, 2, 12, 3);
        assert!(b.xi().pow(3).is_zero());
        assert!(!b.xi().pow(2).is_zero());
        assert!(b.theta(&b.xi()).is_zero());
        assert!(b.t().pow(3).is_zero());
        assert!(!b.t().pow(2).is_zero());
    }

    #[test]
    fn theta_of_generator() {
        let b = ring(3, 1, 8, 2);
        let y = b.theta(&b.q_root(1).unwrap());
        assert_eq!(y, Elem::from_poly(b.cyclo(), &[1, 1]));
    }

    #[test]
    fn inverse_of_two() {
        let b = ring(5, 2, 12, 3);
        let inv = b.inv_if_unit(&b.from_int(2)).unwrap();
        let expect = crate::coeffs::ring::inv_mod(2, 5u64.pow(12)).unwrap();
        assert_eq!(inv, b.from_int(expect as i64));
        assert_eq!(b.inv_if_unit(&b.xi()), Err(Error::NonUnit));
        assert_eq!(b.q().mul(&b.q().inv().unwrap()), b.one());
    }

    #[test]
    fn roots_of_unity_are_integral_and_primitive() {
        for (p, k) in [(5u64, 2u32), (3, 2)] {
            let b = ring(p, k, 12, 3);
            for n in 1..=k {
                let z = b.zeta(n).unwrap();
                let expect = Elem::one(b.cyclo()).add(&Elem::generator(b.cyclo())).pow(p.pow(k - n));
                assert_eq!(z, b.constant(&expect, 3));
                assert_eq!(z.pow(p.pow(n)), b.one());
                assert_ne!(z.pow(p.pow(n - 1)), b.one());
            }
        }
    }

    #[test]
    fn t_agrees_with_lattice_series() {
        for (p, k, alpha) in [(3u64, 1u32, 2u32), (3, 2, 3), (5, 2, 3), (5, 1, 2)] {
            let prof = PrecisionProfile::new(p, k, 10, alpha, 1).unwrap();
            let b = BdrRing::new(prof).unwrap();
            let m = LatticeModel::new(prof).unwrap();
            let t = b.from_lattice(&m.t_series(alpha).unwrap());
            assert_eq!(t, b.t(), "p={p} k={k} alpha={alpha}");
            assert_eq!(b.from_lattice(&m.xi(alpha)), b.xi());
        }
    }

    #[test]
    fn divisions() {
        let b = ring(3, 1, 8, 3);
        let t = b.t();
        assert_eq!(b.divide_by_t(&t.mul(&t), 1).unwrap(), b.t_at(2));
        let mu = b.mu();
        assert_eq!(b.divide_by_t(&t.mul(&mu), 1).unwrap(), mu.project(2));
        assert!(matches!(b.divide_by_xi(&b.one()), Err(Error::NotDivisible(_))));
        let xi = b.xi();
        assert_eq!(b.divide_by_xi(&xi.mul(&xi)).unwrap(), b.xi_at(2));
        assert_eq!(b.xi().mul(&b.unit_t_over_xi()), b.t());
    }

    #[test]
    fn exp_log_examples() {
        let b = ring(5, 2, 12, 3);
        assert_eq!(b.exp_small(&b.zero()).unwrap(), b.one());
        assert_eq!(b.log_near_one(&b.q()).unwrap(), b.t());
        assert_eq!(b.exp_small(&b.t()).unwrap(), b.q());
        let x = b.xi().mul_int(25);
        assert_eq!(b.log_near_one(&b.exp_small(&x).unwrap()).unwrap(), x);
        assert!(matches!(b.exp_small(&b.from_int(5)), Err(Error::DomainViolation(_))));
        let x = b.from_int(25).add(&b.xi());
        assert_eq!(b.log_near_one(&b.exp_small(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn root_of_unity_identity() {
        let b = ring(5, 2, 12, 3);
        for n in 0..=2 {
            let rhs = b.zeta(n).unwrap().mul(&b.exp_small(&b.t().mul_pow_p(-(n as i64))).unwrap());
            assert_eq!(b.q_root(n).unwrap(), rhs);
        }
    }

    #[test]
    fn level_raise_tower() {
        let lo = ring(3, 1, 8, 2);
        let hi = ring(3, 2, 8, 2);
        let raised = lo.level_raise(&lo.q_root(1).unwrap(), &hi).unwrap();
        assert_eq!(raised, hi.q_root(1).unwrap());
        assert_eq!(raised, hi.q_root(2).unwrap().pow(3));
        assert!(lo.level_raise(&lo.xi(), &hi).unwrap().theta().is_zero());
        assert!(lo.level_raise(&lo.zero(), &hi).unwrap().is_zero());
    }
}
