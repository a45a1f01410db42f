//! Truncated polynomial rings `GR(p^N, s)[x] / (m(x))` with a p-adic
//! floating-point precision ledger.
//!
//! A value is `p^val * u` where `u` has unit content (some coefficient is
//! prime to `p`) and is known modulo `p^(abs - val)`. Zero carries only its
//! absolute precision `abs`.

use std::fmt;
use std::sync::Arc;

use super::fq::{unramified_modulus, Fq, ResidueField};
use crate::error::{Error, Result};

/// Which ring a context models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z_p` itself (modulus `x`).
    Scalar,
    /// `Z_p[y] / Phi_{p^k}(1 + y)`, tensored with the unramified part.
    Cyclotomic { k: u32 },
    /// `Z_p[z] / xi^alpha` with `xi = Phi_{p^k}(1 + z)`.
    Bdr { k: u32, alpha: u32 },
}

/// Largest modulus `p^N` accepted; products of two residues must stay far
/// below `u128::MAX` while accumulating.
pub const MAX_MODULUS: u64 = 1 << 42;

pub struct RingCtx {
    p: u64,
    digits: u32,
    s: usize,
    len: usize,
    kind: RingKind,
    pows: Vec<u64>,
    g_low: Vec<u64>,
    g_neg: Vec<u64>,
    m_low: Vec<u64>,
    m_neg: Vec<u64>,
    residue: ResidueField,
}

impl fmt::Debug for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingCtx")
            .field("p", &self.p)
            .field("N", &self.digits)
            .field("s", &self.s)
            .field("kind", &self.kind)
            .finish()
    }
}

impl PartialEq for RingCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.digits == other.digits && self.s == other.s && self.kind == other.kind
    }
}

fn vp_u64(mut c: u64, p: u64) -> u32 {
    let mut v = 0;
    while c != 0 && c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `m` by the extended Euclidean algorithm.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Integer polynomial product modulo `m` (coefficients low to high).
pub(crate) fn poly_mul_mod(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x as u128 * y as u128;
        }
    }
    out.into_iter().map(|c| (c % m as u128) as u64).collect()
}

/// `Phi_{p^k}(1 + y)` modulo `m`, coefficients low to high (monic, degree `(p-1) p^(k-1)`).
pub fn shifted_cyclotomic(p: u64, k: u32, m: u64) -> Vec<u64> {
    let step = p.pow(k - 1) as usize;
    let deg = (p as usize - 1) * step;
    let mut out = vec![0u64; deg + 1];
    // (1+y)^(i*step) accumulated for i = 0..p-1
    let mut power = vec![1u64];
    let mut base = vec![1u64];
    for _ in 0..step {
        base = poly_mul_mod(&base, &[1, 1], m);
    }
    for _ in 0..p {
        for (o, c) in out.iter_mut().zip(power.iter()) {
            *o = (*o + c) % m;
        }
        power = poly_mul_mod(&power, &base, m);
    }
    out
}

impl RingCtx {
    fn build(p: u64, digits: u32, s: usize, kind: RingKind, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if p < 3 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::InvalidProfile(format!("p = {p} must be an odd prime")));
        }
        if s == 0 {
            return Err(Error::InvalidProfile("s must be at least 1".into()));
        }
        let mut pows = vec![1u64];
        for _ in 0..digits {
            let next = pows.last().unwrap().checked_mul(p).filter(|&v| v <= MAX_MODULUS);
            match next {
                Some(v) => pows.push(v),
                None => {
                    return Err(Error::InvalidProfile(format!(
                        "p^N = {p}^{digits} exceeds the supported modulus 2^42"
                    )))
                }
            }
        }
        let big = pows[digits as usize];
        let len = modulus.len() - 1;
        assert_eq!(modulus[len] % big, 1, "modulus must be monic");
        let m_low: Vec<u64> = modulus[..len].iter().map(|c| c % big).collect();
        let m_neg = m_low.iter().map(|c| (big - c) % big).collect();
        let g_low = unramified_modulus(p, s);
        let g_neg = g_low.iter().map(|c| (big - c % big) % big).collect();
        let residue = ResidueField::new(p, g_low.clone());
        Ok(Arc::new(RingCtx { p, digits, s, len, kind, pows, g_low, g_neg, m_low, m_neg, residue }))
    }

    /// `GR(p^N, s)` with trivial polynomial part.
    pub fn scalar(p: u64, digits: u32) -> Result<Arc<Self>> {
        Self::build(p, digits, 1, RingKind::Scalar, vec![0, 1])
    }

    pub fn cyclotomic(p: u64, digits: u32, s: usize, k: u32) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidProfile("k must be at least 1".into()));
        }
        let big = p.checked_pow(digits).unwrap_or(u64::MAX);
        let phi = shifted_cyclotomic(p, k, big.max(2));
        Self::build(p, digits, s, RingKind::Cyclotomic { k }, phi)
    }

    pub fn bdr(p: u64, digits: u32, s: usize, k: u32, alpha: u32) -> Result<Arc<Self>> {
        if k == 0 || alpha == 0 {
            return Err(Error::InvalidProfile("k and alpha must be at least 1".into()));
        }
        let big = p.checked_pow(digits).unwrap_or(u64::MAX).max(2);
        let xi = shifted_cyclotomic(p, k, big);
        let mut m = vec![1u64];
        for _ in 0..alpha {
            m = poly_mul_mod(&m, &xi, big);
        }
        Self::build(p, digits, s, RingKind::Bdr { k, alpha }, m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    /// Relative precision cap N.
    pub fn digits(&self) -> u32 {
        self.digits
    }
    pub fn unramified_degree(&self) -> usize {
        self.s
    }
    /// Degree of the modulus in x.
    pub fn poly_len(&self) -> usize {
        self.len
    }
    /// Number of Z_p coordinates of an element.
    pub fn rank(&self) -> usize {
        self.len * self.s
    }
    pub fn kind(&self) -> RingKind {
        self.kind
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.residue
    }
    /// `p^e` for `0 <= e <= N`.
    pub fn pow_p(&self, e: u32) -> u64 {
        self.pows[e as usize]
    }
    pub fn modulus_low(&self) -> &[u64] {
        &self.m_low
    }
    pub fn unramified_low(&self) -> &[u64] {
        &self.g_low
    }

    fn big(&self) -> u64 {
        self.pows[self.digits as usize]
    }

    /// Reduce a long coefficient array `acc[i * sw + j]` (x-degree `i < nx`,
    /// w-degree `j < sw`) into normal form modulo `p^N`.
    fn reduce_long(&self, acc: &mut [u128], nx: usize, sw: usize) -> Vec<u64> {
        let big = self.big() as u128;
        let s = self.s;
        if sw > s {
            for i in 0..nx {
                for j in (s..sw).rev() {
                    let c = acc[i * sw + j] % big;
                    acc[i * sw + j] = 0;
                    if c == 0 {
                        continue;
                    }
                    for t in 0..s {
                        acc[i * sw + j - s + t] += c * self.g_neg[t] as u128;
                    }
                }
            }
        }
        let l = self.len;
        for i in (l..nx).rev() {
            for j in 0..s {
                let c = acc[i * sw + j] % big;
                acc[i * sw + j] = 0;
                if c == 0 {
                    continue;
                }
                for t in 0..l {
                    acc[(i - l + t) * sw + j] += c * self.m_neg[t] as u128;
                }
            }
        }
        let mut out = vec![0u64; l * s];
        for i in 0..l.min(nx) {
            for j in 0..s {
                out[i * s + j] = (acc[i * sw + j] % big) as u64;
            }
        }
        out
    }

    /// Product of two normal forms modulo `p^N`.
    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let s = self.s;
        let l = self.len;
        let sw = 2 * s - 1;
        let nx = 2 * l - 1;
        let mut acc = vec![0u128; nx * sw];
        for i in 0..l {
            for j in 0..s {
                let x = a[i * s + j];
                if x == 0 {
                    continue;
                }
                let x = x as u128;
                for i2 in 0..l {
                    let row = (i + i2) * sw + j;
                    for j2 in 0..s {
                        acc[row + j2] += x * b[i2 * s + j2] as u128;
                    }
                }
            }
        }
        self.reduce_long(&mut acc, nx, sw)
    }

    /// Reduce an arbitrary-length x-polynomial with GR coefficients
    /// (`coeffs[i * s + j]`) into normal form.
    pub(crate) fn reduce_poly(&self, coeffs: &[u64]) -> Vec<u64> {
        let s = self.s;
        let nx = coeffs.len() / s;
        let nxp = nx.max(self.len);
        let mut acc = vec![0u128; nxp * s];
        for (a, &c) in acc.iter_mut().zip(coeffs) {
            *a = c as u128;
        }
        self.reduce_long(&mut acc, nxp, s)
    }
}

/// Element of a [`RingCtx`] with its precision ledger.
#[derive(Clone)]
pub struct Elem {
    ring: Arc<RingCtx>,
    val: i64,
    abs: i64,
    num: Vec<u64>,
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O(p^{})", self.abs)
        } else {
            write!(f, "p^{}*{:?}+O(p^{})", self.val, self.num, self.abs)
        }
    }
}

/// Equality at precision: the difference vanishes modulo the smaller absolute precision.
impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Elem {
    fn check(&self, other: &Elem) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring,
            "operands live in different rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    /// Build from a raw numerator known modulo `p^(abs - val)` and normalize.
    pub fn from_parts(ring: &Arc<RingCtx>, val: i64, abs: i64, mut num: Vec<u64>) -> Elem {
        let p = ring.p;
        let mut rel = abs - val;
        let mut abs = abs;
        if rel > ring.digits as i64 {
            rel = ring.digits as i64;
            abs = val + rel;
        }
        if rel <= 0 {
            return Elem::zero_prec(ring, abs);
        }
        let m = ring.pows[rel as usize];
        let mut content = rel as u32;
        for c in num.iter_mut() {
            *c %= m;
            if *c != 0 {
                content = content.min(vp_u64(*c, p));
            }
        }
        if content as i64 >= rel {
            return Elem::zero_prec(ring, abs);
        }
        if content > 0 {
            let d = ring.pows[content as usize];
            for c in num.iter_mut() {
                *c /= d;
            }
        }
        Elem { ring: ring.clone(), val: val + content as i64, abs, num }
    }

    /// Zero known modulo `p^abs`.
    pub fn zero_prec(ring: &Arc<RingCtx>, abs: i64) -> Elem {
        Elem { ring: ring.clone(), val: abs, abs, num: vec![0; ring.rank()] }
    }

    /// Zero at the default absolute precision `N`.
    pub fn zero(ring: &Arc<RingCtx>) -> Elem {
        Elem::zero_prec(ring, ring.digits as i64)
    }

    pub fn one(ring: &Arc<RingCtx>) -> Elem {
        Elem::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<RingCtx>, c: i64) -> Elem {
        Elem::from_rational(ring, c, 1)
    }

    /// `num / den` for integers with `den != 0`.
    pub fn from_rational(ring: &Arc<RingCtx>, num: i64, den: i64) -> Elem {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Elem::zero(ring);
        }
        let p = ring.p as i64;
        let (mut n, mut d, mut v) = (num as i128, den as i128, 0i64);
        while n % p as i128 == 0 {
            n /= p as i128;
            v += 1;
        }
        while d % p as i128 == 0 {
            d /= p as i128;
            v -= 1;
        }
        let big = ring.big();
        let n = n.rem_euclid(big as i128) as u64;
        let d = d.rem_euclid(big as i128) as u64;
        let u = (n as u128 * inv_mod(d, big).unwrap() as u128 % big as u128) as u64;
        let mut digits = vec![0; ring.rank()];
        digits[0] = u;
        Elem::from_parts(ring, v, v + ring.digits as i64, digits)
    }

    /// Integral element from a normal-form coordinate vector modulo `p^N`.
    pub fn from_coords(ring: &Arc<RingCtx>, coords: Vec<u64>) -> Elem {
        assert_eq!(coords.len(), ring.rank());
        Elem::from_parts(ring, 0, ring.digits as i64, coords)
    }

    /// Integral element from signed x-polynomial coefficients (w-part zero),
    /// reduced modulo the ring modulus.
    pub fn from_poly(ring: &Arc<RingCtx>, coeffs: &[i64]) -> Elem {
        let big = ring.big() as i128;
        let s = ring.s;
        let mut flat = vec![0u64; coeffs.len().max(1) * s];
        for (i, &c) in coeffs.iter().enumerate() {
            flat[i * s] = (c as i128).rem_euclid(big) as u64;
        }
        Elem::from_coords(ring, ring.reduce_poly(&flat))
    }

    /// The generator x of the polynomial part.
    pub fn generator(ring: &Arc<RingCtx>) -> Elem {
        Elem::from_poly(ring, &[0, 1])
    }

    /// The unramified generator w.
    pub fn unramified_generator(ring: &Arc<RingCtx>) -> Elem {
        let mut c = vec![0u64; ring.rank()];
        if ring.s > 1 {
            c[1] = 1;
        } else {
            // w = -g_0 when s = 1, i.e. w = 0
            return Elem::zero(ring);
        }
        Elem::from_coords(ring, c)
    }

    /// Constant element given by residue-field coordinates lifted digitwise.
    pub fn lift_residue(ring: &Arc<RingCtx>, a: &Fq) -> Elem {
        let mut c = vec![0u64; ring.rank()];
        c[..ring.s].copy_from_slice(a);
        Elem::from_coords(ring, c)
    }

    /// Teichmueller representative of a residue-field element.
    pub fn teichmuller(ring: &Arc<RingCtx>, a: &Fq) -> Elem {
        let q = ring.residue.order();
        let mut x = Elem::lift_residue(ring, a);
        for _ in 0..=ring.digits {
            x = x.pow(q);
        }
        x
    }

    pub fn ring(&self) -> &Arc<RingCtx> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.val >= self.abs
    }

    /// p-adic content valuation; `None` is infinity (zero at precision).
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.val) }
    }

    pub fn abs_prec(&self) -> i64 {
        self.abs
    }

    /// Remaining relative precision (digits of the unit part).
    pub fn rel_prec(&self) -> i64 {
        self.abs - self.val
    }

    /// Unit-content numerator coordinates and valuation: the value is `p^val * num`.
    pub fn digits(&self) -> (i64, &[u64]) {
        (self.val, &self.num)
    }

    /// Canonical representation truncated at absolute precision `abs`:
    /// `None` for zero, otherwise `(val, numerator mod p^(abs - val))`.
    pub fn canonical(&self, abs: i64) -> Option<(i64, Vec<u64>)> {
        let abs = abs.min(self.abs);
        if self.val >= abs {
            return None;
        }
        let m = self.ring.pows[(abs - self.val) as usize];
        Some((self.val, self.num.iter().map(|c| c % m).collect()))
    }

    /// Lower the absolute precision.
    pub fn truncate(&self, abs: i64) -> Elem {
        if abs >= self.abs {
            return self.clone();
        }
        Elem::from_parts(&self.ring, self.val, abs, self.num.clone())
    }

    pub fn add(&self, other: &Elem) -> Elem {
        self.check(other);
        let abs = self.abs.min(other.abs);
        let v0 = self.val.min(other.val);
        let rel = abs - v0;
        if rel <= 0 {
            return Elem::zero_prec(&self.ring, abs);
        }
        let rel = rel.min(self.ring.digits as i64);
        let m = self.ring.pows[rel as usize] as u128;
        let scale = |d: i64| -> u128 {
            if d >= rel { 0 } else { self.ring.pows[d as usize] as u128 }
        };
        let sa = scale(self.val - v0);
        let sb = scale(other.val - v0);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(&a, &b)| ((a as u128 * sa + b as u128 * sb) % m) as u64)
            .collect();
        Elem::from_parts(&self.ring, v0, abs, num)
    }

    pub fn neg(&self) -> Elem {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.ring.pows[(self.abs - self.val) as usize];
        let num = self.num.iter().map(|&c| (m - c) % m).collect();
        Elem { ring: self.ring.clone(), val: self.val, abs: self.abs, num }
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        self.check(other);
        let val = self.val + other.val;
        let rel = self.rel_prec().min(other.rel_prec());
        if rel <= 0 {
            return Elem::zero_prec(&self.ring, val + rel.max(0));
        }
        let num = self.ring.mul_raw(&self.num, &other.num);
        Elem::from_parts(&self.ring, val, val + rel, num)
    }

    /// Multiply by `p^e` (exact; shifts both valuation and precision).
    pub fn mul_pow_p(&self, e: i64) -> Elem {
        Elem { ring: self.ring.clone(), val: self.val + e, abs: self.abs + e, num: self.num.clone() }
    }

    pub fn mul_int(&self, c: i64) -> Elem {
        self.mul(&Elem::from_int(&self.ring, c))
    }

    pub fn div_int(&self, c: i64) -> Elem {
        self.mul(&Elem::from_rational(&self.ring, 1, c))
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut base = self.clone();
        let mut r = Elem::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Image of the constant coefficient in the residue field; requires an integral value.
    pub fn residue(&self) -> Result<Fq> {
        let f = &self.ring.residue;
        if self.is_zero() {
            return if self.abs >= 1 { Ok(f.zero()) } else { Err(Error::AmbiguousAtPrecision) };
        }
        if self.val < 0 {
            return Err(Error::DomainViolation("residue of a non-integral element".into()));
        }
        if self.val > 0 {
            return Ok(f.zero());
        }
        Ok(self.num[..self.ring.s].iter().map(|c| c % self.ring.p).collect())
    }

    /// For cyclotomic elements, the order of the unit part at the uniformizer
    /// `y = zeta - 1`: the lowest power of `y` with a coefficient prime to `p`.
    /// Zero for the other ring kinds; `None` for zero.
    pub fn unit_order(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        if !matches!(self.ring.kind, RingKind::Cyclotomic { .. }) {
            return Some(0);
        }
        let s = self.ring.s;
        let p = self.ring.p;
        self.num.chunks(s).position(|c| c.iter().any(|x| x % p != 0)).map(|i| i as i64)
    }

    /// True when the unit part is a unit of the integral lattice (constant term prime to p).
    pub fn is_lattice_unit(&self) -> bool {
        !self.is_zero() && self.num[..self.ring.s].iter().any(|c| c % self.ring.p != 0)
    }

    /// Multiplicative inverse. Lattice units use Newton iteration; other
    /// nonzero elements go through the multiplication matrix over `Z_p`.
    pub fn inv(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::NonUnit);
        }
        let unit = Elem { ring: self.ring.clone(), val: 0, abs: self.rel_prec(), num: self.num.clone() };
        let inv_unit = if unit.is_lattice_unit() { unit.newton_inverse()? } else { unit.matrix_inverse()? };
        Ok(inv_unit.mul_pow_p(-self.val))
    }

    fn newton_inverse(&self) -> Result<Elem> {
        let f = &self.ring.residue;
        let c0: Fq = self.num[..self.ring.s].iter().map(|c| c % self.ring.p).collect();
        let c0inv = f.inv(&c0).ok_or(Error::NonUnit)?;
        let mut x = Elem::lift_residue(&self.ring, &c0inv).truncate(self.abs);
        let one = Elem::one(&self.ring);
        for _ in 0..256 {
            let err = one.sub(&self.mul(&x));
            if err.is_zero() {
                return Ok(x);
            }
            x = x.add(&x.mul(&err));
        }
        Err(Error::PrecisionExhausted("Newton inversion did not converge".into()))
    }

    fn matrix_inverse(&self) -> Result<Elem> {
        let ring = &self.ring;
        let n = ring.rank();
        let scalar = RingCtx::scalar(ring.p, ring.digits)?;
        let abs = self.abs;
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![0u64; n];
            e[k] = 1;
            cols.push(ring.mul_raw(&self.num, &e));
        }
        let a = super::linalg::Matrix::from_fn(n, n, |i, j| {
            Elem::from_parts(&scalar, 0, abs, vec![cols[j][i]])
        });
        let mut rhs = vec![Elem::zero_prec(&scalar, abs); n];
        rhs[0] = Elem::one(&scalar).truncate(abs);
        let x = super::linalg::solve(&a, &rhs, i64::MAX).map_err(|_| Error::NonUnit)?;
        Ok(Elem::from_scalar_coords(ring, &x))
    }

    /// Assemble an element from its `Z_p` coordinates (scalar-ring elements).
    pub fn from_scalar_coords(ring: &Arc<RingCtx>, coords: &[Elem]) -> Elem {
        assert_eq!(coords.len(), ring.rank());
        let abs = coords.iter().map(|c| c.abs).min().unwrap();
        let v0 = coords.iter().map(|c| c.val).min().unwrap().min(abs);
        let rel = (abs - v0).min(ring.digits as i64);
        if rel <= 0 {
            return Elem::zero_prec(ring, abs);
        }
        let m = ring.pows[rel as usize] as u128;
        let num = coords
            .iter()
            .map(|c| {
                if c.is_zero() || c.val - v0 >= rel {
                    0
                } else {
                    ((c.num[0] as u128 * ring.pows[(c.val - v0) as usize] as u128) % m) as u64
                }
            })
            .collect();
        Elem::from_parts(ring, v0, v0 + rel, num)
    }

    /// `Z_p` coordinates of this element as scalar-ring elements.
    pub fn scalar_coords(&self, scalar: &Arc<RingCtx>) -> Vec<Elem> {
        self.num
            .iter()
            .map(|&c| {
                let mut d = vec![0u64; 1];
                d[0] = c;
                Elem::from_parts(scalar, self.val, self.abs, d)
            })
            .collect()
    }

    /// Reinterpret the numerator as an x-polynomial in another ring with the
    /// same `p`, `N`, `s`, reducing modulo that ring's modulus.
    pub fn map_poly(&self, target: &Arc<RingCtx>) -> Elem {
        assert_eq!((self.ring.p, self.ring.s), (target.p, target.s));
        if self.is_zero() {
            return Elem::zero_prec(target, self.abs);
        }
        let num = target.reduce_poly(&self.num);
        Elem::from_parts(target, self.val, self.abs, num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclo(p: u64, n: u32, k: u32) -> Arc<RingCtx> {
        RingCtx::cyclotomic(p, n, 1, k).unwrap()
    }

    #[test]
    fn rejects_p_two() {
        assert!(RingCtx::cyclotomic(2, 8, 1, 1).is_err());
    }

    #[test]
    fn cyclotomic_relation_holds() {
        for p in [3u64, 5, 7] {
            let r = cyclo(p, 6, 1);
            let zeta = Elem::one(&r).add(&Elem::generator(&r));
            assert_eq!(zeta.pow(p), Elem::one(&r));
            assert_ne!(zeta.pow(1), Elem::one(&r));
        }
    }

    #[test]
    fn content_valuation_examples() {
        let r = cyclo(5, 8, 1);
        assert_eq!(Elem::from_int(&r, 5).valuation(), Some(1));
        assert_eq!(Elem::zero(&r).valuation(), None);
        let y = Elem::generator(&r);
        let a = Elem::from_int(&r, 25).mul(&Elem::one(&r).add(&y)).add(&Elem::from_int(&r, 125));
        assert_eq!(a.valuation(), Some(2));
    }

    #[test]
    fn inverse_of_one_plus_y_by_extended_euclid() {
        // (1+y)^{-1} in Z/81[y]/(y^2 + 3y + 3): 1+y = zeta_3, inverse is zeta_3^2 = (1+y)^2
        // reduced: 1 + 2y + y^2 = 1 + 2y - 3y - 3 = -2 - y. Cross-check by Euclid over Q:
        // (1+y)(-2-y) = -2 - 3y - y^2 = -2 - 3y + 3y + 3 = 1.
        let r = cyclo(3, 4, 1);
        let a = Elem::from_poly(&r, &[1, 1]);
        let inv = a.inv().unwrap();
        assert_eq!(inv, Elem::from_poly(&r, &[-2, -1]));
    }

    #[test]
    fn inverse_of_non_lattice_unit() {
        // y = zeta_3 - 1 has norm 3, so its inverse carries a denominator
        let r = cyclo(3, 8, 1);
        let y = Elem::generator(&r);
        let inv = y.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.mul(&y), Elem::one(&r));
    }

    #[test]
    fn precision_ledger_on_division() {
        let r = cyclo(5, 8, 1);
        let a = Elem::from_int(&r, 3).div_int(25);
        assert_eq!(a.valuation(), Some(-2));
        assert_eq!(a.rel_prec(), 8);
        assert_eq!(a.abs_prec(), 6);
    }
}
