//! Elements of `K_k[t] / (t^a)`, stored as `a` cyclotomic digits.

use std::fmt;
use std::sync::Arc;

use crate::coeffs::{CycloElement, Elem, RingCtx, RingElem};
use crate::error::{Error, Result};

/// `sum_i d_i t^i` with each digit `d_i` a cyclotomic element carrying its own precision.
#[derive(Clone)]
pub struct BdrElement {
    digits: Vec<Elem>,
}

impl fmt::Debug for BdrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.digits).finish()
    }
}

impl PartialEq for BdrElement {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl BdrElement {
    pub fn from_digits(digits: Vec<Elem>) -> BdrElement {
        assert!(!digits.is_empty(), "truncation level must be at least 1");
        BdrElement { digits }
    }

    pub fn zero(ring: &Arc<RingCtx>, alpha: u32) -> BdrElement {
        BdrElement { digits: vec![Elem::zero(ring); alpha as usize] }
    }

    pub fn one(ring: &Arc<RingCtx>, alpha: u32) -> BdrElement {
        BdrElement::constant(&Elem::one(ring), alpha)
    }

    pub fn from_int(ring: &Arc<RingCtx>, alpha: u32, c: i64) -> BdrElement {
        BdrElement::constant(&Elem::from_int(ring, c), alpha)
    }

    pub fn from_rational(ring: &Arc<RingCtx>, alpha: u32, num: i64, den: i64) -> BdrElement {
        BdrElement::constant(&Elem::from_rational(ring, num, den), alpha)
    }

    /// The image of a cyclotomic element (digit 0 only).
    pub fn constant(c: &CycloElement, alpha: u32) -> BdrElement {
        let mut digits = vec![Elem::zero(c.ring()); alpha as usize];
        digits[0] = c.clone();
        BdrElement { digits }
    }

    /// `t` itself (zero when `alpha = 1`).
    pub fn t(ring: &Arc<RingCtx>, alpha: u32) -> BdrElement {
        let mut x = BdrElement::zero(ring, alpha);
        if alpha > 1 {
            x.digits[1] = Elem::one(ring);
        }
        x
    }

    pub fn ring(&self) -> &Arc<RingCtx> {
        self.digits[0].ring()
    }

    /// Truncation level: the element lives in `B_alpha`.
    pub fn alpha(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[Elem] {
        &self.digits
    }

    pub fn digit(&self, i: usize) -> &Elem {
        &self.digits[i]
    }

    /// Reduction modulo `t`, the map theta.
    pub fn theta(&self) -> CycloElement {
        self.digits[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|d| d.is_zero())
    }

    /// Minimal content valuation over the digits; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.digits.iter().filter_map(|d| d.valuation()).min()
    }

    /// Smallest absolute precision among the digits.
    pub fn abs_prec(&self) -> i64 {
        self.digits.iter().map(|d| d.abs_prec()).min().unwrap()
    }

    /// Largest `j` with `t^j | self` at precision (`alpha` for zero).
    pub fn t_order(&self) -> u32 {
        self.digits.iter().position(|d| !d.is_zero()).unwrap_or(self.digits.len()) as u32
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.alpha(), other.alpha(), "truncation levels differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        BdrElement { digits: self.digits.iter().zip(&other.digits).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        BdrElement { digits: self.digits.iter().zip(&other.digits).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        BdrElement { digits: self.digits.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.digits.len();
        let mut out: Vec<Option<Elem>> = vec![None; n];
        for (i, a) in self.digits.iter().enumerate() {
            for (j, b) in other.digits.iter().enumerate().take(n - i) {
                let prod = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    None => prod,
                    Some(acc) => acc.add(&prod),
                });
            }
        }
        BdrElement { digits: out.into_iter().map(|d| d.unwrap()).collect() }
    }

    /// Multiply by a cyclotomic scalar.
    pub fn scale(&self, c: &CycloElement) -> Self {
        BdrElement { digits: self.digits.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul_int(&self, c: i64) -> Self {
        self.scale(&Elem::from_int(self.ring(), c))
    }

    pub fn div_int(&self, c: i64) -> Self {
        self.scale(&Elem::from_rational(self.ring(), 1, c))
    }

    pub fn mul_pow_p(&self, e: i64) -> Self {
        BdrElement { digits: self.digits.iter().map(|a| a.mul_pow_p(e)).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = BdrElement::one(self.ring(), self.alpha());
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

    /// Multiply by `t^j` (entering the same truncation level).
    pub fn mul_t_pow(&self, j: u32) -> Self {
        let n = self.digits.len();
        let z = Elem::zero(self.ring());
        let digits = (0..n)
            .map(|i| if i >= j as usize { self.digits[i - j as usize].clone() } else { z.clone() })
            .collect();
        BdrElement { digits }
    }

    /// `b` with `t^j b = self`, in `B_(alpha - j)`.
    pub fn div_t_pow(&self, j: u32) -> Result<Self> {
        let n = self.alpha();
        if j >= n {
            return Err(Error::NotDivisible(format!("t^{j} annihilates B_{n}")));
        }
        if let Some(i) = self.digits[..j as usize].iter().position(|d| !d.is_zero()) {
            return Err(Error::NotDivisible(format!("digit {i} of the t-expansion is nonzero")));
        }
        Ok(BdrElement { digits: self.digits[j as usize..].to_vec() })
    }

    /// Reduction into `B_a` for `a <= alpha`.
    pub fn project(&self, a: u32) -> Self {
        assert!(a >= 1 && a <= self.alpha(), "cannot project B_{} to B_{a}", self.alpha());
        BdrElement { digits: self.digits[..a as usize].to_vec() }
    }

    /// A representative in `B_a` for `a >= alpha`; the new digits are exact zeros.
    pub fn lift(&self, a: u32) -> Self {
        let mut digits = self.digits.clone();
        while digits.len() < a as usize {
            digits.push(Elem::zero(self.ring()));
        }
        digits.truncate(a as usize);
        BdrElement { digits }
    }

    pub fn truncate(&self, abs: i64) -> Self {
        BdrElement { digits: self.digits.iter().map(|d| d.truncate(abs)).collect() }
    }

    /// Inverse when `theta(self)` is nonzero: `a0^{-1} sum_j (-a'/a0)^j`.
    pub fn inv(&self) -> Result<Self> {
        let a0 = &self.digits[0];
        if a0.is_zero() {
            return Err(Error::NonUnit);
        }
        let a0_inv = a0.inv()?;
        let alpha = self.alpha();
        let mut rest = self.clone();
        rest.digits[0] = Elem::zero(self.ring());
        let nu = rest.scale(&a0_inv).neg();
        let mut sum = BdrElement::one(self.ring(), alpha);
        let mut pw = sum.clone();
        for _ in 1..alpha {
            pw = pw.mul(&nu);
            sum = sum.add(&pw);
        }
        Ok(sum.scale(&a0_inv))
    }

    /// Apply a ring map to every digit.
    pub fn map_digits(&self, f: impl FnMut(&Elem) -> Elem) -> Self {
        BdrElement { digits: self.digits.iter().map(f).collect() }
    }

    /// Canonical digits truncated at absolute precision `abs`, for bitwise comparison.
    pub fn canonical(&self, abs: i64) -> Vec<Option<(i64, Vec<u64>)>> {
        self.digits.iter().map(|d| d.canonical(abs)).collect()
    }
}

impl RingElem for BdrElement {
    fn add(&self, other: &Self) -> Self {
        BdrElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        BdrElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        BdrElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        BdrElement::neg(self)
    }
    fn is_zero(&self) -> bool {
        BdrElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BdrElement::zero(self.ring(), self.alpha())
    }
    fn one_like(&self) -> Self {
        BdrElement::one(self.ring(), self.alpha())
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_key(&self) -> Option<(i64, i64)> {
        self.digits[0].pivot_key()
    }
}
