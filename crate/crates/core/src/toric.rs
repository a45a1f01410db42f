//! Toric algebras over the period ring: finite Laurent combinations of
//! monomials `T^e`, `e` in `p^(-n) Z^d`, with the Galois action, the
//! derivations `t T_i d/dT_i` and normalized traces.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bdr::{exp_nilpotent_scaled, BdrElement, BdrRing};
use crate::coeffs::{Elem, RingElem};
use crate::error::{Error, Result};

/// `gamma = sum a_i gamma_i` in the dense subgroup `Z^d` of `Gamma = Z_p^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaVector(pub Vec<i64>);

impl GammaVector {
    pub fn zero(d: usize) -> Self {
        GammaVector(vec![0; d])
    }

    /// The generator `gamma_i` scaled by `c`.
    pub fn basis(d: usize, i: usize, c: i64) -> Self {
        let mut v = vec![0; d];
        v[i] = c;
        GammaVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        GammaVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: i64) -> Self {
        GammaVector(self.0.iter().map(|a| a * c).collect())
    }
}

/// `sum_e c_e T^e` with exponents stored as numerators over `p^level`.
#[derive(Clone)]
pub struct ToricElement {
    ring: Arc<BdrRing>,
    d: usize,
    level: u32,
    terms: BTreeMap<Vec<i64>, BdrElement>,
}

impl fmt::Debug for ToricElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Toric(level {}; ", self.level)?;
        f.debug_map().entries(self.terms.iter()).finish()?;
        write!(f, ")")
    }
}

impl PartialEq for ToricElement {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl ToricElement {
    pub fn zero(ring: &Arc<BdrRing>, d: usize) -> Self {
        ToricElement { ring: ring.clone(), d, level: 0, terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<BdrRing>, d: usize, c: BdrElement) -> Self {
        ToricElement::monomial(ring, d, 0, vec![0; d], c)
    }

    pub fn one(ring: &Arc<BdrRing>, d: usize) -> Self {
        ToricElement::constant(ring, d, ring.one())
    }

    /// `c T^(num / p^level)`.
    pub fn monomial(ring: &Arc<BdrRing>, d: usize, level: u32, num: Vec<i64>, c: BdrElement) -> Self {
        assert_eq!(num.len(), d);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(num, c);
        }
        ToricElement { ring: ring.clone(), d, level, terms }
    }

    /// `T_i^(1/p^n)`.
    pub fn var_root(ring: &Arc<BdrRing>, d: usize, i: usize, n: u32) -> Self {
        let mut e = vec![0; d];
        e[i] = 1;
        ToricElement::monomial(ring, d, n, e, ring.one())
    }

    /// `T_i`.
    pub fn var(ring: &Arc<BdrRing>, d: usize, i: usize) -> Self {
        ToricElement::var_root(ring, d, i, 0)
    }

    pub fn ring(&self) -> &Arc<BdrRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Terms as `(numerators over p^level, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BdrElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `T^(num / p^level)` for the given level.
    pub fn coeff(&self, level: u32, num: &[i64]) -> BdrElement {
        let x = self.at_level(level.max(self.level));
        let scale = self.ring.p().pow(level.max(self.level) - level) as i64;
        let key: Vec<i64> = num.iter().map(|e| e * scale).collect();
        x.terms.get(&key).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Minimal content valuation of the coefficients.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| c.valuation()).min()
    }

    /// Re-express with denominator `p^level` (`level >= self.level`).
    pub fn at_level(&self, level: u32) -> Self {
        assert!(level >= self.level);
        if level == self.level {
            return self.clone();
        }
        let f = self.ring.p().pow(level - self.level) as i64;
        let terms = self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * f).collect(), c.clone())).collect();
        ToricElement { ring: self.ring.clone(), d: self.d, level, terms }
    }

    /// Lowest level at which all exponents are representable.
    pub fn reduced_level(&self) -> u32 {
        let p = self.ring.p() as i64;
        let mut lvl = self.level;
        let mut div = 1i64;
        while lvl > 0 && self.terms.keys().all(|e| e.iter().all(|x| x % (div * p) == 0)) {
            lvl -= 1;
            div *= p;
        }
        lvl
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        assert_eq!(self.d, o.d, "toric dimensions differ");
        let l = self.level.max(o.level);
        (self.at_level(l), o.at_level(l))
    }

    fn with_terms(&self, terms: BTreeMap<Vec<i64>, BdrElement>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        ToricElement { ring: self.ring.clone(), d: self.d, level: self.level, terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        let mut terms = a.terms.clone();
        for (e, c) in b.terms {
            let v = match terms.remove(&e) {
                Some(x) => x.add(&c),
                None => c,
            };
            terms.insert(e, v);
        }
        a.with_terms(terms)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        let mut terms: BTreeMap<Vec<i64>, BdrElement> = BTreeMap::new();
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let prod = c1.mul(c2);
                match terms.entry(e) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = o.get().add(&prod);
                        o.insert(sum);
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                }
            }
        }
        a.with_terms(terms)
    }

    /// Multiply every coefficient by a period-ring element.
    pub fn scale(&self, c: &BdrElement) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&BdrElement) -> BdrElement) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect();
        self.with_terms(terms)
    }

    /// Apply a term-wise transformation `(exponent, coefficient) -> coefficient`.
    fn map_terms(&self, mut f: impl FnMut(&[i64], &BdrElement) -> BdrElement) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(e, c))).collect();
        self.with_terms(terms)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = ToricElement::one(&self.ring, self.d);
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

    pub fn truncate(&self, abs: i64) -> Self {
        self.map_coeffs(|c| c.truncate(abs))
    }

    /// Inverse of a unit: `theta` of the element must be a single monomial
    /// `c T^e` with `theta(c) != 0`; then `u^{-1} = c^{-1} T^{-e} sum_j (-nu)^j`.
    pub fn inv(&self) -> Result<Self> {
        let lead: Vec<(&Vec<i64>, &BdrElement)> =
            self.terms.iter().filter(|(_, c)| !c.theta().is_zero()).collect();
        if lead.len() != 1 {
            return Err(Error::NonUnit);
        }
        let (e, c) = lead[0];
        let c_inv = c.inv()?;
        let neg_e: Vec<i64> = e.iter().map(|x| -x).collect();
        let m_inv = ToricElement::monomial(&self.ring, self.d, self.level, neg_e, c_inv);
        let one = ToricElement::one(&self.ring, self.d);
        let nu = self.mul(&m_inv).sub(&one);
        let mut sum = one.clone();
        let mut pw = one;
        for _ in 1..self.ring.alpha() {
            pw = pw.mul(&nu).neg();
            sum = sum.add(&pw);
        }
        Ok(sum.mul(&m_inv))
    }

    /// `sum_i a_i num_i` for a term.
    fn pairing(gamma: &GammaVector, num: &[i64]) -> i64 {
        gamma.0.iter().zip(num).map(|(a, e)| a * e).sum()
    }

    fn check_gamma(&self, gamma: &GammaVector) {
        assert_eq!(gamma.dim(), self.d, "gamma dimension differs from toric dimension");
    }

    /// `gamma_*`: `T^e -> zeta_{p^n}^{<gamma, p^n e>} T^e`.
    pub fn galois_act(&self, gamma: &GammaVector) -> Result<Self> {
        self.check_gamma(gamma);
        let n = self.level;
        let k = self.ring.profile().k;
        if n > k {
            return Err(Error::LevelExceedsK { level: n, k });
        }
        if n == 0 {
            return Ok(self.clone());
        }
        let modulus = self.ring.p().pow(n) as i64;
        let zeta = self.ring.zeta(n)?.theta();
        Ok(self.map_terms(|e, c| {
            let j = Self::pairing(gamma, e).rem_euclid(modulus);
            c.scale(&zeta.pow(j as u64))
        }))
    }

    /// `partial_gamma`: `T^e -> t <gamma, e> T^e`.
    pub fn partial_gamma(&self, gamma: &GammaVector) -> Self {
        self.check_gamma(gamma);
        let t = self.ring.t();
        let den = self.ring.p().pow(self.level) as i64;
        self.map_terms(|e, c| {
            let w = Self::pairing(gamma, e);
            c.mul(&t).scale(&Elem::from_rational(self.ring.cyclo(), w, den))
        })
    }

    /// `exp(partial_gamma) = sum_{j < alpha} partial_gamma^j / j!`.
    pub fn exp_derivation_act(&self, gamma: &GammaVector) -> Self {
        self.check_gamma(gamma);
        let mut term = self.clone();
        let mut sum = self.clone();
        for j in 1..self.ring.alpha() as i64 {
            term = term.partial_gamma(gamma).map_coeffs(|c| c.div_int(j));
            sum = sum.add(&term);
        }
        sum
    }

    /// Closed form of [`Self::exp_derivation_act`]: `T^e -> exp(t <gamma, e>) T^e`.
    pub fn exp_derivation_closed(&self, gamma: &GammaVector) -> Self {
        self.check_gamma(gamma);
        let den = self.ring.p().pow(self.level) as i64;
        self.map_terms(|e, c| {
            let w = Elem::from_rational(self.ring.cyclo(), Self::pairing(gamma, e), den);
            c.mul(&exp_nilpotent_scaled(&self.ring, &w))
        })
    }

    /// The natural action `gamma = gamma_* o exp(partial_gamma)`.
    pub fn natural_act(&self, gamma: &GammaVector) -> Result<Self> {
        self.exp_derivation_act(gamma).galois_act(gamma)
    }

    /// `R_{n'}`: keep the monomials with exponents in `p^(-n') Z^d`, returned at level `n'`.
    pub fn normalized_trace(&self, n_prime: u32) -> Result<Self> {
        if n_prime > self.level {
            return Ok(self.at_level(n_prime));
        }
        let f = self.ring.p().pow(self.level - n_prime) as i64;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().all(|x| x % f == 0))
            .map(|(e, c)| (e.iter().map(|x| x / f).collect(), c.clone()))
            .collect();
        Ok(ToricElement { ring: self.ring.clone(), d: self.d, level: n_prime, terms })
    }

    /// `(R_{n'}(x), x - R_{n'}(x))`.
    pub fn trace_complement(&self, n_prime: u32) -> Result<(Self, Self)> {
        let head = self.normalized_trace(n_prime)?;
        let tail = self.sub(&head);
        Ok((head, tail))
    }

    /// `p^(-nd) sum_{gamma in (Z/p^n)^d} gamma_*(x)`.
    pub fn galois_average(&self, n: u32) -> Result<Self> {
        let k = self.ring.profile().k;
        if n > k {
            return Err(Error::LevelExceedsK { level: n, k });
        }
        if self.level > n {
            return Err(Error::DomainViolation(format!("element of level {} averaged at level {n}", self.level)));
        }
        let x = self.at_level(n);
        let m = self.ring.p().pow(n) as i64;
        let count = (m as u64).pow(self.d as u32);
        let mut sum = ToricElement::zero(&self.ring, self.d).at_level(x.level);
        for idx in 0..count {
            let mut rest = idx as i64;
            let coords = (0..self.d)
                .map(|_| {
                    let c = rest % m;
                    rest /= m;
                    c
                })
                .collect();
            sum = sum.add(&x.galois_act(&GammaVector(coords))?);
        }
        let shift = -((n as usize * self.d) as i64);
        Ok(sum.map_coeffs(|c| c.mul_pow_p(shift)))
    }

    /// Canonical data for bitwise comparison.
    pub fn canonical(&self, abs: i64) -> Vec<(Vec<i64>, Vec<Option<(i64, Vec<u64>)>>)> {
        let x = self.at_level(self.level.max(self.reduced_level()));
        let lvl = x.reduced_level();
        let f = self.ring.p().pow(x.level - lvl) as i64;
        x.terms
            .iter()
            .filter(|(_, c)| !c.truncate(abs).is_zero())
            .map(|(e, c)| (e.iter().map(|v| v / f).chain([lvl as i64]).collect(), c.canonical(abs)))
            .collect()
    }
}

impl RingElem for ToricElement {
    fn add(&self, other: &Self) -> Self {
        ToricElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        ToricElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ToricElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        ToricElement::neg(self)
    }
    fn is_zero(&self) -> bool {
        ToricElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        ToricElement::zero(&self.ring, self.d)
    }
    fn one_like(&self) -> Self {
        ToricElement::one(&self.ring, self.d)
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_key(&self) -> Option<(i64, i64)> {
        self.valuation().map(|v| (v, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdr::PrecisionProfile;
    use crate::random::Sampler;

    fn ring(p: u64) -> Arc<BdrRing> {
        BdrRing::new(PrecisionProfile::new(p, 2, 12, 3, 1).unwrap()).unwrap()
    }

    #[test]
    fn laurent_arithmetic() {
        let b = ring(5);
        let t1 = ToricElement::var(&b, 2, 0);
        let t2 = ToricElement::var(&b, 2, 1);
        assert_eq!(t1.mul(&t1.inv().unwrap()), ToricElement::one(&b, 2));
        let lhs = t1.add(&t2).pow(2);
        let two = ToricElement::constant(&b, 2, b.from_int(2));
        let rhs = t1.mul(&t1).add(&two.mul(&t1).mul(&t2)).add(&t2.mul(&t2));
        assert_eq!(lhs, rhs);
        let xi_a = ToricElement::constant(&b, 2, b.xi().pow(3));
        assert!(xi_a.mul(&t1).is_zero());
    }

    #[test]
    fn action_examples() {
        let b = ring(5);
        let g1 = GammaVector::basis(2, 0, 1);
        let g2 = GammaVector::basis(2, 1, 1);
        let r = ToricElement::var_root(&b, 2, 0, 1);
        let zeta = ToricElement::constant(&b, 2, b.zeta(1).unwrap());
        assert_eq!(r.galois_act(&g1).unwrap(), zeta.mul(&r));
        let t1 = ToricElement::var(&b, 2, 0);
        assert_eq!(t1.galois_act(&g2).unwrap(), t1);
        let t = ToricElement::constant(&b, 2, b.t());
        assert_eq!(t1.partial_gamma(&g1), t.mul(&t1));
        let t_over_p = ToricElement::constant(&b, 2, b.t().div_int(5));
        assert_eq!(r.partial_gamma(&g1), t_over_p.mul(&r));
        let q = ToricElement::constant(&b, 2, b.q());
        assert_eq!(t1.exp_derivation_act(&g1), q.mul(&t1));
        assert_eq!(t1.natural_act(&g1).unwrap(), q.mul(&t1));
        for n in 1..=2 {
            let r = ToricElement::var_root(&b, 2, 0, n);
            let qn = ToricElement::constant(&b, 2, b.q_root(n).unwrap());
            assert_eq!(r.natural_act(&g1).unwrap(), qn.mul(&r), "n = {n}");
        }
        let deep = ToricElement::var_root(&b, 2, 0, 3);
        assert!(matches!(deep.galois_act(&g1), Err(Error::LevelExceedsK { .. })));
    }

    #[test]
    fn trace_examples() {
        let b = ring(3);
        let t1 = ToricElement::var(&b, 2, 0);
        let r = ToricElement::var_root(&b, 2, 0, 1);
        let t2 = ToricElement::var(&b, 2, 1);
        let three = ToricElement::constant(&b, 2, b.from_int(3));
        let x = three.mul(&t1).add(&r.mul(&t2));
        assert_eq!(x.normalized_trace(0).unwrap(), three.mul(&t1));
        let (head, tail) = r.trace_complement(0).unwrap();
        assert!(head.is_zero());
        assert_eq!(tail, r);
        assert!(r.galois_average(1).unwrap().is_zero());
        assert_eq!(t1.galois_average(0).unwrap(), t1);
    }

    #[test]
    fn random_properties() {
        let b = ring(3);
        let mut s = Sampler::new(7);
        for _ in 0..10 {
            let x = s.toric(&b, 2, 2, 3, 9);
            let y = s.toric(&b, 2, 1, 3, 3);
            let g = GammaVector(vec![s.int(-4, 4), s.int(-4, 4)]);
            let h = GammaVector(vec![s.int(-4, 4), s.int(-4, 4)]);
            // Leibniz
            let lhs = x.mul(&y).partial_gamma(&g);
            let rhs = x.partial_gamma(&g).mul(&y).add(&x.mul(&y.partial_gamma(&g)));
            assert_eq!(lhs, rhs);
            // both composition orders and closed form
            let a = x.natural_act(&g).unwrap();
            assert_eq!(a, x.galois_act(&g).unwrap().exp_derivation_act(&g));
            assert_eq!(x.exp_derivation_act(&g), x.exp_derivation_closed(&g));
            // group action and multiplicativity
            let gh = x.natural_act(&g.add(&h)).unwrap();
            assert_eq!(gh, x.natural_act(&h).unwrap().natural_act(&g).unwrap());
            assert_eq!(x.mul(&y).natural_act(&g).unwrap(), a.mul(&y.natural_act(&g).unwrap()));
            // analytic vectors
            let g9 = g.scale(9);
            assert_eq!(x.galois_act(&g9).unwrap(), x);
            // traces
            let r0 = x.normalized_trace(0).unwrap();
            assert_eq!(r0.normalized_trace(0).unwrap(), r0);
            assert_eq!(x.galois_average(2).unwrap(), r0);
            assert_eq!(x.galois_act(&g).unwrap().normalized_trace(1).unwrap(), x.normalized_trace(1).unwrap().galois_act(&g).unwrap());
        }
    }
}
