//! The residue field F_q = F_p[w]/(g(w)) and polynomials over it.

use std::cmp::Ordering;

/// Element of F_q as its coordinate vector in the basis 1, w, ..., w^(s-1).
pub type Fq = Vec<u64>;

/// Arithmetic context of F_{p^s}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    s: usize,
    /// Low coefficients of the monic minimal polynomial g(w).
    g: Vec<u64>,
}

impl ResidueField {
    pub fn new(p: u64, g_low: Vec<u64>) -> Self {
        let s = g_low.len();
        ResidueField { p, s, g: g_low.into_iter().map(|c| c % p).collect() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.s
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.s as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.s]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1 % self.p;
        v
    }

    pub fn from_int(&self, c: i64) -> Fq {
        let mut v = self.zero();
        v[0] = c.rem_euclid(self.p as i64) as u64;
        v
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let s = self.s;
        let p = self.p;
        let mut acc = vec![0u64; 2 * s - 1];
        for i in 0..s {
            if a[i] == 0 {
                continue;
            }
            for j in 0..s {
                acc[i + j] = (acc[i + j] + a[i] * b[j]) % p;
            }
        }
        for d in (s..2 * s - 1).rev() {
            let c = acc[d];
            if c == 0 {
                continue;
            }
            acc[d] = 0;
            for (t, &gt) in self.g.iter().enumerate() {
                acc[d - s + t] = (acc[d - s + t] + c * (p - gt)) % p;
            }
        }
        acc.truncate(s);
        acc
    }

    pub fn pow(&self, a: &Fq, mut e: u64) -> Fq {
        let mut base = a.clone();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    /// All field elements, in lexicographic order of coordinates (low coordinate fastest).
    pub fn elements(&self) -> Vec<Fq> {
        let q = self.order();
        (0..q)
            .map(|mut idx| {
                let mut v = self.zero();
                for c in v.iter_mut() {
                    *c = idx % self.p;
                    idx /= self.p;
                }
                v
            })
            .collect()
    }

    /// Canonical total order: lexicographic on coordinates, highest coordinate first.
    pub fn cmp(&self, a: &Fq, b: &Fq) -> Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }

    /// Solutions of x^m = a.
    pub fn roots_of_power(&self, a: &Fq, m: u64) -> Vec<Fq> {
        self.elements().into_iter().filter(|x| self.pow(x, m) == *a).collect()
    }
}

/// Polynomial over F_q, coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqPoly(pub Vec<Fq>);

impl FqPoly {
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() { None } else { Some(self.0.len() - 1) }
    }

    fn trim(mut self, f: &ResidueField) -> Self {
        while self.0.last().is_some_and(|c| f.is_zero(c)) {
            self.0.pop();
        }
        self
    }

    pub fn from_coeffs(f: &ResidueField, c: Vec<Fq>) -> Self {
        FqPoly(c).trim(f)
    }

    pub fn one(f: &ResidueField) -> Self {
        FqPoly(vec![f.one()])
    }

    /// x - a
    pub fn linear(f: &ResidueField, a: &Fq) -> Self {
        FqPoly(vec![f.neg(a), f.one()])
    }

    pub fn add(&self, other: &Self, f: &ResidueField) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.add(self.0.get(i).unwrap_or(&z), other.0.get(i).unwrap_or(&z)))
            .collect();
        FqPoly(c).trim(f)
    }

    pub fn sub(&self, other: &Self, f: &ResidueField) -> Self {
        let n = self.0.len().max(other.0.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| f.sub(self.0.get(i).unwrap_or(&z), other.0.get(i).unwrap_or(&z)))
            .collect();
        FqPoly(c).trim(f)
    }

    pub fn mul(&self, other: &Self, f: &ResidueField) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return FqPoly(vec![]);
        }
        let mut c = vec![f.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        FqPoly(c).trim(f)
    }

    pub fn scale(&self, a: &Fq, f: &ResidueField) -> Self {
        FqPoly(self.0.iter().map(|c| f.mul(c, a)).collect()).trim(f)
    }

    pub fn div_rem(&self, d: &Self, f: &ResidueField) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(&d.0[dd]).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (FqPoly(vec![]), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(&r[i], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[i - dd + j] = f.sub(&r[i - dd + j], &f.mul(&c, dc));
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (FqPoly(q).trim(f), FqPoly(r).trim(f))
    }

    pub fn eval(&self, x: &Fq, f: &ResidueField) -> Fq {
        self.0.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn monic(&self, f: &ResidueField) -> Self {
        match self.degree() {
            None => self.clone(),
            Some(d) => self.scale(&f.inv(&self.0[d]).unwrap(), f),
        }
    }

    /// (g, u, v) with u*self + v*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self, f: &ResidueField) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (FqPoly::one(f), FqPoly(vec![]));
        let (mut t0, mut t1) = (FqPoly(vec![]), FqPoly::one(f));
        while r1.degree().is_some() {
            let (q, r) = r0.div_rem(&r1, f);
            let s2 = s0.sub(&q.mul(&s1, f), f);
            let t2 = t0.sub(&q.mul(&t1, f), f);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.degree() {
            None => (r0, s0, t0),
            Some(d) => {
                let inv = f.inv(&r0.0[d]).unwrap();
                (r0.scale(&inv, f), s0.scale(&inv, f), t0.scale(&inv, f))
            }
        }
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree s over F_p,
/// returned as its low coefficients. Degree 1 gives w.
pub fn unramified_modulus(p: u64, s: usize) -> Vec<u64> {
    if s == 1 {
        return vec![0];
    }
    let fp = ResidueField::new(p, vec![0]);
    let total = p.pow(s as u32);
    for idx in 0..total {
        let mut low = vec![0u64; s];
        let mut k = idx;
        for c in low.iter_mut() {
            *c = k % p;
            k /= p;
        }
        let mut coeffs: Vec<Fq> = low.iter().map(|&c| vec![c]).collect();
        coeffs.push(vec![1]);
        let g = FqPoly(coeffs);
        if is_irreducible(&g, &fp) {
            return low;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Rabin-style test over the prime field: gcd(x^(p^i) - x, g) = 1 for i <= deg/2.
pub fn is_irreducible(g: &FqPoly, fp: &ResidueField) -> bool {
    let n = match g.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let x = FqPoly(vec![fp.zero(), fp.one()]);
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        // xp <- xp^p mod g
        let mut acc = FqPoly::one(fp);
        for _ in 0..fp.p() {
            acc = acc.mul(&xp, fp).div_rem(g, fp).1;
        }
        xp = acc;
        let (d, _, _) = g.ext_gcd(&xp.sub(&x, fp), fp);
        if d.degree() != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_is_a_field() {
        let g = unramified_modulus(3, 2);
        let f = ResidueField::new(3, g);
        for a in f.elements().into_iter().skip(1) {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), f.one());
        }
    }

    #[test]
    fn brute_force_irreducibility_agrees() {
        // a quadratic over F_p is irreducible iff it has no root
        let p = 5;
        let fp = ResidueField::new(p, vec![0]);
        for a in 0..p {
            for b in 0..p {
                let g = FqPoly(vec![vec![b], vec![a], vec![1]]);
                let has_root = (0..p).any(|x| (x * x + a * x + b) % p == 0);
                assert_eq!(is_irreducible(&g, &fp), !has_root);
            }
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = ResidueField::new(7, vec![0]);
        let a = FqPoly::linear(&f, &vec![1]);
        let b = FqPoly::linear(&f, &vec![2]);
        let (g, u, v) = a.ext_gcd(&b, &f);
        assert_eq!(g, FqPoly::one(&f));
        assert_eq!(u.mul(&a, &f).add(&v.mul(&b, &f), &f), FqPoly::one(&f));
    }
}
