//! Seeded generators for ring elements, toric elements and matrices.
//!
//! The generator is ChaCha20 (`rand_chacha`), seeded with `seed_from_u64`;
//! streams are identical on every platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bdr::{BdrElement, BdrRing};
use crate::coeffs::{Elem, Matrix, RingCtx};
use crate::error::Result;
use crate::rh::{exp_correspondence, gauge_transform, Cocycle, TConnection, ToricMatrix};
use crate::toric::ToricElement;

pub struct Sampler {
    rng: ChaCha20Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha20Rng {
        &mut self.rng
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// Uniform integral element times `p^shift`.
    pub fn cyclo(&mut self, ring: &Arc<RingCtx>, shift: i64) -> Elem {
        let m = ring.pow_p(ring.digits());
        let coords = (0..ring.rank()).map(|_| self.rng.random_range(0..m)).collect();
        Elem::from_coords(ring, coords).mul_pow_p(shift)
    }

    /// Integral element whose constant term is a unit mod p.
    pub fn cyclo_unit(&mut self, ring: &Arc<RingCtx>) -> Elem {
        loop {
            let x = self.cyclo(ring, 0);
            if x.valuation() == Some(0) && x.is_lattice_unit() {
                return x;
            }
        }
    }

    /// Random period-ring element; digit 0 is scaled by `p^shift0`, the others by `p^shift`.
    pub fn bdr(&mut self, b: &BdrRing, shift0: i64, shift: i64) -> BdrElement {
        let digits = (0..b.alpha())
            .map(|i| self.cyclo(b.cyclo(), if i == 0 { shift0 } else { shift }))
            .collect();
        BdrElement::from_digits(digits)
    }

    /// Random toric element with `nterms` monomials of level at most `level`,
    /// exponent numerators in `-span..=span`.
    pub fn toric(&mut self, b: &Arc<BdrRing>, d: usize, level: u32, nterms: usize, span: i64) -> ToricElement {
        let mut x = ToricElement::zero(b, d);
        for _ in 0..nterms {
            let e = (0..d).map(|_| self.int(-span, span)).collect();
            x = x.add(&ToricElement::monomial(b, d, level, e, self.bdr(b, 0, 0)));
        }
        x
    }

    /// Matrix with independent entries from `f`.
    pub fn matrix<T: Clone>(&mut self, rows: usize, cols: usize, mut f: impl FnMut(&mut Self) -> T) -> Matrix<T> {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            entries.push(f(self));
        }
        let mut it = entries.into_iter();
        Matrix::from_fn(rows, cols, |_, _| it.next().unwrap())
    }
}

impl Sampler {
    /// Constant invertible matrix `L U` with `L` unipotent lower triangular
    /// and `U` upper triangular with unit diagonal.
    pub fn invertible_constant(&mut self, b: &Arc<BdrRing>, r: usize) -> Matrix<BdrElement> {
        let ring = b.cyclo().clone();
        let alpha = b.alpha();
        let l = self.matrix(r, r, |s| BdrElement::constant(&s.cyclo(&ring, 0), alpha));
        let u = self.matrix(r, r, |s| BdrElement::constant(&s.cyclo(&ring, 0), alpha));
        let l = Matrix::from_fn(r, r, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => l.get(i, j).clone(),
            std::cmp::Ordering::Equal => b.one(),
            std::cmp::Ordering::Less => b.zero(),
        });
        let mut u = Matrix::from_fn(r, r, |i, j| if i <= j { u.get(i, j).clone() } else { b.zero() });
        for i in 0..r {
            u.set(i, i, BdrElement::constant(&self.cyclo_unit(&ring), alpha));
        }
        l.mul(&u)
    }

    /// Gauge matrix `V0 + t W` with `V0` constant invertible and `W` toric of
    /// level at most `level`, its entries monomials with exponents drawn from
    /// a pool of two.
    pub fn toric_gauge(&mut self, b: &Arc<BdrRing>, d: usize, r: usize, level: u32) -> ToricMatrix {
        let v0 = self.invertible_constant(b, r);
        let t = ToricElement::constant(b, d, b.t());
        let span = b.p().pow(level) as i64;
        let pool: Vec<Vec<i64>> = (0..2).map(|_| (0..d).map(|_| self.int(-span, span)).collect()).collect();
        let w = self.matrix(r, r, |s| {
            let e = pool[s.int(0, 1) as usize].clone();
            ToricElement::monomial(b, d, level, e, s.bdr(b, 0, 0))
        });
        Matrix::from_fn(r, r, |i, j| ToricElement::constant(b, d, v0.get(i, j).clone()).add(&t.mul(w.get(i, j))))
    }
}

/// A random integrable connection: a constant diagonal connection, gauge
/// transformed by [`Sampler::toric_gauge`]. `p^m theta(phi)` is divisible by `p^2`.
pub fn random_connection(s: &mut Sampler, b: &Arc<BdrRing>, d: usize, r: usize, m: u32) -> Result<TConnection> {
    let shift = 2i64.saturating_sub(m as i64).max(0);
    let mats = (0..d)
        .map(|_| {
            let diag: Vec<ToricElement> =
                (0..r).map(|_| ToricElement::constant(b, d, s.bdr(b, shift, 0))).collect();
            Matrix::diagonal(&diag)
        })
        .collect();
    let nabla = TConnection::new(b, mats)?;
    let v = s.toric_gauge(b, d, r, m);
    gauge_transform(&nabla, &v)
}

/// `exp_correspondence` of [`random_connection`] on `p^m Gamma`; entries are
/// congruent to the identity modulo `p^2` under `theta`.
pub fn random_cocycle(seed: u64, b: &Arc<BdrRing>, d: usize, r: usize, m: u32) -> Result<Cocycle> {
    let mut s = Sampler::new(seed);
    let nabla = random_connection(&mut s, b, d, r, m)?;
    exp_correspondence(&nabla, m)
}
