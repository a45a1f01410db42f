//! Coefficient rings: Galois rings, cyclotomic quotients and exact linear
//! algebra over them.

pub mod fq;
pub mod linalg;
pub mod ring;

use std::sync::Arc;

pub use fq::{Fq, FqPoly, ResidueField};
pub use linalg::{Matrix, RingElem};
pub use ring::{Elem, RingCtx, RingKind};

use crate::error::{Error, Result};

/// Element of `Z_p[zeta_{p^k}] (x) GR(p^N, s)` at finite precision.
pub type CycloElement = Elem;

/// Parameters of a cyclotomic coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoeffRingDescriptor {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    pub s: usize,
}

impl CoeffRingDescriptor {
    pub fn new(p: u64, n: u32, k: u32, s: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidProfile(format!("N = {n} is below the minimum 4")));
        }
        let d = CoeffRingDescriptor { p, n, k, s };
        d.ring()?;
        Ok(d)
    }

    pub fn ring(&self) -> Result<Arc<RingCtx>> {
        RingCtx::cyclotomic(self.p, self.n, self.s, self.k)
    }
}

/// Minimal p-adic valuation over the coordinates; `None` stands for infinity.
pub fn content_valuation(a: &Elem) -> Option<i64> {
    a.valuation()
}

/// Solve `A x = b`, accepting any pivot that is nonzero at precision.
pub fn linear_solve(a: &Matrix<Elem>, b: &[Elem]) -> Result<Vec<Elem>> {
    linalg::solve(a, b, i64::MAX)
}

/// Solve `A x = b`, rejecting pivots of valuation above `margin`.
pub fn linear_solve_with_margin(a: &Matrix<Elem>, b: &[Elem], margin: i64) -> Result<Vec<Elem>> {
    linalg::solve(a, b, margin)
}
