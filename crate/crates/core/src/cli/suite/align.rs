use std::sync::Arc;

use crate::bdr::{BdrElement, BdrRing};
use crate::coeffs::{Elem, Matrix};
use crate::rh::{Cocycle, TConnection};
use crate::toric::ToricElement;

/// Move a value into a ring with the same `p, k, alpha, s` but a different
/// digit budget, keeping whatever precision fits.
pub trait Align: Sized {
    fn align(&self, b: &Arc<BdrRing>) -> Self;
}

impl Align for Elem {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        let target = b.cyclo();
        if self.is_zero() {
            return Elem::zero_prec(target, self.abs_prec().min(target.digits() as i64));
        }
        let (val, num) = self.digits();
        Elem::from_parts(target, val, self.abs_prec(), num.to_vec())
    }
}

impl Align for BdrElement {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        self.map_digits(|d| d.align(b))
    }
}

impl Align for ToricElement {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        let d = self.dim();
        self.terms().fold(ToricElement::zero(b, d), |acc, (e, c)| {
            acc.add(&ToricElement::monomial(b, d, self.level(), e.clone(), c.align(b)))
        })
    }
}

impl<T: Align + Clone> Align for Matrix<T> {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        self.map(|x| x.align(b))
    }
}

impl Align for Cocycle {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        let mats = self.mats().iter().map(|m| m.align(b)).collect();
        Cocycle::with_scale(b, self.scale(), self.twist(), mats).expect("alignment keeps the shape")
    }
}

impl Align for TConnection {
    fn align(&self, b: &Arc<BdrRing>) -> Self {
        TConnection::new(b, self.mats().iter().map(|m| m.align(b)).collect()).expect("alignment keeps the shape")
    }
}
