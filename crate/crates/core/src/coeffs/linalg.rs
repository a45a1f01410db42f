//! Dense matrices over commutative rings with precision-aware elimination.

use std::fmt;

use super::ring::Elem;
use crate::error::{Error, Result};

/// Operations the matrix routines need from a coefficient type.
pub trait RingElem: Clone + fmt::Debug {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;
    /// `(valuation, finer order)` used to rank pivots; `None` for zero.
    /// The margin of [`solve`] applies to the first component.
    fn pivot_key(&self) -> Option<(i64, i64)>;
}

impl RingElem for Elem {
    fn add(&self, other: &Self) -> Self {
        Elem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Elem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Elem::mul(self, other)
    }
    fn neg(&self) -> Self {
        Elem::neg(self)
    }
    fn is_zero(&self) -> bool {
        Elem::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Elem::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        Elem::one(self.ring())
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_key(&self) -> Option<(i64, i64)> {
        Some((self.valuation()?, self.unit_order()?))
    }
}

#[derive(Clone, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> PartialEq for Matrix<T> {
    /// Entrywise equality at precision.
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.sub(b).is_zero())
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
    pub fn try_map<U: Clone>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Matrix::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }
}

impl<T: RingElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, like: &T) -> Self {
        let z = like.zero_like();
        Matrix::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn identity(n: usize, like: &T) -> Self {
        let z = like.zero_like();
        let o = like.one_like();
        Matrix::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let z = d[0].zero_like();
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { z.clone() })
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let like = blocks[0].get(0, 0);
        let mut out = Matrix::zeros(n, n, like);
        let mut off = 0;
        for b in blocks {
            out.set_block(off, off, b);
            off += b.rows;
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| c.mul(a))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = self.get(i, 0).mul(o.get(0, j));
            for l in 1..self.cols {
                acc = acc.add(&self.get(i, l).mul(o.get(l, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).mul(&v[0]);
                for l in 1..self.cols {
                    acc = acc.add(&self.get(i, l).mul(&v[l]));
                }
                acc
            })
            .collect()
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = Matrix::identity(self.rows, self.get(0, 0));
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

    /// Coefficients (low to high, monic) of `det(x I - A)`, division-free (Berkowitz).
    pub fn charpoly(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let one = self.get(0, 0).one_like();
        // coefficients high to low
        let mut vect = vec![one.clone()];
        for r in 0..n {
            let a = self.get(r, r);
            let row: Vec<T> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<T> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut toe = vec![one.clone(), a.neg()];
            for _ in 0..r {
                let mut dot = a.zero_like();
                for (x, y) in row.iter().zip(&col) {
                    dot = dot.add(&x.mul(y));
                }
                toe.push(dot.neg());
                col = (0..r)
                    .map(|i| {
                        let mut acc = a.zero_like();
                        for (j, c) in col.iter().enumerate() {
                            acc = acc.add(&self.get(i, j).mul(c));
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = a.zero_like();
                for (j, v) in vect.iter().enumerate().take(i + 1) {
                    acc = acc.add(&toe[i - j].mul(v));
                }
                next.push(acc);
            }
            vect = next;
        }
        vect.reverse();
        vect
    }

    pub fn det(&self) -> T {
        let c = self.charpoly();
        if self.rows.is_multiple_of(2) { c[0].clone() } else { c[0].neg() }
    }

    /// Inverse by Cayley-Hamilton: `A^{-1} = -(A^{n-1} + c_{n-1} A^{n-2} + ... + c_1) / c_0`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let c = self.charpoly();
        let c0_inv = c[0].try_inv()?;
        let like = self.get(0, 0);
        let mut acc = Matrix::identity(n, like);
        for k in (1..n).rev() {
            acc = acc.mul(self).add(&Matrix::identity(n, like).scale(&c[k]));
        }
        Ok(acc.scale(&c0_inv.neg()))
    }
}

/// Solve `A x = b` by Gaussian elimination, choosing at each step the pivot
/// of minimal valuation. A pivot whose valuation exceeds `margin` (or no
/// invertible pivot at all) yields `SingularAtPrecision`.
pub fn solve<T: RingElem>(a: &Matrix<T>, b: &[T], margin: i64) -> Result<Vec<T>> {
    let n = a.rows();
    if !a.is_square() || b.len() != n {
        return Err(Error::Shape("linear_solve needs a square system".into()));
    }
    let mut m: Vec<Vec<T>> = (0..n).map(|i| {
        let mut row = a.row(i);
        row.push(b[i].clone());
        row
    }).collect();
    let mut pivots_inv = Vec::with_capacity(n);
    for k in 0..n {
        let mut cands: Vec<((i64, i64), usize)> =
            (k..n).filter_map(|i| m[i][k].pivot_key().map(|v| (v, i))).collect();
        cands.sort();
        let mut chosen = None;
        for ((v, _), i) in cands {
            if v > margin {
                break;
            }
            if let Ok(inv) = m[i][k].try_inv() {
                chosen = Some((i, inv));
                break;
            }
        }
        let (i, inv) = chosen.ok_or(Error::SingularAtPrecision)?;
        m.swap(k, i);
        for r in k + 1..n {
            if m[r][k].is_zero() {
                continue;
            }
            let f = m[r][k].mul(&inv);
            for c in k..=n {
                let t = f.mul(&m[k][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
        pivots_inv.push(inv);
    }
    let mut x: Vec<T> = vec![b[0].zero_like(); n];
    for k in (0..n).rev() {
        let mut acc = m[k][n].clone();
        for c in k + 1..n {
            acc = acc.sub(&m[k][c].mul(&x[c]));
        }
        x[k] = acc.mul(&pivots_inv[k]);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::ring::RingCtx;

    #[test]
    fn charpoly_of_companion() {
        let r = RingCtx::scalar(7, 6).unwrap();
        let e = |c| Elem::from_int(&r, c);
        // companion of x^3 - 2x^2 + 3x - 5
        let a = Matrix::from_rows(vec![
            vec![e(0), e(0), e(5)],
            vec![e(1), e(0), e(-3)],
            vec![e(0), e(1), e(2)],
        ]);
        let c = a.charpoly();
        assert_eq!(c, vec![e(-5), e(3), e(-2), e(1)]);
        assert_eq!(a.det(), e(5));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a), Matrix::identity(3, &e(1)));
    }

    #[test]
    fn brute_force_two_by_two() {
        // A = diag(2,5), b = (1,1) over Z/49
        let r = RingCtx::scalar(7, 2).unwrap();
        let e = |c| Elem::from_int(&r, c);
        let a = Matrix::from_rows(vec![vec![e(2), e(0)], vec![e(0), e(5)]]);
        let x = solve(&a, &[e(1), e(1)], i64::MAX).unwrap();
        let mut found = None;
        for x0 in 0..49i64 {
            for x1 in 0..49i64 {
                if (2 * x0) % 49 == 1 && (5 * x1) % 49 == 1 {
                    found = Some((x0, x1));
                }
            }
        }
        let (x0, x1) = found.unwrap();
        assert_eq!(x, vec![e(x0), e(x1)]);
    }

    #[test]
    fn margin_rejects_non_unit_pivot() {
        let r = RingCtx::scalar(5, 6).unwrap();
        let e = |c| Elem::from_int(&r, c);
        let a = Matrix::from_rows(vec![vec![e(5), e(0)], vec![e(0), e(1)]]);
        assert_eq!(solve(&a, &[e(1), e(1)], 0), Err(Error::SingularAtPrecision));
        let x = solve(&a, &[e(1), e(1)], 1).unwrap();
        assert_eq!(x[0].valuation(), Some(-1));
    }
}
