use super::{
    act_point, alpha_of, at_digit, check_square, constant_matrix, digit_matrix, hensel_split, identity_r, ring_of,
    staircase_solve, theta_matrix, KMatrix, RMatrix,
};
use crate::bdr::BdrElement;
use crate::coeffs::{Elem, Matrix};
use crate::error::{Error, Result};
use crate::toric::GammaVector;

fn vp(mut m: i64, p: i64) -> i64 {
    let mut v = 0;
    while m != 0 && m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// Smallest `j` with `U^j = 0`, if at most the size of `U`.
fn nilpotency_index(u: &RMatrix) -> Option<u32> {
    let n = u.rows();
    let mut pw = identity_r(&ring_of(u), alpha_of(u), n);
    for j in 0..=n as u32 {
        if pw.is_zero() {
            return Some(j);
        }
        pw = pw.mul(u);
    }
    None
}

fn matrix_valuation(m: &RMatrix) -> Option<i64> {
    m.entries().iter().filter_map(|x| x.valuation()).min()
}

/// Convergence threshold of `sum binom(1/M, n) (U + X)^n` for `U` of
/// nilpotency index `nu`.
///
/// A nonzero word of length `n` in `U` and `X` holds at least
/// `(n - nu + 1) / nu` letters `X` (each run of `U` has length below `nu`),
/// while `v_p binom(1/M, n) >= -n v_p(M) - (n - 1)/(p - 1)`. The terms tend
/// to zero once `c / nu > v_p(M) + 1/(p - 1)`, i.e. for
/// `c >= floor(nu (v_p(M) + 1/(p - 1))) + 1`. For `p` prime to `M` the
/// binomial coefficients are integral and `c >= 1` suffices.
pub fn binomial_min_valuation(nu: u32, m: i64, p: u64) -> i64 {
    let p = p as i64;
    let v = vp(m, p);
    if v == 0 {
        return 1;
    }
    let nu = nu.max(1) as i64;
    (nu * (v * (p - 1) + 1)).div_euclid(p - 1) + 1
}

/// `(1 + U + X)^(1/M)` as the binomial series, for nilpotent `U` and `X` of
/// valuation at least [`binomial_min_valuation`].
pub fn binomial_root_series(u: &RMatrix, x: &RMatrix, m: i64) -> Result<RMatrix> {
    check_square(u, "U")?;
    if m < 1 {
        return Err(Error::DomainViolation("M must be positive".into()));
    }
    let ring = ring_of(u);
    let alpha = alpha_of(u);
    let p = ring.p() as i64;
    let nu = nilpotency_index(u).ok_or_else(|| Error::DomainViolation("U is not nilpotent".into()))? as i64;
    let c_min = binomial_min_valuation(nu as u32, m, ring.p());
    let target = ring.digits() as i64;
    let (c, v) = (matrix_valuation(x), vp(m, p));
    if let Some(c) = c {
        if c < c_min {
            return Err(Error::DomainViolation(format!("X has valuation {c}, the series needs {c_min}")));
        }
    }
    let terms = match c {
        // finite sum: U^nu = 0
        None => nu.max(1),
        Some(c) => {
            let mut n = 1i64;
            loop {
                let lower = if v == 0 {
                    (c * (n - nu + 1)).div_euclid(nu) as f64
                } else {
                    c as f64 * (n - nu + 1) as f64 / nu as f64 - (n * v) as f64 - (n - 1) as f64 / (p - 1) as f64
                };
                if lower >= target as f64 {
                    break n;
                }
                n += 1;
                if n > 100_000 {
                    return Err(Error::PrecisionExhausted("binomial series too long".into()));
                }
            }
        }
    };
    let y = u.add(x);
    let n = u.rows();
    let mut pw = identity_r(&ring, alpha, n);
    let mut coef = Elem::one(&ring);
    let mut sum = pw.clone();
    for k in 1..terms {
        pw = pw.mul(&y);
        coef = coef.mul(&Elem::from_rational(&ring, 1 - (k - 1) * m, m * k));
        sum = sum.add(&pw.scale(&BdrElement::constant(&coef, alpha)));
    }
    Ok(sum.map(|e| e.truncate(target)))
}

/// The `Y` with `sum_{i=1}^M B^(i-1) Y B^(M-i) = X`.
pub fn sum_conjugation_solve(b: &RMatrix, m: i64, x: &RMatrix) -> Result<RMatrix> {
    check_square(b, "B")?;
    if m < 1 {
        return Err(Error::DomainViolation("M must be positive".into()));
    }
    let n = b.rows();
    let mut powers = vec![identity_r(&ring_of(b), alpha_of(b), n)];
    for i in 1..m as usize {
        powers.push(powers[i - 1].mul(b));
    }
    let zero = BdrElement::zero(&ring_of(b), alpha_of(b));
    let op = |y: &RMatrix| {
        let mut acc = Matrix::zeros(n, n, &zero);
        for i in 0..m as usize {
            acc = acc.add(&powers[i].mul(y).mul(&powers[m as usize - 1 - i]));
        }
        acc
    };
    staircase_solve(&op, n, n, x, i64::MAX)
}

/// `Phi_1 act_beta(Phi_1) ... act_{(M-1) beta}(Phi_1)`.
pub fn twisted_product(phi1: &RMatrix, beta: &GammaVector, m: i64) -> RMatrix {
    let mut out = identity_r(&ring_of(phi1), alpha_of(phi1), phi1.rows());
    let mut offset = GammaVector::zero(beta.dim());
    for _ in 0..m {
        out = out.mul(&act_point(&offset, phi1));
        offset = offset.add(beta);
    }
    out
}

/// Seed for a block with the single residual eigenvalue `lambda`: `mu W` with
/// `mu` the Teichmuller lift of a residual `M`-th root of `lambda` and
/// `W = (1 + N)^(1/M)` by the binomial series, `N = mu^(-M) theta(B) - I`.
/// With `series_only`, `N` must itself be small (no nilpotent part), which
/// makes the seed a power series in `theta(B)`.
pub(crate) fn simple_seed(block: &RMatrix, lambda: &crate::coeffs::Fq, m: i64, series_only: bool) -> Result<RMatrix> {
    let ring = ring_of(block);
    let alpha = alpha_of(block);
    let f = ring.residue_field().clone();
    let mut roots = f.roots_of_power(lambda, m as u64);
    if roots.is_empty() {
        return Err(Error::ResidueRootMissing { m: m as u64 });
    }
    roots.sort_by(|a, b| f.cmp(a, b));
    let mu = Elem::teichmuller(&ring, &roots[0]);
    let lam_inv = mu.pow(m as u64).inv()?;
    let n = block.rows();
    let theta: KMatrix = theta_matrix(block);
    let id = Matrix::identity(n, &Elem::one(&ring));
    let nk = theta.scale(&lam_inv).sub(&id);
    let x_all = constant_matrix(&nk, alpha);
    let zero = Matrix::zeros(n, n, &BdrElement::zero(&ring, alpha));
    let w = match binomial_root_series(&zero, &x_all, m) {
        Ok(w) => w,
        Err(Error::DomainViolation(_)) if !series_only => {
            let upper = Matrix::from_fn(n, n, |i, j| if i < j { nk.get(i, j).clone() } else { Elem::zero(&ring) });
            let u = constant_matrix(&upper, alpha);
            binomial_root_series(&u, &x_all.sub(&u), m)?
        }
        Err(e) => return Err(e),
    };
    Ok(w.scale(&BdrElement::constant(&mu, alpha)))
}

/// An `M`-th root of `theta(Phi)` (as a constant matrix): blockwise
/// [`simple_seed`] in the basis of [`hensel_split`].
pub fn mth_root_seed(phi: &RMatrix, m: i64) -> Result<RMatrix> {
    check_square(phi, "Phi")?;
    let alpha = alpha_of(phi);
    let theta = constant_matrix(&theta_matrix(phi), alpha);
    let cf = hensel_split(&theta)?;
    let seeds = cf.blocks[0]
        .iter()
        .zip(&cf.eigenvalues)
        .map(|(b, e)| simple_seed(b, &e[0], m, false))
        .collect::<Result<Vec<_>>>()?;
    let v = &cf.conjugator;
    Ok(v.mul(&Matrix::block_diag(&seeds)).mul(&v.inverse()?))
}

/// The unique `Phi_1` congruent to `seed` modulo `t` (after refining
/// `theta(seed)` by Newton's method) whose twisted `M`-fold product is `Phi`.
pub fn twisted_mth_root(phi: &RMatrix, beta: &GammaVector, m: i64, seed: &RMatrix) -> Result<RMatrix> {
    check_square(phi, "Phi")?;
    if seed.rows() != phi.rows() || seed.cols() != phi.cols() {
        return Err(Error::Shape("seed and Phi differ in size".into()));
    }
    if m < 1 {
        return Err(Error::DomainViolation("M must be positive".into()));
    }
    let alpha = alpha_of(phi);
    let theta_phi = constant_matrix(&theta_matrix(phi), alpha);
    let mut w = constant_matrix(&theta_matrix(seed), alpha);
    let mut converged = false;
    for _ in 0..200 {
        let resid = theta_phi.sub(&twisted_product(&w, beta, m));
        if resid.is_zero() {
            converged = true;
            break;
        }
        let step = sum_conjugation_solve(&w, m, &resid)?;
        w = w.add(&constant_matrix(&theta_matrix(&step), alpha));
    }
    if !converged {
        return Err(Error::PrecisionExhausted("the seed does not refine to a root".into()));
    }
    for l in 1..alpha as usize {
        let resid = phi.sub(&twisted_product(&w, beta, m));
        let rl = constant_matrix(&digit_matrix(&resid, l), alpha);
        let b = constant_matrix(&theta_matrix(&w), alpha);
        let y = sum_conjugation_solve(&b, m, &rl)?;
        w = w.add(&at_digit(&theta_matrix(&y), alpha, l));
    }
    Ok(w)
}
