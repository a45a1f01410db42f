//! Cocycles of `Gamma` with toric matrix coefficients, integrable
//! t-connections, and the operator logarithm and exponential between them.
//!
//! Module elements are coordinate columns `v`. A cocycle acts by
//! `G_gamma(v) = Phi_gamma * act_gamma(v)`, a connection by
//! `nabla_gamma(v) = partial_gamma(v) + phi_gamma * v`.
//!
//! Both series are summed on the constant frame. Their length comes from a
//! weight filtration: give `p` weight 1 and `t` weight `W`, with `W` large
//! enough that every piece of the operator raises weight by `c` (the p-adic
//! valuation of `theta(Phi - I)`, resp. of `theta(p^m phi)`). After `n` steps
//! the digits have valuation at least `n c - W (alpha - 1)`, less the
//! denominators `n` (log) or `n!` (exp).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bdr::BdrRing;
use crate::coeffs::{Matrix, RingElem};
use crate::error::{Error, Result};
use crate::toric::{GammaVector, ToricElement};

pub type ToricMatrix = Matrix<ToricElement>;

/// Which semilinear action a cocycle is twisted by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistTag {
    Galois,
    ExpDerivation,
    Natural,
}

impl TwistTag {
    pub fn act(self, gamma: &GammaVector, x: &ToricElement) -> Result<ToricElement> {
        match self {
            TwistTag::Galois => x.galois_act(gamma),
            TwistTag::ExpDerivation => Ok(x.exp_derivation_act(gamma)),
            TwistTag::Natural => x.natural_act(gamma),
        }
    }

    pub fn act_matrix(self, gamma: &GammaVector, m: &ToricMatrix) -> Result<ToricMatrix> {
        m.try_map(|x| self.act(gamma, x))
    }

    pub fn name(self) -> &'static str {
        match self {
            TwistTag::Galois => "galois",
            TwistTag::ExpDerivation => "exp_derivation",
            TwistTag::Natural => "natural",
        }
    }
}

impl fmt::Display for TwistTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwistTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "galois" => Ok(TwistTag::Galois),
            "exp_derivation" => Ok(TwistTag::ExpDerivation),
            "natural" => Ok(TwistTag::Natural),
            _ => Err(Error::Shape(format!("unknown twist '{s}'"))),
        }
    }
}

/// A cocycle on the subgroup generated by `beta_i = scale * gamma_i`,
/// given by `Phi_i = Phi_{beta_i}`.
#[derive(Debug, Clone)]
pub struct Cocycle {
    ring: Arc<BdrRing>,
    d: usize,
    rank: usize,
    scale: i64,
    twist: TwistTag,
    mats: Vec<ToricMatrix>,
}

impl PartialEq for Cocycle {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.rank == o.rank && self.scale == o.scale && self.twist == o.twist && self.mats == o.mats
    }
}

fn check_mats(ring: &Arc<BdrRing>, d: usize, mats: &[ToricMatrix]) -> Result<usize> {
    if mats.len() != d || d == 0 {
        return Err(Error::Shape(format!("expected {d} matrices, got {}", mats.len())));
    }
    let r = mats[0].rows();
    if r == 0 {
        return Err(Error::Shape("rank must be positive".into()));
    }
    for m in mats {
        if m.rows() != r || m.cols() != r {
            return Err(Error::Shape("matrices must be square of equal size".into()));
        }
        for x in m.entries() {
            if x.dim() != d || !Arc::ptr_eq(x.ring(), ring) && x.ring().profile() != ring.profile() {
                return Err(Error::RingMismatch);
            }
        }
    }
    Ok(r)
}

impl Cocycle {
    /// Cocycle on `p^m Gamma`.
    pub fn new(ring: &Arc<BdrRing>, m: u32, twist: TwistTag, mats: Vec<ToricMatrix>) -> Result<Self> {
        Cocycle::with_scale(ring, ring.p().pow(m) as i64, twist, mats)
    }

    /// Cocycle on `scale * Gamma`.
    pub fn with_scale(ring: &Arc<BdrRing>, scale: i64, twist: TwistTag, mats: Vec<ToricMatrix>) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::Shape("generator scale must be positive".into()));
        }
        let d = mats.len();
        let rank = check_mats(ring, d, &mats)?;
        Ok(Cocycle { ring: ring.clone(), d, rank, scale, twist, mats })
    }

    pub fn ring(&self) -> &Arc<BdrRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `v_p(scale)`: the cocycle lives on `p^level Gamma` when the scale is a power of `p`.
    pub fn level(&self) -> u32 {
        vp(self.scale, self.ring.p() as i64)
    }

    pub fn twist(&self) -> TwistTag {
        self.twist
    }

    pub fn mats(&self) -> &[ToricMatrix] {
        &self.mats
    }

    pub fn generator(&self, i: usize) -> GammaVector {
        GammaVector::basis(self.d, i, self.scale)
    }

    fn act(&self, gamma: &GammaVector, m: &ToricMatrix) -> Result<ToricMatrix> {
        self.twist.act_matrix(gamma, m)
    }
}

/// A framed t-connection `nabla_{gamma_i} = partial_{gamma_i} + phi_i`.
#[derive(Debug, Clone)]
pub struct TConnection {
    ring: Arc<BdrRing>,
    d: usize,
    rank: usize,
    mats: Vec<ToricMatrix>,
}

impl PartialEq for TConnection {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.rank == o.rank && self.mats == o.mats
    }
}

impl TConnection {
    pub fn new(ring: &Arc<BdrRing>, mats: Vec<ToricMatrix>) -> Result<Self> {
        let d = mats.len();
        let rank = check_mats(ring, d, &mats)?;
        Ok(TConnection { ring: ring.clone(), d, rank, mats })
    }

    pub fn ring(&self) -> &Arc<BdrRing> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mats(&self) -> &[ToricMatrix] {
        &self.mats
    }
}

fn vp(mut x: i64, p: i64) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn identity(ring: &Arc<BdrRing>, d: usize, r: usize) -> ToricMatrix {
    Matrix::identity(r, &ToricElement::one(ring, d))
}

fn partial_matrix(m: &ToricMatrix, gamma: &GammaVector) -> ToricMatrix {
    m.map(|x| x.partial_gamma(gamma))
}

fn scale_matrix(m: &ToricMatrix, num: i64, den: i64) -> ToricMatrix {
    m.map(|x| x.map_coeffs(|c| c.mul_int(num).div_int(den)))
}

/// `Phi_i act_{beta_i}(Phi_j) - Phi_j act_{beta_j}(Phi_i)` for `i < j`.
pub fn cocycle_check(phi: &Cocycle) -> Result<(bool, Vec<ToricMatrix>)> {
    let mut residuals = Vec::new();
    for i in 0..phi.d {
        for j in i + 1..phi.d {
            let (bi, bj) = (phi.generator(i), phi.generator(j));
            let lhs = phi.mats[i].mul(&phi.act(&bi, &phi.mats[j])?);
            let rhs = phi.mats[j].mul(&phi.act(&bj, &phi.mats[i])?);
            residuals.push(lhs.sub(&rhs));
        }
    }
    Ok((residuals.iter().all(|r| r.is_zero()), residuals))
}

/// `Phi^{(a)}` at step `beta`: `Phi act_beta(Phi) ... act_{(a-1) beta}(Phi)`;
/// negative `a` goes through `Phi_{-beta} = act_{-beta}(Phi)^{-1}`.
pub fn twisted_power(phi: &ToricMatrix, beta: &GammaVector, a: i64, twist: TwistTag) -> Result<ToricMatrix> {
    let like = phi.get(0, 0);
    let (base, step) = if a >= 0 {
        (phi.clone(), beta.clone())
    } else {
        let neg = beta.scale(-1);
        (twist.act_matrix(&neg, phi)?.inverse()?, neg)
    };
    let mut out = Matrix::identity(phi.rows(), like);
    let mut offset = GammaVector::zero(beta.dim());
    for _ in 0..a.unsigned_abs() {
        out = out.mul(&twist.act_matrix(&offset, &base)?);
        offset = offset.add(&step);
    }
    Ok(out)
}

/// `Phi_gamma` for `gamma` in the cocycle's domain, as the ordered twisted
/// product over the generators.
pub fn cocycle_eval(phi: &Cocycle, gamma: &GammaVector) -> Result<ToricMatrix> {
    if gamma.dim() != phi.d {
        return Err(Error::Shape("gamma dimension differs from the cocycle's".into()));
    }
    if gamma.0.iter().any(|g| g % phi.scale != 0) {
        return Err(Error::DomainViolation(format!("{:?} is not in {} Gamma", gamma.0, phi.scale)));
    }
    let mut out = identity(&phi.ring, phi.d, phi.rank);
    let mut offset = GammaVector::zero(phi.d);
    for i in 0..phi.d {
        let a = gamma.0[i] / phi.scale;
        let beta = phi.generator(i);
        let pw = twisted_power(&phi.mats[i], &beta, a, phi.twist)?;
        out = out.mul(&phi.act(&offset, &pw)?);
        offset = offset.add(&beta.scale(a));
    }
    Ok(out)
}

/// `d_i(phi_j) - d_j(phi_i) + [phi_i, phi_j]` for `i < j`.
pub fn integrability_check(nabla: &TConnection) -> (bool, Vec<ToricMatrix>) {
    let mut residuals = Vec::new();
    for i in 0..nabla.d {
        for j in i + 1..nabla.d {
            let gi = GammaVector::basis(nabla.d, i, 1);
            let gj = GammaVector::basis(nabla.d, j, 1);
            let r = partial_matrix(&nabla.mats[j], &gi)
                .sub(&partial_matrix(&nabla.mats[i], &gj))
                .add(&nabla.mats[i].commutator(&nabla.mats[j]));
            residuals.push(r);
        }
    }
    (residuals.iter().all(|r| r.is_zero()), residuals)
}

/// `phi_i -> V^{-1} phi_i V + V^{-1} partial_{gamma_i}(V)`.
pub fn gauge_transform(nabla: &TConnection, v: &ToricMatrix) -> Result<TConnection> {
    let v_inv = v.inverse()?;
    let mats = (0..nabla.d)
        .map(|i| {
            let g = GammaVector::basis(nabla.d, i, 1);
            v_inv.mul(&nabla.mats[i]).mul(v).add(&v_inv.mul(&partial_matrix(v, &g)))
        })
        .collect();
    TConnection::new(&nabla.ring, mats)
}

/// `Phi_i -> V^{-1} Phi_i act_{beta_i}(V)`.
pub fn cocycle_gauge(phi: &Cocycle, v: &ToricMatrix) -> Result<Cocycle> {
    let v_inv = v.inverse()?;
    let mats = (0..phi.d)
        .map(|i| Ok(v_inv.mul(&phi.mats[i]).mul(&phi.act(&phi.generator(i), v)?)))
        .collect::<Result<Vec<_>>>()?;
    Cocycle::with_scale(&phi.ring, phi.scale, phi.twist, mats)
}

/// Series weights of a family of matrices: the minimal valuation of the
/// `theta` parts and, per higher digit `i`, the minimal valuation there.
struct Weights {
    theta: Option<i64>,
    digits: Vec<Option<i64>>,
    level: u32,
}

fn weights(mats: &[ToricMatrix], alpha: u32) -> Weights {
    let mut w = Weights { theta: None, digits: vec![None; alpha as usize], level: 0 };
    let min = |a: Option<i64>, b: Option<i64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    };
    for m in mats {
        for x in m.entries() {
            w.level = w.level.max(x.reduced_level());
            for (_, c) in x.terms() {
                w.theta = min(w.theta, c.digit(0).valuation());
                for i in 1..alpha as usize {
                    w.digits[i] = min(w.digits[i], c.digit(i).valuation());
                }
            }
        }
    }
    w
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn vp_factorial(j: i64, p: i64) -> i64 {
    let mut v = 0;
    let mut q = p;
    while q <= j {
        v += j / q;
        q *= p;
    }
    v
}

fn ilog(n: i64, p: i64) -> i64 {
    let mut v = 0;
    let mut q = p;
    while q <= n {
        v += 1;
        q *= p;
    }
    v
}

/// Weight of `t` making every piece of the operator raise weight by `c`.
fn t_weight(c: i64, w: &Weights, alpha: u32, p: i64, with_act: bool) -> i64 {
    let mut tw = c;
    for i in 1..alpha as usize {
        if let Some(v) = w.digits[i] {
            tw = tw.max(ceil_div(c - v, i as i64));
        }
    }
    if with_act {
        for j in 1..alpha as i64 {
            tw = tw.max(ceil_div(c + vp_factorial(j, p), j));
        }
    }
    tw
}

/// Operator `v -> Phi act_beta(v) - v` on columns.
fn apply_n(phi: &ToricMatrix, beta: &GammaVector, twist: TwistTag, v: &[ToricElement]) -> Result<Vec<ToricElement>> {
    let acted = v.iter().map(|x| twist.act(beta, x)).collect::<Result<Vec<_>>>()?;
    Ok(phi.mul_vec(&acted).iter().zip(v).map(|(a, b)| a.sub(b)).collect())
}

fn minus_identity(m: &ToricMatrix) -> ToricMatrix {
    m.sub(&Matrix::identity(m.rows(), &m.get(0, 0).one_like()))
}

fn zero_column(like: &ToricElement, r: usize) -> Vec<ToricElement> {
    vec![ToricElement::zero(like.ring(), like.dim()); r]
}

fn unit_column(like: &ToricElement, r: usize, j: usize) -> Vec<ToricElement> {
    let mut v = zero_column(like, r);
    v[j] = ToricElement::one(like.ring(), like.dim());
    v
}

/// Number of series terms and the absolute precision of the sum.
struct Plan {
    terms: i64,
    abs: i64,
}

/// Plan for a series whose operator is `mats` (already minus the identity
/// for the logarithm) in the weight filtration described in the module docs.
fn plan(ring: &BdrRing, mats: &[ToricMatrix], c_min: i64, max_level: u32, log: bool) -> Result<Plan> {
    let prof = ring.profile();
    let (p, alpha, abs) = (prof.p as i64, prof.alpha, prof.n as i64);
    let w = weights(mats, alpha);
    if w.level > max_level {
        return Err(Error::DomainViolation(format!(
            "toric level {} exceeds the cocycle level {max_level}",
            w.level
        )));
    }
    let c = w.theta.unwrap_or(abs).min(abs);
    if c < c_min {
        return Err(Error::DomainViolation(format!("theta-valuation {c} is below the convergence bound {c_min}")));
    }
    let tw = t_weight(c, &w, alpha, p, log);
    let loss = tw * (alpha as i64 - 1);
    let mut n = 1;
    loop {
        let denominators = if log { ilog(n, p) } else { (n - 1) / (p - 1) };
        if n * c - loss - denominators >= abs {
            break;
        }
        n += 1;
        if n > 10_000 {
            return Err(Error::PrecisionExhausted("series length bound diverged".into()));
        }
    }
    Ok(Plan { terms: n, abs })
}

fn operator_log(
    phi: &ToricMatrix,
    beta: &GammaVector,
    twist: TwistTag,
    v: &[ToricElement],
    plan: &Plan,
) -> Result<Vec<ToricElement>> {
    let mut term = v.to_vec();
    let mut sum = zero_column(&v[0], v.len());
    for n in 1..=plan.terms {
        term = apply_n(phi, beta, twist, &term)?;
        if term.iter().all(|x| x.is_zero()) {
            break;
        }
        let sign = if n % 2 == 1 { 1 } else { -1 };
        for (s, x) in sum.iter_mut().zip(&term) {
            *s = s.add(&x.map_coeffs(|c| c.mul_int(sign).div_int(n)));
        }
    }
    Ok(sum.iter().map(|x| x.truncate(plan.abs)).collect())
}

fn check_twist(twist: TwistTag) -> Result<()> {
    if twist == TwistTag::Galois {
        // on analytic vectors the Galois twist is trivial, so its log has no derivation part
        return Err(Error::TwistMismatch);
    }
    Ok(())
}

/// The operator logarithm with the default convergence bound `c = 2`.
pub fn log_correspondence(phi: &Cocycle) -> Result<TConnection> {
    log_correspondence_with(phi, 2)
}

/// `phi_i = log(G_{beta_i}) / scale` on the constant frame, requiring
/// `theta(Phi_i - I)` divisible by `p^c_min` and toric level at most `v_p(scale)`.
pub fn log_correspondence_with(phi: &Cocycle, c_min: i64) -> Result<TConnection> {
    check_twist(phi.twist)?;
    let shifted: Vec<ToricMatrix> = phi.mats.iter().map(minus_identity).collect();
    let plan = plan(&phi.ring, &shifted, c_min, phi.level(), true)?;
    let like = phi.mats[0].get(0, 0).clone();
    let r = phi.rank;
    let mut mats = Vec::with_capacity(phi.d);
    for i in 0..phi.d {
        let beta = phi.generator(i);
        let cols = (0..r)
            .map(|j| operator_log(&phi.mats[i], &beta, phi.twist, &unit_column(&like, r, j), &plan))
            .collect::<Result<Vec<_>>>()?;
        let l = Matrix::from_columns(&cols);
        // Leibniz spot check: log G (T_1 e_0) = partial(T_1) e_0 + T_1 log G (e_0)
        let a = ToricElement::var(&phi.ring, phi.d, 0);
        let mut v = zero_column(&like, r);
        v[0] = a.clone();
        let lhs = operator_log(&phi.mats[i], &beta, phi.twist, &v, &plan)?;
        let da = a.partial_gamma(&beta);
        let leibniz = lhs.iter().enumerate().all(|(row, x)| {
            let mut rhs = a.mul(&cols[0][row]);
            if row == 0 {
                rhs = rhs.add(&da);
            }
            x.sub(&rhs).is_zero()
        });
        if !leibniz {
            return Err(Error::NotACocycle("Leibniz certificate failed".into()));
        }
        mats.push(scale_matrix(&l, 1, phi.scale));
    }
    let nabla = TConnection::new(&phi.ring, mats)?;
    if !integrability_check(&nabla).0 {
        return Err(Error::NotACocycle("the logarithm is not integrable".into()));
    }
    Ok(nabla)
}

/// The operator exponential on `p^m Gamma`, twisted by `exp(partial)`.
pub fn exp_correspondence(nabla: &TConnection, m: u32) -> Result<Cocycle> {
    let scale = nabla.ring.p().pow(m) as i64;
    exp_correspondence_with(nabla, scale, TwistTag::ExpDerivation, 2)
}

/// `Phi_i = exp(partial_{beta_i} + scale phi_i)` on the constant frame.
pub fn exp_correspondence_with(nabla: &TConnection, scale: i64, twist: TwistTag, c_min: i64) -> Result<Cocycle> {
    check_twist(twist)?;
    if !integrability_check(nabla).0 {
        return Err(Error::NotIntegrable);
    }
    let p = nabla.ring.p() as i64;
    let scaled: Vec<ToricMatrix> = nabla.mats.iter().map(|m| scale_matrix(m, scale, 1)).collect();
    let plan = plan(&nabla.ring, &scaled, c_min, vp(scale, p), false)?;
    let like = nabla.mats[0].get(0, 0).clone();
    let r = nabla.rank;
    let mut mats = Vec::with_capacity(nabla.d);
    for (i, sphi) in scaled.iter().enumerate() {
        let beta = GammaVector::basis(nabla.d, i, scale);
        let mut cols = Vec::with_capacity(r);
        for j in 0..r {
            let mut term = unit_column(&like, r, j);
            let mut sum = term.clone();
            for n in 1..=plan.terms {
                let flow = sphi.mul_vec(&term);
                term = term
                    .iter()
                    .zip(&flow)
                    .map(|(x, f)| x.partial_gamma(&beta).add(f).map_coeffs(|c| c.div_int(n)))
                    .collect();
                if term.iter().all(|x| x.is_zero()) {
                    break;
                }
                sum = sum.iter().zip(&term).map(|(s, x)| s.add(x)).collect();
            }
            cols.push(sum.iter().map(|x| x.truncate(plan.abs)).collect::<Vec<_>>());
        }
        mats.push(Matrix::from_columns(&cols));
    }
    Cocycle::with_scale(&nabla.ring, scale, twist, mats)
}

/// Smallest `m` with `p^m phi_i` in the convergence regime `theta(p^m phi) = 0 mod p^c`
/// and all toric levels at most `m`.
pub fn minimal_level(nabla: &TConnection, c: i64) -> u32 {
    let w = weights(&nabla.mats, nabla.ring.alpha());
    let need = w.theta.map_or(0, |v| (c - v).max(0)) as u32;
    need.max(w.level)
}

#[cfg(test)]
mod tests;
