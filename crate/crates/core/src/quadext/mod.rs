//! The quadratic extension `L = F_p(t)(beta)` with `beta^2 = 1 + t^-1`.
//!
//! [`QuadElem`] is exact; series only appear through [`embed_pair`] and
//! [`eta_map`], which realise `L -> K x K` and `K x F_p((t)) -> K x K`.

mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, Fp, LaurentSeries, Orientation, PairElem, Poly};
use crate::error::{Error, Result};

pub use ratfunc::RatFunc;
use ratfunc::RatFuncJson;

/// `j + k beta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadJson", into = "QuadJson")]
pub struct QuadElem {
    j: RatFunc,
    k: RatFunc,
}

#[derive(Serialize, Deserialize)]
struct QuadJson {
    p: u64,
    j: RatFuncJson,
    k: RatFuncJson,
}

impl TryFrom<QuadJson> for QuadElem {
    type Error = Error;
    fn try_from(q: QuadJson) -> Result<Self> {
        let p = check_odd_prime(q.p)?;
        Ok(QuadElem::new(q.j.into_ratfunc(p)?, q.k.into_ratfunc(p)?))
    }
}

impl From<QuadElem> for QuadJson {
    fn from(q: QuadElem) -> Self {
        QuadJson {
            p: q.modulus() as u64,
            j: (&q.j).into(),
            k: (&q.k).into(),
        }
    }
}

/// `beta^2 = (t + 1) / t`.
fn beta_squared(p: u32) -> RatFunc {
    RatFunc::new(Poly::from_coeffs(p, &[1, 1]), Poly::t(p)).expect("t is nonzero")
}

impl QuadElem {
    pub fn new(j: RatFunc, k: RatFunc) -> Self {
        assert_eq!(j.modulus(), k.modulus(), "quadratic element modulus mismatch");
        QuadElem { j, k }
    }

    pub fn from_ratfunc(j: RatFunc) -> Self {
        let p = j.modulus();
        QuadElem::new(j, RatFunc::zero(p))
    }

    pub fn from_poly(j: Poly) -> Self {
        QuadElem::from_ratfunc(RatFunc::from_poly(j))
    }

    /// `j + k beta` with polynomial coordinates.
    pub fn from_polys(j: Poly, k: Poly) -> Self {
        QuadElem::new(RatFunc::from_poly(j), RatFunc::from_poly(k))
    }

    pub fn zero(p: u32) -> Self {
        QuadElem::from_ratfunc(RatFunc::zero(p))
    }

    pub fn one(p: u32) -> Self {
        QuadElem::from_ratfunc(RatFunc::one(p))
    }

    pub fn beta(p: u32) -> Self {
        QuadElem::new(RatFunc::zero(p), RatFunc::one(p))
    }

    pub fn t(p: u32) -> Self {
        QuadElem::from_ratfunc(RatFunc::t(p))
    }

    /// `t beta`, the second basis vector of `F_p[t, t beta]`.
    pub fn t_beta(p: u32) -> Self {
        QuadElem::new(RatFunc::zero(p), RatFunc::t(p))
    }

    /// `(beta - 1) / (beta + 1) = (2t + 1) - 2t beta`, a unit of
    /// `F_p[t, t beta]` with `|.| = p^-1` at the first place.
    pub fn unit(p: u32) -> Self {
        QuadElem::from_polys(Poly::from_coeffs(p, &[1, 2]), Poly::from_coeffs(p, &[0, -2]))
    }

    pub fn modulus(&self) -> u32 {
        self.j.modulus()
    }

    pub fn j(&self) -> &RatFunc {
        &self.j
    }

    pub fn k(&self) -> &RatFunc {
        &self.k
    }

    pub fn is_zero(&self) -> bool {
        self.j.is_zero() && self.k.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        QuadElem::new(self.j.add(&other.j), self.k.add(&other.k))
    }

    pub fn sub(&self, other: &Self) -> Self {
        QuadElem::new(self.j.sub(&other.j), self.k.sub(&other.k))
    }

    pub fn neg(&self) -> Self {
        QuadElem::new(self.j.neg(), self.k.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let b2 = beta_squared(self.modulus());
        let j = self.j.mul(&other.j).add(&self.k.mul(&other.k).mul(&b2));
        let k = self.j.mul(&other.k).add(&self.k.mul(&other.j));
        QuadElem::new(j, k)
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        QuadElem::new(self.j.mul(c), self.k.mul(c))
    }

    /// The nontrivial automorphism `tau: beta -> -beta`.
    pub fn conj(&self) -> Self {
        QuadElem::new(self.j.clone(), self.k.neg())
    }

    /// `(j + k beta)(j - k beta) = j^2 - k^2 (1 + t^-1)`.
    pub fn norm(&self) -> RatFunc {
        let b2 = beta_squared(self.modulus());
        self.j.mul(&self.j).sub(&self.k.mul(&self.k).mul(&b2))
    }

    pub fn trace(&self) -> RatFunc {
        self.j.add(&self.j)
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(&n.inv()?))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(QuadElem::one(self.modulus()), |acc, _| acc.mul(self))
    }

    /// Membership in the integral closure `F_p[t, t beta]`: `j` a polynomial
    /// and `k` a polynomial divisible by `t`.
    pub fn is_integral(&self) -> bool {
        let k_ok = match self.k.as_poly() {
            Some(k) => k.is_zero() || k.coeff(0).is_zero(),
            None => false,
        };
        self.j.as_poly().is_some() && k_ok
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({}) beta", self.j, self.k)
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        QuadElem::add(self, rhs)
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        QuadElem::sub(self, rhs)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        QuadElem::mul(self, rhs)
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::neg(self)
    }
}

/// The branch of `sqrt(1 + t^-1)` in `K` with constant term 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSeries {
    p: u32,
    series: LaurentSeries,
}

impl BetaSeries {
    pub fn new(p: u64, prec: i64) -> Result<Self> {
        let p = check_odd_prime(p)?;
        if prec < 3 {
            return Err(Error::InsufficientPrecision(format!(
                "beta needs prec >= 3, got {prec}"
            )));
        }
        let mut c = vec![0i64; prec as usize];
        c[0] = 1;
        c[1] = 1;
        let root = LaurentSeries::from_coeffs(p, Orientation::TInv, 0, &c).sqrt()?;
        let series = if root.coeff(0).map(Fp::value) == Some(1) {
            root
        } else {
            root.neg()
        };
        Ok(BetaSeries { p, series })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.series.prec()
    }

    pub fn series(&self) -> &LaurentSeries {
        &self.series
    }

    /// `(beta - 1) / (beta + 1)` at the first place, `|.| = p^-1`.
    pub fn unit_series(&self) -> LaurentSeries {
        embed_first(&QuadElem::unit(self.p), self)
    }
}

pub fn beta_series(p: u64, prec: i64) -> Result<BetaSeries> {
    BetaSeries::new(p, prec)
}

fn embed_first(a: &QuadElem, beta: &BetaSeries) -> LaurentSeries {
    embed_pair(a, beta).first
}

/// `phi_L(a) = (a, tau(a))` in `K x K`.
pub fn embed_pair(a: &QuadElem, beta: &BetaSeries) -> PairElem {
    assert_eq!(a.modulus(), beta.modulus(), "modulus mismatch");
    let prec = beta.prec();
    let b = beta.series();
    // Extra room so that `k beta` is limited only by the precision of beta.
    let k_deg = a.k.num().coeffs().len() as i64;
    let j = a.j.to_series(Orientation::TInv, prec);
    let k = a.k.to_series(Orientation::TInv, prec + k_deg);
    let kb = k.mul(b);
    PairElem::new(j.add(&kb), j.sub(&kb))
}

/// `eta(x, y)`: substitutes `t^-1 -> (beta - 1)/(beta + 1)` in `x` and
/// `t -> (beta - 1)/(beta + 1)` in `y`.
pub fn eta_map(x: &LaurentSeries, y: &LaurentSeries, beta: &BetaSeries) -> Result<PairElem> {
    if x.orientation() != Orientation::TInv || y.orientation() != Orientation::T {
        return Err(Error::Domain(
            "eta expects a series in t^-1 and a series in t".into(),
        ));
    }
    let s = beta.unit_series();
    Ok(PairElem::new(x.substitute(&s)?, y.substitute(&s)?))
}
