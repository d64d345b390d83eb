use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{Fp, LaurentSeries, Orientation, Poly};
use crate::error::{Error, Result};

/// Reduced quotient `num / den` in `F_p(t)` with `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Coefficient lists only; the modulus travels with the enclosing object.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RatFuncJson {
    pub num: Vec<u64>,
    pub den: Vec<u64>,
}

impl RatFuncJson {
    pub(crate) fn into_ratfunc(self, p: u32) -> Result<RatFunc> {
        let poly = |c: Vec<u64>| -> Result<Poly> {
            if let Some(x) = c.iter().find(|&&x| x >= p as u64) {
                return Err(Error::Invalid(format!("coefficient {x} not reduced mod {p}")));
            }
            Ok(Poly::from_coeffs(p, &c.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        };
        RatFunc::new(poly(self.num)?, poly(self.den)?)
    }
}

impl From<&RatFunc> for RatFuncJson {
    fn from(r: &RatFunc) -> Self {
        RatFuncJson {
            num: r.num.coeffs().iter().map(|&c| c as u64).collect(),
            den: r.den.coeffs().iter().map(|&c| c as u64).collect(),
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        assert_eq!(num.modulus(), den.modulus(), "rational function modulus mismatch");
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.modulus()));
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g)?;
        let (den, _) = den.divmod(&g)?;
        let lead = den.leading().inv()?;
        Ok(RatFunc {
            num: num.scale(lead),
            den: den.scale(lead),
        })
    }

    pub fn from_poly(num: Poly) -> Self {
        let p = num.modulus();
        RatFunc {
            num,
            den: Poly::one(p),
        }
    }

    pub fn zero(p: u32) -> Self {
        RatFunc::from_poly(Poly::zero(p))
    }

    pub fn one(p: u32) -> Self {
        RatFunc::from_poly(Poly::one(p))
    }

    pub fn constant(c: Fp) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn t(p: u32) -> Self {
        RatFunc::from_poly(Poly::t(p))
    }

    /// `t^k` for any integer `k`.
    pub fn t_power(p: u32, k: i64) -> Self {
        let mono = Poly::monomial(Fp::one(p), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc::from_poly(mono)
        } else {
            RatFunc {
                num: Poly::one(p),
                den: mono,
            }
        }
    }

    pub fn modulus(&self) -> u32 {
        self.num.modulus()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this equals, if any.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn scale(&self, c: Fp) -> Self {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Expansion in `K` (or in `F_p((t))`) known to absolute precision `prec`.
    pub fn to_series(&self, orientation: Orientation, prec: i64) -> LaurentSeries {
        let p = self.modulus();
        if self.is_zero() {
            return LaurentSeries::zero(p, orientation, prec);
        }
        let span = (self.num.coeffs().len() + 2 * self.den.coeffs().len()) as i64;
        let work = prec + span;
        let num = LaurentSeries::from_poly(&self.num, orientation, work);
        let den = LaurentSeries::from_poly(&self.den, orientation, work);
        let out = num.div(&den).expect("nonzero denominator");
        debug_assert!(out.prec() >= prec);
        out.truncate(prec)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::add(self, rhs)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::sub(self, rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::mul(self, rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc::neg(self)
    }
}
