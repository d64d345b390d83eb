use std::fmt;

use serde::{Deserialize, Serialize};

use super::abs::AbsExp;
use super::fp::{add_mod, inv_mod, mul_mod, neg_mod, sub_mod, Fp};
use crate::error::{Error, Result};

/// A polynomial in `F_p[t]`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    p: u64,
    coeffs: Vec<u64>,
}

impl TryFrom<PolyJson> for Poly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Self> {
        let p = super::fp::check_odd_prime(j.p)?;
        if let Some(c) = j.coeffs.iter().find(|&&c| c >= p as u64) {
            return Err(Error::Invalid(format!("coefficient {c} not reduced mod {p}")));
        }
        Ok(Poly::from_raw(p, j.coeffs.into_iter().map(|c| c as u32).collect()))
    }
}

impl From<Poly> for PolyJson {
    fn from(poly: Poly) -> Self {
        PolyJson {
            p: poly.p as u64,
            coeffs: poly.coeffs.into_iter().map(u64::from).collect(),
        }
    }
}

impl Poly {
    /// Builds from residues already reduced mod `p`, trimming trailing zeros.
    pub(crate) fn from_raw(p: u32, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    /// Builds from arbitrary signed integers, reducing mod `p`.
    pub fn from_coeffs(p: u32, coeffs: &[i64]) -> Self {
        Poly::from_raw(p, coeffs.iter().map(|&c| super::fp::reduce_i64(c, p)).collect())
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: vec![] }
    }

    pub fn one(p: u32) -> Self {
        Poly { p, coeffs: vec![1] }
    }

    pub fn constant(c: Fp) -> Self {
        Poly::from_raw(c.modulus(), vec![c.value()])
    }

    /// `c * t^d`.
    pub fn monomial(c: Fp, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c.value();
        Poly::from_raw(c.modulus(), coeffs)
    }

    /// The variable `t`.
    pub fn t(p: u32) -> Self {
        Poly::from_raw(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fp {
        Fp::new(self.coeffs.get(i).copied().unwrap_or(0) as u64, self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `|N| = p^deg N`, and `-inf` for zero.
    pub fn abs(&self) -> AbsExp {
        match self.deg() {
            Some(d) => AbsExp::finite(d as i64),
            None => AbsExp::NEG_INF,
        }
    }

    pub fn leading(&self) -> Fp {
        Fp::new(self.coeffs.last().copied().unwrap_or(0) as u64, self.p)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.p, other.p, "polynomial modulus mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                add_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Poly::from_raw(self.p, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.p, other.p, "polynomial modulus mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                sub_mod(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                    self.p,
                )
            })
            .collect();
        Poly::from_raw(self.p, c)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| neg_mod(c, self.p)).collect(),
        }
    }

    pub fn scale(&self, c: Fp) -> Poly {
        assert_eq!(self.p, c.modulus(), "polynomial modulus mismatch");
        Poly::from_raw(
            self.p,
            self.coeffs.iter().map(|&x| mul_mod(x, c.value(), self.p)).collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.p, other.p, "polynomial modulus mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::from_raw(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    /// Multiplies by `t^d`.
    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; d];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { p: self.p, coeffs }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        assert_eq!(self.p, divisor.p, "polynomial modulus mismatch");
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let p = self.p;
        let lead_inv = inv_mod(*divisor.coeffs.last().unwrap(), p)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(p), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], lead_inv, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_raw(p, quot), Poly::from_raw(p, rem)))
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(Fp::zero(self.p), |acc, &c| acc * x + Fp::new(c as u64, self.p))
    }

    /// The multiplicity of `t` as a factor (`None` for zero).
    pub fn t_adic_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_is_degree() {
        let p = Poly::from_coeffs(3, &[1, 0, 1]);
        assert_eq!(p.abs(), AbsExp::finite(2));
        assert_eq!(Poly::zero(3).abs(), AbsExp::NEG_INF);
        assert_eq!(Poly::zero(3).deg(), None);
    }

    #[test]
    fn divmod_example() {
        // t^3 + t = (t^2 + 2t + 2)(t + 1) + 1 over F_3
        let a = Poly::from_coeffs(3, &[0, 1, 0, 1]);
        let b = Poly::from_coeffs(3, &[1, 1]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(q, Poly::from_coeffs(3, &[2, 2, 1]));
        assert_eq!(r, Poly::one(3));
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn divide_by_zero() {
        let a = Poly::from_coeffs(5, &[1, 2]);
        assert_eq!(a.divmod(&Poly::zero(5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_and_trim() {
        let a = Poly::from_coeffs(5, &[1, 1]).mul(&Poly::from_coeffs(5, &[2, 1]));
        let b = Poly::from_coeffs(5, &[1, 1]).mul(&Poly::from_coeffs(5, &[3, 0, 1]));
        assert_eq!(a.gcd(&b), Poly::from_coeffs(5, &[1, 1]));
        assert_eq!(Poly::from_coeffs(3, &[1, 0, 3]).deg(), Some(0));
        assert_eq!(Poly::from_coeffs(3, &[0, 2, 1]).to_string(), "t^2 + 2t");
    }

    #[test]
    fn json_round_trip() {
        let a = Poly::from_coeffs(7, &[3, 0, 6]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"p":7,"coeffs":[3,0,6]}"#);
        let b: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<Poly>(r#"{"p":7,"coeffs":[9]}"#).is_err());
        assert!(serde_json::from_str::<Poly>(r#"{"p":4,"coeffs":[1]}"#).is_err());
    }
}
