use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Checks that `p` is an odd prime that fits the residue representation.
pub fn check_odd_prime(p: u64) -> Result<u32> {
    if p < 3 || p.is_multiple_of(2) || p > u32::MAX as u64 {
        return Err(Error::NotOddPrime(p));
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return Err(Error::NotOddPrime(p));
        }
        d += 2;
    }
    Ok(p as u32)
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    if s >= p as u64 {
        (s - p as u64) as u32
    } else {
        s as u32
    }
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `a` must be nonzero mod the prime `p`.
pub(crate) fn inv_mod(a: u32, p: u32) -> Result<u32> {
    if a.is_multiple_of(p) {
        return Err(Error::DivisionByZero);
    }
    Ok(pow_mod(a, p as u64 - 2, p))
}

/// Reduces a signed integer into `[0, p)`.
pub(crate) fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// Square root mod an odd prime by Tonelli-Shanks. Returns the root with the
/// smaller representative, or `None` for a non-residue.
pub(crate) fn sqrt_mod(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p as u64 - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p as u64 - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u32;
    while pow_mod(z, (p as u64 - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// An element of the prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: u32,
}

impl Fp {
    /// Builds `value mod p`. The modulus is not re-checked for primality; use
    /// [`check_odd_prime`] at the boundary.
    pub fn new(value: u64, p: u32) -> Self {
        Fp {
            value: (value % p as u64) as u32,
            p,
        }
    }

    pub fn from_i64(value: i64, p: u32) -> Self {
        Fp {
            value: reduce_i64(value, p),
            p,
        }
    }

    pub fn zero(p: u32) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: u32) -> Self {
        Fp { value: 1, p }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Self> {
        Ok(Fp {
            value: inv_mod(self.value, self.p)?,
            p: self.p,
        })
    }

    pub fn pow(self, exp: u64) -> Self {
        Fp {
            value: pow_mod(self.value, exp, self.p),
            p: self.p,
        }
    }

    /// The square root with the smaller representative, if one exists.
    pub fn sqrt(self) -> Option<Self> {
        sqrt_mod(self.value, self.p).map(|value| Fp { value, p: self.p })
    }

    pub fn is_square(self) -> bool {
        self.sqrt().is_some()
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "field modulus mismatch");
        Fp {
            value: add_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "field modulus mismatch");
        Fp {
            value: sub_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "field modulus mismatch");
        Fp {
            value: mul_mod(self.value, rhs.value, self.p),
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: neg_mod(self.value, self.p),
            p: self.p,
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp {
    fn mul_assign(&mut self, rhs: Fp) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let two = Fp::new(2, 3);
        assert_eq!((two + two).value(), 1);
        assert_eq!(two.inv().unwrap().value(), 2);
        assert_eq!(Fp::zero(3).inv(), Err(Error::DivisionByZero));
        assert_eq!((-Fp::one(7)).value(), 6);
        assert_eq!(Fp::from_i64(-1, 5).value(), 4);
    }

    #[test]
    fn multiplicative_identity() {
        for p in [3u32, 5, 7, 11] {
            for x in 0..p {
                let x = Fp::new(x as u64, p);
                assert_eq!(x * Fp::one(p), x);
            }
        }
    }

    #[test]
    fn inverses() {
        for p in [3u32, 5, 7, 11, 101] {
            for x in 1..p {
                let x = Fp::new(x as u64, p);
                assert_eq!(x * x.inv().unwrap(), Fp::one(p));
            }
        }
    }

    #[test]
    fn primality() {
        assert!(check_odd_prime(3).is_ok());
        assert!(check_odd_prime(11).is_ok());
        assert!(check_odd_prime(2).is_err());
        assert!(check_odd_prime(9).is_err());
        assert!(check_odd_prime(1).is_err());
    }

    #[test]
    fn square_roots_pick_small_branch() {
        assert_eq!(sqrt_mod(4, 7), Some(2));
        assert_eq!(sqrt_mod(1, 3), Some(1));
        assert_eq!(sqrt_mod(2, 3), None);
        for p in [3u32, 5, 7, 11, 13, 17, 41, 97] {
            for a in 1..p {
                match sqrt_mod(a, p) {
                    Some(r) => {
                        assert_eq!(mul_mod(r, r, p), a);
                        assert!(r <= p - r);
                    }
                    None => assert!((1..p).all(|x| mul_mod(x, x, p) != a)),
                }
            }
        }
    }
}
