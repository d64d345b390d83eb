//! Truncated Laurent series over `F_p` with an explicit absolute-precision
//! window.
//!
//! A series stores the coefficients with index `n` in `[start, prec)` and
//! stands for
//!
//! ```text
//!     sum_{n = start}^{prec - 1} c_n x^{-n}  +  O(x^{-prec})
//! ```
//!
//! where `x = t` for [`Orientation::TInv`] (elements of `F_p((t^-1))`) and
//! `x = t^-1` for [`Orientation::T`] (elements of `F_p((t))`). In both cases
//! `|c x^{-n}| = p^{-n}`, so all arithmetic is orientation-blind and only the
//! conversion to and from polynomials in `t` looks at the flag.
//!
//! Coefficients below `start` are exactly zero. A series whose stored
//! coefficients all vanish only carries the bound `|x| <= p^{-prec}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::abs::Magnitude;
use super::fp::{self, add_mod, inv_mod, mul_mod, neg_mod, sub_mod, Fp};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Series in `t^-1`: the field `K = F_p((t^-1))`.
    #[serde(rename = "tinv")]
    TInv,
    /// Series in `t`: the completion `F_p((t))` at the prime `t`.
    #[serde(rename = "t")]
    T,
}

impl Orientation {
    /// Window index carrying the coefficient of `t^k`.
    pub fn index_of_t_power(self, k: i64) -> i64 {
        match self {
            Orientation::TInv => -k,
            Orientation::T => k,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "LaurentJson", into = "LaurentJson")]
pub struct LaurentSeries {
    p: u32,
    orientation: Orientation,
    start: i64,
    prec: i64,
    coeffs: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    p: u64,
    orientation: Orientation,
    start: i64,
    prec: i64,
    coeffs: Vec<u64>,
}

impl TryFrom<LaurentJson> for LaurentSeries {
    type Error = Error;
    fn try_from(j: LaurentJson) -> Result<Self> {
        let p = fp::check_odd_prime(j.p)?;
        if let Some(c) = j.coeffs.iter().find(|&&c| c >= p as u64) {
            return Err(Error::Invalid(format!("coefficient {c} not reduced mod {p}")));
        }
        LaurentSeries::new(
            p,
            j.orientation,
            j.start,
            j.prec,
            j.coeffs.into_iter().map(|c| c as u32).collect(),
        )
    }
}

impl From<LaurentSeries> for LaurentJson {
    fn from(s: LaurentSeries) -> Self {
        LaurentJson {
            p: s.p as u64,
            orientation: s.orientation,
            start: s.start,
            prec: s.prec,
            coeffs: s.coeffs.into_iter().map(u64::from).collect(),
        }
    }
}

/// Two series are equal when they share modulus, orientation and precision
/// and every coefficient below `prec` matches; leading stored zeros are
/// irrelevant.
impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.orientation == other.orientation
            && self.prec == other.prec
            && (self.start.min(other.start)..self.prec).all(|n| self.raw(n) == other.raw(n))
    }
}

impl Eq for LaurentSeries {}

/// `sum_i a_i b_i mod p` without a reduction per term when `p` is small.
#[inline]
fn dot_mod(pairs: impl Iterator<Item = (u32, u32)>, p: u32) -> u32 {
    if p < (1 << 16) {
        let mut acc = 0u64;
        for (a, b) in pairs {
            acc += a as u64 * b as u64;
        }
        (acc % p as u64) as u32
    } else {
        let mut acc = 0u64;
        for (a, b) in pairs {
            acc = (acc + mul_mod(a, b, p) as u64) % p as u64;
        }
        acc as u32
    }
}

/// Inverse of the power series `u` (with `u[0] != 0`) to `len` terms, by
/// back-substitution.
pub(crate) fn power_series_inv(u: &[u32], len: usize, p: u32) -> Result<Vec<u32>> {
    let b0 = inv_mod(*u.first().ok_or(Error::DivisionByZero)?, p)?;
    let mut b = Vec::with_capacity(len);
    b.push(b0);
    for n in 1..len {
        let top = n.min(u.len() - 1);
        let s = dot_mod((1..=top).map(|i| (u[i], b[n - i])), p);
        b.push(mul_mod(neg_mod(s, p), b0, p));
    }
    b.truncate(len);
    Ok(b)
}

/// Product of two power series truncated to `len` terms.
pub(crate) fn power_series_mul(a: &[u32], b: &[u32], len: usize, p: u32) -> Vec<u32> {
    (0..len)
        .map(|n| {
            let lo = n.saturating_sub(b.len().saturating_sub(1));
            let hi = n.min(a.len().saturating_sub(1));
            if a.is_empty() || b.is_empty() || lo > hi {
                0
            } else {
                dot_mod((lo..=hi).map(|i| (a[i], b[n - i])), p)
            }
        })
        .collect()
}

/// Square root of the power series `u` to `len` terms by Newton iteration
/// `b <- (b + u/b) / 2`, which doubles the number of correct terms per step.
/// `b0` must square to `u[0]`.
pub(crate) fn power_series_sqrt(u: &[u32], len: usize, b0: u32, p: u32) -> Result<Vec<u32>> {
    let half = inv_mod(2, p)?;
    let mut b = vec![b0];
    let mut known = 1usize;
    while known < len {
        known = (2 * known).min(len);
        let inv_b = power_series_inv(&b, known, p)?;
        let quot = power_series_mul(&u[..known.min(u.len())], &inv_b, known, p);
        b = (0..known)
            .map(|i| mul_mod(add_mod(b.get(i).copied().unwrap_or(0), quot[i], p), half, p))
            .collect();
    }
    b.truncate(len);
    Ok(b)
}

impl LaurentSeries {
    /// Builds a series from reduced residues for indices `start..prec`.
    pub fn new(
        p: u32,
        orientation: Orientation,
        start: i64,
        prec: i64,
        coeffs: Vec<u32>,
    ) -> Result<Self> {
        if start > prec {
            return Err(Error::Invalid(format!("window start {start} exceeds precision {prec}")));
        }
        if coeffs.len() as i64 != prec - start {
            return Err(Error::Invalid(format!(
                "{} coefficients for window [{start}, {prec})",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= p) {
            return Err(Error::Invalid(format!("coefficient not reduced mod {p}")));
        }
        Ok(LaurentSeries {
            p,
            orientation,
            start,
            prec,
            coeffs,
        })
    }

    /// Builds from signed integers for indices `start, start + 1, ...`; the
    /// precision is `start + coeffs.len()`.
    pub fn from_coeffs(p: u32, orientation: Orientation, start: i64, coeffs: &[i64]) -> Self {
        LaurentSeries {
            p,
            orientation,
            start,
            prec: start + coeffs.len() as i64,
            coeffs: coeffs.iter().map(|&c| fp::reduce_i64(c, p)).collect(),
        }
    }

    /// `O(x^{-prec})`.
    pub fn zero(p: u32, orientation: Orientation, prec: i64) -> Self {
        LaurentSeries {
            p,
            orientation,
            start: prec,
            prec,
            coeffs: vec![],
        }
    }

    /// `c x^{-index} + O(x^{-prec})`; collapses to a bare bound when
    /// `index >= prec`.
    pub fn monomial(c: Fp, index: i64, orientation: Orientation, prec: i64) -> Self {
        let p = c.modulus();
        if index >= prec {
            return LaurentSeries::zero(p, orientation, prec);
        }
        let mut coeffs = vec![0; (prec - index) as usize];
        coeffs[0] = c.value();
        LaurentSeries {
            p,
            orientation,
            start: index,
            prec,
            coeffs,
        }
    }

    pub fn one(p: u32, orientation: Orientation, prec: i64) -> Self {
        LaurentSeries::monomial(Fp::one(p), 0, orientation, prec)
    }

    /// `t^k` in the given orientation.
    pub fn t_power(p: u32, k: i64, orientation: Orientation, prec: i64) -> Self {
        LaurentSeries::monomial(Fp::one(p), orientation.index_of_t_power(k), orientation, prec)
    }

    /// Embeds a polynomial in `t`.
    pub fn from_poly(poly: &Poly, orientation: Orientation, prec: i64) -> Self {
        let p = poly.modulus();
        let mut out = LaurentSeries::zero(p, orientation, prec);
        for (j, &c) in poly.coeffs().iter().enumerate() {
            if c != 0 {
                out.add_exact_term(orientation.index_of_t_power(j as i64), Fp::new(c as u64, p));
            }
        }
        out
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Stored residues for indices `start..prec`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    #[inline]
    fn raw(&self, n: i64) -> u32 {
        if n < self.start || n >= self.prec {
            0
        } else {
            self.coeffs[(n - self.start) as usize]
        }
    }

    /// Coefficient at window index `n`; `None` beyond the precision.
    pub fn coeff(&self, n: i64) -> Option<Fp> {
        (n < self.prec).then(|| Fp::new(self.raw(n) as u64, self.p))
    }

    /// Coefficient of `t^k`, if it lies inside the window.
    pub fn coeff_of_t_power(&self, k: i64) -> Option<Fp> {
        self.coeff(self.orientation.index_of_t_power(k))
    }

    /// Least index with a nonzero stored coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .map(|i| self.start + i as i64)
    }

    pub fn magnitude(&self) -> Magnitude {
        match self.valuation() {
            Some(v) => Magnitude::Exact(-v),
            None => Magnitude::AtMost(-self.prec),
        }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.valuation().is_none()
    }

    /// Lower bound on the true valuation: the certified one, or `start` when
    /// nothing in the window is nonzero.
    fn val_or_start(&self) -> i64 {
        self.valuation().unwrap_or(self.start)
    }

    /// Lowers the precision to `prec` (no-op when already at most `prec`).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        let start = self.start.min(prec);
        let coeffs = (start..prec).map(|n| self.raw(n)).collect();
        LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start,
            prec,
            coeffs,
        }
    }

    /// Drops stored leading zeros so that `start` is the valuation.
    pub fn normalized(&self) -> Self {
        let start = self.valuation().unwrap_or(self.prec);
        LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start,
            prec: self.prec,
            coeffs: self.coeffs[(start - self.start) as usize..].to_vec(),
        }
    }

    /// Adds an exactly known term `c x^{-index}` without touching precision;
    /// terms at or beyond the precision are absorbed by the O-term.
    pub fn add_exact_term(&mut self, index: i64, c: Fp) {
        assert_eq!(self.p, c.modulus(), "series modulus mismatch");
        if index >= self.prec || c.is_zero() {
            return;
        }
        if index < self.start {
            let mut coeffs = vec![0; (self.start - index) as usize];
            coeffs.extend_from_slice(&self.coeffs);
            self.coeffs = coeffs;
            self.start = index;
        }
        let slot = &mut self.coeffs[(index - self.start) as usize];
        *slot = add_mod(*slot, c.value(), self.p);
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.p, other.p, "series modulus mismatch");
        assert_eq!(self.orientation, other.orientation, "series orientation mismatch");
    }

    fn combine(&self, other: &Self, f: impl Fn(u32, u32, u32) -> u32) -> Self {
        self.check_compatible(other);
        let prec = self.prec.min(other.prec);
        let start = self.start.min(other.start).min(prec);
        let coeffs = (start..prec)
            .map(|n| f(self.raw(n), other.raw(n), self.p))
            .collect();
        LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start,
            prec,
            coeffs,
        }
    }

    /// Sum; precision is the smaller of the two.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, add_mod)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, sub_mod)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|&c| neg_mod(c, self.p)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: Fp) -> Self {
        assert_eq!(self.p, c.modulus(), "series modulus mismatch");
        LaurentSeries {
            coeffs: self.coeffs.iter().map(|&x| mul_mod(x, c.value(), self.p)).collect(),
            ..self.clone()
        }
    }

    /// Product. With valuations `v_a, v_b` (or window starts when nothing is
    /// certified) the result is known up to `min(prec_a + v_b, prec_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let va = self.val_or_start();
        let vb = other.val_or_start();
        let prec = (self.prec + vb).min(other.prec + va);
        let start = (va + vb).min(prec);
        let p = self.p;
        let mut acc = vec![0u64; (prec - start) as usize];
        let small = p < (1 << 16);
        for i in va..self.prec {
            let a = self.raw(i);
            if a == 0 {
                continue;
            }
            let j_hi = prec - i;
            for j in vb.max(other.start)..j_hi.min(other.prec) {
                let b = other.raw(j);
                if b == 0 {
                    continue;
                }
                let slot = &mut acc[(i + j - start) as usize];
                if small {
                    *slot += a as u64 * b as u64;
                    if *slot >= 1 << 62 {
                        *slot %= p as u64;
                    }
                } else {
                    *slot = (*slot + mul_mod(a, b, p) as u64) % p as u64;
                }
            }
        }
        LaurentSeries {
            p,
            orientation: self.orientation,
            start,
            prec,
            coeffs: acc.into_iter().map(|c| (c % p as u64) as u32).collect(),
        }
    }

    /// Product with an exact polynomial in `t`; only the shift of the window
    /// costs precision.
    pub fn mul_poly(&self, q: &Poly) -> Self {
        assert_eq!(self.p, q.modulus(), "series modulus mismatch");
        let terms: Vec<(i64, u32)> = q
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| (self.orientation.index_of_t_power(j as i64), c))
            .collect();
        let Some(mu) = terms.iter().map(|&(i, _)| i).min() else {
            return LaurentSeries::zero(self.p, self.orientation, self.prec);
        };
        let nu = terms.iter().map(|&(i, _)| i).max().unwrap();
        let prec = self.prec + mu;
        let start = (self.start + mu).min(prec);
        let hi = (self.prec + nu).min(prec);
        let mut coeffs = vec![0u32; (prec - start) as usize];
        for n in start..hi.max(start) {
            coeffs[(n - start) as usize] =
                dot_mod(terms.iter().map(|&(i, c)| (c, self.raw(n - i))), self.p);
        }
        LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start,
            prec,
            coeffs,
        }
    }

    /// Multiplies by `x^{-d}`: every index moves up by `d`.
    pub fn shift_index(&self, d: i64) -> Self {
        LaurentSeries {
            start: self.start + d,
            prec: self.prec + d,
            ..self.clone()
        }
    }

    /// Multiplies by `t^k`.
    pub fn mul_t_pow(&self, k: i64) -> Self {
        self.shift_index(self.orientation.index_of_t_power(k))
    }

    /// Multiplicative inverse. A series with certified valuation `v` and
    /// precision `P` has an inverse of valuation `-v` known to `P - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::CannotCertify {
            start: self.start,
            prec: self.prec,
        })?;
        let rel = (self.prec - v) as usize;
        let u = &self.coeffs[(v - self.start) as usize..];
        let coeffs = power_series_inv(u, rel, self.p)?;
        Ok(LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start: -v,
            prec: -v + rel as i64,
            coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Square root by Newton iteration. Needs an even certified valuation and
    /// a quadratic-residue leading coefficient; returns the branch whose
    /// leading coefficient has the smaller representative.
    pub fn sqrt(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::CannotCertify {
            start: self.start,
            prec: self.prec,
        })?;
        if v.rem_euclid(2) != 0 {
            return Err(Error::NoSquareRoot(format!("odd valuation {v}")));
        }
        let u = &self.coeffs[(v - self.start) as usize..];
        let b0 = fp::sqrt_mod(u[0], self.p).ok_or_else(|| {
            Error::NoSquareRoot(format!("leading coefficient {} is not a square mod {}", u[0], self.p))
        })?;
        let rel = u.len();
        let coeffs = power_series_sqrt(u, rel, b0, self.p)?;
        Ok(LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start: v / 2,
            prec: v / 2 + rel as i64,
            coeffs,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc: Option<LaurentSeries> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap_or_else(|| {
            LaurentSeries::one(self.p, self.orientation, self.prec.max(1))
        })
    }

    fn require_tinv(&self, what: &str) -> Result<()> {
        if self.orientation != Orientation::TInv {
            return Err(Error::Domain(format!("{what} needs a series in t^-1")));
        }
        Ok(())
    }

    /// The fractional part: the terms `t^{-n}` with `n >= 1`.
    pub fn frac_part(&self) -> Result<Self> {
        self.require_tinv("fractional part")?;
        if self.prec <= 1 {
            return Err(Error::InsufficientPrecision(format!(
                "fractional part needs precision >= 2, have {}",
                self.prec
            )));
        }
        let start = self.start.max(1);
        Ok(LaurentSeries {
            p: self.p,
            orientation: self.orientation,
            start,
            prec: self.prec,
            coeffs: self.coeffs[(start - self.start) as usize..].to_vec(),
        })
    }

    /// The polynomial part: the terms `t^k` with `k >= 0`.
    pub fn int_part(&self) -> Result<Poly> {
        self.require_tinv("polynomial part")?;
        if self.prec < 1 {
            return Err(Error::InsufficientPrecision(format!(
                "polynomial part needs precision >= 1, have {}",
                self.prec
            )));
        }
        if self.start > 0 {
            return Ok(Poly::zero(self.p));
        }
        let deg = (-self.start) as usize;
        let coeffs = (0..=deg).map(|k| self.raw(-(k as i64))).collect();
        Ok(Poly::from_raw(self.p, coeffs))
    }

    /// Evaluates `sum c_n s^n` over the stored window, i.e. replaces the
    /// formal variable `x^{-1}` by `s`. Requires `|s| < 1`; the result lives
    /// in the orientation of `s`. The truncation tail `O(s^prec)` bounds the
    /// result precision by `prec * v(s)`.
    pub fn substitute(&self, s: &Self) -> Result<Self> {
        assert_eq!(self.p, s.p, "series modulus mismatch");
        let (v_s, exact) = match s.magnitude() {
            Magnitude::Exact(e) if e >= 0 => return Err(Error::DivergentSubstitution(e)),
            Magnitude::Exact(e) => (-e, true),
            Magnitude::AtMost(b) if b >= 0 => return Err(Error::DivergentSubstitution(b)),
            Magnitude::AtMost(b) => (-b, false),
        };
        if !exact && self.start < 0 && self.coeffs.iter().any(|&c| c != 0) {
            return Err(Error::CannotCertify {
                start: s.start,
                prec: s.prec,
            });
        }
        let cap = if exact || self.prec >= 0 {
            self.prec.saturating_mul(v_s)
        } else {
            self.prec
        };
        let lo = self.val_or_start();
        let mut h = LaurentSeries::zero(self.p, s.orientation, cap);
        for n in (lo..self.prec).rev() {
            h = h.mul(s);
            h.add_exact_term(0, Fp::new(self.raw(n) as u64, self.p));
        }
        let scale = if lo >= 0 {
            s.pow(lo as u32)
        } else {
            s.inv()?.pow((-lo) as u32)
        };
        let out = if lo == 0 { h } else { h.mul(&scale) };
        Ok(out.truncate(cap))
    }

    /// True when the two series match on every index both windows certify.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.check_compatible(other);
        let prec = self.prec.min(other.prec);
        (self.start.min(other.start)..prec).all(|n| self.raw(n) == other.raw(n))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = |k: i64| -> String {
            match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            }
        };
        let sign = match self.orientation {
            Orientation::TInv => -1,
            Orientation::T => 1,
        };
        let mut wrote = false;
        for n in self.start..self.prec {
            let c = self.raw(n);
            if c == 0 {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            let v = var(sign * n);
            match (c, v.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{v}")?,
                _ => write!(f, "{c}{v}")?,
            }
        }
        if wrote {
            write!(f, " + ")?;
        }
        match sign * self.prec {
            0 => write!(f, "O(1)"),
            k => write!(f, "O({})", var(k)),
        }
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}
