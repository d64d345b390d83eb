use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::laurent::{LaurentSeries, Orientation};
use crate::error::Result;

/// An element of `K x K` or `K x F_p((t))`, with componentwise ring
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairElem {
    pub first: LaurentSeries,
    pub second: LaurentSeries,
}

impl PairElem {
    pub fn new(first: LaurentSeries, second: LaurentSeries) -> Self {
        assert_eq!(first.modulus(), second.modulus(), "pair modulus mismatch");
        assert_eq!(first.orientation(), Orientation::TInv, "first component must lie in K");
        PairElem { first, second }
    }

    /// The diagonal image `(x, x)`.
    pub fn diagonal(x: &LaurentSeries) -> Self {
        PairElem::new(x.clone(), x.clone())
    }

    pub fn modulus(&self) -> u32 {
        self.first.modulus()
    }

    pub fn add(&self, other: &Self) -> Self {
        PairElem::new(self.first.add(&other.first), self.second.add(&other.second))
    }

    pub fn sub(&self, other: &Self) -> Self {
        PairElem::new(self.first.sub(&other.first), self.second.sub(&other.second))
    }

    pub fn mul(&self, other: &Self) -> Self {
        PairElem::new(self.first.mul(&other.first), self.second.mul(&other.second))
    }

    pub fn neg(&self) -> Self {
        PairElem::new(self.first.neg(), self.second.neg())
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(PairElem::new(self.first.inv()?, self.second.inv()?))
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first.agrees_with(&other.first) && self.second.agrees_with(&other.second)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.first.is_zero_to_precision() && self.second.is_zero_to_precision()
    }
}

impl Add for &PairElem {
    type Output = PairElem;
    fn add(self, rhs: &PairElem) -> PairElem {
        PairElem::add(self, rhs)
    }
}

impl Sub for &PairElem {
    type Output = PairElem;
    fn sub(self, rhs: &PairElem) -> PairElem {
        PairElem::sub(self, rhs)
    }
}

impl Mul for &PairElem {
    type Output = PairElem;
    fn mul(self, rhs: &PairElem) -> PairElem {
        PairElem::mul(self, rhs)
    }
}

impl Neg for &PairElem {
    type Output = PairElem;
    fn neg(self) -> PairElem {
        PairElem::neg(self)
    }
}
