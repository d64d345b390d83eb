use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// An absolute value stored exactly as its exponent: `|x| = p^e`, with `None`
/// standing for `e = -inf` (the zero element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbsExp(Option<i64>);

impl AbsExp {
    pub const NEG_INF: AbsExp = AbsExp(None);

    pub fn finite(e: i64) -> Self {
        AbsExp(Some(e))
    }

    pub fn exponent(self) -> Option<i64> {
        self.0
    }

    pub fn is_neg_inf(self) -> bool {
        self.0.is_none()
    }
}

impl Ord for AbsExp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

impl PartialOrd for AbsExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multiplication of absolute values; `-inf` absorbs.
impl Add for AbsExp {
    type Output = AbsExp;
    fn add(self, rhs: AbsExp) -> AbsExp {
        match (self.0, rhs.0) {
            (Some(a), Some(b)) => AbsExp(Some(a + b)),
            _ => AbsExp(None),
        }
    }
}

impl fmt::Display for AbsExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(e) => write!(f, "p^{e}"),
            None => write!(f, "0"),
        }
    }
}

/// What a truncated series can say about its absolute value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    /// `|x| = p^e`, certified by a nonzero coefficient inside the window.
    Exact(i64),
    /// Every stored coefficient is zero, so only `|x| <= p^e` is known.
    AtMost(i64),
}

impl Magnitude {
    pub fn exact(self) -> Option<i64> {
        match self {
            Magnitude::Exact(e) => Some(e),
            Magnitude::AtMost(_) => None,
        }
    }

    /// The exponent of the best known upper bound.
    pub fn bound(self) -> i64 {
        match self {
            Magnitude::Exact(e) | Magnitude::AtMost(e) => e,
        }
    }

    pub fn is_zero_to_precision(self) -> bool {
        matches!(self, Magnitude::AtMost(_))
    }
}
