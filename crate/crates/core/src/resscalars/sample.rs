//! Seeded random inputs for the embedding checks.

use rand::Rng;

use super::{a_pair, lower_pair, u_pair, PairForm};
use crate::arith::{LaurentSeries, Orientation, PairElem, Poly};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::quadext::{QuadElem, RatFunc};
use crate::{Mat2Pair, QuadMat};

pub fn random_poly<R: Rng>(rng: &mut R, p: u32, max_deg: usize) -> Poly {
    let c: Vec<i64> = (0..=max_deg).map(|_| rng.gen_range(0..p) as i64).collect();
    Poly::from_coeffs(p, &c)
}

fn random_monic<R: Rng>(rng: &mut R, p: u32, deg: usize) -> Poly {
    let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..p) as i64).collect();
    c.push(1);
    Poly::from_coeffs(p, &c)
}

/// Coefficients for indices `start..prec`, uniform.
pub fn random_series<R: Rng>(rng: &mut R, p: u32, start: i64, prec: i64) -> LaurentSeries {
    let c: Vec<i64> = (start..prec).map(|_| rng.gen_range(0..p) as i64).collect();
    LaurentSeries::from_coeffs(p, Orientation::TInv, start, &c)
}

/// A series with certified valuation `v`.
pub fn random_unit_series<R: Rng>(rng: &mut R, p: u32, v: i64, prec: i64) -> LaurentSeries {
    let mut c: Vec<i64> = (v..prec).map(|_| rng.gen_range(0..p) as i64).collect();
    c[0] = rng.gen_range(1..p) as i64;
    LaurentSeries::from_coeffs(p, Orientation::TInv, v, &c)
}

/// An element of `K x K` with entries starting at index `-2..=1`.
pub fn random_pair<R: Rng>(rng: &mut R, p: u32, prec: i64) -> PairElem {
    let (s1, s2) = (rng.gen_range(-2..=1), rng.gen_range(-2..=1));
    PairElem::new(random_series(rng, p, s1, prec), random_series(rng, p, s2, prec))
}

pub fn random_unit_pair<R: Rng>(rng: &mut R, p: u32, prec: i64) -> PairElem {
    let (v1, v2) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
    PairElem::new(random_unit_series(rng, p, v1, prec), random_unit_series(rng, p, v2, prec))
}

/// A 2x2 matrix over `K x K` with independent random entries.
pub fn random_mat2_pair<R: Rng>(rng: &mut R, p: u32, prec: i64) -> Mat2Pair {
    Matrix::from_fn(2, 2, |_, _| random_pair(rng, p, prec))
}

/// `u(x) a(y) u(z)^T` with random `x, z` and unit `y`; determinant 1.
pub fn random_sl2_pair<R: Rng>(rng: &mut R, p: u32, prec: i64) -> Result<Mat2Pair> {
    let x = random_pair(rng, p, prec);
    let y = random_unit_pair(rng, p, prec);
    let z = random_pair(rng, p, prec);
    Ok(u_pair(&x).mul(&a_pair(&y)?).mul(&lower_pair(&z)))
}

/// A random element of `F_p[t, t beta]`.
pub fn random_integral<R: Rng>(rng: &mut R, p: u32, deg: usize) -> QuadElem {
    let j = random_poly(rng, p, deg);
    let k = random_poly(rng, p, deg.saturating_sub(1)).shift(1);
    QuadElem::from_polys(j, k)
}

/// A random element of `L` whose coordinates have small random denominators.
pub fn random_quad<R: Rng>(rng: &mut R, p: u32, deg: usize) -> QuadElem {
    let coord = |rng: &mut R| {
        let den_deg = rng.gen_range(0..=2);
        RatFunc::new(random_poly(rng, p, deg), random_monic(rng, p, den_deg)).expect("monic denominator")
    };
    let j = coord(rng);
    let k = coord(rng);
    QuadElem::new(j, k)
}

fn u_quad(x: &QuadElem) -> QuadMat {
    let p = x.modulus();
    Matrix::from_rows(vec![vec![QuadElem::one(p), x.clone()], vec![QuadElem::zero(p), QuadElem::one(p)]])
}

fn lower_quad(x: &QuadElem) -> QuadMat {
    let p = x.modulus();
    Matrix::from_rows(vec![vec![QuadElem::one(p), QuadElem::zero(p)], vec![x.clone(), QuadElem::one(p)]])
}

/// `u(x) u(y)^T u(z)` in `SL_2(L)`. With `integral` all three factors lie in
/// `F_p[t, t beta]`; otherwise the middle one is a general element of `L`.
pub fn random_sl2_quad<R: Rng>(rng: &mut R, p: u32, deg: usize, integral: bool) -> QuadMat {
    let x = random_integral(rng, p, deg);
    let y = if integral {
        random_integral(rng, p, deg)
    } else {
        random_quad(rng, p, deg)
    };
    let z = random_integral(rng, p, deg);
    u_quad(&x).mul(&lower_quad(&y)).mul(&u_quad(&z))
}

/// Random `(alpha_1, alpha_2, zeta)` with valuations in `-2..=2`.
pub fn random_pair_form<R: Rng>(rng: &mut R, p: u32, prec: i64) -> PairForm {
    let unit = |rng: &mut R| {
        let v = rng.gen_range(-2..=2);
        random_unit_series(rng, p, v, prec)
    };
    PairForm {
        alpha1: unit(rng),
        alpha2: unit(rng),
        zeta: unit(rng),
    }
}
