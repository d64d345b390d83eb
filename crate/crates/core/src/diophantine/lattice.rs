use serde::Serialize;

use crate::arith::{Fp, LaurentSeries, Orientation};
use crate::error::{Error, Result};
use crate::Mat2K;

/// A vector of `K^2`.
pub type Vec2 = [LaurentSeries; 2];

/// `max(|x|, |y|)` as an exponent, if certified: the largest exact
/// coordinate must dominate every coordinate known only as a bound.
pub fn norm_exp(v: &Vec2) -> Result<i64> {
    let exact = v.iter().filter_map(|x| x.magnitude().exact()).max();
    let bound = v
        .iter()
        .filter(|x| x.is_zero_to_precision())
        .map(|x| x.magnitude().bound())
        .max();
    match (exact, bound) {
        (Some(e), Some(b)) if b > e => Err(Error::CannotCertify {
            start: v[0].start().min(v[1].start()),
            prec: v[0].prec().min(v[1].prec()),
        }),
        (Some(e), _) => Ok(e),
        (None, _) => Err(Error::CannotCertify {
            start: v[0].start().min(v[1].start()),
            prec: v[0].prec().min(v[1].prec()),
        }),
    }
}

/// Coefficients of `t^e` in each coordinate, where `p^e` is the norm.
fn leading(v: &Vec2, e: i64) -> [u32; 2] {
    [0, 1].map(|i| v[i].coeff_of_t_power(e).map(Fp::value).unwrap_or(0))
}

/// Rank-2 lattice `F_p[t] v_1 + F_p[t] v_2` in `K^2`; the basis vectors are
/// the columns of `basis`.
#[derive(Debug, Clone)]
pub struct Lattice2 {
    basis: Mat2K,
    det_exp: i64,
}

impl Lattice2 {
    pub fn new(basis: Mat2K) -> Result<Self> {
        if basis.rows() != 2 || basis.cols() != 2 {
            return Err(Error::Invalid("lattice basis must be 2x2".into()));
        }
        if basis.entries().any(|(_, _, e)| e.orientation() != Orientation::TInv) {
            return Err(Error::Domain("lattice entries must lie in K".into()));
        }
        let det = basis.det();
        let det_exp = det.magnitude().exact().ok_or(Error::CannotCertify {
            start: det.start(),
            prec: det.prec(),
        })?;
        Ok(Lattice2 { basis, det_exp })
    }

    pub fn basis(&self) -> &Mat2K {
        &self.basis
    }

    pub fn det_exp(&self) -> i64 {
        self.det_exp
    }

    pub fn column(&self, j: usize) -> Vec2 {
        [self.basis.get(0, j).clone(), self.basis.get(1, j).clone()]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Reduced {
    pub v1: Vec2,
    pub v2: Vec2,
    /// `log_p lambda_1`.
    pub min_exp: i64,
    /// `log_p lambda_2`; `min_exp + second_exp = log_p |det|`.
    pub second_exp: i64,
    pub det_exp: i64,
    /// Coordinates of `v1` that vanish on their whole window.
    pub zero_coords: [bool; 2],
    pub steps: usize,
}

/// Ultrametric reduction. With `|v1| <= |v2|`, the basis is reduced exactly
/// when the leading coefficient vectors of `v1` and `v2` are independent;
/// otherwise `lead(v2) = c lead(v1)` and `v2 - c t^{e2 - e1} v1` is shorter.
pub fn reduce_lattice2(lat: &Lattice2) -> Result<Reduced> {
    let mut v1 = lat.column(0);
    let mut v2 = lat.column(1);
    let mut steps = 0;
    loop {
        let mut e1 = norm_exp(&v1)?;
        let mut e2 = norm_exp(&v2)?;
        if e1 > e2 {
            std::mem::swap(&mut v1, &mut v2);
            std::mem::swap(&mut e1, &mut e2);
        }
        if e1 + e2 == lat.det_exp {
            let zero_coords = [v1[0].is_zero_to_precision(), v1[1].is_zero_to_precision()];
            return Ok(Reduced {
                v1,
                v2,
                min_exp: e1,
                second_exp: e2,
                det_exp: lat.det_exp,
                zero_coords,
                steps,
            });
        }
        let l1 = leading(&v1, e1);
        let l2 = leading(&v2, e2);
        let p = v1[0].modulus();
        let i = if l1[0] != 0 { 0 } else { 1 };
        let c = Fp::new(l2[i] as u64, p) * Fp::new(l1[i] as u64, p).inv()?;
        let dependent = (0..2).all(|j| Fp::new(l2[j] as u64, p) == c * Fp::new(l1[j] as u64, p));
        if !dependent {
            return Err(Error::InsufficientPrecision(format!(
                "|v1||v2| = p^{} exceeds |det| = p^{} with independent leading terms",
                e1 + e2,
                lat.det_exp
            )));
        }
        let shift = e2 - e1;
        v2 = [0, 1].map(|j| v2[j].sub(&v1[j].scale(c).mul_t_pow(shift)));
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    const TINV: Orientation = Orientation::TInv;

    fn mono(p: u32, k: i64) -> LaurentSeries {
        LaurentSeries::t_power(p, k, TINV, 30)
    }

    fn zero(p: u32) -> LaurentSeries {
        LaurentSeries::zero(p, TINV, 30)
    }

    #[test]
    fn identity_basis() {
        let b = Matrix::from_rows(vec![vec![mono(3, 0), zero(3)], vec![zero(3), mono(3, 0)]]);
        let r = reduce_lattice2(&Lattice2::new(b).unwrap()).unwrap();
        assert_eq!((r.min_exp, r.second_exp, r.steps), (0, 0, 0));
    }

    #[test]
    fn diagonal_basis() {
        let b = Matrix::from_rows(vec![vec![mono(5, 1), zero(5)], vec![zero(5), mono(5, -1)]]);
        let r = reduce_lattice2(&Lattice2::new(b).unwrap()).unwrap();
        assert_eq!((r.min_exp, r.second_exp), (-1, 1));
        assert_eq!(r.zero_coords, [true, false]);
    }

    #[test]
    fn sheared_basis_needs_steps() {
        // columns (t, 0) and (t^2 + 1, t^-1): the second reduces to (1, t^-1)
        let p = 7;
        let x = LaurentSeries::from_coeffs(p, TINV, -2, &[1, 0, 1, 0, 0, 0]);
        let b = Matrix::from_rows(vec![vec![mono(p, 1), x], vec![zero(p), mono(p, -1)]]);
        let r = reduce_lattice2(&Lattice2::new(b).unwrap()).unwrap();
        assert_eq!((r.min_exp, r.second_exp), (0, 0));
        assert!(r.steps >= 1);
    }

    #[test]
    fn degenerate_basis_cannot_certify() {
        let b = Matrix::from_rows(vec![vec![mono(3, 0), mono(3, 0)], vec![mono(3, 0), mono(3, 0)]]);
        assert!(matches!(Lattice2::new(b), Err(Error::CannotCertify { .. })));
    }

    #[test]
    fn norms() {
        let v = [mono(3, 2), mono(3, -1)];
        assert_eq!(norm_exp(&v).unwrap(), 2);
        let v = [zero(3), mono(3, -1)];
        assert_eq!(norm_exp(&v).unwrap(), -1);
        let v = [LaurentSeries::zero(3, TINV, 0), mono(3, -1)];
        assert!(norm_exp(&v).is_err());
        assert!(norm_exp(&[zero(3), zero(3)]).is_err());
    }
}
