//! Restriction of scalars from `L` to `F_p(t)` on the basis
//! `(beta_1, beta_2) = (1, t beta)`, and the map
//! `psi: M_2(K x K) -> M_4(K)`.

mod checks;
pub mod sample;

pub use checks::{run_embed_check, EmbedCheck, EmbedReport, SampleResult, MIN_EMBED_PREC};

use serde::Serialize;

use crate::arith::{Fp, LaurentSeries, Magnitude, Orientation, PairElem, Poly};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadext::{BetaSeries, QuadElem, RatFunc};
use crate::{Mat2K, Mat2Pair, Mat4, QuadMat, RatMat};

const TINV: Orientation = Orientation::TInv;

/// `l_beta = [[0, t + 1], [t^-1, 0]]`.
fn b_matrix_exact(p: u32) -> RatMat {
    Matrix::from_rows(vec![
        vec![RatFunc::zero(p), RatFunc::from_poly(Poly::from_coeffs(p, &[1, 1]))],
        vec![RatFunc::t_power(p, -1), RatFunc::zero(p)],
    ])
}

/// Matrix of multiplication by `a` on the basis `(1, t beta)`:
/// `l_a = j I + k l_beta` for `a = j + k beta`.
pub fn l_matrix(a: &QuadElem) -> RatMat {
    let p = a.modulus();
    let b = b_matrix_exact(p);
    Matrix::from_fn(2, 2, |r, c| {
        let diag = if r == c { a.j().clone() } else { RatFunc::zero(p) };
        diag.add(&a.k().mul(b.get(r, c)))
    })
}

/// Expands every entry in `K` to absolute precision `prec`.
pub fn rat_to_series(m: &RatMat, prec: i64) -> Mat4 {
    m.map(|x| x.to_series(TINV, prec))
}

/// `psi_0(x_1, x_2) = (x_1 + x_2)/2 I + (x_1 - x_2)/(2 beta) l_beta`.
///
/// This is the unique `K`-algebra map sending `(beta, -beta)` to `l_beta`;
/// equivalently `g_1^-1 diag(x_1, x_2) g_1`.
pub fn psi_scalar(x: &PairElem, beta: &BetaSeries) -> Result<Mat2K> {
    if x.second.orientation() != TINV {
        return Err(Error::Domain("psi is defined on K x K".into()));
    }
    let p = x.modulus();
    let half = Fp::new(2, p).inv()?;
    let s = x.first.add(&x.second).scale(half);
    let d = x.first.sub(&x.second).mul(&beta.series().inv()?).scale(half);
    let upper = d.mul_poly(&Poly::from_coeffs(p, &[1, 1]));
    let lower = d.mul_t_pow(-1);
    Ok(Matrix::from_rows(vec![vec![s.clone(), upper], vec![lower, s]]))
}

/// Entrywise `psi_0` into 2x2 blocks.
pub fn psi(x: &Mat2Pair, beta: &BetaSeries) -> Result<Mat4> {
    let blocks = x.try_map(|e| psi_scalar(e, beta))?;
    Ok(Matrix::from_blocks(&blocks))
}

/// `phi_L` applied entrywise.
pub fn embed_matrix(m: &QuadMat, beta: &BetaSeries) -> Mat2Pair {
    m.map(|a| crate::quadext::embed_pair(a, beta))
}

/// `gamma = diag(l_a, l_a)` for the unit `a = (beta - 1)/(beta + 1)`.
pub fn gamma_element(p: u32) -> RatMat {
    let l = l_matrix(&QuadElem::unit(p));
    Matrix::block_diag(&l, &l)
}

#[derive(Debug, Clone)]
pub struct GMatrices {
    /// `[[beta_1, beta_2], [tau beta_1, tau beta_2]] = [[1, t beta], [1, -t beta]]`.
    pub g1: Mat2K,
    pub g1_inv: Mat2K,
    /// `c = (beta_1 tau(beta_2) - beta_2 tau(beta_1))^-1 = (-2 t beta)^-1`.
    pub c: LaurentSeries,
    /// `diag(g_1, c g_1)`.
    pub g: Mat4,
    pub g_inv: Mat4,
}

/// `det(g_1) = -2 t beta` is not 1; only `det(g) = c^2 det(g_1)^2 = 1` holds.
pub fn g_matrices(beta: &BetaSeries) -> Result<GMatrices> {
    let p = beta.modulus();
    let prec = beta.prec();
    let one = LaurentSeries::one(p, TINV, prec);
    let tb = beta.series().mul_t_pow(1);
    let g1 = Matrix::from_rows(vec![vec![one.clone(), tb.clone()], vec![one.clone(), tb.neg()]]);
    let c = tb.scale(Fp::from_i64(-2, p)).inv()?;
    let adj = Matrix::from_rows(vec![vec![tb.neg(), tb.neg()], vec![one.neg(), one.clone()]]);
    let g1_inv = adj.scale(&c);
    let cinv = c.inv()?;
    let g = Matrix::block_diag(&g1, &g1.scale(&c));
    let g_inv = Matrix::block_diag(&g1_inv, &g1_inv.scale(&cinv));
    Ok(GMatrices {
        g1,
        g1_inv,
        c,
        g,
        g_inv,
    })
}

/// `a(alpha_1, alpha_2) z(zeta)` in coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairForm {
    pub alpha1: LaurentSeries,
    pub alpha2: LaurentSeries,
    pub zeta: LaurentSeries,
}

impl PairForm {
    /// The diagonal of `g psi(a(alpha_1, alpha_2) z(zeta)) g^-1`:
    /// `(alpha_1 zeta, alpha_2 / zeta, zeta / alpha_1, 1 / (alpha_2 zeta))`.
    pub fn diagonal(&self) -> Result<[LaurentSeries; 4]> {
        let zi = self.zeta.inv()?;
        Ok([
            self.alpha1.mul(&self.zeta),
            self.alpha2.mul(&zi),
            self.zeta.mul(&self.alpha1.inv()?),
            self.alpha2.mul(&self.zeta).inv()?,
        ])
    }

    /// `a(alpha_1, alpha_2) z(zeta)` as an element of `M_2(K x K)`, where
    /// `z(zeta)` has diagonal entries `(zeta, zeta^-1)`.
    pub fn group_element(&self) -> Result<Mat2Pair> {
        let a = PairElem::new(self.alpha1.clone(), self.alpha2.clone());
        let z = PairElem::new(self.zeta.clone(), self.zeta.inv()?);
        let top = a.mul(&z);
        let bottom = a.inv()?.mul(&z);
        let zero = top.zero_like_pair();
        Ok(Matrix::from_rows(vec![vec![top, zero.clone()], vec![zero, bottom]]))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjDiagReport {
    pub form: PairForm,
    /// Bound exponent of the worst entry of `g^-1 diag(d) g - psi(a z)`.
    pub residual_exp: i64,
}

/// Recovers `(alpha_1, alpha_2, zeta)` from a diagonal `d` and checks
/// `g^-1 diag(d) g = psi(a(alpha_1, alpha_2) z(zeta))` on the window.
///
/// Only diagonals with `d_1 d_3` a square in `K` lie in `psi(AZ)`; the rest
/// of `g^-1 D g` is reached only up to the finite quotient by squares.
pub fn conj_diag_check(d: &[LaurentSeries; 4], beta: &BetaSeries) -> Result<ConjDiagReport> {
    let p = beta.modulus();
    for (i, x) in d.iter().enumerate() {
        if x.valuation().is_none() {
            return Err(Error::CannotCertify {
                start: x.start(),
                prec: x.prec(),
            });
        }
        if x.orientation() != TINV || x.modulus() != p {
            return Err(Error::Domain(format!("diagonal entry {i} is not in K")));
        }
    }
    let det = d[0].mul(&d[1]).mul(&d[2]).mul(&d[3]);
    let det_res = det.sub(&LaurentSeries::one(p, TINV, det.prec().max(1)));
    if !det_res.is_zero_to_precision() {
        return Err(Error::NotInImage(format!(
            "diagonal has determinant differing from 1 by {}",
            det_res.magnitude().bound()
        )));
    }
    let zeta_sq = d[0].mul(&d[2]);
    let zeta = zeta_sq.sqrt().map_err(|e| match e {
        Error::NoSquareRoot(why) => {
            Error::NotInImage(format!("d_1 d_3 is not a square in K ({why})"))
        }
        other => other,
    })?;
    let form = PairForm {
        alpha1: d[0].div(&zeta)?,
        alpha2: d[1].mul(&zeta),
        zeta,
    };
    let gm = g_matrices(beta)?;
    let diag = diag_matrix(d);
    let lhs = gm.g_inv.mul(&diag).mul(&gm.g);
    let rhs = psi(&form.group_element()?, beta)?;
    let (residual_exp, clean) = lhs.residual(&rhs);
    if !clean {
        return Err(Error::NotInImage(format!(
            "conjugated diagonal misses psi(AZ) by {residual_exp}"
        )));
    }
    Ok(ConjDiagReport { form, residual_exp })
}

/// `diag(d_1, ..., d_4)`; off-diagonal zeros carry the largest window.
pub fn diag_matrix(d: &[LaurentSeries; 4]) -> Mat4 {
    let prec = d.iter().map(LaurentSeries::prec).max().unwrap_or(0);
    let p = d[0].modulus();
    Matrix::from_fn(4, 4, |i, j| {
        if i == j {
            d[i].clone()
        } else {
            LaurentSeries::zero(p, TINV, prec)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Membership {
    /// Every certified coefficient of `t^-n`, `n >= 1`, vanishes and
    /// `det = 1` on the window.
    YesToPrecision,
    /// Entry `(row, col)` has coefficient `value` at `t^t_power`, `t_power < 0`.
    NoEntry {
        row: usize,
        col: usize,
        t_power: i64,
        value: u32,
    },
    /// All entries are polynomial to precision but `|det - 1| = p^exp`.
    NoDeterminant { exp: i64 },
}

/// Membership of a 4x4 matrix over `K` in `SL_4(F_p[t])`, to precision.
pub fn in_sl4_ft(m: &Mat4) -> Result<Membership> {
    for (r, c, e) in m.entries() {
        if e.orientation() != TINV {
            return Err(Error::Domain("membership test needs entries in K".into()));
        }
        if e.prec() < 2 {
            return Err(Error::InsufficientPrecision(format!(
                "entry ({r}, {c}) known only to index {}, need 2",
                e.prec()
            )));
        }
    }
    for (r, c, e) in m.entries() {
        let frac = e.frac_part()?;
        if let Some(v) = frac.valuation() {
            return Ok(Membership::NoEntry {
                row: r,
                col: c,
                t_power: -v,
                value: frac.coeff(v).map(Fp::value).unwrap_or(0),
            });
        }
    }
    let det = m.det();
    let p = det.modulus();
    let res = det.sub(&LaurentSeries::one(p, TINV, det.prec().max(1)));
    match res.magnitude() {
        Magnitude::Exact(exp) => Ok(Membership::NoDeterminant { exp }),
        Magnitude::AtMost(_) => Ok(Membership::YesToPrecision),
    }
}

/// `u(x) = [[1, x], [0, 1]]` over `K x K`.
pub fn u_pair(x: &PairElem) -> Mat2Pair {
    let one = x.one_like_pair();
    let zero = x.zero_like_pair();
    Matrix::from_rows(vec![vec![one.clone(), x.clone()], vec![zero, one]])
}

/// `u(x)^T = [[1, 0], [x, 1]]`.
pub fn lower_pair(x: &PairElem) -> Mat2Pair {
    let one = x.one_like_pair();
    let zero = x.zero_like_pair();
    Matrix::from_rows(vec![vec![one.clone(), zero], vec![x.clone(), one]])
}

/// `a(x) = diag(x, x^-1)`.
pub fn a_pair(x: &PairElem) -> Result<Mat2Pair> {
    let zero = x.zero_like_pair();
    Ok(Matrix::from_rows(vec![vec![x.clone(), zero.clone()], vec![zero, x.inv()?]]))
}

trait PairShapes {
    fn one_like_pair(&self) -> PairElem;
    fn zero_like_pair(&self) -> PairElem;
}

impl PairShapes for PairElem {
    fn one_like_pair(&self) -> PairElem {
        let p = self.modulus();
        let prec = self.first.prec().max(self.second.prec()).max(1);
        PairElem::diagonal(&LaurentSeries::one(p, TINV, prec))
    }
    fn zero_like_pair(&self) -> PairElem {
        let p = self.modulus();
        let prec = self.first.prec().max(self.second.prec());
        PairElem::diagonal(&LaurentSeries::zero(p, TINV, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::sample::*;
    use super::*;
    use crate::quadext::{beta_series, embed_pair};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PRIMES: [u32; 4] = [3, 5, 7, 11];

    fn rpoly(p: u32, c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_coeffs(p, c))
    }

    fn identity4(p: u32, prec: i64) -> Mat4 {
        Matrix::identity_like(4, &LaurentSeries::one(p, TINV, prec))
    }

    #[test]
    fn regular_representation_examples() {
        let p = 7;
        let id = Matrix::identity_like(2, &RatFunc::one(p));
        assert_eq!(l_matrix(&QuadElem::one(p)), id);
        let ltb = l_matrix(&QuadElem::t_beta(p));
        let expect = Matrix::from_rows(vec![
            vec![RatFunc::zero(p), rpoly(p, &[0, 1, 1])],
            vec![RatFunc::one(p), RatFunc::zero(p)],
        ]);
        assert_eq!(ltb, expect);
        let lu = l_matrix(&QuadElem::unit(p));
        let expect = Matrix::from_rows(vec![
            vec![rpoly(p, &[1, 2]), rpoly(p, &[0, -2, -2])],
            vec![rpoly(p, &[-2]), rpoly(p, &[1, 2])],
        ]);
        assert_eq!(lu, expect);
        assert_eq!(lu.det(), RatFunc::one(p));
    }

    #[test]
    fn regular_representation_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in PRIMES {
            for _ in 0..10 {
                let a = random_quad(&mut rng, p, 2);
                let b = random_quad(&mut rng, p, 2);
                assert_eq!(l_matrix(&a.mul(&b)), l_matrix(&a).mul(&l_matrix(&b)));
                assert_eq!(l_matrix(&a.add(&b)), l_matrix(&a).add(&l_matrix(&b)));
                assert_eq!(l_matrix(&a).det(), a.norm());
                let polys = l_matrix(&a).entries().all(|(_, _, e)| e.as_poly().is_some());
                assert_eq!(polys, a.is_integral());
            }
        }
    }

    #[test]
    fn psi_scalar_examples() {
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            let one = PairElem::diagonal(&LaurentSeries::one(p, TINV, 40));
            let id = psi_scalar(&one, &beta).unwrap();
            assert!(id.agrees_with(&Matrix::identity_like(2, &LaurentSeries::one(p, TINV, 99))));
            let b = embed_pair(&QuadElem::beta(p), &beta);
            let lb = psi_scalar(&b, &beta).unwrap();
            assert!(lb.agrees_with(&rat_to_series(&b_matrix_exact(p), 99)));
            assert!(lb.min_prec() >= 38);
            for a in [QuadElem::t_beta(p), QuadElem::unit(p)] {
                let lhs = psi_scalar(&embed_pair(&a, &beta), &beta).unwrap();
                assert!(lhs.agrees_with(&rat_to_series(&l_matrix(&a), 99)));
                assert!(lhs.min_prec() >= 35);
            }
            let x = LaurentSeries::from_poly(&Poly::from_coeffs(p, &[1, 2, 3]), TINV, 40);
            let sx = psi_scalar(&PairElem::diagonal(&x), &beta).unwrap();
            let xi = Matrix::identity_like(2, &LaurentSeries::one(p, TINV, 40)).scale(&x);
            assert!(sx.agrees_with(&xi));
        }
    }

    #[test]
    fn psi_scalar_matches_l_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let beta = beta_series(5, 60).unwrap();
        for _ in 0..20 {
            let a = random_quad(&mut rng, 5, 3);
            let lhs = psi_scalar(&embed_pair(&a, &beta), &beta).unwrap();
            assert!(lhs.agrees_with(&rat_to_series(&l_matrix(&a), 99)));
            assert!(lhs.min_prec() >= 40);
        }
    }

    #[test]
    fn psi_on_unipotent() {
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            let theta = embed_pair(&QuadElem::t_beta(p), &beta);
            let m = psi(&u_pair(&theta), &beta).unwrap();
            let ltb = rat_to_series(&l_matrix(&QuadElem::t_beta(p)), 99);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(m.get(i, 2 + j).agrees_with(ltb.get(i, j)));
                    assert!(m.get(2 + i, j).is_zero_to_precision());
                }
            }
            let det = m.det();
            assert!(det.agrees_with(&LaurentSeries::one(p, TINV, 99)));
            let id = psi(&Matrix::identity_like(2, &PairElem::diagonal(&LaurentSeries::one(p, TINV, 40))), &beta)
                .unwrap();
            assert!(id.agrees_with(&identity4(p, 99)));
        }
    }

    #[test]
    fn psi_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            for _ in 0..5 {
                let x = random_mat2_pair(&mut rng, p, 30);
                let y = random_mat2_pair(&mut rng, p, 30);
                let lhs = psi(&x.mul(&y), &beta).unwrap();
                let rhs = psi(&x, &beta).unwrap().mul(&psi(&y, &beta).unwrap());
                let (_, clean) = lhs.residual(&rhs);
                assert!(clean);
                assert!(lhs.min_prec() >= 20);
                let s = random_sl2_pair(&mut rng, p, 30).unwrap();
                let det = psi(&s, &beta).unwrap().det();
                assert!(det.agrees_with(&LaurentSeries::one(p, TINV, 99)));
                assert!(det.prec() >= 10);
            }
        }
    }

    #[test]
    fn gamma_is_integral_and_special() {
        for p in PRIMES {
            let g = gamma_element(p);
            assert_eq!(g.det(), RatFunc::one(p));
            assert!(g.entries().all(|(_, _, e)| e.as_poly().is_some()));
            assert_eq!(*g.get(0, 0), rpoly(p, &[1, 2]));
            assert_eq!(*g.get(1, 0), rpoly(p, &[-2]));
            assert!(g.get(0, 2).is_zero());
            let s = rat_to_series(&g, 20);
            assert_eq!(in_sl4_ft(&s).unwrap(), Membership::YesToPrecision);
        }
    }

    #[test]
    fn g_conjugation() {
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            let gm = g_matrices(&beta).unwrap();
            let tb = beta.series().mul_t_pow(1);
            let one = LaurentSeries::one(p, TINV, 99);
            assert!(gm.c.mul(&tb.scale(Fp::from_i64(-2, p))).agrees_with(&one));
            assert!(gm.g.det().agrees_with(&one));
            assert!(gm.g1.det().agrees_with(&gm.c.inv().unwrap()));
            assert!(!gm.g1.det().agrees_with(&one));
            assert!(gm.g1.mul(&gm.g1_inv).agrees_with(&Matrix::identity_like(2, &one)));
            assert!(gm.g.mul(&gm.g_inv).agrees_with(&identity4(p, 99)));

            let th = embed_pair(&QuadElem::t_beta(p), &beta);
            let l = rat_to_series(&l_matrix(&QuadElem::t_beta(p)), 60);
            let d = gm.g1.mul(&l).mul(&gm.g1_inv);
            assert!(d.get(0, 0).agrees_with(&th.first));
            assert!(d.get(1, 1).agrees_with(&th.second));
            assert!(d.get(0, 1).is_zero_to_precision() && d.get(1, 0).is_zero_to_precision());
        }
    }

    #[test]
    fn conj_diag_examples() {
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            let one = LaurentSeries::one(p, TINV, 40);
            let r = conj_diag_check(&[one.clone(), one.clone(), one.clone(), one.clone()], &beta).unwrap();
            assert!(r.form.alpha1.agrees_with(&one) && r.form.alpha2.agrees_with(&one));
            assert!(r.form.zeta.agrees_with(&one));

            let form = PairForm {
                alpha1: LaurentSeries::t_power(p, 1, TINV, 40),
                alpha2: LaurentSeries::t_power(p, -1, TINV, 40),
                zeta: one.clone(),
            };
            let d = form.diagonal().unwrap();
            let r = conj_diag_check(&d, &beta).unwrap();
            assert!(r.form.alpha1.agrees_with(&form.alpha1));
            assert!(r.form.alpha2.agrees_with(&form.alpha2));
            assert!(r.form.zeta.agrees_with(&one));

            let t = LaurentSeries::t_power(p, 1, TINV, 40);
            let ti = LaurentSeries::t_power(p, -1, TINV, 40);
            let bad = [t, one.clone(), one.clone(), ti];
            assert!(matches!(conj_diag_check(&bad, &beta), Err(Error::NotInImage(_))));
            let two = LaurentSeries::one(p, TINV, 40).scale(Fp::new(2, p));
            let bad = [two, one.clone(), one.clone(), one.clone()];
            assert!(matches!(conj_diag_check(&bad, &beta), Err(Error::NotInImage(_))));
        }
    }

    #[test]
    fn conj_diag_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for p in PRIMES {
            let beta = beta_series(p as u64, 40).unwrap();
            for _ in 0..5 {
                let form = random_pair_form(&mut rng, p, 30);
                let d = form.diagonal().unwrap();
                let r = conj_diag_check(&d, &beta).unwrap();
                let same = r.form.zeta.agrees_with(&form.zeta) && r.form.alpha1.agrees_with(&form.alpha1);
                let flipped = r.form.zeta.agrees_with(&form.zeta.neg()) && r.form.alpha1.agrees_with(&form.alpha1.neg());
                assert!(same || flipped);
                let back = r.form.diagonal().unwrap();
                for i in 0..4 {
                    assert!(back[i].agrees_with(&d[i]));
                }
            }
        }
    }

    #[test]
    fn membership_verdicts() {
        for p in PRIMES {
            let beta = beta_series(p as u64, 30).unwrap();
            assert_eq!(in_sl4_ft(&identity4(p, 10)).unwrap(), Membership::YesToPrecision);
            let b = embed_pair(&QuadElem::beta(p), &beta);
            let m = psi(&u_pair(&b), &beta).unwrap();
            assert_eq!(
                in_sl4_ft(&m).unwrap(),
                Membership::NoEntry {
                    row: 1,
                    col: 2,
                    t_power: -1,
                    value: 1
                }
            );
            let mut d = identity4(p, 10);
            d.set(0, 0, LaurentSeries::t_power(p, 1, TINV, 10));
            assert_eq!(in_sl4_ft(&d).unwrap(), Membership::NoDeterminant { exp: 1 });
            assert!(in_sl4_ft(&identity4(p, 1)).is_err());
        }
    }

    #[test]
    fn membership_matches_integrality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = 3;
        let beta = beta_series(p as u64, 60).unwrap();
        let mut seen = [0usize; 2];
        for i in 0..20 {
            let m = random_sl2_quad(&mut rng, p, 1, i % 2 == 0);
            assert_eq!(m.det(), QuadElem::one(p));
            let integral = m.entries().all(|(_, _, e)| e.is_integral());
            let verdict = in_sl4_ft(&psi(&embed_matrix(&m, &beta), &beta).unwrap()).unwrap();
            assert_eq!(verdict == Membership::YesToPrecision, integral);
            seen[integral as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }
}
