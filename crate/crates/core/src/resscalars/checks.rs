//! Seeded batch checks of the embedding, each reporting per-sample residuals.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sample::{random_mat2_pair, random_pair_form, random_quad, random_sl2_pair, random_sl2_quad};
use super::{conj_diag_check, embed_matrix, g_matrices, gamma_element, in_sl4_ft, l_matrix, psi, rat_to_series};
use super::{psi_scalar, Membership};
use crate::arith::{LaurentSeries, Orientation};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quadext::{beta_series, embed_pair, QuadElem, RatFunc};
use crate::Mat4;

const TINV: Orientation = Orientation::TInv;

/// Smallest `--prec` the checks accept; random inputs reach valuation -2.
pub const MIN_EMBED_PREC: i64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbedCheck {
    /// `gamma^k` is polynomial with det 1 and equals `psi(z(u^k))`.
    Gamma,
    /// `psi(xy) = psi(x) psi(y)` and `det psi(s) = 1` for `s` in `SL_2`.
    Hom,
    /// `psi(phi_L(m))` lies in `SL_4(F_p[t])` iff `m` has integral entries.
    Membership,
    /// `g_1 l_theta g_1^-1 = diag(theta, tau theta)` and the diagonal round trip.
    Conjugation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub index: usize,
    /// Worst bound exponent of the compared differences.
    pub residual_exp: i64,
    /// Smallest absolute precision among the compared entries.
    pub window: i64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedReport {
    pub check: EmbedCheck,
    pub p: u32,
    pub prec: i64,
    pub samples: usize,
    pub seed: u64,
    pub passed: usize,
    pub all_passed: bool,
    pub results: Vec<SampleResult>,
}

struct Outcome {
    worst: i64,
    window: i64,
    clean: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            worst: i64::MIN,
            window: i64::MAX,
            clean: true,
        }
    }

    fn matrices(&mut self, a: &Mat4, b: &Mat4) {
        let (w, c) = a.residual(b);
        self.worst = self.worst.max(w);
        self.window = self.window.min(a.min_prec()).min(b.min_prec());
        self.clean &= c;
    }

    fn series(&mut self, a: &LaurentSeries, b: &LaurentSeries) {
        let m = a.sub(b).magnitude();
        self.worst = self.worst.max(m.bound());
        self.window = self.window.min(a.prec()).min(b.prec());
        self.clean &= m.is_zero_to_precision();
    }

    fn finish(self, index: usize, extra: bool, note: Option<String>) -> SampleResult {
        SampleResult {
            index,
            residual_exp: self.worst,
            window: self.window,
            passed: self.clean && extra && self.window >= 1,
            note,
        }
    }
}

pub fn run_embed_check(check: EmbedCheck, p: u32, prec: i64, samples: usize, seed: u64) -> Result<EmbedReport> {
    if prec < MIN_EMBED_PREC {
        return Err(Error::InsufficientPrecision(format!(
            "embedding checks need prec >= {MIN_EMBED_PREC}, got {prec}"
        )));
    }
    let beta = beta_series(p as u64, prec + 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = LaurentSeries::one(p, TINV, prec);
    let mut results = Vec::with_capacity(samples);
    for index in 0..samples {
        let mut o = Outcome::new();
        let r = match check {
            EmbedCheck::Gamma => {
                let k = index as u32 + 1;
                let base = gamma_element(p);
                let g = (1..k).fold(base.clone(), |acc, _| acc.mul(&base));
                let exact = g.det() == RatFunc::one(p) && g.entries().all(|(_, _, e)| e.as_poly().is_some());
                let zeta = embed_pair(&QuadElem::unit(p).pow(k), &beta);
                let block = psi_scalar(&zeta, &beta)?;
                o.matrices(&Matrix::block_diag(&block, &block), &rat_to_series(&g, prec));
                o.finish(index, exact, None)
            }
            EmbedCheck::Hom => {
                let x = random_mat2_pair(&mut rng, p, prec);
                let y = random_mat2_pair(&mut rng, p, prec);
                o.matrices(&psi(&x.mul(&y), &beta)?, &psi(&x, &beta)?.mul(&psi(&y, &beta)?));
                let s = random_sl2_pair(&mut rng, p, prec)?;
                o.series(&psi(&s, &beta)?.det(), &one);
                o.finish(index, true, None)
            }
            EmbedCheck::Membership => {
                let m = random_sl2_quad(&mut rng, p, 1, index % 2 == 0);
                let integral = m.entries().all(|(_, _, e)| e.is_integral());
                let image = psi(&embed_matrix(&m, &beta), &beta)?;
                let member = in_sl4_ft(&image)? == Membership::YesToPrecision;
                o.series(&image.det(), &one);
                let note = format!("integral={integral} member={member}");
                o.finish(index, m.det() == QuadElem::one(p) && integral == member, Some(note))
            }
            EmbedCheck::Conjugation => {
                let theta = nonzero_quad(&mut rng, p);
                let gm = g_matrices(&beta)?;
                let l = rat_to_series(&l_matrix(&theta), prec);
                let d = gm.g1.mul(&l).mul(&gm.g1_inv);
                let e = embed_pair(&theta, &beta);
                let zero = LaurentSeries::zero(p, TINV, prec);
                o.series(d.get(0, 0), &e.first);
                o.series(d.get(1, 1), &e.second);
                o.series(d.get(0, 1), &zero);
                o.series(d.get(1, 0), &zero);
                let form = random_pair_form(&mut rng, p, prec);
                let diag = form.diagonal()?;
                let back = conj_diag_check(&diag, &beta)?.form.diagonal()?;
                for (a, b) in back.iter().zip(&diag) {
                    o.series(a, b);
                }
                o.finish(index, true, None)
            }
        };
        results.push(r);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(EmbedReport {
        check,
        p,
        prec,
        samples,
        seed,
        passed,
        all_passed: passed == samples,
        results,
    })
}

fn nonzero_quad(rng: &mut ChaCha8Rng, p: u32) -> QuadElem {
    loop {
        let a = random_quad(rng, p, 2);
        if !a.is_zero() {
            return a;
        }
    }
}
