use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::{reduce_lattice2, Lattice2, Reduced};
use super::score::{littlewood_score, monic_from_index, ScoreParams, ScoreReport};
use crate::arith::{LaurentSeries, Orientation, Poly};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

const TINV: Orientation = Orientation::TInv;

/// `c t^k` with a window at least `prec` and always containing the term.
fn exact_monomial(p: u32, k: i64, prec: i64) -> LaurentSeries {
    LaurentSeries::t_power(p, k, TINV, prec.max(-k + 1))
}

/// The lattice `a(t^{m+n}, 1) u(t^{-2n} alpha^{-1}, 0) F_p[t]^2` seen in `K^2`:
/// columns `(t^{m+n}, 0)` and `(t^{m-n} alpha^{-1}, t^{-m-n})`.
pub fn trajectory_lattice(m: usize, n: usize, alpha: &LaurentSeries) -> Result<Lattice2> {
    if n > m {
        return Err(Error::Domain(format!("trajectory needs m >= n, got m={m}, n={n}")));
    }
    let p = alpha.modulus();
    let (m, n) = (m as i64, n as i64);
    let x = alpha.inv()?.mul_t_pow(m - n);
    let w = x.prec();
    let basis = Matrix::from_rows(vec![
        vec![exact_monomial(p, m + n, w), x],
        vec![LaurentSeries::zero(p, TINV, w.max(m + n + 1)), exact_monomial(p, -m - n, w)],
    ]);
    Lattice2::new(basis)
}

/// `log_p lambda_1` of the trajectory lattice at `(m, n)`, with its reduced
/// basis.
pub fn mahler_height(m: usize, n: usize, alpha: &LaurentSeries) -> Result<Reduced> {
    reduce_lattice2(&trajectory_lattice(m, n, alpha)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightCell {
    pub m: usize,
    pub n: usize,
    pub height_exp: i64,
    /// The shortest vector `(P t^{m+n} + Q t^{m-n} alpha^-1, Q t^{-m-n})` has
    /// `Q != 0` and a first coordinate vanishing on its window.
    pub zero_witness: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightGrid {
    pub max_m: usize,
    pub prec: i64,
    pub entries: Vec<HeightCell>,
    pub min_exp: i64,
    pub zero_witnesses: Vec<[usize; 2]>,
}

impl HeightGrid {
    /// Rows `m,n,height_exp` and a trailing `# min_exp=...` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,height_exp\n");
        for c in &self.entries {
            out.push_str(&format!("{},{},{}\n", c.m, c.n, c.height_exp));
        }
        out.push_str(&format!("# min_exp={}\n", self.min_exp));
        if !self.zero_witnesses.is_empty() {
            let cells: Vec<String> = self.zero_witnesses.iter().map(|[m, n]| format!("{m}:{n}")).collect();
            out.push_str(&format!("# zero_witnesses={}\n", cells.join(" ")));
        }
        out
    }
}

pub fn grid_required_prec(max_m: usize, guard: usize) -> i64 {
    2 * (max_m + guard) as i64 + 1
}

/// Mahler heights over `0 <= n <= m <= max_m`.
pub fn trajectory_grid(alpha: &LaurentSeries, max_m: usize, guard: usize) -> Result<HeightGrid> {
    let need = grid_required_prec(max_m, guard);
    if alpha.prec() < need {
        return Err(Error::InsufficientPrecision(format!(
            "grid up to m={max_m} with guard {guard} needs alpha to index {need}, have {}",
            alpha.prec()
        )));
    }
    let cells: Vec<(usize, usize)> = (0..=max_m).flat_map(|m| (0..=m).map(move |n| (m, n))).collect();
    let entries = cells
        .par_iter()
        .map(|&(m, n)| {
            let r = mahler_height(m, n, alpha)?;
            Ok(HeightCell {
                m,
                n,
                height_exp: r.min_exp,
                zero_witness: r.zero_coords[0] && !r.zero_coords[1],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_exp = entries.iter().map(|c| c.height_exp).min().expect("grid is non-empty");
    let zero_witnesses = entries.iter().filter(|c| c.zero_witness).map(|c| [c.m, c.n]).collect();
    Ok(HeightGrid {
        max_m,
        prec: alpha.prec(),
        entries,
        min_exp,
        zero_witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseASummary {
    pub samples: usize,
    /// Samples with `|P| != |Q t^{-2n} alpha^{-1}|`.
    pub mismatched: usize,
    /// Mismatched samples where `|P + Q t^{-2n} alpha^{-1}| = max(...) >= 1`.
    pub passed: usize,
}

fn random_nonzero_poly<R: Rng>(rng: &mut R, p: u32, deg_max: usize) -> Poly {
    loop {
        let d = rng.gen_range(0..=deg_max);
        let c: Vec<i64> = (0..=d).map(|_| rng.gen_range(0..p) as i64).collect();
        let q = Poly::from_coeffs(p, &c);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Random `(P, Q, n)` with `P, Q != 0`: whenever `|P|` and
/// `|Q t^{-2n} alpha^{-1}|` differ, the first trajectory coordinate
/// (divided by `t^{m+n}`) has absolute value at least 1.
pub fn case_a_filter(
    alpha: &LaurentSeries,
    samples: usize,
    deg_max: usize,
    n_max: usize,
    seed: u64,
) -> Result<CaseASummary> {
    let p = alpha.modulus();
    let inv = alpha.inv()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CaseASummary {
        samples,
        mismatched: 0,
        passed: 0,
    };
    for _ in 0..samples {
        let big_p = random_nonzero_poly(&mut rng, p, deg_max);
        let q = random_nonzero_poly(&mut rng, p, deg_max);
        let n = rng.gen_range(0..=n_max) as i64;
        let x = inv.mul_poly(&q).mul_t_pow(-2 * n);
        let xe = x.magnitude().exact().ok_or(Error::CannotCertify {
            start: x.start(),
            prec: x.prec(),
        })?;
        let pe = big_p.deg().expect("nonzero") as i64;
        if xe == pe {
            continue;
        }
        out.mismatched += 1;
        let sum = x.add(&LaurentSeries::from_poly(&big_p, TINV, x.prec()));
        if sum.magnitude().exact() == Some(xe.max(pe)) && xe.max(pe) >= 0 {
            out.passed += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    /// `min |P| |Q + t^{2n} P alpha|` over `Q != 0`, `deg P <= D`,
    /// `n <= min(M, K/2)`; absent when zero to precision.
    pub height_side_exp: Option<i64>,
    /// `(P, n)` attaining the height side, `P` lowest coefficient first.
    pub height_side_witness: (Vec<u32>, usize),
    pub score: ScoreReport,
    /// Both sides positive, or both zero to precision.
    pub agree: bool,
    /// The height side never undercuts the score (it searches a subset).
    pub height_side_dominates: bool,
    pub case_a: CaseASummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConsistencyParams {
    pub max_m: usize,
    pub score: ScoreParams,
    pub samples: usize,
    pub seed: u64,
}

/// Value of `min_{Q != 0} |Q + x|`: the fractional part when the polynomial
/// part of `x` is nonzero, otherwise 1.
fn best_q_exp(x: &LaurentSeries) -> Result<Option<i64>> {
    if x.int_part()?.is_zero() {
        return Ok(Some(0));
    }
    Ok(x.frac_part()?.magnitude().exact())
}

/// Desk-scale check of the chain from trajectory heights to the Littlewood
/// score with `N = P`, `k = 2n`.
pub fn score_height_consistency(alpha: &LaurentSeries, params: ConsistencyParams) -> Result<ConsistencyReport> {
    let score = littlewood_score(alpha, params.score)?;
    let p = alpha.modulus();
    let n_max = params.max_m.min(params.score.shift_max / 2);
    let count: u64 = (0..=params.score.deg_max as u32).map(|d| (p as u64).pow(d)).sum();
    let vals = (0..count)
        .into_par_iter()
        .map(|idx| {
            let big_p = monic(idx, p);
            let d = big_p.deg().expect("monic") as i64;
            let mut best: Option<(Option<i64>, usize)> = None;
            for n in 0..=n_max {
                let x = alpha.mul_poly(&big_p.shift(2 * n));
                let v = best_q_exp(&x)?.map(|e| d + e);
                let improves = match best {
                    None => true,
                    Some((b, _)) => lower(v, b),
                };
                if improves {
                    best = Some((v, n));
                }
            }
            let (v, n) = best.expect("n range is non-empty");
            Ok((v, big_p.coeffs().to_vec(), n))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(Option<i64>, Vec<u32>, usize)> = None;
    for (v, c, n) in vals {
        let improves = match &best {
            None => true,
            Some((b, _, _)) => lower(v, *b),
        };
        if improves {
            best = Some((v, c, n));
        }
    }
    let (left, coeffs, n) = best.expect("at least one polynomial");
    let right = score.score_exp;
    let agree = left.is_some() == right.is_some();
    let height_side_dominates = !lower(left, right);
    let case_a = case_a_filter(alpha, params.samples, params.score.deg_max, params.max_m, params.seed)?;
    Ok(ConsistencyReport {
        height_side_exp: left,
        height_side_witness: (coeffs, n),
        score,
        agree,
        height_side_dominates,
        case_a,
    })
}

/// Zero to precision counts as smaller than any finite value.
fn lower(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x < y,
        _ => false,
    }
}

fn monic(idx: u64, p: u32) -> Poly {
    Poly::from_coeffs(p, &monic_from_index(idx, p).iter().map(|&c| c as i64).collect::<Vec<_>>())
}
