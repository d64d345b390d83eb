use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{LaurentSeries, Orientation, Poly};
use crate::error::{Error, Result};

/// At most this many witnesses are listed; `witness_count` has the total.
pub const WITNESS_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScoreParams {
    pub deg_max: usize,
    pub shift_max: usize,
    /// Minimum number of certified fractional coefficients for every `(N, k)`.
    pub guard: usize,
}

impl ScoreParams {
    pub fn new(deg_max: usize, shift_max: usize) -> Self {
        ScoreParams {
            deg_max,
            shift_max,
            guard: 1,
        }
    }

    pub fn required_prec(&self) -> i64 {
        (self.deg_max + self.shift_max + self.guard + 1) as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Coefficients of `N`, lowest degree first.
    pub n: Vec<u32>,
    pub k: usize,
}

impl Witness {
    fn sort_key(&self) -> (usize, usize, &[u32]) {
        (self.k, self.n.len(), &self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Score,
    ZeroToPrecision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoreReport {
    pub verdict: Verdict,
    /// `log_p` of `min |N| |<N t^k alpha>|`; absent for zero-to-precision.
    pub score_exp: Option<i64>,
    pub witnesses: Vec<Witness>,
    pub witness_count: usize,
    pub searched: Searched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Searched {
    pub deg_max: usize,
    pub shift_max: usize,
    pub prec: i64,
    pub guard: usize,
}

/// Per-`(N, k)` outcome: `Some(e)` for `|N| |<N t^k alpha>| = p^e`, `None`
/// when the fractional part vanishes on its whole window.
pub type CellValue = Option<i64>;

/// Ordering on outcomes: zero-to-precision is below every finite score.
fn better(a: CellValue, b: CellValue) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x < y,
        _ => false,
    }
}

/// Coefficients `alpha_1, ..., alpha_{prec-1}` (index 0 unused).
fn frac_coeffs(alpha: &LaurentSeries) -> Vec<u32> {
    (0..alpha.prec())
        .map(|n| if n == 0 { 0 } else { alpha.coeff(n).map(|c| c.value()).unwrap_or(0) })
        .collect()
}

/// The monic polynomial with index `idx` in the enumeration order
/// `1, t + 0, t + 1, ..., t^2 + 0, ...` (lower coefficients in base `p`).
pub(super) fn monic_from_index(mut idx: u64, p: u32) -> Vec<u32> {
    let mut d = 0u32;
    let mut block = 1u64;
    while idx >= block {
        idx -= block;
        d += 1;
        block *= p as u64;
    }
    let mut c = Vec::with_capacity(d as usize + 1);
    for _ in 0..d {
        c.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    c.push(1);
    c
}

/// For one `N`, the outcome at every shift `k = 0..=shift_max`.
///
/// `(N t^k alpha)_n = sum_i N_i alpha_{n+i+k}`, which is certified for
/// `n < prec - deg N - k`; the fractional part is the window `n >= 1`.
fn shifts_for(n: &[u32], a: &[u32], p: u32, shift_max: usize) -> Vec<CellValue> {
    let d = n.len() - 1;
    let top = a.len().saturating_sub(d);
    // c[m] = (N alpha)_m for 1 <= m < top
    let mut c = vec![0u32; top.max(1)];
    for (m, slot) in c.iter_mut().enumerate().skip(1) {
        let mut acc = 0u64;
        for (i, &ni) in n.iter().enumerate() {
            acc += ni as u64 * a[m + i] as u64;
        }
        *slot = (acc % p as u64) as u32;
    }
    // next[m]: least m' >= m with c[m'] != 0
    let mut next = vec![usize::MAX; c.len() + 1];
    for m in (1..c.len()).rev() {
        next[m] = if c[m] != 0 { m } else { next[m + 1] };
    }
    (0..=shift_max)
        .map(|k| {
            let first = next.get(1 + k).copied().unwrap_or(usize::MAX);
            if first == usize::MAX {
                None
            } else {
                Some(d as i64 - (first - k) as i64)
            }
        })
        .collect()
}

/// `min |N| |<N t^k alpha>|` over nonzero `N` with `deg N <= deg_max` and
/// `0 <= k <= shift_max`. Constant multiples of `N` give the same value, so
/// only monic `N` are searched.
pub fn littlewood_score(alpha: &LaurentSeries, params: ScoreParams) -> Result<ScoreReport> {
    if alpha.orientation() != Orientation::TInv {
        return Err(Error::Domain("the Littlewood score needs alpha in t^-1".into()));
    }
    if params.guard == 0 {
        return Err(Error::Invalid("guard must be at least 1".into()));
    }
    let need = params.required_prec();
    if alpha.prec() < need {
        return Err(Error::InsufficientPrecision(format!(
            "score with deg <= {}, shift <= {}, guard {} needs alpha to index {need}, have {}",
            params.deg_max,
            params.shift_max,
            params.guard,
            alpha.prec()
        )));
    }
    let p = alpha.modulus();
    let a = frac_coeffs(alpha);
    let count: u64 = (0..=params.deg_max as u32).map(|d| (p as u64).pow(d)).sum();

    struct Partial {
        best: CellValue,
        hits: Vec<Witness>,
        count: usize,
    }
    let empty = || Partial {
        best: Some(i64::MAX),
        hits: vec![],
        count: 0,
    };
    let merge = |mut x: Partial, y: Partial| {
        if better(y.best, x.best) {
            return y;
        }
        if y.best == x.best {
            x.hits.extend(y.hits);
            x.count += y.count;
        }
        x
    };
    let trim = |mut x: Partial| {
        x.hits.sort_by(|u, v| u.sort_key().cmp(&v.sort_key()));
        x.hits.truncate(WITNESS_CAP);
        x
    };

    let total = (0..count)
        .into_par_iter()
        .map(|idx| {
            let n = monic_from_index(idx, p);
            let mut acc = empty();
            for (k, val) in shifts_for(&n, &a, p, params.shift_max).into_iter().enumerate() {
                if better(val, acc.best) {
                    acc = Partial {
                        best: val,
                        hits: vec![],
                        count: 0,
                    };
                }
                if val == acc.best {
                    acc.hits.push(Witness { n: n.clone(), k });
                    acc.count += 1;
                }
            }
            acc
        })
        .fold(empty, merge)
        .map(trim)
        .reduce(empty, |x, y| trim(merge(x, y)));

    let total = trim(total);
    Ok(ScoreReport {
        verdict: if total.best.is_none() {
            Verdict::ZeroToPrecision
        } else {
            Verdict::Score
        },
        score_exp: total.best,
        witnesses: total.hits,
        witness_count: total.count,
        searched: Searched {
            deg_max: params.deg_max,
            shift_max: params.shift_max,
            prec: alpha.prec(),
            guard: params.guard,
        },
    })
}

/// Re-evaluates `|N| |<N t^k alpha>|` through the series layer.
pub fn witness_value(alpha: &LaurentSeries, n: &Poly, k: usize) -> Result<CellValue> {
    let d = n.deg().ok_or(Error::Domain("witness polynomial is zero".into()))? as i64;
    let frac = alpha.mul_poly(&n.shift(k)).frac_part()?;
    Ok(frac.valuation().map(|v| d - v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autoseq::{paperfold_series, PaperfoldParams};

    #[test]
    fn monic_enumeration_order() {
        assert_eq!(monic_from_index(0, 3), vec![1]);
        assert_eq!(monic_from_index(1, 3), vec![0, 1]);
        assert_eq!(monic_from_index(3, 3), vec![2, 1]);
        assert_eq!(monic_from_index(4, 3), vec![0, 0, 1]);
        assert_eq!(monic_from_index(5, 3), vec![1, 0, 1]);
    }

    #[test]
    fn zero_alpha() {
        let alpha = LaurentSeries::zero(3, Orientation::TInv, 8);
        let r = littlewood_score(&alpha, ScoreParams::new(2, 2)).unwrap();
        assert_eq!(r.verdict, Verdict::ZeroToPrecision);
        assert_eq!(r.score_exp, None);
        assert_eq!(r.witnesses[0], Witness { n: vec![1], k: 0 });
    }

    #[test]
    fn rational_alpha() {
        let alpha = LaurentSeries::t_power(3, -1, Orientation::TInv, 8);
        let r = littlewood_score(&alpha, ScoreParams::new(0, 1)).unwrap();
        assert_eq!(r.verdict, Verdict::ZeroToPrecision);
        assert_eq!(r.witnesses, vec![Witness { n: vec![1], k: 1 }]);
        assert_eq!(r.witness_count, 1);
        let r = littlewood_score(&alpha, ScoreParams::new(0, 0)).unwrap();
        assert_eq!(r.score_exp, Some(-1));
    }

    #[test]
    fn precision_requirement() {
        let alpha = LaurentSeries::t_power(3, -1, Orientation::TInv, 4);
        assert!(matches!(
            littlewood_score(&alpha, ScoreParams::new(2, 1)),
            Err(Error::InsufficientPrecision(_))
        ));
        let mut params = ScoreParams::new(0, 0);
        params.guard = 0;
        assert!(littlewood_score(&alpha, params).is_err());
    }

    #[test]
    fn witnesses_reproduce_the_score() {
        let alpha = paperfold_series(PaperfoldParams::new(1, 3).unwrap(), 40).unwrap();
        let r = littlewood_score(&alpha, ScoreParams::new(3, 8)).unwrap();
        let e = r.score_exp.unwrap();
        assert!(e < 0);
        assert!(!r.witnesses.is_empty());
        for w in &r.witnesses {
            let n = Poly::from_coeffs(3, &w.n.iter().map(|&c| c as i64).collect::<Vec<_>>());
            assert_eq!(witness_value(&alpha, &n, w.k).unwrap(), Some(e));
        }
        let keys: Vec<_> = r.witnesses.iter().map(Witness::sort_key).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn monotone_in_search_box() {
        let alpha = paperfold_series(PaperfoldParams::new(2, 5).unwrap(), 40).unwrap();
        let mut last = i64::MAX;
        for (d, k) in [(0, 0), (1, 2), (2, 4), (3, 6), (3, 10)] {
            let e = littlewood_score(&alpha, ScoreParams::new(d, k)).unwrap().score_exp.unwrap();
            assert!(e <= last);
            last = e;
        }
    }
}
