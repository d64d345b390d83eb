use ffdiag::autoseq::{paperfold_series, PaperfoldParams};
use ffdiag::diophantine::{littlewood_score, mahler_height, ScoreParams, Verdict};
use ffdiag::{LaurentSeries, Orientation};

/// `min max(|t^{m+n} P + t^{m-n} alpha^-1 Q|, |t^{-m-n} Q|)` over nonzero
/// `(P, Q)`. Since `lambda_1 lambda_2 = 1`, `lambda_1 <= 1`, which forces
/// `deg Q <= m + n` and `deg P <= m - n + v` with `|alpha| = p^-v`.
fn height_oracle(m: i64, n: i64, alpha: &LaurentSeries) -> i64 {
    let p = alpha.modulus();
    let v = alpha.valuation().unwrap();
    let inv = alpha.inv().unwrap();
    let (dq, dp) = ((m + n) as u32, (m - n + v) as u32);
    // exponents top down to bottom inside the certified window of alpha^-1 Q t^{m-n}
    let top = 2 * m + v + 1;
    let bottom = m - n + dq as i64 + 1 - inv.prec();
    let width = (top - bottom + 1) as usize;
    let at = |e: i64| (top - e) as usize;
    let digits = |mut code: u64, len: u32| {
        (0..len)
            .map(|_| {
                let d = (code % p as u64) as u32;
                code /= p as u64;
                d
            })
            .collect::<Vec<u32>>()
    };
    let mut best = i64::MAX;
    for qc in 0..(p as u64).pow(dq + 1) {
        let q = digits(qc, dq + 1);
        let mut base = vec![0u32; width];
        for (i, &qi) in q.iter().enumerate() {
            for e in bottom..=top {
                // coefficient of t^e in t^{m-n+i} alpha^-1
                let c = inv.coeff_of_t_power(e - (m - n) - i as i64).map(|c| c.value()).unwrap_or(0);
                base[at(e)] = (base[at(e)] + qi * c) % p;
            }
        }
        let q_norm = q.iter().rposition(|&c| c != 0).map(|d| d as i64 - m - n);
        for pc in 0..(p as u64).pow(dp + 1) {
            if qc == 0 && pc == 0 {
                continue;
            }
            let pp = digits(pc, dp + 1);
            let mut first = base.clone();
            for (i, &c) in pp.iter().enumerate() {
                let e = m + n + i as i64;
                first[at(e)] = (first[at(e)] + c) % p;
            }
            let lead = first.iter().position(|&c| c != 0).map(|w| top - w as i64);
            assert!(lead.is_some() || q_norm.is_some(), "vector vanished on the window");
            let norm = lead.unwrap_or(i64::MIN).max(q_norm.unwrap_or(i64::MIN));
            best = best.min(norm);
        }
    }
    best
}

#[test]
fn mahler_height_matches_enumeration() {
    let alpha = paperfold_series(PaperfoldParams::new(1, 3).unwrap(), 40).unwrap();
    for (m, n) in [(3, 2), (0, 0), (2, 1), (3, 0), (4, 2), (3, 3)] {
        let got = mahler_height(m, n, &alpha).unwrap().min_exp;
        assert_eq!(got, height_oracle(m as i64, n as i64, &alpha), "(m, n) = ({m}, {n})");
    }
}

#[test]
fn zero_alpha_is_zero_to_precision() {
    let alpha = LaurentSeries::zero(5, Orientation::TInv, 12);
    let r = littlewood_score(&alpha, ScoreParams::new(2, 2)).unwrap();
    assert_eq!(r.verdict, Verdict::ZeroToPrecision);
    assert_eq!(r.witnesses[0].n, vec![1]);
    assert_eq!(r.witnesses[0].k, 0);
}

#[test]
fn score_is_non_increasing_in_the_box() {
    let alpha = paperfold_series(PaperfoldParams::new(2, 5).unwrap(), 40).unwrap();
    let ks = [0, 2, 5, 9];
    let table: Vec<Vec<i64>> = (0..=3)
        .map(|d| {
            ks.iter()
                .map(|&k| littlewood_score(&alpha, ScoreParams::new(d, k)).unwrap().score_exp.unwrap())
                .collect()
        })
        .collect();
    for d in 0..table.len() {
        for j in 0..ks.len() {
            if d > 0 {
                assert!(table[d][j] <= table[d - 1][j]);
            }
            if j > 0 {
                assert!(table[d][j] <= table[d][j - 1]);
            }
        }
    }
}
