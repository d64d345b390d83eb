//! Paperfolding sequences and deterministic finite automata with output.

use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_prime, Fp, LaurentSeries, Orientation};
use crate::error::{Error, Result};

/// `n = 2^l k` with `k` odd.
pub fn odd_part(n: u64) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::Domain("odd part of 0".into()));
    }
    let l = n.trailing_zeros();
    Ok((l, n >> l))
}

/// Largest `m` with `2^m | p - 1`.
pub fn max_two_adic(p: u32) -> u32 {
    (p - 1).trailing_zeros()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperfoldParams {
    pub m: u32,
    pub p: u32,
}

impl PaperfoldParams {
    pub fn new(m: u32, p: u64) -> Result<Self> {
        let p = check_odd_prime(p)?;
        if m == 0 {
            return Err(Error::Domain("paperfolding level must be at least 1".into()));
        }
        if m > 62 {
            return Err(Error::Domain(format!("paperfolding level {m} too large")));
        }
        Ok(PaperfoldParams { m, p })
    }

    /// Level `max_two_adic(p)`, the one paired with `p` in the t-adic Littlewood counterexample.
    pub fn for_prime(p: u64) -> Result<Self> {
        let q = check_odd_prime(p)?;
        Self::new(max_two_adic(q), p)
    }
}

/// Integer value `f_n = ((k - 1) mod 2^{m+1}) / 2` where `k` is the odd part of `n`.
pub fn paperfold_int(n: u64, m: u32) -> Result<u64> {
    let (_, k) = odd_part(n)?;
    let modulus = 1u64 << (m + 1);
    Ok(((k - 1) % modulus) / 2)
}

pub fn paperfold_term(n: u64, params: PaperfoldParams) -> Result<Fp> {
    Ok(Fp::new(paperfold_int(n, params.m)?, params.p))
}

/// `sum_{n >= 1} f_n t^-n + O(t^-prec)`.
pub fn paperfold_series(params: PaperfoldParams, prec: i64) -> Result<LaurentSeries> {
    if prec < 2 {
        return Err(Error::InsufficientPrecision(format!(
            "paperfolding series needs prec >= 2, got {prec}"
        )));
    }
    let coeffs = (1..prec as u64)
        .map(|n| paperfold_term(n, params).map(Fp::value))
        .collect::<Result<Vec<_>>>()?;
    LaurentSeries::new(params.p, Orientation::TInv, 1, prec, coeffs)
}

/// Automaton `(S, s_0, zeta, Phi)` reading base-`q` digits least significant
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DfaoJson", into = "DfaoJson")]
pub struct Dfao {
    q: u32,
    states: usize,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    output: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct DfaoJson {
    q: u32,
    states: usize,
    initial: usize,
    transitions: Vec<Vec<usize>>,
    output: Vec<u32>,
}

impl TryFrom<DfaoJson> for Dfao {
    type Error = Error;
    fn try_from(j: DfaoJson) -> Result<Self> {
        Dfao::new(j.q, j.states, j.initial, j.transitions, j.output)
    }
}

impl From<Dfao> for DfaoJson {
    fn from(d: Dfao) -> Self {
        DfaoJson {
            q: d.q,
            states: d.states,
            initial: d.initial,
            transitions: d.transitions,
            output: d.output,
        }
    }
}

impl Dfao {
    /// `transitions[d][s]` is `zeta_d(s)`.
    pub fn new(
        q: u32,
        states: usize,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        output: Vec<u32>,
    ) -> Result<Self> {
        if q < 2 {
            return Err(Error::Invalid(format!("base {q} < 2")));
        }
        if states == 0 || initial >= states {
            return Err(Error::Invalid(format!("initial state {initial} of {states}")));
        }
        if transitions.len() != q as usize {
            return Err(Error::Invalid(format!(
                "{} transition maps for base {q}",
                transitions.len()
            )));
        }
        for (d, row) in transitions.iter().enumerate() {
            if row.len() != states || row.iter().any(|&s| s >= states) {
                return Err(Error::Invalid(format!("transition map for digit {d} is not total")));
            }
        }
        if output.len() != states {
            return Err(Error::Invalid(format!("{} outputs for {states} states", output.len())));
        }
        Ok(Dfao {
            q,
            states,
            initial,
            transitions,
            output,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn states(&self) -> usize {
        self.states
    }

    /// Final state after reading `n`; `n = 0` reads the single digit 0.
    pub fn run(&self, n: u64) -> usize {
        let q = self.q as u64;
        let mut s = self.initial;
        let mut rest = n;
        loop {
            s = self.transitions[(rest % q) as usize][s];
            rest /= q;
            if rest == 0 {
                return s;
            }
        }
    }

    pub fn eval(&self, n: u64) -> u32 {
        self.output[self.run(n)]
    }

    pub fn eval_fp(&self, n: u64, p: u32) -> Fp {
        Fp::new(self.eval(n) as u64, p)
    }

    /// `sum_{n >= 0} f_n t^-n + O(t^-prec)`.
    pub fn series(&self, p: u32, prec: i64) -> LaurentSeries {
        let coeffs = (0..prec.max(0) as u64).map(|n| self.eval_fp(n, p).value()).collect();
        LaurentSeries::new(p, Orientation::TInv, 0, prec.max(0), coeffs)
            .expect("window built to size")
    }
}

/// Three-state base-3 automaton whose output is the indicator of the powers
/// of 3.
pub fn christol_example() -> Dfao {
    Dfao::new(
        3,
        3,
        0,
        vec![vec![0, 2, 2], vec![1, 2, 2], vec![2, 2, 2]],
        vec![0, 1, 0],
    )
    .expect("valid table")
}
