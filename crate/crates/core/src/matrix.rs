//! Small dense matrices over any of the crate's ring types.
//!
//! Every ring here needs context to build its zero and one (the modulus, a
//! precision window), so instead of `num_traits::{Zero, One}` the element
//! trait asks for `zero_like`/`one_like` built from an existing element.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{LaurentSeries, PairElem};
use crate::quadext::{QuadElem, RatFunc};

pub trait RingOps<Rhs, Output>:
    Add<Rhs, Output = Output> + Sub<Rhs, Output = Output> + Mul<Rhs, Output = Output> + Neg<Output = Output>
{
}

impl<T, Rhs, Output> RingOps<Rhs, Output> for T where
    T: Add<Rhs, Output = Output>
        + Sub<Rhs, Output = Output>
        + Mul<Rhs, Output = Output>
        + Neg<Output = Output>
{
}

pub trait RingElement: Clone + Debug
where
    for<'a> &'a Self: RingOps<&'a Self, Self>,
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl RingElement for LaurentSeries {
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.modulus(), self.orientation(), self.prec())
    }
    fn one_like(&self) -> Self {
        LaurentSeries::one(self.modulus(), self.orientation(), self.prec().max(1))
    }
}

impl RingElement for PairElem {
    fn zero_like(&self) -> Self {
        PairElem::new(self.first.zero_like(), self.second.zero_like())
    }
    fn one_like(&self) -> Self {
        PairElem::new(self.first.one_like(), self.second.one_like())
    }
}

impl RingElement for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.modulus())
    }
}

impl RingElement for QuadElem {
    fn zero_like(&self) -> Self {
        QuadElem::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        QuadElem::one(self.modulus())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix rows");
        Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, r)| (k / self.cols, k % self.cols, r))
    }

    pub fn map<S>(&self, mut f: impl FnMut(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<S, E>(&self, f: impl FnMut(&R) -> Result<S, E>) -> Result<Matrix<S>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<&R>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

impl<R> Matrix<R>
where
    R: RingElement,
    for<'a> &'a R: RingOps<&'a R, R>,
{
    /// Identity of size `n`, with zero and one shaped like `proto`.
    pub fn identity_like(n: usize, proto: &R) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0) * other.get(0, j);
            for k in 1..self.cols {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c * x)
    }

    /// Determinant by cofactor expansion along the first row; division free,
    /// so it works over every ring here. Intended for n <= 4.
    pub fn det(&self) -> R {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let idx: Vec<usize> = (0..self.cols).collect();
        self.minor_det(0, &idx)
    }

    fn minor_det(&self, row: usize, cols: &[usize]) -> R {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        if cols.len() == 2 {
            let a = self.get(row, cols[0]) * self.get(row + 1, cols[1]);
            let b = self.get(row, cols[1]) * self.get(row + 1, cols[0]);
            return &a - &b;
        }
        let mut acc: Option<R> = None;
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = self.get(row, c) * &self.minor_det(row + 1, &rest);
            acc = Some(match acc {
                None => term,
                Some(a) if k % 2 == 0 => &a + &term,
                Some(a) => &a - &term,
            });
        }
        acc.expect("non-empty matrix")
    }

    /// `diag(a, b)` as a block matrix.
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let proto = a.get(0, 0).zero_like();
        let n = a.rows + b.rows;
        let m = a.cols + b.cols;
        Matrix::from_fn(n, m, |i, j| {
            if i < a.rows && j < a.cols {
                a.get(i, j).clone()
            } else if i >= a.rows && j >= a.cols {
                b.get(i - a.rows, j - a.cols).clone()
            } else {
                proto.clone()
            }
        })
    }

    /// Assembles a matrix from a grid of equally sized blocks.
    pub fn from_blocks(blocks: &Matrix<Matrix<R>>) -> Self {
        let br = blocks.get(0, 0).rows;
        let bc = blocks.get(0, 0).cols;
        Matrix::from_fn(blocks.rows * br, blocks.cols * bc, |i, j| {
            blocks.get(i / br, j / bc).get(i % br, j % bc).clone()
        })
    }
}

impl Matrix<LaurentSeries> {
    /// Entrywise agreement on every certified coefficient.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| a.agrees_with(b))
    }

    /// The worst residual `|a_ij - b_ij|` bound exponent, together with
    /// whether every difference vanishes on its window.
    pub fn residual(&self, other: &Self) -> (i64, bool) {
        let mut worst = i64::MIN;
        let mut clean = true;
        for (a, b) in self.data.iter().zip(&other.data) {
            let m = a.sub(b).magnitude();
            worst = worst.max(m.bound());
            clean &= m.is_zero_to_precision();
        }
        (worst, clean)
    }

    /// Smallest precision over all entries.
    pub fn min_prec(&self) -> i64 {
        self.data.iter().map(LaurentSeries::prec).min().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson<R> {
    entries: Vec<Vec<R>>,
}

impl<R: Serialize + Clone> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            entries: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, R: Deserialize<'de>> Deserialize<'de> for Matrix<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = MatrixJson::<R>::deserialize(deserializer)?;
        let m = j.entries.first().map_or(0, Vec::len);
        if j.entries.iter().any(|r| r.len() != m) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Matrix::from_rows(j.entries))
    }
}
