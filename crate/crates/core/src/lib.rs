//! Exact computations around bounded diagonal orbits over function fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: `F_p`, `F_p[t]` and precision-tracked Laurent series in
//!   `t^-1` (the local field `K`) or in `t`.
//! * [`autoseq`]: paperfolding sequences and automata with output.
//! * [`diophantine`]: the t-adic Littlewood score, rank-2 ultrametric lattice
//!   reduction and trajectory heights.
//! * [`quadext`]: the quadratic extension `L = F_p(t)(beta)`,
//!   `beta^2 = 1 + t^-1`, and the isomorphism `eta`.
//! * [`resscalars`]: restriction of scalars `psi: M_2(K x K) -> M_4(K)`.
//! * [`cli`]: the `ffdiag` command-line front end.

pub mod arith;
pub mod autoseq;
pub mod cli;
pub mod diophantine;
pub mod error;
pub mod matrix;
pub mod quadext;
pub mod resscalars;

pub use arith::{AbsExp, Fp, LaurentSeries, Magnitude, Orientation, PairElem, Poly};
pub use error::{Error, Result};
pub use matrix::{Matrix, RingElement};

/// 2x2 matrices over `K` (lattice bases, `g_1`).
pub type Mat2K = Matrix<LaurentSeries>;
/// 4x4 matrices over `K`: images of `psi`.
pub type Mat4 = Matrix<LaurentSeries>;
/// 2x2 matrices over `K x K`: elements of `G = SL_2(K x K)`.
pub type Mat2Pair = Matrix<PairElem>;
/// Exact matrices over `F_p(t)`: regular representations `l_a`.
pub type RatMat = Matrix<quadext::RatFunc>;
/// Exact matrices over `L`: elements of `SL_2(L)`.
pub type QuadMat = Matrix<quadext::QuadElem>;
