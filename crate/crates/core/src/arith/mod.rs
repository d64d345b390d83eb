//! Exact arithmetic in `F_p`, `F_p[t]` and truncated Laurent series.

mod abs;
mod fp;
mod laurent;
mod pair;
mod poly;

pub use abs::{AbsExp, Magnitude};
pub use fp::{check_odd_prime, Fp};
pub use laurent::{LaurentSeries, Orientation};
pub use pair::PairElem;
pub use poly::Poly;
