//! The t-adic Littlewood score, ultrametric rank-2 lattice reduction and
//! the Mahler heights of the trajectory `a(t^m, t^-n) u(alpha^-1, 0)`.

mod lattice;
mod score;
mod trajectory;

pub use lattice::{norm_exp, reduce_lattice2, Lattice2, Reduced, Vec2};
pub use score::{
    littlewood_score, witness_value, CellValue, ScoreParams, ScoreReport, Searched, Verdict, Witness,
    WITNESS_CAP,
};
pub use trajectory::{
    case_a_filter, grid_required_prec, mahler_height, score_height_consistency, trajectory_grid,
    trajectory_lattice, CaseASummary, ConsistencyParams, ConsistencyReport, HeightCell, HeightGrid,
};
