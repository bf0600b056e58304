pub mod lp;
pub mod minimax;
pub mod polytope;
pub mod project;

pub use lp::{lp_tol, Cmp, Lp, LpError, LpSolution, LpStatus, Sense, VarKind};
pub use minimax::{max_over_y, min_over_x, minimax_bilinear, minimax_x, BiaffinePayoff, Minimax};
pub use polytope::{LpResult, Polytope, PolytopeJson, SeparationResult, Structure, MEMBER_TOL};
pub use project::{project_point, Piece};

/// Optimizes `objective` over `p`.
pub fn solve_lp(objective: &[f64], p: &Polytope, sense: Sense) -> crate::Result<LpResult> {
    p.solve_lp(objective, sense)
}

pub fn enumerate_vertices(p: &Polytope) -> crate::Result<Vec<Vec<f64>>> {
    p.enumerate_vertices()
}

pub fn separate(q: &[f64], p: &Polytope) -> SeparationResult {
    p.separate(q)
}
