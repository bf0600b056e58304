//! Named games and transcripts from the counterexample constructions, plus the
//! registry that checks their claimed values.

pub mod counterexamples;
pub mod random;

pub use counterexamples::{run_counterexample, Assertion, CounterexampleReport, COUNTEREXAMPLES};

use crate::convex::Polytope;
use crate::error::{Error, Result};
use crate::games::{PolytopeGame, Transcript, VertexCsp};
use crate::linalg::Mat;

pub const BUILTIN_GAMES: &[&str] =
    &["comp-prof-swap-game", "square-game", "agnostic-game", "gap-game", "baseline-contrast", "matching-pennies"];

pub fn builtin(name: &str) -> Result<PolytopeGame> {
    match name {
        "comp-prof-swap-game" => Ok(comp_prof_game()),
        "square-game" => square_game(),
        "agnostic-game" => Ok(agnostic_game()),
        "gap-game" => Ok(gap_game()),
        "baseline-contrast" => Ok(baseline_contrast_game()),
        "matching-pennies" => Ok(matching_pennies()),
        _ => Err(Error::Parse(format!("unknown builtin game {name:?}; known: {}", BUILTIN_GAMES.join(", ")))),
    }
}

fn identity(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| (i == j) as u8 as f64)
}

/// `v_ij` of `Delta_2^2`: type-1 action i, type-2 action j (1-based).
pub fn v(i: usize, j: usize) -> Vec<f64> {
    let mut out = vec![0.0; 4];
    out[i - 1] = 1.0;
    out[2 + j - 1] = 1.0;
    out
}

/// `w_ijk = (v_ij, e_k)` in `Delta_2^2 x Delta_4`.
pub fn w(i: usize, j: usize, k: usize) -> Vec<f64> {
    let mut out = v(i, j);
    let mut e = vec![0.0; 4];
    e[k - 1] = 1.0;
    out.extend(e);
    out
}

/// `u_L = <x, y> / 2`: the match-the-type payoff averaged over a uniform prior.
pub fn comp_prof_game() -> PolytopeGame {
    let x = Polytope::product_of_simplices(&[2, 2]);
    PolytopeGame::new("comp-prof-swap-game", x.clone(), x, identity(4).scale(0.5), identity(4).scale(-0.5))
        .expect("valid game")
}

/// One round per epoch; the last epoch pairs `v_22` with `v_11`.
pub fn comp_prof_transcript() -> Transcript {
    Transcript::new(vec![v(1, 1), v(1, 2), v(2, 1), v(2, 2)], vec![v(1, 1), v(1, 2), v(2, 1), v(1, 1)])
        .expect("equal lengths")
}

/// `X = [0,1]^2 x {1}`, `Y = [-1,1] x {1}`, `u_L = y (x_1 - x_2)`, zero-sum.
pub fn square_game() -> Result<PolytopeGame> {
    let x = Polytope::hypercube_lifted(2);
    let y = Polytope::box_lifted(&[-1.0], &[1.0])?;
    let mut u = Mat::zeros(3, 2);
    u.set(0, 0, 1.0);
    u.set(1, 0, -1.0);
    PolytopeGame::new("square-game", x, y, u.clone(), u.scale(-1.0))
}

/// `x_t = (1/2, 1/2)` throughout, `y = -1` for the first half and `+1` after.
pub fn square_transcript(t: usize) -> Transcript {
    let half = t / 2;
    let xs = vec![vec![0.5, 0.5, 1.0]; t];
    let ys = (0..t).map(|s| vec![if s < half { -1.0 } else { 1.0 }, 1.0]).collect();
    Transcript::new(xs, ys).expect("equal lengths")
}

/// Vertex CSP of the square transcript when the first half splits `x_t` over
/// `{(0,0), (1,1)}` and the second half over `{(0,1), (1,0)}`.
pub fn square_vertex_csp(g: &PolytopeGame) -> Result<VertexCsp> {
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    let ix = |p: [f64; 2]| index_of(vx, &[p[0], p[1], 1.0]);
    let iy = |s: f64| index_of(vy, &[s, 1.0]);
    let mut m = Mat::zeros(vx.len(), vy.len());
    for (p, s) in [([0.0, 0.0], -1.0), ([1.0, 1.0], -1.0), ([0.0, 1.0], 1.0), ([1.0, 0.0], 1.0)] {
        m.set(ix(p)?, iy(s)?, 0.25);
    }
    VertexCsp::new(m)
}

/// `X = Delta_2^2`, `Y = Delta_2^2 x Delta_4`, `u_L(x, y) = <x, Proj_1 y>`.
pub fn agnostic_game() -> PolytopeGame {
    let x = Polytope::product_of_simplices(&[2, 2]);
    let y = Polytope::product_of_simplices(&[2, 2, 4]);
    let u = Mat::from_fn(4, 8, |i, j| (i == j) as u8 as f64);
    PolytopeGame::new("agnostic-game", x, y, u, Mat::zeros(4, 8)).expect("valid game")
}

/// The two transcripts sharing one reward transcript.
pub fn agnostic_transcripts() -> (Transcript, Transcript) {
    let xs = vec![v(1, 1), v(1, 2), v(2, 1), v(2, 2)];
    let t1 = Transcript::new(xs.clone(), vec![w(1, 1, 1), w(1, 2, 1), w(2, 1, 1), w(1, 1, 1)]).expect("equal lengths");
    let t2 = Transcript::new(xs, vec![w(1, 1, 1), w(1, 2, 2), w(2, 1, 3), w(1, 1, 4)]).expect("equal lengths");
    (t1, t2)
}

pub const GAP_U_X: [f64; 9] = [-1.0, -1.0, 0.5, 0.0, 1.0, 0.0, -1.0, -1.0, -1.0];
pub const GAP_U_Y: [f64; 9] = [-0.5, 1.0, 1.0, -0.5, 0.5, 1.0, 0.5, -1.0, -0.5];
pub const GAP_PHI: [f64; 9] = [0.0, 0.2, 0.4, 0.2, 0.4, 0.6, 0.4, 0.4, 1.0];

/// Vertex order used by the reference vertex-game tables.
pub const GAP_TABLE_ORDER: [[f64; 3]; 4] = [[0.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 0.0, 1.0]];

/// Both players on `[0,1]^2 x {1}`; a profile CE that no NFCE projects to.
pub fn gap_game() -> PolytopeGame {
    let x = Polytope::hypercube_lifted(2);
    let ux = Mat { rows: 3, cols: 3, data: GAP_U_X.to_vec() };
    let uy = Mat { rows: 3, cols: 3, data: GAP_U_Y.to_vec() };
    PolytopeGame::new("gap-game", x.clone(), x, ux, uy).expect("valid game")
}

pub fn gap_phi() -> Mat {
    Mat { rows: 3, cols: 3, data: GAP_PHI.to_vec() }
}

/// Reads a 4x4 table written in `GAP_TABLE_ORDER` into canonical vertex order.
pub fn gap_table(rows: [[f64; 4]; 4]) -> Result<VertexCsp> {
    let g = gap_game();
    let vs = g.x_set.vertices()?;
    let perm = GAP_TABLE_ORDER.iter().map(|p| index_of(vs, p)).collect::<Result<Vec<_>>>()?;
    let mut m = Mat::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            m.set(perm[a], perm[b], rows[a][b]);
        }
    }
    VertexCsp::new(m)
}

/// X attains zero normal-form swap regret.
pub fn gap_phi_v1() -> VertexCsp {
    gap_table([[0.2, 0.0, 0.0, 0.2], [0.0, 0.0, 0.2, 0.0], [0.2, 0.2, 0.0, 0.0], [0.0; 4]]).expect("valid table")
}

/// Y attains zero normal-form swap regret; also the unique candidate left by
/// the elimination argument.
pub fn gap_phi_v2() -> VertexCsp {
    gap_table([[0.0, 0.0, 0.0, 0.2], [0.0, 0.2, 0.0, 0.2], [0.0, 0.2, 0.0, 0.0], [0.2, 0.0, 0.0, 0.0]])
        .expect("valid table")
}

/// Three learner actions against two optimizer actions. Against the first
/// optimizer action the learner's second row beats the third by only 0.01, so
/// a gradient learner stays mixed between them for thousands of rounds while
/// the optimizer collects 0.89 from the third row. A no-profile-swap-regret
/// learner settles on the second row.
pub fn baseline_contrast_game() -> PolytopeGame {
    let u_l = Mat::from_rows(&[vec![-0.65, 0.38], vec![-0.60, 0.22], vec![-0.61, -0.58]]).expect("rectangular");
    let u_o = Mat::from_rows(&[vec![-0.64, -0.61], vec![-0.85, 0.16], vec![0.89, -0.33]]).expect("rectangular");
    PolytopeGame::new("baseline-contrast", Polytope::simplex(3), Polytope::simplex(2), u_l, u_o).expect("valid game")
}

/// Optimizer script for the contrast game: the first action for three
/// quarters of the horizon, then the second.
pub fn baseline_contrast_script(t: usize) -> Vec<Vec<f64>> {
    let switch = 3 * t / 4;
    (0..t).map(|s| if s < switch { vec![1.0, 0.0] } else { vec![0.0, 1.0] }).collect()
}

pub fn matching_pennies() -> PolytopeGame {
    let u = Mat::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).expect("rectangular");
    PolytopeGame::new("matching-pennies", Polytope::simplex(2), Polytope::simplex(2), u.clone(), u.scale(-1.0))
        .expect("valid game")
}

pub fn index_of(vs: &[Vec<f64>], p: &[f64]) -> Result<usize> {
    vs.iter()
        .position(|q| crate::linalg::max_abs_diff(q, p) <= 1e-12)
        .ok_or_else(|| Error::InvalidGame(format!("{p:?} is not a listed vertex")))
}
