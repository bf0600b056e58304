//! Seeded random games and transcripts for property checks and benches.

use rand::Rng;

use crate::convex::Polytope;
use crate::games::{PolytopeGame, RewardTranscript, Transcript, VertexCsp};
use crate::linalg::Mat;
use crate::regret::vertex_csp_of_rounds;

/// A small polytope: a simplex, a product of simplices or a lifted cube.
pub fn random_polytope<R: Rng>(rng: &mut R) -> Polytope {
    match rng.gen_range(0..4) {
        0 => Polytope::simplex(rng.gen_range(2..=4)),
        1 => Polytope::product_of_simplices(&[2, 2]),
        2 => Polytope::product_of_simplices(&[2, 3]),
        _ => Polytope::hypercube_lifted(2),
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
}

pub fn random_game_on<R: Rng>(rng: &mut R, x_set: Polytope, y_set: Polytope) -> PolytopeGame {
    let (dl, d_o) = (x_set.dim(), y_set.dim());
    let ul = random_matrix(rng, dl, d_o);
    let uo = random_matrix(rng, dl, d_o);
    PolytopeGame::new("random", x_set, y_set, ul, uo).expect("shapes agree")
}

pub fn random_game<R: Rng>(rng: &mut R) -> PolytopeGame {
    let x = random_polytope(rng);
    let y = random_polytope(rng);
    random_game_on(rng, x, y)
}

/// Normal-form game with `m x n` actions.
pub fn random_normal_form<R: Rng>(rng: &mut R, m: usize, n: usize) -> PolytopeGame {
    random_game_on(rng, Polytope::simplex(m), Polytope::simplex(n))
}

/// Game whose learner set is a simplex.
pub fn random_simplex_game<R: Rng>(rng: &mut R) -> PolytopeGame {
    let x = Polytope::simplex(rng.gen_range(2..=4));
    let y = random_polytope(rng);
    random_game_on(rng, x, y)
}

/// Random convex combination of vertices, or a vertex with probability `p_vertex`.
pub fn random_point<R: Rng>(rng: &mut R, set: &Polytope, p_vertex: f64) -> Vec<f64> {
    let vs = set.vertices().expect("small polytope");
    if rng.gen_bool(p_vertex) {
        return vs[rng.gen_range(0..vs.len())].clone();
    }
    let w: Vec<f64> = (0..vs.len()).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
    let total: f64 = w.iter().sum();
    let mut out = vec![0.0; set.dim()];
    for (v, wv) in vs.iter().zip(&w) {
        crate::linalg::axpy(&mut out, wv / total, v);
    }
    out
}

pub fn random_transcript<R: Rng>(rng: &mut R, g: &PolytopeGame, t: usize) -> Transcript {
    let xs = (0..t).map(|_| random_point(rng, &g.x_set, 0.5)).collect();
    let ys = (0..t).map(|_| random_point(rng, &g.y_set, 0.5)).collect();
    Transcript::new(xs, ys).expect("equal lengths")
}

/// Reward transcript on `x_set` with reward vectors in `[-1, 1]^d`.
pub fn random_reward_transcript<R: Rng>(rng: &mut R, x_set: &Polytope, t: usize) -> RewardTranscript {
    let d = x_set.dim();
    let xs = (0..t).map(|_| random_point(rng, x_set, 0.5)).collect();
    let rs = (0..t).map(|_| (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    RewardTranscript::new(xs, rs).expect("equal lengths")
}

/// Random vertex weights, one distribution per round.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize, rounds: usize) -> Vec<Vec<f64>> {
    (0..rounds)
        .map(|_| {
            if rng.gen_bool(0.5) {
                let mut w = vec![0.0; n];
                w[rng.gen_range(0..n)] = 1.0;
                return w;
            }
            let w: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|v| v / total).collect()
        })
        .collect()
}

/// A transcript together with the vertex transcript it averages, so that
/// `x_t = E[x_t^V]` and `y_t = E[y_t^V]` hold round by round.
pub fn random_vertex_transcript<R: Rng>(rng: &mut R, g: &PolytopeGame, t: usize) -> (Transcript, VertexCsp) {
    let vx = g.x_set.vertices().expect("small polytope");
    let vy = g.y_set.vertices().expect("small polytope");
    let alphas = random_weights(rng, vx.len(), t);
    let betas = random_weights(rng, vy.len(), t);
    let mix = |vs: &[Vec<f64>], w: &[f64]| {
        let mut out = vec![0.0; vs[0].len()];
        for (v, wv) in vs.iter().zip(w) {
            crate::linalg::axpy(&mut out, *wv, v);
        }
        out
    };
    let xs = alphas.iter().map(|a| mix(vx, a)).collect();
    let ys = betas.iter().map(|b| mix(vy, b)).collect();
    let vcsp = vertex_csp_of_rounds(&alphas, &betas).expect("weights are distributions");
    (Transcript::new(xs, ys).expect("equal lengths"), vcsp)
}
