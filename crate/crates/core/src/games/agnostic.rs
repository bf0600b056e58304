//! Game-agnostic transcripts: rewards instead of opponent actions.

use super::game::PolytopeGame;
use super::profile::{RewardTranscript, Transcript};
use crate::convex::{Polytope, Structure};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, null_space, Mat};

/// `r_t = U_L y_t`.
pub fn to_agnostic(t: &Transcript, g: &PolytopeGame) -> RewardTranscript {
    RewardTranscript { xs: t.xs.clone(), rs: t.ys.iter().map(|y| g.u_learner.mul_vec(y)).collect() }
}

/// Game with `Y = Delta_T` whose optimizer plays `e_t` at round t, so that the
/// learner faces exactly the rewards of `rt`.
pub fn embed_delta_t(rt: &RewardTranscript, x_set: &Polytope) -> Result<(PolytopeGame, Transcript)> {
    let n = rt.len();
    if n == 0 {
        return Err(Error::InvalidGame("empty reward transcript".into()));
    }
    let dl = x_set.dim();
    let u = Mat::from_fn(dl, n, |i, t| rt.rs[t][i]);
    let g = PolytopeGame::new("delta-t-embedding", x_set.clone(), Polytope::simplex(n), u, Mat::zeros(dl, n))?;
    let ys = (0..n)
        .map(|t| {
            let mut e = vec![0.0; n];
            e[t] = 1.0;
            e
        })
        .collect();
    Ok((g, Transcript::new(rt.xs.clone(), ys)?))
}

/// Reward game `G*`: the optimizer picks a linear functional bounded by
/// `bound` on every vertex of X, written as `(g, 1)` with `g` in the span of
/// the vertices so that the representation is unique.
pub fn build_gstar(x_set: &Polytope, bound: f64) -> Result<PolytopeGame> {
    let vs = x_set.vertices()?;
    let dl = x_set.dim();
    let d = dl + 1;
    let mut ineq = Vec::new();
    for v in vs {
        let mut a = v.clone();
        a.push(0.0);
        ineq.push((a.clone(), bound));
        ineq.push((a.iter().map(|x| -x).collect(), bound));
    }
    let mut eq = Vec::new();
    let mut e = vec![0.0; d];
    e[dl] = 1.0;
    eq.push((e, 1.0));
    for n in null_space(vs, dl) {
        let mut a = n;
        a.push(0.0);
        eq.push((a, 0.0));
    }
    let y_set = Polytope::new(d, ineq, eq, None, Structure::Explicit)?;
    let u = Mat::from_fn(dl, d, |i, j| (i == j) as u8 as f64);
    PolytopeGame::new("gstar", x_set.clone(), y_set, u, Mat::zeros(dl, d))
}

/// The point of `G*`'s action set representing the functional `g` on X.
pub fn gstar_point(x_set: &Polytope, g: &[f64]) -> Result<Vec<f64>> {
    let vs = x_set.vertices()?;
    let mut r = g.to_vec();
    for n in null_space(vs, x_set.dim()) {
        let c = dot(&r, &n);
        axpy(&mut r, -c, &n);
    }
    r.push(1.0);
    Ok(r)
}

/// Transcript of `G*` replaying the rewards of `rt`.
pub fn gstar_transcript(rt: &RewardTranscript, x_set: &Polytope) -> Result<Transcript> {
    let ys = rt.rs.iter().map(|g| gstar_point(x_set, g)).collect::<Result<Vec<_>>>()?;
    Transcript::new(rt.xs.clone(), ys)
}

/// Largest `|v^T U w|` over vertex pairs, a reward bound that makes every
/// round of `g` representable in `G*`.
pub fn reward_range(g: &PolytopeGame) -> Result<f64> {
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    let mut m: f64 = 0.0;
    for v in vx {
        for w in vy {
            m = m.max(g.u_learner.bilinear(v, w).abs());
        }
    }
    Ok(m)
}
