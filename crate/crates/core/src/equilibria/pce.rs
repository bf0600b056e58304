//! Profile correlated equilibria: verification, and computation by
//! self-play of two no-profile-swap-regret learners.

use serde::Serialize;

use crate::error::Result;
use crate::games::{csp_of_transcript, Csp, Perspective, PolytopeGame, Transcript};
use crate::learners::SemisepLearner;
use crate::linalg::Mat;
use crate::regret::profile_swap_distance;

#[derive(Clone, Debug, Serialize)]
pub struct Distances {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PceCheck {
    pub distances: Distances,
    pub pass: bool,
}

pub fn verify_profile_ce(phi: &Mat, g: &PolytopeGame, tol: f64) -> Result<PceCheck> {
    let csp = Csp::new(phi.clone());
    let x = profile_swap_distance(&csp, g, Perspective::Learner)?.distance;
    let y = profile_swap_distance(&csp, g, Perspective::Optimizer)?.distance;
    Ok(PceCheck { pass: x <= tol && y <= tol, distances: Distances { x, y } })
}

/// Both players run the semi-separation learner against each other.
pub fn self_play(g: &PolytopeGame, horizon: usize) -> Result<Transcript> {
    let gy = g.transpose_perspective();
    let mut lx = SemisepLearner::new(g, horizon);
    let mut ly = SemisepLearner::new(&gy, horizon);
    let mut t = Transcript::default();
    let (mut px, mut py): (Option<Vec<f64>>, Option<Vec<f64>>) = (None, None);
    for _ in 0..horizon {
        let x = lx.next_action(py.as_deref())?;
        let y = ly.next_action(px.as_deref())?;
        t.push(x.clone(), y.clone());
        px = Some(x);
        py = Some(y);
    }
    Ok(t)
}

pub const MAX_DOUBLINGS: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct ProfileCe {
    pub csp: Mat,
    pub distances: Distances,
    pub horizon: usize,
    pub doublings: usize,
    pub pass: bool,
}

/// `T = ceil(16 max(d_L, d_O) / eps^2)`, doubled until both distances are at
/// most `eps` or `MAX_DOUBLINGS` doublings have been spent. The best CSP seen
/// is returned either way.
pub fn compute_profile_ce(g: &PolytopeGame, eps: f64) -> Result<ProfileCe> {
    let d = g.d_l().max(g.d_o()) as f64;
    let mut horizon = (16.0 * d / (eps * eps)).ceil() as usize;
    let mut best: Option<ProfileCe> = None;
    for doublings in 0..=MAX_DOUBLINGS {
        let t = self_play(g, horizon)?;
        let phi = csp_of_transcript(&t)?.matrix;
        let check = verify_profile_ce(&phi, g, eps)?;
        let worst = check.distances.x.max(check.distances.y);
        let cand = ProfileCe { csp: phi, distances: check.distances, horizon, doublings, pass: check.pass };
        if best.as_ref().is_none_or(|b| worst < b.distances.x.max(b.distances.y)) {
            best = Some(cand);
        }
        if check.pass {
            break;
        }
        horizon *= 2;
    }
    Ok(best.expect("at least one attempt"))
}
