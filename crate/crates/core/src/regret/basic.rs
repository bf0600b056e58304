use crate::convex::Polytope;
use crate::error::{Error, Result};
use crate::games::{Csp, Perspective, PolytopeGame, RewardTranscript};
use crate::linalg::{dot, mean_of, Mat};

pub(crate) fn clamp(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

/// A best response of the `p` player to the opponent action `opp`.
pub fn best_response(opp: &[f64], g: &PolytopeGame, p: Perspective) -> Result<Vec<f64>> {
    let g = g.oriented(p);
    if opp.len() != g.d_o() {
        return Err(Error::Dimension(format!("opponent action has length {}, expected {}", opp.len(), g.d_o())));
    }
    Ok(g.x_set.maximize(&g.u_learner.mul_vec(opp))?.1)
}

/// `max_{x*} u(x*, y) - u(x, y)` for the `p` player playing `x` against `y`.
pub fn instantaneous_regret(x: &[f64], y: &[f64], g: &PolytopeGame, p: Perspective) -> Result<f64> {
    let g = g.oriented(p);
    let gy = g.u_learner.mul_vec(y);
    Ok(clamp(g.x_set.maximize(&gy)?.0 - dot(&gy, x)))
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ExternalRegret {
    pub value: f64,
    pub deviation: Vec<f64>,
}

pub fn external_regret(phi: &Csp, g: &PolytopeGame, p: Perspective) -> Result<ExternalRegret> {
    let g = g.oriented(p);
    let phi = phi.oriented(p);
    check_shape(&phi.matrix, &g)?;
    let ybar = phi.marginal_y(&g.x_set)?;
    let gbar = g.u_learner.mul_vec(&ybar);
    external_core(&g.x_set, &gbar, g.u_learner.frob(&phi.matrix))
}

/// External regret of a reward transcript.
pub fn external_regret_rewards(rt: &RewardTranscript, x_set: &Polytope) -> Result<ExternalRegret> {
    let gbar = mean_of(&rt.rs);
    let base = rt.xs.iter().zip(&rt.rs).map(|(x, r)| dot(x, r)).sum::<f64>() / rt.len().max(1) as f64;
    external_core(x_set, &gbar, base)
}

fn external_core(x_set: &Polytope, gbar: &[f64], base: f64) -> Result<ExternalRegret> {
    let (best, dev) = x_set.maximize(gbar)?;
    Ok(ExternalRegret { value: clamp(best - base), deviation: dev })
}

pub(crate) fn check_shape(phi: &Mat, g: &PolytopeGame) -> Result<()> {
    if phi.rows != g.d_l() || phi.cols != g.d_o() {
        return Err(Error::Dimension(format!("CSP is {}x{}, game is {}x{}", phi.rows, phi.cols, g.d_l(), g.d_o())));
    }
    Ok(())
}
