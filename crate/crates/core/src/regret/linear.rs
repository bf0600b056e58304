//! Linear swap regret: the best affine map `psi(x) = M x + c` with `psi(X)` in X.
//!
//! Containment is encoded row by row with LP duality: for every constraint
//! `a . x <= b` of X (equalities in both directions) there are multipliers
//! certifying `max_{x in X} a . psi(x) <= b`.

use serde::Serialize;

use super::basic::{check_shape, clamp};
use crate::convex::{Cmp, Lp, LpStatus, Polytope, Sense, VarKind};
use crate::error::{Error, Result};
use crate::games::{Csp, Perspective, PolytopeGame, RewardTranscript};
use crate::linalg::{dot, mean_of, Mat};

#[derive(Clone, Debug, Serialize)]
pub struct LinearSwapRegret {
    pub value: f64,
    pub matrix: Mat,
    pub offset: Vec<f64>,
}

pub fn linear_swap_regret(phi: &Csp, g: &PolytopeGame, p: Perspective) -> Result<LinearSwapRegret> {
    let g = g.oriented(p);
    let phi = phi.oriented(p);
    check_shape(&phi.matrix, &g)?;
    // G[i][j] = average of g_i x_j with rewards g = U y.
    let gmat = g.u_learner.mul(&phi.matrix.transpose());
    let ybar = phi.marginal_y(&g.x_set)?;
    let gbar = g.u_learner.mul_vec(&ybar);
    linear_core(&g.x_set, &gmat, &gbar, g.u_learner.frob(&phi.matrix))
}

pub fn linear_swap_regret_rewards(rt: &RewardTranscript, x_set: &Polytope) -> Result<LinearSwapRegret> {
    let d = x_set.dim();
    let n = rt.len().max(1) as f64;
    let mut gmat = Mat::zeros(d, d);
    for (x, r) in rt.xs.iter().zip(&rt.rs) {
        gmat.add_scaled(1.0 / n, &Mat::outer(r, x));
    }
    let base = rt.xs.iter().zip(&rt.rs).map(|(x, r)| dot(x, r)).sum::<f64>() / n;
    linear_core(x_set, &gmat, &mean_of(&rt.rs), base)
}

fn linear_core(x_set: &Polytope, gmat: &Mat, gbar: &[f64], base: f64) -> Result<LinearSwapRegret> {
    let d = x_set.dim();
    let ineq = x_set.ineq();
    let eq = x_set.eq();
    let mut lp = Lp::new(Sense::Maximize);
    let m = lp.add_vars(d * d, VarKind::Free);
    let c = lp.add_vars(d, VarKind::Free);
    for i in 0..d {
        for j in 0..d {
            lp.set_objective(m + i * d + j, gmat.get(i, j));
        }
        lp.set_objective(c + i, gbar[i]);
    }
    let mut rows: Vec<(Vec<f64>, f64)> = ineq.to_vec();
    for (a, b) in eq {
        rows.push((a.clone(), *b));
        rows.push((a.iter().map(|v| -v).collect(), -b));
    }
    for (a, beta) in &rows {
        let mu = lp.add_vars(ineq.len(), VarKind::NonNeg);
        let nu = lp.add_vars(eq.len(), VarKind::Free);
        for j in 0..d {
            let mut r: Vec<(usize, f64)> = Vec::new();
            for (i, (ai, _)) in ineq.iter().enumerate() {
                if ai[j] != 0.0 {
                    r.push((mu + i, ai[j]));
                }
            }
            for (l, (el, _)) in eq.iter().enumerate() {
                if el[j] != 0.0 {
                    r.push((nu + l, el[j]));
                }
            }
            // minus (M^T a)_j = -sum_r a_r M[r][j]
            for (rr, ar) in a.iter().enumerate() {
                if *ar != 0.0 {
                    r.push((m + rr * d + j, -ar));
                }
            }
            lp.add_row(r, Cmp::Eq, 0.0);
        }
        let mut r: Vec<(usize, f64)> = Vec::new();
        for (i, (_, bi)) in ineq.iter().enumerate() {
            if *bi != 0.0 {
                r.push((mu + i, *bi));
            }
        }
        for (l, (_, fl)) in eq.iter().enumerate() {
            if *fl != 0.0 {
                r.push((nu + l, *fl));
            }
        }
        for (rr, ar) in a.iter().enumerate() {
            if *ar != 0.0 {
                r.push((c + rr, *ar));
            }
        }
        lp.add_row(r, Cmp::Le, *beta);
    }
    let s = lp.solve()?;
    if s.status != LpStatus::Optimal {
        return Err(Error::InvalidPolytope(format!("linear swap LP returned {:?}", s.status)));
    }
    Ok(LinearSwapRegret {
        value: clamp(s.value - base),
        matrix: Mat { rows: d, cols: d, data: s.x[m..m + d * d].to_vec() },
        offset: s.x[c..c + d].to_vec(),
    })
}
