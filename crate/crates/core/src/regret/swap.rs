//! Profile, polytope and normal-form swap regret.

use serde::Serialize;

use super::basic::{check_shape, clamp};
use crate::convex::{Cmp, Lp, LpStatus, Sense, VarKind};
use crate::error::{Error, Result};
use crate::games::{Csp, Perspective, PolytopeGame, RewardTranscript, Transcript, VertexCsp};
use crate::linalg::{dot, Mat};

/// Convex decomposition of a CSP into product profiles.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub parts: Vec<DecompositionPart>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionPart {
    pub weight: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Decomposition {
    pub fn csp(&self) -> Mat {
        let mut m = Mat::zeros(self.parts[0].x.len(), self.parts[0].y.len());
        for p in &self.parts {
            m.add_scaled(p.weight, &Mat::outer(&p.x, &p.y));
        }
        m
    }

    /// Swaps the roles of x and y in every part.
    pub fn transpose(&self) -> Decomposition {
        Decomposition {
            parts: self
                .parts
                .iter()
                .map(|p| DecompositionPart { weight: p.weight, x: p.y.clone(), y: p.x.clone() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSwapRegret {
    pub value: f64,
    pub decomposition: Decomposition,
}

/// Minimum over decompositions `phi = sum_v v z_v^T` of the weighted
/// instantaneous regrets, one part per vertex of X.
pub fn profile_swap_regret(phi: &Csp, g: &PolytopeGame, p: Perspective) -> Result<ProfileSwapRegret> {
    let g = g.oriented(p);
    let phi = phi.oriented(p);
    check_shape(&phi.matrix, &g)?;
    let vs = g.x_set.vertices()?;
    let (dl, d_o) = (g.d_l(), g.d_o());
    let nv = vs.len();
    let uv: Vec<Vec<f64>> = vs.iter().map(|v| g.u_learner.tmul_vec(v)).collect();
    let mut lp = Lp::new(Sense::Minimize);
    let z = lp.add_vars(nv * d_o, VarKind::Free);
    let lam = lp.add_vars(nv, VarKind::NonNeg);
    let theta = lp.add_vars(nv, VarKind::NonNeg);
    for v in 0..nv {
        lp.set_objective(theta + v, 1.0);
        add_homogenized_membership(&mut lp, &g.y_set, z + v * d_o, lam + v);
        for (w, uw) in uv.iter().enumerate() {
            if w == v {
                continue;
            }
            let mut r: Vec<(usize, f64)> = (0..d_o)
                .filter_map(|k| {
                    let c = uw[k] - uv[v][k];
                    (c != 0.0).then_some((z + v * d_o + k, c))
                })
                .collect();
            r.push((theta + v, -1.0));
            lp.add_row(r, Cmp::Le, 0.0);
        }
    }
    for i in 0..dl {
        for k in 0..d_o {
            let r: Vec<(usize, f64)> =
                (0..nv).filter(|&v| vs[v][i] != 0.0).map(|v| (z + v * d_o + k, vs[v][i])).collect();
            lp.add_row(r, Cmp::Eq, phi.matrix.get(i, k));
        }
    }
    lp.add_row((0..nv).map(|v| (lam + v, 1.0)).collect(), Cmp::Eq, 1.0);
    let s = lp.solve()?;
    if s.status != LpStatus::Optimal {
        return Err(Error::Infeasible("no product decomposition reconstructs this CSP".into()));
    }
    let mut parts = Vec::new();
    for v in 0..nv {
        let l = s.x[lam + v];
        if l > 1e-10 {
            let y: Vec<f64> = s.x[z + v * d_o..z + (v + 1) * d_o].iter().map(|c| c / l).collect();
            parts.push(DecompositionPart { weight: l, x: vs[v].clone(), y });
        }
    }
    let mut decomposition = Decomposition { parts };
    if p == Perspective::Optimizer {
        decomposition = decomposition.transpose();
    }
    Ok(ProfileSwapRegret { value: clamp(s.value), decomposition })
}

/// Rows `A z <= lam b`, `E z = lam f` placing `z / lam` in `set`.
pub(crate) fn add_homogenized_membership(lp: &mut Lp, set: &crate::convex::Polytope, z: usize, lam: usize) {
    for (a, b) in set.ineq() {
        let mut r: Vec<(usize, f64)> =
            a.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(k, c)| (z + k, *c)).collect();
        if *b != 0.0 {
            r.push((lam, -b));
        }
        lp.add_row(r, Cmp::Le, 0.0);
    }
    for (a, f) in set.eq() {
        let mut r: Vec<(usize, f64)> =
            a.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(k, c)| (z + k, *c)).collect();
        if *f != 0.0 {
            r.push((lam, -f));
        }
        lp.add_row(r, Cmp::Eq, 0.0);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeSwapRegret {
    pub value: f64,
    /// Best deviation vertex index for each vertex of X under the optimal decomposition.
    pub swap: Vec<usize>,
}

pub fn polytope_swap_regret(t: &Transcript, g: &PolytopeGame, p: Perspective) -> Result<PolytopeSwapRegret> {
    let g = g.oriented(p);
    let t = t.oriented(p);
    let rt = crate::games::to_agnostic(&t, &g);
    polytope_swap_regret_rewards(&rt, &g.x_set)
}

/// Polytope swap regret of a reward transcript: each round's action is split
/// into vertices and each vertex gets its own best fixed deviation.
pub fn polytope_swap_regret_rewards(
    rt: &RewardTranscript,
    x_set: &crate::convex::Polytope,
) -> Result<PolytopeSwapRegret> {
    let vs = x_set.vertices()?;
    let nv = vs.len();
    let n = rt.len();
    if n == 0 {
        return Err(Error::InvalidGame("empty transcript".into()));
    }
    let tf = n as f64;
    // pay[t][v] = r_t(v)
    let pay: Vec<Vec<f64>> = rt.rs.iter().map(|r| vs.iter().map(|v| dot(r, v)).collect()).collect();
    let mut lp = Lp::new(Sense::Minimize);
    let w = lp.add_vars(n * nv, VarKind::NonNeg);
    let theta = lp.add_vars(nv, VarKind::NonNeg);
    for t in 0..n {
        lp.add_row((0..nv).map(|v| (w + t * nv + v, 1.0)).collect(), Cmp::Eq, 1.0);
        for i in 0..x_set.dim() {
            let r: Vec<(usize, f64)> =
                (0..nv).filter(|&v| vs[v][i] != 0.0).map(|v| (w + t * nv + v, vs[v][i])).collect();
            lp.add_row(r, Cmp::Eq, rt.xs[t][i]);
        }
    }
    for v in 0..nv {
        lp.set_objective(theta + v, 1.0);
        for vp in 0..nv {
            if vp == v {
                continue;
            }
            let mut r: Vec<(usize, f64)> = (0..n)
                .filter_map(|t| {
                    let c = (pay[t][vp] - pay[t][v]) / tf;
                    (c != 0.0).then_some((w + t * nv + v, c))
                })
                .collect();
            r.push((theta + v, -1.0));
            lp.add_row(r, Cmp::Le, 0.0);
        }
    }
    let s = lp.solve()?;
    if s.status != LpStatus::Optimal {
        return Err(Error::Infeasible("a transcript action lies outside the vertex hull".into()));
    }
    let swap = (0..nv)
        .map(|v| {
            let gain = |vp: usize| (0..n).map(|t| s.x[w + t * nv + v] * (pay[t][vp] - pay[t][v])).sum::<f64>();
            crate::convex::polytope::argmax_first((0..nv).map(gain)).0
        })
        .collect();
    Ok(PolytopeSwapRegret { value: clamp(s.value), swap })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormSwapRegret {
    pub value: f64,
    pub swap: Vec<usize>,
}

/// Classic swap regret of a distribution over vertex pairs in the vertex game.
pub fn normal_form_swap_regret(vcsp: &VertexCsp, g: &PolytopeGame, p: Perspective) -> Result<NormalFormSwapRegret> {
    let g = g.oriented(p);
    let w = match p {
        Perspective::Learner => vcsp.weights.clone(),
        Perspective::Optimizer => vcsp.weights.transpose(),
    };
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    if w.rows != vx.len() || w.cols != vy.len() {
        return Err(Error::Dimension("vertex CSP shape does not match the vertex counts".into()));
    }
    let pay = Mat::from_fn(vx.len(), vy.len(), |i, j| g.u_learner.bilinear(&vx[i], &vy[j]));
    Ok(normal_form_core(&w, &pay))
}

pub(crate) fn normal_form_core(w: &Mat, pay: &Mat) -> NormalFormSwapRegret {
    let mut total = 0.0;
    let mut swap = Vec::with_capacity(w.rows);
    for v in 0..w.rows {
        let row = w.row(v);
        let base: f64 = dot(row, pay.row(v));
        let (best, val) = crate::convex::polytope::argmax_first((0..w.rows).map(|vp| dot(row, pay.row(vp)) - base));
        if val > 1e-12 {
            total += val;
            swap.push(best);
        } else {
            swap.push(v);
        }
    }
    NormalFormSwapRegret { value: clamp(total), swap }
}

/// Vertex CSP of a vertex transcript: per-round vertex weights on each side,
/// combined as independent products and averaged.
pub fn vertex_csp_of_rounds(alphas: &[Vec<f64>], betas: &[Vec<f64>]) -> Result<VertexCsp> {
    if alphas.len() != betas.len() || alphas.is_empty() {
        return Err(Error::Dimension("vertex transcript sides must be nonempty and equal length".into()));
    }
    let mut m = Mat::zeros(alphas[0].len(), betas[0].len());
    let n = alphas.len() as f64;
    for (a, b) in alphas.iter().zip(betas) {
        m.add_scaled(1.0 / n, &Mat::outer(a, b));
    }
    let total: f64 = m.data.iter().sum();
    m.data.iter_mut().for_each(|v| *v /= total);
    VertexCsp::new(m)
}
