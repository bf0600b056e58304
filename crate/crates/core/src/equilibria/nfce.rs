//! Normal-form correlated equilibria of the vertex game and their relation
//! to correlated profiles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::convex::{Cmp, Lp, LpStatus, Sense, VarKind};
use crate::error::{Error, Result};
use crate::games::{Perspective, PolytopeGame, VertexCsp};
use crate::linalg::Mat;
use crate::regret::{normal_form_swap_regret, profile_swap_regret};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NfceMode {
    /// Both players' incentive rows, and the projection equals the target.
    ExactProjection,
    /// Both players' incentive rows, and both utilities match the target's.
    UtilityProfile,
    /// X's incentive rows only, and the projection equals the target.
    OneSidedX,
    OneSidedY,
}

impl NfceMode {
    pub const ALL: [NfceMode; 4] =
        [NfceMode::ExactProjection, NfceMode::UtilityProfile, NfceMode::OneSidedX, NfceMode::OneSidedY];

    pub fn as_str(&self) -> &'static str {
        match self {
            NfceMode::ExactProjection => "exact_projection",
            NfceMode::UtilityProfile => "utility_profile",
            NfceMode::OneSidedX => "one_sided_x",
            NfceMode::OneSidedY => "one_sided_y",
        }
    }
}

impl fmt::Display for NfceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NfceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NfceMode::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown NFCE mode {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NfceStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, Serialize)]
pub struct NfceResult {
    pub mode: NfceMode,
    pub status: NfceStatus,
    pub vertex_csp: Option<VertexCsp>,
    /// Farkas multipliers proving infeasibility, one per LP row.
    pub certificate: Option<Vec<f64>>,
    /// Positive when the certificate checks out.
    pub certificate_margin: Option<f64>,
}

/// What the vertex CSP must reproduce.
#[derive(Clone, Debug)]
pub enum NfceTarget {
    Csp(Mat),
    Utilities { x: f64, y: f64 },
}

struct VertexPay {
    ux: Mat,
    uy: Mat,
}

fn vertex_pay(g: &PolytopeGame) -> Result<VertexPay> {
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    Ok(VertexPay {
        ux: Mat::from_fn(vx.len(), vy.len(), |i, j| g.u_learner.bilinear(&vx[i], &vy[j])),
        uy: Mat::from_fn(vx.len(), vy.len(), |i, j| g.u_optimizer.bilinear(&vx[i], &vy[j])),
    })
}

fn incentive_rows(lp: &mut Lp, p: usize, pay: &VertexPay, x_side: bool, y_side: bool) {
    let (nx, ny) = (pay.ux.rows, pay.ux.cols);
    if x_side {
        for v in 0..nx {
            for vp in 0..nx {
                if vp == v {
                    continue;
                }
                let r = (0..ny)
                    .filter_map(|w| {
                        let c = pay.ux.get(vp, w) - pay.ux.get(v, w);
                        (c != 0.0).then_some((p + v * ny + w, c))
                    })
                    .collect::<Vec<_>>();
                if !r.is_empty() {
                    lp.add_row(r, Cmp::Le, 0.0);
                }
            }
        }
    }
    if y_side {
        for w in 0..ny {
            for wp in 0..ny {
                if wp == w {
                    continue;
                }
                let r = (0..nx)
                    .filter_map(|v| {
                        let c = pay.uy.get(v, wp) - pay.uy.get(v, w);
                        (c != 0.0).then_some((p + v * ny + w, c))
                    })
                    .collect::<Vec<_>>();
                if !r.is_empty() {
                    lp.add_row(r, Cmp::Le, 0.0);
                }
            }
        }
    }
}

/// LP over vertex-pair weights for the given mode. Variables start at 0,
/// laid out row-major by (x-vertex, y-vertex).
pub fn nfce_lp(target: &NfceTarget, g: &PolytopeGame, mode: NfceMode, objective: Option<&Mat>) -> Result<Lp> {
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    let (nx, ny) = (vx.len(), vy.len());
    let pay = vertex_pay(g)?;
    let mut lp = Lp::new(Sense::Maximize);
    let p = lp.add_vars(nx * ny, VarKind::NonNeg);
    if let Some(c) = objective {
        for i in 0..nx * ny {
            lp.set_objective(p + i, c.data[i]);
        }
    }
    lp.add_row((0..nx * ny).map(|i| (p + i, 1.0)).collect(), Cmp::Eq, 1.0);
    let (xs, ys) = match mode {
        NfceMode::ExactProjection | NfceMode::UtilityProfile => (true, true),
        NfceMode::OneSidedX => (true, false),
        NfceMode::OneSidedY => (false, true),
    };
    incentive_rows(&mut lp, p, &pay, xs, ys);
    match (mode, target) {
        (NfceMode::UtilityProfile, NfceTarget::Utilities { x, y }) => utility_rows(&mut lp, p, &pay, *x, *y),
        (NfceMode::UtilityProfile, NfceTarget::Csp(phi)) => {
            utility_rows(&mut lp, p, &pay, g.u_learner.frob(phi), g.u_optimizer.frob(phi))
        }
        (_, NfceTarget::Csp(phi)) => {
            if phi.rows != g.d_l() || phi.cols != g.d_o() {
                return Err(Error::Dimension("target CSP does not match the game".into()));
            }
            for i in 0..g.d_l() {
                for j in 0..g.d_o() {
                    let mut r = Vec::new();
                    for (a, v) in vx.iter().enumerate() {
                        if v[i] == 0.0 {
                            continue;
                        }
                        for (b, w) in vy.iter().enumerate() {
                            let c = v[i] * w[j];
                            if c != 0.0 {
                                r.push((p + a * ny + b, c));
                            }
                        }
                    }
                    lp.add_row(r, Cmp::Eq, phi.get(i, j));
                }
            }
        }
        (_, NfceTarget::Utilities { .. }) => {
            return Err(Error::Unsupported(format!("mode {mode} needs a target CSP")));
        }
    }
    Ok(lp)
}

fn utility_rows(lp: &mut Lp, p: usize, pay: &VertexPay, ux: f64, uy: f64) {
    let n = pay.ux.data.len();
    lp.add_row((0..n).map(|i| (p + i, pay.ux.data[i])).collect(), Cmp::Eq, ux);
    lp.add_row((0..n).map(|i| (p + i, pay.uy.data[i])).collect(), Cmp::Eq, uy);
}

pub fn nfce_feasibility(target: &NfceTarget, g: &PolytopeGame, mode: NfceMode) -> Result<NfceResult> {
    let lp = nfce_lp(target, g, mode, None)?;
    let s = lp.solve()?;
    let (nx, ny) = (g.x_set.vertices()?.len(), g.y_set.vertices()?.len());
    match s.status {
        LpStatus::Optimal => {
            let mut m = Mat { rows: nx, cols: ny, data: s.x[..nx * ny].iter().map(|v| v.max(0.0)).collect() };
            let total: f64 = m.data.iter().sum();
            m.data.iter_mut().for_each(|v| *v /= total);
            Ok(NfceResult {
                mode,
                status: NfceStatus::Feasible,
                vertex_csp: Some(VertexCsp::new(m)?),
                certificate: None,
                certificate_margin: None,
            })
        }
        LpStatus::Infeasible => {
            let margin = s.farkas.as_ref().map(|y| lp.farkas_margin(y));
            Ok(NfceResult {
                mode,
                status: NfceStatus::Infeasible,
                vertex_csp: None,
                certificate: s.farkas,
                certificate_margin: margin,
            })
        }
        LpStatus::Unbounded => Err(Error::Infeasible("NFCE feasibility LP reported unbounded".into())),
    }
}

/// An NFCE maximizing `<objective, weights>`; `None` only if the LP fails,
/// which cannot happen for a finite game.
pub fn extreme_nfce(g: &PolytopeGame, objective: &Mat) -> Result<Option<VertexCsp>> {
    let mut lp = Lp::new(Sense::Maximize);
    let pay = vertex_pay(g)?;
    let n = pay.ux.data.len();
    let p = lp.add_vars(n, VarKind::NonNeg);
    for i in 0..n {
        lp.set_objective(p + i, objective.data[i]);
    }
    lp.add_row((0..n).map(|i| (p + i, 1.0)).collect(), Cmp::Eq, 1.0);
    incentive_rows(&mut lp, p, &pay, true, true);
    let s = lp.solve()?;
    if s.status != LpStatus::Optimal {
        return Ok(None);
    }
    let mut m = Mat { rows: pay.ux.rows, cols: pay.ux.cols, data: s.x[..n].iter().map(|v| v.max(0.0)).collect() };
    let total: f64 = m.data.iter().sum();
    m.data.iter_mut().for_each(|v| *v /= total);
    Ok(Some(VertexCsp::new(m)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct NfceCheck {
    pub x_regret: f64,
    pub y_regret: f64,
    pub pass: bool,
}

pub fn nfce_check(vcsp: &VertexCsp, g: &PolytopeGame, tol: f64) -> Result<NfceCheck> {
    let x_regret = normal_form_swap_regret(vcsp, g, Perspective::Learner)?.value;
    let y_regret = normal_form_swap_regret(vcsp, g, Perspective::Optimizer)?.value;
    Ok(NfceCheck { x_regret, y_regret, pass: x_regret <= tol && y_regret <= tol })
}

/// Lifts a profile CE of a game whose X set is a simplex to an NFCE with the
/// same projection.
pub fn lift_simplex_to_nfce(phi: &Mat, g: &PolytopeGame) -> Result<VertexCsp> {
    if !g.x_set.is_simplex() {
        return Err(Error::Unsupported("lifting needs X to be a simplex".into()));
    }
    let csp = crate::games::Csp::new(phi.clone());
    let x_side = profile_swap_regret(&csp, g, Perspective::Learner)?;
    let y_side = profile_swap_regret(&csp, g, Perspective::Optimizer)?;
    if x_side.value > 1e-6 || y_side.value > 1e-6 {
        return Err(Error::InvalidGame(format!(
            "not a profile CE: regrets {:.3e} (X) and {:.3e} (Y)",
            x_side.value, y_side.value
        )));
    }
    let vx = g.x_set.vertices()?;
    let vy = g.y_set.vertices()?;
    let mut m = Mat::zeros(vx.len(), vy.len());
    for part in &y_side.decomposition.parts {
        let w = crate::scenarios::index_of(vy, &part.y)?;
        let gamma = g.x_set.vertex_weights(&part.x)?;
        for (v, gv) in gamma.iter().enumerate() {
            m.set(v, w, m.get(v, w) + part.weight * gv);
        }
    }
    m.data.iter_mut().for_each(|v| *v = v.max(0.0));
    let total: f64 = m.data.iter().sum();
    m.data.iter_mut().for_each(|v| *v /= total);
    VertexCsp::new(m)
}

/// Replaces every recommended pair by independent vertex mixtures of its two
/// actions.
pub fn purify_mediator(sigma: &[(f64, Vec<f64>, Vec<f64>)], g: &PolytopeGame) -> Result<VertexCsp> {
    let total: f64 = sigma.iter().map(|s| s.0).sum();
    if sigma.iter().any(|s| s.0 < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidGame("signaling scheme probabilities must be nonnegative and sum to 1".into()));
    }
    let nx = g.x_set.vertices()?.len();
    let ny = g.y_set.vertices()?.len();
    let mut m = Mat::zeros(nx, ny);
    for (p, x, y) in sigma {
        if *p == 0.0 {
            continue;
        }
        let a = g.x_set.vertex_weights(x)?;
        let b = g.y_set.vertex_weights(y)?;
        m.add_scaled(*p, &Mat::outer(&a, &b));
    }
    let total: f64 = m.data.iter().sum();
    m.data.iter_mut().for_each(|v| *v /= total);
    VertexCsp::new(m)
}
