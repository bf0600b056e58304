//! The no-profile-swap-regret menu: convex hull of `x y^T` with x a best
//! response to y. Distance to it by away-step conditional gradient with
//! periodic fully corrective steps, and the Stackelberg value as a linear
//! optimization over it.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::swap::add_homogenized_membership;
use crate::convex::project::nnls;
use crate::convex::{Cmp, Lp, LpStatus, Sense, VarKind};
use crate::error::{Error, Result};
use crate::games::{Csp, Perspective, PolytopeGame};
use crate::linalg::{dot, norm, Mat};

pub const DISTANCE_TOL: f64 = 1e-6;
pub const MAX_CG_ITERS: usize = 20_000;

/// `max c . y` over the region of Y where vertex `v` is a best response, or
/// `None` when that region is empty.
fn region_lp(g: &PolytopeGame, uv: &[Vec<f64>], v: usize, c: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    let d_o = g.d_o();
    let mut lp = Lp::new(Sense::Maximize);
    let y = lp.add_vars(d_o, VarKind::Free);
    let lam = lp.add_vars(1, VarKind::NonNeg);
    for (k, ck) in c.iter().enumerate() {
        lp.set_objective(y + k, *ck);
    }
    add_homogenized_membership(&mut lp, &g.y_set, y, lam);
    lp.add_row(vec![(lam, 1.0)], Cmp::Eq, 1.0);
    for (w, uw) in uv.iter().enumerate() {
        if w == v {
            continue;
        }
        let r: Vec<(usize, f64)> = (0..d_o)
            .filter_map(|k| {
                let a = uv[v][k] - uw[k];
                (a != 0.0).then_some((y + k, a))
            })
            .collect();
        if !r.is_empty() {
            lp.add_row(r, Cmp::Ge, 0.0);
        }
    }
    let s = lp.solve()?;
    match s.status {
        LpStatus::Optimal => Ok(Some((s.value, s.x[y..y + d_o].to_vec()))),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::InvalidPolytope("best-response region LP is unbounded".into())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Stackelberg {
    pub value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Optimizer's best commitment value, the learner best-responding with ties
/// broken in the optimizer's favour. `p` names the learner's side.
pub fn stackelberg_value(g: &PolytopeGame, p: Perspective) -> Result<Stackelberg> {
    let g = g.oriented(p);
    let vs = g.x_set.vertices()?;
    let uv: Vec<Vec<f64>> = vs.iter().map(|v| g.u_learner.tmul_vec(v)).collect();
    let mut best: Option<Stackelberg> = None;
    for (v, vert) in vs.iter().enumerate() {
        let c = g.u_optimizer.tmul_vec(vert);
        if let Some((val, y)) = region_lp(&g, &uv, v, &c)? {
            if best.as_ref().is_none_or(|b| val > b.value + 1e-12) {
                best = Some(Stackelberg { value: val, x: vert.clone(), y });
            }
        }
    }
    best.ok_or_else(|| Error::InvalidGame("no vertex is ever a best response".into()))
}

#[derive(Clone, Debug)]
struct Atom {
    v: usize,
    y: Vec<f64>,
    mat: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MenuProjection {
    pub distance: f64,
    pub lower_bound: f64,
    pub nearest: Mat,
    pub gap: f64,
    pub iterations: usize,
}

/// Projects CSPs onto the menu of one player. Atoms found by the linear
/// oracle are cached, and the last active set warm-starts the next call.
#[derive(Clone, Debug)]
pub struct MenuProjector {
    game: PolytopeGame,
    vertices: Vec<Vec<f64>>,
    uv: Vec<Vec<f64>>,
    viable: Vec<bool>,
    atoms: Vec<Atom>,
    active: Vec<(usize, f64)>,
}

impl MenuProjector {
    pub fn new(g: &PolytopeGame, p: Perspective) -> Result<Self> {
        let game = g.oriented(p).into_owned();
        let vertices = game.x_set.vertices()?.to_vec();
        let uv: Vec<Vec<f64>> = vertices.iter().map(|v| game.u_learner.tmul_vec(v)).collect();
        let zero = vec![0.0; game.d_o()];
        let mut viable = Vec::with_capacity(vertices.len());
        for v in 0..vertices.len() {
            viable.push(region_lp(&game, &uv, v, &zero)?.is_some());
        }
        Ok(MenuProjector { game, vertices, uv, viable, atoms: Vec::new(), active: Vec::new() })
    }

    pub fn game(&self) -> &PolytopeGame {
        &self.game
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Menu atom minimizing `<r, v y^T>`.
    fn lmo(&mut self, r: &[f64]) -> Result<(usize, f64)> {
        let (dl, d_o) = (self.game.d_l(), self.game.d_o());
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for v in 0..self.vertices.len() {
            if !self.viable[v] {
                continue;
            }
            let vert = &self.vertices[v];
            let c: Vec<f64> = (0..d_o).map(|k| -(0..dl).map(|i| r[i * d_o + k] * vert[i]).sum::<f64>()).collect();
            if let Some((val, y)) = region_lp(&self.game, &self.uv, v, &c)? {
                let val = -val;
                if best.as_ref().is_none_or(|b| val < b.0 - 1e-15) {
                    best = Some((val, v, y));
                }
            }
        }
        let (val, v, y) = best.ok_or_else(|| Error::InvalidGame("empty menu".into()))?;
        Ok((self.intern(v, y), val))
    }

    fn intern(&mut self, v: usize, y: Vec<f64>) -> usize {
        if let Some(i) = self.atoms.iter().position(|a| a.v == v && crate::linalg::max_abs_diff(&a.y, &y) <= 1e-12) {
            return i;
        }
        let mat = Mat::outer(&self.vertices[v], &y).data;
        self.atoms.push(Atom { v, y, mat });
        self.atoms.len() - 1
    }

    fn point(&self) -> Vec<f64> {
        let mut q = vec![0.0; self.game.d_l() * self.game.d_o()];
        for &(a, w) in &self.active {
            crate::linalg::axpy(&mut q, w, &self.atoms[a].mat);
        }
        q
    }

    /// Re-solves the weights over every cached atom exactly. On the simplex
    /// `|M w - phi| = |(M - phi 1^T) w|`, and NNLS on that system stacked over
    /// `1^T u = 1` has the optimal direction, whatever the scale of `u`.
    /// Returns the new point if it is closer.
    fn fully_correct(&mut self, target: &[f64], current: f64) -> Option<Vec<f64>> {
        let (dim, n) = (target.len(), self.atoms.len());
        let e = DMatrix::from_fn(dim + 1, n, |i, a| if i < dim { self.atoms[a].mat[i] - target[i] } else { 1.0 });
        let mut f = DVector::zeros(dim + 1);
        f[dim] = 1.0;
        let u = nnls(&e, &f);
        let total: f64 = u.iter().sum();
        if !(total > 0.0) {
            return None;
        }
        let prev =
            std::mem::replace(&mut self.active, (0..n).filter(|&a| u[a] > 0.0).map(|a| (a, u[a] / total)).collect());
        let q = self.point();
        if norm(&crate::linalg::sub(&q, target)) < current {
            Some(q)
        } else {
            self.active = prev;
            None
        }
    }

    /// Weighted menu decomposition of the current nearest point.
    pub fn active_parts(&self) -> Vec<(f64, Vec<f64>, Vec<f64>)> {
        self.active.iter().map(|&(a, w)| (w, self.vertices[self.atoms[a].v].clone(), self.atoms[a].y.clone())).collect()
    }

    pub fn project(&mut self, phi: &Mat) -> Result<MenuProjection> {
        let target = &phi.data;
        if phi.rows != self.game.d_l() || phi.cols != self.game.d_o() {
            return Err(Error::Dimension("CSP shape does not match the game".into()));
        }
        if self.active.is_empty() {
            let neg: Vec<f64> = target.iter().map(|v| -v).collect();
            let (a, _) = self.lmo(&neg)?;
            self.active = vec![(a, 1.0)];
        }
        let mut q = self.point();
        let mut last_gap = f64::INFINITY;
        let mut iters = 0;
        while iters < MAX_CG_ITERS {
            iters += 1;
            if iters % 64 == 0 {
                q = self.point();
                let d = norm(&crate::linalg::sub(&q, target));
                if let Some(better) = self.fully_correct(target, d) {
                    q = better;
                }
            }
            let r = crate::linalg::sub(&q, target);
            let rn = norm(&r);
            if rn <= 1e-9 {
                last_gap = 0.0;
                break;
            }
            let thresh = 1e-2 * DISTANCE_TOL * rn.min(1.0);
            let qr = dot(&q, &r);
            let (sc, sval) = self
                .atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (i, dot(&a.mat, &r)))
                .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
            let (aw_pos, aval) = self
                .active
                .iter()
                .enumerate()
                .map(|(pos, &(a, _))| (pos, dot(&self.atoms[a].mat, &r)))
                .fold((0, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b });
            let gc = qr - sval;
            let ga = aval - qr;
            let toward = if gc.max(ga) <= thresh {
                let known = self.atoms.len();
                let (s, sv) = self.lmo(&r)?;
                last_gap = qr - sv;
                if last_gap <= thresh {
                    break;
                }
                if self.atoms.len() > known {
                    if let Some(better) = self.fully_correct(target, rn) {
                        q = better;
                        continue;
                    }
                }
                Some(s)
            } else if gc >= ga {
                Some(sc)
            } else {
                None
            };
            match toward {
                Some(s) => {
                    let d = crate::linalg::sub(&self.atoms[s].mat, &q);
                    let dd = dot(&d, &d);
                    if dd <= 0.0 {
                        break;
                    }
                    let gamma = (-dot(&r, &d) / dd).clamp(0.0, 1.0);
                    crate::linalg::axpy(&mut q, gamma, &d);
                    for e in self.active.iter_mut() {
                        e.1 *= 1.0 - gamma;
                    }
                    match self.active.iter_mut().find(|e| e.0 == s) {
                        Some(e) => e.1 += gamma,
                        None => self.active.push((s, gamma)),
                    }
                }
                None => {
                    let (aw, wa) = self.active[aw_pos];
                    let d = crate::linalg::sub(&q, &self.atoms[aw].mat);
                    let dd = dot(&d, &d);
                    if dd <= 0.0 || wa >= 1.0 {
                        break;
                    }
                    let gmax = wa / (1.0 - wa);
                    let gamma = (-dot(&r, &d) / dd).clamp(0.0, gmax);
                    crate::linalg::axpy(&mut q, gamma, &d);
                    for e in self.active.iter_mut() {
                        e.1 *= 1.0 + gamma;
                    }
                    self.active[aw_pos].1 -= gamma;
                    if gamma >= gmax {
                        self.active[aw_pos].1 = 0.0;
                    }
                }
            }
            self.active.retain(|e| e.1 > 1e-15);
        }
        let total: f64 = self.active.iter().map(|e| e.1).sum();
        self.active.iter_mut().for_each(|e| e.1 /= total);
        let q = self.point();
        let dist = norm(&crate::linalg::sub(&q, target));
        let lower = if last_gap.is_finite() { (dist * dist - 2.0 * last_gap.max(0.0)).max(0.0).sqrt() } else { 0.0 };
        Ok(MenuProjection {
            distance: dist,
            lower_bound: lower,
            nearest: Mat { rows: phi.rows, cols: phi.cols, data: q },
            gap: last_gap.max(0.0),
            iterations: iters,
        })
    }
}

/// Frobenius distance from `phi` to the `p` player's menu.
pub fn profile_swap_distance(phi: &Csp, g: &PolytopeGame, p: Perspective) -> Result<MenuProjection> {
    let mut proj = MenuProjector::new(g, p)?;
    let mut out = proj.project(&phi.oriented(p).matrix)?;
    if p == Perspective::Optimizer {
        out.nearest = out.nearest.transpose();
    }
    Ok(out)
}
