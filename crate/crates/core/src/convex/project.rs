//! Euclidean projections. Polyhedra go through least-distance programming
//! (exact, via NNLS); a ball constraint on a block of coordinates is added
//! through a one-dimensional search on its multiplier. Dykstra's alternating
//! projections are kept as a cross-check.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};

use super::polytope::{Polytope, Structure};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

pub const MAX_SWEEPS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    /// `a . x <= b`
    Halfspace { a: Vec<f64>, b: f64 },
    /// `a . x = b`
    Hyperplane { a: Vec<f64>, b: f64 },
    /// `|| x[coords] || <= radius`
    Ball { coords: Range<usize>, radius: f64 },
}

impl Piece {
    fn project_in_place(&self, x: &mut [f64]) {
        match self {
            Piece::Halfspace { a, b } => {
                let r = dot(a, x) - b;
                if r > 0.0 {
                    let aa = dot(a, a);
                    if aa > 0.0 {
                        let s = r / aa;
                        x.iter_mut().zip(a).for_each(|(xi, ai)| *xi -= s * ai);
                    }
                }
            }
            Piece::Hyperplane { a, b } => {
                let aa = dot(a, a);
                if aa > 0.0 {
                    let s = (dot(a, x) - b) / aa;
                    x.iter_mut().zip(a).for_each(|(xi, ai)| *xi -= s * ai);
                }
            }
            Piece::Ball { coords, radius } => {
                let n = norm(&x[coords.clone()]);
                if n > *radius {
                    let s = radius / n;
                    x[coords.clone()].iter_mut().for_each(|v| *v *= s);
                }
            }
        }
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        match self {
            Piece::Halfspace { a, b } => (dot(a, x) - b).max(0.0) / norm(a).max(1e-300),
            Piece::Hyperplane { a, b } => (dot(a, x) - b).abs() / norm(a).max(1e-300),
            Piece::Ball { coords, radius } => (norm(&x[coords.clone()]) - radius).max(0.0),
        }
    }
}

/// Dykstra's algorithm over convex pieces. Stops when a full sweep moves the
/// iterate by less than `tol` and every piece is satisfied to `tol`, or after
/// `MAX_SWEEPS` sweeps. Errors if the pieces look mutually infeasible.
pub fn dykstra(q: &[f64], pieces: &[Piece], tol: f64) -> Result<Vec<f64>> {
    let n = q.len();
    let mut x = q.to_vec();
    if pieces.iter().all(|p| p.violation(&x) <= tol * 1e-3) {
        return Ok(x);
    }
    // Affine pieces need no correction term.
    let mut incr: Vec<Option<Vec<f64>>> =
        pieces.iter().map(|p| if matches!(p, Piece::Hyperplane { .. }) { None } else { Some(vec![0.0; n]) }).collect();
    let mut y = vec![0.0; n];
    for _ in 0..MAX_SWEEPS {
        let mut moved = 0.0;
        for (piece, inc) in pieces.iter().zip(incr.iter_mut()) {
            match inc {
                Some(p) => {
                    for k in 0..n {
                        y[k] = x[k] + p[k];
                    }
                    piece.project_in_place(&mut y);
                    for k in 0..n {
                        p[k] = x[k] + p[k] - y[k];
                        let d = y[k] - x[k];
                        moved += d * d;
                        x[k] = y[k];
                    }
                }
                None => {
                    y.copy_from_slice(&x);
                    piece.project_in_place(&mut y);
                    for k in 0..n {
                        let d = y[k] - x[k];
                        moved += d * d;
                        x[k] = y[k];
                    }
                }
            }
        }
        if moved.sqrt() <= tol * 1e-2 && pieces.iter().all(|p| p.violation(&x) <= tol) {
            return Ok(x);
        }
    }
    let worst = pieces.iter().map(|p| p.violation(&x)).fold(0.0, f64::max);
    if worst > 1e-6 {
        return Err(Error::Infeasible(format!("projection pieces appear infeasible (violation {worst:.3e})")));
    }
    Ok(x)
}

/// Pieces describing a polytope's constraint rows.
pub fn polytope_pieces(p: &Polytope) -> Vec<Piece> {
    let mut out: Vec<Piece> = p.eq().iter().map(|(a, b)| Piece::Hyperplane { a: a.clone(), b: *b }).collect();
    out.extend(p.ineq().iter().map(|(a, b)| Piece::Halfspace { a: a.clone(), b: *b }));
    out
}

/// Euclidean projection onto `p` intersected with `extra` halfspaces `(a, b)`.
/// Structured sets without extra halfspaces have closed forms; everything
/// else is solved as a least-distance program.
pub fn project_point(q: &[f64], p: &Polytope, extra: &[(Vec<f64>, f64)]) -> Result<Vec<f64>> {
    if q.len() != p.dim() {
        return Err(Error::Dimension(format!("point length {} vs dim {}", q.len(), p.dim())));
    }
    if extra.is_empty() {
        match p.structure() {
            Structure::Simplex(_) => return Ok(project_simplex(q, 1.0)),
            Structure::ProductOfSimplices(sizes) => {
                let mut out = Vec::with_capacity(q.len());
                let mut off = 0;
                for &s in sizes {
                    out.extend(project_simplex(&q[off..off + s], 1.0));
                    off += s;
                }
                return Ok(out);
            }
            Structure::HypercubeLifted(n) => {
                let mut out: Vec<f64> = q[..*n].iter().map(|v| v.clamp(0.0, 1.0)).collect();
                out.push(1.0);
                return Ok(out);
            }
            Structure::Explicit => {}
        }
    }
    let mut rows: Vec<(Vec<f64>, f64)> = p.ineq().to_vec();
    for (a, b) in p.eq() {
        rows.push((a.clone(), *b));
        rows.push((a.iter().map(|v| -v).collect(), -b));
    }
    rows.extend(extra.iter().cloned());
    project_polyhedron(q, &rows).ok_or_else(|| Error::Infeasible("projection target set is empty".into()))
}

/// Lawson-Hanson non-negative least squares: `min ||E z - f||` over `z >= 0`.
pub fn nnls(e: &DMatrix<f64>, f: &DVector<f64>) -> DVector<f64> {
    let (m, n) = e.shape();
    let tol = 1e-12 * (1.0 + e.amax()) * (1.0 + f.amax()) * (m.max(n) as f64);
    let mut z = DVector::zeros(n);
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 10;
    for _ in 0..max_outer {
        let w = e.transpose() * (f - e * &z);
        let pick = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = pick else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let s_p = least_squares(&e.select_columns(&idx), f);
            if s_p.iter().all(|v| *v > 0.0) {
                z.fill(0.0);
                for (k, &c) in idx.iter().enumerate() {
                    z[c] = s_p[k];
                }
                break;
            }
            // Step toward s_p until a passive coordinate hits zero.
            let mut alpha = f64::INFINITY;
            for (k, &c) in idx.iter().enumerate() {
                if s_p[k] <= 0.0 {
                    let a = z[c] / (z[c] - s_p[k]);
                    alpha = alpha.min(a);
                }
            }
            for (k, &c) in idx.iter().enumerate() {
                z[c] += alpha * (s_p[k] - z[c]);
            }
            for &c in &idx {
                if z[c] <= tol {
                    z[c] = 0.0;
                    passive[c] = false;
                }
            }
            if !passive.iter().any(|p| *p) {
                break;
            }
        }
    }
    z
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1e-300);
    svd.solve(b, eps).expect("u and v were computed")
}

/// `min ||w||` subject to `G w >= h`, or `None` when infeasible.
pub fn least_distance(g: &[Vec<f64>], h: &[f64], n: usize) -> Option<Vec<f64>> {
    let m = g.len();
    if m == 0 {
        return Some(vec![0.0; n]);
    }
    let e = DMatrix::from_fn(n + 1, m, |i, j| if i < n { g[j][i] } else { h[j] });
    let mut f = DVector::zeros(n + 1);
    f[n] = 1.0;
    let z = nnls(&e, &f);
    let r = &e * z - f;
    if r.norm() <= 1e-12 || r[n].abs() <= 1e-14 {
        return None;
    }
    Some((0..n).map(|k| -r[k] / r[n]).collect())
}

/// Weighted projection `argmin sum_k d_k (u_k - t_k/d_k)^2`-style step used by
/// the ball search: minimizes `0.5 u'Du - t'u` over `A u <= c`.
fn weighted_polyhedron(t: &[f64], d: &[f64], rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    let n = t.len();
    let sd: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
    let g: Vec<Vec<f64>> = rows.iter().map(|(a, _)| (0..n).map(|k| -a[k] / sd[k]).collect()).collect();
    let h: Vec<f64> = rows.iter().map(|(a, c)| (0..n).map(|k| a[k] * t[k] / d[k]).sum::<f64>() - c).collect();
    let w = least_distance(&g, &h, n)?;
    Some((0..n).map(|k| w[k] / sd[k] + t[k] / d[k]).collect())
}

/// Exact Euclidean projection onto `{u : A u <= c}`.
pub fn project_polyhedron(t: &[f64], rows: &[(Vec<f64>, f64)]) -> Option<Vec<f64>> {
    weighted_polyhedron(t, &vec![1.0; t.len()], rows)
}

/// Exact Euclidean projection onto `{u : A u <= c, ||u[ball]|| <= radius}`.
/// The ball multiplier `mu` is found by bisection on `||u_ball(mu)|| = radius`,
/// which is non-increasing in `mu`.
pub fn project_ball_polyhedron(
    t: &[f64],
    ball: Range<usize>,
    radius: f64,
    rows: &[(Vec<f64>, f64)],
) -> Result<Vec<f64>> {
    let n = t.len();
    let empty = || Error::Infeasible("projection target set is empty".into());
    let solve = |mu: f64| {
        let d: Vec<f64> = (0..n).map(|k| if ball.contains(&k) { 1.0 + mu } else { 1.0 }).collect();
        weighted_polyhedron(t, &d, rows)
    };
    let ball_norm = |u: &[f64]| norm(&u[ball.clone()]);
    let u0 = solve(0.0).ok_or_else(empty)?;
    if ball_norm(&u0) <= radius {
        return Ok(u0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut u_hi = solve(hi).ok_or_else(empty)?;
    while ball_norm(&u_hi) > radius {
        lo = hi;
        hi *= 4.0;
        if hi > 1e12 {
            return Err(empty());
        }
        u_hi = solve(hi).ok_or_else(empty)?;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let u = solve(mid).ok_or_else(empty)?;
        if ball_norm(&u) > radius {
            lo = mid;
        } else {
            hi = mid;
            u_hi = u;
        }
    }
    Ok(u_hi)
}

/// Projection onto `{x >= 0, sum x = total}` by sorting.
pub fn project_simplex(q: &[f64], total: f64) -> Vec<f64> {
    let mut u = q.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - total) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    q.iter().map(|v| (v - theta).max(0.0)).collect()
}
