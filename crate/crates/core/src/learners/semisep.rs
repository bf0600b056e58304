//! Orthant approachability through a semi-separation oracle.
//!
//! The learner runs projected gradient ascent over biaffine payoffs
//! `u = (h, b)` and plays an action certifying `u(x, y) <= 0` for every y.
//! The target payoff set is only reachable through cuts, so each projection
//! is followed by an oracle query that either certifies the point or returns
//! a new valid cut.

use serde::Serialize;

use crate::convex::project::project_ball_polyhedron;
use crate::convex::{minimax_x, BiaffinePayoff, Polytope};
use crate::error::{Error, Result};
use crate::games::PolytopeGame;
use crate::linalg::{dot, norm, Mat};
use crate::regret::best_response;

pub const TAU: f64 = 1e-9;
pub const K_MAX: usize = 200;
pub const U0_B: f64 = 0.75;
/// Cuts not tight at any of this many consecutive projections are dropped.
pub const CUT_MEMORY: usize = 128;

/// A cut `<h, x y^T> - b <= 0` valid for every payoff in U, recorded with its
/// witness pair (x a best response to y).
#[derive(Clone, Debug, Serialize)]
pub struct Cut {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Cut {
    fn halfspace(&self) -> (Vec<f64>, f64) {
        let mut a = Mat::outer(&self.x, &self.y).data;
        a.push(-1.0);
        (a, 0.0)
    }
}

#[derive(Clone, Debug)]
pub enum OracleAnswer {
    /// `u(x, y) <= TAU` for all y.
    Satisfiable(Vec<f64>),
    /// `value` is the minimax value of u, and `x_minimax` its min-max witness.
    Cut { cut: Cut, value: f64, x_minimax: Vec<f64> },
}

/// Tractable outer description of the payoff set: norm caps plus cuts.
#[derive(Clone, Debug, Serialize)]
pub struct PayoffSetU {
    pub d_l: usize,
    pub d_o: usize,
    pub b_cap: f64,
    pub cuts: Vec<Cut>,
    #[serde(skip)]
    last_tight: Vec<usize>,
    #[serde(skip)]
    clock: usize,
}

impl PayoffSetU {
    pub fn new(g: &PolytopeGame) -> Self {
        let scale = g.x_set.radius_bound() * g.y_set.radius_bound();
        PayoffSetU {
            d_l: g.d_l(),
            d_o: g.d_o(),
            b_cap: scale.max(1.0),
            cuts: Vec::new(),
            last_tight: Vec::new(),
            clock: 0,
        }
    }

    pub fn center(&self) -> BiaffinePayoff {
        BiaffinePayoff::new(Mat::zeros(self.d_l, self.d_o), U0_B)
    }

    /// Radius of the capped region around the origin.
    pub fn outer_radius(&self) -> f64 {
        (1.0 + self.b_cap * self.b_cap).sqrt()
    }

    /// Largest violation of the caps and cuts by `u`.
    pub fn violation(&self, u: &BiaffinePayoff) -> f64 {
        let v = u.to_vec();
        let ball = (norm(&v[..self.d_l * self.d_o]) - 1.0).max(0.0);
        self.rows().iter().map(|(a, c)| ((dot(a, &v) - c) / norm(a)).max(0.0)).fold(ball, f64::max)
    }

    /// The b caps and the cuts as rows `a . u <= c`.
    fn rows(&self) -> Vec<(Vec<f64>, f64)> {
        let n = self.d_l * self.d_o;
        let mut hb = vec![0.0; n + 1];
        hb[n] = 1.0;
        let mut out = vec![(hb.clone(), self.b_cap), (hb.iter().map(|v| -v).collect(), self.b_cap)];
        out.extend(self.cuts.iter().map(Cut::halfspace));
        out
    }

    /// Exact Euclidean projection onto the current outer set. Records which
    /// cuts are tight at the result.
    pub fn project(&mut self, target: &[f64]) -> Result<Vec<f64>> {
        let u = project_ball_polyhedron(target, 0..self.d_l * self.d_o, 1.0, &self.rows())?;
        self.clock += 1;
        for (c, last) in self.cuts.iter().zip(self.last_tight.iter_mut()) {
            let (a, _) = c.halfspace();
            if dot(&a, &u) >= -1e-9 * norm(&a) {
                *last = self.clock;
            }
        }
        Ok(u)
    }

    /// Drops cuts that have been slack for `CUT_MEMORY` projections. The
    /// outer set grows but still contains the target set.
    pub fn prune(&mut self) {
        let clock = self.clock;
        let mut keep = self.last_tight.iter().map(|&t| clock - t <= CUT_MEMORY);
        self.cuts.retain(|_| keep.next().unwrap_or(true));
        self.last_tight.retain(|&t| clock - t <= CUT_MEMORY);
    }

    fn push(&mut self, cut: Cut) -> bool {
        let dup = self.cuts.iter().any(|c| {
            crate::linalg::max_abs_diff(&c.x, &cut.x) <= 1e-12 && crate::linalg::max_abs_diff(&c.y, &cut.y) <= 1e-12
        });
        if !dup {
            self.cuts.push(cut);
            self.last_tight.push(self.clock);
        }
        !dup
    }
}

/// Certifies `u` as response-satisfiable or cuts it off from U.
pub fn semi_separation_oracle(u: &BiaffinePayoff, g: &PolytopeGame) -> Result<OracleAnswer> {
    let (v, x) = minimax_x(u, &g.x_set, &g.y_set)?;
    if v <= TAU {
        return Ok(OracleAnswer::Satisfiable(x));
    }
    let y = maximin_y(u, &g.x_set, &g.y_set)?;
    let x_hat = best_response(&y, g, crate::games::Perspective::Learner)?;
    Ok(OracleAnswer::Cut { cut: Cut { x: x_hat, y }, value: v, x_minimax: x })
}

fn maximin_y(u: &BiaffinePayoff, xs: &Polytope, ys: &Polytope) -> Result<Vec<f64>> {
    let neg = BiaffinePayoff::new(u.h.transpose().scale(-1.0), -u.b);
    Ok(minimax_x(&neg, ys, xs)?.1)
}

#[derive(Clone, Debug)]
pub struct ShellProjection {
    pub u: BiaffinePayoff,
    /// Certifying action, absent when the cut cap was hit.
    pub x: Option<Vec<f64>>,
    pub cuts_added: usize,
    pub queries: usize,
}

/// Project-and-cut: project onto the current outer set, query the oracle,
/// and repeat with the new cut until the point is certified or `K_MAX`
/// queries have been spent.
pub fn shell_project(target: &BiaffinePayoff, uset: &mut PayoffSetU, g: &PolytopeGame) -> Result<ShellProjection> {
    shell_project_from(target, uset, g, None)
}

fn shell_project_from(
    target: &BiaffinePayoff,
    uset: &mut PayoffSetU,
    g: &PolytopeGame,
    hint: Option<&[f64]>,
) -> Result<ShellProjection> {
    let tv = target.to_vec();
    uset.prune();
    let mut cuts_added = 0;
    let mut queries = 0;
    let mut cur = target.clone();
    while queries < K_MAX {
        let v = uset.project(&tv)?;
        cur = BiaffinePayoff::from_vec(uset.d_l, uset.d_o, &v);
        queries += 1;
        if let Some(x) = hint {
            if crate::convex::max_over_y(&cur, x, &g.y_set)? <= TAU {
                return Ok(ShellProjection { u: cur, x: Some(x.to_vec()), cuts_added, queries });
            }
        }
        match semi_separation_oracle(&cur, g)? {
            OracleAnswer::Satisfiable(x) => return Ok(ShellProjection { u: cur, x: Some(x), cuts_added, queries }),
            OracleAnswer::Cut { cut, value, x_minimax } => {
                if uset.push(cut) {
                    cuts_added += 1;
                } else if value <= 1e-7 {
                    // The projection meets this cut only to within its
                    // tolerance; the min-max action is certified to 1e-7.
                    return Ok(ShellProjection { u: cur, x: Some(x_minimax), cuts_added, queries });
                } else {
                    break;
                }
            }
        }
    }
    Ok(ShellProjection { u: cur, x: None, cuts_added, queries })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SemisepStats {
    pub queries: usize,
    pub fallbacks: usize,
}

/// The no-profile-swap-regret learner.
#[derive(Clone, Debug)]
pub struct SemisepLearner {
    game: PolytopeGame,
    uset: PayoffSetU,
    u: BiaffinePayoff,
    eta: f64,
    horizon: usize,
    t: usize,
    last_x: Option<Vec<f64>>,
    y_sum: Vec<f64>,
    pub stats: SemisepStats,
}

impl SemisepLearner {
    /// `g` must already be oriented so the learner is the X player.
    pub fn new(g: &PolytopeGame, horizon: usize) -> Self {
        let uset = PayoffSetU::new(g);
        let scale = g.x_set.radius_bound() * g.y_set.radius_bound();
        let eta = uset.outer_radius() / scale / (horizon.max(1) as f64).sqrt();
        SemisepLearner {
            game: g.clone(),
            u: uset.center(),
            uset,
            eta,
            horizon,
            t: 0,
            last_x: None,
            y_sum: vec![0.0; g.d_o()],
            stats: SemisepStats::default(),
        }
    }

    pub fn with_step(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn payoff(&self) -> &BiaffinePayoff {
        &self.u
    }

    pub fn payoff_set(&self) -> &PayoffSetU {
        &self.uset
    }

    pub fn round(&self) -> usize {
        self.t
    }

    /// Observes the opponent's last action (if any) and returns the next action.
    pub fn next_action(&mut self, y: Option<&[f64]>) -> Result<Vec<f64>> {
        if self.t >= self.horizon {
            return Err(Error::InvalidGame(format!("horizon {} exceeded", self.horizon)));
        }
        let x = match (y, self.last_x.as_ref()) {
            (Some(y), Some(x)) => {
                crate::linalg::axpy(&mut self.y_sum, 1.0, y);
                let mut tv = self.u.to_vec();
                let n = tv.len() - 1;
                for (i, xi) in x.iter().enumerate() {
                    for (k, yk) in y.iter().enumerate() {
                        tv[i * y.len() + k] += self.eta * xi * yk;
                    }
                }
                tv[n] -= self.eta;
                let target = BiaffinePayoff::from_vec(self.game.d_l(), self.game.d_o(), &tv);
                let hint = x.clone();
                let sp = shell_project_from(&target, &mut self.uset, &self.game, Some(&hint))?;
                self.stats.queries += sp.queries;
                self.u = sp.u;
                match sp.x {
                    Some(x) => x,
                    None => {
                        self.stats.fallbacks += 1;
                        let ybar: Vec<f64> = self.y_sum.iter().map(|v| v / self.t as f64).collect();
                        best_response(&ybar, &self.game, crate::games::Perspective::Learner)?
                    }
                }
            }
            _ => first_action(&self.game.x_set)?,
        };
        self.t += 1;
        self.last_x = Some(x.clone());
        Ok(x)
    }

    /// `max_u sum_t u(x_t, y_t) / T` may not exceed this after a run of `t`
    /// rounds, by the projected-gradient regret bound.
    pub fn dual_regret_bound(&self, t: usize) -> f64 {
        let scale = self.game.x_set.radius_bound() * self.game.y_set.radius_bound();
        let diam2 = 1.0 + (self.uset.b_cap + U0_B).powi(2);
        let grad2 = scale * scale + 1.0;
        let t = t.max(1) as f64;
        diam2 / (2.0 * self.eta * t) + 0.5 * self.eta * grad2
    }
}

/// First listed vertex, or an LP vertex when no list is known.
pub fn first_action(x_set: &Polytope) -> Result<Vec<f64>> {
    if x_set.has_vertices() {
        return Ok(x_set.vertices()?[0].clone());
    }
    Ok(x_set.maximize(&vec![0.0; x_set.dim()])?.1)
}

/// `<h, x y^T> - b <= 0` holds for all members of U when x is a best response to y.
pub fn cut_is_sound(c: &Cut, g: &PolytopeGame) -> Result<bool> {
    let r = crate::regret::instantaneous_regret(&c.x, &c.y, g, crate::games::Perspective::Learner)?;
    Ok(r <= 1e-9 && dot(&c.x, &c.x).is_finite())
}
