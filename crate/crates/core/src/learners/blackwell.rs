//! Exact Blackwell approachability of the menu, for games small enough to
//! project onto it.

use crate::convex::{minimax_x, BiaffinePayoff};
use crate::error::Result;
use crate::games::{Perspective, PolytopeGame};
use crate::linalg::{axpy, norm, Mat};
use crate::regret::{best_response, MenuProjector};

#[derive(Clone, Debug)]
pub struct MenuBlackwellLearner {
    game: PolytopeGame,
    projector: MenuProjector,
    csp_sum: Mat,
    y_sum: Vec<f64>,
    last_x: Option<Vec<f64>>,
    t: usize,
    last_distance: f64,
}

impl MenuBlackwellLearner {
    /// `g` must already be oriented so the learner is the X player.
    pub fn new(g: &PolytopeGame) -> Result<Self> {
        Ok(MenuBlackwellLearner {
            projector: MenuProjector::new(g, Perspective::Learner)?,
            csp_sum: Mat::zeros(g.d_l(), g.d_o()),
            y_sum: vec![0.0; g.d_o()],
            game: g.clone(),
            last_x: None,
            t: 0,
            last_distance: 0.0,
        })
    }

    /// Distance of the running CSP to the menu, as of the last decision.
    pub fn last_distance(&self) -> f64 {
        self.last_distance
    }

    pub fn next_action(&mut self, y: Option<&[f64]>) -> Result<Vec<f64>> {
        let x = match (y, self.last_x.as_ref()) {
            (Some(y), Some(x)) => {
                self.csp_sum.add_scaled(1.0, &Mat::outer(x, y));
                axpy(&mut self.y_sum, 1.0, y);
                let n = self.t as f64;
                let p = self.csp_sum.scale(1.0 / n);
                let proj = self.projector.project(&p)?;
                self.last_distance = proj.distance;
                let h = p.sub(&proj.nearest);
                if norm(&h.data) <= 1e-9 {
                    let ybar: Vec<f64> = self.y_sum.iter().map(|v| v / n).collect();
                    best_response(&ybar, &self.game, Perspective::Learner)?
                } else {
                    minimax_x(&BiaffinePayoff::new(h, 0.0), &self.game.x_set, &self.game.y_set)?.1
                }
            }
            _ => super::semisep::first_action(&self.game.x_set)?,
        };
        self.t += 1;
        self.last_x = Some(x.clone());
        Ok(x)
    }
}
