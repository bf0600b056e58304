//! Projected online gradient ascent: a no-external-regret baseline.

use crate::convex::project_point;
use crate::error::Result;
use crate::games::PolytopeGame;

#[derive(Clone, Debug)]
pub struct OgdLearner {
    game: PolytopeGame,
    x: Option<Vec<f64>>,
    eta0: f64,
    t: usize,
}

impl OgdLearner {
    /// `g` must already be oriented so the learner is the X player.
    pub fn new(g: &PolytopeGame) -> Self {
        let eta0 = g.x_set.radius_bound() / g.y_set.radius_bound();
        OgdLearner { game: g.clone(), x: None, eta0, t: 0 }
    }

    pub fn next_action(&mut self, y: Option<&[f64]>) -> Result<Vec<f64>> {
        let x = match (y, self.x.as_ref()) {
            (Some(y), Some(x)) => {
                let eta = self.eta0 / (self.t as f64).sqrt();
                let grad = self.game.u_learner.mul_vec(y);
                let q: Vec<f64> = x.iter().zip(&grad).map(|(a, g)| a + eta * g).collect();
                project_point(&q, &self.game.x_set, &[])?
            }
            _ => self.game.x_set.barycenter()?,
        };
        self.t += 1;
        self.x = Some(x.clone());
        Ok(x)
    }
}
