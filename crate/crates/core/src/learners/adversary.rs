use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::games::{Perspective, PolytopeGame};
use crate::regret::stackelberg_value;

/// Optimizer policies. `g` is seen from the learner's side, so the adversary
/// plays Y with utility `u_optimizer`.
#[derive(Clone, Debug)]
pub enum Adversary {
    StackelbergFixed(Vec<f64>),
    BrToLast { game: PolytopeGame, first: Vec<f64> },
    RandomVertex { vertices: Vec<Vec<f64>>, rng: ChaCha8Rng },
    Scripted { actions: Vec<Vec<f64>>, next: usize },
}

impl Adversary {
    pub fn stackelberg_fixed(g: &PolytopeGame) -> Result<Self> {
        Ok(Adversary::StackelbergFixed(stackelberg_value(g, Perspective::Learner)?.y))
    }

    pub fn br_to_last(g: &PolytopeGame) -> Result<Self> {
        let first = super::semisep::first_action(&g.y_set)?;
        Ok(Adversary::BrToLast { game: g.clone(), first })
    }

    pub fn random_vertex(g: &PolytopeGame, seed: u64) -> Result<Self> {
        Ok(Adversary::RandomVertex { vertices: g.y_set.vertices()?.to_vec(), rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn scripted(actions: Vec<Vec<f64>>, horizon: usize) -> Result<Self> {
        if actions.len() < horizon {
            return Err(Error::InvalidGame(format!("script has {} rounds, horizon is {horizon}", actions.len())));
        }
        Ok(Adversary::Scripted { actions, next: 0 })
    }

    /// Next optimizer action given the learner's previous action.
    pub fn next_action(&mut self, last_x: Option<&[f64]>) -> Result<Vec<f64>> {
        match self {
            Adversary::StackelbergFixed(y) => Ok(y.clone()),
            Adversary::BrToLast { game, first } => match last_x {
                Some(x) => Ok(game.y_set.maximize(&game.u_optimizer.tmul_vec(x))?.1),
                None => Ok(first.clone()),
            },
            Adversary::RandomVertex { vertices, rng } => Ok(vertices[rng.gen_range(0..vertices.len())].clone()),
            Adversary::Scripted { actions, next } => {
                let y = actions.get(*next).cloned().ok_or_else(|| Error::InvalidGame("script exhausted".into()))?;
                *next += 1;
                Ok(y)
            }
        }
    }
}
