use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::convex::{Polytope, PolytopeJson};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Which player's incentives a regret notion is measured for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Perspective {
    /// The X-player (learner).
    #[default]
    Learner,
    /// The Y-player (optimizer).
    Optimizer,
}

/// Two polytopes and bilinear utilities `u(x, y) = x^T U y`.
#[derive(Clone, Debug)]
pub struct PolytopeGame {
    pub name: String,
    pub x_set: Polytope,
    pub y_set: Polytope,
    pub u_learner: Mat,
    pub u_optimizer: Mat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameJson {
    pub name: String,
    pub x_polytope: PolytopeJson,
    pub y_polytope: PolytopeJson,
    pub u_learner: Mat,
    pub u_optimizer: Mat,
}

#[derive(Clone, Debug)]
pub enum GameSpec {
    NormalForm {
        m: usize,
        n: usize,
        u_learner: Mat,
        u_optimizer: Mat,
    },
    /// `c_l` learner types with `m` actions each, `c_o` optimizer types with
    /// `n` actions each. Blocks are indexed `[i][j]` by (learner type,
    /// optimizer type); `prior[i][j]` defaults to uniform.
    Bayesian {
        m: usize,
        n: usize,
        c_l: usize,
        c_o: usize,
        learner_blocks: Vec<Vec<Mat>>,
        optimizer_blocks: Vec<Vec<Mat>>,
        prior: Option<Mat>,
    },
    Explicit {
        x_set: Polytope,
        y_set: Polytope,
        u_learner: Mat,
        u_optimizer: Mat,
    },
}

impl PolytopeGame {
    pub fn new(
        name: impl Into<String>,
        x_set: Polytope,
        y_set: Polytope,
        u_learner: Mat,
        u_optimizer: Mat,
    ) -> Result<Self> {
        let (dl, d_o) = (x_set.dim(), y_set.dim());
        for (label, u) in [("u_learner", &u_learner), ("u_optimizer", &u_optimizer)] {
            if u.rows != dl || u.cols != d_o {
                return Err(Error::Dimension(format!("{label} is {}x{}, expected {dl}x{d_o}", u.rows, u.cols)));
            }
            if u.data.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidGame(format!("{label} has non-finite entries")));
            }
        }
        Ok(PolytopeGame { name: name.into(), x_set, y_set, u_learner, u_optimizer })
    }

    /// Rejects utilities with an entry larger than 1 in absolute value.
    pub fn check_utility_bound(&self) -> Result<()> {
        for (label, u) in [("u_learner", &self.u_learner), ("u_optimizer", &self.u_optimizer)] {
            if u.data.iter().any(|v| v.abs() > 1.0) {
                return Err(Error::InvalidGame(format!("{label} exceeds the unit sup-norm bound")));
            }
        }
        Ok(())
    }

    pub fn d_l(&self) -> usize {
        self.x_set.dim()
    }

    pub fn d_o(&self) -> usize {
        self.y_set.dim()
    }

    pub fn u_l(&self, x: &[f64], y: &[f64]) -> f64 {
        self.u_learner.bilinear(x, y)
    }

    pub fn u_o(&self, x: &[f64], y: &[f64]) -> f64 {
        self.u_optimizer.bilinear(x, y)
    }

    /// Swaps the roles of the two players. An involution.
    pub fn transpose_perspective(&self) -> PolytopeGame {
        PolytopeGame {
            name: self.name.clone(),
            x_set: self.y_set.clone(),
            y_set: self.x_set.clone(),
            u_learner: self.u_optimizer.transpose(),
            u_optimizer: self.u_learner.transpose(),
        }
    }

    /// The game seen from `p`: unchanged for the learner, transposed for the optimizer.
    pub fn oriented(&self, p: Perspective) -> Cow<'_, PolytopeGame> {
        match p {
            Perspective::Learner => Cow::Borrowed(self),
            Perspective::Optimizer => Cow::Owned(self.transpose_perspective()),
        }
    }

    /// Normal-form game over vertex indices.
    pub fn vertex_game(&self) -> Result<PolytopeGame> {
        let vx = self.x_set.vertices()?;
        let vy = self.y_set.vertices()?;
        let ul = Mat::from_fn(vx.len(), vy.len(), |i, j| self.u_learner.bilinear(&vx[i], &vy[j]));
        let uo = Mat::from_fn(vx.len(), vy.len(), |i, j| self.u_optimizer.bilinear(&vx[i], &vy[j]));
        PolytopeGame::new(
            format!("vertex-game({})", self.name),
            Polytope::simplex(vx.len()),
            Polytope::simplex(vy.len()),
            ul,
            uo,
        )
    }

    pub fn to_json(&self) -> GameJson {
        GameJson {
            name: self.name.clone(),
            x_polytope: self.x_set.to_json(),
            y_polytope: self.y_set.to_json(),
            u_learner: self.u_learner.clone(),
            u_optimizer: self.u_optimizer.clone(),
        }
    }

    pub fn from_json(j: &GameJson) -> Result<Self> {
        PolytopeGame::new(
            j.name.clone(),
            Polytope::from_json(&j.x_polytope)?,
            Polytope::from_json(&j.y_polytope)?,
            j.u_learner.clone(),
            j.u_optimizer.clone(),
        )
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("game serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: GameJson = serde_json::from_str(s)?;
        Self::from_json(&j)
    }
}

pub fn build_game(spec: GameSpec) -> Result<PolytopeGame> {
    match spec {
        GameSpec::NormalForm { m, n, u_learner, u_optimizer } => {
            PolytopeGame::new("normal-form", Polytope::simplex(m), Polytope::simplex(n), u_learner, u_optimizer)
        }
        GameSpec::Bayesian { m, n, c_l, c_o, learner_blocks, optimizer_blocks, prior } => {
            let prior = prior.unwrap_or_else(|| Mat::from_fn(c_l, c_o, |_, _| 1.0 / (c_l * c_o) as f64));
            if prior.rows != c_l || prior.cols != c_o {
                return Err(Error::Dimension("prior must be c_l x c_o".into()));
            }
            let assemble = |blocks: &Vec<Vec<Mat>>| -> Result<Mat> {
                if blocks.len() != c_l || blocks.iter().any(|r| r.len() != c_o) {
                    return Err(Error::Dimension("payoff blocks must be indexed [c_l][c_o]".into()));
                }
                let mut u = Mat::zeros(m * c_l, n * c_o);
                for (i, row) in blocks.iter().enumerate() {
                    for (j, blk) in row.iter().enumerate() {
                        if blk.rows != m || blk.cols != n {
                            return Err(Error::Dimension(format!("block ({i},{j}) must be {m}x{n}")));
                        }
                        for a in 0..m {
                            for b in 0..n {
                                u.set(i * m + a, j * n + b, prior.get(i, j) * blk.get(a, b));
                            }
                        }
                    }
                }
                Ok(u)
            };
            PolytopeGame::new(
                "bayesian",
                Polytope::product_of_simplices(&vec![m; c_l]),
                Polytope::product_of_simplices(&vec![n; c_o]),
                assemble(&learner_blocks)?,
                assemble(&optimizer_blocks)?,
            )
        }
        GameSpec::Explicit { x_set, y_set, u_learner, u_optimizer } => {
            PolytopeGame::new("explicit", x_set, y_set, u_learner, u_optimizer)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_dims() {
        let g = build_game(GameSpec::NormalForm {
            m: 2,
            n: 2,
            u_learner: Mat::from_fn(2, 2, |i, j| (i == j) as u8 as f64),
            u_optimizer: Mat::zeros(2, 2),
        })
        .unwrap();
        assert_eq!((g.d_l(), g.d_o()), (2, 2));
        let vg = g.vertex_game().unwrap();
        assert_eq!(vg.u_learner, g.u_learner);
    }

    #[test]
    fn bayesian_product_of_simplices() {
        let blk = Mat::from_fn(2, 2, |i, j| (i + j) as f64);
        let g = build_game(GameSpec::Bayesian {
            m: 2,
            n: 2,
            c_l: 2,
            c_o: 1,
            learner_blocks: vec![vec![blk.clone()], vec![blk.clone()]],
            optimizer_blocks: vec![vec![blk.clone()], vec![blk]],
            prior: None,
        })
        .unwrap();
        assert_eq!(g.x_set.vertices().unwrap().len(), 4);
        assert_eq!(g.d_l(), 4);
        assert_eq!(g.u_learner.get(2, 1), 0.5);
    }

    #[test]
    fn transpose_is_involution() {
        let g = build_game(GameSpec::NormalForm {
            m: 2,
            n: 3,
            u_learner: Mat::from_fn(2, 3, |i, j| i as f64 - j as f64),
            u_optimizer: Mat::from_fn(2, 3, |i, j| j as f64 - i as f64),
        })
        .unwrap();
        let back = g.transpose_perspective().transpose_perspective();
        assert_eq!(back.u_learner, g.u_learner);
        assert_eq!(back.u_optimizer, g.u_optimizer);
        assert_eq!(back.x_set.dim(), 2);
    }
}
