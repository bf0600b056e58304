//! Online learners, optimizer policies and the match runner.

pub mod adversary;
pub mod blackwell;
pub mod ogd;
pub mod semisep;

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use adversary::Adversary;
pub use blackwell::MenuBlackwellLearner;
pub use ogd::OgdLearner;
pub use semisep::{
    cut_is_sound, first_action, semi_separation_oracle, shell_project, Cut, OracleAnswer, PayoffSetU, SemisepLearner,
    ShellProjection,
};

use crate::error::{Error, Result};
use crate::games::{fmt_f64, Csp, Perspective, PolytopeGame, Transcript};
use crate::linalg::{axpy, Mat};
use crate::regret::MenuProjector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerConfig {
    Semisep {
        #[serde(default)]
        eta: Option<f64>,
    },
    MenuBlackwell,
    OgdBaseline,
    /// Replays the x columns of a transcript CSV, or inline actions.
    Scripted {
        #[serde(default)]
        actions: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum AdversaryConfig {
    StackelbergFixed,
    BrToLast,
    /// Seed defaults to the match seed.
    RandomVertex {
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Replays the y columns of a transcript CSV, or inline actions.
    Scripted {
        #[serde(default)]
        actions: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        file: Option<PathBuf>,
    },
}

fn script(actions: &Option<Vec<Vec<f64>>>, file: &Option<PathBuf>, x_side: bool) -> Result<Vec<Vec<f64>>> {
    match (actions, file) {
        (Some(a), None) => Ok(a.clone()),
        (None, Some(f)) => {
            let t = Transcript::read_csv(std::fs::File::open(f)?)?;
            Ok(if x_side { t.xs } else { t.ys })
        }
        _ => Err(Error::Parse("scripted player needs exactly one of `actions` or `file`".into())),
    }
}

#[derive(Clone, Debug)]
pub enum Learner {
    Semisep(Box<SemisepLearner>),
    MenuBlackwell(Box<MenuBlackwellLearner>),
    Ogd(Box<OgdLearner>),
    Scripted { actions: Vec<Vec<f64>>, next: usize },
}

impl Learner {
    /// `g` must already be oriented so the learner is the X player.
    pub fn build(cfg: &LearnerConfig, g: &PolytopeGame, horizon: usize) -> Result<Self> {
        Ok(match cfg {
            LearnerConfig::Semisep { eta } => {
                let l = SemisepLearner::new(g, horizon);
                Learner::Semisep(Box::new(match eta {
                    Some(e) => l.with_step(*e),
                    None => l,
                }))
            }
            LearnerConfig::MenuBlackwell => Learner::MenuBlackwell(Box::new(MenuBlackwellLearner::new(g)?)),
            LearnerConfig::OgdBaseline => Learner::Ogd(Box::new(OgdLearner::new(g))),
            LearnerConfig::Scripted { actions, file } => {
                let actions = script(actions, file, true)?;
                if actions.len() < horizon {
                    return Err(Error::InvalidGame(format!(
                        "script has {} rounds, horizon is {horizon}",
                        actions.len()
                    )));
                }
                Learner::Scripted { actions, next: 0 }
            }
        })
    }

    /// Observes the opponent's previous action and returns the next one.
    pub fn next_action(&mut self, y: Option<&[f64]>) -> Result<Vec<f64>> {
        match self {
            Learner::Semisep(l) => l.next_action(y),
            Learner::MenuBlackwell(l) => l.next_action(y),
            Learner::Ogd(l) => l.next_action(y),
            Learner::Scripted { actions, next } => {
                let x = actions.get(*next).cloned().ok_or_else(|| Error::InvalidGame("script exhausted".into()))?;
                *next += 1;
                Ok(x)
            }
        }
    }
}

impl Adversary {
    pub fn build(cfg: &AdversaryConfig, g: &PolytopeGame, horizon: usize, seed: u64) -> Result<Self> {
        match cfg {
            AdversaryConfig::StackelbergFixed => Adversary::stackelberg_fixed(g),
            AdversaryConfig::BrToLast => Adversary::br_to_last(g),
            AdversaryConfig::RandomVertex { seed: s } => Adversary::random_vertex(g, s.unwrap_or(seed)),
            AdversaryConfig::Scripted { actions, file } => Adversary::scripted(script(actions, file, false)?, horizon),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct MatchOptions {
    /// Compute the running profile swap distance every this many rounds (and
    /// at the last round); `None` disables the small-instance oracle.
    pub distance_stride: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricRow {
    pub t: usize,
    pub u_learner: f64,
    pub u_optimizer: f64,
    pub ext_regret_running: f64,
    pub profile_dist_running: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct MatchResult {
    pub transcript: Transcript,
    pub metrics: Vec<MetricRow>,
}

impl MatchResult {
    pub fn csp(&self) -> Result<Csp> {
        crate::games::csp_of_transcript(&self.transcript)
    }

    pub fn mean_optimizer_utility(&self) -> f64 {
        self.metrics.iter().map(|m| m.u_optimizer).sum::<f64>() / self.metrics.len().max(1) as f64
    }

    pub fn final_distance(&self) -> Option<f64> {
        self.metrics.last().and_then(|m| m.profile_dist_running)
    }
}

/// Plays `horizon` rounds of `g` with the learner on X. Deterministic given
/// the configs and `seed`.
pub fn run_match(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    g: &PolytopeGame,
    horizon: usize,
    seed: u64,
    opts: &MatchOptions,
) -> Result<MatchResult> {
    let mut l = Learner::build(learner, g, horizon)?;
    let mut a = Adversary::build(adversary, g, horizon, seed)?;
    let mut proj = match opts.distance_stride {
        Some(_) if g.x_set.has_vertices() => Some(MenuProjector::new(g, Perspective::Learner)?),
        _ => None,
    };
    let stride = opts.distance_stride.unwrap_or(usize::MAX).max(1);
    let mut t_out = Transcript::default();
    let mut metrics = Vec::with_capacity(horizon);
    let mut csp_sum = Mat::zeros(g.d_l(), g.d_o());
    let mut y_sum = vec![0.0; g.d_o()];
    let mut ul_sum = 0.0;
    let (mut px, mut py): (Option<Vec<f64>>, Option<Vec<f64>>) = (None, None);
    for t in 1..=horizon {
        let x = l.next_action(py.as_deref())?;
        let y = a.next_action(px.as_deref())?;
        if x.len() != g.d_l() || y.len() != g.d_o() {
            return Err(Error::Dimension(format!("round {t}: action lengths do not match the game")));
        }
        let ul = g.u_l(&x, &y);
        let uo = g.u_o(&x, &y);
        ul_sum += ul;
        axpy(&mut y_sum, 1.0, &y);
        csp_sum.add_scaled(1.0, &Mat::outer(&x, &y));
        let n = t as f64;
        let ybar: Vec<f64> = y_sum.iter().map(|v| v / n).collect();
        let best = g.x_set.maximize(&g.u_learner.mul_vec(&ybar))?.0;
        let ext = (best - ul_sum / n).max(0.0);
        let dist = match proj.as_mut() {
            Some(p) if t % stride == 0 || t == horizon => Some(p.project(&csp_sum.scale(1.0 / n))?.distance),
            _ => None,
        };
        metrics.push(MetricRow {
            t,
            u_learner: ul,
            u_optimizer: uo,
            ext_regret_running: ext,
            profile_dist_running: dist,
        });
        t_out.push(x.clone(), y.clone());
        px = Some(x);
        py = Some(y);
    }
    Ok(MatchResult { transcript: t_out, metrics })
}

pub fn write_metrics_csv<W: Write>(rows: &[MetricRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Parse(e.to_string());
    wr.write_record(["t", "u_learner", "u_optimizer", "ext_regret_running", "profile_dist_running"]).map_err(err)?;
    for r in rows {
        wr.write_record([
            r.t.to_string(),
            fmt_f64(r.u_learner),
            fmt_f64(r.u_optimizer),
            fmt_f64(r.ext_regret_running),
            r.profile_dist_running.map(fmt_f64).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    wr.flush()?;
    Ok(())
}
