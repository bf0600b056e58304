use serde::Serialize;

use super::basic::{external_regret, ExternalRegret};
use super::linear::{linear_swap_regret, LinearSwapRegret};
use super::swap::{
    normal_form_swap_regret, polytope_swap_regret, profile_swap_regret, NormalFormSwapRegret, PolytopeSwapRegret,
    ProfileSwapRegret,
};
use crate::error::Result;
use crate::games::{csp_of_transcript, Perspective, PolytopeGame, Transcript, VertexCsp};
use crate::par::{self, Exec};

/// All five regret notions of one player, each with its witness.
#[derive(Clone, Debug, Serialize)]
pub struct RegretReport {
    pub perspective: Perspective,
    pub external: Option<ExternalRegret>,
    pub linear_swap: Option<LinearSwapRegret>,
    pub profile_swap: Option<ProfileSwapRegret>,
    pub polytope_swap: Option<PolytopeSwapRegret>,
    pub normal_form_swap: Option<NormalFormSwapRegret>,
}

impl RegretReport {
    /// Values in the order external, linear, profile, polytope, normal-form.
    pub fn values(&self) -> [Option<f64>; 5] {
        [
            self.external.as_ref().map(|r| r.value),
            self.linear_swap.as_ref().map(|r| r.value),
            self.profile_swap.as_ref().map(|r| r.value),
            self.polytope_swap.as_ref().map(|r| r.value),
            self.normal_form_swap.as_ref().map(|r| r.value),
        ]
    }

    /// Largest violation of the ordering chain among the present values.
    pub fn ordering_violation(&self) -> f64 {
        let vals: Vec<f64> = self.values().iter().flatten().copied().collect();
        vals.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Computes every notion that applies. Vertex-based notions are skipped when
/// the action sets have no vertex list; normal-form needs `vertex_csp`.
pub fn regret_report(
    t: &Transcript,
    g: &PolytopeGame,
    p: Perspective,
    vertex_csp: Option<&VertexCsp>,
) -> Result<RegretReport> {
    regret_report_limited(t, g, p, vertex_csp, usize::MAX)
}

/// As `regret_report`, but polytope swap regret (one LP block per round) is
/// left out on transcripts longer than `max_polytope_rounds`.
pub fn regret_report_limited(
    t: &Transcript,
    g: &PolytopeGame,
    p: Perspective,
    vertex_csp: Option<&VertexCsp>,
    max_polytope_rounds: usize,
) -> Result<RegretReport> {
    let phi = csp_of_transcript(t)?;
    let gx = g.oriented(p);
    let enumerable = gx.x_set.has_vertices();
    Ok(RegretReport {
        perspective: p,
        external: Some(external_regret(&phi, g, p)?),
        linear_swap: Some(linear_swap_regret(&phi, g, p)?),
        profile_swap: if enumerable { Some(profile_swap_regret(&phi, g, p)?) } else { None },
        polytope_swap: if enumerable && t.len() <= max_polytope_rounds {
            Some(polytope_swap_regret(t, g, p)?)
        } else {
            None
        },
        normal_form_swap: match vertex_csp {
            Some(v) if enumerable && gx.y_set.has_vertices() => Some(normal_form_swap_regret(v, g, p)?),
            _ => None,
        },
    })
}

/// One regret report per `(game, transcript)` case, in input order.
pub fn batch_reports(
    cases: &[(PolytopeGame, Transcript, Option<VertexCsp>)],
    p: Perspective,
    exec: Exec,
) -> Vec<Result<RegretReport>> {
    par::map(exec, cases, |(g, t, v)| regret_report(t, g, p, v.as_ref()))
}
