//! Named checks of the explicit counterexamples.

use std::time::Instant;

use serde::Serialize;

use super::*;
use crate::equilibria::{nfce_feasibility, verify_profile_ce, NfceMode, NfceStatus, NfceTarget};
use crate::games::{build_gstar, csp_of_transcript, gstar_transcript, project_vertex_csp, to_agnostic, Perspective};
use crate::regret::{normal_form_swap_regret, polytope_swap_regret, profile_swap_regret};

pub const COUNTEREXAMPLES: &[(&str, &str)] = &[
    ("ordering-poly-vs-nf", "square game: polytope swap regret 0, normal-form swap regret at least 1/4"),
    ("profile-vs-polytope", "two-type Bayesian transcript: profile swap regret 0, polytope swap regret 1/4"),
    ("agnostic-ambiguity", "two transcripts with one reward transcript: profile swap regret 0 vs 0.5"),
    ("gstar-no-upper-bound", "profile swap regret 0 in the reward game but positive in the original game"),
    ("pce-without-nfce", "a profile CE that is not the projection of any NFCE"),
];

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub claim: String,
    pub value: f64,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub name: String,
    pub description: String,
    pub assertions: Vec<Assertion>,
    pub pass: bool,
    pub seconds: f64,
}

struct Checks {
    tol: f64,
    out: Vec<Assertion>,
}

impl Checks {
    fn eq(&mut self, claim: &str, value: f64, expected: f64) {
        let pass = (value - expected).abs() <= self.tol;
        self.out.push(Assertion { claim: claim.into(), value, expected: format!("= {expected}"), pass });
    }

    fn ge(&mut self, claim: &str, value: f64, bound: f64) {
        let pass = value >= bound - self.tol;
        self.out.push(Assertion { claim: claim.into(), value, expected: format!(">= {bound}"), pass });
    }

    fn gt(&mut self, claim: &str, value: f64, bound: f64) {
        let pass = value > bound + self.tol;
        self.out.push(Assertion { claim: claim.into(), value, expected: format!("> {bound}"), pass });
    }

    fn flag(&mut self, claim: &str, ok: bool) {
        self.out.push(Assertion { claim: claim.into(), value: ok as u8 as f64, expected: "true".into(), pass: ok });
    }
}

pub fn run_counterexample(name: &str, tol: f64) -> Result<CounterexampleReport> {
    let description =
        COUNTEREXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, d)| d.to_string()).ok_or_else(|| {
            let names: Vec<&str> = COUNTEREXAMPLES.iter().map(|(n, _)| *n).collect();
            Error::Parse(format!("unknown counterexample {name:?}; known: {}", names.join(", ")))
        })?;
    let start = Instant::now();
    let mut c = Checks { tol, out: Vec::new() };
    match name {
        "ordering-poly-vs-nf" => ordering_poly_vs_nf(&mut c)?,
        "profile-vs-polytope" => profile_vs_polytope(&mut c)?,
        "agnostic-ambiguity" => agnostic_ambiguity(&mut c)?,
        "gstar-no-upper-bound" => gstar_no_upper_bound(&mut c)?,
        _ => pce_without_nfce(&mut c)?,
    }
    let pass = c.out.iter().all(|a| a.pass);
    Ok(CounterexampleReport {
        name: name.into(),
        description,
        assertions: c.out,
        pass,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn ordering_poly_vs_nf(c: &mut Checks) -> Result<()> {
    let g = square_game()?;
    let t = square_transcript(4);
    let vcsp = square_vertex_csp(&g)?;
    let phi = csp_of_transcript(&t)?;
    c.eq(
        "vertex transcript projects to the transcript CSP",
        project_vertex_csp(&vcsp, &g)?.matrix.max_abs_diff(&phi.matrix),
        0.0,
    );
    c.eq("polytope swap regret", polytope_swap_regret(&t, &g, Perspective::Learner)?.value, 0.0);
    c.ge("normal-form swap regret", normal_form_swap_regret(&vcsp, &g, Perspective::Learner)?.value, 0.25);
    Ok(())
}

fn profile_vs_polytope(c: &mut Checks) -> Result<()> {
    let g = comp_prof_game();
    let t = comp_prof_transcript();
    let phi = csp_of_transcript(&t)?;
    c.eq("profile swap regret", profile_swap_regret(&phi, &g, Perspective::Learner)?.value, 0.0);
    c.eq("polytope swap regret", polytope_swap_regret(&t, &g, Perspective::Learner)?.value, 0.25);
    Ok(())
}

fn agnostic_ambiguity(c: &mut Checks) -> Result<()> {
    let g = agnostic_game();
    let (t1, t2) = agnostic_transcripts();
    let (r1, r2) = (to_agnostic(&t1, &g), to_agnostic(&t2, &g));
    c.flag("reward transcripts coincide", r1 == r2);
    c.eq(
        "profile swap regret, first transcript",
        profile_swap_regret(&csp_of_transcript(&t1)?, &g, Perspective::Learner)?.value,
        0.0,
    );
    c.eq(
        "profile swap regret, second transcript",
        profile_swap_regret(&csp_of_transcript(&t2)?, &g, Perspective::Learner)?.value,
        0.5,
    );
    Ok(())
}

fn gstar_no_upper_bound(c: &mut Checks) -> Result<()> {
    let g = agnostic_game();
    let (_, t2) = agnostic_transcripts();
    let rt = to_agnostic(&t2, &g);
    let gs = build_gstar(&g.x_set, 2.0)?;
    let ts = gstar_transcript(&rt, &g.x_set)?;
    ts.check_feasible(&gs, 1e-9)?;
    let in_gstar = profile_swap_regret(&csp_of_transcript(&ts)?, &gs, Perspective::Learner)?.value;
    let in_g = profile_swap_regret(&csp_of_transcript(&t2)?, &g, Perspective::Learner)?.value;
    c.eq("profile swap regret in the reward game", in_gstar, 0.0);
    c.gt("profile swap regret in the original game", in_g, 0.0);
    Ok(())
}

fn pce_without_nfce(c: &mut Checks) -> Result<()> {
    let g = gap_game();
    let phi = gap_phi();
    let check = verify_profile_ce(&phi, &g, c.tol)?;
    c.eq("profile swap distance, X", check.distances.x, 0.0);
    c.eq("profile swap distance, Y", check.distances.y, 0.0);
    let target = NfceTarget::Csp(phi.clone());
    for mode in NfceMode::ALL {
        let r = nfce_feasibility(&target, &g, mode)?;
        let feasible = r.status == NfceStatus::Feasible;
        match mode {
            NfceMode::ExactProjection | NfceMode::UtilityProfile => {
                c.flag(&format!("{mode} LP infeasible"), !feasible);
                if let Some(m) = r.certificate_margin {
                    c.gt(&format!("{mode} Farkas certificate margin"), m, 0.0);
                }
            }
            _ => c.flag(&format!("{mode} LP feasible"), feasible),
        }
    }
    let (v1, v2) = (gap_phi_v1(), gap_phi_v2());
    c.eq("first table projects to phi", project_vertex_csp(&v1, &g)?.matrix.max_abs_diff(&phi), 0.0);
    c.eq("second table projects to phi", project_vertex_csp(&v2, &g)?.matrix.max_abs_diff(&phi), 0.0);
    c.eq("first table, X normal-form swap regret", normal_form_swap_regret(&v1, &g, Perspective::Learner)?.value, 0.0);
    c.eq(
        "second table, Y normal-form swap regret",
        normal_form_swap_regret(&v2, &g, Perspective::Optimizer)?.value,
        0.0,
    );
    c.gt("second table, X normal-form swap regret", normal_form_swap_regret(&v2, &g, Perspective::Learner)?.value, 0.0);
    Ok(())
}
