//! `polyswap` command-line frontend.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polyswap::equilibria::{
    compute_profile_ce, lift_simplex_to_nfce, nfce_check, nfce_feasibility, verify_profile_ce, NfceMode, NfceTarget,
};
use polyswap::games::{Perspective, PolytopeGame, Transcript, VertexCsp};
use polyswap::learners::{run_match, write_metrics_csv, AdversaryConfig, LearnerConfig, MatchOptions};
use polyswap::linalg::Mat;
use polyswap::regret::{regret_report_limited, stackelberg_value, vertex_csp_of_rounds, RegretReport};
use polyswap::scenarios::{builtin, run_counterexample, BUILTIN_GAMES, COUNTEREXAMPLES};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyswap", version, about = "Swap regret, learners and equilibria for polytope games")]
struct Cli {
    /// Seed for randomized adversaries (overrides the config seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for pass/fail assertions.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Play a learner against an adversary and write metrics, transcript and summary.
    Simulate {
        /// Match config JSON.
        config: PathBuf,
    },
    /// Regret report of a transcript CSV.
    Regret {
        /// Builtin game name or game JSON path.
        game: String,
        /// Transcript CSV with columns t,x_0..,y_0..
        transcript: PathBuf,
        /// JSON matrix of vertex-pair weights for the normal-form notion.
        #[arg(long)]
        vertex_csp: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Side::Both)]
        perspective: Side,
    },
    /// Compute a profile CE and run the NFCE feasibility LPs on it.
    Equilibrium {
        game: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// NFCE LP mode; repeat for several. Defaults to all four.
        #[arg(long)]
        mode: Vec<NfceMode>,
        /// Check this CSP (JSON matrix) instead of computing one.
        #[arg(long)]
        csp: Option<PathBuf>,
    },
    /// Rebuild a named counterexample and check its claimed values.
    Counterexample {
        /// Registry name, or `all`.
        name: String,
    },
    /// List builtin games and counterexamples.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Learner,
    Optimizer,
    Both,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Fail(String),
}

impl From<polyswap::Error> for CliError {
    fn from(e: polyswap::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SimConfig {
    game: String,
    learner: LearnerConfig,
    adversary: AdversaryConfig,
    #[serde(rename = "T")]
    horizon: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    out_dir: Option<PathBuf>,
    /// Rounds between running profile swap distance evaluations.
    #[serde(default)]
    distance_stride: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Simulate { config } => simulate(&cli, config),
        Cmd::Regret { game, transcript, vertex_csp, perspective } => {
            regret(&cli, game, transcript, vertex_csp.as_deref(), *perspective)
        }
        Cmd::Equilibrium { game, eps, mode, csp } => equilibrium(&cli, game, *eps, mode, csp.as_deref()),
        Cmd::Counterexample { name } => counterexample(&cli, name),
        Cmd::List => list(&cli),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Fail(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// A builtin name or a path to a game JSON file.
fn load_game(spec: &str) -> CliResult<PolytopeGame> {
    if BUILTIN_GAMES.contains(&spec) {
        return Ok(builtin(spec)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Usage(format!(
            "{spec:?} is neither a builtin game ({}) nor a file",
            BUILTIN_GAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path)?;
    PolytopeGame::from_json_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_out(dir: &Path, name: &str, contents: &[u8]) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn emit(cli: &Cli, file: &str, v: &Value, text: impl FnOnce() -> String) -> CliResult<()> {
    if let Some(dir) = &cli.out {
        write_out(dir, file, pretty(v).as_bytes())?;
    }
    if cli.json {
        println!("{}", pretty(v));
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn simulate(cli: &Cli, config: &Path) -> CliResult<()> {
    let cfg: SimConfig = read_json(config)?;
    if cfg.horizon == 0 {
        return Err(CliError::Usage(format!("{}: T must be positive", config.display())));
    }
    let g = load_game(&cfg.game)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    let out = cli.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let small = g.x_set.has_vertices() && g.y_set.has_vertices();
    let stride = match cfg.distance_stride {
        Some(0) => None,
        Some(s) => Some(s),
        None if small => Some(cfg.horizon),
        None => None,
    };
    let m = run_match(&cfg.learner, &cfg.adversary, &g, cfg.horizon, seed, &MatchOptions { distance_stride: stride })?;

    let mut metrics = Vec::new();
    write_metrics_csv(&m.metrics, &mut metrics)?;
    write_out(&out, "metrics.csv", &metrics)?;
    write_out(&out, "transcript.csv", m.transcript.to_csv_string().as_bytes())?;

    let n = cfg.horizon as f64;
    let mean_ul = m.metrics.iter().map(|r| r.u_learner).sum::<f64>() / n;
    let report = if small { Some(report_for(&m.transcript, &g, Perspective::Learner, None, false)?) } else { None };
    let stack = stackelberg_value(&g, Perspective::Learner).ok().map(|s| s.value);
    let summary = json!({
        "game": g.name,
        "learner": cfg.learner,
        "adversary": cfg.adversary,
        "T": cfg.horizon,
        "seed": seed,
        "mean_u_learner": mean_ul,
        "mean_u_optimizer": m.mean_optimizer_utility(),
        "stackelberg_value": stack,
        "final_external_regret": m.metrics.last().map(|r| r.ext_regret_running),
        "final_profile_distance": m.final_distance(),
        "regrets": report.as_ref().map(RegretReport::to_json),
    });
    write_out(&out, "summary.json", pretty(&summary).as_bytes())?;
    if cli.json {
        println!("{}", pretty(&summary));
    } else {
        println!("wrote {}/{{metrics.csv,transcript.csv,summary.json}}", out.display());
        println!("mean optimizer utility {:.6}", m.mean_optimizer_utility());
        if let Some(s) = stack {
            println!("stackelberg value      {s:.6}");
        }
        if let Some(d) = m.final_distance() {
            println!("profile swap distance  {d:.6}");
        }
    }
    Ok(())
}

/// Report for one side. Polytope swap regret solves an LP with one block per
/// round, so it is skipped on long transcripts.
fn report_for(
    t: &Transcript,
    g: &PolytopeGame,
    p: Perspective,
    vcsp: Option<&VertexCsp>,
    want_nf: bool,
) -> CliResult<RegretReport> {
    let mut vc = vcsp.cloned();
    if want_nf && vc.is_none() {
        let alphas = t.xs.iter().map(|x| g.x_set.vertex_weights(x)).collect::<polyswap::Result<Vec<_>>>()?;
        let betas = t.ys.iter().map(|y| g.y_set.vertex_weights(y)).collect::<polyswap::Result<Vec<_>>>()?;
        vc = Some(vertex_csp_of_rounds(&alphas, &betas)?);
    }
    Ok(regret_report_limited(t, g, p, vc.as_ref(), POLYTOPE_SWAP_MAX_ROUNDS)?)
}

const POLYTOPE_SWAP_MAX_ROUNDS: usize = 512;

fn regret(cli: &Cli, game: &str, transcript: &Path, vertex_csp: Option<&Path>, side: Side) -> CliResult<()> {
    let g = load_game(game)?;
    let t = Transcript::read_csv(fs::File::open(transcript)?)?;
    if t.is_empty() {
        return Err(CliError::Usage("transcript has no rounds".into()));
    }
    t.check_feasible(&g, 1e-7)?;
    let vcsp = match vertex_csp {
        Some(p) => Some(VertexCsp::new(read_json::<Mat>(p)?)?),
        None => None,
    };
    let enumerable = g.x_set.has_vertices() && g.y_set.has_vertices();
    if vcsp.is_none() && enumerable {
        eprintln!("warning: no vertex CSP given; normal-form swap regret uses per-round canonical decompositions");
    }
    let sides: &[Perspective] = match side {
        Side::Learner => &[Perspective::Learner],
        Side::Optimizer => &[Perspective::Optimizer],
        Side::Both => &[Perspective::Learner, Perspective::Optimizer],
    };
    let mut out = serde_json::Map::new();
    let mut worst: f64 = 0.0;
    let mut reports = Vec::new();
    for &p in sides {
        let r = report_for(&t, &g, p, vcsp.as_ref(), enumerable)?;
        worst = worst.max(r.ordering_violation());
        out.insert(side_name(p).into(), r.to_json());
        reports.push(r);
    }
    out.insert("ordering_holds".into(), json!(worst <= cli.tol));
    let v = Value::Object(out);
    emit(cli, "regret.json", &v, || {
        let mut s = String::new();
        for r in &reports {
            s += &format!("{}:\n", side_name(r.perspective));
            let names = ["external", "linear swap", "profile swap", "polytope swap", "normal-form swap"];
            for (name, val) in names.iter().zip(r.values()) {
                match val {
                    Some(v) => s += &format!("  {name:<17} {v:.6}\n"),
                    None => s += &format!("  {name:<17} n/a\n"),
                }
            }
        }
        s
    })?;
    if worst > cli.tol {
        return Err(CliError::Fail(format!("regret ordering violated by {worst:.3e}")));
    }
    Ok(())
}

fn side_name(p: Perspective) -> &'static str {
    match p {
        Perspective::Learner => "learner",
        Perspective::Optimizer => "optimizer",
    }
}

fn equilibrium(cli: &Cli, game: &str, eps: f64, modes: &[NfceMode], csp: Option<&Path>) -> CliResult<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage("--eps must lie in (0, 1)".into()));
    }
    let g = load_game(game)?;
    let (phi, distances, pass, horizon) = match csp {
        Some(p) => {
            let phi: Mat = read_json(p)?;
            if phi.rows != g.d_l() || phi.cols != g.d_o() {
                return Err(CliError::Usage(format!("CSP must be {}x{}", g.d_l(), g.d_o())));
            }
            let c = verify_profile_ce(&phi, &g, eps)?;
            (phi, c.distances, c.pass, None)
        }
        None => {
            let r = compute_profile_ce(&g, eps)?;
            (r.csp, r.distances, r.pass, Some(r.horizon))
        }
    };
    let modes: Vec<NfceMode> = if modes.is_empty() { NfceMode::ALL.to_vec() } else { modes.to_vec() };
    let target = NfceTarget::Csp(phi.clone());
    let mut nfce = Vec::new();
    for m in &modes {
        let r = nfce_feasibility(&target, &g, *m)?;
        nfce.push(json!({
            "mode": m.as_str(),
            "status": r.status,
            "vertex_csp": r.vertex_csp.as_ref().map(|v| &v.weights),
            "certificate_margin": r.certificate_margin,
        }));
    }
    let lifted = if g.x_set.is_simplex() && g.y_set.has_vertices() {
        match lift_simplex_to_nfce(&phi, &g) {
            Ok(v) => {
                let check = nfce_check(&v, &g, cli.tol)?;
                Some(
                    json!({ "vertex_csp": v.weights, "x_regret": check.x_regret, "y_regret": check.y_regret, "pass": check.pass }),
                )
            }
            Err(e) => Some(json!({ "error": e.to_string() })),
        }
    } else {
        None
    };
    let v = json!({
        "csp": phi,
        "distances": distances,
        "pass": pass,
        "horizon": horizon,
        "nfce": nfce,
        "lifted_nfce": lifted,
    });
    emit(cli, "equilibrium.json", &v, || {
        let mut s = format!(
            "profile CE {}: distances x {:.3e}, y {:.3e} (eps {eps})\n",
            if pass { "pass" } else { "FAIL" },
            distances.x,
            distances.y
        );
        for e in &nfce {
            s += &format!("  nfce {:<17} {}\n", e["mode"].as_str().unwrap_or(""), e["status"].as_str().unwrap_or(""));
        }
        s
    })?;
    if !pass {
        return Err(CliError::Fail(format!("profile CE distances exceed {eps}")));
    }
    Ok(())
}

fn counterexample(cli: &Cli, name: &str) -> CliResult<()> {
    let names: Vec<&str> = if name == "all" {
        COUNTEREXAMPLES.iter().map(|(n, _)| *n).collect()
    } else if COUNTEREXAMPLES.iter().any(|(n, _)| *n == name) {
        vec![name]
    } else {
        let known: Vec<&str> = COUNTEREXAMPLES.iter().map(|(n, _)| *n).collect();
        return Err(CliError::Usage(format!("unknown counterexample {name:?}; registry: {}", known.join(", "))));
    };
    let mut reports = Vec::new();
    for n in names {
        reports.push(run_counterexample(n, cli.tol)?);
    }
    let v = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
    emit(cli, "counterexample.json", &v, || {
        let mut s = String::new();
        for r in &reports {
            s += &format!("{} {} ({:.3}s)\n", if r.pass { "PASS" } else { "FAIL" }, r.name, r.seconds);
            for a in &r.assertions {
                s += &format!(
                    "  [{}] {}: {} (expected {})\n",
                    if a.pass { "ok" } else { "FAIL" },
                    a.claim,
                    short(a.value),
                    a.expected
                );
            }
        }
        s
    })?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(CliError::Fail(format!("assertions failed in {}", failed.join(", "))));
    }
    Ok(())
}

/// Integers as such, everything else in short scientific notation.
fn short(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e9 {
        format!("{v}")
    } else {
        format!("{v:.4e}")
    }
}

fn list(cli: &Cli) -> CliResult<()> {
    let v = json!({
        "games": BUILTIN_GAMES,
        "counterexamples": COUNTEREXAMPLES.iter().map(|(n, d)| json!({"name": n, "description": d})).collect::<Vec<_>>(),
    });
    if cli.json {
        println!("{}", pretty(&v));
    } else {
        println!("games:");
        for g in BUILTIN_GAMES {
            println!("  {g}");
        }
        println!("counterexamples:");
        for (n, d) in COUNTEREXAMPLES {
            println!("  {n:<22} {d}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_fields() {
        let e = serde_json::from_str::<SimConfig>(
            r#"{"game": "matching-pennies", "learner": {"kind": "ogd_baseline"},
               "adversary": {"policy": "br_to_last"}, "T": 4, "typo": 1}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("typo"));
        assert_eq!(e.line(), 2);
    }

    #[test]
    fn config_parses_minimal() {
        let c: SimConfig = serde_json::from_str(
            r#"{"game": "gap-game", "learner": {"kind": "semisep"}, "adversary": {"policy": "random_vertex"}, "T": 8}"#,
        )
        .unwrap();
        assert_eq!(c.horizon, 8);
        assert_eq!(c.learner, LearnerConfig::Semisep { eta: None });
    }
}
