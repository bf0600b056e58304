use std::time::Instant;

use polyswap::convex::{max_over_y, minimax_bilinear, minimax_x, BiaffinePayoff, Polytope};
use polyswap::games::{csp_of_transcript, Perspective, PolytopeGame, Transcript};
use polyswap::learners::*;
use polyswap::linalg::{max_abs_diff, norm, Mat};
use polyswap::regret::{instantaneous_regret, profile_swap_distance, stackelberg_value};
use polyswap::scenarios::random::{random_game_on, random_matrix, random_point};
use polyswap::scenarios::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Bayesian game: two learner types with two actions each against a
/// two-action optimizer.
fn bayesian_game(seed: u64) -> PolytopeGame {
    random_game_on(&mut rng(seed), Polytope::product_of_simplices(&[2, 2]), Polytope::simplex(2))
}

fn fixed(y: &[f64], t: usize) -> AdversaryConfig {
    AdversaryConfig::Scripted { actions: Some(vec![y.to_vec(); t]), file: None }
}

/// Drives a semisep learner by hand so its internal state stays inspectable.
fn drive(
    g: &PolytopeGame,
    ys: &[Vec<f64>],
    mut check: impl FnMut(&SemisepLearner, &[f64]),
) -> (SemisepLearner, Transcript) {
    let mut l = SemisepLearner::new(g, ys.len());
    let mut t = Transcript::default();
    let mut prev: Option<Vec<f64>> = None;
    for y in ys {
        let x = l.next_action(prev.as_deref()).unwrap();
        check(&l, &x);
        t.push(x, y.clone());
        prev = Some(y.clone());
    }
    (l, t)
}

#[test]
fn center_payoff_is_response_satisfiable() {
    for g in [gap_game(), comp_prof_game(), matching_pennies(), bayesian_game(1)] {
        let u = PayoffSetU::new(&g).center();
        assert!(matches!(semi_separation_oracle(&u, &g).unwrap(), OracleAnswer::Satisfiable(_)));
    }
}

#[test]
fn oracle_cuts_off_a_non_best_response_functional() {
    // u(x, y) = <x, U_L y> + 0.5 is positive at every best response.
    let g = comp_prof_game();
    let u = BiaffinePayoff::new(g.u_learner.clone(), -0.5);
    match semi_separation_oracle(&u, &g).unwrap() {
        OracleAnswer::Cut { cut, value, .. } => {
            assert!(value > 0.0);
            assert!(cut_is_sound(&cut, &g).unwrap());
            assert!(instantaneous_regret(&cut.x, &cut.y, &g, Perspective::Learner).unwrap() <= 1e-9);
        }
        OracleAnswer::Satisfiable(_) => panic!("expected a cut"),
    }
}

#[test]
fn shell_projection_certifies_its_output() {
    let g = gap_game();
    // All ones is satisfiable once scaled into the ball; the learner's own
    // utility is not and needs cuts.
    let targets = [
        (BiaffinePayoff::new(Mat::from_fn(3, 3, |_, _| 1.0), 1.0), 0),
        (BiaffinePayoff::new(g.u_learner.clone(), -1.0), 1),
    ];
    for (target, min_cuts) in targets {
        let mut uset = PayoffSetU::new(&g);
        let sp = shell_project(&target, &mut uset, &g).unwrap();
        let x = sp.x.expect("certified");
        assert!(sp.cuts_added >= min_cuts);
        assert!(norm(&sp.u.h.data) <= 1.0 + 1e-9);
        assert!(max_over_y(&sp.u, &x, &g.y_set).unwrap() <= 1e-7);
        assert!(uset.cuts.iter().all(|c| cut_is_sound(c, &g).unwrap()));
    }
}

#[test]
fn semisep_plays_certified_actions_and_sound_cuts() {
    let g = bayesian_game(2);
    let mut r = rng(3);
    let ys: Vec<Vec<f64>> = (0..300).map(|_| random_point(&mut r, &g.y_set, 0.5)).collect();
    let (l, _) = drive(&g, &ys, |l, x| {
        if l.round() >= 2 && l.stats.fallbacks == 0 {
            let v = max_over_y(l.payoff(), x, &g.y_set).unwrap();
            assert!(v <= 1e-7, "round {}: {v}", l.round());
            let (mm, _) = minimax_x(l.payoff(), &g.x_set, &g.y_set).unwrap();
            assert!(mm <= 1e-7);
        }
    });
    assert_eq!(l.stats.fallbacks, 0);
    assert!(l.payoff_set().cuts.iter().all(|c| cut_is_sound(c, &g).unwrap()));
}

#[test]
fn semisep_approaches_the_menu_against_a_fixed_action() {
    let g = bayesian_game(4);
    let y = random_point(&mut rng(5), &g.y_set, 0.0);
    let horizon = 1024;
    let (l, t) = drive(&g, &vec![y; horizon], |_, _| {});
    let d = profile_swap_distance(&csp_of_transcript(&t).unwrap(), &g, Perspective::Learner).unwrap().distance;
    assert!(d <= 0.25, "distance {d}");
    assert!(d <= l.dual_regret_bound(horizon) + 1e-9, "{d} above {}", l.dual_regret_bound(horizon));
}

#[test]
fn dual_regret_bound_holds_against_random_play() {
    for seed in 0..3 {
        let g = bayesian_game(10 + seed);
        let mut r = rng(20 + seed);
        let ys: Vec<Vec<f64>> = (0..256).map(|_| random_point(&mut r, &g.y_set, 0.3)).collect();
        let (l, t) = drive(&g, &ys, |_, _| {});
        let d = profile_swap_distance(&csp_of_transcript(&t).unwrap(), &g, Perspective::Learner).unwrap().distance;
        assert!(d <= l.dual_regret_bound(256) + 1e-9);
    }
}

fn blackwell_scale(g: &PolytopeGame) -> f64 {
    2.0 * g.x_set.radius_bound() * g.y_set.radius_bound()
}

#[test]
fn blackwell_rate_against_a_fixed_action() {
    let g = gap_game();
    let y = random_point(&mut rng(6), &g.y_set, 0.0);
    let opts = MatchOptions { distance_stride: Some(1) };
    let m = run_match(&LearnerConfig::MenuBlackwell, &fixed(&y, 512), &g, 512, 0, &opts).unwrap();
    for row in &m.metrics {
        let d = row.profile_dist_running.unwrap();
        assert!(d <= blackwell_scale(&g) / (row.t as f64).sqrt() + 1e-9, "t={} d={d}", row.t);
    }
}

#[test]
fn blackwell_rate_against_random_sequences() {
    let opts = MatchOptions { distance_stride: Some(64) };
    for seed in 0..20 {
        let g = if seed % 2 == 0 { matching_pennies() } else { comp_prof_game() };
        let adv = AdversaryConfig::RandomVertex { seed: Some(seed) };
        let m = run_match(&LearnerConfig::MenuBlackwell, &adv, &g, 256, 0, &opts).unwrap();
        let d = m.final_distance().unwrap();
        assert!(d <= blackwell_scale(&g) / 16.0 + 1e-9, "seed {seed}: {d}");
    }
}

#[test]
fn ogd_starts_at_the_barycenter_and_has_vanishing_external_regret() {
    let mut r = rng(7);
    let g = random_game_on(&mut r, Polytope::product_of_simplices(&[2, 3]), Polytope::simplex(3));
    let mut l = OgdLearner::new(&g);
    assert!(max_abs_diff(&l.next_action(None).unwrap(), &g.x_set.barycenter().unwrap()) <= 1e-12);
    // Projected gradient ascent: average regret <= 1.5 D G / sqrt(T).
    let diam = 2.0 * g.x_set.radius_bound();
    let grad = norm(&g.u_learner.data) * g.y_set.radius_bound();
    for seed in 0..5 {
        let m = run_match(
            &LearnerConfig::OgdBaseline,
            &AdversaryConfig::RandomVertex { seed: Some(seed) },
            &g,
            1024,
            0,
            &MatchOptions::default(),
        )
        .unwrap();
        for row in m.metrics.iter().filter(|r| r.t >= 16) {
            assert!(row.ext_regret_running <= 1.5 * diam * grad / (row.t as f64).sqrt() + 1e-9);
        }
    }
}

#[test]
fn stackelberg_commitment_in_a_zero_sum_game_is_minimax() {
    let mut r = rng(8);
    for _ in 0..10 {
        let ul = random_matrix(&mut r, 3, 3);
        let g =
            PolytopeGame::new("zs", Polytope::simplex(3), Polytope::simplex(3), ul.clone(), ul.scale(-1.0)).unwrap();
        let y = match Adversary::stackelberg_fixed(&g).unwrap() {
            Adversary::StackelbergFixed(y) => y,
            _ => unreachable!(),
        };
        let learner_gain = g.x_set.maximize(&g.u_learner.mul_vec(&y)).unwrap().0;
        let v = minimax_bilinear(&BiaffinePayoff::new(ul.transpose(), 0.0), &g.y_set, &g.x_set).unwrap().value;
        assert!((learner_gain - v).abs() <= 1e-7, "{learner_gain} vs {v}");
        assert!((stackelberg_value(&g, Perspective::Learner).unwrap().value + v).abs() <= 1e-7);
    }
}

#[test]
fn br_to_last_against_a_constant_learner_is_constant() {
    let g = gap_game();
    let x = g.x_set.vertices().unwrap()[1].clone();
    let learner = LearnerConfig::Scripted { actions: Some(vec![x; 50]), file: None };
    let m = run_match(&learner, &AdversaryConfig::BrToLast, &g, 50, 0, &MatchOptions::default()).unwrap();
    assert!(m.transcript.ys[1..].windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn random_vertex_is_reproducible_and_plays_vertices() {
    let g = comp_prof_game();
    let play = |seed| {
        let mut a = Adversary::random_vertex(&g, seed).unwrap();
        (0..100).map(|_| a.next_action(None).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(play(9), play(9));
    assert_ne!(play(9), play(10));
    let vs = g.y_set.vertices().unwrap();
    assert!(play(9).iter().all(|y| vs.contains(y)));
}

#[test]
fn fully_scripted_match_replays_both_scripts() {
    let t = comp_prof_transcript();
    let learner = LearnerConfig::Scripted { actions: Some(t.xs.clone()), file: None };
    let adv = AdversaryConfig::Scripted { actions: Some(t.ys.clone()), file: None };
    let m = run_match(&learner, &adv, &comp_prof_game(), 4, 0, &MatchOptions::default()).unwrap();
    assert_eq!(m.transcript, t);
    assert!(run_match(&learner, &adv, &comp_prof_game(), 5, 0, &MatchOptions::default()).is_err());
}

#[test]
fn long_semisep_match_finishes_quickly() {
    let g = gap_game();
    let start = Instant::now();
    let cfg = LearnerConfig::Semisep { eta: None };
    let m =
        run_match(&cfg, &AdversaryConfig::StackelbergFixed, &g, 4096, 0, &MatchOptions { distance_stride: Some(4096) })
            .unwrap();
    assert!(start.elapsed().as_secs_f64() < 60.0);
    assert_eq!(m.transcript.len(), 4096);
    assert!(m.final_distance().unwrap() <= 0.1);
}
