use polyswap::convex::{minimax_bilinear, BiaffinePayoff, Polytope};
use polyswap::equilibria::*;
use polyswap::games::{csp_of_transcript, project_vertex_csp, Csp, Perspective, PolytopeGame, VertexCsp};
use polyswap::linalg::Mat;
use polyswap::regret::{profile_swap_regret, Decomposition, DecompositionPart};
use polyswap::scenarios::random::{random_game, random_game_on, random_matrix, random_point};
use polyswap::scenarios::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_nfce(r: &mut ChaCha8Rng, g: &PolytopeGame) -> VertexCsp {
    let (nx, ny) = (g.x_set.vertices().unwrap().len(), g.y_set.vertices().unwrap().len());
    extreme_nfce(g, &random_matrix(r, nx, ny)).unwrap().expect("finite games have an NFCE")
}

/// Zero-sum game and a mixed Nash equilibrium from its minimax witnesses.
fn zero_sum_with_nash(r: &mut ChaCha8Rng, m: usize, n: usize) -> (PolytopeGame, Vec<f64>, Vec<f64>) {
    let a = random_matrix(r, m, n);
    let g = PolytopeGame::new("zs", Polytope::simplex(m), Polytope::simplex(n), a.clone(), a.scale(-1.0)).unwrap();
    // min_x max_y -x^T A y: x maximizes its guarantee, y minimizes X's best payoff.
    let mm = minimax_bilinear(&BiaffinePayoff::new(a.scale(-1.0), 0.0), &g.x_set, &g.y_set).unwrap();
    (g, mm.x_witness, mm.y_witness)
}

#[test]
fn every_nfce_projects_to_a_profile_ce() {
    let mut r = rng(1);
    for _ in 0..100 {
        let g = random_game(&mut r);
        let e = random_nfce(&mut r, &g);
        assert!(nfce_check(&e, &g, 1e-7).unwrap().pass);
        let phi = project_vertex_csp(&e, &g).unwrap().matrix;
        let check = verify_profile_ce(&phi, &g, 1e-6).unwrap();
        assert!(check.pass, "{:?}", check.distances);
    }
}

#[test]
fn zero_distance_side_has_a_one_sided_lift() {
    let mut r = rng(2);
    for _ in 0..30 {
        let g = random_game(&mut r);
        let phi = project_vertex_csp(&random_nfce(&mut r, &g), &g).unwrap().matrix;
        let check = verify_profile_ce(&phi, &g, 1e-8).unwrap();
        let target = NfceTarget::Csp(phi.clone());
        if check.distances.x <= 1e-8 {
            let res = nfce_feasibility(&target, &g, NfceMode::OneSidedX).unwrap();
            assert_eq!(res.status, NfceStatus::Feasible);
            let lifted = project_vertex_csp(res.vertex_csp.as_ref().unwrap(), &g).unwrap().matrix;
            assert!(lifted.max_abs_diff(&phi) <= 1e-7);
        }
        if check.distances.y <= 1e-8 {
            assert_eq!(nfce_feasibility(&target, &g, NfceMode::OneSidedY).unwrap().status, NfceStatus::Feasible);
        }
    }
}

#[test]
fn purification_keeps_the_profile() {
    let mut r = rng(3);
    for _ in 0..30 {
        let g = random_game(&mut r);
        let k = r.gen_range(1..=4);
        let w: Vec<f64> = (0..k).map(|_| r.gen_range(0.1..1.0)).collect();
        let total: f64 = w.iter().sum();
        let sigma: Vec<(f64, Vec<f64>, Vec<f64>)> = w
            .iter()
            .map(|wi| (wi / total, random_point(&mut r, &g.x_set, 0.3), random_point(&mut r, &g.y_set, 0.3)))
            .collect();
        let mut phi = Mat::zeros(g.d_l(), g.d_o());
        for (p, x, y) in &sigma {
            phi.add_scaled(*p, &Mat::outer(x, y));
        }
        let pure = purify_mediator(&sigma, &g).unwrap();
        assert!(project_vertex_csp(&pure, &g).unwrap().matrix.max_abs_diff(&phi) <= 1e-9);
    }
}

#[test]
fn purified_nash_equilibrium_is_an_nfce() {
    let mut r = rng(4);
    for _ in 0..20 {
        let (g, x, y) = zero_sum_with_nash(&mut r, 3, 3);
        let pure = purify_mediator(&[(1.0, x, y)], &g).unwrap();
        assert!(nfce_check(&pure, &g, 1e-7).unwrap().pass);
    }
    assert!(purify_mediator(&[(0.5, v(1, 1), v(1, 1))], &comp_prof_game()).is_err());
}

#[test]
fn schedule_replays_a_vertex_table() {
    let g = gap_game();
    let vs = g.x_set.vertices().unwrap();
    let e = gap_phi_v1();
    let mut parts = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let weight = e.weights.get(i, j);
            if weight > 0.0 {
                parts.push(DecompositionPart { weight, x: vs[i].clone(), y: vs[j].clone() });
            }
        }
    }
    let d = Decomposition { parts };
    let s = schedule_from_decomposition(&d, 5).unwrap();
    assert_eq!(s.len(), 5);
    for periods in [1, 3] {
        let phi = csp_of_transcript(&s.transcript(5 * periods)).unwrap().matrix;
        assert!(phi.max_abs_diff(&gap_phi()) <= 1e-12);
    }
    assert!(schedule_from_decomposition(&d, 3).is_err());
    assert!(schedule_from_decomposition(&d, 0).is_err());
}

#[test]
fn gap_profile_ce_has_no_exact_lift() {
    let g = gap_game();
    let phi = gap_phi();
    assert!(verify_profile_ce(&phi, &g, 1e-7).unwrap().pass);
    let target = NfceTarget::Csp(phi);
    let exact = nfce_feasibility(&target, &g, NfceMode::ExactProjection).unwrap();
    assert_eq!(exact.status, NfceStatus::Infeasible);
    assert!(exact.certificate_margin.unwrap() > 0.0);
    assert_eq!(nfce_feasibility(&target, &g, NfceMode::OneSidedX).unwrap().status, NfceStatus::Feasible);
    assert_eq!(nfce_feasibility(&target, &g, NfceMode::OneSidedY).unwrap().status, NfceStatus::Feasible);
}

#[test]
fn matching_pennies_self_play_is_near_uniform() {
    let g = matching_pennies();
    let eps = 0.05;
    let ce = compute_profile_ce(&g, eps).unwrap();
    assert!(ce.pass);
    let csp = Csp::new(ce.csp.clone());
    // Matching pennies has a unique CE, and eps-CEs lie near it.
    for m in [csp.marginal_x(&g.y_set).unwrap(), csp.marginal_y(&g.x_set).unwrap()] {
        assert!(m.iter().all(|p| (p - 0.5).abs() <= 2.0 * eps), "{m:?}");
    }
}

#[test]
fn dominated_point_mass_is_not_a_profile_ce() {
    let mut r = rng(5);
    let mut ul = random_matrix(&mut r, 3, 3);
    for j in 0..3 {
        ul.set(0, j, ul.get(1, j) - 0.5);
    }
    let g = PolytopeGame::new("dominated", Polytope::simplex(3), Polytope::simplex(3), ul, random_matrix(&mut r, 3, 3))
        .unwrap();
    let phi = Mat::outer(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]);
    let check = verify_profile_ce(&phi, &g, 1e-6).unwrap();
    assert!(!check.pass);
    assert!(check.distances.x > 0.1);
    assert!(profile_swap_regret(&Csp::new(phi), &g, Perspective::Learner).unwrap().value >= 0.5 - 1e-9);
}

#[test]
fn lift_of_a_nash_product() {
    let mut r = rng(6);
    for _ in 0..20 {
        let (g, x, y) = zero_sum_with_nash(&mut r, 3, 2);
        let phi = Mat::outer(&x, &y);
        let lifted = lift_simplex_to_nfce(&phi, &g).unwrap();
        assert!(project_vertex_csp(&lifted, &g).unwrap().matrix.max_abs_diff(&phi) <= 1e-7);
        assert!(nfce_check(&lifted, &g, 1e-7).unwrap().pass);
    }
    let g = random_game_on(&mut r, Polytope::hypercube_lifted(2), Polytope::simplex(2));
    assert!(lift_simplex_to_nfce(&Mat::zeros(3, 2), &g).is_err());
}

#[test]
fn nfce_mode_names_round_trip() {
    for m in NfceMode::ALL {
        assert_eq!(m.as_str().parse::<NfceMode>().unwrap(), m);
    }
    assert!("both".parse::<NfceMode>().is_err());
}
