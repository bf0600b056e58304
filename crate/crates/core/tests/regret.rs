use polyswap::convex::{minimax_bilinear, BiaffinePayoff, Polytope};
use polyswap::games::{
    build_gstar, csp_of_transcript, gstar_transcript, reward_range, to_agnostic, Csp, Perspective, PolytopeGame,
};
use polyswap::linalg::{dot, Mat};
use polyswap::regret::*;
use polyswap::scenarios::random::{random_game, random_matrix, random_normal_form, random_point, random_transcript};
use polyswap::scenarios::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn comp_prof_profile_zero_polytope_quarter() {
    let g = comp_prof_game();
    let t = comp_prof_transcript();
    let phi = csp_of_transcript(&t).unwrap();
    assert!(profile_swap_regret(&phi, &g, Perspective::Learner).unwrap().value <= 1e-9);
    assert!((polytope_swap_regret(&t, &g, Perspective::Learner).unwrap().value - 0.25).abs() <= 1e-9);
}

#[test]
fn agnostic_transcripts_differ_in_profile_regret() {
    let g = agnostic_game();
    let (t1, t2) = agnostic_transcripts();
    let r1 = profile_swap_regret(&csp_of_transcript(&t1).unwrap(), &g, Perspective::Learner).unwrap();
    let r2 = profile_swap_regret(&csp_of_transcript(&t2).unwrap(), &g, Perspective::Learner).unwrap();
    assert!(r1.value <= 1e-9);
    assert!((r2.value - 0.5).abs() <= 1e-9);
}

#[test]
fn instantaneous_regret_of_v22_against_w114() {
    let g = agnostic_game();
    let y = w(1, 1, 4);
    let brute = [v(1, 1), v(1, 2), v(2, 1), v(2, 2)].iter().map(|x| g.u_l(x, &y)).fold(f64::MIN, f64::max);
    let r = instantaneous_regret(&v(2, 2), &y, &g, Perspective::Learner).unwrap();
    assert!((r - (brute - g.u_l(&v(2, 2), &y))).abs() < 1e-12);
    assert!((r - 2.0).abs() < 1e-12);
    assert_eq!(best_response(&y, &g, Perspective::Learner).unwrap(), v(1, 1));
}

#[test]
fn square_game_polytope_zero_normal_form_quarter() {
    let g = square_game().unwrap();
    let t = square_transcript(8);
    assert!(polytope_swap_regret(&t, &g, Perspective::Learner).unwrap().value <= 1e-9);
    let t4 = square_transcript(4);
    assert_eq!(t4.len(), 4);
    let vc = square_vertex_csp(&g).unwrap();
    assert!(normal_form_swap_regret(&vc, &g, Perspective::Learner).unwrap().value >= 0.25 - 1e-9);
    assert!(linear_swap_regret(&csp_of_transcript(&t).unwrap(), &g, Perspective::Learner).unwrap().value <= 1e-9);
}

#[test]
fn gap_vertex_tables_one_sided() {
    let g = gap_game();
    let x1 = normal_form_swap_regret(&gap_phi_v1(), &g, Perspective::Learner).unwrap().value;
    assert!(x1 <= 1e-9);
    let x2 = normal_form_swap_regret(&gap_phi_v2(), &g, Perspective::Learner).unwrap();
    let y2 = normal_form_swap_regret(&gap_phi_v2(), &g, Perspective::Optimizer).unwrap().value;
    assert!(x2.value > 1e-3);
    assert!(y2 <= 1e-9);
    // The profitable deviation sends [1,1,1] to [0,1,1].
    let vs = g.x_set.vertices().unwrap();
    let from = index_of(vs, &[1.0, 1.0, 1.0]).unwrap();
    let to = index_of(vs, &[0.0, 1.0, 1.0]).unwrap();
    assert_eq!(x2.swap[from], to);
}

/// Classic swap regret of a normal-form CSP by enumerating all `m^m` swap maps.
fn brute_swap(phi: &Mat, u: &Mat) -> f64 {
    let m = phi.rows;
    let base: f64 = (0..m).map(|i| dot(phi.row(i), u.row(i))).sum();
    let mut best = base;
    let total = m.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut val = 0.0;
        for i in 0..m {
            let j = c % m;
            c /= m;
            val += dot(phi.row(i), u.row(j));
        }
        best = best.max(val);
    }
    best - base
}

#[test]
fn three_action_swap_notions_match_brute_force() {
    let mut r = rng(1);
    for _ in 0..30 {
        let g = {
            let n = r.gen_range(2..=4);
            random_normal_form(&mut r, 3, n)
        };
        let t = {
            let n = r.gen_range(1..=10);
            random_transcript(&mut r, &g, n)
        };
        let phi = csp_of_transcript(&t).unwrap();
        let brute = brute_swap(&phi.matrix, &g.u_learner);
        let lin = linear_swap_regret(&phi, &g, Perspective::Learner).unwrap().value;
        let prof = profile_swap_regret(&phi, &g, Perspective::Learner).unwrap().value;
        assert!((lin - brute).abs() <= 1e-7, "{lin} vs {brute}");
        assert!((prof - brute).abs() <= 1e-7, "{prof} vs {brute}");
    }
}

#[test]
fn external_regret_matches_vertex_scan() {
    let mut r = rng(2);
    for _ in 0..50 {
        let g = random_game(&mut r);
        let t = {
            let n = r.gen_range(1..=10);
            random_transcript(&mut r, &g, n)
        };
        let phi = csp_of_transcript(&t).unwrap();
        let n = t.len() as f64;
        let mean: f64 = t.xs.iter().zip(&t.ys).map(|(x, y)| g.u_l(x, y)).sum::<f64>() / n;
        let ybar: Vec<f64> = (0..g.d_o()).map(|k| t.ys.iter().map(|y| y[k]).sum::<f64>() / n).collect();
        let best = g.x_set.vertices().unwrap().iter().map(|v| g.u_l(v, &ybar)).fold(f64::MIN, f64::max);
        let ext = external_regret(&phi, &g, Perspective::Learner).unwrap().value;
        assert!((ext - (best - mean).max(0.0)).abs() <= 1e-9);
    }
}

#[test]
fn sampled_swap_maps_never_beat_the_profile_lp() {
    let mut r = rng(3);
    for _ in 0..20 {
        let g = random_game(&mut r);
        let t = {
            let n = r.gen_range(1..=8);
            random_transcript(&mut r, &g, n)
        };
        let phi = csp_of_transcript(&t).unwrap();
        let res = profile_swap_regret(&phi, &g, Perspective::Learner).unwrap();
        let vs = g.x_set.vertices().unwrap();
        let mut best_sampled: f64 = 0.0;
        for _ in 0..1000 {
            let pi: Vec<usize> = (0..res.decomposition.parts.len()).map(|_| r.gen_range(0..vs.len())).collect();
            let gain: f64 = res
                .decomposition
                .parts
                .iter()
                .zip(&pi)
                .map(|(p, &k)| p.weight * (g.u_l(&vs[k], &p.y) - g.u_l(&p.x, &p.y)))
                .sum();
            best_sampled = best_sampled.max(gain);
        }
        assert!(best_sampled <= res.value + 1e-7);
        let pointwise: f64 = res
            .decomposition
            .parts
            .iter()
            .map(|p| p.weight * instantaneous_regret(&p.x, &p.y, &g, Perspective::Learner).unwrap())
            .sum();
        assert!((pointwise - res.value).abs() <= 1e-7);
    }
}

#[test]
fn stackelberg_of_constant_and_zero_sum_games() {
    let mut r = rng(4);
    for _ in 0..20 {
        let x = Polytope::simplex(r.gen_range(2..=4));
        let y = Polytope::simplex(r.gen_range(2..=4));
        let c = r.gen_range(-1.0..1.0);
        let ul = random_matrix(&mut r, x.dim(), y.dim());
        let g =
            PolytopeGame::new("c", x.clone(), y.clone(), ul.clone(), Mat::from_fn(x.dim(), y.dim(), |_, _| c)).unwrap();
        assert!((stackelberg_value(&g, Perspective::Learner).unwrap().value - c).abs() <= 1e-9);
        let zs = PolytopeGame::new("zs", x.clone(), y.clone(), ul.clone(), ul.scale(-1.0)).unwrap();
        // The optimizer gets -min_y max_x u_L.
        let v = minimax_bilinear(&BiaffinePayoff::new(ul.transpose(), 0.0), &y, &x).unwrap().value;
        assert!((stackelberg_value(&zs, Perspective::Learner).unwrap().value + v).abs() <= 1e-7);
    }
}

#[test]
fn gap_game_stackelberg_matches_grid() {
    let g = gap_game();
    let lp = stackelberg_value(&g, Perspective::Learner).unwrap().value;
    let vs = g.x_set.vertices().unwrap();
    let mut grid = f64::MIN;
    for i in 0..=100 {
        for j in 0..=100 {
            let y = [i as f64 / 100.0, j as f64 / 100.0, 1.0];
            let pay: Vec<f64> = vs.iter().map(|v| g.u_l(v, &y)).collect();
            let top = pay.iter().cloned().fold(f64::MIN, f64::max);
            let opt = vs
                .iter()
                .zip(&pay)
                .filter(|(_, p)| **p >= top - 1e-9)
                .map(|(v, _)| g.u_o(v, &y))
                .fold(f64::MIN, f64::max);
            grid = grid.max(opt);
        }
    }
    assert!(grid <= lp + 1e-9);
    assert!(lp - grid <= 1e-2, "{lp} vs grid {grid}");
}

#[test]
fn agnostic_regrets_match_reward_transcripts() {
    let mut r = rng(5);
    for _ in 0..30 {
        let g = random_game(&mut r);
        let t = {
            let n = r.gen_range(1..=8);
            random_transcript(&mut r, &g, n)
        };
        let rt = to_agnostic(&t, &g);
        let phi = csp_of_transcript(&t).unwrap();
        let p = Perspective::Learner;
        let pairs = [
            (external_regret(&phi, &g, p).unwrap().value, external_regret_rewards(&rt, &g.x_set).unwrap().value),
            (linear_swap_regret(&phi, &g, p).unwrap().value, linear_swap_regret_rewards(&rt, &g.x_set).unwrap().value),
            (
                polytope_swap_regret(&t, &g, p).unwrap().value,
                polytope_swap_regret_rewards(&rt, &g.x_set).unwrap().value,
            ),
        ];
        for (a, b) in pairs {
            assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn optimizer_full_rank_bound() {
    let mut r = rng(6);
    let mut tested = 0;
    while tested < 50 {
        let g = random_game(&mut r);
        let cols: Vec<Vec<f64>> = (0..g.d_o()).map(|k| (0..g.d_l()).map(|i| g.u_learner.get(i, k)).collect()).collect();
        if polyswap::linalg::rank(&cols, 1e-9) < g.d_o() {
            continue;
        }
        tested += 1;
        let t = {
            let n = r.gen_range(1..=6);
            random_transcript(&mut r, &g, n)
        };
        let rt = to_agnostic(&t, &g);
        let gs = build_gstar(&g.x_set, reward_range(&g).unwrap()).unwrap();
        let ts = gstar_transcript(&rt, &g.x_set).unwrap();
        let in_g = profile_swap_regret(&csp_of_transcript(&t).unwrap(), &g, Perspective::Learner).unwrap().value;
        let in_gs = profile_swap_regret(&csp_of_transcript(&ts).unwrap(), &gs, Perspective::Learner).unwrap().value;
        assert!(in_g <= in_gs + 1e-6, "{in_g} > {in_gs}");
    }
}

#[test]
fn best_response_products_have_zero_regret_and_distance() {
    let mut r = rng(7);
    for _ in 0..30 {
        let g = random_game(&mut r);
        let y = random_point(&mut r, &g.y_set, 0.3);
        let x = best_response(&y, &g, Perspective::Learner).unwrap();
        let phi = Csp::product(&x, &y);
        assert!(profile_swap_regret(&phi, &g, Perspective::Learner).unwrap().value <= 1e-9);
        assert!(profile_swap_distance(&phi, &g, Perspective::Learner).unwrap().distance <= 1e-6);
    }
}

#[test]
fn distance_shrinks_under_a_push_off_the_menu() {
    let g = matching_pennies();
    // e1 e1^T is a best-response product; pushing along e1 (e2 - e1)^T leaves
    // the menu by at most the push length.
    let base = Mat::outer(&[1.0, 0.0], &[1.0, 0.0]);
    let dir = Mat::outer(&[1.0, 0.0], &[-1.0, 1.0]).scale(1.0 / 2f64.sqrt());
    let mut phi = base.clone();
    phi.add_scaled(0.1, &dir);
    let d = profile_swap_distance(&Csp::new(phi), &g, Perspective::Learner).unwrap().distance;
    assert!(d > 0.0 && d <= 0.1 + 1e-9, "{d}");
}
