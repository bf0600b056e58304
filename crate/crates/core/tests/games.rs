use polyswap::games::{build_game, csp_of_transcript, project_vertex_csp, to_agnostic, GameSpec, Perspective};
use polyswap::linalg::Mat;
use polyswap::regret::profile_swap_regret;
use polyswap::scenarios::*;

const X_TABLE: [[f64; 4]; 4] =
    [[-1.0, -2.0, -3.0, -2.0], [-1.0, -1.0, -2.0, -2.0], [-0.5, -1.5, -3.5, -2.5], [-0.5, -2.5, -4.5, -2.5]];
const Y_TABLE: [[f64; 4]; 4] =
    [[-0.5, -1.5, -1.0, 0.0], [0.5, 0.0, 0.0, 0.5], [1.5, 2.0, 1.5, 1.0], [0.5, 0.5, 0.5, 0.5]];

/// A reference table, rows and columns in `GAP_TABLE_ORDER`, in canonical order.
fn canonical(table: [[f64; 4]; 4]) -> Mat {
    let g = gap_game();
    let vs = g.x_set.vertices().unwrap();
    let perm: Vec<usize> = GAP_TABLE_ORDER.iter().map(|p| index_of(vs, p).unwrap()).collect();
    let mut m = Mat::zeros(4, 4);
    for a in 0..4 {
        for b in 0..4 {
            m.set(perm[a], perm[b], table[a][b]);
        }
    }
    m
}

#[test]
fn gap_vertex_game_matches_reference_tables() {
    let g = gap_game();
    let vg = g.vertex_game().unwrap();
    assert!(vg.u_learner.max_abs_diff(&canonical(X_TABLE)) < 1e-12);
    assert!(vg.u_optimizer.max_abs_diff(&canonical(Y_TABLE)) < 1e-12);
}

#[test]
fn both_reference_vertex_tables_project_to_phi() {
    let g = gap_game();
    for t in [gap_phi_v1(), gap_phi_v2()] {
        assert!(project_vertex_csp(&t, &g).unwrap().matrix.max_abs_diff(&gap_phi()) < 1e-12);
    }
}

#[test]
fn comp_prof_transcript_csp() {
    let t = comp_prof_transcript();
    let mut expected = Mat::zeros(4, 4);
    for (x, y) in [(v(1, 1), v(1, 1)), (v(1, 2), v(1, 2)), (v(2, 1), v(2, 1)), (v(2, 2), v(1, 1))] {
        expected.add_scaled(0.25, &Mat::outer(&x, &y));
    }
    assert!(csp_of_transcript(&t).unwrap().matrix.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn comp_prof_zero_regret_decomposition() {
    // 1/4 (v12 (v12 + v11)^T + v21 (v21 + v11)^T) reproduces the CSP with
    // every part a best response.
    let g = comp_prof_game();
    let phi = csp_of_transcript(&comp_prof_transcript()).unwrap();
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    let mut m = Mat::outer(&v(1, 2), &add(&v(1, 2), &v(1, 1)));
    m.add_scaled(1.0, &Mat::outer(&v(2, 1), &add(&v(2, 1), &v(1, 1))));
    assert!(m.scale(0.25).max_abs_diff(&phi.matrix) < 1e-15);
    assert!(profile_swap_regret(&phi, &g, Perspective::Learner).unwrap().value <= 1e-9);
}

#[test]
fn agnostic_transcripts_share_rewards() {
    let g = agnostic_game();
    let (t1, t2) = agnostic_transcripts();
    assert_eq!(to_agnostic(&t1, &g), to_agnostic(&t2, &g));
    assert!(csp_of_transcript(&t1).unwrap().matrix.max_abs_diff(&csp_of_transcript(&t2).unwrap().matrix) > 0.1);
}

#[test]
fn bayesian_game_uses_product_of_simplices() {
    let blocks = vec![vec![Mat::zeros(2, 2)]; 2];
    let g = build_game(GameSpec::Bayesian {
        m: 2,
        n: 2,
        c_l: 2,
        c_o: 1,
        learner_blocks: blocks.clone(),
        optimizer_blocks: blocks,
        prior: None,
    })
    .unwrap();
    assert_eq!(g.x_set.vertices().unwrap().len(), 4);
    assert!(g.x_set.vertices().unwrap().contains(&v(1, 1)));
}

#[test]
fn gap_game_loads_verbatim() {
    let g = gap_game();
    assert_eq!(g.u_learner.data, GAP_U_X.to_vec());
    assert!(g.vertex_game().unwrap().check_utility_bound().is_err());
}
