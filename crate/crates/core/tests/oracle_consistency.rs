//! Cross-checks between the transfer-matrix formulas and the
//! exact-enumeration oracle, the diagonal reduction against a full
//! 2×2-matrix pipeline, and compatibility under seeded random probes.

use cayley_qmc::algebra::{PauliOp, ProductObservable};
use cayley_qmc::dynamics::ModelParams;
use cayley_qmc::qmc::{
    boundary_condition, compatibility_residual, evaluate_state, oracle_weights, BcKind,
    FiniteVolumeState,
};
use cayley_qmc::transition::leaf_sigma3_expectation;
use cayley_qmc::tree::{level_vertices, TreeParams, VertexCoord};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(k: u32, theta: f64) -> ModelParams {
    ModelParams::from_theta(k, theta).unwrap()
}

fn sigma_z_at(v: VertexCoord, volume: usize, k: u32) -> ProductObservable {
    let tp = TreeParams::new(k).unwrap();
    ProductObservable::new(volume, [(v, PauliOp::sigma_z())], &tp).unwrap()
}

/// First vertex of a level: the path (1, 1, ..., 1).
fn first_leaf(level: usize) -> VertexCoord {
    let tp = TreeParams::new(2).unwrap();
    VertexCoord::from_path(vec![1; level], &tp).unwrap()
}

#[test]
fn transfer_formula_matches_oracle_enumeration() {
    for (k, theta, levels) in [(2u32, 4.0, 3usize), (2, 5.5, 3), (3, 3.0, 2)] {
        let p = params(k, theta);
        for kind in [BcKind::Gamma, BcKind::Beta] {
            let bc = boundary_condition(&p, kind).unwrap();
            for n in 1..=levels {
                let st = oracle_weights(&p, &bc, n).unwrap();
                let probe = sigma_z_at(first_leaf(n), n, k);
                let from_oracle = evaluate_state(&st, &probe).unwrap();
                let from_formula = leaf_sigma3_expectation(&p, kind, (n - 1) as u32).unwrap();
                assert!(
                    (from_oracle - from_formula).abs() < 1e-9,
                    "k={k} theta={theta} {kind:?} n={n}: oracle {from_oracle} vs formula {from_formula}"
                );
            }
        }
    }
}

#[test]
fn alpha0_leaf_value_is_zero_on_both_routes() {
    let p = params(2, 4.0);
    let bc = boundary_condition(&p, BcKind::Alpha0).unwrap();
    let st = oracle_weights(&p, &bc, 2).unwrap();
    let probe = sigma_z_at(first_leaf(2), 2, 2);
    assert!(evaluate_state(&st, &probe).unwrap().abs() < 1e-12);
    assert_eq!(leaf_sigma3_expectation(&p, BcKind::Alpha0, 1).unwrap(), 0.0);
}

#[test]
fn beta_and_gamma_answers_are_opposite_in_the_oracle() {
    let p = params(2, 4.0);
    let st_b = oracle_weights(&p, &boundary_condition(&p, BcKind::Beta).unwrap(), 2).unwrap();
    let st_g = oracle_weights(&p, &boundary_condition(&p, BcKind::Gamma).unwrap(), 2).unwrap();
    for v in ["0", "1", "1.2", "2.1"] {
        let probe = sigma_z_at(v.parse().unwrap(), 2, 2);
        let vb = evaluate_state(&st_b, &probe).unwrap();
        let vg = evaluate_state(&st_g, &probe).unwrap();
        assert!((vb + vg).abs() < 1e-10, "site {v}: {vb} vs {vg}");
    }
}

/// Random diagonal product observables supported in `Λ_n`, deterministic
/// under the fixed seed.
fn random_diagonal_probes(
    k: u32,
    volume: usize,
    count: usize,
    seed: u64,
) -> Vec<ProductObservable> {
    let tp = TreeParams::new(k).unwrap();
    let mut sites = Vec::new();
    for lev in 0..=volume {
        sites.extend(level_vertices(&tp, lev));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = Vec::with_capacity(count);
    for _ in 0..count {
        let mut listed = Vec::new();
        for v in &sites {
            if rng.random_range(0.0..1.0) < 0.6 {
                let h0: f64 = rng.random_range(-1.0..1.0);
                let h3: f64 = rng.random_range(-1.0..1.0);
                listed.push((v.clone(), PauliOp::from_real(h0, 0.0, 0.0, h3)));
            }
        }
        probes.push(ProductObservable::new(volume, listed, &tp).unwrap());
    }
    probes
}

#[test]
fn compatibility_under_seeded_random_probes() {
    let p = params(2, 4.0);
    let tp = TreeParams::new(2).unwrap();
    let mut probes = Vec::new();
    for lev in 0..=1usize {
        for v in level_vertices(&tp, lev) {
            probes.push(sigma_z_at(v, 1, 2));
        }
    }
    probes.extend(random_diagonal_probes(2, 1, 100, 0x5eed));
    for kind in [BcKind::Alpha0, BcKind::Gamma] {
        let bc = boundary_condition(&p, kind).unwrap();
        let r = compatibility_residual(&p, &bc, 1, &probes).unwrap();
        assert!(r < 1e-10, "{kind:?}: residual {r}");
    }
}

/// Full-matrix evaluation of a (possibly non-diagonal) product observable
/// against the diagonal state weights; the reference pipeline for the
/// diagonal-reduction checks.
fn direct_matrix_eval(st: &FiniteVolumeState, a: &ProductObservable) -> C64 {
    let probes: Vec<(usize, C64, C64)> = a
        .sites()
        .map(|(v, op)| {
            let m = op.to_matrix();
            (st.site_index(v).unwrap(), m[0][0], m[1][1])
        })
        .collect();
    let mut total = C64::new(0.0, 0.0);
    for (conf, &w) in st.weights().iter().enumerate() {
        let mut prod = C64::new(w, 0.0);
        for &(idx, d_plus, d_minus) in &probes {
            prod *= if (conf >> idx) & 1 == 0 {
                d_plus
            } else {
                d_minus
            };
        }
        total += prod;
    }
    total / (1u64 << st.site_count()) as f64
}

#[test]
fn diagonal_reduction_agrees_with_full_matrix_pipeline() {
    let p = params(2, 4.0);
    let tp = TreeParams::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for kind in [BcKind::Alpha0, BcKind::Gamma] {
        let bc = boundary_condition(&p, kind).unwrap();
        let st = oracle_weights(&p, &bc, 1).unwrap();
        for _ in 0..40 {
            let mut listed = Vec::new();
            for lev in 0..=1usize {
                for v in level_vertices(&tp, lev) {
                    if rng.random_range(0.0..1.0) < 0.7 {
                        // self-adjoint with full xy-parts
                        let c: [f64; 4] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
                        listed.push((v, PauliOp::from_real(c[0], c[1], c[2], c[3])));
                    }
                }
            }
            let obs = ProductObservable::new(1, listed, &tp).unwrap();
            let direct = direct_matrix_eval(&st, &obs);
            let reduced = evaluate_state(&st, &obs).unwrap();
            assert!(direct.im.abs() < 1e-12, "imaginary leak {}", direct.im);
            assert!(
                (direct.re - reduced).abs() < 1e-12,
                "direct {} vs reduced {reduced}",
                direct.re
            );
            // evaluating the projected observable is bitwise the same
            let projected = cayley_qmc::algebra::product_diagonal_part(&obs);
            assert_eq!(evaluate_state(&st, &projected).unwrap(), reduced);
        }
        // pure xy observables vanish through the full pipeline as well
        for op in [PauliOp::sigma_x(), PauliOp::sigma_y()] {
            let obs = ProductObservable::new(1, [("1".parse().unwrap(), op)], &tp).unwrap();
            let direct = direct_matrix_eval(&st, &obs);
            assert!(direct.re.abs() < 1e-15 && direct.im.abs() < 1e-15);
            assert_eq!(evaluate_state(&st, &obs).unwrap(), 0.0);
        }
    }
}

#[test]
fn uniqueness_identity_under_random_probes() {
    let p = params(2, 2.5);
    let probes = random_diagonal_probes(2, 2, 50, 7);
    for alpha in [0.5, 2.0] {
        let r = cayley_qmc::qmc::uniqueness_identity(&p, alpha, 2, &probes).unwrap();
        assert!(r < 1e-12, "alpha = {alpha}: residual {r}");
    }
}
