use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

use anyon_forge::consistency::{
    hexagon_reductions, pentagon_sweep, solve_defect_f, solve_defect_r, DefectR, FSymbolSet,
};
use anyon_forge::linalg::{Mat2, C64};
use anyon_forge::{AnyonModel, LabelId};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{−iπ/8}·diag(1, i)`, the exchange matrix quoted for the defects.
fn published_r() -> [C64; 2] {
    let w = C64::from_polar(1.0, -FRAC_PI_8);
    [w, w * c(0.0, 1.0)]
}

#[test]
fn solved_f_is_normalized_hadamard() {
    let m = solve_defect_f().matrix;
    let h = FRAC_1_SQRT_2;
    let expected = [[h, h], [h, -h]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((m[(i, j)] - c(expected[i][j], 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn canonical_r_is_eighth_root_phase() {
    let sol = solve_defect_r(&solve_defect_f().matrix).unwrap();
    let [r1, rf] = published_r();
    assert!((sol.canonical.vacuum - r1).norm() < 1e-12);
    assert!((sol.canonical.fermion - rf).norm() < 1e-12);
}

#[test]
fn b_matrix_by_hand() {
    // B_jk = Σ_l H_jl R_l H_lk with H = [[1,1],[1,-1]]/√2, written out.
    let [r1, rf] = published_r();
    let b00 = (r1 + rf) * 0.5;
    let b01 = (r1 - rf) * 0.5;
    let b11 = (r1 + rf) * 0.5;
    let expected = C64::from_polar(1.0, FRAC_PI_8) * FRAC_1_SQRT_2;
    assert!((b00 - expected).norm() < 1e-12);
    assert!((b11 - expected).norm() < 1e-12);
    assert!((b01 - expected * c(0.0, -1.0)).norm() < 1e-12);

    let rep = anyon_forge::DefectRepresentation::solved();
    let b = rep.bmatrix();
    for (got, want) in [
        (b[(0, 0)], b00),
        (b[(0, 1)], b01),
        (b[(1, 0)], b01),
        (b[(1, 1)], b11),
    ] {
        assert!((got - want).norm() < 1e-12);
    }
}

#[test]
fn reduced_hexagon_forms() {
    // With F = H the four χχχ instances read
    //   R1² = (1 + X)/√2,  Rf² = −(1 + X)/√2,  R1·Rf = (1 − X)/√2.
    let [r1, rf] = published_r();
    let x = c(0.0, -1.0);
    let s = FRAC_1_SQRT_2;
    assert!((r1 * r1 - (x + 1.0) * s).norm() < 1e-12);
    assert!((rf * rf + (x + 1.0) * s).norm() < 1e-12);
    assert!((r1 * rf - (-x + 1.0) * s).norm() < 1e-12);

    let f = solve_defect_f().matrix;
    let sol = DefectR {
        vacuum: r1,
        fermion: rf,
        twist_fermion: x,
    };
    for r in hexagon_reductions(&f, &sol) {
        assert!(r < 1e-12);
    }
}

#[test]
fn trivial_fermion_sign_breaks_pentagon() {
    let m = AnyonModel::z2_defect();
    let f = FSymbolSet::for_defect_model(&m, &solve_defect_f().matrix, 1.0).unwrap();
    let sweep = pentagon_sweep(&m, &f).unwrap();
    assert!(sweep.max_residual > 1.0);
}

#[test]
fn flipped_corner_breaks_pentagon() {
    let m = AnyonModel::z2_defect();
    let mut block = solve_defect_f().matrix;
    block[(1, 1)] = c(FRAC_1_SQRT_2, 0.0);
    let f = FSymbolSet::for_defect_model(&m, &block, -1.0).unwrap();
    assert!(pentagon_sweep(&m, &f).unwrap().max_residual > 0.5);
}

fn gauge_from(phases: &[f64], rank: usize) -> impl Fn(LabelId, LabelId, LabelId) -> C64 + '_ {
    move |a, b, c| C64::from_polar(1.0, phases[(a.0 * rank + b.0) * rank + c.0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pentagon_is_gauge_invariant(phases in prop::collection::vec(0.0..std::f64::consts::TAU, 216)) {
        let m = AnyonModel::z2_defect();
        let f = FSymbolSet::for_defect_model(&m, &solve_defect_f().matrix, -1.0).unwrap();
        let gauged = f.gauge_transform(gauge_from(&phases, m.rank()));
        let sweep = pentagon_sweep(&m, &gauged).unwrap();
        prop_assert!(sweep.max_residual < 1e-12);

        // The fermion sign on F^{fχf}_χ cannot be gauged away.
        let [ff, x] = ["f", "x+"].map(|n| m.id(n).unwrap());
        let key = [ff, x, ff, x, x, x];
        prop_assert!((gauged.entry(&key).unwrap() - f.entry(&key).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn solver_accepts_gauge_rotated_block() {
    // A phase on the off-diagonal pair keeps |F1f·Ff1| and the hexagon data.
    let h = solve_defect_f().matrix;
    let g = C64::from_polar(1.0, 0.4);
    let rotated = Mat2::new(h[(0, 0)], h[(0, 1)] * g, h[(1, 0)] / g, h[(1, 1)]);
    let sol = solve_defect_r(&rotated).unwrap();
    assert_eq!(sol.solutions.len(), 4);
}
