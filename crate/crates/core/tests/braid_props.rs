use std::f64::consts::FRAC_1_SQRT_2;

use anyon_forge::braid::{
    compile, equiv_up_to_phase, grover_braid_for, simulate, BraidWord, GateName,
};
use anyon_forge::linalg::{max_abs_diff, Mat4, C64};
use anyon_forge::{DefectRepresentation, FusionBasisState};
use nalgebra::Vector4;
use proptest::prelude::*;

fn rep() -> DefectRepresentation {
    DefectRepresentation::solved()
}

fn word(max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec((1i64..=5, prop_oneof![-2i64..=-1, 1i64..=2]), 0..=max_len)
        .prop_map(|t| BraidWord::new(t).unwrap())
}

fn state() -> impl Strategy<Value = FusionBasisState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let amps = Vector4::from_iterator(v.into_iter().map(|(a, b)| C64::new(a, b)));
            let norm = amps.norm();
            FusionBasisState::new(amps / C64::new(norm, 0.0))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn compile_is_a_homomorphism(a in word(50), b in word(50)) {
        let rep = rep();
        let joined = compile(&rep, &a.concat(&b)).unwrap();
        let product = compile(&rep, &a).unwrap() * compile(&rep, &b).unwrap();
        prop_assert!(max_abs_diff(&joined, &product) < 1e-12);
    }

    #[test]
    fn inverse_cancels(w in word(50)) {
        let rep = rep();
        let u = compile(&rep, &w.concat(&w.inverse())).unwrap();
        prop_assert!(max_abs_diff(&u, &Mat4::identity()) < 1e-10);
    }

    #[test]
    fn simulate_preserves_norm(w in word(50), psi in state()) {
        let out = simulate(&rep(), &w, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_format_round_trips(w in word(20)) {
        let rep = rep();
        let parsed = BraidWord::parse(&w.to_string()).unwrap();
        prop_assert_eq!(parsed.crossings(), w.crossings());
        prop_assert!(max_abs_diff(&compile(&rep, &parsed).unwrap(), &compile(&rep, &w).unwrap()) < 1e-12);
    }
}

fn gate(rep: &DefectRepresentation, g: GateName) -> Mat4 {
    compile(rep, &g.word()).unwrap()
}

#[test]
fn gate_algebra() {
    let rep = rep();
    let [x1, z1, h1, cz] =
        [GateName::X1, GateName::Z1, GateName::H1, GateName::CZ].map(|g| gate(&rep, g));
    assert!(
        equiv_up_to_phase(&(h1 * z1 * h1), &x1, 1e-10)
            .unwrap()
            .equivalent
    );
    assert!(
        equiv_up_to_phase(&(cz * cz), &Mat4::identity(), 1e-10)
            .unwrap()
            .equivalent
    );
    assert!(max_abs_diff(&(x1 * z1), &(-(z1 * x1))) < 1e-12);
    assert!(
        equiv_up_to_phase(&(x1 * z1 * x1 * z1), &(-Mat4::identity()), 1e-10)
            .unwrap()
            .equivalent
    );
}

/// Textbook two-qubit Grover iteration from |00⟩ with plain arrays.
fn grover_oracle(target: usize) -> [f64; 4] {
    let h = 0.5; // entries of H⊗H are ±1/2
    let hh = |v: [f64; 4]| -> [f64; 4] {
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, x) in v.iter().enumerate() {
                let sign = if (r & c).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                *o += h * sign * x;
            }
        }
        out
    };
    let mut v = hh([1.0, 0.0, 0.0, 0.0]);
    v[target] = -v[target];
    // Diffusion 2|s⟩⟨s| − I.
    let mean = v.iter().sum::<f64>() / 4.0;
    let v = v.map(|x| 2.0 * mean - x);
    v.map(|x| x * x)
}

#[test]
fn grover_matches_statevector_oracle() {
    let rep = rep();
    for target in 0..4 {
        let expected = grover_oracle(target);
        let run = grover_braid_for(&rep, target).unwrap();
        for (p, q) in run.measurement.distribution.iter().zip(expected) {
            assert!((p - q).abs() < 1e-9);
        }
        assert!((run.measurement.distribution[target] - 1.0).abs() < 1e-9);
    }
}

#[test]
fn hadamard_word_prepares_plus() {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let zero = C64::new(0.0, 0.0);
    let plus = FusionBasisState::new(Vector4::new(h, zero, h, zero));
    let out = simulate(&rep(), &GateName::H1.word(), &FusionBasisState::basis(0)).unwrap();
    assert!((out.overlap(&plus) - 1.0).abs() < 1e-12);
}
