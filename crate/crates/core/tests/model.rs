use anyon_forge::anyon_model::{verify_modular_data, Law, ModularChecks};
use anyon_forge::{AnyonModel, LabelId};
use num_complex::Complex64;

const DATA: &str = include_str!("../data/z2_defect.json");
const BROKEN: &str = include_str!("../data/broken_unit.json");

/// Fusion multiplicity of a triple product, expanded by brute force over
/// the intermediate channel.
fn triple(m: &AnyonModel, a: LabelId, b: LabelId, c: LabelId, left: bool) -> Vec<u32> {
    let n = m.fusion();
    m.ids()
        .map(|d| {
            m.ids()
                .map(|x| {
                    if left {
                        n.get(a, b, x) * n.get(x, c, d)
                    } else {
                        n.get(b, c, x) * n.get(a, x, d)
                    }
                })
                .sum()
        })
        .collect()
}

#[test]
fn data_file_matches_builtin() {
    let loaded = AnyonModel::from_json_str(DATA).unwrap();
    assert_eq!(loaded, AnyonModel::z2_defect());
}

#[test]
fn fusion_is_associative_exactly() {
    for m in [AnyonModel::toric_code(), AnyonModel::z2_defect()] {
        for a in m.ids() {
            for b in m.ids() {
                for c in m.ids() {
                    assert_eq!(triple(&m, a, b, c, true), triple(&m, a, b, c, false));
                }
            }
        }
        assert!(m.validate().is_valid());
    }
}

#[test]
fn defect_fusion_examples() {
    let m = AnyonModel::z2_defect();
    let names = |a: &str, b: &str| {
        m.fuse(a, b)
            .unwrap()
            .into_iter()
            .map(|o| o.label.0)
            .collect::<Vec<_>>()
    };
    assert_eq!(names("x+", "x+"), ["1", "f"]);
    assert_eq!(names("x+", "x-"), ["e", "m"]);
    assert_eq!(names("e", "x+"), ["x-"]);
    assert_eq!(names("f", "x-"), ["x-"]);
    assert!(m.fuse("x+", "y").is_err());
}

#[test]
fn broken_unit_is_reported() {
    let m = AnyonModel::from_json_str(BROKEN).unwrap();
    assert!(m.validate().violates(Law::Unit));
}

#[test]
fn toric_modular_data_passes() {
    let m = AnyonModel::z2_defect();
    let report = verify_modular_data(&m, ModularChecks { st_cubed: true }).unwrap();
    assert!(report.passed(), "{:?}", report.violations);
    assert!(report.s_symmetric && report.s_unitary && report.s_squared_is_conjugation);
    assert!(report.verlinde_max_deviation < 1e-12);
    assert_eq!(report.st_cubed, Some(true));
}

#[test]
fn trivial_twists_fail_modularity() {
    let mut m = AnyonModel::toric_code();
    m.modular_mut().unwrap().t = vec![Complex64::new(1.0, 0.0); 4];
    let report = verify_modular_data(&m, ModularChecks { st_cubed: true }).unwrap();
    assert_eq!(report.st_cubed, Some(false));
    // The S-only checks are unaffected.
    let report = verify_modular_data(&m, ModularChecks::default()).unwrap();
    assert!(report.passed());
}
