use std::fs;

use htcs::bench::{build, get_problem, suite, FunctionId, SuiteManifest};
use htcs::Error;

#[test]
fn every_function_attains_its_optimum() {
    let manifest = SuiteManifest::default();
    for dim in [2, 10, 30, 50] {
        for p in suite::<f64>(dim, &manifest).unwrap() {
            let x = p.known_optimizer();
            assert!(x.iter().zip(&p.lower).zip(&p.upper).all(|((v, lo), hi)| lo <= v && v <= hi));
            let err = p.error_of(p.evaluate(&x).unwrap());
            let tol = match p.id {
                FunctionId::Penalized1 | FunctionId::Penalized2 => 1e-30,
                _ => 1e-9,
            };
            assert!(err.abs() <= tol, "{} at D={dim}: {err:e}", p.name());
        }
    }
}

#[test]
fn optimum_is_a_lower_bound_along_random_probes() {
    use htcs::rng::{DrawSource, RandomStream};
    let mut src = RandomStream::new(17);
    for p in suite::<f64>(10, &SuiteManifest::default()).unwrap() {
        for _ in 0..200 {
            let x: Vec<f64> = p
                .lower
                .iter()
                .zip(&p.upper)
                .map(|(lo, hi)| lo + src.uniform_open::<f64>() * (hi - lo))
                .collect();
            let err = p.error_of(p.evaluate(&x).unwrap());
            assert!(err >= -1e-9, "{}: {err:e}", p.name());
        }
    }
}

#[test]
fn synthetic_data_is_reproducible_and_orthogonal() {
    let m = SuiteManifest::default();
    for id in [FunctionId::F3, FunctionId::F7, FunctionId::F8, FunctionId::F10] {
        let a = build::<f64>(id, 10, &m).unwrap();
        let b = build::<f64>(id, 10, &m).unwrap();
        assert_eq!(a.shift, b.shift);
        assert!(a.rotation.as_ref().unwrap().is_orthogonal(1e-12), "{id}");
    }
}

#[test]
fn wrong_length_is_an_error() {
    let p = get_problem::<f64>("F_ras", 5, &SuiteManifest::default()).unwrap();
    assert!(matches!(p.evaluate(&[0.0; 4]), Err(Error::DimensionMismatch { expected: 5, actual: 4 })));
}

#[test]
fn manifest_data_files_drive_shift_and_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let shift: Vec<f64> = (0..100).map(|i| -50.0 + i as f64 * 0.9).collect();
    let text: Vec<String> = shift.iter().map(|v| format!("{v:.17e}")).collect();
    fs::write(dir.path().join("shift.txt"), text.join(" ")).unwrap();

    // A 4×4 permutation-with-signs matrix is orthogonal.
    let rot = "0 1 0 0\n-1 0 0 0\n0 0 0 1\n0 0 1 0\n";
    fs::write(dir.path().join("rot4.txt"), rot).unwrap();
    let big: Vec<String> = (0..6)
        .map(|i| (0..6).map(|j| format!("{}", (i * 7 + j * 3) % 11)).collect::<Vec<_>>().join(" "))
        .collect();
    fs::write(dir.path().join("a6.txt"), big.join("\n")).unwrap();
    let manifest_json = r#"{
        "F1": { "shift": "shift.txt", "bias": -450.0 },
        "F3": { "shift": "shift.txt", "rotation": "rot4.txt" },
        "F5": { "shift": "shift.txt", "rotation": "a6.txt", "bias": -310.0 }
    }"#;
    let path = dir.path().join("manifest.json");
    fs::write(&path, manifest_json).unwrap();
    let manifest = SuiteManifest::load(&path).unwrap();

    let f1 = get_problem::<f64>("F1", 30, &manifest).unwrap();
    assert_eq!(f1.shift.as_deref().unwrap(), &shift[..30]);
    assert_eq!(f1.evaluate(&shift[..30]).unwrap(), -450.0);
    let mut off = shift[..30].to_vec();
    off[3] += 2.0;
    assert_eq!(f1.evaluate(&off).unwrap(), -446.0);

    let f3 = get_problem::<f64>("F3", 4, &manifest).unwrap();
    assert_eq!(f3.shift.as_deref().unwrap(), &shift[..4]);
    assert!(f3.error_of(f3.evaluate(&shift[..4]).unwrap()).abs() < 1e-12);
    assert!(matches!(get_problem::<f64>("F3", 5, &manifest), Err(Error::UnsupportedDimension { .. })));

    let f5 = get_problem::<f64>("F5", 4, &manifest).unwrap();
    let (a, _) = f5.linear.as_ref().unwrap();
    assert_eq!(a.size(), 4);
    assert_eq!(a.row(1), &[7.0, 10.0, 2.0, 5.0]);
    assert_eq!(f5.evaluate(&shift[..4]).unwrap(), -310.0);

    assert!(matches!(get_problem::<f64>("F1", 101, &manifest), Err(Error::UnsupportedDimension { .. })));
}

#[test]
fn manifest_rejects_unknown_names_and_bad_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, r#"{ "F42": {} }"#).unwrap();
    assert!(matches!(SuiteManifest::load(&path), Err(Error::UnknownProblem(_))));

    fs::write(dir.path().join("bad.txt"), "1.0 two 3.0").unwrap();
    fs::write(&path, r#"{ "F2": { "shift": "bad.txt" } }"#).unwrap();
    let m = SuiteManifest::load(&path).unwrap();
    assert!(matches!(get_problem::<f64>("F2", 2, &m), Err(Error::DataFile { .. })));
}

#[test]
fn single_precision_suite_evaluates() {
    for p in suite::<f32>(10, &SuiteManifest::default()).unwrap() {
        let v = p.evaluate(&p.known_optimizer()).unwrap();
        assert!(v.is_finite(), "{}", p.name());
    }
}
