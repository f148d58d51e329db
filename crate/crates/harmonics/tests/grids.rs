//! Harmonic grids, asymptotic constants and the `m6` predictions at full size.

use conewalk_harmonics::{asymptotics, da_predictions, harmonic_grid, HARMONIC_MODELS};

#[test]
fn grids_are_harmonic_positive_and_symmetric() {
    for name in HARMONIC_MODELS {
        let g = harmonic_grid(name, 20, 50).unwrap();
        assert!(g.residual < 1e-25, "{name}: {}", g.residual);
        assert!(g.is_positive(), "{name}");
        assert!(g.is_symmetric(), "{name}");
        assert_eq!(g.value_f64(-3, -1), Some(0.0));
    }
}

#[test]
fn constants_from_counts() {
    let cases: [(&str, Option<(i32, i32)>, f64); 7] = [
        ("kreweras", Some((0, 0)), 0.10),
        ("kreweras", None, 0.15),
        ("reverse-kreweras", None, 0.15),
        ("double-kreweras", None, 0.15),
        ("simple", Some((0, 0)), 0.15),
        ("simple", Some((-1, 0)), 0.15),
        ("diagonal", Some((0, 0)), 0.15),
    ];
    for (name, target, tol) in cases {
        let a = asymptotics(name, target, 150, 50).unwrap();
        assert!(a.rel_err < tol, "{name} {target:?}: {a:?}");
    }
}

#[test]
fn m6_predictions() {
    let r = da_predictions(150, 50).unwrap();
    assert!(r.mu_residual < 1e-40);
    assert!(r.mu.starts_with("4.729"));
    assert!(r.alpha.starts_with("1.39"), "{}", r.alpha);
    assert!(r.gap < 0.05, "{r:?}");
    assert!((r.axis_ratio.0 / r.axis_ratio.1 - 1.0).abs() < 0.05);
    assert!((r.diagonal_ratio.0 / r.diagonal_ratio.1 - 1.0).abs() < 0.05);
    assert!(r.kreweras_kappa.minus_gap < 1e-20 && r.kreweras_kappa.diag_gap < 1e-20);
}
