use std::f64::consts::PI;

use approx::assert_relative_eq;
use fisheye::lens::{radial_mean_index, LensConfig};
use fisheye::plasmon::{
    average_absorption, dispersion_residual, end_to_end_estimate, index_sweep, lens_height_profile, PlasmonStack,
};
use num_complex::Complex64;

fn lens() -> LensConfig {
    LensConfig::with_radius(1.749, 0.1).unwrap()
}

#[test]
fn sweep_residuals_and_monotone_index() {
    let s = PlasmonStack::silver_737();
    let sweep = index_sweep(&s, 200.0, 0.5).unwrap();
    for p in &sweep {
        assert!(dispersion_residual(p.n_eff, p.height, &s).norm() < 1e-10 * s.k0());
        assert!(p.n_eff.re >= 1.0 && p.n_eff.im >= 0.0);
        // losses grow with confinement above the bare plasmon
        assert!(p.n_eff.im >= sweep[0].n_eff.im);
    }
    for w in sweep.windows(2) {
        assert!(w[1].n_eff.re > w[0].n_eff.re - 1e-6);
    }
    let (first, last) = (sweep[0].n_eff.re, sweep.last().unwrap().n_eff.re);
    assert!((first - 1.02).abs() < 0.01 && (last - 2.0).abs() < 0.05, "{first} {last}");
}

#[test]
fn analytic_limits() {
    let s = PlasmonStack::silver_737();
    let sweep = index_sweep(&s, 1000.0, 10.0).unwrap();
    assert!((sweep[0].n_eff - s.bare_index()).norm() < 1e-6);
    assert!((sweep.last().unwrap().n_eff - s.thick_film_index()).norm() < 1e-3);
}

#[test]
fn radial_mean_index_is_half_pi() {
    assert!((radial_mean_index(&lens(), 64) - PI / 2.0).abs() < 1e-6);
}

#[test]
fn height_profile_shape() {
    let s = PlasmonStack::silver_737();
    let p = lens_height_profile(&lens(), &s, 201).unwrap();
    assert_relative_eq!(p[0].height, 195.723649037, max_relative = 1e-8);
    assert_eq!(p.last().unwrap().height, 0.0);
    for w in p.windows(2) {
        assert!(w[1].height <= w[0].height);
    }
}

#[test]
fn absorption_average() {
    // independent high-precision evaluation, 1001 trapezoid samples
    let s = PlasmonStack::silver_737();
    let a = average_absorption(&lens(), &s, 1001).unwrap();
    assert_relative_eq!(a, 3.1538089677e-3, max_relative = 1e-6);
    let fine = average_absorption(&lens(), &s, 2001).unwrap();
    assert!((fine / a - 1.0).abs() < 1e-3);
    assert!(average_absorption(&lens(), &s, 999).is_err());
}

#[test]
fn lossless_metal_absorbs_nothing() {
    let s = PlasmonStack::new(Complex64::new(-25.23, 0.0), 3.6, 737.0).unwrap();
    assert!(average_absorption(&lens(), &s, 1000).unwrap().abs() < 1e-12);
}

#[test]
fn recomputed_budget() {
    let e = end_to_end_estimate(&lens(), &PlasmonStack::silver_737(), 0.95, 3.0, 1001).unwrap();
    assert_relative_eq!(e.alpha_mirror, 0.05 / (4.0 * PI * (PI / 2.0) * 1.749), max_relative = 1e-9);
    assert!(e.fidelity > 0.74 && e.fidelity < 0.77, "{}", e.fidelity);
}
