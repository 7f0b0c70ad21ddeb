use std::f64::consts::PI;

use fisheye::specfun::{
    legendre_log_asymptote, legendre_log_constant_scaled, legendre_nu, legendre_nu_expansion_oracle, legendre_poly,
    spherical_harmonic, ComplexDegree,
};
use num_complex::Complex64;
use proptest::prelude::*;

const XS: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 0.99];

#[test]
fn matches_expansion_oracle() {
    for nu in [Complex64::new(7.25, 0.0), Complex64::new(10.5, 0.02)] {
        let deg = ComplexDegree::new(nu).unwrap();
        for x in XS {
            let v = legendre_nu(deg, x).unwrap();
            let o = legendre_nu_expansion_oracle(deg, x, 20_000).unwrap().value;
            assert!((v - o).norm() / v.norm() < 1e-6, "nu {nu} x {x}: {v} vs {o}");
        }
    }
    // integer degree lies outside the oracle's domain; the polynomial is the reference
    let three = ComplexDegree::real(3.0).unwrap();
    for x in XS {
        let v = legendre_nu(three, x).unwrap();
        let p = legendre_poly(3, x).unwrap();
        assert!((v - p).norm() <= 1e-6 * p.abs().max(1.0));
    }
}

#[test]
fn integer_degree_reduces_to_polynomial() {
    for l in 0..=8usize {
        let deg = ComplexDegree::real(l as f64).unwrap();
        for k in 0..50 {
            let x = -0.98 + 1.96 * k as f64 / 49.0;
            let p = legendre_poly(l, x).unwrap();
            let v = legendre_nu(deg, x).unwrap();
            assert!((v - p).norm() <= 1e-10 * p.abs().max(1.0), "l {l} x {x}");
        }
    }
}

#[test]
fn logarithmic_singularity_constant() {
    let nu = ComplexDegree::real(10.5).unwrap();
    let s = nu.sin_pi() / PI;
    let target = legendre_log_constant_scaled(nu).unwrap();
    let err = |w: f64| {
        let x = -1.0 + w;
        let rest = legendre_nu(nu, x).unwrap() - s * (0.5 * w).ln();
        (rest - target).norm() / target.norm()
    };
    let (e4, e5) = (err(1e-4), err(1e-5));
    assert!(e5 < 1e-3, "{e5:e}");
    assert!(e5 < e4);
    let x = -1.0 + 1e-6;
    let a = legendre_log_asymptote(nu, x).unwrap();
    assert!((legendre_nu(nu, x).unwrap() - a).norm() / a.norm() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn addition_theorem(
        l in 0usize..=30,
        t1 in 0.0f64..PI, p1 in 0.0f64..(2.0 * PI),
        t2 in 0.0f64..PI, p2 in 0.0f64..(2.0 * PI),
    ) {
        let lhs: Complex64 = (-(l as i64)..=l as i64)
            .map(|m| spherical_harmonic(l, m, t1, p1).unwrap().conj() * spherical_harmonic(l, m, t2, p2).unwrap())
            .sum();
        let cos12 = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
        let rhs = (2 * l + 1) as f64 / (4.0 * PI) * legendre_poly(l, cos12.clamp(-1.0, 1.0)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10, "l {} lhs {} rhs {}", l, lhs, rhs);
    }
}
