use fisheye::lens::{DiskPoint, LensConfig};
use fisheye::qed::{
    coupling_rates, entanglement_fidelity, lossless_shift, rates_modesum_oracle, trajectory, AtomPairConfig,
};
use proptest::prelude::*;

fn lens(nu: f64, alpha: f64) -> LensConfig {
    LensConfig::new(LensConfig::radius_for_degree(nu, 1.0), 1.0, 0.1, alpha).unwrap()
}

fn error(nu: f64, alpha: f64) -> f64 {
    let atoms = AtomPairConfig::antipodal(0.27).unwrap();
    1.0 - entanglement_fidelity(&coupling_rates(&lens(nu, alpha), &atoms).unwrap()).unwrap()
}

#[test]
fn lossless_limit_matches_real_frequency_shift() {
    for (rho, phi) in [(0.27, 0.0), (0.5, 1.0), (0.8, 2.2)] {
        let p = DiskPoint::new(rho, phi).unwrap();
        let atoms = AtomPairConfig::new(p, DiskPoint::new(0.4, 4.0).unwrap()).unwrap();
        let cfg = lens(20.5, 0.0);
        let a = coupling_rates(&cfg, &atoms).unwrap().delta_omega;
        let b = lossless_shift(&cfg, &atoms).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]
    #[test]
    fn closed_form_rates_match_mode_sums(rho in 0.1f64..0.9, phi in 0.0f64..std::f64::consts::TAU, r0 in 1.5f64..6.0, lossy in any::<bool>()) {
        let alpha = if lossy { 1e-3 } else { 1e-4 };
        let cfg = LensConfig::new(r0, 1.0, 0.1, alpha).unwrap();
        let p = DiskPoint::new(rho, phi).unwrap();
        let atoms = AtomPairConfig::new(p, p.antipode()).unwrap();
        let c = coupling_rates(&cfg, &atoms).unwrap();
        let o = rates_modesum_oracle(&cfg, &atoms, 4000).unwrap();
        prop_assert!((c.delta_omega - o.delta_omega).abs() <= 1e-3 * c.delta_omega.abs());
        prop_assert!((c.gamma_coop - o.gamma_coop).abs() <= 1e-3 * c.gamma_coop.abs());
    }
}

#[test]
fn error_grows_with_loss_and_radius() {
    let alphas = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2];
    let degrees = [10.5, 20.5, 50.5, 90.5];
    for nu in degrees {
        for w in alphas.windows(2) {
            assert!(error(nu, w[1]) >= error(nu, w[0]));
        }
    }
    for alpha in alphas {
        for w in degrees.windows(2) {
            assert!(error(w[1], alpha) >= error(w[0], alpha), "alpha {alpha} nu {:?}", w);
        }
    }
}

#[test]
fn error_symmetric_in_detuning() {
    for d in [0.1, 0.2, 0.3, 0.45] {
        let (lo, hi) = (error(20.5 - d, 5e-4), error(20.5 + d, 5e-4));
        assert!((lo - hi).abs() / lo.max(hi) < 0.05, "d {d}: {lo} vs {hi}");
    }
    assert!(error(20.5, 5e-4) < error(20.05, 5e-4) && error(20.5, 5e-4) < error(20.95, 5e-4));
}

#[test]
fn populations_within_decay_envelope() {
    let atoms = AtomPairConfig::antipodal(0.27).unwrap();
    for (nu, alpha) in [(20.5, 5e-4), (10.5, 1e-2), (20.2, 1e-3)] {
        let r = coupling_rates(&lens(nu, alpha), &atoms).unwrap();
        let grid: Vec<f64> = (0..400).map(|k| k as f64 * 0.01).collect();
        let tr = trajectory(&r, &grid);
        for (k, &t) in grid.iter().enumerate() {
            let env = (-(r.gamma - r.gamma_coop.abs()) * t).exp();
            assert!(tr.pop1[k] + tr.pop2[k] <= env * (1.0 + 1e-12));
            // the sum equals e^{-gamma t} cosh(gamma_coop t)
            let exact = (-r.gamma * t).exp() * (r.gamma_coop * t).cosh();
            assert!((tr.pop1[k] + tr.pop2[k] - exact).abs() < 1e-12);
        }
    }
}
