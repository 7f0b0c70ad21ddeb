use fisheye::lens::{lens_degree, stereo_theta, LensConfig};
use fisheye::qed::AtomPairConfig;
use fisheye::schrodinger::{
    build_blocks, compare_to_analytics, default_l_range, evolve, evolve_rk4, uniform_grid, BlockModel,
};
use num_complex::Complex64;

fn lens(nu: f64, alpha: f64) -> LensConfig {
    LensConfig::new(LensConfig::radius_for_degree(nu, 1.0), 1.0, 0.1, alpha).unwrap()
}

fn blocks(cfg: &LensConfig, omega0: f64, kappa: f64) -> (BlockModel, BlockModel) {
    let theta = stereo_theta(0.27).unwrap();
    let range = default_l_range(lens_degree(cfg).value().re);
    build_blocks(cfg, theta, omega0, range, kappa).unwrap()
}

#[test]
fn lossless_norm_conserved() {
    let b = blocks(&lens(20.5, 0.0), 1e7, 0.0);
    let grid = uniform_grid(3.0 * std::f64::consts::PI / 3.34, 2000);
    let r = evolve(&b, &grid).unwrap();
    let worst = r.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-10, "norm drift {worst:e}");
    assert!(!r.used_fallback);
}

#[test]
fn lossy_norm_decays_to_ground_state() {
    let cfg = lens(20.5, 5e-4);
    let kappa = cfg.kappa() * 1e7 / fisheye::lens::OMEGA0;
    let b = blocks(&cfg, 1e7, kappa);
    let grid = uniform_grid(60.0, 3000);
    let r = evolve(&b, &grid).unwrap();
    for w in r.norm.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
    let (p1, p2) = (r.pop1(), r.pop2());
    assert!(p1.last().unwrap() + p2.last().unwrap() < 1e-4);
    assert!(*r.norm.last().unwrap() < 1e-4);
}

/// Unreduced single-excitation Hamiltonian over both atoms and every mode:
/// atom 1 couples to `A_l` with `G_l/sqrt(2)`, atom 2 with `(-1)^{l+1} G_l/sqrt(2)`.
fn full_hamiltonian(odd: &BlockModel, even: &BlockModel) -> (Vec<Vec<Complex64>>, Vec<usize>) {
    let modes: Vec<_> = odd.modes.iter().chain(&even.modes).collect();
    let n = 2 + modes.len();
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    let mut even_rows = Vec::new();
    for (k, m) in modes.iter().enumerate() {
        let row = k + 2;
        let g = m.coupling / 2f64.sqrt();
        let s = if m.l % 2 == 1 { 1.0 } else { -1.0 };
        h[0][row] = Complex64::new(g, 0.0);
        h[row][0] = Complex64::new(g, 0.0);
        h[1][row] = Complex64::new(s * g, 0.0);
        h[row][1] = Complex64::new(s * g, 0.0);
        h[row][row] = Complex64::new(m.detuning, -m.loss);
        if m.l % 2 == 0 {
            even_rows.push(row);
        }
    }
    (h, even_rows)
}

#[test]
fn parity_blocks_stay_isolated() {
    // small omega0/Gamma0 keeps the unreduced RK4 affordable
    let (odd, even) = blocks(&lens(10.5, 1e-3), 300.0, 0.4);
    let (h, even_rows) = full_hamiltonian(&odd, &even);
    let mut psi0 = vec![Complex64::new(0.0, 0.0); h.len()];
    psi0[0] = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    psi0[1] = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let grid = uniform_grid(1.0, 11);
    let states = evolve_rk4(&h, &psi0, &grid, 2e-5);
    for s in &states {
        let cross: f64 = even_rows.iter().map(|&r| s[r].norm_sqr()).sum::<f64>() + (s[0] - s[1]).norm_sqr() / 2.0;
        assert!(cross < 1e-12, "cross population {cross:e}");
    }
    // the unreduced symmetric amplitude matches the odd block alone
    let spec = fisheye::schrodinger::block_spectrum(&odd).unwrap();
    let (a, _) = spec.amplitudes(1.0);
    let sym = (states[10][0] + states[10][1]) / 2f64.sqrt();
    assert!((a - sym).norm() < 1e-8, "{:e}", (a - sym).norm());
}

#[test]
fn exchange_rate_matches_closed_form() {
    let atoms = AtomPairConfig::antipodal(0.27).unwrap();
    let c = compare_to_analytics(&lens(20.5, 0.0), &atoms, 1e7, None, 2000).unwrap();
    let ext = c.extracted_delta_omega.unwrap();
    assert!((ext / c.rates.delta_omega.abs() - 1.0).abs() < 0.05);
    assert!((ext - c.sim.spectral_delta_omega.abs()).abs() / ext < 1e-3);
}

#[test]
fn truncation_convergence_near_resonance() {
    // mode windows of half-width 10 and 20 around l0 = 20
    let atoms = AtomPairConfig::antipodal(0.27).unwrap();
    let cfg = lens(20.5, 0.0);
    let narrow = compare_to_analytics(&cfg, &atoms, 1e7, Some(11..=30), 2000).unwrap();
    let wide = compare_to_analytics(&cfg, &atoms, 1e7, Some(1..=40), 2000).unwrap();
    let (a, b) = (narrow.extracted_delta_omega.unwrap(), wide.extracted_delta_omega.unwrap());
    assert!((a / b - 1.0).abs() < 0.01, "{a} vs {b}");
}

#[test]
fn detuning_sweep_is_u_shaped() {
    let atoms = AtomPairConfig::antipodal(0.27).unwrap();
    let infid = |dnu: f64| {
        let c = compare_to_analytics(&lens(20.5 + dnu, 5e-4), &atoms, 1e7, None, 2000).unwrap();
        1.0 - c.numeric_fidelity
    };
    let (left, mid, right) = (infid(-0.45), infid(0.0), infid(0.45));
    assert!(left > 2.0 * mid && right > 2.0 * mid, "{left} {mid} {right}");
}
