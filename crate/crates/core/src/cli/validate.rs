//! Invariant suite behind `fisheye validate`.

use std::time::Instant;

use num_complex::Complex64;

use crate::error::Result;
use crate::greens::{greens_modesum, greens_zz};
use crate::lens::{allowed_m, lens_degree, orthonormality_check, stereo_theta, DiskPoint, LensConfig, ModeIndex, OMEGA0};
use crate::qed::{coupling_rates, rates_modesum_oracle, AtomPairConfig};
use crate::schrodinger::{build_blocks, default_l_range, evolve, uniform_grid, DEFAULT_OMEGA0_OVER_GAMMA0};
use crate::specfun::{legendre_nu, legendre_poly, ComplexDegree};

/// Closed-form Green's function under test.
pub type ClosedForm = fn(&LensConfig, DiskPoint, DiskPoint, Complex64) -> Result<Complex64>;

pub fn closed_form(cfg: &LensConfig, p1: DiskPoint, p2: DiskPoint, omega: Complex64) -> Result<Complex64> {
    Ok(greens_zz(cfg, p1, p2, omega)?.value())
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<20} {}  {}  ({:.2} s)\n",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail,
                c.seconds
            ));
        }
        out
    }
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        name,
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn half_integer_lens(nu: f64) -> Result<LensConfig> {
    LensConfig::with_radius(LensConfig::radius_for_degree(nu, 1.0), 0.1)
}

/// Worst relative deviation between `closed` and the mode sum at real
/// `omega0` over a 5 x 5 point grid at each degree.
pub fn fredholm_deviation(closed: ClosedForm, degrees: &[f64], pairs: usize) -> Result<f64> {
    let sources = [(0.05, 0.3), (0.27, 1.1), (0.5, 2.9), (0.71, 4.0), (0.93, 5.5)];
    let fields = [(0.16, 2.0), (0.38, 3.5), (0.6, 0.2), (0.82, 1.7), (0.97, 4.6)];
    let omega = Complex64::new(OMEGA0, 0.0);
    let mut worst: f64 = 0.0;
    for &nu in degrees {
        let cfg = half_integer_lens(nu)?;
        for (k, (s, f)) in sources
            .iter()
            .flat_map(|s| fields.iter().map(move |f| (s, f)))
            .enumerate()
        {
            if k >= pairs {
                break;
            }
            let p = DiskPoint::new(s.0, s.1)?;
            let q = DiskPoint::new(f.0, f.1)?;
            let c = closed(&cfg, p, q, omega)?;
            let m = greens_modesum(&cfg, p, q, omega, None, 1e-9)?.value.value();
            worst = worst.max((m - c).norm() / c.norm());
        }
    }
    Ok(worst)
}

/// Worst `|P_n(x) - legendre_nu(n, x)| / max(1, |P_n(x)|)` over `n <= n_max`
/// and 50 points in `(-1, 1)`.
pub fn integer_degree_deviation(n_max: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        for k in 0..50 {
            let x = -0.98 + 1.96 * k as f64 / 49.0;
            let exact = legendre_poly(n, x)?;
            let v = legendre_nu(ComplexDegree::real(n as f64)?, x)?;
            worst = worst.max((v - exact).norm() / exact.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Worst deviation of the mode overlap matrix from the identity for `l <= l_max`.
pub fn orthonormality_deviation(l_max: usize) -> Result<f64> {
    let cfg = LensConfig::with_radius(3.34, 0.1)?;
    let modes: Vec<ModeIndex> = (0..=l_max)
        .flat_map(|l| allowed_m(l).into_iter().map(move |m| (l, m)))
        .map(|(l, m)| ModeIndex::new(l, m))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for a in &modes {
        for b in &modes {
            let v = orthonormality_check(&cfg, *a, *b, 128)?;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((v - target).norm());
        }
    }
    Ok(worst)
}

/// Largest `|norm - 1|` of the lossless block simulation at `R0 = 3.34`.
pub fn unitarity_deviation() -> Result<f64> {
    let cfg = half_integer_lens(20.5)?;
    let blocks = build_blocks(
        &cfg,
        stereo_theta(0.27)?,
        DEFAULT_OMEGA0_OVER_GAMMA0,
        default_l_range(lens_degree(&cfg).value().re),
        0.0,
    )?;
    let r = evolve(&blocks, &uniform_grid(3.0, 2000))?;
    Ok(r.norm.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max))
}

/// Worst relative deviation of the closed-form rates from the mode-sum
/// oracle at `R0 = 3.34`, antipodal `rho = 0.27`.
pub fn lossy_rate_deviation(alphas: &[f64]) -> Result<f64> {
    let atoms = AtomPairConfig::antipodal(0.27)?;
    let mut worst: f64 = 0.0;
    for &a in alphas {
        let cfg = LensConfig::new(3.34, 1.0, 0.1, a)?;
        let c = coupling_rates(&cfg, &atoms)?;
        let o = rates_modesum_oracle(&cfg, &atoms, 4000)?;
        for (x, y) in [(c.delta_omega, o.delta_omega), (c.gamma, o.gamma), (c.gamma_coop, o.gamma_coop)] {
            worst = worst.max((x - y).abs() / x.abs());
        }
    }
    Ok(worst)
}

/// Run the suite; `quick` trims grids.
pub fn run_suite(quick: bool, closed: ClosedForm) -> Report {
    let mut checks = Vec::new();
    checks.push(run_check("fredholm", || {
        let (deg, pairs): (&[f64], usize) = if quick { (&[10.5], 5) } else { (&[10.5, 20.5, 50.5], 25) };
        let w = fredholm_deviation(closed, deg, pairs)?;
        Ok((w < 1e-6, format!("worst rel {w:.2e} (< 1e-6)")))
    }));
    checks.push(run_check("integer-degree", || {
        let w = integer_degree_deviation(if quick { 6 } else { 20 })?;
        Ok((w < 1e-10, format!("worst {w:.2e} (< 1e-10)")))
    }));
    checks.push(run_check("orthonormality", || {
        let w = orthonormality_deviation(if quick { 4 } else { 8 })?;
        Ok((w < 1e-6, format!("worst {w:.2e} (< 1e-6)")))
    }));
    checks.push(run_check("unitarity", || {
        let w = unitarity_deviation()?;
        Ok((w < 1e-10, format!("worst {w:.2e} (< 1e-10)")))
    }));
    if !quick {
        checks.push(run_check("lossy-rates", || {
            let w = lossy_rate_deviation(&[1e-4, 1e-3])?;
            Ok((w < 1e-3, format!("worst rel {w:.2e} (< 1e-3)")))
        }));
    }
    Report { checks }
}
