//! Atom-pair quantities: dipole–dipole shift, single-atom and cooperative
//! decay with cavity loss, small-loss scaling laws, two-atom dynamics and
//! entanglement fidelity.
//!
//! All rates are in units of the free-space rate `Gamma0`. With `c = 1` and
//! unit wavelength, `delta_omega/Gamma0 = (3/2) Re{(1+i alpha)^2 G}` and
//! `Gamma/Gamma0 = 3 Im{(1+i alpha)^2 G}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::greens::{greens_self_regularized, greens_zz, xi, xi_image, ResolventSum};
use crate::lens::{lens_degree, DiskPoint, LensConfig, OMEGA0};

/// Two atoms in the lens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPairConfig {
    pub p1: DiskPoint,
    pub p2: DiskPoint,
    /// Purcell factor for emission into the guided plasmon, if known.
    pub purcell_eta: Option<f64>,
    /// Fraction of free-space emission that survives near the surface.
    pub freespace_halving: f64,
}

impl AtomPairConfig {
    pub fn new(p1: DiskPoint, p2: DiskPoint) -> Result<Self> {
        if (p1.complex() - p2.complex()).norm() < 1e-14 {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self {
            p1,
            p2,
            purcell_eta: None,
            freespace_halving: 0.5,
        })
    }

    /// Atoms at `(rho, 0)` and `(rho, pi)`.
    pub fn antipodal(rho: f64) -> Result<Self> {
        let p = DiskPoint::new(rho, 0.0)?;
        Self::new(p, p.antipode())
    }

    pub fn with_purcell(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::Domain(format!("Purcell factor {eta} must be positive")));
        }
        self.purcell_eta = Some(eta);
        Ok(self)
    }
}

/// Shift and decay rates in units of `Gamma0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRates {
    pub delta_omega: f64,
    pub gamma: f64,
    pub gamma_coop: f64,
    /// `delta_omega / (gamma + gamma_coop)`.
    pub beta: f64,
}

impl CouplingRates {
    pub fn new(delta_omega: f64, gamma: f64, gamma_coop: f64) -> Self {
        let den = gamma + gamma_coop;
        let beta = if den == 0.0 {
            f64::INFINITY.copysign(delta_omega)
        } else {
            delta_omega / den
        };
        Self {
            delta_omega,
            gamma,
            gamma_coop,
            beta,
        }
    }
}

/// Closed-form rates.
///
/// `delta_omega` and `gamma_coop` use the full `(1+i alpha)^2` prefactor on the
/// cross Green's function. `gamma` is `3 Im G_self` with the regularized
/// coincident-point Green's function, averaged over the two atoms.
pub fn coupling_rates(cfg: &LensConfig, atoms: &AtomPairConfig) -> Result<CouplingRates> {
    let w = cfg.complex_omega();
    let pref = Complex64::new(1.0, cfg.alpha).powi(2);
    let g12 = pref * greens_zz(cfg, atoms.p1, atoms.p2, w)?.value();
    let g11 = greens_self_regularized(cfg, atoms.p1, w)?.value();
    let g22 = greens_self_regularized(cfg, atoms.p2, w)?.value();
    let gamma = 1.5 * (g11.im + g22.im);
    Ok(CouplingRates::new(1.5 * g12.re, gamma, 3.0 * g12.im))
}

/// Exchange shift `(3/2) Re[(1 + i alpha)^2 G(r1, r2)]` alone.
pub fn exchange_shift(cfg: &LensConfig, p1: DiskPoint, p2: DiskPoint) -> Result<f64> {
    let pref = Complex64::new(1.0, cfg.alpha).powi(2);
    Ok(1.5 * (pref * greens_zz(cfg, p1, p2, cfg.complex_omega())?.value()).re)
}

/// Shift along the diameter through atom 1, which sits `offset` from the
/// mirror at `x = -(R0 - offset)`. Returns `(x, delta_omega)` at `n_points`
/// cell-centred positions on `(-R0, R0)`; positions that coincide with atom 1
/// are skipped.
pub fn diameter_profile(cfg: &LensConfig, offset: f64, n_points: usize) -> Result<Vec<(f64, f64)>> {
    if !(offset > 0.0 && offset < cfg.r0) {
        return Err(Error::Domain(format!("offset {offset} must lie inside (0, R0)")));
    }
    if n_points == 0 {
        return Err(Error::EmptyRange);
    }
    let p1 = DiskPoint::new(1.0 - offset / cfg.r0, PI)?;
    let x1 = -(cfg.r0 - offset);
    let dx = 2.0 * cfg.r0 / n_points as f64;
    let xs: Vec<f64> = (0..n_points)
        .map(|k| -cfg.r0 + (k as f64 + 0.5) * dx)
        .filter(|x| (x - x1).abs() > 1e-9 * cfg.r0)
        .collect();
    xs.into_par_iter()
        .map(|x| {
            let p2 = DiskPoint::new(x.abs() / cfg.r0, if x >= 0.0 { 0.0 } else { PI })?;
            Ok((x, exchange_shift(cfg, p1, p2)?))
        })
        .collect()
}

/// Height, position and full width at half maximum of a peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakStats {
    pub x: f64,
    pub height: f64,
    pub fwhm: f64,
}

/// Largest `|y|` within `window` of `x_expected`, refined by a parabola, with
/// the half-maximum crossings found by linear interpolation.
pub fn peak_stats(profile: &[(f64, f64)], x_expected: f64, window: f64) -> Result<PeakStats> {
    let k = (0..profile.len())
        .filter(|&k| (profile[k].0 - x_expected).abs() <= window)
        .max_by(|&a, &b| profile[a].1.abs().total_cmp(&profile[b].1.abs()))
        .ok_or(Error::EmptyRange)?;
    let (mut x, mut height) = profile[k];
    if k > 0 && k + 1 < profile.len() {
        let (y0, y1, y2) = (profile[k - 1].1, profile[k].1, profile[k + 1].1);
        let h = 0.5 * (profile[k + 1].0 - profile[k - 1].0);
        let curv = y0 - 2.0 * y1 + y2;
        if curv != 0.0 {
            let off = (0.5 * (y0 - y2) / curv).clamp(-1.0, 1.0);
            x += off * h;
            height = y1 - 0.25 * (y0 - y2) * off;
        }
    }
    let half = 0.5 * height.abs();
    let crossing = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = k;
        for j in range {
            if profile[j].1.abs() < half {
                let (xa, ya) = (profile[prev].0, profile[prev].1.abs());
                let (xb, yb) = (profile[j].0, profile[j].1.abs());
                return Some(xa + (xb - xa) * (ya - half) / (ya - yb));
            }
            prev = j;
        }
        None
    };
    let left = crossing(&mut (0..k).rev()).ok_or_else(|| Error::Domain("peak has no left half-maximum".into()))?;
    let right = crossing(&mut (k + 1..profile.len())).ok_or_else(|| Error::Domain("peak has no right half-maximum".into()))?;
    Ok(PeakStats {
        x,
        height,
        fwhm: right - left,
    })
}

/// Lossless shift from `Re G` at real `omega0`.
pub fn lossless_shift(cfg: &LensConfig, atoms: &AtomPairConfig) -> Result<f64> {
    let g = greens_zz(cfg, atoms.p1, atoms.p2, Complex64::new(OMEGA0, 0.0))?.value();
    Ok(1.5 * g.re)
}

/// Sum of `T_l * weight_l` over `l >= 1`, where `weight_l` is given together
/// with its large-`l` form `a1/L + a2/L^2` (`L = l(l+1)`); those two parts are
/// summed in closed form and only the remainder term by term.
fn tail_subtracted_sum(
    sums: &ResolventSum,
    t: &[f64],
    a1: f64,
    a2: f64,
    weight: impl Fn(usize) -> f64,
) -> f64 {
    let head = if a1 == 0.0 { 0.0 } else { a1 * sums.inverse_l_sum() } + a2 * sums.inverse_l2_sum();
    let body: f64 = t
        .iter()
        .enumerate()
        .skip(1)
        .map(|(l, tl)| {
            let ll = (l * (l + 1)) as f64;
            tl * (weight(l) - a1 / ll - a2 / (ll * ll))
        })
        .sum();
    head + body
}

/// Rates by direct summation over cavity modes with Lorentzian weights
/// `L_l^± = ∓omega_l/(kappa^2 + (omega_l ± omega0)^2)` and
/// `D_l^± = (omega_l ± omega0)/(kappa^2 + (omega_l ± omega0)^2)`:
///
/// `Gamma ∝ sum_l Phi_l (kappa/2)(L+ + L-)`,
/// `delta_omega ∝ sum_l Phi_l [(omega_l/2)(D+ + D-) - 1]`,
///
/// where `Phi_l = sum_m f*(r1) f(r2)` and the `-1` removes the contact term.
/// `gamma` sums `Im 1/(omega_l^2 - w^2) = kappa (L+ + L-)/(2 omega_l^2)` at
/// the coincident point, which converges without regularization.
pub fn rates_modesum_oracle(
    cfg: &LensConfig,
    atoms: &AtomPairConfig,
    l_max: usize,
) -> Result<CouplingRates> {
    let (a1, a2) = (atoms.p1.complex(), atoms.p2.complex());
    if xi(a1, a2) + 1.0 <= 0.01 {
        return Err(Error::Domain("mode-sum oracle needs |xi + 1| > 0.01".into()));
    }
    if l_max < 2 {
        return Err(Error::EmptyRange);
    }
    let kappa = cfg.kappa();
    let w = cfg.complex_omega();
    let rn2 = (cfg.r0 * cfg.n0).powi(2);
    let w2 = w * w;
    let w4 = w2 * w2;
    let phi_scale = 1.0 / (4.0 * PI * cfg.b * rn2);

    let omega_l = |l: usize| ((l * (l + 1)) as f64).sqrt() / (cfg.r0 * cfg.n0);
    let lorentz = |l: usize| {
        let wl = omega_l(l);
        let dp = wl + OMEGA0;
        let dm = wl - OMEGA0;
        let den_p = kappa * kappa + dp * dp;
        let den_m = kappa * kappa + dm * dm;
        let (l_p, l_m) = (-wl / den_p, wl / den_m);
        let (d_p, d_m) = (dp / den_p, dm / den_m);
        (wl, l_p + l_m, d_p + d_m)
    };

    let cross = ResolventSum::new(xi(a1, a2), xi_image(a1, a2));
    let t = cross.weights(l_max);
    let re_sum = tail_subtracted_sum(&cross, &t, w2.re * rn2, w4.re * rn2 * rn2, |l| {
        let (wl, _, d) = lorentz(l);
        0.5 * wl * d - 1.0
    });
    let im_sum = tail_subtracted_sum(&cross, &t, w2.im * rn2, w4.im * rn2 * rn2, |l| {
        let (_, lsum, _) = lorentz(l);
        0.5 * kappa * lsum
    });
    // w^2 G = sum Phi_l w^2/(omega_l^2 - w^2); rates scale by 1/omega0^2
    let delta_omega = 1.5 * phi_scale * re_sum / (OMEGA0 * OMEGA0);
    let gamma_coop = 3.0 * phi_scale * im_sum / (OMEGA0 * OMEGA0);

    let mut gamma = 0.0;
    for p in [atoms.p1, atoms.p2] {
        let a = p.complex();
        let own = ResolventSum::new(-1.0, xi_image(a, a));
        let t = own.weights(l_max);
        let s = tail_subtracted_sum(&own, &t, 0.0, w2.im * rn2 * rn2, |l| {
            let (wl, lsum, _) = lorentz(l);
            kappa * lsum / (2.0 * wl * wl)
        });
        gamma += 1.5 * phi_scale * s;
    }
    Ok(CouplingRates::new(delta_omega, gamma, gamma_coop))
}

/// Small-loss laws at half-integer `Re nu = m + 1/2`:
/// `delta_omega = (-1)^m (3/2)/(4b(1 + (2 pi^2 R0 alpha)^2))`,
/// `gamma = (3/2) pi^2 R0 alpha / b`, `gamma_coop = 0`.
pub fn scaling_rates(cfg: &LensConfig, r0_over_lambda: f64, alpha: f64) -> Result<CouplingRates> {
    let lens = LensConfig::new(r0_over_lambda, cfg.n0, cfg.b, 0.0)?;
    let nu = lens_degree(&lens).value().re;
    let m = nu.floor() as i64;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let x = 2.0 * PI * PI * r0_over_lambda * alpha;
    let delta_omega = sign * 1.5 / (4.0 * cfg.b * (1.0 + x * x));
    let gamma = 1.5 * PI * PI * r0_over_lambda * alpha / cfg.b;
    Ok(CouplingRates::new(delta_omega, gamma, 0.0))
}

/// Populations and Bell-state overlap of the two atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomTrajectory {
    pub times: Vec<f64>,
    pub pop1: Vec<f64>,
    pub pop2: Vec<f64>,
    pub bell_fidelity: Vec<f64>,
}

/// Amplitudes on `|e,g>` and `|g,e>` at time `t` for the initial state `|e,g>`.
pub fn amplitudes(rates: &CouplingRates, t: f64) -> (Complex64, Complex64) {
    let (d, g, gc) = (rates.delta_omega, rates.gamma, rates.gamma_coop);
    let plus = Complex64::from_polar((-(g + gc) * t / 2.0).exp(), -d * t);
    let minus = Complex64::from_polar((-(g - gc) * t / 2.0).exp(), d * t);
    (0.5 * (plus + minus), 0.5 * (plus - minus))
}

/// Overlap `|<xi|psi>|^2` with `|xi> = (|e,g> - i s |g,e>)/sqrt(2)`, where
/// `s = sign(delta_omega)` picks the Bell state the exchange dynamics reaches.
pub fn bell_overlap(c1: Complex64, c2: Complex64, delta_omega: f64) -> f64 {
    let s = if delta_omega < 0.0 { -1.0 } else { 1.0 };
    let i = Complex64::new(0.0, s);
    ((c1 + i * c2) / 2f64.sqrt()).norm_sqr()
}

/// `|C+-(t)|^2 = (e^{-gamma t}/2)[cosh(gamma_coop t) +- cos(2 delta_omega t)]`.
pub fn trajectory(rates: &CouplingRates, t_grid: &[f64]) -> TwoAtomTrajectory {
    let mut out = TwoAtomTrajectory {
        times: t_grid.to_vec(),
        pop1: Vec::with_capacity(t_grid.len()),
        pop2: Vec::with_capacity(t_grid.len()),
        bell_fidelity: Vec::with_capacity(t_grid.len()),
    };
    for &t in t_grid {
        let env = 0.5 * (-rates.gamma * t).exp();
        let ch = (rates.gamma_coop * t).cosh();
        let c = (2.0 * rates.delta_omega * t).cos();
        out.pop1.push(env * (ch + c));
        out.pop2.push(env * (ch - c));
        let (a, b) = amplitudes(rates, t);
        out.bell_fidelity.push(bell_overlap(a, b, rates.delta_omega));
    }
    out
}

/// Time of maximal Bell overlap, `t0 = pi/(4 |delta_omega|)`.
pub fn optimal_time(rates: &CouplingRates) -> Result<f64> {
    if rates.delta_omega == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(PI / (4.0 * rates.delta_omega.abs()))
}

/// `F = exp(-(pi/4)|gamma/delta_omega|) cosh((pi/4)|gamma_coop/delta_omega|)`.
pub fn entanglement_fidelity(rates: &CouplingRates) -> Result<f64> {
    if rates.delta_omega == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let d = rates.delta_omega.abs();
    Ok((-(PI / 4.0) * (rates.gamma / d).abs()).exp() * ((PI / 4.0) * (rates.gamma_coop / d).abs()).cosh())
}

/// `F = exp(-pi^3 R0 alpha)`, valid at half-integer `Re nu`.
pub fn fidelity_approx(r0_over_lambda: f64, alpha: f64) -> f64 {
    (-PI.powi(3) * r0_over_lambda * alpha).exp()
}

/// `F = exp(-pi^3 (1 + 1/(2 eta)) R0 alpha)`, adding half the free-space
/// emission rate on top of the guided decay.
pub fn fidelity_with_freespace(r0_over_lambda: f64, alpha: f64, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("Purcell factor {eta} must be positive")));
    }
    Ok((-PI.powi(3) * (1.0 + 1.0 / (2.0 * eta)) * r0_over_lambda * alpha).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lens(nu: f64, alpha: f64) -> LensConfig {
        LensConfig::new(LensConfig::radius_for_degree(nu, 1.0), 1.0, 0.1, alpha).unwrap()
    }

    #[test]
    fn lossless_rates_vanish() {
        let atoms = AtomPairConfig::antipodal(0.27).unwrap();
        let r = coupling_rates(&lens(20.5, 0.0), &atoms).unwrap();
        assert_eq!(r.gamma, 0.0);
        assert_eq!(r.gamma_coop, 0.0);
        assert_relative_eq!(r.delta_omega, lossless_shift(&lens(20.5, 0.0), &atoms).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn scaling_law_limits() {
        let cfg = lens(20.5, 0.0);
        let r = scaling_rates(&cfg, cfg.r0, 0.0).unwrap();
        assert_relative_eq!(r.delta_omega.abs(), 3.75, epsilon = 1e-12);
        assert_eq!(r.gamma, 0.0);
        let g1 = scaling_rates(&cfg, cfg.r0, 1e-4).unwrap().gamma;
        let g2 = scaling_rates(&cfg, cfg.r0, 2e-4).unwrap().gamma;
        assert_relative_eq!(g2, 2.0 * g1, max_relative = 1e-12);
        // sign follows (-1)^m, matching the closed form
        assert!(r.delta_omega > 0.0);
        let odd = lens(21.5, 0.0);
        assert!(scaling_rates(&odd, odd.r0, 0.0).unwrap().delta_omega < 0.0);
        let atoms = AtomPairConfig::antipodal(0.27).unwrap();
        assert!(coupling_rates(&odd, &atoms).unwrap().delta_omega < 0.0);
    }

    #[test]
    fn trajectory_fixtures() {
        let rates = CouplingRates::new(2.0, 0.0, 0.0);
        let t0 = optimal_time(&rates).unwrap();
        let tr = trajectory(&rates, &[0.0, t0, 2.0 * t0]);
        assert_eq!(tr.pop1[0], 1.0);
        assert_eq!(tr.pop2[0], 0.0);
        assert_relative_eq!(tr.bell_fidelity[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(tr.pop1[1], tr.pop2[1], epsilon = 1e-15);
        assert_relative_eq!(tr.bell_fidelity[1], 1.0, epsilon = 1e-15);
        assert_relative_eq!(tr.pop2[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn trajectory_maximum_matches_closed_fidelity() {
        for d in [3.1, -2.7] {
            let rates = CouplingRates::new(d, 0.4, 0.0);
            let t0 = optimal_time(&rates).unwrap();
            let grid: Vec<f64> = (0..=4000).map(|k| 2.0 * t0 * k as f64 / 4000.0).collect();
            let tr = trajectory(&rates, &grid);
            let closed = entanglement_fidelity(&rates).unwrap();
            assert_relative_eq!(tr.bell_fidelity[2000], closed, max_relative = 1e-12);
            // decay moves the true maximum slightly before t0
            let best = tr.bell_fidelity.iter().cloned().fold(0.0, f64::max);
            let x = 0.4 / d.abs();
            assert!(best >= closed && best - closed < x * x / 3.0);
        }
    }

    #[test]
    fn fidelity_formulas() {
        assert_eq!(entanglement_fidelity(&CouplingRates::new(1.0, 0.0, 0.0)).unwrap(), 1.0);
        assert!(matches!(
            entanglement_fidelity(&CouplingRates::new(0.0, 1.0, 0.0)),
            Err(Error::ZeroCoupling)
        ));
        assert_relative_eq!(fidelity_approx(3.34, 5e-4), 0.9495, epsilon = 1e-4);
        assert_eq!(fidelity_approx(3.34, 0.0), 1.0);
        let f = fidelity_with_freespace(1.749, 3.4e-3, 3.0).unwrap();
        assert!((f - 0.806).abs() < 0.005);
        assert_eq!(fidelity_with_freespace(1.749, 3.4e-3, f64::INFINITY).unwrap(), fidelity_approx(1.749, 3.4e-3));
        assert_eq!(fidelity_with_freespace(2.0, 0.0, 3.0).unwrap(), 1.0);
        assert!(fidelity_with_freespace(2.0, 1e-3, 0.0).is_err());
    }

    #[test]
    fn modesum_oracle_matches_closed_form() {
        let atoms = AtomPairConfig::antipodal(0.27).unwrap();
        let cfg = LensConfig::new(3.34, 1.0, 0.1, 5e-4).unwrap();
        let a = coupling_rates(&cfg, &atoms).unwrap();
        let b = rates_modesum_oracle(&cfg, &atoms, 400).unwrap();
        assert_relative_eq!(a.delta_omega, b.delta_omega, max_relative = 1e-3);
        assert_relative_eq!(a.gamma_coop, b.gamma_coop, max_relative = 1e-3);
        assert_relative_eq!(a.gamma, b.gamma, max_relative = 1e-3);
    }
}
