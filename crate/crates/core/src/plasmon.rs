//! Effective index of surface plasmons on a metal / dielectric / air stack and
//! the loss budget of a lens built from a dielectric layer of varying height.
//!
//! Heights and wavelengths are in nanometres.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lens::{radial_mean_index, refractive_index, LensConfig};
use crate::qed::fidelity_with_freespace;

/// Continuation step in nm.
pub const HEIGHT_STEP: f64 = 0.5;
/// Largest layer height covered by index tables, in nm.
pub const MAX_HEIGHT: f64 = 1000.0;
/// Largest index jump between adjacent continuation samples before the
/// solution is treated as having left its branch.
pub const BRANCH_JUMP: f64 = 0.05;

const NEWTON_MAX_ITER: usize = 100;

/// Metal substrate, dielectric layer and vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonStack {
    pub eps_metal: Complex64,
    pub eps_dielectric: f64,
    pub lambda0: f64,
}

impl PlasmonStack {
    pub fn new(eps_metal: Complex64, eps_dielectric: f64, lambda0: f64) -> Result<Self> {
        if !(eps_metal.re < -1.0) {
            return Err(Error::Domain(format!("Re eps_metal = {} must be < -1", eps_metal.re)));
        }
        if !(eps_dielectric > 1.0) {
            return Err(Error::Domain(format!("eps_dielectric = {eps_dielectric} must be > 1")));
        }
        if !(lambda0 > 0.0) {
            return Err(Error::Domain(format!("lambda0 = {lambda0} must be positive")));
        }
        Ok(Self {
            eps_metal,
            eps_dielectric,
            lambda0,
        })
    }

    /// Single-crystal silver under a permittivity 3.6 layer at 737 nm.
    pub fn silver_737() -> Self {
        Self {
            eps_metal: Complex64::new(-25.23, 0.589),
            eps_dielectric: 3.6,
            lambda0: 737.0,
        }
    }

    pub fn k0(&self) -> f64 {
        2.0 * PI / self.lambda0
    }

    /// Index of the bare metal/air plasmon, `sqrt(eps_m/(eps_m + 1))`.
    pub fn bare_index(&self) -> Complex64 {
        (self.eps_metal / (self.eps_metal + 1.0)).sqrt()
    }

    /// Index of the metal/dielectric plasmon, `sqrt(eps_m eps_d/(eps_m + eps_d))`.
    pub fn thick_film_index(&self) -> Complex64 {
        (self.eps_metal * self.eps_dielectric / (self.eps_metal + self.eps_dielectric)).sqrt()
    }
}

/// Complex effective index at one layer height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveIndexSample {
    pub height: f64,
    pub n_eff: Complex64,
}

fn sqrt_re_pos(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

/// Transverse wavenumbers `(k_air, k_d, k_m)`, each on the branch with
/// non-negative real part before the permittivity division.
pub fn transverse_wavenumbers(n_eff: Complex64, stack: &PlasmonStack) -> (Complex64, Complex64, Complex64) {
    let k0 = stack.k0();
    let beta2 = (n_eff * k0) * (n_eff * k0);
    let k_air = sqrt_re_pos(beta2 - k0 * k0);
    let k_d = sqrt_re_pos(beta2 - stack.eps_dielectric * k0 * k0) / stack.eps_dielectric;
    let k_m = sqrt_re_pos(beta2 - stack.eps_metal * k0 * k0) / stack.eps_metal;
    (k_air, k_d, k_m)
}

/// `tanh(k_d eps_d d) + (k_air k_d + k_d k_m)/(k_d^2 + k_air k_m)`.
pub fn dispersion_residual(n_eff: Complex64, d: f64, stack: &PlasmonStack) -> Complex64 {
    let (ka, kd, km) = transverse_wavenumbers(n_eff, stack);
    (kd * stack.eps_dielectric * d).tanh() + (ka * kd + kd * km) / (kd * kd + ka * km)
}

// The residual is odd in k_d and so vanishes identically at n = sqrt(eps_d);
// Newton runs on residual / k_d to keep away from that spurious root.
fn reduced_residual(n_eff: Complex64, d: f64, stack: &PlasmonStack) -> Complex64 {
    let (ka, kd, km) = transverse_wavenumbers(n_eff, stack);
    let x = kd * stack.eps_dielectric * d;
    let tanh_over_kd = if x.norm() < 1e-8 {
        Complex64::new(stack.eps_dielectric * d, 0.0)
    } else {
        x.tanh() / kd
    };
    tanh_over_kd + (ka + km) / (kd * kd + ka * km)
}

fn newton_index(seed: Complex64, d: f64, stack: &PlasmonStack) -> Result<Complex64> {
    let mut n = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let f = reduced_residual(n, d, stack);
        let h = 1e-7 * n.norm().max(1.0);
        let df = (reduced_residual(n + h, d, stack) - reduced_residual(n - h, d, stack)) / (2.0 * h);
        let mut step = f / df;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        if step.norm() > 0.1 {
            step *= 0.1 / step.norm();
        }
        n -= step;
        if step.norm() < 1e-14 * n.norm() {
            let r = dispersion_residual(n, d, stack).norm();
            if r < 1e-10 * stack.k0() {
                return Ok(n);
            }
        }
    }
    Err(Error::RootNotFound(format!("effective index at d = {d} nm")))
}

/// Solve for the guided index at height `d`.
///
/// With a seed the root is polished from it; without one the branch is
/// followed from the bare plasmon at `d = 0` in steps of [`HEIGHT_STEP`].
pub fn solve_effective_index(d: f64, stack: &PlasmonStack, seed: Option<Complex64>) -> Result<EffectiveIndexSample> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("height {d} must be >= 0")));
    }
    let n_eff = match seed {
        Some(s) => newton_index(s, d, stack)?,
        None => {
            let steps = (d / HEIGHT_STEP).ceil() as usize;
            let mut n = newton_index(stack.bare_index(), 0.0, stack)?;
            for k in 1..=steps {
                let next = newton_index(n, (k as f64 * HEIGHT_STEP).min(d), stack)?;
                check_jump(n, next, k as f64 * HEIGHT_STEP)?;
                n = next;
            }
            n
        }
    };
    Ok(EffectiveIndexSample { height: d, n_eff })
}

fn check_jump(prev: Complex64, next: Complex64, d: f64) -> Result<()> {
    if (next.re - prev.re).abs() > BRANCH_JUMP {
        return Err(Error::RootNotFound(format!("branch jump near d = {d} nm")));
    }
    Ok(())
}

/// Continuation sweep over `0, step, 2 step, ..` up to `d_max`.
pub fn index_sweep(stack: &PlasmonStack, d_max: f64, step: f64) -> Result<Vec<EffectiveIndexSample>> {
    if !(step > 0.0 && d_max >= 0.0) {
        return Err(Error::Domain("sweep needs step > 0 and d_max >= 0".into()));
    }
    let count = (d_max / step).round() as usize;
    let mut out = Vec::with_capacity(count + 1);
    let mut n = newton_index(stack.bare_index(), 0.0, stack)?;
    out.push(EffectiveIndexSample { height: 0.0, n_eff: n });
    for k in 1..=count {
        let d = k as f64 * step;
        // intermediate continuation steps when the sweep is coarse
        let sub = (step / HEIGHT_STEP).ceil().max(1.0) as usize;
        for j in 1..=sub {
            let dj = d - step + step * j as f64 / sub as f64;
            let next = newton_index(n, dj, stack)?;
            check_jump(n, next, dj)?;
            n = next;
        }
        out.push(EffectiveIndexSample { height: d, n_eff: n });
    }
    Ok(out)
}

/// Tabulated `n(d)` on `[0, MAX_HEIGHT]` for repeated inversions.
#[derive(Debug, Clone)]
pub struct IndexTable {
    stack: PlasmonStack,
    samples: Vec<EffectiveIndexSample>,
}

impl IndexTable {
    pub fn new(stack: &PlasmonStack) -> Result<Self> {
        Ok(Self {
            stack: *stack,
            samples: index_sweep(stack, MAX_HEIGHT, HEIGHT_STEP)?,
        })
    }

    pub fn samples(&self) -> &[EffectiveIndexSample] {
        &self.samples
    }

    /// Achievable range of `Re n`.
    pub fn range(&self) -> (f64, f64) {
        let lo = self.samples[0].n_eff.re;
        let hi = self.samples.last().map_or(lo, |s| s.n_eff.re);
        (lo, hi)
    }

    /// Height with `Re n(d) = n_target`, by bisection inside the bracketing
    /// table interval.
    pub fn height_for_index(&self, n_target: f64) -> Result<EffectiveIndexSample> {
        let (lo, hi) = self.range();
        if !(n_target >= lo && n_target <= hi) {
            return Err(Error::OutOfRange {
                target: n_target,
                lo,
                hi,
            });
        }
        let k = self.samples.partition_point(|s| s.n_eff.re < n_target);
        if k == 0 {
            return Ok(self.samples[0]);
        }
        let (mut a, b) = (self.samples[k - 1], self.samples[k]);
        let mut d_hi = b.height;
        for _ in 0..60 {
            let mid = 0.5 * (a.height + d_hi);
            let n = newton_index(a.n_eff, mid, &self.stack)?;
            if n.re < n_target {
                a = EffectiveIndexSample { height: mid, n_eff: n };
            } else {
                d_hi = mid;
            }
            if d_hi - a.height < 1e-10 {
                break;
            }
        }
        let d = 0.5 * (a.height + d_hi);
        Ok(EffectiveIndexSample {
            height: d,
            n_eff: newton_index(a.n_eff, d, &self.stack)?,
        })
    }
}

/// Height giving `Re n = n_target`.
pub fn height_for_index(n_target: f64, stack: &PlasmonStack) -> Result<f64> {
    Ok(IndexTable::new(stack)?.height_for_index(n_target)?.height)
}

/// One radial sample of the lens layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub rho: f64,
    pub height: f64,
    pub n_eff: Complex64,
}

/// Layer heights realizing the lens index at `samples` uniform radii.
///
/// Target indices below the bare-plasmon index (reached near the rim when
/// `n0 = 1`) take zero height.
pub fn lens_height_profile(cfg: &LensConfig, stack: &PlasmonStack, samples: usize) -> Result<Vec<ProfilePoint>> {
    if samples < 2 {
        return Err(Error::Domain("profile needs at least two samples".into()));
    }
    let table = IndexTable::new(stack)?;
    let (lo, _) = table.range();
    (0..samples)
        .map(|i| {
            let rho = i as f64 / (samples - 1) as f64;
            let target = refractive_index(cfg, rho);
            let s = if target <= lo {
                table.samples()[0]
            } else {
                table.height_for_index(target)?
            };
            Ok(ProfilePoint {
                rho,
                height: s.height,
                n_eff: s.n_eff,
            })
        })
        .collect()
}

/// Minimum radial samples for [`average_absorption`].
pub const MIN_RADIAL_SAMPLES: usize = 1000;

/// Radius-averaged absorption `(1/R0) int_0^R0 chi/n dr` (trapezoid).
pub fn average_absorption(cfg: &LensConfig, stack: &PlasmonStack, samples: usize) -> Result<f64> {
    if samples < MIN_RADIAL_SAMPLES {
        return Err(Error::Domain(format!("need at least {MIN_RADIAL_SAMPLES} radial samples")));
    }
    let profile = lens_height_profile(cfg, stack, samples)?;
    let f: Vec<f64> = profile.iter().map(|p| p.n_eff.im / p.n_eff.re).collect();
    let inner: f64 = f[1..f.len() - 1].iter().sum();
    Ok((inner + 0.5 * (f[0] + f[f.len() - 1])) / (samples - 1) as f64)
}

/// Mirror leakage `kappa/omega0 = t^2 lambda0/(4 pi n_bar R0)` with
/// `t^2 = 1 - r^2`; `R0` is in vacuum wavelengths.
pub fn mirror_loss(cfg: &LensConfig, reflectivity_sq: f64, n_bar: f64) -> Result<f64> {
    if !(reflectivity_sq > 0.0 && reflectivity_sq <= 1.0) {
        return Err(Error::Domain(format!("mirror reflectivity {reflectivity_sq} outside (0, 1]")));
    }
    if !(n_bar > 0.0) {
        return Err(Error::Domain(format!("mean index {n_bar} must be positive")));
    }
    Ok((1.0 - reflectivity_sq) / (4.0 * PI * n_bar * cfg.r0))
}

/// Loss budget and resulting fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossEstimate {
    pub alpha_abs: f64,
    pub alpha_mirror: f64,
    pub alpha: f64,
    pub fidelity: f64,
}

/// Absorption from the layer profile plus mirror leakage (mean index from
/// the lens profile), then the fidelity including free-space emission.
pub fn end_to_end_estimate(
    cfg: &LensConfig,
    stack: &PlasmonStack,
    reflectivity_sq: f64,
    eta: f64,
    samples: usize,
) -> Result<LossEstimate> {
    let alpha_abs = average_absorption(cfg, stack, samples)?;
    let alpha_mirror = mirror_loss(cfg, reflectivity_sq, radial_mean_index(cfg, 64))?;
    estimate_from_losses(cfg, alpha_abs, alpha_mirror, eta)
}

/// Fidelity for given absorption and mirror losses.
pub fn estimate_from_losses(cfg: &LensConfig, alpha_abs: f64, alpha_mirror: f64, eta: f64) -> Result<LossEstimate> {
    let alpha = alpha_abs + alpha_mirror;
    let fidelity = if eta.is_infinite() {
        (-PI.powi(3) * cfg.r0 * alpha).exp()
    } else {
        fidelity_with_freespace(cfg.r0, alpha, eta)?
    };
    Ok(LossEstimate {
        alpha_abs,
        alpha_mirror,
        alpha,
        fidelity,
    })
}
