//! Fish-eye geometry: index profile, stereographic coordinates, TE modes and
//! the order parameter `nu(omega)`.
//!
//! A disk point at reduced radius `rho = r/R0` maps to the lower hemisphere
//! with `cos theta = (rho^2 - 1)/(rho^2 + 1)`; the mirror sits on the equator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{spherical_harmonic, ComplexDegree};

/// Atomic transition angular frequency in internal units.
pub const OMEGA0: f64 = 2.0 * PI;

/// Geometry and loss of the mirrored lens. Lengths are in vacuum wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensConfig {
    pub r0: f64,
    pub n0: f64,
    pub b: f64,
    /// Loss ratio `kappa / omega0`.
    pub alpha: f64,
}

impl LensConfig {
    pub fn new(r0: f64, n0: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::Domain(format!("R0 = {r0} must be positive")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("b = {b} must be positive")));
        }
        if !(n0 >= 1.0 && n0.is_finite()) {
            return Err(Error::Domain(format!("n0 = {n0} must be >= 1")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("alpha = {alpha} must be >= 0")));
        }
        Ok(Self { r0, n0, b, alpha })
    }

    /// Lossless lens of radius `r0` with `n0 = 1`.
    pub fn with_radius(r0: f64, b: f64) -> Result<Self> {
        Self::new(r0, 1.0, b, 0.0)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.r0, self.n0, self.b, alpha)
    }

    /// Cavity loss rate `kappa = alpha omega0`.
    pub fn kappa(&self) -> f64 {
        self.alpha * OMEGA0
    }

    /// Complex frequency `omega0 (1 + i alpha)`.
    pub fn complex_omega(&self) -> Complex64 {
        Complex64::new(OMEGA0, self.kappa())
    }

    /// True when the atomic frequency sits well below the first vertical mode
    /// cut-off (`omega0 < 0.5 pi c / b`).
    pub fn thin_disk_ok(&self) -> bool {
        OMEGA0 < 0.5 * PI / self.b
    }

    /// Radius that places `Re nu` exactly at `nu` for the lossless lens.
    pub fn radius_for_degree(nu: f64, n0: f64) -> f64 {
        (nu * (nu + 1.0)).sqrt() / (OMEGA0 * n0)
    }
}

/// Point on the disk in reduced polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub rho: f64,
    pub phi: f64,
}

impl DiskPoint {
    pub fn new(rho: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) || !phi.is_finite() {
            return Err(Error::Domain(format!("disk point rho = {rho}, phi = {phi}")));
        }
        Ok(Self { rho, phi })
    }

    /// Complex coordinate `rho e^{i phi}`.
    pub fn complex(&self) -> Complex64 {
        Complex64::from_polar(self.rho, self.phi)
    }

    /// Point at the same radius on the opposite side of the center.
    pub fn antipode(&self) -> Self {
        Self {
            rho: self.rho,
            phi: self.phi + PI,
        }
    }

    /// Polar angle on the sphere.
    pub fn theta(&self) -> f64 {
        stereo_theta_unchecked(self.rho)
    }
}

/// TE mode label with `|m| <= l - 1` and `l - m` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub l: usize,
    pub m: i64,
}

impl ModeIndex {
    pub fn new(l: usize, m: i64) -> Result<Self> {
        let valid = l >= 1 && (m.unsigned_abs() as usize) < l && (l as i64 - m).rem_euclid(2) == 1;
        if !valid {
            return Err(Error::Domain(format!("mode (l = {l}, m = {m}) not allowed")));
        }
        Ok(Self { l, m })
    }
}

/// `n(rho) = 2 n0 / (1 + rho^2)`.
pub fn refractive_index(cfg: &LensConfig, rho: f64) -> f64 {
    2.0 * cfg.n0 / (1.0 + rho * rho)
}

/// `(1/R0) int_0^R0 n(r) dr` by Gauss–Legendre quadrature.
pub fn radial_mean_index(cfg: &LensConfig, nodes: usize) -> f64 {
    quad::integrate(nodes, 0.0, 1.0, |rho| refractive_index(cfg, rho))
}

/// Polar angle `theta = arccos((rho^2 - 1)/(rho^2 + 1))`, in `[pi/2, pi]`.
pub fn stereo_theta(rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho = {rho} outside [0, 1]")));
    }
    Ok(stereo_theta_unchecked(rho))
}

fn stereo_theta_unchecked(rho: f64) -> f64 {
    let r2 = rho * rho;
    ((r2 - 1.0) / (r2 + 1.0)).clamp(-1.0, 1.0).acos()
}

/// `omega_l = sqrt(l(l+1)) / (R0 n0)`.
pub fn eigenfrequency(cfg: &LensConfig, l: usize) -> f64 {
    let lf = l as f64;
    (lf * (lf + 1.0)).sqrt() / (cfg.r0 * cfg.n0)
}

/// `nu = (sqrt(4 omega^2 R0^2 n0^2 + 1) - 1)/2`, principal branch.
pub fn order_parameter(cfg: &LensConfig, omega: Complex64) -> ComplexDegree {
    let rn = cfg.r0 * cfg.n0;
    let v = 0.5 * ((4.0 * omega * omega * rn * rn + 1.0).sqrt() - 1.0);
    ComplexDegree::new(v).expect("finite inputs give a finite degree")
}

/// Degree at the lossy atomic frequency `omega0 (1 + i alpha)`.
pub fn lens_degree(cfg: &LensConfig) -> ComplexDegree {
    order_parameter(cfg, cfg.complex_omega())
}

/// Allowed azimuthal numbers `{-(l-1), -(l-3), ..., l-1}`.
pub fn allowed_m(l: usize) -> Vec<i64> {
    let top = l as i64 - 1;
    (0..l as i64).map(|k| -top + 2 * k).collect()
}

/// `f_{l,m}(r, phi) = sqrt(2/(b R0^2 n0^2)) Y_l^m(theta(rho), phi)`.
pub fn mode_function(cfg: &LensConfig, mode: ModeIndex, p: DiskPoint) -> Complex64 {
    let norm = (2.0 / (cfg.b * cfg.r0 * cfg.r0 * cfg.n0 * cfg.n0)).sqrt();
    let y = spherical_harmonic(mode.l, mode.m, p.theta(), p.phi)
        .expect("ModeIndex and DiskPoint are validated");
    norm * y
}

/// `int d^3r n^2 f_a conj(f_b)` over disk and thickness.
///
/// The azimuthal integral is done analytically; the radial one by
/// Gauss–Legendre in `u = cos theta`, doubling the node count until two
/// successive results agree to 1e-13.
pub fn orthonormality_check(
    cfg: &LensConfig,
    a: ModeIndex,
    b: ModeIndex,
    quadrature_n: usize,
) -> Result<Complex64> {
    if quadrature_n < 64 {
        return Err(Error::Domain(format!("quadrature_n = {quadrature_n} below 64")));
    }
    if a.m != b.m {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // n^2 r dr = n0^2 R0^2 du with u = cos theta in [-1, 0]
    let weight = cfg.b * cfg.n0 * cfg.n0 * cfg.r0 * cfg.r0 * 2.0 * PI;
    let radial = |n: usize| {
        weight
            * quad::integrate(n, -1.0, 0.0, |u| {
                let rho = ((1.0 + u) / (1.0 - u)).max(0.0).sqrt();
                let p = DiskPoint { rho, phi: 0.0 };
                (mode_function(cfg, a, p) * mode_function(cfg, b, p).conj()).re
            })
    };
    let mut n = quadrature_n;
    let mut prev = radial(n);
    for _ in 0..6 {
        n *= 2;
        let cur = radial(n);
        if (cur - prev).abs() <= 1e-13 * cur.abs().max(1.0) {
            return Ok(Complex64::new(cur, 0.0));
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "orthonormality quadrature",
        terms: n,
    })
}
