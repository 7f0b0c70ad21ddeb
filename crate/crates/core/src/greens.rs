//! Green's function `G_zz` of the mirrored fish eye: closed form in Legendre
//! functions of complex degree, its source and image asymptotics, and the
//! eigenmode sum used as an independent check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lens::{order_parameter, DiskPoint, LensConfig};
use crate::specfun::{dilog, legendre_log_asymptote, legendre_log_constant_scaled, legendre_nu, legendre_table, ComplexDegree};

/// Value of `G_zz` in inverse wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue(pub Complex64);

impl GreensValue {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

const RESONANCE_EPS: f64 = 1e-8;

/// Minus the cosine of the sphere distance between the images of two disk
/// points: `(|zeta|^2 - 1)/(|zeta|^2 + 1)` with `zeta = (a1 - a2)/(a1 conj(a2) + 1)`.
pub fn xi(a1: Complex64, a2: Complex64) -> f64 {
    let num = (a1 - a2).norm_sqr();
    let den = (a1 * a2.conj() + 1.0).norm_sqr();
    if num + den == 0.0 {
        return 1.0;
    }
    (num - den) / (num + den)
}

/// `xi(a1, 1/conj(a2))`, the mirror-image argument, written without the
/// inversion so `a2 = 0` is regular.
pub fn xi_image(a1: Complex64, a2: Complex64) -> f64 {
    let num = (a1 * a2.conj() - 1.0).norm_sqr();
    let den = (a1 + a2).norm_sqr();
    if num + den == 0.0 {
        return 1.0;
    }
    (num - den) / (num + den)
}

fn checked_sin(nu: ComplexDegree) -> Result<Complex64> {
    let s = nu.sin_pi();
    if s.norm() < RESONANCE_EPS {
        return Err(Error::Resonance(s.norm()));
    }
    Ok(s)
}

fn legendre_or_one(nu: ComplexDegree, x: f64) -> Result<Complex64> {
    legendre_nu(nu, x.min(1.0))
}

/// Closed form `G_zz = -[P_nu(xi) - P_nu(xi')]/(4 b sin(pi nu))`.
pub fn greens_zz(cfg: &LensConfig, p1: DiskPoint, p2: DiskPoint, omega: Complex64) -> Result<GreensValue> {
    let (a1, a2) = (p1.complex(), p2.complex());
    if (a1 - a2).norm() < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    let nu = order_parameter(cfg, omega);
    let s = checked_sin(nu)?;
    let direct = legendre_or_one(nu, xi(a1, a2))?;
    let image = legendre_or_one(nu, xi_image(a1, a2))?;
    Ok(GreensValue(-(direct - image) / (4.0 * cfg.b * s)))
}

/// Regularized coincident-point value: the source divergence is replaced by
/// the constant of its logarithmic asymptote, the image term is kept.
pub fn greens_self_regularized(cfg: &LensConfig, p: DiskPoint, omega: Complex64) -> Result<GreensValue> {
    let nu = order_parameter(cfg, omega);
    let s = checked_sin(nu)?;
    let a = p.complex();
    let source = legendre_log_constant_scaled(nu)?;
    let image = legendre_or_one(nu, xi_image(a, a))?;
    Ok(GreensValue(-(source - image) / (4.0 * cfg.b * s)))
}

/// Image-point approximation: only the mirror term of the closed form,
/// `P_nu(1)/(4 b sin(pi nu)) = 1/(4 b sin(pi nu))`.
pub fn greens_image_approx(cfg: &LensConfig, nu: ComplexDegree) -> Result<Complex64> {
    Ok(1.0 / (4.0 * cfg.b * checked_sin(nu)?))
}

/// `(sin(pi nu)/pi)[ln((1+xi)/2) + F(nu)]`, the leading behavior of
/// `P_nu(xi)` near the source point.
pub fn source_asymptote(nu: ComplexDegree, xi_near_minus1: f64) -> Result<Complex64> {
    if !(xi_near_minus1 > -1.0 && xi_near_minus1 < -0.99) {
        return Err(Error::Domain(format!(
            "xi = {xi_near_minus1} outside (-1, -0.99)"
        )));
    }
    legendre_log_asymptote(nu, xi_near_minus1)
}

/// Result of the eigenmode summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSum {
    pub value: GreensValue,
    /// Largest `l` included.
    pub l_max: usize,
    /// `|S(l_max) - S(l_max/2)| / |S(l_max)|`.
    pub tail_estimate: f64,
}

/// Default upper limit cap for adaptive doubling.
pub const MODESUM_L_CAP: usize = 1 << 14;

/// Sum over `l` of `(2l+1)[P_l(cos t12) - P_l(cos t12')] * w_l` for the
/// weight `w_l = 1/(lambda - l(l+1))`, with the `1/L` and `1/L^2` parts of the
/// weight (`L = l(l+1)`) summed in closed form.
///
/// Closed forms used: `sum (2l+1) P_l(x)/L = -1 - ln((1-x)/2)` and
/// `sum (2l+1) P_l(x)/L^2 = Li2((1+x)/2) + 1 - pi^2/6`.
pub(crate) struct ResolventSum {
    c_direct: f64,
    c_image: f64,
    closed_l1: f64,
    closed_l2: f64,
}

impl ResolventSum {
    pub(crate) fn new(xi_direct: f64, xi_image: f64) -> Self {
        let (c_direct, c_image) = (-xi_direct, -xi_image);
        let closed_l1 = ((1.0 + xi_image) / (1.0 + xi_direct)).ln();
        let closed_l2 = dilog(0.5 * (1.0 + c_direct)) - dilog(0.5 * (1.0 + c_image));
        Self {
            c_direct,
            c_image,
            closed_l1,
            closed_l2,
        }
    }

    /// `sum_{l>=1} (2l+1)[P_l(c) - P_l(c')]/(l(l+1))`; infinite at the source point.
    pub(crate) fn inverse_l_sum(&self) -> f64 {
        self.closed_l1
    }

    /// `sum_{l>=1} (2l+1)[P_l(c) - P_l(c')]/(l(l+1))^2`.
    pub(crate) fn inverse_l2_sum(&self) -> f64 {
        self.closed_l2
    }

    /// Per-`l` factor `(2l+1)[P_l(c) - P_l(c')]` for `l = 0..=l_max`.
    pub(crate) fn weights(&self, l_max: usize) -> Vec<f64> {
        let pd = legendre_table(l_max, self.c_direct);
        let pi = legendre_table(l_max, self.c_image);
        pd.iter()
            .zip(&pi)
            .enumerate()
            .map(|(l, (a, b))| (2 * l + 1) as f64 * (a - b))
            .collect()
    }

    /// Partial sums of `sum_{l>=1} weight_l/(lambda - l(l+1))` at every `l`.
    pub(crate) fn partial_sums(&self, lambda: Complex64, weights: &[f64]) -> Vec<Complex64> {
        // 1/(lam - L) = -1/L - lam/L^2 + lam^2/(L^2 (lam - L))
        let head = -self.closed_l1 - lambda * self.closed_l2;
        let lam2 = lambda * lambda;
        let mut acc = Complex64::new(0.0, 0.0);
        weights
            .iter()
            .enumerate()
            .skip(1)
            .map(|(l, w)| {
                let ll = (l * (l + 1)) as f64;
                acc += lam2 * (w / (ll * ll)) / (lambda - ll);
                head + acc
            })
            .collect()
    }
}

/// Eigenmode sum `G_zz = -sum_{l,m} f*(1) f(2)/((omega/c)^2 - k_l^2)` with the
/// `m`-sum collapsed by the addition theorem:
/// `G = -(1/(4 pi b)) sum_l (2l+1)[P_l(cos t12) - P_l(cos t12')]/(nu(nu+1) - l(l+1))`.
///
/// `l_max` defaults to `8 ceil(Re nu)` and doubles until the tail estimate is
/// below `tol` or [`MODESUM_L_CAP`] is reached.
pub fn greens_modesum(
    cfg: &LensConfig,
    p1: DiskPoint,
    p2: DiskPoint,
    omega: Complex64,
    l_max: Option<usize>,
    tol: f64,
) -> Result<ModeSum> {
    let (a1, a2) = (p1.complex(), p2.complex());
    if (a1 - a2).norm() < 1e-14 {
        return Err(Error::CoincidentPoints);
    }
    let nu = order_parameter(cfg, omega).value();
    let lambda = nu * (nu + 1.0);
    let sums = ResolventSum::new(xi(a1, a2), xi_image(a1, a2));
    let pref = -1.0 / (4.0 * PI * cfg.b);
    let mut l_max = l_max.unwrap_or(8 * (nu.re.ceil().max(1.0) as usize)).max(2);
    loop {
        let weights = sums.weights(l_max);
        let partial = sums.partial_sums(lambda, &weights);
        let last = partial[l_max - 1];
        let half = partial[l_max / 2 - 1];
        let tail = (last - half).norm() / last.norm().max(f64::MIN_POSITIVE);
        if tail < tol || l_max >= MODESUM_L_CAP {
            if tail >= tol {
                return Err(Error::NonConvergence {
                    what: "Green's function mode sum",
                    terms: l_max,
                });
            }
            return Ok(ModeSum {
                value: GreensValue(pref * last),
                l_max,
                tail_estimate: tail,
            });
        }
        l_max = (2 * l_max).min(MODESUM_L_CAP);
    }
}
