//! Special functions: log-gamma and the reciprocal-gamma Taylor coefficients,
//! Volterra ν/μ and the Fransén–Wrigge φ, the regularized lower incomplete
//! gamma, exponential integrals, modified Bessel I/K and parabolic cylinder D.
//!
//! Index integrals are evaluated in log space: the log-integrand is maximised,
//! the integral is split at the peak and truncated where the integrand drops
//! below `e^{-40}` of its maximum.

mod bessel;
mod expint;
mod gamma;
mod incomplete_gamma;
mod parabolic;
mod volterra;

pub use bessel::{bessel_i, bessel_k, ln_bessel_i, ln_bessel_k};
pub use expint::{ein, exp_integral_e1};
pub use gamma::{
    log_gamma, recip_gamma, reciprocal_gamma_coeffs, ReciprocalGammaCoeffs, EULER_GAMMA,
};
pub use incomplete_gamma::lower_incomplete_gamma_regularized;
pub use parabolic::{ln_parabolic_cylinder_d, parabolic_cylinder_d};
pub use volterra::{
    fransen_wrigge_phi, fransen_wrigge_phi_series, ln_fransen_wrigge_phi, ln_volterra_mu,
    volterra_mu, volterra_nu, volterra_nu_quadrature, volterra_nu_series, volterra_nu_series_with,
    SeriesEstimate, SeriesTruncation, NU_Z_SWITCH,
};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, QuadratureConfig};

/// Log-integrand drop (in nats) below the peak at which the range is cut.
const LOG_CUTOFF: f64 = 40.0;

/// `ln ∫_lo^∞ exp(log_f(t)) dt` for a unimodal `log_f`.
///
/// `scale` is a rough width of the peak region; it only seeds the bracketing.
pub(crate) fn ln_unimodal_integral<F>(log_f: F, lo: f64, scale: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    // Bracket the maximum: expand until the log-integrand starts to fall.
    let mut step = scale;
    let mut prev = log_f(lo + step);
    let mut guard = 0;
    loop {
        let next = log_f(lo + 2.0 * step);
        if next < prev || (next == f64::NEG_INFINITY && prev == f64::NEG_INFINITY && guard > 0) {
            break;
        }
        prev = next;
        step *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence(
                "index integrand does not decay".into(),
            ));
        }
    }

    // Golden-section search for the peak on [lo, lo + 2·step].
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, lo + 2.0 * step);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (log_f(c), log_f(d));
    for _ in 0..48 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_f(d);
        }
    }
    let peak = 0.5 * (a + b);
    let max = log_f(peak).max(fc).max(fd);
    if !max.is_finite() {
        return if max == f64::NEG_INFINITY {
            Ok(f64::NEG_INFINITY)
        } else {
            Err(Error::NonFiniteIntegrand(peak))
        };
    }

    // Right cutoff.
    let mut width = scale.max(peak - lo).max(f64::MIN_POSITIVE);
    let mut guard = 0;
    while log_f(peak + width) > max - LOG_CUTOFF {
        width *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence(
                "index integrand tail does not decay".into(),
            ));
        }
    }

    let cfg = QuadratureConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        max_subdivisions: 4000,
        ..QuadratureConfig::default()
    };
    let g = |t: f64| (log_f(t) - max).exp();
    let left = if peak > lo {
        integrate_finite(g, lo, peak, &cfg)?.require("index integral (left of peak)")?
    } else {
        0.0
    };
    // Doubling pieces keep any single panel from spanning the whole decay,
    // where a lone Kronrod rule can agree with itself and still be wrong.
    // Later pieces get an absolute budget tied to the running total.
    let mut right = 0.0;
    let (mut x, mut piece) = (peak, scale.max(f64::MIN_POSITIVE).min(width));
    while x < peak + width {
        let next = (x + piece).min(peak + width);
        let piece_cfg = QuadratureConfig {
            abs_tol: cfg.abs_tol.max(0.5 * cfg.rel_tol * (left + right)),
            ..cfg
        };
        right +=
            integrate_finite(g, x, next, &piece_cfg)?.require("index integral (right of peak)")?;
        x = next;
        piece *= 2.0;
    }
    let total = left + right;
    Ok(if total > 0.0 {
        max + total.ln()
    } else {
        f64::NEG_INFINITY
    })
}
