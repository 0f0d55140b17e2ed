use super::gamma::ln_gamma_unchecked;
use super::ln_unimodal_integral;
use crate::error::{domain, Error, Result};

/// ln D_{−p}(x) from D_{−p}(x) = e^{−x²/4}/Γ(p) ∫_0^∞ t^{p−1} e^{−xt−t²/2} dt.
pub fn ln_parabolic_cylinder_d(p: f64, x: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Unsupported(format!(
            "parabolic cylinder D_{{-p}} needs p > 0, got p = {p}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("parabolic_cylinder_d", "0 <= x < ∞", x));
    }
    let log_f = |t: f64| (p - 1.0) * t.ln() - x * t - 0.5 * t * t;
    let scale = (p.sqrt()).min(p / x.max(1e-300)).max(1e-6);
    let ln = ln_unimodal_integral(log_f, 0.0, scale)?;
    Ok(-0.25 * x * x - ln_gamma_unchecked(p) + ln)
}

/// Parabolic cylinder function D_{−p}(x) for p > 0, x ≥ 0.
pub fn parabolic_cylinder_d(p: f64, x: f64) -> Result<f64> {
    Ok(ln_parabolic_cylinder_d(p, x)?.exp())
}
