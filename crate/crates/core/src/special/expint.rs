use super::gamma::EULER_GAMMA;
use crate::error::{domain, Error, Result};

/// Entire exponential integral Ein(s) = ∫_0^s (1 − e^{−t})/t dt.
pub fn ein(s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(domain("ein", "0 <= s < ∞", s));
    }
    if s <= 2.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..200 {
            term *= -s / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        Ok(sum)
    } else {
        Ok(EULER_GAMMA + s.ln() + exp_integral_e1(s)?)
    }
}

/// Exponential integral E1(s) = ∫_s^∞ e^{−t}/t dt for s > 0.
pub fn exp_integral_e1(s: f64) -> Result<f64> {
    if !(s > 0.0) || s.is_nan() {
        return Err(domain("exp_integral_e1", "s > 0", s));
    }
    if s == f64::INFINITY {
        return Ok(0.0);
    }
    if s <= 2.0 {
        return Ok(ein(s)? - EULER_GAMMA - s.ln());
    }
    // Lentz continued fraction.
    let tiny = 1e-300;
    let mut b = s + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(h * (-s).exp());
        }
    }
    Err(Error::NonConvergence("E1 continued fraction".into()))
}
