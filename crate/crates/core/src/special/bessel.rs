use super::gamma::ln_gamma_unchecked;
use super::ln_unimodal_integral;
use crate::error::{domain, Error, Result};

/// ln I_ν(x) for ν > −1, x ≥ 0.
///
/// Ascending series summed in log space; for x > 30 with 4ν² < x the
/// Hankel asymptotic expansion e^x/√(2πx)·Σ(−1)^k a_k(ν)/x^k is used instead.
pub fn ln_bessel_i(order: f64, x: f64) -> Result<f64> {
    if !(order > -1.0) || !order.is_finite() {
        return Err(domain("bessel_i", "order > -1", order));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain("bessel_i", "0 <= x < ∞", x));
    }
    if x == 0.0 {
        return match order {
            o if o == 0.0 => Ok(0.0),
            o if o > 0.0 => Ok(f64::NEG_INFINITY),
            _ => Err(domain("bessel_i", "x > 0 for negative order", x)),
        };
    }
    if x > 30.0 && 4.0 * order * order < x {
        return Ok(ln_bessel_i_asymptotic(order, x));
    }
    let ln_half = (0.5 * x).ln();
    let mut ln_term = order * ln_half - ln_gamma_unchecked(order + 1.0);
    let mut logs = vec![ln_term];
    let mut max = ln_term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        ln_term += 2.0 * ln_half - f64::ln(k) - f64::ln(order + k);
        logs.push(ln_term);
        max = max.max(ln_term);
        let ratio_below_one = 0.25 * x * x < k * (order + k);
        if ratio_below_one && ln_term < max - 40.0 {
            break;
        }
        if logs.len() > 1_000_000 {
            return Err(Error::NonConvergence("Bessel I series".into()));
        }
    }
    let sum: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    Ok(max + sum.ln())
}

fn ln_bessel_i_asymptotic(order: f64, x: f64) -> f64 {
    let mu = 4.0 * order * order;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + sum.ln()
}

/// Modified Bessel function of the first kind I_ν(x).
pub fn bessel_i(order: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_i(order, x)?.exp())
}

fn ln_cosh(y: f64) -> f64 {
    let y = y.abs();
    y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2
}

/// ln K_ν(x) from K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh(νt) dt.
pub fn ln_bessel_k(order: f64, x: f64) -> Result<f64> {
    if !order.is_finite() {
        return Err(domain("bessel_k", "finite order", order));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("bessel_k", "0 < x < ∞", x));
    }
    // Shift by x so the log-integrand is O(1) at the origin.
    let log_f = |t: f64| -x * (t.cosh() - 1.0) + ln_cosh(order * t);
    let scale = 1.0 / (1.0 + x.sqrt());
    Ok(ln_unimodal_integral(log_f, 0.0, scale)? - x)
}

/// Modified Bessel function of the second kind K_ν(x).
pub fn bessel_k(order: f64, x: f64) -> Result<f64> {
    Ok(ln_bessel_k(order, x)?.exp())
}
