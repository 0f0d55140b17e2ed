use super::gamma::ln_gamma_unchecked;
use crate::error::{domain, Error, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;

/// Regularized lower incomplete gamma P(α, s) = γ(α, s)/Γ(α).
pub fn lower_incomplete_gamma_regularized(alpha: f64, s: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(
            "lower_incomplete_gamma_regularized",
            "alpha > 0",
            alpha,
        ));
    }
    if !(s >= 0.0) || s.is_nan() {
        return Err(domain("lower_incomplete_gamma_regularized", "s >= 0", s));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    let prefactor = (-s + alpha * s.ln() - ln_gamma_unchecked(alpha)).exp();
    if s < alpha + 1.0 {
        let mut ap = alpha;
        let mut term = 1.0 / alpha;
        let mut sum = term;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= s / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                return Ok((sum * prefactor).clamp(0.0, 1.0));
            }
        }
        Err(Error::NonConvergence("incomplete gamma series".into()))
    } else {
        // Modified Lentz evaluation of the continued fraction for Q(α, s).
        let tiny = 1e-300;
        let mut b = s + 1.0 - alpha;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - alpha);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                return Ok((1.0 - prefactor * h).clamp(0.0, 1.0));
            }
        }
        Err(Error::NonConvergence(
            "incomplete gamma continued fraction".into(),
        ))
    }
}
