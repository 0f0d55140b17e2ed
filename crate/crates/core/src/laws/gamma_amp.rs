//! Gamma(β) amplitudes with β ∈ {1/2, 1, 2}.

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_finite, integrate_semi_infinite, QuadratureConfig};
use crate::special::{
    ln_bessel_i, ln_fransen_wrigge_phi, ln_parabolic_cylinder_d, ln_volterra_mu, log_gamma,
    lower_incomplete_gamma_regularized, volterra_nu, SeriesTruncation,
};

/// Below this point the β = 1 CDF uses e^{−u} ν(e^{−1} u).
pub const BETA1_CDF_PATCH: f64 = 1e-3;

fn check_u(name: &'static str, u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(domain(name, "0 < u < ∞", u))
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain("exponent A", "A > 0", a))
    }
}

/// Fixed A with Gamma(1) amplitudes: the stationary law is Gamma(A).
pub fn gamma_amp_beta1_density_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    check_u("gamma_amp_beta1_density_fixed_a", u)?;
    Ok(((a - 1.0) * u.ln() - u - log_gamma(a)?).exp())
}

pub fn gamma_amp_beta1_cdf_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    if u <= 0.0 {
        return Ok(0.0);
    }
    lower_incomplete_gamma_regularized(a, u)
}

/// Gamma(1)-mixed exponent, Gamma(1) amplitudes: e^{−u} φ(e^{−1}u)/u.
pub fn gamma_amp_beta1_density(u: f64) -> Result<f64> {
    check_u("gamma_amp_beta1_density", u)?;
    Ok((-u + ln_fransen_wrigge_phi((-1f64).exp() * u)? - u.ln()).exp())
}

/// The small-u approximation e^{−u}ν(e^{−1}u) of the β = 1 mixed CDF.
///
/// It keeps only the leading term of P(a, u) ≈ u^a e^{−u}/Γ(a+1); at
/// u = 1e-3 it is low by about 1.2e-4.
pub fn gamma_amp_beta1_cdf_small_u(u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    Ok((-u).exp() * volterra_nu((-1f64).exp() * u)?)
}

/// F(u) = ∫_0^∞ e^{−a} P(a, u) da, mixing the Gamma(A) CDFs directly.
fn gamma_amp_beta1_cdf_mixture(u: f64) -> Result<f64> {
    let mut failure = None;
    let r = integrate_semi_infinite(
        |a| {
            if a == 0.0 {
                return 1.0;
            }
            match lower_incomplete_gamma_regularized(a, u) {
                Ok(p) => (-a).exp() * p,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0 + u.recip().ln().max(0.0),
        &QuadratureConfig::with_tolerances(1e-14, 1e-12),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    r.require("beta=1 CDF head")
}

/// CDF of the β = 1 mixed law: the exact A-mixture up to
/// [`BETA1_CDF_PATCH`], plus the integrated density above it.
pub fn gamma_amp_beta1_cdf(u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    if u <= BETA1_CDF_PATCH {
        return gamma_amp_beta1_cdf_mixture(u);
    }
    let head = gamma_amp_beta1_cdf_mixture(BETA1_CDF_PATCH)?;
    let body = integrate_finite(
        |x| gamma_amp_beta1_density(x).unwrap_or(f64::NAN),
        BETA1_CDF_PATCH,
        u,
        &QuadratureConfig::with_tolerances(1e-10, 1e-9),
    )?
    .require("beta=1 CDF")?;
    Ok((head + body).min(1.0))
}

/// √(2/π) e^{−u/2} 2^{3A} A u^{A−1} D_{−(1+2A)}(√(2u)).
pub fn gamma_amp_beta_half_density_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    if !(u >= 0.0) || !u.is_finite() {
        return Err(domain(
            "gamma_amp_beta_half_density_fixed_a",
            "0 <= u < ∞",
            u,
        ));
    }
    let ln_power = if u == 0.0 {
        match a {
            a if a < 1.0 => return Ok(f64::INFINITY),
            a if a == 1.0 => 0.0,
            _ => return Ok(0.0),
        }
    } else {
        (a - 1.0) * u.ln()
    };
    let ln = 0.5 * (2.0 / std::f64::consts::PI).ln() - 0.5 * u
        + 3.0 * a * std::f64::consts::LN_2
        + a.ln()
        + ln_power
        + ln_parabolic_cylinder_d(1.0 + 2.0 * a, (2.0 * u).sqrt())?;
    Ok(ln.exp())
}

/// (e^{−u}/(4u)) √(2/π) ∫_0^∞ e^{−(√(2u)ξ + ξ²/2)} φ(e^{−1/2} 2√(2u) ξ) dξ.
pub fn gamma_amp_beta_half_density(u: f64) -> Result<f64> {
    check_u("gamma_amp_beta_half_density", u)?;
    let r = (2.0 * u).sqrt();
    let scale = (-0.5f64).exp() * 2.0 * r;
    let integral = integrate_semi_infinite(
        |xi: f64| {
            if xi == 0.0 {
                return 0.0;
            }
            let ln =
                -(r * xi + 0.5 * xi * xi) + ln_fransen_wrigge_phi(scale * xi).unwrap_or(f64::NAN);
            ln.exp()
        },
        0.0,
        1.0 / (1.0 + r),
        &QuadratureConfig::with_tolerances(1e-13, 1e-11),
    )?
    .require("beta=1/2 density integral")?;
    Ok((-u).exp() / (4.0 * u) * (2.0 / std::f64::consts::PI).sqrt() * integral)
}

/// e^{−(A+u)} (u/A)^{(A−1)/2} I_{A−1}(2√(Au)).
pub fn gamma_amp_beta2_density_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    check_u("gamma_amp_beta2_density_fixed_a", u)?;
    let ln =
        -(a + u) + 0.5 * (a - 1.0) * (u / a).ln() + ln_bessel_i(a - 1.0, 2.0 * (a * u).sqrt())?;
    Ok(ln.exp())
}

/// Truncation used by the convergent density series unless overridden.
pub fn default_density_truncation() -> SeriesTruncation {
    SeriesTruncation {
        max_terms: 400,
        term_tol: 1e-13,
    }
}

/// Sums positive terms given as logarithms until a term is below
/// `term_tol · sum` while the terms are decreasing.
pub(crate) fn sum_decreasing_log_terms<F>(
    mut ln_term: F,
    trunc: &SeriesTruncation,
    what: &str,
) -> Result<f64>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut ln_sum = f64::NEG_INFINITY;
    let mut previous = f64::INFINITY;
    for k in 0..trunc.max_terms {
        let t = ln_term(k)?;
        ln_sum = log_add_exp(ln_sum, t);
        let decreasing = t < previous;
        previous = t;
        if k > 0 && decreasing && (t == f64::NEG_INFINITY || t - ln_sum < trunc.term_tol.ln()) {
            return Ok(ln_sum);
        }
    }
    Err(Error::NonConvergence(format!(
        "{what}: terms not below tolerance after {} terms",
        trunc.max_terms
    )))
}

/// e^{−u−2} Σ_k e^{2k} μ(e^{−2}u, k, k−1), in log space.
pub fn gamma_amp_beta2_density(u: f64, trunc: &SeriesTruncation) -> Result<f64> {
    check_u("gamma_amp_beta2_density", u)?;
    let z = (-2f64).exp() * u;
    let ln_sum = sum_decreasing_log_terms(
        |k| {
            let k = k as f64;
            Ok(2.0 * k + ln_volterra_mu(z, k, k - 1.0)?)
        },
        trunc,
        "beta=2 mixed density series",
    )?;
    Ok((-u - 2.0 + ln_sum).exp())
}

pub(crate) fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// 1 − ∫_u^∞ f for a density given as a closure.
pub(crate) fn upper_tail_cdf<F>(density: F, u: f64, decay: f64, what: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let tail = integrate_semi_infinite(
        |x| match density(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        u,
        decay,
        &QuadratureConfig::with_tolerances(1e-10, 1e-9),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((1.0 - tail.require(what)?).clamp(0.0, 1.0))
}

pub fn gamma_amp_beta_half_cdf(u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    upper_tail_cdf(gamma_amp_beta_half_density, u, 1.0, "beta=1/2 mixed CDF")
}

pub fn gamma_amp_beta2_cdf(u: f64, trunc: &SeriesTruncation) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    upper_tail_cdf(
        |x| gamma_amp_beta2_density(x, trunc),
        u,
        1.0,
        "beta=2 mixed CDF",
    )
}

/// ∫_0^u f for a fixed-A density with an integrable u^{A−1} singularity.
pub(crate) fn lower_cdf<F>(density: F, u: f64, what: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if u <= 0.0 {
        return Ok(0.0);
    }
    let mut failure = None;
    let v = integrate_finite(
        |x| {
            if x == 0.0 {
                return 0.0;
            }
            match density(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        u,
        &QuadratureConfig::with_tolerances(1e-11, 1e-10),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(v.require(what)?.clamp(0.0, 1.0))
}

pub fn gamma_amp_beta_half_cdf_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    lower_cdf(
        |x| gamma_amp_beta_half_density_fixed_a(a, x),
        u,
        "beta=1/2 fixed-A CDF",
    )
}

pub fn gamma_amp_beta2_cdf_fixed_a(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    lower_cdf(
        |x| gamma_amp_beta2_density_fixed_a(a, x),
        u,
        "beta=2 fixed-A CDF",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bessel_i, fransen_wrigge_phi, parabolic_cylinder_d};

    fn semi_infinite(f: impl Fn(f64) -> f64) -> f64 {
        integrate_semi_infinite(
            |x| if x == 0.0 { 0.0 } else { f(x) },
            0.0,
            1.0,
            &QuadratureConfig::with_tolerances(1e-10, 1e-9),
        )
        .unwrap()
        .value
    }

    fn mixture(fixed: impl Fn(f64) -> f64) -> f64 {
        semi_infinite(|a| (-a).exp() * fixed(a))
    }

    #[test]
    fn beta1_normalization() {
        let total = gamma_amp_beta1_cdf(60.0).unwrap();
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }

    #[test]
    fn beta1_laplace_transform() {
        let s = 1.0;
        let lhs = gamma_amp_beta1_cdf(BETA1_CDF_PATCH).unwrap()
            + integrate_semi_infinite(
                |u| (-s * u).exp() * gamma_amp_beta1_density(u).unwrap(),
                BETA1_CDF_PATCH,
                1.0,
                &QuadratureConfig::with_tolerances(1e-10, 1e-9),
            )
            .unwrap()
            .value;
        let rhs = 1.0 / (1.0 + (1.0 + s).ln());
        assert!((lhs - rhs).abs() < 1e-4, "{lhs} vs {rhs}");
    }

    #[test]
    fn beta1_small_u_patch_is_leading_order() {
        // Independent value: ∫_0^∞ e^{−a} P(a, 1e-3) da = 0.13306446514729386.
        let exact = gamma_amp_beta1_cdf(1e-3).unwrap();
        assert!((exact - 0.133_064_465_147_293_86).abs() < 1e-10, "{exact}");
        let patch = gamma_amp_beta1_cdf_small_u(1e-3).unwrap();
        assert!((exact - patch - 1.189_598_454e-4).abs() < 1e-9, "{patch}");
    }

    #[test]
    fn beta1_small_u_behaviour() {
        let u = 1e-4;
        let uf = u * gamma_amp_beta1_density(u).unwrap();
        assert!((uf - (-u).exp() * fransen_wrigge_phi((-1f64).exp() * u).unwrap()).abs() < 1e-14);
        assert!(uf < 0.2);
    }

    #[test]
    fn beta1_fixed_a_is_gamma_law() {
        let f = gamma_amp_beta1_density_fixed_a(2.0, 1.5).unwrap();
        assert!((f - 1.5 * (-1.5f64).exp()).abs() < 1e-14);
        let p = gamma_amp_beta1_cdf_fixed_a(1.0, 1.0).unwrap();
        assert!((p - (1.0 - (-1f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn beta_half_fixed_a() {
        let total = semi_infinite(|u| gamma_amp_beta_half_density_fixed_a(1.0, u).unwrap());
        assert!((total - 1.0).abs() < 1e-4, "{total}");
        let at_zero = gamma_amp_beta_half_density_fixed_a(1.0, 0.0).unwrap();
        let expected =
            (2.0 / std::f64::consts::PI).sqrt() * 8.0 * parabolic_cylinder_d(3.0, 0.0).unwrap();
        assert!((at_zero - expected).abs() < 1e-12);
        let near = gamma_amp_beta_half_density_fixed_a(1.0, 1e-12).unwrap();
        assert!((near - expected).abs() < 1e-5);
    }

    #[test]
    fn beta_half_mixed_normalization_and_mixture() {
        // The mixed density behaves like 1/(u ln²u) at the origin, so the mass
        // below ε decays only like 1/ln(1/ε). That head is obtained by mixing
        // the fixed-A CDFs F_a(ε) = (1/a)∫_0^{ε^a} g_a(x^{1/a}) dx, where
        // f_a(u) = u^{a−1} g_a(u).
        let eps: f64 = 1e-6;
        let g_over_a = |a: f64, u: f64| {
            let ln = 0.5 * (2.0 / std::f64::consts::PI).ln() - 0.5 * u
                + 3.0 * a * std::f64::consts::LN_2
                + crate::special::ln_parabolic_cylinder_d(1.0 + 2.0 * a, (2.0 * u).sqrt()).unwrap();
            ln.exp()
        };
        let cfg = QuadratureConfig::with_tolerances(1e-11, 1e-10);
        let head = mixture(|a| {
            integrate_finite(
                |x: f64| g_over_a(a, x.powf(1.0 / a)),
                0.0,
                eps.powf(a),
                &cfg,
            )
            .unwrap()
            .value
        });
        let body =
            integrate_semi_infinite(|u| gamma_amp_beta_half_density(u).unwrap(), eps, 1.0, &cfg)
                .unwrap()
                .value;
        assert!(head > 0.05, "{head}");
        assert!((head + body - 1.0).abs() < 5e-3, "{head} + {body}");
        let direct = gamma_amp_beta_half_density(1.0).unwrap();
        let mixed = mixture(|a| gamma_amp_beta_half_density_fixed_a(a, 1.0).unwrap());
        assert!((direct - mixed).abs() < 1e-3, "{direct} vs {mixed}");
    }

    #[test]
    fn beta2_fixed_a() {
        let total = semi_infinite(|u| gamma_amp_beta2_density_fixed_a(1.0, u).unwrap());
        assert!((total - 1.0).abs() < 1e-6, "{total}");
        let reduced = (-2f64).exp() * bessel_i(0.0, 2.0).unwrap();
        assert!((gamma_amp_beta2_density_fixed_a(1.0, 1.0).unwrap() - reduced).abs() < 1e-14);
        let total_cdf = gamma_amp_beta2_cdf_fixed_a(2.0, 80.0).unwrap();
        assert!((total_cdf - 1.0).abs() < 1e-6);
    }

    #[test]
    fn beta2_mixed_series() {
        let trunc = default_density_truncation();
        let first = (-3f64).exp() * ln_volterra_mu((-2f64).exp(), 0.0, -1.0).unwrap().exp();
        assert!(first.is_finite() && first > 0.0);
        let series = gamma_amp_beta2_density(1.0, &trunc).unwrap();
        let mixed = mixture(|a| gamma_amp_beta2_density_fixed_a(a, 1.0).unwrap());
        assert!((series - mixed).abs() < 1e-3, "{series} vs {mixed}");
        let short = SeriesTruncation {
            max_terms: 2,
            term_tol: 1e-13,
        };
        assert!(matches!(
            gamma_amp_beta2_density(1.0, &short),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn beta2_mixed_cdf_is_consistent() {
        let trunc = default_density_truncation();
        let u = 1.0;
        let h = 1e-3;
        let d = (gamma_amp_beta2_cdf(u + h, &trunc).unwrap()
            - gamma_amp_beta2_cdf(u - h, &trunc).unwrap())
            / (2.0 * h);
        assert!((d - gamma_amp_beta2_density(u, &trunc).unwrap()).abs() < 1e-3);
    }
}
