use std::sync::OnceLock;

use super::gamma::{ln_gamma_unchecked, ln_recip_gamma, ReciprocalGammaCoeffs};
use super::ln_unimodal_integral;
use crate::error::{domain, Error, Result};

/// Below this argument ν is evaluated by its asymptotic series.
///
/// The series is divergent; at 0.02 its optimally truncated error is about
/// 1e-9, while near e^{−(1+γ)} ≈ 0.2065 it is already ≈ 4e-3.
pub const NU_Z_SWITCH: f64 = 0.02;

/// Number of usable coefficients a_j: the double-double recurrence is accurate
/// to ≈1e-13 relative through j = 30 and degrades past j = 40.
const SERIES_COEFFS: usize = 40;

fn shared_coeffs() -> &'static ReciprocalGammaCoeffs {
    static COEFFS: OnceLock<ReciprocalGammaCoeffs> = OnceLock::new();
    COEFFS.get_or_init(|| {
        ReciprocalGammaCoeffs::new(SERIES_COEFFS).expect("order within supported range")
    })
}

/// Truncation controls for the divergent asymptotic series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub max_terms: usize,
    /// Stop once a term falls below `term_tol · |partial sum|`.
    pub term_tol: f64,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self {
            max_terms: SERIES_COEFFS,
            term_tol: 1e-17,
        }
    }
}

impl SeriesTruncation {
    pub fn new(max_terms: usize, term_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidConfig("max_terms must be at least 1".into()));
        }
        if !(term_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "term_tol must be positive, got {term_tol}"
            )));
        }
        Ok(Self {
            max_terms,
            term_tol,
        })
    }
}

/// Truncated asymptotic sum with the size of the first omitted term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub error_estimate: f64,
    pub terms_used: usize,
}

/// Sums `Σ a_j (j+shift)! / L^{j+shift+1}` with the pair-magnitude rule: the
/// series is cut after index J minimising |t_J| + |t_{J+1}|. A single-term
/// minimum is unreliable because a_j changes sign and can come close to zero.
fn asymptotic_sum(
    coeffs: &[f64],
    log_inv: f64,
    shift: usize,
    trunc: &SeriesTruncation,
) -> SeriesEstimate {
    let count = trunc.max_terms.min(coeffs.len() - 1) + 1;
    // (j+shift)!/L^{j+shift+1}
    let mut weight = 1.0 / log_inv;
    for k in 1..=shift {
        weight *= k as f64 / log_inv;
    }
    let mut terms = Vec::with_capacity(count);
    for (j, a) in coeffs.iter().take(count).enumerate() {
        if j > 0 {
            weight *= (j + shift) as f64 / log_inv;
        }
        terms.push(a * weight);
    }
    let mut best = 0;
    let mut best_size = f64::INFINITY;
    let mut partial = 0.0;
    for j in 0..count - 1 {
        partial += terms[j];
        let size = terms[j].abs() + terms[j + 1].abs();
        if size < best_size {
            best_size = size;
            best = j;
        }
        if terms[j + 1].abs() < trunc.term_tol * partial.abs() {
            break;
        }
    }
    SeriesEstimate {
        value: terms[..=best].iter().sum(),
        error_estimate: terms[best + 1].abs(),
        terms_used: best + 1,
    }
}

fn check_small_argument(name: &'static str, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < 1.0) {
        return Err(domain(name, "0 < z < 1", z));
    }
    Ok(-z.ln())
}

/// Wyman–Wong asymptotic series ν(z) ≈ Σ a_j j!/(−ln z)^{j+1}, for `0 < z < 1`.
pub fn volterra_nu_series(z: f64, trunc: &SeriesTruncation) -> Result<SeriesEstimate> {
    volterra_nu_series_with(z, shared_coeffs(), trunc)
}

/// [`volterra_nu_series`] with caller-supplied reciprocal-gamma coefficients.
pub fn volterra_nu_series_with(
    z: f64,
    coeffs: &ReciprocalGammaCoeffs,
    trunc: &SeriesTruncation,
) -> Result<SeriesEstimate> {
    let l = check_small_argument("volterra_nu_series", z)?;
    if coeffs.coeffs().len() < 2 {
        return Err(Error::InvalidConfig(
            "need at least two coefficients".into(),
        ));
    }
    Ok(asymptotic_sum(coeffs.coeffs(), l, 0, trunc))
}

/// Asymptotic series φ(z) ≈ Σ a_j (j+1)!/(−ln z)^{j+2}, for `0 < z < 1`.
pub fn fransen_wrigge_phi_series(z: f64, trunc: &SeriesTruncation) -> Result<SeriesEstimate> {
    let l = check_small_argument("fransen_wrigge_phi_series", z)?;
    Ok(asymptotic_sum(shared_coeffs().coeffs(), l, 1, trunc))
}

fn check_positive(name: &'static str, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(name, "0 < z < ∞", z));
    }
    Ok(z.ln())
}

fn peak_scale(ln_z: f64) -> f64 {
    1.0 / (1.0 + ln_z.abs())
}

/// ν(z) = ∫_0^∞ z^t/Γ(t+1) dt by direct quadrature.
pub fn volterra_nu_quadrature(z: f64) -> Result<f64> {
    let ln_z = check_positive("volterra_nu", z)?;
    let ln = ln_unimodal_integral(
        |t| t * ln_z - ln_gamma_unchecked(t + 1.0),
        0.0,
        peak_scale(ln_z),
    )?;
    Ok(ln.exp())
}

/// Volterra ν(z) = ∫_0^∞ z^t/Γ(t+1) dt.
///
/// Series below [`NU_Z_SWITCH`], quadrature above.
pub fn volterra_nu(z: f64) -> Result<f64> {
    check_positive("volterra_nu", z)?;
    if z < NU_Z_SWITCH {
        Ok(volterra_nu_series(z, &SeriesTruncation::default())?.value)
    } else {
        volterra_nu_quadrature(z)
    }
}

/// μ(z, b, a) = ∫_0^∞ z^{a+t} t^b / (Γ(b+1) Γ(a+t+1)) dt.
///
/// `a = −1` is admitted: the integrand then vanishes like t at the origin.
pub fn volterra_mu(z: f64, b: f64, a: f64) -> Result<f64> {
    Ok(ln_volterra_mu(z, b, a)?.exp())
}

/// ln μ(z, b, a); stays finite where μ itself under- or overflows.
pub fn ln_volterra_mu(z: f64, b: f64, a: f64) -> Result<f64> {
    let ln_z = check_positive("volterra_mu", z)?;
    if !(b >= 0.0) || !b.is_finite() {
        return Err(domain("volterra_mu", "b >= 0", b));
    }
    if !(a >= -1.0) || !a.is_finite() {
        return Err(domain("volterra_mu", "a >= -1", a));
    }
    let norm = ln_gamma_unchecked(b + 1.0);
    let log_f = |t: f64| {
        let power = if b == 0.0 { 0.0 } else { b * t.ln() };
        (a + t) * ln_z + power - norm + ln_recip_gamma(a + t + 1.0)
    };
    ln_unimodal_integral(log_f, 0.0, peak_scale(ln_z).max(b.min(1.0)))
}

/// Fransén–Wrigge φ(z) = ∫_0^∞ z^a/Γ(a) da = z·ν'(z).
pub fn fransen_wrigge_phi(z: f64) -> Result<f64> {
    Ok(ln_fransen_wrigge_phi(z)?.exp())
}

/// ln φ(z).
pub fn ln_fransen_wrigge_phi(z: f64) -> Result<f64> {
    let ln_z = check_positive("fransen_wrigge_phi", z)?;
    ln_unimodal_integral(|a| a * ln_z + ln_recip_gamma(a), 0.0, peak_scale(ln_z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_semi_infinite, QuadratureConfig};
    use crate::special::EULER_GAMMA;

    // High-precision reference values of the defining integrals.
    const NU_1: f64 = 2.266_534_507_699_848_8;
    const PHI_1: f64 = 2.807_770_242_028_519_4;
    const NU_AT_E_1G: f64 = 0.638_157_111_689_738_2;

    /// Independent oracle: composite Simpson on [0, 60] with a fine uniform grid.
    fn simpson_index_integral(f: impl Fn(f64) -> f64) -> f64 {
        let n = 600_000;
        let h = 60.0 / n as f64;
        let mut s = f(0.0) + f(60.0);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn nu_at_one() {
        assert!((volterra_nu(1.0).unwrap() - NU_1).abs() < 1e-12);
        let oracle = simpson_index_integral(|t| (-ln_gamma_unchecked(t + 1.0)).exp());
        assert!((volterra_nu(1.0).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn nu_reference_points() {
        let z = (-(1.0 + EULER_GAMMA)).exp();
        assert!((volterra_nu(z).unwrap() - NU_AT_E_1G).abs() < 1e-12);
        assert!((volterra_nu(0.05).unwrap() - 0.355_804_976_316_156_85).abs() < 1e-12);
        assert!((volterra_nu_quadrature(0.02).unwrap() - 0.273_245_015_366_835_01).abs() < 1e-12);
    }

    #[test]
    fn nu_series_small_argument() {
        let s = volterra_nu_series(0.01, &SeriesTruncation::default()).unwrap();
        assert!((s.value - 0.231_740_764_517_968_48).abs() < 1e-10, "{s:?}");
        let q = volterra_nu_quadrature(0.01).unwrap();
        assert!((s.value - q).abs() < 1e-10);
    }

    #[test]
    fn nu_crossover_is_continuous() {
        for &z in &[0.015, 0.019, 0.0199, 0.02, 0.021] {
            let s = volterra_nu_series(z, &SeriesTruncation::default())
                .unwrap()
                .value;
            let q = volterra_nu_quadrature(z).unwrap();
            assert!((s - q).abs() < 1e-6, "z = {z}: {s} vs {q}");
        }
    }

    #[test]
    fn nu_tends_to_zero_and_is_monotone() {
        let zs = [1e-300, 1e-100, 1e-10, 1e-3, 0.02, 0.1, 0.5, 1.0, 3.0, 50.0];
        let vals: Vec<f64> = zs.iter().map(|&z| volterra_nu(z).unwrap()).collect();
        assert!(vals[0] < 2e-3);
        assert!(vals.windows(2).all(|w| w[0] < w[1]), "{vals:?}");
    }

    #[test]
    fn nu_large_argument_approaches_exponential() {
        // ν(z) = e^z − ∫_0^∞ e^{−zt}/(t(π² + ln² t)) dt, so ν(z)e^{−z} → 1.
        let z = 40.0;
        let r = volterra_nu(z).unwrap() / z.exp();
        assert!((r - 1.0).abs() < 1e-15 * 10.0);
    }

    #[test]
    fn nu_domain() {
        assert!(volterra_nu(0.0).is_err());
        assert!(volterra_nu(-1.0).is_err());
        assert!(volterra_nu_series(1.5, &SeriesTruncation::default()).is_err());
    }

    #[test]
    fn mu_reduces_to_nu() {
        for &z in &[0.3, 1.0] {
            let mu = volterra_mu(z, 0.0, 0.0).unwrap();
            assert!((mu - volterra_nu(z).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn mu_first_moment_equals_phi_at_one() {
        assert!((volterra_mu(1.0, 1.0, 0.0).unwrap() - PHI_1).abs() < 1e-11);
        let oracle = simpson_index_integral(|t| t * (-ln_gamma_unchecked(t + 1.0)).exp());
        assert!((volterra_mu(1.0, 1.0, 0.0).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn mu_accepts_a_minus_one() {
        let v = volterra_mu((-2f64).exp(), 0.0, -1.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        assert!(volterra_mu(1.0, 0.0, -1.5).is_err());
        assert!(volterra_mu(1.0, -0.5, 0.0).is_err());
    }

    #[test]
    fn mu_laplace_transform_identity() {
        // ∫_0^∞ e^{−su} ν(e^{−(1+γ)}u) du = 1/(s·ln(e^{1+γ}s)) at s = 2.
        let c = (-(1.0 + EULER_GAMMA)).exp();
        let s = 2.0;
        let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-9);
        let lhs = integrate_semi_infinite(
            |u| {
                if u == 0.0 {
                    0.0
                } else {
                    (-s * u).exp() * volterra_mu(c * u, 0.0, 0.0).unwrap()
                }
            },
            0.0,
            s,
            &cfg,
        )
        .unwrap()
        .value;
        let rhs = 1.0 / (s * (1.0 + EULER_GAMMA + s.ln()));
        assert!((lhs - rhs).abs() < 1e-5, "{lhs} vs {rhs}");
    }

    #[test]
    fn phi_at_one() {
        assert!((fransen_wrigge_phi(1.0).unwrap() - PHI_1).abs() < 1e-11);
        let oracle = simpson_index_integral(|a| if a == 0.0 { 0.0 } else { recip_gamma_of(a) });
        assert!((fransen_wrigge_phi(1.0).unwrap() - oracle).abs() < 1e-10);
    }

    fn recip_gamma_of(a: f64) -> f64 {
        ln_recip_gamma(a).exp()
    }

    #[test]
    fn phi_is_z_times_nu_derivative() {
        for &z in &[0.1, 0.2, 0.5, 1.0, 1.5, 2.0] {
            let h = 1e-5 * z;
            let d = (volterra_nu(z + h).unwrap() - volterra_nu(z - h).unwrap()) / (2.0 * h);
            let phi = fransen_wrigge_phi(z).unwrap();
            assert!(((phi - z * d) / phi).abs() < 1e-5, "z = {z}");
        }
    }

    #[test]
    fn phi_series_matches_quadrature_for_small_argument() {
        for &z in &[1e-6, 1e-3] {
            let s = fransen_wrigge_phi_series(z, &SeriesTruncation::default()).unwrap();
            let q = fransen_wrigge_phi(z).unwrap();
            assert!(((s.value - q) / q).abs() < 1e-8, "z = {z}: {s:?} vs {q}");
        }
    }

    #[test]
    fn phi_tends_to_zero() {
        assert!(fransen_wrigge_phi(1e-200).unwrap() < 1e-4);
        assert!(fransen_wrigge_phi(0.0).is_err());
    }

    #[test]
    fn truncation_config_validated() {
        assert!(SeriesTruncation::new(0, 1e-16).is_err());
        assert!(SeriesTruncation::new(10, 0.0).is_err());
        let short = SeriesTruncation::new(1, 1e-16).unwrap();
        let s = volterra_nu_series(1e-6, &short).unwrap();
        assert_eq!(s.terms_used, 1);
    }
}
