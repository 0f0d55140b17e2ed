//! Laplace and Fourier transforms of the stationary law, exponential-sum tail
//! approximations and numerical Fourier inversion.
//!
//! With `I(s) = ∫_0^s (1 − w(ξ))/ξ dξ` (w the amplitude transform) the
//! stationary transform is `exp(−A·I(s))` for a fixed exponent and
//! `(1 + I(s))^{−α}` for a Gamma(α)-mixed one. For symmetric Laplace
//! amplitudes every transform is the characteristic function at frequency s.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::{
    integrate_finite, integrate_half_periods, integrate_oscillatory_sine, QuadratureConfig,
};
use crate::special::ein;

/// Law of the amplitudes Y_n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeLaw {
    DeterministicOne,
    Gamma {
        beta: f64,
    },
    /// Difference of two independent Gamma(β) variables; characteristic
    /// function (1 + s²)^{−β}.
    SymmetricLaplace {
        beta: f64,
    },
}

impl AmplitudeLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AmplitudeLaw::DeterministicOne => Ok(()),
            AmplitudeLaw::Gamma { beta } | AmplitudeLaw::SymmetricLaplace { beta } => {
                if beta > 0.0 && beta.is_finite() {
                    Ok(())
                } else {
                    Err(domain("amplitude beta", "beta > 0", beta))
                }
            }
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, AmplitudeLaw::SymmetricLaplace { .. })
    }
}

/// Law of the exponent A = Λ/B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentLaw {
    Fixed { a: f64 },
    GammaMixed { alpha: f64 },
}

impl ExponentLaw {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            ExponentLaw::Fixed { a } => ("exponent A", a),
            ExponentLaw::GammaMixed { alpha } => ("exponent alpha", alpha),
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(domain(name, "> 0", v))
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if s >= 0.0 && !s.is_nan() {
        Ok(())
    } else {
        Err(domain("transform argument", "s >= 0", s))
    }
}

/// Laplace transform of the amplitude law (characteristic function for the
/// symmetric case).
pub fn amplitude_transform(law: AmplitudeLaw, s: f64) -> Result<f64> {
    law.validate()?;
    check_s(s)?;
    Ok(match law {
        AmplitudeLaw::DeterministicOne => (-s).exp(),
        AmplitudeLaw::Gamma { beta } => (-beta * s.ln_1p()).exp(),
        AmplitudeLaw::SymmetricLaplace { beta } => (-beta * (s * s).ln_1p()).exp(),
    })
}

/// ∫_0^s (1 − (1+ξ)^{−β})/ξ dξ.
fn gamma_exponent_integral(beta: f64, s: f64) -> Result<f64> {
    if beta == 1.0 {
        return Ok(s.ln_1p());
    }
    if beta == 2.0 {
        return Ok(s.ln_1p() + s / (1.0 + s));
    }
    if beta == 0.5 {
        return Ok(2.0 * (0.5 * (1.0 + (1.0 + s).sqrt())).ln());
    }
    let cfg = QuadratureConfig::with_tolerances(1e-14, 1e-13);
    let near = |x: f64| {
        if x == 0.0 {
            beta
        } else {
            -(-beta * x.ln_1p()).exp_m1() / x
        }
    };
    let head = integrate_finite(near, 0.0, s.min(1.0), &cfg)?.require("exponent integral")?;
    if s <= 1.0 {
        return Ok(head);
    }
    // Beyond 1 integrate in t = ln ξ, where the integrand is 1 − (1+e^t)^{−β}.
    let far = |t: f64| -(-beta * t.exp().ln_1p()).exp_m1();
    let tail = integrate_finite(far, 0.0, s.ln(), &cfg)?.require("exponent integral")?;
    Ok(head + tail)
}

/// I(s) = ∫_0^s (1 − w(ξ))/ξ dξ.
pub fn exponent_integral(law: AmplitudeLaw, s: f64) -> Result<f64> {
    law.validate()?;
    check_s(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    match law {
        AmplitudeLaw::DeterministicOne => ein(s),
        AmplitudeLaw::Gamma { beta } => gamma_exponent_integral(beta, s),
        AmplitudeLaw::SymmetricLaplace { beta } => Ok(0.5 * gamma_exponent_integral(beta, s * s)?),
    }
}

/// Transform of the stationary law: exp(−A·I(s)) or (1 + I(s))^{−α}.
pub fn stationary_transform(exp_law: ExponentLaw, amp_law: AmplitudeLaw, s: f64) -> Result<f64> {
    exp_law.validate()?;
    let i = exponent_integral(amp_law, s)?;
    Ok(match exp_law {
        ExponentLaw::Fixed { a } => (-a * i).exp(),
        ExponentLaw::GammaMixed { alpha } => (-alpha * i.ln_1p()).exp(),
    })
}

/// Coefficients c_1..c_N of Ein(s) = Σ c_k s^k, c_k = (−1)^{k+1}/(k·k!).
pub fn small_s_expansion_coeffs(n: usize) -> Result<Vec<f64>> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidConfig(format!(
            "expansion order must be in 2..=20, got {n}"
        )));
    }
    let mut factorial = 1.0;
    Ok((1..=n)
        .map(|k| {
            factorial *= k as f64;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign / (k as f64 * factorial)
        })
        .collect())
}

/// Density tail Σ w_i e^{−r_i u} built from the roots of 1 + Σ c_k s^k.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSumApprox {
    pub rates: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub order: usize,
}

impl ExponentialSumApprox {
    pub fn density(&self, u: f64) -> f64 {
        self.rates
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * (-r * u).exp())
            .sum::<Complex64>()
            .re
    }

    /// 1 − Σ w_i e^{−r_i u}/r_i; the antiderivative of [`Self::density`]
    /// that tends to 1.
    pub fn cdf(&self, u: f64) -> f64 {
        1.0 - self
            .rates
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * (-r * u).exp() / r)
            .sum::<Complex64>()
            .re
    }

    /// ∫_0^∞ of the density, Σ w_i/r_i.
    pub fn total_mass(&self) -> f64 {
        self.rates
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w / r)
            .sum::<Complex64>()
            .re
    }
}

fn poly_eval(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    // coeffs[k] multiplies z^k; returns (P, P').
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let mut companion = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    let mut roots: Vec<Complex64> = companion
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    for root in roots.iter_mut() {
        for _ in 0..50 {
            let (p, dp) = poly_eval(coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *root -= step;
            if step.norm() <= 1e-15 * root.norm() {
                break;
            }
        }
        let (p, _) = poly_eval(coeffs, *root);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * root.norm().powi(k as i32))
            .sum();
        if !p.is_finite() || p.norm() > 1e-10 * scale {
            return Err(Error::NonConvergence(format!(
                "polynomial root polish failed at {root}"
            )));
        }
    }
    // Enforce exact conjugate symmetry.
    let mut out: Vec<Complex64> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = roots[i];
        if z.im.abs() <= 1e-10 * z.norm() {
            out.push(Complex64::new(z.re, 0.0));
            continue;
        }
        let partner = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                (roots[a] - z.conj())
                    .norm()
                    .total_cmp(&(roots[b] - z.conj()).norm())
            })
            .ok_or_else(|| Error::NonConvergence("unpaired complex root".into()))?;
        used[partner] = true;
        let avg = 0.5 * (z + roots[partner].conj());
        out.push(avg);
        out.push(avg.conj());
    }
    Ok(out)
}

/// N-term exponential-sum approximation of the α = 1 density tail.
///
/// Partial fractions of 1/P(s) with P(s) = 1 + Σ_{k=1}^N c_k s^k give weights
/// 1/P'(ρ_i). Each root becomes a decaying exponential: a root in
/// the left half-plane contributes e^{ρu}, one in the right half-plane is
/// reflected to e^{−ρu}. For N = 2 this reproduces ℵ exactly. A root on the
/// imaginary axis has no decaying counterpart and is an error.
pub fn exponential_sum_tail(n: usize, alpha: f64) -> Result<ExponentialSumApprox> {
    if alpha != 1.0 {
        return Err(Error::Unsupported(format!(
            "exponential-sum tails are only defined for alpha = 1 (got {alpha})"
        )));
    }
    let mut coeffs = vec![1.0];
    coeffs.extend(small_s_expansion_coeffs(n)?);
    let roots = polynomial_roots(&coeffs)?;
    let mut rates = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for rho in roots {
        if rho.re.abs() <= 1e-12 * rho.norm() {
            return Err(Error::NonConvergence(format!(
                "root {rho} lies on the imaginary axis; no decaying tail"
            )));
        }
        let (_, dp) = poly_eval(&coeffs, rho);
        weights.push(1.0 / dp);
        rates.push(if rho.re < 0.0 { -rho } else { rho });
    }
    Ok(ExponentialSumApprox {
        rates,
        weights,
        order: n,
    })
}

const SQRT_8: f64 = 2.0 * std::f64::consts::SQRT_2;

/// ℵ(u) = (e^{−(2√2−2)u} − e^{−(2√2+2)u})/√2.
pub fn tail_density_aleph(u: f64) -> f64 {
    ((-(SQRT_8 - 2.0) * u).exp() - (-(SQRT_8 + 2.0) * u).exp()) / std::f64::consts::SQRT_2
}

/// Ξ(u) = 1 − (e^{−(2√2−2)u}/(2√2−2) − e^{−(2√2+2)u}/(2√2+2))/√2.
pub fn tail_cdf_xi(u: f64) -> f64 {
    1.0 - ((-(SQRT_8 - 2.0) * u).exp() / (SQRT_8 - 2.0)
        - (-(SQRT_8 + 2.0) * u).exp() / (SQRT_8 + 2.0))
        / std::f64::consts::SQRT_2
}

/// The three log-kernels L(x) of the α = 1 Laplace-amplitude CDF inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplaceKernel {
    /// β = 1: ½ ln(1 + x²)
    One,
    /// β = 2: ½ (ln(1 + x²) + x²/(1 + x²))
    Two,
    /// β = 1/2: ln((1 + √(1 + x²))/2)
    Half,
}

impl LaplaceKernel {
    pub fn from_beta(beta: f64) -> Result<Self> {
        match beta {
            b if b == 1.0 => Ok(Self::One),
            b if b == 2.0 => Ok(Self::Two),
            b if b == 0.5 => Ok(Self::Half),
            b => Err(Error::Unsupported(format!(
                "no printed inversion kernel for beta = {b}"
            ))),
        }
    }

    /// Finite for every finite x; x² may overflow, so the large-|x| forms
    /// avoid it.
    pub fn eval(self, x: f64) -> f64 {
        let x2 = x * x;
        let half_ln_1p = if x.abs() < 1e150 {
            0.5 * x2.ln_1p()
        } else {
            x.abs().ln()
        };
        match self {
            Self::One => half_ln_1p,
            Self::Two => half_ln_1p + 0.5 / (1.0 + x2.recip()),
            Self::Half => (0.5 * (1.0 + 1f64.hypot(x))).ln(),
        }
    }
}

/// CDF value from Fourier inversion, with the pre-clamp raw estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvertedCdf {
    pub value: f64,
    pub raw: f64,
    /// Set when clamping to [0, 1] moved the estimate by more than 1e-3.
    pub clamp_warning: bool,
}

fn clamp_cdf(raw: f64) -> InvertedCdf {
    let value = raw.clamp(0.0, 1.0);
    InvertedCdf {
        value,
        raw,
        clamp_warning: (value - raw).abs() > 1e-3,
    }
}

/// P(|U| ≤ u) = (2/π) ∫_0^∞ sin ξ/ξ · 1/(1 + L(ξ/u)) dξ.
pub fn fourier_cdf_inversion<K>(kernel: K, u: f64, cfg: &QuadratureConfig) -> Result<InvertedCdf>
where
    K: Fn(f64) -> f64,
{
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("fourier_cdf_inversion", "0 < u < ∞", u));
    }
    let raw = integrate_oscillatory_sine(|xi| 1.0 / (1.0 + kernel(xi / u)), cfg)?
        .require("Fourier CDF inversion")?;
    Ok(clamp_cdf(2.0 / std::f64::consts::PI * raw))
}

/// P(|U| ≤ u) = (2/π) ∫_0^∞ sin ξ/ξ · g(ξ/u) dξ for a symmetric amplitude law
/// and any exponent law.
pub fn fourier_abs_cdf(
    exp_law: ExponentLaw,
    amp_law: AmplitudeLaw,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<InvertedCdf> {
    if !amp_law.is_symmetric() {
        return Err(Error::Unsupported(
            "Fourier |U| inversion needs a symmetric amplitude law".into(),
        ));
    }
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("fourier_abs_cdf", "0 < u < ∞", u));
    }
    exp_law.validate()?;
    amp_law.validate()?;
    let mut failure = None;
    let raw = integrate_oscillatory_sine(
        |xi| match stationary_transform(exp_law, amp_law, xi / u) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        cfg,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(clamp_cdf(
        2.0 / std::f64::consts::PI * raw.require("Fourier |U| inversion")?,
    ))
}

/// Gil-Pelaez inversion F(u) = ½ − (1/π) ∫_0^∞ Im(e^{−iξu} φ(ξ))/ξ dξ for a
/// characteristic function φ.
pub fn gil_pelaez_cdf<C>(char_fn: C, u: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    C: Fn(f64) -> Complex64,
{
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("gil_pelaez_cdf", "0 < u < ∞", u));
    }
    let integrand = |xi: f64| {
        if xi == 0.0 {
            // Limit: −u + Im φ'(0) is finite; one point does not matter.
            return 0.0;
        }
        (Complex64::new(0.0, -xi * u).exp() * char_fn(xi)).im / xi
    };
    let r = integrate_half_periods(integrand, std::f64::consts::PI / u, cfg)?
        .require("Gil-Pelaez inversion")?;
    Ok(0.5 - r / std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{lower_incomplete_gamma_regularized, EULER_GAMMA};

    fn tight() -> QuadratureConfig {
        QuadratureConfig::with_tolerances(1e-14, 1e-13)
    }

    fn quadrature_exponent_integral(law: AmplitudeLaw, s: f64) -> f64 {
        integrate_finite(
            |x| {
                if x == 0.0 {
                    0.0
                } else {
                    (1.0 - amplitude_transform(law, x).unwrap()) / x
                }
            },
            0.0,
            s,
            &tight(),
        )
        .unwrap()
        .value
    }

    const ALL_LAWS: [AmplitudeLaw; 7] = [
        AmplitudeLaw::DeterministicOne,
        AmplitudeLaw::Gamma { beta: 1.0 },
        AmplitudeLaw::Gamma { beta: 2.0 },
        AmplitudeLaw::Gamma { beta: 0.5 },
        AmplitudeLaw::SymmetricLaplace { beta: 1.0 },
        AmplitudeLaw::SymmetricLaplace { beta: 2.0 },
        AmplitudeLaw::SymmetricLaplace { beta: 0.5 },
    ];

    #[test]
    fn amplitude_transform_values() {
        for law in ALL_LAWS {
            assert_eq!(amplitude_transform(law, 0.0).unwrap(), 1.0);
        }
        assert!(
            (amplitude_transform(AmplitudeLaw::Gamma { beta: 1.0 }, 1.0).unwrap() - 0.5).abs()
                < 1e-15
        );
        let lap = amplitude_transform(AmplitudeLaw::SymmetricLaplace { beta: 2.0 }, 1.0).unwrap();
        assert!((lap - 0.25).abs() < 1e-15);
        assert!(amplitude_transform(AmplitudeLaw::Gamma { beta: 0.0 }, 1.0).is_err());
        assert!(amplitude_transform(AmplitudeLaw::DeterministicOne, -1.0).is_err());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for law in ALL_LAWS {
            for &s in &[0.01, 0.3, 1.0, 3.0, 17.0] {
                let closed = exponent_integral(law, s).unwrap();
                let quad = quadrature_exponent_integral(law, s);
                assert!(
                    (closed - quad).abs() < 1e-10,
                    "{law:?} s = {s}: {closed} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn general_beta_uses_quadrature() {
        for law in [
            AmplitudeLaw::Gamma { beta: 1.7 },
            AmplitudeLaw::SymmetricLaplace { beta: 0.3 },
        ] {
            for &s in &[0.5, 4.0, 250.0] {
                let v = exponent_integral(law, s).unwrap();
                let q = quadrature_exponent_integral(law, s);
                assert!((v - q).abs() < 1e-9, "{law:?} s = {s}");
            }
        }
    }

    #[test]
    fn exponent_integral_reference_points() {
        for law in ALL_LAWS {
            assert_eq!(exponent_integral(law, 0.0).unwrap(), 0.0);
        }
        let e = std::f64::consts::E;
        let v = exponent_integral(AmplitudeLaw::Gamma { beta: 1.0 }, e - 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stationary_transform_reference_points() {
        let e = std::f64::consts::E;
        for law in ALL_LAWS {
            for exp in [
                ExponentLaw::Fixed { a: 0.7 },
                ExponentLaw::GammaMixed { alpha: 2.0 },
            ] {
                assert_eq!(stationary_transform(exp, law, 0.0).unwrap(), 1.0);
            }
        }
        let g = stationary_transform(
            ExponentLaw::GammaMixed { alpha: 1.0 },
            AmplitudeLaw::Gamma { beta: 1.0 },
            e - 1.0,
        )
        .unwrap();
        assert!((g - 0.5).abs() < 1e-15);
        let s = 100.0;
        let exact = stationary_transform(
            ExponentLaw::GammaMixed { alpha: 1.0 },
            AmplitudeLaw::DeterministicOne,
            s,
        )
        .unwrap();
        let asymptote = 1.0 / (1.0 + EULER_GAMMA + f64::ln(s));
        assert!((exact - asymptote).abs() < 2e-3);
    }

    #[test]
    fn stationary_transform_is_completely_monotone_on_a_grid() {
        for law in ALL_LAWS.iter().filter(|l| !l.is_symmetric()) {
            for exp in [
                ExponentLaw::Fixed { a: 1.3 },
                ExponentLaw::GammaMixed { alpha: 0.6 },
            ] {
                let g: Vec<f64> = (0..40)
                    .map(|k| stationary_transform(exp, *law, 0.25 * k as f64).unwrap())
                    .collect();
                for w in g.windows(3) {
                    assert!(w[1] < w[0]);
                    assert!(w[2] - 2.0 * w[1] + w[0] > 0.0);
                }
            }
        }
    }

    #[test]
    fn expansion_coefficients() {
        assert_eq!(small_s_expansion_coeffs(2).unwrap(), vec![1.0, -0.25]);
        let c = small_s_expansion_coeffs(6).unwrap();
        assert!((c[2] - 1.0 / 18.0).abs() < 1e-17);
        let s: f64 = 0.1;
        let series: f64 = c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck * s.powi(k as i32 + 1))
            .sum();
        let exact = exponent_integral(AmplitudeLaw::DeterministicOne, s).unwrap();
        assert!((series - exact).abs() < 1e-9);
        assert!(small_s_expansion_coeffs(1).is_err());
        assert!(small_s_expansion_coeffs(21).is_err());
    }

    #[test]
    fn two_term_tail_is_aleph() {
        let approx = exponential_sum_tail(2, 1.0).unwrap();
        let mut rates: Vec<f64> = approx.rates.iter().map(|r| r.re).collect();
        rates.sort_by(f64::total_cmp);
        assert!((rates[0] - (SQRT_8 - 2.0)).abs() < 1e-13);
        assert!((rates[1] - (SQRT_8 + 2.0)).abs() < 1e-13);
        for k in 0..=100 {
            let u = 0.1 * k as f64;
            assert!(
                (approx.density(u) - tail_density_aleph(u)).abs() < 1e-12,
                "u = {u}"
            );
            assert!((approx.cdf(u) - tail_cdf_xi(u)).abs() < 1e-12);
        }
        assert!(approx.density(0.0).abs() < 1e-15);
    }

    #[test]
    fn higher_order_tails_are_real_and_decaying() {
        for n in 3..=20 {
            let approx = exponential_sum_tail(n, 1.0).unwrap();
            assert_eq!(approx.rates.len(), n);
            assert!(approx.rates.iter().all(|r| r.re > 0.0));
            let total: Complex64 = approx
                .rates
                .iter()
                .zip(&approx.weights)
                .map(|(r, w)| w * (-r * 0.7).exp())
                .sum();
            assert!(total.im.abs() < 1e-12, "n = {n}");
        }
        assert!(matches!(
            exponential_sum_tail(4, 2.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn aleph_and_xi() {
        assert_eq!(tail_density_aleph(0.0), 0.0);
        let expected = ((-(SQRT_8 - 2.0)).exp() - (-(SQRT_8 + 2.0)).exp()) / 2f64.sqrt();
        assert!((tail_density_aleph(1.0) - expected).abs() < 1e-15);
        assert!((tail_density_aleph(1.0) - 0.3032).abs() < 1e-3);
        let h = 1e-5;
        let fd = (tail_cdf_xi(1.0 + h) - tail_cdf_xi(1.0 - h)) / (2.0 * h);
        assert!((fd - tail_density_aleph(1.0)).abs() < 1e-6);
        assert!((tail_cdf_xi(60.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inversion_with_zero_kernel_is_one() {
        let v = fourier_cdf_inversion(|_| 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-8);
        assert!(!v.clamp_warning);
    }

    #[test]
    fn inversion_matches_brute_force_half_periods() {
        // Composite Simpson on each of 10^5 half-periods; the alternating tail
        // is handled by averaging the last two partial sums.
        let kernel = LaplaceKernel::One;
        let h = |xi: f64| 1.0 / (1.0 + kernel.eval(xi));
        let f = |x: f64| if x == 0.0 { h(0.0) } else { x.sin() / x * h(x) };
        let pi = std::f64::consts::PI;
        let panels = 64;
        let mut sum = 0.0;
        let mut last = 0.0;
        for k in 0..100_000 {
            let a = k as f64 * pi;
            let step = pi / panels as f64;
            let mut s = f(a) + f(a + pi);
            for i in 1..panels {
                s += f(a + i as f64 * step) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            last = sum;
            sum += s * step / 3.0;
        }
        let oracle = 2.0 / pi * 0.5 * (sum + last);
        let v =
            fourier_cdf_inversion(|x| kernel.eval(x), 1.0, &QuadratureConfig::default()).unwrap();
        assert!((v.value - oracle).abs() < 1e-4, "{} vs {oracle}", v.value);
    }

    #[test]
    fn kernels_are_half_the_gamma_exponent_integrals() {
        for (beta, kernel) in [
            (1.0, LaplaceKernel::One),
            (2.0, LaplaceKernel::Two),
            (0.5, LaplaceKernel::Half),
        ] {
            assert_eq!(LaplaceKernel::from_beta(beta).unwrap(), kernel);
            for &x in &[0.2, 1.0, 5.0] {
                let i = exponent_integral(AmplitudeLaw::SymmetricLaplace { beta }, x).unwrap();
                assert!((kernel.eval(x) - i).abs() < 1e-14);
            }
        }
        assert!(LaplaceKernel::from_beta(3.0).is_err());
    }

    #[test]
    fn kernels_survive_overflowing_squares() {
        for kernel in [LaplaceKernel::One, LaplaceKernel::Two, LaplaceKernel::Half] {
            let (x, near) = (1e200, 1e149);
            let big = kernel.eval(x);
            assert!(big.is_finite(), "{kernel:?}");
            // All three grow like ln x (plus a constant) for large x.
            let slope = (big - kernel.eval(near)) / (x / near).ln();
            assert!((slope - 1.0).abs() < 1e-12, "{kernel:?}: {slope}");
        }
        assert_eq!(LaplaceKernel::Two.eval(0.0), 0.0);
    }

    #[test]
    fn inversion_tends_to_one_for_large_u() {
        let v = fourier_cdf_inversion(
            |x| LaplaceKernel::One.eval(x),
            1e6,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(v.value > 0.99);
    }

    #[test]
    fn general_inversion_agrees_with_kernel_form() {
        let cfg = QuadratureConfig::default();
        let a = fourier_abs_cdf(
            ExponentLaw::GammaMixed { alpha: 1.0 },
            AmplitudeLaw::SymmetricLaplace { beta: 2.0 },
            1.3,
            &cfg,
        )
        .unwrap();
        let b = fourier_cdf_inversion(|x| LaplaceKernel::Two.eval(x), 1.3, &cfg).unwrap();
        assert!((a.value - b.value).abs() < 1e-7);
        assert!(fourier_abs_cdf(
            ExponentLaw::Fixed { a: 1.0 },
            AmplitudeLaw::Gamma { beta: 1.0 },
            1.0,
            &cfg
        )
        .is_err());
    }

    #[test]
    fn gamma_limit_law_by_inversion() {
        // (1 + s)^{−α} is the Laplace transform of Gamma(α); its characteristic
        // function is (1 − iξ)^{−α}.
        let cfg = QuadratureConfig::with_tolerances(1e-10, 1e-9);
        let alpha = 1.7;
        for &u in &[0.5, 1.5, 4.0] {
            let f = gil_pelaez_cdf(|xi| Complex64::new(1.0, -xi).powf(-alpha), u, &cfg).unwrap();
            let exact = lower_incomplete_gamma_regularized(alpha, u).unwrap();
            assert!((f - exact).abs() < 1e-6, "u = {u}: {f} vs {exact}");
        }
    }
}
