//! Unit amplitudes: fixed exponent (closed form on [0, 2], delay equation
//! beyond) and Gamma(1)-mixed exponent (Volterra-function pieces plus the
//! exponential-sum tail).

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_finite, QuadratureConfig};
use crate::special::{fransen_wrigge_phi, log_gamma, volterra_nu, EULER_GAMMA};
use crate::transforms::{tail_cdf_xi, tail_density_aleph};

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain("exponent A", "A > 0", a))
    }
}

fn inner_cfg() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-13, 1e-12)
}

/// e^{−γA}/Γ(A), the density prefactor on [0, 1].
fn unit_constant(a: f64) -> Result<f64> {
    Ok((-EULER_GAMMA * a - log_gamma(a)?).exp())
}

/// A·∫_1^u (η−1)^{A−1} η^{−A} dη for 1 ≤ u ≤ 2.
///
/// With t = (η−1)^A this is ∫_0^{(u−1)^A} (1 + t^{1/A})^{−A} dt, which has
/// no endpoint singularity.
fn second_interval_integral(a: f64, u: f64) -> Result<f64> {
    let upper = (u - 1.0).powf(a);
    integrate_finite(
        |t: f64| (-a * t.powf(1.0 / a).ln_1p()).exp(),
        0.0,
        upper,
        &inner_cfg(),
    )?
    .require("fixed-A second-interval integral")
}

/// Closed-form density for u ≤ 2.
fn fixed_a_density_closed(a: f64, u: f64) -> Result<f64> {
    if u < 0.0 {
        return Ok(0.0);
    }
    let c = unit_constant(a)?;
    if u == 0.0 {
        return Ok(match a {
            a if a < 1.0 => f64::INFINITY,
            a if a == 1.0 => c,
            _ => 0.0,
        });
    }
    let base = c * u.powf(a - 1.0);
    if u <= 1.0 {
        Ok(base)
    } else {
        Ok(base * (1.0 - second_interval_integral(a, u)?))
    }
}

/// Largest admissible delay-equation step.
pub const MAX_DDE_STEP: f64 = 0.01;
/// Default delay-equation step.
pub const DEFAULT_DDE_STEP: f64 = 1e-3;

/// Density tabulated on a uniform grid over [0, u_max].
#[derive(Debug, Clone, PartialEq)]
pub struct DdeTable {
    pub a: f64,
    pub step: f64,
    /// Grid points per unit interval.
    pub per_unit: usize,
    pub values: Vec<f64>,
}

impl DdeTable {
    pub fn u_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as f64 * self.step, v))
    }

    /// Cubic interpolation using nodes of the same unit interval only, so
    /// the kinks at the integers are never straddled.
    pub fn interpolate(&self, u: f64) -> Result<f64> {
        if u < 0.0 {
            return Ok(0.0);
        }
        if u > self.u_max() * (1.0 + 1e-12) {
            return Err(domain("DDE table lookup", "u <= u_max", u));
        }
        let m = self.per_unit;
        let x = u / self.step;
        let mut i = (x.floor() as usize).min(self.values.len() - 2);
        let unit_start = (i / m) * m;
        let unit_end = (unit_start + m).min(self.values.len() - 1);
        // A point exactly on an integer belongs to the interval it closes.
        if i == unit_end {
            i -= 1;
        }
        let lo = i.saturating_sub(1).max(unit_start).min(unit_end - 3);
        let nodes = [lo, lo + 1, lo + 2, lo + 3];
        let mut value = 0.0;
        for (k, &nk) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (l, &nl) in nodes.iter().enumerate() {
                if l != k {
                    w *= (x - nl as f64) / (nk as f64 - nl as f64);
                }
            }
            value += w * self.values[nk];
        }
        Ok(value)
    }

    /// ∫_0^{u_max} f: exact on [0, 1], composite Simpson beyond.
    pub fn mass(&self) -> Result<f64> {
        let m = self.per_unit;
        let mut total = fixed_a_cdf_unit(self.a, 1.0)?;
        let units = (self.values.len() - 1) / m;
        for n in 1..units {
            let start = n * m;
            let mut s = self.values[start] + self.values[start + m];
            for i in 1..m {
                s += self.values[start + i] * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            total += s * self.step / 3.0;
        }
        Ok(total)
    }
}

fn fixed_a_cdf_unit(a: f64, u: f64) -> Result<f64> {
    Ok((-EULER_GAMMA * a - log_gamma(a + 1.0)?).exp() * u.max(0.0).powf(a))
}

/// Method of steps for u f' + f = A (f(u) − f(u−1)).
///
/// Written as d/du (u^{1−A} f) = −A u^{−A} f(u−1), so on [n, n+1]
/// `u^{1−A} f(u) = n^{1−A} f(n) − A ∫_n^u η^{−A} f(η−1) dη`. The closed forms
/// fill [0, 2]; each later cell is integrated by Simpson's rule with the
/// mid-cell delayed value interpolated from the previous interval.
pub fn solve_delay_dde(a: f64, u_max: f64, step: f64) -> Result<DdeTable> {
    check_a(a)?;
    if !(u_max > 2.0) || !u_max.is_finite() {
        return Err(domain("solve_delay_dde", "u_max > 2", u_max));
    }
    if !(step > 0.0) || step > MAX_DDE_STEP {
        return Err(Error::InvalidConfig(format!(
            "DDE step must be in (0, {MAX_DDE_STEP}], got {step}"
        )));
    }
    let per_unit = {
        let m = (1.0 / step).round() as usize;
        m + m % 2
    };
    let h = 1.0 / per_unit as f64;
    let units = u_max.ceil() as usize;
    let mut table = DdeTable {
        a,
        step: h,
        per_unit,
        values: Vec::with_capacity(units * per_unit + 1),
    };
    for i in 0..=2 * per_unit {
        table.values.push(fixed_a_density_closed(a, i as f64 * h)?);
    }
    for n in 2..units {
        let start = n * per_unit;
        let u_n = n as f64;
        let anchor = u_n.powf(1.0 - a) * table.values[start];
        let prev = DdeTable {
            values: table.values[..=start].to_vec(),
            ..table.clone()
        };
        let mut acc = 0.0;
        for i in 0..per_unit {
            let u0 = u_n + i as f64 * h;
            let u1 = u0 + h;
            let um = u0 + 0.5 * h;
            let f0 = table.values[start - per_unit + i];
            let f1 = table.values[start - per_unit + i + 1];
            let fm = prev.interpolate(um - 1.0)?;
            acc += h / 6.0 * (u0.powf(-a) * f0 + 4.0 * um.powf(-a) * fm + u1.powf(-a) * f1);
            table.values.push((anchor - a * acc) / u1.powf(1.0 - a));
        }
    }
    Ok(table)
}

/// Result of the step-halving comparison on [2, 3].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdeRichardson {
    pub max_gap: f64,
}

/// Solve with `step` and `step/2` and report the largest difference on [2, 3].
pub fn dde_richardson_check(a: f64, step: f64) -> Result<DdeRichardson> {
    let coarse = solve_delay_dde(a, 3.0, step)?;
    let fine = solve_delay_dde(a, 3.0, step / 2.0)?;
    let mut max_gap: f64 = 0.0;
    for (u, v) in coarse.grid().filter(|(u, _)| *u >= 2.0) {
        max_gap = max_gap.max((fine.interpolate(u)? - v).abs());
    }
    Ok(DdeRichardson { max_gap })
}

/// Fixed-A density for unit amplitudes. Beyond u = 2 a delay-equation table
/// is solved on demand; use [`FixedADeterministic`] to reuse it.
pub fn fixed_a_density(a: f64, u: f64) -> Result<f64> {
    check_a(a)?;
    if u <= 2.0 {
        return fixed_a_density_closed(a, u);
    }
    solve_delay_dde(a, u.ceil().max(3.0), DEFAULT_DDE_STEP)?.interpolate(u)
}

/// Fixed-A CDF for unit amplitudes.
pub fn fixed_a_cdf(a: f64, u: f64) -> Result<f64> {
    FixedADeterministic::new(a, u.ceil().max(3.0), DEFAULT_DDE_STEP)?.cdf(u)
}

/// Fixed-A unit-amplitude law with its delay-equation table.
#[derive(Debug, Clone)]
pub struct FixedADeterministic {
    table: DdeTable,
}

impl FixedADeterministic {
    pub fn new(a: f64, u_max: f64, step: f64) -> Result<Self> {
        Ok(Self {
            table: solve_delay_dde(a, u_max.max(3.0), step)?,
        })
    }

    pub fn a(&self) -> f64 {
        self.table.a
    }

    pub fn table(&self) -> &DdeTable {
        &self.table
    }

    /// Density; beyond the table the density is below 1e-12 for every
    /// practical table length and is extended by zero.
    pub fn density(&self, u: f64) -> Result<f64> {
        if u <= 2.0 {
            fixed_a_density_closed(self.a(), u)
        } else if u <= self.table.u_max() {
            self.table.interpolate(u)
        } else {
            Ok(0.0)
        }
    }

    /// F(u) = F(u−1) + u f(u)/A for u > 1, from u f(u) = A ∫_{u−1}^u f.
    pub fn cdf(&self, u: f64) -> Result<f64> {
        let a = self.a();
        if u <= 0.0 {
            return Ok(0.0);
        }
        if u <= 1.0 {
            return fixed_a_cdf_unit(a, u);
        }
        if u > self.table.u_max() {
            return Ok(1.0);
        }
        let value = self.cdf(u - 1.0)? + u * self.density(u)? / a;
        Ok(value.min(1.0))
    }
}

/// e^{−(1+γ)}.
fn mixed_scale() -> f64 {
    (-(1.0 + EULER_GAMMA)).exp()
}

/// Gamma(1)-mixed exponent, unit amplitudes.
///
/// (0, 1]: φ(cu)/u; (1, 2): φ(cu)/u − φ(c(u−1)) + (1/u)∫_1^u φ(cu(1−1/ξ)) dξ;
/// u ≥ 2: ℵ(u). Here c = e^{−(1+γ)}.
pub fn mixed_alpha1_density(u: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(domain("mixed_alpha1_density", "0 < u < ∞", u));
    }
    let c = mixed_scale();
    if u <= 1.0 {
        return Ok(fransen_wrigge_phi(c * u)? / u);
    }
    if u >= 2.0 {
        return Ok(tail_density_aleph(u));
    }
    mixed_alpha1_density_second(u)
}

/// The (1, 2) formula; at u = 1 it reduces to φ(c)/u since φ(0) = 0.
fn mixed_alpha1_density_second(u: f64) -> Result<f64> {
    let c = mixed_scale();
    let phi = |z: f64| {
        if z > 0.0 {
            fransen_wrigge_phi(z)
        } else {
            Ok(0.0)
        }
    };
    let inner = integrate_finite(
        |xi: f64| {
            let z = c * u * (1.0 - 1.0 / xi);
            if z > 0.0 {
                fransen_wrigge_phi(z).unwrap_or(f64::NAN)
            } else {
                0.0
            }
        },
        1.0,
        u,
        &QuadratureConfig::with_tolerances(1e-11, 1e-10),
    )?
    .require("mixed alpha=1 density integral")?;
    Ok(phi(c * u)? / u - phi(c * (u - 1.0))? + inner / u)
}

/// How the tail CDF is attached at u = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailPatch {
    /// F(2) + Ξ(u) − Ξ(2), nondecreasing.
    #[default]
    Increasing,
    /// F(2) + Ξ(2) − Ξ(u), exactly as printed; it decreases in u.
    AsPrinted,
}

/// (1, 2] piece: ν(cu) − (u−1)ν(c(u−1)) + ∫_1^u ν(cu(1−1/ξ)) dξ.
fn mixed_alpha1_cdf_second(u: f64) -> Result<f64> {
    let c = mixed_scale();
    let inner = integrate_finite(
        |xi: f64| {
            let z = c * u * (1.0 - 1.0 / xi);
            if z > 0.0 {
                volterra_nu(z).unwrap_or(f64::NAN)
            } else {
                0.0
            }
        },
        1.0,
        u,
        &QuadratureConfig::with_tolerances(1e-11, 1e-10),
    )?
    .require("mixed alpha=1 CDF integral")?;
    let shifted = if u > 1.0 {
        (u - 1.0) * volterra_nu(c * (u - 1.0))?
    } else {
        0.0
    };
    Ok(volterra_nu(c * u)? - shifted + inner)
}

/// Mixed α = 1 CDF for unit amplitudes; the tail is clamped to [0, 1].
pub fn mixed_alpha1_cdf(u: f64, patch: TailPatch) -> Result<f64> {
    if !(u >= 0.0) || u.is_nan() {
        return Err(domain("mixed_alpha1_cdf", "u >= 0", u));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if u <= 1.0 {
        return volterra_nu(mixed_scale() * u);
    }
    if u <= 2.0 {
        return mixed_alpha1_cdf_second(u);
    }
    let f2 = mixed_alpha1_cdf_at_two()?;
    let value = match patch {
        TailPatch::Increasing => f2 + tail_cdf_xi(u) - tail_cdf_xi(2.0),
        TailPatch::AsPrinted => f2 + tail_cdf_xi(2.0) - tail_cdf_xi(u),
    };
    Ok(value.clamp(0.0, 1.0))
}

/// F(2) of the mixed α = 1 law, cached.
pub fn mixed_alpha1_cdf_at_two() -> Result<f64> {
    use std::sync::OnceLock;
    static F2: OnceLock<f64> = OnceLock::new();
    if let Some(v) = F2.get() {
        return Ok(*v);
    }
    let v = mixed_alpha1_cdf_second(2.0)?;
    Ok(*F2.get_or_init(|| v))
}
