//! Adaptive quadrature kernel.
//!
//! Three entry points cover every integral the analytic side needs:
//!
//! * [`integrate_finite`]: globally adaptive Gauss–Kronrod (7/15) on `[a, b]`.
//!   Endpoint power singularities are resolved by repeated bisection of the
//!   panel with the largest error, which concentrates panels geometrically
//!   toward the singular endpoint.
//! * [`integrate_semi_infinite`]: panel summation on `[a, ∞)` with panels that
//!   grow geometrically, stopped once consecutive panels are negligible.
//! * [`integrate_oscillatory_sine`]: `∫_0^∞ sin(ξ)/ξ · h(ξ) dξ` by half-period
//!   decomposition plus Euler (repeated-averaging) acceleration of the
//!   alternating partial sums.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub oscillatory_max_half_periods: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
            oscillatory_max_half_periods: 100_000,
        }
    }
}

impl QuadratureConfig {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_subdivisions: usize,
        oscillatory_max_half_periods: usize,
    ) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
            oscillatory_max_half_periods,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default budgets with the given tolerances.
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 || self.oscillatory_max_half_periods == 0 {
            return Err(Error::InvalidConfig(
                "subdivision budgets must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadratureResult {
    /// The value if converged, otherwise a `NonConvergence` error naming `what`.
    pub fn require(self, what: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence(format!(
                "{what} (estimate {:e}, error {:e})",
                self.value, self.error_estimate
            )))
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFiniteIntegrand(x))
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error })
}

/// Adaptive estimate of `∫_a^b f(x) dx`.
///
/// Returns `converged = false` when the subdivision budget runs out (or panels
/// shrink below floating-point resolution) before the tolerance is met. A
/// non-finite integrand value is a hard error.
pub fn integrate_finite<F>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !(a <= b) {
        return Err(Error::InvalidConfig(format!(
            "integration bounds must satisfy a <= b (a = {a}, b = {b})"
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        });
    }
    let first = kronrod15(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    let mut subdivisions = 1;
    while subdivisions < cfg.max_subdivisions {
        if error <= cfg.target(value) {
            // The running sums drift; confirm against a fresh sum.
            value = heap.iter().map(|p: &Panel| p.value).sum();
            error = heap.iter().map(|p: &Panel| p.error).sum();
            if error <= cfg.target(value) {
                break;
            }
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        // Below this width the outer Kronrod nodes collide with the panel ends.
        let resolution = 1024.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if worst.b - worst.a <= resolution {
            let (panel, evals) = endpoint_tail(&mut f, worst, a, b)?;
            evaluations += evals;
            heap.push(panel);
            break;
        }
        let left = kronrod15(&mut f, worst.a, mid)?;
        let right = kronrod15(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // Re-sum to remove drift from the incremental updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        converged: error <= cfg.target(value),
        evaluations,
    })
}

/// Replaces an unsplittable panel sitting on a singular endpoint by the sum of
/// the geometric series of its would-be dyadic sub-panels. The ratio comes from
/// the next two dyadic panels away from the endpoint; for an integrand behaving
/// like `|x - endpoint|^p` it equals `2^{-(p+1)}`.
fn endpoint_tail<F: FnMut(f64) -> f64>(
    f: &mut F,
    panel: Panel,
    a: f64,
    b: f64,
) -> Result<(Panel, usize)> {
    let width = panel.b - panel.a;
    let (near, far) = if panel.a == a && panel.b + 3.0 * width <= b {
        (
            kronrod15(f, panel.b, panel.b + width)?,
            kronrod15(f, panel.b + width, panel.b + 3.0 * width)?,
        )
    } else if panel.b == b && panel.a - 3.0 * width >= a {
        (
            kronrod15(f, panel.a - width, panel.a)?,
            kronrod15(f, panel.a - 3.0 * width, panel.a - width)?,
        )
    } else {
        return Ok((panel, 0));
    };
    let ratio = near.value / far.value;
    if !(ratio > 0.0 && ratio < 1.0) || !ratio.is_finite() {
        return Ok((panel, 30));
    }
    let value = near.value * ratio / (1.0 - ratio);
    Ok((
        Panel {
            value,
            error: (value - panel.value).abs() * 0.1 + near.error + far.error,
            ..panel
        },
        30,
    ))
}

const SEMI_INFINITE_MAX_PANELS: usize = 400;
const PANEL_GROWTH: f64 = 1.5;

/// Estimate of `∫_a^∞ f(x) dx` for an integrand that eventually decays at
/// least like `exp(-decay_hint · x)`.
///
/// Panels start with width `1/decay_hint` and grow geometrically. Summation
/// stops after two consecutive panels each contribute less than a tenth of the
/// tolerance.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    decay_hint: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !(decay_hint > 0.0) || !decay_hint.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "decay_hint must be positive, got {decay_hint}"
        )));
    }
    let panel_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / 10.0,
        ..*cfg
    };
    let mut width = 1.0 / decay_hint;
    let mut lo = a;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut quiet = 0;
    let mut all_converged = true;
    for _ in 0..SEMI_INFINITE_MAX_PANELS {
        let hi = lo + width;
        let panel = integrate_finite(&mut f, lo, hi, &panel_cfg)?;
        evaluations += panel.evaluations;
        value += panel.value;
        error += panel.error_estimate;
        all_converged &= panel.converged;
        if panel.value.abs() < cfg.target(value) / 10.0 {
            quiet += 1;
            if quiet >= 2 {
                let error = error + panel.value.abs();
                return Ok(QuadratureResult {
                    value,
                    error_estimate: error,
                    converged: all_converged && error <= cfg.target(value),
                    evaluations,
                });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= PANEL_GROWTH;
    }
    Ok(QuadratureResult {
        value,
        error_estimate: error.max(cfg.target(value) * 10.0),
        converged: false,
        evaluations,
    })
}

/// Minimum number of half-periods summed before acceleration is trusted.
const OSC_MIN_TERMS: usize = 12;
/// Number of trailing partial sums fed into the averaging table.
const OSC_WINDOW: usize = 24;

/// Repeated averaging of a run of partial sums (the Euler transform of the
/// underlying alternating series).
fn euler_average(partial_sums: &[f64]) -> f64 {
    let mut row = partial_sums.to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}

/// `∫_0^∞ sin(ξ)/ξ · h(ξ) dξ` for a slowly varying positive `h`.
///
/// The integral is split at multiples of π; the alternating half-period
/// contributions are summed and accelerated by repeated averaging. Converged
/// when two successive accelerated estimates differ by less than the tolerance.
pub fn integrate_oscillatory_sine<H>(mut h: H, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    H: FnMut(f64) -> f64,
{
    integrate_half_periods(
        |x: f64| {
            let sinc = if x == 0.0 { 1.0 } else { x.sin() / x };
            sinc * h(x)
        },
        std::f64::consts::PI,
        cfg,
    )
}

/// `∫_0^∞ f(x) dx` for an integrand whose sign alternates on consecutive
/// intervals of length `half_period`, with the same acceleration as
/// [`integrate_oscillatory_sine`].
pub fn integrate_half_periods<F>(
    mut integrand: F,
    half_period: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !(half_period > 0.0) || !half_period.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "half_period must be positive, got {half_period}"
        )));
    }
    let term_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / 100.0,
        rel_tol: cfg.rel_tol / 100.0,
        ..*cfg
    };
    let mut partial_sums: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut evaluations = 0;
    let mut term_error = 0.0;
    let mut previous: Option<f64> = None;
    let mut last_delta = f64::INFINITY;
    for k in 0..cfg.oscillatory_max_half_periods {
        let lo = k as f64 * half_period;
        let term = integrate_finite(&mut integrand, lo, lo + half_period, &term_cfg)?;
        evaluations += term.evaluations;
        term_error += term.error_estimate;
        sum += term.value;
        partial_sums.push(sum);
        if partial_sums.len() < OSC_MIN_TERMS {
            continue;
        }
        let start = partial_sums.len().saturating_sub(OSC_WINDOW);
        let estimate = euler_average(&partial_sums[start..]);
        if let Some(prev) = previous {
            let delta = (estimate - prev).abs();
            let tol = cfg.target(estimate);
            if delta < tol && last_delta < tol {
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: delta.max(last_delta) + term_error,
                    converged: true,
                    evaluations,
                });
            }
            last_delta = delta;
        }
        previous = Some(estimate);
    }
    let value = previous.unwrap_or(sum);
    Ok(QuadratureResult {
        value,
        error_estimate: last_delta,
        converged: false,
        evaluations,
    })
}
