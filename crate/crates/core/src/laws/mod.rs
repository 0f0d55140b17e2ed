//! Stationary densities and distribution functions, assembled piecewise over
//! [0, 1], (1, 2] and the tail.

mod deterministic;
mod gamma_amp;
mod laplace_amp;

pub use deterministic::{
    dde_richardson_check, fixed_a_cdf, fixed_a_density, mixed_alpha1_cdf, mixed_alpha1_cdf_at_two,
    mixed_alpha1_density, solve_delay_dde, DdeRichardson, DdeTable, FixedADeterministic, TailPatch,
    DEFAULT_DDE_STEP, MAX_DDE_STEP,
};
pub use gamma_amp::{
    default_density_truncation, gamma_amp_beta1_cdf, gamma_amp_beta1_cdf_fixed_a,
    gamma_amp_beta1_cdf_small_u, gamma_amp_beta1_density, gamma_amp_beta1_density_fixed_a,
    gamma_amp_beta2_cdf, gamma_amp_beta2_cdf_fixed_a, gamma_amp_beta2_density,
    gamma_amp_beta2_density_fixed_a, gamma_amp_beta_half_cdf, gamma_amp_beta_half_cdf_fixed_a,
    gamma_amp_beta_half_density, gamma_amp_beta_half_density_fixed_a, BETA1_CDF_PATCH,
};
pub use laplace_amp::{
    laplace_amp_beta1_density, laplace_amp_beta1_density_fixed_a, laplace_amp_beta2_density,
    laplace_amp_beta2_density_fixed_a, laplace_amp_cdf,
};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::special::SeriesTruncation;
use crate::transforms::{fourier_abs_cdf, stationary_transform, AmplitudeLaw, ExponentLaw};
use rayon::prelude::*;

/// Below this point densities with a 1/u factor are flagged as asymptotic.
pub const ASYMPTOTIC_U: f64 = 1e-8;

/// Which piece of the piecewise construction a point falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    UnitInterval,
    SecondInterval,
    Tail,
}

impl Regime {
    pub fn of(u: f64) -> Self {
        let x = u.abs();
        if x <= 1.0 {
            Regime::UnitInterval
        } else if x <= 2.0 {
            Regime::SecondInterval
        } else {
            Regime::Tail
        }
    }
}

/// Strictly increasing evaluation points with their regimes.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    points: Vec<f64>,
    regimes: Vec<Regime>,
}

impl EvaluationGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("evaluation grid is empty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(
                "evaluation grid has non-finite points".into(),
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig(
                "evaluation grid must be strictly increasing".into(),
            ));
        }
        let regimes = points.iter().map(|&u| Regime::of(u)).collect();
        Ok(Self { points, regimes })
    }

    /// `n ≥ 2` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "grid needs lo < hi and at least 2 points (got {lo}:{hi}:{n})"
            )));
        }
        let h = (hi - lo) / (n - 1) as f64;
        Self::new(
            (0..n)
                .map(|k| if k + 1 == n { hi } else { lo + h * k as f64 })
                .collect(),
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn regimes(&self) -> &[Regime] {
        &self.regimes
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Exponent and amplitude laws of one model, restricted to the supported
/// combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawSpec {
    pub exponent: ExponentLaw,
    pub amplitude: AmplitudeLaw,
}

fn is_one_of(beta: f64, set: &[f64]) -> bool {
    set.contains(&beta)
}

impl LawSpec {
    pub fn new(exponent: ExponentLaw, amplitude: AmplitudeLaw) -> Result<Self> {
        let spec = Self {
            exponent,
            amplitude,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.exponent.validate()?;
        self.amplitude.validate()?;
        use AmplitudeLaw::*;
        use ExponentLaw::*;
        let ok = match (self.exponent, self.amplitude) {
            (_, DeterministicOne) => true,
            (GammaMixed { alpha }, Gamma { beta }) => {
                alpha == 1.0 && is_one_of(beta, &[0.5, 1.0, 2.0])
            }
            (Fixed { .. }, Gamma { beta }) => is_one_of(beta, &[0.5, 2.0]),
            (GammaMixed { alpha }, SymmetricLaplace { beta }) => {
                alpha == 1.0 && is_one_of(beta, &[0.5, 1.0, 2.0])
            }
            (Fixed { .. }, SymmetricLaplace { beta }) => is_one_of(beta, &[0.5, 1.0, 2.0]),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "law combination {}",
                self.describe()
            )))
        }
    }

    /// Short text form, e.g. `exponent=gamma:1 amplitude=laplace:2`.
    pub fn describe(&self) -> String {
        let e = match self.exponent {
            ExponentLaw::Fixed { a } => format!("fixed:{a}"),
            ExponentLaw::GammaMixed { alpha } => format!("gamma:{alpha}"),
        };
        let y = match self.amplitude {
            AmplitudeLaw::DeterministicOne => "det".to_string(),
            AmplitudeLaw::Gamma { beta } => format!("gamma:{beta}"),
            AmplitudeLaw::SymmetricLaplace { beta } => format!("laplace:{beta}"),
        };
        format!("exponent={e} amplitude={y}")
    }

    /// True when CDF values refer to |U| rather than U.
    pub fn cdf_is_of_abs(&self) -> bool {
        self.amplitude.is_symmetric()
    }

    /// E[e^{−sU}], or E[cos(sU)] for symmetric amplitudes.
    pub fn transform(&self, s: f64) -> Result<f64> {
        stationary_transform(self.exponent, self.amplitude, s)
    }
}

/// A density or CDF value, flagged when it comes from the small-u asymptotic
/// regime of a law with a 1/u factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub u: f64,
    pub value: f64,
    pub asymptotic: bool,
}

/// Numerical settings for [`AnalyticLaw`].
#[derive(Debug, Clone, PartialEq)]
pub struct LawOptions {
    pub tail_patch: TailPatch,
    pub truncation: SeriesTruncation,
    pub dde_step: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for LawOptions {
    fn default() -> Self {
        Self {
            tail_patch: TailPatch::default(),
            truncation: default_density_truncation(),
            dde_step: DEFAULT_DDE_STEP,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Density and CDF evaluator for one [`LawSpec`].
#[derive(Debug, Clone)]
pub struct AnalyticLaw {
    spec: LawSpec,
    options: LawOptions,
    fixed_det: Option<FixedADeterministic>,
}

fn unsupported(spec: &LawSpec, what: &str) -> Error {
    Error::Unsupported(format!("{what} for {}", spec.describe()))
}

impl AnalyticLaw {
    pub fn new(spec: LawSpec, options: LawOptions) -> Result<Self> {
        spec.validate()?;
        let fixed_det = match (spec.exponent, spec.amplitude) {
            (ExponentLaw::Fixed { a }, AmplitudeLaw::DeterministicOne) => {
                // The density decays faster than any exponential past u ≈ A.
                let u_max = (4.0 * a + 8.0).max(12.0).ceil();
                Some(FixedADeterministic::new(a, u_max, options.dde_step)?)
            }
            _ => None,
        };
        Ok(Self {
            spec,
            options,
            fixed_det,
        })
    }

    pub fn spec(&self) -> &LawSpec {
        &self.spec
    }

    pub fn options(&self) -> &LawOptions {
        &self.options
    }

    /// Whether the density has a 1/u factor at the origin.
    fn blows_up_at_zero(&self) -> bool {
        use AmplitudeLaw::*;
        matches!(
            (self.spec.exponent, self.spec.amplitude),
            (ExponentLaw::GammaMixed { .. }, DeterministicOne)
                | (ExponentLaw::GammaMixed { .. }, Gamma { .. })
                | (ExponentLaw::GammaMixed { .. }, SymmetricLaplace { .. })
        )
    }

    fn point(&self, u: f64, value: f64) -> PointValue {
        PointValue {
            u,
            value,
            asymptotic: self.blows_up_at_zero() && u.abs() < ASYMPTOTIC_U,
        }
    }

    /// Density of U; +∞ at the origin for laws with a 1/u factor.
    pub fn density(&self, u: f64) -> Result<PointValue> {
        use AmplitudeLaw::*;
        use ExponentLaw::*;
        let spec = &self.spec;
        let trunc = &self.options.truncation;
        if u == 0.0 && self.blows_up_at_zero() {
            return Ok(self.point(u, f64::INFINITY));
        }
        if !spec.amplitude.is_symmetric() && u <= 0.0 {
            if u < 0.0 {
                return Ok(self.point(u, 0.0));
            }
            if let Some(law) = &self.fixed_det {
                return Ok(self.point(u, law.density(u)?));
            }
        }
        let value = match (spec.exponent, spec.amplitude) {
            (Fixed { .. }, DeterministicOne) => {
                self.fixed_det.as_ref().expect("table").density(u)?
            }
            (GammaMixed { alpha }, DeterministicOne) if alpha == 1.0 => mixed_alpha1_density(u)?,
            (GammaMixed { .. }, DeterministicOne) => {
                return Err(unsupported(spec, "closed-form density (alpha != 1)"))
            }
            (GammaMixed { .. }, Gamma { beta }) => match beta {
                b if b == 1.0 => gamma_amp_beta1_density(u)?,
                b if b == 0.5 => gamma_amp_beta_half_density(u)?,
                _ => gamma_amp_beta2_density(u, trunc)?,
            },
            (Fixed { a }, Gamma { beta }) => {
                if beta == 0.5 {
                    gamma_amp_beta_half_density_fixed_a(a, u)?
                } else {
                    gamma_amp_beta2_density_fixed_a(a, u)?
                }
            }
            (GammaMixed { .. }, SymmetricLaplace { beta }) => match beta {
                b if b == 1.0 => laplace_amp_beta1_density(u)?,
                b if b == 2.0 => laplace_amp_beta2_density(u, trunc)?,
                _ => return Err(unsupported(spec, "density (only the |U| CDF is available)")),
            },
            (Fixed { a }, SymmetricLaplace { beta }) => match beta {
                b if b == 1.0 => laplace_amp_beta1_density_fixed_a(a, u)?,
                b if b == 2.0 => laplace_amp_beta2_density_fixed_a(a, u, trunc)?,
                _ => return Err(unsupported(spec, "density (only the |U| CDF is available)")),
            },
        };
        Ok(self.point(u, value))
    }

    /// P(U ≤ u), or P(|U| ≤ u) for symmetric amplitudes.
    pub fn cdf(&self, u: f64) -> Result<PointValue> {
        use AmplitudeLaw::*;
        use ExponentLaw::*;
        let spec = &self.spec;
        let point = |value| PointValue {
            u,
            value,
            asymptotic: false,
        };
        if u <= 0.0 {
            return Ok(point(0.0));
        }
        let value = match (spec.exponent, spec.amplitude) {
            (Fixed { .. }, DeterministicOne) => self.fixed_det.as_ref().expect("table").cdf(u)?,
            (GammaMixed { alpha }, DeterministicOne) if alpha == 1.0 => {
                mixed_alpha1_cdf(u, self.options.tail_patch)?
            }
            (GammaMixed { .. }, DeterministicOne) => {
                return Err(unsupported(spec, "closed-form CDF (alpha != 1)"))
            }
            (GammaMixed { .. }, Gamma { beta }) => match beta {
                b if b == 1.0 => gamma_amp_beta1_cdf(u)?,
                b if b == 0.5 => gamma_amp_beta_half_cdf(u)?,
                _ => gamma_amp_beta2_cdf(u, &self.options.truncation)?,
            },
            (Fixed { a }, Gamma { beta }) => {
                if beta == 0.5 {
                    gamma_amp_beta_half_cdf_fixed_a(a, u)?
                } else {
                    gamma_amp_beta2_cdf_fixed_a(a, u)?
                }
            }
            (GammaMixed { .. }, SymmetricLaplace { beta }) => {
                laplace_amp_cdf(beta, u, &self.options.quadrature)?.value
            }
            (Fixed { .. }, SymmetricLaplace { .. }) => {
                fourier_abs_cdf(spec.exponent, spec.amplitude, u, &self.options.quadrature)?.value
            }
        };
        Ok(point(value))
    }

    /// Per-point density results over a grid, evaluated in parallel.
    pub fn density_each(&self, grid: &EvaluationGrid) -> Vec<Result<PointValue>> {
        grid.points().par_iter().map(|&u| self.density(u)).collect()
    }

    /// Per-point CDF results over a grid, evaluated in parallel.
    pub fn cdf_each(&self, grid: &EvaluationGrid) -> Vec<Result<PointValue>> {
        grid.points().par_iter().map(|&u| self.cdf(u)).collect()
    }

    /// Density at every grid point, evaluated in parallel.
    pub fn density_on(&self, grid: &EvaluationGrid) -> Result<Vec<PointValue>> {
        grid.points().par_iter().map(|&u| self.density(u)).collect()
    }

    /// CDF at every grid point, evaluated in parallel.
    pub fn cdf_on(&self, grid: &EvaluationGrid) -> Result<Vec<PointValue>> {
        grid.points().par_iter().map(|&u| self.cdf(u)).collect()
    }
}
