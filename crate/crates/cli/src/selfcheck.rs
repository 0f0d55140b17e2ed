//! Cross-validation suite with per-check timing and tolerance margins.

use std::f64::consts::PI;
use std::time::Instant;

use shotnoise::laws::{
    dde_richardson_check, default_density_truncation, fixed_a_cdf, fixed_a_density,
    gamma_amp_beta1_cdf, gamma_amp_beta2_density, gamma_amp_beta2_density_fixed_a,
    gamma_amp_beta_half_density, gamma_amp_beta_half_density_fixed_a, laplace_amp_cdf,
    mixed_alpha1_cdf, solve_delay_dde, LawSpec, TailPatch, DEFAULT_DDE_STEP,
};
use shotnoise::quadrature::{
    integrate_finite, integrate_oscillatory_sine, integrate_semi_infinite, QuadratureConfig,
};
use shotnoise::simulator::{sample_shot_noise, sample_stationary, ChainConfig, ShotNoiseParams};
use shotnoise::special::{
    bessel_k, fransen_wrigge_phi, log_gamma, lower_incomplete_gamma_regularized, volterra_mu,
    volterra_nu, volterra_nu_quadrature, volterra_nu_series_with, ReciprocalGammaCoeffs,
    SeriesTruncation, EULER_GAMMA,
};
use shotnoise::transforms::{exponential_sum_tail, tail_density_aleph, AmplitudeLaw, ExponentLaw};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(CliError::Usage(format!(
                "level `{s}`: expected quick or full"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Context {
    /// Added to Euler's constant when building series coefficients.
    pub gamma_shift: f64,
    pub workers: usize,
}

/// A measured deviation and the bound it must stay under.
#[derive(Debug, Clone, Copy)]
struct Outcome {
    measured: f64,
    tolerance: f64,
}

type CheckFn = fn(&Context) -> shotnoise::Result<Outcome>;

struct Check {
    name: &'static str,
    level: Level,
    run: CheckFn,
}

fn within(measured: f64, tolerance: f64) -> shotnoise::Result<Outcome> {
    Ok(Outcome {
        measured,
        tolerance,
    })
}

fn quad_cfg() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-12, 1e-11)
}

fn mixture(f: impl Fn(f64) -> f64) -> shotnoise::Result<f64> {
    integrate_semi_infinite(
        |a| if a == 0.0 { 0.0 } else { (-a).exp() * f(a) },
        0.0,
        1.0,
        &QuadratureConfig::with_tolerances(1e-10, 1e-9),
    )?
    .require("mixture over A")
}

fn mixed(amplitude: AmplitudeLaw) -> LawSpec {
    LawSpec::new(ExponentLaw::GammaMixed { alpha: 1.0 }, amplitude).expect("supported")
}

fn chains(ctx: &Context, steps: usize, samples: usize, seed: u64) -> ChainConfig {
    ChainConfig::new(steps, samples, seed, ctx.workers).expect("positive sizes")
}

/// KS upper bound on a grid through sample quantiles (about `m` cells).
fn grid_ks(
    samples: &shotnoise::simulator::EmpiricalDistribution,
    lo: f64,
    hi: f64,
    m: usize,
    cdf: impl Fn(f64) -> shotnoise::Result<f64>,
) -> shotnoise::Result<f64> {
    let grid = samples.quantile_grid(lo, hi, m)?;
    let values = grid
        .points()
        .iter()
        .map(|&u| cdf(u))
        .collect::<shotnoise::Result<Vec<_>>>()?;
    let ks = samples.ks_on_grid(&grid, &values)?;
    Ok(ks.upper_bound)
}

const CHECKS: &[Check] = &[
    Check {
        name: "quadrature: endpoint singularity x^(-1/2) on [0,1]",
        level: Level::Quick,
        run: |_| {
            let v = integrate_finite(
                |x: f64| if x > 0.0 { x.powf(-0.5) } else { 0.0 },
                0.0,
                1.0,
                &quad_cfg(),
            )?;
            within((v.require("sqrt singularity")? - 2.0).abs(), 1e-9)
        },
    },
    Check {
        name: "quadrature: semi-infinite Gaussian",
        level: Level::Quick,
        run: |_| {
            let v = integrate_semi_infinite(|x| (-x * x).exp(), 0.0, 1.0, &quad_cfg())?;
            within((v.require("Gaussian")? - 0.5 * PI.sqrt()).abs(), 1e-10)
        },
    },
    Check {
        name: "quadrature: sine integral over half-line",
        level: Level::Quick,
        run: |_| {
            let v = integrate_oscillatory_sine(|_| 1.0, &QuadratureConfig::default())?;
            within((v.require("sine integral")? - 0.5 * PI).abs(), 1e-6)
        },
    },
    Check {
        name: "special: log-gamma at 10.5",
        level: Level::Quick,
        run: |_| {
            within(
                (log_gamma(10.5)? - 1_133_278.388_948_785_5f64.ln()).abs(),
                1e-12,
            )
        },
    },
    Check {
        name: "special: regularized incomplete gamma P(0.3, 1.3)",
        level: Level::Quick,
        run: |_| {
            within(
                (lower_incomplete_gamma_regularized(0.3, 1.3)? - 0.944_807_236_366_264).abs(),
                1e-12,
            )
        },
    },
    Check {
        name: "special: K_1/2 closed form",
        level: Level::Quick,
        run: |_| {
            let exact = (PI / 4.0).sqrt() * (-2f64).exp();
            within((bessel_k(0.5, 2.0)? / exact - 1.0).abs(), 1e-12)
        },
    },
    Check {
        name: "special: nu(1) reference value",
        level: Level::Quick,
        run: |_| within((volterra_nu(1.0)? - 2.266_534_507_699_849).abs(), 1e-10),
    },
    Check {
        name: "special: nu asymptotic series vs quadrature at z = 0.01",
        level: Level::Quick,
        run: |ctx| {
            let coeffs =
                ReciprocalGammaCoeffs::with_euler_gamma(40, EULER_GAMMA + ctx.gamma_shift)?;
            let series = volterra_nu_series_with(0.01, &coeffs, &SeriesTruncation::default())?;
            within((series.value - volterra_nu_quadrature(0.01)?).abs(), 1e-6)
        },
    },
    Check {
        name: "special: phi(z) = z nu'(z) at z = 0.5",
        level: Level::Quick,
        run: |_| {
            let (z, h) = (0.5, 1e-4);
            let d = (volterra_nu(z + h)? - volterra_nu(z - h)?) / (2.0 * h);
            within((fransen_wrigge_phi(z)? / (z * d) - 1.0).abs(), 1e-5)
        },
    },
    Check {
        name: "transforms: Laplace transform of mu(c u, 0) at s = 2",
        level: Level::Quick,
        run: |_| {
            let s = 2.0;
            let c = (-(1.0 + EULER_GAMMA)).exp();
            let mut failure = None;
            let v = integrate_semi_infinite(
                |u| {
                    if u == 0.0 {
                        return 0.0;
                    }
                    match volterra_mu(c * u, 0.0, 0.0) {
                        Ok(m) => (-s * u).exp() * m,
                        Err(e) => {
                            failure.get_or_insert(e);
                            0.0
                        }
                    }
                },
                0.0,
                1.0,
                &QuadratureConfig::with_tolerances(1e-10, 1e-9),
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            let exact = 1.0 / (s * (1.0 + EULER_GAMMA + s.ln()));
            within((v.require("mu transform")? - exact).abs(), 1e-5)
        },
    },
    Check {
        name: "transforms: two-term exponential sum equals aleph",
        level: Level::Quick,
        run: |_| {
            let approx = exponential_sum_tail(2, 1.0)?;
            let gap = [2.0, 3.0, 5.0]
                .iter()
                .map(|&u| (approx.density(u) - tail_density_aleph(u)).abs())
                .fold(0.0, f64::max);
            within(gap, 1e-12)
        },
    },
    Check {
        name: "laws: fixed-A density at u = 0.5 equals e^-gamma",
        level: Level::Quick,
        run: |_| {
            within(
                (fixed_a_density(1.0, 0.5)? - (-EULER_GAMMA).exp()).abs(),
                1e-10,
            )
        },
    },
    Check {
        name: "laws: delay-equation mass on [0, 12]",
        level: Level::Quick,
        run: |_| {
            within(
                (solve_delay_dde(1.0, 12.0, DEFAULT_DDE_STEP)?.mass()? - 1.0).abs(),
                1e-3,
            )
        },
    },
    Check {
        name: "laws: beta = 2 series vs mixture at u = 1",
        level: Level::Quick,
        run: |_| {
            let series = gamma_amp_beta2_density(1.0, &default_density_truncation())?;
            let mix = mixture(|a| gamma_amp_beta2_density_fixed_a(a, 1.0).unwrap_or(f64::NAN))?;
            within((series - mix).abs(), 5e-3)
        },
    },
    Check {
        name: "simulation: fixed A = 1 ECDF(1) vs e^-gamma (1e5 samples)",
        level: Level::Quick,
        run: |ctx| {
            let spec = LawSpec::new(
                ExponentLaw::Fixed { a: 1.0 },
                AmplitudeLaw::DeterministicOne,
            )?;
            let d = sample_stationary(&spec, &chains(ctx, 200, 100_000, 11))?;
            let p = (-EULER_GAMMA).exp();
            within((d.ecdf(1.0) - p).abs(), 4.0 * (p * (1.0 - p) / 1e5).sqrt())
        },
    },
    Check {
        name: "simulation: chain vs shot noise two-sample KS (2e4 each)",
        level: Level::Quick,
        run: |ctx| {
            let spec = LawSpec::new(
                ExponentLaw::Fixed { a: 1.0 },
                AmplitudeLaw::DeterministicOne,
            )?;
            let chain = sample_stationary(&spec, &chains(ctx, 200, 20_000, 12))?;
            let params = ShotNoiseParams::new(1.0, 1.0)?;
            let noise = sample_shot_noise(
                &params,
                AmplitudeLaw::DeterministicOne,
                30.0,
                &chains(ctx, 1, 20_000, 13),
            )?;
            within(chain.ks_two_sample(&noise), 0.02)
        },
    },
    Check {
        name: "laws: delay-equation step halving on [2, 3]",
        level: Level::Full,
        run: |_| within(dde_richardson_check(1.0, DEFAULT_DDE_STEP)?.max_gap, 1e-6),
    },
    Check {
        name: "laws: beta = 1 mixed CDF normalization",
        level: Level::Full,
        run: |_| within((gamma_amp_beta1_cdf(60.0)? - 1.0).abs(), 1e-4),
    },
    Check {
        name: "laws: beta = 1/2 formula vs mixture at u = 1",
        level: Level::Full,
        run: |_| {
            let direct = gamma_amp_beta_half_density(1.0)?;
            let mix = mixture(|a| gamma_amp_beta_half_density_fixed_a(a, 1.0).unwrap_or(f64::NAN))?;
            within((direct - mix).abs(), 1e-3)
        },
    },
    Check {
        name: "simulation: fixed A = 1 KS on [0, 2] (1e6 samples)",
        level: Level::Full,
        run: |ctx| {
            let spec = LawSpec::new(
                ExponentLaw::Fixed { a: 1.0 },
                AmplitudeLaw::DeterministicOne,
            )?;
            let d = sample_stationary(&spec, &chains(ctx, 400, 1_000_000, 21))?;
            within(grid_ks(&d, 0.0, 2.0, 2000, |u| fixed_a_cdf(1.0, u))?, 0.005)
        },
    },
    Check {
        name: "simulation: mixed alpha = 1 KS on [0, 2] (1e6 samples)",
        level: Level::Full,
        run: |ctx| {
            let d = sample_stationary(
                &mixed(AmplitudeLaw::DeterministicOne),
                &chains(ctx, 400, 1_000_000, 22),
            )?;
            within(
                grid_ks(&d, 0.0, 2.0, 2000, |u| {
                    mixed_alpha1_cdf(u, TailPatch::Increasing)
                })?,
                0.01,
            )
        },
    },
    Check {
        name: "simulation: Laplace beta = 1 |U| KS (1e5 samples)",
        level: Level::Full,
        run: |ctx| {
            let d = sample_stationary(
                &mixed(AmplitudeLaw::SymmetricLaplace { beta: 1.0 }),
                &chains(ctx, 400, 100_000, 23),
            )?;
            let cfg = QuadratureConfig::default();
            within(
                grid_ks(&d.abs(), 0.0, 8.0, 400, |u| {
                    if u == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(laplace_amp_cdf(1.0, u, &cfg)?.value)
                })?,
                0.02,
            )
        },
    },
];

/// Runs the suite, printing one line per check; returns the failure count.
pub fn run_selfcheck(
    level: Level,
    ctx: &Context,
    out: &mut impl std::io::Write,
) -> Result<usize, CliError> {
    let mut failures = 0;
    let selected = CHECKS
        .iter()
        .filter(|c| level == Level::Full || c.level == Level::Quick);
    for check in selected {
        let start = Instant::now();
        let result = (check.run)(ctx);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match result {
            Ok(o) if o.measured <= o.tolerance => {
                writeln!(
                    out,
                    "PASS {} | measured {:.3e} tol {:.1e} margin {:.3e} | {ms:.1} ms",
                    check.name,
                    o.measured,
                    o.tolerance,
                    o.tolerance - o.measured
                )?;
            }
            Ok(o) => {
                failures += 1;
                writeln!(
                    out,
                    "FAIL {} | measured {:.3e} tol {:.1e} margin {:.3e} | {ms:.1} ms",
                    check.name,
                    o.measured,
                    o.tolerance,
                    o.tolerance - o.measured
                )?;
            }
            Err(e) => {
                failures += 1;
                writeln!(out, "FAIL {} | error: {e} | {ms:.1} ms", check.name)?;
            }
        }
    }
    writeln!(
        out,
        "selfcheck {}: {failures} failure(s)",
        if level == Level::Full {
            "full"
        } else {
            "quick"
        }
    )?;
    Ok(failures)
}
