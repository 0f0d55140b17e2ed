//! `simulate` and `compare`.

use shotnoise::laws::{AnalyticLaw, LawOptions, LawSpec, PointValue};
use shotnoise::simulator::{stationary_samples, EmpiricalDistribution, GridKs};
use shotnoise::Error;

use crate::config::{amplitude_text, exponent_text, tail_patch_text, ExperimentConfig, McSpec};
use crate::error::CliError;
use crate::output::{cell, emit, read_samples, render_samples, Header};

fn law_header(title: &str, spec: &LawSpec) -> Header {
    let mut h = Header::new(title);
    h.push("exponent", exponent_text(spec.exponent))
        .push("amplitude", amplitude_text(spec.amplitude));
    h
}

fn mc_header(title: &str, spec: &LawSpec, mc: &McSpec) -> Header {
    // The worker count is left out: output does not depend on it.
    let mut h = law_header(title, spec);
    h.push("samples", mc.samples)
        .push("steps", mc.steps)
        .push("seed", mc.seed);
    h
}

pub fn simulate(spec: &LawSpec, mc: &McSpec) -> Result<(Header, Vec<f64>), CliError> {
    let samples = stationary_samples(spec, &mc.chain_config()?)?;
    Ok((mc_header("shotnoise simulate", spec, mc), samples))
}

pub fn run_simulate(
    spec: &LawSpec,
    mc: &McSpec,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let (header, samples) = simulate(spec, mc)?;
    emit(out, &render_samples(&header, &samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComparisonRow {
    pub u: f64,
    pub analytic_density: Option<f64>,
    pub analytic_cdf: Option<f64>,
    pub mc_density: Option<f64>,
    pub mc_cdf: Option<f64>,
    pub mc_std_error: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub ks: Option<GridKs>,
    /// Largest |analytic − mc| / SE over density rows, with its u.
    pub max_density_dev_se: Option<(f64, f64)>,
    pub asymptotic_points: usize,
    pub failed_points: usize,
}

impl Summary {
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if let Some(ks) = self.ks {
            parts.push(format!("ks={:.6}", ks.distance));
            parts.push(format!("ks_upper_bound={:.6}", ks.upper_bound));
        }
        if let Some((dev, u)) = self.max_density_dev_se {
            parts.push(format!("max_density_dev_se={dev:.3}"));
            parts.push(format!("at_u={u}"));
        }
        parts.push(format!("asymptotic_points={}", self.asymptotic_points));
        parts.push(format!("failed_points={}", self.failed_points));
        format!("# summary {}\n", parts.join(" "))
    }
}

/// Histogram density over [u − w/2, u + w/2), clipped at the origin when the
/// samples are nonnegative; returns (density, standard error).
fn centred_bin(d: &EmpiricalDistribution, u: f64, w: f64, nonnegative: bool) -> Option<(f64, f64)> {
    let mut lo = u - 0.5 * w;
    let hi = u + 0.5 * w;
    if nonnegative {
        if hi <= 0.0 {
            return None;
        }
        lo = lo.max(0.0);
    }
    let width = hi - lo;
    let p = d.ecdf_left(hi) - d.ecdf_left(lo);
    let n = d.len() as f64;
    Some((p / width, (p * (1.0 - p) / n).sqrt() / width))
}

/// Point values, keeping unsupported combinations as hard errors and
/// counting numerical failures.
fn column(
    values: Vec<shotnoise::Result<PointValue>>,
    summary: &mut Summary,
) -> Result<Vec<Option<f64>>, CliError> {
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        match v {
            Ok(p) => {
                if p.asymptotic {
                    summary.asymptotic_points += 1;
                }
                out.push(Some(p.value));
            }
            Err(e @ Error::Unsupported(_)) => return Err(e.into()),
            Err(_) => {
                summary.failed_points += 1;
                out.push(None);
            }
        }
    }
    Ok(out)
}

/// Evaluates the analytic and Monte Carlo columns on the grid.
pub fn build_rows(
    cfg: &ExperimentConfig,
    samples: &EmpiricalDistribution,
) -> Result<(Vec<ComparisonRow>, Summary), CliError> {
    let options = LawOptions {
        tail_patch: cfg.tail_patch,
        ..LawOptions::default()
    };
    let law = AnalyticLaw::new(cfg.spec, options)?;
    let grid = cfg.grid.to_grid()?;
    let symmetric = cfg.spec.cdf_is_of_abs();
    // For symmetric laws the empirical side is |U|; its density is twice f.
    let mc = if symmetric {
        samples.abs()
    } else {
        samples.clone()
    };
    let nonnegative = mc.samples()[0] >= 0.0;
    let n = mc.len() as f64;

    let mut summary = Summary::default();
    let dens = if cfg.quantity.density() {
        column(law.density_each(&grid), &mut summary)?
    } else {
        vec![None; grid.len()]
    };
    let cdfs = if cfg.quantity.cdf() {
        column(law.cdf_each(&grid), &mut summary)?
    } else {
        vec![None; grid.len()]
    };

    let mut rows = Vec::with_capacity(grid.len());
    let mut worst: Option<(f64, f64)> = None;
    for (k, &u) in grid.points().iter().enumerate() {
        let mut row = ComparisonRow {
            u,
            analytic_density: dens[k],
            analytic_cdf: cdfs[k],
            ..Default::default()
        };
        if cfg.quantity.density() {
            let x = if symmetric { u.abs() } else { u };
            if let Some((h, se)) = centred_bin(&mc, x, cfg.bin_width, nonnegative) {
                let scale = if symmetric { 0.5 } else { 1.0 };
                row.mc_density = Some(scale * h);
                row.mc_std_error = Some(scale * se);
                if let Some(f) = row.analytic_density.filter(|f| f.is_finite()) {
                    if se > 0.0 {
                        let dev = (f - scale * h).abs() / (scale * se);
                        if worst.is_none_or(|(w, _)| dev > w) {
                            worst = Some((dev, u));
                        }
                    }
                }
            }
        }
        if cfg.quantity.cdf() {
            let f = mc.ecdf(u);
            row.mc_cdf = Some(f);
            if !cfg.quantity.density() {
                row.mc_std_error = Some((f * (1.0 - f) / n).sqrt());
            }
        }
        rows.push(row);
    }
    summary.max_density_dev_se = worst;
    if cfg.quantity.cdf() && summary.failed_points == 0 {
        let values: Vec<f64> = cdfs.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
        summary.ks = Some(mc.ks_on_grid(&grid, &values)?);
    }
    Ok((rows, summary))
}

pub fn render_table(
    cfg: &ExperimentConfig,
    n_samples: usize,
    rows: &[ComparisonRow],
    summary: &Summary,
) -> String {
    let mut h = law_header("shotnoise compare", &cfg.spec);
    if let Some(fig) = cfg.figure {
        h.push("figure", fig);
    }
    h.push("grid", cfg.grid)
        .push("quantity", cfg.quantity)
        .push("bin_width", cfg.bin_width)
        .push("tail_patch", tail_patch_text(cfg.tail_patch));
    match &cfg.samples_in {
        Some(p) => {
            h.push("samples_in", p.display()).push("samples", n_samples);
        }
        None => {
            h.push("samples", cfg.mc.samples)
                .push("steps", cfg.mc.steps)
                .push("seed", cfg.mc.seed);
        }
    }
    if cfg.spec.cdf_is_of_abs() {
        h.push("mc_of", "|U|");
    }
    let mut s = h.render();
    s.push_str("u,analytic_density,analytic_cdf,mc_density,mc_cdf,mc_std_error\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.u,
            cell(r.analytic_density),
            cell(r.analytic_cdf),
            cell(r.mc_density),
            cell(r.mc_cdf),
            cell(r.mc_std_error)
        ));
    }
    s.push_str(&summary.render());
    s
}

pub fn run_compare(cfg: &ExperimentConfig) -> Result<Summary, CliError> {
    let raw = match &cfg.samples_in {
        Some(path) => read_samples(path)?,
        None => {
            let (header, samples) = simulate(&cfg.spec, &cfg.mc)?;
            if let Some(path) = &cfg.samples_out {
                emit(Some(path), &render_samples(&header, &samples))?;
            }
            samples
        }
    };
    let n = raw.len();
    let samples = EmpiricalDistribution::new(raw)?;
    let (rows, summary) = build_rows(cfg, &samples)?;
    emit(cfg.out.as_deref(), &render_table(cfg, n, &rows, &summary))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centred_bin_clips_at_origin() {
        let d = EmpiricalDistribution::new(vec![0.01, 0.02, 0.5, 0.9]).unwrap();
        let (h, se) = centred_bin(&d, 0.0, 0.1, true).unwrap();
        // Window [0, 0.05) holds two of four samples.
        assert!((h - 0.5 / 0.05).abs() < 1e-12);
        assert!(se > 0.0);
        assert!(centred_bin(&d, -1.0, 0.1, true).is_none());
    }

    #[test]
    fn summary_line_shape() {
        let s = Summary {
            ks: Some(GridKs {
                distance: 0.0042,
                upper_bound: 0.005,
            }),
            max_density_dev_se: Some((1.5, 0.3)),
            asymptotic_points: 1,
            failed_points: 0,
        };
        let line = s.render();
        assert!(line.starts_with("# summary ks=0.004200 "));
        assert!(line.contains("max_density_dev_se=1.500 at_u=0.3"));
    }
}
