//! Experiment configuration: flat `key=value` files layered under flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use shotnoise::laws::{EvaluationGrid, LawSpec, TailPatch};
use shotnoise::simulator::{ChainConfig, DEFAULT_STEPS};
use shotnoise::transforms::{AmplitudeLaw, ExponentLaw};

use crate::error::CliError;
use crate::figures::{preset, Quantity};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SHOTNOISE_WORKERS";

pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// Keys accepted in a config file.
const KNOWN_KEYS: &[&str] = &[
    "exponent",
    "amplitude",
    "spec",
    "samples",
    "steps",
    "seed",
    "workers",
    "grid",
    "figure",
    "bin_width",
    "quantity",
    "tail_patch",
    "samples_in",
    "samples_out",
    "out",
];

/// Parsed `key=value` pairs; `#` starts a comment line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", lineno + 1))
            })?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Flag value if given, else the file value, parsed.
pub fn layered<T: FromStr>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`")))
        })
        .transpose()
}

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{what}: `{s}` is not a number")))
}

/// `fixed:A` or `gamma:α`.
pub fn parse_exponent(s: &str) -> Result<ExponentLaw, CliError> {
    match s.trim().split_once(':') {
        Some(("fixed", v)) => Ok(ExponentLaw::Fixed {
            a: number(v, "exponent")?,
        }),
        Some(("gamma", v)) => Ok(ExponentLaw::GammaMixed {
            alpha: number(v, "exponent")?,
        }),
        _ => Err(CliError::Usage(format!(
            "exponent `{s}`: expected fixed:A or gamma:ALPHA"
        ))),
    }
}

/// `det`, `gamma:β` or `laplace:β`.
pub fn parse_amplitude(s: &str) -> Result<AmplitudeLaw, CliError> {
    let s = s.trim();
    if s == "det" {
        return Ok(AmplitudeLaw::DeterministicOne);
    }
    match s.split_once(':') {
        Some(("gamma", v)) => Ok(AmplitudeLaw::Gamma {
            beta: number(v, "amplitude")?,
        }),
        Some(("laplace", v)) => Ok(AmplitudeLaw::SymmetricLaplace {
            beta: number(v, "amplitude")?,
        }),
        _ => Err(CliError::Usage(format!(
            "amplitude `{s}`: expected det, gamma:BETA or laplace:BETA"
        ))),
    }
}

/// `EXPONENT,AMPLITUDE`, e.g. `gamma:1,laplace:2`.
pub fn parse_spec(s: &str) -> Result<(ExponentLaw, AmplitudeLaw), CliError> {
    let (e, a) = s
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("spec `{s}`: expected EXPONENT,AMPLITUDE")))?;
    Ok((parse_exponent(e)?, parse_amplitude(a)?))
}

pub fn exponent_text(law: ExponentLaw) -> String {
    match law {
        ExponentLaw::Fixed { a } => format!("fixed:{a}"),
        ExponentLaw::GammaMixed { alpha } => format!("gamma:{alpha}"),
    }
}

pub fn amplitude_text(law: AmplitudeLaw) -> String {
    match law {
        AmplitudeLaw::DeterministicOne => "det".into(),
        AmplitudeLaw::Gamma { beta } => format!("gamma:{beta}"),
        AmplitudeLaw::SymmetricLaplace { beta } => format!("laplace:{beta}"),
    }
}

/// `lo:hi:n` with lo < hi and n ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("grid `{s}`: expected lo:hi:n")));
        }
        let n_points = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("grid `{s}`: bad point count")))?;
        let grid = Self {
            lo: number(parts[0], "grid")?,
            hi: number(parts[1], "grid")?,
            n_points,
        };
        grid.to_grid()?;
        Ok(grid)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n_points)
    }
}

impl GridSpec {
    pub fn to_grid(self) -> Result<EvaluationGrid, CliError> {
        EvaluationGrid::linspace(self.lo, self.hi, self.n_points)
            .map_err(|e| CliError::Usage(format!("grid: {e}")))
    }
}

pub fn parse_tail_patch(s: &str) -> Result<TailPatch, CliError> {
    match s {
        "increasing" => Ok(TailPatch::Increasing),
        "as-printed" | "as_printed" => Ok(TailPatch::AsPrinted),
        _ => Err(CliError::Usage(format!(
            "tail patch `{s}`: expected increasing or as-printed"
        ))),
    }
}

pub fn tail_patch_text(p: TailPatch) -> &'static str {
    match p {
        TailPatch::Increasing => "increasing",
        TailPatch::AsPrinted => "as-printed",
    }
}

/// Worker count: flag, then file, then the environment, then all cores.
pub fn resolve_workers(flag: Option<usize>, file: &ConfigFile) -> Result<usize, CliError> {
    let from_env = match std::env::var(WORKERS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("{WORKERS_ENV}=`{v}` is not a positive integer"))
        })?),
        Err(_) => None,
    };
    let workers = layered(flag, file, "workers")?
        .or(from_env)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError::Usage("workers must be positive".into()));
    }
    Ok(workers)
}

/// Law spec from `--spec` or `--exponent`/`--amplitude`, flags over file.
pub fn resolve_spec(
    spec: Option<String>,
    exponent: Option<String>,
    amplitude: Option<String>,
    file: &ConfigFile,
) -> Result<Option<LawSpec>, CliError> {
    let spec = layered(spec, file, "spec")?;
    let exponent = layered(exponent, file, "exponent")?;
    let amplitude = layered(amplitude, file, "amplitude")?;
    let (e, a) = match (spec, exponent, amplitude) {
        (Some(s), None, None) => parse_spec(&s)?,
        (Some(_), _, _) => {
            return Err(CliError::Usage(
                "give either spec or exponent/amplitude, not both".into(),
            ))
        }
        (None, Some(e), Some(a)) => (parse_exponent(&e)?, parse_amplitude(&a)?),
        (None, None, None) => return Ok(None),
        _ => {
            return Err(CliError::Usage(
                "exponent and amplitude must be given together".into(),
            ))
        }
    };
    Ok(Some(LawSpec::new(e, a)?))
}

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSpec {
    pub samples: usize,
    pub steps: usize,
    pub seed: u64,
    pub workers: usize,
}

impl McSpec {
    pub fn chain_config(&self) -> Result<ChainConfig, CliError> {
        Ok(ChainConfig::new(
            self.steps,
            self.samples,
            self.seed,
            self.workers,
        )?)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CommonFlags {
    pub config: Option<PathBuf>,
    pub spec: Option<String>,
    pub exponent: Option<String>,
    pub amplitude: Option<String>,
    pub samples: Option<usize>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

pub fn resolve_mc(flags: &CommonFlags, file: &ConfigFile) -> Result<McSpec, CliError> {
    let mc = McSpec {
        samples: layered(flags.samples, file, "samples")?.unwrap_or(DEFAULT_SAMPLES),
        steps: layered(flags.steps, file, "steps")?.unwrap_or(DEFAULT_STEPS),
        seed: layered(flags.seed, file, "seed")?.unwrap_or(DEFAULT_SEED),
        workers: resolve_workers(flags.workers, file)?,
    };
    if mc.samples == 0 || mc.steps == 0 {
        return Err(CliError::Usage("samples and steps must be positive".into()));
    }
    Ok(mc)
}

/// Fully resolved `compare` configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: LawSpec,
    pub grid: GridSpec,
    pub mc: McSpec,
    pub out: Option<PathBuf>,
    pub figure: Option<u8>,
    pub bin_width: f64,
    pub quantity: Quantity,
    pub tail_patch: TailPatch,
    pub samples_in: Option<PathBuf>,
    pub samples_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct CompareFlags {
    pub common: CommonFlags,
    pub figure: Option<u8>,
    pub grid: Option<String>,
    pub bin_width: Option<f64>,
    pub quantity: Option<String>,
    pub tail_patch: Option<String>,
    pub samples_in: Option<PathBuf>,
    pub samples_out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn resolve(flags: CompareFlags) -> Result<Self, CliError> {
        let file = match &flags.common.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let c = &flags.common;
        let figure = layered(flags.figure, &file, "figure")?;
        let explicit = resolve_spec(
            c.spec.clone(),
            c.exponent.clone(),
            c.amplitude.clone(),
            &file,
        )?;
        let preset = figure.map(preset).transpose()?;
        let spec = match (preset, explicit) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage(
                    "a figure preset fixes the law; drop the exponent/amplitude options".into(),
                ))
            }
            (Some(p), None) => p.spec,
            (None, Some(s)) => s,
            (None, None) => {
                return Err(CliError::Usage(
                    "compare needs --figure or --exponent/--amplitude".into(),
                ))
            }
        };
        let grid = match layered(flags.grid, &file, "grid")? {
            Some(g) => g.parse::<GridSpec>()?,
            None => preset.map(|p| p.grid).ok_or_else(|| {
                CliError::Usage("explicit comparisons need --grid lo:hi:n".into())
            })?,
        };
        let bin_width = layered(flags.bin_width, &file, "bin_width")?
            .or(preset.map(|p| p.bin_width))
            .unwrap_or((grid.hi - grid.lo) / (grid.n_points - 1) as f64);
        if !(bin_width > 0.0) {
            return Err(CliError::Usage("bin width must be positive".into()));
        }
        let quantity = match layered(flags.quantity, &file, "quantity")? {
            Some(q) => q.parse()?,
            None => preset.map_or(Quantity::Both, |p| p.quantity),
        };
        let tail_patch = match layered(flags.tail_patch, &file, "tail_patch")? {
            Some(t) => parse_tail_patch(&t)?,
            None => TailPatch::default(),
        };
        Ok(Self {
            spec,
            grid,
            mc: resolve_mc(c, &file)?,
            out: layered(c.out.clone(), &file, "out")?,
            figure,
            bin_width,
            quantity,
            tail_patch,
            samples_in: layered(flags.samples_in, &file, "samples_in")?,
            samples_out: layered(flags.samples_out, &file, "samples_out")?,
        })
    }
}
