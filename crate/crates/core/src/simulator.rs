//! Monte Carlo ground truth: the recurrence U_n = X_n(Y_n + U_{n−1}) with
//! X_n = V_n^{1/A}, the continuous-time shot-noise path, and empirical
//! distribution tools.
//!
//! Chain `k` draws from ChaCha8 seeded with the master seed on stream `k`, so
//! results depend only on the seed and chain index, never on the worker count.

use crate::error::{Error, Result};
use crate::laws::{EvaluationGrid, LawSpec};
use crate::transforms::{AmplitudeLaw, ExponentLaw};
use rand::distributions::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, Poisson};
use rayon::prelude::*;

/// Default number of recurrence steps per sample.
pub const DEFAULT_STEPS: usize = 400;

/// Poisson rate Λ and decay B of the shot-noise process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotNoiseParams {
    pub lambda: f64,
    pub b: f64,
}

impl ShotNoiseParams {
    pub fn new(lambda: f64, b: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !ok(lambda) || !ok(b) {
            return Err(Error::InvalidConfig(format!(
                "shot noise needs lambda > 0 and b > 0 (got {lambda}, {b})"
            )));
        }
        Ok(Self { lambda, b })
    }

    /// A = Λ/B.
    pub fn exponent(&self) -> f64 {
        self.lambda / self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainConfig {
    pub n_steps: usize,
    pub n_samples: usize,
    pub master_seed: u64,
    pub n_workers: usize,
}

impl ChainConfig {
    pub fn new(
        n_steps: usize,
        n_samples: usize,
        master_seed: u64,
        n_workers: usize,
    ) -> Result<Self> {
        let cfg = Self {
            n_steps,
            n_samples,
            master_seed,
            n_workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 || self.n_samples == 0 || self.n_workers == 0 {
            return Err(Error::InvalidConfig(
                "n_steps, n_samples and n_workers must be positive".into(),
            ));
        }
        Ok(())
    }
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            n_steps: DEFAULT_STEPS,
            n_samples: 100_000,
            master_seed: 0,
            n_workers: rayon::current_num_threads().max(1),
        }
    }
}

/// The generator for chain `index`.
pub fn chain_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

fn gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, 1.0).expect("validated shape").sample(rng)
}

pub fn sample_amplitude<R: Rng + ?Sized>(law: AmplitudeLaw, rng: &mut R) -> f64 {
    match law {
        AmplitudeLaw::DeterministicOne => 1.0,
        AmplitudeLaw::Gamma { beta } => gamma_variate(beta, rng),
        AmplitudeLaw::SymmetricLaplace { beta } => {
            gamma_variate(beta, rng) - gamma_variate(beta, rng)
        }
    }
}

/// A fixed exponent, or a Gamma(α) draw; a zero draw is redrawn.
pub fn sample_exponent<R: Rng + ?Sized>(law: ExponentLaw, rng: &mut R) -> f64 {
    match law {
        ExponentLaw::Fixed { a } => a,
        ExponentLaw::GammaMixed { alpha } => loop {
            let a = gamma_variate(alpha, rng);
            if a > 0.0 {
                break a;
            }
        },
    }
}

/// One trajectory of `n_steps` recurrence steps with A drawn once.
pub fn iterate_chain<R: Rng + ?Sized>(spec: &LawSpec, n_steps: usize, rng: &mut R) -> Result<f64> {
    if n_steps == 0 {
        return Err(Error::InvalidConfig("n_steps must be at least 1".into()));
    }
    let inv_a = 1.0 / sample_exponent(spec.exponent, rng);
    let mut u = 0.0;
    for _ in 0..n_steps {
        let v: f64 = Open01.sample(rng);
        let y = sample_amplitude(spec.amplitude, rng);
        u = v.powf(inv_a) * (y + u);
    }
    Ok(u)
}

/// Runs `f(chain_index)` for every chain on `n_workers` threads, keeping
/// chain order.
fn run_chains<F>(cfg: &ChainConfig, f: F) -> Result<Vec<f64>>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.n_workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| (0..cfg.n_samples as u64).into_par_iter().map(&f).collect())
}

/// End points of `n_samples` independent chains, in chain order.
pub fn stationary_samples(spec: &LawSpec, cfg: &ChainConfig) -> Result<Vec<f64>> {
    spec.validate()?;
    run_chains(cfg, |k| {
        iterate_chain(spec, cfg.n_steps, &mut chain_rng(cfg.master_seed, k))
    })
}

/// `n_samples` independent chains; bit-identical for any worker count.
pub fn sample_stationary(spec: &LawSpec, cfg: &ChainConfig) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::new(stationary_samples(spec, cfg)?)
}

/// Z(t_end) = Σ_{T_i ≤ t_end} Y_i e^{−B(t_end − T_i)} for Poisson(Λ) arrivals
/// started empty at time 0.
pub fn simulate_shot_noise<R: Rng + ?Sized>(
    params: &ShotNoiseParams,
    amp: AmplitudeLaw,
    t_end: f64,
    rng: &mut R,
) -> Result<f64> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    amp.validate()?;
    let mean = params.lambda * t_end;
    let count: f64 = Poisson::new(mean)
        .map_err(|e| Error::InvalidConfig(format!("Poisson mean {mean}: {e}")))?
        .sample(rng);
    let mut z = 0.0;
    for _ in 0..count as u64 {
        let age = t_end * rng.gen::<f64>();
        z += sample_amplitude(amp, rng) * (-params.b * age).exp();
    }
    Ok(z)
}

/// Independent shot-noise paths, one per chain index.
pub fn sample_shot_noise(
    params: &ShotNoiseParams,
    amp: AmplitudeLaw,
    t_end: f64,
    cfg: &ChainConfig,
) -> Result<EmpiricalDistribution> {
    let samples = run_chains(cfg, |k| {
        simulate_shot_noise(params, amp, t_end, &mut chain_rng(cfg.master_seed, k))
    })?;
    EmpiricalDistribution::new(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// mean of e^{−sU}
    Laplace,
    /// mean of cos(sU)
    Cosine,
}

/// Histogram density with per-bin standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub bin_width: f64,
    pub density: Vec<f64>,
    pub std_error: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.density.len()).map(|k| self.lo + (k as f64 + 0.5) * self.bin_width)
    }

    /// Index of the bin containing `u`, if any.
    pub fn bin_of(&self, u: f64) -> Option<usize> {
        let k = ((u - self.lo) / self.bin_width).floor();
        (k >= 0.0 && (k as usize) < self.density.len()).then_some(k as usize)
    }
}

/// KS statistic against a reference CDF known only on a grid.
///
/// `distance` is the largest gap at the grid points (a lower bound on the
/// supremum over the grid range). Because both functions are nondecreasing,
/// on each cell (x_k, x_{k+1}) the gap is at most
/// max(ECDF(x_{k+1}−) − F(x_k), F(x_{k+1}) − ECDF(x_k)); `upper_bound` is the
/// largest of these, so the supremum lies in [distance, upper_bound].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridKs {
    pub distance: f64,
    pub upper_bound: f64,
}

/// Sorted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidConfig("no samples".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidConfig("samples contain NaN".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distribution of |U|.
    pub fn abs(&self) -> Self {
        let mut s: Vec<f64> = self.samples.iter().map(|x| x.abs()).collect();
        s.sort_by(f64::total_cmp);
        Self { samples: s }
    }

    /// Fraction of samples ≤ x.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    /// Fraction of samples < x.
    pub fn ecdf_left(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s < x) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let n = self.len() as f64;
        self.samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)
    }

    pub fn median(&self) -> f64 {
        let n = self.len();
        if n % 2 == 1 {
            self.samples[n / 2]
        } else {
            0.5 * (self.samples[n / 2 - 1] + self.samples[n / 2])
        }
    }

    /// Density histogram on [lo, hi) with bins of `bin_width`; the standard
    /// error is the binomial one, √(p(1−p)/n)/w.
    pub fn histogram_on(&self, lo: f64, hi: f64, bin_width: f64) -> Result<Histogram> {
        if !(bin_width > 0.0) || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "histogram needs lo < hi and bin_width > 0 (got {lo}, {hi}, {bin_width})"
            )));
        }
        let bins = ((hi - lo) / bin_width).round().max(1.0) as usize;
        let n = self.len() as f64;
        let mut density = Vec::with_capacity(bins);
        let mut std_error = Vec::with_capacity(bins);
        for k in 0..bins {
            let a = lo + k as f64 * bin_width;
            let b = a + bin_width;
            let count =
                self.samples.partition_point(|&s| s < b) - self.samples.partition_point(|&s| s < a);
            let p = count as f64 / n;
            density.push(p / bin_width);
            std_error.push((p * (1.0 - p) / n).sqrt() / bin_width);
        }
        Ok(Histogram {
            lo,
            bin_width,
            density,
            std_error,
        })
    }

    /// Histogram over the sample range, bins aligned to multiples of the width.
    pub fn histogram_density(&self, bin_width: f64) -> Result<Histogram> {
        if !(bin_width > 0.0) {
            return Err(Error::InvalidConfig("bin width must be positive".into()));
        }
        let lo = (self.samples[0] / bin_width).floor() * bin_width;
        let hi = ((self.samples[self.len() - 1] / bin_width).floor() + 1.0) * bin_width;
        self.histogram_on(lo, hi, bin_width)
    }

    /// sup over sample points of |ECDF − F|, both one-sided limits included.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        let mut d: f64 = 0.0;
        let mut i = 0;
        while i < self.samples.len() {
            let x = self.samples[i];
            let mut j = i;
            while j < self.samples.len() && self.samples[j] == x {
                j += 1;
            }
            let f = cdf(x);
            d = d
                .max((f - i as f64 / n).abs())
                .max((j as f64 / n - f).abs());
            i = j;
        }
        d
    }

    /// Grid on [lo, hi] through every (n/m)-th order statistic, so each
    /// cell carries at most about 1/m of the empirical mass and
    /// [`Self::ks_on_grid`] brackets the statistic tightly whatever the
    /// shape of the law.
    pub fn quantile_grid(&self, lo: f64, hi: f64, m: usize) -> Result<EvaluationGrid> {
        if !(lo < hi) || m == 0 {
            return Err(Error::InvalidConfig(format!(
                "quantile grid needs lo < hi and m > 0 (got {lo}, {hi}, {m})"
            )));
        }
        let stride = (self.len() / m).max(1);
        let mut pts = vec![lo];
        pts.extend(
            self.samples
                .iter()
                .step_by(stride)
                .copied()
                .filter(|&x| x > lo && x < hi),
        );
        pts.push(hi);
        pts.dedup();
        EvaluationGrid::new(pts)
    }

    /// KS statistic against reference CDF values tabulated on `grid`.
    pub fn ks_on_grid(&self, grid: &EvaluationGrid, cdf_values: &[f64]) -> Result<GridKs> {
        if cdf_values.len() != grid.len() {
            return Err(Error::InvalidConfig(
                "grid and CDF values differ in length".into(),
            ));
        }
        let x = grid.points();
        let mut distance: f64 = 0.0;
        for (&u, &f) in x.iter().zip(cdf_values) {
            distance = distance
                .max((self.ecdf(u) - f).abs())
                .max((self.ecdf_left(u) - f).abs());
        }
        let mut upper_bound = distance;
        for k in 0..x.len() - 1 {
            upper_bound = upper_bound
                .max(self.ecdf_left(x[k + 1]) - cdf_values[k])
                .max(cdf_values[k + 1] - self.ecdf(x[k]));
        }
        Ok(GridKs {
            distance,
            upper_bound,
        })
    }

    /// Two-sample KS statistic.
    pub fn ks_two_sample(&self, other: &Self) -> f64 {
        let (a, b) = (&self.samples, &other.samples);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j) = (0, 0);
        let mut d: f64 = 0.0;
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    /// Sample mean of e^{−sU} or cos(sU) and its standard error.
    pub fn empirical_transform(&self, s: f64, kind: TransformKind) -> (f64, f64) {
        let f = |x: f64| match kind {
            TransformKind::Laplace => (-s * x).exp(),
            TransformKind::Cosine => (s * x).cos(),
        };
        let n = self.len() as f64;
        let mean = self.samples.iter().map(|&x| f(x)).sum::<f64>() / n;
        let var = self
            .samples
            .iter()
            .map(|&x| (f(x) - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        (mean, (var / n).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det(a: f64) -> LawSpec {
        LawSpec::new(ExponentLaw::Fixed { a }, AmplitudeLaw::DeterministicOne).unwrap()
    }

    #[test]
    fn amplitude_moments() {
        let mut rng = chain_rng(1, 0);
        assert_eq!(
            sample_amplitude(AmplitudeLaw::DeterministicOne, &mut rng),
            1.0
        );
        let n = 1_000_000;
        let g: f64 = (0..n)
            .map(|_| sample_amplitude(AmplitudeLaw::Gamma { beta: 1.0 }, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!((g - 1.0).abs() < 0.004, "{g}");
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_amplitude(AmplitudeLaw::SymmetricLaplace { beta: 2.0 }, &mut rng))
            .collect();
        let d = EmpiricalDistribution::new(xs).unwrap();
        assert!(d.mean().abs() < 0.009, "{}", d.mean());
        assert!((d.variance() - 4.0).abs() < 0.05, "{}", d.variance());
    }

    #[test]
    fn exponent_draws() {
        let mut rng = chain_rng(2, 0);
        assert_eq!(
            sample_exponent(ExponentLaw::Fixed { a: 1.5 }, &mut rng),
            1.5
        );
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n)
            .map(|_| sample_exponent(ExponentLaw::GammaMixed { alpha: 1.0 }, &mut rng))
            .collect();
        let d = EmpiricalDistribution::new(xs).unwrap();
        assert!((d.mean() - 1.0).abs() < 0.004);
        assert!((d.ecdf(1.0) - (1.0 - (-1f64).exp())).abs() < 0.002);
    }

    #[test]
    fn one_step_is_power_of_uniform() {
        let cfg = ChainConfig::new(1, 200_000, 3, 4).unwrap();
        let d = sample_stationary(&det(2.0), &cfg).unwrap();
        let ks = d.ks_distance(|u| u.clamp(0.0, 1.0).powi(2));
        assert!(ks < 0.005, "{ks}");
    }

    #[test]
    fn worker_count_does_not_change_samples() {
        let spec = LawSpec::new(
            ExponentLaw::GammaMixed { alpha: 1.0 },
            AmplitudeLaw::SymmetricLaplace { beta: 0.5 },
        )
        .unwrap();
        let one = sample_stationary(&spec, &ChainConfig::new(50, 2000, 9, 1).unwrap()).unwrap();
        let many = sample_stationary(&spec, &ChainConfig::new(50, 2000, 9, 8).unwrap()).unwrap();
        assert_eq!(one, many);
        let other = sample_stationary(&spec, &ChainConfig::new(50, 2000, 10, 8).unwrap()).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn shot_noise_mean_and_empty_sum() {
        let p = ShotNoiseParams::new(1.0, 1.0).unwrap();
        let cfg = ChainConfig::new(1, 100_000, 4, 4).unwrap();
        let d = sample_shot_noise(&p, AmplitudeLaw::DeterministicOne, 30.0, &cfg).unwrap();
        assert!((d.mean() - 1.0).abs() < 0.01, "{}", d.mean());
        let tiny = sample_shot_noise(&p, AmplitudeLaw::DeterministicOne, 1e-3, &cfg).unwrap();
        let zeros = tiny.ecdf(0.0);
        assert!((zeros - (-1e-3f64).exp()).abs() < 4.0 * (1e-3f64 / 1e5).sqrt() + 1e-4);
        assert!(ShotNoiseParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn ecdf_edges_and_self_ks() {
        let d = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(d.samples(), &[1.0, 2.0, 2.0, 3.0]);
        assert_eq!(d.ecdf(0.5), 0.0);
        assert_eq!(d.ecdf(3.5), 1.0);
        assert_eq!(d.ecdf(2.0), 0.75);
        assert_eq!(d.median(), 2.0);
        // Against the piecewise-linear interpolant of its own steps the gap
        // is at most 1/n.
        let e = EmpiricalDistribution::new(vec![0.1, 0.4, 0.5, 0.9, 1.7]).unwrap();
        let xs = e.samples().to_vec();
        let interp = |x: f64| {
            let n = xs.len() as f64;
            match xs.iter().position(|&s| s >= x) {
                None => 1.0,
                Some(0) => 0.0,
                Some(k) => (k as f64 + (x - xs[k - 1]) / (xs[k] - xs[k - 1])) / n,
            }
        };
        assert!(e.ks_distance(interp) <= 1.0 / e.len() as f64 + 1e-15);
        assert!(EmpiricalDistribution::new(vec![]).is_err());
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn transform_at_zero_and_histogram_mass() {
        let mut rng = chain_rng(5, 0);
        let xs: Vec<f64> = (0..10_000).map(|_| rng.gen::<f64>()).collect();
        let d = EmpiricalDistribution::new(xs).unwrap();
        assert_eq!(
            d.empirical_transform(0.0, TransformKind::Laplace),
            (1.0, 0.0)
        );
        let h = d.histogram_density(0.1).unwrap();
        let mass: f64 = h.density.iter().map(|p| p * h.bin_width).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(h.bin_of(0.05), Some(0));
        assert!(d.histogram_on(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn two_sample_ks_is_symmetric() {
        let a = EmpiricalDistribution::new(vec![0.0, 1.0, 2.0]).unwrap();
        let b = EmpiricalDistribution::new(vec![0.5, 1.5]).unwrap();
        assert!((a.ks_two_sample(&b) - b.ks_two_sample(&a)).abs() < 1e-15);
        assert_eq!(a.ks_two_sample(&a), 0.0);
    }

    #[test]
    fn quantile_grid_cells_hold_little_mass() {
        let xs: Vec<f64> = (0..10_000)
            .map(|i| ((i * 7919) % 10_000) as f64 / 1e4)
            .collect();
        let d = EmpiricalDistribution::new(xs).unwrap();
        let g = d.quantile_grid(0.0, 1.0, 100).unwrap();
        assert_eq!(g.points()[0], 0.0);
        assert_eq!(*g.points().last().unwrap(), 1.0);
        for w in g.points().windows(2) {
            assert!(d.ecdf_left(w[1]) - d.ecdf(w[0]) <= 0.0101);
        }
        assert!(d.quantile_grid(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn grid_ks_brackets_the_exact_statistic() {
        let d = sample_stationary(&det(1.0), &ChainConfig::new(1, 5000, 6, 2).unwrap()).unwrap();
        let grid = EvaluationGrid::linspace(0.0, 1.0, 201).unwrap();
        let values: Vec<f64> = grid.points().to_vec();
        let g = d.ks_on_grid(&grid, &values).unwrap();
        let exact = d.ks_distance(|u| u.clamp(0.0, 1.0));
        assert!(g.distance <= exact + 1e-15 && exact <= g.upper_bound + 1e-15);
        assert!(g.upper_bound < g.distance + 0.006);
    }
}
