//! Seeded Monte Carlo simulation of the probabilistic process.
//!
//! Trial `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, and
//! within a trial the white vertices are visited in increasing order, so a
//! trial's outcome depends only on `(seed, i)`. Outcomes are aggregated into
//! integer round histograms, which makes every report independent of the
//! number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::exact::validate_start;
use crate::graph::Graph;
use crate::kernels::fire_ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// A trial still running after this many rounds is reported as an error.
    pub round_cap: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { trials: 100_000, seed: 0, threads: None, round_cap: 1_000_000 }
    }
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self { trials, seed, ..Self::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub rounds: u64,
    /// Blue count after each round, starting with round 0.
    pub trajectory: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quantile {
    pub alpha: f64,
    pub rounds: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantiles: Option<Vec<Quantile>>,
}

impl EstimateReport {
    pub fn quantile(&self, alpha: f64) -> Option<u64> {
        self.quantiles.as_ref()?.iter().find(|q| q.alpha == alpha).map(|q| q.rounds)
    }
}

/// Reusable per-worker buffers for [`Simulator::run`].
struct Simulator<'g> {
    g: &'g Graph,
    miss: Vec<f64>,
}

impl<'g> Simulator<'g> {
    fn new(g: &'g Graph) -> Self {
        Self { g, miss: vec![1.0; g.n()] }
    }

    /// Runs one trial for at most `max_rounds` rounds. Returns the round in
    /// which the last vertex turned blue, or `None` if still unfinished.
    fn run(
        &mut self,
        start: &VertexSet,
        rng: &mut ChaCha8Rng,
        max_rounds: u64,
        mut trajectory: Option<&mut Vec<usize>>,
    ) -> Option<u64> {
        let g = self.g;
        let mut blue = start.clone();
        let mut white = blue.complement();
        let mut count = blue.len();
        if let Some(t) = trajectory.as_deref_mut() {
            t.push(count);
        }
        let mut rounds = 0;
        let mut newly = Vec::new();
        while !white.is_empty() {
            if rounds == max_rounds {
                return None;
            }
            for u in &blue {
                if g.neighbors(u).intersects(&white) {
                    let (num, den) = fire_ratio(g, u, &blue);
                    self.miss[u] = 1.0 - num as f64 / den as f64;
                }
            }
            newly.clear();
            for w in &white {
                let mut miss = 1.0;
                let mut touched = false;
                for u in g.neighbors(w).iter_intersection(&blue) {
                    miss *= self.miss[u];
                    touched = true;
                }
                if !touched {
                    continue;
                }
                if miss == 0.0 || rng.random::<f64>() >= miss {
                    newly.push(w);
                }
            }
            for &w in &newly {
                blue.insert(w);
                white.remove(w);
            }
            count += newly.len();
            rounds += 1;
            if let Some(t) = trajectory.as_deref_mut() {
                t.push(count);
            }
        }
        Some(rounds)
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One trial of the process from `start`, on stream `(seed, trial)`.
pub fn simulate_trial(
    g: &Graph,
    start: &VertexSet,
    seed: u64,
    trial: u64,
    round_cap: u64,
    record_trajectory: bool,
) -> Result<TrialOutcome> {
    validate_start(g, start)?;
    let mut sim = Simulator::new(g);
    let mut rng = trial_rng(seed, trial);
    let mut traj = record_trajectory.then(Vec::new);
    let rounds = sim.run(start, &mut rng, round_cap, traj.as_mut()).ok_or(Error::RoundCap { cap: round_cap })?;
    Ok(TrialOutcome { rounds, trajectory: traj })
}

/// Histogram of finishing rounds; `censored` counts trials still running
/// after the round limit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Histogram {
    counts: Vec<u64>,
    censored: u64,
}

impl Histogram {
    fn add(&mut self, rounds: Option<u64>) {
        match rounds {
            Some(r) => {
                let r = r as usize;
                if self.counts.len() <= r {
                    self.counts.resize(r + 1, 0);
                }
                self.counts[r] += 1;
            }
            None => self.censored += 1,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if self.counts.len() < other.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.censored += other.censored;
        self
    }

    fn finished_by(&self, t: usize) -> u64 {
        self.counts.iter().take(t + 1).sum()
    }
}

const BATCH: u64 = 1024;

fn run_trials(g: &Graph, start: &VertexSet, cfg: &McConfig, max_rounds: u64) -> Result<Histogram> {
    validate_start(g, start)?;
    if cfg.trials < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 trials, got {}", cfg.trials)));
    }
    let batches = cfg.trials.div_ceil(BATCH);
    let work = || {
        (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut sim = Simulator::new(g);
                let mut hist = Histogram::default();
                let lo = b * BATCH;
                let hi = (lo + BATCH).min(cfg.trials);
                for trial in lo..hi {
                    let mut rng = trial_rng(cfg.seed, trial);
                    hist.add(sim.run(start, &mut rng, max_rounds, None));
                }
                hist
            })
            .reduce(Histogram::default, Histogram::merge)
    };
    let hist = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(hist)
}

fn moments(hist: &Histogram, trials: u64) -> (f64, f64) {
    let (mut sum, mut sumsq) = (0u128, 0u128);
    for (r, &c) in hist.counts.iter().enumerate() {
        sum += r as u128 * c as u128;
        sumsq += (r * r) as u128 * c as u128;
    }
    let n = trials as u128;
    let mean = sum as f64 / trials as f64;
    // (n Σx² - (Σx)²) / (n (n-1)) is the unbiased sample variance
    let var = (n * sumsq - sum * sum) as f64 / (n * (n - 1)) as f64;
    (mean, (var / trials as f64).sqrt())
}

fn quantile_of(hist: &Histogram, trials: u64, alpha: f64) -> u64 {
    let need = (alpha * trials as f64).ceil().max(1.0) as u64;
    let mut acc = 0;
    for (r, &c) in hist.counts.iter().enumerate() {
        acc += c;
        if acc >= need {
            return r as u64;
        }
    }
    hist.counts.len().saturating_sub(1) as u64
}

/// Mean and standard error of the propagation time from `start`.
pub fn estimate_ept(g: &Graph, start: &VertexSet, cfg: &McConfig) -> Result<EstimateReport> {
    let hist = run_trials(g, start, cfg, cfg.round_cap)?;
    if hist.censored > 0 {
        return Err(Error::RoundCap { cap: cfg.round_cap });
    }
    let (mean, std_error) = moments(&hist, cfg.trials);
    Ok(EstimateReport { mean, std_error, trials: cfg.trials, seed: cfg.seed, quantiles: None })
}

/// Fraction of trials finished within `rounds` rounds, with binomial
/// standard error. An empty start set never finishes.
pub fn estimate_lround(g: &Graph, start: &VertexSet, rounds: u64, cfg: &McConfig) -> Result<EstimateReport> {
    if cfg.trials < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 trials, got {}", cfg.trials)));
    }
    if start.is_empty() {
        return Ok(EstimateReport { mean: 0.0, std_error: 0.0, trials: cfg.trials, seed: cfg.seed, quantiles: None });
    }
    let hist = run_trials(g, start, cfg, rounds)?;
    let done = hist.finished_by(rounds as usize);
    let p = done as f64 / cfg.trials as f64;
    let std_error = (p * (1.0 - p) / cfg.trials as f64).sqrt();
    Ok(EstimateReport { mean: p, std_error, trials: cfg.trials, seed: cfg.seed, quantiles: None })
}

/// Empirical α-quantile of the propagation time: the least `t` with at
/// least `⌈α·trials⌉` trials finished by round `t`.
pub fn estimate_confidence_time(g: &Graph, start: &VertexSet, alpha: f64, cfg: &McConfig) -> Result<EstimateReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level must lie in (0, 1), got {alpha}")));
    }
    let hist = run_trials(g, start, cfg, cfg.round_cap)?;
    if hist.censored > 0 {
        return Err(Error::RoundCap { cap: cfg.round_cap });
    }
    let (mean, std_error) = moments(&hist, cfg.trials);
    let rounds = quantile_of(&hist, cfg.trials, alpha);
    Ok(EstimateReport {
        mean,
        std_error,
        trials: cfg.trials,
        seed: cfg.seed,
        quantiles: Some(vec![Quantile { alpha, rounds }]),
    })
}
