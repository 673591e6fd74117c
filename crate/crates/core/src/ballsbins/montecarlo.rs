//! Monte Carlo estimation of max-load statistics.
//!
//! The ball set is fixed per experiment and a fresh uniform map is drawn for
//! every trial. Trial `i` uses random substream `i` of the master seed, so the
//! per-trial values do not depend on how trials are scheduled across threads.

use rayon::prelude::*;
use serde::Serialize;

use super::bins::LoadCounter;
use super::events::event_e2;
use super::sets::{generate_set, BallSet, SetKind};
use crate::error::{Error, Result};
use crate::gf2::{sample_surjective, sample_uniform_linear};
use crate::rng::{self, RNG_ALGORITHM, SETUP_STREAM};
use crate::stats::{self, Interval, Z_95};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub u: usize,
    pub b: usize,
    pub set_kind: SetKind,
    /// Cardinality, or dimension for the subspace kinds.
    pub set_param: usize,
    pub trials: usize,
    pub seed: u64,
    /// Thresholds `ℓ` at which `P[lbin ≥ ℓ]` is estimated.
    pub thresholds: Vec<usize>,
    /// Worker threads; `0` means rayon's default.
    pub jobs: usize,
}

/// Empirical frequency of an event with a 95% Wilson interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub threshold: usize,
    pub hits: u64,
    pub trials: u64,
    pub freq: f64,
    pub ci: Interval,
}

impl TailEstimate {
    fn new(threshold: usize, hits: u64, trials: u64) -> Self {
        Self { threshold, hits, trials, freq: hits as f64 / trials as f64, ci: stats::wilson(hits, trials, Z_95) }
    }

    /// Binomial standard error at the observed frequency.
    pub fn std_error(&self) -> f64 {
        (self.freq * (1.0 - self.freq) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub u: usize,
    pub b: usize,
    pub set_kind: String,
    pub set_param: usize,
    pub set_size: usize,
    pub trials: usize,
    pub seed: u64,
    pub rng: &'static str,
    #[serde(skip)]
    pub lbins: Vec<usize>,
    pub mean: f64,
    pub std_error: f64,
    pub min: usize,
    pub median: usize,
    pub q90: usize,
    pub q99: usize,
    pub max: usize,
    pub tails: Vec<TailEstimate>,
}

impl TrialSummary {
    pub fn from_lbins(config: &ExperimentConfig, set_size: usize, lbins: Vec<usize>) -> Self {
        let mut sorted = lbins.clone();
        sorted.sort_unstable();
        let n = lbins.len() as u64;
        let mut thresholds = config.thresholds.clone();
        thresholds.sort_unstable();
        thresholds.dedup();
        let tails = thresholds
            .iter()
            .map(|&ell| {
                let hits = lbins.iter().filter(|&&l| l >= ell).count() as u64;
                TailEstimate::new(ell, hits, n)
            })
            .collect();
        Self {
            u: config.u,
            b: config.b,
            set_kind: config.set_kind.to_string(),
            set_param: config.set_param,
            set_size,
            trials: lbins.len(),
            seed: config.seed,
            rng: RNG_ALGORITHM,
            mean: stats::mean(&lbins),
            std_error: stats::std_error(&lbins),
            min: sorted[0],
            median: stats::quantile(&sorted, 0.5),
            q90: stats::quantile(&sorted, 0.9),
            q99: stats::quantile(&sorted, 0.99),
            max: sorted[sorted.len() - 1],
            tails,
            lbins,
        }
    }
}

pub(crate) fn with_jobs<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return work();
    }
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool").install(work)
}

/// The experiment's ball set, drawn from the setup substream.
pub fn experiment_set(config: &ExperimentConfig) -> Result<BallSet> {
    generate_set(config.set_kind, config.u, config.set_param, &mut rng::substream(config.seed, SETUP_STREAM))
}

/// Largest-bin size under `trials` independent uniform maps `GF(2)^u → GF(2)^b`.
pub fn run_trials(s: &BallSet, b: usize, trials: usize, seed: u64, jobs: usize) -> Result<Vec<usize>> {
    let u = s.universe_dim();
    if b == 0 {
        return Err(Error::InvalidArgument("b must be >= 1".into()));
    }
    with_jobs(jobs, || {
        if let (Some(balls), true) = (s.packed(), b <= 64) {
            (0..trials)
                .into_par_iter()
                .map_init(
                    || LoadCounter::new(b),
                    |counter, i| {
                        let t = sample_uniform_linear(u, b, &mut rng::substream(seed, i as u64))?;
                        Ok(counter.largest(&t.packed().expect("dims fit"), balls))
                    },
                )
                .collect()
        } else {
            (0..trials)
                .into_par_iter()
                .map(|i| {
                    let t = sample_uniform_linear(u, b, &mut rng::substream(seed, i as u64))?;
                    super::bins::largest_bin(&t, s)
                })
                .collect()
        }
    })
}

/// Estimates `P[lbin ≥ ℓ]` for each configured threshold.
pub fn estimate_tail(config: &ExperimentConfig) -> Result<TrialSummary> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if config.thresholds.is_empty() {
        return Err(Error::InvalidArgument("at least one threshold is required".into()));
    }
    let s = experiment_set(config)?;
    let lbins = run_trials(&s, config.b, config.trials, config.seed, config.jobs)?;
    Ok(TrialSummary::from_lbins(config, s.len(), lbins))
}

/// Frequency of `E₂(S, T0, T1)` for uniform `T0: u → f` and uniform
/// surjective `T1: f → b`.
pub fn estimate_e2(s: &BallSet, f: usize, b: usize, trials: usize, seed: u64, jobs: usize) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let u = s.universe_dim();
    let hits: Result<Vec<bool>> = with_jobs(jobs, || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut r = rng::substream(seed, i as u64);
                let t0 = sample_uniform_linear(u, f, &mut r)?;
                let t1 = sample_surjective(f, b, &mut r)?;
                event_e2(s, &t0, &t1)
            })
            .collect()
    });
    let hits = hits?.into_iter().filter(|&h| h).count() as u64;
    Ok(TailEstimate::new(0, hits, trials as u64))
}
