//! Monte Carlo realization of the measurement.
//!
//! Trials are grouped into fixed batches of [`BATCH_TRIALS`]. Batch `b` draws
//! from ChaCha8 seeded with the run seed on stream `b`, so every batch has its
//! own reproducible random sequence regardless of which worker runs it.
//! Partitions are contiguous ranges of batches; the merged count is the same
//! for any partition count or thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{born_probability, helstrom_measurement, BinaryMeasurement};
use crate::error::{Error, Result};
use crate::metrics::Priors;
use crate::parallel::{sum_range, Execution};
use crate::qstate::DensityOperator;

/// Trials per random stream.
pub const BATCH_TRIALS: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

/// Decision counts from a batch of simulated measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub decide_h1_count: u64,
    pub decide_h0_count: u64,
    pub trials: u64,
    pub true_hypothesis: Hypothesis,
    pub seed: u64,
}

impl TrialOutcome {
    /// Fraction of trials that picked the wrong hypothesis.
    pub fn error_rate(&self) -> f64 {
        let wrong = match self.true_hypothesis {
            Hypothesis::H0 => self.decide_h1_count,
            Hypothesis::H1 => self.decide_h0_count,
        };
        wrong as f64 / self.trials as f64
    }
}

/// SplitMix64 finalizer over `seed + (tag + 1)·γ`; derives independent sub-seeds.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed.wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn batch_hits(seed: u64, batch: u64, trials: u64, p: f64) -> u64 {
    let start = batch * BATCH_TRIALS;
    let len = BATCH_TRIALS.min(trials - start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    (0..len).filter(|_| rng.random::<f64>() < p).count() as u64
}

/// Number of "decide H1" outcomes in `trials` Bernoulli(p) draws.
fn count_hits(p: f64, trials: u64, seed: u64, exec: Execution, partitions: Option<u64>) -> u64 {
    let batches = trials.div_ceil(BATCH_TRIALS);
    match partitions {
        None => sum_range(exec, batches, |b| batch_hits(seed, b, trials, p)),
        Some(parts) => sum_range(exec, parts, |k| {
            let lo = k * batches / parts;
            let hi = (k + 1) * batches / parts;
            (lo..hi).map(|b| batch_hits(seed, b, trials, p)).sum()
        }),
    }
}

/// Simulates `trials` independent measurements of `rho_true`.
pub fn simulate_trials(
    m: &BinaryMeasurement,
    rho_true: &DensityOperator,
    truth: Hypothesis,
    trials: u64,
    seed: u64,
) -> Result<TrialOutcome> {
    simulate_trials_with(m, rho_true, truth, trials, seed, Execution::default(), None)
}

/// [`simulate_trials`] with explicit execution mode and partition count.
///
/// `partitions = None` schedules one work item per batch.
pub fn simulate_trials_with(
    m: &BinaryMeasurement,
    rho_true: &DensityOperator,
    truth: Hypothesis,
    trials: u64,
    seed: u64,
    exec: Execution,
    partitions: Option<u64>,
) -> Result<TrialOutcome> {
    if trials == 0 {
        return Err(Error::degenerate("at least one trial is required"));
    }
    if partitions == Some(0) {
        return Err(Error::degenerate("partition count must be positive"));
    }
    let p = born_probability(m, rho_true)?;
    let hits = count_hits(p, trials, seed, exec, partitions);
    Ok(TrialOutcome {
        decide_h1_count: hits,
        decide_h0_count: trials - hits,
        trials,
        true_hypothesis: truth,
        seed,
    })
}

/// Monte Carlo estimate of the Helstrom test's error, with its raw counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRun {
    pub error: f64,
    pub h0: Option<TrialOutcome>,
    pub h1: Option<TrialOutcome>,
}

/// Runs the Helstrom measurement on `⌊π₀·trials⌋` copies of `rho0` and the
/// remaining trials on `rho1`, returning the prior-weighted error rate.
///
/// The two hypotheses use sub-seeds `derive_seed(seed, 0)` and `derive_seed(seed, 1)`.
pub fn run_empirical(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    priors: Priors,
    trials: u64,
    seed: u64,
    exec: Execution,
    partitions: Option<u64>,
) -> Result<EmpiricalRun> {
    priors.validate()?;
    if trials == 0 {
        return Err(Error::degenerate("at least one trial is required"));
    }
    let n0 = ((priors.h0 * trials as f64).floor() as u64).min(trials);
    let n1 = trials - n0;
    for (n, prior, name) in [(n0, priors.h0, "H0"), (n1, priors.h1, "H1")] {
        if n == 0 && prior > 0.0 {
            return Err(Error::degenerate(format!(
                "{trials} trials leave no samples for {name} (prior {prior})"
            )));
        }
    }
    let m = helstrom_measurement(rho0, rho1, priors)?;
    let run = |rho: &DensityOperator, truth, n: u64, tag| {
        if n == 0 {
            Ok(None)
        } else {
            simulate_trials_with(&m, rho, truth, n, derive_seed(seed, tag), exec, partitions)
                .map(Some)
        }
    };
    let h0 = run(rho0, Hypothesis::H0, n0, 0)?;
    let h1 = run(rho1, Hypothesis::H1, n1, 1)?;
    let error = h0.map_or(0.0, |o| priors.h0 * o.error_rate())
        + h1.map_or(0.0, |o| priors.h1 * o.error_rate());
    Ok(EmpiricalRun { error, h0, h1 })
}

/// Prior-weighted empirical error of the Helstrom measurement.
pub fn empirical_error(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    priors: Priors,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    run_empirical(rho0, rho1, priors, trials, seed, Execution::default(), None).map(|r| r.error)
}
