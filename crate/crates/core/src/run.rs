//! Shared machinery for search runs: budgets, best-so-far tracking and
//! seeded random substreams.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HpError, Result};
use crate::path::Path;
use crate::scoring::ScoreBreakdown;

pub type RunRng = ChaCha8Rng;

/// Stopping rule for a run. Any limit that is set can end the run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Budget {
    /// Method-specific iterations (SA moves, colony generations, restarts).
    pub iterations: Option<u64>,
    pub time: Option<Duration>,
    /// Stop as soon as the best energy is at or below this value.
    pub target_energy: Option<f64>,
}

impl Budget {
    pub fn iterations(n: u64) -> Self {
        Self {
            iterations: Some(n),
            ..Self::default()
        }
    }

    pub fn seconds(s: f64) -> Self {
        Self {
            time: Some(Duration::from_secs_f64(s)),
            ..Self::default()
        }
    }

    pub fn with_target(mut self, energy: f64) -> Self {
        self.target_energy = Some(energy);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let iter_ok = self.iterations.is_some_and(|n| n > 0);
        let time_ok = self.time.is_some_and(|t| !t.is_zero());
        if self.iterations == Some(0) || self.time.is_some_and(|t| t.is_zero()) || !(iter_ok || time_ok) {
            return Err(HpError::ZeroBudget);
        }
        Ok(())
    }

    /// True when the iteration count alone decides termination (no wall clock).
    pub fn is_deterministic(&self) -> bool {
        self.time.is_none()
    }
}

/// Budget bookkeeping for one run.
#[derive(Debug)]
pub struct RunClock {
    budget: Budget,
    start: Instant,
    iterations: u64,
}

impl RunClock {
    pub fn start(budget: Budget) -> Result<Self> {
        budget.validate()?;
        Ok(Self {
            budget,
            start: Instant::now(),
            iterations: 0,
        })
    }

    pub fn tick(&mut self) {
        self.iterations += 1;
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn exhausted(&self, best_energy: f64) -> bool {
        if self.budget.iterations.is_some_and(|n| self.iterations >= n) {
            return true;
        }
        if self.budget.target_energy.is_some_and(|t| best_energy <= t + 1e-9) {
            return true;
        }
        self.budget.time.is_some_and(|t| self.start.elapsed() >= t)
    }
}

/// Best-so-far energy at the iteration where it improved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub energy: f64,
}

/// Result of any single search run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best_path: Path,
    pub best: ScoreBreakdown,
    /// Highest-contact self-avoiding solution observed, if any.
    pub best_feasible: Option<(Path, ScoreBreakdown)>,
    pub trace: Vec<TracePoint>,
    pub iterations: u64,
    pub elapsed: Duration,
}

/// Records the lowest-energy solution and, separately, the feasible solution
/// with the most H-H contacts (ties broken by energy).
#[derive(Debug, Clone)]
pub struct Tracker {
    best_path: Path,
    best: ScoreBreakdown,
    best_feasible: Option<(Path, ScoreBreakdown)>,
    trace: Vec<TracePoint>,
}

impl Tracker {
    pub fn new(path: Path, score: ScoreBreakdown, iteration: u64) -> Self {
        let best_feasible = score.is_feasible().then(|| (path.clone(), score));
        Self {
            trace: vec![TracePoint {
                iteration,
                energy: score.energy,
            }],
            best_path: path,
            best: score,
            best_feasible,
        }
    }

    pub fn best_energy(&self) -> f64 {
        self.best.energy
    }

    pub fn best(&self) -> (&Path, &ScoreBreakdown) {
        (&self.best_path, &self.best)
    }

    /// Offer a solution; returns true if it improved the best energy.
    pub fn observe(&mut self, path: &Path, score: &ScoreBreakdown, iteration: u64) -> bool {
        if score.is_feasible() {
            let better = match &self.best_feasible {
                None => true,
                Some((_, b)) => score.hh > b.hh || (score.hh == b.hh && score.energy < b.energy),
            };
            if better {
                self.best_feasible = Some((path.clone(), *score));
            }
        }
        if score.energy < self.best.energy {
            self.best = *score;
            self.best_path = path.clone();
            self.trace.push(TracePoint {
                iteration,
                energy: score.energy,
            });
            true
        } else {
            false
        }
    }

    pub fn finish(self, clock: &RunClock) -> RunOutcome {
        RunOutcome {
            best_path: self.best_path,
            best: self.best,
            best_feasible: self.best_feasible,
            trace: self.trace,
            iterations: clock.iterations(),
            elapsed: clock.elapsed(),
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Fold a list of words into a seed: `h = splitmix64(h ^ w)` for each word,
/// starting from `base`.
pub fn mix_seed(base: u64, words: &[u64]) -> u64 {
    words.iter().fold(splitmix64(base), |h, &w| splitmix64(h ^ w))
}

pub fn rng_from_seed(seed: u64) -> RunRng {
    RunRng::seed_from_u64(seed)
}

/// Independent stream for ant `ant` in generation `iteration` of a run.
pub fn substream(run_seed: u64, iteration: u64, ant: u64) -> RunRng {
    rng_from_seed(mix_seed(run_seed, &[iteration, ant]))
}
