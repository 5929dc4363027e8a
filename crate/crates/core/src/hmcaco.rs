//! Hybrid Monte Carlo ant colony optimization.
//!
//! A single model path is kept between generations. Each ant copies the
//! model and replaces the blocks at `k` random positions, drawing each
//! replacement from the pheromone on the complete block graph: a candidate
//! block `j` at position `i` is weighted by the mean of `t^alpha` over its
//! edges to the blocks kept at every other position, times `eta^beta` from
//! the full-chain energy with `j` substituted (see [`EtaForm`]). After hill climbing, the
//! generation's best ant competes with the model under the Metropolis rule;
//! the winner deposits on all of its node pairs and becomes the next model.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::aco::{
    bounds_hold, generation_best, normalized_eta, optimum_estimate, pow, roulette, run_ants, validate_colony,
};
use crate::blocks::BlockTable;
use crate::error::{HpError, Result};
use crate::local_search::{accept, climb};
use crate::path::{path_len, Path};
use crate::pheromone::{GraphMode, PheromoneMatrix};
use crate::run::{substream, Budget, RunClock, RunOutcome, Tracker};
use crate::scoring::Evaluator;
use crate::sequence::HpSequence;

/// Map from full-chain candidate energies to heuristic values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaForm {
    /// `eta = e / e_min`. Energies are negative, so this lies in (0, 1] with
    /// the best candidate at 1.
    #[default]
    Ratio,
    /// `eta = 1 / (1 + e - e_min)`, the constructive-step form. On complete
    /// chains one contact shifts the energy by tens of units, so nearly all
    /// weight lands on the greedy block.
    Difference,
}

impl EtaForm {
    pub fn apply(self, energies: &[f64]) -> Vec<f64> {
        match self {
            EtaForm::Difference => normalized_eta(energies),
            EtaForm::Ratio => {
                let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
                energies.iter().map(|&e| e / min).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HmcacoConfig {
    pub n_ants: usize,
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    /// Positions replaced per ant.
    pub k_perturb: usize,
    /// Metropolis temperature for the model/elite comparison.
    pub temperature: f64,
    /// Optional per-generation multiplier on the temperature.
    pub temperature_decay: Option<f64>,
    pub eta: EtaForm,
    pub hc_sweeps: usize,
    pub budget: Budget,
    pub seed: u64,
    pub parallel_ants: bool,
}

impl Default for HmcacoConfig {
    fn default() -> Self {
        Self {
            n_ants: 5,
            alpha: 1.0,
            beta: 1.0,
            rho: 0.1,
            k_perturb: 4,
            temperature: 2.0,
            temperature_decay: None,
            eta: EtaForm::default(),
            hc_sweeps: 200,
            budget: Budget::iterations(100),
            seed: 0,
            parallel_ants: false,
        }
    }
}

impl HmcacoConfig {
    pub fn validate(&self, positions: usize) -> Result<()> {
        validate_colony(self.n_ants, self.alpha, self.beta, self.rho)?;
        if self.k_perturb == 0 || self.k_perturb > positions {
            return Err(HpError::PerturbationSize {
                k: self.k_perturb,
                len: positions,
            });
        }
        if self.temperature.is_nan() || self.temperature <= 0.0 {
            return Err(HpError::NonPositiveTemperature(self.temperature));
        }
        if let Some(d) = self.temperature_decay {
            if !(d > 0.0 && d <= 1.0) {
                return Err(HpError::InvalidConfig(format!(
                    "temperature_decay must lie in (0, 1], got {d}"
                )));
            }
        }
        self.budget.validate()
    }
}

/// Selection probabilities for the block at `position`, every other
/// position held at its current block in `path`.
pub fn replacement_probabilities(
    matrix: &PheromoneMatrix,
    eval: &mut Evaluator<'_>,
    path: &[usize],
    position: usize,
    alpha: f64,
    beta: f64,
    eta: EtaForm,
) -> Vec<(usize, f64)> {
    let table = eval.table();
    let candidates = table.candidates(position);
    let kept = path.len() - 1;
    let mut trial = path.to_vec();
    let energies: Vec<f64> = candidates
        .iter()
        .map(|&b| {
            trial[position] = b;
            eval.evaluate(&trial).energy
        })
        .collect();
    let etas = eta.apply(&energies);
    let weights: Vec<f64> = candidates
        .iter()
        .zip(&etas)
        .map(|(&b, &eta)| {
            let tau = path
                .iter()
                .enumerate()
                .filter(|&(sigma, _)| sigma != position)
                .map(|(sigma, &bs)| pow(matrix.value(sigma, bs, position, b), alpha))
                .sum::<f64>()
                / kept as f64;
            tau * pow(eta, beta)
        })
        .collect();
    let total: f64 = weights.iter().sum();
    candidates.iter().zip(weights).map(|(&b, w)| (b, w / total)).collect()
}

/// Replace the blocks at `k` distinct random positions, in ascending
/// position order, each draw seeing the earlier replacements.
#[allow(clippy::too_many_arguments)]
pub fn perturb<R: Rng + ?Sized>(
    model: &Path,
    matrix: &PheromoneMatrix,
    eval: &mut Evaluator<'_>,
    k: usize,
    alpha: f64,
    beta: f64,
    eta: EtaForm,
    rng: &mut R,
) -> Result<Path> {
    if k > model.len() {
        return Err(HpError::PerturbationSize { k, len: model.len() });
    }
    if k == 0 {
        return Ok(model.clone());
    }
    let mut positions = index::sample(rng, model.len(), k).into_vec();
    positions.sort_unstable();
    let mut ant = model.clone();
    for position in positions {
        let probs = replacement_probabilities(matrix, eval, ant.choices(), position, alpha, beta, eta);
        let block = roulette(&probs, rng);
        ant.set(position, block);
    }
    Ok(ant)
}

pub fn hmcaco_run(seq: &HpSequence, table: &BlockTable, config: &HmcacoConfig) -> Result<RunOutcome> {
    hmcaco_run_with_matrix(seq, table, config).map(|(outcome, _)| outcome)
}

/// As [`hmcaco_run`], also returning the final pheromone matrix.
pub fn hmcaco_run_with_matrix(
    seq: &HpSequence,
    table: &BlockTable,
    config: &HmcacoConfig,
) -> Result<(RunOutcome, PheromoneMatrix)> {
    let positions = path_len(seq.len());
    config.validate(positions)?;
    let mut clock = RunClock::start(config.budget)?;
    let mut matrix = PheromoneMatrix::new(positions, GraphMode::AllPairs)?;
    let c_opt = optimum_estimate(crate::scoring::contact_upper_bound(seq));
    matrix.update_bounds(c_opt, c_opt, config.rho)?;

    // Generation 0 is reserved for the model draw and Metropolis coins.
    let mut chain_rng = substream(config.seed, 0, u64::MAX);
    let mut eval = Evaluator::new(seq, table);
    let mut model = Path::random(table, seq.len(), &mut chain_rng);
    let mut model_score = eval.evaluate(model.choices());
    let mut tracker = Tracker::new(model.clone(), model_score, 0);
    let mut temperature = config.temperature;

    while !clock.exhausted(tracker.best_energy()) {
        clock.tick();
        let generation = clock.iterations();
        let ants = run_ants(seq, table, config.n_ants, config.parallel_ants, |eval, a| {
            let mut rng = substream(config.seed, generation, a as u64);
            let ant = perturb(
                &model,
                &matrix,
                eval,
                config.k_perturb,
                config.alpha,
                config.beta,
                config.eta,
                &mut rng,
            )
            .expect("k validated");
            let c = climb(eval, ant, config.hc_sweeps);
            (c.path, c.score)
        });

        let previous_best = tracker.best_energy();
        for (p, s) in &ants {
            tracker.observe(p, s, generation);
        }
        let (best_path, best_score) = generation_best(&ants).clone();

        matrix.evaporate(config.rho)?;
        let u: f64 = chain_rng.gen();
        if accept(model_score.energy, best_score.energy, temperature, u) {
            model = best_path;
            model_score = best_score;
        }
        if tracker.best_energy() < previous_best {
            matrix.update_bounds(tracker.best_energy(), c_opt, config.rho)?;
        }
        matrix.deposit(model.choices(), model_score.energy, c_opt)?;
        debug_assert!(bounds_hold(&matrix));
        if let Some(d) = config.temperature_decay {
            temperature *= d;
        }
    }
    Ok((tracker.finish(&clock), matrix))
}
