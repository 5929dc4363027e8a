//! Max-Min Ant System on the layered block graph.
//!
//! Each generation, every ant builds a path position by position. The head
//! block is drawn in proportion to its mean incident pheromone; each later
//! block `j` is drawn with weight `t(prev, j)^alpha * eta_j^beta`, where `eta`
//! scores the energy of the partially decoded chain. Ant solutions are then
//! hill-climbed, the matrix evaporates, and the generation's best ant
//! deposits `c_s / c_opt` on its edges. Bounds follow the best-so-far energy.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockTable;
use crate::error::{HpError, Result};
use crate::local_search::climb;
use crate::path::{path_len, Path};
use crate::pheromone::{GraphMode, NodeId, PheromoneMatrix};
use crate::run::{substream, Budget, RunClock, RunOutcome, Tracker};
use crate::scoring::{Evaluator, ScoreBreakdown};
use crate::sequence::HpSequence;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcoConfig {
    pub n_ants: usize,
    /// Pheromone exponent.
    pub alpha: f64,
    /// Heuristic exponent.
    pub beta: f64,
    /// Evaporation rate.
    pub rho: f64,
    /// Sweep limit of the hill climb applied to every ant.
    pub hc_sweeps: usize,
    pub budget: Budget,
    pub seed: u64,
    /// Build and climb the ants of a generation on the rayon pool.
    pub parallel_ants: bool,
}

impl Default for AcoConfig {
    fn default() -> Self {
        Self {
            n_ants: 5,
            alpha: 1.0,
            beta: 1.0,
            rho: 0.1,
            hc_sweeps: 200,
            budget: Budget::iterations(100),
            seed: 0,
            parallel_ants: false,
        }
    }
}

impl AcoConfig {
    pub fn validate(&self) -> Result<()> {
        validate_colony(self.n_ants, self.alpha, self.beta, self.rho)?;
        self.budget.validate()
    }
}

pub(crate) fn validate_colony(n_ants: usize, alpha: f64, beta: f64, rho: f64) -> Result<()> {
    if n_ants == 0 {
        return Err(HpError::InvalidConfig("n_ants must be at least 1".into()));
    }
    if !(alpha >= 0.0 && alpha.is_finite() && beta >= 0.0 && beta.is_finite()) {
        return Err(HpError::InvalidConfig(format!(
            "alpha and beta must be finite and non-negative, got {alpha}, {beta}"
        )));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(HpError::InvalidRate(rho));
    }
    Ok(())
}

/// Energy estimate of the optimum: `-(thh + 1)^2`, the energy of a
/// conformation with `thh` contacts and no overlap, H-P contact or spread.
pub fn optimum_estimate(thh: u32) -> f64 {
    let t = thh as f64 + 1.0;
    -(t * t)
}

#[inline]
pub(crate) fn pow(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Map energies to `eta = 1 / (1 + e - e_min)`, in (0, 1] with the best at 1.
pub fn normalized_eta(energies: &[f64]) -> Vec<f64> {
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    energies.iter().map(|&e| 1.0 / (1.0 + (e - min))).collect()
}

/// Heuristic value of every candidate block at `prefix.len()`, computed from
/// the energy of the chain decoded from `prefix + candidate` up to and
/// including the next anchor residue.
pub fn heuristic_etas(eval: &mut Evaluator<'_>, prefix: &[usize]) -> Vec<f64> {
    let position = prefix.len();
    let table = eval.table();
    let residues = (3 * (position + 1) + 1).min(eval.n());
    let mut trial = Vec::with_capacity(position + 1);
    trial.extend_from_slice(prefix);
    trial.push(0);
    let energies: Vec<f64> = table
        .candidates(position)
        .iter()
        .map(|&b| {
            trial[position] = b;
            eval.evaluate_residues(&trial, residues).energy
        })
        .collect();
    normalized_eta(&energies)
}

/// Candidate blocks at the next position with their selection probabilities.
pub fn step_probabilities(
    matrix: &PheromoneMatrix,
    eval: &mut Evaluator<'_>,
    prefix: &[usize],
    alpha: f64,
    beta: f64,
) -> Vec<(usize, f64)> {
    let table = eval.table();
    let position = prefix.len();
    let candidates = table.candidates(position);
    let weights: Vec<f64> = if position == 0 {
        candidates
            .iter()
            .map(|&b| matrix.mean_incident(NodeId::new(0, b)))
            .collect()
    } else {
        let etas = heuristic_etas(eval, prefix);
        let row = matrix.row(position - 1, prefix[position - 1], position);
        candidates
            .iter()
            .zip(&etas)
            .map(|(&b, &eta)| pow(row[b], alpha) * pow(eta, beta))
            .collect()
    };
    let total: f64 = weights.iter().sum();
    candidates.iter().zip(weights).map(|(&b, w)| (b, w / total)).collect()
}

/// Roulette-wheel draw over non-negative weights.
pub(crate) fn roulette<R: Rng + ?Sized>(items: &[(usize, f64)], rng: &mut R) -> usize {
    let total: f64 = items.iter().map(|x| x.1).sum();
    let mut pick = rng.gen::<f64>() * total;
    for &(item, w) in items {
        if pick < w {
            return item;
        }
        pick -= w;
    }
    items
        .iter()
        .rev()
        .find(|x| x.1 > 0.0)
        .map_or(items[items.len() - 1].0, |x| x.0)
}

/// Build one path on the layered graph.
pub fn construct_solution<R: Rng + ?Sized>(
    matrix: &PheromoneMatrix,
    eval: &mut Evaluator<'_>,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) -> Path {
    let len = path_len(eval.n());
    let mut choices = Vec::with_capacity(len);
    while choices.len() < len {
        let probs = step_probabilities(matrix, eval, &choices, alpha, beta);
        choices.push(roulette(&probs, rng));
    }
    Path::from_raw(choices)
}

/// Evaluate a generation of ants, each with its own seeded substream.
pub(crate) fn run_ants<F>(
    seq: &HpSequence,
    table: &BlockTable,
    n_ants: usize,
    parallel: bool,
    ant: F,
) -> Vec<(Path, ScoreBreakdown)>
where
    F: Fn(&mut Evaluator<'_>, usize) -> (Path, ScoreBreakdown) + Sync,
{
    if parallel {
        (0..n_ants)
            .into_par_iter()
            .map_init(|| Evaluator::new(seq, table), |eval, a| ant(eval, a))
            .collect()
    } else {
        let mut eval = Evaluator::new(seq, table);
        (0..n_ants).map(|a| ant(&mut eval, a)).collect()
    }
}

/// Lowest-energy ant; ties go to the lowest ant index.
pub(crate) fn generation_best(ants: &[(Path, ScoreBreakdown)]) -> &(Path, ScoreBreakdown) {
    ants.iter()
        .reduce(|best, x| if x.1.energy < best.1.energy { x } else { best })
        .expect("at least one ant")
}

pub(crate) fn bounds_hold(m: &PheromoneMatrix) -> bool {
    m.values().iter().all(|&v| v >= m.t_min() && v <= m.t_max())
}

pub fn aco_run(seq: &HpSequence, table: &BlockTable, config: &AcoConfig) -> Result<RunOutcome> {
    aco_run_with_matrix(seq, table, config).map(|(outcome, _)| outcome)
}

/// As [`aco_run`], also returning the final pheromone matrix.
pub fn aco_run_with_matrix(
    seq: &HpSequence,
    table: &BlockTable,
    config: &AcoConfig,
) -> Result<(RunOutcome, PheromoneMatrix)> {
    config.validate()?;
    let mut clock = RunClock::start(config.budget)?;
    let n = seq.len();
    let mut matrix = PheromoneMatrix::new(path_len(n), GraphMode::Adjacent)?;
    let thh = crate::scoring::contact_upper_bound(seq);
    let c_opt = optimum_estimate(thh);
    matrix.update_bounds(c_opt, c_opt, config.rho)?;

    let mut tracker: Option<Tracker> = None;
    loop {
        if tracker.as_ref().is_some_and(|t| clock.exhausted(t.best_energy())) {
            break;
        }
        clock.tick();
        let generation = clock.iterations();
        let ants = run_ants(seq, table, config.n_ants, config.parallel_ants, |eval, a| {
            let mut rng = substream(config.seed, generation, a as u64);
            let path = construct_solution(&matrix, eval, config.alpha, config.beta, &mut rng);
            let c = climb(eval, path, config.hc_sweeps);
            (c.path, c.score)
        });

        let previous_best = tracker.as_ref().map_or(f64::INFINITY, Tracker::best_energy);
        let (best_path, best_score) = generation_best(&ants).clone();
        let t = tracker.get_or_insert_with(|| Tracker::new(best_path.clone(), best_score, generation));
        for (p, s) in &ants {
            t.observe(p, s, generation);
        }

        matrix.evaporate(config.rho)?;
        if best_score.energy < previous_best {
            matrix.update_bounds(best_score.energy, c_opt, config.rho)?;
        }
        matrix.deposit(best_path.choices(), best_score.energy, c_opt)?;
        debug_assert!(bounds_hold(&matrix));
    }
    let outcome = tracker.expect("at least one generation").finish(&clock);
    Ok((outcome, matrix))
}
