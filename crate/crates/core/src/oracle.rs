//! Exhaustive search over every path of a small instance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockTable, N_BLOCKS};
use crate::error::{HpError, Result};
use crate::path::{path_len, Path};
use crate::scoring::Evaluator;
use crate::sequence::HpSequence;

/// Largest path length searched without an explicit override (6 * 150^2 paths).
pub const DEFAULT_MAX_POSITIONS: usize = 3;

/// Energies closer than this are treated as ties.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_energy: f64,
    /// Most H-H contacts over all self-avoiding paths.
    pub best_hh_feasible: u32,
    /// Paths attaining `best_energy`.
    pub optimal_paths: u64,
    pub enumerated: u64,
    /// Lexicographically first optimal path.
    pub best_path: Path,
    /// Lexicographically first self-avoiding path with `best_hh_feasible` contacts.
    pub best_feasible_path: Path,
}

/// Number of paths of `positions` blocks.
pub fn path_space_size(positions: usize) -> u64 {
    6 * (N_BLOCKS as u64).pow(positions as u32 - 1)
}

#[derive(Clone)]
struct Partial {
    best_energy: f64,
    best_hh_feasible: Option<u32>,
    optimal_paths: u64,
    enumerated: u64,
    best_choices: Vec<usize>,
    feasible_choices: Vec<usize>,
}

impl Partial {
    /// Combine with a partial from a later head block; ties keep `self`.
    fn merge(self, other: Partial) -> Partial {
        let (best_hh_feasible, feasible_choices) = if other.best_hh_feasible > self.best_hh_feasible {
            (other.best_hh_feasible, other.feasible_choices)
        } else {
            (self.best_hh_feasible, self.feasible_choices)
        };
        let (best_energy, best_choices, optimal_paths) = if other.best_energy < self.best_energy - TIE {
            (other.best_energy, other.best_choices, other.optimal_paths)
        } else if (other.best_energy - self.best_energy).abs() <= TIE {
            (
                self.best_energy,
                self.best_choices,
                self.optimal_paths + other.optimal_paths,
            )
        } else {
            (self.best_energy, self.best_choices, self.optimal_paths)
        };
        Partial {
            best_energy,
            best_hh_feasible,
            optimal_paths,
            enumerated: self.enumerated + other.enumerated,
            best_choices,
            feasible_choices,
        }
    }
}

/// Visit every path, score it and reduce to exact optima. Instances with more
/// than [`DEFAULT_MAX_POSITIONS`] blocks need `allow_large`.
pub fn exhaustive_search(seq: &HpSequence, table: &BlockTable, allow_large: bool) -> Result<OracleResult> {
    let positions = path_len(seq.len());
    if positions > DEFAULT_MAX_POSITIONS && !allow_large {
        return Err(HpError::InstanceTooLarge {
            positions,
            paths: path_space_size(positions),
        });
    }

    // One task per head block; each walks the remaining positions as an odometer.
    let partials: Vec<Partial> = table
        .start_ids()
        .par_iter()
        .map(|&head| {
            let mut eval = Evaluator::new(seq, table);
            let mut choices = vec![0usize; positions];
            choices[0] = head;
            let mut acc: Option<Partial> = None;
            loop {
                let s = eval.evaluate(&choices);
                let feasible_hh = s.is_feasible().then_some(s.hh);
                match &mut acc {
                    None => {
                        acc = Some(Partial {
                            best_energy: s.energy,
                            best_hh_feasible: feasible_hh,
                            optimal_paths: 1,
                            enumerated: 1,
                            best_choices: choices.clone(),
                            feasible_choices: choices.clone(),
                        })
                    }
                    Some(a) => {
                        a.enumerated += 1;
                        if feasible_hh > a.best_hh_feasible {
                            a.best_hh_feasible = feasible_hh;
                            a.feasible_choices.copy_from_slice(&choices);
                        }
                        if s.energy < a.best_energy - TIE {
                            a.best_energy = s.energy;
                            a.optimal_paths = 1;
                            a.best_choices.copy_from_slice(&choices);
                        } else if (s.energy - a.best_energy).abs() <= TIE {
                            a.optimal_paths += 1;
                        }
                    }
                }
                // Advance the odometer over positions 1..
                let mut pos = positions - 1;
                loop {
                    if pos == 0 {
                        return acc.expect("visited at least one path");
                    }
                    choices[pos] += 1;
                    if choices[pos] < N_BLOCKS {
                        break;
                    }
                    choices[pos] = 0;
                    pos -= 1;
                }
            }
        })
        .collect();

    // Reduce in head-block order so the reported path is deterministic.
    let total = partials.into_iter().reduce(Partial::merge).expect("six head blocks");
    Ok(OracleResult {
        best_energy: total.best_energy,
        // A straight chain is always self-avoiding, so some feasible path exists.
        best_hh_feasible: total.best_hh_feasible.unwrap_or(0),
        optimal_paths: total.optimal_paths,
        enumerated: total.enumerated,
        best_path: Path::from_raw(total.best_choices),
        best_feasible_path: Path::from_raw(total.feasible_choices),
    })
}
