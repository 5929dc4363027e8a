//! Block-exchange neighborhood, best-improvement hill climbing and
//! simulated annealing.
//!
//! Two paths are k-neighbors when they differ in at most k positions; the
//! 1-neighborhood holds every path that differs in exactly one position
//! (head position restricted to the start blocks), `(P - 1) * 149 + 5` moves
//! for a path of `P` blocks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockTable, N_BLOCKS, N_START_BLOCKS};
use crate::error::{HpError, Result};
use crate::lattice::Point3;
use crate::path::{decode_into, path_len, Path};
use crate::run::{rng_from_seed, Budget, RunClock, RunOutcome, Tracker};
use crate::scoring::{accumulate_pair, Evaluator, PairCounts, ScoreBreakdown};
use crate::sequence::HpSequence;

/// Replace the block at `position` with `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub position: usize,
    pub block: usize,
}

#[derive(Debug, Clone)]
pub struct Neighborhood1 {
    pub base: Path,
    pub moves: Vec<Move>,
}

/// Size of the 1-neighborhood for a path of `positions` blocks.
pub fn neighborhood_size(positions: usize) -> usize {
    (positions - 1) * (N_BLOCKS - 1) + (N_START_BLOCKS - 1)
}

/// All single-position replacements, ordered by (position, block).
pub fn enumerate_1_neighborhood(path: &Path, table: &BlockTable) -> Neighborhood1 {
    let mut moves = Vec::with_capacity(neighborhood_size(path.len()));
    for (position, &current) in path.choices().iter().enumerate() {
        for &block in table.candidates(position) {
            if block != current {
                moves.push(Move { position, block });
            }
        }
    }
    Neighborhood1 {
        base: path.clone(),
        moves,
    }
}

/// Metropolis criterion: always accept a non-worsening candidate, otherwise
/// accept when `u < exp((current - candidate) / t)`.
pub fn metropolis_accept(current: f64, candidate: f64, t: f64, u: f64) -> Result<bool> {
    if t.is_nan() || t <= 0.0 {
        return Err(HpError::NonPositiveTemperature(t));
    }
    Ok(accept(current, candidate, t, u))
}

#[inline]
pub(crate) fn accept(current: f64, candidate: f64, t: f64, u: f64) -> bool {
    candidate <= current || u < ((current - candidate) / t).exp()
}

/// Exact score of every 1-neighbor without decoding each one.
///
/// Replacing the block at position `p` moves the three residues it owns and
/// rigidly translates every later residue by the change in block
/// displacement. Pairs inside the prefix and inside the suffix are therefore
/// unchanged, and the prefix-suffix cross term depends only on that
/// translation, so it is computed once per distinct displacement.
#[derive(Debug)]
pub struct NeighborhoodScanner<'e, 'a> {
    eval: &'e mut Evaluator<'a>,
    coords: Vec<Point3>,
    anchors: Vec<Point3>,
    /// Cross-term cache keyed by translation, indexed in a 13^3 cube.
    cache: Vec<(u32, PairCounts)>,
    stamp: u32,
}

const SHIFT_RANGE: i32 = 6;
const SHIFT_SIDE: usize = (2 * SHIFT_RANGE + 1) as usize;

impl<'e, 'a> NeighborhoodScanner<'e, 'a> {
    pub fn new(eval: &'e mut Evaluator<'a>) -> Self {
        let n = eval.n();
        Self {
            eval,
            coords: Vec::with_capacity(n),
            anchors: Vec::new(),
            cache: vec![(0, PairCounts::default()); SHIFT_SIDE.pow(3)],
            stamp: 0,
        }
    }

    pub fn evaluator(&mut self) -> &mut Evaluator<'a> {
        self.eval
    }

    /// Best strictly improving move over `base` (lowest energy, ties to the
    /// lowest (position, block)), with its score.
    pub fn best_improvement(&mut self, base: &Path, base_score: &ScoreBreakdown) -> Option<(Move, ScoreBreakdown)> {
        let mut best: Option<(Move, ScoreBreakdown)> = None;
        self.scan(base, base_score, |mv, score| {
            let threshold = best.as_ref().map_or(base_score.energy, |(_, b)| b.energy);
            if score.energy < threshold {
                best = Some((mv, score));
            }
        });
        best
    }

    /// Visit every 1-neighbor in (position, block) order.
    pub fn scan(&mut self, base: &Path, base_score: &ScoreBreakdown, mut visit: impl FnMut(Move, ScoreBreakdown)) {
        let table = self.eval.table();
        let n = self.eval.n();
        let thh = self.eval.thh();
        let choices = base.choices();
        decode_into(choices, table, n, &mut self.coords);
        self.anchors.clear();
        let mut a = Point3::ORIGIN;
        for &b in choices {
            self.anchors.push(a);
            a = a + table.displacement(b);
        }
        let base_counts = base_score.counts();

        for (p, &current) in choices.iter().enumerate() {
            let lo = (3 * p).min(n);
            let hi = (3 * p + 3).min(n);
            self.stamp = self.stamp.wrapping_add(1);
            if self.stamp == 0 {
                self.cache.iter_mut().for_each(|e| e.0 = 0);
                self.stamp = 1;
            }
            let old_cross = self.cross_counts(p, lo, hi, current, current);
            for &block in table.candidates(p) {
                if block == current {
                    continue;
                }
                let new_cross = self.cross_counts(p, lo, hi, current, block);
                let counts = PairCounts {
                    hh: base_counts.hh - old_cross.hh + new_cross.hh,
                    ov: base_counts.ov - old_cross.ov + new_cross.ov,
                    hp: base_counts.hp - old_cross.hp + new_cross.hp,
                    hd: base_counts.hd - old_cross.hd + new_cross.hd,
                };
                visit(Move { position: p, block }, ScoreBreakdown::from_counts(counts, thh));
            }
        }
    }

    /// Sum over every pair touching the block residues `lo..hi`, plus all
    /// prefix-suffix pairs, with the block at `p` replaced by `block`.
    #[allow(clippy::needless_range_loop)]
    fn cross_counts(&mut self, p: usize, lo: usize, hi: usize, current: usize, block: usize) -> PairCounts {
        let table = self.eval.table();
        let is_h = self.eval.is_h();
        let n = self.coords.len();
        let anchor = self.anchors[p];
        let offs = table.offsets(block);
        let shift = table.displacement(block) - table.displacement(current);
        let mut c = PairCounts::default();

        // Block residues against the prefix and the translated suffix. Pairs
        // inside one block never score: gaps are at most 2 and blocks are
        // self-avoiding.
        for (k, r) in (lo..hi).enumerate() {
            let pr = anchor + offs[k];
            let hr = is_h[r];
            for a in 0..lo.min(r.saturating_sub(1)) {
                pair(&mut c, a, r, self.coords[a], pr, is_h[a], hr);
            }
            for s in hi.max(r + 2)..n {
                pair(&mut c, r, s, pr, self.coords[s] + shift, hr, is_h[s]);
            }
        }

        if hi < n && lo > 0 {
            let key = shift_key(shift);
            if self.cache[key].0 == self.stamp {
                c += self.cache[key].1;
            } else {
                let mut x = PairCounts::default();
                for a in 0..lo {
                    let pa = self.coords[a];
                    let ha = is_h[a];
                    for s in hi.max(a + 2)..n {
                        pair(&mut x, a, s, pa, self.coords[s] + shift, ha, is_h[s]);
                    }
                }
                self.cache[key] = (self.stamp, x);
                c += x;
            }
        }
        c
    }
}

#[inline(always)]
fn pair(c: &mut PairCounts, i: usize, j: usize, pi: Point3, pj: Point3, hi: bool, hj: bool) {
    let gap = j - i;
    let d = pi.manhattan(pj);
    if gap == 2 {
        if d == 0 {
            c.ov += 1;
        }
    } else {
        accumulate_pair(c, d, hi, hj, gap & 1 == 1);
    }
}

fn shift_key(s: Point3) -> usize {
    let idx = |v: i32| (v + SHIFT_RANGE) as usize;
    (idx(s.x) * SHIFT_SIDE + idx(s.y)) * SHIFT_SIDE + idx(s.z)
}

/// Outcome of a hill climb.
#[derive(Debug, Clone)]
pub struct Climb {
    pub path: Path,
    pub score: ScoreBreakdown,
    pub sweeps: usize,
    /// True when the last sweep found no improving neighbor.
    pub local_optimum: bool,
}

/// Best-improvement hill climbing over the 1-neighborhood.
pub fn climb(eval: &mut Evaluator<'_>, start: Path, max_sweeps: usize) -> Climb {
    let mut score = eval.evaluate(start.choices());
    let mut path = start;
    let mut scanner = NeighborhoodScanner::new(eval);
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        match scanner.best_improvement(&path, &score) {
            Some((mv, s)) => {
                path.set(mv.position, mv.block);
                debug_assert_eq!(scanner.evaluator().evaluate(path.choices()), s);
                score = s;
            }
            None => {
                return Climb {
                    path,
                    score,
                    sweeps,
                    local_optimum: true,
                }
            }
        }
    }
    Climb {
        path,
        score,
        sweeps,
        local_optimum: false,
    }
}

/// Convenience wrapper around [`climb`].
pub fn hill_climb(path: &Path, seq: &HpSequence, table: &BlockTable, max_sweeps: usize) -> Path {
    let mut eval = Evaluator::new(seq, table);
    climb(&mut eval, path.clone(), max_sweeps).path
}

/// Geometric cooling: `t <- alpha * t` every `steps_per_level` iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoolingSchedule {
    pub t0: f64,
    pub alpha: f64,
    pub steps_per_level: u64,
}

impl CoolingSchedule {
    /// `t0 = 2 * thh`, `alpha = 0.98`, one neighborhood's worth of steps per level.
    pub fn default_for(seq: &HpSequence) -> Self {
        Self {
            t0: 2.0 * crate::scoring::contact_upper_bound(seq) as f64,
            alpha: 0.98,
            steps_per_level: neighborhood_size(path_len(seq.len())) as u64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t0.is_nan() || self.t0 <= 0.0 {
            return Err(HpError::InvalidSchedule(format!(
                "t0 must be positive, got {}",
                self.t0
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(HpError::InvalidSchedule(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.steps_per_level == 0 {
            return Err(HpError::InvalidSchedule("steps_per_level must be at least 1".into()));
        }
        Ok(())
    }

    pub fn temperature_at(&self, iteration: u64) -> f64 {
        self.t0 * self.alpha.powi((iteration / self.steps_per_level) as i32)
    }
}

/// Sample a uniform 1-neighborhood move.
pub fn random_move<R: Rng + ?Sized>(path: &Path, table: &BlockTable, rng: &mut R) -> Move {
    let size = neighborhood_size(path.len());
    let m = rng.gen_range(0..size);
    let head_moves = N_START_BLOCKS - 1;
    if m < head_moves {
        let current = path.choices()[0];
        let mut alternatives = table.start_ids().iter().copied().filter(|&b| b != current);
        Move {
            position: 0,
            block: alternatives.nth(m).expect("five alternatives"),
        }
    } else {
        let m = m - head_moves;
        let position = 1 + m / (N_BLOCKS - 1);
        let mut block = m % (N_BLOCKS - 1);
        if block >= path.choices()[position] {
            block += 1;
        }
        Move { position, block }
    }
}

/// Simulated annealing from a uniformly random path. One iteration is one
/// proposed move.
pub fn sa_run(
    seq: &HpSequence,
    table: &BlockTable,
    schedule: &CoolingSchedule,
    budget: &Budget,
    seed: u64,
) -> Result<RunOutcome> {
    schedule.validate()?;
    let mut clock = RunClock::start(*budget)?;
    let mut rng = rng_from_seed(seed);
    let mut eval = Evaluator::new(seq, table);

    let mut current = Path::random(table, seq.len(), &mut rng);
    let mut current_score = eval.evaluate(current.choices());
    let mut tracker = Tracker::new(current.clone(), current_score, 0);
    let mut temperature = schedule.t0;
    let mut candidate = current.clone();

    while !clock.exhausted(tracker.best_energy()) {
        clock.tick();
        let mv = random_move(&current, table, &mut rng);
        candidate.set(mv.position, mv.block);
        let score = eval.evaluate(candidate.choices());
        let u: f64 = rng.gen();
        if accept(current_score.energy, score.energy, temperature, u) {
            current.set(mv.position, mv.block);
            current_score = score;
            tracker.observe(&current, &current_score, clock.iterations());
        } else {
            candidate.set(mv.position, current.choices()[mv.position]);
        }
        if clock.iterations() % schedule.steps_per_level == 0 {
            temperature *= schedule.alpha;
        }
    }
    Ok(tracker.finish(&clock))
}

/// Random-restart hill climbing: each iteration climbs a fresh random path
/// to a local optimum.
pub fn hc_run(
    seq: &HpSequence,
    table: &BlockTable,
    max_sweeps: usize,
    budget: &Budget,
    seed: u64,
) -> Result<RunOutcome> {
    let mut clock = RunClock::start(*budget)?;
    let mut rng = rng_from_seed(seed);
    let mut eval = Evaluator::new(seq, table);
    let first = Path::random(table, seq.len(), &mut rng);
    let first_score = eval.evaluate(first.choices());
    let mut tracker = Tracker::new(first.clone(), first_score, 0);
    let mut next = Some(first);
    while !clock.exhausted(tracker.best_energy()) {
        clock.tick();
        let start = next.take().unwrap_or_else(|| Path::random(table, seq.len(), &mut rng));
        let c = climb(&mut eval, start, max_sweeps);
        tracker.observe(&c.path, &c.score, clock.iterations());
    }
    Ok(tracker.finish(&clock))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::build_block_table;
    use crate::sequence::parse_sequence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn neighborhood_sizes() {
        let t = build_block_table();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p16 = Path::random(&t, 48, &mut rng);
        let nb = enumerate_1_neighborhood(&p16, &t);
        assert_eq!(nb.moves.len(), 2240);
        let p2 = Path::random(&t, 6, &mut rng);
        assert_eq!(enumerate_1_neighborhood(&p2, &t).moves.len(), 154);
        let distinct: HashSet<_> = nb.moves.iter().collect();
        assert_eq!(distinct.len(), nb.moves.len());
        assert!(nb.moves.iter().all(|m| p16.choices()[m.position] != m.block));
        assert!(nb.moves.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn random_move_covers_the_neighborhood() {
        let t = build_block_table();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Path::random(&t, 6, &mut rng);
        let all: HashSet<_> = enumerate_1_neighborhood(&p, &t).moves.into_iter().collect();
        let mut seen = HashSet::new();
        for _ in 0..20_000 {
            let m = random_move(&p, &t, &mut rng);
            assert!(all.contains(&m), "{m:?}");
            seen.insert(m);
        }
        assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn scanner_matches_full_rescoring() {
        let t = build_block_table();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4, 5, 7, 9, 13, 20] {
            let seq_text: String = (0..n).map(|_| if rng.gen_bool(0.5) { 'h' } else { 'p' }).collect();
            let seq = parse_sequence(&seq_text).unwrap();
            let mut eval = Evaluator::new(&seq, &t);
            let mut reference = Evaluator::new(&seq, &t);
            let base = Path::random(&t, n, &mut rng);
            let base_score = eval.evaluate(base.choices());
            let mut scanner = NeighborhoodScanner::new(&mut eval);
            let mut visited = 0;
            scanner.scan(&base, &base_score, |mv, s| {
                visited += 1;
                let full = reference.evaluate(base.with_block(mv.position, mv.block).choices());
                assert_eq!(s, full, "n={n} move={mv:?}");
            });
            assert_eq!(visited, neighborhood_size(base.len()));
        }
    }

    #[test]
    fn metropolis_rules() {
        assert!(metropolis_accept(-5.0, -5.0, 1.0, 0.999).unwrap());
        assert!(metropolis_accept(-5.0, -6.0, 1.0, 0.999).unwrap());
        assert!(metropolis_accept(-5.0, -4.0, 1.0, 0.36).unwrap());
        assert!(!metropolis_accept(-5.0, -4.0, 1.0, 0.37).unwrap());
        assert!(!metropolis_accept(-5.0, 1e6, 1.0, 1e-300).unwrap());
        assert!(matches!(
            metropolis_accept(0.0, 1.0, 0.0, 0.5),
            Err(HpError::NonPositiveTemperature(_))
        ));
        assert!(metropolis_accept(0.0, 1.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn hill_climb_is_monotone_and_stops_at_fixed_point() {
        let t = build_block_table();
        let seq = parse_sequence("hphpphhphpphphhpphph").unwrap();
        let mut eval = Evaluator::new(&seq, &t);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let start = Path::random(&t, seq.len(), &mut rng);
            let e0 = eval.evaluate(start.choices()).energy;
            let c = climb(&mut eval, start, 1000);
            assert!(c.score.energy <= e0);
            assert!(c.local_optimum);
            assert!(c.path.is_valid(&t, seq.len()));
            let again = climb(&mut eval, c.path.clone(), 1000);
            assert_eq!(again.path, c.path);
            assert_eq!(again.sweeps, 1);
        }
    }

    #[test]
    fn schedule_validation() {
        let seq = parse_sequence("hpphhpph").unwrap();
        let s = CoolingSchedule::default_for(&seq);
        assert!(s.validate().is_ok());
        assert_eq!(s.steps_per_level, 303);
        assert!(CoolingSchedule { alpha: 1.0, ..s }.validate().is_err());
        assert!(CoolingSchedule { t0: 0.0, ..s }.validate().is_err());
        assert!(CoolingSchedule {
            steps_per_level: 0,
            ..s
        }
        .validate()
        .is_err());
        assert_eq!(
            CoolingSchedule::default_for(&parse_sequence(&"h".repeat(48)).unwrap()).steps_per_level,
            2240
        );
    }

    #[test]
    fn sa_rejects_zero_budget() {
        let t = build_block_table();
        let seq = parse_sequence("hpphhpph").unwrap();
        let s = CoolingSchedule::default_for(&seq);
        assert_eq!(
            sa_run(&seq, &t, &s, &Budget::default(), 1).unwrap_err(),
            HpError::ZeroBudget
        );
    }

    #[test]
    fn sa_trace_is_monotone_and_deterministic() {
        let t = build_block_table();
        let seq = parse_sequence("hphpphhphpphphhpphph").unwrap();
        let s = CoolingSchedule {
            t0: 1e-6,
            alpha: 0.5,
            steps_per_level: 10,
        };
        let a = sa_run(&seq, &t, &s, &Budget::iterations(20_000), 9).unwrap();
        let b = sa_run(&seq, &t, &s, &Budget::iterations(20_000), 9).unwrap();
        assert!(a.trace.windows(2).all(|w| w[1].energy <= w[0].energy));
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_path, b.best_path);
        assert_eq!(a.iterations, 20_000);
    }
}
