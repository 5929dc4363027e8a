//! Bounded pheromone weights on the block graph.
//!
//! Nodes are `(position, block)` pairs. In [`GraphMode::Adjacent`] only
//! nodes at consecutive positions are connected (the layered construction
//! graph); in [`GraphMode::AllPairs`] every two nodes at different positions
//! are. Weights are symmetric and stored once per unordered edge, densely
//! indexed by (position pair, lower-position block, higher-position block).

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::blocks::N_BLOCKS;
use crate::error::{HpError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphMode {
    Adjacent,
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    /// Zero-based path position.
    pub position: usize,
    pub block: usize,
}

impl NodeId {
    pub fn new(position: usize, block: usize) -> Self {
        Self { position, block }
    }
}

/// Default evaporation rate, also used for the initial upper bound `1 / rho`.
pub const DEFAULT_RHO: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct PheromoneMatrix {
    mode: GraphMode,
    positions: usize,
    n_blocks: usize,
    values: Vec<f64>,
    t_min: f64,
    t_max: f64,
}

impl PheromoneMatrix {
    /// Matrix with the initial Max-Min bounds (`t_max = 1 / rho` for the
    /// default rate), every edge at `t_max`.
    pub fn new(positions: usize, mode: GraphMode) -> Result<Self> {
        let t_max = 1.0 / DEFAULT_RHO;
        Self::with_bounds(positions, mode, t_max / (2.0 * N_BLOCKS as f64), t_max)
    }

    pub fn with_bounds(positions: usize, mode: GraphMode, t_min: f64, t_max: f64) -> Result<Self> {
        if positions < 2 {
            return Err(HpError::TooFewPositions(positions));
        }
        if !(t_min > 0.0 && t_min < t_max) {
            return Err(HpError::InvalidConfig(format!(
                "pheromone bounds must satisfy 0 < t_min < t_max, got {t_min}, {t_max}"
            )));
        }
        let pairs = match mode {
            GraphMode::Adjacent => positions - 1,
            GraphMode::AllPairs => positions * (positions - 1) / 2,
        };
        Ok(Self {
            mode,
            positions,
            n_blocks: N_BLOCKS,
            values: vec![t_max; pairs * N_BLOCKS * N_BLOCKS],
            t_min,
            t_max,
        })
    }

    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Number of stored edge weights.
    pub fn edge_slots(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        i != j && i < self.positions && j < self.positions && (self.mode == GraphMode::AllPairs || i.abs_diff(j) == 1)
    }

    #[inline]
    fn pair_index(&self, lo: usize, hi: usize) -> usize {
        match self.mode {
            GraphMode::Adjacent => lo,
            GraphMode::AllPairs => lo * (2 * self.positions - lo - 1) / 2 + (hi - lo - 1),
        }
    }

    #[inline]
    fn slot(&self, i: usize, bi: usize, j: usize, bj: usize) -> usize {
        let (lo, blo, hi, bhi) = if i < j { (i, bi, j, bj) } else { (j, bj, i, bi) };
        (self.pair_index(lo, hi) * self.n_blocks + blo) * self.n_blocks + bhi
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Result<f64> {
        if !self.is_edge(u.position, v.position) {
            return Err(HpError::NotAnEdge(u.position, v.position));
        }
        Ok(self.values[self.slot(u.position, u.block, v.position, v.block)])
    }

    pub fn set(&mut self, u: NodeId, v: NodeId, value: f64) -> Result<()> {
        if !self.is_edge(u.position, v.position) {
            return Err(HpError::NotAnEdge(u.position, v.position));
        }
        let s = self.slot(u.position, u.block, v.position, v.block);
        self.values[s] = value.clamp(self.t_min, self.t_max);
        Ok(())
    }

    /// Unchecked read for hot loops; `(i, j)` must be an edge.
    #[inline]
    pub fn value(&self, i: usize, bi: usize, j: usize, bj: usize) -> f64 {
        debug_assert!(self.is_edge(i, j));
        self.values[self.slot(i, bi, j, bj)]
    }

    /// Weights from node `(i, bi)` to every block at position `j > i`.
    #[inline]
    pub fn row(&self, i: usize, bi: usize, j: usize) -> &[f64] {
        debug_assert!(i < j && self.is_edge(i, j));
        let start = self.slot(i, bi, j, 0);
        &self.values[start..start + self.n_blocks]
    }

    /// Mean weight over every edge incident to `node`.
    pub fn mean_incident(&self, node: NodeId) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in (0..self.positions).filter(|&j| self.is_edge(node.position, j)) {
            for b in 0..self.n_blocks {
                sum += self.value(node.position, node.block, j, b);
                count += 1;
            }
        }
        sum / count as f64
    }

    /// `v <- (1 - rho) v + rho t_min` on every edge.
    pub fn evaporate(&mut self, rho: f64) -> Result<()> {
        check_rate(rho)?;
        let floor = rho * self.t_min;
        let keep = 1.0 - rho;
        let (lo, hi) = (self.t_min, self.t_max);
        for v in &mut self.values {
            *v = (keep * *v + floor).clamp(lo, hi);
        }
        Ok(())
    }

    /// Add `c_s / c_opt` to every edge of `path` (consecutive positions in
    /// adjacent mode, all position pairs otherwise), capped at `t_max`.
    /// Returns the number of edges touched.
    pub fn deposit(&mut self, path: &[usize], c_s: f64, c_opt: f64) -> Result<usize> {
        if !(c_s < 0.0 && c_opt < 0.0) {
            return Err(HpError::NonNegativeEnergy { c_s, c_opt });
        }
        if path.len() != self.positions {
            return Err(HpError::PathLength {
                expected: self.positions,
                got: path.len(),
                residues: 0,
            });
        }
        let amount = c_s / c_opt;
        let mut touched = 0;
        for i in 0..self.positions {
            for j in i + 1..self.positions {
                if !self.is_edge(i, j) {
                    continue;
                }
                let s = self.slot(i, path[i], j, path[j]);
                self.values[s] = (self.values[s] + amount).min(self.t_max);
                touched += 1;
            }
        }
        Ok(touched)
    }

    /// Max-Min bounds from the best energy so far:
    /// `t_max = (c_best / c_opt) / rho`, `t_min = t_max / (2 n_b)`; every
    /// stored weight is re-clamped.
    pub fn update_bounds(&mut self, c_best: f64, c_opt: f64, rho: f64) -> Result<()> {
        check_rate(rho)?;
        if !(c_best < 0.0 && c_opt < 0.0) {
            return Err(HpError::NonNegativeEnergy { c_s: c_best, c_opt });
        }
        self.t_max = (c_best / c_opt) / rho;
        self.t_min = self.t_max / (2.0 * self.n_blocks as f64);
        let (lo, hi) = (self.t_min, self.t_max);
        for v in &mut self.values {
            *v = v.clamp(lo, hi);
        }
        Ok(())
    }

    /// Text snapshot, one `i block_i j block_j value` line per edge with
    /// 1-based positions and 0-based block ids.
    pub fn dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for i in 0..self.positions {
            for j in i + 1..self.positions {
                if !self.is_edge(i, j) {
                    continue;
                }
                for bi in 0..self.n_blocks {
                    for (bj, v) in self.row(i, bi, j).iter().enumerate() {
                        writeln!(out, "{} {} {} {} {}", i + 1, bi, j + 1, bj, v)?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_rate(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(HpError::InvalidRate(rho))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_initial_values() {
        let adj = PheromoneMatrix::new(16, GraphMode::Adjacent).unwrap();
        assert_eq!(adj.edge_slots(), 15 * 150 * 150);
        assert!(adj.values().iter().all(|&v| v == adj.t_max()));
        let all = PheromoneMatrix::new(16, GraphMode::AllPairs).unwrap();
        assert_eq!(all.edge_slots(), 120 * 150 * 150);
        assert_eq!(all.get(NodeId::new(0, 3), NodeId::new(9, 7)).unwrap(), all.t_max());
        assert_eq!(
            PheromoneMatrix::new(1, GraphMode::Adjacent).unwrap_err(),
            HpError::TooFewPositions(1)
        );
    }

    #[test]
    fn evaporation_arithmetic() {
        let mut m = PheromoneMatrix::with_bounds(2, GraphMode::Adjacent, 0.05, 1.0).unwrap();
        m.evaporate(0.1).unwrap();
        assert!((m.values()[0] - 0.905).abs() < 1e-12);
        let mut floor = PheromoneMatrix::with_bounds(2, GraphMode::Adjacent, 0.05, 1.0).unwrap();
        let (u, v) = (NodeId::new(0, 0), NodeId::new(1, 0));
        floor.set(u, v, 0.05).unwrap();
        floor.evaporate(0.1).unwrap();
        assert_eq!(floor.get(u, v).unwrap(), 0.05);
        let mut prev = m.values()[0];
        for _ in 0..200 {
            m.evaporate(0.1).unwrap();
            let now = m.values()[0];
            assert!(now <= prev && now >= 0.05);
            prev = now;
        }
        assert!((prev - 0.05).abs() < 1e-6);
        assert_eq!(m.evaporate(1.0).unwrap_err(), HpError::InvalidRate(1.0));
        assert!(m.evaporate(0.0).is_err());
    }

    #[test]
    fn deposit_arithmetic_and_clamp() {
        let mut m = PheromoneMatrix::with_bounds(2, GraphMode::Adjacent, 0.01, 1.0).unwrap();
        let (u, v) = (NodeId::new(0, 4), NodeId::new(1, 9));
        m.set(u, v, 0.2).unwrap();
        m.deposit(&[4, 9], -3.0, -10.0).unwrap();
        assert!((m.get(u, v).unwrap() - 0.5).abs() < 1e-12);
        m.deposit(&[4, 9], -8.0, -10.0).unwrap();
        assert_eq!(m.get(u, v).unwrap(), 1.0);
        assert!(m.deposit(&[4, 9], 1.0, -10.0).is_err());
        assert!(m.deposit(&[4, 9], -1.0, 0.0).is_err());
    }

    #[test]
    fn deposit_touches_expected_edge_count() {
        let mut adj = PheromoneMatrix::new(5, GraphMode::Adjacent).unwrap();
        let mut all = PheromoneMatrix::new(5, GraphMode::AllPairs).unwrap();
        adj.update_bounds(-1.0, -10.0, 0.1).unwrap();
        all.update_bounds(-1.0, -10.0, 0.1).unwrap();
        assert_eq!(adj.deposit(&[0, 1, 2, 3, 4], -1.0, -1.0).unwrap(), 4);
        assert_eq!(all.deposit(&[0, 1, 2, 3, 4], -1.0, -1.0).unwrap(), 10);
    }

    #[test]
    fn bounds_policy() {
        let mut m = PheromoneMatrix::new(3, GraphMode::AllPairs).unwrap();
        m.update_bounds(-50.0, -50.0, 0.1).unwrap();
        assert!((m.t_max() - 10.0).abs() < 1e-12);
        assert!((m.t_min() - 10.0 / 300.0).abs() < 1e-12);
        m.update_bounds(-5.0, -50.0, 0.1).unwrap();
        assert!(m.values().iter().all(|&v| v <= m.t_max() && v >= m.t_min()));
        assert!(m.t_min() < m.t_max());
    }

    #[test]
    fn adjacency_contract() {
        let m = PheromoneMatrix::new(4, GraphMode::Adjacent).unwrap();
        assert_eq!(
            m.get(NodeId::new(0, 0), NodeId::new(2, 0)).unwrap_err(),
            HpError::NotAnEdge(0, 2)
        );
        assert!(m.get(NodeId::new(1, 0), NodeId::new(1, 3)).is_err());
        assert!(m.get(NodeId::new(2, 0), NodeId::new(1, 0)).is_ok());
    }

    #[test]
    fn reads_are_symmetric() {
        let mut m = PheromoneMatrix::new(4, GraphMode::AllPairs).unwrap();
        m.update_bounds(-1.0, -10.0, 0.1).unwrap();
        let (u, v) = (NodeId::new(3, 17), NodeId::new(1, 140));
        m.set(u, v, 0.5).unwrap();
        assert_eq!(m.get(v, u).unwrap(), 0.5);
        assert_eq!(m.value(1, 140, 3, 17), 0.5);
    }

    #[test]
    fn dump_has_one_line_per_edge() {
        let m = PheromoneMatrix::new(3, GraphMode::Adjacent).unwrap();
        let mut buf = Vec::new();
        m.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2 * 150 * 150);
        assert!(text.starts_with("1 0 2 0 10"));
    }
}
