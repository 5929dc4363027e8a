//! The composite energy.
//!
//! Four pairwise scores are accumulated over residue pairs `(i, j)`:
//!
//! * `hh`: H-H pairs at distance 1 with `j >= i + 3` (a positive count),
//! * `hp`: mixed H-P pairs at distance 1 with `j >= i + 3`,
//! * `hd`: summed distance of H-H pairs of opposite index parity, `j >= i + 3`,
//! * `ov`: coincident pairs with `j >= i + 2` (distance-1 neighbours never coincide).
//!
//! They combine with the contact bound `thh` as
//! `energy = -[(hh / (1 + ov))^2 + 1 / (1 + hp) + 2 thh / (1 + hd)]`.

use serde::{Deserialize, Serialize};

use crate::blocks::BlockTable;
use crate::error::{HpError, Result};
use crate::lattice::Point3;
use crate::path::{decode_into, Conformation};
use crate::sequence::HpSequence;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub hh: u32,
    pub ov: u32,
    pub hp: u32,
    pub hd: u32,
    pub thh: u32,
    pub energy: f64,
}

impl ScoreBreakdown {
    pub fn from_counts(counts: PairCounts, thh: u32) -> Self {
        let PairCounts { hh, ov, hp, hd } = counts;
        Self {
            hh,
            ov,
            hp,
            hd,
            thh,
            energy: combine(hh, ov, hp, hd, thh),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.ov == 0
    }

    pub fn counts(&self) -> PairCounts {
        PairCounts {
            hh: self.hh,
            ov: self.ov,
            hp: self.hp,
            hd: self.hd,
        }
    }
}

/// Raw additive pair sums; integer so that deltas are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairCounts {
    pub hh: u32,
    pub ov: u32,
    pub hp: u32,
    pub hd: u32,
}

impl std::ops::AddAssign for PairCounts {
    fn add_assign(&mut self, o: PairCounts) {
        self.hh += o.hh;
        self.ov += o.ov;
        self.hp += o.hp;
        self.hd += o.hd;
    }
}

/// Combine the five components into the scalar energy.
pub fn combine(hh: u32, ov: u32, hp: u32, hd: u32, thh: u32) -> f64 {
    let contact = hh as f64 / (1.0 + ov as f64);
    -(contact * contact + 1.0 / (1.0 + hp as f64) + 2.0 * thh as f64 / (1.0 + hd as f64))
}

/// Parity bound on H-H contacts: `4 * min(#H at even index, #H at odd index) + 2`.
pub fn contact_upper_bound(seq: &HpSequence) -> u32 {
    let (mut even, mut odd) = (0u32, 0u32);
    for (i, r) in seq.residues().iter().enumerate() {
        if r.is_hydrophobic() {
            if i % 2 == 0 {
                even += 1;
            } else {
                odd += 1;
            }
        }
    }
    4 * even.min(odd) + 2
}

fn check_len(conf: &Conformation, seq: &HpSequence) -> Result<()> {
    if conf.len() != seq.len() {
        return Err(HpError::LengthMismatch {
            expected: seq.len(),
            got: conf.len(),
        });
    }
    Ok(())
}

pub fn hh_score(conf: &Conformation, seq: &HpSequence) -> Result<u32> {
    check_len(conf, seq)?;
    Ok(pair_counts(conf.coords(), &seq.hydrophobic_mask()).hh)
}

pub fn ov_score(conf: &Conformation) -> u32 {
    let c = conf.coords();
    let mut ov = 0;
    for i in 0..c.len() {
        for j in i + 2..c.len() {
            if c[i] == c[j] {
                ov += 1;
            }
        }
    }
    ov
}

pub fn hp_score(conf: &Conformation, seq: &HpSequence) -> Result<u32> {
    check_len(conf, seq)?;
    Ok(pair_counts(conf.coords(), &seq.hydrophobic_mask()).hp)
}

pub fn hd_score(conf: &Conformation, seq: &HpSequence) -> Result<u32> {
    check_len(conf, seq)?;
    Ok(pair_counts(conf.coords(), &seq.hydrophobic_mask()).hd)
}

pub fn energy(conf: &Conformation, seq: &HpSequence) -> Result<ScoreBreakdown> {
    check_len(conf, seq)?;
    let counts = pair_counts(conf.coords(), &seq.hydrophobic_mask());
    Ok(ScoreBreakdown::from_counts(counts, contact_upper_bound(seq)))
}

/// All four pair sums in one pass over `coords` (may be a prefix of the chain).
#[inline]
pub fn pair_counts(coords: &[Point3], is_h: &[bool]) -> PairCounts {
    let n = coords.len();
    let mut c = PairCounts::default();
    for i in 0..n {
        let pi = coords[i];
        let hi = is_h[i];
        if i + 2 < n && coords[i + 2] == pi {
            c.ov += 1;
        }
        for j in i + 3..n {
            let d = pi.manhattan(coords[j]);
            accumulate_pair(&mut c, d, hi, is_h[j], (j - i) & 1 == 1);
        }
    }
    c
}

/// Contribution of one pair with `j >= i + 3`.
#[inline(always)]
pub(crate) fn accumulate_pair(c: &mut PairCounts, d: u32, hi: bool, hj: bool, odd_gap: bool) {
    match d {
        0 => c.ov += 1,
        1 => {
            if hi && hj {
                c.hh += 1;
            } else if hi != hj {
                c.hp += 1;
            }
        }
        _ => {}
    }
    if hi && hj && odd_gap {
        c.hd += d;
    }
}

/// Reusable scorer bound to one sequence; decodes into an internal buffer.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    table: &'a BlockTable,
    seq: &'a HpSequence,
    is_h: Vec<bool>,
    thh: u32,
    buf: Vec<Point3>,
}

impl<'a> Evaluator<'a> {
    pub fn new(seq: &'a HpSequence, table: &'a BlockTable) -> Self {
        Self {
            table,
            seq,
            is_h: seq.hydrophobic_mask(),
            thh: contact_upper_bound(seq),
            buf: Vec::with_capacity(seq.len() + 3),
        }
    }

    pub fn table(&self) -> &'a BlockTable {
        self.table
    }

    pub fn sequence(&self) -> &'a HpSequence {
        self.seq
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn thh(&self) -> u32 {
        self.thh
    }

    pub fn is_h(&self) -> &[bool] {
        &self.is_h
    }

    /// Score of a full path.
    #[inline]
    pub fn evaluate(&mut self, choices: &[usize]) -> ScoreBreakdown {
        let n = self.seq.len();
        self.evaluate_residues(choices, n)
    }

    /// Score of the first `residues` residues decoded from `choices`, with the
    /// full-sequence `thh`.
    #[inline]
    pub fn evaluate_residues(&mut self, choices: &[usize], residues: usize) -> ScoreBreakdown {
        decode_into(choices, self.table, residues, &mut self.buf);
        let counts = pair_counts(&self.buf, &self.is_h[..self.buf.len()]);
        ScoreBreakdown::from_counts(counts, self.thh)
    }
}
