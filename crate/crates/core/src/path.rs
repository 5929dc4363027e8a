//! Path genotype and its decoding into lattice coordinates.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockTable, BLOCK_SPAN, N_BLOCKS};
use crate::error::{HpError, Result};
use crate::lattice::Point3;
use crate::sequence::{HpSequence, Residue};

/// Number of block positions needed to cover `n` residues.
pub fn path_len(n: usize) -> usize {
    n.div_ceil(BLOCK_SPAN)
}

/// One block id per position; position 0 must hold a head block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    choices: Vec<usize>,
}

impl Path {
    pub fn new(choices: Vec<usize>, table: &BlockTable, n: usize) -> Result<Self> {
        validate_choices(&choices, table, n)?;
        Ok(Self { choices })
    }

    /// Caller guarantees validity (used on hot paths that only ever swap in legal blocks).
    pub(crate) fn from_raw(choices: Vec<usize>) -> Self {
        Self { choices }
    }

    /// Uniform block per position, head drawn uniformly from the start blocks.
    pub fn random<R: Rng + ?Sized>(table: &BlockTable, n: usize, rng: &mut R) -> Self {
        let len = path_len(n);
        let mut choices = Vec::with_capacity(len);
        choices.push(*table.start_ids().choose(rng).expect("six start blocks"));
        for _ in 1..len {
            choices.push(rng.gen_range(0..N_BLOCKS));
        }
        Self { choices }
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn with_block(&self, position: usize, block: usize) -> Path {
        let mut choices = self.choices.clone();
        choices[position] = block;
        Path { choices }
    }

    pub(crate) fn set(&mut self, position: usize, block: usize) {
        self.choices[position] = block;
    }

    /// Number of positions at which the two paths differ.
    pub fn hamming(&self, other: &Path) -> usize {
        self.choices.iter().zip(&other.choices).filter(|(a, b)| a != b).count()
    }

    pub fn is_valid(&self, table: &BlockTable, n: usize) -> bool {
        validate_choices(&self.choices, table, n).is_ok()
    }
}

fn validate_choices(choices: &[usize], table: &BlockTable, n: usize) -> Result<()> {
    let expected = path_len(n);
    if choices.len() != expected {
        return Err(HpError::PathLength {
            expected,
            got: choices.len(),
            residues: n,
        });
    }
    if let Some(&bad) = choices.iter().find(|&&b| b >= table.len()) {
        return Err(HpError::BlockOutOfRange(bad));
    }
    if !table.is_start(choices[0]) {
        return Err(HpError::NotAStartBlock(choices[0]));
    }
    Ok(())
}

/// Residue coordinates, residue 0 at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conformation {
    coords: Vec<Point3>,
}

impl Conformation {
    pub fn from_coords(coords: Vec<Point3>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[Point3] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.coords.windows(2).all(|w| w[0].manhattan(w[1]) == 1)
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Conformation {
        Conformation {
            coords: self.coords.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Structure text: `# key value` header lines, then `index x y z residue` per residue.
    pub fn to_structure_text(&self, seq: &HpSequence, header: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k} {v}");
        }
        for (i, (p, r)) in self.coords.iter().zip(seq.residues()).enumerate() {
            let _ = writeln!(out, "{} {} {} {} {}", i + 1, p.x, p.y, p.z, r.letter());
        }
        out
    }
}

/// Parse structure text back into coordinates and residues. Comment lines are skipped.
pub fn parse_structure_text(text: &str) -> Result<(Conformation, HpSequence)> {
    let mut coords = Vec::new();
    let mut residues = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: &str| HpError::MalformedStructure {
            line: lineno + 1,
            reason: reason.into(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(bad("expected 5 fields"));
        }
        let index: usize = fields[0].parse().map_err(|_| bad("bad index"))?;
        if index != coords.len() + 1 {
            return Err(bad("indices must be consecutive from 1"));
        }
        let num = |s: &str| s.parse::<i32>().map_err(|_| bad("bad coordinate"));
        coords.push(Point3::new(num(fields[1])?, num(fields[2])?, num(fields[3])?));
        residues.push(match fields[4] {
            "h" | "H" => Residue::H,
            "p" | "P" => Residue::P,
            _ => return Err(bad("residue must be h or p")),
        });
    }
    Ok((Conformation { coords }, HpSequence::new(residues)?))
}

/// Decode a path into `n` residue coordinates.
pub fn decode(path: &Path, table: &BlockTable, n: usize) -> Result<Conformation> {
    validate_choices(path.choices(), table, n)?;
    let mut coords = Vec::with_capacity(n);
    decode_into(path.choices(), table, n, &mut coords);
    Ok(Conformation { coords })
}

/// Unchecked decoder writing the first `n` residues of `choices` into `out`.
/// `choices` may be a prefix of a full path.
#[inline]
pub fn decode_into(choices: &[usize], table: &BlockTable, n: usize, out: &mut Vec<Point3>) {
    out.clear();
    let mut anchor = Point3::ORIGIN;
    'outer: for &b in choices {
        for off in table.offsets(b) {
            if out.len() == n {
                break 'outer;
            }
            out.push(anchor + *off);
        }
        anchor = anchor + table.displacement(b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{build_block_table, Block};
    use crate::lattice::Direction::*;

    fn id(t: &BlockTable, b: Block) -> usize {
        t.id_of(&b).unwrap()
    }

    #[test]
    fn single_straight_block() {
        let t = build_block_table();
        let mut out = Vec::new();
        decode_into(&[0], &t, 3, &mut out);
        assert_eq!(
            out,
            vec![Point3::new(0, 0, 0), Point3::new(1, 0, 0), Point3::new(2, 0, 0)]
        );
    }

    #[test]
    fn two_straight_blocks_chain_anchors() {
        let t = build_block_table();
        let c = decode(&Path::new(vec![0, 0], &t, 6).unwrap(), &t, 6).unwrap();
        let want: Vec<_> = (0..6).map(|x| Point3::new(x, 0, 0)).collect();
        assert_eq!(c.coords(), &want[..]);
    }

    #[test]
    fn u_turn_anchor_arithmetic() {
        let t = build_block_table();
        let u = id(&t, Block::new(PosX, PosY, NegX));
        let next = id(&t, Block::new(NegX, NegX, NegX));
        let c = decode(&Path::new(vec![u, next], &t, 4).unwrap(), &t, 4).unwrap();
        assert_eq!(c.coords()[3], Point3::new(0, 1, 0));
        assert!(c.is_connected());
    }

    #[test]
    fn partial_final_block_is_truncated() {
        let t = build_block_table();
        for n in [4, 5, 7, 8] {
            let p = Path::new(vec![0; path_len(n)], &t, n).unwrap();
            assert_eq!(decode(&p, &t, n).unwrap().len(), n);
        }
    }

    #[test]
    fn rejects_bad_paths() {
        let t = build_block_table();
        assert!(matches!(Path::new(vec![0], &t, 6), Err(HpError::PathLength { .. })));
        assert!(matches!(Path::new(vec![3, 0], &t, 6), Err(HpError::NotAStartBlock(3))));
        assert!(matches!(
            Path::new(vec![0, 150], &t, 6),
            Err(HpError::BlockOutOfRange(150))
        ));
    }

    #[test]
    fn structure_text_round_trip() {
        let t = build_block_table();
        let seq: HpSequence = "hpphh".parse().unwrap();
        let c = decode(&Path::new(vec![5, 17], &t, 5).unwrap(), &t, 5).unwrap();
        let text = c.to_structure_text(&seq, &[("method", "test".into())]);
        assert!(text.lines().nth(1).unwrap().starts_with("1 0 0 0 h"));
        let (c2, s2) = parse_structure_text(&text).unwrap();
        assert_eq!(c2, c);
        assert_eq!(s2, seq);
    }
}
