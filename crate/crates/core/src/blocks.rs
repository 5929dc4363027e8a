//! The fragment-block alphabet.
//!
//! A block is a non-reversing walk of three unit steps. Placed at an anchor,
//! its first two steps position the three residues it owns and the third
//! step places the anchor of the next block. There are 6 * 5 * 5 = 150 such
//! walks; all of them are self-avoiding.
//!
//! Block ids follow the lexicographic order of the step triples with steps
//! ordered `+x, -x, +y, -y, +z, -z`, so id 0 is `(+x, +x, +x)`.

use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

use crate::lattice::{Direction, Point3, Symmetry};

/// Residues owned by one block.
pub const BLOCK_SPAN: usize = 3;
/// Size of the block alphabet.
pub const N_BLOCKS: usize = 150;
/// Number of symmetry classes, one allowed head block per class.
pub const N_START_BLOCKS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Block {
    pub steps: [Direction; 3],
}

impl Block {
    pub fn new(d1: Direction, d2: Direction, d3: Direction) -> Self {
        Self { steps: [d1, d2, d3] }
    }

    pub fn is_non_reversing(&self) -> bool {
        self.steps[1] != self.steps[0].opposite() && self.steps[2] != self.steps[1].opposite()
    }

    /// The four points `0, d1, d1+d2, d1+d2+d3`.
    pub fn points(&self) -> [Point3; 4] {
        let mut pts = [Point3::ORIGIN; 4];
        for (k, d) in self.steps.iter().enumerate() {
            pts[k + 1] = pts[k] + d.vector();
        }
        pts
    }

    /// Offset from this block's anchor to the next block's anchor.
    pub fn displacement(&self) -> Point3 {
        self.points()[3]
    }

    pub fn is_self_avoiding(&self) -> bool {
        let p = self.points();
        (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]))
    }

    pub fn transformed(&self, sym: &Symmetry) -> Block {
        Block {
            steps: self.steps.map(|d| sym.apply_direction(d)),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.steps[0], self.steps[1], self.steps[2])
    }
}

/// Immutable table of all 150 blocks plus the six head blocks.
#[derive(Debug, Clone)]
pub struct BlockTable {
    blocks: Vec<Block>,
    start_ids: [usize; N_START_BLOCKS],
    /// For each block, the index into `start_ids` of its symmetry class.
    class_of: Vec<usize>,
    /// Residue offsets `0, d1, d1+d2` relative to the anchor.
    offsets: Vec<[Point3; 3]>,
    displacements: Vec<Point3>,
    is_start: Vec<bool>,
}

/// Head blocks, one per symmetry class. The table stores their ids in
/// ascending order.
pub const START_BLOCKS: [[Direction; 3]; N_START_BLOCKS] = {
    use Direction::*;
    [
        [PosX, PosX, PosX],
        [PosX, PosX, PosY],
        [PosX, PosY, PosX],
        [PosX, PosY, PosY],
        [PosX, PosY, NegX],
        [PosX, PosY, PosZ],
    ]
};

static STANDARD: LazyLock<BlockTable> = LazyLock::new(build_block_table);

/// Enumerate the block alphabet in lexicographic order and resolve the head blocks.
pub fn build_block_table() -> BlockTable {
    let mut blocks = Vec::with_capacity(N_BLOCKS);
    for d1 in Direction::ALL {
        for d2 in Direction::ALL {
            for d3 in Direction::ALL {
                let b = Block::new(d1, d2, d3);
                if b.is_non_reversing() {
                    blocks.push(b);
                }
            }
        }
    }
    debug_assert_eq!(blocks.len(), N_BLOCKS);

    let id_of = |b: &Block| blocks.iter().position(|x| x == b).expect("block in table");
    let mut start_ids = START_BLOCKS.map(|s| id_of(&Block { steps: s }));
    start_ids.sort_unstable();

    let syms = Symmetry::all();
    let class_of = blocks
        .iter()
        .map(|b| {
            let orbit: Vec<Block> = syms.iter().map(|s| b.transformed(s)).collect();
            start_ids
                .iter()
                .position(|&sid| orbit.contains(&blocks[sid]))
                .expect("every block is equivalent to a start block")
        })
        .collect();

    let offsets = blocks
        .iter()
        .map(|b| {
            let p = b.points();
            [p[0], p[1], p[2]]
        })
        .collect();
    let displacements = blocks.iter().map(Block::displacement).collect();
    let mut is_start = vec![false; blocks.len()];
    for &s in &start_ids {
        is_start[s] = true;
    }

    BlockTable {
        blocks,
        start_ids,
        class_of,
        offsets,
        displacements,
        is_start,
    }
}

impl BlockTable {
    /// Process-wide shared table.
    pub fn standard() -> &'static BlockTable {
        &STANDARD
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &Block {
        &self.blocks[id]
    }

    pub fn start_ids(&self) -> &[usize; N_START_BLOCKS] {
        &self.start_ids
    }

    pub fn is_start(&self, id: usize) -> bool {
        self.is_start.get(id).copied().unwrap_or(false)
    }

    /// Index into [`BlockTable::start_ids`] of the head block whose symmetry
    /// class contains `id`.
    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id]
    }

    #[inline]
    pub fn offsets(&self, id: usize) -> &[Point3; 3] {
        &self.offsets[id]
    }

    #[inline]
    pub fn displacement(&self, id: usize) -> Point3 {
        self.displacements[id]
    }

    /// Candidate blocks at a path position: head blocks at position 0, all blocks elsewhere.
    pub fn candidates(&self, position: usize) -> &[usize] {
        static ALL: LazyLock<Vec<usize>> = LazyLock::new(|| (0..N_BLOCKS).collect());
        if position == 0 {
            &self.start_ids
        } else {
            &ALL
        }
    }

    pub fn id_of(&self, block: &Block) -> Option<usize> {
        self.blocks.iter().position(|b| b == block)
    }
}
