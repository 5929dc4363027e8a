//! Cubic lattice primitives: points, unit steps and the 48 point symmetries
//! (axis permutations combined with sign flips).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0, y: 0, z: 0 };

    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Self { x, y, z }
    }

    /// L1 distance, the lattice metric used by every score term.
    #[inline]
    pub fn manhattan(self, other: Point3) -> u32 {
        (self.x - other.x).unsigned_abs() + (self.y - other.y).unsigned_abs() + (self.z - other.z).unsigned_abs()
    }

    pub fn as_array(self) -> [i32; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [i32; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    #[inline]
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    #[inline]
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// One of the six unit steps. The declaration order (+x, -x, +y, -y, +z, -z)
/// fixes the lexicographic order of the block table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    PosX,
    NegX,
    PosY,
    NegY,
    PosZ,
    NegZ,
}

impl Direction {
    pub const ALL: [Direction; 6] = [
        Direction::PosX,
        Direction::NegX,
        Direction::PosY,
        Direction::NegY,
        Direction::PosZ,
        Direction::NegZ,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn vector(self) -> Point3 {
        match self {
            Direction::PosX => Point3::new(1, 0, 0),
            Direction::NegX => Point3::new(-1, 0, 0),
            Direction::PosY => Point3::new(0, 1, 0),
            Direction::NegY => Point3::new(0, -1, 0),
            Direction::PosZ => Point3::new(0, 0, 1),
            Direction::NegZ => Point3::new(0, 0, -1),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::PosX => Direction::NegX,
            Direction::NegX => Direction::PosX,
            Direction::PosY => Direction::NegY,
            Direction::NegY => Direction::PosY,
            Direction::PosZ => Direction::NegZ,
            Direction::NegZ => Direction::PosZ,
        }
    }

    /// Inverse of [`Direction::vector`]; `None` unless `p` is a unit vector.
    pub fn from_vector(p: Point3) -> Option<Direction> {
        Direction::ALL.into_iter().find(|d| d.vector() == p)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::PosX => "+x",
            Direction::NegX => "-x",
            Direction::PosY => "+y",
            Direction::NegY => "-y",
            Direction::PosZ => "+z",
            Direction::NegZ => "-z",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Element of the full octahedral group: output axis `k` takes input axis
/// `perm[k]` multiplied by `signs[k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry {
    perm: [usize; 3],
    signs: [i32; 3],
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        perm: [0, 1, 2],
        signs: [1, 1, 1],
    };

    /// All 48 symmetries of the cube (rotations and reflections).
    pub fn all() -> Vec<Symmetry> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(48);
        for perm in PERMS {
            for mask in 0..8 {
                let signs = [
                    if mask & 1 == 0 { 1 } else { -1 },
                    if mask & 2 == 0 { 1 } else { -1 },
                    if mask & 4 == 0 { 1 } else { -1 },
                ];
                out.push(Symmetry { perm, signs });
            }
        }
        out
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let a = p.as_array();
        Point3::new(
            self.signs[0] * a[self.perm[0]],
            self.signs[1] * a[self.perm[1]],
            self.signs[2] * a[self.perm[2]],
        )
    }

    pub fn apply_direction(&self, d: Direction) -> Direction {
        Direction::from_vector(self.apply(d.vector())).expect("symmetries map unit steps to unit steps")
    }
}
