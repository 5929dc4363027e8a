use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HpError {
    #[error("invalid residue {ch:?} at index {index}; expected 'h' or 'p'")]
    InvalidResidue { index: usize, ch: char },

    #[error("sequence has {len} residues; at least 4 are required")]
    SequenceTooShort { len: usize },

    #[error("path has {got} blocks but {expected} are required for {residues} residues")]
    PathLength {
        expected: usize,
        got: usize,
        residues: usize,
    },

    #[error("block id {0} is out of range (table has 150 blocks)")]
    BlockOutOfRange(usize),

    #[error("block id {0} is not an allowed starting block")]
    NotAStartBlock(usize),

    #[error("conformation has {got} residues but the sequence has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("invalid cooling schedule: {0}")]
    InvalidSchedule(String),

    #[error("evaporation rate must lie in (0, 1), got {0}")]
    InvalidRate(f64),

    #[error("energies used for pheromone updates must be negative (c_s = {c_s}, c_opt = {c_opt})")]
    NonNegativeEnergy { c_s: f64, c_opt: f64 },

    #[error("pheromone matrix needs at least 2 positions, got {0}")]
    TooFewPositions(usize),

    #[error("positions {0} and {1} are not connected in this pheromone graph")]
    NotAnEdge(usize, usize),

    #[error("perturbation size {k} is outside 0..={len}")]
    PerturbationSize { k: usize, len: usize },

    #[error("run budget is empty: set a positive iteration count or time limit")]
    ZeroBudget,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("exhaustive search over {positions} positions ({paths} paths) needs an explicit override")]
    InstanceTooLarge { positions: usize, paths: u64 },

    #[error("unknown method {0:?}")]
    UnknownMethod(String),

    #[error("unknown benchmark instance {0:?}")]
    UnknownInstance(String),

    #[error("malformed structure file at line {line}: {reason}")]
    MalformedStructure { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, HpError>;
