use thiserror::Error;

use crate::optimize::FitReport;
use crate::pauli::GroupClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: ({0}, d={1}) vs ({2}, d={3})")]
    DimensionMismatch(usize, u32, usize, u32),

    #[error("local dimension must be at least 2, got {0}")]
    InvalidDimension(u32),

    #[error("expected length {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("configuration value {value} is not valid for d={d}")]
    InvalidValue { value: i32, d: u32 },

    #[error("index {index} out of range for {n} qudits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("generator {0} is a product of earlier generators")]
    Dependent(usize),

    #[error("rank undefined over Z_d, d composite (d={0})")]
    CompositeRank(u32),

    #[error("invalid lattice: {0}")]
    Lattice(String),

    #[error("class {0} requires variational route")]
    RequiresVariational(GroupClass),

    #[error("unsupported by the analytic construction: {0}")]
    Unsupported(String),

    #[error("enumeration needs {required} amplitudes, cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("subsystem not closed: restricted generators {0} and {1} do not commute")]
    SubsystemNotClosed(usize, usize),

    #[error("subsystem has dimension 2^{free}: {spins} spins, restricted rank {rank}")]
    SubsystemDimension { spins: usize, rank: usize, free: usize },

    #[error("optimization stalled (best distance {:.6})", .0.final_distance)]
    Stalled(Box<FitReport>),

    #[error("non-finite loss; re-initialize with a smaller init_scale")]
    NonFinite,

    #[error("format error: {0}")]
    Format(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
