use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: u64, modulus: u64 },

    #[error("zero is not allowed as a set element")]
    ZeroElement,

    #[error("residue {0} appears more than once")]
    DuplicateElement(u64),

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("cannot take sums of {l} distinct elements from a collection of {size}")]
    BadCardinality { l: usize, size: usize },

    #[error("residue {target} is not a subset sum modulo {modulus}")]
    Unreachable { target: u64, modulus: u64 },

    #[error("no arithmetic progression of length {needed} found (best {found}) with split {split}")]
    ApNotFound {
        needed: u64,
        found: u64,
        split: usize,
    },

    #[error("remainder set has {remainder} elements, needs more than {d} to cover residues mod {d}")]
    SplitTooSmall { remainder: usize, d: u64 },

    #[error("search budget of {budget} evaluations exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("{n} is not divisible by {divisor}")]
    NotDivisible { n: u64, divisor: u64 },

    #[error("{0} is not composite")]
    NotComposite(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
