use std::fmt;

/// Largest value a stone count, turn index, weight or bound value may take.
pub const VALUE_CAP: u64 = (1 << 62) - 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("turn index must be at least 1")]
    ZeroTurn,
    #[error("{what} = {value} exceeds the 62-bit cap")]
    OutOfRange { what: &'static str, value: u128 },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid bound function: {0}")]
    InvalidBound(String),
    #[error("oracle limit exceeded: {what} {value} > {limit}")]
    OracleLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("illegal move: {0}")]
    IllegalMove(MoveViolation),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which rule a rejected move broke, with the offending quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveViolation {
    NothingRemoved,
    MoreThanStones { take: u64, stones: u64 },
    AboveTurnBound { take: u64, bound: u64, turn: u64 },
    MoreHeavyThanPresent { take: u64, present: u64 },
    MoreLightThanPresent { take: u64, present: u64 },
    AboveHalfWeight { removed: u128, weight: u64 },
}

impl MoveViolation {
    /// Short machine-readable name of the violated constraint.
    pub fn constraint(&self) -> &'static str {
        match self {
            MoveViolation::NothingRemoved => "removal >= 1",
            MoveViolation::MoreThanStones { .. } => "t <= u",
            MoveViolation::AboveTurnBound { .. } => "t <= f(k)",
            MoveViolation::MoreHeavyThanPresent { .. } => "t <= x",
            MoveViolation::MoreLightThanPresent { .. } => "u <= y",
            MoveViolation::AboveHalfWeight { .. } => "2t+u <= floor(w/2)",
        }
    }
}

impl fmt::Display for MoveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveViolation::NothingRemoved => write!(f, "a move must remove at least one unit"),
            MoveViolation::MoreThanStones { take, stones } => {
                write!(f, "cannot take {take} stones from a pile of {stones}")
            }
            MoveViolation::AboveTurnBound { take, bound, turn } => {
                write!(f, "take {take} exceeds f({turn}) = {bound}")
            }
            MoveViolation::MoreHeavyThanPresent { take, present } => {
                write!(
                    f,
                    "cannot remove {take} weight-2 stones, only {present} present"
                )
            }
            MoveViolation::MoreLightThanPresent { take, present } => {
                write!(
                    f,
                    "cannot remove {take} weight-1 stones, only {present} present"
                )
            }
            MoveViolation::AboveHalfWeight { removed, weight } => {
                write!(f, "2t+u = {removed} > floor({weight}/2) = {}", weight / 2)
            }
        }
    }
}

pub(crate) fn check_cap(what: &'static str, value: u64) -> Result<u64> {
    if value > VALUE_CAP {
        Err(Error::OutOfRange {
            what,
            value: value as u128,
        })
    } else {
        Ok(value)
    }
}
