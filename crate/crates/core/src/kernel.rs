//! Positions, moves and legal-move generation for both games.
//!
//! Game 1 (turn-bounded Maximum Nim): a single pile of `u` stones; on turn `k`
//! the mover removes between 1 and `f(k)` stones.
//!
//! Game 2 (two-weight Nim): `x` stones of weight 2 and `y` stones of weight 1;
//! the mover removes any mix of total weight between 1 and `floor(w/2)`, where
//! `w = 2x + y` is the current total weight.
//!
//! Both games use normal play: the player to move with no legal move loses.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bound::BoundFn;
use crate::error::{check_cap, Error, MoveViolation, Result, VALUE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    /// The previous player (who just moved) wins.
    P,
    /// The next player (about to move) wins.
    N,
}

impl Verdict {
    pub fn is_p(self) -> bool {
        self == Verdict::P
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::P => "P",
            Verdict::N => "N",
        })
    }
}

/// Game 1 state: `stones` left in the pile, and the index of the turn about to be played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawTurnPosition")]
pub struct TurnPosition {
    #[serde(rename = "u")]
    stones: u64,
    #[serde(rename = "k")]
    turn: u64,
}

#[derive(Deserialize)]
struct RawTurnPosition {
    u: u64,
    k: u64,
}

impl TryFrom<RawTurnPosition> for TurnPosition {
    type Error = Error;

    fn try_from(raw: RawTurnPosition) -> Result<Self> {
        TurnPosition::new(raw.u, raw.k)
    }
}

impl TurnPosition {
    pub fn new(stones: u64, turn: u64) -> Result<Self> {
        if turn == 0 {
            return Err(Error::ZeroTurn);
        }
        Ok(TurnPosition {
            stones: check_cap("stones", stones)?,
            turn: check_cap("turn", turn)?,
        })
    }

    pub fn stones(self) -> u64 {
        self.stones
    }

    pub fn turn(self) -> u64 {
        self.turn
    }

    pub fn is_terminal(self) -> bool {
        self.stones == 0
    }
}

impl fmt::Display for TurnPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.stones, self.turn)
    }
}

/// Game 2 state: `heavy` weight-2 stones and `light` weight-1 stones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawWeightedPosition")]
pub struct WeightedPosition {
    #[serde(rename = "x")]
    heavy: u64,
    #[serde(rename = "y")]
    light: u64,
}

#[derive(Deserialize)]
struct RawWeightedPosition {
    x: u64,
    y: u64,
}

impl TryFrom<RawWeightedPosition> for WeightedPosition {
    type Error = Error;

    fn try_from(raw: RawWeightedPosition) -> Result<Self> {
        WeightedPosition::new(raw.x, raw.y)
    }
}

impl WeightedPosition {
    /// Rejects positions whose total weight `2x + y` does not fit in 62 bits.
    pub fn new(heavy: u64, light: u64) -> Result<Self> {
        let weight = 2 * heavy as u128 + light as u128;
        if weight > VALUE_CAP as u128 {
            return Err(Error::OutOfRange {
                what: "total weight",
                value: weight,
            });
        }
        Ok(WeightedPosition { heavy, light })
    }

    pub fn heavy(self) -> u64 {
        self.heavy
    }

    pub fn light(self) -> u64 {
        self.light
    }

    /// Total weight `2x + y`.
    pub fn weight(self) -> u64 {
        2 * self.heavy + self.light
    }

    /// Largest total weight a single move may remove.
    pub fn removal_cap(self) -> u64 {
        self.weight() / 2
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(self, other: WeightedPosition) -> bool {
        self.heavy <= other.heavy && self.light <= other.light
    }
}

impl fmt::Display for WeightedPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.heavy, self.light)
    }
}

/// Total weight `2x + y`, checked against the 62-bit cap.
pub fn total_weight(heavy: u64, light: u64) -> Result<u64> {
    WeightedPosition::new(heavy, light).map(WeightedPosition::weight)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MoveG1 {
    pub take: u64,
}

impl fmt::Display for MoveG1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "take {}", self.take)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MoveG2 {
    pub take_heavy: u64,
    pub take_light: u64,
}

impl MoveG2 {
    pub fn new(take_heavy: u64, take_light: u64) -> Self {
        MoveG2 {
            take_heavy,
            take_light,
        }
    }

    fn removed_weight(self) -> u128 {
        2 * self.take_heavy as u128 + self.take_light as u128
    }
}

impl fmt::Display for MoveG2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "remove ({},{})", self.take_heavy, self.take_light)
    }
}

fn next_turn(turn: u64) -> Result<u64> {
    check_cap("turn", turn + 1)
}

/// All Game 1 moves from `pos`, in ascending order of `take`.
pub fn moves_g1(pos: TurnPosition, f: &BoundFn) -> Result<Vec<(MoveG1, TurnPosition)>> {
    if pos.is_terminal() {
        return Ok(Vec::new());
    }
    let limit = pos.stones.min(f.eval(pos.turn)?);
    let turn = next_turn(pos.turn)?;
    Ok((1..=limit)
        .map(|take| {
            (
                MoveG1 { take },
                TurnPosition {
                    stones: pos.stones - take,
                    turn,
                },
            )
        })
        .collect())
}

/// Checks a Game 1 move and returns the resulting position.
pub fn apply_g1(pos: TurnPosition, f: &BoundFn, mv: MoveG1) -> Result<TurnPosition> {
    let violation = if mv.take == 0 {
        Some(MoveViolation::NothingRemoved)
    } else if mv.take > pos.stones {
        Some(MoveViolation::MoreThanStones {
            take: mv.take,
            stones: pos.stones,
        })
    } else {
        let bound = f.eval(pos.turn)?;
        (mv.take > bound).then_some(MoveViolation::AboveTurnBound {
            take: mv.take,
            bound,
            turn: pos.turn,
        })
    };
    if let Some(v) = violation {
        return Err(Error::IllegalMove(v));
    }
    Ok(TurnPosition {
        stones: pos.stones - mv.take,
        turn: next_turn(pos.turn)?,
    })
}

/// All Game 2 moves from `pos`, ordered by ascending `take_heavy`, then ascending `take_light`.
pub fn moves_g2(pos: WeightedPosition) -> Vec<(MoveG2, WeightedPosition)> {
    let cap = pos.removal_cap();
    let mut out = Vec::new();
    for t in 0..=pos.heavy.min(cap / 2) {
        let light_cap = pos.light.min(cap - 2 * t);
        let first = if t == 0 { 1 } else { 0 };
        for u in first..=light_cap {
            out.push((
                MoveG2::new(t, u),
                WeightedPosition {
                    heavy: pos.heavy - t,
                    light: pos.light - u,
                },
            ));
        }
    }
    out
}

/// Checks a Game 2 move and returns the resulting position.
pub fn apply_g2(pos: WeightedPosition, mv: MoveG2) -> Result<WeightedPosition> {
    let removed = mv.removed_weight();
    let violation = if removed == 0 {
        Some(MoveViolation::NothingRemoved)
    } else if mv.take_heavy > pos.heavy {
        Some(MoveViolation::MoreHeavyThanPresent {
            take: mv.take_heavy,
            present: pos.heavy,
        })
    } else if mv.take_light > pos.light {
        Some(MoveViolation::MoreLightThanPresent {
            take: mv.take_light,
            present: pos.light,
        })
    } else if removed > pos.removal_cap() as u128 {
        Some(MoveViolation::AboveHalfWeight {
            removed,
            weight: pos.weight(),
        })
    } else {
        None
    };
    match violation {
        Some(v) => Err(Error::IllegalMove(v)),
        None => Ok(WeightedPosition {
            heavy: pos.heavy - mv.take_heavy,
            light: pos.light - mv.take_light,
        }),
    }
}

/// Lexicographically smallest legal Game 2 move, if any.
pub fn smallest_move_g2(pos: WeightedPosition) -> Option<MoveG2> {
    let cap = pos.removal_cap();
    if pos.light >= 1 && cap >= 1 {
        Some(MoveG2::new(0, 1))
    } else if pos.heavy >= 1 && cap >= 2 {
        Some(MoveG2::new(1, 0))
    } else {
        None
    }
}

/// The move that takes `from` to `to`, when `to` is a legal successor.
pub fn move_between_g2(from: WeightedPosition, to: WeightedPosition) -> Option<MoveG2> {
    if !to.dominated_by(from) {
        return None;
    }
    let mv = MoveG2::new(from.heavy - to.heavy, from.light - to.light);
    apply_g2(from, mv).ok().map(|_| mv)
}
