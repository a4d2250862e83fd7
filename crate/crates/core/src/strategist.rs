//! Winning-move synthesis for both games.
//!
//! From an N-position the strategist returns a move onto a P-position
//! together with the closed-form witness for that target. From a
//! non-terminal P-position every move loses, and the smallest legal move is
//! played.

use serde::{Deserialize, Serialize};

use crate::bound::BoundFn;
use crate::closed_form::{classify_g2, locate_g1, Location, PFamily};
use crate::error::Result;
use crate::kernel::{
    apply_g1, move_between_g2, smallest_move_g2, MoveG1, MoveG2, TurnPosition, WeightedPosition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Advice<M, P, W> {
    /// Move onto `target`, which is a P-position by `witness`.
    Winning { mv: M, target: P, witness: W },
    /// The position is P: every move loses, `mv` is the fallback.
    AllLosing { mv: M, target: P },
    /// Terminal position, the player to move has lost.
    NoMove,
}

impl<M: Copy, P: Copy, W> Advice<M, P, W> {
    pub fn chosen_move(&self) -> Option<(M, P)> {
        match self {
            Advice::Winning { mv, target, .. } | Advice::AllLosing { mv, target } => {
                Some((*mv, *target))
            }
            Advice::NoMove => None,
        }
    }

    pub fn is_winning(&self) -> bool {
        matches!(self, Advice::Winning { .. })
    }
}

/// Game 1 advice; the witness is the target's block index at turn `k+1`.
pub type AdviceG1 = Advice<MoveG1, TurnPosition, u64>;
/// Game 2 advice; the witness is the target's P-family.
pub type AdviceG2 = Advice<MoveG2, WeightedPosition, PFamily>;

/// Game 1: from a gap `hi_k(n-1) < x < lo_k(n)`, move into block `n-1` of
/// turn `k+1`, taking as few stones as possible.
///
/// Block `n-1` at turn `k+1` is `[hi_k(n-1), lo_k(n) - f(k) - 1]`; both ends
/// are the sums defining turn `k`'s blocks shifted by one turn.
pub fn advise_g1(pos: TurnPosition, f: &BoundFn) -> Result<AdviceG1> {
    if pos.is_terminal() {
        return Ok(Advice::NoMove);
    }
    let x = pos.stones();
    let k = pos.turn();
    match locate_g1(f, k, x) {
        Location::InBlock { .. } => {
            let mv = MoveG1 { take: 1 };
            Ok(Advice::AllLosing {
                mv,
                target: apply_g1(pos, f, mv)?,
            })
        }
        Location::Gap {
            n,
            prev_hi,
            next_lo,
        } => {
            let fk = f.eval(k)? as u128;
            let target_lo = prev_hi;
            let target_hi = next_lo - fk - 1;
            let best = target_hi.min(x as u128 - 1);
            let reach_lo = (x as u128).saturating_sub(fk);
            assert!(
                best >= target_lo.max(reach_lo),
                "N-position {pos} has no move into block {} of turn {}",
                n - 1,
                k + 1
            );
            let mv = MoveG1 {
                take: x - best as u64,
            };
            Ok(Advice::Winning {
                mv,
                target: apply_g1(pos, f, mv)?,
                witness: n - 1,
            })
        }
    }
}

/// P-position of weight `target` dominated by `from` with the largest `x'`,
/// using the family shapes at that weight.
fn best_dominated_p(from: WeightedPosition, target: u64) -> Option<WeightedPosition> {
    let (x, y) = (from.heavy(), from.light());
    let exponent = |v: u64| (v >= 2 && v.is_power_of_two()).then(|| v.trailing_zeros() - 1);
    // fewest light stones wins the tie on x'; y' must satisfy y' <= y and
    // x' = (target - y')/2 <= x, i.e. y' >= target - 2x
    let min_light = target.saturating_sub(2 * x);
    let mut best: Option<WeightedPosition> = None;
    let mut consider = |lo: u64, hi: u64, odd: bool| {
        let mut yp = lo.max(min_light);
        if odd && yp.is_multiple_of(2) {
            yp += 1;
        }
        if yp <= hi.min(y).min(target) {
            let cand = WeightedPosition::new((target - yp) / 2, yp).ok()?;
            if best.is_none_or(|b| cand.heavy() > b.heavy()) {
                best = Some(cand);
            }
        }
        Some(())
    };
    if exponent(target + 2).is_some() {
        consider(0, 0, false);
    }
    if let Some(n) = exponent(target + 3) {
        if n >= 2 {
            consider(1, 2 * n as u64 - 3, true);
        }
    }
    if let Some(n) = exponent(target + 1) {
        consider(2 * n as u64 + 1, u64::MAX, true);
    }
    best
}

/// Game 2: scan target weights from `w-1` down to `w - floor(w/2)`, keeping
/// only those with `w'+1`, `w'+2` or `w'+3` a power of two, and move to the
/// first dominated P-position found (largest `x'` at that weight).
pub fn advise_g2(pos: WeightedPosition) -> AdviceG2 {
    let Some(fallback) = smallest_move_g2(pos) else {
        return Advice::NoMove;
    };
    let class = classify_g2(pos);
    if class.verdict.is_p() {
        let target = WeightedPosition::new(
            pos.heavy() - fallback.take_heavy,
            pos.light() - fallback.take_light,
        )
        .expect("successor within cap");
        return Advice::AllLosing {
            mv: fallback,
            target,
        };
    }
    let w = pos.weight();
    let floor = w - w / 2;
    let mut candidates: Vec<u64> = (1..=62u32)
        .flat_map(|e| {
            let p = 1u64 << e;
            [p.checked_sub(1), p.checked_sub(2), p.checked_sub(3)]
        })
        .flatten()
        .filter(|&c| c >= floor && c < w)
        .collect();
    candidates.sort_unstable_by(|a, b| b.cmp(a));
    candidates.dedup();
    for cand in candidates {
        if let Some(target) = best_dominated_p(pos, cand) {
            let mv = move_between_g2(pos, target).expect("dominated target in window is reachable");
            let witness = classify_g2(target)
                .family
                .expect("family-shaped target classifies P");
            return Advice::Winning {
                mv,
                target,
                witness,
            };
        }
    }
    unreachable!("N-position {pos} has no move onto a P-position")
}
