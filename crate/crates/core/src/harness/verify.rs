//! Closed form vs. oracle, position by position.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{Game, Position};
use crate::bound::BoundFn;
use crate::closed_form::{classify_g1, classify_g2};
use crate::error::{Error, Result};
use crate::kernel::{TurnPosition, Verdict};
use crate::oracle::{sweep_g2, G1Oracle, OracleLimits};

/// The bound families exercised by a default Game 1 campaign.
pub const CANONICAL_BOUNDS: [&str; 7] = [
    "const:1",
    "const:2",
    "const:3",
    "const:4",
    "affine:1,0",
    "affine:2,1",
    "table:1,2,2,3,7",
];

pub fn canonical_bounds() -> Vec<BoundFn> {
    CANONICAL_BOUNDS
        .iter()
        .map(|s| s.parse().expect("canonical bound parses"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub position: Position,
    pub formula: Verdict,
    pub oracle: Verdict,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: closed form says {}, oracle says {}",
            self.position, self.formula, self.oracle
        )
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub game: Game,
    pub params: String,
    pub checked: u64,
    pub p_positions: u64,
    /// Sorted by position; the first entry is the smallest counterexample.
    pub mismatches: Vec<Mismatch>,
    /// Kept out of serialized output so reports stay byte-reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}]: {} positions, {} P, {} mismatches",
            self.status(),
            self.game,
            self.params,
            self.checked,
            self.p_positions,
            self.mismatches.len()
        )?;
        if let Some(first) = self.mismatches.first() {
            write!(f, "; smallest counterexample {first}")?;
        }
        Ok(())
    }
}

/// Compares `classify_g1` with the oracle on `0 <= x <= max_x`, `1 <= k <= max_k`.
pub fn verify_g1(
    f: &BoundFn,
    max_x: u64,
    max_k: u64,
    limits: OracleLimits,
) -> Result<VerificationReport> {
    if max_x > limits.max_stones {
        return Err(Error::OracleLimit {
            what: "stones",
            value: max_x,
            limit: limits.max_stones,
        });
    }
    let started = Instant::now();
    let mut oracle = G1Oracle::new(f.clone(), limits);
    let mut checked = 0;
    let mut p_positions = 0;
    let mut mismatches = Vec::new();
    for x in 0..=max_x {
        for k in 1..=max_k {
            let pos = TurnPosition::new(x, k)?;
            let truth = oracle.solve(pos)?;
            let formula = classify_g1(pos, f).verdict;
            checked += 1;
            if truth.is_p() {
                p_positions += 1;
            }
            if truth != formula {
                mismatches.push(Mismatch {
                    position: Position::G1(pos),
                    formula,
                    oracle: truth,
                });
            }
        }
    }
    mismatches.sort_by_key(|m| m.position);
    Ok(VerificationReport {
        game: Game::G1,
        params: format!("f={f} max_x={max_x} max_k={max_k}"),
        checked,
        p_positions,
        mismatches,
        wall_time: started.elapsed(),
    })
}

/// Compares `classify_g2` with the weight-ordered sweep on every `2x + y <= max_weight`.
pub fn verify_g2(max_weight: u64, limits: OracleLimits) -> Result<VerificationReport> {
    let started = Instant::now();
    let sweep = sweep_g2(max_weight, limits)?;
    let mut checked = 0;
    let mut p_positions = 0;
    let mut mismatches = Vec::new();
    for (pos, truth) in sweep.iter() {
        let formula = classify_g2(pos).verdict;
        checked += 1;
        if truth.is_p() {
            p_positions += 1;
        }
        if truth != formula {
            mismatches.push(Mismatch {
                position: Position::G2(pos),
                formula,
                oracle: truth,
            });
        }
    }
    mismatches.sort_by_key(|m| m.position);
    Ok(VerificationReport {
        game: Game::G2,
        params: format!("max_weight={max_weight}"),
        checked,
        p_positions,
        mismatches,
        wall_time: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_const3_counts() {
        let f = BoundFn::constant(3).unwrap();
        let r = verify_g1(&f, 100, 10, OracleLimits::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.checked, 1010);
        // multiples of 4 in 0..=100, at each of 10 turns
        assert_eq!(r.p_positions, 26 * 10);
    }

    #[test]
    fn g2_small_counts() {
        let r = verify_g2(0, OracleLimits::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 1);
        let r = verify_g2(15, OracleLimits::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.p_positions, 16);
    }

    #[test]
    fn report_text_and_json() {
        let r = verify_g2(3, OracleLimits::default()).unwrap();
        assert_eq!(
            r.to_string(),
            "PASS g2 [max_weight=3]: 6 positions, 4 P, 0 mismatches"
        );
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"game":"g2","params":"max_weight=3","checked":6,"pPositions":4,"mismatches":[]}"#
        );
    }

    #[test]
    fn oracle_limit_propagates() {
        let f = BoundFn::constant(1).unwrap();
        let tight = OracleLimits {
            max_stones: 10,
            max_weight: 10,
        };
        assert!(matches!(
            verify_g1(&f, 11, 2, tight),
            Err(Error::OracleLimit {
                what: "stones",
                value: 11,
                limit: 10
            })
        ));
        assert!(verify_g2(11, tight).is_err());
    }
}
