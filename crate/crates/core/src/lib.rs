//! Solver, verifier and strategy engine for two single-pile Nim variants:
//!
//! * **turn-bounded Maximum Nim** – on turn `k` a player removes between 1 and
//!   `f(k)` stones, for a positive non-decreasing bound `f`;
//! * **two-weight Nim** – a pile of weight-2 and weight-1 stones from which a
//!   player removes any mix weighing between 1 and half the pile's weight.
//!
//! [`closed_form`] classifies positions in (near) constant time, [`oracle`]
//! decides them by exhaustive backward induction, and [`strategist`] turns
//! the classification into winning moves.

pub mod bound;
pub mod closed_form;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod oracle;
pub mod strategist;

pub use bound::BoundFn;
pub use closed_form::{
    block_bounds_g1, classify_g1, classify_g2, enumerate_p_g1, enumerate_p_g2, BlockBounds,
    G1Class, G2Class, PFamily,
};
pub use error::{Error, MoveViolation, Result, VALUE_CAP};
pub use kernel::{
    apply_g1, apply_g2, moves_g1, moves_g2, total_weight, MoveG1, MoveG2, TurnPosition, Verdict,
    WeightedPosition,
};
pub use oracle::{solve_g1, solve_g2, sweep_g2, OracleLimits};
pub use strategist::{advise_g1, advise_g2, Advice, AdviceG1, AdviceG2};
