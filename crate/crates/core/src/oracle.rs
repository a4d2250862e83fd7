//! Exhaustive win/loss solver used as ground truth for the closed forms.
//!
//! Nothing in here knows about blocks or families: verdicts come only from
//! the move rules in [`crate::kernel`] and normal play (no move = loss).

use std::collections::HashMap;
use std::hash::Hash;

use crate::bound::BoundFn;
use crate::error::{Error, Result, VALUE_CAP};
use crate::kernel::{moves_g1, moves_g2, TurnPosition, Verdict, WeightedPosition};

/// Largest inputs the oracle accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_stones: u64,
    pub max_weight: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_stones: 10_000,
            max_weight: 1 << 12,
        }
    }
}

/// Verdict memo whose entries are never overwritten.
#[derive(Debug, Clone)]
pub struct MemoTable<K> {
    map: HashMap<K, Verdict>,
}

impl<K: Copy + Eq + Hash + std::fmt::Debug> MemoTable<K> {
    pub fn new() -> Self {
        MemoTable {
            map: HashMap::new(),
        }
    }

    pub fn get(&self, key: &K) -> Option<Verdict> {
        self.map.get(key).copied()
    }

    /// Records a verdict. Re-inserting the same verdict is a no-op; a
    /// conflicting one is a solver bug and panics.
    pub fn insert(&mut self, key: K, verdict: Verdict) {
        let prev = *self.map.entry(key).or_insert(verdict);
        assert_eq!(prev, verdict, "memo entry {key:?} rewritten");
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl<K: Copy + Eq + Hash + std::fmt::Debug> Default for MemoTable<K> {
    fn default() -> Self {
        Self::new()
    }
}

struct Frame<K> {
    key: K,
    successors: Vec<K>,
    next: usize,
}

/// Depth-first backward induction with an explicit stack, so deep games
/// cannot overflow the call stack. A position is decided N as soon as one
/// P successor is seen.
fn solve_acyclic<K, F>(root: K, memo: &mut MemoTable<K>, mut successors: F) -> Result<Verdict>
where
    K: Copy + Eq + Hash + std::fmt::Debug,
    F: FnMut(K) -> Result<Vec<K>>,
{
    if let Some(v) = memo.get(&root) {
        return Ok(v);
    }
    let mut stack = vec![Frame {
        key: root,
        successors: successors(root)?,
        next: 0,
    }];
    while let Some(top) = stack.last_mut() {
        let Some(&child) = top.successors.get(top.next) else {
            memo.insert(top.key, Verdict::P);
            stack.pop();
            continue;
        };
        match memo.get(&child) {
            Some(Verdict::P) => {
                memo.insert(top.key, Verdict::N);
                stack.pop();
            }
            Some(Verdict::N) => top.next += 1,
            None => {
                let successors = successors(child)?;
                stack.push(Frame {
                    key: child,
                    successors,
                    next: 0,
                });
            }
        }
    }
    Ok(memo.get(&root).expect("root solved"))
}

/// Memoized Game 1 solver for one bound function. Keys are `(stones, turn)`.
#[derive(Debug, Clone)]
pub struct G1Oracle {
    f: BoundFn,
    limits: OracleLimits,
    memo: MemoTable<(u64, u64)>,
}

impl G1Oracle {
    pub fn new(f: BoundFn, limits: OracleLimits) -> Self {
        G1Oracle {
            f,
            limits,
            memo: MemoTable::new(),
        }
    }

    pub fn bound(&self) -> &BoundFn {
        &self.f
    }

    pub fn memo(&self) -> &MemoTable<(u64, u64)> {
        &self.memo
    }

    pub fn solve(&mut self, pos: TurnPosition) -> Result<Verdict> {
        if pos.stones() > self.limits.max_stones {
            return Err(Error::OracleLimit {
                what: "stones",
                value: pos.stones(),
                limit: self.limits.max_stones,
            });
        }
        // every reachable turn is at most turn + stones
        let last_turn = pos.turn() + pos.stones();
        if last_turn > VALUE_CAP {
            return Err(Error::OutOfRange {
                what: "turn",
                value: last_turn as u128,
            });
        }
        self.f.eval(last_turn)?;
        let f = &self.f;
        solve_acyclic((pos.stones(), pos.turn()), &mut self.memo, |(u, k)| {
            let pos = TurnPosition::new(u, k)?;
            Ok(moves_g1(pos, f)?
                .into_iter()
                .map(|(_, p)| (p.stones(), p.turn()))
                .collect())
        })
    }
}

/// Game 1 verdict with a fresh memo and default limits.
pub fn solve_g1(pos: TurnPosition, f: &BoundFn) -> Result<Verdict> {
    G1Oracle::new(f.clone(), OracleLimits::default()).solve(pos)
}

/// Memoized Game 2 solver. Keys are `(heavy, light)`.
#[derive(Debug, Clone)]
pub struct G2Oracle {
    limits: OracleLimits,
    memo: MemoTable<(u64, u64)>,
}

impl G2Oracle {
    pub fn new(limits: OracleLimits) -> Self {
        G2Oracle {
            limits,
            memo: MemoTable::new(),
        }
    }

    pub fn memo(&self) -> &MemoTable<(u64, u64)> {
        &self.memo
    }

    pub fn solve(&mut self, pos: WeightedPosition) -> Result<Verdict> {
        if pos.weight() > self.limits.max_weight {
            return Err(Error::OracleLimit {
                what: "weight",
                value: pos.weight(),
                limit: self.limits.max_weight,
            });
        }
        solve_acyclic((pos.heavy(), pos.light()), &mut self.memo, |(x, y)| {
            let pos = WeightedPosition::new(x, y)?;
            Ok(moves_g2(pos)
                .into_iter()
                .map(|(_, p)| (p.heavy(), p.light()))
                .collect())
        })
    }
}

/// Game 2 verdict with a fresh memo and default limits.
pub fn solve_g2(pos: WeightedPosition) -> Result<Verdict> {
    G2Oracle::new(OracleLimits::default()).solve(pos)
}

/// Verdicts for every Game 2 position up to a weight, computed in one pass
/// of ascending weight.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// `by_weight[w][x]` is the verdict of `(x, w - 2x)`.
    by_weight: Vec<Vec<Verdict>>,
}

impl Sweep {
    pub fn max_weight(&self) -> u64 {
        self.by_weight.len() as u64 - 1
    }

    pub fn get(&self, pos: WeightedPosition) -> Option<Verdict> {
        self.by_weight
            .get(pos.weight() as usize)
            .map(|row| row[pos.heavy() as usize])
    }

    pub fn len(&self) -> usize {
        self.by_weight.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All positions with their verdicts, ordered by (weight, x).
    pub fn iter(&self) -> impl Iterator<Item = (WeightedPosition, Verdict)> + '_ {
        self.by_weight.iter().enumerate().flat_map(|(w, row)| {
            row.iter().enumerate().map(move |(x, &v)| {
                let pos = WeightedPosition::new(x as u64, w as u64 - 2 * x as u64)
                    .expect("swept position within cap");
                (pos, v)
            })
        })
    }

    pub fn p_positions(&self) -> Vec<WeightedPosition> {
        self.iter()
            .filter(|(_, v)| v.is_p())
            .map(|(p, _)| p)
            .collect()
    }
}

/// Solves every position with `2x + y <= max_weight`.
///
/// The successors of `(x, y)` are exactly the positions `(x', y') <= (x, y)`
/// whose weight lies in `[w - floor(w/2), w - 1]`, so each position only has
/// to look for a P-position in that window that it dominates. P-positions
/// found so far are indexed by weight with their `x'` values sorted.
pub fn sweep_g2(max_weight: u64, limits: OracleLimits) -> Result<Sweep> {
    if max_weight > limits.max_weight {
        return Err(Error::OracleLimit {
            what: "weight",
            value: max_weight,
            limit: limits.max_weight,
        });
    }
    let mut by_weight: Vec<Vec<Verdict>> = Vec::with_capacity(max_weight as usize + 1);
    // weights holding at least one P-position, ascending, and their sorted x' lists
    let mut p_weights: Vec<u64> = Vec::new();
    let mut p_heavy: Vec<Vec<u64>> = Vec::new();

    for w in 0..=max_weight {
        let window_lo = w - w / 2;
        let first = p_weights.partition_point(|&pw| pw < window_lo);
        let mut row = Vec::with_capacity(w as usize / 2 + 1);
        for x in 0..=w / 2 {
            let y = w - 2 * x;
            let reaches_p = (first..p_weights.len()).any(|idx| {
                let target = p_weights[idx];
                // need x' <= x and target - 2x' <= y
                let min_x = target.saturating_sub(y).div_ceil(2);
                let xs = &p_heavy[idx];
                let at = xs.partition_point(|&xp| xp < min_x);
                at < xs.len() && xs[at] <= x
            });
            row.push(if reaches_p { Verdict::N } else { Verdict::P });
        }
        let xs: Vec<u64> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_p())
            .map(|(x, _)| x as u64)
            .collect();
        if !xs.is_empty() {
            p_weights.push(w);
            p_heavy.push(xs);
        }
        by_weight.push(row);
    }
    Ok(Sweep { by_weight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(x: u64, y: u64) -> WeightedPosition {
        WeightedPosition::new(x, y).unwrap()
    }

    fn tp(u: u64, k: u64) -> TurnPosition {
        TurnPosition::new(u, k).unwrap()
    }

    #[test]
    fn g1_examples() {
        let any = BoundFn::affine(3, 1).unwrap();
        assert_eq!(solve_g1(tp(0, 1), &any).unwrap(), Verdict::P);
        let one = BoundFn::constant(1).unwrap();
        assert_eq!(solve_g1(tp(3, 1), &one).unwrap(), Verdict::N);
        // (2,1) -> (1,2) only; from (1,2) the opponent takes the last stone
        let identity = BoundFn::affine(1, 0).unwrap();
        assert_eq!(solve_g1(tp(2, 1), &identity).unwrap(), Verdict::P);
    }

    #[test]
    fn g2_examples() {
        assert_eq!(solve_g2(wp(0, 1)).unwrap(), Verdict::P);
        assert_eq!(solve_g2(wp(0, 3)).unwrap(), Verdict::P);
        assert_eq!(solve_g2(wp(6, 1)).unwrap(), Verdict::P);
    }

    #[test]
    fn limits_are_enforced() {
        let one = BoundFn::constant(1).unwrap();
        assert!(matches!(
            solve_g1(tp(10_001, 1), &one),
            Err(Error::OracleLimit { .. })
        ));
        assert!(matches!(
            solve_g2(wp(2049, 0)),
            Err(Error::OracleLimit { .. })
        ));
        assert!(sweep_g2(4097, OracleLimits::default()).is_err());
        let tight = OracleLimits {
            max_stones: 5,
            max_weight: 5,
        };
        assert!(sweep_g2(6, tight).is_err());
        assert!(G2Oracle::new(tight).solve(wp(3, 0)).is_err());
    }

    #[test]
    fn g1_deep_game_does_not_overflow_stack() {
        let one = BoundFn::constant(1).unwrap();
        assert_eq!(solve_g1(tp(10_000, 1), &one).unwrap(), Verdict::P);
        assert_eq!(solve_g1(tp(9_999, 1), &one).unwrap(), Verdict::N);
    }

    #[test]
    fn sweep_examples() {
        let s = sweep_g2(2, OracleLimits::default()).unwrap();
        let got: Vec<_> = s.iter().collect();
        assert_eq!(
            got,
            vec![
                (wp(0, 0), Verdict::P),
                (wp(0, 1), Verdict::P),
                (wp(0, 2), Verdict::N),
                (wp(1, 0), Verdict::P),
            ]
        );
        let s = sweep_g2(0, OracleLimits::default()).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![(wp(0, 0), Verdict::P)]);
        assert_eq!(s.max_weight(), 0);
        assert_eq!(s.get(wp(0, 1)), None);
    }

    #[test]
    fn sweep_agrees_with_recursive_solver() {
        let sweep = sweep_g2(120, OracleLimits::default()).unwrap();
        let mut oracle = G2Oracle::new(OracleLimits::default());
        for (pos, v) in sweep.iter() {
            assert_eq!(oracle.solve(pos).unwrap(), v, "{pos}");
        }
        assert_eq!(sweep.len(), sweep.iter().count());
    }

    #[test]
    fn memo_is_write_once() {
        let mut m = MemoTable::new();
        m.insert((1u64, 2u64), Verdict::P);
        m.insert((1, 2), Verdict::P);
        assert_eq!(m.len(), 1);
        let r = std::panic::catch_unwind(move || {
            let mut m = m;
            m.insert((1, 2), Verdict::N)
        });
        assert!(r.is_err());
    }

    #[test]
    fn g1_oracle_reuses_memo_across_queries() {
        let mut oracle = G1Oracle::new(BoundFn::affine(1, 0).unwrap(), OracleLimits::default());
        oracle.solve(tp(30, 1)).unwrap();
        let size = oracle.memo().len();
        oracle.solve(tp(29, 2)).unwrap();
        assert!(oracle.memo().len() >= size);
        assert!(!oracle.memo().is_empty());
    }
}
