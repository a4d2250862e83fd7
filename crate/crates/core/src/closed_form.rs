//! Closed-form P-position classifiers.
//!
//! Game 1: at turn `k`, the P stone counts form blocks
//! `[lo(n), hi(n)]` for `n = 0, 1, 2, ...` where
//!
//! ```text
//! lo(n) = sum_{t=1..n} (f(k+2t-2) + 1)
//! hi(n) = sum_{t=1..n} (f(k+2t-1) + 1)
//! ```
//!
//! Game 2: the P-positions are three families indexed by `n >= 0`:
//!
//! ```text
//! P1(n)   = (2^n - 1, 0)                         weight 2^(n+1) - 2
//! P2(n,i) = (2^n - i - 1, 2i - 1)  1 <= i <= n-1   weight 2^(n+1) - 3
//! P3(n,i) = (2^n - n - i, 2n+2i-1) 1 <= i <= 2^n-n weight 2^(n+1) - 1
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bound::BoundFn;
use crate::error::{Error, Result, VALUE_CAP};
use crate::kernel::{TurnPosition, Verdict, WeightedPosition};

/// The `n`-th block of P stone counts at a fixed turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockBounds {
    #[serde(rename = "n")]
    pub index: u64,
    pub lo: u64,
    pub hi: u64,
}

impl BlockBounds {
    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Block `n` at turn `k`, by direct summation.
pub fn block_bounds_g1(f: &BoundFn, k: u64, n: u64) -> Result<BlockBounds> {
    if k == 0 {
        return Err(Error::ZeroTurn);
    }
    let (mut lo, mut hi) = (0u64, 0u64);
    for t in 1..=n {
        let even = k
            .checked_add(2 * t - 2)
            .ok_or(Error::Overflow("turn index"))?;
        lo = f
            .eval(even)?
            .checked_add(1)
            .and_then(|v| v.checked_add(lo))
            .filter(|&v| v <= VALUE_CAP)
            .ok_or(Error::Overflow("block lower bound"))?;
        hi = f
            .eval(even + 1)?
            .checked_add(1)
            .and_then(|v| v.checked_add(hi))
            .filter(|&v| v <= VALUE_CAP)
            .ok_or(Error::Overflow("block upper bound"))?;
    }
    Ok(BlockBounds { index: n, lo, hi })
}

/// `f(k) + 1` widened, with anything past the cap collapsed to `VALUE_CAP + 1`.
/// Sums containing that sentinel exceed every representable stone count.
fn step(f: &BoundFn, k: u128) -> u128 {
    const BEYOND: u128 = VALUE_CAP as u128 + 1;
    if k > VALUE_CAP as u128 {
        return BEYOND;
    }
    match f.eval(k as u64) {
        Ok(v) => v as u128 + 1,
        Err(_) => BEYOND,
    }
}

/// Where a stone count sits relative to the blocks at a turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Location {
    /// `lo(n) <= x <= hi(n)`.
    InBlock { n: u64 },
    /// `hi(n-1) < x < lo(n)`, with `n >= 1`.
    Gap {
        n: u64,
        prev_hi: u128,
        next_lo: u128,
    },
}

pub(crate) fn locate_g1(f: &BoundFn, k: u64, x: u64) -> Location {
    let x = x as u128;
    let k = k as u128;
    let tail = f.constant_tail();
    let (mut n, mut lo, mut hi) = (0u64, 0u128, 0u128);
    loop {
        if x <= hi {
            return Location::InBlock { n };
        }
        // x > hi(n); advance to block n+1
        let even = k + 2 * n as u128;
        let (d_lo, d_hi) = (step(f, even), step(f, even + 1));
        if let Some((k0, c)) = tail {
            // From here on every block shifts by exactly c+1.
            if even >= k0 as u128 && x >= lo + d_lo {
                let period = c as u128 + 1;
                let jumps = (x - lo) / period;
                n += jumps as u64;
                lo += jumps * period;
                hi += jumps * period;
                continue;
            }
        }
        let (next_lo, next_hi) = (lo + d_lo, hi + d_hi);
        if x < next_lo {
            return Location::Gap {
                n: n + 1,
                prev_hi: hi,
                next_lo,
            };
        }
        n += 1;
        lo = next_lo;
        hi = next_hi;
    }
}

/// Game 1 classification with the witnessing block index on P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct G1Class {
    pub verdict: Verdict,
    pub block: Option<u64>,
}

/// P iff the stone count lies in one of the blocks of its turn.
pub fn classify_g1(pos: TurnPosition, f: &BoundFn) -> G1Class {
    match locate_g1(f, pos.turn(), pos.stones()) {
        Location::InBlock { n } => G1Class {
            verdict: Verdict::P,
            block: Some(n),
        },
        Location::Gap { .. } => G1Class {
            verdict: Verdict::N,
            block: None,
        },
    }
}

/// All blocks at turn `k` with `lo <= max_x`, the last one clipped to `max_x`.
pub fn enumerate_p_g1(f: &BoundFn, k: u64, max_x: u64) -> Result<Vec<BlockBounds>> {
    if k == 0 {
        return Err(Error::ZeroTurn);
    }
    let (mut lo, mut hi) = (0u128, 0u128);
    let mut out = Vec::new();
    for n in 0u64.. {
        if lo > max_x as u128 {
            break;
        }
        out.push(BlockBounds {
            index: n,
            lo: lo as u64,
            hi: hi.min(max_x as u128) as u64,
        });
        let even = k as u128 + 2 * n as u128;
        lo += step(f, even);
        hi += step(f, even + 1);
    }
    Ok(out)
}

/// Which Game 2 P-family a position belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PFamily {
    P1 { n: u32 },
    P2 { n: u32, i: u64 },
    P3 { n: u32, i: u64 },
}

impl PFamily {
    /// Total weight of every member of this family.
    pub fn weight(self) -> u64 {
        match self {
            PFamily::P1 { n } => (1u64 << (n + 1)) - 2,
            PFamily::P2 { n, .. } => (1u64 << (n + 1)) - 3,
            PFamily::P3 { n, .. } => (1u64 << (n + 1)) - 1,
        }
    }
}

impl fmt::Display for PFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PFamily::P1 { n } => write!(f, "P1/{n}"),
            PFamily::P2 { n, i } => write!(f, "P2/{n}/{i}"),
            PFamily::P3 { n, i } => write!(f, "P3/{n}/{i}"),
        }
    }
}

impl FromStr for PFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("malformed family tag `{s}`");
        let mut parts = s.split('/');
        let tag = parts.next().ok_or_else(bad)?;
        let n: u32 = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
        let i: Option<u64> = parts
            .next()
            .map(|v| v.parse())
            .transpose()
            .map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        match (tag, i) {
            ("P1", None) => Ok(PFamily::P1 { n }),
            ("P2", Some(i)) => Ok(PFamily::P2 { n, i }),
            ("P3", Some(i)) => Ok(PFamily::P3 { n, i }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for PFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Game 2 classification with the family tag on P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct G2Class {
    pub verdict: Verdict,
    pub family: Option<PFamily>,
}

/// `Some(n)` when `v == 2^(n+1)`.
fn exponent_of(v: u64) -> Option<u32> {
    (v >= 2 && v.is_power_of_two()).then(|| v.trailing_zeros() - 1)
}

/// O(1) test on the total weight and the light count.
pub fn classify_g2(pos: WeightedPosition) -> G2Class {
    let w = pos.weight();
    let y = pos.light();
    let family = exponent_of(w + 2)
        .filter(|_| y == 0)
        .map(|n| PFamily::P1 { n })
        .or_else(|| {
            exponent_of(w + 3)
                .filter(|&n| y >= 1 && y as i64 <= 2 * n as i64 - 3)
                .map(|n| PFamily::P2 {
                    n,
                    i: y.div_ceil(2),
                })
        })
        .or_else(|| {
            exponent_of(w + 1)
                .filter(|&n| y > 2 * n as u64)
                .map(|n| PFamily::P3 {
                    n,
                    i: y.div_ceil(2) - n as u64,
                })
        });
    G2Class {
        verdict: if family.is_some() {
            Verdict::P
        } else {
            Verdict::N
        },
        family,
    }
}

/// Members of the three families for one `n`, listed straight from their definitions.
pub fn family_members(n: u32) -> Vec<(PFamily, WeightedPosition)> {
    assert!(n <= 60, "family index {n} out of range");
    let p = 1u64 << n;
    let pos = |x, y| WeightedPosition::new(x, y).expect("family member within cap");
    let mut out = vec![(PFamily::P1 { n }, pos(p - 1, 0))];
    for i in 1..n as u64 {
        out.push((PFamily::P2 { n, i }, pos(p - i - 1, 2 * i - 1)));
    }
    let n64 = n as u64;
    for i in 1..=p - n64 {
        out.push((PFamily::P3 { n, i }, pos(p - n64 - i, 2 * n64 + 2 * i - 1)));
    }
    out
}

/// Every P-position with total weight at most `max_weight`, sorted by (weight, x).
pub fn enumerate_p_g2(max_weight: u64) -> Vec<WeightedPosition> {
    let mut out = Vec::new();
    let mut n = 0u32;
    // the lightest family-n member has weight 2^(n+1) - 3
    while n <= 60 && (1i128 << (n + 1)) - 3 <= max_weight as i128 {
        out.extend(
            family_members(n)
                .into_iter()
                .map(|(_, p)| p)
                .filter(|p| p.weight() <= max_weight),
        );
        n += 1;
    }
    out.sort_by_key(|p| (p.weight(), p.heavy()));
    out
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

    fn bb(index: u64, lo: u64, hi: u64) -> BlockBounds {
        BlockBounds { index, lo, hi }
    }

    #[test]
    fn block_bounds_examples() {
        let identity = BoundFn::affine(1, 0).unwrap();
        assert_eq!(block_bounds_g1(&identity, 1, 2).unwrap(), bb(2, 6, 8));
        assert_eq!(block_bounds_g1(&identity, 9, 0).unwrap(), bb(0, 0, 0));
        let two = BoundFn::constant(2).unwrap();
        assert_eq!(block_bounds_g1(&two, 1, 3).unwrap(), bb(3, 9, 9));
        assert_eq!(block_bounds_g1(&two, 0, 3), Err(Error::ZeroTurn));
    }

    #[test]
    fn block_bounds_overflow() {
        let huge = BoundFn::constant(VALUE_CAP / 2).unwrap();
        assert!(block_bounds_g1(&huge, 1, 1).is_ok());
        assert!(matches!(
            block_bounds_g1(&huge, 1, 3),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn classify_g1_examples() {
        let any = BoundFn::table(vec![1, 4, 9]).unwrap();
        for k in 1..10 {
            assert_eq!(classify_g1(tp(0, k), &any).verdict, Verdict::P);
        }
        let two = BoundFn::constant(2).unwrap();
        assert_eq!(classify_g1(tp(6, 1), &two).block, Some(2));
        assert_eq!(classify_g1(tp(7, 1), &two).verdict, Verdict::N);
        let identity = BoundFn::affine(1, 0).unwrap();
        assert_eq!(classify_g1(tp(4, 1), &identity).verdict, Verdict::N);
        assert_eq!(classify_g1(tp(3, 2), &identity).block, Some(1));
    }

    #[test]
    fn classify_g1_constant_tail_matches_plain_walk() {
        // the tail jump must agree with stepping block by block
        let f = BoundFn::table(vec![1, 2, 2, 3, 7]).unwrap();
        for k in 1..8 {
            let blocks = enumerate_p_g1(&f, k, 400).unwrap();
            for x in 0..=400 {
                let expect = blocks.iter().find(|b| b.contains(x)).map(|b| b.index);
                assert_eq!(classify_g1(tp(x, k), &f).block, expect, "x={x} k={k}");
            }
        }
    }

    #[test]
    fn classify_g1_large_inputs_terminate() {
        let one = BoundFn::constant(1).unwrap();
        assert_eq!(classify_g1(tp(VALUE_CAP - 1, 1), &one).verdict, Verdict::P);
        assert_eq!(classify_g1(tp(VALUE_CAP, 1), &one).verdict, Verdict::N);
        let steep = BoundFn::affine(1 << 40, 0).unwrap();
        let blocks = enumerate_p_g1(&steep, 3, VALUE_CAP).unwrap();
        for x in [VALUE_CAP, VALUE_CAP - (1 << 45), 1 << 50] {
            let expect = blocks.iter().find(|b| b.contains(x)).map(|b| b.index);
            assert_eq!(classify_g1(tp(x, 3), &steep).block, expect, "x={x}");
        }
    }

    #[test]
    fn enumerate_g1_examples() {
        let identity = BoundFn::affine(1, 0).unwrap();
        assert_eq!(
            enumerate_p_g1(&identity, 1, 15).unwrap(),
            vec![bb(0, 0, 0), bb(1, 2, 3), bb(2, 6, 8), bb(3, 12, 15)]
        );
        let one = BoundFn::constant(1).unwrap();
        assert_eq!(
            enumerate_p_g1(&one, 1, 6).unwrap(),
            vec![bb(0, 0, 0), bb(1, 2, 2), bb(2, 4, 4), bb(3, 6, 6)]
        );
        assert_eq!(enumerate_p_g1(&identity, 3, 0).unwrap(), vec![bb(0, 0, 0)]);
        // clipping
        assert_eq!(
            enumerate_p_g1(&identity, 1, 7).unwrap().last(),
            Some(&bb(2, 6, 7))
        );
    }

    #[test]
    fn classify_g2_examples() {
        assert_eq!(classify_g2(wp(7, 0)).family, Some(PFamily::P1 { n: 3 }));
        assert_eq!(
            classify_g2(wp(5, 3)).family,
            Some(PFamily::P2 { n: 3, i: 2 })
        );
        assert_eq!(
            classify_g2(wp(4, 7)).family,
            Some(PFamily::P3 { n: 3, i: 1 })
        );
        assert_eq!(classify_g2(wp(0, 0)).family, Some(PFamily::P1 { n: 0 }));
        assert_eq!(
            classify_g2(wp(0, 1)).family,
            Some(PFamily::P3 { n: 0, i: 1 })
        );
        assert_eq!(classify_g2(wp(1, 0)).family, Some(PFamily::P1 { n: 1 }));
        assert_eq!(classify_g2(wp(1, 1)).verdict, Verdict::N);
        assert_eq!(classify_g2(wp(2, 2)).verdict, Verdict::N);
        assert_eq!(
            classify_g2(wp(2, 1)).family,
            Some(PFamily::P2 { n: 2, i: 1 })
        );
    }

    #[test]
    fn enumerate_g2_examples() {
        assert_eq!(enumerate_p_g2(0), vec![wp(0, 0)]);
        assert_eq!(
            enumerate_p_g2(3),
            vec![wp(0, 0), wp(0, 1), wp(1, 0), wp(0, 3)]
        );
        assert_eq!(
            enumerate_p_g2(7),
            vec![
                wp(0, 0),
                wp(0, 1),
                wp(1, 0),
                wp(0, 3),
                wp(2, 1),
                wp(3, 0),
                wp(0, 7),
                wp(1, 5),
            ]
        );
    }

    #[test]
    fn family_tag_text_form() {
        for tag in [
            PFamily::P1 { n: 0 },
            PFamily::P2 { n: 5, i: 3 },
            PFamily::P3 { n: 2, i: 2 },
        ] {
            assert_eq!(tag.to_string().parse::<PFamily>().unwrap(), tag);
        }
        for bad in ["P1", "P2/3", "P1/3/1", "P4/1/1", "P3/x/1", "P3/1/1/1"] {
            assert!(bad.parse::<PFamily>().is_err(), "{bad}");
        }
        assert_eq!(
            serde_json::to_string(&PFamily::P2 { n: 3, i: 1 }).unwrap(),
            "\"P2/3/1\""
        );
    }

    #[test]
    fn family_weights_match_members() {
        for n in 0..8 {
            for (tag, p) in family_members(n) {
                assert_eq!(tag.weight(), p.weight(), "{tag} {p}");
            }
        }
    }

    #[test]
    fn classify_g2_near_cap() {
        // 2^62 - 2 = weight of P1(61), which is above the cap; P1(60) is the largest
        let p = wp((1 << 60) - 1, 0);
        assert_eq!(classify_g2(p).family, Some(PFamily::P1 { n: 60 }));
        assert_eq!(
            classify_g2(wp(0, VALUE_CAP)).family,
            Some(PFamily::P3 {
                n: 61,
                i: (1 << 61) - 61
            })
        );
    }
}
