use std::collections::{HashMap, HashSet};

use dynnim::closed_form::family_members;
use dynnim::harness::selfplay::{selfplay, Opponent, SelfPlayConfig, Start};
use dynnim::oracle::{G1Oracle, G2Oracle, OracleLimits};
use dynnim::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn wp(x: u64, y: u64) -> WeightedPosition {
    WeightedPosition::new(x, y).unwrap()
}

fn tp(u: u64, k: u64) -> TurnPosition {
    TurnPosition::new(u, k).unwrap()
}

fn positions_up_to(max_weight: u64) -> impl Iterator<Item = WeightedPosition> {
    (0..=max_weight).flat_map(|w| (0..=w / 2).map(move |x| wp(x, w - 2 * x)))
}

fn bound_strategy() -> impl Strategy<Value = BoundFn> {
    prop_oneof![
        (1u64..12).prop_map(|c| BoundFn::constant(c).unwrap()),
        (0u64..4, 1i64..5).prop_map(|(a, b)| BoundFn::affine(a, b).unwrap()),
        prop::collection::vec(1u64..6, 1..8).prop_map(|mut v| {
            v.sort_unstable();
            BoundFn::table(v).unwrap()
        }),
    ]
}

fn test_bounds() -> Vec<BoundFn> {
    [
        "const:1",
        "const:2",
        "const:5",
        "affine:1,0",
        "affine:2,1",
        "affine:3,-2",
        "affine:0,6",
        "table:1,2,2,3,7",
        "table:4",
        "table:1,1,1,9,9,20",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

proptest! {
    #[test]
    fn g1_successors_advance_turn_and_shrink(f in bound_strategy(), u in 0u64..300, k in 1u64..60) {
        let pos = tp(u, k);
        let moves = moves_g1(pos, &f).unwrap();
        prop_assert_eq!(moves.is_empty(), u == 0);
        prop_assert_eq!(moves.len() as u64, u.min(f.eval(k).unwrap()));
        for (mv, next) in moves {
            prop_assert_eq!(next.turn(), k + 1);
            prop_assert!(next.stones() < u);
            prop_assert_eq!(next.stones() + mv.take, u);
        }
    }

    #[test]
    fn g2_successors_shrink_weight_within_half(x in 0u64..=100, y in 0u64..=200) {
        prop_assume!(2 * x + y <= 200);
        let pos = wp(x, y);
        let w = pos.weight();
        for (mv, next) in moves_g2(pos) {
            prop_assert!(next.dominated_by(pos));
            let removed = w - next.weight();
            prop_assert!(removed >= 1 && removed <= w / 2);
            prop_assert_eq!(apply_g2(pos, mv).unwrap(), next);
        }
    }

    #[test]
    fn g2_advice_sound_on_large_positions(x in 0u64..(1 << 58), y in 0u64..(1 << 58)) {
        let pos = wp(x, y);
        let class = classify_g2(pos);
        match advise_g2(pos) {
            Advice::Winning { mv, target, witness } => {
                prop_assert_eq!(class.verdict, Verdict::N);
                prop_assert_eq!(apply_g2(pos, mv).unwrap(), target);
                prop_assert_eq!(classify_g2(target).family, Some(witness));
            }
            Advice::AllLosing { mv, target } => {
                prop_assert_eq!(class.verdict, Verdict::P);
                prop_assert_eq!(apply_g2(pos, mv).unwrap(), target);
                prop_assert_eq!(classify_g2(target).verdict, Verdict::N);
            }
            Advice::NoMove => prop_assert!(moves_g2(pos).is_empty()),
        }
    }

    #[test]
    fn g1_advice_sound_on_large_positions(f in bound_strategy(), u in 0u64..(1 << 40), k in 1u64..1000) {
        let pos = tp(u, k);
        let class = classify_g1(pos, &f);
        match advise_g1(pos, &f).unwrap() {
            Advice::Winning { mv, target, witness } => {
                prop_assert_eq!(class.verdict, Verdict::N);
                prop_assert_eq!(apply_g1(pos, &f, mv).unwrap(), target);
                prop_assert_eq!(classify_g1(target, &f).block, Some(witness));
            }
            Advice::AllLosing { mv, target } => {
                prop_assert_eq!(class.verdict, Verdict::P);
                prop_assert_eq!(mv.take, 1);
                prop_assert_eq!(classify_g1(target, &f).verdict, Verdict::N);
            }
            Advice::NoMove => prop_assert_eq!(u, 0),
        }
    }

    #[test]
    fn g1_classification_matches_block_scan(f in bound_strategy(), x in 0u64..2000, k in 1u64..30) {
        let blocks = enumerate_p_g1(&f, k, x).unwrap();
        let expect = blocks.iter().find(|b| b.contains(x)).map(|b| b.index);
        prop_assert_eq!(classify_g1(tp(x, k), &f).block, expect);
    }
}

#[test]
fn g2_move_count_matches_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let w = rng.random_range(0..=200u64);
        let x = rng.random_range(0..=w / 2);
        let pos = wp(x, w - 2 * x);
        let mut count = 0;
        for t in 0..=pos.heavy() {
            for u in 0..=pos.light() {
                let r = 2 * t + u;
                if r >= 1 && r <= w / 2 {
                    count += 1;
                }
            }
        }
        assert_eq!(moves_g2(pos).len(), count, "{pos}");
    }
}

#[test]
fn g2_terminal_iff_stuck_or_empty() {
    let expected: HashSet<_> = [wp(0, 0), wp(1, 0), wp(0, 1)].into_iter().collect();
    for pos in positions_up_to(200) {
        assert_eq!(moves_g2(pos).is_empty(), expected.contains(&pos), "{pos}");
    }
}

#[test]
fn blocks_are_separated() {
    for f in test_bounds() {
        for k in 1..=40 {
            for n in 0..60 {
                let here = block_bounds_g1(&f, k, n).unwrap();
                let next = block_bounds_g1(&f, k, n + 1).unwrap();
                assert!(here.lo <= here.hi);
                assert!(here.hi < next.lo, "f={f} k={k} n={n}");
            }
        }
    }
}

#[test]
fn shifted_blocks_reindex() {
    for f in test_bounds() {
        let g = |k: u64| f.eval(k).unwrap() + 1;
        for k in 1..=30 {
            for n in 1..40 {
                let direct = block_bounds_g1(&f, k + 1, n - 1).unwrap();
                let lo: u64 = (2..=n).map(|t| g(k + 2 * t - 3)).sum();
                let hi: u64 = (2..=n).map(|t| g(k + 2 * t - 2)).sum();
                assert_eq!((direct.lo, direct.hi), (lo, hi), "f={f} k={k} n={n}");
                // same block read off turn k's sums
                let prev = block_bounds_g1(&f, k, n - 1).unwrap();
                let here = block_bounds_g1(&f, k, n).unwrap();
                assert_eq!(direct.lo, prev.hi);
                assert_eq!(direct.hi, here.lo - g(k));
            }
        }
    }
}

#[test]
fn classify_g2_matches_literal_families() {
    const MAX: u64 = 1 << 12;
    let mut members: HashMap<WeightedPosition, PFamily> = HashMap::new();
    let mut n = 0;
    while (1u64 << (n + 1)) <= MAX + 3 {
        for (tag, pos) in family_members(n) {
            if pos.weight() <= MAX {
                assert!(members.insert(pos, tag).is_none(), "{pos} in two families");
            }
        }
        n += 1;
    }
    for pos in positions_up_to(MAX) {
        assert_eq!(classify_g2(pos).family, members.get(&pos).copied(), "{pos}");
    }
    assert_eq!(enumerate_p_g2(MAX).len(), members.len());
}

#[test]
fn p_weights_sit_below_powers_of_two() {
    let sweep = sweep_g2(512, OracleLimits::default()).unwrap();
    for pos in sweep.p_positions() {
        let w = pos.weight();
        if w >= 1 {
            assert!(
                (1..=3).any(|d| (w + d).is_power_of_two()),
                "P-position {pos} of weight {w}"
            );
        }
    }
}

#[test]
fn sweep_count_matches_enumeration() {
    let sweep = sweep_g2(15, OracleLimits::default()).unwrap();
    assert_eq!(sweep.p_positions(), enumerate_p_g2(15));
}

#[test]
fn oracle_is_deterministic_and_self_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut g2 = G2Oracle::new(OracleLimits::default());
    let mut fresh = G2Oracle::new(OracleLimits::default());
    for _ in 0..500 {
        let w = rng.random_range(0..=150u64);
        let x = rng.random_range(0..=w / 2);
        let pos = wp(x, w - 2 * x);
        let v = g2.solve(pos).unwrap();
        assert_eq!(fresh.solve(pos).unwrap(), v);
        let any_p = moves_g2(pos)
            .into_iter()
            .any(|(_, next)| g2.solve(next).unwrap() == Verdict::P);
        assert_eq!(v == Verdict::N, any_p, "{pos}");
    }

    for f in test_bounds() {
        let mut g1 = G1Oracle::new(f.clone(), OracleLimits::default());
        for _ in 0..50 {
            let pos = tp(rng.random_range(0..=150), rng.random_range(1..=30));
            let v = g1.solve(pos).unwrap();
            assert_eq!(solve_g1(pos, &f).unwrap(), v);
            let any_p = moves_g1(pos, &f)
                .unwrap()
                .into_iter()
                .any(|(_, next)| g1.solve(next).unwrap() == Verdict::P);
            assert_eq!(v == Verdict::N, any_p, "f={f} {pos}");
        }
    }
}

#[test]
fn dominated_targets_in_window_are_reachable() {
    for from in positions_up_to(200) {
        let w = from.weight();
        for x in 0..=from.heavy() {
            for y in 0..=from.light() {
                let to = wp(x, y);
                let removed = w - to.weight();
                let in_window = removed >= 1 && removed <= w / 2;
                let mv = MoveG2::new(from.heavy() - x, from.light() - y);
                assert_eq!(apply_g2(from, mv).is_ok(), in_window, "{from} -> {to}");
            }
        }
    }
}

#[test]
fn engine_self_play_first_mover_wins_from_n() {
    let cfg = SelfPlayConfig {
        opponent: Opponent::Engine,
        engine_first: true,
        trials: 1,
        seed: 0,
    };
    let g2_starts: Vec<Start> = positions_up_to(150)
        .filter(|p| classify_g2(*p).verdict == Verdict::N)
        .map(|start| Start::G2 { start })
        .collect();
    let r = selfplay(&g2_starts, &cfg).unwrap();
    assert_eq!(r.engine_wins, r.trials);

    let mut g1_starts = Vec::new();
    for f in test_bounds() {
        for u in 0..=80 {
            for k in 1..=10 {
                let start = tp(u, k);
                if classify_g1(start, &f).verdict == Verdict::N {
                    g1_starts.push(Start::G1 {
                        f: f.clone(),
                        start,
                    });
                }
            }
        }
    }
    let r = selfplay(&g1_starts, &cfg).unwrap();
    assert_eq!(r.engine_wins, r.trials);
}

#[test]
fn bound_text_form_round_trips() {
    proptest!(|(f in bound_strategy())| {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<BoundFn>().unwrap(), f);
    });
}
