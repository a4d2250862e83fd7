//! Engine self-play against a seeded random opponent or against itself.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, one stream per
//! run, consumed in trial order; the same configuration and seed always
//! replays the same games.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Game, PlayedMove, Position};
use crate::bound::BoundFn;
use crate::closed_form::{classify_g1, classify_g2};
use crate::error::Result;
use crate::kernel::{moves_g1, moves_g2, TurnPosition, Verdict, WeightedPosition};
use crate::strategist::{advise_g1, advise_g2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opponent {
    /// Uniformly random legal moves.
    Random,
    /// The strategist itself.
    Engine,
}

impl std::str::FromStr for Opponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Opponent::Random),
            "engine" => Ok(Opponent::Engine),
            other => Err(format!(
                "unknown opponent `{other}` (expected random or engine)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Start {
    G1 { f: BoundFn, start: TurnPosition },
    G2 { start: WeightedPosition },
}

impl Start {
    pub fn game(&self) -> Game {
        match self {
            Start::G1 { .. } => Game::G1,
            Start::G2 { .. } => Game::G2,
        }
    }

    pub fn position(&self) -> Position {
        match self {
            Start::G1 { start, .. } => Position::G1(*start),
            Start::G2 { start } => Position::G2(*start),
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self {
            Start::G1 { f, start } => classify_g1(*start, f).verdict,
            Start::G2 { start } => classify_g2(*start).verdict,
        }
    }

    fn legal_moves(&self, at: Position) -> Result<Vec<(PlayedMove, Position)>> {
        Ok(match (self, at) {
            (Start::G1 { f, .. }, Position::G1(p)) => moves_g1(p, f)?
                .into_iter()
                .map(|(m, p)| (PlayedMove::G1(m), Position::G1(p)))
                .collect(),
            (Start::G2 { .. }, Position::G2(p)) => moves_g2(p)
                .into_iter()
                .map(|(m, p)| (PlayedMove::G2(m), Position::G2(p)))
                .collect(),
            _ => unreachable!("position of the wrong game"),
        })
    }

    fn engine_move(&self, at: Position) -> Result<Option<(PlayedMove, Position)>> {
        Ok(match (self, at) {
            (Start::G1 { f, .. }, Position::G1(p)) => advise_g1(p, f)?
                .chosen_move()
                .map(|(m, p)| (PlayedMove::G1(m), Position::G1(p))),
            (Start::G2 { .. }, Position::G2(p)) => advise_g2(p)
                .chosen_move()
                .map(|(m, p)| (PlayedMove::G2(m), Position::G2(p))),
            _ => unreachable!("position of the wrong game"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Engine,
    Opponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Ply {
    pub actor: Actor,
    #[serde(rename = "move")]
    pub mv: PlayedMove,
    pub position: Position,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Transcript {
    pub start: Start,
    pub engine_first: bool,
    pub plies: Vec<Ply>,
    pub winner: Actor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelfPlayReport {
    pub seed: u64,
    pub opponent: Opponent,
    pub engine_first: bool,
    pub trials: u64,
    pub engine_wins: u64,
    /// Games whose start is a win for the engine's side with correct play.
    pub winning_starts: u64,
    /// Full transcripts of every game the engine lost.
    pub losses: Vec<Transcript>,
}

impl SelfPlayReport {
    /// Engine losses from theoretically winning starts.
    pub fn unexpected_losses(&self) -> usize {
        self.losses
            .iter()
            .filter(|t| engine_should_win(t.start.verdict(), t.engine_first))
            .count()
    }

    pub fn passed(&self) -> bool {
        self.unexpected_losses() == 0
    }
}

fn engine_should_win(start: Verdict, engine_first: bool) -> bool {
    (start == Verdict::N) == engine_first
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfPlayConfig {
    pub opponent: Opponent,
    pub engine_first: bool,
    /// Games played from each start.
    pub trials: u64,
    pub seed: u64,
}

/// Plays one game to completion. The player to move with no legal move loses.
fn play_one(
    start: &Start,
    engine_first: bool,
    opponent: Opponent,
    rng: &mut ChaCha8Rng,
) -> Result<Transcript> {
    let mut at = start.position();
    let mut mover = if engine_first {
        Actor::Engine
    } else {
        Actor::Opponent
    };
    let mut plies = Vec::new();
    loop {
        let choice = match (mover, opponent) {
            (Actor::Engine, _) | (Actor::Opponent, Opponent::Engine) => start.engine_move(at)?,
            (Actor::Opponent, Opponent::Random) => start.legal_moves(at)?.choose(rng).copied(),
        };
        let Some((mv, next)) = choice else {
            let winner = match mover {
                Actor::Engine => Actor::Opponent,
                Actor::Opponent => Actor::Engine,
            };
            return Ok(Transcript {
                start: start.clone(),
                engine_first,
                plies,
                winner,
            });
        };
        plies.push(Ply {
            actor: mover,
            mv,
            position: next,
        });
        at = next;
        mover = match mover {
            Actor::Engine => Actor::Opponent,
            Actor::Opponent => Actor::Engine,
        };
    }
}

pub fn selfplay(starts: &[Start], config: &SelfPlayConfig) -> Result<SelfPlayReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SelfPlayReport {
        seed: config.seed,
        opponent: config.opponent,
        engine_first: config.engine_first,
        trials: 0,
        engine_wins: 0,
        winning_starts: 0,
        losses: Vec::new(),
    };
    for start in starts {
        let should_win = engine_should_win(start.verdict(), config.engine_first);
        for _ in 0..config.trials {
            let t = play_one(start, config.engine_first, config.opponent, &mut rng)?;
            report.trials += 1;
            if should_win {
                report.winning_starts += 1;
            }
            match t.winner {
                Actor::Engine => report.engine_wins += 1,
                Actor::Opponent => report.losses.push(t),
            }
        }
    }
    Ok(report)
}

/// `count` distinct Game 2 starts with the requested verdict and weight at most `max_weight`.
pub fn random_starts_g2(count: usize, verdict: Verdict, max_weight: u64, seed: u64) -> Vec<Start> {
    let pool: Vec<WeightedPosition> = (0..=max_weight)
        .flat_map(|w| (0..=w / 2).map(move |x| (x, w - 2 * x)))
        .filter_map(|(x, y)| WeightedPosition::new(x, y).ok())
        .filter(|p| classify_g2(*p).verdict == verdict)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.choose_multiple(&mut rng, count)
        .map(|&start| Start::G2 { start })
        .collect()
}

/// `count` Game 1 starts with the requested verdict, `x <= max_x`, `k <= max_k`,
/// each paired with a bound drawn from `bounds`.
pub fn random_starts_g1(
    count: usize,
    verdict: Verdict,
    bounds: &[BoundFn],
    max_x: u64,
    max_k: u64,
    seed: u64,
) -> Vec<Start> {
    assert!(!bounds.is_empty() && max_k >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = bounds.choose(&mut rng).unwrap().clone();
        let start = TurnPosition::new(rng.random_range(0..=max_x), rng.random_range(1..=max_k))
            .expect("sampled position within cap");
        if classify_g1(start, &f).verdict == verdict {
            out.push(Start::G1 { f, start });
        }
    }
    out
}
