//! Human-vs-engine sessions as a pure state machine. No I/O here; the HTTP
//! layer owns storage and locking.

use dynnim::harness::{Game, PlayedMove, Position};
use dynnim::kernel::smallest_move_g2;
use dynnim::{
    advise_g1, advise_g2, apply_g1, apply_g2, classify_g1, classify_g2, BoundFn, MoveG1, MoveG2,
    MoveViolation, TurnPosition, Verdict, WeightedPosition,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Human,
    Engine,
}

impl Actor {
    fn other(self) -> Actor {
        match self {
            Actor::Human => Actor::Engine,
            Actor::Engine => Actor::Human,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    InProgress,
    HumanWon,
    EngineWon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub actor: Actor,
    #[serde(rename = "move")]
    pub mv: PlayedMove,
    pub position: Position,
}

/// Body of `POST /api/v1/sessions`. Game 1 accepts the stone count as `u` or `x`.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct NewSession {
    pub game: Game,
    pub f: Option<String>,
    pub x: Option<u64>,
    pub y: Option<u64>,
    pub u: Option<u64>,
    pub k: Option<u64>,
    #[serde(default = "yes")]
    pub human_first: bool,
}

fn yes() -> bool {
    true
}

/// Body of `POST /api/v1/sessions/{id}/moves`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum MoveRequest {
    G1 {
        take: u64,
    },
    G2 {
        #[serde(rename = "takeHeavy")]
        take_heavy: u64,
        #[serde(rename = "takeLight")]
        take_light: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionError {
    Invalid(String),
    IllegalMove(MoveViolation),
    GameOver(Status),
}

impl From<dynnim::Error> for SessionError {
    fn from(e: dynnim::Error) -> Self {
        match e {
            dynnim::Error::IllegalMove(v) => SessionError::IllegalMove(v),
            other => SessionError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
enum Rules {
    G1(BoundFn),
    G2,
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    rules: Rules,
    start: Position,
    position: Position,
    to_move: Actor,
    human_first: bool,
    history: Vec<HistoryEntry>,
    status: Status,
}

/// What the API returns for a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub id: String,
    pub game: Game,
    pub f: Option<BoundFn>,
    pub start: Position,
    pub position: Position,
    pub verdict: Verdict,
    /// `f(k), f(k+1), f(k+2)` at the current turn; Game 1 only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upcoming_bounds: Option<Vec<u64>>,
    pub to_move: Actor,
    pub status: Status,
    pub human_first: bool,
    pub history: Vec<HistoryEntry>,
    pub history_hash: String,
}

impl Session {
    pub fn create(id: String, req: &NewSession) -> Result<Session, SessionError> {
        let invalid = |m: &str| Err(SessionError::Invalid(m.to_string()));
        let (rules, start) = match req.game {
            Game::G1 => {
                let Some(spec) = &req.f else {
                    return invalid("g1 needs a bound function `f`");
                };
                let f: BoundFn = spec.parse().map_err(SessionError::from)?;
                if req.y.is_some() {
                    return invalid("g1 has no `y`");
                }
                let stones = match (req.u, req.x) {
                    (Some(u), Some(x)) if u != x => return invalid("`u` and `x` disagree"),
                    (Some(u), _) | (None, Some(u)) => u,
                    (None, None) => return invalid("g1 needs a stone count `u`"),
                };
                let pos = TurnPosition::new(stones, req.k.unwrap_or(1))?;
                f.eval(pos.turn())?;
                (Rules::G1(f), Position::G1(pos))
            }
            Game::G2 => {
                if req.f.is_some() || req.u.is_some() || req.k.is_some() {
                    return invalid("g2 takes only `x` and `y`");
                }
                let Some(x) = req.x else {
                    return invalid("g2 needs `x`");
                };
                let pos = WeightedPosition::new(x, req.y.unwrap_or(0))?;
                (Rules::G2, Position::G2(pos))
            }
        };
        let mut session = Session {
            id,
            rules,
            start,
            position: start,
            to_move: if req.human_first {
                Actor::Human
            } else {
                Actor::Engine
            },
            human_first: req.human_first,
            history: Vec::new(),
            status: Status::InProgress,
        };
        session.settle()?;
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn position(&self) -> Position {
        self.position
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    /// Applies the human's move, then the engine's reply if the game goes on.
    pub fn submit(&mut self, req: MoveRequest) -> Result<(), SessionError> {
        if self.status != Status::InProgress {
            return Err(SessionError::GameOver(self.status));
        }
        let mv = match (&self.rules, req) {
            (Rules::G1(_), MoveRequest::G1 { take }) => PlayedMove::G1(MoveG1 { take }),
            (
                Rules::G2,
                MoveRequest::G2 {
                    take_heavy,
                    take_light,
                },
            ) => PlayedMove::G2(MoveG2::new(take_heavy, take_light)),
            (Rules::G1(_), _) => return Err(SessionError::Invalid("g1 moves are {take}".into())),
            (Rules::G2, _) => {
                return Err(SessionError::Invalid(
                    "g2 moves are {takeHeavy, takeLight}".into(),
                ))
            }
        };
        let next = self.apply(mv)?;
        self.record(Actor::Human, mv, next);
        self.settle()
    }

    fn apply(&self, mv: PlayedMove) -> Result<Position, SessionError> {
        Ok(match (&self.rules, self.position, mv) {
            (Rules::G1(f), Position::G1(p), PlayedMove::G1(m)) => Position::G1(apply_g1(p, f, m)?),
            (Rules::G2, Position::G2(p), PlayedMove::G2(m)) => Position::G2(apply_g2(p, m)?),
            _ => unreachable!("move and position of different games"),
        })
    }

    fn record(&mut self, actor: Actor, mv: PlayedMove, next: Position) {
        self.history.push(HistoryEntry {
            actor,
            mv,
            position: next,
        });
        self.position = next;
        self.to_move = actor.other();
    }

    fn has_move(&self) -> bool {
        match self.position {
            Position::G1(p) => p.stones() > 0,
            Position::G2(p) => smallest_move_g2(p).is_some(),
        }
    }

    fn engine_choice(&self) -> Result<Option<(PlayedMove, Position)>, SessionError> {
        Ok(match (&self.rules, self.position) {
            (Rules::G1(f), Position::G1(p)) => advise_g1(p, f)?
                .chosen_move()
                .map(|(m, p)| (PlayedMove::G1(m), Position::G1(p))),
            (Rules::G2, Position::G2(p)) => advise_g2(p)
                .chosen_move()
                .map(|(m, p)| (PlayedMove::G2(m), Position::G2(p))),
            _ => unreachable!("position of the wrong game"),
        })
    }

    /// Lets the engine move while it is its turn, and ends the game as soon as
    /// the player to move is stuck.
    fn settle(&mut self) -> Result<(), SessionError> {
        loop {
            if !self.has_move() {
                self.status = match self.to_move {
                    Actor::Human => Status::EngineWon,
                    Actor::Engine => Status::HumanWon,
                };
                return Ok(());
            }
            if self.to_move == Actor::Human {
                return Ok(());
            }
            let (mv, next) = self
                .engine_choice()?
                .expect("strategist moves whenever a legal move exists");
            self.record(Actor::Engine, mv, next);
        }
    }

    fn verdict(&self) -> Verdict {
        match (&self.rules, self.position) {
            (Rules::G1(f), Position::G1(p)) => classify_g1(p, f).verdict,
            (Rules::G2, Position::G2(p)) => classify_g2(p).verdict,
            _ => unreachable!("position of the wrong game"),
        }
    }

    fn game(&self) -> Game {
        match self.rules {
            Rules::G1(_) => Game::G1,
            Rules::G2 => Game::G2,
        }
    }

    fn bound(&self) -> Option<&BoundFn> {
        match &self.rules {
            Rules::G1(f) => Some(f),
            Rules::G2 => None,
        }
    }

    /// SHA-256 over the game, bound, start, seat order and move history. The
    /// session id is left out, so replaying the same requests gives the same hash.
    pub fn history_hash(&self) -> String {
        let canonical = serde_json::json!({
            "game": self.game(),
            "f": self.bound(),
            "start": self.start,
            "humanFirst": self.human_first,
            "history": self.history,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    pub fn view(&self) -> SessionView {
        let upcoming_bounds = match (&self.rules, self.position) {
            (Rules::G1(f), Position::G1(p)) => Some(
                (0..3)
                    .filter_map(|d| p.turn().checked_add(d))
                    .map_while(|k| f.eval(k).ok())
                    .collect(),
            ),
            _ => None,
        };
        SessionView {
            id: self.id.clone(),
            game: self.game(),
            f: self.bound().cloned(),
            start: self.start,
            position: self.position,
            verdict: self.verdict(),
            upcoming_bounds,
            to_move: self.to_move,
            status: self.status,
            human_first: self.human_first,
            history: self.history.clone(),
            history_hash: self.history_hash(),
        }
    }
}
