//! Verification campaigns, self-play runs and table dumps built on the
//! classifiers, oracle and strategist.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kernel::{MoveG1, MoveG2, TurnPosition, WeightedPosition};

pub mod selfplay;
pub mod tables;
pub mod verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Game {
    G1,
    G2,
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Game::G1 => "g1",
            Game::G2 => "g2",
        })
    }
}

impl FromStr for Game {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "g1" => Ok(Game::G1),
            "g2" => Ok(Game::G2),
            other => Err(format!("unknown game `{other}` (expected g1 or g2)")),
        }
    }
}

/// A position of either game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Position {
    G1(TurnPosition),
    G2(WeightedPosition),
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::G1(p) => p.fmt(f),
            Position::G2(p) => p.fmt(f),
        }
    }
}

/// A move of either game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlayedMove {
    G1(MoveG1),
    G2(MoveG2),
}

impl fmt::Display for PlayedMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlayedMove::G1(m) => m.fmt(f),
            PlayedMove::G2(m) => m.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format `{other}` (expected text, json or csv)"
            )),
        }
    }
}
