//! Runs, labmoves, projections and the game semantics of formulas.

mod atom;
mod eval;
mod statics;

pub use atom::{AtomGame, AtomLibrary, GameNode, Interp, LibraryError};
pub use eval::{first_offender, legal, winner, Game, InterpError};
pub use statics::{delays_of, is_delay, is_static_bounded, static_violation, StaticViolation};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::{Bitstring, ThreadRep};

/// One of the two players: ⊤ (the machine) or ⊥ (the environment).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "T")]
    Top,
    #[serde(rename = "B")]
    Bot,
}

impl Player {
    pub fn opposite(self) -> Player {
        match self {
            Player::Top => Player::Bot,
            Player::Bot => Player::Top,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Player::Top => "⊤",
            Player::Bot => "⊥",
        }
    }

    /// Accepts `T`, `B`, `⊤` and `⊥`.
    pub fn parse(s: &str) -> Option<Player> {
        match s {
            "T" | "⊤" => Some(Player::Top),
            "B" | "⊥" => Some(Player::Bot),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Top => "T",
            Player::Bot => "B",
        })
    }
}

/// A move prefixed with the player who made it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Labmove {
    pub player: Player,
    pub mv: String,
}

impl Labmove {
    pub fn new(player: Player, mv: impl Into<String>) -> Self {
        Labmove {
            player,
            mv: mv.into(),
        }
    }

    pub fn top(mv: impl Into<String>) -> Self {
        Labmove::new(Player::Top, mv)
    }

    pub fn bot(mv: impl Into<String>) -> Self {
        Labmove::new(Player::Bot, mv)
    }
}

impl fmt::Display for Labmove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.player, self.mv)
    }
}

impl fmt::Debug for Labmove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.player.symbol(), self.mv)
    }
}

/// A finite sequence of labmoves.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Run(pub Vec<Labmove>);

impl Run {
    pub fn new() -> Self {
        Run(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, m: Labmove) {
        self.0.push(m);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Labmove> {
        self.0.iter()
    }

    pub fn prefix(&self, len: usize) -> Run {
        Run(self.0[..len].to_vec())
    }

    pub fn extended(&self, m: Labmove) -> Run {
        let mut r = self.clone();
        r.push(m);
        r
    }

    pub fn moves_of(&self, p: Player) -> impl Iterator<Item = &str> {
        self.0.iter().filter(move |m| m.player == p).map(|m| m.mv.as_str())
    }
}

impl FromIterator<Labmove> for Run {
    fn from_iter<I: IntoIterator<Item = Labmove>>(iter: I) -> Self {
        Run(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Run {
    type Item = &'a Labmove;
    type IntoIter = std::slice::Iter<'a, Labmove>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m:?}")?;
        }
        f.write_str("⟩")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad run literal near {0:?}: expected T:move or B:move")]
pub struct RunParseError(pub String);

/// Where a new labmove starts: a player tag followed by a colon.
fn labmove_start(s: &str) -> Option<(Player, &str)> {
    let s = s.trim_start();
    for tag in ["T", "B", "⊤", "⊥"] {
        if let Some(rest) = s.strip_prefix(tag).and_then(|r| r.strip_prefix(':')) {
            return Some((Player::parse(tag)?, rest));
        }
    }
    None
}

impl FromStr for Run {
    type Err = RunParseError;

    /// Parses `T:move, B:move, ...`. A comma only separates labmoves when a
    /// player tag follows it, so cirquent moves like `1;0,1.m` survive intact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Run::new());
        }
        let mut out = Vec::new();
        let (mut player, mut rest) = labmove_start(s).ok_or_else(|| RunParseError(s.to_string()))?;
        loop {
            let mut split = None;
            for (i, c) in rest.char_indices() {
                if c == ',' {
                    if let Some(next) = labmove_start(&rest[i + 1..]) {
                        split = Some((i, next));
                        break;
                    }
                }
            }
            match split {
                Some((i, (p, r))) => {
                    out.push(Labmove::new(player, rest[..i].trim()));
                    player = p;
                    rest = r;
                }
                None => {
                    out.push(Labmove::new(player, rest.trim()));
                    break;
                }
            }
        }
        Ok(Run(out))
    }
}

/// The same run with every label flipped.
pub fn negate_run(r: &Run) -> Run {
    r.iter()
        .map(|m| Labmove::new(m.player.opposite(), m.mv.clone()))
        .collect()
}

/// `r^{prefix}`: keep the moves starting with `prefix` and strip it.
pub fn project_prefix(r: &Run, prefix: &str) -> Run {
    r.iter()
        .filter_map(|m| {
            m.mv
                .strip_prefix(prefix)
                .map(|rest| Labmove::new(m.player, rest))
        })
        .collect()
}

/// Splits a thread-addressed move `u.β` into `(u, β)`.
pub fn split_thread_move(mv: &str) -> Option<(Bitstring, &str)> {
    Bitstring::split_prefix(mv, '.')
}

/// `r^{≼x}`: keep the moves `u.β` with `u` a prefix of `x` and strip `u.`.
/// Moves without a bitstring address are dropped.
pub fn project_thread(r: &Run, x: &ThreadRep) -> Run {
    r.iter()
        .filter_map(|m| {
            let (u, beta) = split_thread_move(&m.mv)?;
            x.has_prefix(&u).then(|| Labmove::new(m.player, beta))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> Run {
        s.parse().unwrap()
    }

    #[test]
    fn run_literals_round_trip() {
        let r = run("T:0.beta, B:1.gamma,B:0.delta");
        assert_eq!(r.len(), 3);
        assert_eq!(r.to_string(), "T:0.beta, B:1.gamma, B:0.delta");
        let c = run("T:3;00,1.a, B:3;001,11.b");
        assert_eq!(c.0[0].mv, "3;00,1.a");
        assert_eq!(c.0[1].mv, "3;001,11.b");
        assert_eq!(run(""), Run::new());
        assert!("X:m".parse::<Run>().is_err());
        assert_eq!(run("⊥:m, ⊤:n"), run("B:m, T:n"));
    }

    #[test]
    fn negation_flips_labels() {
        let r = run("T:a, B:b");
        assert_eq!(negate_run(&r), run("B:a, T:b"));
        assert_eq!(negate_run(&negate_run(&r)), r);
        assert_eq!(negate_run(&Run::new()), Run::new());
    }

    #[test]
    fn prefix_projection() {
        let r = run("T:0.beta, B:1.gamma, B:0.delta");
        assert_eq!(project_prefix(&r, "0."), run("T:beta, B:delta"));
        assert_eq!(project_prefix(&Run::new(), "0."), Run::new());
    }

    #[test]
    fn thread_projection() {
        let r = run("T:00.alpha, B:001.beta, B:0.delta");
        assert_eq!(project_thread(&r, &ThreadRep::zeros()), run("T:alpha, B:delta"));
        let eps = run("B:.m, T:1.n");
        assert_eq!(project_thread(&eps, &ThreadRep::zeros()), run("B:m"));
        assert_eq!(project_thread(&run("T:m"), &ThreadRep::zeros()), Run::new());
    }
}
