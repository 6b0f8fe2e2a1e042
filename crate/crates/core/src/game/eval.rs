//! Legality and winners for games built from atom games with the five
//! combinators.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{negate_run, project_prefix, project_thread, split_thread_move, AtomGame, Interp, Player, Run};
use crate::bitstring::{enumerate_thread_classes, Bitstring, ThreadRep};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("atom {0} has no game in the interpretation")]
pub struct InterpError(pub String);

/// A game expression: a formula whose atoms have been replaced by games.
#[derive(Clone)]
pub enum Game {
    Atom(Arc<AtomGame>),
    Neg(Box<Game>),
    And(Box<Game>, Box<Game>),
    Or(Box<Game>, Box<Game>),
    Brec(Box<Game>),
    Cobrec(Box<Game>),
}

impl Game {
    pub fn from_formula(f: &Formula, interp: &Interp) -> Result<Game, InterpError> {
        let atom = |a: &crate::formula::Atom| {
            interp
                .resolve(a)
                .cloned()
                .map(Game::Atom)
                .ok_or_else(|| InterpError(a.name().to_string()))
        };
        Ok(match f {
            Formula::Pos(a) => atom(a)?,
            Formula::Neg(a) => Game::Neg(Box::new(atom(a)?)),
            Formula::And(a, b) => Game::and(Game::from_formula(a, interp)?, Game::from_formula(b, interp)?),
            Formula::Or(a, b) => Game::or(Game::from_formula(a, interp)?, Game::from_formula(b, interp)?),
            Formula::Brec(a) => Game::Brec(Box::new(Game::from_formula(a, interp)?)),
            Formula::Cobrec(a) => Game::Cobrec(Box::new(Game::from_formula(a, interp)?)),
        })
    }

    pub fn atom(g: AtomGame) -> Game {
        Game::Atom(Arc::new(g))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(g: Game) -> Game {
        Game::Neg(Box::new(g))
    }

    pub fn and(a: Game, b: Game) -> Game {
        Game::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Game, b: Game) -> Game {
        Game::Or(Box::new(a), Box::new(b))
    }

    pub fn brec(a: Game) -> Game {
        Game::Brec(Box::new(a))
    }

    pub fn cobrec(a: Game) -> Game {
        Game::Cobrec(Box::new(a))
    }

    pub fn legal(&self, r: &Run) -> bool {
        match self {
            Game::Atom(g) => g.is_legal(r),
            Game::Neg(g) => g.legal(&negate_run(r)),
            Game::And(a, b) | Game::Or(a, b) => {
                r.iter().all(|m| m.mv.starts_with("0.") || m.mv.starts_with("1."))
                    && a.legal(&project_prefix(r, "0."))
                    && b.legal(&project_prefix(r, "1."))
            }
            Game::Brec(a) | Game::Cobrec(a) => match thread_classes(r) {
                Some(classes) => classes.iter().all(|x| a.legal(&project_thread(r, x))),
                None => false,
            },
        }
    }

    /// Label of the last move of the shortest illegal prefix, if any.
    pub fn first_offender(&self, r: &Run) -> Option<Player> {
        if self.legal(r) {
            return None;
        }
        // legality is prefix-closed and the empty run is legal
        let (mut lo, mut hi) = (0, r.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.legal(&r.prefix(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(r.0[hi - 1].player)
    }

    pub fn winner(&self, r: &Run) -> Player {
        match self.first_offender(r) {
            Some(p) => p.opposite(),
            None => self.winner_of_legal(r),
        }
    }

    /// The winner of a run already known to be legal.
    pub fn winner_of_legal(&self, r: &Run) -> Player {
        let top = |b: bool| if b { Player::Top } else { Player::Bot };
        match self {
            Game::Atom(g) => g.node_at(r).map(|n| n.winner).unwrap_or(Player::Bot),
            Game::Neg(g) => g.winner_of_legal(&negate_run(r)).opposite(),
            Game::And(a, b) => top(
                a.winner_of_legal(&project_prefix(r, "0.")) == Player::Top
                    && b.winner_of_legal(&project_prefix(r, "1.")) == Player::Top,
            ),
            Game::Or(a, b) => top(
                a.winner_of_legal(&project_prefix(r, "0.")) == Player::Top
                    || b.winner_of_legal(&project_prefix(r, "1.")) == Player::Top,
            ),
            Game::Brec(a) => top(
                thread_classes(r)
                    .unwrap_or_default()
                    .iter()
                    .all(|x| a.winner_of_legal(&project_thread(r, x)) == Player::Top),
            ),
            Game::Cobrec(a) => top(
                thread_classes(r)
                    .unwrap_or_default()
                    .iter()
                    .any(|x| a.winner_of_legal(&project_thread(r, x)) == Player::Top),
            ),
        }
    }

    /// How many leaf games (atom threads) ⊤ currently wins on a legal run.
    /// Used to rank environment moves; not part of the semantics.
    pub fn margin(&self, r: &Run) -> usize {
        match self {
            Game::Atom(_) | Game::Neg(_) => usize::from(self.winner_of_legal(r) == Player::Top),
            Game::And(a, b) | Game::Or(a, b) => {
                a.margin(&project_prefix(r, "0.")) + b.margin(&project_prefix(r, "1."))
            }
            Game::Brec(a) | Game::Cobrec(a) => thread_classes(r)
                .unwrap_or_default()
                .iter()
                .map(|x| a.margin(&project_thread(r, x)))
                .sum(),
        }
    }

    /// Maximum nesting of `!`/`?` over the expression.
    pub fn recurrence_depth(&self) -> usize {
        match self {
            Game::Atom(_) => 0,
            Game::Neg(g) => g.recurrence_depth(),
            Game::And(a, b) | Game::Or(a, b) => a.recurrence_depth().max(b.recurrence_depth()),
            Game::Brec(a) | Game::Cobrec(a) => 1 + a.recurrence_depth(),
        }
    }
}

/// Thread-class representatives for the bitstrings addressing `r`'s moves,
/// or `None` if some move has no bitstring address.
fn thread_classes(r: &Run) -> Option<Vec<ThreadRep>> {
    let mut used: BTreeSet<Bitstring> = BTreeSet::new();
    for m in r {
        let (u, _) = split_thread_move(&m.mv)?;
        used.insert(u);
    }
    Some(enumerate_thread_classes(&used))
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Game::Atom(g) => write!(f, "{}", g.name),
            Game::Neg(g) => write!(f, "¬({g})"),
            Game::And(a, b) => write!(f, "({a} ∧ {b})"),
            Game::Or(a, b) => write!(f, "({a} ∨ {b})"),
            Game::Brec(a) => write!(f, "⫰({a})"),
            Game::Cobrec(a) => write!(f, "⫯({a})"),
        }
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn legal(g: &Game, r: &Run) -> bool {
    g.legal(r)
}

pub fn winner(g: &Game, r: &Run) -> Player {
    g.winner(r)
}

pub fn first_offender(g: &Game, r: &Run) -> Option<Player> {
    g.first_offender(r)
}
