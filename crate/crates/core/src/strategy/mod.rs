//! Strategies as deterministic reactive transducers, and the compiler from
//! proofs to strategies.
//!
//! A transducer is repeatedly shown the run so far and answers with a block
//! of moves to make now (possibly none). Rule transformers wrap the
//! premise's transducer in a [`Simulator`], which keeps an imaginary play of
//! the premise and translates moves between the two plays.

mod compile;
mod translate;

pub use compile::{compile, strategy_for_step, transform, CompiledStrategy, Stage, StrategyError, FORMAT};
pub use translate::{Simulator, Translation};

use crate::cirquent::{Cirquent, CirquentMove};
use crate::game::{Player, Run};

pub trait Transducer: Send + Sync {
    /// Given the run so far (including this transducer's earlier moves),
    /// the moves to make now.
    fn step(&mut self, observed: &Run) -> Vec<String>;

    fn box_clone(&self) -> Box<dyn Transducer>;
}

impl Clone for Box<dyn Transducer> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

/// The strategy for an axiom cirquent: copy every adversary move in one
/// oformula of a diamond into the other oformula of the same diamond.
#[derive(Clone, Debug)]
pub struct Copycat {
    cirquent: Cirquent,
    seen: usize,
    swapped: bool,
}

impl Copycat {
    pub fn new(axiom: &Cirquent) -> Self {
        Copycat {
            cirquent: axiom.clone(),
            seen: 0,
            swapped: false,
        }
    }

    /// A deliberately unsound variant that pairs oformula `a` with the wrong
    /// neighbour. Only useful for checking that the test harness catches
    /// losing strategies.
    pub fn parity_swapped(axiom: &Cirquent) -> Self {
        Copycat {
            swapped: true,
            ..Copycat::new(axiom)
        }
    }

    fn partner(&self, a: usize) -> usize {
        match (a % 2 == 1, self.swapped) {
            (true, false) | (false, true) => a + 1,
            (true, true) | (false, false) => a - 1,
        }
    }
}

impl Transducer for Copycat {
    fn step(&mut self, observed: &Run) -> Vec<String> {
        let mut out = Vec::new();
        for m in observed.0.iter().skip(self.seen) {
            if m.player != Player::Bot {
                continue;
            }
            // ill-shaped adversary moves already lost the game for it
            if let Ok(cm) = CirquentMove::parse(&self.cirquent, &m.mv) {
                let rest = &m.mv[m.mv.find(';').map_or(0, |i| i + 1)..];
                out.push(format!("{};{rest}", self.partner(cm.a)));
            }
        }
        self.seen = observed.len();
        out
    }

    fn box_clone(&self) -> Box<dyn Transducer> {
        Box::new(self.clone())
    }
}

pub fn axiom_strategy(c: &Cirquent) -> Box<dyn Transducer> {
    Box::new(Copycat::new(c))
}

/// Plays `⫰F` given a strategy for `F`'s one-oformula cirquent.
pub fn club_to_brec(m: Box<dyn Transducer>) -> Box<dyn Transducer> {
    Box::new(Simulator::new(m, Translation::ClubToBrec))
}

/// Plays `F` given a strategy for `⫰F`, following the thread `000…`.
pub fn brec_to_plain(m: Box<dyn Transducer>) -> Box<dyn Transducer> {
    Box::new(Simulator::new(m, Translation::BrecToPlain))
}

/// A transducer replaying fixed answers: block `i` is returned on the
/// `i`'th call. Handy for tests of the translation layer.
#[derive(Clone, Debug, Default)]
pub struct Scripted {
    blocks: Vec<Vec<String>>,
    calls: usize,
}

impl Scripted {
    pub fn new(blocks: Vec<Vec<String>>) -> Self {
        Scripted { blocks, calls: 0 }
    }
}

impl Transducer for Scripted {
    fn step(&mut self, _observed: &Run) -> Vec<String> {
        let out = self.blocks.get(self.calls).cloned().unwrap_or_default();
        self.calls += 1;
        out
    }

    fn box_clone(&self) -> Box<dyn Transducer> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::axiom;
    use crate::formula::Formula;

    fn run(s: &str) -> Run {
        s.parse().unwrap()
    }

    #[test]
    fn copycat_pairs_by_parity() {
        let c = axiom(&[Formula::atom("E"), Formula::atom("F")]).unwrap();
        let mut t = Copycat::new(&c);
        assert_eq!(t.step(&run("B:1;0,.m")), vec!["2;0,.m"]);
        assert_eq!(t.step(&run("B:1;0,.m, T:2;0,.m, B:4;,.m")), vec!["3;,.m"]);
        assert!(t.step(&run("B:1;0,.m, T:2;0,.m, B:4;,.m, T:3;,.m, B:junk")).is_empty());
        let one = axiom(&[Formula::atom("F")]).unwrap();
        let mut bad = Copycat::parity_swapped(&one);
        assert_eq!(bad.step(&run("B:1;.m")), vec!["0;.m"]);
    }
}
