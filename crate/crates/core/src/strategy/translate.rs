//! Move translations between a conclusion's play and its premise's play.
//!
//! Each rule of the calculus (except the axiom) gets a [`Translation`] that
//! maps the real adversary's moves in the conclusion into adversary moves of
//! the imaginary premise play, and the simulated machine's premise moves back
//! into real conclusion moves. The [`Simulator`] drives the premise strategy
//! on the imaginary play.

use crate::bitstring::Bitstring;
use crate::calculus::RuleApp;
use crate::cirquent::{Cirquent, CirquentMove};
use crate::fusion::{defuse2, defuse_n, fuse2, fuse_n};
use crate::game::{split_thread_move, Labmove, Player, Run};

use super::{StrategyError, Transducer};

/// Upper bound on how many times the simulator re-polls the premise strategy
/// for a single real step when its output translates to nothing.
const POLL_GUARD: usize = 10_000;

#[derive(Clone, Debug)]
pub enum Kind {
    Identity,
    SwapOformula { i: usize },
    SwapOvergroup { j: usize },
    Weaken { deleted: usize, dropped: Vec<usize> },
    Contract { a: usize },
    OverDup { j: usize },
    Merge { j: usize, left: Vec<usize>, right: Vec<usize> },
    Intro { a: usize },
    RecIntro { a: usize, slot: usize },
    /// `k` is the least length such that `0^k` is not a proper prefix of
    /// any thread address used so far by moves of oformula `a`.
    CorecZero { a: usize, k: usize },
    CorecFuse { a: usize, slots: Vec<usize> },
}

/// How moves are reinterpreted between a conclusion and its premise.
#[derive(Clone, Debug)]
pub enum Translation {
    Rule {
        conclusion: Cirquent,
        premise: Cirquent,
        kind: Kind,
    },
    /// `1;w.α` of the one-oformula cirquent ↔ `w.α` of `⫰F`.
    ClubToBrec,
    /// `w.α` of `⫰F` with `w ≼ 000…` ↔ `α` of `F`.
    BrecToPlain,
}

fn with_a(m: &CirquentMove, a: usize) -> CirquentMove {
    CirquentMove { a, ..m.clone() }
}

fn shift_down(b: usize, at: usize) -> usize {
    if b > at {
        b - 1
    } else {
        b
    }
}

fn shift_up(b: usize, at: usize) -> usize {
    if b > at {
        b + 1
    } else {
        b
    }
}

impl Translation {
    /// The translation for `app`, which turns `conclusion` into `premise`.
    pub fn for_rule(app: &RuleApp, premise: &Cirquent, conclusion: &Cirquent) -> Result<Translation, StrategyError> {
        let kind = match app {
            RuleApp::Axiom { .. } => {
                return Err(StrategyError::Inconsistent("the axiom has no premise to simulate".into()));
            }
            RuleApp::UnderExchange { .. } | RuleApp::UnderDuplication { .. } => Kind::Identity,
            RuleApp::OformulaExchange { position } => Kind::SwapOformula { i: *position },
            RuleApp::OverExchange { position } => Kind::SwapOvergroup { j: position - 1 },
            RuleApp::Weakening { oformula, .. } => {
                if premise.k() == conclusion.k() {
                    Kind::Identity
                } else {
                    let dropped = (0..conclusion.n())
                        .filter(|&j| conclusion.over[j] == [*oformula])
                        .collect();
                    Kind::Weaken {
                        deleted: *oformula,
                        dropped,
                    }
                }
            }
            RuleApp::Contraction { oformula } => Kind::Contract { a: *oformula },
            RuleApp::OverDuplication { overgroup } => Kind::OverDup { j: overgroup - 1 },
            RuleApp::Merging { overgroup, left, right } => Kind::Merge {
                j: overgroup - 1,
                left: left.clone(),
                right: right.clone(),
            },
            RuleApp::DisjIntro { oformula } | RuleApp::ConjIntro { oformula } => Kind::Intro { a: *oformula },
            RuleApp::RecIntro { oformula, position } => Kind::RecIntro {
                a: *oformula,
                slot: position - 1,
            },
            RuleApp::CorecIntro { oformula, overgroups } => {
                let mut slots: Vec<usize> = overgroups.iter().map(|j| j - 1).collect();
                slots.sort_unstable();
                if slots.is_empty() {
                    Kind::CorecZero { a: *oformula, k: 0 }
                } else {
                    Kind::CorecFuse { a: *oformula, slots }
                }
            }
        };
        Ok(Translation::Rule {
            conclusion: conclusion.clone(),
            premise: premise.clone(),
            kind,
        })
    }

    /// Imaginary adversary moves standing for the real adversary move `mv`.
    /// Moves that are ill-formed in the real game are ignored.
    pub fn env_to_premise(&self, mv: &str) -> Vec<String> {
        match self {
            Translation::ClubToBrec => match split_thread_move(mv) {
                Some((w, alpha)) => vec![format!("1;{w}.{alpha}")],
                None => vec![],
            },
            Translation::BrecToPlain => vec![format!(".{mv}")],
            Translation::Rule { conclusion, kind, .. } => {
                let Ok(m) = CirquentMove::parse(conclusion, mv) else {
                    return vec![];
                };
                env_rule(kind, m).into_iter().map(|m| m.to_string()).collect()
            }
        }
    }

    /// Records a move of the real play, by either player. Only the
    /// corecurrence translation without overgroups keeps such state.
    pub fn observe_real(&mut self, mv: &str) {
        let Translation::Rule {
            conclusion,
            kind: Kind::CorecZero { a, k },
            ..
        } = self
        else {
            return;
        };
        let Ok(m) = CirquentMove::parse(conclusion, mv) else {
            return;
        };
        if m.a != *a {
            return;
        }
        if let Some((v, _)) = split_thread_move(&m.alpha) {
            let zeros = v.bits().iter().take_while(|b| !**b).count();
            if !v.is_empty() {
                *k = (*k).max(zeros.min(v.len() - 1) + 1);
            }
        }
    }

    /// Real moves standing for the simulated machine's premise move `mv`.
    /// A move that cannot be translated is passed through unchanged so that
    /// its illegality stays visible.
    pub fn premise_to_real(&self, mv: &str) -> Vec<String> {
        match self {
            Translation::ClubToBrec => match CirquentMove::parse_shape(mv, 1) {
                Ok(m) if m.a == 1 => vec![format!("{}.{}", m.us[0], m.alpha)],
                _ => vec![mv.to_string()],
            },
            Translation::BrecToPlain => match split_thread_move(mv) {
                Some((w, alpha)) if w.is_all_zeros() => vec![alpha.to_string()],
                Some(_) => vec![],
                None => vec![mv.to_string()],
            },
            Translation::Rule { premise, kind, .. } => {
                let Ok(m) = CirquentMove::parse(premise, mv) else {
                    return vec![mv.to_string()];
                };
                match machine_rule(kind, m) {
                    Some(ms) => ms.into_iter().map(|m| m.to_string()).collect(),
                    None => vec![mv.to_string()],
                }
            }
        }
    }
}

/// Real conclusion move `m` (by the adversary) as premise moves.
fn env_rule(kind: &Kind, m: CirquentMove) -> Vec<CirquentMove> {
    match kind {
        Kind::Identity => vec![m],
        Kind::SwapOformula { i } => {
            let a = if m.a == *i {
                i + 1
            } else if m.a == i + 1 {
                *i
            } else {
                m.a
            };
            vec![with_a(&m, a)]
        }
        Kind::SwapOvergroup { j } => {
            let mut m = m;
            m.us.swap(*j, j + 1);
            vec![m]
        }
        Kind::Weaken { deleted, dropped } => {
            if m.a == *deleted {
                return vec![];
            }
            let us = m.us.iter().enumerate().filter(|(j, _)| !dropped.contains(j)).map(|(_, u)| u.clone()).collect();
            vec![CirquentMove::new(shift_down(m.a, *deleted), us, m.alpha)]
        }
        Kind::Contract { a } => {
            if m.a != *a {
                return vec![with_a(&m, shift_up(m.a, *a))];
            }
            let Some((v, beta)) = split_thread_move(&m.alpha) else {
                return vec![];
            };
            match v.bits().first() {
                None => vec![
                    CirquentMove::new(*a, m.us.clone(), format!(".{beta}")),
                    CirquentMove::new(a + 1, m.us.clone(), format!(".{beta}")),
                ],
                Some(&bit) => {
                    let rest = Bitstring::from_bits(v.bits()[1..].to_vec());
                    let target = if bit { a + 1 } else { *a };
                    vec![CirquentMove::new(target, m.us.clone(), format!("{rest}.{beta}"))]
                }
            }
        }
        Kind::OverDup { j } => {
            let (u1, u2) = (m.us[*j].clone(), m.us[j + 1].clone());
            fuse2(&u1, &u2)
                .into_iter()
                .map(|v| {
                    let mut us = m.us.clone();
                    us[*j] = v;
                    us.remove(j + 1);
                    CirquentMove::new(m.a, us, m.alpha.clone())
                })
                .collect()
        }
        Kind::Merge { j, left, right } => {
            let u = m.us[*j].clone();
            let (in_l, in_r) = (left.contains(&m.a), right.contains(&m.a));
            let (u1, u2) = match (in_l, in_r) {
                (true, true) => defuse2(&u),
                (true, false) => (u, Bitstring::empty()),
                (false, true) => (Bitstring::empty(), u),
                (false, false) => (Bitstring::empty(), Bitstring::empty()),
            };
            let mut us = m.us.clone();
            us[*j] = u1;
            us.insert(j + 1, u2);
            vec![CirquentMove::new(m.a, us, m.alpha)]
        }
        Kind::Intro { a } => {
            if m.a != *a {
                return vec![with_a(&m, shift_up(m.a, *a))];
            }
            if let Some(rest) = m.alpha.strip_prefix("0.") {
                vec![CirquentMove::new(*a, m.us.clone(), rest)]
            } else if let Some(rest) = m.alpha.strip_prefix("1.") {
                vec![CirquentMove::new(a + 1, m.us.clone(), rest)]
            } else {
                vec![]
            }
        }
        Kind::RecIntro { a, slot } => {
            let mut us = m.us.clone();
            if m.a != *a {
                us.insert(*slot, Bitstring::empty());
                return vec![CirquentMove::new(m.a, us, m.alpha)];
            }
            let Some((u, beta)) = split_thread_move(&m.alpha) else {
                return vec![];
            };
            us.insert(*slot, u);
            vec![CirquentMove::new(m.a, us, beta)]
        }
        Kind::CorecZero { a, .. } => {
            if m.a != *a {
                return vec![m];
            }
            match split_thread_move(&m.alpha) {
                Some((v, beta)) if v.is_all_zeros() => vec![CirquentMove::new(*a, m.us.clone(), beta)],
                _ => vec![],
            }
        }
        Kind::CorecFuse { a, slots } => {
            if m.a != *a {
                return vec![m];
            }
            let Some((u, beta)) = split_thread_move(&m.alpha) else {
                return vec![];
            };
            let parts = defuse_n(&u, slots.len()).expect("nonempty slot list");
            let mut us = m.us.clone();
            for (&j, p) in slots.iter().zip(parts) {
                us[j] = p;
            }
            vec![CirquentMove::new(*a, us, beta)]
        }
    }
}

/// The simulated machine's premise move `m` as real conclusion moves.
fn machine_rule(kind: &Kind, m: CirquentMove) -> Option<Vec<CirquentMove>> {
    Some(match kind {
        Kind::Identity | Kind::SwapOformula { .. } | Kind::SwapOvergroup { .. } => env_rule(kind, m),
        Kind::Weaken { deleted, dropped } => {
            let mut us = m.us.clone();
            for &j in dropped {
                us.insert(j, Bitstring::empty());
            }
            vec![CirquentMove::new(shift_up(m.a, deleted - 1), us, m.alpha)]
        }
        Kind::Contract { a } => {
            if m.a == *a || m.a == a + 1 {
                let (u, alpha) = split_thread_move(&m.alpha)?;
                let lead = if m.a == *a { "0" } else { "1" };
                vec![CirquentMove::new(*a, m.us.clone(), format!("{lead}{u}.{alpha}"))]
            } else {
                vec![with_a(&m, shift_down(m.a, *a))]
            }
        }
        Kind::OverDup { j } => {
            let (u1, u2) = defuse2(&m.us[*j]);
            let mut us = m.us.clone();
            us[*j] = u1;
            us.insert(j + 1, u2);
            vec![CirquentMove::new(m.a, us, m.alpha)]
        }
        Kind::Merge { j, left, right } => {
            let (u1, u2) = (m.us[*j].clone(), m.us[j + 1].clone());
            let vs = match (left.contains(&m.a), right.contains(&m.a)) {
                (true, true) => fuse2(&u1, &u2),
                (true, false) => vec![u1],
                (false, true) => vec![u2],
                (false, false) => vec![Bitstring::empty()],
            };
            vs.into_iter()
                .map(|v| {
                    let mut us = m.us.clone();
                    us[*j] = v;
                    us.remove(j + 1);
                    CirquentMove::new(m.a, us, m.alpha.clone())
                })
                .collect()
        }
        Kind::Intro { a } => {
            if m.a == *a {
                vec![CirquentMove::new(*a, m.us.clone(), format!("0.{}", m.alpha))]
            } else if m.a == a + 1 {
                vec![CirquentMove::new(*a, m.us.clone(), format!("1.{}", m.alpha))]
            } else {
                vec![with_a(&m, shift_down(m.a, *a))]
            }
        }
        Kind::RecIntro { a, slot } => {
            let mut us = m.us.clone();
            let u = us.remove(*slot);
            if m.a == *a {
                vec![CirquentMove::new(*a, us, format!("{u}.{}", m.alpha))]
            } else {
                vec![CirquentMove::new(m.a, us, m.alpha)]
            }
        }
        Kind::CorecZero { a, k } => {
            if m.a != *a {
                return Some(vec![m]);
            }
            vec![CirquentMove::new(*a, m.us.clone(), format!("{}.{}", Bitstring::zeros(*k), m.alpha))]
        }
        Kind::CorecFuse { a, slots } => {
            if m.a != *a {
                return Some(vec![m]);
            }
            let parts: Vec<Bitstring> = slots.iter().map(|&j| m.us[j].clone()).collect();
            let mut us = m.us.clone();
            for &j in slots {
                us[j] = Bitstring::empty();
            }
            fuse_n(&parts)
                .expect("nonempty slot list")
                .into_iter()
                .map(|v| CirquentMove::new(*a, us.clone(), format!("{v}.{}", m.alpha)))
                .collect()
        }
    })
}

/// Plays the real game by simulating an inner strategy on an imaginary play
/// and translating moves in both directions.
#[derive(Clone)]
pub struct Simulator {
    inner: Box<dyn Transducer>,
    translation: Translation,
    imaginary: Run,
    seen: usize,
}

impl Simulator {
    pub fn new(inner: Box<dyn Transducer>, translation: Translation) -> Self {
        Simulator {
            inner,
            translation,
            imaginary: Run::new(),
            seen: 0,
        }
    }

    /// The imaginary play so far.
    pub fn imaginary(&self) -> &Run {
        &self.imaginary
    }
}

impl Transducer for Simulator {
    fn step(&mut self, observed: &Run) -> Vec<String> {
        for m in observed.0.iter().skip(self.seen) {
            self.translation.observe_real(&m.mv);
            if m.player == Player::Bot {
                for im in self.translation.env_to_premise(&m.mv) {
                    self.imaginary.push(Labmove::bot(im));
                }
            }
        }
        self.seen = observed.len();
        let mut out = Vec::new();
        for _ in 0..POLL_GUARD {
            let block = self.inner.step(&self.imaginary);
            if block.is_empty() {
                break;
            }
            for mv in block {
                for r in self.translation.premise_to_real(&mv) {
                    self.translation.observe_real(&r);
                    out.push(r);
                }
                self.imaginary.push(Labmove::top(mv));
            }
            if !out.is_empty() {
                break;
            }
        }
        out
    }

    fn box_clone(&self) -> Box<dyn Transducer> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Scripted;

    fn c(s: &str) -> Cirquent {
        Cirquent::parse(s).unwrap()
    }

    fn tr(app: RuleApp, concl: &Cirquent) -> Translation {
        let prem = crate::calculus::premise_of(concl, &app).unwrap();
        Translation::for_rule(&app, &prem, concl).unwrap()
    }

    #[test]
    fn contraction_translation() {
        let concl = c("{ oformulas: [?F, G]; under: [[1, 2]]; over: [[1, 2]] }");
        let t = tr(RuleApp::Contraction { oformula: 1 }, &concl);
        assert_eq!(t.premise_to_real("1;0.10.m"), ["1;0.010.m"]);
        assert_eq!(t.premise_to_real("2;.1.m"), ["1;.11.m"]);
        assert_eq!(t.premise_to_real("3;.m"), ["2;.m"]);
        assert_eq!(t.env_to_premise("1;0..m"), ["1;0..m", "2;0..m"]);
        assert_eq!(t.env_to_premise("1;.10.m"), ["2;.0.m"]);
        assert_eq!(t.env_to_premise("2;1.m"), ["3;1.m"]);
        assert!(t.env_to_premise("1;.m").is_empty());
    }

    #[test]
    fn over_duplication_translation() {
        let concl = c("{ oformulas: [F, G]; under: [[1, 2]]; over: [[1, 2], [1, 2]] }");
        let t = tr(RuleApp::OverDuplication { overgroup: 1 }, &concl);
        assert_eq!(t.premise_to_real("1;01.m"), ["1;0,1.m"]);
        assert_eq!(t.env_to_premise("2;000,1.m"), ["2;01000.m", "2;01010.m"]);
        assert_eq!(t.env_to_premise("2;,1.m"), ["2;01.m", "2;11.m"]);
    }

    #[test]
    fn corec_zero_picks_long_enough_prefix() {
        let concl = c("{ oformulas: [?F, G]; under: [[1, 2]]; over: [[1, 2]] }");
        let t = tr(RuleApp::CorecIntro { oformula: 1, overgroups: vec![] }, &concl);
        assert_eq!(t.premise_to_real("1;.m"), ["1;..m"]);
        let mut t = t;
        for mv in ["1;.000.q", "1;.1.q", "1;1.0000.q", "2;1.0000.q"] {
            t.observe_real(mv);
        }
        assert_eq!(t.premise_to_real("1;.m"), ["1;.0000.m"]);
        assert_eq!(t.env_to_premise("1;.00.q"), ["1;.q"]);
        assert!(t.env_to_premise("1;.01.q").is_empty());
    }

    #[test]
    fn corec_fuse_translation() {
        let concl = c("{ oformulas: [?F, G]; under: [[1, 2]]; over: [[2], [2], [1, 2]] }");
        let t = tr(RuleApp::CorecIntro { oformula: 1, overgroups: vec![1, 2] }, &concl);
        assert_eq!(t.premise_to_real("1;0,1,.m"), ["1;,,.01.m"]);
        assert_eq!(t.premise_to_real("1;,1,.m"), ["1;,,.01.m", "1;,,.11.m"]);
        assert_eq!(t.env_to_premise("1;,,1.0110.m"), ["1;01,10,1.m"]);
    }

    #[test]
    fn rec_intro_translation() {
        let concl = c("{ oformulas: [H, !G]; under: [[1, 2]]; over: [[1, 2]] }");
        let t = tr(RuleApp::RecIntro { oformula: 2, position: 1 }, &concl);
        assert_eq!(t.premise_to_real("2;01,1.m"), ["2;1.01.m"]);
        assert_eq!(t.premise_to_real("1;,1.m"), ["1;1.m"]);
        assert_eq!(t.env_to_premise("2;1..m"), ["2;,1.m"]);
        assert_eq!(t.env_to_premise("1;0.m"), ["1;,0.m"]);
    }

    #[test]
    fn merging_translation_cases() {
        let concl = c("{ oformulas: [A, B, C, D]; under: [[1, 2, 3, 4]]; over: [[1, 2, 3], [4]] }");
        let t = tr(
            RuleApp::Merging {
                overgroup: 1,
                left: vec![1, 2],
                right: vec![2, 3],
            },
            &concl,
        );
        assert_eq!(t.env_to_premise("1;01,.m"), ["1;01,,.m"]);
        assert_eq!(t.env_to_premise("3;01,.m"), ["3;,01,.m"]);
        assert_eq!(t.env_to_premise("2;0110,.m"), ["2;01,10,.m"]);
        assert_eq!(t.env_to_premise("4;,1.m"), ["4;,,1.m"]);
        assert_eq!(t.premise_to_real("2;0,1,.m"), ["2;01,.m"]);
        assert_eq!(t.premise_to_real("2;,1,.m"), ["2;01,.m", "2;11,.m"]);
        assert_eq!(t.premise_to_real("1;0,,.m"), ["1;0,.m"]);
    }

    #[test]
    fn weakening_with_deletion() {
        let concl = c("{ oformulas: [A, B, C]; under: [[1, 2, 3]]; over: [[1, 3], [2]] }");
        let t = tr(RuleApp::Weakening { undergroup: 1, oformula: 2 }, &concl);
        assert!(t.env_to_premise("2;,0.m").is_empty());
        assert_eq!(t.env_to_premise("3;1,.m"), ["2;1.m"]);
        assert_eq!(t.premise_to_real("2;1.m"), ["3;1,.m"]);
        assert_eq!(t.premise_to_real("1;.m"), ["1;,.m"]);
    }

    #[test]
    fn simulator_repolls_through_dropped_moves() {
        let inner = Scripted::new(vec![vec!["1.a".into()], vec!["0.b".into()]]);
        let mut sim = Simulator::new(Box::new(inner), Translation::BrecToPlain);
        assert_eq!(sim.step(&Run::new()), ["b"]);
        assert_eq!(sim.imaginary().len(), 2);
    }
}
