//! Playing strategies against environments, plus brute-force oracles.
//!
//! The machine is a [`Transducer`] that the harness polls after every
//! environment block. An environment that never moves again and a machine
//! whose block is empty end the play.

// Machines are passed as `&Box<dyn Transducer>` because rollouts clone them.
#![allow(clippy::borrowed_box)]

mod corpus;
pub mod library;
pub mod moves;

pub use corpus::{run_corpus, CaseReport, CorpusOptions, CorpusReport, Expectation};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cirquent::{Cirquent, CirquentGame, EvalError};
use crate::formula::Formula;
use crate::game::{Game, Interp, InterpError, Labmove, Player, Run};
use crate::strategy::Transducer;

/// Longest thread or slot address sampled by random environments.
pub const SAMPLE_ADDRESS_LEN: usize = 4;
/// Candidates tried per environment move before giving up.
const SAMPLE_TRIES: usize = 24;
/// Candidates examined per level by the spoiler.
const SPOILER_WIDTH: usize = 6;
/// Bound on explored leaves in [`exhaustive_env_check`].
pub const LEAF_CAP: usize = 2_000_000;
/// Bound on visited positions in [`winnability_oracle`].
pub const ORACLE_CAP: usize = 2_000_000;
/// Bound on machine moves while waiting for quiescence in exhaustive search.
const SETTLE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("{what} exceeded the cap of {cap}")]
    Cap { what: &'static str, cap: usize },
    #[error("{0}")]
    Corpus(String),
}

impl HarnessError {
    pub fn is_cap(&self) -> bool {
        matches!(self, HarnessError::Cap { .. } | HarnessError::Eval(EvalError::CapExceeded { .. }))
    }
}

/// The game being played: a formula's game or a cirquent's game.
#[derive(Clone)]
pub enum Arena {
    Formula(Game),
    Cirquent(CirquentGame),
}

impl Arena {
    pub fn formula(f: &Formula, interp: &Interp) -> Result<Arena, HarnessError> {
        Ok(Arena::Formula(Game::from_formula(f, interp)?))
    }

    pub fn cirquent(c: &Cirquent, interp: &Interp) -> Result<Arena, HarnessError> {
        Ok(Arena::Cirquent(CirquentGame::new(c, interp)?))
    }

    pub fn legal(&self, r: &Run) -> Result<bool, EvalError> {
        match self {
            Arena::Formula(g) => Ok(g.legal(r)),
            Arena::Cirquent(c) => c.legal(r),
        }
    }

    pub fn first_offender(&self, r: &Run) -> Result<Option<Player>, EvalError> {
        match self {
            Arena::Formula(g) => Ok(g.first_offender(r)),
            Arena::Cirquent(c) => c.first_offender(r),
        }
    }

    pub fn winner(&self, r: &Run) -> Result<Player, EvalError> {
        match self {
            Arena::Formula(g) => Ok(g.winner(r)),
            Arena::Cirquent(c) => c.winner(r),
        }
    }

    /// Ranking of a run from ⊥'s point of view: lower is better for ⊥.
    fn score(&self, r: &Run) -> Result<(bool, usize), EvalError> {
        let top = self.winner(r)? == Player::Top;
        let margin = match (self.first_offender(r)?, self) {
            (Some(_), _) => 0,
            (None, Arena::Formula(g)) => g.margin(r),
            (None, Arena::Cirquent(c)) => c.margin(r)?,
        };
        Ok((top, margin))
    }

    pub fn sample(&self, p: Player, max_len: usize, rng: &mut impl Rng) -> Option<String> {
        match self {
            Arena::Formula(g) => moves::sample(g, p, max_len, rng),
            Arena::Cirquent(c) => moves::sample_cirquent(c, p, max_len, rng),
        }
    }

    pub fn enumerate(&self, p: Player, max_len: usize) -> Vec<String> {
        match self {
            Arena::Formula(g) => moves::enumerate(g, p, max_len),
            Arena::Cirquent(c) => moves::enumerate_cirquent(c, p, max_len),
        }
    }
}

/// How the environment behaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "env", rename_all = "snake_case")]
pub enum EnvPolicy {
    /// Random legal moves, occasionally a junk move, stopping at random.
    Random { seed: u64, move_budget: usize },
    /// Block `i` is played at the environment's `i`'th turn.
    Scripted { blocks: Vec<Vec<String>> },
    /// Bounded lookahead over sampled moves, minimizing ⊤'s prospects.
    Spoiler { depth: usize, move_budget: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayReport {
    pub run: Run,
    pub verdict: Player,
    pub offender: Option<Player>,
    /// Number of times the machine was polled.
    pub steps: usize,
    /// The labmove budget ran out while the machine was still moving.
    pub inconclusive: bool,
}

impl PlayReport {
    /// A conclusive ⊤ win.
    pub fn top_won(&self) -> bool {
        self.verdict == Player::Top && !self.inconclusive
    }
}

/// Polls `t` until it returns an empty block and reports how many polls
/// that took, or `None` if it would take `run` beyond `limit` labmoves.
pub fn settle(t: &mut Box<dyn Transducer>, run: &mut Run, limit: usize) -> Option<usize> {
    let mut polls = 0;
    loop {
        polls += 1;
        let block = t.step(run);
        if block.is_empty() {
            return Some(polls);
        }
        for mv in block {
            if run.len() >= limit {
                return None;
            }
            run.push(Labmove::top(mv));
        }
    }
}

/// The position after an environment block and the machine's full answer.
struct Prepared {
    run: Run,
    machine: Box<dyn Transducer>,
    polls: usize,
}

/// Plays `block` and lets the machine answer, if everything fits in `budget`.
fn prepare(t: &Box<dyn Transducer>, run: &Run, block: &[String], budget: usize) -> Option<Prepared> {
    let mut r = run.clone();
    for mv in block {
        r.push(Labmove::bot(mv.clone()));
    }
    if r.len() > budget {
        return None;
    }
    let mut machine = t.clone();
    let polls = settle(&mut machine, &mut r, budget)?;
    Some(Prepared { run: r, machine, polls })
}

enum Turn {
    /// Nothing now; with `done` set, nothing ever again.
    Pass { done: bool },
    Moves(Vec<String>),
    Prepared(Prepared),
}

/// Address length for sampled moves: each extra bit is half as likely.
fn address_len(rng: &mut ChaCha8Rng) -> usize {
    let mut len = 0;
    while len < SAMPLE_ADDRESS_LEN && rng.gen_bool(0.5) {
        len += 1;
    }
    len
}

struct Env<'a> {
    policy: &'a EnvPolicy,
    rng: ChaCha8Rng,
    moved: usize,
    turn: usize,
}

impl<'a> Env<'a> {
    fn new(policy: &'a EnvPolicy) -> Self {
        let seed = match policy {
            EnvPolicy::Random { seed, .. } | EnvPolicy::Spoiler { seed, .. } => *seed,
            EnvPolicy::Scripted { .. } => 0,
        };
        Env {
            policy,
            rng: ChaCha8Rng::seed_from_u64(seed),
            moved: 0,
            turn: 0,
        }
    }

    /// Scripted environments act between any two polls; the others wait
    /// for the machine to fall silent.
    fn waits_for_quiescence(&self) -> bool {
        !matches!(self.policy, EnvPolicy::Scripted { .. })
    }

    fn sample(&mut self, arena: &Arena) -> Option<String> {
        let len = address_len(&mut self.rng);
        arena.sample(Player::Bot, len, &mut self.rng)
    }

    fn next(&mut self, arena: &Arena, run: &Run, t: &Box<dyn Transducer>, budget: usize) -> Result<Turn, HarnessError> {
        self.turn += 1;
        match self.policy {
            EnvPolicy::Scripted { blocks } => {
                let i = self.turn - 1;
                if blocks.iter().skip(i).all(Vec::is_empty) {
                    return Ok(Turn::Pass { done: true });
                }
                Ok(Turn::Moves(blocks[i].clone()))
            }
            EnvPolicy::Random { move_budget, .. } => {
                if self.moved >= *move_budget || self.rng.gen_ratio(1, 16) {
                    return Ok(Turn::Pass { done: true });
                }
                let size = [1, 1, 1, 2, 2, 3][self.rng.gen_range(0..6)].min(move_budget - self.moved);
                for _ in 0..SAMPLE_TRIES {
                    let mut block = Vec::with_capacity(size);
                    let mut r = run.clone();
                    for _ in 0..size {
                        let mv = if self.rng.gen_ratio(1, 32) {
                            moves::JUNK.to_string()
                        } else {
                            match self.sample(arena) {
                                Some(mv) => mv,
                                None => return Ok(Turn::Pass { done: true }),
                            }
                        };
                        r.push(Labmove::bot(mv.clone()));
                        block.push(mv);
                    }
                    let junk = block.iter().any(|m| m == moves::JUNK);
                    if !junk && !arena.legal(&r)? {
                        continue;
                    }
                    if let Some(p) = prepare(t, run, &block, budget) {
                        self.moved += block.len();
                        return Ok(Turn::Prepared(p));
                    }
                }
                Ok(Turn::Pass { done: true })
            }
            EnvPolicy::Spoiler { depth, move_budget, .. } => {
                if self.moved >= *move_budget {
                    return Ok(Turn::Pass { done: true });
                }
                let (_, best) = spoil(arena, run, t, *depth, budget, &mut self.rng)?;
                Ok(match best {
                    Some(p) => {
                        self.moved += 1;
                        Turn::Prepared(p)
                    }
                    None => Turn::Pass { done: true },
                })
            }
        }
    }
}

/// Up to `width` distinct legal environment moves that leave room for the
/// machine's answer, each with the position after that answer.
fn spoiler_candidates(
    arena: &Arena,
    run: &Run,
    t: &Box<dyn Transducer>,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(String, Prepared)>, HarnessError> {
    let mut out: Vec<(String, Prepared)> = Vec::new();
    for _ in 0..SAMPLE_TRIES {
        if out.len() >= SPOILER_WIDTH {
            break;
        }
        let len = address_len(rng);
        let Some(mv) = arena.sample(Player::Bot, len, rng) else {
            break;
        };
        if out.iter().any(|(m, _)| *m == mv) || !arena.legal(&run.extended(Labmove::bot(mv.clone())))? {
            continue;
        }
        if let Some(p) = prepare(t, run, std::slice::from_ref(&mv), budget) {
            out.push((mv, p));
        }
    }
    Ok(out)
}

/// Best score ⊥ can force within `depth` more moves (stopping included),
/// and the position after the first move achieving it. Ties prefer moving.
fn spoil(
    arena: &Arena,
    run: &Run,
    t: &Box<dyn Transducer>,
    depth: usize,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<((bool, usize), Option<Prepared>), HarnessError> {
    let stop = arena.score(run)?;
    if depth == 0 {
        return Ok((stop, None));
    }
    let mut best: Option<((bool, usize), Prepared)> = None;
    for (_, p) in spoiler_candidates(arena, run, t, budget, rng)? {
        let (s, _) = spoil(arena, &p.run, &p.machine, depth - 1, budget, rng)?;
        if best.as_ref().is_none_or(|(b, _)| s < *b) {
            best = Some((s, p));
        }
    }
    Ok(match best {
        Some((s, p)) if s <= stop => (s, Some(p)),
        _ => (stop, None),
    })
}

/// Plays `t` against `env` on `arena` for at most `budget` labmoves.
pub fn play(mut t: Box<dyn Transducer>, env: &EnvPolicy, arena: &Arena, budget: usize) -> Result<PlayReport, HarnessError> {
    let mut run = Run::new();
    let mut env = Env::new(env);
    let mut steps = 0;
    let mut inconclusive = false;
    let mut env_done = false;
    loop {
        steps += 1;
        let block = t.step(&run);
        let busy = !block.is_empty();
        for mv in block {
            if run.len() >= budget {
                inconclusive = true;
                break;
            }
            run.push(Labmove::top(mv));
        }
        if inconclusive {
            break;
        }
        if env_done || (busy && env.waits_for_quiescence()) {
            if busy {
                continue;
            }
            break;
        }
        match env.next(arena, &run, &t, budget)? {
            Turn::Pass { done } => {
                env_done = done;
                if done && !busy {
                    break;
                }
            }
            Turn::Moves(moves) => {
                for mv in moves {
                    if run.len() < budget {
                        run.push(Labmove::bot(mv));
                    }
                }
            }
            Turn::Prepared(p) => {
                run = p.run;
                t = p.machine;
                steps += p.polls;
            }
        }
    }
    Ok(PlayReport {
        verdict: arena.winner(&run)?,
        offender: arena.first_offender(&run)?,
        run,
        steps,
        inconclusive,
    })
}

/// Plays many rollouts of fresh copies of `t` in parallel.
pub fn rollouts(t: &Box<dyn Transducer>, arena: &Arena, envs: &[EnvPolicy], budget: usize) -> Result<Vec<PlayReport>, HarnessError> {
    envs.par_iter().map(|env| play(t.clone(), env, arena, budget)).collect()
}

/// Outcome of an exhaustive search over environment behaviours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub verdict: Player,
    /// A ⊥-won run, if one was found.
    pub counterexample: Option<Run>,
    pub leaves: usize,
}

/// Explores every environment behaviour with at most `depth` moves drawn
/// from the legal moves with addresses of length at most `max_len`; the
/// machine is polled to quiescence after each move. ⊤ iff every leaf run
/// is ⊤-won.
pub fn exhaustive_env_check(
    t: &Box<dyn Transducer>,
    arena: &Arena,
    depth: usize,
    max_len: usize,
) -> Result<ExhaustiveReport, HarnessError> {
    let alphabet = arena.enumerate(Player::Bot, max_len);
    let mut report = ExhaustiveReport {
        verdict: Player::Top,
        counterexample: None,
        leaves: 0,
    };
    let mut t = t.clone();
    let mut run = Run::new();
    if settle(&mut t, &mut run, SETTLE_CAP).is_none() {
        return Err(HarnessError::Cap {
            what: "machine moves",
            cap: SETTLE_CAP,
        });
    }
    explore(&t, &run, depth, arena, &alphabet, &mut report)?;
    Ok(report)
}

fn explore(
    t: &Box<dyn Transducer>,
    run: &Run,
    depth: usize,
    arena: &Arena,
    alphabet: &[String],
    report: &mut ExhaustiveReport,
) -> Result<(), HarnessError> {
    report.leaves += 1;
    if report.leaves > LEAF_CAP {
        return Err(HarnessError::Cap {
            what: "explored leaves",
            cap: LEAF_CAP,
        });
    }
    if arena.winner(run)? == Player::Bot {
        report.verdict = Player::Bot;
        report.counterexample = Some(run.clone());
        return Ok(());
    }
    if depth == 0 {
        return Ok(());
    }
    for mv in alphabet {
        let mut r = run.extended(Labmove::bot(mv.clone()));
        if !arena.legal(&r)? {
            continue;
        }
        let mut probe = t.clone();
        let limit = r.len() + SETTLE_CAP;
        if settle(&mut probe, &mut r, limit).is_none() {
            return Err(HarnessError::Cap {
                what: "machine moves",
                cap: SETTLE_CAP,
            });
        }
        explore(&probe, &r, depth - 1, arena, alphabet, report)?;
        if report.verdict == Player::Bot {
            return Ok(());
        }
    }
    Ok(())
}

/// Whether ⊤ can force a win when at most `bound` moves are made in total.
/// In each round ⊤ may move or pass, then ⊥ may move or pass; the play
/// ends when both pass. Moves come from the legal moves with addresses of
/// length at most `max_len`.
pub fn winnability_oracle(arena: &Arena, bound: usize, max_len: usize) -> Result<bool, HarnessError> {
    let top = arena.enumerate(Player::Top, max_len);
    let bot = arena.enumerate(Player::Bot, max_len);
    let mut memo = HashMap::new();
    top_wins(arena, &Run::new(), bound, &top, &bot, &mut memo)
}

fn legal_options(arena: &Arena, run: &Run, p: Player, alphabet: &[String], left: usize) -> Result<Vec<Run>, HarnessError> {
    let mut out = vec![run.clone()];
    if left == 0 {
        return Ok(out);
    }
    for mv in alphabet {
        let r = run.extended(Labmove::new(p, mv.clone()));
        if arena.legal(&r)? {
            out.push(r);
        }
    }
    Ok(out)
}

fn top_wins(
    arena: &Arena,
    run: &Run,
    left: usize,
    top: &[String],
    bot: &[String],
    memo: &mut HashMap<(Run, usize), bool>,
) -> Result<bool, HarnessError> {
    if let Some(&v) = memo.get(&(run.clone(), left)) {
        return Ok(v);
    }
    if memo.len() > ORACLE_CAP {
        return Err(HarnessError::Cap {
            what: "oracle positions",
            cap: ORACLE_CAP,
        });
    }
    let mut result = false;
    for r1 in legal_options(arena, run, Player::Top, top, left)? {
        let left1 = left - (r1.len() - run.len());
        let mut all = true;
        for r2 in legal_options(arena, &r1, Player::Bot, bot, left1)? {
            let won = if r2.len() == run.len() {
                arena.winner(run)? == Player::Top
            } else {
                top_wins(arena, &r2, left1 - (r2.len() - r1.len()), top, bot, memo)?
            };
            if !won {
                all = false;
                break;
            }
        }
        if all {
            result = true;
            break;
        }
    }
    memo.insert((run.clone(), left), result);
    Ok(result)
}
