//! Delays and a bounded check that an atom game is static.

use super::{AtomGame, Game, Labmove, Player, Run};

/// Is `upsilon` a `p`-delay of `gamma`?
///
/// Both players must make the same moves in the same order, and every
/// `p`-move of `upsilon` must be preceded by at least as many opponent moves
/// as it was in `gamma`.
pub fn is_delay(gamma: &Run, upsilon: &Run, p: Player) -> bool {
    if gamma.len() != upsilon.len() {
        return false;
    }
    for q in [Player::Top, Player::Bot] {
        if !gamma.moves_of(q).eq(upsilon.moves_of(q)) {
            return false;
        }
    }
    let lags = |r: &Run| -> Vec<usize> {
        let mut seen = 0;
        let mut out = Vec::new();
        for m in r {
            if m.player == p {
                out.push(seen);
            } else {
                seen += 1;
            }
        }
        out
    };
    lags(gamma).iter().zip(lags(upsilon)).all(|(g, u)| u >= *g)
}

/// All `p`-delays of `gamma`, including `gamma` itself.
pub fn delays_of(gamma: &Run, p: Player) -> Vec<Run> {
    let mine: Vec<&Labmove> = gamma.iter().filter(|m| m.player == p).collect();
    let theirs: Vec<&Labmove> = gamma.iter().filter(|m| m.player != p).collect();
    let mut min_lag = Vec::new();
    let mut seen = 0;
    for m in gamma {
        if m.player == p {
            min_lag.push(seen);
        } else {
            seen += 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(gamma.len());
    fn rec<'a>(
        i: usize,
        j: usize,
        mine: &[&'a Labmove],
        theirs: &[&'a Labmove],
        min_lag: &[usize],
        cur: &mut Vec<&'a Labmove>,
        out: &mut Vec<Run>,
    ) {
        if i == mine.len() && j == theirs.len() {
            out.push(cur.iter().map(|m| (*m).clone()).collect());
            return;
        }
        if i < mine.len() && j >= min_lag[i] {
            cur.push(mine[i]);
            rec(i + 1, j, mine, theirs, min_lag, cur, out);
            cur.pop();
        }
        if j < theirs.len() {
            cur.push(theirs[j]);
            rec(i, j + 1, mine, theirs, min_lag, cur, out);
            cur.pop();
        }
    }
    rec(0, 0, &mine, &theirs, &min_lag, &mut cur, &mut out);
    out
}

/// A pair of runs showing that a game is not static.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticViolation {
    pub gamma: Run,
    pub upsilon: Run,
    /// `upsilon` is a `player`-delay of `gamma`.
    pub player: Player,
    /// True if the violation is about legality rather than winning.
    pub legality: bool,
}

/// Moves that label no edge of any shipped tree; used to probe illegal play.
const JUNK: &str = "junk_";

fn candidate_runs(g: &AtomGame, maxlen: usize, extra: usize) -> Vec<Run> {
    let mut alphabet = g.labmoves();
    alphabet.push(Labmove::top(JUNK));
    alphabet.push(Labmove::bot(JUNK));
    let mut legal = Vec::new();
    fn walk(n: &super::GameNode, cur: &mut Run, out: &mut Vec<Run>) {
        out.push(cur.clone());
        for (m, c) in &n.children {
            cur.push(m.clone());
            walk(c, cur, out);
            cur.0.pop();
        }
    }
    walk(&g.root, &mut Run::new(), &mut legal);
    let mut out = Vec::new();
    let mut frontier: Vec<Run> = legal.into_iter().filter(|r| r.len() <= maxlen).collect();
    for round in 0..=extra {
        out.extend(frontier.iter().cloned());
        if round == extra {
            break;
        }
        frontier = frontier
            .iter()
            .filter(|r| r.len() < maxlen)
            .flat_map(|r| alphabet.iter().map(move |m| r.extended(m.clone())))
            .collect();
    }
    out.sort();
    out.dedup();
    out
}

/// Searches for a delay pair violating staticness among runs of length at
/// most `maxlen`: every legal run of the tree plus up to two further
/// arbitrary moves (tree labmoves and a junk move for each player).
pub fn static_violation(g: &AtomGame, maxlen: usize) -> Option<StaticViolation> {
    let game = Game::atom(g.clone());
    for gamma in candidate_runs(g, maxlen, 2) {
        let offender = game.first_offender(&gamma);
        let won_by = game.winner(&gamma);
        for p in [Player::Top, Player::Bot] {
            for upsilon in delays_of(&gamma, p) {
                if upsilon == gamma {
                    continue;
                }
                if offender != Some(p) && game.first_offender(&upsilon) == Some(p) {
                    return Some(StaticViolation {
                        gamma,
                        upsilon,
                        player: p,
                        legality: true,
                    });
                }
                if won_by == p && game.winner(&upsilon) != p {
                    return Some(StaticViolation {
                        gamma,
                        upsilon,
                        player: p,
                        legality: false,
                    });
                }
            }
        }
    }
    None
}

pub fn is_static_bounded(g: &AtomGame, maxlen: usize) -> bool {
    static_violation(g, maxlen).is_none()
}
