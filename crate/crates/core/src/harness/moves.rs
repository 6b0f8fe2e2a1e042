//! Finite move alphabets for environments and oracles.

use rand::Rng;

use crate::bitstring::Bitstring;
use crate::cirquent::CirquentGame;
use crate::game::{Game, Player};

/// A move no game accepts, used to probe illegal play.
pub const JUNK: &str = "junk";

/// Whether `p` has any move anywhere in `g`.
pub fn has_moves(g: &Game, p: Player) -> bool {
    match g {
        Game::Atom(a) => !a.moves_for(p).is_empty(),
        Game::Neg(g) => has_moves(g, p.opposite()),
        Game::And(a, b) | Game::Or(a, b) => has_moves(a, p) || has_moves(b, p),
        Game::Brec(a) | Game::Cobrec(a) => has_moves(a, p),
    }
}

/// Every move of `p` in `g` whose thread addresses have length at most `max_len`.
pub fn enumerate(g: &Game, p: Player, max_len: usize) -> Vec<String> {
    match g {
        Game::Atom(a) => a.moves_for(p),
        Game::Neg(g) => enumerate(g, p.opposite(), max_len),
        Game::And(a, b) | Game::Or(a, b) => {
            let mut out: Vec<String> = enumerate(a, p, max_len).into_iter().map(|m| format!("0.{m}")).collect();
            out.extend(enumerate(b, p, max_len).into_iter().map(|m| format!("1.{m}")));
            out
        }
        Game::Brec(a) | Game::Cobrec(a) => {
            let inner = enumerate(a, p, max_len);
            Bitstring::all_up_to(max_len)
                .iter()
                .flat_map(|w| inner.iter().map(move |m| format!("{w}.{m}")))
                .collect()
        }
    }
}

fn random_bits(rng: &mut impl Rng, max_len: usize) -> Bitstring {
    let len = rng.gen_range(0..=max_len);
    Bitstring::from_bits((0..len).map(|_| rng.gen()).collect())
}

/// A random move of `p` in `g`, or `None` if `p` has no moves there.
pub fn sample(g: &Game, p: Player, max_len: usize, rng: &mut impl Rng) -> Option<String> {
    match g {
        Game::Atom(a) => {
            let ms = a.moves_for(p);
            (!ms.is_empty()).then(|| ms[rng.gen_range(0..ms.len())].clone())
        }
        Game::Neg(g) => sample(g, p.opposite(), max_len, rng),
        Game::And(a, b) | Game::Or(a, b) => {
            let sides: Vec<(&str, &Game)> = [("0", &**a), ("1", &**b)]
                .into_iter()
                .filter(|(_, g)| has_moves(g, p))
                .collect();
            if sides.is_empty() {
                return None;
            }
            let (tag, g) = sides[rng.gen_range(0..sides.len())];
            sample(g, p, max_len, rng).map(|m| format!("{tag}.{m}"))
        }
        Game::Brec(a) | Game::Cobrec(a) => {
            let w = random_bits(rng, max_len);
            sample(a, p, max_len, rng).map(|m| format!("{w}.{m}"))
        }
    }
}

fn cirquent_prefixes(c: &CirquentGame, a: usize, max_len: usize) -> Vec<String> {
    let n = c.cirquent.n();
    let slots = c.cirquent.slots_of(a);
    let choices = Bitstring::all_up_to(max_len);
    let mut prefixes = vec![vec![Bitstring::empty(); n]];
    for &j in &slots {
        prefixes = prefixes
            .into_iter()
            .flat_map(|us| {
                choices.iter().map(move |w| {
                    let mut us = us.clone();
                    us[j] = w.clone();
                    us
                })
            })
            .collect();
    }
    prefixes
        .into_iter()
        .map(|us| {
            let body: Vec<String> = us.iter().map(|u| u.to_string()).collect();
            format!("{a};{}.", body.join(","))
        })
        .collect()
}

/// Every move of `p` in the cirquent game `c`, with slot and thread
/// addresses of length at most `max_len`.
pub fn enumerate_cirquent(c: &CirquentGame, p: Player, max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    for a in 1..=c.cirquent.k() {
        let inner = enumerate(c.game(a), p, max_len);
        if inner.is_empty() {
            continue;
        }
        for pre in cirquent_prefixes(c, a, max_len) {
            out.extend(inner.iter().map(|m| format!("{pre}{m}")));
        }
    }
    out
}

/// A random move of `p` in the cirquent game `c`.
pub fn sample_cirquent(c: &CirquentGame, p: Player, max_len: usize, rng: &mut impl Rng) -> Option<String> {
    let live: Vec<usize> = (1..=c.cirquent.k()).filter(|&a| has_moves(c.game(a), p)).collect();
    if live.is_empty() {
        return None;
    }
    let a = live[rng.gen_range(0..live.len())];
    let slots = c.cirquent.slots_of(a);
    let us: Vec<String> = (0..c.cirquent.n())
        .map(|j| {
            if slots.contains(&j) {
                random_bits(rng, max_len).to_string()
            } else {
                String::new()
            }
        })
        .collect();
    let inner = sample(c.game(a), p, max_len, rng)?;
    Some(format!("{a};{}.{inner}", us.join(",")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::game::{AtomGame, GameNode, Interp, Labmove};
    use rand::SeedableRng;
    use std::sync::Arc;

    fn claim() -> Arc<AtomGame> {
        let root = GameNode::leaf(Player::Bot).with(Labmove::top("m"), GameNode::leaf(Player::Top));
        Arc::new(AtomGame::new("claim", root).unwrap())
    }

    #[test]
    fn enumeration_follows_polarity() {
        let g = Game::from_formula(&parse_formula("~P | !P").unwrap(), &Interp::uniform(claim())).unwrap();
        let bot = enumerate(&g, Player::Bot, 1);
        assert_eq!(bot, vec!["0.m"]);
        let top = enumerate(&g, Player::Top, 1);
        assert_eq!(top, vec!["1..m", "1.0.m", "1.1.m"]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            assert_eq!(sample(&g, Player::Bot, 3, &mut rng).as_deref(), Some("0.m"));
        }
    }
}
