//! Cirquents and their game semantics.
//!
//! A cirquent is a sequence of oformulas together with a sequence of
//! undergroups and a sequence of overgroups, each group a nonempty set of
//! oformula positions (1-based). Groups are identified by position, so two
//! groups with equal contents are still different groups.
//!
//! A move of a cirquent with `n` overgroups has the shape `a;u1,…,un.α`: the
//! oformula index, one bitstring per overgroup, and a move of the oformula's
//! game. Bitstrings of overgroups not containing oformula `a` must be empty.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::{class_vectors, enumerate_thread_classes, Bitstring, ThreadRep};
use crate::formula::Formula;
use crate::game::{Game, Interp, InterpError, Labmove, Player, Run};
use crate::syntax::{Cursor, SyntaxError};

/// Default cap on the number of thread-class vectors examined per check.
pub const DEFAULT_VECTOR_CAP: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cirquent {
    pub oformulas: Vec<Formula>,
    pub under: Vec<Vec<usize>>,
    pub over: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CirquentError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("a cirquent needs at least one oformula")]
    NoOformulas,
    #[error("a cirquent needs at least one {0}")]
    NoGroups(GroupKind),
    #[error("{kind} #{index} is empty")]
    EmptyGroup { kind: GroupKind, index: usize },
    #[error("{kind} #{index} mentions oformula #{member}, but there are only {count}")]
    OutOfRange {
        kind: GroupKind,
        index: usize,
        member: usize,
        count: usize,
    },
    #[error("oformula #{oformula} belongs to no {kind}")]
    Uncovered { oformula: usize, kind: GroupKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Undergroup,
    Overgroup,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::Undergroup => "undergroup",
            GroupKind::Overgroup => "overgroup",
        })
    }
}

fn normalize(groups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    groups
        .into_iter()
        .map(|mut g| {
            g.sort_unstable();
            g.dedup();
            g
        })
        .collect()
}

impl Cirquent {
    /// Builds and validates a cirquent. Group members are sorted and deduplicated.
    pub fn new(oformulas: Vec<Formula>, under: Vec<Vec<usize>>, over: Vec<Vec<usize>>) -> Result<Self, CirquentError> {
        let c = Cirquent {
            oformulas,
            under: normalize(under),
            over: normalize(over),
        };
        c.validate()?;
        Ok(c)
    }

    /// The one-oformula cirquent `(⟨F⟩, ⟨{1}⟩, ⟨{1}⟩)`.
    pub fn club(f: Formula) -> Self {
        Cirquent {
            oformulas: vec![f],
            under: vec![vec![1]],
            over: vec![vec![1]],
        }
    }

    /// The formula `F` if this is `F`'s one-oformula cirquent.
    pub fn as_club(&self) -> Option<&Formula> {
        (self.oformulas.len() == 1 && self.under == [vec![1]] && self.over == [vec![1]]).then(|| &self.oformulas[0])
    }

    pub fn validate(&self) -> Result<(), CirquentError> {
        let k = self.oformulas.len();
        if k == 0 {
            return Err(CirquentError::NoOformulas);
        }
        for (kind, groups) in [(GroupKind::Undergroup, &self.under), (GroupKind::Overgroup, &self.over)] {
            if groups.is_empty() {
                return Err(CirquentError::NoGroups(kind));
            }
            for (i, g) in groups.iter().enumerate() {
                if g.is_empty() {
                    return Err(CirquentError::EmptyGroup { kind, index: i + 1 });
                }
                if let Some(&member) = g.iter().find(|&&a| a == 0 || a > k) {
                    return Err(CirquentError::OutOfRange {
                        kind,
                        index: i + 1,
                        member,
                        count: k,
                    });
                }
            }
            for a in 1..=k {
                if !groups.iter().any(|g| g.contains(&a)) {
                    return Err(CirquentError::Uncovered { oformula: a, kind });
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.oformulas.len()
    }

    pub fn m(&self) -> usize {
        self.under.len()
    }

    pub fn n(&self) -> usize {
        self.over.len()
    }

    /// Formula of oformula `a` (1-based).
    pub fn formula(&self, a: usize) -> &Formula {
        &self.oformulas[a - 1]
    }

    /// 0-based indices of the overgroups containing oformula `a`.
    pub fn slots_of(&self, a: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.over[j].contains(&a)).collect()
    }

    /// 0-based indices of the undergroups containing oformula `a`.
    pub fn undergroups_of(&self, a: usize) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.under[i].contains(&a)).collect()
    }

    /// Parses `cirquent { ... }` or a bare `{ ... }` body.
    pub fn parse(text: &str) -> Result<Self, CirquentError> {
        let mut cur = Cursor::new(text);
        if cur.peek_char() != Some('{') {
            cur.keyword("cirquent")?;
        }
        let c = Cirquent::parse_body(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.err("trailing input after cirquent").into());
        }
        Ok(c)
    }

    pub(crate) fn parse_body(cur: &mut Cursor<'_>) -> Result<Self, CirquentError> {
        cur.expect('{')?;
        let (mut oformulas, mut under, mut over) = (None, None, None);
        while !cur.eat('}') {
            let key = cur.word()?;
            cur.expect(':')?;
            match key.as_str() {
                "oformulas" => oformulas = Some(cur.formula_list()?),
                "under" => under = Some(cur.group_list()?),
                "over" => over = Some(cur.group_list()?),
                other => return Err(cur.err(format!("unknown cirquent field `{other}`")).into()),
            }
            cur.eat(';');
        }
        let missing = |f: &str| cur.err(format!("cirquent is missing `{f}`"));
        Cirquent::new(
            oformulas.ok_or_else(|| missing("oformulas"))?,
            under.ok_or_else(|| missing("under"))?,
            over.ok_or_else(|| missing("over"))?,
        )
    }

    /// `{ oformulas: [...]; under: [...]; over: [...] }`
    pub fn body_text(&self) -> String {
        fn groups(gs: &[Vec<usize>]) -> String {
            let inner: Vec<String> = gs
                .iter()
                .map(|g| format!("[{}]", g.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            format!("[{}]", inner.join(", "))
        }
        let fs: Vec<String> = self.oformulas.iter().map(|f| f.to_string()).collect();
        format!(
            "{{ oformulas: [{}]; under: {}; over: {} }}",
            fs.join(", "),
            groups(&self.under),
            groups(&self.over)
        )
    }

    /// A plain-text picture: overgroups above, oformulas in the middle,
    /// undergroups below, with `•` marking membership.
    pub fn diagram(&self) -> String {
        let labels: Vec<String> = self
            .oformulas
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{}:{}", i + 1, f))
            .collect();
        let widths: Vec<usize> = labels.iter().map(|l| l.chars().count().max(3) + 2).collect();
        let row = |tag: &str, g: &[usize]| -> String {
            let mut s = format!("{tag:<4}");
            for (i, w) in widths.iter().enumerate() {
                let mark = if g.contains(&(i + 1)) { "•" } else { "·" };
                s.push_str(&format!("{mark:^w$}", w = *w));
            }
            s.trim_end().to_string()
        };
        let mut lines = Vec::new();
        for (j, g) in self.over.iter().enumerate() {
            lines.push(row(&format!("O{}", j + 1), g));
        }
        let mut mid = format!("{:<4}", "");
        for (l, w) in labels.iter().zip(&widths) {
            mid.push_str(&format!("{l:^w$}", w = *w));
        }
        lines.push(mid.trim_end().to_string());
        for (i, g) in self.under.iter().enumerate() {
            lines.push(row(&format!("U{}", i + 1), g));
        }
        lines.join("\n")
    }
}

impl fmt::Display for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cirquent {}", self.body_text())
    }
}

impl fmt::Debug for Cirquent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Cirquent {
    type Err = CirquentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cirquent::parse(s)
    }
}

pub fn parse_cirquent(text: &str) -> Result<Cirquent, CirquentError> {
    Cirquent::parse(text)
}

pub fn print_cirquent(c: &Cirquent) -> String {
    c.to_string()
}

/// A structured cirquent move `a;u1,…,un.α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CirquentMove {
    pub a: usize,
    pub us: Vec<Bitstring>,
    pub alpha: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("move {0:?} does not have the shape a;u1,...,un.alpha for n = {1}")]
    Shape(String, usize),
    #[error("move {mv:?} addresses oformula #{a}, but there are only {k}")]
    OformulaOutOfRange { mv: String, a: usize, k: usize },
    #[error("move {mv:?} uses a nonempty bitstring for overgroup #{slot}, which does not contain oformula #{a}")]
    Condition { mv: String, a: usize, slot: usize },
}

impl CirquentMove {
    pub fn new(a: usize, us: Vec<Bitstring>, alpha: impl Into<String>) -> Self {
        CirquentMove {
            a,
            us,
            alpha: alpha.into(),
        }
    }

    /// Parses the shape only, for a cirquent with `n` overgroups.
    pub fn parse_shape(s: &str, n: usize) -> Result<CirquentMove, MoveError> {
        let bad = || MoveError::Shape(s.to_string(), n);
        let (a, mut rest) = s.split_once(';').ok_or_else(bad)?;
        if a.is_empty() || !a.bytes().all(|b| b.is_ascii_digit()) || (a.len() > 1 && a.starts_with('0')) {
            return Err(bad());
        }
        let a: usize = a.parse().map_err(|_| bad())?;
        if a == 0 || n == 0 {
            return Err(bad());
        }
        let mut us = Vec::with_capacity(n);
        for j in 0..n {
            let term = if j + 1 == n { '.' } else { ',' };
            let (u, r) = Bitstring::split_prefix(rest, term).ok_or_else(bad)?;
            us.push(u);
            rest = r;
        }
        Ok(CirquentMove {
            a,
            us,
            alpha: rest.to_string(),
        })
    }

    /// Parses and checks the move against `c`: arity, oformula range, and
    /// empty bitstrings for overgroups not containing the oformula.
    pub fn parse(c: &Cirquent, s: &str) -> Result<CirquentMove, MoveError> {
        let m = CirquentMove::parse_shape(s, c.n())?;
        if m.a > c.k() {
            return Err(MoveError::OformulaOutOfRange {
                mv: s.to_string(),
                a: m.a,
                k: c.k(),
            });
        }
        for (j, u) in m.us.iter().enumerate() {
            if !u.is_empty() && !c.over[j].contains(&m.a) {
                return Err(MoveError::Condition {
                    mv: s.to_string(),
                    a: m.a,
                    slot: j + 1,
                });
            }
        }
        Ok(m)
    }
}

impl fmt::Display for CirquentMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.a)?;
        for (j, u) in self.us.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, ".{}", self.alpha)
    }
}

pub fn parse_cirquent_move(c: &Cirquent, s: &str) -> Result<CirquentMove, MoveError> {
    CirquentMove::parse(c, s)
}

/// `r^{≼a;x⃗}`: keep the moves of oformula `a` whose bitstrings are prefixes
/// of the corresponding threads, and strip the `a;u⃗.` part.
pub fn project_cirquent(r: &Run, c: &Cirquent, a: usize, xs: &[ThreadRep]) -> Run {
    let n = c.n();
    r.iter()
        .filter_map(|m| {
            let cm = CirquentMove::parse_shape(&m.mv, n).ok()?;
            (cm.a == a && cm.us.iter().zip(xs).all(|(u, x)| x.has_prefix(u))).then(|| Labmove::new(m.player, cm.alpha))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("{vectors} thread-class vectors exceed the cap of {cap}")]
    CapExceeded { vectors: usize, cap: usize },
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// A cirquent paired with the games of its oformulas.
#[derive(Clone)]
pub struct CirquentGame {
    pub cirquent: Cirquent,
    games: Vec<Game>,
    pub cap: usize,
}

impl CirquentGame {
    pub fn new(c: &Cirquent, interp: &Interp) -> Result<Self, EvalError> {
        let games = c
            .oformulas
            .iter()
            .map(|f| Game::from_formula(f, interp))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CirquentGame {
            cirquent: c.clone(),
            games,
            cap: DEFAULT_VECTOR_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn game(&self, a: usize) -> &Game {
        &self.games[a - 1]
    }

    fn parse_all(&self, r: &Run) -> Option<Vec<(Player, CirquentMove)>> {
        r.iter()
            .map(|m| CirquentMove::parse(&self.cirquent, &m.mv).ok().map(|cm| (m.player, cm)))
            .collect()
    }

    /// Class vectors over `slots` given the bitstrings used there by moves of
    /// the oformulas in `members`.
    fn vectors(&self, moves: &[(Player, CirquentMove)], members: &[usize], slots: &[usize]) -> Result<Vec<Vec<ThreadRep>>, EvalError> {
        let per_slot: Vec<Vec<ThreadRep>> = slots
            .iter()
            .map(|&j| {
                let used: BTreeSet<Bitstring> = moves
                    .iter()
                    .filter(|(_, m)| members.contains(&m.a))
                    .map(|(_, m)| m.us[j].clone())
                    .collect();
                enumerate_thread_classes(&used)
            })
            .collect();
        class_vectors(&per_slot, self.cap).map_err(|vectors| EvalError::CapExceeded { vectors, cap: self.cap })
    }

    fn project(moves: &[(Player, CirquentMove)], a: usize, slots: &[usize], xs: &[ThreadRep]) -> Run {
        moves
            .iter()
            .filter(|(_, m)| m.a == a && slots.iter().zip(xs).all(|(&j, x)| x.has_prefix(&m.us[j])))
            .map(|(p, m)| Labmove::new(*p, m.alpha.clone()))
            .collect()
    }

    pub fn legal(&self, r: &Run) -> Result<bool, EvalError> {
        let Some(moves) = self.parse_all(r) else {
            return Ok(false);
        };
        for a in 1..=self.cirquent.k() {
            if !moves.iter().any(|(_, m)| m.a == a) {
                continue;
            }
            let slots = self.cirquent.slots_of(a);
            for xs in self.vectors(&moves, &[a], &slots)? {
                if !self.game(a).legal(&Self::project(&moves, a, &slots, &xs)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn first_offender(&self, r: &Run) -> Result<Option<Player>, EvalError> {
        if self.legal(r)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (0, r.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.legal(&r.prefix(mid))? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some(r.0[hi - 1].player))
    }

    pub fn winner(&self, r: &Run) -> Result<Player, EvalError> {
        if let Some(p) = self.first_offender(r)? {
            return Ok(p.opposite());
        }
        let won = self.tally(r, true)?;
        Ok(if won > 0 { Player::Top } else { Player::Bot })
    }

    /// Number of ⊤-won (undergroup, oformula, thread vector) combinations on
    /// a legal run; a ranking aid for adversarial environments.
    pub fn margin(&self, r: &Run) -> Result<usize, EvalError> {
        self.tally(r, false)
    }

    /// With `decide` set, returns 1 if every undergroup is won and 0 otherwise.
    fn tally(&self, r: &Run, decide: bool) -> Result<usize, EvalError> {
        let moves = self.parse_all(r).unwrap_or_default();
        let mut memo: HashMap<(usize, Run), Player> = HashMap::new();
        let mut count = 0;
        for group in &self.cirquent.under {
            let slots: Vec<usize> = (0..self.cirquent.n())
                .filter(|&j| group.iter().any(|a| self.cirquent.over[j].contains(a)))
                .collect();
            for xs in self.vectors(&moves, group, &slots)? {
                let mut any = false;
                for &a in group {
                    let proj = Self::project(&moves, a, &slots, &xs);
                    let w = *memo
                        .entry((a, proj))
                        .or_insert_with_key(|(a, proj)| self.games[a - 1].winner_of_legal(proj));
                    if w == Player::Top {
                        any = true;
                        if decide {
                            break;
                        }
                        count += 1;
                    }
                }
                if decide && !any {
                    return Ok(0);
                }
            }
        }
        Ok(if decide { 1 } else { count })
    }
}

pub fn cirquent_legal(c: &Cirquent, interp: &Interp, r: &Run) -> Result<bool, EvalError> {
    CirquentGame::new(c, interp)?.legal(r)
}

pub fn cirquent_winner(c: &Cirquent, interp: &Interp, r: &Run) -> Result<Player, EvalError> {
    CirquentGame::new(c, interp)?.winner(r)
}
