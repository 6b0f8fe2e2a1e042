//! Finite atom games given as trees, libraries of them, and interpretations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{Labmove, Player, Run};
use crate::formula::Atom;

/// A position of an atom game: who wins if play stops here, and the legal
/// continuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameNode {
    pub winner: Player,
    pub children: Vec<(Labmove, GameNode)>,
}

impl GameNode {
    pub fn leaf(winner: Player) -> Self {
        GameNode {
            winner,
            children: Vec::new(),
        }
    }

    pub fn with(mut self, m: Labmove, child: GameNode) -> Self {
        self.children.push((m, child));
        self
    }

    pub fn child(&self, m: &Labmove) -> Option<&GameNode> {
        self.children.iter().find(|(e, _)| e == m).map(|(_, n)| n)
    }

    fn depth(&self) -> usize {
        self.children.iter().map(|(_, c)| 1 + c.depth()).max().unwrap_or(0)
    }

    fn edge_count(&self) -> usize {
        self.children.iter().map(|(_, c)| 1 + c.edge_count()).sum()
    }

    fn collect_labmoves(&self, out: &mut Vec<Labmove>) {
        for (m, c) in &self.children {
            out.push(m.clone());
            c.collect_labmoves(out);
        }
    }

    fn dual(&self) -> GameNode {
        GameNode {
            winner: self.winner.opposite(),
            children: self
                .children
                .iter()
                .map(|(m, c)| (Labmove::new(m.player.opposite(), m.mv.clone()), c.dual()))
                .collect(),
        }
    }

    fn write(&self, out: &mut String, indent: usize) {
        let _ = write!(out, "node winner={} {{", self.winner);
        if self.children.is_empty() {
            out.push('}');
            return;
        }
        out.push('\n');
        for (m, c) in &self.children {
            let _ = write!(out, "{:w$}{}\"{}\" -> ", "", m.player, m.mv, w = indent + 2);
            c.write(out, indent + 2);
            out.push('\n');
        }
        let _ = write!(out, "{:w$}}}", "", w = indent);
    }
}

/// A finite game tree. Its legal runs are exactly the root-to-node paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomGame {
    pub name: String,
    pub root: GameNode,
}

impl AtomGame {
    pub fn new(name: impl Into<String>, root: GameNode) -> Result<Self, LibraryError> {
        let name = name.into();
        check_node(&name, &root)?;
        Ok(AtomGame { name, root })
    }

    /// A moveless game won by `winner`.
    pub fn elementary(name: &str, winner: Player) -> Self {
        AtomGame {
            name: name.to_string(),
            root: GameNode::leaf(winner),
        }
    }

    pub fn node_at(&self, r: &Run) -> Option<&GameNode> {
        r.iter().try_fold(&self.root, |n, m| n.child(m))
    }

    pub fn is_legal(&self, r: &Run) -> bool {
        self.node_at(r).is_some()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Number of edges in the tree.
    pub fn move_count(&self) -> usize {
        self.root.edge_count()
    }

    /// Every distinct labmove labelling some edge.
    pub fn labmoves(&self) -> Vec<Labmove> {
        let mut out = Vec::new();
        self.root.collect_labmoves(&mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Distinct moves available to `p` somewhere in the tree.
    pub fn moves_for(&self, p: Player) -> Vec<String> {
        self.labmoves()
            .into_iter()
            .filter(|m| m.player == p)
            .map(|m| m.mv)
            .collect()
    }

    /// The game with roles of the players swapped.
    pub fn dual(&self, name: &str) -> AtomGame {
        AtomGame {
            name: name.to_string(),
            root: self.root.dual(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("game {} = ", self.name);
        self.root.write(&mut out, 0);
        out.push('\n');
        out
    }
}

fn is_move_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_node(game: &str, n: &GameNode) -> Result<(), LibraryError> {
    for (i, (m, c)) in n.children.iter().enumerate() {
        if !is_move_name(&m.mv) {
            return Err(LibraryError::BadMove {
                game: game.to_string(),
                mv: m.mv.clone(),
            });
        }
        if n.children[..i].iter().any(|(e, _)| e == m) {
            return Err(LibraryError::DuplicateEdge {
                game: game.to_string(),
                mv: m.to_string(),
            });
        }
        check_node(game, c)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LibraryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("game {game}: duplicate edge {mv}")]
    DuplicateEdge { game: String, mv: String },
    #[error("game {game}: move {mv:?} must be a nonempty alphanumeric word")]
    BadMove { game: String, mv: String },
    #[error("game {0} defined twice")]
    DuplicateGame(String),
    #[error("atom {atom} bound to unknown game {game}")]
    UnknownGame { atom: String, game: String },
}

/// A set of named atom games plus optional atom-to-game bindings.
#[derive(Clone, Debug, Default)]
pub struct AtomLibrary {
    pub games: BTreeMap<String, Arc<AtomGame>>,
    pub bindings: BTreeMap<String, String>,
}

impl AtomLibrary {
    pub fn from_games(games: impl IntoIterator<Item = AtomGame>) -> Self {
        AtomLibrary {
            games: games.into_iter().map(|g| (g.name.clone(), Arc::new(g))).collect(),
            bindings: BTreeMap::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Arc<AtomGame>> {
        self.games.get(name)
    }

    /// The interpretation given by the file's `atom X = game` lines; an
    /// unbound atom resolves to the game of the same name, if any.
    pub fn interp(&self) -> Interp {
        let mut map = BTreeMap::new();
        for (atom, game) in &self.bindings {
            if let Some(g) = self.games.get(game) {
                map.insert(atom.clone(), g.clone());
            }
        }
        Interp {
            map,
            fallback: self.games.clone(),
            default: None,
        }
    }

    pub fn parse(text: &str) -> Result<AtomLibrary, LibraryError> {
        let mut lib = AtomLibrary::default();
        let mut p = Cursor::new(text);
        loop {
            p.skip_ws();
            if p.at_end() {
                break;
            }
            let kw = p.word()?;
            match kw.as_str() {
                "game" => {
                    let name = p.word()?;
                    p.expect('=')?;
                    let root = p.node()?;
                    let g = AtomGame::new(name.clone(), root)?;
                    if lib.games.insert(name.clone(), Arc::new(g)).is_some() {
                        return Err(LibraryError::DuplicateGame(name));
                    }
                }
                "atom" => {
                    let atom = p.word()?;
                    p.expect('=')?;
                    let game = p.word()?;
                    lib.bindings.insert(atom, game);
                }
                other => return Err(p.err(format!("expected `game` or `atom`, found {other:?}"))),
            }
        }
        for (atom, game) in &lib.bindings {
            if !lib.games.contains_key(game) {
                return Err(LibraryError::UnknownGame {
                    atom: atom.clone(),
                    game: game.clone(),
                });
            }
        }
        Ok(lib)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in self.games.values() {
            out.push_str(&g.to_text());
        }
        for (a, g) in &self.bindings {
            let _ = writeln!(out, "atom {a} = {g}");
        }
        out
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s, pos: 0 }
    }

    fn line(&self) -> usize {
        self.s[..self.pos].matches('\n').count() + 1
    }

    fn err(&self, message: impl Into<String>) -> LibraryError {
        LibraryError::Syntax {
            line: self.line(),
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let t = r.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
            self.pos += r.len() - t.len();
            if t.starts_with('#') {
                let end = t.find('\n').unwrap_or(t.len());
                self.pos += end;
            } else {
                break;
            }
        }
    }

    fn word(&mut self) -> Result<String, LibraryError> {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        if end == 0 {
            return Err(self.err(format!("expected a name near {:?}", r.chars().take(12).collect::<String>())));
        }
        self.pos += end;
        Ok(r[..end].to_string())
    }

    fn expect(&mut self, c: char) -> Result<(), LibraryError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn player(&mut self) -> Result<Player, LibraryError> {
        self.skip_ws();
        for tag in ["T", "B", "⊤", "⊥"] {
            if self.rest().starts_with(tag) {
                self.pos += tag.len();
                return Ok(Player::parse(tag).expect("known tag"));
            }
        }
        Err(self.err("expected a player (T, B, ⊤ or ⊥)"))
    }

    fn node(&mut self) -> Result<GameNode, LibraryError> {
        if self.word()? != "node" {
            return Err(self.err("expected `node`"));
        }
        if !self.eat("winner") {
            return Err(self.err("expected `winner=`"));
        }
        self.expect('=')?;
        let winner = self.player()?;
        self.expect('{')?;
        let mut node = GameNode::leaf(winner);
        loop {
            if self.eat("}") {
                return Ok(node);
            }
            let p = self.player()?;
            self.expect('"')?;
            let r = self.rest();
            let end = r.find('"').ok_or_else(|| self.err("unterminated move string"))?;
            let mv = r[..end].to_string();
            self.pos += end + 1;
            if !self.eat("->") {
                return Err(self.err("expected `->`"));
            }
            let child = self.node()?;
            node.children.push((Labmove::new(p, mv), child));
        }
    }
}

/// Maps atoms to atom games.
#[derive(Clone, Debug, Default)]
pub struct Interp {
    map: BTreeMap<String, Arc<AtomGame>>,
    fallback: BTreeMap<String, Arc<AtomGame>>,
    default: Option<Arc<AtomGame>>,
}

impl Interp {
    /// Every atom denotes `g`.
    pub fn uniform(g: Arc<AtomGame>) -> Self {
        Interp {
            default: Some(g),
            ..Interp::default()
        }
    }

    pub fn bind(mut self, atom: &str, g: Arc<AtomGame>) -> Self {
        self.map.insert(atom.to_string(), g);
        self
    }

    pub fn resolve(&self, atom: &Atom) -> Option<&Arc<AtomGame>> {
        self.map
            .get(atom.name())
            .or_else(|| self.fallback.get(atom.name()))
            .or(self.default.as_ref())
    }
}
