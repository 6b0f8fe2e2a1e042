//! Shipped atom games: small static trees of depth at most 3.

use crate::game::{AtomGame, AtomLibrary};

/// The main test library.
pub const STANDARD: &str = r#"
# moveless games
game top = node winner=T {}
game bot = node winner=B {}

# one machine move wins
game claim = node winner=B {
  T"m" -> node winner=T {}
}
game deny = node winner=T {
  B"m" -> node winner=B {}
}

# the machine must pick the right answer
game choice = node winner=B {
  T"good" -> node winner=T {}
  T"bad" -> node winner=B {}
}

# independent moves by both players; the machine wins iff it moved
game pair = node winner=B {
  T"x" -> node winner=T {
    B"y" -> node winner=T {}
  }
  B"y" -> node winner=B {
    T"x" -> node winner=T {}
  }
}

# question and answer
game qa = node winner=T {
  B"qa" -> node winner=B {
    T"ra" -> node winner=T {}
    T"rb" -> node winner=B {}
  }
  B"qb" -> node winner=B {
    T"ra" -> node winner=B {}
    T"rb" -> node winner=T {}
  }
}

# three alternating moves
game chain = node winner=B {
  T"a" -> node winner=T {
    B"b" -> node winner=B {
      T"c" -> node winner=T {}
    }
  }
}
"#;

/// A second library sharing no game names or moves with [`STANDARD`].
pub const ALTERNATE: &str = r#"
game yes = node winner=T {}
game no = node winner=B {}

game guess = node winner=T {
  B"p0" -> node winner=B {
    T"s0" -> node winner=T {}
  }
  B"p1" -> node winner=B {
    T"s1" -> node winner=T {}
  }
}

game offer = node winner=B {
  T"k1" -> node winner=T {}
  T"k2" -> node winner=T {}
  T"k3" -> node winner=B {}
}

game dare = node winner=T {
  B"z" -> node winner=B {
    T"w" -> node winner=T {
      B"v" -> node winner=B {}
    }
  }
}
"#;

/// Not static: the machine wins by moving first but loses if it waits.
pub const RACE: &str = r#"
game race = node winner=T {
  B"go" -> node winner=T {
    T"b" -> node winner=T {
      B"a" -> node winner=T {}
    }
    B"a" -> node winner=B {
      T"b" -> node winner=B {}
    }
  }
}
"#;

pub fn standard_library() -> AtomLibrary {
    AtomLibrary::parse(STANDARD).expect("shipped library parses")
}

pub fn alternate_library() -> AtomLibrary {
    AtomLibrary::parse(ALTERNATE).expect("shipped library parses")
}

pub fn race_game() -> AtomGame {
    let lib = AtomLibrary::parse(RACE).expect("shipped library parses");
    lib.get("race").expect("race game").as_ref().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{is_static_bounded, Player};

    #[test]
    fn libraries_are_disjoint_and_static() {
        let (a, b) = (standard_library(), alternate_library());
        for g in a.games.values() {
            assert!(!b.games.contains_key(&g.name));
            assert!(g.depth() <= 3);
            assert!(is_static_bounded(g, 2 * g.depth() + 2), "{}", g.name);
            let moves: Vec<String> = [Player::Top, Player::Bot].iter().flat_map(|&p| g.moves_for(p)).collect();
            for h in b.games.values() {
                assert!(moves.iter().all(|m| h.moves_for(Player::Top).iter().chain(&h.moves_for(Player::Bot)).all(|n| n != m)));
            }
        }
        for h in b.games.values() {
            assert!(is_static_bounded(h, 2 * h.depth() + 2), "{}", h.name);
        }
        assert!(!is_static_bounded(&race_game(), 4));
    }
}
