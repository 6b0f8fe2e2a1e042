//! Cursor helpers shared by the cirquent and proof file parsers.

use crate::formula::{parse_formula, Formula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn err(&self, message: impl Into<String>) -> SyntaxError {
        self.err_at(self.pos, message)
    }

    pub fn err_at(&self, pos: usize, message: impl Into<String>) -> SyntaxError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let t = r.trim_start();
            self.pos += r.len() - t.len();
            if t.starts_with('#') || t.starts_with("//") {
                self.pos += t.find('\n').unwrap_or(t.len());
            } else {
                break;
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    pub fn peek_char(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek_char() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek_char().map(|c| format!("{c:?}")).unwrap_or_else(|| "end of input".into());
            Err(self.err(format!("expected {c:?}, found {found}")))
        }
    }

    pub fn word(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let r = self.rest();
        let end = r
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(r.len());
        if end == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += end;
        Ok(r[..end].to_string())
    }

    pub fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        let at = self.pos;
        let w = self.word()?;
        if w == kw {
            Ok(())
        } else {
            Err(self.err_at(at, format!("expected `{kw}`, found `{w}`")))
        }
    }

    pub fn number(&mut self) -> Result<usize, SyntaxError> {
        let at = self.pos;
        let w = self.word()?;
        w.parse().map_err(|_| self.err_at(at, format!("expected a number, found `{w}`")))
    }

    /// `[1, 2, 3]`
    pub fn number_list(&mut self) -> Result<Vec<usize>, SyntaxError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `[[1, 2], [3]]`
    pub fn group_list(&mut self) -> Result<Vec<Vec<usize>>, SyntaxError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.number_list()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    /// `[F, ~F | G, !(E & F)]`: items are split at top-level commas.
    pub fn formula_list(&mut self) -> Result<Vec<Formula>, SyntaxError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            let mut depth = 0usize;
            let mut end = None;
            for (i, c) in self.rest().char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => depth = depth.saturating_sub(1),
                    ',' | ']' if depth == 0 => {
                        end = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let end = end.ok_or_else(|| self.err("unterminated formula list"))?;
            let text = &self.rest()[..end];
            let f = parse_formula(text).map_err(|e| self.err_at(start + e.offset, e.message))?;
            out.push(f);
            self.pos += end;
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}
