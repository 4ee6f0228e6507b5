//! Recursive-descent parser for the concrete formula syntax.

use thiserror::Error;

use super::{is_node_var, is_set_var, Formula, KEYWORDS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let f = p.iff()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(f)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let mut i = self.pos;
        for c in s.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        true
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let mut i = start;
        while i < self.chars.len() && (self.chars[i].is_ascii_alphanumeric() || self.chars[i] == '_') {
            i += 1;
        }
        if i == start || !self.chars[start].is_ascii_alphabetic() {
            return None;
        }
        Some(self.chars[start..i].iter().collect())
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident().as_deref() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek_ident() {
            Some(name) if KEYWORDS.contains(&name.as_str()) => Err(self.error(format!("keyword `{name}` used as a variable"))),
            Some(name) => {
                self.pos += name.len();
                Ok(name)
            }
            None => Err(self.error("expected a variable")),
        }
    }

    fn node_variable(&mut self) -> Result<String, ParseError> {
        let at = self.pos;
        let v = self.variable()?;
        if is_node_var(&v) {
            Ok(v)
        } else {
            Err(ParseError { position: at, message: format!("`{v}` is a set variable where a node variable is required") })
        }
    }

    fn set_variable(&mut self) -> Result<String, ParseError> {
        let at = self.pos;
        let v = self.variable()?;
        if is_set_var(&v) {
            Ok(v)
        } else {
            Err(ParseError { position: at, message: format!("`{v}` is a node variable where a set variable is required") })
        }
    }

    /// Raw symbol between brackets, for labels and relations.
    fn bracketed(&mut self) -> Result<String, ParseError> {
        self.expect("[")?;
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos] != ']' {
            self.pos += 1;
        }
        if self.pos == self.chars.len() {
            return Err(ParseError { position: start, message: "unterminated `[`".into() });
        }
        let sym: String = self.chars[start..self.pos].iter().collect::<String>().trim().to_string();
        if sym.is_empty() {
            return Err(self.error("empty symbol"));
        }
        self.pos += 1;
        Ok(sym)
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implies()?;
        while self.eat("<=>") {
            let right = self.implies()?;
            left = Formula::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat("=>") {
            let right = self.implies()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.and()?];
        while self.eat("|") {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Formula::Or(parts) })
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat("!") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        if self.eat("(") {
            let f = self.iff()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("false") {
            return Ok(Formula::False);
        }
        for (kw, existential) in [("exists", true), ("forall", false)] {
            if self.eat_keyword(kw) {
                return self.quantifier(existential);
            }
        }
        if self.eat_keyword("lab") {
            let label = self.bracketed()?;
            self.expect("(")?;
            let var = self.node_variable()?;
            self.expect(")")?;
            return Ok(Formula::Lab { label, var });
        }
        self.skip_ws();
        let at = self.pos;
        let x = self.variable()?;
        if self.eat("->") {
            let gamma = if self.peek_str("[") { Some(self.bracketed()?) } else { None };
            let y = self.node_variable()?;
            self.check_node(&x, at)?;
            return Ok(Formula::Edge { from: x, gamma, to: y });
        }
        if self.peek_str("=>") {
            return Err(self.error("a variable is not a formula"));
        }
        if self.eat("=") {
            let y = self.node_variable()?;
            self.check_node(&x, at)?;
            return Ok(Formula::Eq(x, y));
        }
        if self.eat_keyword("in") {
            let set = self.set_variable()?;
            self.check_node(&x, at)?;
            return Ok(Formula::In { var: x, set });
        }
        Err(self.error("expected `->`, `=` or `in`"))
    }

    fn check_node(&self, v: &str, at: usize) -> Result<(), ParseError> {
        if is_node_var(v) {
            Ok(())
        } else {
            Err(ParseError { position: at, message: format!("`{v}` is a set variable where a node variable is required") })
        }
    }

    fn quantifier(&mut self, existential: bool) -> Result<Formula, ParseError> {
        let mut vars = vec![self.variable()?];
        while self.eat(",") {
            vars.push(self.variable()?);
        }
        self.expect("(")?;
        let body = self.iff()?;
        self.expect(")")?;
        Ok(vars.iter().rev().fold(body, |acc, v| {
            let b = Box::new(acc);
            match (existential, is_set_var(v)) {
                (true, false) => Formula::ExistsNode(v.clone(), b),
                (false, false) => Formula::ForallNode(v.clone(), b),
                (true, true) => Formula::ExistsSet(v.clone(), b),
                (false, true) => Formula::ForallSet(v.clone(), b),
            }
        }))
    }
}
