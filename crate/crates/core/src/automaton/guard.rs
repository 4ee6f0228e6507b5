//! Set formulas over the family `S = ⟨S_γ⟩_{γ∈Γ}` of incoming-neighbor state sets.

use thiserror::Error;

use super::types::{is_valid_name, Cmp, StateId, StateSet};
use crate::alphabet::Alphabet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Guard {
    True,
    False,
    /// `q ∈ S_γ`
    Has { state: StateId, gamma: usize },
    /// `S_γ = set`
    Eq { gamma: usize, set: StateSet },
    /// `|S_γ| cmp k`
    Card { gamma: usize, cmp: Cmp, k: usize },
    /// `S_γ ∩ set = ∅`, the conjunction of `!has(q)@γ` over `set`.
    NoneOf { gamma: usize, set: StateSet },
    Not(Box<Guard>),
    And(Vec<Guard>),
    Or(Vec<Guard>),
}

impl Guard {
    pub fn has(state: StateId, gamma: usize) -> Guard {
        Guard::Has { state, gamma }
    }

    pub fn none_of(gamma: usize, set: StateSet) -> Guard {
        match set.len() {
            0 => Guard::True,
            1 => Guard::not(Guard::has(set.as_slice()[0], gamma)),
            _ => Guard::NoneOf { gamma, set },
        }
    }

    /// Some member of `set` is in `S_γ`.
    pub fn any_of(gamma: usize, set: StateSet) -> Guard {
        Guard::not(Guard::none_of(gamma, set))
    }

    pub fn not(g: Guard) -> Guard {
        match g {
            Guard::True => Guard::False,
            Guard::False => Guard::True,
            Guard::Not(inner) => *inner,
            other => Guard::Not(Box::new(other)),
        }
    }

    pub fn and(parts: Vec<Guard>) -> Guard {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Guard::True => {}
                Guard::False => return Guard::False,
                Guard::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Guard::True,
            1 => out.pop().expect("one element"),
            _ => Guard::And(out),
        }
    }

    pub fn or(parts: Vec<Guard>) -> Guard {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Guard::False => {}
                Guard::True => return Guard::True,
                Guard::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Guard::False,
            1 => out.pop().expect("one element"),
            _ => Guard::Or(out),
        }
    }

    /// Evaluates against a family of sorted state slices indexed by edge symbol.
    pub fn eval<S: AsRef<[StateId]>>(&self, family: &[S]) -> bool {
        match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Has { state, gamma } => family[*gamma].as_ref().binary_search(state).is_ok(),
            Guard::Eq { gamma, set } => family[*gamma].as_ref() == set.as_slice(),
            Guard::Card { gamma, cmp, k } => cmp.holds(family[*gamma].as_ref().len(), *k),
            Guard::NoneOf { gamma, set } => family[*gamma].as_ref().iter().all(|&q| !set.contains(q)),
            Guard::Not(g) => !g.eval(family),
            Guard::And(gs) => gs.iter().all(|g| g.eval(family)),
            Guard::Or(gs) => gs.iter().any(|g| g.eval(family)),
        }
    }

    /// Renames states; states mapped to `None` are treated as absent from every `S_γ`.
    pub fn remap<F: Fn(StateId) -> Option<StateId> + Copy>(&self, f: F) -> Guard {
        match self {
            Guard::True => Guard::True,
            Guard::False => Guard::False,
            Guard::Has { state, gamma } => match f(*state) {
                Some(q) => Guard::has(q, *gamma),
                None => Guard::False,
            },
            Guard::Eq { gamma, set } => {
                let mapped = set.filter_map(f);
                if mapped.len() == set.len() {
                    Guard::Eq { gamma: *gamma, set: mapped }
                } else {
                    Guard::False
                }
            }
            Guard::Card { .. } => self.clone(),
            Guard::NoneOf { gamma, set } => Guard::none_of(*gamma, set.filter_map(f)),
            Guard::Not(g) => Guard::not(g.remap(f)),
            Guard::And(gs) => Guard::and(gs.iter().map(|g| g.remap(f)).collect()),
            Guard::Or(gs) => Guard::or(gs.iter().map(|g| g.remap(f)).collect()),
        }
    }

    /// Calls `f` on every state mentioned by an atom.
    pub fn for_each_state(&self, f: &mut dyn FnMut(StateId)) {
        match self {
            Guard::True | Guard::False | Guard::Card { .. } => {}
            Guard::Has { state, .. } => f(*state),
            Guard::Eq { set, .. } | Guard::NoneOf { set, .. } => set.iter().for_each(f),
            Guard::Not(g) => g.for_each_state(f),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.for_each_state(f)),
        }
    }

    /// Calls `f` on every atom.
    pub fn for_each_atom(&self, f: &mut dyn FnMut(&Guard)) {
        match self {
            Guard::Not(g) => g.for_each_atom(f),
            Guard::And(gs) | Guard::Or(gs) => gs.iter().for_each(|g| g.for_each_atom(f)),
            atom => f(atom),
        }
    }

    pub fn max_gamma(&self) -> Option<usize> {
        let mut max = None;
        self.for_each_atom(&mut |a| {
            let g = match a {
                Guard::Has { gamma, .. }
                | Guard::Eq { gamma, .. }
                | Guard::Card { gamma, .. }
                | Guard::NoneOf { gamma, .. } => *gamma,
                _ => return,
            };
            max = max.max(Some(g));
        });
        max
    }

    /// Renders in the ASCII guard grammar; `@γ` is omitted for single-symbol edge alphabets.
    pub fn render(&self, name: &dyn Fn(StateId) -> String, gamma: &Alphabet) -> String {
        self.render_prec(name, gamma).0
    }

    /// Returns the text and its binding strength: 0 or, 1 and, 2 atom or negation.
    fn render_prec(&self, name: &dyn Fn(StateId) -> String, gamma: &Alphabet) -> (String, u8) {
        let at = |g: usize| if gamma.len() == 1 { String::new() } else { format!("@{}", gamma.symbol(g)) };
        let wrap = |(s, p): (String, u8), min: u8| if p < min { format!("({s})") } else { s };
        match self {
            Guard::True => ("true".into(), 2),
            Guard::False => ("!true".into(), 2),
            Guard::Has { state, gamma: g } => (format!("has({}){}", name(*state), at(*g)), 2),
            Guard::Eq { gamma: g, set } => {
                let names: Vec<String> = set.iter().map(name).collect();
                (format!("eq({{{}}}){}", names.join(","), at(*g)), 2)
            }
            Guard::Card { gamma: g, cmp, k } => {
                let a = if gamma.len() == 1 { String::new() } else { format!("@{}", gamma.symbol(*g)) };
                (format!("card{a} {} {k}", cmp.symbol()), 2)
            }
            Guard::NoneOf { gamma: g, set } => {
                let parts: Vec<String> = set.iter().map(|q| format!("!has({}){}", name(q), at(*g))).collect();
                (format!("({})", parts.join(" & ")), 2)
            }
            Guard::Not(inner) => match inner.as_ref() {
                Guard::NoneOf { gamma: g, set } => {
                    let parts: Vec<String> = set.iter().map(|q| format!("has({}){}", name(q), at(*g))).collect();
                    (format!("({})", parts.join(" | ")), 2)
                }
                other => (format!("!{}", wrap(other.render_prec(name, gamma), 2)), 2),
            },
            Guard::And(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| wrap(g.render_prec(name, gamma), 1)).collect();
                (parts.join(" & "), 1)
            }
            Guard::Or(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| wrap(g.render_prec(name, gamma), 0)).collect();
                (parts.join(" | "), 0)
            }
        }
    }

    pub fn parse(
        text: &str,
        resolve: &dyn Fn(&str) -> Option<StateId>,
        gamma: &Alphabet,
    ) -> Result<Guard, GuardParseError> {
        let mut p = Parser { src: text, pos: 0, resolve, gamma };
        let g = p.or()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(g)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("guard syntax error at offset {offset}: {message}")]
pub struct GuardParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<StateId>,
    gamma: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> GuardParseError {
        GuardParseError { offset: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GuardParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn name(&mut self) -> Result<&str, GuardParseError> {
        self.skip_ws();
        let len = self
            .rest()
            .char_indices()
            .find(|&(_, c)| !is_valid_name(&c.to_string()))
            .map_or(self.rest().len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(kw) && !rest[kw.len()..].starts_with(|c: char| c.is_alphanumeric() || c == '_') {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn state(&mut self) -> Result<StateId, GuardParseError> {
        let at = self.pos;
        let name = self.name()?.to_string();
        (self.resolve)(&name).ok_or(GuardParseError { offset: at, message: format!("unknown state `{name}`") })
    }

    fn at_gamma(&mut self) -> Result<usize, GuardParseError> {
        if self.eat("@") {
            let at = self.pos;
            let sym = self.name()?.to_string();
            self.gamma
                .index_of(&sym)
                .ok_or(GuardParseError { offset: at, message: format!("unknown edge symbol `{sym}`") })
        } else if self.gamma.len() == 1 {
            Ok(0)
        } else {
            Err(self.error("`@γ` is required when there are several edge symbols"))
        }
    }

    fn or(&mut self) -> Result<Guard, GuardParseError> {
        let mut parts = vec![self.and()?];
        while self.eat("|") {
            parts.push(self.and()?);
        }
        Ok(merge_chain(parts, false))
    }

    fn and(&mut self) -> Result<Guard, GuardParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(merge_chain(parts, true))
    }

    fn unary(&mut self) -> Result<Guard, GuardParseError> {
        if self.eat("!") {
            return Ok(Guard::not(self.unary()?));
        }
        if self.eat("(") {
            let g = self.or()?;
            self.expect(")")?;
            return Ok(g);
        }
        if self.keyword("true") {
            return Ok(Guard::True);
        }
        if self.keyword("false") {
            return Ok(Guard::False);
        }
        if self.keyword("has") {
            self.expect("(")?;
            let q = self.state()?;
            self.expect(")")?;
            let g = self.at_gamma()?;
            return Ok(Guard::has(q, g));
        }
        if self.keyword("eq") {
            self.expect("(")?;
            self.expect("{")?;
            let mut set = StateSet::new();
            if !self.eat("}") {
                loop {
                    set.insert(self.state()?);
                    if self.eat("}") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            self.expect(")")?;
            let g = self.at_gamma()?;
            return Ok(Guard::Eq { gamma: g, set });
        }
        if self.keyword("card") {
            let g = self.at_gamma()?;
            self.skip_ws();
            let cmp = ["<=", ">=", "<", ">", "="]
                .iter()
                .find(|op| self.rest().starts_with(**op))
                .copied()
                .ok_or_else(|| self.error("expected a comparison"))?;
            self.pos += cmp.len();
            self.skip_ws();
            let digits = self.rest().chars().take_while(char::is_ascii_digit).count();
            if digits == 0 {
                return Err(self.error("expected a number"));
            }
            let k = self.rest()[..digits].parse().map_err(|_| self.error("number out of range"))?;
            self.pos += digits;
            return Ok(Guard::Card { gamma: g, cmp: Cmp::parse(cmp).expect("listed"), k });
        }
        Err(self.error("expected a guard"))
    }
}

/// Folds a chain of `!has(q)@γ` conjuncts (or `has(q)@γ` disjuncts) over one
/// γ into a single set atom, so rendering and parsing round-trip.
fn merge_chain(parts: Vec<Guard>, conjunction: bool) -> Guard {
    if parts.len() >= 2 {
        let atom = |g: &Guard| -> Option<(usize, StateId)> {
            match (g, conjunction) {
                (Guard::Not(inner), true) => match inner.as_ref() {
                    Guard::Has { state, gamma } => Some((*gamma, *state)),
                    _ => None,
                },
                (Guard::Has { state, gamma }, false) => Some((*gamma, *state)),
                _ => None,
            }
        };
        let atoms: Option<Vec<(usize, StateId)>> = parts.iter().map(atom).collect();
        if let Some(atoms) = atoms {
            let gamma = atoms[0].0;
            if atoms.iter().all(|a| a.0 == gamma) {
                let set: StateSet = atoms.iter().map(|a| a.1).collect();
                let none = Guard::none_of(gamma, set);
                return if conjunction { none } else { Guard::not(none) };
            }
        }
    }
    if conjunction {
        Guard::and(parts)
    } else {
        Guard::or(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<&'static str> {
        vec!["q_a", "q_b", "q_bk", "q_bkr"]
    }

    fn resolve(s: &str) -> Option<StateId> {
        names().iter().position(|n| *n == s).map(|i| i as StateId)
    }

    fn name(q: StateId) -> String {
        names()[q as usize].to_string()
    }

    fn parse(s: &str) -> Guard {
        Guard::parse(s, &resolve, &Alphabet::blank()).unwrap()
    }

    fn fam(states: &[StateId]) -> Vec<StateSet> {
        vec![states.iter().copied().collect()]
    }

    #[test]
    fn atoms_evaluate() {
        assert!(parse("true").eval(&fam(&[])));
        assert!(parse("has(q_b)").eval(&fam(&[0, 1])));
        assert!(!parse("eq({q_bk,q_bkr})").eval(&fam(&[0])));
        assert!(parse("eq({q_bk,q_bkr})").eval(&fam(&[2, 3])));
        assert!(parse("card >= 1").eval(&fam(&[3])));
        assert!(!parse("card = 0").eval(&fam(&[3])));
    }

    #[test]
    fn precedence() {
        // & binds tighter than |
        let g = parse("has(q_a) | has(q_b) & has(q_bk)");
        assert!(g.eval(&fam(&[0])));
        assert!(!g.eval(&fam(&[1])));
        assert!(parse("!has(q_a) & !has(q_b)").eval(&fam(&[2])));
    }

    #[test]
    fn render_round_trip() {
        for text in [
            "true",
            "!true",
            "has(q_a) | has(q_b) & has(q_bk)",
            "!(has(q_a) | card < 2) & eq({})",
            "(!has(q_a) & !has(q_b)) & has(q_bk)",
            "(has(q_a) | has(q_b))",
            "!eq({q_a,q_bkr})",
        ] {
            let g = parse(text);
            let back = parse(&g.render(&name, &Alphabet::blank()));
            assert_eq!(g, back, "{text}");
        }
    }

    #[test]
    fn gamma_annotation_required_with_several_symbols() {
        let gamma = Alphabet::new(["l", "r"]).unwrap();
        assert!(Guard::parse("has(q_a)", &resolve, &gamma).is_err());
        let g = Guard::parse("has(q_a)@r & card@l = 0", &resolve, &gamma).unwrap();
        assert!(g.eval(&[StateSet::new(), StateSet::singleton(0)]));
        assert_eq!(Guard::parse(&g.render(&name, &gamma), &resolve, &gamma).unwrap(), g);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = Guard::parse("has(q_a) & has(nope)", &resolve, &Alphabet::blank()).unwrap_err();
        assert_eq!(e.offset, 15);
        assert!(Guard::parse("has(q_a) &", &resolve, &Alphabet::blank()).is_err());
    }
}
