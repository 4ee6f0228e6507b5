//! Input resolution: file paths, `fixtures:<name>` pseudo-paths and `-` for stdin.

use std::fmt;
use std::io::Read;

use dga_core::automaton::AutomatonError;
use dga_core::fixtures::{self, Fixture};
use dga_core::game::GameError;
use dga_core::language::LanguageError;
use dga_core::mso::{parse, MsoError};
use dga_core::transforms::TransformError;
use dga_core::{Alphabet, Automaton, Formula, LabeledGraph};
use serde_json::Value;

/// A failure with its exit code: 3 for invalid input, 4 for an exceeded resource cap.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Resource(m) => write!(f, "resource cap exceeded: {m}"),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::PositionCap { .. } => CliError::Resource(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::CardExpansion { .. } | TransformError::Expansion(_) => CliError::Resource(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<MsoError> for CliError {
    fn from(e: MsoError) -> Self {
        match e {
            MsoError::Transform(t) => t.into(),
            MsoError::Expansion(_) | MsoError::TranslationCap { .. } => CliError::Resource(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LanguageError> for CliError {
    fn from(e: LanguageError) -> Self {
        match e {
            LanguageError::Game(g) => g.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AutomatonError> for CliError {
    fn from(e: AutomatonError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Reads `path`, where `-` is stdin. Stdin may be consumed only once per command.
pub fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn fixture(path: &str) -> Option<Result<Fixture, CliError>> {
    let name = path.strip_prefix("fixtures:")?;
    Some(fixtures::build(name).map_err(|e| CliError::Input(e.to_string())))
}

/// Parses an automaton file. The envelope `{"automaton": ..}` written by
/// `transform` and `mso compile` is accepted as well, so commands pipe.
pub fn automaton_from_text(text: &str) -> Result<Automaton, AutomatonError> {
    if let Ok(Value::Object(map)) = serde_json::from_str::<Value>(text) {
        if let Some(inner) = map.get("automaton") {
            return Automaton::from_json_str(&inner.to_string());
        }
    }
    Automaton::from_json_str(text)
}

pub fn load_automaton(path: &str) -> Result<Automaton, CliError> {
    match fixture(path) {
        Some(Ok(Fixture::Automaton(a))) => Ok(a),
        Some(Ok(other)) => Err(CliError::Input(format!("{path} is a {}, not an automaton", other.kind()))),
        Some(Err(e)) => Err(e),
        None => Ok(automaton_from_text(&read_text(path)?)?),
    }
}

pub fn load_graph(path: &str) -> Result<LabeledGraph, CliError> {
    match fixture(path) {
        Some(Ok(Fixture::Graph(g))) => Ok(g),
        Some(Ok(other)) => Err(CliError::Input(format!("{path} is a {}, not a graph", other.kind()))),
        Some(Err(e)) => Err(e),
        None => LabeledGraph::from_json_str(&read_text(path)?).map_err(|e| CliError::Input(e.to_string())),
    }
}

/// A formula given as a fixture, a file, stdin, or inline text.
pub fn load_formula(arg: &str) -> Result<Formula, CliError> {
    let text = match fixture(arg) {
        Some(Ok(Fixture::Sentence(f))) => return Ok(f),
        Some(Ok(other)) => return Err(CliError::Input(format!("{arg} is a {}, not a sentence", other.kind()))),
        Some(Err(e)) => return Err(e),
        None if arg == "-" || std::path::Path::new(arg).is_file() => read_text(arg)?,
        None => arg.to_string(),
    };
    parse(text.trim()).map_err(|e| CliError::Input(e.to_string()))
}

/// Comma-separated symbols.
pub fn alphabet(list: &str) -> Result<Alphabet, CliError> {
    Alphabet::new(list.split(',').map(str::trim)).map_err(|e| CliError::Input(format!("alphabet `{list}`: {e}")))
}

/// A projection map `{"target": [..], "map": {"a": "x", ..}}`, inline or from a file.
/// Without `target`, the image symbols in order of first appearance in the source alphabet.
pub fn load_map(arg: &str, source: &Alphabet) -> Result<(Vec<usize>, Alphabet), CliError> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read_text(arg)? };
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("map: {e}")))?;
    let map = v.get("map").and_then(Value::as_object).ok_or_else(|| CliError::Input("map: missing object `map`".into()))?;
    let image = |a: &str| -> Result<String, CliError> {
        map.get(a).and_then(Value::as_str).map(str::to_string).ok_or_else(|| CliError::Input(format!("map: label `{a}` has no image")))
    };
    let target = match v.get("target") {
        Some(t) => {
            let syms: Vec<String> = serde_json::from_value(t.clone()).map_err(|e| CliError::Input(format!("map target: {e}")))?;
            Alphabet::new(syms).map_err(|e| CliError::Input(format!("map target: {e}")))?
        }
        None => {
            let mut syms: Vec<String> = Vec::new();
            for a in source.iter() {
                let b = image(a)?;
                if !syms.contains(&b) {
                    syms.push(b);
                }
            }
            Alphabet::new(syms).map_err(|e| CliError::Input(format!("map target: {e}")))?
        }
    };
    let mut h = Vec::with_capacity(source.len());
    for a in source.iter() {
        let b = image(a)?;
        h.push(target.index_of(&b).ok_or_else(|| CliError::Input(format!("map: `{b}` is not in the target alphabet")))?);
    }
    Ok((h, target))
}
