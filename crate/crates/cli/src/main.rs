//! `dga`: command-line front end for distributed graph automata.
//!
//! JSON goes to stdout and diagnostics to stderr. Exit codes: 0 success or
//! true, 1 semantic false, 2 usage, 3 invalid input, 4 resource cap.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dga_core::automaton::{classify_detailed, AutomatonError};
use dga_core::fixtures::{self, Fixture};
use dga_core::game::{build_game, extract_run, game_to_dot, position_cap, run_to_dot, solve};
use dga_core::graph::enumerate_graphs;
use dga_core::language::{bounded_language_equal, ndga_emptiness, DEFAULT_EMPTINESS_CAP};
use dga_core::mso::{automaton_to_sentence, compile_with_report, Evaluator};
use dga_core::transforms::{
    complement_ddga, dual, intersection, make_nonblocking, product, project, to_anf, trim, union, ProductMode, TransformReport,
};
use dga_core::{Acceptor, Automaton, Player};
use serde_json::{json, Value};

use input::{alphabet, automaton_from_text, load_automaton, load_formula, load_graph, load_map, read_text, CliError};

#[derive(Parser)]
#[command(name = "dga", version, about = "Distributed graph automata toolkit")]
struct Cli {
    /// Maximum number of game positions explored per acceptance check.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    position_cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check well-formedness and report levels and the automaton variant.
    Validate { automaton: String },
    /// Decide whether the automaton accepts the graph (exit 1 on rejection).
    Accept {
        automaton: String,
        graph: String,
        /// Write an accepting run as DOT.
        #[arg(long)]
        run_dot: Option<PathBuf>,
        /// Write the solved acceptance game as DOT.
        #[arg(long)]
        game_dot: Option<PathBuf>,
        /// Intersect with the connected or undirected graphs first.
        #[arg(long, value_enum)]
        restrict: Option<Restrict>,
    },
    /// Apply a construction; prints `{"automaton": .., "report": ..}`.
    Transform {
        #[arg(value_enum)]
        op: Op,
        automaton: String,
        second: Option<String>,
        /// Projection map, inline JSON or a file: `{"target": [..], "map": {"a": "x", ..}}`.
        #[arg(long)]
        map: Option<String>,
    },
    /// Monadic second-order logic.
    Mso {
        #[command(subcommand)]
        command: MsoCommand,
    },
    /// Bounded emptiness check for automata without universal states.
    Empty {
        automaton: String,
        #[arg(long, default_value_t = DEFAULT_EMPTINESS_CAP as u64, value_parser = clap::value_parser!(u64).range(1..=8))]
        cap: u64,
        /// Search undirected graphs only.
        #[arg(long)]
        undirected: bool,
    },
    /// List all graphs up to isomorphism, one JSON object per line.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        n: u64,
        #[arg(long, default_value = "_")]
        sigma: String,
        #[arg(long, default_value = "_")]
        gamma: String,
    },
    /// Built-in automata, graphs and sentences.
    Fixtures {
        #[command(subcommand)]
        command: FixturesCommand,
    },
    /// Compare two languages on all graphs up to `n` nodes (exit 1 if they differ).
    Equiv {
        first: String,
        second: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        n: u64,
    },
}

#[derive(Subcommand)]
enum MsoCommand {
    /// Evaluate a sentence on a graph (exit 1 if false).
    Eval { formula: String, graph: String },
    /// Compile a sentence into an equivalent automaton.
    Compile {
        formula: String,
        #[arg(long, default_value = "_")]
        sigma: String,
        #[arg(long, default_value = "_")]
        gamma: String,
    },
    /// Translate an automaton into an equivalent sentence.
    FromAutomaton { automaton: String },
}

#[derive(Subcommand)]
enum FixturesCommand {
    List,
    Dump { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Restrict {
    Conn,
    Undir,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Dual,
    Nonblocking,
    Trim,
    Anf,
    Union,
    Intersection,
    Project,
    ProductAnd,
    ProductOr,
    ComplementDdga,
}

/// What a command produced: its JSON output and whether the answer was "true".
struct Outcome {
    json: Value,
    truth: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, truth: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.position_cap {
        // read by every acceptance check, including those inside the library
        std::env::set_var("DGA_POSITION_CAP", cap.to_string());
    }
    match run(cli.command) {
        Ok(Outcome { json, truth }) => {
            if !json.is_null() {
                emit(&serde_json::to_string_pretty(&json).expect("JSON values serialize"));
            }
            if truth {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dga: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes one line to stdout; false once the reader has gone away.
fn emit(line: &str) -> bool {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").and_then(|_| out.flush()).is_ok()
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { automaton } => validate(&automaton),
        Command::Accept { automaton, graph, run_dot, game_dot, restrict } => {
            accept(&automaton, &graph, run_dot, game_dot, restrict)
        }
        Command::Transform { op, automaton, second, map } => transform(op, &automaton, second.as_deref(), map.as_deref()),
        Command::Mso { command } => mso(command),
        Command::Empty { automaton, cap, undirected } => {
            let a = load_automaton(&automaton)?;
            let v = ndga_emptiness(&a, cap as usize, undirected)?;
            Ok(Outcome::ok(v.to_json(&a)))
        }
        Command::Enumerate { n, sigma, gamma } => {
            let (sigma, gamma) = (alphabet(&sigma)?, alphabet(&gamma)?);
            for g in enumerate_graphs(n as usize, &sigma, &gamma) {
                if !emit(&serde_json::to_string(&g.to_json()).expect("JSON values serialize")) {
                    break;
                }
            }
            Ok(Outcome::ok(Value::Null))
        }
        Command::Fixtures { command } => Ok(Outcome::ok(match command {
            FixturesCommand::List => Value::Array(
                fixtures::list().into_iter().map(|(name, kind, description)| json!({"name": name, "kind": kind, "description": description})).collect(),
            ),
            FixturesCommand::Dump { name } => match fixtures::build(&name).map_err(|e| CliError::Input(e.to_string()))? {
                Fixture::Automaton(a) => a.to_json(),
                Fixture::Graph(g) => g.to_json(),
                Fixture::Sentence(f) => json!({"sentence": f.render(), "size": f.size()}),
            },
        })),
        Command::Equiv { first, second, n } => {
            let (a1, a2) = (load_automaton(&first)?, load_automaton(&second)?);
            let c = bounded_language_equal(&a1, &a2, n as usize)?;
            let counterexample = c.counterexample.map(|x| json!({"graph": x.graph.to_json(), "accepted_by_first": x.accepted_by_first}));
            Ok(Outcome {
                json: json!({"equal": c.equal, "nodes": n, "graphs_checked": c.graphs_checked, "counterexample": counterexample}),
                truth: c.equal,
            })
        }
    }
}

fn validate(path: &str) -> Result<Outcome, CliError> {
    let text = match path.strip_prefix("fixtures:") {
        Some(_) => load_automaton(path)?.to_json_string(),
        None => read_text(path)?,
    };
    let a = match automaton_from_text(&text) {
        Ok(a) => a,
        Err(AutomatonError::Invalid(diags)) => {
            emit(&serde_json::to_string_pretty(&json!({"valid": false, "diagnostics": diags})).expect("serializes"));
            return Err(CliError::Input(format!("{} well-formedness violation(s)", diags.len())));
        }
        Err(e) => return Err(e.into()),
    };
    let levels: Vec<Value> = (0..=a.len())
        .map(|i| {
            let names: Vec<&str> = a.level_states(i).iter().map(|q| a.name(q)).collect();
            json!({"level": i, "kind": a.level_kind(i).map(|k| format!("{k:?}").to_lowercase()), "states": names})
        })
        .collect();
    let permanent: Vec<&str> = a.permanent_states().iter().map(|q| a.name(q)).collect();
    Ok(Outcome::ok(json!({
        "valid": true,
        "siz": a.siz(),
        "len": a.len(),
        "levels": levels,
        "permanent": permanent,
        "classification": classify_detailed(&a),
    })))
}

fn accept(
    aut: &str,
    graph: &str,
    run_dot: Option<PathBuf>,
    game_dot: Option<PathBuf>,
    restrict: Option<Restrict>,
) -> Result<Outcome, CliError> {
    let mut a = load_automaton(aut)?;
    let g = load_graph(graph)?;
    if let Some(r) = restrict {
        let domain = match r {
            Restrict::Conn => fixtures::a_conn_over(a.sigma(), a.gamma()),
            Restrict::Undir => fixtures::a_undir_over(a.sigma(), a.gamma()),
        };
        a = intersection(&a, &domain)?.0;
    }
    let accepted = if run_dot.is_none() && game_dot.is_none() {
        Acceptor::new(&a).accepts(&g)?
    } else {
        let game = build_game(&a, &g, position_cap())?;
        let verdict = solve(&game);
        if let Some(path) = game_dot {
            write_file(&path, &game_to_dot(&a, &game, Some(&verdict)))?;
        }
        let accepted = verdict.winner == Player::Automaton;
        if let Some(path) = run_dot {
            if accepted {
                write_file(&path, &run_to_dot(&a, &extract_run(&game, &verdict)?))?;
            } else {
                eprintln!("dga: no accepting run, {} not written", path.display());
            }
        }
        accepted
    };
    let restrict = restrict.map(|r| match r {
        Restrict::Conn => "conn",
        Restrict::Undir => "undir",
    });
    Ok(Outcome { json: json!({"accepted": accepted, "nodes": g.node_count(), "restrict": restrict}), truth: accepted })
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn transform(op: Op, first: &str, second: Option<&str>, map: Option<&str>) -> Result<Outcome, CliError> {
    let a = load_automaton(first)?;
    let needs_second = matches!(op, Op::Union | Op::Intersection | Op::ProductAnd | Op::ProductOr);
    let b = match (needs_second, second) {
        (true, Some(p)) => Some(load_automaton(p)?),
        (true, None) => return Err(CliError::Input("this construction needs a second automaton".into())),
        (false, Some(_)) => return Err(CliError::Input("this construction takes a single automaton".into())),
        (false, None) => None,
    };
    let b = b.as_ref();
    let (out, report) = match op {
        Op::Dual => plain("dual", &a, dual(&a)),
        Op::ComplementDdga => plain("complement-ddga", &a, complement_ddga(&a)?),
        Op::Nonblocking => reported(make_nonblocking(&a)?),
        Op::Trim => reported(trim(&a)?),
        Op::Anf => reported(to_anf(&a)?),
        Op::Union => reported(union(&a, b.expect("checked above"))?),
        Op::Intersection => reported(intersection(&a, b.expect("checked above"))?),
        Op::ProductAnd => reported(product(&a, b.expect("checked above"), ProductMode::And)?),
        Op::ProductOr => reported(product(&a, b.expect("checked above"), ProductMode::Or)?),
        Op::Project => {
            let map = map.ok_or_else(|| CliError::Input("project needs --map".into()))?;
            let (h, target) = load_map(map, a.sigma())?;
            reported(project(&a, &h, &target)?)
        }
    };
    Ok(Outcome::ok(json!({"automaton": out.to_json(), "report": report})))
}

fn reported((a, r): (Automaton, TransformReport)) -> (Automaton, Value) {
    (a, serde_json::to_value(r).expect("reports serialize"))
}

/// Report for constructions that keep the state set.
fn plain(construction: &str, input: &Automaton, out: Automaton) -> (Automaton, Value) {
    let report = json!({
        "construction": construction,
        "input_siz": [input.siz()],
        "input_len": [input.len()],
        "output_siz": out.siz(),
        "output_len": out.len(),
    });
    (out, report)
}

fn mso(command: MsoCommand) -> Result<Outcome, CliError> {
    match command {
        MsoCommand::Eval { formula, graph } => {
            let phi = load_formula(&formula)?;
            let g = load_graph(&graph)?;
            let holds = Evaluator::new(&phi, g.sigma(), g.gamma())?.eval_sentence(&g)?;
            Ok(Outcome { json: json!({"holds": holds}), truth: holds })
        }
        MsoCommand::Compile { formula, sigma, gamma } => {
            let phi = load_formula(&formula)?;
            let (a, report) = compile_with_report(&phi, &alphabet(&sigma)?, &alphabet(&gamma)?)?;
            Ok(Outcome::ok(json!({"automaton": a.to_json(), "report": report})))
        }
        MsoCommand::FromAutomaton { automaton } => {
            let a = load_automaton(&automaton)?;
            let phi = automaton_to_sentence(&a)?;
            Ok(Outcome::ok(json!({"sentence": phi.render(), "size": phi.size()})))
        }
    }
}
