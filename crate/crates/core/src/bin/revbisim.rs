use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use revbisim::corpus::write_corpus;
use revbisim::{
    backward_trace, bisimilar, build_lts, corpus_generate, distinguish, export_dot, parse_formula,
    parse_term, read_corpus, run_golden_suite, satisfies, verify_characterization, CorpusParams,
    EquivKind, Error, ProcessTerm,
};

/// Reversible sequential processes: semantics, bisimilarities and their logics.
#[derive(Parser)]
#[command(name = "revbisim", version)]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Echo the canonical form of a term with its predicates.
    Parse { term: String },
    /// Print the transition system of a term's initial ancestor.
    Lts {
        term: String,
        /// Also write a Graphviz rendering here.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Decide an equivalence and print the JSON report.
    Equiv {
        #[arg(long)]
        kind: EquivKind,
        left: String,
        right: String,
    },
    /// Model-check a formula against a term.
    Mc { term: String, formula: String },
    /// Print a formula of the kind's fragment separating two terms.
    Distinguish {
        #[arg(long)]
        kind: EquivKind,
        left: String,
        right: String,
    },
    /// Print the labels on the way back to the initial ancestor, latest first.
    Trace {
        /// Drop tau labels.
        #[arg(long)]
        weak: bool,
        term: String,
    },
    /// Generate all small initial terms.
    Corpus {
        #[arg(long, value_delimiter = ',', required = true)]
        alphabet: Vec<String>,
        #[arg(long)]
        max: usize,
        /// Also include every reachable state of each term.
        #[arg(long)]
        decorated: bool,
    },
    /// Check that a kind coincides with agreement on its fragment over a corpus.
    Verify {
        #[arg(long)]
        kind: EquivKind,
        #[arg(long, value_name = "FILE")]
        corpus: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Replay the worked examples of the theory.
    Golden,
}

/// What a command printed and the exit status it asks for.
struct Outcome {
    text: String,
    status: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, status: 0 }
    }

    fn json(value: &Value, success: bool, failure_status: u8) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("reports are plain JSON");
        text.push('\n');
        Outcome { text, status: if success { 0 } else { failure_status } }
    }
}

fn term(text: &str) -> Result<ProcessTerm, Error> {
    let t = parse_term(text)?;
    t.ensure_reachable()?;
    Ok(t)
}

fn run(command: Command) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Parse { term: text } => {
            let t = parse_term(&text)?;
            let text = format!(
                "{t}\ninitial: {}\nfinal: {}\nreachable: {}\n",
                t.is_initial(),
                t.is_final(),
                t.is_reachable()
            );
            // The canonical form is still worth echoing for an unreachable term.
            if let Err(e) = t.ensure_reachable() {
                print!("{text}");
                return Err(e);
            }
            Outcome::ok(text)
        }
        Command::Lts { term: text, dot } => {
            let t = term(&text)?;
            let l = build_lts(&t)?;
            if let Some(path) = dot {
                fs::write(path, export_dot(&l, Some(&t))?)?;
            }
            let report = json!({
                "schema": 1,
                "root": l.root().to_string(),
                "states": l.states().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "transitions": l.transitions().iter().map(|tr| json!({
                    "source": tr.source.to_string(),
                    "action": tr.action.name(),
                    "target": tr.target.to_string(),
                })).collect::<Vec<_>>(),
            });
            Outcome::json(&report, true, 0)
        }
        Command::Equiv { kind, left, right } => {
            let report = bisimilar(kind, &term(&left)?, &term(&right)?)?;
            Outcome::json(&report.to_json(), report.equivalent, 1)
        }
        Command::Mc { term: text, formula } => {
            let t = term(&text)?;
            let f = parse_formula(&formula)?;
            let holds = satisfies(&t, &f)?;
            Outcome { text: format!("{holds}\n"), status: u8::from(!holds) }
        }
        Command::Distinguish { kind, left, right } => {
            match distinguish(kind, &term(&left)?, &term(&right)?)? {
                Some(f) => Outcome::ok(format!("{f}\n")),
                None => Outcome { text: "equivalent\n".into(), status: 1 },
            }
        }
        Command::Trace { weak, term: text } => {
            let trace = backward_trace(&term(&text)?, weak)?;
            let names: Vec<&str> = trace.iter().map(|a| a.name()).collect();
            Outcome::ok(format!("{}\n", names.join(" ")))
        }
        Command::Corpus { alphabet, max, decorated } => {
            let alphabet: Vec<&str> = alphabet.iter().map(String::as_str).collect();
            let params = CorpusParams::new(&alphabet, max, decorated)?;
            Outcome::ok(write_corpus(&corpus_generate(&params)?))
        }
        Command::Verify { kind, corpus, depth } => {
            let terms = read_corpus(&read(&corpus)?)?;
            let report = verify_characterization(kind, &terms, depth)?;
            Outcome::json(&report.to_json(), report.passed(), 4)
        }
        Command::Golden => {
            let report = run_golden_suite()?;
            Outcome::json(&report.to_json(), report.passed(), 4)
        }
    })
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(Error::from)
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::Unreachable { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("REVBISIM_LOG")).init();
    let cli = Cli::parse();
    let outcome = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_status(&e));
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(outcome.status)
}
