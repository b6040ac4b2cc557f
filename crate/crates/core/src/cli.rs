//! The `d0l` command line.
//!
//! Every verb builds one JSON value; `--json` prints it as is and the
//! default output is a line-oriented rendering of the same value, so the two
//! never disagree. Exit status: 0 success, 1 usage error (including words
//! outside the corpus), 2 parse error or erasing system, 3 budget exceeded,
//! 4 internal invariant violation.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::circularity::{decide_circularity, estimate_sync_delay, sync_report, DelayMode};
use crate::codes::{injective_simplification, injectivity, is_injective};
use crate::corpus::FactorCorpus;
use crate::error::Error;
use crate::growth::classify;
use crate::periodicity::is_repetitive;
use crate::system::{parse_system, D0LSystem};
use crate::Limits;

#[derive(Debug, Parser)]
#[command(name = "d0l", version, about = "Growth, injectivity, repetitiveness and circularity of D0L systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct Flags {
    /// Longest factor kept in the factor corpus
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub max_corpus_len: u64,
    /// Length of the fixed-point prefix scanned for periods
    #[arg(long, global = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(2..=1 << 24))]
    pub prefix_cap: u64,
    /// Generations folded into the corpus before giving up on a fixpoint
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u64).range(0..=1 << 16))]
    pub generations: u64,
    /// Synchronization notion used by `delay`
    #[arg(long, global = true, value_enum, default_value_t = Mode::Weak)]
    pub mode: Mode,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Weak,
    Strong,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounded letters, growth classes, pushiness, primitivity, injectivity
    Classify { input: PathBuf },
    /// Decide circularity
    Circular { input: PathBuf },
    /// Injective simplification chain
    Simplify { input: PathBuf },
    /// Dump the factor corpus
    Factors { input: PathBuf },
    /// Interpretations and synchronizing points of a word
    Interpret { input: PathBuf, word: String },
    /// Estimate the synchronization delay over the corpus
    Delay { input: PathBuf },
    /// Decide repetitiveness
    Repetitive { input: PathBuf },
}

impl Command {
    fn input(&self) -> &PathBuf {
        match self {
            Command::Classify { input }
            | Command::Circular { input }
            | Command::Simplify { input }
            | Command::Factors { input }
            | Command::Interpret { input, .. }
            | Command::Delay { input }
            | Command::Repetitive { input } => input,
        }
    }
}

impl Flags {
    pub fn limits(&self) -> Limits {
        Limits {
            corpus_len: self.max_corpus_len as usize,
            prefix_cap: self.prefix_cap as usize,
            generations: self.generations as usize,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidWord(_) | Error::NotInCorpus(_) => 1,
        Error::Syntax { .. }
        | Error::UnknownLetter { .. }
        | Error::MissingImage(_)
        | Error::EmptyAxiom
        | Error::ErasingRule(_)
        | Error::Erasing(_) => 2,
        Error::BudgetExceeded { .. } | Error::SearchBudget { .. } => 3,
        Error::NonInjective | Error::EmptyCodeWord | Error::Invariant(_) => 4,
    }
}

fn caps_json(limits: &Limits, corpus: &FactorCorpus) -> Value {
    json!({
        "corpus": limits.corpus_len,
        "prefix": limits.prefix_cap,
        "generations": corpus.generation(),
        "corpus_stable": corpus.is_stable(),
    })
}

fn report(cmd: &Command, sys: &D0LSystem, limits: &Limits, mode: Mode) -> Result<Value, Error> {
    Ok(match cmd {
        Command::Classify { .. } => {
            let corpus = FactorCorpus::build(sys, limits.corpus_len, limits.generations)?;
            let mut v = classify(sys)?.to_json(sys);
            v["injectivity"] = injectivity(sys, &corpus)?.to_json(sys);
            v["caps"] = caps_json(limits, &corpus);
            v
        }
        Command::Circular { .. } => decide_circularity(sys, limits)?.to_json(sys),
        Command::Simplify { .. } => {
            let mut v = injective_simplification(sys)?.to_json();
            v["morphism_injective"] = json!(is_injective(sys.morphism())?);
            v
        }
        Command::Factors { .. } => {
            let corpus = FactorCorpus::build(sys, limits.corpus_len, limits.generations)?;
            let (k, base) = corpus.max_power();
            json!({
                "count": corpus.len(),
                "max_power": {"k": k, "base": sys.render(&base)},
                "caps": caps_json(limits, &corpus),
                "factors": corpus.iter().map(|f| sys.render(f)).collect::<Vec<_>>(),
            })
        }
        Command::Interpret { word, .. } => {
            let corpus = FactorCorpus::build(sys, limits.corpus_len, limits.generations)?;
            let u = sys.parse_word(word)?;
            if u.is_empty() {
                return Err(Error::InvalidWord(word.clone()));
            }
            let mut v = sync_report(&u, &corpus)?.to_json(sys);
            v["caps"] = caps_json(limits, &corpus);
            v
        }
        Command::Delay { .. } => {
            let mode = match mode {
                Mode::Weak => DelayMode::Weak,
                Mode::Strong => DelayMode::Strong,
            };
            estimate_sync_delay(sys, limits, mode)?.to_json(sys)
        }
        Command::Repetitive { .. } => is_repetitive(sys, limits.prefix_cap)?.to_json(sys),
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if s.is_empty() => Some("ε".into()),
        Value::String(s) if s.contains('\n') => None,
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out
}

fn render_into(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        render_into(out, x, depth + 1);
                    }
                }
            }
        }
        Value::String(s) => {
            for line in s.lines() {
                writeln!(out, "{pad}{line}").unwrap();
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

/// Factor dumps stay newline-delimited in text mode, with the other fields
/// as `#` comments ahead of them.
fn render_factors(v: &Value) -> String {
    let mut meta = v.clone();
    let factors = meta.as_object_mut().and_then(|m| m.remove("factors"));
    let mut out = String::new();
    for line in render_text(&meta).lines() {
        writeln!(out, "# {line}").unwrap();
    }
    for f in factors.iter().flat_map(|f| f.as_array().into_iter().flatten()) {
        writeln!(out, "{}", f.as_str().unwrap_or_default()).unwrap();
    }
    out
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let path = cli.command.input();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return 1;
        }
    };
    let parsed = match parse_system(&text) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return exit_code(&e);
        }
    };
    if !parsed.trimmed.is_empty() {
        let _ = writeln!(
            stderr,
            "warning: letters that never occur were dropped: {}",
            parsed.trimmed.join(" ")
        );
    }
    let limits = cli.flags.limits();
    match report(&cli.command, &parsed.system, &limits, cli.flags.mode) {
        Ok(v) => {
            let body = if cli.flags.json {
                let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
                s.push('\n');
                s
            } else if matches!(cli.command, Command::Factors { .. }) {
                render_factors(&v)
            } else {
                render_text(&v)
            };
            let _ = stdout.write_all(body.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
