//! Command-line front end.
//!
//! Subcommands: `invariant`, `equal`, `moves`, `fuzz`, `derive`. Diagram
//! arguments accept inline Gauss text, `@path` to read a file, or `-` for
//! standard input. Reports go to standard output as `key: value` lines, or
//! as one JSON object with the same keys under `--format json`; problems go
//! to standard error.
//!
//! Exit codes: 0 on success, 1 when `equal` distinguishes the diagrams or
//! `fuzz` finds a failing trial, 2 for unusable input or requests whose
//! result is undefined (for example the orbit class of a diagram with an odd
//! number of index-`c` chords).

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::coxeter::{orbit, GroupElement};
use crate::fuzz::{run_fuzz, Failure, FuzzOptions};
use crate::gauss::{GaussDiagram, Kind};
use crate::indexing::{derive_indices, WindingDecoratedDiagram};
use crate::invariant::{assign_letters, compact_invariant, parity_profile, w, CountMode};
use crate::moves::{applicable_moves, apply_move_with, check_move_with, Move, MoveOptions};

#[derive(Parser)]
#[command(
    name = "knotword",
    version,
    about = "Gauss-code diagrams, their moves, and a group-valued invariant"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Long,
    Closed,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Long => Kind::Long,
            KindArg::Closed => Kind::Closed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the letter word and its group value for a diagram.
    Invariant {
        /// Diagram: inline Gauss text, `@file`, or `-` for stdin.
        input: String,
        /// Count index-c endpoints after the opposite endpoint instead of
        /// before when placing primes.
        #[arg(long)]
        after: bool,
    },
    /// Compare two diagrams: word values for long ones, orbit classes for
    /// closed ones. Exits 1 when they differ.
    Equal { left: String, right: String },
    /// List moves applicable to a diagram, or apply one with --apply.
    Moves {
        input: String,
        /// A move in move syntax, e.g. `R3 @(1,2)(3,4)(5,6)`.
        #[arg(long)]
        apply: Option<String>,
        /// Insist on sign data for second Reidemeister moves.
        #[arg(long)]
        strict: bool,
    },
    /// Run randomized invariance checks; prints the seed for replay and
    /// exits 1 if any trial fails.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        max_chords: usize,
        /// Base seed; drawn from system entropy when omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = KindArg::Long)]
        kind: KindArg,
        /// Generate only diagrams with an even number of index-c chords
        /// (adds the twin, rotation and orbit-class checks on closed runs).
        #[arg(long)]
        c_even: bool,
        /// Moves per trial sequence.
        #[arg(long, default_value_t = 8)]
        len: usize,
    },
    /// Derive chord indices from a winding-decorated diagram.
    Derive { input: String },
}

/// Parses the arguments, runs the selected command and returns the exit
/// code. All output happens inside.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Invariant { ref input, after } => cmd_invariant(cli.format, input, after),
        Command::Equal {
            ref left,
            ref right,
        } => cmd_equal(cli.format, left, right),
        Command::Moves {
            ref input,
            ref apply,
            strict,
        } => cmd_moves(cli.format, input, apply.as_deref(), strict),
        Command::Fuzz {
            trials,
            max_chords,
            seed,
            kind,
            c_even,
            len,
        } => cmd_fuzz(
            cli.format,
            trials,
            max_chords,
            seed,
            kind.into(),
            c_even,
            len,
        ),
        Command::Derive { ref input } => cmd_derive(cli.format, input),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

/// Resolves a diagram argument: `-` reads stdin, `@path` reads a file,
/// anything else is taken verbatim.
fn read_input(spec: &str) -> Result<String, String> {
    if spec == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(text)
    } else if let Some(path) = spec.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    } else {
        Ok(spec.to_string())
    }
}

fn parse_diagram(spec: &str) -> Result<GaussDiagram, String> {
    let text = read_input(spec)?;
    GaussDiagram::parse(&text).map_err(|e| format!("invalid diagram: {e}"))
}

fn kv(key: &str, value: impl Display) -> String {
    format!("{key}: {value}")
}

/// Writes one line to stdout. Dying consumers (`head`, closed pipes) end the
/// process with the conventional SIGPIPE status instead of a panic.
fn print_out(line: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = writeln!(lock, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(141);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(2);
    }
}

fn emit<R: Serialize>(format: Format, report: &R, lines: Vec<String>) {
    match format {
        Format::Json => print_out(&serde_json::to_string(report).expect("reports serialize")),
        Format::Text => {
            for line in lines {
                print_out(&line);
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantReport {
    pub diagram: String,
    pub kind: String,
    pub chords: usize,
    /// Prime-rule counting side: `before` or `after`.
    pub mode: String,
    pub letters: String,
    pub value: String,
    pub count_a: usize,
    pub count_b: usize,
    pub count_c: usize,
    /// Canonical representative of the orbit class; closed diagrams with an
    /// even number of index-c chords only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_canonical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nontrivial: Option<bool>,
}

fn cmd_invariant(format: Format, input: &str, after: bool) -> Result<i32, String> {
    let d = parse_diagram(input)?;
    let mode = if after {
        CountMode::After
    } else {
        CountMode::Before
    };
    let word = assign_letters(&d, mode);
    let value = word.value();
    let profile = parity_profile(&d);

    let mut undefined_orbit = None;
    let (orbit_canonical, orbit_size, nontrivial) = match d.kind() {
        Kind::Long => (None, None, Some(value != GroupElement::IDENTITY)),
        Kind::Closed => match compact_invariant(&d) {
            Ok(class) => (
                Some(class.canonical().to_string()),
                Some(class.len()),
                Some(class != orbit(GroupElement::IDENTITY)),
            ),
            Err(e) => {
                undefined_orbit = Some(e.to_string());
                (None, None, None)
            }
        },
    };

    let report = InvariantReport {
        diagram: d.to_text(),
        kind: d.kind().to_string(),
        chords: d.chord_count(),
        mode: match mode {
            CountMode::Before => "before".to_string(),
            CountMode::After => "after".to_string(),
        },
        letters: word.to_string(),
        value: value.to_string(),
        count_a: profile.count_a,
        count_b: profile.count_b,
        count_c: profile.count_c,
        orbit_canonical,
        orbit_size,
        nontrivial,
    };

    let mut lines = vec![
        kv("diagram", &report.diagram),
        kv("kind", &report.kind),
        kv("chords", report.chords),
        kv("mode", &report.mode),
        kv("letters", &report.letters),
        kv("value", &report.value),
        kv("count_a", report.count_a),
        kv("count_b", report.count_b),
        kv("count_c", report.count_c),
    ];
    if let Some(canonical) = &report.orbit_canonical {
        lines.push(kv("orbit_canonical", canonical));
    }
    if let Some(size) = report.orbit_size {
        lines.push(kv("orbit_size", size));
    }
    if let Some(nontrivial) = report.nontrivial {
        lines.push(kv("nontrivial", nontrivial));
    }
    emit(format, &report, lines);

    if let Some(reason) = undefined_orbit {
        eprintln!("note: {reason}");
        return Ok(2);
    }
    Ok(0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EqualReport {
    pub left: String,
    pub right: String,
    /// What was compared: `word-value` for long diagrams, `orbit-class` for
    /// closed ones.
    pub comparison: String,
    pub left_value: String,
    pub right_value: String,
    pub equal: bool,
}

fn cmd_equal(format: Format, left: &str, right: &str) -> Result<i32, String> {
    let l = parse_diagram(left).map_err(|e| format!("left: {e}"))?;
    let r = parse_diagram(right).map_err(|e| format!("right: {e}"))?;
    if l.kind() != r.kind() {
        return Err("cannot compare a long diagram with a closed one".to_string());
    }
    let (comparison, left_value, right_value, equal) = match l.kind() {
        Kind::Long => {
            let (lv, rv) = (w(&l), w(&r));
            (
                "word-value".to_string(),
                lv.to_string(),
                rv.to_string(),
                lv == rv,
            )
        }
        Kind::Closed => {
            let lc = compact_invariant(&l).map_err(|e| format!("left diagram: {e}"))?;
            let rc = compact_invariant(&r).map_err(|e| format!("right diagram: {e}"))?;
            (
                "orbit-class".to_string(),
                lc.canonical().to_string(),
                rc.canonical().to_string(),
                lc == rc,
            )
        }
    };
    let report = EqualReport {
        left: l.to_text(),
        right: r.to_text(),
        comparison,
        left_value,
        right_value,
        equal,
    };
    let lines = vec![
        kv("left", &report.left),
        kv("right", &report.right),
        kv("comparison", &report.comparison),
        kv("left_value", &report.left_value),
        kv("right_value", &report.right_value),
        kv("equal", report.equal),
    ];
    emit(format, &report, lines);
    Ok(if report.equal { 0 } else { 1 })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveListReport {
    pub diagram: String,
    pub count: usize,
    pub moves: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveApplyReport {
    pub diagram: String,
    #[serde(rename = "move")]
    pub applied: String,
    pub result: String,
    pub value_before: String,
    pub value_after: String,
}

fn cmd_moves(
    format: Format,
    input: &str,
    apply: Option<&str>,
    strict: bool,
) -> Result<i32, String> {
    let d = parse_diagram(input)?;
    let options = MoveOptions {
        strict_signs: strict,
    };
    match apply {
        None => {
            let moves: Vec<String> = applicable_moves(&d).iter().map(Move::to_string).collect();
            let report = MoveListReport {
                diagram: d.to_text(),
                count: moves.len(),
                moves,
            };
            let mut lines = vec![kv("diagram", &report.diagram), kv("count", report.count)];
            lines.extend(report.moves.iter().map(|m| kv("move", m)));
            emit(format, &report, lines);
            Ok(0)
        }
        Some(move_text) => {
            let m: Move = move_text.trim().parse().map_err(|e| format!("{e}"))?;
            check_move_with(&d, &m, options).map_err(|e| format!("invalid move: {e}"))?;
            let result = apply_move_with(&d, &m, options).expect("move was checked");
            let report = MoveApplyReport {
                diagram: d.to_text(),
                applied: m.to_string(),
                result: result.to_text(),
                value_before: w(&d).to_string(),
                value_after: w(&result).to_string(),
            };
            let lines = vec![
                kv("diagram", &report.diagram),
                kv("move", &report.applied),
                kv("result", &report.result),
                kv("value_before", &report.value_before),
                kv("value_after", &report.value_after),
            ];
            emit(format, &report, lines);
            Ok(0)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuzzCliReport {
    pub seed: u64,
    pub trials: usize,
    pub max_chords: usize,
    pub kind: String,
    pub c_even: bool,
    pub len: usize,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    format: Format,
    trials: usize,
    max_chords: usize,
    seed: Option<u64>,
    kind: Kind,
    c_even: bool,
    len: usize,
) -> Result<i32, String> {
    let seed = seed.unwrap_or_else(rand::random);
    let options = FuzzOptions {
        max_chords,
        sequence_length: len,
        kind,
        c_even_only: c_even,
    };
    let outcome = run_fuzz(seed, trials, options);
    let report = FuzzCliReport {
        seed,
        trials,
        max_chords,
        kind: kind.to_string(),
        c_even,
        len,
        passed: outcome.passed(),
        failures: outcome.failures,
    };
    let mut lines = vec![
        kv("seed", report.seed),
        kv("trials", report.trials),
        kv("max_chords", report.max_chords),
        kv("kind", &report.kind),
        kv("c_even", report.c_even),
        kv("len", report.len),
    ];
    lines.extend(report.failures.iter().map(|f| kv("failure", f)));
    lines.push(kv("result", if report.passed { "pass" } else { "fail" }));
    emit(format, &report, lines);
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeriveReport {
    pub diagram: String,
    pub chords: usize,
}

fn cmd_derive(format: Format, input: &str) -> Result<i32, String> {
    let text = read_input(input)?;
    let decorated = WindingDecoratedDiagram::parse(&text)
        .map_err(|e| format!("invalid winding-decorated diagram: {e}"))?;
    let d = derive_indices(&decorated).map_err(|e| format!("{e}"))?;
    let report = DeriveReport {
        diagram: d.to_text(),
        chords: d.chord_count(),
    };
    let lines = vec![kv("diagram", &report.diagram), kv("chords", report.chords)];
    emit(format, &report, lines);
    Ok(0)
}
