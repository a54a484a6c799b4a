//! Command-line front end.
//!
//! Every command reads one or more JSON equation documents (a path, or `-`
//! for standard input) and writes a JSON report. Exit status is 0 on
//! success, 2 when a document is malformed and 3 when the mathematics
//! refuses, for instance `solve` at an irregular singular point.

pub mod commands;
pub mod document;

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use commands::{BundleInput, Grid, Overrides};
use document::{located, Mode, OdeDocument};
use num_complex::Complex64;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "odeseries", version, about = "Frobenius series, singular points and Riccati holonomy for linear ODEs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Input documents; `-` reads standard input.
    #[arg(default_value = "-")]
    pub inputs: Vec<PathBuf>,
    /// Truncation order, overriding the document.
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Expansion point, as a rational such as `1/2`.
    #[arg(long, conflicts_with = "at_infinity")]
    pub point: Option<String>,
    /// Expand at the point at infinity.
    #[arg(long)]
    pub at_infinity: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordinary, regular singular or irregular at the point and at infinity.
    Classify(Common),
    /// Indicial polynomial, its roots and the root configuration.
    Indicial(Common),
    /// Fundamental system of Frobenius solutions with residual certificates.
    Solve(Common),
    /// Formal power-series solutions at any point, including irregular ones.
    Probe(Common),
    /// Closed-form basis of an Euler equation.
    Euler(Common),
    /// Global holonomy of the Riccati model of a second-order equation.
    Holonomy {
        #[command(flatten)]
        common: Common,
        /// Base point `re,im`.
        #[arg(long, value_parser = parse_complex)]
        base: Option<Complex64>,
        /// Use `w = u/u'` instead of `t = u'/u`.
        #[arg(long)]
        inverse: bool,
    },
    /// Particular solution by variation of parameters.
    Particular(Common),
    /// Table of one solution on a real grid.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        solution: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Plain `x value` columns instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Re-checks the residuals recorded in a `solve` or `particular` bundle.
    Residual {
        #[arg(default_value = "-")]
        inputs: Vec<PathBuf>,
    },
}

fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Io(e.to_string()))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))
}

/// Output of one document: JSON, or preformatted text for `eval --table`.
enum Rendered {
    Json(serde_json::Value),
    Text(String),
}

/// Runs `command` on one input text.
fn run_one(command: &Command, text: &str) -> Result<Rendered> {
    if let Command::Residual { .. } = command {
        let bundle: BundleInput = serde_json::from_str(text).map_err(located)?;
        let check = commands::cmd_residual(&bundle)?;
        if !check.reproduced {
            return Err(Error::NotASolution(format!("recorded residuals not reproduced: {}", to_json(&check)?)));
        }
        return Ok(Rendered::Json(to_json(&check)?));
    }
    let common = match command {
        Command::Classify(c) | Command::Indicial(c) | Command::Solve(c) | Command::Probe(c) | Command::Euler(c) | Command::Particular(c) => c,
        Command::Holonomy { common, .. } | Command::Eval { common, .. } => common,
        Command::Residual { .. } => unreachable!("handled above"),
    };
    let overrides = Overrides { terms: common.terms, mode: common.mode, point: common.point.clone(), at_infinity: common.at_infinity };
    let doc = overrides.apply(OdeDocument::parse(text)?)?;
    Ok(Rendered::Json(match command {
        Command::Classify(_) => to_json(&commands::cmd_classify(&doc)?)?,
        Command::Indicial(_) => to_json(&commands::cmd_indicial(&doc)?)?,
        Command::Solve(_) => to_json(&commands::cmd_solve(&doc)?)?,
        Command::Probe(_) => to_json(&commands::cmd_probe(&doc)?)?,
        Command::Euler(_) => to_json(&commands::cmd_euler(&doc)?)?,
        Command::Particular(_) => to_json(&commands::cmd_particular(&doc)?)?,
        Command::Holonomy { base, inverse, .. } => to_json(&commands::cmd_holonomy(&doc, *base, *inverse)?)?,
        Command::Eval { solution, from, to, points, table, .. } => {
            let t = commands::cmd_eval(&doc, *solution, &Grid { from: *from, to: *to, points: *points })?;
            if *table {
                return Ok(Rendered::Text(t.to_text()));
            }
            to_json(&t)?
        }
        Command::Residual { .. } => unreachable!("handled above"),
    }))
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let inputs = match &cli.command {
        Command::Residual { inputs } => inputs.clone(),
        Command::Classify(c) | Command::Indicial(c) | Command::Solve(c) | Command::Probe(c) | Command::Euler(c) | Command::Particular(c) => {
            c.inputs.clone()
        }
        Command::Holonomy { common, .. } | Command::Eval { common, .. } => common.inputs.clone(),
    };
    // Independent documents are processed concurrently.
    let results: Vec<Result<Rendered>> = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|path| {
                let command = &cli.command;
                scope.spawn(move || read_input(path).and_then(|text| run_one(command, &text)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Error::Io("worker panicked".into())))).collect()
    });

    let mut code = 0;
    let mut rendered = Vec::new();
    for (path, result) in inputs.iter().zip(results) {
        match result {
            Ok(r) => rendered.push(r),
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                code = code.max(e.exit_code());
            }
        }
    }
    let text = match rendered.as_slice() {
        [] => String::new(),
        [Rendered::Text(t)] => t.clone(),
        [Rendered::Json(v)] => format!("{}\n", serde_json::to_string_pretty(v).unwrap_or_default()),
        many => {
            let values: Vec<serde_json::Value> = many
                .iter()
                .map(|r| match r {
                    Rendered::Json(v) => v.clone(),
                    Rendered::Text(t) => serde_json::Value::String(t.clone()),
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&values).unwrap_or_default())
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        code = code.max(e.exit_code());
    }
    code
}
