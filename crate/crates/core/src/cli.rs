//! The `ttolab` command-line front end.
//!
//! Exit codes: `0` success or Equivalent, `1` NotEquivalent or a failed
//! verification check, `2` Undetermined, `3` input errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{self, DecisionReport};
use crate::isodecider::{self, DecideOptions, GridSpec};
use crate::verify::{self, VerifyConfig, VerifyReport};

pub const EXIT_INPUT: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "ttolab", version, about = "Model spaces, Sedlock algebras and their spatial isomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: RunOptions,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, zeros, symmetries and Clark measures of an inner function.
    Describe,
    /// Decide whether two Sedlock algebras are spatially isomorphic.
    Decide,
    /// Run the invariant suite on an inner function.
    Verify,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunOptions {
    /// Input JSON file; standard input when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_accept: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_reject: Option<f64>,
    /// Boundary quadrature size.
    #[arg(long, global = true)]
    pub quadrature: Option<usize>,
    /// Angular density of the multistart grid.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true, env = "TTOLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = verify::DEFAULT_MAX_DEGREE)]
    pub max_degree: usize,
}

impl RunOptions {
    fn validate(&self) -> Result<()> {
        for (name, t) in [("--tol-accept", self.tol_accept), ("--tol-reject", self.tol_reject)] {
            if let Some(t) = t {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidInput(format!("{name} must be positive")));
                }
            }
        }
        if self.grid == Some(0) {
            return Err(Error::InvalidInput("--grid must be positive".into()));
        }
        Ok(())
    }

    fn decide_options(&self) -> DecideOptions {
        let mut o = DecideOptions::default();
        if let Some(t) = self.tol_accept {
            o.tol_accept = t;
        }
        if let Some(t) = self.tol_reject {
            o.tol_reject = t;
        }
        if let Some(g) = self.grid {
            o.grid = GridSpec::with_density(g);
        }
        o
    }
}

fn read_input(opts: &RunOptions, stdin: &mut dyn Read) -> Result<String> {
    match &opts.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn csv_bytes<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(f: F) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    f(&mut w).map_err(csv_error)?;
    w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))
}

#[derive(Serialize)]
struct AtomRow {
    location_re: f64,
    location_im: f64,
    weight: f64,
}

#[derive(Serialize)]
struct DecisionRow<'a> {
    verdict: &'a str,
    exit_code: i32,
    reason: &'a str,
    zeta_re: Option<f64>,
    zeta_im: Option<f64>,
    psi_lambda_re: Option<f64>,
    psi_lambda_im: Option<f64>,
    psi_c_re: Option<f64>,
    psi_c_im: Option<f64>,
    residual: Option<f64>,
    fresh_residual: Option<f64>,
}

/// Output bytes and exit code of one command.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub code: i32,
}

pub fn cmd_describe(text: &str, opts: &RunOptions) -> Result<Outcome> {
    let mut input = io::parse_theta(text)?;
    let bytes = match opts.format {
        Format::Json => json(&io::describe(&input)?)?,
        Format::Csv => {
            if input.clark.len() > 1 {
                return Err(Error::InvalidInput("CSV output holds one Clark measure; list a single clark parameter".into()));
            }
            if input.clark.is_empty() {
                input.clark.push(crate::UnimodularConstant::one());
            }
            let report = io::describe(&input)?;
            csv_bytes(|w| {
                for (u, weight) in &report.clark[0].measure.atoms {
                    w.serialize(AtomRow { location_re: u.value().re, location_im: u.value().im, weight: *weight })?;
                }
                Ok(())
            })?
        }
    };
    Ok(Outcome { bytes, code: 0 })
}

pub fn cmd_decide(text: &str, opts: &RunOptions) -> Result<Outcome> {
    let q = io::parse_query(text)?;
    let d = isodecider::decide_with(&q, &opts.decide_options());
    let mut report = DecisionReport::new(&d);
    report.fresh_residual = isodecider::reverify(&q, &d);
    report.span_residual = isodecider::spatial_unitary(&q, &d).ok().flatten().map(|(_, r)| r);
    let bytes = match opts.format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let w = report.witness.as_ref();
            let row = DecisionRow {
                verdict: &report.verdict,
                exit_code: report.exit_code,
                reason: report.reason.as_deref().unwrap_or(""),
                zeta_re: w.map(|w| w.zeta[0]),
                zeta_im: w.map(|w| w.zeta[1]),
                psi_lambda_re: w.map(|w| w.psi.lambda[0]),
                psi_lambda_im: w.map(|w| w.psi.lambda[1]),
                psi_c_re: w.map(|w| w.psi.c[0]),
                psi_c_im: w.map(|w| w.psi.c[1]),
                residual: w.map(|w| w.residual).or(report.best_residual),
                fresh_residual: report.fresh_residual,
            };
            csv_bytes(|w| w.serialize(row))?
        }
    };
    Ok(Outcome { bytes, code: report.exit_code })
}

pub fn cmd_verify(text: &str, opts: &RunOptions) -> Result<Outcome> {
    let input = io::parse_theta(text)?;
    let n = input.theta.degree();
    if n > opts.max_degree {
        return Err(Error::DegreeLimit { degree: n, limit: opts.max_degree });
    }
    if let Some(m) = opts.quadrature {
        // the suite's largest symbol is z²
        if m < 2 * (n + 2) {
            return Err(Error::InvalidInput(format!("--quadrature {m} is below 2·(degree + 2) = {}", 2 * (n + 2))));
        }
    }
    let config = VerifyConfig { seed: opts.seed, quadrature: opts.quadrature, max_degree: opts.max_degree };
    let report: VerifyReport = verify::run(&input.theta, &config)?;
    let bytes = match opts.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_bytes(|w| report.checks.iter().try_for_each(|c| w.serialize(c)))?,
    };
    Ok(Outcome { bytes, code: if report.all_passed() { 0 } else { 1 } })
}

/// Runs a parsed command line, writing the report to `--output` or `stdout`.
pub fn execute(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = cli.options.validate().and_then(|()| {
        let text = read_input(&cli.options, stdin)?;
        match cli.command {
            Command::Describe => cmd_describe(&text, &cli.options),
            Command::Decide => cmd_decide(&text, &cli.options),
            Command::Verify => cmd_verify(&text, &cli.options),
        }
    });
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match &cli.options.output {
        Some(p) => std::fs::write(p, &outcome.bytes),
        None => stdout.write_all(&outcome.bytes),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_INPUT;
    }
    outcome.code
}

/// Parses `args` and runs against the process streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    execute(&cli, &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("ttolab").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = execute(&cli, &mut stdin.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn describe_csv_columns() {
        let (code, out, _) = run(&["describe", "--format", "csv"], r#"{"zeros": [0, 0], "clark": [1]}"#);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("location_re,location_im,weight"));
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn bad_zero_exits_three() {
        let (code, out, err) = run(&["describe"], r#"{"zeros": [0.2, [0.9, 0.9]]}"#);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.is_empty());
        assert!(err.contains("zeros[1]"), "{err}");
    }

    #[test]
    fn decide_exit_codes() {
        let z3 = r#"{"zeros": [0, 0, 0]}"#;
        let q = |a1: &str, a2: &str| format!(r#"{{"theta1": {z3}, "a1": {a1}, "theta2": {z3}, "a2": {a2}}}"#);
        assert_eq!(run(&["decide"], &q("0.3", "[0, 0.3]")).0, 0);
        let (code, out, _) = run(&["decide"], &q("1", "0.5"));
        assert_eq!(code, 1);
        assert!(out.contains("normal-vs-nonnormal"));
        assert_eq!(run(&["decide"], "{").0, EXIT_INPUT);
        assert_eq!(run(&["decide", "--tol-accept", "-1"], &q("0.3", "0.3")).0, EXIT_INPUT);
    }

    #[test]
    fn verify_guard_and_determinism() {
        let big = format!(r#"{{"zeros": [{}]}}"#, vec!["0"; 40].join(","));
        let (code, _, err) = run(&["verify"], &big);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("degree exceeds verify limit"));
        let t = r#"{"zeros": [[0.1, 0.2], [-0.3, 0.1]]}"#;
        let a = run(&["verify", "--seed", "5"], t);
        let b = run(&["verify", "--seed", "5"], t);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert_eq!(run(&["verify", "--quadrature", "4"], t).0, EXIT_INPUT);
    }
}
