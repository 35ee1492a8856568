//! Command-line driver.
//!
//! Exit codes: 0 unsatisfiable, 1 satisfiable, 2 resource out, 3 input or
//! usage error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, ValueEnum};

use crate::frontend::szs::emit_result;
use crate::frontend::tptp::{parse_file, parse_problem, Problem};
use crate::saturation::{saturate, ProverConfig, SaturationResult};

pub const EXIT_UNSAT: i32 = 0;
pub const EXIT_SAT: i32 = 1;
pub const EXIT_RESOURCE_OUT: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(s: &str) -> Result<T, String> {
    match s.parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

/// Superposition prover with subsumption demodulation for TPTP CNF problems.
#[derive(Debug, Parser)]
#[command(name = "sdprover", version)]
pub struct CliConfig {
    /// Forward subsumption demodulation.
    #[arg(long, value_enum, default_value = "on")]
    pub fsd: Switch,
    /// Backward subsumption demodulation.
    #[arg(long, value_enum, default_value = "on")]
    pub bsd: Switch,
    /// Time limit in seconds.
    #[arg(long, default_value = "60", value_parser = positive::<f64>)]
    pub time_limit: f64,
    /// Maximum number of clauses created.
    #[arg(long, default_value = "100000", value_parser = positive::<usize>)]
    pub clause_limit: usize,
    /// Matching solutions examined per clause pair (0 = unlimited).
    #[arg(long, default_value = "0")]
    pub match_limit: usize,
    /// Print the refutation.
    #[arg(long, value_enum, default_value = "on")]
    pub proof: Switch,
    /// Problem file; standard input when absent.
    pub file: Option<PathBuf>,
}

impl CliConfig {
    pub fn prover_config(&self) -> ProverConfig {
        ProverConfig {
            fsd: self.fsd.on(),
            bsd: self.bsd.on(),
            time_limit: Duration::from_secs_f64(self.time_limit),
            clause_limit: self.clause_limit,
            match_limit: (self.match_limit > 0).then_some(self.match_limit),
            ..ProverConfig::default()
        }
    }
}

pub fn exit_code(r: &SaturationResult) -> i32 {
    match r {
        SaturationResult::Unsatisfiable(_) => EXIT_UNSAT,
        SaturationResult::Saturated => EXIT_SAT,
        SaturationResult::ResourceOut => EXIT_RESOURCE_OUT,
    }
}

fn load(cfg: &CliConfig, stdin: &mut dyn Read) -> Result<Problem, String> {
    match &cfg.file {
        Some(path) => parse_file(path).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            parse_problem(&text, "stdin", None).map_err(|e| format!("stdin: {e}"))
        }
    }
}

/// Runs the prover as the binary would; returns the exit code.
pub fn run_cli<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let problem = match load(&cfg, stdin) {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "sdprover: {msg}");
            let _ = writeln!(out, "% SZS status InputError");
            return EXIT_INPUT_ERROR;
        }
    };
    if problem.clauses.is_empty() {
        let _ = writeln!(out, "% SZS status Satisfiable for {}", problem.name);
        return EXIT_SAT;
    }
    let result = saturate(problem.clauses(), cfg.prover_config());
    let text = emit_result(&result, &problem.signature, &problem.name, cfg.proof.on());
    let _ = out.write_all(text.as_bytes());
    exit_code(&result)
}
