//! The `gf2hash` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 size-guard refusal,
//! 3 verification failure.

mod args;
mod commands;
mod output;
mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::Value;

pub use args::{Cli, Command, ConfigFile, Format};
pub use output::{RunManifest, Table, EXPERIMENT_COLUMNS};
pub use verify::CHECKS;

use crate::error::Error;

/// Environment variable supplying the default master seed.
pub const SEED_ENV: &str = "GF2HASH_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SIZE_GUARD: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// What a subcommand produced.
pub struct Outcome {
    /// Resolved options, recorded in the manifest.
    pub flags: Value,
    pub table: Table,
    pub summary: Value,
    /// A verification check failed.
    pub failed: bool,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge { .. } => EXIT_SIZE_GUARD,
        _ => EXIT_USAGE,
    }
}

fn load_config(cli: &Cli) -> Result<ConfigFile, String> {
    let Some(path) = &cli.config else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("gf2hash: {msg}");
            code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, (i32, String)> {
    let usage = |msg: String| (EXIT_USAGE, msg);
    let config = load_config(&cli).map_err(usage)?;
    // Precedence: flag, config file, environment, built-in default.
    let seed = match cli.seed.or(config.seed) {
        Some(s) => s,
        None => env_seed().map_err(usage)?.unwrap_or(0),
    };
    let jobs = cli.jobs.or(config.jobs).unwrap_or(0);
    let format = cli.format.or(config.format).unwrap_or_default();
    let out = cli.out.clone().or(config.out.clone());

    let name = cli.command.name();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a.or(config.simulate), seed, jobs),
        Command::Exact(a) => commands::exact(a.or(config.exact), seed),
        Command::Bounds(a) => commands::bounds(a.or(config.bounds)),
        Command::Verify(a) => verify::verify(a.or(config.verify), seed),
        Command::TableBench(a) => commands::table_bench(a.or(config.table_bench), seed),
    };
    let outcome = result.map_err(|e| (exit_code(&e), e.to_string()))?;

    let mut flags = outcome.flags;
    if let Value::Object(map) = &mut flags {
        map.insert("jobs".into(), jobs.into());
        map.insert("format".into(), serde_json::to_value(format).expect("serializable"));
    }
    let manifest = RunManifest::new(name, flags, seed);
    let io_err = |e: io::Error| (EXIT_USAGE, format!("write failed: {e}"));
    match &out {
        Some(path) => {
            let file = File::create(path).map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            output::write_output(&mut w, format, &manifest, &outcome.table, &outcome.summary).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            output::write_output(&mut w, format, &manifest, &outcome.table, &outcome.summary).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    if outcome.failed {
        eprintln!("gf2hash: verification failed");
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(EXIT_OK)
}
