//! Experiment driver for `ldgraphs-core`.
//!
//! Each subcommand resolves its parameters (flags over environment over the
//! JSON config over defaults), runs inside a rayon pool of the requested
//! size and emits CSV tables plus a JSON manifest. Work is split by sample or
//! start index and reduced in index order, so outputs do not depend on the
//! thread count.
//!
//! Exit codes: 0 success, 1 a checked assertion failed, 2 bad input or any
//! other error.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod par;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};
use config::{ExperimentConfig, Settings};
use output::{Report, RunInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs the CLI with the process environment.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(argv, &|k| std::env::var(k).ok())
}

pub fn run_with_env<I, T>(argv: I, env: &dyn Fn(&str) -> Option<String>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli, env) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Resolved parameters of a subcommand, ready to run.
pub struct Prepared {
    pub command: &'static str,
    pub settings: Settings,
    pub params: Value,
    pub hash: String,
    job: Job,
}

enum Job {
    Rate(args::RateArgs),
    Solve(args::SolveArgs),
    Mc(args::McArgs),
    Enumerate(args::EnumerateArgs),
    Spectra(args::SpectraArgs),
    Netcheck(args::NetcheckArgs),
    Verify(args::VerifyArgs),
}

pub fn prepare(cli: Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<Prepared> {
    let config = match &cli.common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let settings = config::settings(&cli.common, &config, env)?;
    let command = cli.command.name();
    let section = config.section(command);
    let (job, params) = match &cli.command {
        Command::Rate(a) => {
            let a = commands::rate::resolve(config::merge(section, a)?)?;
            (Job::Rate(a.clone()), serde_json::to_value(a)?)
        }
        Command::Solve(a) => {
            let a = commands::solve::resolve(config::merge(section, a)?)?;
            (Job::Solve(a.clone()), serde_json::to_value(a)?)
        }
        Command::Mc(a) => {
            let a = commands::mc::resolve(config::merge(section, a)?)?;
            (Job::Mc(a.clone()), serde_json::to_value(a)?)
        }
        Command::Enumerate(a) => {
            let a = commands::enumerate::resolve(config::merge(section, a)?)?;
            (Job::Enumerate(a.clone()), serde_json::to_value(a)?)
        }
        Command::Spectra(a) => {
            let a = commands::spectra::resolve(config::merge(section, a)?)?;
            (Job::Spectra(a.clone()), serde_json::to_value(a)?)
        }
        Command::Netcheck(a) => {
            let a = commands::netcheck::resolve(config::merge(section, a)?)?;
            (Job::Netcheck(a.clone()), serde_json::to_value(a)?)
        }
        Command::Verify(a) => {
            let a = verify::resolve(config::merge(section, a)?)?;
            (Job::Verify(a.clone()), serde_json::to_value(a)?)
        }
    };
    let hash = output::config_hash(command, settings.seed, &params);
    Ok(Prepared {
        command,
        settings,
        params,
        hash,
        job,
    })
}

impl Prepared {
    /// Runs the job in a pool of `settings.threads` workers.
    pub fn report(&self) -> Result<Report> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.settings.threads)
            .build()
            .context("building thread pool")?;
        let seed = self.settings.seed;
        pool.install(|| match &self.job {
            Job::Rate(a) => commands::rate::run(a),
            Job::Solve(a) => commands::solve::run(a, seed),
            Job::Mc(a) => commands::mc::run(a, seed),
            Job::Enumerate(a) => commands::enumerate::run(a),
            Job::Spectra(a) => commands::spectra::run(a, seed),
            Job::Netcheck(a) => commands::netcheck::run(a, seed),
            Job::Verify(a) => verify::run(a, seed, self.settings.threads),
        })
    }
}

fn execute(cli: Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<bool> {
    let prepared = prepare(cli, env)?;
    let start = Instant::now();
    let report = prepared.report()?;
    let info = RunInfo {
        command: prepared.command,
        seed: prepared.settings.seed,
        threads: prepared.settings.threads,
        params: &prepared.params,
        hash: &prepared.hash,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    match &prepared.settings.out {
        Some(dir) => output::write_dir(dir, &info, &report)?,
        // verify reports on stdout itself; its CSV only goes to files
        None if prepared.command == "verify" => {}
        None => {
            let mut stdout = std::io::stdout().lock();
            for t in &report.tables {
                stdout.write_all(&t.to_csv(info.seed, info.hash)?)?;
            }
        }
    }
    for line in &report.summary {
        if prepared.command == "verify" {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(report.passed)
}
