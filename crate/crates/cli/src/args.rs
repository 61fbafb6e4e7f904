//! Command-line flags. Every subcommand block doubles as the matching section
//! of the JSON config: keys are the long flag names, and a flag given on the
//! command line replaces the config value.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "ldgraphs", version, about = "Large deviations of subgraph counts: rates, solvers, tail oracles and checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON config; flags override its fields.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory for CSV files and manifests (default: CSV on stdout).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Master seed (overrides LDG_SEED and the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (overrides LDG_THREADS and the config).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rate table: θ_H(u), c_H(u), predicted rate and clique/hub costs.
    Rate(RateArgs),
    /// Variational upper- or lower-tail problem.
    Solve(SolveArgs),
    /// Monte Carlo or importance-sampling tail estimate.
    Mc(McArgs),
    /// Exact tail probability by enumerating every graph (N ≤ 7).
    Enumerate(EnumerateArgs),
    /// Spectral tail study of G(N, p).
    Spectra(SpectraArgs),
    /// Covering-argument checks.
    Netcheck(NetcheckArgs),
    /// The full acceptance suite.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rate(_) => "rate",
            Command::Solve(_) => "solve",
            Command::Mc(_) => "mc",
            Command::Enumerate(_) => "enumerate",
            Command::Spectra(_) => "spectra",
            Command::Netcheck(_) => "netcheck",
            Command::Verify(_) => "verify",
        }
    }
}

/// Which statistic of the graph is studied.
#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    /// Homomorphism count of `--pattern`.
    Hom,
    /// Edge count.
    Edges,
    /// Schatten norm of order `--alpha`.
    Schatten,
}

#[derive(ValueEnum, Serialize, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    /// Upper tail, `≥`.
    #[value(alias = "upper")]
    #[serde(alias = "upper")]
    Ge,
    /// Lower tail, `≤`.
    #[value(alias = "lower")]
    #[serde(alias = "lower")]
    Le,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RateArgs {
    /// Pattern (C3, K4, star_3, path_4, K_{2,3}, ...); repeat for several.
    #[arg(long)]
    pub pattern: Option<Vec<String>>,
    /// Explicit u values, comma separated; otherwise a log grid.
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<f64>>,
    /// Smallest u of the log grid [default: 0.01].
    #[arg(long)]
    pub u_min: Option<f64>,
    /// Largest u of the log grid [default: 100].
    #[arg(long)]
    pub u_max: Option<f64>,
    /// Grid size [default: 41].
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of vertices [default: 1000].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Edge probability [default: 0.1].
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EnumerateArgs {
    /// Statistic [default: hom].
    #[arg(long, value_enum)]
    pub stat: Option<Stat>,
    /// Pattern for `--stat hom` [default: C3].
    #[arg(long)]
    pub pattern: Option<String>,
    /// Schatten order for `--stat schatten` [default: 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of vertices, at most 7 [default: 4].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Edge probability [default: 0.5].
    #[arg(long)]
    pub p: Option<f64>,
    /// Absolute threshold.
    #[arg(long)]
    pub t_abs: Option<f64>,
    /// Threshold relative to the typical size of the statistic.
    #[arg(long)]
    pub t: Option<f64>,
    /// Tail direction [default: ge].
    #[arg(long, value_enum)]
    pub dir: Option<Dir>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct McArgs {
    /// Statistic [default: hom].
    #[arg(long, value_enum)]
    pub stat: Option<Stat>,
    /// Pattern for `--stat hom` [default: C3].
    #[arg(long)]
    pub pattern: Option<String>,
    /// Schatten order for `--stat schatten` [default: 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of vertices [default: 4].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Edge probability [default: 0.5].
    #[arg(long)]
    pub p: Option<f64>,
    /// Absolute threshold.
    #[arg(long)]
    pub t_abs: Option<f64>,
    /// Threshold relative to the typical size of the statistic.
    #[arg(long)]
    pub t: Option<f64>,
    /// Tail direction [default: ge].
    #[arg(long, value_enum)]
    pub dir: Option<Dir>,
    /// Number of draws [default: 100000].
    #[arg(long)]
    pub samples: Option<u64>,
    /// Proposal: plain, product(r), clique(k), hub(k) or
    /// mixture[w*spec+w*spec+...].
    #[arg(long)]
    pub tilt: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SolveArgs {
    /// Statistic [default: hom].
    #[arg(long, value_enum)]
    pub stat: Option<Stat>,
    /// Pattern for `--stat hom` [default: C3].
    #[arg(long)]
    pub pattern: Option<String>,
    /// Schatten order for `--stat schatten` [default: 2].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of vertices [default: 30].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Edge probability [default: 0.1].
    #[arg(long)]
    pub p: Option<f64>,
    /// Upper tail: threshold `(1 + u)` times the typical size.
    #[arg(long)]
    pub u: Option<f64>,
    /// Lower tail: threshold `t` times the typical size, `0 ≤ t < 1`.
    #[arg(long)]
    pub t: Option<f64>,
    /// Tail direction [default: ge].
    #[arg(long, value_enum)]
    pub dir: Option<Dir>,
    /// Iteration budget per start.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Multiplier rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SpectraArgs {
    /// Number of vertices [default: 200].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Edge probability [default: 0.1].
    #[arg(long)]
    pub p: Option<f64>,
    /// Ranks R, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub r: Option<Vec<usize>>,
    /// Scale K of the Hilbert–Schmidt level K N √p and the eigenvalue bound [default: 2].
    #[arg(long)]
    pub k: Option<f64>,
    /// Schatten order [default: 4].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Sampled graphs [default: 200].
    #[arg(long)]
    pub samples: Option<u64>,
    /// Calibration constant of the eigenvalue bound.
    #[arg(long)]
    pub c_lambda: Option<f64>,
    /// Calibration constant of the refined tail bound.
    #[arg(long)]
    pub c_tail: Option<f64>,
    /// Calibration constant of the Hilbert–Schmidt bound.
    #[arg(long)]
    pub c_hs: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct NetcheckArgs {
    /// Suites, comma separated: perturbation, trace, cycle, claim1, hom, k2.
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    /// Matrix size [default: 20].
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Rank of the net points [default: 3].
    #[arg(long)]
    pub r: Option<usize>,
    /// Edge density scale [default: 0.3].
    #[arg(long)]
    pub p: Option<f64>,
    /// Random trials per suite [default: 200].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Schatten and cycle order, at least 3 [default: 4].
    #[arg(long)]
    pub ell: Option<u32>,
    /// Covering radius ε [default: 0.5].
    #[arg(long)]
    pub eps: Option<f64>,
    /// Eigenvalue mesh of the perturbation suite [default: 0.05].
    #[arg(long)]
    pub delta_lambda: Option<f64>,
    /// Frame mesh of the perturbation suite [default: 0.05].
    #[arg(long)]
    pub delta_frame: Option<f64>,
    /// Hilbert–Schmidt size of the cycle-suite noise [default: 1e-6].
    #[arg(long)]
    pub noise_hs: Option<f64>,
    /// Pattern for the hom suite.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Operator-norm radius for the hom suite.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Criteria to run, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<u32>>,
}
