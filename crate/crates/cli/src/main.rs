mod commands;
mod config;
mod error;
mod output;
mod series;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::Format;

/// Integer points on hypersurfaces, sums of powers and growth exponents.
#[derive(Debug, Parser)]
#[command(name = "census", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Independent work units per count.
    #[arg(long, global = true)]
    shards: Option<usize>,
    /// Memory cap for sieve and pair-sum tables, e.g. `4G`.
    #[arg(long, global = true, value_parser = config::parse_bytes)]
    mem_cap: Option<u64>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for sampled line detection.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat `key = value` file with defaults for the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Resolved global settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub shards: usize,
    pub mem_cap: u64,
    pub format: Format,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl GlobalArgs {
    fn resolve(&self) -> CliResult<Settings> {
        let file = match &self.config {
            Some(path) => config::load(path)?,
            None => Default::default(),
        };
        let bad = |key: &str, value: &str, why: String| {
            CliError::Invalid(format!("config key `{key}` = `{value}`: {why}"))
        };
        let shards = match (self.shards, file.get("shards")) {
            (Some(s), _) => s,
            (None, Some(v)) => v.parse().map_err(|e| bad("shards", v, format!("{e}")))?,
            (None, None) => 1,
        };
        if shards == 0 {
            return Err(CliError::Invalid("shards must be at least 1".into()));
        }
        let mem_cap = match (self.mem_cap, file.get("mem-cap")) {
            (Some(m), _) => m,
            (None, Some(v)) => config::parse_bytes(v).map_err(|e| bad("mem-cap", v, e))?,
            (None, None) => census_core::census::DEFAULT_MEM_CAP,
        };
        let format = if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            match file.get("format").map(String::as_str) {
                None | Some("csv") => Format::Csv,
                Some("json") => Format::Json,
                Some(v) => return Err(bad("format", v, "expected csv or json".into())),
            }
        };
        let seed = match (self.seed, file.get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => v.parse().map_err(|e| bad("seed", v, format!("{e}")))?,
            (None, None) => 0,
        };
        let out = self
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from));
        Ok(Settings {
            shards,
            mem_cap,
            format,
            seed,
            out,
        })
    }
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct PolySource {
    /// Polynomial text, e.g. `x0^5 + x1^5 - x2^5 - x3^5`.
    #[arg(
        long,
        conflicts_with = "poly_file",
        required_unless_present = "poly_file"
    )]
    pub poly: Option<String>,
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
    /// Pad the variable count beyond the highest index used.
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct BoundArgs {
    /// Single height bound.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub bound: Option<u64>,
    /// Geometric grid `start,factor,steps`: bounds `start·factor^k`, `k < steps`.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineArg {
    Brute,
    Slice,
    Sieve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    Affine,
    Projective,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Auto,
    Projective,
    Affine,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = EngineArg::Slice)]
    pub engine: EngineArg,
    /// Sieve modulus; defaults to the smallest prime `≥ B^{1/√δ}`.
    #[arg(long)]
    pub prime: Option<u64>,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct FormulaArgs {
    /// One of theorem1, theorem2, proposition1, sand, hb_theta, cor1_theta,
    /// pila, lemma7.
    #[arg(long)]
    pub formula: String,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub delta: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count integer points of height at most B.
    Count {
        #[command(flatten)]
        poly: PolySource,
        #[arg(long, value_enum, default_value_t = CountMode::Projective)]
        mode: CountMode,
        #[command(flatten)]
        bounds: BoundArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Count `x` and `−x` once (projective mode).
        #[arg(long)]
        identify_antipodes: bool,
    },
    /// Exhaustive point counts of the reduction mod p.
    Modp {
        #[command(flatten)]
        poly: PolySource,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', required = true)]
        prime: Vec<u64>,
    },
    /// Smoothness evidence from exact witnesses and reductions mod p.
    Smooth {
        #[command(flatten)]
        poly: PolySource,
        #[arg(long, value_enum, default_value_t = ModelArg::Auto)]
        model: ModelArg,
        /// Evidence primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Bad slice values along a direction, or a search for a good slice.
    SliceScan {
        #[command(flatten)]
        poly: PolySource,
        /// Comma-separated primitive direction; omit to search.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<i64>>,
        /// Largest `|κ|` scanned along a given direction.
        #[arg(long, default_value_t = 10)]
        bound: i64,
        /// Search even when the input fails the smoothness check.
        #[arg(long)]
        override_smoothness: bool,
    },
    /// Split a projective count into points on and off detected lines.
    Lines {
        #[command(flatten)]
        poly: PolySource,
        #[command(flatten)]
        bounds: BoundArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Ordered representations of n as a sum of three positive d-th powers.
    R3 {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
    /// Representation counts for every n up to a limit.
    R3Batch {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 3)]
        d: u32,
        /// Emit one row per n with a representation instead of a summary.
        #[arg(long)]
        full: bool,
    },
    /// Solutions of f(t1)+…+f(ts) = f(u1)+…+f(us) in [1, B].
    EqualSums {
        #[command(flatten)]
        poly: PolySource,
        #[arg(long, default_value_t = 2)]
        s: u32,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Evaluate a closed-form exponent, optionally fitting a series.
    Exponents {
        #[command(flatten)]
        formula: FormulaArgs,
        /// `B,count` series to fit alongside.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Log-log slope of a `B,count` series.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Compare a series against a bound `C·B^{θ+ε}`.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value_t = census_core::exponents::DEFAULT_EPSILON)]
        eps: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .global
        .resolve()
        .and_then(|settings| commands::run(&cli.command, &settings));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
