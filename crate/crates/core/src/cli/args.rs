//! Flag definitions shared by the command line and the TOML config file.
//!
//! Every option is optional at parse time; values are layered as
//! flag, then config file, then built-in default.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "gf2hash",
    version,
    about = "Linear-map hashing over GF(2): max-load experiments, exact oracles, bounds and checks"
)]
pub struct Cli {
    /// Master seed [default: $GF2HASH_SEED, else 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file [default: stdout].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo max load of uniform linear maps on a fixed ball set.
    Simulate(SimulateArgs),
    /// Exact largest-bin distribution by enumerating every linear map.
    Exact(ExactArgs),
    /// Evaluate the closed-form tail bounds over parameter grids.
    Bounds(BoundsArgs),
    /// Run the small-dimension verification suite.
    Verify(VerifyArgs),
    /// Drive the linear hash table with synthetic key workloads.
    TableBench(TableBenchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Exact(_) => "exact",
            Command::Bounds(_) => "bounds",
            Command::Verify(_) => "verify",
            Command::TableBench(_) => "table-bench",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Top-level layout of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub simulate: SimulateArgs,
    #[serde(default)]
    pub exact: ExactArgs,
    #[serde(default)]
    pub bounds: BoundsArgs,
    #[serde(default)]
    pub verify: VerifyArgs,
    #[serde(default)]
    pub table_bench: TableBenchArgs,
}

/// Field-wise fallback: keep `self`'s value where set, else take `other`'s.
macro_rules! layered {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            pub fn or(self, other: Self) -> Self {
                Self { $($field: self.$field.or(other.$field)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateArgs {
    /// Universe dimension u.
    #[arg(long)]
    pub u: Option<usize>,
    /// Bin dimensions b: a list such as `10,12` or a range `10..16[:step]`.
    #[arg(long)]
    pub b: Option<IntList>,
    /// interval | random | subspace | affine | cluster.
    #[arg(long)]
    pub set: Option<String>,
    /// Set cardinality: an integer, `2^k`, or `2^b` to follow each b.
    #[arg(long, conflicts_with = "set_dim")]
    pub set_size: Option<SizeSpec>,
    /// Dimension of subspace sets; also accepts `b`.
    #[arg(long)]
    pub set_dim: Option<SizeSpec>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Thresholds ℓ for tail frequencies P[lbin ≥ ℓ].
    #[arg(long)]
    pub thresholds: Option<IntList>,
}
layered!(SimulateArgs { u, b, set, set_size, set_dim, trials, thresholds });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExactArgs {
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub set: Option<String>,
    /// Set cardinality [default: 2^u].
    #[arg(long, conflicts_with = "set_dim")]
    pub set_size: Option<SizeSpec>,
    #[arg(long)]
    pub set_dim: Option<SizeSpec>,
    /// Thresholds ℓ [default: 1..|S|].
    #[arg(long)]
    pub thresholds: Option<IntList>,
}
layered!(ExactArgs { u, b, set, set_size, set_dim, thresholds });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BoundsArgs {
    /// c-epsilon, surjective-miss, e2, tail, ell-threshold, theorem2, or all.
    #[arg(long)]
    pub formula: Option<String>,
    #[arg(long)]
    pub u: Option<IntList>,
    #[arg(long)]
    pub t: Option<IntList>,
    #[arg(long)]
    pub b: Option<IntList>,
    #[arg(long)]
    pub f: Option<IntList>,
    #[arg(long)]
    pub r: Option<FloatList>,
    #[arg(long)]
    pub alpha: Option<FloatList>,
    #[arg(long)]
    pub eps: Option<FloatList>,
}
layered!(BoundsArgs { formula, u, t, b, f, r, alpha, eps });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VerifyArgs {
    /// Run a single check instead of the whole suite.
    #[arg(long)]
    pub check: Option<String>,
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long)]
    pub f: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Uniform T0 draws for the composition chi-square test.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Random instances for the E2, implication and subspace checks.
    #[arg(long)]
    pub instances: Option<usize>,
    /// Flip one bit of every composed matrix (negative control).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub inject_fault: Option<bool>,
}
layered!(VerifyArgs { check, u, f, b, samples, instances, inject_fault });

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TableBenchArgs {
    /// Key dimension u.
    #[arg(long)]
    pub u: Option<usize>,
    /// Initial bucket bits [default: ⌈log₂ n⌉, at least 1].
    #[arg(long)]
    pub b: Option<usize>,
    /// Key counts, e.g. `0,1024,2^16`.
    #[arg(long)]
    pub n: Option<IntList>,
    /// Comma-separated workloads: random, interval, subspace.
    #[arg(long)]
    pub keys: Option<String>,
    /// Use a linear map (zero translation) as the initial hash.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub linear: Option<bool>,
}
layered!(TableBenchArgs { u, b, n, keys, linear });

fn parse_int(token: &str) -> Result<u64, String> {
    let token = token.trim();
    if let Some(k) = token.strip_prefix("2^") {
        let k: u32 = k.parse().map_err(|_| format!("bad exponent in {token:?}"))?;
        return 1u64.checked_shl(k).ok_or_else(|| format!("{token} overflows"));
    }
    token.parse().map_err(|_| format!("expected an integer, got {token:?}"))
}

/// Integers given as a comma list whose items are `n`, `2^k` or an
/// inclusive range `lo..hi[:step]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListSource", into = "Vec<u64>")]
pub struct IntList(pub Vec<u64>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut values = Vec::new();
        for item in s.split(',').filter(|t| !t.trim().is_empty()) {
            match item.split_once("..") {
                Some((lo, rest)) => {
                    let (hi, step) = match rest.split_once(':') {
                        Some((hi, step)) => (hi, parse_int(step)?),
                        None => (rest, 1),
                    };
                    if step == 0 {
                        return Err("range step must be positive".into());
                    }
                    let (lo, hi) = (parse_int(lo)?, parse_int(hi)?);
                    values.extend((lo..=hi).step_by(step as usize));
                }
                None => values.push(parse_int(item)?),
            }
        }
        if values.is_empty() {
            return Err("empty list".into());
        }
        Ok(IntList(values))
    }
}

impl From<IntList> for Vec<u64> {
    fn from(list: IntList) -> Self {
        list.0
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ListSource {
    Int(u64),
    Ints(Vec<u64>),
    Text(String),
}

impl TryFrom<ListSource> for IntList {
    type Error = String;

    fn try_from(src: ListSource) -> Result<Self, String> {
        match src {
            ListSource::Int(n) => Ok(IntList(vec![n])),
            ListSource::Ints(v) if !v.is_empty() => Ok(IntList(v)),
            ListSource::Ints(_) => Err("empty list".into()),
            ListSource::Text(s) => s.parse(),
        }
    }
}

/// Reals given as a comma list; items may also be `2^k` or integer ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FloatSource", into = "Vec<f64>")]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut values = Vec::new();
        for item in s.split(',').filter(|t| !t.trim().is_empty()) {
            match item.trim().parse::<f64>() {
                Ok(x) => values.push(x),
                Err(_) => values.extend(item.parse::<IntList>()?.0.into_iter().map(|n| n as f64)),
            }
        }
        if values.is_empty() {
            return Err("empty list".into());
        }
        Ok(FloatList(values))
    }
}

impl From<FloatList> for Vec<f64> {
    fn from(list: FloatList) -> Self {
        list.0
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FloatSource {
    Num(f64),
    Nums(Vec<f64>),
    Text(String),
}

impl TryFrom<FloatSource> for FloatList {
    type Error = String;

    fn try_from(src: FloatSource) -> Result<Self, String> {
        match src {
            FloatSource::Num(x) => Ok(FloatList(vec![x])),
            FloatSource::Nums(v) if !v.is_empty() => Ok(FloatList(v)),
            FloatSource::Nums(_) => Err("empty list".into()),
            FloatSource::Text(s) => s.parse(),
        }
    }
}

/// A set size or dimension that may follow the bin dimension:
/// `n`, `2^k`, `b` or `2^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ListSource", into = "String")]
pub enum SizeSpec {
    Fixed(u64),
    B,
    PowB,
}

impl SizeSpec {
    pub fn resolve(self, b: usize) -> Result<usize, String> {
        match self {
            SizeSpec::Fixed(n) => usize::try_from(n).map_err(|_| format!("{n} is too large")),
            SizeSpec::B => Ok(b),
            SizeSpec::PowB => 1usize
                .checked_shl(b as u32)
                .filter(|_| b < usize::BITS as usize)
                .ok_or_else(|| format!("2^{b} is too large")),
        }
    }
}

impl FromStr for SizeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "b" => Ok(SizeSpec::B),
            "2^b" => Ok(SizeSpec::PowB),
            other => parse_int(other).map(SizeSpec::Fixed),
        }
    }
}

impl fmt::Display for SizeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeSpec::Fixed(n) => write!(f, "{n}"),
            SizeSpec::B => f.write_str("b"),
            SizeSpec::PowB => f.write_str("2^b"),
        }
    }
}

impl From<SizeSpec> for String {
    fn from(s: SizeSpec) -> Self {
        s.to_string()
    }
}

impl TryFrom<ListSource> for SizeSpec {
    type Error = String;

    fn try_from(src: ListSource) -> Result<Self, String> {
        match src {
            ListSource::Int(n) => Ok(SizeSpec::Fixed(n)),
            ListSource::Text(s) => s.parse(),
            ListSource::Ints(_) => Err("expected a single size".into()),
        }
    }
}
