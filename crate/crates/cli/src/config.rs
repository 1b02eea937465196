//! Flags, the optional JSON config file, and environment defaults.
//!
//! Precedence: command-line flag, then config file, then environment, then
//! built-in default.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use whittaker_core::classical::{QuadratureConfig, Scheme};
use whittaker_core::scaling::IntegerPart;
use whittaker_core::whittaker::parse_rational;
use whittaker_core::{BigRational, GaussianRational};

use crate::error::CliError;

pub const TRUNCATION_ENV: &str = "WHITTAKER_TRUNCATION";
pub const NODES_ENV: &str = "WHITTAKER_NODES";
pub const DEFAULT_TRUNCATION: usize = 20;
pub const MAX_RANK: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiMethod {
    #[default]
    Direct,
    Recursive,
    /// `Delta(p) Psi` as a formal series with a positivity check.
    Character,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[value(rename_all = "kebab-case")]
pub enum IntegerPartArg {
    Floor,
    TowardZero,
}

impl From<IntegerPartArg> for IntegerPart {
    fn from(v: IntegerPartArg) -> Self {
        match v {
            IntegerPartArg::Floor => IntegerPart::Floor,
            IntegerPartArg::TowardZero => IntegerPart::TowardZero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Trapezoid,
    Simpson,
}

impl From<SchemeArg> for Scheme {
    fn from(v: SchemeArg) -> Self {
        match v {
            SchemeArg::Trapezoid => Scheme::Trapezoid,
            SchemeArg::Simpson => Scheme::Simpson,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunctionArg {
    Gaussian,
    Constant,
}

/// Every option any subcommand understands; each subcommand reads the ones it needs.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// Only meaningful in a config file, where it must match the subcommand.
    #[arg(skip)]
    pub subcommand: Option<String>,

    /// gl(rank); inferred from the other inputs when omitted
    #[arg(long)]
    pub rank: Option<usize>,

    /// Highest weight as comma-separated integers; repeat for several weights
    #[arg(long = "weight", allow_hyphen_values = true, value_parser = parse_int_list)]
    pub weights: Vec<Vec<i64>>,

    /// All dominant weights with last entry 0 and spread at most this (needs --rank)
    #[arg(long)]
    pub max_spread: Option<i64>,

    /// Exact spectral values, comma-separated; "a/b" or "re:im" for complex
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub z: Option<Vec<String>>,

    /// Exact rational q such as 1/2
    #[arg(long)]
    pub q: Option<String>,

    /// Epsilon values with q = e^{-eps}, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,

    /// Spectral parameters lambda, comma-separated reals
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,

    /// Coordinates x, comma-separated reals
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,

    /// Shifts y for the asymptotics table, comma-separated reals
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub y: Option<Vec<f64>>,

    /// Epsilon values for the eta identity check, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub eta_eps: Option<Vec<f64>>,

    /// Order of truncation in q for formal series
    #[arg(long)]
    pub truncation: Option<usize>,

    /// Quadrature nodes per axis (odd, at least 9)
    #[arg(long)]
    pub nodes: Option<usize>,

    /// Half-width of the quadrature window per axis
    #[arg(long)]
    pub half_width: Option<f64>,

    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,

    /// Relative tolerance of the two-resolution quadrature check
    #[arg(long)]
    pub tolerance: Option<f64>,

    /// Finite-difference steps for the classical eigen-check, comma-separated
    #[arg(long, value_delimiter = ',')]
    pub step: Option<Vec<f64>>,

    #[arg(long, value_enum)]
    pub method: Option<PsiMethod>,

    /// Reading of the integer part in m(eps)
    #[arg(long, value_enum)]
    pub integer_part: Option<IntegerPartArg>,

    /// Test function for hamlimit
    #[arg(long, value_enum)]
    pub test_function: Option<TestFunctionArg>,

    /// Worker threads (default: all cores); results do not depend on it
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// JSON file with any of these options (kebab-case keys); flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {t:?}")))
        .collect()
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    /// Reads `--config` if given and lays the flags over it.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let mut base = match &self.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        let flags = self;
        if !flags.weights.is_empty() {
            base.weights = flags.weights;
        }
        overlay!(base, flags; rank, max_spread, z, q, eps, lambda, x, y, eta_eps, truncation, nodes, half_width,
            scheme, tolerance, step, method, integer_part, test_function, threads, format, out);
        base.validate()?;
        Ok(base)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(r) = self.rank {
            if r == 0 || r > MAX_RANK {
                return Err(CliError::invalid(format!("--rank must be in 1..={MAX_RANK}, got {r}")));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::invalid("--threads must be positive"));
        }
        if let Some(s) = self.max_spread {
            if s < 0 {
                return Err(CliError::invalid("--max-spread must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// Checks the declared rank against an input length, or infers it.
    pub fn rank_for(&self, what: &str, len: usize) -> Result<usize, CliError> {
        match self.rank {
            Some(r) if r != len => Err(CliError::invalid(format!("--{what} has {len} entries but --rank is {r}"))),
            _ if len == 0 || len > MAX_RANK => {
                Err(CliError::invalid(format!("--{what} must have 1..={MAX_RANK} entries, got {len}")))
            }
            _ => Ok(len),
        }
    }

    pub fn require_rank(&self) -> Result<usize, CliError> {
        self.rank.ok_or_else(|| CliError::invalid("--rank is required here"))
    }

    pub fn truncation(&self) -> Result<usize, CliError> {
        match self.truncation {
            Some(t) => Ok(t),
            None => env_usize(TRUNCATION_ENV).map(|v| v.unwrap_or(DEFAULT_TRUNCATION)),
        }
    }

    pub fn quadrature(&self, rank: usize) -> Result<QuadratureConfig, CliError> {
        let mut cfg = QuadratureConfig::for_rank(rank);
        if let Some(n) = match self.nodes {
            Some(n) => Some(n),
            None => env_usize(NODES_ENV)?,
        } {
            cfg.nodes = n;
        }
        if let Some(r) = self.half_width {
            cfg.half_width = r;
        }
        if let Some(s) = self.scheme {
            cfg.scheme = s.into();
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn integer_part(&self) -> IntegerPart {
        self.integer_part.map(Into::into).unwrap_or_default()
    }

    pub fn rational_q(&self) -> Result<Option<BigRational>, CliError> {
        self.q
            .as_deref()
            .map(|s| parse_rational(s).ok_or_else(|| CliError::invalid(format!("--q is not a rational: {s:?}"))))
            .transpose()
    }

    pub fn exact_z(&self) -> Result<Option<Vec<GaussianRational>>, CliError> {
        self.z.as_ref().map(|zs| zs.iter().map(|s| parse_gaussian(s)).collect()).transpose()
    }

    pub fn eps_list(&self) -> Result<Vec<f64>, CliError> {
        let e = self.eps.clone().ok_or_else(|| CliError::invalid("--eps is required here"))?;
        if e.is_empty() {
            return Err(CliError::invalid("--eps is empty"));
        }
        Ok(e)
    }

    pub fn single_eps(&self) -> Result<Option<f64>, CliError> {
        match self.eps.as_deref() {
            None => Ok(None),
            Some([e]) => Ok(Some(*e)),
            Some(_) => Err(CliError::invalid("this subcommand takes a single --eps value")),
        }
    }
}

fn env_usize(name: &str) -> Result<Option<usize>, CliError> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::invalid(format!("{name} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("bad config {}: {e}", path.display())))
}

/// `a/b`, a decimal, or `re:im` with both parts of that form.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational, CliError> {
    let bad = || CliError::invalid(format!("not an exact spectral value: {s:?}"));
    match s.split_once(':') {
        Some((re, im)) => Ok(GaussianRational::new(
            parse_rational(re.trim()).ok_or_else(bad)?,
            parse_rational(im.trim()).ok_or_else(bad)?,
        )),
        None => Ok(GaussianRational::real(parse_rational(s.trim()).ok_or_else(bad)?)),
    }
}
