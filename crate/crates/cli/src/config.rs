use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Serialize;
use wald_core::scalars::Rational;
use wald_core::series::is_odd_prime;
use wald_core::torus::EtaleKind;
use wald_core::CharacterParams;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn parse_kind(s: &str) -> Result<EtaleKind, String> {
    EtaleKind::from_str(s).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|_| format!("not a rational number: {s}"))
}

/// Options shared by every campaign. Each flag can also be set through a
/// `WALD_`-prefixed environment variable.
#[derive(Debug, Clone, Args)]
pub struct SessionConfig {
    #[arg(long, env = "WALD_Q", default_value_t = 3)]
    pub q: u64,
    #[arg(long, env = "WALD_KIND", default_value = "split", value_parser = parse_kind)]
    pub kind: EtaleKind,
    #[arg(long, env = "WALD_DMAX", default_value_t = 3)]
    pub dmax: u32,
    /// Largest orbit index; defaults to `dmax`.
    #[arg(long, env = "WALD_MMAX")]
    pub mmax: Option<u32>,
    /// Truncation bound for matrices and the K_E check.
    #[arg(long = "D", env = "WALD_D", default_value_t = 6)]
    pub truncation: u32,
    #[arg(long, env = "WALD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "WALD_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, env = "WALD_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, env = "WALD_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Random parameter draws for the K_E check when no values are given.
    #[arg(long, env = "WALD_DRAWS", default_value_t = 20)]
    pub draws: u32,
    #[arg(long, env = "WALD_E1", value_parser = parse_rational)]
    pub e1: Option<Rational>,
    #[arg(long, env = "WALD_ALPHA", value_parser = parse_rational)]
    pub alpha: Option<Rational>,
    #[arg(long, env = "WALD_BETA", value_parser = parse_rational)]
    pub beta: Option<Rational>,
    #[arg(long, env = "WALD_GAMMA", value_parser = parse_rational)]
    pub gamma: Option<Rational>,
    /// Exact value substituted for sqrt(q); test runs only.
    #[arg(long, env = "WALD_R", value_parser = parse_rational)]
    pub r: Option<Rational>,
    #[arg(long, env = "WALD_PRECISION", default_value_t = 6)]
    pub precision: u32,
    #[arg(long, env = "WALD_TRANSFORMS", default_value_t = 200)]
    pub transforms: u32,
}

impl SessionConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !is_odd_prime(self.q) {
            return Err(CliError::ConfigInvalid(format!("q = {} is not an odd prime", self.q)));
        }
        if self.workers == Some(0) {
            return Err(CliError::ConfigInvalid("workers must be positive".into()));
        }
        if self.precision == 0 {
            return Err(CliError::ConfigInvalid("precision must be positive".into()));
        }
        if let Some(r) = &self.r {
            if r * r != Rational::from_integer(self.q.into()) {
                return Err(CliError::ConfigInvalid(format!("r = {r} does not square to q")));
            }
        }
        Ok(())
    }

    pub fn mmax(&self) -> u32 {
        self.mmax.unwrap_or(self.dmax)
    }

    /// Character values given on the command line, if complete for the kind.
    pub fn explicit_character(&self) -> Option<(Rational, CharacterParams)> {
        let e1 = self.e1.clone()?;
        let mut p = match self.kind {
            EtaleKind::Split => CharacterParams::split(self.alpha.clone()?, self.beta.clone()?),
            EtaleKind::Ramified => CharacterParams::ramified(self.gamma.clone()?),
        };
        p.r = self.r.clone();
        Some((e1, p))
    }
}
