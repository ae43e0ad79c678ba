//! Run configuration: an optional TOML file merged with command-line flags.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use vvmf::{derive_params, enumerate_triples, PairFilter, ReprParams};

pub const DEFAULT_ORDER: usize = 200;
pub const DEFAULT_MAX_LEVEL: u64 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primes {
    /// The primes dividing `Q`.
    Auto,
    List(Vec<u64>),
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl FromStr for Primes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim() == "auto" {
            return Ok(Primes::Auto);
        }
        let list = s
            .split(',')
            .map(|t| {
                let p: u64 = t.trim().parse().map_err(|_| format!("bad prime {t:?}"))?;
                if is_prime(p) {
                    Ok(p)
                } else {
                    Err(format!("{p} is not prime"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Primes::List(list))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleSpec(pub u64, pub u64, pub u64);

impl FromStr for TripleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected a,b,N but got {s:?}"));
        };
        let num = |t: &str| t.parse::<u64>().map_err(|_| format!("bad integer {t:?} in {s:?}"));
        Ok(TripleSpec(num(a)?, num(b)?, num(n)?))
    }
}

/// `M,N` where either side may be `*` or `any`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSpec(pub PairFilter);

impl FromStr for PairSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [m, n] = parts[..] else {
            return Err(format!("expected M,N but got {s:?}"));
        };
        let side = |t: &str| -> Result<Option<u64>, String> {
            match t {
                "*" | "any" => Ok(None),
                _ => t.parse().map(Some).map_err(|_| format!("bad integer {t:?} in {s:?}")),
            }
        };
        let filter = PairFilter { proj_level: side(m)?, level: side(n)? };
        if filter.proj_level.is_none() && filter.level.is_none() {
            return Err("a pair filter needs M or N".into());
        }
        Ok(PairSpec(filter))
    }
}

impl std::fmt::Display for PairSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = |x: Option<u64>| x.map_or("any".to_string(), |v| v.to_string());
        write!(f, "{},{}", side(self.0.proj_level), side(self.0.level))
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// A triple `a,b,N` (repeatable).
    #[arg(long = "triple", value_name = "A,B,N")]
    pub triples: Vec<TripleSpec>,
    /// Every constraint-valid triple with this `(M, N)`; `*` or `any` leaves a side free.
    #[arg(long = "pair", value_name = "M,N")]
    pub pairs: Vec<PairSpec>,
    /// Truncation order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Horizon for valuation reports; at most the order.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// `auto` or a comma-separated list of primes.
    #[arg(long)]
    pub primes: Option<Primes>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output directory.
    #[arg(long = "out", value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Largest level scanned when no level is fixed.
    #[arg(long)]
    pub max_level: Option<u64>,
    /// TOML file with the same settings; flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    triples: Option<Vec<String>>,
    pairs: Option<Vec<String>>,
    order: Option<usize>,
    horizon: Option<usize>,
    primes: Option<String>,
    format: Option<Format>,
    output_dir: Option<PathBuf>,
    max_level: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub triples: Vec<TripleSpec>,
    pub pairs: Vec<PairSpec>,
    pub order: usize,
    pub horizon: usize,
    pub primes: Primes,
    pub format: Format,
    pub output_dir: Option<PathBuf>,
    pub max_level: u64,
}

fn parse_all<T: FromStr<Err = String>>(items: &[String]) -> Result<Vec<T>> {
    items.iter().map(|s| s.parse::<T>().map_err(anyhow::Error::msg)).collect()
}

impl RunConfig {
    pub fn from_args(args: RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str::<FileConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let triples = if args.triples.is_empty() {
            parse_all(file.triples.as_deref().unwrap_or_default())?
        } else {
            args.triples
        };
        let pairs = if args.pairs.is_empty() {
            parse_all(file.pairs.as_deref().unwrap_or_default())?
        } else {
            args.pairs
        };
        let primes = match (args.primes, file.primes) {
            (Some(p), _) => p,
            (None, Some(s)) => s.parse().map_err(anyhow::Error::msg)?,
            (None, None) => Primes::Auto,
        };
        let order = args.order.or(file.order).unwrap_or(DEFAULT_ORDER);
        let horizon = args.horizon.or(file.horizon).unwrap_or(order);
        let config = RunConfig {
            triples,
            pairs,
            order,
            horizon,
            primes,
            format: args.format.or(file.format).unwrap_or(Format::Json),
            output_dir: args.out.or(file.output_dir),
            max_level: args.max_level.or(file.max_level).unwrap_or(DEFAULT_MAX_LEVEL),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.order >= 1, "order must be at least 1");
        ensure!(self.horizon <= self.order, "horizon {} exceeds order {}", self.horizon, self.order);
        Ok(())
    }

    /// Explicit triples plus every triple matched by a pair filter, sorted
    /// and deduplicated. Every explicit triple must pass the basic
    /// preconditions.
    pub fn resolve(&self) -> Result<Vec<ReprParams>> {
        let mut params = Vec::new();
        for &TripleSpec(a, b, n) in &self.triples {
            params.push(derive_params(a, b, n)?);
        }
        for pair in &self.pairs {
            params.extend(enumerate_triples(Some(pair.0), self.max_level));
        }
        params.sort_by_key(|p| p.triple());
        params.dedup_by_key(|p| p.triple());
        Ok(params)
    }

    pub fn resolve_nonempty(&self) -> Result<Vec<ReprParams>> {
        if self.triples.is_empty() && self.pairs.is_empty() {
            bail!("no input: pass --triple a,b,N or --pair M,N");
        }
        self.resolve()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_specs() {
        assert_eq!("4,3,7".parse::<TripleSpec>().unwrap(), TripleSpec(4, 3, 7));
        assert!("4,3".parse::<TripleSpec>().is_err());
        let p: PairSpec = "6,any".parse().unwrap();
        assert_eq!(p.0, PairFilter { proj_level: Some(6), level: None });
        assert_eq!(p.to_string(), "6,any");
        assert_eq!("*,12".parse::<PairSpec>().unwrap().0.level, Some(12));
        assert!("*,*".parse::<PairSpec>().is_err());
        assert_eq!("7, 11".parse::<Primes>().unwrap(), Primes::List(vec![7, 11]));
        assert_eq!("auto".parse::<Primes>().unwrap(), Primes::Auto);
        assert!("9".parse::<Primes>().is_err());
    }

    #[test]
    fn defaults_and_limits() {
        let c = RunConfig::from_args(RunArgs::default()).unwrap();
        assert_eq!((c.order, c.horizon, c.format), (200, 200, Format::Json));
        let bad = RunArgs { order: Some(10), horizon: Some(11), ..RunArgs::default() };
        assert!(RunConfig::from_args(bad).is_err());
        assert!(RunConfig::from_args(RunArgs { order: Some(0), ..RunArgs::default() }).is_err());
    }

    #[test]
    fn resolve_sorts_and_rejects() {
        let args = RunArgs {
            triples: vec![TripleSpec(4, 3, 7), TripleSpec(1, 0, 2), TripleSpec(4, 3, 7)],
            ..RunArgs::default()
        };
        let c = RunConfig::from_args(args).unwrap();
        let t: Vec<_> = c.resolve().unwrap().iter().map(|p| p.triple()).collect();
        assert_eq!(t, vec![(1, 0, 2), (4, 3, 7)]);
        let bad = RunArgs { triples: vec![TripleSpec(3, 4, 7)], ..RunArgs::default() };
        assert!(RunConfig::from_args(bad).unwrap().resolve().is_err());
    }
}
