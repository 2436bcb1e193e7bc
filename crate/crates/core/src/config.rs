//! Run configuration: flag/JSON merging and the small text formats
//! (`--grid`, `--demand`, `--tuple`).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gray_wyner::RateTuple;
use crate::quantity::{parse_bits, Bits, Quantity};
use crate::source_model::{PmfSource, SourceSpec, DEFAULT_GRANULARITY};
use crate::subset::Demand;

/// How the cache-size grid is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridSpec {
    /// Breakpoints plus `q` steps per segment.
    Default,
    /// Breakpoints plus the given number of steps per segment.
    PerRegime(u64),
    Explicit(Vec<Bits>),
}

/// Parses `default`, `per-regime:N` or a comma-separated list of values.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty grid".into()));
    }
    if s == "default" {
        return Ok(GridSpec::Default);
    }
    if let Some(n) = s.strip_prefix("per-regime:") {
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("per-regime count {n:?} is not an integer")))?;
        if n == 0 {
            return Err(Error::Parse("per-regime count must be positive".into()));
        }
        return Ok(GridSpec::PerRegime(n));
    }
    let values = s
        .split(',')
        .map(|v| {
            let b = parse_bits(v).ok_or_else(|| Error::Parse(format!("grid value {v:?}")))?;
            if b < Bits::from_integer(0) {
                return Err(Error::Parse(format!("grid value {v:?} is negative")));
            }
            Ok(b)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSpec::Explicit(values))
}

/// Parses `rho0,rho_pair,rho_priv`.
pub fn parse_tuple(s: &str) -> Result<RateTuple> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("tuple {s:?} needs three comma-separated rates")));
    }
    let v = parts
        .iter()
        .map(|p| parse_bits(p).ok_or_else(|| Error::Parse(format!("rate {p:?}"))))
        .collect::<Result<Vec<_>>>()?;
    RateTuple::new(v[0], v[1], v[2])
}

/// JSON run configuration; every field mirrors a command-line flag.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub source: Option<SourceSpec>,
    pub c0: Option<u64>,
    pub cp: Option<u64>,
    pub cv: Option<u64>,
    pub q: Option<u64>,
    pub pmf: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    pub demand: Option<String>,
    pub out: Option<PathBuf>,
    pub tuple: Option<String>,
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("run config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn has_structured(&self) -> bool {
        self.source.is_some() || self.c0.is_some() || self.cp.is_some() || self.cv.is_some()
    }

    /// Overlays `flags` on `self`; flag values win.
    pub fn merged(self, flags: RunConfig) -> Result<RunConfig> {
        if flags.pmf.is_some() && flags.has_structured() {
            return Err(Error::Parse(
                "give either --pmf or --c0/--cp/--cv, not both".into(),
            ));
        }
        let (source, c0, cp, cv, pmf) = if flags.pmf.is_some() {
            (None, None, None, None, flags.pmf)
        } else if flags.has_structured() {
            (self.source, flags.c0.or(self.c0), flags.cp.or(self.cp), flags.cv.or(self.cv), None)
        } else {
            (self.source, self.c0, self.cp, self.cv, self.pmf)
        };
        Ok(RunConfig {
            source,
            c0,
            cp,
            cv,
            q: flags.q.or(self.q),
            pmf,
            seed: flags.seed.or(self.seed),
            grid: flags.grid.or(self.grid),
            m: flags.m.or(self.m),
            demand: flags.demand.or(self.demand),
            out: flags.out.or(self.out),
            tuple: flags.tuple.or(self.tuple),
        })
    }

    pub fn resolve_source(&self) -> Result<Source> {
        match (&self.pmf, self.has_structured()) {
            (Some(_), true) => Err(Error::Parse(
                "exactly one source definition is allowed (pmf or structured)".into(),
            )),
            (Some(path), false) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                Ok(Source::Pmf(PmfSource::from_json(&text)?))
            }
            (None, true) => {
                let base = self.source;
                let pick = |flat: Option<u64>, f: fn(&SourceSpec) -> u64| {
                    flat.or(base.as_ref().map(f)).unwrap_or(0)
                };
                let q = self
                    .q
                    .or(base.map(|b| b.granularity_q))
                    .unwrap_or(DEFAULT_GRANULARITY);
                Ok(Source::Structured(SourceSpec::new(
                    pick(self.c0, |s| s.c0),
                    pick(self.cp, |s| s.cp),
                    pick(self.cv, |s| s.cv),
                    q,
                )?))
            }
            (None, false) => Err(Error::Parse(
                "no source given: use --c0/--cp/--cv or --pmf".into(),
            )),
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        self.grid.as_deref().map_or(Ok(GridSpec::Default), parse_grid)
    }

    pub fn demand(&self) -> Result<Option<Demand>> {
        self.demand.as_deref().map(Demand::parse).transpose()
    }

    pub fn tuple(&self) -> Result<Option<RateTuple>> {
        self.tuple.as_deref().map(parse_tuple).transpose()
    }

    pub fn granularity(&self) -> u64 {
        self.q.unwrap_or(DEFAULT_GRANULARITY)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Structured(SourceSpec),
    Pmf(PmfSource),
}

/// Equally spaced points in every nonempty rate branch of `t`, with the breakpoints.
pub fn branch_grid<T: Quantity>(t: &RateTuple<T>, steps: u64) -> Vec<T> {
    let [b1, b2, b3] = crate::allocator::rate_breakpoints(t);
    let knots = [T::zero(), b1, b2, b3, t.sum_rate()];
    let mut out = vec![T::zero()];
    for w in knots.windows(2) {
        if w[1] > w[0] {
            for k in 1..=steps {
                out.push(w[0] + (w[1] - w[0]) * T::ratio(k as i64, steps as i64));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    out.dedup_by(|a, b| a.approx_eq(*b));
    out
}
