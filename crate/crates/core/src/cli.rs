//! `gwcacm curve | simulate | trace`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{branch_grid, GridSpec, RunConfig, Source};
use crate::error::{Error, Result};
use crate::gray_wyner::{generating_tuple, RateTuple};
use crate::harness::{curve_points, default_grid, render_csv, sweep, SimOptions};
use crate::quantity::{to_u64, Bits, Quantity};
use crate::source_model::{
    entropy_profile_pmf, entropy_profile_structured, make_structured_library, SourceSpec,
    PRNG_ID,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gwcacm", version, about = "Rate-memory curves for two-receiver caching of correlated files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic rate, lower bound and gap over a cache-size grid.
    Curve(CommonArgs),
    /// Bit-level simulation of every demand at every grid point.
    Simulate(CommonArgs),
    /// Caches, codeword and decoding steps for one cache size and demand.
    Trace(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Bits in the component shared by all three files.
    #[arg(long)]
    c0: Option<u64>,
    /// Bits in each pairwise component.
    #[arg(long)]
    cp: Option<u64>,
    /// Bits in each private component.
    #[arg(long)]
    cv: Option<u64>,
    /// Granularity of the memory-sharing lattice.
    #[arg(long)]
    q: Option<u64>,
    /// JSON joint pmf of (X1, X2, X3).
    #[arg(long, value_name = "PATH")]
    pmf: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// `default`, `per-regime:N` or a list such as `0,600,1200`.
    #[arg(long, value_name = "SPEC")]
    grid: Option<String>,
    /// Cache size in bits.
    #[arg(long = "M", value_name = "BITS")]
    m: Option<u64>,
    /// Demand pair such as `1,2`.
    #[arg(long, value_name = "D1,D2")]
    demand: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Rate tuple `rho0,rho_pair,rho_priv` for analytic curves.
    #[arg(long, value_name = "R0,RP,RV")]
    tuple: Option<String>,
    #[arg(long, hide = true)]
    tamper: bool,
}

impl CommonArgs {
    fn resolve(self) -> Result<(RunConfig, bool)> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            source: None,
            c0: self.c0,
            cp: self.cp,
            cv: self.cv,
            q: self.q,
            pmf: self.pmf,
            seed: self.seed,
            grid: self.grid,
            m: self.m,
            demand: self.demand,
            out: self.out,
            tuple: self.tuple,
        };
        Ok((base.merged(flags)?, self.tamper))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Curve(a) => a.resolve().and_then(|(c, _)| cmd_curve(&c, stdout)),
        Command::Simulate(a) => a.resolve().and_then(|(c, tamper)| {
            cmd_simulate(&c, SimOptions { tamper }, stdout)
        }),
        Command::Trace(a) => a.resolve().and_then(|(c, _)| cmd_trace(&c, stdout)),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Parse(format!("stdout: {e}"))),
    }
}

fn structured_grid(spec: &SourceSpec, g: &GridSpec) -> Result<Vec<u64>> {
    match g {
        GridSpec::Default => default_grid(spec, spec.granularity_q),
        GridSpec::PerRegime(n) => default_grid(spec, *n),
        GridSpec::Explicit(v) => v
            .iter()
            .map(|b| {
                to_u64(*b).ok_or_else(|| Error::Parse(format!(
                    "grid value {} is not a whole number of bits",
                    b.render()
                )))
            })
            .collect(),
    }
}

fn check_range<T: Quantity>(grid: &[T], t: &RateTuple<T>) -> Result<()> {
    let hi = t.sum_rate();
    for &m in grid {
        if m < T::zero() || m > hi {
            return Err(Error::OutOfRange {
                what: "M",
                value: m.render(),
                lo: "0".into(),
                hi: hi.render(),
            });
        }
    }
    Ok(())
}

/// Analytic CSV. Structured sources use the generating tuple unless `tuple` is set.
pub fn cmd_curve(c: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let csv = match c.resolve_source()? {
        Source::Structured(spec) => {
            let t = c.tuple()?.unwrap_or_else(|| generating_tuple(&spec));
            let grid: Vec<Bits> = match (c.grid_spec()?, c.tuple()?) {
                (GridSpec::Explicit(v), _) => v,
                (g, None) => structured_grid(&spec, &g)?
                    .into_iter()
                    .map(|m| Bits::from_integer(m as i64))
                    .collect(),
                (GridSpec::PerRegime(n), Some(_)) => branch_grid(&t, n),
                (GridSpec::Default, Some(_)) => branch_grid(&t, spec.granularity_q),
            };
            check_range(&grid, &t)?;
            render_csv(&curve_points(&t, &entropy_profile_structured(&spec), &grid)?, false)
        }
        Source::Pmf(src) => {
            let h = entropy_profile_pmf(&src)?;
            let t = match c.tuple()? {
                Some(t) => RateTuple::new(t.rho0.to_f64(), t.rho_pair.to_f64(), t.rho_priv.to_f64())?,
                None => RateTuple::new(h.h_triple, 0.0, 0.0)?,
            };
            let grid: Vec<f64> = match c.grid_spec()? {
                GridSpec::Default => branch_grid(&t, c.granularity()),
                GridSpec::PerRegime(n) => branch_grid(&t, n),
                GridSpec::Explicit(v) => v.iter().map(|b| b.to_f64()).collect(),
            };
            check_range(&grid, &t)?;
            render_csv(&curve_points(&t, &h, &grid)?, false)
        }
    };
    emit(c.out.as_deref(), &csv, stdout)?;
    Ok(EXIT_PASS)
}

fn structured_only(c: &RunConfig, what: &str) -> Result<SourceSpec> {
    match c.resolve_source()? {
        Source::Structured(spec) => Ok(spec),
        Source::Pmf(_) => Err(Error::InvalidSpec {
            field: "pmf",
            reason: format!(
                "{what} needs a structured source (--c0/--cp/--cv); a pmf has no bit-level library to encode"
            ),
        }),
    }
}

/// Simulated CSV followed by the PRNG line and the verdict.
pub fn cmd_simulate(c: &RunConfig, opts: SimOptions, stdout: &mut dyn Write) -> Result<i32> {
    let spec = structured_only(c, "simulate")?;
    if c.tuple.is_some() {
        return Err(Error::Parse(
            "--tuple applies to curve only; simulation runs at the generating tuple".into(),
        ));
    }
    let grid = structured_grid(&spec, &c.grid_spec()?)?;
    check_range(
        &grid.iter().map(|&m| Bits::from_integer(m as i64)).collect::<Vec<_>>(),
        &generating_tuple(&spec),
    )?;
    let seed = c.seed.unwrap_or(0);
    let res = sweep(&spec, seed, &grid, &opts)?;
    let csv = render_csv(&res.points, true);
    let tail = format!("# prng={PRNG_ID} seed={seed}\n{}\n", res.verdict);
    match c.out.as_deref() {
        Some(p) => {
            emit(Some(p), &csv, stdout)?;
            emit(None, &tail, stdout)?;
        }
        None => emit(None, &(csv + &tail), stdout)?,
    }
    Ok(if res.verdict.passed() { EXIT_PASS } else { EXIT_VIOLATION })
}

/// Human-readable trace at `M` for one demand.
pub fn cmd_trace(c: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let spec = structured_only(c, "trace")?;
    let m = c
        .m
        .ok_or_else(|| Error::Parse("trace needs --M".into()))?;
    let demand = c
        .demand()?
        .ok_or_else(|| Error::Parse("trace needs --demand".into()))?;
    let library = make_structured_library(spec, c.seed.unwrap_or(0))?;
    let tr = crate::trace::render_trace(&library, m, demand)?;
    emit(c.out.as_deref(), &tr.text, stdout)?;
    Ok(if tr.ok { EXIT_PASS } else { EXIT_VIOLATION })
}
