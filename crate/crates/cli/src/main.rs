//! `qratio` command-line front end.
//!
//! Exit codes: 0 success, 1 suite or validation failure, 2 usage error, 3 I/O error.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use qratio_core::arith::FactorSieve;
use qratio_core::empirical::{compare, empirical, LValueMemo, SweepConfig};
use qratio_core::eulerprod::EulerProductSpec;
use qratio_core::harness::{format_report, parse_config, run_suite, LCache, Suite};
use qratio_core::predict::{predict, Family, Shifts};
use qratio_core::special::WeightSpec;

#[derive(Parser, Debug)]
#[command(name = "qratio", version, about = "Ratios of quadratic L-functions: predictions and desk-scale sweeps")]
struct Cli {
    /// Flat `key = value` file supplying defaults for any flag (flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run every self-check suite.
    Selfcheck {
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Run one self-check suite.
    Verify {
        #[arg(value_parser = suite_name)]
        suite: Suite,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Print the two predicted main terms at one X.
    Predict {
        #[command(flatten)]
        shifts: ShiftArgs,
        #[arg(long)]
        x: Option<f64>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Evaluate the smoothed sum at one X.
    Empirical {
        #[command(flatten)]
        shifts: ShiftArgs,
        #[arg(long)]
        x: Option<f64>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Sweep an X grid and write the comparison report.
    Compare {
        #[command(flatten)]
        shifts: ShiftArgs,
        /// Comma-separated ascending list, e.g. `1e3,1e4,1e5`.
        #[arg(long)]
        x_grid: Option<String>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Build a factor sieve and print its statistics.
    SieveInfo {
        #[arg(long)]
        limit: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct ShiftArgs {
    /// 1 to 4.
    #[arg(long)]
    theorem: Option<u8>,
    /// Numerator shift for theorems 1 and 2, e.g. `0.2` or `0.2+0.5i`.
    #[arg(long)]
    alpha: Option<Complex64>,
    /// Denominator shift for theorems 1 and 2.
    #[arg(long)]
    beta: Option<Complex64>,
    /// Single shift for theorems 3 and 4.
    #[arg(long)]
    r: Option<Complex64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    threads: Option<usize>,
    /// Persistent L-value cache file.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Moduli up to `cap_factor · X` are summed.
    #[arg(long)]
    cap_factor: Option<f64>,
    /// Largest modulus evaluated by Hurwitz decomposition.
    #[arg(long)]
    hurwitz_max: Option<u64>,
}

#[derive(Args, Debug)]
struct Tuning {
    /// Primes up to this bound enter the Euler products explicitly.
    #[arg(long)]
    prime_cutoff: Option<u64>,
}

fn suite_name(s: &str) -> std::result::Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// Bad flag combinations detected after parsing; exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

/// A failed self-check; exit code 1 without an extra message.
#[derive(Debug)]
struct SuiteFailure;

impl fmt::Display for SuiteFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("self-check failed")
    }
}

impl std::error::Error for SuiteFailure {}

const CONFIG_KEYS: [&str; 12] =
    ["theorem", "alpha", "beta", "r", "x", "x_grid", "out", "threads", "cache", "cap_factor", "hurwitz_max", "prime_cutoff"];

/// Config-file values; a flag given on the command line always takes precedence.
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Config> {
        let Some(p) = path else {
            return Ok(Config(BTreeMap::new()));
        };
        let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
        let map = parse_config(&text).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
        if let Some(k) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return usage(format!("{}: unknown key {k:?}", p.display()));
        }
        Ok(Config(map))
    }

    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Usage(format!("config key {key}: cannot parse {v:?}")).into()),
        }
    }
}

fn resolve_shifts(a: &ShiftArgs, cfg: &Config) -> Result<(Family, Shifts)> {
    let Some(n) = cfg.pick(a.theorem, "theorem")? else {
        return usage("--theorem is required");
    };
    let Some(family) = Family::from_number(n) else {
        return usage(format!("--theorem must be 1, 2, 3 or 4, got {n}"));
    };
    let alpha = cfg.pick(a.alpha, "alpha")?;
    let beta = cfg.pick(a.beta, "beta")?;
    let r = cfg.pick(a.r, "r")?;
    let sh = if family.is_log_derivative() {
        if alpha.is_some() || beta.is_some() {
            return usage(format!("theorem {n} takes a single shift --r, not --alpha/--beta"));
        }
        match r {
            Some(r) => Shifts::single(r),
            None => return usage(format!("theorem {n} takes r: pass --r")),
        }
    } else {
        if r.is_some() {
            return usage(format!("theorem {n} takes --alpha and --beta, not --r"));
        }
        match (alpha, beta) {
            (Some(a), Some(b)) => Shifts::new(a, b),
            _ => return usage(format!("theorem {n} needs both --alpha and --beta")),
        }
    };
    Ok((family, sh))
}

fn euler_spec(t: &Tuning, cfg: &Config) -> Result<EulerProductSpec> {
    let mut spec = EulerProductSpec::default();
    if let Some(p) = cfg.pick(t.prime_cutoff, "prime_cutoff")? {
        spec.prime_cutoff = p;
    }
    Ok(spec)
}

fn sweep_config(x: f64, family: Family, sh: Shifts, s: &SweepArgs, cfg: &Config) -> Result<SweepConfig> {
    let mut sc = SweepConfig::new(x, family, sh);
    sc.workers = cfg.pick(s.threads, "threads")?.unwrap_or(1).max(1);
    if let Some(c) = cfg.pick(s.cap_factor, "cap_factor")? {
        sc.cap_factor = c;
    }
    if let Some(h) = cfg.pick(s.hurwitz_max, "hurwitz_max")? {
        sc.hurwitz_max = h;
    }
    Ok(sc)
}

fn open_cache(s: &SweepArgs, cfg: &Config) -> Result<Option<LCache>> {
    match cfg.pick(s.cache.clone(), "cache")? {
        None => Ok(None),
        Some(p) => Ok(Some(LCache::open(&p).with_context(|| format!("opening cache {}", p.display()))?)),
    }
}

/// Sieve covering every modulus summed at the largest `X`.
fn sieve_for(sc: &SweepConfig, x_max: f64) -> FactorSieve {
    FactorSieve::new(sc.with_x(x_max).n_cap().max(1000))
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Usage(format!("--x-grid: cannot parse {t:?}")).into()))
        .collect()
}

fn fmt_c(z: Complex64) -> String {
    format!("{:e}{:+e}i", z.re, z.im)
}

fn echo_meta(family: Family, sh: Shifts, sc: &SweepConfig, spec: EulerProductSpec) -> Vec<(String, String)> {
    let mut m = Vec::new();
    if family.is_log_derivative() {
        m.push(("r".into(), fmt_c(sh.alpha)));
    } else {
        m.push(("alpha".into(), fmt_c(sh.alpha)));
        m.push(("beta".into(), fmt_c(sh.beta)));
    }
    m.push(("threads".into(), sc.workers.to_string()));
    m.push(("cap_factor".into(), format!("{:e}", sc.cap_factor)));
    m.push(("hurwitz_max".into(), sc.hurwitz_max.to_string()));
    m.push(("prime_cutoff".into(), spec.prime_cutoff.to_string()));
    m.push(("weight".into(), "exp(-x)".into()));
    m
}

fn flush(cache: &Option<LCache>) -> Result<()> {
    if let Some(c) = cache {
        c.flush().context("flushing cache")?;
    }
    Ok(())
}

fn run_suites(suites: &[Suite], fault: bool) -> Result<()> {
    let t0 = Instant::now();
    let mut ok = true;
    for &s in suites {
        let res = run_suite(s, fault);
        println!("{}", res.line());
        ok &= res.passed();
    }
    eprintln!("self-check finished in {:.1}s", t0.elapsed().as_secs_f64());
    if ok {
        Ok(())
    } else {
        Err(SuiteFailure.into())
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.cmd {
        Cmd::Selfcheck { inject_fault } => run_suites(&Suite::ALL, inject_fault),
        Cmd::Verify { suite, inject_fault } => run_suites(&[suite], inject_fault),
        Cmd::Predict { shifts, x, tuning } => {
            let (family, sh) = resolve_shifts(&shifts, &cfg)?;
            let Some(x) = cfg.pick(x, "x")? else {
                return usage("--x is required");
            };
            let p = predict(family, x, sh, WeightSpec::Exponential, euler_spec(&tuning, &cfg)?)?;
            println!("term1 = {}", fmt_c(p.term1));
            println!("term2 = {}", fmt_c(p.term2));
            println!("total = {}", fmt_c(p.total()));
            println!("error_exponent = {:e}", p.error_exponent);
            Ok(())
        }
        Cmd::Empirical { shifts, x, sweep } => {
            let (family, sh) = resolve_shifts(&shifts, &cfg)?;
            let Some(x) = cfg.pick(x, "x")? else {
                return usage("--x is required");
            };
            let sc = sweep_config(x, family, sh, &sweep, &cfg)?;
            sc.validate()?;
            let cache = open_cache(&sweep, &cfg)?;
            let sieve = sieve_for(&sc, x);
            let v = empirical(&sc, &sieve, cache.as_ref().map(|c| c as &dyn LValueMemo));
            if let Some(c) = &cache {
                c.commit();
            }
            flush(&cache)?;
            println!("empirical = {}", fmt_c(v?));
            Ok(())
        }
        Cmd::Compare { shifts, x_grid, out, sweep, tuning } => {
            let (family, sh) = resolve_shifts(&shifts, &cfg)?;
            let Some(grid) = cfg.pick(x_grid, "x_grid")? else {
                return usage("--x-grid is required");
            };
            let grid = parse_grid(&grid)?;
            if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
                return usage("--x-grid must be strictly ascending");
            }
            let spec = euler_spec(&tuning, &cfg)?;
            let sc = sweep_config(grid[0], family, sh, &sweep, &cfg)?;
            sc.validate()?;
            let out = cfg.pick(out, "out")?;
            let cache = open_cache(&sweep, &cfg)?;
            let sieve = sieve_for(&sc, grid[grid.len() - 1]);
            let t0 = Instant::now();
            let rep = compare(&grid, &sc, spec, &sieve, cache.as_ref().map(|c| c as &dyn LValueMemo));
            flush(&cache)?;
            let text = format_report(&rep?, &echo_meta(family, sh, &sc, spec));
            match out {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing report {}", p.display()))?,
                None => print!("{text}"),
            }
            eprintln!("compare finished in {:.1}s", t0.elapsed().as_secs_f64());
            Ok(())
        }
        Cmd::SieveInfo { limit } => {
            let limit = limit.unwrap_or(1_000_000);
            let t0 = Instant::now();
            let sieve = FactorSieve::new(limit);
            let secs = t0.elapsed().as_secs_f64();
            let fd = sieve.enumerate_fundamental_discriminants(limit)?;
            println!("limit = {}", sieve.limit());
            println!("primes = {}", sieve.primes().count());
            println!("fundamental_discriminants = {}", fd.len());
            println!("build_seconds = {secs:.3}");
            Ok(())
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 3;
    }
    match e.downcast_ref::<qratio_core::Error>() {
        Some(qratio_core::Error::Io(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<SuiteFailure>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
