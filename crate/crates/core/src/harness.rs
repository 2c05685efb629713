//! Comparison reports, the persistent L-value cache, flat config files and the
//! self-check suites behind `selfcheck` and `verify`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};
use std::time::Instant;

use num_complex::Complex64;

use crate::arith::FactorSieve;
use crate::empirical::{LValueMemo, Quantity};
use crate::error::{Error, Result};
use crate::eulerprod::{a_d_arith_factor, p_big, p_d, p_d2, residue_s1_a, residue_s1_ad, EulerProductSpec};
use crate::gauss::{g_normalizer, g_quadratic, tau_bruteforce, PeriodicChar};
use crate::lfunc::{funceq_gauss_check, l_d, theta_funceq_check, LFamily, LValueRecord, Method};
use crate::predict::{Family, Shifts};
use crate::special::{gamma, gamma_e, gamma_o, go_plus_ge, zeta, zeta_removed};

// ---------------------------------------------------------------- reports

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    pub shifts: Shifts,
    pub empirical: Complex64,
    pub term1: Complex64,
    pub term2: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub family: Family,
    /// Ascending in `x`.
    pub rows: Vec<ComparisonRow>,
    /// Slope of `log abs_err` against `log X` over rows with `X ≥ 10³`.
    pub fitted_slope: Option<f64>,
    pub theorem_exponent: f64,
}

pub const REPORT_COLUMNS: [&str; 13] =
    ["X", "alpha_re", "alpha_im", "beta_re", "beta_im", "emp_re", "emp_im", "t1_re", "t1_im", "t2_re", "t2_im", "abs_err", "rel_err"];

/// Comma-separated table followed by `# key = value` metadata lines. Numbers use the
/// shortest representation that parses back to the same bits.
pub fn format_report(report: &ComparisonReport, extra_meta: &[(String, String)]) -> String {
    let mut out = REPORT_COLUMNS.join(",");
    out.push('\n');
    for r in &report.rows {
        let vals = [
            r.x,
            r.shifts.alpha.re,
            r.shifts.alpha.im,
            r.shifts.beta.re,
            r.shifts.beta.im,
            r.empirical.re,
            r.empirical.im,
            r.term1.re,
            r.term1.im,
            r.term2.re,
            r.term2.im,
            r.abs_err,
            r.rel_err,
        ];
        let line: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    let _ = writeln!(out, "# theorem = {}", report.family.number());
    match report.fitted_slope {
        Some(s) => {
            let _ = writeln!(out, "# fitted_slope = {s:e}");
        }
        None => out.push_str("# fitted_slope = none\n"),
    }
    let _ = writeln!(out, "# theorem_exponent = {:e}", report.theorem_exponent);
    for (k, v) in extra_meta {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

/// Inverse of [`format_report`]; extra metadata is returned separately.
pub fn parse_report(text: &str) -> Result<(ComparisonReport, BTreeMap<String, String>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty report".into()))?;
    if header.split(',').map(str::trim).ne(REPORT_COLUMNS.iter().copied()) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    let mut meta = BTreeMap::new();
    for line in lines {
        if let Some(m) = line.strip_prefix('#') {
            if let Some((k, v)) = m.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line.split(',').map(parse_f64).collect::<Result<_>>()?;
        if v.len() != REPORT_COLUMNS.len() {
            return Err(Error::Parse(format!("row has {} fields", v.len())));
        }
        rows.push(ComparisonRow {
            x: v[0],
            shifts: Shifts::new(Complex64::new(v[1], v[2]), Complex64::new(v[3], v[4])),
            empirical: Complex64::new(v[5], v[6]),
            term1: Complex64::new(v[7], v[8]),
            term2: Complex64::new(v[9], v[10]),
            abs_err: v[11],
            rel_err: v[12],
        });
    }
    let take = |k: &str, meta: &mut BTreeMap<String, String>| meta.remove(k).ok_or_else(|| Error::Parse(format!("missing metadata {k}")));
    let theorem: u8 = take("theorem", &mut meta)?.parse().map_err(|_| Error::Parse("bad theorem".into()))?;
    let family = Family::from_number(theorem).ok_or_else(|| Error::Parse(format!("unknown theorem {theorem}")))?;
    let slope = take("fitted_slope", &mut meta)?;
    let fitted_slope = if slope == "none" { None } else { Some(parse_f64(&slope)?) };
    let theorem_exponent = parse_f64(&take("theorem_exponent", &mut meta)?)?;
    Ok((ComparisonReport { family, rows, fitted_slope, theorem_exponent }, meta))
}

// ---------------------------------------------------------------- cache

pub const CACHE_VERSION: &str = "1";
const CACHE_MAGIC: &str = "qratio-lcache";
const LOG_DERIVATIVE_SUFFIX: &str = "/log-derivative";

/// One cached value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheRecord {
    pub quantity: Quantity,
    pub record: LValueRecord,
}

type Key = (Quantity, LFamily, u64, i64, i64);

fn quantize(x: f64) -> i64 {
    (x * 1e12).round() as i64
}

fn key(quantity: Quantity, family: LFamily, modulus: u64, s: Complex64) -> Key {
    (quantity, family, modulus, quantize(s.re), quantize(s.im))
}

impl CacheRecord {
    fn key(&self) -> Key {
        key(self.quantity, self.record.family, self.record.modulus, self.record.s)
    }

    fn family_tag(&self) -> String {
        match self.quantity {
            Quantity::Value => self.record.family.tag().to_string(),
            Quantity::LogDerivative => format!("{}{LOG_DERIVATIVE_SUFFIX}", self.record.family.tag()),
        }
    }

    /// One self-describing `key=value` line.
    pub fn to_line(&self) -> String {
        let r = &self.record;
        format!(
            "family={} modulus={} s_re={:e} s_im={:e} val_re={:e} val_im={:e} method={} err_est={:e} version={CACHE_VERSION}",
            self.family_tag(),
            r.modulus,
            r.s.re,
            r.s.im,
            r.value.re,
            r.value.im,
            r.method.tag(),
            r.err_est
        )
    }

    pub fn from_line(line: &str) -> Result<CacheRecord> {
        let mut m = HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad cache field {tok:?}")))?;
            m.insert(k, v);
        }
        let get = |k: &str| m.get(k).copied().ok_or_else(|| Error::Parse(format!("cache record lacks {k}")));
        let version = get("version")?;
        if version != CACHE_VERSION {
            return Err(Error::VersionMismatch { expected: CACHE_VERSION.into(), found: version.into() });
        }
        let fam = get("family")?;
        let (quantity, fam) = match fam.strip_suffix(LOG_DERIVATIVE_SUFFIX) {
            Some(f) => (Quantity::LogDerivative, f),
            None => (Quantity::Value, fam),
        };
        let family = LFamily::from_tag(fam).ok_or_else(|| Error::Parse(format!("unknown family {fam}")))?;
        let method = Method::from_tag(get("method")?).ok_or_else(|| Error::Parse("unknown method".into()))?;
        let modulus = get("modulus")?.parse().map_err(|_| Error::Parse("bad modulus".into()))?;
        Ok(CacheRecord {
            quantity,
            record: LValueRecord {
                family,
                modulus,
                s: Complex64::new(parse_f64(get("s_re")?)?, parse_f64(get("s_im")?)?),
                value: Complex64::new(parse_f64(get("val_re")?)?, parse_f64(get("val_im")?)?),
                method,
                err_est: parse_f64(get("err_est")?)?,
            },
        })
    }
}

/// Append-only line-delimited L-value cache.
///
/// Sweeps read the committed map concurrently and queue new values; [`LCache::commit`]
/// merges the queue (smallest `err_est` wins) and [`LCache::flush`] appends the merged
/// records to the file.
#[derive(Debug, Default)]
pub struct LCache {
    path: Option<PathBuf>,
    map: RwLock<HashMap<Key, CacheRecord>>,
    pending: Mutex<Vec<CacheRecord>>,
    unwritten: Mutex<Vec<CacheRecord>>,
}

impl LCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path`, creating it with a header if it does not exist.
    pub fn open(path: &Path) -> Result<Self> {
        let cache = LCache { path: Some(path.to_path_buf()), ..Self::default() };
        if !path.exists() {
            let mut f = File::create(path)?;
            writeln!(f, "# {CACHE_MAGIC} version={CACHE_VERSION}")?;
            return Ok(cache);
        }
        let reader = BufReader::new(File::open(path)?);
        {
            let mut map = cache.map.write().expect("cache lock poisoned");
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if let Some(h) = line.strip_prefix('#') {
                    if i == 0 {
                        let found = h.split_whitespace().find_map(|t| t.strip_prefix("version=")).unwrap_or("");
                        if found != CACHE_VERSION {
                            return Err(Error::VersionMismatch { expected: CACHE_VERSION.into(), found: found.into() });
                        }
                    }
                    continue;
                }
                if line.trim().is_empty() {
                    continue;
                }
                merge(&mut map, CacheRecord::from_line(&line)?);
            }
        }
        Ok(cache)
    }

    pub fn get(&self, quantity: Quantity, family: LFamily, modulus: u64, s: Complex64) -> Option<CacheRecord> {
        self.map.read().expect("cache lock poisoned").get(&key(quantity, family, modulus, s)).copied()
    }

    /// Inserts immediately (visible to the next `get`) and schedules the record for writing.
    pub fn put(&self, rec: CacheRecord) {
        if merge(&mut self.map.write().expect("cache lock poisoned"), rec) {
            self.unwritten.lock().expect("cache lock poisoned").push(rec);
        }
    }

    /// Merges values queued by sweeps.
    pub fn commit(&self) {
        let queued = std::mem::take(&mut *self.pending.lock().expect("cache lock poisoned"));
        if queued.is_empty() {
            return;
        }
        let mut map = self.map.write().expect("cache lock poisoned");
        let mut out = self.unwritten.lock().expect("cache lock poisoned");
        for rec in queued {
            if merge(&mut map, rec) {
                out.push(rec);
            }
        }
    }

    /// Commits and appends every new record to the file.
    pub fn flush(&self) -> Result<()> {
        self.commit();
        let recs = std::mem::take(&mut *self.unwritten.lock().expect("cache lock poisoned"));
        let Some(path) = &self.path else {
            return Ok(());
        };
        if recs.is_empty() {
            return Ok(());
        }
        let mut f = std::io::BufWriter::new(OpenOptions::new().append(true).open(path)?);
        for r in recs {
            writeln!(f, "{}", r.to_line())?;
        }
        f.flush()?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Keeps the record with the smaller `err_est`; returns whether `rec` was stored.
fn merge(map: &mut HashMap<Key, CacheRecord>, rec: CacheRecord) -> bool {
    match map.get(&rec.key()) {
        Some(old) if old.record.err_est <= rec.record.err_est => false,
        _ => {
            map.insert(rec.key(), rec);
            true
        }
    }
}

impl LValueMemo for LCache {
    fn lookup(&self, quantity: Quantity, family: LFamily, modulus: u64, s: Complex64) -> Option<Complex64> {
        self.get(quantity, family, modulus, s).map(|r| r.record.value)
    }

    fn offer(&self, quantity: Quantity, record: LValueRecord) {
        self.pending.lock().expect("cache lock poisoned").push(CacheRecord { quantity, record });
    }

    fn commit(&self) {
        LCache::commit(self);
    }
}

// ---------------------------------------------------------------- config

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

// ---------------------------------------------------------------- self-check suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Gauss,
    Funceq,
    Theta,
    DiscSeries,
    Euler,
    Special,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Gauss, Suite::Funceq, Suite::Theta, Suite::DiscSeries, Suite::Euler, Suite::Special];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gauss => "gauss",
            Suite::Funceq => "funceq",
            Suite::Theta => "theta",
            Suite::DiscSeries => "dseries",
            Suite::Euler => "euler",
            Suite::Special => "special",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

/// Worst observed deviation of a suite against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub cases: usize,
    /// `worst / tolerance` over all checks; at most 1 on success.
    pub worst_ratio: f64,
    pub detail: String,
    pub seconds: f64,
    pub error: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.worst_ratio <= 1.0
    }

    /// Status line without timing, so repeated runs print the same text.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        match &self.error {
            Some(e) => format!("{status} {}: error: {e}", self.suite.name()),
            None => format!("{status} {}: {} cases, {}", self.suite.name(), self.cases, self.detail),
        }
    }
}

/// Tracks the worst residual relative to each check's tolerance.
#[derive(Debug, Default)]
struct Worst {
    ratio: f64,
    label: String,
    cases: usize,
}

impl Worst {
    fn check(&mut self, label: impl FnOnce() -> String, residual: f64, tol: f64) {
        self.cases += 1;
        let r = if residual.is_nan() { f64::INFINITY } else { residual / tol };
        if r > self.ratio || self.cases == 1 {
            self.ratio = r;
            self.label = format!("worst {} = {residual:.2e} (tol {tol:.0e})", label());
        }
    }
}

/// Deterministic low-discrepancy grid in the rectangle `[re0, re1] × [im0, im1]`.
pub fn grid_points(n: usize, re: (f64, f64), im: (f64, f64)) -> Vec<Complex64> {
    const G1: f64 = 0.754_877_666_246_692_8;
    const G2: f64 = 0.569_840_290_998_053_3;
    (1..=n)
        .map(|k| {
            let u = (0.5 + G1 * k as f64).fract();
            let v = (0.5 + G2 * k as f64).fract();
            Complex64::new(re.0 + (re.1 - re.0) * u, im.0 + (im.1 - im.0) * v)
        })
        .collect()
}

/// Runs one suite. With `fault` set every reference value is offset by `1e−3`, which must
/// make the suite fail.
pub fn run_suite(suite: Suite, fault: bool) -> SuiteResult {
    let t0 = Instant::now();
    let delta = if fault { 1e-3 } else { 0.0 };
    let mut w = Worst::default();
    let res = match suite {
        Suite::Gauss => gauss_suite(&mut w, delta),
        Suite::Funceq => funceq_suite(&mut w, delta),
        Suite::Theta => theta_suite(&mut w, delta),
        Suite::DiscSeries => dseries_suite(&mut w, delta),
        Suite::Euler => euler_suite(&mut w, delta),
        Suite::Special => special_suite(&mut w, delta),
    };
    SuiteResult { suite, cases: w.cases, worst_ratio: w.ratio, detail: w.label, seconds: t0.elapsed().as_secs_f64(), error: res.err().map(|e| e.to_string()) }
}

/// Every suite in order.
pub fn run_selfcheck(fault: bool) -> Vec<SuiteResult> {
    Suite::ALL.iter().map(|&s| run_suite(s, fault)).collect()
}

/// `G(χ_n, q)` against the normalized brute-force Gauss sum, odd `n ≤ 999`, `0 ≤ q ≤ 60`.
fn gauss_suite(w: &mut Worst, delta: f64) -> Result<()> {
    let sieve = FactorSieve::shared();
    for n in (1..=999u64).step_by(2) {
        let chi = PeriodicChar::jacobi(n);
        let norm = g_normalizer(n);
        for q in 0..=60i64 {
            let fast = g_quadratic(n, q, sieve)?;
            let brute = tau_bruteforce(&chi, q) * norm + delta;
            w.check(|| format!("n={n} q={q}"), (fast - brute).norm(), 1e-9);
        }
    }
    Ok(())
}

/// The functional equation through `K(1−s, χ)` for all odd `n ≤ 100`.
fn funceq_suite(w: &mut Worst, delta: f64) -> Result<()> {
    let sieve = FactorSieve::shared();
    for n in (1..=100u64).step_by(2) {
        for s in [Complex64::new(-0.5, 0.0), Complex64::new(-1.5, 0.3)] {
            let r = funceq_gauss_check(s, n, sieve)? + delta;
            w.check(|| format!("n={n} s={s}"), r, 1e-8);
        }
    }
    Ok(())
}

/// Theta transformation for odd `n ≤ 50`, `y ∈ {0.3, 1, 3}`, both parity variants.
fn theta_suite(w: &mut Worst, delta: f64) -> Result<()> {
    for n in (1..=50u64).step_by(2) {
        for y in [0.3, 1.0, 3.0] {
            for odd in [false, true] {
                let r = theta_funceq_check(n, y, odd) + delta;
                w.check(|| format!("n={n} y={y} odd={odd}"), r, 1e-10);
            }
        }
    }
    Ok(())
}

/// `Σ*_{d ≤ 10⁷} χ(d) d^{−2}` against the closed form for `χ_3`, `χ_5` and the trivial character.
fn dseries_suite(w: &mut Worst, delta: f64) -> Result<()> {
    let sieve = FactorSieve::new(10_000_000);
    let s = Complex64::new(2.0, 0.0);
    for (name, chi) in [("chi_3", PeriodicChar::jacobi(3)), ("chi_5", PeriodicChar::jacobi(5)), ("trivial", PeriodicChar::trivial())] {
        let v = l_d(s, &chi, 10_000_000, &sieve)?;
        w.check(|| name.to_string(), (v.partial - v.closed_form).norm() + delta, 1e-6);
    }
    Ok(())
}

/// `Σ_{j ≤ J} j^{−2w} ∏_{p | j} c(p)` by a multiplicative sieve over `j`.
fn square_indexed_sum(j_max: u64, odd_only: bool, w: Complex64, c: impl Fn(f64) -> Complex64) -> Complex64 {
    let sieve = FactorSieve::shared();
    let mut acc = crate::reduce::CompensatedSum::new();
    for j in 1..=j_max {
        if odd_only && j % 2 == 0 {
            continue;
        }
        let mut t = crate::special::rpow(j as f64, -2.0 * w);
        for p in sieve.prime_divisors(j).expect("j within sieve") {
            t *= c(p as f64);
        }
        acc.add(t);
    }
    acc.value()
}

/// Brute-force residue of the fundamental-discriminant series at `s = 1`:
/// `(1/(2ζ(2))) Σ_{mk = j² ≤ j_max²} μ(k) m^{−w} k^{−z} ∏_{p | mk} p/(p+1)`.
///
/// Squarefree `k | j²` means `k | rad(j)`, so the inner sum factors over `p | j`.
pub fn residue_s1_ad_bruteforce(w: Complex64, z: Complex64, j_max: u64) -> Complex64 {
    let s = square_indexed_sum(j_max, false, w, |p| p / (p + 1.0) * (1.0 - crate::special::rpow(p, w - z)));
    s / (2.0 * std::f64::consts::PI.powi(2) / 6.0)
}

/// Brute-force residue of the odd-modulus series at `s = 1`:
/// `(1/2) Σ_{mk = j², j odd} μ(k) a(mk) m^{−w} k^{−z}` with `a(n) = ∏_{p | n} (1 − 1/p)`.
pub fn residue_s1_a_bruteforce(w: Complex64, z: Complex64, j_max: u64) -> Complex64 {
    square_indexed_sum(j_max, true, w, |p| (1.0 - 1.0 / p) * (1.0 - crate::special::rpow(p, w - z))) / 2.0
}

fn euler_suite(w: &mut Worst, delta: f64) -> Result<()> {
    let spec = EulerProductSpec::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let z2 = zeta(c(2.0))?;
    let pb = p_big(c(1.5), spec)?;
    w.check(|| "P(3/2) - zeta(2)".into(), (pb.value - z2).norm() + delta, 1e-10);
    for r in [0.05, 0.1, 0.2] {
        let lhs = p_d2(c(-r), c(r), spec)?.value / (3.0 * z2);
        let rhs = 1.0 / (4.0 * zeta_removed(c(2.0 - 2.0 * r), 2)?);
        w.check(|| format!("P_D2 identity r={r}"), (lhs - rhs).norm() + delta, 1e-8);
    }
    // mk ≤ 10⁸ means j ≤ 10⁴
    for (wv, zv) in [(1.5, 1.75), (2.0, 1.6), (1.75, 2.5)] {
        let (wc, zc) = (c(wv), c(zv));
        let closed = residue_s1_ad(wc, zc, spec)?.value;
        let brute = residue_s1_ad_bruteforce(wc, zc, 10_000) + delta;
        w.check(|| format!("residue A_D w={wv} z={zv}"), (closed - brute).norm(), 1e-6);
        let closed = residue_s1_a(wc - 0.5, zc - 0.5, spec)?.value;
        let brute = residue_s1_a_bruteforce(wc, zc, 10_000) + delta;
        w.check(|| format!("residue A w={wv} z={zv}"), (closed - brute).norm(), 1e-6);
    }
    for (a, b) in [(0.2, 0.3), (0.1, 0.05), (0.3, -0.1), (0.45, 0.4)] {
        let lhs = a_d_arith_factor(c(a), c(b), spec)?.value;
        let rhs = p_d(c(0.5 + b), c(0.5 + a), spec)?.value + delta;
        w.check(|| format!("A_D({a},{b}) = P_D(1/2+b, 1/2+a)"), (lhs - rhs).norm(), 1e-8);
    }
    Ok(())
}

/// Duplication, reflection, the sine form of `Γ_e`, and the closed form of `Γ_o + Γ_e`.
fn special_suite(w: &mut Worst, delta: f64) -> Result<()> {
    let pi = std::f64::consts::PI;
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(1.0);
    for s in grid_points(20, (0.1, 3.0), (-3.0, 3.0)) {
        let lhs = gamma(s)? * gamma(s + 0.5)?;
        let rhs = crate::special::rpow(2.0, 1.0 - 2.0 * s) * pi.sqrt() * gamma(2.0 * s)? + delta;
        w.check(|| format!("duplication s={s}"), rel(lhs, rhs), 1e-10);
        let lhs = gamma(1.0 - s)? * gamma(s)?;
        let rhs = pi / (pi * s).sin() + delta;
        w.check(|| format!("reflection s={s}"), rel(lhs, rhs), 1e-10);
    }
    for s in grid_points(20, (-1.9, 0.9), (-2.0, 2.0)) {
        let lhs = gamma_e(s)? + gamma_o(s)?;
        let rhs = go_plus_ge(s)? + delta;
        w.check(|| format!("Go+Ge s={s}"), rel(lhs, rhs), 1e-10);
        let sine = crate::special::rpow(2.0, s) * (pi * s / 2.0).sin() * gamma(1.0 - s)? / pi.sqrt() + delta;
        w.check(|| format!("Ge sine form s={s}"), rel(gamma_e(s)?, sine), 1e-10);
    }
    Ok(())
}
