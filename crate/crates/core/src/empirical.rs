//! Smoothed sums over moduli: the left-hand sides the predictors are compared against.
//!
//! Odd moduli are grouped by squarefree kernel: `χ_{n0 n1²}` is `χ_{n0}` with the Euler
//! factors at `p | n1` removed, so one L-evaluation per kernel serves every `n1`. Each
//! sweep reduces in fixed-size chunks combined by a pairwise tree, so the result does not
//! depend on the number of workers.

use num_complex::Complex64;

use crate::afe::{AfeConfig, AfeEvaluator, CharTables};
use crate::arith::{jacobi, FactorSieve};
use crate::error::{fmt_c, Error, Result};
use crate::eulerprod::EulerProductSpec;
use crate::gauss::PeriodicChar;
use crate::harness::{ComparisonReport, ComparisonRow};
use crate::lfunc::{l_hurwitz, l_periodic, log_derivative, periodic_series, periodic_with_derivative, LFamily, LValueRecord, Method, HURWITZ_MAX};
use crate::predict::{predict, Family, Shifts};
use crate::reduce::{parallel_sum, CompensatedSum};
use crate::special::{rpow, zeta, zeta_with_derivative, HurwitzAtS, WeightSpec};

/// Default summation cutoff in units of `X`: the weight tail `e^{−30}` is below `1e−12`.
pub const DEFAULT_CAP_FACTOR: f64 = 30.0;

/// Default largest modulus evaluated by Hurwitz decomposition inside sweeps.
pub const DEFAULT_SWEEP_HURWITZ_MAX: u64 = 1000;

/// Smallest real part allowed for `β` or `r` in sweeps.
pub const SHIFT_FLOOR: f64 = 0.05;

/// Below this `|L|` the value is treated as a zero.
const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub x: f64,
    pub family: Family,
    pub shifts: Shifts,
    pub weight: WeightSpec,
    /// Moduli up to `cap_factor · X` are summed.
    pub cap_factor: f64,
    /// Moduli up to this bound use Hurwitz decomposition, larger ones the AFE.
    pub hurwitz_max: u64,
    pub workers: usize,
    pub afe: AfeConfig,
    /// Lower the AFE cutoff for moduli whose weight is small. Ignored when a memo is attached.
    pub adaptive: bool,
}

impl SweepConfig {
    pub fn new(x: f64, family: Family, shifts: Shifts) -> Self {
        SweepConfig {
            x,
            family,
            shifts,
            weight: WeightSpec::Exponential,
            cap_factor: DEFAULT_CAP_FACTOR,
            hurwitz_max: DEFAULT_SWEEP_HURWITZ_MAX,
            workers: 1,
            afe: AfeConfig::default(),
            adaptive: true,
        }
    }

    pub fn n_cap(&self) -> u64 {
        (self.cap_factor * self.x).ceil() as u64
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = x;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(Error::Parse(format!("X must be positive, got {}", self.x)));
        }
        if self.cap_factor < 1.0 {
            return Err(Error::Parse(format!("cutoff factor {} is below 1", self.cap_factor)));
        }
        self.shifts.validate(self.family)?;
        if self.shifts.beta.re < SHIFT_FLOOR {
            return Err(Error::InvalidShifts(format!(
                "Re of {} is below the sweep floor {SHIFT_FLOOR}",
                fmt_c(self.shifts.beta)
            )));
        }
        Ok(())
    }
}

/// What a memo entry holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Value,
    LogDerivative,
}

/// Read-mostly store of evaluated L-values shared by sweeps.
///
/// Lookups must return exactly what was offered: a sweep with a memo attached computes every
/// value at full precision, so cold and warm runs produce the same bits.
pub trait LValueMemo: Sync {
    fn lookup(&self, quantity: Quantity, family: LFamily, modulus: u64, s: Complex64) -> Option<Complex64>;
    fn offer(&self, quantity: Quantity, record: LValueRecord);
    /// Makes offered values visible to later lookups.
    fn commit(&self) {}
}

/// Evaluates `L(s_i, χ_q)` or `L'/L(s_i, χ_q)` at a fixed list of points for any modulus.
struct Engine<'a> {
    points: Vec<Complex64>,
    family: LFamily,
    quantity: Quantity,
    cfg: &'a SweepConfig,
    afe: Vec<AfeEvaluator>,
    hurwitz: Vec<HurwitzAtS>,
    tables: CharTables,
    memo: Option<&'a dyn LValueMemo>,
}

impl<'a> Engine<'a> {
    fn new(points: Vec<Complex64>, family: LFamily, quantity: Quantity, cfg: &'a SweepConfig, memo: Option<&'a dyn LValueMemo>) -> Result<Self> {
        let n_cap = cfg.n_cap();
        let afe = if n_cap > cfg.hurwitz_max {
            points.iter().map(|&s| AfeEvaluator::new(s, cfg.afe, n_cap)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let m_max = afe.iter().map(|e| e.m_limit(n_cap, cfg.afe.x_max)).max().unwrap_or(1);
        let hurwitz = points.iter().map(|&s| HurwitzAtS::new(s)).collect::<Result<Vec<_>>>()?;
        Ok(Engine { points, family, quantity, cfg, afe, hurwitz, tables: CharTables::new(m_max), memo })
    }

    /// AFE cutoff for a modulus whose weight is at most `f(t)`.
    fn x_cut(&self, t: f64) -> f64 {
        let full = self.cfg.afe.x_max;
        if self.cfg.adaptive && self.memo.is_none() {
            (full - t).max(10.0).min(full)
        } else {
            full
        }
    }

    fn eval(&self, q: u64, t: f64) -> Result<Vec<Complex64>> {
        if let Some(m) = self.memo {
            let hit: Option<Vec<_>> = self.points.iter().map(|&s| m.lookup(self.quantity, self.family, q, s)).collect();
            if let Some(v) = hit {
                return Ok(v);
            }
        }
        let deriv = self.quantity == Quantity::LogDerivative;
        let mut out = Vec::with_capacity(self.points.len());
        let mut records = Vec::with_capacity(self.points.len());
        let mut push = |s: Complex64, v: Complex64, dv: Complex64, method: Method, err: f64| -> Result<()> {
            if v.norm() < ZERO_THRESHOLD {
                return Err(Error::ZeroDetected { modulus: q, s: fmt_c(s) });
            }
            let value = if deriv { dv / v } else { v };
            let err_est = if deriv { err / v.norm() * (1.0 + value.norm()) } else { err };
            out.push(value);
            records.push(LValueRecord { family: self.family, modulus: q, s, value, method, err_est });
            Ok(())
        };
        if q == 1 {
            for &s in &self.points {
                let (v, dv) = if deriv { zeta_with_derivative(s)? } else { (zeta(s)?, Complex64::new(0.0, 0.0)) };
                push(s, v, dv, Method::Direct, 1e-14 * v.norm())?;
            }
        } else if q <= self.cfg.hurwitz_max {
            let chi = self.periodic(q);
            let coeffs: Vec<Complex64> = chi.values.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
            for (h, &s) in self.hurwitz.iter().zip(&self.points) {
                let (v, dv) = if deriv { periodic_with_derivative(h, &chi) } else { (periodic_series(h, &coeffs), Complex64::new(0.0, 0.0)) };
                push(s, v, dv, Method::Hurwitz, 1e-12 * v.norm().max(1.0))?;
            }
        } else {
            let x = self.x_cut(t);
            let mm = self.afe.iter().map(|e| e.m_limit(q, x)).max().unwrap_or(1);
            let mut chi = Vec::new();
            let odd = match self.family {
                LFamily::JacobiBottom => {
                    self.tables.fill_jacobi(q, mm, &mut chi);
                    q % 4 == 3
                }
                LFamily::KroneckerTop => {
                    self.tables.fill_kronecker_top(q, mm, &mut chi);
                    false
                }
            };
            for (e, &s) in self.afe.iter().zip(&self.points) {
                let r = e.eval(q, odd, &chi, Some(x), deriv)?;
                push(s, r.value, r.derivative.unwrap_or_default(), Method::Afe, r.err_est)?;
            }
        }
        if let Some(m) = self.memo {
            for r in records {
                m.offer(self.quantity, r);
            }
        }
        Ok(out)
    }

    fn periodic(&self, q: u64) -> PeriodicChar {
        match self.family {
            LFamily::JacobiBottom => PeriodicChar::jacobi(q),
            LFamily::KroneckerTop => PeriodicChar::kronecker_top(q),
        }
    }
}

/// Odd squarefree integers up to `n_cap`, ascending.
fn odd_squarefree(n_cap: u64, sieve: &FactorSieve) -> Result<Vec<u64>> {
    let mut v = Vec::with_capacity((n_cap as f64 * 0.41) as usize + 2);
    for n in (1..=n_cap).step_by(2) {
        if sieve.is_squarefree(n)? {
            v.push(n);
        }
    }
    Ok(v)
}

/// `χ_{n0}(p)`.
fn chi_kernel(n0: u64, p: u64) -> f64 {
    if n0 == 1 {
        1.0
    } else {
        jacobi(p as i64, n0) as f64
    }
}

/// Index of a point in a deduplicated list.
fn dedup_points(pts: &[Complex64]) -> (Vec<Complex64>, Vec<usize>) {
    let mut uniq: Vec<Complex64> = Vec::new();
    let idx = pts
        .iter()
        .map(|p| match uniq.iter().position(|u| u == p) {
            Some(i) => i,
            None => {
                uniq.push(*p);
                uniq.len() - 1
            }
        })
        .collect();
    (uniq, idx)
}

/// The smoothed sum selected by `cfg.family`.
pub fn empirical(cfg: &SweepConfig, sieve: &FactorSieve, memo: Option<&dyn LValueMemo>) -> Result<Complex64> {
    cfg.validate()?;
    let n_cap = cfg.n_cap();
    sieve.check(n_cap)?;
    let x = cfg.x;
    let f = |n: u64| cfg.weight.eval(n as f64 / x);
    let (w, z) = (cfg.shifts.w(), cfg.shifts.z());
    match cfg.family {
        Family::Discriminants => {
            let (pts, ix) = dedup_points(&[w, z]);
            let eng = Engine::new(pts, LFamily::KroneckerTop, Quantity::Value, cfg, memo)?;
            let ds: Vec<u64> = sieve.enumerate_fundamental_discriminants(n_cap)?.into_iter().map(|fd| fd.d).collect();
            parallel_sum(&ds, cfg.workers, |&d| {
                let v = eng.eval(d, d as f64 / x)?;
                Ok(f(d) * (v[ix[0]] / v[ix[1]]))
            })
        }
        Family::OddRatios => {
            let (pts, ix) = dedup_points(&[w, z]);
            let eng = Engine::new(pts, LFamily::JacobiBottom, Quantity::Value, cfg, memo)?;
            let kernels = odd_squarefree(n_cap, sieve)?;
            parallel_sum(&kernels, cfg.workers, |&n0| {
                let v = eng.eval(n0, n0 as f64 / x)?;
                let base = v[ix[0]] / v[ix[1]];
                let c2 = chi_kernel(n0, 2);
                let two = (1.0 - c2 * rpow(2.0, -w)) / (1.0 - c2 * rpow(2.0, -z));
                let mut acc = CompensatedSum::new();
                let mut n1 = 1u64;
                while n0 * n1 * n1 <= n_cap {
                    let mut corr = two;
                    for p in sieve.prime_divisors(n1)? {
                        let c = chi_kernel(n0, p);
                        if c != 0.0 {
                            let pf = p as f64;
                            corr *= (1.0 - c * rpow(pf, -w)) / (1.0 - c * rpow(pf, -z));
                        }
                    }
                    acc.add(f(n0 * n1 * n1) * corr);
                    n1 += 2;
                }
                Ok(base * acc.value())
            })
        }
        Family::OddLogDerivative | Family::SquarefreeLogDerivative => {
            let s = w;
            let eng = Engine::new(vec![s], LFamily::JacobiBottom, Quantity::LogDerivative, cfg, memo)?;
            let kernels = odd_squarefree(n_cap, sieve)?;
            let all = cfg.family == Family::OddLogDerivative;
            parallel_sum(&kernels, cfg.workers, |&n0| {
                let ld = eng.eval(n0, n0 as f64 / x)?[0];
                if !all {
                    return Ok(f(n0) * ld);
                }
                let mut acc = CompensatedSum::new();
                let mut n1 = 1u64;
                while n0 * n1 * n1 <= n_cap {
                    let mut v = ld;
                    for p in sieve.prime_divisors(n1)? {
                        let c = chi_kernel(n0, p);
                        if c != 0.0 {
                            let pf = p as f64;
                            v += c * pf.ln() / (rpow(pf, s) - c);
                        }
                    }
                    acc.add(f(n0 * n1 * n1) * v);
                    n1 += 2;
                }
                Ok(acc.value())
            })
        }
    }
}

fn with_family(cfg: &SweepConfig, family: Family) -> SweepConfig {
    SweepConfig { family, ..*cfg }
}

/// `Σ*_{d} L(1/2+α, χ_d)/L(1/2+β, χ_d) f(d/X)` over fundamental discriminants `d > 1`.
pub fn empirical_thm1(cfg: &SweepConfig, sieve: &FactorSieve) -> Result<Complex64> {
    empirical(&with_family(cfg, Family::Discriminants), sieve, None)
}

/// `Σ_{n odd} L_{(2)}(1/2+α, χ_n)/L_{(2)}(1/2+β, χ_n) f(n/X)`.
pub fn empirical_thm2(cfg: &SweepConfig, sieve: &FactorSieve) -> Result<Complex64> {
    empirical(&with_family(cfg, Family::OddRatios), sieve, None)
}

/// `Σ_{n odd} L'/L(1/2+r, χ_n) f(n/X)`.
pub fn empirical_thm3(cfg: &SweepConfig, sieve: &FactorSieve) -> Result<Complex64> {
    empirical(&with_family(cfg, Family::OddLogDerivative), sieve, None)
}

/// `Σ_{n odd} μ²(n) L'/L(1/2+r, χ_n) f(n/X)`.
pub fn empirical_thm4(cfg: &SweepConfig, sieve: &FactorSieve) -> Result<Complex64> {
    empirical(&with_family(cfg, Family::SquarefreeLogDerivative), sieve, None)
}

/// The same sums modulus by modulus, single-threaded, with every L-value computed from the
/// full (possibly imprimitive) character by Hurwitz decomposition and log-derivatives by
/// contour integration. Only for `n_cap ≤ 10⁴`.
pub fn empirical_direct(cfg: &SweepConfig, sieve: &FactorSieve) -> Result<Complex64> {
    cfg.validate()?;
    let n_cap = cfg.n_cap();
    if n_cap > HURWITZ_MAX {
        return Err(Error::ModulusTooLarge { n: n_cap, max: HURWITZ_MAX });
    }
    let f = |n: u64| cfg.weight.eval(n as f64 / cfg.x);
    let (w, z) = (cfg.shifts.w(), cfg.shifts.z());
    let mut acc = CompensatedSum::new();
    match cfg.family {
        Family::Discriminants => {
            for fd in sieve.enumerate_fundamental_discriminants(n_cap)? {
                let chi = PeriodicChar::kronecker_top(fd.d);
                acc.add(f(fd.d) * l_periodic(w, &chi)? / l_periodic(z, &chi)?);
            }
        }
        Family::OddRatios => {
            for n in (1..=n_cap).step_by(2) {
                let c2 = jacobi(2, n) as f64;
                let num = l_hurwitz(w, n)? * (1.0 - c2 * rpow(2.0, -w));
                let den = l_hurwitz(z, n)? * (1.0 - c2 * rpow(2.0, -z));
                acc.add(f(n) * num / den);
            }
        }
        Family::OddLogDerivative | Family::SquarefreeLogDerivative => {
            let all = cfg.family == Family::OddLogDerivative;
            for n in (1..=n_cap).step_by(2) {
                if !all && !sieve.is_squarefree(n)? {
                    continue;
                }
                acc.add(f(n) * log_derivative(w, n, cfg.afe, sieve)?);
            }
        }
    }
    Ok(acc.value())
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Smallest `X` used in the slope fit; smaller scales are dominated by secondary terms.
pub const FIT_MIN_X: f64 = 1e3;

/// Runs the sweep at every `X` of an ascending grid and compares with the predicted main terms.
pub fn compare(x_grid: &[f64], template: &SweepConfig, spec: EulerProductSpec, sieve: &FactorSieve, memo: Option<&dyn LValueMemo>) -> Result<ComparisonReport> {
    if x_grid.is_empty() || x_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("the X grid must be non-empty and strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(x_grid.len());
    let mut exponent = f64::NAN;
    for &x in x_grid {
        let cfg = template.with_x(x);
        let emp = empirical(&cfg, sieve, memo)?;
        if let Some(m) = memo {
            m.commit();
        }
        let pred = predict(cfg.family, x, cfg.shifts, cfg.weight, spec)?;
        exponent = pred.error_exponent;
        let abs_err = (emp - pred.total()).norm();
        rows.push(ComparisonRow {
            x,
            shifts: cfg.shifts,
            empirical: emp,
            term1: pred.term1,
            term2: pred.term2,
            abs_err,
            rel_err: abs_err / pred.total().norm(),
        });
    }
    let fit: Vec<(f64, f64)> = rows.iter().filter(|r| r.x >= FIT_MIN_X).map(|r| (r.x, r.abs_err)).collect();
    Ok(ComparisonReport { family: template.family, rows, fitted_slope: fit_slope(&fit), theorem_exponent: exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_power_law() {
        let pts: Vec<_> = [1e3, 1e4, 1e5].iter().map(|&x: &f64| (x, 3.0 * x.powf(0.4))).collect();
        assert!((fit_slope(&pts).unwrap() - 0.4).abs() < 1e-12);
        assert!(fit_slope(&pts[..1]).is_none());
    }

    #[test]
    fn dedup_reuses_equal_points() {
        let a = Complex64::new(0.75, 0.0);
        let (u, ix) = dedup_points(&[a, a]);
        assert_eq!(u.len(), 1);
        assert_eq!(ix, vec![0, 0]);
    }
}
