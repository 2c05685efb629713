//! Euler products over primes and the residue constants assembled from them.
//!
//! Every product is summed in log space over `p ≤ prime_cutoff`. The factors behave like
//! `1 + Σ_j c_j p^{−σ_j}` for large `p`; the leading terms are summed over all `p > P`
//! exactly through the prime zeta function `Σ_p p^{−σ} = Σ_k μ(k)/k · log ζ(kσ)`, so the
//! truncation error left over is one order smaller than the naive tail.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::arith::primes_up_to;
use crate::error::{fmt_c, Error, Result};
use crate::reduce::CompensatedSum;
use crate::special::{gamma, go_plus_ge, rpow, zeta, zeta_recip, zeta_removed, zeta_removed_recip, HurwitzAtS};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Zeta arguments closer than this to `1` raise [`Error::Pole`].
pub const POLE_GUARD: f64 = 1e-6;

/// How the part of a product beyond the prime cutoff is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailMode {
    /// Add the leading asymptotic terms of the tail exactly; `err_est` bounds the rest.
    #[default]
    LeadingTerm,
    /// Truncate; `err_est` is twice the integral bound of the dominant `p^{−σ}` terms.
    GeometricEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerProductSpec {
    pub prime_cutoff: u64,
    pub tail: TailMode,
}

impl Default for EulerProductSpec {
    fn default() -> Self {
        EulerProductSpec { prime_cutoff: 1_000_000, tail: TailMode::LeadingTerm }
    }
}

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub err_est: f64,
}

impl Estimate {
    fn scaled(self, k: Complex64) -> Estimate {
        Estimate { value: self.value * k, err_est: self.err_est * k.norm() }
    }
}

type PrimeLists = Mutex<Vec<(u64, Arc<Vec<u64>>)>>;

fn primes_for(cutoff: u64) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<PrimeLists> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().expect("prime cache poisoned");
    if let Some((_, v)) = guard.iter().find(|(c, _)| *c == cutoff) {
        return v.clone();
    }
    let v = Arc::new(primes_up_to(cutoff));
    if guard.len() >= 4 {
        guard.remove(0);
    }
    guard.push((cutoff, v.clone()));
    v
}

fn mobius_small(mut k: u32) -> i32 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            k /= p;
            if k.is_multiple_of(p) {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if k > 1 {
        r = -r;
    }
    r
}

fn terms_needed(sigma: Complex64) -> u32 {
    ((64.0 / sigma.re).ceil() as u32 + 2).min(200)
}

/// `Σ_p p^{−σ}` for `Re σ > 1`.
pub fn prime_zeta(sigma: Complex64) -> Result<Complex64> {
    if sigma.re <= 1.0 {
        return Err(Error::Divergent(format!("prime zeta at {}", fmt_c(sigma))));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..=terms_needed(sigma) {
        let mu = mobius_small(k);
        if mu == 0 {
            continue;
        }
        let z = zeta(sigma * k as f64)?;
        acc.add(mu as f64 / k as f64 * ln_1p(z - 1.0));
    }
    Ok(acc.value())
}

/// `Σ_p log p · p^{−σ}` for `Re σ > 1`.
pub fn prime_zeta_log(sigma: Complex64) -> Result<Complex64> {
    if sigma.re <= 1.0 {
        return Err(Error::Divergent(format!("prime zeta at {}", fmt_c(sigma))));
    }
    let mut acc = CompensatedSum::new();
    for k in 1..=terms_needed(sigma) {
        let mu = mobius_small(k);
        if mu == 0 {
            continue;
        }
        let (z, dz) = HurwitzAtS::new(sigma * k as f64)?.eval_with_derivative(1.0);
        acc.add(-(mu as f64) * dz / z);
    }
    Ok(acc.value())
}

/// `log(1 + c)` without cancellation for small `c`.
fn ln_1p(c: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * c.re + c.norm_sqr()).ln_1p();
    Complex64::new(re, c.im.atan2(1.0 + c.re))
}

/// One leading term `coef · w(p) · p^{−σ}` of the summand, with `w(p) = log p` or `1`.
#[derive(Debug, Clone, Copy)]
struct Lead {
    coef: f64,
    sigma: Complex64,
    log_weight: bool,
}

impl Lead {
    fn new(coef: f64, sigma: Complex64) -> Self {
        Lead { coef, sigma, log_weight: false }
    }

    fn with_log(coef: f64, sigma: Complex64) -> Self {
        Lead { coef, sigma, log_weight: true }
    }

    fn at(&self, p: f64) -> Complex64 {
        let w = if self.log_weight { p.ln() } else { 1.0 };
        self.coef * w * rpow(p, -self.sigma)
    }

    /// Integral bound for `Σ_{p>P} |w(p) p^{−σ}|`.
    fn tail_bound(&self, p_max: f64) -> f64 {
        let s = self.sigma.re;
        let base = p_max.powf(1.0 - s) / (s - 1.0);
        if self.log_weight {
            base
        } else {
            base / p_max.ln()
        }
    }

    fn prime_sum(&self) -> Result<Complex64> {
        let v = if self.log_weight { prime_zeta_log(self.sigma)? } else { prime_zeta(self.sigma)? };
        Ok(self.coef * v)
    }
}

/// `Σ_p term(p)` over primes (odd primes if `skip_two`), with the tail handled per `spec`.
fn prime_series(spec: EulerProductSpec, skip_two: bool, term: impl Fn(f64) -> Complex64, leads: &[Lead]) -> Result<Estimate> {
    for l in leads {
        if l.sigma.re <= 1.0 + 1e-9 {
            return Err(Error::Divergent(format!("factors decay like p^-({})", fmt_c(l.sigma))));
        }
    }
    let primes = primes_for(spec.prime_cutoff.max(3));
    let use_leads = spec.tail == TailMode::LeadingTerm;
    let mut acc = CompensatedSum::new();
    let mut heads = vec![CompensatedSum::new(); leads.len()];
    for &p in primes.iter() {
        let pf = p as f64;
        if !(skip_two && p == 2) {
            acc.add(term(pf));
        }
        if use_leads {
            for (h, l) in heads.iter_mut().zip(leads) {
                h.add(l.at(pf));
            }
        }
    }
    let p_max = *primes.last().expect("at least one prime") as f64;
    let bound: f64 = leads.iter().map(|l| l.coef.abs() * l.tail_bound(p_max)).sum();
    let mut value = acc.value();
    let err = match spec.tail {
        TailMode::GeometricEstimate => 2.0 * bound,
        TailMode::LeadingTerm => {
            for (h, l) in heads.iter().zip(leads) {
                value += l.prime_sum()? - h.value();
            }
            let lead_at: Complex64 = leads.iter().map(|l| l.at(p_max)).sum();
            let rem = (term(p_max) - lead_at).norm();
            let scale: f64 = leads.iter().map(|l| l.at(p_max).norm()).sum();
            let ratio = if rem == 0.0 {
                0.0
            } else if scale > 0.0 {
                (rem / scale).min(1.0)
            } else {
                1.0
            };
            2.0 * ratio * bound
        }
    };
    Ok(Estimate { value, err_est: err + 1e-15 * (1.0 + value.norm()) })
}

fn product(spec: EulerProductSpec, skip_two: bool, log_factor: impl Fn(f64) -> Complex64, leads: &[Lead]) -> Result<Estimate> {
    let s = prime_series(spec, skip_two, log_factor, leads)?;
    let v = s.value.exp();
    Ok(Estimate { value: v, err_est: v.norm() * s.err_est.exp_m1() })
}

/// `∏_p (1 + c(p))` for a factor with `|c(p)| ≤ p^{−Re σ}` eventually, truncated at the cutoff
/// with the integral bound as error estimate.
pub fn product_with_bound(spec: EulerProductSpec, skip_two: bool, c: impl Fn(f64) -> Complex64, sigma: Complex64) -> Result<Estimate> {
    let spec = EulerProductSpec { tail: TailMode::GeometricEstimate, ..spec };
    product(spec, skip_two, |p| ln_1p(c(p)), &[Lead::new(1.0, sigma)])
}

/// `P_D(z, w) = ∏_p (1 + (1 − p^{z−w}) / ((p^{z+w} − 1)(p + 1)))`.
pub fn p_d(z: Complex64, w: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| ln_1p((ONE - rpow(p, z - w)) / ((rpow(p, z + w) - 1.0) * (p + 1.0)));
    product(spec, false, f, &[Lead::new(1.0, 1.0 + z + w), Lead::new(-1.0, 1.0 + 2.0 * w)])
}

/// `P(z) = ∏_p (1 + 1/((p^{z−1/2} − 1)(p + 1)))`.
pub fn p_big(z: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| ln_1p(ONE / ((rpow(p, z - 0.5) - 1.0) * (p + 1.0)));
    product(spec, false, f, &[Lead::new(1.0, z + 0.5)])
}

/// `∏_{p>2} (1 + (1 − p^{β−α}) / ((p + 1)(p^{1+α+β} − 1)))`.
pub fn p_d2(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| ln_1p((ONE - rpow(p, beta - alpha)) / ((p + 1.0) * (rpow(p, 1.0 + alpha + beta) - 1.0)));
    product(spec, true, f, &[Lead::new(1.0, 2.0 + alpha + beta), Lead::new(-1.0, 2.0 + 2.0 * alpha)])
}

/// `∏_p (1 − p^{−1−α−β})^{−1} (1 − 1/((p+1) p^{1+2α}) − 1/((p+1) p^{α+β}))`.
pub fn a_d_arith_factor(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    if (alpha + beta).re <= 0.0 {
        return Err(Error::Divergent(format!("Re(alpha+beta) = {} <= 0", (alpha + beta).re)));
    }
    let f = |p: f64| {
        let x = rpow(p, -1.0 - alpha - beta);
        let y = (rpow(p, -1.0 - 2.0 * alpha) + rpow(p, -alpha - beta)) / (p + 1.0);
        ln_1p(-y) - ln_1p(-x)
    };
    product(spec, false, f, &[Lead::new(-1.0, 2.0 + 2.0 * alpha), Lead::new(1.0, 2.0 + alpha + beta)])
}

/// `∏_{p>2} (1 + (p^{α−β} − 1)/(p^{1+α−β}(p^{1+α+β} − 1)))`.
pub fn odd_ratio_product(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| ln_1p((ONE - rpow(p, beta - alpha)) / (p * (rpow(p, 1.0 + alpha + beta) - 1.0)));
    product(spec, true, f, &[Lead::new(1.0, 2.0 + alpha + beta), Lead::new(-1.0, 2.0 + 2.0 * alpha)])
}

/// `Σ_{p>2} log p / (p (p^{1+2r} − 1))`.
pub fn odd_prime_log_sum(r: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| p.ln() / (p * (rpow(p, 1.0 + 2.0 * r) - 1.0));
    prime_series(spec, true, f, &[Lead::with_log(1.0, 2.0 + 2.0 * r)])
}

/// `Σ_{p>2} log p / ((p + 1)(p^{1+2r} − 1))`.
pub fn odd_prime_log_sum_shifted(r: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    let f = |p: f64| p.ln() / ((p + 1.0) * (rpow(p, 1.0 + 2.0 * r) - 1.0));
    prime_series(spec, true, f, &[Lead::with_log(1.0, 2.0 + 2.0 * r)])
}

fn check_pole(s: Complex64, what: &str) -> Result<()> {
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(Error::Pole(format!("{what} at {}", fmt_c(s))));
    }
    Ok(())
}

/// Residue at `s = 1` of the fundamental-discriminant triple series:
/// `ζ(2w) / (2 ζ(2) ζ(z+w)) · P_D(z, w)`.
pub fn residue_s1_ad(w: Complex64, z: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(2.0 * w, "zeta(2w)")?;
    check_pole(z + w, "zeta(z+w)")?;
    let k = zeta(2.0 * w)? * zeta_recip(z + w) / (2.0 * zeta(Complex64::new(2.0, 0.0))?);
    Ok(p_d(z, w, spec)?.scaled(k))
}

/// Residue at `s = 1` of the odd-modulus triple series at `w = 1/2+α`, `z = 1/2+β`.
pub fn residue_s1_a(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(1.0 + 2.0 * alpha, "zeta(1+2alpha)")?;
    check_pole(1.0 + alpha + beta, "zeta(1+alpha+beta)")?;
    let k = zeta_removed(1.0 + 2.0 * alpha, 2)? * zeta_removed_recip(1.0 + alpha + beta, 2) / 2.0;
    Ok(odd_ratio_product(alpha, beta, spec)?.scaled(k))
}

/// Residue at `w = 3/2` of the Gauss-sum series:
/// `P(z) ζ(2s) / (ζ(2) ζ(z−1/2)) · 2^{z+1/2} / (3·2^{z−1/2} − 2)`.
pub fn residue_c_w32(s: Complex64, z: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(2.0 * s, "zeta(2s)")?;
    check_pole(z - 0.5, "zeta(z-1/2)")?;
    let two = Complex64::new(2.0, 0.0);
    let k = zeta(2.0 * s)? * zeta_recip(z - 0.5) / zeta(two)? * two.powc(z + 0.5) / (3.0 * two.powc(z - 0.5) - 2.0);
    Ok(p_big(z, spec)?.scaled(k))
}

/// The second-pole coefficient at `s = 1 − α`:
/// `π^α (Γ_o + Γ_e)(1/2+α) P(3/2−α+β) ζ(1−2α) / (ζ(2) ζ(1−α+β) (6 − 2^{1+α−β}))`.
pub fn residue_s_1malpha_a(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(1.0 - 2.0 * alpha, "zeta(1-2alpha)")?;
    check_pole(1.0 - alpha + beta, "zeta(1-alpha+beta)")?;
    residue_s_1malpha_a_unguarded(alpha, beta, spec)
}

/// [`residue_s_1malpha_a`] without the guard on `ζ(1−α+β)`, which sits in the denominator
/// and makes the coefficient vanish at `α = β`.
pub fn residue_s_1malpha_a_unguarded(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(1.0 - 2.0 * alpha, "zeta(1-2alpha)")?;
    let two = Complex64::new(2.0, 0.0);
    let k = rpow(PI, alpha) * go_plus_ge(0.5 + alpha)? * zeta(1.0 - 2.0 * alpha)? * zeta_recip(1.0 - alpha + beta)
        / (zeta(two)? * (6.0 - two.powc(1.0 + alpha - beta)));
    Ok(p_big(1.5 - alpha + beta, spec)?.scaled(k))
}

/// The same coefficient written with `cos(πα/2) Γ(1/2−α)` in place of `Γ_o + Γ_e`.
pub fn residue_s_1malpha_a_cosine_form(alpha: Complex64, beta: Complex64, spec: EulerProductSpec) -> Result<Estimate> {
    check_pole(1.0 - 2.0 * alpha, "zeta(1-2alpha)")?;
    check_pole(1.0 - alpha + beta, "zeta(1-alpha+beta)")?;
    let two = Complex64::new(2.0, 0.0);
    let k = rpow(PI, alpha - 0.5) * (PI * alpha / 2.0).cos() * gamma(0.5 - alpha)? * zeta(1.0 - 2.0 * alpha)?
        * zeta_recip(1.0 - alpha + beta)
        / zeta(two)?
        * two.powc(beta)
        / (3.0 * two.powc(beta - alpha) - 1.0);
    Ok(p_big(1.5 - alpha + beta, spec)?.scaled(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn prime_zeta_at_two() {
        // Σ_p p^{-2}
        assert!((prime_zeta(c(2.0)).unwrap().re - 0.452_247_420_041_065_5).abs() < 1e-14);
    }

    #[test]
    fn prime_zeta_log_matches_direct_sum() {
        let direct: f64 = primes_up_to(2_000_000).iter().map(|&p| (p as f64).ln() * (p as f64).powf(-3.0)).sum();
        let v = prime_zeta_log(c(3.0)).unwrap().re;
        assert!((v - direct).abs() < 1e-12, "{v} {direct}");
    }

    #[test]
    fn p_big_at_three_halves_is_zeta2() {
        let v = p_big(c(1.5), EulerProductSpec::default()).unwrap();
        let z2 = PI * PI / 6.0;
        assert!((v.value.re - z2).abs() < 1e-10, "{}", v.value.re - z2);
        assert!(v.err_est < 1e-10);
    }

    #[test]
    fn p_d_on_diagonal_is_one() {
        let v = p_d(c(0.75), c(0.75), EulerProductSpec::default()).unwrap();
        assert!((v.value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn divergent_parameters_rejected() {
        assert!(matches!(p_big(c(0.4), EulerProductSpec::default()), Err(Error::Divergent(_))));
    }

    #[test]
    fn residue_guard() {
        assert!(matches!(residue_s1_ad(c(0.5), c(1.0), EulerProductSpec::default()), Err(Error::Pole(_))));
    }
}
