//! Dirichlet L-functions of quadratic characters: exact evaluation through Hurwitz
//! zeta for small moduli, the approximate functional equation for large ones,
//! log-derivatives, the Gauss-sum series `K(s, χ)`, the fundamental-discriminant
//! series and theta functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::afe::{AfeConfig, AfeEvaluator, CharTables};
use crate::arith::{jacobi, FactorSieve};
use crate::error::{fmt_c, Error, Result};
use crate::gauss::{g_normalizer, g_quadratic, parity_constant, PeriodicChar, Psi8};
use crate::special::{gamma_e, gamma_o, rpow, HurwitzAtS};

/// Largest modulus handled by the Hurwitz evaluators.
pub const HURWITZ_MAX: u64 = 10_000;

/// Which quadratic family a cached value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LFamily {
    /// `( · /n)`, odd `n`.
    JacobiBottom,
    /// `(d/ · )`, fundamental discriminant `d`.
    KroneckerTop,
}

impl LFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            LFamily::JacobiBottom => "jacobi-bottom-n",
            LFamily::KroneckerTop => "kronecker-top-d",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "jacobi-bottom-n" => Some(LFamily::JacobiBottom),
            "kronecker-top-d" => Some(LFamily::KroneckerTop),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Hurwitz,
    Afe,
    Direct,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Hurwitz => "hurwitz",
            Method::Afe => "afe",
            Method::Direct => "direct",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "hurwitz" => Some(Method::Hurwitz),
            "afe" => Some(Method::Afe),
            "direct" => Some(Method::Direct),
            _ => None,
        }
    }
}

/// One evaluated L-value with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LValueRecord {
    pub family: LFamily,
    pub modulus: u64,
    pub s: Complex64,
    pub value: Complex64,
    pub method: Method,
    pub err_est: f64,
}

/// `Σ_{r mod q} c_r ζ(s, r/q) q^{−s}` for a `q`-periodic coefficient sequence.
pub fn periodic_series(h: &HurwitzAtS, coeffs: &[Complex64]) -> Complex64 {
    let q = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, c) in coeffs.iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let a = if r == 0 { 1.0 } else { r as f64 / q as f64 };
        acc += *c * h.eval(a);
    }
    acc * rpow(q as f64, -h.s())
}

fn has_pole(coeffs: &[Complex64]) -> bool {
    coeffs.iter().sum::<Complex64>().norm() > 1e-9
}

/// `L(s, χ)` for a periodic real character by Hurwitz decomposition (`s ≠ 1`).
pub fn l_periodic(s: Complex64, chi: &PeriodicChar) -> Result<Complex64> {
    let coeffs: Vec<Complex64> = chi.values.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
    let h = HurwitzAtS::new(s)?;
    Ok(periodic_series(&h, &coeffs))
}

/// `(L(s, χ), L'(s, χ))` for a periodic real character by Hurwitz decomposition.
pub fn l_periodic_with_derivative(s: Complex64, chi: &PeriodicChar) -> Result<(Complex64, Complex64)> {
    Ok(periodic_with_derivative(&HurwitzAtS::new(s)?, chi))
}

/// `(L(s, χ), L'(s, χ))` with the Hurwitz evaluator at `s` supplied by the caller.
pub fn periodic_with_derivative(h: &HurwitzAtS, chi: &PeriodicChar) -> (Complex64, Complex64) {
    let s = h.s();
    let q = chi.modulus as f64;
    let lq = q.ln();
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for (r, &c) in chi.values.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let a = if r == 0 { 1.0 } else { r as f64 / q };
        let (z, dz) = h.eval_with_derivative(a);
        v += c as f64 * z;
        d += c as f64 * dz;
    }
    let qs = rpow(q, -s);
    (v * qs, (d - lq * v) * qs)
}

/// `L(s, χ_n)` for odd `n ≤ 10⁴` (any `n`, primitive or not).
pub fn l_hurwitz(s: Complex64, n: u64) -> Result<Complex64> {
    if n > HURWITZ_MAX {
        return Err(Error::ModulusTooLarge { n, max: HURWITZ_MAX });
    }
    l_periodic(s, &PeriodicChar::jacobi(n))
}

/// `L(s, χ_n)` for squarefree odd `n` by the approximate functional equation.
pub fn l_afe(s: Complex64, n: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<LValueRecord> {
    if !sieve.is_squarefree(n)? {
        return Err(Error::NotPrimitive(n));
    }
    if n == 1 {
        let v = crate::special::zeta(s)?;
        return Ok(LValueRecord { family: LFamily::JacobiBottom, modulus: 1, s, value: v, method: Method::Direct, err_est: 1e-14 * v.norm() });
    }
    let ev = AfeEvaluator::new(s, cfg, n)?;
    let mm = ev.m_limit(n, cfg.x_max);
    let ct = CharTables::new(mm);
    let mut chi = Vec::new();
    ct.fill_jacobi(n, mm, &mut chi);
    let r = ev.eval(n, n % 4 == 3, &chi, None, false)?;
    Ok(LValueRecord { family: LFamily::JacobiBottom, modulus: n, s, value: r.value, method: Method::Afe, err_est: r.err_est })
}

/// `L(s, (d/ · ))` for a fundamental discriminant `d > 1` by the approximate functional equation.
pub fn l_afe_kronecker(s: Complex64, d: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<LValueRecord> {
    if !sieve.is_fundamental_discriminant(d)? || d == 1 {
        return Err(Error::NotPrimitive(d));
    }
    let ev = AfeEvaluator::new(s, cfg, d)?;
    let mm = ev.m_limit(d, cfg.x_max);
    let ct = CharTables::new(mm);
    let mut chi = Vec::new();
    ct.fill_kronecker_top(d, mm, &mut chi);
    let r = ev.eval(d, false, &chi, None, false)?;
    Ok(LValueRecord { family: LFamily::KroneckerTop, modulus: d, s, value: r.value, method: Method::Afe, err_est: r.err_est })
}

/// `L(s, χ_n)` for squarefree odd `n`, choosing the evaluator by size.
pub fn l_primitive(s: Complex64, n: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<LValueRecord> {
    if n <= HURWITZ_MAX {
        let v = l_hurwitz(s, n)?;
        Ok(LValueRecord { family: LFamily::JacobiBottom, modulus: n, s, value: v, method: Method::Hurwitz, err_est: 1e-12 * v.norm().max(1.0) })
    } else {
        l_afe(s, n, cfg, sieve)
    }
}

/// `L(s, (d/ · ))` for a fundamental discriminant `d > 1`, choosing the evaluator by size.
pub fn l_fundamental(s: Complex64, d: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<LValueRecord> {
    if d <= HURWITZ_MAX {
        let v = l_periodic(s, &PeriodicChar::kronecker_top(d))?;
        Ok(LValueRecord { family: LFamily::KroneckerTop, modulus: d, s, value: v, method: Method::Hurwitz, err_est: 1e-12 * v.norm().max(1.0) })
    } else {
        l_afe_kronecker(s, d, cfg, sieve)
    }
}

/// `∏_{p | k} (1 − χ(p) p^{−s})` for the character `χ_{n0}`.
pub fn euler_correction(s: Complex64, n0: u64, primes: &[u64]) -> Complex64 {
    primes.iter().fold(Complex64::new(1.0, 0.0), |acc, &p| {
        let c = if n0 == 1 { 1 } else { jacobi(p as i64, n0) };
        acc * (1.0 - c as f64 * rpow(p as f64, -s))
    })
}

/// `L_{(2)}(s, χ_n)` for any odd `n`: the kernel's L-value times Euler factors at `p | 2 n1`.
pub fn l2removed(s: Complex64, n: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<Complex64> {
    let (n0, n1) = sieve.squarefree_kernel(n)?;
    let base = l_primitive(s, n0, cfg, sieve)?.value;
    let mut ps = vec![2u64];
    ps.extend(sieve.prime_divisors(n1)?);
    Ok(base * euler_correction(s, n0, &ps))
}

/// `L'(s, χ_n)/L(s, χ_n)` by a 32-point trapezoid rule for `d log L` on a circle of radius 0.01.
pub fn log_derivative(s: Complex64, n: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<Complex64> {
    const POINTS: usize = 32;
    const RADIUS: f64 = 0.01;
    let eval = |z: Complex64| -> Result<Complex64> { Ok(l_primitive(z, n, cfg, sieve)?.value) };
    let centre = eval(s)?;
    if centre.norm() < 1e-12 {
        return Err(Error::ZeroDetected { modulus: n, s: fmt_c(s) });
    }
    let mut logs = Vec::with_capacity(POINTS);
    for k in 0..POINTS {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / POINTS as f64);
        let v = eval(s + RADIUS * w)?;
        if v.norm() < 1e-12 {
            return Err(Error::ZeroDetected { modulus: n, s: fmt_c(s) });
        }
        logs.push((w, v.ln()));
    }
    // continuous branch of the logarithm along the circle
    let mut prev = logs[0].1.im;
    for item in logs.iter_mut().skip(1) {
        let mut im = item.1.im;
        while im - prev > PI {
            im -= 2.0 * PI;
        }
        while im - prev < -PI {
            im += 2.0 * PI;
        }
        item.1.im = im;
        prev = im;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, l) in &logs {
        acc += *l / *w;
    }
    Ok(acc / (POINTS as f64 * RADIUS))
}

/// `τ(χ_n, r)` for `r = 0..n`.
pub fn tau_table(n: u64, sieve: &FactorSieve) -> Result<Vec<Complex64>> {
    let norm = g_normalizer(n);
    (0..n).map(|r| Ok(g_quadratic(n, r as i64, sieve)? / norm)).collect()
}

/// `K(s, χ) = Σ_{q≥1} τ(χ, q) q^{−s}` for a periodic character, by Hurwitz decomposition.
pub fn k_series_periodic(s: Complex64, chi: &PeriodicChar) -> Result<Complex64> {
    let taus = chi.tau_all();
    k_series_from_taus(s, &taus)
}

fn k_series_from_taus(s: Complex64, taus: &[Complex64]) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-14 && has_pole(taus) {
        return Err(Error::Pole(fmt_c(s)));
    }
    let h = HurwitzAtS::new(s)?;
    Ok(periodic_series(&h, taus))
}

/// `K(s, χ_n)` for odd `n ≤ 10⁴`.
pub fn k_series(s: Complex64, n: u64, sieve: &FactorSieve) -> Result<Complex64> {
    if n > HURWITZ_MAX {
        return Err(Error::ModulusTooLarge { n, max: HURWITZ_MAX });
    }
    k_series_from_taus(s, &tau_table(n, sieve)?)
}

/// `|L(s, χ) − ε π^{s−1/2} q^{−s} Γ_{e/o}(s) K(1−s, χ)|` for a periodic real character,
/// `ε` the parity constant.
pub fn funceq_gauss_residual(s: Complex64, chi: &PeriodicChar) -> Result<f64> {
    let even = chi.is_even();
    let l = l_periodic(s, chi)?;
    let k = k_series_periodic(1.0 - s, chi)?;
    let g = if even { gamma_e(s)? } else { gamma_o(s)? };
    let rhs = parity_constant(even) * rpow(PI, s - 0.5) * rpow(chi.modulus as f64, -s) * g * k;
    Ok((l - rhs).norm())
}

/// [`funceq_gauss_residual`] for `χ_n`, odd `n ≤ 100` in practice.
pub fn funceq_gauss_check(s: Complex64, n: u64, sieve: &FactorSieve) -> Result<f64> {
    if n > HURWITZ_MAX {
        return Err(Error::ModulusTooLarge { n, max: HURWITZ_MAX });
    }
    let chi = PeriodicChar::jacobi(n);
    let even = n % 4 == 1;
    let l = l_periodic(s, &chi)?;
    let k = k_series(1.0 - s, n, sieve)?;
    let g = if even { gamma_e(s)? } else { gamma_o(s)? };
    let rhs = parity_constant(even) * rpow(PI, s - 0.5) * rpow(n as f64, -s) * g * k;
    Ok((l - rhs).norm())
}

/// Both sides of the fundamental-discriminant series identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdValue {
    /// `Σ*_{d ≤ D} χ(d) d^{−s}`, the `d = 1` term included.
    pub partial: Complex64,
    pub closed_form: Complex64,
}

/// Closed form of `Σ*_{d ≥ 1} χ(d) d^{−s}` over fundamental discriminants, for a character
/// `χ` of odd period.
pub fn l_d_closed_form(s: Complex64, chi: &PeriodicChar) -> Result<Complex64> {
    if s.re <= 1.0 {
        return Err(Error::Divergent(format!("Re s = {} ≤ 1", s.re)));
    }
    let psi1 = Psi8::new(1).to_periodic();
    let psim1 = Psi8::new(-1).to_periodic();
    let chi2 = PeriodicChar::from_fn(chi.modulus, |r| chi.eval(r as i64).abs());
    let den = l_periodic(2.0 * s, &chi2.mul(&psi1))?;
    let l1 = l_periodic(s, &chi.mul(&psi1))?;
    let lm1 = l_periodic(s, &chi.mul(&psim1))?;
    let c4 = chi.eval(4) as f64;
    let c8 = chi.eval(8) as f64;
    let a = 0.5 + c4 / 2.0 * rpow(4.0, -s) + c8 * rpow(8.0, -s);
    let b = 0.5 - c4 / 2.0 * rpow(4.0, -s);
    Ok((a * l1 + b * lm1) / den)
}

/// `Σ*_{d ≤ d_max} χ(d) d^{−s}` and its closed form.
pub fn l_d(s: Complex64, chi: &PeriodicChar, d_max: u64, sieve: &FactorSieve) -> Result<LdValue> {
    let closed_form = l_d_closed_form(s, chi)?;
    let ds = sieve.enumerate_fundamental_discriminants(d_max)?;
    let mut partial = Complex64::new(1.0, 0.0) * chi.eval(1) as f64;
    let mut comp = Complex64::new(0.0, 0.0);
    // compensated summation
    for fd in ds {
        let c = chi.eval(fd.d as i64);
        if c == 0 {
            continue;
        }
        let y = c as f64 * rpow(fd.d as f64, -s) - comp;
        let t = partial + y;
        comp = (t - partial) - y;
        partial = t;
    }
    Ok(LdValue { partial, closed_form })
}

/// `θ_χ(y) = Σ_{n∈ℤ} χ(n) e^{−π n² y}` and the odd variant `Σ n χ(n) e^{−π n² y}`.
pub fn theta_chi(chi: &PeriodicChar, y: f64, odd: bool) -> f64 {
    let nmax = ((36.0 / (PI * y)).sqrt() + 2.0) as i64;
    let mut acc = 0.0;
    for n in (-nmax..=nmax).rev() {
        let c = chi.eval(n) as f64;
        if c == 0.0 {
            continue;
        }
        let w = if odd { n as f64 } else { 1.0 };
        acc += c * w * (-PI * (n * n) as f64 * y).exp();
    }
    acc
}

/// `θ_{τ(χ)}(y) = Σ_{n∈ℤ} τ(χ, n) e^{−π n² y}` and the odd variant.
pub fn theta_tau(taus: &[Complex64], y: f64, odd: bool) -> Complex64 {
    let q = taus.len() as i64;
    let nmax = ((36.0 / (PI * y)).sqrt() + 2.0) as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -nmax..=nmax {
        let t = taus[n.rem_euclid(q) as usize];
        let w = if odd { n as f64 } else { 1.0 };
        acc += t * w * (-PI * (n * n) as f64 * y).exp();
    }
    acc
}

/// Residual of the theta transformation for the character `χ` of period `q`:
/// even: `θ_χ(y) = θ_τ(1/(yq²)) / (q√y)`; odd: `θ̃_χ(y) = −i θ̃_τ(1/(yq²)) / (q² y^{3/2})`.
pub fn theta_funceq_residual(chi: &PeriodicChar, y: f64, odd: bool) -> f64 {
    let q = chi.modulus as f64;
    let taus = chi.tau_all();
    let lhs = theta_chi(chi, y, odd);
    let yy = 1.0 / (y * q * q);
    let rhs = if odd {
        Complex64::new(0.0, -1.0) * theta_tau(&taus, yy, true) / (q * q * y.powf(1.5))
    } else {
        theta_tau(&taus, yy, false) / (q * y.sqrt())
    };
    (lhs - rhs).norm()
}

/// [`theta_funceq_residual`] for `χ_n`.
pub fn theta_funceq_check(n: u64, y: f64, odd: bool) -> f64 {
    theta_funceq_residual(&PeriodicChar::jacobi(n), y, odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::zeta;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn l_hurwitz_trivial_and_direct() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert!((l_hurwitz(c(2.0, 0.0), 1).unwrap() - z2).norm() < 1e-13);
        let direct: f64 = (1..200_000i64).map(|m| jacobi(m, 5) as f64 / (m as f64).powi(3)).sum();
        assert!((l_hurwitz(c(3.0, 0.0), 5).unwrap().re - direct).abs() < 1e-12);
    }

    #[test]
    fn afe_matches_hurwitz_small() {
        let sieve = FactorSieve::new(10_000);
        let s = c(0.75, 0.0);
        for n in [3u64, 5, 7, 15, 101, 997] {
            let a = l_afe(s, n, AfeConfig::default(), &sieve).unwrap();
            let h = l_hurwitz(s, n).unwrap();
            assert!((a.value - h).norm() < 1e-10, "n={n}: {} vs {}", a.value, h);
            assert!(a.err_est < 1e-8);
        }
        let s = c(0.6, 3.0);
        for n in [5u64, 11, 35] {
            let a = l_afe(s, n, AfeConfig::default(), &sieve).unwrap();
            let h = l_hurwitz(s, n).unwrap();
            assert!((a.value - h).norm() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn kronecker_afe_matches_hurwitz() {
        let sieve = FactorSieve::new(10_000);
        let s = c(0.7, 0.0);
        for d in [5u64, 8, 12, 13, 24, 40, 1096] {
            let a = l_afe_kronecker(s, d, AfeConfig::default(), &sieve).unwrap();
            let h = l_periodic(s, &PeriodicChar::kronecker_top(d)).unwrap();
            assert!((a.value - h).norm() < 1e-10, "d={d}: {} vs {}", a.value, h);
        }
    }

    #[test]
    fn theta_examples() {
        assert!(theta_funceq_check(5, 1.0, false) < 1e-10);
        assert!(theta_funceq_check(3, 2.0, true) < 1e-10);
        assert!(theta_funceq_check(1, 0.7, false) < 1e-10);
    }
}
