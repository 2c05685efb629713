//! Partial sums of the triple Dirichlet series built from ratios of quadratic L-functions,
//! their convergence regions, and termwise checks of their functional equations.
//!
//! * `A_D(s,w,z) = Σ*_d L(w,χ_d) / (L(z,χ_d) d^s)` over fundamental discriminants `d > 1`.
//! * `A(s,w,z) = Σ_{n odd} L_{(2)}(w,χ_n) / (L_{(2)}(z,χ_n) n^s)`.
//! * `C(s,w,z) = Σ_{q ≥ 1} Σ_{l odd} τ((4l/·), q) a_{z−w}(l) / (l^w q^s)`.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::afe::AfeConfig;
use crate::arith::{kronecker, FactorSieve};
use crate::error::{fmt_c, Error, Result};
use crate::eulerprod::{product_with_bound, Estimate, EulerProductSpec};
use crate::gauss::{g_prime_power, g_quadratic, tau_4l, PeriodicChar, Psi8};
use crate::lfunc::{k_series_periodic, l2removed, l_d_closed_form, l_fundamental, l_periodic};
use crate::reduce::CompensatedSum;
use crate::special::{gamma, gamma_e, rpow, zeta_removed};

/// Named convergence regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    R0,
    R1,
    R2,
    R3,
    R4,
    S0,
    S1,
    S2,
    S3,
    S4,
    /// Initial region of the Gauss-sum series `C`.
    P,
}

/// A point together with every region containing it.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSeriesPoint {
    pub s: Complex64,
    pub w: Complex64,
    pub z: Complex64,
    pub regions: BTreeSet<Region>,
}

impl TripleSeriesPoint {
    pub fn new(s: Complex64, w: Complex64, z: Complex64) -> Self {
        TripleSeriesPoint { s, w, z, regions: region_classify(s, w, z) }
    }
}

/// All regions containing `(s, w, z)`; only real parts matter.
pub fn region_classify(s: Complex64, w: Complex64, z: Complex64) -> BTreeSet<Region> {
    let (s, w, z) = (s.re, w.re, z.re);
    let mut out = BTreeSet::new();
    let mut put = |r: Region, ok: bool| {
        if ok {
            out.insert(r);
        }
    };
    put(Region::R0, s > 1.0 && s + w > 1.5 && z > 0.5);
    put(Region::R1, s > 0.25 && w > 1.0 && z > 1.0 && s + w > 1.5 && s + z > 1.5);
    put(Region::R2, s > 0.25 && z > 0.5 && s + w > 1.5 && s + z > 1.5);
    put(Region::R3, s + w > 0.75 && z > 0.5 && s > 1.0 && s + w + z > 2.0);
    put(
        Region::R4,
        s > 0.25 && z > 0.5 && s + w > 0.75 && 2.0 * s + w > 1.75 && s + z > 1.5 && 2.0 * s + w + z > 3.0 && s + w + z > 2.0,
    );
    put(Region::S0, s > 1.0 && s + w > 1.5 && z > 0.5);
    put(Region::S1, w > 1.0 && z > 1.0 && s + w > 1.5 && s + z > 1.5);
    put(Region::S2, z > 0.5 && s + w > 1.5 && s + z > 1.5);
    put(Region::S3, s + w > 1.0 && s + z > 1.0 && (1.0 - s) + (z - w).min(0.0) > 1.0);
    put(Region::S4, s + 2.0 * w > 2.0 && s + 2.0 * z > 2.0 && s + z > 1.0 && s + w > 1.0 && z > 0.5);
    put(Region::P, s + z > 1.5 && w > 1.5 && z > 1.5);
    out
}

/// Where the double sum defining `C` (and each twisted piece) converges absolutely.
pub fn c_sum_converges(s: Complex64, w: Complex64, z: Complex64) -> bool {
    w.re > 1.0 && z.re > 1.0 && s.re + (z.re - w.re).min(0.0) > 1.0
}

/// `p(s, w) = (s − 1)(s + w − 3/2)`, vanishing on both polar hyperplanes.
pub fn poly_factor(s: Complex64, w: Complex64) -> Complex64 {
    (s - 1.0) * (s + w - 1.5)
}

/// `Σ*_{1 < d ≤ d_max} L(w,χ_d) / (L(z,χ_d) d^s)`.
pub fn a_d_partial(s: Complex64, w: Complex64, z: Complex64, d_max: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    for fd in sieve.enumerate_fundamental_discriminants(d_max)? {
        let d = fd.d;
        let lw = l_fundamental(w, d, cfg, sieve)?.value;
        let lz = l_fundamental(z, d, cfg, sieve)?.value;
        acc.add(lw / lz * rpow(d as f64, -s));
    }
    Ok(acc.value())
}

/// `A_D(s, w, w) = Σ*_{d > 1} d^{−s}`, continued meromorphically through the closed form of
/// the fundamental-discriminant series.
pub fn a_d_diagonal(s: Complex64) -> Result<Complex64> {
    Ok(l_d_closed_form(s, &PeriodicChar::trivial())? - 1.0)
}

/// `Σ_{n odd ≤ n_max} L_{(2)}(w,χ_n) / (L_{(2)}(z,χ_n) n^s)`.
pub fn a_partial(s: Complex64, w: Complex64, z: Complex64, n_max: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    for n in (1..=n_max).step_by(2) {
        let lw = l2removed(w, n, cfg, sieve)?;
        let lz = l2removed(z, n, cfg, sieve)?;
        acc.add(lw / lz * rpow(n as f64, -s));
    }
    Ok(acc.value())
}

/// The same series summed in the exchanged order `Σ_{m,k odd} μ(k) L(s,(4mk/·)) m^{−w} k^{−z}`,
/// grouped by `l = mk ≤ l_max`.
pub fn a_exchanged_partial(s: Complex64, w: Complex64, z: Complex64, l_max: u64, sieve: &FactorSieve) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    for l in (1..=l_max).step_by(2) {
        let coef = rpow(l as f64, -w) * sieve.a_t(l, z - w)?;
        let lv = l_periodic(s, &PeriodicChar::kronecker_top(4 * l))?;
        acc.add(coef * lv);
    }
    Ok(acc.value())
}

fn check_c_region(s: Complex64, w: Complex64, z: Complex64) -> Result<()> {
    if !c_sum_converges(s, w, z) {
        return Err(Error::Divergent(format!("C series at ({}, {}, {})", fmt_c(s), fmt_c(w), fmt_c(z))));
    }
    Ok(())
}

/// `Σ_{q ≤ q_max} Σ_{l odd ≤ l_max} τ((4l/·), q) a_{z−w}(l) l^{−w} q^{−s}`.
pub fn c_partial(s: Complex64, w: Complex64, z: Complex64, q_max: u64, l_max: u64, sieve: &FactorSieve) -> Result<Complex64> {
    check_c_region(s, w, z)?;
    let mut acc = CompensatedSum::new();
    for l in (1..=l_max).step_by(2) {
        let coef = rpow(l as f64, -w) * sieve.a_t(l, z - w)?;
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        for q in 1..=q_max {
            let t = tau_4l(l, q as i64, sieve)?;
            if t != Complex64::new(0.0, 0.0) {
                acc.add(coef * t * rpow(q as f64, -s));
            }
        }
    }
    Ok(acc.value())
}

/// `Σ_{q ≤ q_max} Σ_{l ≤ l_max} G((·/l), q) ψ(l) ψ'(q) a_{z−w}(l) l^{−w} q^{−s}` for `ψ(2) = 0`.
pub fn c_twisted_partial(
    s: Complex64,
    w: Complex64,
    z: Complex64,
    psi: Psi8,
    psi_prime: Psi8,
    q_max: u64,
    l_max: u64,
    sieve: &FactorSieve,
) -> Result<Complex64> {
    check_c_region(s, w, z)?;
    let mut acc = CompensatedSum::new();
    for l in 1..=l_max {
        let pl = psi.eval(l as i64);
        if pl == 0 {
            continue;
        }
        let coef = pl as f64 * rpow(l as f64, -w) * sieve.a_t(l, z - w)?;
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        for q in 1..=q_max {
            let pq = psi_prime.eval(q as i64);
            if pq == 0 {
                continue;
            }
            let g = g_quadratic(l, q as i64, sieve)?;
            if g != Complex64::new(0.0, 0.0) {
                acc.add(coef * pq as f64 * g * rpow(q as f64, -s));
            }
        }
    }
    Ok(acc.value())
}

/// `C` assembled from its six twisted pieces; with `q` ranges `q_max/2`, `q_max/4` and `q_max`
/// this is a rearrangement of exactly the terms of [`c_partial`].
pub fn c_decomposed_partial(s: Complex64, w: Complex64, z: Complex64, q_max: u64, l_max: u64, sieve: &FactorSieve) -> Result<Complex64> {
    let tw = |a: i8, b: i8, qm: u64| c_twisted_partial(s, w, z, Psi8::new(a), Psi8::new(b), qm, l_max, sieve);
    let two = Complex64::new(2.0, 0.0);
    let h = q_max / 2;
    let f = q_max / 4;
    Ok(-two.powc(-s) * (tw(2, 1, h)? + tw(-2, 1, h)?) + two.powc(-2.0 * s) * (tw(1, 0, f)? + tw(-1, 0, f)?) + tw(1, -1, q_max)?
        - tw(-1, -1, q_max)?)
}

/// `D(w, t, q; ψ) = Σ_{l ≤ l_max} G((·/l), q) ψ(l) a_t(l) l^{−w}`.
pub fn d_series_partial(w: Complex64, t: Complex64, q: u64, psi: Psi8, l_max: u64, sieve: &FactorSieve) -> Result<Complex64> {
    let mut acc = CompensatedSum::new();
    for l in 1..=l_max {
        let pl = psi.eval(l as i64);
        if pl == 0 {
            continue;
        }
        let g = g_quadratic(l, q as i64, sieve)?;
        if g == Complex64::new(0.0, 0.0) {
            continue;
        }
        acc.add(pl as f64 * g * sieve.a_t(l, t)? * rpow(l as f64, -w));
    }
    Ok(acc.value())
}

/// `D(w, t, q; ψ)` through its factorization
/// `L(w−1/2, (4q/·)ψ) / ζ_{(4q)}(2w−1) · E(w,t,q;ψ) · ∏_{p | q} (local factor)`.
pub fn d_series_factored(w: Complex64, t: Complex64, q: u64, psi: Psi8, spec: EulerProductSpec, sieve: &FactorSieve) -> Result<Estimate> {
    let chi = PeriodicChar::kronecker_top(4 * q).mul(&psi.to_periodic());
    let l = l_periodic(w - 0.5, &chi)?;
    let zr = zeta_removed(2.0 * w - 1.0, 4 * q)?;
    let chi_p = |p: f64| kronecker(4 * q as i64, p as i64) as f64 * psi.eval(p as i64) as f64;
    let e = product_with_bound(
        spec,
        true,
        |p| {
            let c = chi_p(p);
            if c == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            -c * rpow(p, 0.5 - w - t) / (1.0 + c * rpow(p, 0.5 - w))
        },
        w + t - 0.5,
    )?;
    let mut local = Complex64::new(1.0, 0.0);
    for p in sieve.prime_divisors(q)? {
        if p == 2 {
            continue;
        }
        let mut alpha = 0;
        let mut qq = q;
        while qq.is_multiple_of(p) {
            qq /= p;
            alpha += 1;
        }
        let at = 1.0 - rpow(p as f64, -t);
        let mut f = Complex64::new(1.0, 0.0);
        for k in 1..=alpha + 1 {
            let ps = psi.eval((p as i64).pow(k));
            if ps == 0 {
                continue;
            }
            f += g_prime_power(p, k, q as i64) * ps as f64 * at * rpow(p as f64, -(k as f64) * w);
        }
        local *= f;
    }
    let k = l / zr * local;
    Ok(Estimate { value: e.value * k, err_est: e.err_est * k.norm() })
}

/// Residual of `L(s,χ) = π^{s−1/2} Γ((1−s)/2) / Γ(s/2) · (4mk)^{−s} K(1−s,χ)` for `χ = (4mk/·)`.
pub fn funceq_s_termwise(s: Complex64, m: u64, k: u64) -> Result<f64> {
    let n = 4 * m * k;
    let chi = PeriodicChar::kronecker_top(n);
    let lhs = l_periodic(s, &chi)?;
    let pref = rpow(PI, s - 0.5) * gamma((1.0 - s) / 2.0)? / gamma(s / 2.0)? * rpow(n as f64, -s);
    let rhs = pref * k_series_periodic(1.0 - s, &chi)?;
    Ok((lhs - rhs).norm())
}

/// Residual of `L(w,χ_d) = (π/d)^{w−1/2} Γ_e(w) L(1−w,χ_d)` for one fundamental discriminant.
pub fn funceq_w_termwise(w: Complex64, d: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<f64> {
    let lhs = l_fundamental(w, d, cfg, sieve)?.value;
    let rhs = rpow(PI / d as f64, w - 0.5) * gamma_e(w)? * l_fundamental(1.0 - w, d, cfg, sieve)?.value;
    Ok((lhs - rhs).norm())
}

/// `|A_D(s,w,z) − π^{w−1/2} Γ_e(w) A_D(s+w−1/2, 1−w, z)|` with both sides over `d ≤ d_max`.
pub fn funceq_w_check(s: Complex64, w: Complex64, z: Complex64, d_max: u64, cfg: AfeConfig, sieve: &FactorSieve) -> Result<f64> {
    let lhs = a_d_partial(s, w, z, d_max, cfg, sieve)?;
    let rhs = rpow(PI, w - 0.5) * gamma_e(w)? * a_d_partial(s + w - 0.5, 1.0 - w, z, d_max, cfg, sieve)?;
    Ok((lhs - rhs).norm())
}

/// Intercept at `δ = 0` of the least-squares line through `(δ_i, v_i)`.
pub fn richardson_linear(points: &[(f64, Complex64)]) -> Complex64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<Complex64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    let sxy: Complex64 = points.iter().map(|p| (p.1 - my) * (p.0 - mx)).sum();
    my - sxy / sxx * mx
}
