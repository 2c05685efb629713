//! Smoothed approximate functional equation for real primitive characters.
//!
//! Splitting the theta integral at `y = 1` gives, with `x_m = π m²/q`,
//! `a = (s+κ)/2` and `a' = (1−s+κ)/2`,
//!
//! ```text
//! Λ(s) = Σ χ(m) m^κ x_m^{−a} Γ(a, x_m) + ε Σ χ(m) m^κ x_m^{−a'} Γ(a', x_m)
//! ```
//!
//! where `Λ(s) = (q/π)^a Γ(a) L(s, χ)`. Writing `x^{−a}Γ(a, x) = x^{−a}Γ(a) − φ_a(x)`
//! with the entire function `φ_a(x) = ∫_0^1 u^{a−1} e^{−xu} du` leaves only `φ_a` to
//! tabulate, which is done once per `s` as Taylor expansions on a uniform grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::primes_up_to;
use crate::error::{fmt_c, Error, Result};
use crate::special::{digamma, gamma, rpow};

const DEG: usize = 7;
const NODES_PER_UNIT: f64 = 16.0;

/// Truncation parameters of the approximate functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeConfig {
    /// Hard cap: both sums stop at `m ≤ c √q`.
    pub c: f64,
    /// Terms with `π m²/q > x_max` are dropped; their total is below `e^{−x_max}`.
    pub x_max: f64,
}

impl Default for AfeConfig {
    fn default() -> Self {
        AfeConfig { c: 12.0, x_max: 40.0 }
    }
}

/// `φ_b(x)` and `∂_b φ_b(x)` by the Kummer form `e^{−x} Σ_k x^k/(b)_{k+1}`.
fn phi_series(b: Complex64, x: f64) -> (Complex64, Complex64) {
    let mut t = 1.0 / b;
    let mut h = 1.0 / b;
    let mut sum = t;
    let mut dsum = -t * h;
    let mut k = 0usize;
    loop {
        k += 1;
        let bk = b + k as f64;
        t = t * x / bk;
        h += 1.0 / bk;
        sum += t;
        dsum -= t * h;
        if (k as f64 > x && t.norm() < 1e-18 * sum.norm()) || k > 2000 {
            break;
        }
    }
    let e = (-x).exp();
    (sum * e, dsum * e)
}

/// Taylor table of `φ_b` (or of `∂_b φ_b`) on the grid `j/NODES_PER_UNIT`.
#[derive(Debug, Clone)]
struct PhiTable {
    re: Vec<[f64; DEG + 1]>,
    im: Vec<[f64; DEG + 1]>,
    real: bool,
}

impl PhiTable {
    /// Returns the tables of `φ_b` and `∂_b φ_b`.
    fn build(b: Complex64, x_max: f64) -> (PhiTable, PhiTable) {
        let nodes = (x_max * NODES_PER_UNIT).ceil() as usize + 2;
        let real = b.im == 0.0;
        let mut v = PhiTable { re: Vec::with_capacity(nodes), im: Vec::with_capacity(nodes), real };
        let mut d = v.clone();
        for j in 0..nodes {
            let x = j as f64 / NODES_PER_UNIT;
            let mut cv = [Complex64::new(0.0, 0.0); DEG + 1];
            let mut cd = cv;
            let mut fact = 1.0;
            for k in 0..=DEG {
                if k > 0 {
                    fact *= k as f64;
                }
                let (p, dp) = phi_series(b + k as f64, x);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                cv[k] = sign * p / fact;
                cd[k] = sign * dp / fact;
            }
            v.re.push(cv.map(|c| c.re));
            v.im.push(cv.map(|c| c.im));
            d.re.push(cd.map(|c| c.re));
            d.im.push(cd.map(|c| c.im));
        }
        (v, d)
    }

    #[inline]
    fn eval_re(&self, x: f64) -> f64 {
        let j = (x * NODES_PER_UNIT).round();
        let t = x - j / NODES_PER_UNIT;
        let c = &self.re[j as usize];
        let mut acc = c[DEG];
        for k in (0..DEG).rev() {
            acc = acc * t + c[k];
        }
        acc
    }

    #[inline]
    fn eval(&self, x: f64) -> Complex64 {
        if self.real {
            return Complex64::new(self.eval_re(x), 0.0);
        }
        let j = (x * NODES_PER_UNIT).round();
        let t = x - j / NODES_PER_UNIT;
        let (cr, ci) = (&self.re[j as usize], &self.im[j as usize]);
        let (mut ar, mut ai) = (cr[DEG], ci[DEG]);
        for k in (0..DEG).rev() {
            ar = ar * t + cr[k];
            ai = ai * t + ci[k];
        }
        Complex64::new(ar, ai)
    }
}

#[derive(Debug, Clone)]
struct ParityData {
    a: Complex64,
    ap: Complex64,
    gamma_a: Complex64,
    gamma_ap: Complex64,
    psi_a: Complex64,
    psi_ap: Complex64,
    phi_a: PhiTable,
    dphi_a: PhiTable,
    phi_ap: PhiTable,
    dphi_ap: PhiTable,
}

/// Output of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeValue {
    pub value: Complex64,
    /// `L'(s)` when requested.
    pub derivative: Option<Complex64>,
    pub err_est: f64,
    /// Number of terms used in each sum.
    pub terms: usize,
}

/// Approximate-functional-equation evaluator at a fixed point `s`, reusable across moduli.
#[derive(Debug, Clone)]
pub struct AfeEvaluator {
    s: Complex64,
    cfg: AfeConfig,
    max_q: u64,
    /// `None` where `Γ(a')` has a pole and the split integral does not apply.
    parity: [Option<ParityData>; 2],
    /// `m^{−s}`, `m^{s−1}`, `ln m`, indexed by `m` (entry 0 unused).
    pow_ms: Vec<Complex64>,
    pow_m1s: Vec<Complex64>,
    ln_m: Vec<f64>,
    /// Prefix sums of `|m^{−s}|` and `|m^{s−1}|`, for the rounding estimate.
    abs_ms: Vec<f64>,
    abs_m1s: Vec<f64>,
}

impl AfeEvaluator {
    /// Builds the tables for moduli up to `max_q`.
    pub fn new(s: Complex64, cfg: AfeConfig, max_q: u64) -> Result<Self> {
        let mk = |kappa: f64| -> Result<ParityData> {
            let a = (s + kappa) / 2.0;
            let ap = (1.0 - s + kappa) / 2.0;
            let (phi_a, dphi_a) = PhiTable::build(a, cfg.x_max);
            let (phi_ap, dphi_ap) = PhiTable::build(ap, cfg.x_max);
            Ok(ParityData {
                a,
                ap,
                gamma_a: gamma(a)?,
                gamma_ap: gamma(ap)?,
                psi_a: digamma_any(a),
                psi_ap: digamma_any(ap),
                phi_a,
                dphi_a,
                phi_ap,
                dphi_ap,
            })
        };
        let parity = [mk(0.0).ok(), mk(1.0).ok()];
        if parity.iter().all(Option::is_none) {
            return Err(Error::Pole(fmt_c(s)));
        }
        let mut ev = AfeEvaluator {
            s,
            cfg,
            max_q: 0,
            parity,
            pow_ms: vec![Complex64::new(0.0, 0.0)],
            pow_m1s: vec![Complex64::new(0.0, 0.0)],
            ln_m: vec![0.0],
            abs_ms: vec![0.0],
            abs_m1s: vec![0.0],
        };
        ev.ensure_modulus(max_q);
        Ok(ev)
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn config(&self) -> AfeConfig {
        self.cfg
    }

    /// Extends the power tables so that moduli up to `q` can be evaluated.
    pub fn ensure_modulus(&mut self, q: u64) {
        if q <= self.max_q {
            return;
        }
        self.max_q = q;
        let m_max = self.m_limit(q, self.cfg.x_max);
        let s = self.s;
        for m in self.pow_ms.len()..=m_max {
            let mf = m as f64;
            let a = rpow(mf, -s);
            let b = rpow(mf, s - 1.0);
            self.pow_ms.push(a);
            self.pow_m1s.push(b);
            self.ln_m.push(mf.ln());
            let la = self.abs_ms[m - 1] + a.norm();
            let lb = self.abs_m1s[m - 1] + b.norm();
            self.abs_ms.push(la);
            self.abs_m1s.push(lb);
        }
    }

    /// Number of terms used for modulus `q` with cutoff `x_max`.
    pub fn m_limit(&self, q: u64, x_max: f64) -> usize {
        let qf = q as f64;
        let by_x = (x_max.min(self.cfg.x_max) * qf / PI).sqrt();
        let by_c = self.cfg.c * qf.sqrt();
        by_x.min(by_c).floor().max(1.0) as usize
    }

    /// Evaluates `L(s, χ)` (and optionally `L'(s, χ)`) for a real primitive character of
    /// modulus `q`, parity `odd`, root number 1, given `chi[m]` for `1 ≤ m ≤ m_limit`.
    ///
    /// `x_max` may lower the configured cutoff for terms that only need coarse accuracy.
    pub fn eval(&self, q: u64, odd: bool, chi: &[i8], x_max: Option<f64>, deriv: bool) -> Result<AfeValue> {
        if q > self.max_q {
            return Err(Error::ModulusTooLarge { n: q, max: self.max_q });
        }
        let x_max = x_max.unwrap_or(self.cfg.x_max).min(self.cfg.x_max);
        let mm = self.m_limit(q, x_max);
        assert!(chi.len() > mm, "character table too short");
        let pd = self.parity[odd as usize].as_ref().ok_or_else(|| Error::Pole(fmt_c(self.s)))?;
        let kappa = odd as u8;
        let qf = q as f64;
        let scale = PI / qf;

        let (mut s1, mut s2, mut f1, mut f2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut ds1, mut ds2, mut df1, mut df2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let real = pd.phi_a.real && pd.phi_ap.real;
        if real && !deriv {
            let (mut r1, mut r2, mut g1, mut g2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
            for m in 1..=mm {
                let c = chi[m];
                if c == 0 {
                    continue;
                }
                let cf = c as f64;
                let mf = m as f64;
                let x = scale * mf * mf;
                let w = if kappa == 1 { cf * mf } else { cf };
                r1 += cf * self.pow_ms[m].re;
                r2 += cf * self.pow_m1s[m].re;
                g1 += w * pd.phi_a.eval_re(x);
                g2 += w * pd.phi_ap.eval_re(x);
            }
            s1 = Complex64::new(r1, 0.0);
            s2 = Complex64::new(r2, 0.0);
            f1 = Complex64::new(g1, 0.0);
            f2 = Complex64::new(g2, 0.0);
        } else if real {
            let mut r = [0.0f64; 8];
            for m in 1..=mm {
                let c = chi[m];
                if c == 0 {
                    continue;
                }
                let cf = c as f64;
                let mf = m as f64;
                let x = scale * mf * mf;
                let w = if kappa == 1 { cf * mf } else { cf };
                let pm = cf * self.pow_ms[m].re;
                let pm1 = cf * self.pow_m1s[m].re;
                let l = self.ln_m[m];
                r[0] += pm;
                r[1] += pm1;
                r[2] += w * pd.phi_a.eval_re(x);
                r[3] += w * pd.phi_ap.eval_re(x);
                r[4] -= l * pm;
                r[5] += l * pm1;
                r[6] += w * pd.dphi_a.eval_re(x);
                r[7] += w * pd.dphi_ap.eval_re(x);
            }
            let c = |v: f64| Complex64::new(v, 0.0);
            (s1, s2, f1, f2) = (c(r[0]), c(r[1]), c(r[2]), c(r[3]));
            (ds1, ds2, df1, df2) = (c(r[4]), c(r[5]), c(r[6]), c(r[7]));
        } else {
            for m in 1..=mm {
                let c = chi[m];
                if c == 0 {
                    continue;
                }
                let cf = c as f64;
                let mf = m as f64;
                let x = scale * mf * mf;
                let w = if kappa == 1 { cf * mf } else { cf };
                let pm = cf * self.pow_ms[m];
                let pm1 = cf * self.pow_m1s[m];
                s1 += pm;
                s2 += pm1;
                f1 += w * pd.phi_a.eval(x);
                f2 += w * pd.phi_ap.eval(x);
                if deriv {
                    let l = self.ln_m[m];
                    ds1 -= l * pm;
                    ds2 += l * pm1;
                    df1 += w * pd.dphi_a.eval(x);
                    df2 += w * pd.dphi_ap.eval(x);
                }
            }
        }

        let lq = (qf / PI).ln();
        // G = 1/(Γ(a)(q/π)^a), H = (q/π)^{1/2−s} Γ(a')/Γ(a)
        let g = 1.0 / (pd.gamma_a * (pd.a * lq).exp());
        let h = ((0.5 - self.s) * lq).exp() * pd.gamma_ap / pd.gamma_a;
        let value = s1 - g * f1 + h * s2 - g * f2;

        let derivative = if deriv {
            let dg = -g * (0.5 * pd.psi_a + 0.5 * lq);
            let dh = h * (-lq - 0.5 * pd.psi_ap - 0.5 * pd.psi_a);
            // da/ds = 1/2, da'/ds = −1/2
            let df1s = 0.5 * df1;
            let df2s = -0.5 * df2;
            Some(ds1 - (df1s * g + f1 * dg) + (dh * s2 + h * ds2) - (df2s * g + f2 * dg))
        } else {
            None
        };

        let err_est = self.tail_bound(q, mm, pd, g) + 4e-16 * (self.abs_ms[mm] + h.norm() * self.abs_m1s[mm]) * (mm as f64).sqrt().max(1.0);
        Ok(AfeValue { value, derivative, err_est, terms: mm })
    }

    fn tail_bound(&self, q: u64, mm: usize, pd: &ParityData, g: Complex64) -> f64 {
        let qf = q as f64;
        let m1 = (mm + 1) as f64;
        let x = PI * m1 * m1 / qf;
        let amax = pd.a.norm().max(pd.ap.norm());
        // |x^{−a}Γ(a, x)| ≤ 2 e^{−x}/x once x ≥ 2|a| + 2; below that fall back on a crude bound
        let per = if x >= 2.0 * amax + 2.0 { 2.0 * (-x).exp() / x } else { 1.0 };
        let count = 1.0 + qf / (2.0 * PI * m1);
        let w = if pd.a.re > 0.5 { m1 } else { 1.0 };
        let ga = (pd.gamma_ap / pd.gamma_a).norm().max(1.0);
        per * count * w * g.norm() * (1.0 + ga)
    }
}

fn digamma_any(z: Complex64) -> Complex64 {
    if z.re > 0.0 {
        digamma(z)
    } else {
        // reflection ψ(1−z) − ψ(z) = π cot(πz)
        digamma(1.0 - z) - PI / (PI * z).tan()
    }
}

/// Character values on primes, from per-prime Legendre tables.
#[derive(Debug, Clone)]
pub struct CharTables {
    m_max: usize,
    spf: Vec<u32>,
    /// `(r/p)` for `r mod p`, for every odd prime `p ≤ m_max`.
    legendre: Vec<Vec<i8>>,
    primes: Vec<u64>,
}

impl CharTables {
    pub fn new(m_max: usize) -> Self {
        let primes = primes_up_to(m_max as u64);
        let mut spf = vec![0u32; m_max + 1];
        for &p in &primes {
            let mut j = p as usize;
            while j <= m_max {
                if spf[j] == 0 {
                    spf[j] = p as u32;
                }
                j += p as usize;
            }
        }
        let legendre = primes
            .iter()
            .map(|&p| {
                if p == 2 {
                    return Vec::new();
                }
                let mut t = vec![-1i8; p as usize];
                t[0] = 0;
                for r in 1..p {
                    t[((r * r) % p) as usize] = 1;
                }
                t
            })
            .collect();
        CharTables { m_max, spf, legendre, primes }
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    fn fill_multiplicative(&self, mm: usize, out: &mut Vec<i8>, on_prime: impl Fn(usize, u64) -> i8) {
        assert!(mm <= self.m_max, "character table exceeds prepared range");
        out.clear();
        out.resize(mm + 1, 0);
        if mm == 0 {
            return;
        }
        out[1] = 1;
        let mut pi = 0;
        for m in 2..=mm {
            let p = self.spf[m] as usize;
            out[m] = if p == m {
                while self.primes[pi] as usize != m {
                    pi += 1;
                }
                on_prime(pi, m as u64)
            } else {
                out[p] * out[m / p]
            };
        }
    }

    /// `(d/m)` for `1 ≤ m ≤ mm`.
    pub fn fill_kronecker_top(&self, d: u64, mm: usize, out: &mut Vec<i8>) {
        self.fill_multiplicative(mm, out, |pi, p| {
            if p == 2 {
                match d % 8 {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else {
                self.legendre[pi][(d % p) as usize]
            }
        });
    }

    /// `(m/n)` for odd `n` and `1 ≤ m ≤ mm`.
    pub fn fill_jacobi(&self, n: u64, mm: usize, out: &mut Vec<i8>) {
        self.fill_multiplicative(mm, out, |pi, p| {
            if p == 2 {
                match n % 8 {
                    1 | 7 => 1,
                    _ => -1,
                }
            } else {
                let l = self.legendre[pi][(n % p) as usize];
                if (p % 4 == 3) && (n % 4 == 3) {
                    -l
                } else {
                    l
                }
            }
        });
    }
}
