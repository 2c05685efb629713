//! Complex Γ and its even/odd ratios, Riemann and Hurwitz zeta (with derivatives)
//! by Euler–Maclaurin summation, and the Mellin transform of the canonical weight.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{fmt_c, Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// First Stieltjes constant.
pub const STIELTJES_1: f64 = -0.072_815_845_483_676_72;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// `x^s` for real `x > 0`.
#[inline]
pub fn rpow(x: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new(x.powf(s.re), 0.0)
    } else {
        let l = x.ln();
        Complex64::from_polar((s.re * l).exp(), s.im * l)
    }
}

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` for `Re z ≥ 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Complex Γ(s).
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if nonpositive_integer(s) {
        return Err(Error::Pole(fmt_c(s)));
    }
    if s.re < 0.5 {
        // reflection
        let sp = (PI * s).sin();
        Ok(PI / (sp * ln_gamma_right(ONE - s).exp()))
    } else {
        Ok(ln_gamma_right(s).exp())
    }
}

/// `1/Γ(s)`, entire.
pub fn rgamma(s: Complex64) -> Complex64 {
    if nonpositive_integer(s) {
        return Complex64::new(0.0, 0.0);
    }
    if s.re < 0.5 {
        (PI * s).sin() * ln_gamma_right(ONE - s).exp() / PI
    } else {
        (-ln_gamma_right(s)).exp()
    }
}

/// `Γ((1−s)/2) / Γ(s/2)`.
pub fn gamma_e(s: Complex64) -> Result<Complex64> {
    Ok(gamma((ONE - s) / 2.0)? * rgamma(s / 2.0))
}

/// `Γ((2−s)/2) / Γ((s+1)/2)`.
pub fn gamma_o(s: Complex64) -> Result<Complex64> {
    Ok(gamma((2.0 - s) / 2.0)? * rgamma((s + 1.0) / 2.0))
}

/// Closed form of `Γ_o(s) + Γ_e(s)`: `2^{s+1/2} Γ(1−s) cos(πs/2 − π/4) / √π`.
pub fn go_plus_ge(s: Complex64) -> Result<Complex64> {
    let c = (PI * s / 2.0 - PI / 4.0).cos();
    Ok(rpow(2.0, s + 0.5) * gamma(ONE - s)? * c / PI.sqrt())
}

/// Digamma ψ(z) for `Re z > 0`.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let iz2 = 1.0 / (z * z);
    // B_{2k}/(2k) for k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
        -3617.0 / 8160.0,
    ];
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = iz2;
    for c in C {
        series += c * p;
        p *= iz2;
    }
    acc + z.ln() - 0.5 / z - series
}

/// `B_{2k}/(2k)!` for `k = 1..=KMAX`.
const KMAX: usize = 30;
fn bernoulli_coeffs() -> &'static [f64; KMAX] {
    static B: OnceLock<[f64; KMAX]> = OnceLock::new();
    B.get_or_init(|| {
        const EXACT: [(f64, f64); 10] = [
            (1.0, 6.0),
            (-1.0, 30.0),
            (1.0, 42.0),
            (-1.0, 30.0),
            (5.0, 66.0),
            (-691.0, 2730.0),
            (7.0, 6.0),
            (-3617.0, 510.0),
            (43867.0, 798.0),
            (-174611.0, 330.0),
        ];
        let mut out = [0.0; KMAX];
        let mut fact = 1.0f64;
        for k in 1..=KMAX {
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            out[k - 1] = if k <= EXACT.len() {
                EXACT[k - 1].0 / EXACT[k - 1].1 / fact
            } else {
                let z: f64 = (1..12).map(|n| (n as f64).powi(-2 * k as i32)).sum();
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * z / (2.0 * PI).powi(2 * k as i32)
            };
        }
        out
    })
}

/// Euler–Maclaurin evaluator of `ζ(s, a)` and `∂ζ/∂s (s, a)` at a fixed `s`.
///
/// The polynomial factors of the correction terms depend only on `s`, so they are
/// computed once and reused for every shift `a`.
#[derive(Debug, Clone)]
pub struct HurwitzAtS {
    s: Complex64,
    n: usize,
    /// `B_{2k}/(2k)! · (s)_{2k−1}` and its `s`-derivative.
    coef: Vec<(Complex64, Complex64)>,
}

impl HurwitzAtS {
    pub fn new(s: Complex64) -> Result<Self> {
        if (s - 1.0).norm() < 1e-14 {
            return Err(Error::Pole(fmt_c(s)));
        }
        let n = 10 + s.norm().ceil() as usize;
        let b = bernoulli_coeffs();
        let mut coef = Vec::with_capacity(KMAX);
        // P_k(s) = s (s+1) ... (s+2k-2)
        let mut p = s;
        let mut dp = ONE;
        for (k, bk) in b.iter().enumerate() {
            coef.push((*bk * p, *bk * dp));
            let j1 = (2 * k + 1) as f64;
            let j2 = (2 * k + 2) as f64;
            dp = dp * (s + j1) + p;
            p *= s + j1;
            dp = dp * (s + j2) + p;
            p *= s + j2;
        }
        Ok(HurwitzAtS { s, n, coef })
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    /// `ζ(s, a)` for real `a > 0`.
    pub fn eval(&self, a: f64) -> Complex64 {
        self.eval_impl(a, false).0
    }

    /// `(ζ(s, a), ∂_s ζ(s, a))`.
    pub fn eval_with_derivative(&self, a: f64) -> (Complex64, Complex64) {
        self.eval_impl(a, true)
    }

    fn eval_impl(&self, a: f64, deriv: bool) -> (Complex64, Complex64) {
        let s = self.s;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut dsum = Complex64::new(0.0, 0.0);
        for k in 0..self.n {
            let x = k as f64 + a;
            let t = rpow(x, -s);
            sum += t;
            if deriv {
                dsum -= x.ln() * t;
            }
        }
        let big_n = self.n as f64 + a;
        let ln_n = big_n.ln();
        let np = rpow(big_n, -s);
        let sm1 = s - 1.0;
        let head = big_n * np / sm1;
        sum += head + 0.5 * np;
        if deriv {
            dsum += -ln_n * head - head / sm1 - 0.5 * ln_n * np;
        }
        let inv_n2 = 1.0 / (big_n * big_n);
        let mut pw = np / big_n; // N^{-s-1}
        let scale = sum.norm().max(1e-300);
        let mut prev = f64::INFINITY;
        for (c, dc) in &self.coef {
            let term = *c * pw;
            let tn = if deriv { term.norm() + (*dc * pw).norm() } else { term.norm() };
            if tn > prev {
                break;
            }
            sum += term;
            if deriv {
                dsum += (*dc - ln_n * *c) * pw;
            }
            if tn < 1e-18 * scale {
                break;
            }
            prev = tn;
            pw *= inv_n2;
        }
        (sum, dsum)
    }
}

/// Hurwitz zeta `ζ(s, a)` for real `a > 0`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    Ok(HurwitzAtS::new(s)?.eval(a))
}

/// Riemann zeta.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

/// `(ζ(s), ζ'(s))` with the derivative taken analytically through Euler–Maclaurin.
pub fn zeta_with_derivative(s: Complex64) -> Result<(Complex64, Complex64)> {
    Ok(HurwitzAtS::new(s)?.eval_with_derivative(1.0))
}

/// `1/ζ(s)`, continued through `s = 1` where it vanishes.
pub fn zeta_recip(s: Complex64) -> Complex64 {
    let u = s - 1.0;
    if u.norm() < 1e-6 {
        return u / (1.0 + EULER_GAMMA * u - STIELTJES_1 * u * u);
    }
    1.0 / zeta(s).expect("away from the pole")
}

fn prime_divisors_small(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            out.push(p);
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// `∏_{p | k} (1 − p^{−s})`.
pub fn euler_factors_removed(s: Complex64, k: u64) -> Complex64 {
    prime_divisors_small(k)
        .into_iter()
        .fold(ONE, |acc, p| acc * (ONE - rpow(p as f64, -s)))
}

/// `ζ_{(k)}(s) = ζ(s) ∏_{p | k} (1 − p^{−s})`.
pub fn zeta_removed(s: Complex64, k: u64) -> Result<Complex64> {
    Ok(zeta(s)? * euler_factors_removed(s, k))
}

/// `1/ζ_{(k)}(s)`, continued through `s = 1`.
pub fn zeta_removed_recip(s: Complex64, k: u64) -> Complex64 {
    zeta_recip(s) / euler_factors_removed(s, k)
}

/// Smoothing weight used by every sum in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightSpec {
    /// `f(x) = e^{−x}`.
    #[default]
    Exponential,
}

impl WeightSpec {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Exponential => (-x).exp(),
        }
    }
}

/// Mellin transform `∫_0^∞ f(x) x^{s−1} dx` of the weight.
pub fn mellin_weight(spec: WeightSpec, s: Complex64) -> Result<Complex64> {
    match spec {
        WeightSpec::Exponential => {
            if s.re <= 0.0 {
                return Err(Error::OutOfStrip(fmt_c(s)));
            }
            gamma(s)
        }
    }
}
