//! Exact integer arithmetic: Kronecker symbols, a smallest-prime-factor sieve,
//! factorizations, fundamental discriminants and small multiplicative functions.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default sieve bound, large enough for sweeps up to `X = 10^5` with `n_cap = 20 X`.
pub const DEFAULT_SIEVE_LIMIT: u64 = 2_000_000;

const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/n)` with the usual extensions to even, negative and zero `n`.
///
/// `(a/0)` is 1 for `a = ±1` and 0 otherwise; `(a/-1)` is the sign of `a`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut k: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a & 1 == 0 {
            return 0;
        }
        if v & 1 == 1 {
            k *= TAB2[(a & 7) as usize];
        }
        n >>= v;
    }
    k * jacobi_unchecked(a.rem_euclid(n) as u64, n as u64)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i8 {
    debug_assert!(n & 1 == 1);
    jacobi_unchecked(a.rem_euclid(n as i64) as u64, n)
}

fn jacobi_unchecked(mut a: u64, mut n: u64) -> i8 {
    let mut k: i8 = 1;
    while a != 0 {
        let v = a.trailing_zeros();
        a >>= v;
        if v & 1 == 1 {
            k *= TAB2[(n & 7) as usize];
        }
        if a & n & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = n % r;
        n = r;
    }
    if n == 1 {
        k
    } else {
        0
    }
}

/// Prime factorization `n = ∏ p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }
}

/// The three shapes a positive fundamental discriminant can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscKind {
    /// `d ≡ 1 mod 4`, squarefree.
    OneMod4,
    /// `d = 4m`, `m ≡ 3 mod 4` squarefree.
    FourM,
    /// `d = 8m`, `m` odd squarefree.
    EightM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FundamentalDiscriminant {
    pub d: u64,
    pub kind: DiscKind,
}

fn squarefree_trial(mut n: u64) -> bool {
    if n.is_multiple_of(4) {
        return false;
    }
    if n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 2;
    }
    true
}

fn classify_with(d: u64, sqfree: impl Fn(u64) -> bool) -> Option<DiscKind> {
    match d % 4 {
        1 if d > 1 && sqfree(d) => Some(DiscKind::OneMod4),
        0 => {
            let m = d / 4;
            match m % 4 {
                3 if sqfree(m) => Some(DiscKind::FourM),
                2 if sqfree(m) => Some(DiscKind::EightM),
                _ => None,
            }
        }
        _ => None,
    }
}

/// True iff `d ≥ 1` is a fundamental discriminant (with `d = 1` accepted here as the
/// discriminant of the trivial character; enumeration excludes it).
pub fn is_fundamental_discriminant(d: u64) -> bool {
    d == 1 || classify_with(d, squarefree_trial).is_some()
}

/// Smallest-prime-factor table up to a fixed limit; immutable after construction.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        let mut i = 2usize;
        while i * i < len {
            if spf[i] == 0 {
                let mut j = i * i;
                while j < len {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        for (n, s) in spf.iter_mut().enumerate().skip(2) {
            if *s == 0 {
                *s = n as u32;
            }
        }
        FactorSieve { limit, spf }
    }

    /// Process-wide sieve with the default limit, built on first use.
    pub fn shared() -> &'static FactorSieve {
        static SIEVE: OnceLock<FactorSieve> = OnceLock::new();
        SIEVE.get_or_init(|| FactorSieve::new(DEFAULT_SIEVE_LIMIT))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn check(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::SieveTooSmall { limit: self.limit, needed: n })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor of `2 ≤ n ≤ limit`.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| self.spf(n) == n)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        Ok(Factorization { n, pairs })
    }

    /// Distinct prime divisors, increasing.
    pub fn prime_divisors(&self, n: u64) -> Result<Vec<u64>> {
        self.check(n)?;
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf(m);
            while m.is_multiple_of(p) {
                m /= p;
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn is_squarefree(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        let mut m = n;
        let mut last = 0;
        while m > 1 {
            let p = self.spf(m);
            if p == last {
                return Ok(false);
            }
            last = p;
            m /= p;
        }
        Ok(true)
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        self.check(n)?;
        let mut m = n;
        let mut last = 0;
        let mut sign = 1i8;
        while m > 1 {
            let p = self.spf(m);
            if p == last {
                return Ok(0);
            }
            last = p;
            sign = -sign;
            m /= p;
        }
        Ok(sign)
    }

    /// Splits `n` as `n0 · n1²` with `n0` squarefree.
    pub fn squarefree_kernel(&self, n: u64) -> Result<(u64, u64)> {
        let f = self.factorize(n)?;
        let mut n0 = 1;
        let mut n1 = 1;
        for (p, e) in f.pairs {
            if e & 1 == 1 {
                n0 *= p;
            }
            n1 *= p.pow(e / 2);
        }
        Ok((n0, n1))
    }

    /// Euler's totient.
    pub fn phi(&self, n: u64) -> Result<u64> {
        let mut r = n;
        for p in self.prime_divisors(n)? {
            r = r / p * (p - 1);
        }
        Ok(r)
    }

    /// `∏_{p | l} (1 − p^{−t})`.
    pub fn a_t(&self, l: u64, t: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(1.0, 0.0);
        for p in self.prime_divisors(l)? {
            acc *= Complex64::new(1.0, 0.0) - Complex64::new(p as f64, 0.0).powc(-t);
        }
        Ok(acc)
    }

    pub fn classify_discriminant(&self, d: u64) -> Result<Option<DiscKind>> {
        self.check(d)?;
        Ok(classify_with(d, |m| self.is_squarefree(m).unwrap_or(false)))
    }

    pub fn is_fundamental_discriminant(&self, d: u64) -> Result<bool> {
        Ok(d == 1 || self.classify_discriminant(d)?.is_some())
    }

    /// All fundamental discriminants `1 < d ≤ x`, ascending.
    pub fn enumerate_fundamental_discriminants(&self, x: u64) -> Result<Vec<FundamentalDiscriminant>> {
        self.check(x)?;
        let mut out = Vec::with_capacity((x as f64 * 0.31) as usize + 4);
        for d in 2..=x {
            if let Some(kind) = classify_with(d, |m| self.is_squarefree(m).unwrap_or(false)) {
                out.push(FundamentalDiscriminant { d, kind });
            }
        }
        Ok(out)
    }
}

/// Odd primes up to `limit` by a plain sieve; used where no [`FactorSieve`] is around.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}
