//! Quadratic characters, shifted Gauss sums `τ(χ, q) = Σ_j χ(j) e(jq/n)`, their
//! normalized multiplicative variant `G(χ_n, q)` and root numbers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{jacobi, kronecker, FactorSieve};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The Jacobi character `( · /n)` for odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadChar {
    pub n: u64,
    pub n0: u64,
    pub n1: u64,
    /// `χ(−1) = 1`, i.e. `n ≡ 1 mod 4`.
    pub even: bool,
    /// `n` squarefree.
    pub primitive: bool,
}

impl QuadChar {
    pub fn new(n: u64, sieve: &FactorSieve) -> Result<Self> {
        assert!(n % 2 == 1, "QuadChar needs an odd modulus");
        let (n0, n1) = sieve.squarefree_kernel(n)?;
        Ok(QuadChar { n, n0, n1, even: n % 4 == 1, primitive: n1 == 1 })
    }

    #[inline]
    pub fn eval(&self, m: i64) -> i8 {
        jacobi(m, self.n)
    }

    pub fn to_periodic(&self) -> PeriodicChar {
        PeriodicChar::jacobi(self.n)
    }
}

/// One of the quadratic characters modulo 8: `ψ_j(m) = (4j/m)` for `j ≠ 0`, `ψ_0 ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Psi8 {
    pub j: i8,
}

impl Psi8 {
    pub const ALL: [i8; 5] = [0, 1, -1, 2, -2];

    pub fn new(j: i8) -> Self {
        assert!(Self::ALL.contains(&j), "ψ_j needs j in {{0, ±1, ±2}}");
        Psi8 { j }
    }

    #[inline]
    pub fn eval(&self, m: i64) -> i8 {
        if self.j == 0 {
            1
        } else {
            kronecker(4 * self.j as i64, m)
        }
    }

    pub fn modulus(&self) -> u64 {
        match self.j {
            0 => 1,
            1 | -1 => 4,
            _ => 8,
        }
    }

    pub fn to_periodic(&self) -> PeriodicChar {
        let q = self.modulus();
        PeriodicChar::from_fn(q, |m| self.eval(m as i64))
    }

    /// `τ(ψ_j, q)` by the direct sum over one period.
    pub fn tau(&self, q: i64) -> Complex64 {
        let m = self.modulus();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..m as i64 {
            let v = self.eval(r);
            if v != 0 {
                acc += v as f64 * unit_root((r * q).rem_euclid(m as i64) as u64, m);
            }
        }
        acc
    }
}

#[inline]
fn unit_root(r: u64, n: u64) -> Complex64 {
    let t = 2.0 * PI * r as f64 / n as f64;
    Complex64::new(t.cos(), t.sin())
}

/// A real character given by its values on one period `0..modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicChar {
    pub modulus: u64,
    pub values: Vec<i8>,
}

impl PeriodicChar {
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> i8) -> Self {
        PeriodicChar { modulus, values: (0..modulus).map(f).collect() }
    }

    /// `( · /n)` for odd `n`.
    pub fn jacobi(n: u64) -> Self {
        Self::from_fn(n, |r| jacobi(r as i64, n))
    }

    /// `(d/ · )` for `d ≡ 0, 1 mod 4`, which has period `d`.
    pub fn kronecker_top(d: u64) -> Self {
        debug_assert!(d.is_multiple_of(4) || d % 4 == 1);
        Self::from_fn(d, |r| kronecker(d as i64, r as i64))
    }

    pub fn trivial() -> Self {
        PeriodicChar { modulus: 1, values: vec![1] }
    }

    #[inline]
    pub fn eval(&self, m: i64) -> i8 {
        self.values[m.rem_euclid(self.modulus as i64) as usize]
    }

    /// Pointwise product, with period the lcm of the two periods.
    pub fn mul(&self, other: &PeriodicChar) -> PeriodicChar {
        let g = gcd(self.modulus, other.modulus);
        let m = self.modulus / g * other.modulus;
        Self::from_fn(m, |r| self.eval(r as i64) * other.eval(r as i64))
    }

    /// `χ(−1) = 1` (for the principal character of modulus 1 this is true).
    pub fn is_even(&self) -> bool {
        self.eval(-1) >= 0
    }

    /// `τ(χ, q)` for every `q mod n`, via a cosine table.
    pub fn tau_all(&self) -> Vec<Complex64> {
        let n = self.modulus as usize;
        let roots: Vec<Complex64> = (0..n as u64).map(|r| unit_root(r, n as u64)).collect();
        let nz: Vec<(usize, f64)> =
            self.values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, &v)| (j, v as f64)).collect();
        (0..n)
            .map(|q| {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(j, v) in &nz {
                    acc += v * roots[(j * q) % n];
                }
                acc
            })
            .collect()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `Σ_{j mod n} χ(j) e(jq/n)` by direct summation.
pub fn tau_bruteforce(chi: &PeriodicChar, q: i64) -> Complex64 {
    let n = chi.modulus;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &v) in chi.values.iter().enumerate() {
        if v != 0 {
            let r = ((j as i128 * q as i128).rem_euclid(n as i128)) as u64;
            acc += v as f64 * unit_root(r, n);
        }
    }
    acc
}

/// The normalizing factor `(1−i)/2 + (−1/n)(1+i)/2`, which is 1 or `−i`.
pub fn g_normalizer(n: u64) -> Complex64 {
    if n % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        -I
    }
}

fn ord_p(p: u64, q: i64) -> u32 {
    if q == 0 {
        return u32::MAX;
    }
    let mut q = q.unsigned_abs();
    let mut a = 0;
    while q.is_multiple_of(p) {
        q /= p;
        a += 1;
    }
    a
}

/// `G(χ_{p^k}, q)` for an odd prime `p`, by the exact case split on `α = ord_p(q)`.
pub fn g_prime_power(p: u64, k: u32, q: i64) -> Complex64 {
    let alpha = ord_p(p, q);
    let pf = p as f64;
    let v = if k <= alpha {
        if k.is_multiple_of(2) {
            pf.powi(k as i32) - pf.powi(k as i32 - 1)
        } else {
            0.0
        }
    } else if k == alpha + 1 {
        let pa = pf.powi(alpha as i32);
        if k.is_multiple_of(2) {
            -pa
        } else {
            let unit = q / (p as i64).pow(alpha);
            jacobi(unit, p) as f64 * pa * pf.sqrt()
        }
    } else {
        0.0
    };
    Complex64::new(v, 0.0)
}

/// `G(χ_n, q)` for odd `n`, assembled multiplicatively from prime powers.
pub fn g_quadratic(n: u64, q: i64, sieve: &FactorSieve) -> Result<Complex64> {
    let f = sieve.factorize(n)?;
    let mut acc = Complex64::new(1.0, 0.0);
    for (p, e) in f.pairs {
        acc *= g_prime_power(p, e, q);
        if acc == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    Ok(acc)
}

/// `τ(χ_n, q)` recovered from `G(χ_n, q)`.
pub fn tau_quadratic(n: u64, q: i64, sieve: &FactorSieve) -> Result<Complex64> {
    Ok(g_quadratic(n, q, sieve)? / g_normalizer(n))
}

/// `τ((4l/ · ), q)` for odd `l` from `τ(( · /l), q)`.
pub fn tau_4l(l: u64, q: i64, sieve: &FactorSieve) -> Result<Complex64> {
    let t = tau_quadratic(l, q, sieve)?;
    let qm = q.rem_euclid(4);
    Ok(if l % 4 == 1 {
        match qm {
            2 => -2.0 * t,
            0 => 2.0 * t,
            _ => Complex64::new(0.0, 0.0),
        }
    } else {
        match qm {
            1 => -2.0 * I * t,
            3 => 2.0 * I * t,
            _ => Complex64::new(0.0, 0.0),
        }
    })
}

/// Root number data for a primitive `χ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon {
    /// Parity constant: 1 for even, `−i` for odd characters.
    pub a: Complex64,
    /// `ε(χ) = a τ(χ, 1)/√n`.
    pub eps: Complex64,
}

/// Parity constant used in the functional equation for any (possibly imprimitive) character.
pub fn parity_constant(even: bool) -> Complex64 {
    if even {
        Complex64::new(1.0, 0.0)
    } else {
        -I
    }
}

pub fn epsilon_factor(chi: &QuadChar, sieve: &FactorSieve) -> Result<Epsilon> {
    if !chi.primitive {
        return Err(Error::NotPrimitive(chi.n));
    }
    let a = parity_constant(chi.even);
    let tau = tau_quadratic(chi.n, 1, sieve)?;
    Ok(Epsilon { a, eps: a * tau / (chi.n as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-10
    }

    #[test]
    fn brute_force_examples() {
        let s3 = 3f64.sqrt();
        assert!(close(tau_bruteforce(&PeriodicChar::jacobi(3), 1), Complex64::new(0.0, s3)));
        assert!(close(tau_bruteforce(&PeriodicChar::jacobi(5), 0), Complex64::new(0.0, 0.0)));
        assert!(close(tau_bruteforce(&PeriodicChar::jacobi(15), 15), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn g_examples() {
        let s = FactorSieve::new(1000);
        assert!(close(g_quadratic(3, 1, &s).unwrap(), Complex64::new(3f64.sqrt(), 0.0)));
        assert!(close(g_quadratic(9, 1, &s).unwrap(), Complex64::new(0.0, 0.0)));
        assert!(close(g_quadratic(15, 1, &s).unwrap(), Complex64::new(15f64.sqrt(), 0.0)));
        assert!(close(g_prime_power(3, 2, 3), Complex64::new(-3.0, 0.0)));
        assert!(close(g_prime_power(5, 2, 25), Complex64::new(20.0, 0.0)));
        assert!(close(g_prime_power(3, 1, 3), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn tau_4l_examples() {
        let s = FactorSieve::new(1000);
        for q in [1, 3, 5, 7] {
            assert!(close(tau_4l(5, q, &s).unwrap(), Complex64::new(0.0, 0.0)));
        }
        let t52 = tau_bruteforce(&PeriodicChar::jacobi(5), 2);
        assert!(close(tau_4l(5, 2, &s).unwrap(), -2.0 * t52));
        assert!(close(tau_4l(3, 1, &s).unwrap(), Complex64::new(2.0 * 3f64.sqrt(), 0.0)));
    }

    #[test]
    fn epsilon_examples() {
        let s = FactorSieve::new(1000);
        for n in [5, 3, 15] {
            let chi = QuadChar::new(n, &s).unwrap();
            assert!(close(epsilon_factor(&chi, &s).unwrap().eps, Complex64::new(1.0, 0.0)));
        }
        let chi9 = QuadChar::new(9, &s).unwrap();
        assert_eq!(epsilon_factor(&chi9, &s), Err(Error::NotPrimitive(9)));
    }

    #[test]
    fn psi_tau_matches_periodic() {
        for j in Psi8::ALL {
            let psi = Psi8::new(j);
            for q in -3..10 {
                assert!(close(psi.tau(q), tau_bruteforce(&psi.to_periodic(), q)));
            }
        }
    }
}
