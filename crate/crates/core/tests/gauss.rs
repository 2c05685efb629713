use proptest::prelude::*;
use qratio_core::arith::{jacobi, kronecker, FactorSieve};
use qratio_core::gauss::*;
use qratio_core::Complex64;

fn sieve() -> &'static FactorSieve {
    FactorSieve::shared()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn brute_force_examples() {
    assert!(close(tau_bruteforce(&PeriodicChar::jacobi(3), 1), c(0.0, 3f64.sqrt()), 1e-12));
    assert!(close(tau_bruteforce(&PeriodicChar::jacobi(5), 0), c(0.0, 0.0), 1e-12));
    assert!(close(tau_bruteforce(&PeriodicChar::jacobi(15), 15), c(0.0, 0.0), 1e-12));
}

#[test]
fn normalized_sum_examples() {
    assert!(close(g_quadratic(3, 1, sieve()).unwrap(), c(3f64.sqrt(), 0.0), 1e-12));
    assert!(close(g_quadratic(9, 1, sieve()).unwrap(), c(0.0, 0.0), 1e-12));
    let g15 = g_quadratic(15, 1, sieve()).unwrap();
    assert!(close(g15, c(15f64.sqrt(), 0.0), 1e-12));
    assert!(close(g15, tau_bruteforce(&PeriodicChar::jacobi(15), 1) * g_normalizer(15), 1e-10));
}

#[test]
fn prime_power_cases() {
    assert!(close(g_prime_power(3, 2, 3), c(-3.0, 0.0), 0.0));
    assert!(close(g_prime_power(5, 2, 25), c(20.0, 0.0), 0.0));
    assert!(close(g_prime_power(3, 1, 3), c(0.0, 0.0), 0.0));
}

#[test]
fn modulus_4l_examples() {
    for q in [1i64, 3, 5, 7, -9] {
        assert_eq!(tau_4l(5, q, sieve()).unwrap(), c(0.0, 0.0));
    }
    let t = tau_quadratic(5, 2, sieve()).unwrap();
    assert!(close(tau_4l(5, 2, sieve()).unwrap(), -2.0 * t, 1e-12));
    assert!(close(tau_4l(3, 1, sieve()).unwrap(), c(2.0 * 3f64.sqrt(), 0.0), 1e-12));
}

#[test]
fn root_numbers() {
    for n in [5u64, 3, 15] {
        let e = epsilon_factor(&QuadChar::new(n, sieve()).unwrap(), sieve()).unwrap();
        assert!(close(e.eps, c(1.0, 0.0), 1e-12), "n={n}: {}", e.eps);
    }
    assert!(epsilon_factor(&QuadChar::new(9, sieve()).unwrap(), sieve()).is_err());
}

#[test]
fn normalized_sums_match_brute_force() {
    let mut worst = 0.0f64;
    for n in (1..=999u64).step_by(2) {
        let chi = PeriodicChar::jacobi(n);
        for q in 0..=60 {
            let d = (g_quadratic(n, q, sieve()).unwrap() - g_normalizer(n) * tau_bruteforce(&chi, q)).norm();
            worst = worst.max(d);
        }
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn twisted_multiplicativity() {
    for n1 in (1..=200u64).step_by(2) {
        for n2 in (1..=200u64).step_by(2) {
            if gcd(n1, n2) != 1 || n1 * n2 > 3_000 {
                continue;
            }
            let (c1, c2) = (PeriodicChar::jacobi(n1), PeriodicChar::jacobi(n2));
            let prod = PeriodicChar::jacobi(n1 * n2);
            let sign = (jacobi(n2 as i64, n1) * jacobi(n1 as i64, n2)) as f64;
            for q in 0..=40 {
                let lhs = tau_bruteforce(&prod, q);
                let rhs = sign * tau_bruteforce(&c1, q) * tau_bruteforce(&c2, q);
                assert!(close(lhs, rhs, 1e-9), "n1={n1} n2={n2} q={q}");
            }
        }
    }
}

#[test]
fn primitive_reduction_and_modulus() {
    for n in (3..=301u64).step_by(2) {
        if !sieve().is_squarefree(n).unwrap() {
            continue;
        }
        let t1 = tau_quadratic(n, 1, sieve()).unwrap();
        assert!((t1.norm() - (n as f64).sqrt()).abs() < 1e-10);
        for q in 1..=40i64 {
            if gcd(q as u64, n) == 1 {
                let tq = tau_quadratic(n, q, sieve()).unwrap();
                assert!(close(tq, jacobi(q, n) as f64 * t1, 1e-10), "n={n} q={q}");
            }
        }
    }
}

#[test]
fn modulus_4l_matches_genuine_character() {
    for l in (1..=99u64).step_by(2) {
        let chi = PeriodicChar::from_fn(4 * l, |r| kronecker(4 * l as i64, r as i64));
        for q in 0..=40 {
            let brute = tau_bruteforce(&chi, q);
            assert!(close(tau_4l(l, q, sieve()).unwrap(), brute, 1e-9), "l={l} q={q}");
        }
    }
}

#[test]
fn psi_characters() {
    for j in Psi8::ALL {
        let psi = Psi8::new(j);
        for m in 1..=64i64 {
            let expect = if j == 0 { 1 } else { kronecker(4 * j as i64, m) };
            assert_eq!(psi.eval(m), expect);
            assert_eq!(psi.eval(m), psi.eval(m + psi.modulus() as i64));
        }
    }
}

proptest! {
    #[test]
    fn gauss_sum_period_in_q(n in (0u64..500).prop_map(|k| 2 * k + 1), q in -200i64..200) {
        let a = g_quadratic(n, q, sieve()).unwrap();
        let b = g_quadratic(n, q + n as i64, sieve()).unwrap();
        prop_assert!(close(a, b, 1e-9));
    }

    #[test]
    fn quad_char_invariants(n in (0u64..50_000).prop_map(|k| 2 * k + 1)) {
        let ch = QuadChar::new(n, sieve()).unwrap();
        prop_assert_eq!(ch.n0 * ch.n1 * ch.n1, n);
        prop_assert_eq!(ch.even, n % 4 == 1);
        prop_assert_eq!(ch.primitive, sieve().mobius(n).unwrap() != 0);
    }
}
