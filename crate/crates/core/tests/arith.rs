use proptest::prelude::*;
use qratio_core::arith::*;
use qratio_core::Complex64;

fn sieve() -> &'static FactorSieve {
    FactorSieve::shared()
}

#[test]
fn kronecker_examples() {
    assert_eq!(kronecker(5, 5), 0);
    assert_eq!(kronecker(2, 15), 1);
    assert_eq!(kronecker(8, 3), -1);
    // conventions at n = 0 and n = −1
    assert_eq!(kronecker(1, 0), 1);
    assert_eq!(kronecker(-1, 0), 1);
    assert_eq!(kronecker(2, 0), 0);
    assert_eq!(kronecker(-3, -1), -1);
    assert_eq!(kronecker(3, -1), 1);
}

#[test]
fn fundamental_discriminant_examples() {
    assert!(is_fundamental_discriminant(5));
    assert!(is_fundamental_discriminant(8));
    assert!(!is_fundamental_discriminant(9));
    let ds = |x| sieve().enumerate_fundamental_discriminants(x).unwrap().into_iter().map(|f| f.d).collect::<Vec<_>>();
    assert_eq!(ds(10), vec![5, 8]);
    assert!(ds(1).is_empty());
    assert_eq!(ds(17), vec![5, 8, 12, 13, 17]);
}

#[test]
fn enumeration_needs_a_large_enough_sieve() {
    let small = FactorSieve::new(100);
    assert!(matches!(small.enumerate_fundamental_discriminants(101), Err(qratio_core::Error::SieveTooSmall { .. })));
}

#[test]
fn kernel_mobius_and_a_t_examples() {
    assert_eq!(sieve().squarefree_kernel(45).unwrap(), (5, 3));
    assert_eq!(sieve().squarefree_kernel(15).unwrap(), (15, 1));
    assert_eq!(sieve().squarefree_kernel(27).unwrap(), (3, 3));
    assert_eq!(sieve().mobius(1).unwrap(), 1);
    assert_eq!(sieve().mobius(12).unwrap(), 0);
    assert_eq!(sieve().mobius(30).unwrap(), -1);
    let t = Complex64::new(0.7, 0.2);
    assert_eq!(sieve().a_t(1, t).unwrap(), Complex64::new(1.0, 0.0));
    let nine = sieve().a_t(9, t).unwrap();
    assert!((nine - (1.0 - Complex64::new(3.0, 0.0).powc(-t))).norm() < 1e-15);
    assert_eq!(sieve().a_t(15, Complex64::new(0.0, 0.0)).unwrap().norm(), 0.0);
}

#[test]
fn jacobi_multiplicativity_in_the_bottom_entry() {
    for m in (1..=500i64).step_by(2) {
        for n in (1..=500i64).step_by(2) {
            for a in [-500i64, -77, -4, -1, 0, 2, 3, 8, 91, 500] {
                assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n), "a={a} m={m} n={n}");
            }
        }
    }
}

#[test]
fn residue_table_oracle() {
    for p in sieve().primes().take_while(|&p| p <= 1000).filter(|&p| p > 2) {
        let mut sq = vec![false; p as usize];
        for r in 1..p {
            sq[((r * r) % p) as usize] = true;
        }
        for a in 1..p {
            assert_eq!(kronecker(a as i64, p as i64) == 1, sq[a as usize], "a={a} p={p}");
        }
    }
}

#[test]
fn factor_four_is_invisible_to_odd_moduli() {
    for n in (1..=999i64).step_by(2) {
        for k in -50..=50 {
            assert_eq!(kronecker(k, n), kronecker(4 * k, n));
        }
    }
}

#[test]
fn enumeration_agrees_with_the_predicate() {
    let ds = sieve().enumerate_fundamental_discriminants(1_000_000).unwrap();
    let mut it = ds.iter().peekable();
    for d in 2..=1_000_000u64 {
        let listed = it.peek().map(|f| f.d) == Some(d);
        if listed {
            it.next();
        }
        assert_eq!(listed, is_fundamental_discriminant(d), "d={d}");
    }
}

#[test]
fn kernel_round_trip() {
    for n in (1..=1_000_000u64).step_by(2) {
        let (n0, n1) = sieve().squarefree_kernel(n).unwrap();
        assert_eq!(n0 * n1 * n1, n);
        assert_ne!(sieve().mobius(n0).unwrap(), 0);
    }
}

proptest! {
    #[test]
    fn spf_divides_and_is_prime(n in 2u64..2_000_000) {
        let p = sieve().spf(n);
        prop_assert_eq!(n % p, 0);
        prop_assert!(sieve().is_prime(p));
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..2_000_000) {
        let f = sieve().factorize(n).unwrap();
        let prod: u64 = f.pairs.iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(prod, n);
        prop_assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn kronecker_multiplicative_in_the_top_entry(a in -1000i64..1000, b in -1000i64..1000, n in 1i64..5000) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
    }

    #[test]
    fn exactly_one_discriminant_shape(d in 2u64..2_000_000) {
        let kind = sieve().classify_discriminant(d).unwrap();
        prop_assert_eq!(kind.is_some(), is_fundamental_discriminant(d));
        if let Some(k) = kind {
            match k {
                DiscKind::OneMod4 => prop_assert!(d % 4 == 1),
                DiscKind::FourM => prop_assert!(d % 4 == 0 && (d / 4) % 4 == 3),
                DiscKind::EightM => prop_assert!(d % 8 == 0 && (d / 8) % 2 == 1),
            }
        }
    }
}
