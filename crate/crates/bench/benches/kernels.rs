use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qratio_core::afe::AfeConfig;
use qratio_core::arith::{jacobi, FactorSieve};
use qratio_core::empirical::{empirical, SweepConfig};
use qratio_core::eulerprod::{p_d, EulerProductSpec};
use qratio_core::gauss::g_quadratic;
use qratio_core::lfunc::{l_afe, l_hurwitz};
use qratio_core::predict::{Family, Shifts};
use qratio_core::special::zeta;
use qratio_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn arithmetic(cr: &mut Criterion) {
    cr.bench_function("jacobi 10^4 symbols", |b| {
        b.iter(|| (1..10_000i64).map(|a| jacobi(black_box(a), 100_003) as i64).sum::<i64>())
    });
    cr.bench_function("sieve 10^6", |b| b.iter(|| FactorSieve::new(black_box(1_000_000))));
    let sieve = FactorSieve::shared();
    cr.bench_function("g_quadratic n=999 q=0..60", |b| {
        b.iter(|| (0..=60).map(|q| g_quadratic(999, black_box(q), sieve).unwrap().re).sum::<f64>())
    });
}

fn analytic(cr: &mut Criterion) {
    let sieve = FactorSieve::shared();
    let s = c(0.75, 0.0);
    cr.bench_function("zeta(0.6+20i)", |b| b.iter(|| zeta(black_box(c(0.6, 20.0))).unwrap()));
    cr.bench_function("l_hurwitz n=997", |b| b.iter(|| l_hurwitz(black_box(s), 997).unwrap()));
    cr.bench_function("l_afe n=100001", |b| b.iter(|| l_afe(black_box(s), 100_001, AfeConfig::default(), sieve).unwrap()));
    cr.bench_function("p_d cutoff 10^6", |b| {
        b.iter(|| p_d(black_box(c(0.8, 0.0)), c(0.3, 0.0), EulerProductSpec::default()).unwrap())
    });
}

fn sweeps(cr: &mut Criterion) {
    let sieve = FactorSieve::new(100_000);
    let mut g = cr.benchmark_group("sweep");
    g.sample_size(10);
    for (name, fam, sh) in [
        ("thm1 X=10^3", Family::Discriminants, Shifts::new(c(0.2, 0.0), c(0.3, 0.0))),
        ("thm2 X=10^3", Family::OddRatios, Shifts::new(c(0.2, 0.0), c(0.3, 0.0))),
        ("thm4 X=10^3", Family::SquarefreeLogDerivative, Shifts::single(c(0.2, 0.0))),
    ] {
        let cfg = SweepConfig::new(1e3, fam, sh);
        g.bench_function(name, |b| b.iter(|| empirical(black_box(&cfg), &sieve, None).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, arithmetic, analytic, sweeps);
criterion_main!(benches);
