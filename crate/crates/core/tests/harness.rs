use std::f64::consts::PI;
use std::fs;

use qratio_core::arith::FactorSieve;
use qratio_core::empirical::{compare, LValueMemo, Quantity, SweepConfig};
use qratio_core::eulerprod::{residue_s1_a, residue_s1_ad, EulerProductSpec};
use qratio_core::harness::*;
use qratio_core::lfunc::{LFamily, LValueRecord, Method};
use qratio_core::predict::{Family, Shifts};
use qratio_core::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn record(modulus: u64, value: f64, err_est: f64) -> CacheRecord {
    CacheRecord {
        quantity: Quantity::Value,
        record: LValueRecord { family: LFamily::JacobiBottom, modulus, s: c(0.75, 0.0), value: c(value, 0.0), method: Method::Afe, err_est },
    }
}

#[test]
fn cache_survives_reopen() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.cache");
    {
        let cache = LCache::open(&path).unwrap();
        assert!(cache.is_empty());
        cache.put(record(5, 1.25, 1e-12));
        let mut ld = record(7, -0.3, 1e-13);
        ld.quantity = Quantity::LogDerivative;
        cache.put(ld);
        assert_eq!(cache.get(Quantity::Value, LFamily::JacobiBottom, 5, c(0.75, 0.0)).unwrap().record.value.re, 1.25);
        cache.flush().unwrap();
        // a second flush appends nothing
        let len = fs::metadata(&path).unwrap().len();
        cache.flush().unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), len);
    }
    let cache = LCache::open(&path).unwrap();
    assert_eq!(cache.len(), 2);
    assert!(cache.get(Quantity::LogDerivative, LFamily::JacobiBottom, 7, c(0.75, 0.0)).is_some());
    assert!(cache.get(Quantity::Value, LFamily::JacobiBottom, 7, c(0.75, 0.0)).is_none());
    assert!(cache.get(Quantity::Value, LFamily::KroneckerTop, 5, c(0.75, 0.0)).is_none());
}

#[test]
fn smaller_error_estimate_wins() {
    let cache = LCache::in_memory();
    cache.put(record(5, 1.0, 1e-10));
    cache.put(record(5, 2.0, 1e-12));
    cache.put(record(5, 3.0, 1e-11));
    assert_eq!(cache.len(), 1);
    assert_eq!(cache.lookup(Quantity::Value, LFamily::JacobiBottom, 5, c(0.75, 0.0)).unwrap().re, 2.0);

    // queued offers only become visible on commit
    cache.offer(Quantity::Value, record(11, 4.0, 1e-12).record);
    assert!(cache.lookup(Quantity::Value, LFamily::JacobiBottom, 11, c(0.75, 0.0)).is_none());
    LValueMemo::commit(&cache);
    assert_eq!(cache.lookup(Quantity::Value, LFamily::JacobiBottom, 11, c(0.75, 0.0)).unwrap().re, 4.0);
}

#[test]
fn merge_on_reopen_keeps_the_better_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l.cache");
    let a = LCache::open(&path).unwrap();
    a.put(record(13, 1.0, 1e-9));
    a.flush().unwrap();
    let b = LCache::open(&path).unwrap();
    b.put(record(13, 2.0, 1e-13));
    b.flush().unwrap();
    let reopened = LCache::open(&path).unwrap();
    assert_eq!(reopened.get(Quantity::Value, LFamily::JacobiBottom, 13, c(0.75, 0.0)).unwrap().record.value.re, 2.0);
}

#[test]
fn version_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("old.cache");
    fs::write(&path, "# qratio-lcache version=0\n").unwrap();
    assert!(matches!(LCache::open(&path), Err(Error::VersionMismatch { .. })));

    let line = record(3, 1.0, 1e-12).to_line().replace("version=1", "version=2");
    fs::write(&path, format!("# qratio-lcache version={CACHE_VERSION}\n{line}\n")).unwrap();
    assert!(matches!(LCache::open(&path), Err(Error::VersionMismatch { .. })));
}

#[test]
fn cache_record_lines_round_trip() {
    for (q, fam) in [(Quantity::Value, LFamily::KroneckerTop), (Quantity::LogDerivative, LFamily::JacobiBottom)] {
        let rec = CacheRecord {
            quantity: q,
            record: LValueRecord {
                family: fam,
                modulus: 987_654,
                s: c(0.55, -3.25),
                value: c(PI.sqrt(), f64::MIN_POSITIVE),
                method: Method::Hurwitz,
                err_est: 2.5e-14,
            },
        };
        let line = rec.to_line();
        assert_eq!(CacheRecord::from_line(&line).unwrap(), rec);
    }
    assert!(CacheRecord::from_line("family=nope modulus=3 version=1").is_err());
    assert!(CacheRecord::from_line("garbage").is_err());
}

#[test]
fn warm_cache_reproduces_cold_bits() {
    let sieve = FactorSieve::new(20_000);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.cache");
    let mut tpl = SweepConfig::new(100.0, Family::OddRatios, Shifts::new(c(0.2, 0.0), c(0.3, 0.0)));
    tpl.hurwitz_max = 100;
    let grid = [100.0, 300.0];
    let spec = EulerProductSpec::default();

    let cold_cache = LCache::open(&path).unwrap();
    let cold = compare(&grid, &tpl, spec, &sieve, Some(&cold_cache)).unwrap();
    cold_cache.flush().unwrap();
    assert!(!cold_cache.is_empty());

    let warm_cache = LCache::open(&path).unwrap();
    assert_eq!(warm_cache.len(), cold_cache.len());
    let warm = compare(&grid, &tpl, spec, &sieve, Some(&warm_cache)).unwrap();
    for (a, b) in cold.rows.iter().zip(&warm.rows) {
        assert_eq!(a.empirical.re.to_bits(), b.empirical.re.to_bits());
        assert_eq!(a.empirical.im.to_bits(), b.empirical.im.to_bits());
    }

    let log = SweepConfig::new(100.0, Family::OddLogDerivative, Shifts::single(c(0.25, 0.0)));
    let cold = compare(&[100.0], &log, spec, &sieve, Some(&warm_cache)).unwrap();
    let warm = compare(&[100.0], &log, spec, &sieve, Some(&warm_cache)).unwrap();
    assert_eq!(cold.rows[0].empirical, warm.rows[0].empirical);
}

#[test]
fn report_round_trip() {
    let sieve = FactorSieve::new(20_000);
    let tpl = SweepConfig::new(100.0, Family::Discriminants, Shifts::new(c(0.2, 0.1), c(0.3, -0.05)));
    let rep = compare(&[100.0, 200.0], &tpl, EulerProductSpec::default(), &sieve, None).unwrap();
    let meta = vec![("workers".to_string(), "1".to_string())];
    let text = format_report(&rep, &meta);
    assert_eq!(text.lines().next().unwrap().split(',').count(), REPORT_COLUMNS.len());
    let (back, extra) = parse_report(&text).unwrap();
    assert_eq!(back, rep);
    assert_eq!(extra["workers"], "1");
    assert!(back.fitted_slope.is_none());

    let mut with_slope = rep.clone();
    with_slope.fitted_slope = Some(-0.123_456_789_012_345_6);
    assert_eq!(parse_report(&format_report(&with_slope, &[])).unwrap().0, with_slope);

    assert!(parse_report("").is_err());
    assert!(parse_report("X,Y\n").is_err());
    let truncated: String = text.lines().filter(|l| !l.contains("theorem =")).map(|l| format!("{l}\n")).collect();
    assert!(parse_report(&truncated).is_err());
}

#[test]
fn config_files() {
    let m = parse_config("theorem = 1\n  alpha = 0.2   # left shift\nbeta=0.3\nx_grid = 1e3, 1e4\n").unwrap();
    assert_eq!(m.len(), 4);
    assert_eq!(m["x_grid"], "1e3, 1e4");
    assert!(parse_config("= 3").is_err());
    assert!(parse_config("").unwrap().is_empty());
}

#[test]
fn grid_points_are_deterministic_and_spread() {
    let a = grid_points(50, (0.0, 1.0), (0.0, 1.0));
    assert_eq!(a, grid_points(50, (0.0, 1.0), (0.0, 1.0)));
    for q in [(0.0, 0.5, 0.0, 0.5), (0.5, 1.0, 0.0, 0.5), (0.0, 0.5, 0.5, 1.0), (0.5, 1.0, 0.5, 1.0)] {
        let n = a.iter().filter(|p| p.re >= q.0 && p.re < q.1 && p.im >= q.2 && p.im < q.3).count();
        assert!((6..=20).contains(&n), "{q:?}: {n}");
    }
}

#[test]
fn residue_bruteforce_helpers_match_closed_forms() {
    let spec = EulerProductSpec::default();
    for (w, z) in [(c(1.5, 0.0), c(1.75, 0.0)), (c(1.6, 0.5), c(1.8, -0.3))] {
        let b = residue_s1_ad_bruteforce(w, z, 10_000);
        assert!((b - residue_s1_ad(w, z, spec).unwrap().value).norm() < 1e-6);
        let b = residue_s1_a_bruteforce(w, z, 10_000);
        assert!((b - residue_s1_a(w - 0.5, z - 0.5, spec).unwrap().value).norm() < 1e-6);
    }
}

#[test]
fn suites_pass_and_fail_under_fault() {
    for suite in Suite::ALL {
        assert_eq!(Suite::from_name(suite.name()), Some(suite));
        let ok = run_suite(suite, false);
        assert!(ok.passed(), "{}", ok.line());
        assert!(ok.cases > 0 && ok.line().starts_with("PASS"));
    }
    for suite in [Suite::Funceq, Suite::Theta, Suite::Euler, Suite::Special] {
        let bad = run_suite(suite, true);
        assert!(!bad.passed(), "{}", bad.line());
        assert!(bad.line().starts_with("FAIL"));
    }
    assert_eq!(Suite::from_name("nope"), None);
}
