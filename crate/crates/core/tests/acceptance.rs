//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false`, so the lines are printed even when output capture is on.
//! The process exits non-zero when any criterion fails.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::Instant;

use qratio_core::arith::FactorSieve;
use qratio_core::empirical::{compare, SweepConfig};
use qratio_core::eulerprod::EulerProductSpec;
use qratio_core::harness::{format_report, run_suite, ComparisonReport, Suite};
use qratio_core::predict::{m_exponent, n_exponent, predict_thm2, predict_thm3, Family, Shifts};
use qratio_core::special::{mellin_weight, WeightSpec};
use qratio_core::{Complex64, Result};

const GRID: [f64; 3] = [1e3, 1e4, 1e5];

fn r(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn report(id: u32, name: &str, t0: Instant, out: Result<Outcome>) -> bool {
    let secs = t0.elapsed().as_secs_f64();
    let (passed, detail) = match out {
        Ok(o) => (o.passed, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("{} criterion {id:>2} {name}: {detail} ({secs:.1}s)", if passed { "PASS" } else { "FAIL" });
    passed
}

fn suite(s: Suite, limit_secs: Option<f64>) -> Result<Outcome> {
    let res = run_suite(s, false);
    let in_time = limit_secs.is_none_or(|l| res.seconds < l);
    let limit = limit_secs.map_or(String::new(), |l| format!(", limit {l:.0}s"));
    Ok(Outcome { passed: res.passed() && in_time, detail: format!("{} cases, {}{limit}", res.cases, res.detail) })
}

fn rows_summary(rep: &ComparisonReport) -> String {
    let rels: Vec<String> = rep.rows.iter().map(|r| format!("{:.0e}:{:.2e}", r.x, r.rel_err)).collect();
    let slope = rep.fitted_slope.map_or("none".to_string(), |s| format!("{s:.3}"));
    format!("rel_err {} slope {slope}", rels.join(" "))
}

fn sweep(sieve: &FactorSieve, family: Family, sh: Shifts, workers: usize) -> Result<ComparisonReport> {
    let mut tpl = SweepConfig::new(GRID[0], family, sh);
    tpl.workers = workers;
    compare(&GRID, &tpl, EulerProductSpec::default(), sieve, None)
}

fn main() -> ExitCode {
    // the largest sweep sums moduli up to 30 · 10⁵
    let sieve = FactorSieve::new(3_000_000);
    let spec = EulerProductSpec::default();
    let mut all = true;

    for (id, s, name, limit) in [
        (1, Suite::Gauss, "gauss-sum oracle", Some(30.0)),
        (2, Suite::Funceq, "functional equation via K(1-s)", Some(60.0)),
        (3, Suite::DiscSeries, "discriminant series closed form", Some(120.0)),
        (4, Suite::Euler, "Euler-product identities", None),
        (5, Suite::Special, "gamma identities", None),
        (6, Suite::Theta, "theta transformation", None),
    ] {
        let t0 = Instant::now();
        all &= report(id, name, t0, suite(s, limit));
    }

    let t0 = Instant::now();
    let sh7 = Shifts::single(r(0.25));
    let c7 = sweep(&sieve, Family::OddRatios, sh7, 8);
    let c7_text = c7.as_ref().ok().map(|rep| format_report(rep, &[]));
    all &= report(
        7,
        "odd-modulus ratio at alpha = beta = 0.25",
        t0,
        c7.map(|rep| {
            let bound = n_exponent(sh7.alpha, sh7.beta) + 0.15;
            let slope_ok = rep.fitted_slope.is_some_and(|s| s <= bound);
            let passed = rep.rows[1].rel_err < 0.10 && rep.rows[2].rel_err < 0.05 && slope_ok && t0.elapsed().as_secs_f64() < 900.0;
            Outcome { passed, detail: format!("{} (bound {bound:.2})", rows_summary(&rep)) }
        }),
    );

    let t0 = Instant::now();
    let sh8 = Shifts::new(r(0.2), r(0.3));
    all &= report(
        8,
        "discriminant ratio at alpha = 0.2, beta = 0.3",
        t0,
        sweep(&sieve, Family::Discriminants, sh8, 1).map(|rep| {
            let bound = m_exponent(sh8.alpha, sh8.beta) + 0.15;
            let decreasing = rep.rows.windows(2).all(|w| w[1].rel_err < w[0].rel_err);
            let slope_ok = rep.fitted_slope.is_some_and(|s| s <= bound);
            Outcome { passed: decreasing && slope_ok, detail: format!("{} (bound {bound:.2})", rows_summary(&rep)) }
        }),
    );

    let t0 = Instant::now();
    let rr = 0.2;
    all &= report(
        9,
        "squarefree log-derivative at r = 0.2",
        t0,
        sweep(&sieve, Family::SquarefreeLogDerivative, Shifts::single(r(rr)), 1).map(|rep| {
            let bound = 1.0 - 2.0 * rr + 0.15;
            let slope_ok = rep.fitted_slope.is_some_and(|s| s <= bound);
            let last = rep.rows.last().expect("non-empty grid");
            // the second term carries a leading minus; here ζ(1−2r) < 0 makes it positive
            let sign_ok = last.term2.re > 0.0 && (last.empirical - last.term1).re.signum() == last.term2.re.signum();
            Outcome {
                passed: slope_ok && sign_ok,
                detail: format!(
                    "{} (bound {bound:.2}); emp-T1 {:.1} vs T2 {:.1}",
                    rows_summary(&rep),
                    (last.empirical - last.term1).re,
                    last.term2.re
                ),
            }
        }),
    );

    let t0 = Instant::now();
    let c10 = (|| -> Result<Outcome> {
        let w = WeightSpec::Exponential;
        let h = 1e-4;
        let mf1 = mellin_weight(w, r(1.0))?;
        let mut worst = 0.0f64;
        for rr in [0.15, 0.25] {
            for x in GRID {
                let at = |a: f64| predict_thm2(x, Shifts::new(r(a), r(rr)), w, spec).map(|p| p.total());
                let d = (at(rr + h)? - at(rr - h)?) / (2.0 * h);
                // the ratio family drops the Euler factor at 2; put its derivative back
                let two = x * mf1 / 2.0 * LN_2 / (2f64.powf(1.0 + 2.0 * rr) - 1.0);
                let p3 = predict_thm3(x, r(rr), w, spec)?.total();
                worst = worst.max(((d - two) - p3).norm() / p3.norm());
            }
        }
        Ok(Outcome { passed: worst <= 1e-6, detail: format!("worst relative gap {worst:.2e} (tol 1e-6)") })
    })();
    all &= report(10, "log-derivative is the shift derivative of the ratio", t0, c10);

    let t0 = Instant::now();
    let c11 = (|| -> Result<Outcome> {
        let Some(base) = &c7_text else {
            return Ok(Outcome { passed: false, detail: "criterion 7 report unavailable".into() });
        };
        let mut same = Vec::new();
        for workers in [1, 4] {
            let text = format_report(&sweep(&sieve, Family::OddRatios, sh7, workers)?, &[]);
            same.push(format!("{workers} workers {}", if &text == base { "identical" } else { "differs" }));
        }
        let passed = same.iter().all(|s| s.ends_with("identical"));
        Ok(Outcome { passed, detail: format!("vs 8 workers: {}", same.join(", ")) })
    })();
    all &= report(11, "criterion-7 report across worker counts", t0, c11);

    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
