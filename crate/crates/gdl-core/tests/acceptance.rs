//! Acceptance suite: twelve numbered criteria, one test each, every
//! tolerance pinned in code. Each test prints one PASS/FAIL line (visible
//! with `--nocapture`) before asserting.
//!
//! Run: cargo test -p gdl-core --test acceptance -- --nocapture
//!
//! Criteria 6 and 8 are implemented exactly as specified and are expected
//! to fail: the dyadic-growth cap 2^1.6 is already exceeded at X = 1e4
//! (exact ratio 3.0838...), and the smoothed-series residual at y = 1e4
//! carries a Gamma-pole correction -F(s-1)/y of size O(1)..O(100), far
//! above the 0.1 budget. See README "Known-failing checks".

use gdl_core::critical::{f_on_critical, fourth_moment, smoothed_series};
use gdl_core::gcdsum::{gcd_sum_f1, gcd_sum_fstar};
use gdl_core::local::FunctionSpec;
use gdl_core::mainterm::{main_term_eval, main_term_polynomial};
use gdl_core::pool::Pool;
use gdl_core::remainder::{
    envelope_scan, mean_square_integral, moment_sum, omega_witness_scan, remainder_scan,
};
use gdl_core::summatory::{summatory_fast, summatory_sieve};
use gdl_core::table::{coefficients_sieve, fhat_table};
use gdl_core::zeta::{chi_factor, zeta_complex};
use gdl_core::cache;
use gdl_core::dd::Dd;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

mod contour_oracle;

fn verdict(criterion: u32, pass: bool, detail: &str) -> bool {
    println!(
        "ACCEPTANCE {criterion:02}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn accept_01_oracle_equivalence_and_domination() {
    let started = Instant::now();
    let n_eq = 10_000u64;
    let fstar = coefficients_sieve(&FunctionSpec::fstar(), n_eq).unwrap();
    let f1 = coefficients_sieve(&FunctionSpec::f1(), n_eq).unwrap();
    let mut equal = true;
    for n in 1..=n_eq {
        equal &= fstar.get(n) == gcd_sum_fstar(n);
        equal &= f1.get(n) == gcd_sum_f1(n);
    }

    let n_dom = 100_000u64;
    let mut dominated = true;
    for m in [-2i32, -1, 0, 1] {
        let f = coefficients_sieve(&FunctionSpec::f1().with_m(m).unwrap(), n_dom).unwrap();
        let fhat = fhat_table(m, n_dom).unwrap();
        for n in 1..=n_dom {
            if f.get(n).abs() > fhat.get(n) {
                dominated = false;
                break;
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let in_time = elapsed <= 10.0;
    let pass = verdict(
        1,
        equal && dominated && in_time,
        &format!(
            "sieve == gcd-sum for n <= {n_eq}: {equal}; |f| <= fhat for n <= {n_dom}, \
             M in {{-2,-1,0,1}}: {dominated}; runtime {elapsed:.2}s (cap 10s)"
        ),
    );
    assert!(pass);
}

#[test]
fn accept_02_dual_summatory_agreement() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1ab1e);
    let mut xs: Vec<u64> = (0..200).map(|_| rng.gen_range(1..=1_000_000u64)).collect();
    xs.push(1_000_000);
    xs.push(10_000_000);
    xs.sort_unstable();
    xs.dedup();

    let mut agree = true;
    for spec in [FunctionSpec::f1(), FunctionSpec::fstar()] {
        let sieved = summatory_sieve(&spec, &xs).unwrap();
        for (&x, &s) in xs.iter().zip(sieved.iter()) {
            let fast = summatory_fast(&spec, x).unwrap();
            if fast != s {
                println!("  disagreement: {} at x={x}: fast {fast} sieve {s}", spec.label());
                agree = false;
            }
        }
    }
    let spots = summatory_fast(&FunctionSpec::f1(), 10).unwrap() == 36
        && summatory_fast(&FunctionSpec::f1(), 100).unwrap() == 905
        && summatory_fast(&FunctionSpec::fstar(), 10).unwrap() == 32;
    // third-route cross-check values (independent reimplementation)
    let frozen = summatory_fast(&FunctionSpec::f1(), 1_000_000).unwrap() == 57_172_749
        && summatory_fast(&FunctionSpec::f1(), 10_000_000).unwrap() == 758_985_761;
    let elapsed = started.elapsed().as_secs_f64();
    let in_time = elapsed <= 60.0;
    let pass = verdict(
        2,
        agree && spots && frozen && in_time,
        &format!(
            "fast == sieve at {} checkpoints for f1 and f*: {agree}; spot values \
             (36, 905, 32): {spots}; frozen 1e6/1e7 values: {frozen}; runtime \
             {elapsed:.2}s (cap 60s)",
            xs.len()
        ),
    );
    assert!(pass);
}

#[test]
fn accept_03_main_term_closed_form_and_contour() {
    // closed form for M = 0 from published Stieltjes digits
    let g0 = Dd::parse("0.5772156649015328606065120900824024310422").unwrap();
    let g1 = Dd::parse("-0.07281584548367672486058637587490131913774").unwrap();
    let poly = main_term_polynomial(&FunctionSpec::f1()).unwrap();
    let c2_ref = Dd::from_f64(0.25);
    let c1_ref = g0.mul_f64(2.0).add_f64(-0.5);
    let c0_ref =
        Dd::from_f64(0.5) - g0.mul_f64(2.0) + g0 * g0 * Dd::from_f64(2.5) - g1.mul_f64(3.0);
    let e2 = (poly.c2 - c2_ref).abs().to_f64();
    let e1 = (poly.c1 - c1_ref).abs().to_f64();
    let e0 = (poly.c0 - c0_ref).abs().to_f64();
    let closed = e2 <= 1e-20 && e1 <= 1e-20 && e0 <= 1e-20;

    // numerical-contour residue oracle at x = 100, M in {-1, 0}
    let mut contour_ok = true;
    let mut worst_rel = 0.0f64;
    for m in [-1i32, 0] {
        let spec = FunctionSpec::f1().with_m(m).unwrap();
        let poly_m = main_term_polynomial(&spec).unwrap();
        let main = main_term_eval(&poly_m, 100.0).unwrap();
        let oracle = contour_oracle::residue_contour(m, 100.0);
        let rel = ((main - oracle) / oracle).abs().to_f64();
        worst_rel = worst_rel.max(rel);
        contour_ok &= rel <= 1e-10;
    }
    let pass = verdict(
        3,
        closed && contour_ok,
        &format!(
            "closed-form errors (c2,c1,c0) = ({e2:.1e},{e1:.1e},{e0:.1e}) <= 1e-20: \
             {closed}; contour oracle worst rel {worst_rel:.2e} <= 1e-10: {contour_ok}"
        ),
    );
    assert!(pass);
}

#[test]
fn accept_04_omega_floor() {
    let pool = Pool::default();
    let report = omega_witness_scan(&FunctionSpec::f1(), 1_000_000, &pool).unwrap();
    let floor = report.sup_sqrt_ratio >= 0.5;
    let pass = verdict(
        4,
        floor,
        &format!(
            "max |Delta|/sqrt(x) = {:.4} at x = {} (>= 0.5: {floor}); normalized \
             Theorem-direction ratio sup = {:.6} at x = {} (reported, not asserted)",
            report.sup_sqrt_ratio, report.sqrt_argmax, report.sup_omega_ratio,
            report.omega_argmax
        ),
    );
    assert!(pass);
}

#[test]
fn accept_05_envelope_decay() {
    let started = Instant::now();
    let pool = Pool::default();
    let mut pass = true;
    let mut detail = String::new();
    for spec in [FunctionSpec::f1(), FunctionSpec::fstar()] {
        let low = envelope_scan(&spec, 1_000, 10_000, &pool).unwrap();
        let high = envelope_scan(&spec, 1_000_000, 10_000_000, &pool).unwrap();
        let decays = high.envelope_max <= low.envelope_max;
        pass &= decays;
        detail.push_str(&format!(
            "{}: [1e3,1e4] {:.5} vs [1e6,1e7] {:.5} (decays: {decays}); ",
            spec.label(),
            low.envelope_max,
            high.envelope_max
        ));
    }
    let elapsed = started.elapsed().as_secs_f64();
    let in_time = elapsed <= 300.0;
    pass &= in_time;
    detail.push_str(&format!("runtime {elapsed:.1}s (cap 300s)"));
    let pass = verdict(5, pass, &detail);
    assert!(pass);
}

#[test]
fn accept_06_moment_dyadic_trend() {
    // Implemented exactly as specified. The exact ratio at X = 1e4 is
    // 3.0838 > 2^1.6 = 3.0314, so this criterion fails honestly; the
    // bound only becomes true from X ~ 4e4 on.
    let spec = FunctionSpec::f1();
    let cap = 2f64.powf(1.6);
    let mut pass = true;
    let mut detail = format!("cap 2^1.6 = {cap:.4}; ratios:");
    let mut x = 10_000u64;
    while 2 * x <= 1_000_000 {
        let a = moment_sum(&spec, 0.0, x).unwrap().to_f64();
        let b = moment_sum(&spec, 0.0, 2 * x).unwrap().to_f64();
        let ratio = b / a;
        detail.push_str(&format!(" X={x}: {ratio:.4}"));
        if ratio > cap {
            pass = false;
            detail.push_str("(!)");
        }
        x *= 2;
    }
    let pass = verdict(6, pass, &detail);
    assert!(pass);
}

#[test]
fn accept_07_zeta_engine() {
    let z0 = zeta_complex(Complex64::new(0.0, 0.0)).unwrap();
    let ok0 = (z0 - Complex64::new(-0.5, 0.0)).norm() <= 1e-12;
    let z2 = zeta_complex(Complex64::new(2.0, 0.0)).unwrap();
    let pi = std::f64::consts::PI;
    let ok2 = (z2 - Complex64::new(pi * pi / 6.0, 0.0)).norm() <= 1e-12;
    let zrho = zeta_complex(Complex64::new(0.5, 14.134725141734695)).unwrap();
    let okz = zrho.norm() < 1e-8;

    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = Complex64::new(
            rng.gen_range(-0.5..0.5),
            rng.gen_range(10.0..1000.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        );
        let lhs = zeta_complex(s).unwrap();
        let rhs = chi_factor(s).unwrap() * zeta_complex(Complex64::new(1.0, 0.0) - s).unwrap();
        worst = worst.max((lhs - rhs).norm());
    }
    let okfe = worst <= 1e-8;
    let pass = verdict(
        7,
        ok0 && ok2 && okz && okfe,
        &format!(
            "zeta(0) = -1/2: {ok0}; zeta(2) = pi^2/6: {ok2}; |zeta(rho_1)| = \
             {:.2e} < 1e-8: {okz}; worst functional-equation residual {worst:.2e} \
             <= 1e-8 at 50 strip points: {okfe}",
            zrho.norm()
        ),
    );
    assert!(pass);
}

#[test]
fn accept_08_smoothed_series_identity() {
    // Implemented exactly as specified and expected to fail: the omitted
    // Gamma-pole term -F(s-1)/y alone is ~1.5 at t=50 and ~44 at t=100
    // for y = 1e4 (the functional equation makes |F(-1/2+it)| large), so
    // no 0.1 budget is attainable at these parameters.
    let spec = FunctionSpec::f1();
    let mut detail = String::new();
    let mut within_budget = true;
    for t in [50.0f64, 100.0] {
        let f = f_on_critical(0, t).unwrap();
        let s = smoothed_series(&spec, Complex64::new(0.5, t), 1.0e4, 200_000).unwrap();
        let residual = (s.value - f).norm();
        within_budget &= residual <= 0.1;
        detail.push_str(&format!("t={t}: residual {residual:.3} (budget 0.1); "));
    }
    // residual non-increasing in y over {1e2, 1e3, 1e4} within 20% slack
    let f50 = f_on_critical(0, 50.0).unwrap();
    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for y in [1.0e2, 1.0e3, 1.0e4] {
        let n = ((20.0 * y) as u64).max(200_000);
        let s = smoothed_series(&spec, Complex64::new(0.5, 50.0), y, n).unwrap();
        let residual = (s.value - f50).norm();
        detail.push_str(&format!("y={y:.0e}: residual {residual:.3}; "));
        if residual > prev * 1.2 {
            monotone = false;
        }
        prev = residual;
    }
    detail.push_str(&format!("non-increasing within 20%: {monotone}"));
    let pass = verdict(8, within_budget && monotone, &detail);
    assert!(pass);
}

#[test]
fn accept_09_magnitude_identity() {
    // |F(1/2+it)| = |zeta(1/2+it)|^2 |zeta(1+2it)|^{M+1} |chi(-2it)|
    let mut worst = 0.0f64;
    for &t in &[50.0, 100.0, 500.0] {
        for m in [-1i32, 0, 1] {
            let f = f_on_critical(m, t).unwrap().norm();
            let zh = zeta_complex(Complex64::new(0.5, t)).unwrap().norm();
            let z1 = zeta_complex(Complex64::new(1.0, 2.0 * t)).unwrap().norm();
            let chi = chi_factor(Complex64::new(0.0, -2.0 * t)).unwrap().norm();
            let rhs = zh * zh * z1.powi(m + 1) * chi;
            worst = worst.max((f / rhs - 1.0).abs());
        }
    }
    let pass = worst <= 1e-6;
    let pass = verdict(
        9,
        pass,
        &format!("worst |F|/(|zeta|^2 |zeta(1+2it)|^(M+1) |chi|) deviation {worst:.2e} <= 1e-6"),
    );
    assert!(pass);
}

#[test]
fn accept_10_fourth_moment() {
    let pool = Pool::default();
    let coarse = fourth_moment(10.0, 2000.0, 0.02, false, &pool).unwrap();
    let fine = fourth_moment(10.0, 2000.0, 0.01, false, &pool).unwrap();
    let rel = ((coarse - fine) / fine).abs();
    let stable = rel <= 1e-3;
    let t: f64 = 2000.0;
    let leading = t * t.ln().powi(4) / (2.0 * std::f64::consts::PI.powi(2));
    let ratio = fine / leading;
    let in_band = (0.5..=5.0).contains(&ratio);
    let pass = verdict(
        10,
        stable && in_band,
        &format!(
            "step-halving rel change {rel:.2e} <= 1e-3: {stable}; value {fine:.4e}, \
             ratio to T(log T)^4/(2 pi^2) = {ratio:.3} in [0.5, 5]: {in_band}"
        ),
    );
    assert!(pass);
}

#[test]
fn accept_11_mean_square_integral() {
    let spec = FunctionSpec::f1();
    let a = mean_square_integral(&spec, 1.0e3, 1.0e5, 1.0e6, 0.5).unwrap();
    let b = mean_square_integral(&spec, 1.0e3, 1.0e5, 1.0e6, 0.25).unwrap();
    let rel = ((a.value - b.value) / b.value).abs();
    let stable = rel <= 0.01;
    let pass = verdict(
        11,
        stable,
        &format!(
            "value {:.6e}, half-step value {:.6e}, rel change {rel:.2e} <= 1%: {stable}; \
             ratio to (log T)^5/(loglog T)^|2M+2| = {:.4e} (reported); tail bound {:.2e}",
            a.value, b.value, b.log_power_ratio, b.tail_bound
        ),
    );
    assert!(pass);
}

#[test]
fn accept_12_determinism_and_cache() {
    let spec = FunctionSpec::fstar();
    let one = Pool::new(1).unwrap();
    let eight = Pool::new(8).unwrap();
    let (ra, sa) = remainder_scan(&spec, 16, 50_000, 101, &one).unwrap();
    let (rb, sb) = remainder_scan(&spec, 16, 50_000, 101, &eight).unwrap();
    let mut identical = ra == rb && sa.len() == sb.len();
    for (x, y) in sa.iter().zip(sb.iter()) {
        identical &= x.s == y.s
            && x.main.to_f64().to_bits() == y.main.to_f64().to_bits()
            && x.delta.to_f64().to_bits() == y.delta.to_f64().to_bits()
            && x.omega_ratio.to_bits() == y.omega_ratio.to_bits()
            && x.sqrt_ratio.to_bits() == y.sqrt_ratio.to_bits()
            && x.envelope_ratio.to_bits() == y.envelope_ratio.to_bits();
    }
    let ea = envelope_scan(&spec, 1_000, 10_000, &one).unwrap();
    let eb = envelope_scan(&spec, 1_000, 10_000, &eight).unwrap();
    identical &= ea == eb;

    let dir = std::env::temp_dir().join(format!("gdl-accept-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let table = coefficients_sieve(&FunctionSpec::f1(), 10_000).unwrap();
    let back = cache::cache_roundtrip(&table, &dir).unwrap();
    let roundtrip = table == back;
    let _ = std::fs::remove_dir_all(&dir);

    let pass = verdict(
        12,
        identical && roundtrip,
        &format!(
            "scan outputs bit-identical for 1 vs 8 workers: {identical}; cache \
             write/read bit-exact: {roundtrip}"
        ),
    );
    assert!(pass);
}
