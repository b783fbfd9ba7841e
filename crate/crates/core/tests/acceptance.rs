//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.
//!
//! `cargo test --release --test acceptance -- 3 7` runs a subset.

use std::f64::consts::PI;
use std::time::Instant;

use boolezeta_core::characters::enumerate_characters;
use boolezeta_core::closed_form::{classify, closed_form_mean, closed_form_mean_with_case, MeanValueCase};
use boolezeta_core::dynamics::{measure_interval, preimage_intervals, OrbitConfig, StartDistribution, TransformParams};
use boolezeta_core::experiments::{
    compare, distcheck, ergodic_mean, laurent_table, lindelof, moment_reference, quadrature_mean, ErgodicSettings,
    LAURENT_TABLE_RADIUS,
};
use boolezeta_core::special::{
    dirichlet_l, hurwitz_zeta, riemann_zeta, stieltjes_gamma_limit, EvalAccuracy, Family, TargetFunction,
};
use boolezeta_core::{Error, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Reference values from mpmath at 30 digits.
const ZETA_3: f64 = 1.202_056_903_159_594_285_4;
const ZETA_4: f64 = 1.082_323_233_711_138_191_5;
const ZETA_3_2: f64 = 2.612_375_348_685_488_343_3;
const GAMMA_0: f64 = 0.577_215_664_901_532_860_6;

const SEEDS: [u64; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

type Outcome = std::result::Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(alpha: f64, beta: f64) -> TransformParams {
    TransformParams::new(alpha, beta).expect("valid parameters")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail(e: Error) -> String {
    format!("error: {e}")
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn grid_targets() -> Result<Vec<TargetFunction>> {
    let mut out = Vec::new();
    for k in 0..=3 {
        out.push(TargetFunction::new(Family::RiemannZeta, k));
    }
    for q in [3, 4, 5] {
        for chi in enumerate_characters(q)? {
            for k in 0..=2 {
                out.push(TargetFunction::new(Family::DirichletL { chi: chi.clone() }, k));
            }
        }
    }
    for a in [1.0 / 3.0, 0.5, 1.0] {
        for k in 0..=2 {
            out.push(TargetFunction::new(Family::hurwitz(a)?, k));
        }
    }
    for d in [-4, 5] {
        for k in 0..=1 {
            out.push(TargetFunction::new(Family::dedekind(d)?, k));
        }
    }
    Ok(out)
}

/// Points that exercise each case reachable for this target and parameter pair.
fn grid_points(target: &TargetFunction, p: TransformParams) -> Vec<Complex64> {
    let mut pts = vec![c(2.0, 0.5), c(0.35, 0.7)];
    match target.pole() {
        None => pts.push(c(-0.25, 1.5)),
        Some(pole) => {
            if pole.order == 1 {
                pts.push(c(pole.s0.re, 0.6));
            }
            let special = pole.s0 - p.alpha - Complex64::i() * p.beta;
            if special.re > target.c_abscissa() {
                pts.push(special);
            }
        }
    }
    pts
}

fn criterion_1() -> Outcome {
    let targets = grid_targets().map_err(fail)?;
    let all_params = [params(1.0, 0.0), params(2.0, 0.0), params(1.0, 1.0), params(0.5, -2.0)];
    let mut seen = std::collections::BTreeSet::new();
    let mut worst: f64 = 0.0;
    let mut where_worst = String::new();
    let mut points = 0;
    let mut failures = Vec::new();
    for t in &targets {
        for &p in &all_params {
            for s in grid_points(t, p) {
                points += 1;
                let row = classify(t, s, p).and_then(|case| {
                    let closed = closed_form_mean(t, s, p)?;
                    let quad = quadrature_mean(t, s, p, 1e-10)?;
                    Ok((case, (closed - quad.value).norm()))
                });
                match row {
                    Ok((case, d)) => {
                        seen.insert(case.name());
                        if d > worst {
                            worst = d;
                            where_worst = format!("{t} at s={s}, alpha={}, beta={}", p.alpha, p.beta);
                        }
                        if d > 1e-8 {
                            failures.push(format!("{t} s={s} ({},{}) diff {d:.2e}", p.alpha, p.beta));
                        }
                    }
                    Err(e) => failures.push(format!("{t} s={s} ({},{}): {e}", p.alpha, p.beta)),
                }
            }
        }
    }
    let detail = format!(
        "{points} points, {} targets, cases {:?}, max |quadrature - closed| = {worst:.2e} ({where_worst})",
        targets.len(),
        seen
    );
    if !failures.is_empty() {
        return Err(format!("{detail}; failures: {}", failures.join(" | ")));
    }
    check(seen.len() == 5 && worst <= 1e-8, detail)
}

fn ergodic_settings(n: usize, p: TransformParams, seeds: &[u64]) -> ErgodicSettings {
    ErgodicSettings { params: p, n_steps: n, seeds: seeds.to_vec(), start: StartDistribution::default(), checkpoints: vec![] }
}

fn criterion_2() -> Outcome {
    let zeta = TargetFunction::new(Family::RiemannZeta, 0);
    let p = params(1.0, 0.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for (s, oracle) in [(2.0, ZETA_3), (3.0, ZETA_4)] {
        let s = c(s, 0.0);
        let closed = closed_form_mean(&zeta, s, p).map_err(fail)?;
        let mut rel = Vec::new();
        for &seed in &SEEDS {
            let cfg = OrbitConfig::new(p, 1_000_000, seed, StartDistribution::default()).map_err(fail)?;
            let b = ergodic_mean(&zeta, s, &cfg, &[]).map_err(fail)?;
            rel.push((b.estimate - closed).norm() / closed.norm());
        }
        let m = median(rel);
        ok &= m <= 0.01 && (closed.re - oracle).abs() < 1e-12;
        parts.push(format!("s={}: closed {:.12}, median relative deviation {m:.2e}", s.re, closed.re));
    }
    check(ok, parts.join("; "))
}

fn criterion_3() -> Outcome {
    let zeta = TargetFunction::new(Family::RiemannZeta, 0);
    let p = params(1.0, 0.0);
    let s = c(0.5, 0.0);
    let expected = ZETA_3_2 - 8.0 / 3.0;
    let mut dev = Vec::new();
    for &seed in &SEEDS {
        let cfg = OrbitConfig::new(p, 10_000_000, seed, StartDistribution::default()).map_err(fail)?;
        let b = ergodic_mean(&zeta, s, &cfg, &[]).map_err(fail)?;
        dev.push((b.estimate - expected).norm());
    }
    let m = median(dev);
    check(m <= 0.05, format!("median |average - (zeta(3/2) - 8/3)| = {m:.3e}"))
}

fn criterion_4() -> Outcome {
    let zeta = TargetFunction::new(Family::RiemannZeta, 0);
    let s_values = [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
    let expected = [GAMMA_0 - 0.5, ZETA_3_2 - 8.0 / 3.0, PI * PI / 6.0 - 1.0, ZETA_3];
    let rows = compare(&zeta, &s_values, &ergodic_settings(100_000, params(1.0, 0.0), &[1]), 1e-10);
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, want) in rows.iter().zip(expected) {
        if let Some(e) = &row.error {
            return Err(format!("s={}: {e}", row.s));
        }
        let closed = row.closed.expect("closed value");
        let dq = row.abs_quadrature_closed.expect("quadrature column");
        let dv = (closed.re - want).abs();
        ok &= dq <= 1e-8 && dv <= 1e-8;
        parts.push(format!("s={}: closed {:.10} |q-c| {dq:.1e} |c-ref| {dv:.1e}", row.s.re, closed.re));
    }
    check(ok, parts.join("; "))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = params(rng.random_range(0.05..20.0), rng.random_range(-20.0..20.0));
        let a: f64 = rng.random_range(-60.0..60.0);
        let b = a + rng.random_range(1e-3..40.0);
        let direct = measure_interval(p, a, b).map_err(fail)?;
        let pre: f64 = preimage_intervals(p, a, b)
            .map_err(fail)?
            .iter()
            .map(|i| measure_interval(p, i.lo, i.hi))
            .sum::<Result<f64>>()
            .map_err(fail)?;
        worst = worst.max((pre - direct).abs());
    }
    check(worst <= 1e-12, format!("100 random cases, max |mu(T^-1 A) - mu(A)| = {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let p = params(1.0, 0.0);
    let mut passes = 0;
    let mut stats = Vec::new();
    for &seed in &SEEDS {
        let cfg = OrbitConfig::new(p, 1_000_000, seed, StartDistribution::default()).map_err(fail)?;
        let d = distcheck(&cfg).map_err(fail)?;
        passes += usize::from(d.ks_statistic < 0.01);
        stats.push(format!("{:.4}", d.ks_statistic));
    }
    check(passes >= 9, format!("{passes}/10 seeds below 0.01, KS = [{}]", stats.join(", ")))
}

fn criterion_7() -> Outcome {
    let zeta = TargetFunction::new(Family::RiemannZeta, 0);
    let l = laurent_table(&zeta, 2, LAURENT_TABLE_RADIUS).map_err(fail)?;
    let gamma0 = stieltjes_gamma_limit(0).map_err(fail)?;
    let d_res = (l.coefficient(-1).unwrap() - 1.0).norm();
    let d_a0 = (l.coefficient(0).unwrap() - gamma0).norm();
    let dz = TargetFunction::new(Family::RiemannZeta, 1);
    let l1 = laurent_table(&dz, 0, LAURENT_TABLE_RADIUS).map_err(fail)?;
    let d_m2 = (l1.coefficient(-2).unwrap() + 1.0).norm();
    check(
        d_res <= 1e-10 && d_a0 <= 1e-8 && d_m2 <= 1e-8,
        format!("|a_-1 - 1| = {d_res:.1e}, |a_0 - gamma_0| = {d_a0:.1e}, |a_-2(zeta') + 1| = {d_m2:.1e}"),
    )
}

/// One-sided limit of the closed form as `Re s → 1` from the side `sign`,
/// by Richardson extrapolation of two off-line evaluations.
fn one_sided(t: &TargetFunction, tau: f64, p: TransformParams, sign: f64) -> Result<Complex64> {
    let h = 1e-5;
    let near = closed_form_mean(t, c(1.0 + sign * h, tau), p)?;
    let far = closed_form_mean(t, c(1.0 + sign * 2.0 * h, tau), p)?;
    Ok(2.0 * near - far)
}

fn criterion_8() -> Outcome {
    let targets = [
        TargetFunction::new(Family::RiemannZeta, 0),
        TargetFunction::new(Family::hurwitz(1.0 / 3.0).map_err(fail)?, 0),
        TargetFunction::new(Family::dirichlet(3, 0).map_err(fail)?, 0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for t in &targets {
        for _ in 0..20 {
            let p = params(rng.random_range(0.3..3.0), rng.random_range(-3.0..3.0));
            let tau = rng.random_range(-5.0..5.0);
            let (on, case) = closed_form_mean_with_case(t, c(1.0, tau), p).map_err(fail)?;
            if case != MeanValueCase::OnPoleLine {
                return Err(format!("{t}: expected the line case, got {}", case.name()));
            }
            let mid = 0.5 * (one_sided(t, tau, p, -1.0).map_err(fail)? + one_sided(t, tau, p, 1.0).map_err(fail)?);
            worst = worst.max((on - mid).norm());
        }
    }
    check(worst <= 1e-8, format!("3 targets x 20 (params, t), max |line - midpoint| = {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let acc = EvalAccuracy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut id_worst: f64 = 0.0;
    for _ in 0..40 {
        let s = c(rng.random_range(-3.0..6.0), rng.random_range(-30.0..30.0));
        if (s - 1.0).norm() < 0.1 {
            continue;
        }
        let z = riemann_zeta(s, &acc).map_err(fail)?;
        let z1 = hurwitz_zeta(s, 1.0, &acc).map_err(fail)?;
        let zh = hurwitz_zeta(s, 0.5, &acc).map_err(fail)?;
        let two_s = Complex64::new(2.0, 0.0).powc(s);
        id_worst = id_worst.max((z1 - z).norm()).max((zh - (two_s - 1.0) * z).norm());
    }
    let chi = Family::dedekind(-4).map_err(fail)?;
    let Family::DedekindQuadratic { chi, .. } = chi else { unreachable!() };
    let l1 = dirichlet_l(c(1.0, 0.0), &chi, &acc).map_err(fail)?;
    let d_l = (l1 - PI / 4.0).norm();

    let h = 1e-4;
    let mut fd_worst: f64 = 0.0;
    let families = [Family::RiemannZeta, Family::hurwitz(1.0 / 3.0).map_err(fail)?, Family::dirichlet(5, 1).map_err(fail)?];
    for fam in &families {
        for k in 1..=3 {
            let fk = TargetFunction::new(fam.clone(), k);
            let fk1 = TargetFunction::new(fam.clone(), k - 1);
            for s in [c(2.5, 1.0), c(0.3, 4.0), c(-1.5, -2.0)] {
                let d = fk.value(s, &acc).map_err(fail)?;
                let fd = (fk1.value(s + h, &acc).map_err(fail)? - fk1.value(s - h, &acc).map_err(fail)?) / (2.0 * h);
                fd_worst = fd_worst.max((d - fd).norm() / d.norm());
            }
        }
    }
    check(
        id_worst <= 1e-10 && d_l <= 1e-8 && fd_worst <= 1e-6,
        format!("Hurwitz identities {id_worst:.1e}, |L(1,chi_-4) - pi/4| = {d_l:.1e}, derivative vs difference {fd_worst:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    let p = params(1.0, 0.0);
    let konst = TargetFunction::new(Family::ConstantTest { c: c(1.2, -0.5) }, 0);
    let r = lindelof(&konst, &[1, 2, 3], &ergodic_settings(10_000, p, &[1, 2]), 1e-8).map_err(fail)?;
    let mut const_worst: f64 = 0.0;
    for b in &r.moments {
        let exact = 1.3f64.powi(2 * b.l as i32);
        for s in &b.series {
            for v in &s.averages {
                const_worst = const_worst.max((v - exact).abs() / exact);
            }
        }
    }
    let zeta = TargetFunction::new(Family::RiemannZeta, 0);
    let reference = moment_reference(&zeta, p, 1, 1e-8).map_err(fail)?;
    let r = lindelof(&zeta, &[1], &ergodic_settings(10_000_000, p, &[1]), 1e-8).map_err(fail)?;
    let block = &r.moments[0];
    let avg = *block.series[0].averages.last().expect("final checkpoint");
    let rel = (avg - reference.value.re).abs() / reference.value.re;
    check(
        const_worst <= 1e-12 && rel <= 0.10,
        format!(
            "constant moments rel err {const_worst:.1e}; zeta N=1e7 average {avg:.5}, reference {:.5}, rel diff {rel:.2e}, stabilization {:.2e}",
            reference.value.re, block.stabilization
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "three-way agreement grid", criterion_1),
        (2, "ergodic average, bounded regime", criterion_2),
        (3, "ergodic average, critical strip", criterion_3),
        (4, "zeta rows at alpha=1, beta=0", criterion_4),
        (5, "measure preservation", criterion_5),
        (6, "orbit distribution", criterion_6),
        (7, "Laurent data and Stieltjes constants", criterion_7),
        (8, "line-case midpoint", criterion_8),
        (9, "special-function identities", criterion_9),
        (10, "moment estimator", criterion_10),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
