//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use dp5::constants::{leading_constant_direct, leading_constant_zeta_to, CurveZeta};
use dp5::count::{count_fast, count_naive, zero_class_count, CountOptions};
use dp5::gf::FieldCtx;
use dp5::motivic::motivic_constant;
use dp5::picard::{lines_meet, symmetries, CurveClass, E1};
use dp5::sweep::{sweep, to_csv};
use dp5::verify;

// Pinned tolerances.
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const CONSTANT_RADIUS: f64 = 1e-12;
const CONSTANT_LIMIT: Duration = Duration::from_secs(10);
const MOTIVIC_TRUNC: usize = 40;
const BUNDLE_SAMPLES_PER_CASE: usize = 25;
const BUNDLE_SEED: u64 = 7;
const CHAMBER_SAMPLES: usize = 1000;

#[derive(Deserialize)]
struct Golden {
    sweep: GoldenSweep,
}

#[derive(Deserialize)]
struct GoldenSweep {
    q: u32,
    rows: Vec<GoldenRow>,
    final_rel_err_threshold: String,
}

#[derive(Deserialize)]
struct GoldenRow {
    class: String,
    d: i64,
    hom_count: String,
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn opts(workers: usize) -> CountOptions {
    CountOptions { workers, ..CountOptions::default() }
}

fn oracle_equivalence() -> Outcome {
    let f = FieldCtx::new(2, 1).unwrap();
    let start = Instant::now();
    let mut classes = 0;
    for mask in 0u32..1024 {
        let lines: [i64; 10] = std::array::from_fn(|l| ((mask >> l) & 1) as i64);
        let Ok(class) = CurveClass::from_pairings(lines) else { continue };
        classes += 1;
        let naive = count_naive(&f, &class, u128::MAX).unwrap();
        let fast = count_fast(&f, &class, &opts(1)).unwrap();
        if naive.m_count != fast.m_count || naive.hom_count != fast.hom_count {
            return outcome(false, format!("{class}: naive {} vs fast {}", naive.m_count, fast.m_count));
        }
    }
    let t = start.elapsed();
    outcome(t < ORACLE_LIMIT, format!("{classes} classes agree in {t:.2?}"))
}

fn zero_class() -> Outcome {
    let mut got = Vec::new();
    for q in [2u32, 3, 4, 5, 7] {
        let f = FieldCtx::from_size(q).unwrap();
        let h = count_fast(&f, &CurveClass::zero(), &opts(1)).unwrap().hom_count;
        if h != zero_class_count(q) {
            return outcome(false, format!("q={q}: {h}"));
        }
        got.push(format!("q={q}:{h}"));
    }
    outcome(true, got.join(" "))
}

fn divisibility() -> Outcome {
    let cases: [(u32, [i64; 5]); 12] = [
        (3, [0, 0, 0, 0, 0]),
        (3, [1, 0, 0, 0, 0]),
        (3, [1, -1, 0, 0, 0]),
        (3, [2, -1, -1, -1, -1]),
        (3, [3, -1, -1, -1, -1]),
        (4, [0, 0, 0, 0, 0]),
        (4, [1, 0, 0, 0, 0]),
        (4, [1, -1, 0, 0, 0]),
        (4, [2, -1, -1, -1, -1]),
        (5, [0, 0, 0, 0, 0]),
        (5, [1, 0, 0, 0, 0]),
        (5, [1, -1, 0, 0, 0]),
    ];
    let mut nonzero = 0;
    for (q, c) in cases {
        let f = FieldCtx::from_size(q).unwrap();
        let m = count_fast(&f, &CurveClass(c), &opts(1)).unwrap().m_count;
        if !(&m % BigUint::from(q - 1).pow(5)).is_zero() {
            return outcome(false, format!("q={q} class {}: {m}", CurveClass(c)));
        }
        nonzero += !m.is_zero() as usize;
    }
    outcome(true, format!("{} instances, {nonzero} with nonzero count", cases.len()))
}

fn symmetry() -> Outcome {
    let f = FieldCtx::new(2, 1).unwrap();
    let raw = CountOptions { normalize: false, ..opts(1) };
    let mut detail = Vec::new();
    for c in [[4, -2, -2, -1, 0], [5, -3, -2, -1, -1], [6, -3, -2, -2, -1]] {
        let class = CurveClass(c);
        let base = count_fast(&f, &class, &raw).unwrap().hom_count;
        let mut orbit = BTreeSet::new();
        for perm in symmetries() {
            let image = class.relabel(perm);
            orbit.insert(image.0);
            let h = count_fast(&f, &image, &raw).unwrap().hom_count;
            if h != base {
                return outcome(false, format!("{class} -> {image}: {base} vs {h}"));
            }
        }
        if orbit.len() == 1 {
            return outcome(false, format!("{class} is fully symmetric"));
        }
        detail.push(format!("{class}: {base} (orbit {})", orbit.len()));
    }
    outcome(true, detail.join("; "))
}

fn bundle_report() -> verify::SuiteReport {
    verify::bundles(BUNDLE_SAMPLES_PER_CASE, BUNDLE_SEED)
}

fn degree_formula(rep: &verify::SuiteReport) -> Outcome {
    let relevant: Vec<_> = rep.checks.iter().filter(|c| !c.name.contains("forces")).collect();
    let bad: Vec<_> = relevant.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let n = BUNDLE_SAMPLES_PER_CASE * verify::BUNDLE_CASES.len();
    outcome(bad.is_empty() && relevant.len() == 2 * verify::BUNDLE_CASES.len(), format!("{n} instances; failures: {bad:?}"))
}

fn small_slope(rep: &verify::SuiteReport) -> Outcome {
    let relevant: Vec<_> = rep.checks.iter().filter(|c| c.name.contains("forces")).collect();
    let ok = relevant.len() == verify::BUNDLE_CASES.len() && relevant.iter().all(|c| c.passed);
    let detail: Vec<_> = relevant.iter().map(|c| c.detail.clone()).collect();
    outcome(ok, detail.join("; "))
}

fn local_identities() -> Outcome {
    let rep = verify::identities();
    let bad: Vec<_> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    outcome(bad.is_empty(), format!("{} identities; failures: {bad:?}", rep.checks.len()))
}

fn dual_constant() -> Outcome {
    let start = Instant::now();
    let mut curves: Vec<CurveZeta> = [5, 7, 8, 9].into_iter().map(CurveZeta::p1).collect();
    curves.push(CurveZeta::from_weil(5, 1, vec![1, 2, 5]).unwrap());
    let mut detail = Vec::new();
    for c in &curves {
        let d = leading_constant_direct(c, CONSTANT_RADIUS).unwrap();
        let z = leading_constant_zeta_to(c, CONSTANT_RADIUS).unwrap();
        let gap = (d.mid() - z.mid()).abs();
        if gap > d.rad() + z.rad() || d.rad_f64() > CONSTANT_RADIUS || z.rad_f64() > CONSTANT_RADIUS {
            return outcome(false, format!("q={} g={}: {d} vs {z}", c.q, c.g));
        }
        detail.push(format!("q={} g={}: {:.13}", c.q, c.g, d.mid_f64()));
    }
    let t = start.elapsed();
    outcome(t < CONSTANT_LIMIT, format!("{} in {t:.2?}", detail.join(", ")))
}

fn motivic_specialization() -> Outcome {
    let five = BigRational::from_integer(5.into());
    let series = motivic_constant(MOTIVIC_TRUNC).specialize(&five);
    let c = leading_constant_direct(&CurveZeta::p1(5), CONSTANT_RADIUS).unwrap();
    let slack = c.rad() + BigRational::new(2.into(), BigInt::from(5).pow(38));
    let gap = (&series - c.mid()).abs();
    outcome(
        gap <= slack,
        format!(
            "series at u=1/5 (N={MOTIVIC_TRUNC}) = {:.6}, direct = {:.13}, gap {:.3e}",
            num_traits::ToPrimitive::to_f64(&series).unwrap(),
            c.mid_f64(),
            num_traits::ToPrimitive::to_f64(&gap).unwrap()
        ),
    )
}

fn convergence(golden: &GoldenSweep) -> Outcome {
    let f = FieldCtx::from_size(golden.q).unwrap();
    let classes: Vec<CurveClass> = golden.rows.iter().map(|r| r.class.parse().unwrap()).collect();
    let start = Instant::now();
    let rows = sweep(&f, &classes, &opts(1)).unwrap();
    let t = start.elapsed();
    for (row, g) in rows.iter().zip(&golden.rows) {
        if row.hom_count != g.hom_count || row.d != g.d {
            return outcome(false, format!("{}: {} vs golden {}", g.class, row.hom_count, g.hom_count));
        }
    }
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let threshold: f64 = golden.final_rel_err_threshold.parse().unwrap();
    let last_err = num_traits::ToPrimitive::to_f64(&last.rel_err_exact).unwrap();
    let ok = last.rel_err_exact < first.rel_err_exact && last_err < threshold;
    let ratios: Vec<_> = rows.iter().map(|r| r.ratio.clone()).collect();
    outcome(ok, format!("ratios {ratios:?}, c = {}, final rel err {last_err:.4} (< {threshold}), {t:.2?}", last.c_mid))
}

fn random_eff_class(rng: &mut ChaCha8Rng) -> CurveClass {
    loop {
        let a = rng.gen_range(0..40);
        let c = CurveClass([a, rng.gen_range(-a..=0), rng.gen_range(-a..=0), rng.gen_range(-a..=0), rng.gen_range(-a..=0)]);
        if c.in_eff_dual() {
            return c;
        }
    }
}

fn chamber_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..CHAMBER_SAMPLES {
        let class = random_eff_class(&mut rng);
        let data = class.chamber_normalize().unwrap().data;
        let d: Vec<i64> = (1..=4).map(|i| data.di(i)).collect();
        let min_all = *data.lines.iter().min().unwrap();
        let min_disjoint = (0..10).filter(|&l| l != E1 && !lines_meet(l, E1)).map(|l| data.lines[l]).min().unwrap();
        let ok = d.windows(2).all(|w| w[0] <= w[1])
            && d[0] == min_all
            && d[1] == min_disjoint
            && 5 * d[0] <= data.d
            && 5 * d[1] <= data.d
            && 5 * d.iter().sum::<i64>() <= 4 * data.d;
        if !ok {
            return outcome(false, format!("{class}: normalized {d:?}, d = {}", data.d));
        }
    }
    outcome(true, format!("{CHAMBER_SAMPLES} random classes"))
}

fn determinism() -> Outcome {
    let f = FieldCtx::new(2, 1).unwrap();
    let classes: Vec<CurveClass> =
        ["3,-1,-1,-1,-1", "6,-2,-2,-2,-2", "9,-3,-3,-3,-3", "4,-2,-2,-1,0", "6,-3,-2,-2,-1"].iter().map(|s| s.parse().unwrap()).collect();
    let payloads: Vec<String> = [1, 2, 8].iter().map(|&w| to_csv(&sweep(&f, &classes, &opts(w)).unwrap()).unwrap()).collect();
    let same = payloads.windows(2).all(|w| w[0] == w[1]);
    outcome(same, format!("{} bytes per payload, workers 1/2/8", payloads[0].len()))
}

fn main() {
    let golden: Golden = serde_json::from_str(include_str!("../../../fixtures/golden.json")).unwrap();
    let bundles = bundle_report();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("zero-class identity", Box::new(zero_class)),
        ("unit divisibility", Box::new(divisibility)),
        ("configuration symmetry", Box::new(symmetry)),
        ("bundle degree formula and Riemann-Roch", Box::new(|| degree_formula(&bundles))),
        ("h1 forces small slope", Box::new(|| small_slope(&bundles))),
        ("local-factor identities", Box::new(local_identities)),
        ("constant dual computation", Box::new(dual_constant)),
        ("motivic specialization", Box::new(motivic_specialization)),
        ("convergence evidence", Box::new(|| convergence(&golden.sweep))),
        ("chamber properties", Box::new(chamber_properties)),
        ("determinism across workers", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failures += !o.passed as usize;
        println!("{} {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
