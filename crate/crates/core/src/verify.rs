//! Invariant suites behind `dp5 verify`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bundles::hn_statistics;
use crate::count::{count_fast, count_naive, zero_class_count, CountOptions};
use crate::gf::FieldCtx;
use crate::motivic::{eval_l, local_identity_checks, mobius_motivic_p1, witt_exponents, IdentityCheck, SeriesL, LOCAL_FACTOR};
use crate::p1::points_by_degree;
use crate::picard::CurveClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Bundles,
    Counts,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Identities, Suite::Bundles, Suite::Counts];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Bundles => "bundles",
            Suite::Counts => "counts",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> IdentityCheck {
    IdentityCheck { name: name.into(), passed, detail: detail.into() }
}

/// Coefficients of `prod_n (1 - T^n)^{sign * a_n}` up to `T^d` for `P^1`.
fn divisor_series(q: u64, d: usize, sign: i64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); d + 1];
    out[0] = BigInt::one();
    for n in 1..=d {
        let a = points_by_degree(q, n as u32);
        let mut factor = SeriesL::from_i64(&[1], d + 1);
        let mut c = vec![0i64; n + 1];
        c[0] = 1;
        c[n] = -1;
        factor = factor
            .mul(&SeriesL::from_i64(&c, d + 1).pow_big(&(BigInt::from(a) * sign)).expect("unit"))
            .expect("same order");
        out = SeriesL::new(out, d + 1).mul(&factor).expect("same order").coeffs().to_vec();
    }
    out
}

pub fn identities() -> SuiteReport {
    let mut checks = local_identity_checks();
    let e = witt_exponents(&LOCAL_FACTOR, 24).expect("integral");
    let n = 25;
    let mut prod = SeriesL::one(n);
    for (k, ek) in e.iter().enumerate().skip(1) {
        let mut c = vec![0i64; k + 1];
        c[0] = 1;
        c[k] = -1;
        prod = prod.mul(&SeriesL::from_i64(&c, n).pow_big(ek).expect("unit")).expect("same order");
    }
    checks.push(check("Witt reconstruction to order 24", prod == SeriesL::from_i64(&LOCAL_FACTOR, n), ""));
    let mu = mobius_motivic_p1();
    for q in [2u64, 3, 4] {
        let eff = divisor_series(q, 4, -1);
        let sf = divisor_series(q, 4, 1);
        for d in 0..=4usize {
            let expect: u64 = (0..=d as u32).map(|i| q.pow(i)).sum();
            checks.push(check(
                format!("effective divisors of degree {d} on P^1 over F_{q}"),
                eff[d] == BigInt::from(expect),
                format!("{} vs {expect}", eff[d]),
            ));
            let m = mu.get(d).map(|p| eval_l(p, q as i64)).unwrap_or(0);
            checks.push(check(
                format!("Mobius sum over degree {d} divisors, F_{q}"),
                sf[d] == BigInt::from(m),
                format!("{} vs {m}", sf[d]),
            ));
        }
    }
    SuiteReport { suite: Suite::Identities, checks }
}

/// Classes and fields for the seeded bundle samples.
pub const BUNDLE_CASES: [(u32, [i64; 5]); 4] =
    [(2, [6, -2, -2, -2, -2]), (2, [7, -3, -2, -2, -2]), (3, [3, -1, -1, -1, -1]), (3, [5, -1, -2, -2, -2])];

pub fn bundles(samples_per_case: usize, seed: u64) -> SuiteReport {
    let mut checks = Vec::new();
    for (q, class) in BUNDLE_CASES {
        let f = FieldCtx::new(q, 1).expect("prime");
        let name = format!("q={q} class {}", CurveClass(class));
        match hn_statistics(&f, &CurveClass(class), samples_per_case, seed, 1 << 24) {
            Err(e) => checks.push(check(name, false, e.to_string())),
            Ok(rep) => {
                let deg = rep.instances.iter().all(|s| s.splitting.degree() == s.degree);
                let rr = rep.instances.iter().all(|s| s.h0 - s.h1 == s.degree + 3);
                let slope = rep.instances.iter().all(|s| s.h1 == 0 || s.splitting.0[2] <= -2);
                checks.push(check(format!("{name}: splitting degree equals closed form"), deg, ""));
                checks.push(check(format!("{name}: h0 - h1 = degree + 3"), rr, ""));
                checks.push(check(
                    format!("{name}: h1 > 0 forces e3 <= -2"),
                    slope,
                    format!("{} of {} with h1 > 0", rep.h1_positive, rep.samples),
                ));
            }
        }
    }
    SuiteReport { suite: Suite::Bundles, checks }
}

pub fn counts(opts: &CountOptions) -> SuiteReport {
    let mut checks = Vec::new();
    for q in [2u32, 3, 4, 5, 7] {
        let f = FieldCtx::from_size(q).expect("prime power");
        let got = count_fast(&f, &CurveClass::zero(), opts).map(|r| r.hom_count);
        let want = zero_class_count(q);
        checks.push(check(
            format!("zero class over F_{q} is (q-2)(q-3)"),
            got.as_ref().is_ok_and(|g| *g == want),
            format!("{got:?} vs {want}"),
        ));
    }
    let f2 = FieldCtx::new(2, 1).expect("prime");
    for class in [CurveClass::anticanonical(), CurveClass([2, 0, -1, -1, -1]), CurveClass([1, 0, 0, 0, 0])] {
        let naive = count_naive(&f2, &class, opts.budget).map(|r| r.m_count);
        let fast = count_fast(&f2, &class, opts).map(|r| r.m_count);
        checks.push(check(
            format!("fast equals naive for {class} over F_2"),
            naive.is_ok() && naive == fast,
            format!("{naive:?} vs {fast:?}"),
        ));
    }
    for (q, class) in [(3u32, CurveClass::anticanonical()), (4, CurveClass([1, 0, 0, 0, 0])), (5, CurveClass::h())] {
        let f = FieldCtx::from_size(q).expect("prime power");
        let unit = BigUint::from(q - 1).pow(5);
        let r = count_fast(&f, &class, opts).map(|r| r.m_count);
        checks.push(check(
            format!("(q-1)^5 divides the torsor count for {class} over F_{q}"),
            r.as_ref().is_ok_and(|m| (m % &unit).is_zero()),
            format!("{r:?}"),
        ));
    }
    SuiteReport { suite: Suite::Counts, checks }
}

pub fn run(suite: Suite, opts: &CountOptions) -> SuiteReport {
    match suite {
        Suite::Identities => identities(),
        Suite::Bundles => bundles(25, 7),
        Suite::Counts => counts(opts),
    }
}
