//! Exact counts of morphisms `P^1 -> X` of a given class over `F_q`, by
//! enumerating torsor coordinates.
//!
//! `count_naive` runs over all ten-tuples of nonzero sections. `count_fast`
//! runs over pairwise coprime `a' = (a1..a4)`, takes the linear space of
//! `(a13, a24, a34)` with `a1 | a3 a34 - a2 a24` and `a2 | a4 a34 + a1 a13`,
//! and recovers `a14, a23, a12` by exact division.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bundles::CongruenceBundle;
use crate::gf::FieldCtx;
use crate::p1::BinaryForm;
use crate::picard::{lines_meet, CurveClass, DegreeData, E1, E2, E3, E4, L12, L13, L14, L23, L24, L34};
use crate::poly;

pub const DEFAULT_BUDGET: u128 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("enumeration of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("class {0} is not in the effective dual cone")]
    NotInEffDual(CurveClass),
    #[error("exact division failed for {0}")]
    NonExactDivision(&'static str),
    #[error("torsor count {count} is not divisible by (q-1)^5")]
    Indivisible { count: BigUint },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Fast,
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub workers: usize,
    /// Relabel by the chamber of the class before counting.
    pub normalize: bool,
    pub budget: u128,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { workers: 1, normalize: true, budget: DEFAULT_BUDGET }
    }
}

fn big_str<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub q: u32,
    pub class: [i64; 5],
    pub pairings: [i64; 10],
    pub d: i64,
    pub method: Method,
    #[serde(serialize_with = "big_str")]
    pub m_count: BigUint,
    #[serde(serialize_with = "big_str")]
    pub hom_count: BigUint,
    #[serde(skip)]
    pub wall_time_ms: u128,
    #[serde(skip)]
    pub workers: usize,
}

/// Pairs of disjoint lines, i.e. the coprimality conditions.
pub fn disjoint_pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..10 {
        for y in x + 1..10 {
            if !lines_meet(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// `(L1, L2, L3, L4)` for each relation `a_L1 a_L2 - a_L3 a_L4 + a_L5 a_L6 = 0`.
const PLUCKER: [[usize; 6]; 5] = [
    [E4, L14, E3, L13, E2, L12],
    [E4, L24, E3, L23, E1, L12],
    [E4, L34, E2, L23, E1, L13],
    [E3, L34, E2, L24, E1, L14],
    [L12, L34, L13, L24, L23, L14],
];

fn finish(
    f: &FieldCtx,
    class: &CurveClass,
    method: Method,
    m_count: BigUint,
    started: Instant,
    workers: usize,
) -> Result<CountResult, CountError> {
    let unit = BigUint::from(f.size() - 1).pow(5);
    if !(&m_count % &unit).is_zero() {
        return Err(CountError::Indivisible { count: m_count });
    }
    let data = class.degree_data();
    Ok(CountResult {
        q: f.size(),
        class: class.coeffs(),
        pairings: data.lines,
        d: data.d,
        method,
        hom_count: &m_count / &unit,
        m_count,
        wall_time_ms: started.elapsed().as_millis(),
        workers,
    })
}

fn check_eff(class: &CurveClass) -> Result<DegreeData, CountError> {
    if class.in_eff_dual() {
        Ok(class.degree_data())
    } else {
        Err(CountError::NotInEffDual(*class))
    }
}

fn pow_u128(q: u32, e: i64) -> u128 {
    (q as u128).saturating_pow(e as u32)
}

/// Both forms nonzero, given as full coefficient vectors.
fn forms_coprime(f: &FieldCtx, a: &[u32], b: &[u32], x: &mut Vec<u32>, y: &mut Vec<u32>) -> bool {
    if a.last() == Some(&0) && b.last() == Some(&0) {
        return false;
    }
    poly::coprime_with(f, a, b, x, y)
}

/// Reference count over all ten-tuples of nonzero sections.
pub fn count_naive(f: &FieldCtx, class: &CurveClass, budget: u128) -> Result<CountResult, CountError> {
    let started = Instant::now();
    let data = check_eff(class)?;
    let needed = data
        .lines
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(pow_u128(f.size(), d + 1) - 1));
    if needed > budget {
        return Err(CountError::BudgetExceeded { needed, budget });
    }
    let choices: Vec<Vec<BinaryForm>> = data
        .lines
        .iter()
        .map(|&d| {
            crate::p1::enumerate_sections(f, d as usize, true, u128::MAX)
                .expect("within budget")
                .collect()
        })
        .collect();
    let pairs = disjoint_pairs();
    let mut idx = [0usize; 10];
    let mut count = 0u64;
    'outer: loop {
        let a: [&BinaryForm; 10] = std::array::from_fn(|l| &choices[l][idx[l]]);
        let ok = PLUCKER.iter().all(|r| {
            let s = a[r[0]].mul(f, a[r[1]]).sub(f, &a[r[2]].mul(f, a[r[3]]));
            s.add(f, &a[r[4]].mul(f, a[r[5]])).is_zero()
        }) && pairs.iter().all(|&(x, y)| a[x].coprime(f, a[y]));
        count += ok as u64;
        for l in (0..10).rev() {
            idx[l] += 1;
            if idx[l] < choices[l].len() {
                continue 'outer;
            }
            idx[l] = 0;
        }
        break;
    }
    finish(f, class, Method::Naive, BigUint::from(count), started, 1)
}

/// Coordinates of the six dependent forms, in this order.
const SLOTS: [usize; 6] = [L13, L24, L34, L14, L23, L12];

struct FastPlan<'a> {
    f: &'a FieldCtx,
    data: DegreeData,
    /// Nonzero forms of degree `d_i`, `i = 1..4`.
    forms: [Vec<BinaryForm>; 4],
    /// Coprimality checks involving at least one dependent slot, as
    /// indices into the ten-line array.
    pairs: Vec<(usize, usize)>,
    /// `F_q` as an `F_p`-space: `x^j` for `j < e`.
    additive_basis: Vec<u32>,
}

impl FastPlan<'_> {
    fn count_prefix(&self, i1: usize, i2: usize) -> Result<u64, CountError> {
        let f = self.f;
        let (a1, a2) = (&self.forms[0][i1], &self.forms[1][i2]);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        if !forms_coprime(f, a1.coeffs(), a2.coeffs(), &mut x, &mut y) {
            return Ok(0);
        }
        let dd = &self.data;
        let dpp = [dd.lines[L13], dd.lines[L24], dd.lines[L34]];
        let lens: [usize; 6] = SLOTS.map(|l| dd.lines[l] as usize + 1);
        let offs: [usize; 6] = std::array::from_fn(|k| lens[..k].iter().sum());
        let total: usize = lens.iter().sum();
        let mut count = 0u64;
        let mut state = vec![0u32; total];
        for a3 in &self.forms[2] {
            if !forms_coprime(f, a1.coeffs(), a3.coeffs(), &mut x, &mut y)
                || !forms_coprime(f, a2.coeffs(), a3.coeffs(), &mut x, &mut y)
            {
                continue;
            }
            for a4 in &self.forms[3] {
                if ![a1, a2, a3].iter().all(|ai| forms_coprime(f, ai.coeffs(), a4.coeffs(), &mut x, &mut y)) {
                    continue;
                }
                let a = [a1.clone(), a2.clone(), a3.clone(), a4.clone()];
                let bundle = CongruenceBundle::plain(f, a, dpp).expect("a' is pairwise coprime");
                // Images of the basis vectors, scaled by the additive basis.
                let mut steps: Vec<Vec<u32>> = Vec::new();
                for [b13, b24, b34] in bundle.sections(0) {
                    let w14 = a2.mul(f, &b24).sub(f, &a3.mul(f, &b34));
                    let b14 = w14.exact_div(f, a1).ok_or(CountError::NonExactDivision("a14"))?;
                    let w23 = a4.mul(f, &b34).add(f, &a1.mul(f, &b13));
                    let b23 = w23.exact_div(f, a2).ok_or(CountError::NonExactDivision("a23"))?;
                    let w12 = a3.mul(f, &b13).sub(f, &a4.mul(f, &b14));
                    let b12 = w12.exact_div(f, a2).ok_or(CountError::NonExactDivision("a12"))?;
                    let parts = [&b13, &b24, &b34, &b14, &b23, &b12];
                    for &g in &self.additive_basis {
                        let mut v = Vec::with_capacity(total);
                        for p in parts {
                            v.extend(p.coeffs().iter().map(|&c| f.mul(c, g)));
                        }
                        steps.push(v);
                    }
                }
                let a_coeffs = [a1.coeffs(), a2.coeffs(), a3.coeffs(), a4.coeffs()];
                state.iter_mut().for_each(|c| *c = 0);
                let p = f.characteristic();
                let mut digits = vec![0u32; steps.len()];
                loop {
                    let nonzero = (0..6).all(|k| state[offs[k]..offs[k] + lens[k]].iter().any(|&c| c != 0));
                    if nonzero {
                        let mut full: [&[u32]; 10] = [&[]; 10];
                        full[..4].copy_from_slice(&a_coeffs);
                        for k in 0..6 {
                            full[SLOTS[k]] = &state[offs[k]..offs[k] + lens[k]];
                        }
                        if self.pairs.iter().all(|&(u, v)| forms_coprime(f, full[u], full[v], &mut x, &mut y)) {
                            count += 1;
                        }
                    }
                    // Odometer over F_p-digits; p additions of a step wrap to zero.
                    let mut k = 0;
                    loop {
                        if k == steps.len() {
                            break;
                        }
                        for (s, &c) in state.iter_mut().zip(&steps[k]) {
                            *s = f.add(*s, c);
                        }
                        digits[k] += 1;
                        if digits[k] < p {
                            break;
                        }
                        digits[k] = 0;
                        k += 1;
                    }
                    if k == steps.len() {
                        break;
                    }
                }
            }
        }
        Ok(count)
    }
}

/// Count by the congruence reduction.
pub fn count_fast(f: &FieldCtx, class: &CurveClass, opts: &CountOptions) -> Result<CountResult, CountError> {
    let started = Instant::now();
    let raw = check_eff(class)?;
    let data = if opts.normalize {
        class.chamber_normalize().expect("effective").data
    } else {
        raw
    };
    let da: [i64; 4] = std::array::from_fn(|i| data.di(i + 1));
    let needed = da.iter().fold(1u128, |acc, &d| acc.saturating_mul(pow_u128(f.size(), d + 1)));
    if needed > opts.budget {
        return Err(CountError::BudgetExceeded { needed, budget: opts.budget });
    }
    let forms: [Vec<BinaryForm>; 4] = std::array::from_fn(|i| {
        crate::p1::enumerate_sections(f, da[i] as usize, true, u128::MAX)
            .expect("within budget")
            .collect()
    });
    let e = f.degree();
    let plan = FastPlan {
        f,
        data,
        pairs: disjoint_pairs().into_iter().filter(|&(x, y)| x >= 4 || y >= 4).collect(),
        additive_basis: (0..e).map(|j| f.characteristic().pow(j)).collect(),
        forms,
    };
    let prefixes: Vec<(usize, usize)> = (0..plan.forms[0].len())
        .flat_map(|i| (0..plan.forms[1].len()).map(move |j| (i, j)))
        .collect();
    let workers = opts.workers.max(1);
    let partials = run_partitioned(&prefixes, workers, |&(i, j)| plan.count_prefix(i, j))?;
    let m_count = partials.into_iter().fold(BigUint::zero(), |acc, c| acc + BigUint::from(c));
    finish(f, class, Method::Fast, m_count, started, workers)
}

#[cfg(feature = "parallel")]
fn run_partitioned<T, F>(items: &[T], workers: usize, job: F) -> Result<Vec<u64>, CountError>
where
    T: Sync,
    F: Fn(&T) -> Result<u64, CountError> + Sync + Send,
{
    if workers <= 1 {
        return items.iter().map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| items.par_iter().map(job).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_partitioned<T, F>(items: &[T], _workers: usize, job: F) -> Result<Vec<u64>, CountError>
where
    F: Fn(&T) -> Result<u64, CountError>,
{
    items.iter().map(job).collect()
}

/// `hom_count / q^(d + 2)` as a float, for display.
pub fn ratio_f64(result: &CountResult) -> f64 {
    let denom = BigUint::from(result.q).pow((result.d + 2) as u32);
    let scale = 1u64 << 52;
    let num = (&result.hom_count * BigUint::from(scale)) / denom;
    num.to_f64().unwrap_or(f64::INFINITY) / scale as f64
}

/// `(q - 2)(q - 3)`, the number of points off the ten lines.
pub fn zero_class_count(q: u32) -> BigUint {
    if q <= 3 {
        BigUint::zero()
    } else {
        BigUint::from(q - 2) * BigUint::from(q - 3)
    }
}

pub fn unit_count(q: u32) -> BigUint {
    if q < 2 {
        BigUint::one()
    } else {
        BigUint::from(q - 1).pow(5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld(p: u32, e: u32) -> FieldCtx {
        FieldCtx::new(p, e).unwrap()
    }

    #[test]
    fn thirty_disjoint_pairs() {
        let pairs = disjoint_pairs();
        assert_eq!(pairs.len(), 30);
        assert!(pairs.contains(&(E1, E2)));
        assert!(pairs.contains(&(E1, L23)));
        assert!(pairs.contains(&(L12, L23)));
        assert!(!pairs.contains(&(E1, L12)));
        assert!(!pairs.contains(&(L12, L34)));
    }

    #[test]
    fn zero_class() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)] {
            let f = fld(p, e);
            let z = CurveClass::zero();
            let fast = count_fast(&f, &z, &CountOptions::default()).unwrap();
            assert_eq!(fast.hom_count, zero_class_count(f.size()));
            if f.size() <= 4 {
                assert_eq!(count_naive(&f, &z, 1 << 30).unwrap().hom_count, fast.hom_count);
            }
        }
    }

    #[test]
    fn fast_matches_naive_small() {
        let f = fld(2, 1);
        for class in [CurveClass::h(), CurveClass([1, -1, 0, 0, 0]), CurveClass::anticanonical()] {
            let naive = count_naive(&f, &class, 1 << 30).unwrap();
            for normalize in [false, true] {
                let opts = CountOptions { normalize, ..Default::default() };
                assert_eq!(count_fast(&f, &class, &opts).unwrap().m_count, naive.m_count, "{class}");
            }
        }
        let f3 = fld(3, 1);
        let naive = count_naive(&f3, &CurveClass::h(), 1 << 30).unwrap();
        assert_eq!(count_fast(&f3, &CurveClass::h(), &CountOptions::default()).unwrap().m_count, naive.m_count);
    }

    #[test]
    fn errors() {
        let f = fld(2, 1);
        assert!(matches!(
            count_fast(&f, &CurveClass::e(1), &CountOptions::default()),
            Err(CountError::NotInEffDual(_))
        ));
        assert!(matches!(
            count_naive(&f, &CurveClass::anticanonical(), 10),
            Err(CountError::BudgetExceeded { .. })
        ));
        let opts = CountOptions { budget: 10, ..Default::default() };
        assert!(matches!(
            count_fast(&f, &CurveClass::anticanonical().scale(3), &opts),
            Err(CountError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn workers_agree() {
        let f = fld(3, 1);
        let k = CurveClass::anticanonical();
        let one = count_fast(&f, &k, &CountOptions::default()).unwrap();
        for w in [2, 4] {
            let opts = CountOptions { workers: w, ..Default::default() };
            let r = count_fast(&f, &k, &opts).unwrap();
            assert_eq!((r.m_count, r.hom_count), (one.m_count.clone(), one.hom_count.clone()));
        }
    }
}
