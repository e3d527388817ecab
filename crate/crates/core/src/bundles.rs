//! Rank-3 subsheaves of `O(d13) + O(d24) + O(d34)` on `P^1` cut out by
//! divisibility conditions, with `h0`, degree and splitting type.
//!
//! Each condition `Z <= div(w)` is linear in the unknown coefficients: the
//! top `v_inf(Z)` coefficients of `w` vanish and the dehomogenization of `w`
//! reduces to zero modulo the finite part of `Z`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::FieldCtx;
use crate::linalg;
use crate::p1::{closed_points_up_to, BinaryForm, ClosedPoint, DivisorP1};
use crate::picard::{CurveClass, PicardError};
use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("h0 profile matches no splitting type")]
    InconsistentH0,
    #[error("sampling needed more than {budget} attempts")]
    BudgetExceeded { budget: u128 },
    #[error(transparent)]
    Picard(#[from] PicardError),
}

/// Appends the rows expressing `modulus | w`, where `w = sum_k x_k w_k` and
/// `images[k]` holds the `w_deg + 1` coefficients of `w_k`.
pub(crate) fn divisibility_rows(
    f: &FieldCtx,
    modulus: &BinaryForm,
    images: &[Vec<u32>],
    w_deg: usize,
    rows: &mut Vec<Vec<u32>>,
) {
    let r = modulus.infinity_order().expect("nonzero modulus");
    for t in 0..r.min(w_deg + 1) {
        rows.push(images.iter().map(|w| w[w_deg - t]).collect());
    }
    let fin = poly::make_monic(f, modulus.dehomogenized());
    let k = fin.len() - 1;
    if k == 0 {
        return;
    }
    // x^j mod fin, for j = 0..=w_deg.
    let mut xpow = Vec::with_capacity(w_deg + 1);
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    for _ in 0..=w_deg {
        xpow.push(cur.clone());
        let top = cur[k - 1];
        for i in (1..k).rev() {
            cur[i] = f.sub(cur[i - 1], f.mul(top, fin[i]));
        }
        cur[0] = f.neg(f.mul(top, fin[0]));
    }
    for i in 0..k {
        rows.push(
            images
                .iter()
                .map(|w| {
                    w.iter()
                        .zip(&xpow)
                        .fold(0, |acc, (&c, xp)| if c == 0 { acc } else { f.add(acc, f.mul(c, xp[i])) })
                })
                .collect(),
        );
    }
}

fn shifted(f: &FieldCtx, form: &BinaryForm, shift: usize, len: usize, negate: bool) -> Vec<u32> {
    let mut v = vec![0u32; len];
    for (i, &c) in form.coeffs().iter().enumerate() {
        v[i + shift] = if negate { f.neg(c) } else { c };
    }
    v
}

/// Splitting type `e1 >= e2 >= e3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SplittingType(pub [i64; 3]);

impl SplittingType {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn h0(&self, m: i64) -> i64 {
        self.0.iter().map(|&e| (e + m + 1).max(0)).sum()
    }

    pub fn h1(&self) -> i64 {
        self.0.iter().map(|&e| (-e - 1).max(0)).sum()
    }
}

#[derive(Debug, Clone)]
pub struct CongruenceBundle<'a> {
    field: &'a FieldCtx,
    a: [BinaryForm; 4],
    /// `(d13, d24, d34)`.
    dpp: [i64; 3],
    d: [DivisorP1; 4],
    e: [DivisorP1; 4],
    /// Modulus forms for `a13`, `a24`, `a34`, and the two mixed conditions.
    m13: BinaryForm,
    m24: BinaryForm,
    m34: BinaryForm,
    m14: BinaryForm,
    m23: BinaryForm,
}

impl<'a> CongruenceBundle<'a> {
    /// `F_ij` for `{i, j, k, l} = {1, 2, 3, 4}`.
    pub fn f_divisor(d: &[DivisorP1; 4], e: &[DivisorP1; 4], i: usize, j: usize) -> DivisorP1 {
        let mut out = d[i - 1].lcm(&d[j - 1]);
        for k in (1..=4).filter(|&k| k != i && k != j) {
            out = out.sum(&e[k - 1]);
        }
        out
    }

    pub fn new(
        field: &'a FieldCtx,
        a: [BinaryForm; 4],
        dpp: [i64; 3],
        d: [DivisorP1; 4],
        e: [DivisorP1; 4],
    ) -> Result<Self, BundleError> {
        let fail = |s: String| Err(BundleError::PreconditionViolated(s));
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                return fail(format!("a{} is zero", i + 1));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if !a[i].coprime(field, &a[j]) {
                    return fail(format!("a{} and a{} share a zero", i + 1, j + 1));
                }
            }
        }
        if let Some(k) = dpp.iter().position(|&x| x < 0) {
            return fail(format!("{} is negative", ["d13", "d24", "d34"][k]));
        }
        let da: [i64; 4] = std::array::from_fn(|i| a[i].degree() as i64);
        let [d13, d24, d34] = dpp;
        if da[2] + d34 != da[1] + d24 || da[3] + d34 != da[0] + d13 {
            return fail("degrees are not those of a curve class".to_string());
        }
        let all: Vec<&DivisorP1> = d.iter().chain(e.iter()).collect();
        for (n, x) in all.iter().enumerate() {
            let name = |n: usize| if n < 4 { format!("D{}", n + 1) } else { format!("E{}", n - 3) };
            if !x.is_squarefree() {
                return fail(format!("{} is not squarefree", name(n)));
            }
            for (m, y) in all.iter().enumerate().skip(n + 1) {
                if !x.disjoint(y) {
                    return fail(format!("{} and {} share a point", name(n), name(m)));
                }
            }
        }
        for i in 0..4 {
            if !d[i].is_zero() {
                let df = d[i].form(field);
                for j in (0..4).filter(|&j| j != i) {
                    if !df.coprime(field, &a[j]) {
                        return fail(format!("D{} meets div(a{})", i + 1, j + 1));
                    }
                }
            }
            if a[i].exact_div(field, &e[i].form(field)).is_none() {
                return fail(format!("E{} is not below div(a{})", i + 1, i + 1));
            }
        }
        let fm = |i, j| Self::f_divisor(&d, &e, i, j).form(field);
        Ok(CongruenceBundle {
            field,
            m13: fm(1, 3),
            m24: fm(2, 4),
            m34: fm(3, 4),
            m14: a[0].mul(field, &fm(1, 4)),
            m23: a[1].mul(field, &fm(2, 3)),
            a,
            dpp,
            d,
            e,
        })
    }

    /// The bundle with `D = E = 0`.
    pub fn plain(field: &'a FieldCtx, a: [BinaryForm; 4], dpp: [i64; 3]) -> Result<Self, BundleError> {
        let z = || DivisorP1::zero();
        Self::new(field, a, dpp, [z(), z(), z(), z()], [z(), z(), z(), z()])
    }

    pub fn field(&self) -> &FieldCtx {
        self.field
    }

    pub fn a(&self) -> &[BinaryForm; 4] {
        &self.a
    }

    pub fn ambient_degrees(&self) -> [i64; 3] {
        self.dpp
    }

    fn twisted(&self, m: i64) -> [i64; 3] {
        self.dpp.map(|x| x + m)
    }

    /// The constraint matrix at twist `m` and its column count.
    fn system(&self, m: i64) -> (Vec<Vec<u32>>, usize) {
        let f = self.field;
        let n = self.twisted(m);
        let sizes = n.map(|x| (x + 1).max(0) as usize);
        let offs = [0, sizes[0], sizes[0] + sizes[1]];
        let ncols = sizes.iter().sum();
        let mut rows = Vec::new();
        // Single-form conditions.
        for (slot, modulus) in [&self.m13, &self.m24, &self.m34].into_iter().enumerate() {
            if sizes[slot] == 0 || modulus.degree() == 0 {
                continue;
            }
            let w_deg = n[slot] as usize;
            let images: Vec<Vec<u32>> = (0..ncols)
                .map(|k| {
                    let mut v = vec![0u32; w_deg + 1];
                    if k >= offs[slot] && k < offs[slot] + sizes[slot] {
                        v[k - offs[slot]] = 1;
                    }
                    v
                })
                .collect();
            divisibility_rows(f, modulus, &images, w_deg, &mut rows);
        }
        // a3 a34 - a2 a24 and a4 a34 + a1 a13.
        let [a1, a2, a3, a4] = &self.a;
        let mixed = [(&self.m14, a3, 2usize, a2, 1usize, true), (&self.m23, a4, 2, a1, 0, false)];
        for (modulus, x, xs, y, ys, negate) in mixed {
            let w_deg = x.degree() as i64 + n[xs];
            if w_deg < 0 {
                continue;
            }
            let w_deg = w_deg as usize;
            let images: Vec<Vec<u32>> = (0..ncols)
                .map(|k| {
                    if k >= offs[xs] && k < offs[xs] + sizes[xs] {
                        shifted(f, x, k - offs[xs], w_deg + 1, false)
                    } else if k >= offs[ys] && k < offs[ys] + sizes[ys] {
                        shifted(f, y, k - offs[ys], w_deg + 1, negate)
                    } else {
                        vec![0u32; w_deg + 1]
                    }
                })
                .collect();
            divisibility_rows(f, modulus, &images, w_deg, &mut rows);
        }
        (rows, ncols)
    }

    pub fn h0(&self, m: i64) -> i64 {
        let (rows, ncols) = self.system(m);
        (ncols - linalg::rank(self.field, &rows, ncols)) as i64
    }

    /// A basis of the twisted global sections, as `(a13, a24, a34)`.
    pub fn sections(&self, m: i64) -> Vec<[BinaryForm; 3]> {
        let (rows, ncols) = self.system(m);
        let n = self.twisted(m);
        let sizes = n.map(|x| (x + 1).max(0) as usize);
        linalg::nullspace(self.field, &rows, ncols)
            .into_iter()
            .map(|v| {
                let mut off = 0;
                std::array::from_fn(|slot| {
                    let part = v[off..off + sizes[slot]].to_vec();
                    off += sizes[slot];
                    BinaryForm::new(n[slot].max(0) as usize, part)
                })
            })
            .collect()
    }

    /// Direct test of the defining conditions on a triple of forms.
    pub fn contains(&self, triple: &[BinaryForm; 3]) -> bool {
        let f = self.field;
        let divides = |m: &BinaryForm, w: Option<BinaryForm>| match w {
            None => true,
            Some(w) => w.is_zero() || w.exact_div(f, m).is_some(),
        };
        // Zero forms may carry a placeholder degree, so drop them first.
        let combo = |x: &BinaryForm, p: &BinaryForm, y: &BinaryForm, r: &BinaryForm, negate: bool| {
            let left = (!p.is_zero()).then(|| x.mul(f, p));
            let right = (!r.is_zero()).then(|| y.mul(f, r));
            match (left, right) {
                (Some(u), Some(v)) => Some(if negate { u.sub(f, &v) } else { u.add(f, &v) }),
                (Some(u), None) => Some(u),
                (None, Some(v)) => Some(if negate { v.scale(f, f.neg(1)) } else { v }),
                (None, None) => None,
            }
        };
        let [a13, a24, a34] = triple;
        let [a1, a2, a3, a4] = &self.a;
        divides(&self.m13, Some(a13.clone()))
            && divides(&self.m24, Some(a24.clone()))
            && divides(&self.m34, Some(a34.clone()))
            && divides(&self.m14, combo(a3, a34, a2, a24, true))
            && divides(&self.m23, combo(a4, a34, a1, a13, false))
    }

    /// `B = sum E_i + [D1;D2;D3] + [D1;D2;D4] + [(D1;D2);D3;D4]`.
    pub fn correction_divisor(&self) -> DivisorP1 {
        let [d1, d2, d3, d4] = &self.d;
        let mut b = DivisorP1::zero();
        for ei in &self.e {
            b = b.sum(ei);
        }
        let d12 = d1.lcm(d2);
        b.sum(&d12.lcm(d3)).sum(&d12.lcm(d4)).sum(&d1.gcd(d2).lcm(d3).lcm(d4))
    }

    /// Anticanonical degree of the underlying class.
    pub fn class_degree(&self) -> i64 {
        let [d13, d24, d34] = self.dpp;
        d13 + self.a[2].degree() as i64 + d34 + self.a[3].degree() as i64 + d24
    }

    /// `d - |d'| - deg B`.
    pub fn degree(&self) -> i64 {
        let dsum: i64 = self.a.iter().map(|x| x.degree() as i64).sum();
        self.class_degree() - dsum - self.correction_divisor().degree() as i64
    }

    /// Splitting type read off from the jumps of `h0(m) - h0(m - 1)`.
    pub fn splitting_type(&self) -> Result<SplittingType, BundleError> {
        let top = *self.dpp.iter().max().expect("three entries");
        let m0 = -top - 2;
        // e3 >= deg - 2 max(d''), so the scan ends by -(that) + 1.
        let m_cap = -(self.degree() - 2 * top) + 2;
        let mut prev_h = self.h0(m0 - 1);
        if prev_h != 0 {
            return Err(BundleError::InconsistentH0);
        }
        let mut prev_jump = 0;
        let mut es = Vec::with_capacity(3);
        let mut m = m0;
        while es.len() < 3 {
            if m > m_cap {
                return Err(BundleError::InconsistentH0);
            }
            let h = self.h0(m);
            let jump = h - prev_h;
            if !(prev_jump..=3).contains(&jump) {
                return Err(BundleError::InconsistentH0);
            }
            for _ in prev_jump..jump {
                es.push(-m);
            }
            prev_h = h;
            prev_jump = jump;
            m += 1;
        }
        Ok(SplittingType([es[0], es[1], es[2]]))
    }

    pub fn h1(&self) -> Result<i64, BundleError> {
        Ok(self.splitting_type()?.h1())
    }
}

/// One sampled bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnSample {
    pub degree: i64,
    pub splitting: SplittingType,
    pub h0: i64,
    pub h1: i64,
    pub b_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnReport {
    pub q: u32,
    pub class: [i64; 5],
    pub samples: usize,
    pub seed: u64,
    /// Histogram of `3 (e1 - mu) = 3 e1 - degree`.
    pub excess_histogram: BTreeMap<i64, u64>,
    pub h1_positive: u64,
    pub degree_total: i64,
    pub splitting_total: i64,
    pub instances: Vec<HnSample>,
}

impl HnReport {
    pub fn h1_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.h1_positive as f64 / self.samples as f64
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, f: &FieldCtx, degree: usize) -> BinaryForm {
    loop {
        let coeffs: Vec<u32> = (0..=degree).map(|_| rng.gen_range(0..f.size())).collect();
        let form = BinaryForm::new(degree, coeffs);
        if !form.is_zero() {
            return form;
        }
    }
}

/// Picks a squarefree divisor of degree at most 2 from `allowed`, or zero.
fn random_small_divisor(rng: &mut ChaCha8Rng, allowed: &[&ClosedPoint]) -> DivisorP1 {
    let mut out = DivisorP1::zero();
    if allowed.is_empty() || rng.gen_bool(0.5) {
        return out;
    }
    for _ in 0..2 {
        let p = allowed[rng.gen_range(0..allowed.len())];
        if out.multiplicity(p) == 0 && out.degree() + p.degree() <= 2 {
            out = out.sum(&DivisorP1::point(p.clone()));
        }
        if rng.gen_bool(0.5) {
            break;
        }
    }
    out
}

fn sample_instance(
    f: &FieldCtx,
    degs: [usize; 4],
    dpp: [i64; 3],
    points: &[ClosedPoint],
    rng: &mut ChaCha8Rng,
    attempts: &mut u128,
    budget: u128,
) -> Result<HnSample, BundleError> {
    let a = loop {
        *attempts += 1;
        if *attempts > budget {
            return Err(BundleError::BudgetExceeded { budget });
        }
        let a: [BinaryForm; 4] = std::array::from_fn(|i| random_form(rng, f, degs[i]));
        if (0..4).all(|i| (i + 1..4).all(|j| a[i].coprime(f, &a[j]))) {
            break a;
        }
    };
    let vanishes = |form: &BinaryForm, p: &ClosedPoint| form.exact_div(f, &p.form()).is_some();
    let mut used: Vec<ClosedPoint> = Vec::new();
    let mut e: [DivisorP1; 4] = Default::default();
    for i in 0..4 {
        let allowed: Vec<&ClosedPoint> =
            points.iter().filter(|p| vanishes(&a[i], p) && !used.contains(p)).collect();
        e[i] = random_small_divisor(rng, &allowed);
        used.extend(e[i].support().cloned());
    }
    let mut d: [DivisorP1; 4] = Default::default();
    for i in 0..4 {
        let allowed: Vec<&ClosedPoint> = points
            .iter()
            .filter(|p| !used.contains(p) && (0..4).all(|j| j == i || !vanishes(&a[j], p)))
            .collect();
        d[i] = random_small_divisor(rng, &allowed);
        used.extend(d[i].support().cloned());
    }
    let bundle = CongruenceBundle::new(f, a, dpp, d, e)?;
    let splitting = bundle.splitting_type()?;
    Ok(HnSample {
        degree: bundle.degree(),
        splitting,
        h0: bundle.h0(0),
        h1: splitting.h1(),
        b_degree: bundle.correction_divisor().degree(),
    })
}

/// Seeded sample of congruence bundles for the chamber-normalized class.
/// Sample `i` draws from its own ChaCha stream, so the report does not
/// depend on scheduling.
pub fn hn_statistics(
    f: &FieldCtx,
    class: &CurveClass,
    samples: usize,
    seed: u64,
    budget: u128,
) -> Result<HnReport, BundleError> {
    let chamber = class.chamber_normalize()?;
    let dd = chamber.data;
    let degs: [usize; 4] = std::array::from_fn(|i| dd.di(i + 1) as usize);
    let dpp = [dd.dij(1, 3), dd.dij(2, 4), dd.dij(3, 4)];
    let points = closed_points_up_to(f, 2);
    let per_sample = budget / (samples.max(1) as u128);
    let one = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut attempts = 0;
        sample_instance(f, degs, dpp, &points, &mut rng, &mut attempts, per_sample.max(1))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Result<HnSample, BundleError>> = (0..samples).into_par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Result<HnSample, BundleError>> = (0..samples).map(one).collect();
    let instances = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut report = HnReport {
        q: f.size(),
        class: class.coeffs(),
        samples,
        seed,
        excess_histogram: BTreeMap::new(),
        h1_positive: 0,
        degree_total: 0,
        splitting_total: 0,
        instances: Vec::new(),
    };
    for s in &instances {
        *report.excess_histogram.entry(3 * s.splitting.0[0] - s.degree).or_insert(0) += 1;
        report.h1_positive += (s.h1 > 0) as u64;
        report.degree_total += s.degree;
        report.splitting_total += s.splitting.degree();
    }
    report.instances = instances;
    Ok(report)
}
