//! Sections of `O(d)` on the projective line as binary forms, effective
//! divisors, and the closed-point census.
//!
//! A form `f(s, t) = sum c_j s^j t^(d - j)` is stored as its coefficient
//! vector `c_0..c_d`, which is also the coefficient vector of the
//! dehomogenization `f(x, 1)`. The point at infinity is `[1 : 0]`; its
//! vanishing order is `d - deg f(x, 1)`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gf::FieldCtx;
use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum P1Error {
    #[error("the zero form has no divisor")]
    ZeroForm,
    #[error("enumeration of {needed} items exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<u32>,
}

impl BinaryForm {
    pub fn new(degree: usize, mut coeffs: Vec<u32>) -> Self {
        assert!(coeffs.len() <= degree + 1, "too many coefficients for degree {degree}");
        coeffs.resize(degree + 1, 0);
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm::new(degree, Vec::new())
    }

    /// The form `t^degree`, nonvanishing away from infinity.
    pub fn t_power(degree: usize) -> Self {
        BinaryForm::new(degree, vec![1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// `f(x, 1)`, normalized.
    pub fn dehomogenized(&self) -> &[u32] {
        poly::trimmed(&self.coeffs)
    }

    pub fn infinity_order(&self) -> Option<usize> {
        poly::degree(&self.coeffs).map(|k| self.degree - k)
    }

    pub fn mul(&self, f: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        BinaryForm::new(self.degree + other.degree, poly::mul(f, &self.coeffs, &other.coeffs))
    }

    pub fn add(&self, f: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        BinaryForm::new(self.degree, poly::add(f, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, f: &FieldCtx, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "subtracting forms of different degrees");
        BinaryForm::new(self.degree, poly::sub(f, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, f: &FieldCtx, c: u32) -> BinaryForm {
        BinaryForm::new(self.degree, poly::scale(f, &self.coeffs, c))
    }

    /// `self / divisor` when the division is exact as binary forms.
    pub fn exact_div(&self, f: &FieldCtx, divisor: &BinaryForm) -> Option<BinaryForm> {
        assert!(!divisor.is_zero(), "division by the zero form");
        if divisor.degree > self.degree {
            return None;
        }
        let out_degree = self.degree - divisor.degree;
        if self.is_zero() {
            return Some(BinaryForm::zero(out_degree));
        }
        let (quo, rem) = poly::divrem(f, self.dehomogenized(), divisor.dehomogenized());
        if !rem.is_empty() || quo.len() > out_degree + 1 {
            return None;
        }
        Some(BinaryForm::new(out_degree, quo))
    }

    /// Whether the two nonzero forms have no common zero on `P^1`.
    pub fn coprime(&self, f: &FieldCtx, other: &BinaryForm) -> bool {
        assert!(!self.is_zero() && !other.is_zero(), "coprimality of the zero form");
        if self.infinity_order() > Some(0) && other.infinity_order() > Some(0) {
            return false;
        }
        poly::gcd(f, self.dehomogenized(), other.dehomogenized()).len() == 1
    }

    pub fn eval(&self, f: &FieldCtx, s: u32, t: u32) -> u32 {
        let mut acc = 0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = f.mul(
                c,
                f.mul(
                    f.pow(s, j as i64).expect("nonnegative"),
                    f.pow(t, (self.degree - j) as i64).expect("nonnegative"),
                ),
            );
            acc = f.add(acc, term);
        }
        acc
    }

    /// The form at position `index` of the lexicographic order on
    /// coefficient vectors, `c_0` most significant.
    pub fn from_index(f: &FieldCtx, degree: usize, index: u64) -> BinaryForm {
        let q = f.size() as u64;
        let mut coeffs = vec![0u32; degree + 1];
        let mut r = index;
        for c in coeffs.iter_mut().rev() {
            *c = (r % q) as u32;
            r /= q;
        }
        BinaryForm { degree, coeffs }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = String::new();
            if c != 1 {
                term.push_str(&c.to_string());
            }
            for (var, e) in [("s", j), ("t", self.degree - j)] {
                match e {
                    0 => {}
                    1 => term.push_str(var),
                    e => term.push_str(&format!("{var}^{e}")),
                }
            }
            if term.is_empty() {
                term.push('1');
            }
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// A closed point of `P^1` over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosedPoint {
    Infinity,
    /// Monic irreducible polynomial in `x = s / t`, low to high.
    Finite(Vec<u32>),
}

impl ClosedPoint {
    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Finite(p) => p.len() - 1,
        }
    }

    /// The binary form of degree `deg` cutting out this point.
    pub fn form(&self) -> BinaryForm {
        match self {
            ClosedPoint::Infinity => BinaryForm::t_power(1),
            ClosedPoint::Finite(p) => BinaryForm::new(p.len() - 1, p.clone()),
        }
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Infinity => write!(f, "inf"),
            ClosedPoint::Finite(p) => {
                let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Effective divisor on `P^1`, fully factored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorP1 {
    entries: BTreeMap<ClosedPoint, u32>,
}

impl DivisorP1 {
    pub fn zero() -> Self {
        DivisorP1::default()
    }

    pub fn point(p: ClosedPoint) -> Self {
        DivisorP1::point_with(p, 1)
    }

    pub fn point_with(p: ClosedPoint, mult: u32) -> Self {
        let mut entries = BTreeMap::new();
        if mult > 0 {
            entries.insert(p, mult);
        }
        DivisorP1 { entries }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (ClosedPoint, u32)>) -> Self {
        let mut d = DivisorP1::zero();
        for (p, m) in entries {
            if m > 0 {
                *d.entries.entry(p).or_insert(0) += m;
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ClosedPoint, u32)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn multiplicity(&self, p: &ClosedPoint) -> u32 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.entries.keys()
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|(p, &m)| p.degree() * m as usize).sum()
    }

    pub fn sum(&self, other: &DivisorP1) -> DivisorP1 {
        let mut out = self.clone();
        for (p, &m) in &other.entries {
            *out.entries.entry(p.clone()).or_insert(0) += m;
        }
        out
    }

    /// Pointwise minimum of multiplicities.
    pub fn gcd(&self, other: &DivisorP1) -> DivisorP1 {
        DivisorP1::from_entries(
            self.entries
                .iter()
                .filter_map(|(p, &m)| other.entries.get(p).map(|&n| (p.clone(), m.min(n)))),
        )
    }

    /// Pointwise maximum of multiplicities.
    pub fn lcm(&self, other: &DivisorP1) -> DivisorP1 {
        let mut out = self.clone();
        for (p, &m) in &other.entries {
            let e = out.entries.entry(p.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        out
    }

    /// `self <= other` pointwise.
    pub fn leq(&self, other: &DivisorP1) -> bool {
        self.entries.iter().all(|(p, &m)| other.multiplicity(p) >= m)
    }

    pub fn disjoint(&self, other: &DivisorP1) -> bool {
        self.gcd(other).is_zero()
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.values().all(|&m| m == 1)
    }

    /// The curve Möbius function.
    pub fn mobius(&self) -> i32 {
        if self.is_squarefree() {
            if self.entries.len() % 2 == 0 {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    /// A form of degree `deg(self)` with exactly this divisor.
    pub fn form(&self, f: &FieldCtx) -> BinaryForm {
        let mut acc = BinaryForm::new(0, vec![1]);
        for (p, &m) in &self.entries {
            let pf = p.form();
            for _ in 0..m {
                acc = acc.mul(f, &pf);
            }
        }
        acc
    }

    /// All effective divisors `E <= self`.
    pub fn subdivisors(&self) -> Vec<DivisorP1> {
        let mut out = vec![DivisorP1::zero()];
        for (p, &m) in &self.entries {
            let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
            for d in &out {
                for k in 0..=m {
                    let mut e = d.clone();
                    if k > 0 {
                        e.entries.insert(p.clone(), k);
                    }
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, &m)| if m == 1 { p.to_string() } else { format!("{m}{p}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Divisor of a nonzero section, by trial division of the dehomogenization.
pub fn divisor_of(f: &FieldCtx, form: &BinaryForm) -> Result<DivisorP1, P1Error> {
    let inf = form.infinity_order().ok_or(P1Error::ZeroForm)?;
    let mut entries = Vec::new();
    if inf > 0 {
        entries.push((ClosedPoint::Infinity, inf as u32));
    }
    let mut rest = poly::make_monic(f, form.dehomogenized());
    // Linear factors by root search.
    for r in f.elements() {
        let lin = vec![f.neg(r), 1];
        let mut mult = 0;
        while rest.len() > 1 && poly::eval(f, &rest, r) == 0 {
            rest = poly::divrem(f, &rest, &lin).0;
            mult += 1;
        }
        if mult > 0 {
            entries.push((ClosedPoint::Finite(lin), mult));
        }
    }
    let q = f.size() as u64;
    let mut deg = 2;
    while 2 * deg < rest.len() {
        let count = q.pow(deg as u32);
        for idx in 0..count {
            if 2 * deg >= rest.len() {
                break;
            }
            let g = poly::monic_from_index(f, deg, idx);
            let mut mult = 0;
            loop {
                let (quo, rem) = poly::divrem(f, &rest, &g);
                if !rem.is_empty() {
                    break;
                }
                rest = quo;
                mult += 1;
            }
            if mult > 0 {
                entries.push((ClosedPoint::Finite(g), mult));
            }
        }
        deg += 1;
    }
    if rest.len() > 1 {
        entries.push((ClosedPoint::Finite(rest), 1));
    }
    Ok(DivisorP1::from_entries(entries))
}

/// Whether a monic polynomial of positive degree is irreducible.
pub fn is_irreducible(f: &FieldCtx, p: &[u32]) -> bool {
    let p = poly::trimmed(p);
    if p.len() < 2 {
        return false;
    }
    let form = BinaryForm::new(p.len() - 1, p.to_vec());
    let div = divisor_of(f, &form).expect("nonzero");
    div.entries.len() == 1 && div.is_squarefree()
}

/// All monic irreducibles of the given degree, in index order.
pub fn irreducibles(f: &FieldCtx, deg: usize) -> Vec<Vec<u32>> {
    let count = (f.size() as u64).pow(deg as u32);
    (0..count)
        .map(|i| poly::monic_from_index(f, deg, i))
        .filter(|g| is_irreducible(f, g))
        .collect()
}

/// Closed points of degree at most `max_deg`, infinity first.
pub fn closed_points_up_to(f: &FieldCtx, max_deg: usize) -> Vec<ClosedPoint> {
    let mut out = Vec::new();
    if max_deg >= 1 {
        out.push(ClosedPoint::Infinity);
    }
    for d in 1..=max_deg {
        out.extend(irreducibles(f, d).into_iter().map(ClosedPoint::Finite));
    }
    out
}

fn mobius_int(n: u64) -> i64 {
    let mut n = n;
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of closed points of degree `n` on `P^1` over `F_q`.
pub fn points_by_degree(q: u64, n: u32) -> u128 {
    assert!(n >= 1, "degree must be positive");
    if n == 1 {
        return q as u128 + 1;
    }
    let mut acc: i128 = 0;
    for m in 1..=n as u64 {
        if n as u64 % m == 0 {
            let term = (q as i128).checked_pow(n / m as u32).expect("point count overflows i128");
            acc += mobius_int(m) as i128 * term;
        }
    }
    (acc / n as i128) as u128
}

/// Iterator over all forms of a degree in lexicographic coefficient order.
#[derive(Debug, Clone)]
pub struct Sections<'a> {
    field: &'a FieldCtx,
    degree: usize,
    next: u64,
    end: u64,
}

impl Iterator for Sections<'_> {
    type Item = BinaryForm;

    fn next(&mut self) -> Option<BinaryForm> {
        if self.next >= self.end {
            return None;
        }
        let form = BinaryForm::from_index(self.field, self.degree, self.next);
        self.next += 1;
        Some(form)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// Number of forms of degree `d`: `q^(d+1)`.
pub fn section_count(f: &FieldCtx, degree: usize) -> u128 {
    (f.size() as u128).saturating_pow(degree as u32 + 1)
}

/// All `q^(d+1)` forms of degree `d` (or the nonzero ones), lexicographic.
pub fn enumerate_sections(
    f: &FieldCtx,
    degree: usize,
    nonzero_only: bool,
    budget: u128,
) -> Result<Sections<'_>, P1Error> {
    let total = section_count(f, degree);
    if total > budget || total > u64::MAX as u128 {
        return Err(P1Error::BudgetExceeded { needed: total, budget });
    }
    Ok(Sections {
        field: f,
        degree,
        next: if nonzero_only { 1 } else { 0 },
        end: total as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(q_p: u32, e: u32) -> FieldCtx {
        FieldCtx::new(q_p, e).unwrap()
    }

    #[test]
    fn divisor_examples() {
        let f2 = f(2, 1);
        // s*t in degree 2: c_1 = 1.
        let st = BinaryForm::new(2, vec![0, 1, 0]);
        let d = divisor_of(&f2, &st).unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.multiplicity(&ClosedPoint::Infinity), 1);
        assert_eq!(d.multiplicity(&ClosedPoint::Finite(vec![0, 1])), 1);

        let q = BinaryForm::new(2, vec![1, 1, 1]);
        let d = divisor_of(&f2, &q).unwrap();
        assert_eq!(d.entries().collect::<Vec<_>>(), vec![(&ClosedPoint::Finite(vec![1, 1, 1]), 1)]);

        let f3 = f(3, 1);
        let t = BinaryForm::new(1, vec![1, 0]);
        let d = divisor_of(&f3, &t).unwrap();
        assert_eq!(d, DivisorP1::point(ClosedPoint::Infinity));
        let s = BinaryForm::new(1, vec![0, 1]);
        assert_eq!(divisor_of(&f3, &s).unwrap(), DivisorP1::point(ClosedPoint::Finite(vec![0, 1])));

        assert_eq!(divisor_of(&f3, &BinaryForm::zero(2)), Err(P1Error::ZeroForm));
    }

    #[test]
    fn lattice_examples() {
        let zero = ClosedPoint::Finite(vec![0, 1]);
        let one = ClosedPoint::Finite(vec![1, 1]);
        let d = DivisorP1::from_entries([(zero.clone(), 2), (ClosedPoint::Infinity, 1)]);
        let e = DivisorP1::from_entries([(zero.clone(), 1), (one.clone(), 1)]);
        assert_eq!(d.gcd(&e), DivisorP1::point(zero.clone()));
        let two_zero = DivisorP1::point_with(zero.clone(), 2);
        assert_eq!(two_zero.lcm(&e), DivisorP1::from_entries([(zero.clone(), 2), (one, 1)]));
        assert!(DivisorP1::point(zero.clone()).leq(&d));
        assert!(!e.leq(&d));
    }

    #[test]
    fn mobius_examples() {
        let zero = ClosedPoint::Finite(vec![0, 1]);
        assert_eq!(DivisorP1::zero().mobius(), 1);
        assert_eq!(DivisorP1::from_entries([(zero.clone(), 1), (ClosedPoint::Infinity, 1)]).mobius(), 1);
        assert_eq!(DivisorP1::point_with(zero.clone(), 2).mobius(), 0);
        assert_eq!(DivisorP1::point(zero).mobius(), -1);
    }

    #[test]
    fn census_small() {
        assert_eq!(points_by_degree(2, 1), 3);
        assert_eq!(points_by_degree(2, 2), 1);
        assert_eq!(points_by_degree(2, 3), 2);
        // Exhaustive scan agrees.
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let fld = f(p, e);
            for n in 2..=4usize {
                if (fld.size() as u64).pow(n as u32) > 5000 {
                    continue;
                }
                assert_eq!(
                    irreducibles(&fld, n).len() as u128,
                    points_by_degree(fld.size() as u64, n as u32)
                );
            }
        }
    }

    #[test]
    fn finite_point_degrees_sum_to_qn() {
        // Every element of F_{q^n} has a minimal polynomial of degree m | n.
        for q in [2u64, 3, 4] {
            for n in 1..=6u32 {
                let mut total: u128 = 0;
                for m in 1..=n {
                    if n % m == 0 {
                        let finite = if m == 1 { q as u128 } else { points_by_degree(q, m) };
                        total += m as u128 * finite;
                    }
                }
                assert_eq!(total, (q as u128).pow(n));
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        let f2 = f(2, 1);
        assert_eq!(enumerate_sections(&f2, 1, false, 1 << 20).unwrap().count(), 4);
        assert_eq!(enumerate_sections(&f2, 1, true, 1 << 20).unwrap().count(), 3);
        assert_eq!(enumerate_sections(&f2, 3, true, 1 << 20).unwrap().count(), 15);
        let f3 = f(3, 1);
        let consts: Vec<_> = enumerate_sections(&f3, 0, false, 10).unwrap().collect();
        assert_eq!(consts.len(), 3);
        let forms: Vec<Vec<u32>> = enumerate_sections(&f3, 2, false, 100)
            .unwrap()
            .map(|s| s.coeffs().to_vec())
            .collect();
        let mut sorted = forms.clone();
        sorted.sort();
        assert_eq!(forms, sorted);
        assert!(matches!(
            enumerate_sections(&f2, 10, false, 100),
            Err(P1Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn effective_divisors_by_degree() {
        // Nonzero forms of degree d modulo scalars are the effective
        // divisors of degree d: (q^(d+1) - 1) / (q - 1) of them.
        for (p, e) in [(2, 1), (3, 1), (2, 2)] {
            let fld = f(p, e);
            let q = fld.size() as u128;
            for d in 0..=4usize {
                if q.pow(d as u32 + 1) > 2000 {
                    continue;
                }
                let mut divisors = std::collections::BTreeSet::new();
                for s in enumerate_sections(&fld, d, true, 1 << 20).unwrap() {
                    let div = divisor_of(&fld, &s).unwrap();
                    assert_eq!(div.degree(), d);
                    divisors.insert(div);
                }
                assert_eq!(divisors.len() as u128, (q.pow(d as u32 + 1) - 1) / (q - 1));
            }
        }
    }

    fn random_divisor(rng: &mut ChaCha8Rng, pts: &[ClosedPoint], max_deg: usize) -> DivisorP1 {
        let mut d = DivisorP1::zero();
        for _ in 0..rng.gen_range(0..4) {
            let p = pts[rng.gen_range(0..pts.len())].clone();
            let cand = d.sum(&DivisorP1::point_with(p, rng.gen_range(1..3)));
            if cand.degree() <= max_deg {
                d = cand;
            }
        }
        d
    }

    #[test]
    fn gcd_plus_lcm_is_sum() {
        let fld = f(3, 1);
        let pts = closed_points_up_to(&fld, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_divisor(&mut rng, &pts, 8);
            let b = random_divisor(&mut rng, &pts, 8);
            assert_eq!(a.gcd(&b).sum(&a.lcm(&b)), a.sum(&b));
            assert!(a.gcd(&b).leq(&a) && a.leq(&a.lcm(&b)));
        }
    }

    #[test]
    fn mobius_inverts_the_divisor_order() {
        let fld = f(2, 1);
        let pts = closed_points_up_to(&fld, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let d = random_divisor(&mut rng, &pts, 6);
            let s: i32 = d.subdivisors().iter().map(|e| e.mobius()).sum();
            assert_eq!(s, if d.is_zero() { 1 } else { 0 });
        }
    }

    #[test]
    fn divisor_of_is_multiplicative() {
        let fld = f(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let da = rng.gen_range(0..4);
            let db = rng.gen_range(0..4);
            let a = BinaryForm::from_index(&fld, da, rng.gen_range(1..3u64.pow(da as u32 + 1)));
            let b = BinaryForm::from_index(&fld, db, rng.gen_range(1..3u64.pow(db as u32 + 1)));
            let prod = a.mul(&fld, &b);
            assert_eq!(
                divisor_of(&fld, &prod).unwrap(),
                divisor_of(&fld, &a).unwrap().sum(&divisor_of(&fld, &b).unwrap())
            );
            assert_eq!(prod.exact_div(&fld, &b), Some(a.clone()));
            let coprime = divisor_of(&fld, &a).unwrap().disjoint(&divisor_of(&fld, &b).unwrap());
            assert_eq!(a.coprime(&fld, &b), coprime);
        }
    }

    #[test]
    fn divisor_form_roundtrip() {
        let fld = f(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = rng.gen_range(0..5);
            let a = BinaryForm::from_index(&fld, d, rng.gen_range(1..4u64.pow(d as u32 + 1)));
            let div = divisor_of(&fld, &a).unwrap();
            let back = div.form(&fld);
            assert_eq!(back.degree(), d);
            assert_eq!(divisor_of(&fld, &back).unwrap(), div);
        }
    }
}
