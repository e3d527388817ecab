//! Certified evaluation of the leading constant
//! `c = (h q^-g / (1 - 1/q))^5 prod_v F(q_v^-1)`, `F(x) = (1-x)^5 (1+5x+x^2)`,
//! for a curve given by its Weil numerator.
//!
//! Two independent routes: a direct truncated Euler product over closed
//! points, and a zeta-accelerated product over Witt exponents of `F`.
//! Both work in log space with dyadic interval arithmetic.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::motivic::{witt_exponents, LOCAL_FACTOR};

/// Direct products never use more than this many degrees.
pub const MAX_DIRECT_DEGREE: usize = 64;
/// Point counts are checked for positivity up to this degree.
const POSITIVITY_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstantsError {
    #[error("invalid Weil data: {0}")]
    BadWeil(String),
    #[error("Weil data gives a negative closed-point count in degree {n}")]
    NegativePointCount { n: usize },
    #[error("target radius unreachable within {cap} Euler factors")]
    TargetUnreachable { cap: usize },
    #[error("zeta acceleration diverges for q = {q} (needs q >= 5)")]
    Diverges { q: u64 },
    #[error("target radius must be positive and finite")]
    InvalidTarget,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(p: u64) -> BigInt {
    BigInt::one() << p
}

fn floor_scaled(r: &BigRational, p: u64) -> BigInt {
    (r.numer() << p).div_floor(r.denom())
}

fn ceil_scaled(r: &BigRational, p: u64) -> BigInt {
    -((-r.numer() << p).div_floor(r.denom()))
}

fn dyadic(v: BigInt, p: u64) -> BigRational {
    BigRational::new(v, pow2(p))
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: BigRational,
    hi: BigRational,
}

impl CertifiedReal {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        CertifiedReal { lo, hi }
    }

    pub fn exact(r: BigRational) -> Self {
        CertifiedReal { lo: r.clone(), hi: r }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / rat(2)
    }

    pub fn rad(&self) -> BigRational {
        (&self.hi - &self.lo) / rat(2)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }

    /// Rounded up, so it never understates the width.
    pub fn rad_f64(&self) -> f64 {
        let r = self.rad().to_f64().unwrap_or(f64::INFINITY);
        r * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }

    pub fn add(&self, o: &CertifiedReal) -> CertifiedReal {
        CertifiedReal { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &CertifiedReal) -> CertifiedReal {
        CertifiedReal { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn scale(&self, k: &BigInt) -> CertifiedReal {
        let k = rat(k.clone());
        if k.is_negative() {
            CertifiedReal { lo: &self.hi * &k, hi: &self.lo * &k }
        } else {
            CertifiedReal { lo: &self.lo * &k, hi: &self.hi * &k }
        }
    }

    pub fn widen(&self, r: &BigRational) -> CertifiedReal {
        CertifiedReal { lo: &self.lo - r, hi: &self.hi + r }
    }

    /// Outward rounding of both endpoints to multiples of `2^-p`.
    pub fn round_out(&self, p: u64) -> CertifiedReal {
        CertifiedReal {
            lo: dyadic(floor_scaled(&self.lo, p), p),
            hi: dyadic(ceil_scaled(&self.hi, p), p),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn overlaps(&self, o: &CertifiedReal) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_within(&self, o: &CertifiedReal) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }
}

/// Decimal expansion of `r` truncated toward zero after `digits` places.
pub fn to_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let v = (a.numer() * &scale) / a.denom();
    let (int, frac) = v.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    s
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", to_decimal(&self.mid(), 16), self.rad_f64())
    }
}

/// Fixed-point `atanh(z / 2^p)` for `|z| <= 2^p / 3`, returning a value and
/// an error bound, both in units of `2^-p`.
fn atanh_fixed(z: &BigInt, p: u64) -> (BigInt, BigInt) {
    let z2 = (z * z) >> p;
    let mut t = z.clone();
    let mut sum = z.clone();
    let mut terms = 0u64;
    let mut j = 1u64;
    loop {
        t = (&t * &z2) >> p;
        if t.is_zero() || t == BigInt::from(-1) {
            break;
        }
        sum += &t / BigInt::from(2 * j + 1);
        terms += 1;
        j += 1;
    }
    // Each power carries at most 3 ulps of error, each quotient adds 1,
    // and the truncated tail is below 4 ulps.
    (sum, BigInt::from(4 * terms + 12))
}

fn ln2_fixed(p: u64) -> (BigInt, BigInt) {
    let third_lo = pow2(p) / BigInt::from(3);
    let (a, ea) = atanh_fixed(&third_lo, p);
    let (b, eb) = atanh_fixed(&(&third_lo + 1), p);
    ((a - ea) * 2, (b + eb) * 2)
}

/// Certified natural logarithm of a positive rational, with absolute
/// error about `2^-p`.
pub fn ln_rational(y: &BigRational, p: u64) -> CertifiedReal {
    assert!(y.is_positive(), "logarithm of a non-positive number");
    if y.is_one() {
        return CertifiedReal::exact(BigRational::zero());
    }
    let k = y.numer().bits() as i64 - y.denom().bits() as i64;
    let work = p + 16 + 64;
    let (n, d) = if k >= 0 {
        (y.numer().clone(), y.denom() << k as u64)
    } else {
        (y.numer() << (-k) as u64, y.denom().clone())
    };
    let z = BigRational::new(&n - &d, &n + &d);
    let zlo = floor_scaled(&z, work);
    let zhi = ceil_scaled(&z, work);
    let (a, ea) = atanh_fixed(&zlo, work);
    let (b, eb) = atanh_fixed(&zhi, work);
    let mut lo = (a - ea) * 2;
    let mut hi = (b + eb) * 2;
    if k != 0 {
        let (l2lo, l2hi) = ln2_fixed(work);
        let kk = BigInt::from(k);
        if k > 0 {
            lo += &kk * l2lo;
            hi += &kk * l2hi;
        } else {
            lo += &kk * l2hi;
            hi += &kk * l2lo;
        }
    }
    CertifiedReal::new(dyadic(lo, work), dyadic(hi, work)).round_out(p + 8)
}

/// Fixed-point `exp(x / 2^p)`; returns value and error bound in units of
/// `2^-q` together with `q`.
fn exp_fixed(x: &BigInt, p: u64) -> (BigInt, BigInt, u64) {
    let mag = x.bits() as i64 - p as i64;
    let s = (mag + 3).max(0) as u64;
    let q = p + s + 24;
    let r = x << (q - p - s);
    let one = pow2(q);
    let mut t = one.clone();
    let mut sum = one;
    let mut terms = 0u64;
    let mut n = 1u64;
    loop {
        t = ((&t * &r) >> q) / BigInt::from(n);
        if t.is_zero() || t == BigInt::from(-1) {
            break;
        }
        sum += &t;
        terms += 1;
        n += 1;
    }
    let mut v = sum;
    let mut e = BigInt::from(2 * terms + 8);
    for _ in 0..s {
        let e_new = ((BigInt::from(2) * v.abs() * &e + &e * &e) >> q) + 2;
        v = (&v * &v) >> q;
        e = e_new;
    }
    (v, e, q)
}

/// Certified `exp` of an interval.
pub fn exp_interval(x: &CertifiedReal, p: u64) -> CertifiedReal {
    let (a, ea, qa) = exp_fixed(&floor_scaled(&x.lo, p), p);
    let (b, eb, qb) = exp_fixed(&ceil_scaled(&x.hi, p), p);
    let lo = dyadic(a - ea, qa).max(BigRational::zero());
    CertifiedReal::new(lo, dyadic(b + eb, qb)).round_out(p + 8)
}

/// `F(x) = (1-x)^5 (1+5x+x^2)`.
pub fn local_factor(x: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one - x).pow(5) * (&one + x * rat(5) + x * x)
}

/// A smooth projective curve over `F_q`, known through its zeta numerator
/// `P(T) = 1 + p_1 T + ... + p_2g T^2g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveZeta {
    pub q: u64,
    pub g: usize,
    pub weil: Vec<i64>,
}

impl CurveZeta {
    pub fn p1(q: u64) -> CurveZeta {
        CurveZeta { q, g: 0, weil: vec![1] }
    }

    pub fn from_weil(q: u64, g: usize, weil: Vec<i64>) -> Result<CurveZeta, ConstantsError> {
        if q < 2 {
            return Err(ConstantsError::BadWeil(format!("q = {q} is not a field size")));
        }
        if weil.len() != 2 * g + 1 {
            return Err(ConstantsError::BadWeil(format!(
                "expected {} coefficients for genus {g}, got {}",
                2 * g + 1,
                weil.len()
            )));
        }
        if weil[0] != 1 {
            return Err(ConstantsError::BadWeil("P(0) must be 1".into()));
        }
        if weil[2 * g] == 0 {
            return Err(ConstantsError::BadWeil("P must have degree exactly 2g".into()));
        }
        let c = CurveZeta { q, g, weil };
        if !c.class_number().is_positive() {
            return Err(ConstantsError::BadWeil("P(1) must be positive".into()));
        }
        let a = c.closed_points(POSITIVITY_DEPTH);
        if let Some(n) = (1..a.len()).find(|&n| a[n].is_negative()) {
            return Err(ConstantsError::NegativePointCount { n });
        }
        Ok(c)
    }

    /// `h = P(1)`.
    pub fn class_number(&self) -> BigInt {
        self.weil.iter().map(|&c| BigInt::from(c)).sum()
    }

    /// Cauchy bound on the inverse roots of `P`.
    pub fn root_bound(&self) -> BigInt {
        BigInt::from(1 + self.weil.iter().skip(1).map(|c| c.unsigned_abs()).max().unwrap_or(0))
    }

    /// `N_1..N_m` (index 0 unused).
    pub fn point_counts(&self, m: usize) -> Vec<BigInt> {
        let p = |j: usize| BigInt::from(self.weil.get(j).copied().unwrap_or(0));
        let mut s = vec![BigInt::zero(); m + 1];
        let mut n = vec![BigInt::zero(); m + 1];
        let q = BigInt::from(self.q);
        for k in 1..=m {
            let mut acc = -BigInt::from(k) * p(k);
            for j in 1..k.min(self.weil.len()) {
                acc -= p(j) * &s[k - j];
            }
            s[k] = acc;
            n[k] = q.pow(k as u32) + 1 - &s[k];
        }
        n
    }

    /// Closed points of each degree `1..=m` (index 0 unused).
    pub fn closed_points(&self, m: usize) -> Vec<BigInt> {
        let n = self.point_counts(m);
        let mut a = vec![BigInt::zero(); m + 1];
        for k in 1..=m {
            let mut acc = BigInt::zero();
            for d in (1..=k).filter(|d| k % d == 0) {
                match mobius(k / d) {
                    1 => acc += &n[d],
                    -1 => acc -= &n[d],
                    _ => {}
                }
            }
            a[k] = acc / BigInt::from(k);
        }
        a
    }

    /// `P(T)` at a rational point.
    pub fn weil_at(&self, t: &BigRational) -> BigRational {
        self.weil.iter().rev().fold(BigRational::zero(), |acc, &c| acc * t + rat(c))
    }

    /// `h q^-g / (1 - 1/q)`.
    pub fn prefactor(&self) -> BigRational {
        let q = rat(self.q);
        rat(self.class_number()) / q.pow(self.g as i32) / (BigRational::one() - q.recip())
    }

    /// `1 / Z(q^-k) = (1 - q^-k)(1 - q^{1-k}) / P(q^-k)`, which equals
    /// `prod_v (1 - q_v^-k)`.
    pub fn inverse_zeta_at(&self, k: u32) -> BigRational {
        let t = rat(self.q).pow(-(k as i32));
        let one = BigRational::one();
        (&one - &t) * (&one - &t * rat(self.q)) / self.weil_at(&t)
    }
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut k, mut p) = (n, 0, 2);
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

/// Upper bound for the growth rate of the Witt exponents of `F`.
fn beta() -> BigRational {
    BigRational::new(599.into(), 125.into())
}

/// `G(x)` with `|log F(x)| <= x^2 G(x)` for `0 <= x <= 1/5`.
pub fn log_factor_bound(x: &BigRational) -> BigRational {
    assert!(x <= &BigRational::new(1.into(), 5.into()), "bound only valid for x <= 1/5");
    let one = BigRational::one();
    let b = beta();
    rat(14) + rat(2) * x / (&one - x) + b.pow(3) * x / (rat(3) * (&one - &b * x))
}

/// Bound on `sum_{n > N} a_n |log F(q^-n)|`.
fn direct_tail(curve: &CurveZeta, n: usize) -> Option<BigRational> {
    let q = rat(curve.q);
    let one = BigRational::one();
    let x = q.pow(-(n as i32 + 1));
    if x > BigRational::new(1.into(), 5.into()) {
        return None;
    }
    let r = rat(curve.root_bound());
    let q2 = &q * &q;
    if curve.g > 0 && r >= q2 {
        return None;
    }
    let e = n as i32 + 1;
    let geo = |ratio: BigRational| ratio.pow(e) / (&one - &ratio);
    let mut s = geo(q.recip()) + geo(q2.recip());
    if curve.g > 0 {
        s += rat(2 * curve.g as i64) * geo(&r / &q2);
    }
    Some(log_factor_bound(&x) * s / rat(n as i64 + 1))
}

fn target_bits(target: f64) -> Result<u64, ConstantsError> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(ConstantsError::InvalidTarget);
    }
    Ok((-target.log2()).ceil().max(1.0) as u64)
}

fn ceil_log2(r: &BigRational) -> u64 {
    let v = r.numer().bits() as i64 - r.denom().bits() as i64 + 1;
    v.max(0) as u64
}

/// Direct truncated Euler product with a certified tail.
pub fn leading_constant_direct(curve: &CurveZeta, target: f64) -> Result<CertifiedReal, ConstantsError> {
    let tb = target_bits(target)?;
    let pre5 = curve.prefactor().pow(5);
    let scale_bits = ceil_log2(&pre5);
    // c <= pre^5, so a log error eps costs at most about 2 pre^5 eps.
    let budget = BigRational::new(BigInt::one(), pow2(tb + scale_bits + 3));
    let n_max = (1..=MAX_DIRECT_DEGREE)
        .find(|&n| direct_tail(curve, n).is_some_and(|b| b <= budget))
        .ok_or(ConstantsError::TargetUnreachable { cap: MAX_DIRECT_DEGREE })?;
    let tail = direct_tail(curve, n_max).expect("checked above");
    let p = tb + scale_bits + 16;
    let a = curve.closed_points(n_max);
    let q = rat(curve.q);
    let mut log = ln_rational(&curve.prefactor(), p).scale(&BigInt::from(5));
    for (n, an) in a.iter().enumerate().skip(1) {
        if an.is_zero() {
            continue;
        }
        let y = local_factor(&q.pow(-(n as i32)));
        log = log.add(&ln_rational(&y, p + an.bits()).scale(an)).round_out(p + 8);
    }
    let c = exp_interval(&log.widen(&tail), p + 4);
    if c.rad_f64() > target {
        return Err(ConstantsError::TargetUnreachable { cap: MAX_DIRECT_DEGREE });
    }
    Ok(c)
}

/// Bound on `sum_{k > K} |e_k log Z(q^-k)|`, using `|e_k| <= 2 beta^k / k`.
fn zeta_tail(curve: &CurveZeta, k: usize) -> Option<BigRational> {
    let q = rat(curve.q);
    let one = BigRational::one();
    let b = beta();
    if k < 3 || b >= q {
        return None;
    }
    let t0 = q.pow(-(k as i32 + 1));
    let r = rat(curve.root_bound());
    if &r * &t0 >= one {
        return None;
    }
    let mut d = &q / (&one - &q * &t0) + &one / (&one - &t0);
    if curve.g > 0 {
        d += rat(2 * curve.g as i64) * &r / (&one - &r * &t0);
    }
    let ratio = &b / &q;
    Some(rat(2) * d / rat(k as i64 + 1) * ratio.pow(k as i32 + 1) / (&one - &ratio))
}

/// Smallest truncation whose zeta tail fits the target radius.
pub fn zeta_truncation_for(curve: &CurveZeta, target: f64) -> Result<usize, ConstantsError> {
    if curve.q <= 4 {
        return Err(ConstantsError::Diverges { q: curve.q });
    }
    let tb = target_bits(target)?;
    let scale_bits = ceil_log2(&curve.prefactor().pow(5));
    let budget = BigRational::new(BigInt::one(), pow2(tb + scale_bits + 3));
    // The tail decays geometrically, so a doubling search then bisection.
    let ok = |k: usize| zeta_tail(curve, k).is_some_and(|t| t <= budget);
    let mut hi = 4;
    while !ok(hi) {
        hi *= 2;
        if hi > 1 << 20 {
            return Err(ConstantsError::TargetUnreachable { cap: hi });
        }
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Zeta-accelerated product `pre^5 prod_{2<=k<=K} Z(q^-k)^{-e_k}` with a
/// certified tail.
pub fn leading_constant_zeta(curve: &CurveZeta, k_max: usize) -> Result<CertifiedReal, ConstantsError> {
    if curve.q <= 4 {
        return Err(ConstantsError::Diverges { q: curve.q });
    }
    let tail = zeta_tail(curve, k_max).ok_or(ConstantsError::TargetUnreachable { cap: k_max })?;
    let tail_bits = tail.denom().bits().saturating_sub(tail.numer().bits());
    let scale_bits = ceil_log2(&curve.prefactor().pow(5));
    let p = tail_bits + scale_bits + 24;
    let e = witt_exponents(&LOCAL_FACTOR, k_max).expect("integral exponents");
    let mut log = ln_rational(&curve.prefactor(), p).scale(&BigInt::from(5));
    for (k, ek) in e.iter().enumerate().skip(2) {
        if ek.is_zero() {
            continue;
        }
        let y = curve.inverse_zeta_at(k as u32);
        log = log.add(&ln_rational(&y, p + ek.bits()).scale(ek)).round_out(p + 8);
    }
    Ok(exp_interval(&log.widen(&tail), p + 4))
}

/// Zeta route with the truncation chosen for `target`.
pub fn leading_constant_zeta_to(curve: &CurveZeta, target: f64) -> Result<CertifiedReal, ConstantsError> {
    let k = zeta_truncation_for(curve, target)?;
    leading_constant_zeta(curve, k)
}

/// Certified `prod_v (1 - q_v^-k)` as a truncated product over closed
/// points, independent of the closed-form zeta value.
pub fn euler_product_numeric(curve: &CurveZeta, k: u32, target: f64) -> Result<CertifiedReal, ConstantsError> {
    assert!(k >= 2, "the product diverges for k = 1");
    let tb = target_bits(target)?;
    let q = rat(curve.q);
    let one = BigRational::one();
    let r = rat(curve.root_bound());
    let qk = q.pow(k as i32);
    if curve.g > 0 && r >= qk {
        return Err(ConstantsError::TargetUnreachable { cap: MAX_DIRECT_DEGREE });
    }
    let budget = BigRational::new(BigInt::one(), pow2(tb + 3));
    let tail = |n: usize| {
        let e = n as i32 + 1;
        let geo = |ratio: BigRational| ratio.pow(e) / (&one - &ratio);
        let mut s = geo(&q / &qk) + geo(qk.recip());
        if curve.g > 0 {
            s += rat(2 * curve.g as i64) * geo(&r / &qk);
        }
        // |log(1 - x)| <= 2x for x <= 1/2.
        rat(2) * s / rat(n as i64 + 1)
    };
    let n_max = (1..=MAX_DIRECT_DEGREE)
        .find(|&n| tail(n) <= budget)
        .ok_or(ConstantsError::TargetUnreachable { cap: MAX_DIRECT_DEGREE })?;
    let p = tb + 16;
    let a = curve.closed_points(n_max);
    let mut log = CertifiedReal::exact(BigRational::zero());
    for (n, an) in a.iter().enumerate().skip(1) {
        if an.is_zero() {
            continue;
        }
        let y = &one - qk.pow(-(n as i32));
        log = log.add(&ln_rational(&y, p + an.bits()).scale(an)).round_out(p + 8);
    }
    Ok(exp_interval(&log.widen(&tail(n_max)), p + 4))
}

/// Sign helper for serialization.
pub fn sign_of(r: &BigRational) -> Sign {
    r.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ln_and_exp_are_certified() {
        for (y, expect) in [(r(2, 1), 2f64.ln()), (r(1, 3), (1.0f64 / 3.0).ln()), (r(1001, 1000), 1.001f64.ln()), (r(7, 1), 7f64.ln())] {
            let l = ln_rational(&y, 80);
            assert!(l.rad_f64() < 1e-20);
            assert!((l.mid_f64() - expect).abs() < 1e-15);
            let back = exp_interval(&l, 80);
            assert!(back.contains(&y), "{y}: {back}");
        }
        let e = exp_interval(&CertifiedReal::exact(rat(-40)), 90);
        assert!((e.mid_f64() / (-40f64).exp() - 1.0).abs() < 1e-8);
        assert!(e.rad_f64() < 1e-25);
    }

    #[test]
    fn ln_is_additive() {
        let a = ln_rational(&r(3, 7), 100);
        let b = ln_rational(&r(11, 5), 100);
        let ab = ln_rational(&r(33, 35), 100);
        assert!(a.add(&b).overlaps(&ab));
        assert!(a.add(&b).rad_f64() < 1e-28);
    }

    #[test]
    fn local_factor_values() {
        assert_eq!(local_factor(&BigRational::zero()), BigRational::one());
        assert_eq!(local_factor(&BigRational::one()), BigRational::zero());
        let x = r(2, 7);
        let poly: BigRational = LOCAL_FACTOR.iter().enumerate().map(|(i, &c)| rat(c) * x.pow(i as i32)).sum();
        assert_eq!(local_factor(&x), poly);
    }

    #[test]
    fn log_factor_bound_holds() {
        // Coefficient bounding: |log F| <= x^2 G(x) at sample points.
        for d in [5i64, 6, 8, 16, 100, 1000] {
            let x = r(1, d);
            let l = ln_rational(&local_factor(&x), 100);
            let bound = &x * &x * log_factor_bound(&x);
            assert!(l.lo().abs() <= bound && l.hi().abs() <= bound, "x = 1/{d}");
        }
        assert!(log_factor_bound(&r(1, 5)) < rat(200));
    }

    #[test]
    fn curve_tables() {
        let p1 = CurveZeta::from_weil(2, 0, vec![1]).unwrap();
        let a = p1.closed_points(5);
        assert_eq!(&a[1..], &[3, 1, 2, 3, 6].map(BigInt::from));
        assert_eq!(p1.class_number(), BigInt::one());
        let e = CurveZeta::from_weil(2, 1, vec![1, 0, 2]).unwrap();
        assert_eq!(e.point_counts(2)[1..], [BigInt::from(3), BigInt::from(9)]);
        assert_eq!(e.class_number(), BigInt::from(3));
        assert_eq!(e.closed_points(1)[1], BigInt::from(3));
        assert!(matches!(CurveZeta::from_weil(2, 0, vec![2]), Err(ConstantsError::BadWeil(_))));
        assert!(matches!(CurveZeta::from_weil(2, 1, vec![1, 0]), Err(ConstantsError::BadWeil(_))));
        assert!(matches!(
            CurveZeta::from_weil(2, 1, vec![1, -4, 4]),
            Err(ConstantsError::NegativePointCount { n: 1 })
        ));
        assert_eq!(p1.prefactor(), rat(2));
        assert_eq!(p1.prefactor().pow(5), rat(32));
    }

    #[test]
    fn inverse_zeta_matches_point_product() {
        let p1 = CurveZeta::p1(2);
        assert_eq!(p1.inverse_zeta_at(2), r(3, 8));
        let num = euler_product_numeric(&p1, 2, 1e-12).unwrap();
        assert!(num.contains(&r(3, 8)));
        assert!(num.rad_f64() <= 1e-12);
        let e = CurveZeta::from_weil(5, 1, vec![1, 2, 5]).unwrap();
        let num = euler_product_numeric(&e, 3, 1e-12).unwrap();
        assert!(num.contains(&e.inverse_zeta_at(3)));
    }

    #[test]
    fn q2_reference_value() {
        let c = leading_constant_direct(&CurveZeta::p1(2), 1e-12).unwrap();
        assert!(c.rad_f64() <= 1e-12);
        assert!((c.mid_f64() - 0.0151824802092997).abs() < 2e-12, "{c}");
        assert!(c.is_positive());
    }

    #[test]
    fn dual_methods_agree() {
        let mut curves: Vec<CurveZeta> = [5, 7, 8, 9].into_iter().map(CurveZeta::p1).collect();
        curves.push(CurveZeta::from_weil(5, 1, vec![1, 2, 5]).unwrap());
        for c in &curves {
            let d = leading_constant_direct(c, 1e-12).unwrap();
            let z = leading_constant_zeta_to(c, 1e-12).unwrap();
            assert!(d.rad_f64() <= 1e-12 && z.rad_f64() <= 1e-12);
            assert!(d.overlaps(&z), "q = {}: {d} vs {z}", c.q);
        }
    }

    #[test]
    fn refinement_is_monotone() {
        let c = CurveZeta::p1(3);
        let mut prev = leading_constant_direct(&c, 1e-3).unwrap();
        for t in [1e-6, 1e-9, 1e-12, 1e-15] {
            let next = leading_constant_direct(&c, t).unwrap();
            assert!(next.is_within(&prev), "{next} not within {prev}");
            prev = next;
        }
    }

    #[test]
    fn large_q_limit() {
        for q in [101, 1009] {
            let c = leading_constant_direct(&CurveZeta::p1(q), 1e-12).unwrap();
            assert!((c.mid_f64() - 1.0).abs() < 10.0 / q as f64);
        }
    }

    #[test]
    fn error_paths() {
        assert_eq!(leading_constant_zeta(&CurveZeta::p1(4), 50), Err(ConstantsError::Diverges { q: 4 }));
        assert_eq!(
            leading_constant_direct(&CurveZeta::p1(2), 1e-30),
            Err(ConstantsError::TargetUnreachable { cap: MAX_DIRECT_DEGREE })
        );
        assert_eq!(leading_constant_direct(&CurveZeta::p1(2), 0.0), Err(ConstantsError::InvalidTarget));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&r(-1, 8), 4), "-0.1250");
        assert_eq!(to_decimal(&r(22, 7), 3), "3.142");
    }
}
