//! Dense univariate polynomials over `F_q`, coefficients low to high.
//!
//! These are free functions over slices so the enumeration loops can work on
//! reused buffers. A polynomial is *normalized* when it has no trailing zero
//! coefficients; the zero polynomial is the empty slice.

use crate::gf::FieldCtx;

pub fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn trimmed(a: &[u32]) -> &[u32] {
    let n = a.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    &a[..n]
}

/// Degree of a polynomial, `None` for zero.
pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(f: &FieldCtx, a: &[u32], c: u32) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Full product, written into `out` (resized to `a.len() + b.len() - 1`,
/// no trimming).
pub fn mul_into(f: &FieldCtx, a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    if a.is_empty() || b.is_empty() {
        return;
    }
    out.resize(a.len() + b.len() - 1, 0);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
}

pub fn mul(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    mul_into(f, trimmed(a), trimmed(b), &mut out);
    trim(&mut out);
    out
}

/// Reduce `a` modulo the nonzero normalized `b` in place; on return `a`
/// holds the normalized remainder.
pub fn rem_in_place(f: &FieldCtx, a: &mut Vec<u32>, b: &[u32]) {
    trim(a);
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).expect("divisor is normalized");
    while a.len() > db {
        let k = a.len() - 1;
        let c = f.mul(a[k], lead_inv);
        if c != 0 {
            for j in 0..=db {
                a[k - db + j] = f.sub(a[k - db + j], f.mul(c, b[j]));
            }
        }
        a.pop();
        trim(a);
    }
}

/// Quotient and remainder of `a` by the nonzero `b`.
pub fn divrem(f: &FieldCtx, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = trimmed(b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trimmed(a).to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut quo = vec![0u32; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = f.mul(r[k], lead_inv);
        quo[k - db] = c;
        for j in 0..=db {
            r[k - db + j] = f.sub(r[k - db + j], f.mul(c, b[j]));
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

pub fn make_monic(f: &FieldCtx, a: &[u32]) -> Vec<u32> {
    let a = trimmed(a);
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(f, a, f.inv(lead).expect("nonzero")),
    }
}

/// Monic gcd.
pub fn gcd(f: &FieldCtx, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = trimmed(a).to_vec();
    let mut y = trimmed(b).to_vec();
    while !y.is_empty() {
        rem_in_place(f, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    make_monic(f, &x)
}

/// Whether the gcd of `a` and `b` is a nonzero constant, using the two
/// scratch buffers instead of allocating. Both inputs must be nonzero.
pub fn coprime_with(f: &FieldCtx, a: &[u32], b: &[u32], x: &mut Vec<u32>, y: &mut Vec<u32>) -> bool {
    x.clear();
    x.extend_from_slice(trimmed(a));
    y.clear();
    y.extend_from_slice(trimmed(b));
    if x.len() <= 1 || y.len() <= 1 {
        return !x.is_empty() && !y.is_empty();
    }
    while !y.is_empty() {
        rem_in_place(f, x, y);
        std::mem::swap(x, y);
    }
    x.len() == 1
}

pub fn eval(f: &FieldCtx, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// The monic polynomial of degree `deg` whose lower coefficients are the
/// base-`q` digits of `index` (constant term least significant).
pub fn monic_from_index(f: &FieldCtx, deg: usize, index: u64) -> Vec<u32> {
    let q = f.size() as u64;
    let mut out = vec![0u32; deg + 1];
    let mut r = index;
    for c in out.iter_mut().take(deg) {
        *c = (r % q) as u32;
        r /= q;
    }
    out[deg] = 1;
    out
}
