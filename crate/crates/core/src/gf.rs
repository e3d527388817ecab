//! Small finite fields `F_q`, `q = p^e <= 2^16`.
//!
//! Elements are plain `u32` values in `0..q`. An element encodes the
//! coefficient vector of its representative polynomial in base `p`, constant
//! coefficient in the lowest digit. All arithmetic goes through an explicit
//! [`FieldCtx`].

use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {p}^{e} exceeds 2^16")]
    TooLarge { p: u32, e: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AddKind {
    /// Prime field: addition modulo `p`.
    Prime,
    /// Characteristic two: addition is xor.
    Xor,
    /// Odd characteristic extension with a precomputed `q x q` table.
    Table,
    /// Odd characteristic extension, digit-wise.
    Digits,
}

/// Immutable arithmetic context for `F_q`.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add_kind: AddKind,
    add_table: Vec<u16>,
    neg_table: Vec<u32>,
    /// `exp[i] = g^i` for a fixed generator `g`, doubled in length so that
    /// `exp[log a + log b]` needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over `F_p` (coefficient vectors, low to high)
/// and reduce modulo the monic `modulus`.
fn mulmod_fp(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for j in 0..e {
            let sub = c * modulus[j] as u64 % p as u64;
            prod[k - e + j] = (prod[k - e + j] + p as u64 - sub) % p as u64;
        }
    }
    prod.truncate(e);
    prod.resize(e, 0);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Whether the monic polynomial `f` (low to high) of degree `n` is
/// irreducible over `F_p`, by trial division with every monic polynomial of
/// degree at most `n / 2`.
fn irreducible_over_fp(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    for deg in 1..=n / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = vec![0u32; deg + 1];
            let mut r = idx;
            for c in g.iter_mut().take(deg) {
                *c = (r % p as u64) as u32;
                r /= p as u64;
            }
            g[deg] = 1;
            if rem_fp(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn rem_fp(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    if r.len() <= dg {
        return f.to_vec();
    }
    for k in (dg..r.len()).rev() {
        let c = r[k] % p as u64;
        if c == 0 {
            continue;
        }
        for j in 0..=dg {
            let sub = c * g[j] as u64 % p as u64;
            r[k - dg + j] = (r[k - dg + j] + p as u64 - sub) % p as u64;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

impl FieldCtx {
    /// The field with `q` elements.
    pub fn from_size(q: u32) -> Result<Self, GfError> {
        let p = (2..=q).find(|d| q % d == 0).ok_or(GfError::NotPrimePower(q))?;
        let (mut rest, mut e) = (q, 0);
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(GfError::NotPrimePower(q));
        }
        Self::new(p, e)
    }

    pub fn new(p: u32, e: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if e == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE);
        let q = q.ok_or(GfError::TooLarge { p, e })? as u32;

        let modulus = Self::smallest_irreducible(p, e);
        let add_kind = if e == 1 {
            AddKind::Prime
        } else if p == 2 {
            AddKind::Xor
        } else if q <= 256 {
            AddKind::Table
        } else {
            AddKind::Digits
        };

        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            add_kind,
            add_table: Vec::new(),
            neg_table: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        if add_kind == AddKind::Table {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = ctx.add_digits(a, b) as u16;
                }
            }
            ctx.add_table = table;
        }
        ctx.neg_table = (0..q).map(|a| ctx.neg_digits(a)).collect();
        ctx.build_log_tables();
        Ok(ctx)
    }

    /// Lexicographically smallest monic irreducible of degree `e` over
    /// `F_p`, comparing coefficients from the constant term upwards.
    fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
        let e = e as usize;
        let count = (p as u64).pow(e as u32);
        for idx in 0..count {
            // Digit i of idx is coefficient i, so idx order with the
            // constant term as the most significant key needs reversal.
            let mut f = vec![0u32; e + 1];
            let mut r = idx;
            for i in (0..e).rev() {
                f[i] = (r % p as u64) as u32;
                r /= p as u64;
            }
            f[e] = 1;
            if irreducible_over_fp(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn to_digits(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut r = a;
        for _ in 0..self.e {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let prod = mulmod_fp(&self.to_digits(a), &self.to_digits(b), &self.modulus, self.p);
        self.from_digits(&prod)
    }

    fn build_log_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        for g in 1..q {
            // Walk powers of g until we return to 1; g generates iff the
            // walk has length q - 1.
            let mut x = 1u32;
            let mut len = 0u32;
            loop {
                exp[len as usize] = x;
                x = self.mul_slow(x, g);
                len += 1;
                if x == 1 || len > order {
                    break;
                }
            }
            if len == order {
                self.generator = g;
                break;
            }
        }
        for i in 0..order {
            log[exp[i as usize] as usize] = i;
            exp[(i + order) as usize] = exp[i as usize];
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Coefficients (low to high, monic) of the defining polynomial over `F_p`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Embedding of the prime field: the integer `n` reduced mod `p`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.add_kind {
            AddKind::Prime => {
                let s = a + b;
                if s >= self.p {
                    s - self.p
                } else {
                    s
                }
            }
            AddKind::Xor => a ^ b,
            AddKind::Table => self.add_table[(a * self.q + b) as usize] as u32,
            AddKind::Digits => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`; negative exponents require `a != 0`. The exponent is reduced
    /// modulo `q - 1` for nonzero bases.
    pub fn pow(&self, a: u32, k: i64) -> Result<u32, GfError> {
        if a == 0 {
            return match k {
                0 => Ok(1),
                k if k > 0 => Ok(0),
                _ => Err(GfError::DivisionByZero),
            };
        }
        let order = (self.q - 1) as i64;
        let r = (self.log[a as usize] as i64 * k.rem_euclid(order)) % order;
        Ok(self.exp[r as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Ok(n / num_integer::gcd(n, l))
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as i64).expect("nonnegative exponent")
    }
}
