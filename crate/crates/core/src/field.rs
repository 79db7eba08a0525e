//! Finite fields GF(p^f) in a fixed polynomial basis.
//!
//! An element is stored as an integer in `[0, q)` whose base-`p` digits are the
//! coefficients `c_0 + c_1 x + ... + c_{f-1} x^{f-1}`, `c_0` least significant.
//! The modulus is the lexicographically smallest monic irreducible polynomial of
//! degree `f` (coefficients compared from `c_0` upward), so element encodings are
//! stable across runs.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this bound get full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

#[derive(Clone)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
}

#[derive(Clone)]
pub struct Field {
    p: u32,
    f: u32,
    q: u32,
    modulus: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^f` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p as u32, f))
}

// Dense polynomials over GF(p), low degree first.
fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm], p - 2, p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_pow(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// True iff the monic polynomial `m` (degree `f >= 1`) has no monic factor of
/// degree `1..=f/2` over GF(p).
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let f = m.len() - 1;
    for d in 1..=f / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut div = vec![0u32; d + 1];
            let mut k = n;
            for c in div.iter_mut().take(d) {
                *c = (k % p as u64) as u32;
                k /= p as u64;
            }
            div[d] = 1;
            let r = poly_rem(m, &div, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^f) with the lexicographically smallest irreducible modulus.
    pub fn new(p: u32, f: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if f == 0 {
            return Err(Error::BadOrder(1));
        }
        let q = (p as u128).checked_pow(f).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::TooLarge {
                what: "field order",
                size: q,
                limit: MAX_ORDER as u128,
            });
        }
        let q = q as u32;
        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            Self::smallest_irreducible(p, f)
        };
        let mut field = Field {
            p,
            f,
            q,
            modulus,
            neg: Vec::new(),
            inv: Vec::new(),
            tables: None,
        };
        field.neg = (0..q).map(|a| field.neg_slow(a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = vec![0u16; (q * q) as usize];
            let mut mul = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = field.add_slow(a, b) as u16;
                    mul[(a * q + b) as usize] = field.mul_slow(a, b) as u16;
                }
            }
            field.tables = Some(Tables { add, mul });
        }
        let mut inv = vec![0u32; q as usize];
        for (a, slot) in inv.iter_mut().enumerate().skip(1) {
            *slot = field.pow_raw(a as u32, q - 2);
        }
        field.inv = inv;
        Ok(field)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, f) = prime_power(q).ok_or(Error::BadOrder(q))?;
        Field::new(p, f)
    }

    fn smallest_irreducible(p: u32, f: u32) -> Vec<u32> {
        let count = (p as u64).pow(f);
        for n in 0..count {
            // c_0 is the most significant digit of the enumeration index.
            let mut m = vec![0u32; f as usize + 1];
            for (i, c) in m.iter_mut().take(f as usize).enumerate() {
                let shift = (p as u64).pow(f - 1 - i as u32);
                *c = ((n / shift) % p as u64) as u32;
            }
            m[f as usize] = 1;
            if m[0] != 0 && is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn elem(&self, v: u32) -> FieldElem {
        assert!(v < self.q, "{v} out of range for GF({})", self.q);
        FieldElem(v)
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut d = vec![0u32; self.f as usize];
        for c in d.iter_mut() {
            *c = a % self.p;
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.undigits(&d)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.f == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.f as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.f as usize, 0);
        self.undigits(&r)
    }

    fn pow_raw(&self, a: u32, mut e: u32) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize] as u32,
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize] as u32,
            None => self.mul_slow(a, b),
        }
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add_raw(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(FieldElem(self.inv[a.0 as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, e: u32) -> FieldElem {
        FieldElem(self.pow_raw(a.0, e))
    }

    /// Applies one of the field operations; unary operations ignore `b`.
    pub fn arith(&self, a: FieldElem, b: FieldElem, op: FieldOp) -> Result<FieldElem> {
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Neg => self.neg(a),
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != FieldElem::ONE {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Additive basis `1, x, ..., x^{f-1}` as element encodings.
    pub fn basis(&self) -> Vec<FieldElem> {
        (0..self.f).map(|i| FieldElem(self.p.pow(i))).collect()
    }

    #[cfg(test)]
    fn slow_pair(&self, a: u32, b: u32) -> (u32, u32) {
        (self.add_slow(a, b), self.mul_slow(a, b))
    }
}
