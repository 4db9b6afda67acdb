//! The residue field `F_{p^m}` and its absolute Frobenius `x ↦ x^p`.
//!
//! Elements are packed into a `u32` as base-`p` digits: digit `i` is the
//! coordinate of `x^i` in the power basis of the modulus. Multiplication goes
//! through discrete log tables when the field has at most 2^16 elements and
//! falls back to polynomial arithmetic otherwise.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default number of π-adic digits kept when a computation has to truncate.
pub const DEFAULT_PRECISION: i64 = 64;

const TABLE_LIMIT: u64 = 1 << 16;

/// An element of `F_{p^m}`, meaningful only together with its [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct FFElem(pub(crate) u32);

impl FFElem {
    pub const ZERO: FFElem = FFElem(0);
    pub const ONE: FFElem = FFElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer encoding (base-`p` digits, least significant first).
    pub fn packed(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct LogTables {
    /// `exp[i] = g^i`, stored twice over so that `log a + log b` needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Arithmetic context for `F_{p^m}` plus the working π-adic precision used by
/// series that live over it.
pub struct FieldCtx {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    work_prec: i64,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("work_prec", &self.work_prec)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.work_prec == other.work_prec
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// `F_{p^m}` with the lexicographically least monic irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Arc<FieldCtx>> {
        Self::build(p, m, DEFAULT_PRECISION, true).map(Arc::new)
    }

    pub fn with_precision(p: u32, m: u32, prec: i64) -> Result<Arc<FieldCtx>> {
        if prec < 1 {
            return Err(Error::InvalidArgument(format!("precision {prec} must be positive")));
        }
        Self::build(p, m, prec, true).map(Arc::new)
    }

    /// Same field, different working precision.
    pub fn reprecise(&self, prec: i64) -> Result<Arc<FieldCtx>> {
        Self::with_precision(self.p, self.m, prec)
    }

    fn build(p: u32, m: u32, work_prec: i64, tabled: bool) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or(Error::FieldTooLarge { p: p as u64, m })?;
        let modulus = least_irreducible(p as u64, m as usize)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        let mut ctx = FieldCtx { p, m, q: q as u32, modulus, work_prec, tables: None };
        if tabled && q <= TABLE_LIMIT && q > 2 {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        let g = (1..self.q)
            .map(FFElem)
            .find(|&c| factors.iter().all(|&r| self.pow_poly(c, order / r) != FFElem::ONE))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = FFElem::ONE;
        for i in 0..order as u32 {
            exp.push(x.0);
            log[x.0 as usize] = i;
            x = self.mul_poly(x, g);
        }
        exp.extend_from_within(..);
        LogTables { exp, log }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements, `p^m`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, coefficients least significant first (length `m + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn work_prec(&self) -> i64 {
        self.work_prec
    }

    pub fn zero(&self) -> FFElem {
        FFElem::ZERO
    }

    pub fn one(&self) -> FFElem {
        FFElem::ONE
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FFElem {
        FFElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// The class of `x` in `F_p[x]/(modulus)`; equals the root of the modulus.
    pub fn generator(&self) -> FFElem {
        if self.m == 1 {
            // modulus is x + c, so x = -c
            self.from_int(-(self.modulus[0] as i64))
        } else {
            FFElem(self.p)
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FFElem> {
        if coeffs.len() > self.m as usize {
            return Err(Error::Parse(format!(
                "element has {} coordinates, field degree is {}",
                coeffs.len(),
                self.m
            )));
        }
        let mut packed = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::Parse(format!("coordinate {c} not reduced mod {}", self.p)));
            }
            packed = packed * self.p as u64 + c as u64;
        }
        Ok(FFElem(packed as u32))
    }

    /// Power-basis coordinates, least significant first (always length `m`).
    pub fn coeffs(&self, x: FFElem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FFElem> {
        (0..self.q).map(FFElem)
    }

    /// `x` lies in the prime field `F_p`.
    pub fn is_prime_field(&self, x: FFElem) -> bool {
        x.0 < self.p
    }

    #[inline]
    pub fn add(&self, a: FFElem, b: FFElem) -> FFElem {
        if self.p == 2 {
            return FFElem(a.0 ^ b.0);
        }
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FFElem((s % self.p as u64) as u32);
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    #[inline]
    pub fn sub(&self, a: FFElem, b: FFElem) -> FFElem {
        if self.p == 2 {
            return FFElem(a.0 ^ b.0);
        }
        if self.m == 1 {
            let s = a.0 as u64 + self.p as u64 - b.0 as u64;
            return FFElem((s % self.p as u64) as u32);
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    #[inline]
    pub fn neg(&self, a: FFElem) -> FFElem {
        self.sub(FFElem::ZERO, a)
    }

    fn digitwise(&self, a: FFElem, b: FFElem, op: impl Fn(u64, u64, u64) -> u64) -> FFElem {
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 || y > 0 {
            out += op(x % p, y % p, p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FFElem(out as u32)
    }

    #[inline]
    pub fn mul(&self, a: FFElem, b: FFElem) -> FFElem {
        if a.0 == 0 || b.0 == 0 {
            return FFElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                FFElem(t.exp[i])
            }
            None => self.mul_poly(a, b),
        }
    }

    pub fn inv(&self, a: FFElem) -> Result<FFElem> {
        if a.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(match &self.tables {
            Some(t) => {
                let order = self.q - 1;
                FFElem(t.exp[((order - t.log[a.0 as usize]) % order) as usize])
            }
            None => self.pow_poly(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FFElem, b: FFElem) -> Result<FFElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FFElem, mut e: u64) -> FFElem {
        let mut base = a;
        let mut acc = FFElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute Frobenius `x ↦ x^p`.
    #[inline]
    pub fn frobenius(&self, a: FFElem) -> FFElem {
        if self.m == 1 || a.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let order = (self.q - 1) as u64;
                let l = t.log[a.0 as usize] as u64 * self.p as u64 % order;
                FFElem(t.exp[l as usize])
            }
            None => self.pow(a, self.p as u64),
        }
    }

    /// `x ↦ x^(p^k)`, with `k` taken modulo `m`.
    pub fn frobenius_pow(&self, a: FFElem, k: u64) -> FFElem {
        let k = k % self.m as u64;
        (0..k).fold(a, |x, _| self.frobenius(x))
    }

    fn mul_poly(&self, a: FFElem, b: FFElem) -> FFElem {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = self.coeffs(a);
        let db = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &f) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + (p - c) * f as u64) % p;
            }
        }
        let mut packed = 0u64;
        for &c in prod[..m].iter().rev() {
            packed = packed * p + c;
        }
        FFElem(packed as u32)
    }

    fn pow_poly(&self, a: FFElem, mut e: u64) -> FFElem {
        let mut base = a;
        let mut acc = FFElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically least monic irreducible of degree `m` over `F_p`,
/// comparing coefficient tuples from the `x^{m-1}` term down.
fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut digits = vec![0u64; m];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
        // increment, least significant digit = constant term
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Dense polynomials over `F_p`, least significant coefficient first.
mod fp_poly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        let (mut base, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            for (i, &fi) in f.iter().enumerate() {
                let idx = top - df + i;
                r[idx] = (r[idx] + (p - c) * fi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, f, p)
    }

    fn pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        acc
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's irreducibility test.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob_powers[k] = x^(p^k) mod f
        let mut frob = vec![rem(&x, f, p)];
        for _ in 0..m {
            let next = pow_mod(frob.last().unwrap(), p, f, p);
            frob.push(next);
        }
        if !sub(&frob[m], &x, p).is_empty() {
            return false;
        }
        super::prime_factors(m as u64).into_iter().all(|r| {
            let h = sub(&frob[m / r as usize], &x, p);
            gcd(f, &h, p).len() == 1
        })
    }
}
