//! Truncated Laurent series over `F_{p^m}`: the field `L = F_{p^m}((π))`.
//!
//! A series is either *exact* (a Laurent polynomial, all unstored
//! coefficients are zero) or known modulo `π^prec`. Exact values stay exact
//! under ring operations; truncation only enters through inversion of
//! non-monomials, and the absolute precision of every derived value follows
//! the usual propagation rules.

use std::fmt;
use std::sync::Arc;

use crate::coeffs::{FFElem, FieldCtx};
use crate::error::{Error, Result};

/// Stand-in for the infinite precision of exact values. Small enough that
/// sums of a few valuations cannot overflow.
pub(crate) const INF: i64 = i64::MAX / 8;

#[derive(Clone)]
pub struct LaurentSeries {
    ctx: Arc<FieldCtx>,
    /// Index of `coeffs[0]`. Lower bound on the valuation of a zero-to-precision value.
    val: i64,
    coeffs: Vec<FFElem>,
    /// Absolute precision; for exact values this is `val + coeffs.len()`.
    prec: i64,
    exact: bool,
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p()
            && self.ctx.m() == other.ctx.m()
            && self.exact == other.exact
            && self.val == other.val
            && self.prec == other.prec
            && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

impl LaurentSeries {
    /// Build from raw parts. `prec = None` means exact. Coefficients past
    /// `prec` are dropped; missing ones up to `prec` are taken to be zero.
    pub fn from_parts(
        ctx: &Arc<FieldCtx>,
        val: i64,
        coeffs: Vec<FFElem>,
        prec: Option<i64>,
    ) -> LaurentSeries {
        let mut s = match prec {
            None => LaurentSeries { ctx: ctx.clone(), val, prec: 0, coeffs, exact: true },
            Some(prec) => {
                let mut coeffs = coeffs;
                let len = (prec - val).max(0) as usize;
                coeffs.resize(len, FFElem::ZERO);
                LaurentSeries { ctx: ctx.clone(), val: val.min(prec), prec, coeffs, exact: false }
            }
        };
        s.normalize();
        s
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> LaurentSeries {
        LaurentSeries { ctx: ctx.clone(), val: 0, coeffs: Vec::new(), prec: 0, exact: true }
    }

    /// Zero known only modulo `π^prec`.
    pub fn zero_to_precision(ctx: &Arc<FieldCtx>, prec: i64) -> LaurentSeries {
        LaurentSeries { ctx: ctx.clone(), val: prec, coeffs: Vec::new(), prec, exact: false }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> LaurentSeries {
        Self::monomial(ctx, FFElem::ONE, 0)
    }

    /// The uniformizer π.
    pub fn pi(ctx: &Arc<FieldCtx>) -> LaurentSeries {
        Self::monomial(ctx, FFElem::ONE, 1)
    }

    /// `c·π^k`, exact.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: FFElem, k: i64) -> LaurentSeries {
        Self::from_parts(ctx, k, vec![c], None)
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FFElem) -> LaurentSeries {
        Self::monomial(ctx, c, 0)
    }

    pub fn from_int(ctx: &Arc<FieldCtx>, n: i64) -> LaurentSeries {
        Self::constant(ctx, ctx.from_int(n))
    }

    fn normalize(&mut self) {
        if self.exact {
            let lead = self.coeffs.iter().position(|c| !c.is_zero());
            match lead {
                None => {
                    self.coeffs.clear();
                    self.val = 0;
                }
                Some(i) => {
                    let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                    self.coeffs.truncate(last + 1);
                    self.coeffs.drain(..i);
                    self.val += i as i64;
                }
            }
            self.prec = self.val + self.coeffs.len() as i64;
        } else {
            let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
            self.coeffs.drain(..lead);
            self.val += lead as i64;
            debug_assert_eq!(self.val + self.coeffs.len() as i64, self.prec);
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Index of the first stored coefficient.
    pub fn start(&self) -> i64 {
        self.val
    }

    /// Stored coefficients, starting at [`start`](Self::start).
    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Absolute precision, `None` for exact values.
    pub fn prec(&self) -> Option<i64> {
        (!self.exact).then_some(self.prec)
    }

    /// Absolute precision with exact values mapped to a large sentinel.
    pub(crate) fn abs_prec(&self) -> i64 {
        if self.exact {
            INF
        } else {
            self.prec
        }
    }

    /// Upper end of the stored range, as an absolute index.
    pub(crate) fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    pub fn is_zero_to_precision(&self) -> bool {
        !self.exact && self.coeffs.is_empty()
    }

    /// Zero, either exactly or as far as the precision can tell.
    pub fn looks_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.exact && self.coeffs.len() == 1
    }

    /// Certified valuation.
    pub fn valuation(&self) -> Result<i64> {
        if self.is_exact_zero() {
            Err(Error::ZeroValuation)
        } else if self.coeffs.is_empty() {
            Err(Error::precision(format!("series is zero modulo pi^{}", self.prec)))
        } else {
            Ok(self.val)
        }
    }

    /// Coefficient of `π^k`. Beyond the precision of an inexact series this is unknown.
    pub fn coeff(&self, k: i64) -> Option<FFElem> {
        if !self.exact && k >= self.prec {
            return None;
        }
        Some(self.coeff_or_zero(k))
    }

    #[inline]
    fn coeff_or_zero(&self, k: i64) -> FFElem {
        if k < self.val || k >= self.end() {
            FFElem::ZERO
        } else {
            self.coeffs[(k - self.val) as usize]
        }
    }

    /// Leading coefficient (of `π^val`); `None` for zero.
    pub fn leading(&self) -> Option<FFElem> {
        self.coeffs.first().copied()
    }

    pub fn neg(&self) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        self.combine(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.combine(other, |f, a, b| f.sub(a, b))
    }

    fn combine(
        &self,
        other: &LaurentSeries,
        op: impl Fn(&FieldCtx, FFElem, FFElem) -> FFElem,
    ) -> LaurentSeries {
        debug_assert!(*self.ctx == *other.ctx, "mixed coefficient fields");
        let exact = self.exact && other.exact;
        let lo = self.val.min(other.val);
        let hi = if exact {
            self.end().max(other.end())
        } else {
            self.abs_prec().min(other.abs_prec())
        };
        if !exact && hi <= lo {
            return Self::zero_to_precision(&self.ctx, hi);
        }
        let coeffs = (lo..hi)
            .map(|k| op(&self.ctx, self.coeff_or_zero(k), other.coeff_or_zero(k)))
            .collect();
        let mut out = LaurentSeries {
            ctx: self.ctx.clone(),
            val: lo,
            coeffs,
            prec: hi,
            exact,
        };
        out.normalize();
        out
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        debug_assert!(*self.ctx == *other.ctx, "mixed coefficient fields");
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.ctx);
        }
        let f = &self.ctx;
        let val = self.val + other.val;
        if self.exact && other.exact {
            let mut coeffs = vec![FFElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
            for (i, &a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, &b) in other.coeffs.iter().enumerate() {
                    coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
                }
            }
            let mut out = LaurentSeries { ctx: f.clone(), val, coeffs, prec: 0, exact: true };
            out.normalize();
            return out;
        }
        let prec = (self.abs_prec() + other.val).min(other.abs_prec() + self.val);
        if prec <= val {
            return Self::zero_to_precision(f, prec);
        }
        let len = (prec - val) as usize;
        let mut coeffs = vec![FFElem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        let mut out = LaurentSeries { ctx: f.clone(), val, coeffs, prec, exact: false };
        out.normalize();
        out
    }

    /// Multiply by a residue-field scalar.
    pub fn scale(&self, c: FFElem) -> LaurentSeries {
        if c.is_zero() {
            return if self.exact {
                Self::zero(&self.ctx)
            } else {
                Self::zero_to_precision(&self.ctx, self.prec)
            };
        }
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// Multiply by `π^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        if self.is_exact_zero() {
            return self.clone();
        }
        LaurentSeries {
            val: self.val + k,
            prec: self.prec + k,
            ..self.clone()
        }
    }

    /// Multiplicative inverse. Exact only when `self` is an exact monomial;
    /// otherwise the unit part is inverted to the relative precision of
    /// `self` (or the context's working precision for exact input).
    pub fn inv(&self) -> Result<LaurentSeries> {
        if self.is_exact_zero() {
            return Err(Error::DivideByZero);
        }
        let v = self.valuation()?;
        let f = &self.ctx;
        let u0_inv = f.inv(self.coeffs[0])?;
        if self.is_monomial() {
            return Ok(Self::monomial(f, u0_inv, -v));
        }
        let rel = if self.exact { f.work_prec() } else { self.prec - v };
        let rel_len = rel as usize;
        let mut out = Vec::with_capacity(rel_len);
        out.push(u0_inv);
        let minus_u0_inv = f.neg(u0_inv);
        for k in 1..rel_len {
            let mut s = FFElem::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let uj = self.coeffs[j];
                if !uj.is_zero() {
                    s = f.add(s, f.mul(uj, out[k - j]));
                }
            }
            out.push(f.mul(minus_u0_inv, s));
        }
        Ok(LaurentSeries { ctx: f.clone(), val: -v, coeffs: out, prec: -v + rel, exact: false })
    }

    /// `self / other`; exact when `other` is an exact monomial and `self` is exact.
    pub fn div(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        if other.is_monomial() {
            let c = self.ctx.inv(other.coeffs[0])?;
            return Ok(self.scale(c).shift(-other.val));
        }
        Ok(self.mul(&other.inv()?))
    }

    /// Coefficientwise Frobenius; fixes π.
    pub fn sigma(&self) -> LaurentSeries {
        if self.ctx.m() == 1 {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.frobenius(c)).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// `σ^k`; `k` is reduced modulo the field degree.
    pub fn sigma_pow(&self, k: u64) -> LaurentSeries {
        let k = k % self.ctx.m() as u64;
        if k == 0 {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.frobenius_pow(c, k)).collect();
        LaurentSeries { coeffs, ..self.clone() }
    }

    /// Substitute `π ↦ ϖ^e`, viewing the series in the totally ramified
    /// extension of degree `e` with uniformizer `ϖ`.
    pub fn rebase(&self, e: u32) -> LaurentSeries {
        assert!(e >= 1, "ramification index must be positive");
        if e == 1 || self.is_exact_zero() {
            return self.clone();
        }
        let e64 = e as i64;
        let val = self.val * e64;
        let len = if self.exact {
            (self.coeffs.len() - 1) * e as usize + 1
        } else {
            (self.prec * e64 - val) as usize
        };
        let prec = if self.exact { val + len as i64 } else { self.prec * e64 };
        let mut coeffs = vec![FFElem::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * e as usize] = c;
        }
        LaurentSeries { ctx: self.ctx.clone(), val, coeffs, prec, exact: self.exact }
    }

    /// Forget everything from `π^prec` on.
    pub fn truncate(&self, prec: i64) -> LaurentSeries {
        if !self.exact && self.prec <= prec {
            return self.clone();
        }
        let coeffs = (self.val.min(prec)..prec).map(|k| self.coeff_or_zero(k)).collect();
        let mut out = LaurentSeries {
            ctx: self.ctx.clone(),
            val: self.val.min(prec),
            coeffs,
            prec,
            exact: false,
        };
        out.normalize();
        out
    }

    /// Agreement on every coefficient known to both sides.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        let hi = self.abs_prec().min(other.abs_prec());
        let lo = self.val.min(other.val);
        let hi = if hi == INF { self.end().max(other.end()) } else { hi };
        (lo..hi).all(|k| self.coeff_or_zero(k) == other.coeff_or_zero(k))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let k = self.val + i as i64;
            match (c.packed(), k) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "pi")?,
                (1, _) => write!(f, "pi^{k}")?,
                (_, 1) => write!(f, "{c}*pi")?,
                _ => write!(f, "{c}*pi^{k}")?,
            }
        }
        if first && self.exact {
            write!(f, "0")?;
        }
        if !self.exact {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(pi^{})", self.prec)?;
        }
        Ok(())
    }
}

impl std::ops::Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32, m: u32) -> Arc<FieldCtx> {
        FieldCtx::new(p, m).unwrap()
    }

    fn poly(ctx: &Arc<FieldCtx>, val: i64, cs: &[i64]) -> LaurentSeries {
        let coeffs = cs.iter().map(|&c| ctx.from_int(c)).collect();
        LaurentSeries::from_parts(ctx, val, coeffs, None)
    }

    #[test]
    fn valuation_basics() {
        let k = f(3, 1);
        let x = poly(&k, 3, &[1, 0, 1]);
        assert_eq!(x.valuation(), Ok(3));
        assert_eq!(LaurentSeries::zero(&k).valuation(), Err(Error::ZeroValuation));
        let pi = LaurentSeries::pi(&k);
        let d = &pi - &pi;
        assert!(d.is_exact_zero());
        assert_eq!(d.valuation(), Err(Error::ZeroValuation));
        let z = LaurentSeries::zero_to_precision(&k, 64);
        assert!(matches!(z.valuation(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn products() {
        let k = f(3, 1);
        let pi = LaurentSeries::pi(&k);
        let pi2 = LaurentSeries::monomial(&k, k.one(), 2);
        assert_eq!(&pi * &pi2, LaurentSeries::monomial(&k, k.one(), 3));
        let a = poly(&k, 0, &[1, 1]);
        let b = poly(&k, 0, &[1, -1]);
        assert_eq!(&a * &b, poly(&k, 0, &[1, 0, -1]));
        let k2 = f(2, 1);
        let a = poly(&k2, 0, &[1, 1]);
        let b = poly(&k2, 0, &[1, 1]);
        assert_eq!(&a * &b, poly(&k2, 0, &[1, 0, 1]));
    }

    #[test]
    fn precision_rule_for_products() {
        let k = f(5, 1);
        let a = poly(&k, 0, &[1, 2, 3]).truncate(10);
        let b = poly(&k, 0, &[2, 1]).truncate(20);
        let c = &a * &b;
        assert_eq!(c.prec(), Some(10));
        assert!(!c.is_exact());
        let shifted = a.shift(3);
        assert_eq!((&shifted * &b).prec(), Some(13));
        let exact = poly(&k, -2, &[1, 1]);
        assert_eq!((&exact * &b).prec(), Some(18));
    }

    #[test]
    fn inverses() {
        let k = f(3, 1);
        let pi = LaurentSeries::pi(&k);
        let inv = pi.inv().unwrap();
        assert!(inv.is_exact());
        assert_eq!(inv, LaurentSeries::monomial(&k, k.one(), -1));

        let one_plus_pi = poly(&k, 0, &[1, 1]);
        let inv = one_plus_pi.inv().unwrap();
        assert_eq!(inv.prec(), Some(64));
        for j in 0..64 {
            let expected = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(inv.coeff(j), Some(k.from_int(expected)));
        }

        let x = poly(&k, 1, &[1, 1]).truncate(40);
        let inv = x.inv().unwrap();
        assert_eq!(inv.start(), -1);
        assert_eq!(inv.prec(), Some(38));
        assert_eq!(inv.coeff(-1), Some(k.one()));
        assert_eq!(inv.coeff(0), Some(k.from_int(-1)));
        assert_eq!(inv.coeff(1), Some(k.one()));

        assert_eq!(LaurentSeries::zero(&k).inv().unwrap_err(), Error::DivideByZero);
        assert!(matches!(
            LaurentSeries::zero_to_precision(&k, 3).inv(),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn sigma_examples() {
        let k = f(2, 2);
        let w = k.generator();
        let x = LaurentSeries::from_parts(&k, 0, vec![w, w], None);
        let y = LaurentSeries::from_parts(&k, 0, vec![k.add(w, k.one()); 2], None);
        assert_eq!(x.sigma(), y);
        let z = poly(&k, -1, &[1, 0, 1]);
        assert_eq!(z.sigma(), z);
        assert_eq!(x.sigma().sigma(), x);
    }

    #[test]
    fn rebase_examples() {
        let k = f(3, 2);
        let pi = LaurentSeries::pi(&k);
        assert_eq!(pi.rebase(2), LaurentSeries::monomial(&k, k.one(), 2));
        let x = poly(&k, -1, &[1, 2, 0, 1]);
        assert_eq!(x.rebase(1), x);
        assert_eq!(x.rebase(3).valuation(), Ok(-3));
        let t = x.truncate(5).rebase(2);
        assert_eq!(t.prec(), Some(10));
        assert_eq!(t.coeff(0), Some(k.from_int(2)));
    }

    #[test]
    fn display_is_readable() {
        let k = f(3, 1);
        assert_eq!(poly(&k, -1, &[1, 0, 2]).to_string(), "pi^-1 + 2*pi");
        assert_eq!(poly(&k, 0, &[1, 1]).truncate(3).to_string(), "1 + pi + O(pi^3)");
        assert_eq!(LaurentSeries::zero(&k).to_string(), "0");
    }

    fn field_strategy() -> impl Strategy<Value = Arc<FieldCtx>> {
        prop_oneof![Just((2u32, 1u32)), Just((2, 3)), Just((3, 2)), Just((5, 1))]
            .prop_map(|(p, m)| FieldCtx::new(p, m).unwrap())
    }

    fn series(ctx: Arc<FieldCtx>) -> impl Strategy<Value = LaurentSeries> {
        let q = ctx.q();
        (-3i64..4, prop::collection::vec(0..q, 0..6)).prop_map(move |(v, cs)| {
            LaurentSeries::from_parts(&ctx, v, cs.into_iter().map(FFElem).collect(), None)
        })
    }

    fn triple() -> impl Strategy<Value = (LaurentSeries, LaurentSeries, LaurentSeries)> {
        field_strategy().prop_flat_map(|k| (series(k.clone()), series(k.clone()), series(k)))
    }

    proptest! {
        #[test]
        fn ring_axioms_on_exact_polynomials((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&a - &b) + &b) == a);
        }

        #[test]
        fn valuation_is_additive((a, b, _c) in triple()) {
            prop_assume!(!a.is_exact_zero() && !b.is_exact_zero());
            let ab = &a * &b;
            prop_assert_eq!(ab.valuation().unwrap(), a.valuation().unwrap() + b.valuation().unwrap());
        }

        #[test]
        fn sigma_is_an_automorphism_commuting_with_rebase((a, b, _c) in triple(), e in 1u32..4) {
            prop_assert_eq!((&a * &b).sigma(), &a.sigma() * &b.sigma());
            prop_assert_eq!((&a + &b).sigma(), &a.sigma() + &b.sigma());
            prop_assert_eq!(a.sigma().rebase(e), a.rebase(e).sigma());
            prop_assert_eq!(a.sigma_pow(a.ctx().m() as u64), a.clone());
            prop_assert_eq!((&a * &b).rebase(e), &a.rebase(e) * &b.rebase(e));
        }

        #[test]
        fn inverse_is_sound_under_doubled_precision((a, _b, _c) in triple()) {
            prop_assume!(!a.is_exact_zero());
            let lo = FieldCtx::with_precision(a.ctx().p(), a.ctx().m(), 16).unwrap();
            let hi = FieldCtx::with_precision(a.ctx().p(), a.ctx().m(), 32).unwrap();
            let a_lo = LaurentSeries::from_parts(&lo, a.start(), a.coeffs().to_vec(), None);
            let a_hi = LaurentSeries::from_parts(&hi, a.start(), a.coeffs().to_vec(), None);
            let i_lo = a_lo.inv().unwrap();
            let i_hi = a_hi.inv().unwrap();
            let prec = i_lo.prec().unwrap_or(INF);
            for k in i_lo.start()..prec.min(i_lo.start() + 16) {
                prop_assert_eq!(i_lo.coeff(k).map(|c| c.packed()), i_hi.coeff(k).map(|c| c.packed()));
            }
            let one = &a_lo * &i_lo;
            prop_assert!(one.agrees_with(&LaurentSeries::one(&lo)));
        }
    }
}
