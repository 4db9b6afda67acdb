//! Square matrices over `L`, σ-twisted products, Smith reduction and
//! characteristic polynomials.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::coeffs::{FFElem, FieldCtx};
use crate::cochar::{Cocharacter, Q};
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;

/// Square matrix over `L`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatL {
    ctx: Arc<FieldCtx>,
    n: usize,
    entries: Vec<LaurentSeries>,
}

/// Characteristic polynomial `det(X·I − b)`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<LaurentSeries>,
}

/// Outcome of Smith reduction over `O_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithResult {
    /// Elementary-divisor valuations, dominant order.
    pub slopes: Vec<i64>,
    /// Valuation of the determinant; equals the sum of the slopes.
    pub det_val: i64,
    /// Absolute precision at which the elimination ran (`None` if no truncation was needed).
    pub precision: Option<i64>,
}

impl SmithResult {
    pub fn cocharacter(&self) -> Cocharacter {
        Cocharacter::from_ints(&self.slopes)
    }
}

impl MatL {
    pub fn new(ctx: &Arc<FieldCtx>, n: usize, entries: Vec<LaurentSeries>) -> Result<MatL> {
        if entries.len() != n * n {
            return Err(Error::LengthMismatch { left: entries.len(), right: n * n });
        }
        if entries.iter().any(|e| **e.ctx() != **ctx) {
            return Err(Error::InvalidArgument("entries live in different coefficient fields".into()));
        }
        Ok(MatL { ctx: ctx.clone(), n, entries })
    }

    pub fn from_rows(ctx: &Arc<FieldCtx>, rows: Vec<Vec<LaurentSeries>>) -> Result<MatL> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { left: bad.len(), right: n });
        }
        Self::new(ctx, n, rows.into_iter().flatten().collect())
    }

    /// Matrix of monomials `c·π^k`; `None` marks a zero entry.
    pub fn from_monomials(ctx: &Arc<FieldCtx>, rows: &[Vec<Option<(i64, i64)>>]) -> Result<MatL> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| match e {
                        None => LaurentSeries::zero(ctx),
                        Some((c, k)) => LaurentSeries::monomial(ctx, ctx.from_int(*c), *k),
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(ctx, rows)
    }

    pub fn zero(ctx: &Arc<FieldCtx>, n: usize) -> MatL {
        MatL { ctx: ctx.clone(), n, entries: vec![LaurentSeries::zero(ctx); n * n] }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> MatL {
        let mut out = Self::zero(ctx, n);
        for i in 0..n {
            out.set(i, i, LaurentSeries::one(ctx));
        }
        out
    }

    pub fn diag(ctx: &Arc<FieldCtx>, d: &[LaurentSeries]) -> MatL {
        let mut out = Self::zero(ctx, d.len());
        for (i, x) in d.iter().enumerate() {
            out.set(i, i, x.clone());
        }
        out
    }

    /// `diag(π^{k_1}, …, π^{k_n})`.
    pub fn diag_pi(ctx: &Arc<FieldCtx>, ks: &[i64]) -> MatL {
        let d: Vec<_> = ks.iter().map(|&k| LaurentSeries::monomial(ctx, FFElem::ONE, k)).collect();
        Self::diag(ctx, &d)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentSeries) {
        self.entries[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<LaurentSeries>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&LaurentSeries) -> LaurentSeries) -> MatL {
        MatL { ctx: self.ctx.clone(), n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.is_exact())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_exact_zero()))
    }

    fn check_dims(&self, other: &MatL) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn mul(&self, other: &MatL) -> Result<MatL> {
        self.check_dims(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentSeries::zero(&self.ctx);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_exact_zero() || b.is_exact_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                entries.push(acc);
            }
        }
        Ok(MatL { ctx: self.ctx.clone(), n, entries })
    }

    pub fn add(&self, other: &MatL) -> Result<MatL> {
        self.check_dims(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(MatL { ctx: self.ctx.clone(), n: self.n, entries })
    }

    pub fn sub(&self, other: &MatL) -> Result<MatL> {
        self.check_dims(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        Ok(MatL { ctx: self.ctx.clone(), n: self.n, entries })
    }

    /// Multiply every entry by `π^k`.
    pub fn shift(&self, k: i64) -> MatL {
        self.map(|e| e.shift(k))
    }

    pub fn sigma(&self) -> MatL {
        self.map(|e| e.sigma())
    }

    pub fn sigma_pow(&self, k: u64) -> MatL {
        self.map(|e| e.sigma_pow(k))
    }

    pub fn rebase(&self, e: u32) -> MatL {
        self.map(|x| x.rebase(e))
    }

    /// `(bσ)^k = b·σ(b)·…·σ^{k−1}(b)`.
    pub fn twisted_power(&self, k: u64) -> MatL {
        let mut out = Self::identity(&self.ctx, self.n);
        let mut cur = self.clone();
        for i in 0..k {
            out = out.mul(&cur).expect("same size");
            if i + 1 < k {
                cur = cur.sigma();
            }
        }
        out
    }

    /// `N_m(b) = (bσ)^m` for the degree `m` of the coefficient field.
    pub fn norm_map(&self) -> MatL {
        self.twisted_power(self.ctx.m() as u64)
    }

    /// Characteristic polynomial by the division-free Berkowitz recursion.
    pub fn char_poly(&self) -> CharPoly {
        let n = self.n;
        let ctx = &self.ctx;
        // Coefficients of the leading principal r×r minor's polynomial, highest degree first.
        let mut p = vec![LaurentSeries::one(ctx)];
        for r in 1..=n {
            let last = r - 1;
            let a = self.get(last, last);
            let mut t = Vec::with_capacity(r + 1);
            t.push(LaurentSeries::one(ctx));
            t.push(a.neg());
            // v runs through M^k·C for the leading (r−1)×(r−1) block M and column C.
            let mut v: Vec<LaurentSeries> = (0..last).map(|i| self.get(i, last).clone()).collect();
            for _ in 0..last {
                let rc = (0..last).fold(LaurentSeries::zero(ctx), |acc, j| {
                    acc.add(&self.get(last, j).mul(&v[j]))
                });
                t.push(rc.neg());
                v = (0..last)
                    .map(|i| {
                        (0..last).fold(LaurentSeries::zero(ctx), |acc, j| {
                            acc.add(&self.get(i, j).mul(&v[j]))
                        })
                    })
                    .collect();
            }
            let next = (0..=r)
                .map(|i| {
                    (0..=i.min(r - 1)).fold(LaurentSeries::zero(ctx), |acc, j| {
                        acc.add(&t[i - j].mul(&p[j]))
                    })
                })
                .collect();
            p = next;
        }
        p.reverse();
        CharPoly { coeffs: p }
    }

    pub fn det(&self) -> LaurentSeries {
        let c0 = self.char_poly().coeffs.swap_remove(0);
        if self.n % 2 == 1 {
            c0.neg()
        } else {
            c0
        }
    }

    /// Certified valuation of the determinant.
    pub fn det_val(&self) -> Result<i64> {
        let d = self.det();
        if d.is_exact_zero() {
            return Err(Error::NotInvertible);
        }
        d.valuation()
    }

    /// Inverse by Gauss–Jordan elimination with minimal-valuation column pivots.
    pub fn inv(&self) -> Result<MatL> {
        let n = self.n;
        let ctx = &self.ctx;
        let mut a = self.rows();
        let mut e = Self::identity(ctx, n).rows();
        for col in 0..n {
            let pivot = pick_column_pivot(&a, col)?;
            a.swap(col, pivot);
            e.swap(col, pivot);
            let p = a[col][col].clone();
            let scale_row = |row: &mut Vec<LaurentSeries>| -> Result<()> {
                for x in row.iter_mut() {
                    *x = x.div(&p)?;
                }
                Ok(())
            };
            scale_row(&mut a[col])?;
            scale_row(&mut e[col])?;
            for r in 0..n {
                if r == col || a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    e[r][j] = e[r][j].sub(&f.mul(&e[col][j]));
                }
            }
        }
        Self::from_rows(ctx, e)
    }

    /// Elementary-divisor valuations.
    ///
    /// The matrix is first scaled into `M_n(O_L)` and truncated just above its
    /// largest possible elementary divisor, which leaves the divisors unchanged.
    /// Pivots are entries of least valuation, ties broken by (row, column).
    pub fn smith(&self) -> Result<SmithResult> {
        let n = self.n;
        if n == 0 {
            return Ok(SmithResult { slopes: vec![], det_val: 0, precision: None });
        }
        let det_val = self.det_val()?;
        let vmin = self
            .entries
            .iter()
            .filter(|e| !e.looks_zero())
            .map(|e| e.start())
            .min()
            .ok_or(Error::NotInvertible)?;
        // Any zero-to-precision entry could hide a smaller valuation.
        if let Some(e) = self.entries.iter().find(|e| e.is_zero_to_precision() && e.start() <= vmin) {
            return Err(Error::precision(format!(
                "entry is zero modulo pi^{} while the minimal valuation is {vmin}",
                e.start()
            )));
        }
        let scaled_det = det_val - n as i64 * vmin;
        let cap = scaled_det + 1;
        let mut a: Vec<Vec<LaurentSeries>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.shift(-vmin).truncate(cap)).collect())
            .collect();
        let mut slopes = Vec::with_capacity(n);
        while !a.is_empty() {
            let (pi, pj, v) = pick_pivot(&a)?;
            let unit_inv = a[pi][pj].shift(-v).inv()?;
            let row: Vec<LaurentSeries> = a[pi].iter().map(|x| x.mul(&unit_inv)).collect();
            let mut rest = Vec::with_capacity(a.len() - 1);
            for (r, cur) in a.iter().enumerate() {
                if r == pi {
                    continue;
                }
                let f = cur[pj].shift(-v);
                let new_row: Vec<LaurentSeries> = cur
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != pj)
                    .map(|(c, x)| if f.looks_zero() { x.clone() } else { x.sub(&f.mul(&row[c])) })
                    .collect();
                rest.push(new_row);
            }
            slopes.push(v + vmin);
            a = rest;
        }
        slopes.sort_unstable_by(|x, y| y.cmp(x));
        let total: i64 = slopes.iter().sum();
        if total != det_val {
            return Err(Error::Internal(format!(
                "elementary divisors sum to {total}, determinant has valuation {det_val}"
            )));
        }
        Ok(SmithResult { slopes, det_val, precision: Some(cap + vmin) })
    }

    pub fn smith_slopes(&self) -> Result<Cocharacter> {
        Ok(self.smith()?.cocharacter())
    }

    /// Valuations of the eigenvalues, read off the Newton polygon of the
    /// characteristic polynomial.
    pub fn eigen_valuations(&self) -> Result<Cocharacter> {
        root_valuations(&self.char_poly().coeffs).map(Cocharacter::new)
    }
}

fn pick_column_pivot(a: &[Vec<LaurentSeries>], col: usize) -> Result<usize> {
    let mut best: Option<(i64, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(col) {
        let x = &row[col];
        if x.looks_zero() {
            continue;
        }
        if best.is_none_or(|(v, _)| x.start() < v) {
            best = Some((x.start(), r));
        }
    }
    match best {
        Some((v, r)) => {
            if a[col..].iter().any(|row| row[col].is_zero_to_precision() && row[col].start() <= v) {
                return Err(Error::precision("pivot valuation not certified"));
            }
            Ok(r)
        }
        None if a[col..].iter().all(|row| row[col].is_exact_zero()) => Err(Error::NotInvertible),
        None => Err(Error::precision("column is zero to the available precision")),
    }
}

/// Entry of least valuation, first in (row, column) order.
fn pick_pivot(a: &[Vec<LaurentSeries>]) -> Result<(usize, usize, i64)> {
    let mut best: Option<(usize, usize, i64)> = None;
    let mut floor = i64::MAX;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.is_zero_to_precision() {
                floor = floor.min(x.start());
            } else if !x.is_exact_zero() && best.is_none_or(|(_, _, v)| x.start() < v) {
                best = Some((i, j, x.start()));
            }
        }
    }
    match best {
        Some((_, _, v)) if floor <= v => {
            Err(Error::precision(format!("cannot certify a pivot of valuation {v} below pi^{floor}")))
        }
        Some(b) => Ok(b),
        None if floor == i64::MAX => Err(Error::NotInvertible),
        None => Err(Error::precision("remaining block is zero to the available precision")),
    }
}

/// Valuations of the roots of `Σ c_k X^k` (with `c_n` a unit), largest first.
pub fn root_valuations(coeffs: &[LaurentSeries]) -> Result<Vec<Q>> {
    let n = coeffs.len() - 1;
    let c0 = &coeffs[0];
    if c0.is_exact_zero() {
        return Err(Error::NotInvertible);
    }
    c0.valuation()?;
    let mut known = Vec::new();
    let mut bounds = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_exact_zero() {
            continue;
        }
        if c.is_zero_to_precision() {
            bounds.push((k as i64, c.start()));
        } else {
            known.push((k as i64, c.start()));
        }
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &known {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (p.1 - a.1) as i128 - (b.1 - a.1) as i128 * (p.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for &(k, lower) in &bounds {
        let seg = hull.windows(2).find(|w| w[0].0 <= k && k <= w[1].0).expect("hull spans 0..n");
        let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
        let height = Q::from_integer(y0) + Q::new((y1 - y0) * (k - x0), x1 - x0);
        if Q::from_integer(lower) < height {
            return Err(Error::precision(format!(
                "coefficient of X^{k} is zero modulo pi^{lower}, below the polygon height {height}"
            )));
        }
    }
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let s = -Q::new(y1 - y0, x1 - x0);
        out.extend(std::iter::repeat_n(s, (x1 - x0) as usize));
    }
    debug_assert!(out.len() == n || out.iter().all(|s| !s.is_zero()) || n == 0);
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

impl fmt::Display for MatL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MatL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32, m: u32) -> Arc<FieldCtx> {
        FieldCtx::new(p, m).unwrap()
    }

    fn mono(ctx: &Arc<FieldCtx>, c: i64, k: i64) -> LaurentSeries {
        LaurentSeries::monomial(ctx, ctx.from_int(c), k)
    }

    #[test]
    fn twisted_power_examples() {
        let k = f(3, 2);
        let b = MatL::from_monomials(&k, &[vec![None, Some((1, 1))], vec![Some((1, 0)), None]]).unwrap();
        assert_eq!(b.twisted_power(1), b);
        assert_eq!(b.twisted_power(0), MatL::identity(&k, 2));
        assert_eq!(b.twisted_power(2), MatL::diag_pi(&k, &[1, 1]));

        let lam = k.generator();
        let one = MatL::diag(&k, &[LaurentSeries::constant(&k, lam)]);
        let expect = k.mul(lam, k.frobenius(lam));
        assert_eq!(one.twisted_power(2), MatL::diag(&k, &[LaurentSeries::constant(&k, expect)]));
        // The norm of an F_9 element lies in F_3.
        assert!(k.is_prime_field(one.norm_map().get(0, 0).leading().unwrap()));
    }

    #[test]
    fn smith_examples() {
        let k = f(3, 2);
        assert_eq!(MatL::identity(&k, 3).smith_slopes().unwrap(), Cocharacter::zero(3));
        let b = MatL::from_monomials(&k, &[vec![None, Some((1, 1))], vec![Some((1, 0)), None]]).unwrap();
        assert_eq!(b.smith_slopes().unwrap(), Cocharacter::from_ints(&[1, 0]));

        let lam = LaurentSeries::constant(&k, k.generator());
        let entry = lam.shift(-1).sub(&lam.sigma());
        let b = MatL::from_rows(
            &k,
            vec![vec![LaurentSeries::one(&k), LaurentSeries::zero(&k)], vec![entry, mono(&k, 1, 1)]],
        )
        .unwrap();
        let s = b.smith().unwrap();
        assert_eq!(s.slopes, vec![2, -1]);
        assert_eq!(s.det_val, 1);

        let singular = MatL::from_monomials(&k, &[vec![Some((1, 0)), Some((1, 0))], vec![Some((1, 0)), Some((1, 0))]])
            .unwrap();
        assert_eq!(singular.smith(), Err(Error::NotInvertible));
    }

    #[test]
    fn smith_rejects_uncertifiable_input() {
        let k = f(5, 1);
        let tiny = LaurentSeries::zero_to_precision(&k, 0);
        let b = MatL::from_rows(&k, vec![vec![mono(&k, 1, 2), tiny.clone()], vec![tiny, mono(&k, 1, 2)]])
            .unwrap();
        assert!(matches!(b.smith(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn char_poly_examples() {
        let k = f(5, 1);
        let d = MatL::diag_pi(&k, &[1, 2]);
        let cp = d.char_poly().coeffs;
        let pi_plus_pi2 = mono(&k, 1, 1).add(&mono(&k, 1, 2));
        assert_eq!(cp, vec![mono(&k, 1, 3), pi_plus_pi2.neg(), LaurentSeries::one(&k)]);
        let id = MatL::identity(&k, 2).char_poly().coeffs;
        assert_eq!(id, vec![LaurentSeries::one(&k), mono(&k, -2, 0), LaurentSeries::one(&k)]);
        assert_eq!(d.det(), mono(&k, 1, 3));
    }

    #[test]
    fn eigen_valuations_examples() {
        let k = f(2, 1);
        let b = MatL::from_monomials(&k, &[vec![None, Some((1, 1))], vec![Some((1, 0)), None]]).unwrap();
        let half = Q::new(1, 2);
        assert_eq!(b.eigen_valuations().unwrap(), Cocharacter::new(vec![half, half]));
        assert_eq!(MatL::diag_pi(&k, &[2, 0]).eigen_valuations().unwrap(), Cocharacter::from_ints(&[2, 0]));
    }

    #[test]
    fn inverse_examples() {
        let k = f(3, 1);
        let b = MatL::from_rows(
            &k,
            vec![
                vec![LaurentSeries::one(&k).add(&mono(&k, 1, 1)), mono(&k, 1, -1)],
                vec![mono(&k, 2, 2), mono(&k, 1, 0)],
            ],
        )
        .unwrap();
        let prod = b.mul(&b.inv().unwrap()).unwrap();
        let id = MatL::identity(&k, 2);
        for (x, y) in prod.entries().iter().zip(id.entries()) {
            assert!(x.agrees_with(y), "{x} vs {y}");
        }
        assert_eq!(MatL::zero(&k, 2).inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn sigma_examples() {
        let k = f(2, 3);
        let fp = MatL::from_monomials(&k, &[vec![Some((1, 2)), None], vec![Some((1, -1)), Some((1, 0))]]).unwrap();
        assert_eq!(fp.sigma(), fp);
        let w = LaurentSeries::constant(&k, k.generator());
        let b = MatL::from_rows(&k, vec![vec![w.clone(), w.shift(1)], vec![w.shift(2), w.shift(-1)]]).unwrap();
        assert_eq!(b.sigma().sigma().sigma(), b);
        assert_ne!(b.sigma(), b);
    }

    fn field() -> impl Strategy<Value = Arc<FieldCtx>> {
        prop_oneof![Just((2u32, 2u32)), Just((3, 2)), Just((2, 3))].prop_map(|(p, m)| f(p, m))
    }

    fn matrix(ctx: Arc<FieldCtx>, n: usize) -> impl Strategy<Value = MatL> {
        let q = ctx.q();
        prop::collection::vec((-2i64..3, prop::collection::vec(0..q, 0..3)), n * n).prop_map(move |es| {
            let entries = es
                .into_iter()
                .map(|(v, cs)| LaurentSeries::from_parts(&ctx, v, cs.into_iter().map(FFElem).collect(), None))
                .collect();
            MatL::new(&ctx, n, entries).unwrap()
        })
    }

    /// Unit lower times unit upper triangular matrices with O_L entries.
    fn unimodular(ctx: Arc<FieldCtx>, n: usize) -> impl Strategy<Value = MatL> {
        let q = ctx.q();
        (
            prop::collection::vec((0i64..3, prop::collection::vec(0..q, 0..3)), n * n),
            prop::collection::vec((0i64..3, prop::collection::vec(0..q, 0..3)), n * n),
            prop::collection::vec(1..q, 2 * n),
        )
            .prop_map(move |(l, u, d)| {
                let mk = |(v, cs): &(i64, Vec<u32>)| {
                    LaurentSeries::from_parts(&ctx, *v, cs.iter().map(|&c| FFElem(c)).collect(), None)
                };
                let mut lo = MatL::identity(&ctx, n);
                let mut up = MatL::identity(&ctx, n);
                for i in 0..n {
                    lo.set(i, i, LaurentSeries::constant(&ctx, FFElem(d[i])));
                    up.set(i, i, LaurentSeries::constant(&ctx, FFElem(d[n + i])));
                    for j in 0..i {
                        lo.set(i, j, mk(&l[i * n + j]));
                        up.set(j, i, mk(&u[i * n + j]));
                    }
                }
                lo.mul(&up).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cocycle_law((b, j, k) in field().prop_flat_map(|c| (matrix(c, 2), 0u64..5, 0u64..4))) {
            let lhs = b.twisted_power(j + k);
            let rhs = b.twisted_power(j).mul(&b.twisted_power(k).sigma_pow(j)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn smith_is_cartan_invariant(
            (b, g, h) in field().prop_flat_map(|c| (1usize..4).prop_flat_map(move |n| {
                (matrix(c.clone(), n), unimodular(c.clone(), n), unimodular(c.clone(), n))
            }))
        ) {
            prop_assume!(!b.det().is_exact_zero());
            let s = b.smith().unwrap();
            let moved = g.mul(&b).unwrap().mul(&h).unwrap();
            prop_assert_eq!(moved.smith().unwrap().slopes, s.slopes);
        }

        #[test]
        fn inverse_round_trip(b in field().prop_flat_map(|c| matrix(c, 3))) {
            prop_assume!(!b.det().is_exact_zero());
            let prod = b.inv().unwrap().mul(&b).unwrap();
            let id = MatL::identity(b.ctx(), 3);
            for (x, y) in prod.entries().iter().zip(id.entries()) {
                prop_assert!(x.agrees_with(y));
            }
        }
    }
}
