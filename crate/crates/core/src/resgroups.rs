//! Restriction of scalars of `GL_2`: cyclic tuples for unramified
//! extensions, Goren–Oort types, and the Andreatta–Goren display normal form.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;

use crate::coeffs::{FFElem, FieldCtx};
use crate::cochar::{Cocharacter, Q};
use crate::error::{Error, Result};
use crate::invariants::{hodge_point, newton_point};
use crate::laurent::LaurentSeries;
use crate::matl::MatL;
use crate::sample::{self, tag};

/// Point of `Res(GL_n)(L)` for an unramified extension of degree `g`: a
/// tuple indexed by `Z/gZ`, with Frobenius sending part `i` to index `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResElement {
    parts: Vec<MatL>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GOType {
    pub g: usize,
    pub members: BTreeSet<usize>,
}

/// Normal form `F = [[T^m, c·T^i], [T^j, 0]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplayParams {
    pub g: u32,
    pub i: u32,
    pub j: u32,
    pub m: u32,
    pub c: LaurentSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgInvariants {
    pub j: i64,
    pub n: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeReport {
    pub e: u32,
    pub hodge: Cocharacter,
    pub newton: Cocharacter,
    pub hodge_rebased: Cocharacter,
    pub newton_rebased: Cocharacter,
}

impl BaseChangeReport {
    /// Rebased slopes are exactly `e` times the originals.
    pub fn scales(&self) -> bool {
        let e = self.e as i64;
        self.hodge_rebased == self.hodge.mul_int(e) && self.newton_rebased == self.newton.mul_int(e)
    }
}

impl ResElement {
    pub fn new(parts: Vec<MatL>) -> Result<ResElement> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidArgument("a restriction-of-scalars element needs g >= 1 parts".into()));
        };
        for p in &parts {
            if p.n() != first.n() {
                return Err(Error::LengthMismatch { left: first.n(), right: p.n() });
            }
            if **p.ctx() != **first.ctx() {
                return Err(Error::InvalidArgument("parts live in different coefficient fields".into()));
            }
        }
        Ok(ResElement { parts })
    }

    pub fn g(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.parts[0].n()
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.parts[0].ctx()
    }

    pub fn parts(&self) -> &[MatL] {
        &self.parts
    }

    fn part(&self, i: i64) -> &MatL {
        &self.parts[i.rem_euclid(self.g() as i64) as usize]
    }

    /// `σ(b)_i = σ(b_{i−1})`.
    pub fn sigma(&self) -> ResElement {
        let g = self.g() as i64;
        ResElement { parts: (0..g).map(|i| self.part(i - 1).sigma()).collect() }
    }

    /// `((bσ)^k)_i = b_i·σ(b_{i−1})·…·σ^{k−1}(b_{i−k+1})`.
    pub fn twisted_power(&self, k: u64) -> ResElement {
        let g = self.g() as i64;
        let parts = (0..g)
            .map(|i| {
                let mut acc = MatL::identity(self.ctx(), self.n());
                for j in 0..k as i64 {
                    acc = acc.mul(&self.part(i - j).sigma_pow(j as u64)).expect("same size");
                }
                acc
            })
            .collect();
        ResElement { parts }
    }

    /// Entrywise substitution `π ↦ ϖ^e`, for mixed extensions.
    pub fn rebase(&self, e: u32) -> ResElement {
        ResElement { parts: self.parts.iter().map(|p| p.rebase(e)).collect() }
    }
}

impl GOType {
    pub fn new(g: usize, members: impl IntoIterator<Item = usize>) -> Result<GOType> {
        if g == 0 {
            return Err(Error::InvalidArgument("g must be positive".into()));
        }
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&i| i >= g) {
            return Err(Error::RangeError(format!("type member {bad} outside Z/{g}Z")));
        }
        Ok(GOType { g, members })
    }

    pub fn full(g: usize) -> GOType {
        GOType { g, members: (0..g).collect() }
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.g
    }

    /// Every type of `Z/gZ`.
    pub fn all(g: usize) -> Vec<GOType> {
        (0u32..1 << g)
            .map(|mask| GOType { g, members: (0..g).filter(|i| mask >> i & 1 == 1).collect() })
            .collect()
    }
}

/// Per-index Hodge points.
pub fn res_hodge(b: &ResElement) -> Result<Vec<Cocharacter>> {
    b.parts.iter().map(hodge_point).collect()
}

/// Common per-factor Newton point.
///
/// For `K = lcm(g, m)` the operator `(bσ)^K` preserves factor 0 and acts
/// there linearly through `((bσ)^K)_0`, so its eigenvalue valuations are `K·ν`.
pub fn res_newton(b: &ResElement) -> Result<Cocharacter> {
    let k = (b.g() as u64).lcm(&(b.ctx().m() as u64));
    let p = b.twisted_power(k);
    Ok(p.parts[0].eigen_valuations()?.div_int(k as i64))
}

fn check_profile(b: &ResElement) -> Result<()> {
    let expected = Cocharacter::from_ints(&[1, 0]);
    for (index, p) in b.parts.iter().enumerate() {
        let h = hodge_point(p)?;
        if h != expected {
            return Err(Error::BadHodgeProfile { index, found: h.to_string() });
        }
    }
    Ok(())
}

/// `i ∈ τ` iff `μ(b_i·σ(b_{i−1})) = (1,1)`.
pub fn go_type(b: &ResElement) -> Result<GOType> {
    check_profile(b)?;
    let sq = b.twisted_power(2);
    let ones = Cocharacter::from_ints(&[1, 1]);
    let mut members = BTreeSet::new();
    for (i, p) in sq.parts.iter().enumerate() {
        if hodge_point(p)? == ones {
            members.insert(i);
        }
    }
    Ok(GOType { g: b.g(), members })
}

/// Largest subset of `τ` with no two cyclically consecutive members, by
/// exhaustive search over subsets.
pub fn max_spaced_subset(tau: &GOType) -> usize {
    let members: Vec<usize> = tau.members.iter().copied().collect();
    let g = tau.g;
    let mut best = 0;
    for mask in 0u64..1 << members.len() {
        let chosen: Vec<usize> = (0..members.len()).filter(|k| mask >> k & 1 == 1).map(|k| members[k]).collect();
        if chosen.len() <= best {
            continue;
        }
        let set: BTreeSet<usize> = chosen.iter().copied().collect();
        if chosen.iter().all(|&i| !set.contains(&((i + 1) % g))) {
            best = chosen.len();
        }
    }
    best
}

pub fn go_lambda(tau: &GOType) -> Q {
    if tau.g % 2 == 1 && tau.is_full() {
        return Q::new(1, 2);
    }
    Q::new(max_spaced_subset(tau) as i64, tau.g as i64)
}

pub fn go_beta(tau: &GOType) -> Cocharacter {
    let l = go_lambda(tau);
    Cocharacter::new(vec![Q::one() - l, l])
}

/// `A_τ = ((a_i, −π), (1, 0))_i` with generic nonzero constants `a_i`, and
/// `a_i = 0` exactly when `i + 1 ∈ τ`.
///
/// Factor `i` of `(A_τσ)²` is `A_i·σ(A_{i−1})`, whose Hodge point is `(1,1)`
/// iff `a_{i−1} = 0`; the index shift makes the type of `A_τ` contain `τ`.
///
/// Distinct constants can still satisfy a Frobenius-twisted relation such as
/// `a_0 = σ(a_2)` that lowers the Newton point. Several seeded draws are made
/// and the first one whose Newton point is maximal among them is returned.
pub fn go_generic_matrix(ctx: &Arc<FieldCtx>, tau: &GOType, seed: u64) -> Result<ResElement> {
    const DRAWS: u64 = 16;
    let g = tau.g;
    let zero_at = |i: usize| tau.members.contains(&((i + 1) % g));
    let needed = (0..g).filter(|&i| !zero_at(i)).count();
    let available = ctx.q() as usize - 1;
    if needed > available {
        return Err(Error::DegreeTooSmall {
            p: ctx.p(),
            m: ctx.m(),
            reason: format!("{needed} distinct nonzero constants needed, field has {available}"),
        });
    }
    let minus_pi = LaurentSeries::monomial(ctx, ctx.from_int(-1), 1);
    let draw = |attempt: u64| -> Result<ResElement> {
        let mut rng = sample::stream(seed, tag::GO_GENERIC, (attempt << 16) | g as u64);
        let mut units: Vec<u32> = (1..ctx.q()).collect();
        units.shuffle(&mut rng);
        let mut next = units.into_iter();
        let parts = (0..g)
            .map(|i| {
                let a = if zero_at(i) {
                    LaurentSeries::zero(ctx)
                } else {
                    LaurentSeries::constant(ctx, FFElem(next.next().expect("counted above")))
                };
                MatL::from_rows(
                    ctx,
                    vec![vec![a, minus_pi.clone()], vec![LaurentSeries::one(ctx), LaurentSeries::zero(ctx)]],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        ResElement::new(parts)
    };
    let mut best: Option<(ResElement, Cocharacter)> = None;
    for attempt in 0..DRAWS {
        let a = draw(attempt)?;
        let nu = res_newton(&a)?;
        let better = match &best {
            None => true,
            Some((_, b)) => nu != *b && b.dominates(&nu)?,
        };
        if better {
            best = Some((a, nu));
        }
    }
    Ok(best.expect("at least one draw").0)
}

impl DisplayParams {
    pub fn new(g: u32, i: u32, j: u32, m: u32, c: LaurentSeries) -> Result<DisplayParams> {
        let p = DisplayParams { g, i, j, m, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let DisplayParams { g, i, j, m, .. } = *self;
        if i + j != g || j > i || m < j {
            return Err(Error::InvalidParams(format!(
                "need i+j=g, j<=i, m>=j; got g={g} i={i} j={j} m={m}"
            )));
        }
        if self.c.is_exact_zero() || self.c.valuation()? != 0 {
            return Err(Error::InvalidParams(format!("c = {} is not a unit", self.c)));
        }
        Ok(())
    }

    /// The expected invariant `n = min{m, i}`.
    pub fn n(&self) -> u32 {
        self.m.min(self.i)
    }
}

/// `[[T^m, c·T^i], [T^j, 0]]`.
pub fn ag_display(params: &DisplayParams) -> Result<MatL> {
    params.validate()?;
    let ctx = params.c.ctx();
    let t = |k: u32| LaurentSeries::monomial(ctx, FFElem::ONE, k as i64);
    MatL::from_rows(
        ctx,
        vec![vec![t(params.m), params.c.shift(params.i as i64)], vec![t(params.j), LaurentSeries::zero(ctx)]],
    )
}

/// `j` = smaller Hodge slope of `F`; `n + j` = smaller Hodge slope of `(Fσ)²`.
pub fn ag_invariants(f: &MatL) -> Result<AgInvariants> {
    if f.n() != 2 {
        return Err(Error::LengthMismatch { left: f.n(), right: 2 });
    }
    let min = |c: Cocharacter| c.min_slope().expect("nonempty").to_integer();
    let j = min(hodge_point(f)?);
    let j2 = min(hodge_point(&f.twisted_power(2))?);
    Ok(AgInvariants { j, n: j2 - j })
}

/// `λ(n) = min{n/g, 1/2}`.
pub fn ag_lambda(n: i64, g: i64) -> Result<Q> {
    if g < 1 || n < 0 || n > g {
        return Err(Error::RangeError(format!("need 0 <= n <= g and g >= 1, got n={n} g={g}")));
    }
    Ok(Q::new(n, g).min(Q::new(1, 2)))
}

/// Newton point of the display divided by `g`: `(1 − λ(n), λ(n))` per the theorem.
pub fn ag_expected_newton(n: i64, g: i64) -> Result<Cocharacter> {
    let l = ag_lambda(n, g)?;
    Ok(Cocharacter::new(vec![Q::one() - l, l]))
}

pub fn base_change_check(b: &MatL, e: u32) -> Result<BaseChangeReport> {
    if e == 0 {
        return Err(Error::InvalidArgument("ramification index must be positive".into()));
    }
    let r = b.rebase(e);
    Ok(BaseChangeReport {
        e,
        hodge: hodge_point(b)?,
        newton: newton_point(b)?,
        hodge_rebased: hodge_point(&r)?,
        newton_rebased: newton_point(&r)?,
    })
}
