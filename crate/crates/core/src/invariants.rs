//! Hodge and Newton points, refined Hodge signatures and the experiments
//! built on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::coeffs::{FFElem, FieldCtx};
use crate::cochar::{Cocharacter, Q};
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::matl::MatL;
use crate::sample::{self, tag};

/// Hodge points `(μ¹, …, μ^N)` of `(bσ)^1, …, (bσ)^N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrataSignature {
    pub mus: Vec<Cocharacter>,
}

impl StrataSignature {
    pub fn new(mus: Vec<Cocharacter>) -> Result<StrataSignature> {
        if let Some(first) = mus.first() {
            if let Some(bad) = mus.iter().find(|m| m.len() != first.len()) {
                return Err(Error::LengthMismatch { left: first.len(), right: bad.len() });
            }
        }
        Ok(StrataSignature { mus })
    }

    pub fn depth(&self) -> usize {
        self.mus.len()
    }

    pub fn n(&self) -> usize {
        self.mus.first().map_or(0, |m| m.len())
    }

    pub fn prefix(&self, depth: usize) -> StrataSignature {
        StrataSignature { mus: self.mus[..depth.min(self.mus.len())].to_vec() }
    }

    /// Largest spread `max − min` among the entries.
    pub fn spread(&self) -> Q {
        self.mus.iter().map(|m| m.spread()).max().unwrap_or_else(Q::zero)
    }

    /// Necessary conditions: `μ^i` has total `i·t` and `μ^i ⊕ μ¹` bounds
    /// `μ^{i+1}` from above, `μ^i ⊕_{ω₀} μ¹` from below.
    pub fn check_consistency(&self) -> Result<()> {
        let Some(first) = self.mus.first() else { return Ok(()) };
        let t = first.total();
        for (i, m) in self.mus.iter().enumerate() {
            if m.total() != t * (i as i64 + 1) {
                return Err(Error::Unrealizable(format!("entry {} has total {}, expected {}", i + 1, m.total(), t * (i as i64 + 1))));
            }
            if m.slopes().iter().any(|s| !s.is_integer()) {
                return Err(Error::Unrealizable(format!("entry {} is not integral", i + 1)));
            }
        }
        for w in self.mus.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            let upper = prev.oplus(first)?;
            let lower = prev.oplus_w0(first)?;
            if !(lower.dominates(next)? && next.dominates(&upper)?) {
                return Err(Error::Unrealizable(format!("{next} is not between {lower} and {upper}")));
            }
        }
        Ok(())
    }
}

/// Hodge point: elementary-divisor valuations.
pub fn hodge_point(b: &MatL) -> Result<Cocharacter> {
    b.smith_slopes()
}

/// Newton point: eigenvalue valuations of the norm `N_m(b)`, divided by `m`.
pub fn newton_point(b: &MatL) -> Result<Cocharacter> {
    let m = b.ctx().m() as i64;
    Ok(b.norm_map().eigen_valuations()?.div_int(m))
}

/// Twisted powers `(bσ)^1, …, (bσ)^N`, built incrementally.
pub fn twisted_powers(b: &MatL, depth: usize) -> Vec<MatL> {
    let mut out = Vec::with_capacity(depth);
    let mut cur = b.clone();
    let mut s = b.clone();
    for i in 0..depth {
        if i > 0 {
            s = s.sigma();
            cur = cur.mul(&s).expect("same size");
        }
        out.push(cur.clone());
    }
    out
}

pub fn hodge_sequence(b: &MatL, depth: usize) -> Result<StrataSignature> {
    let mus = twisted_powers(b, depth).iter().map(hodge_point).collect::<Result<Vec<_>>>()?;
    Ok(StrataSignature { mus })
}

/// Block-diagonal minimal element: for a block of slope `h/m`,
/// `e_k ↦ e_{k+h}` with `e_{k+m} = π·e_k`.
pub fn minimal_element(ctx: &Arc<FieldCtx>, nu: &Cocharacter) -> Result<MatL> {
    let blocks = nu.superbasic_parts()?;
    let n = nu.len();
    let mut b = MatL::zero(ctx, n);
    let mut base = 0;
    for blk in blocks {
        let m = blk.size as i64;
        let h = *blk.slope.numer();
        for k in 0..m {
            let row = (k + h).rem_euclid(m);
            let e = Integer::div_floor(&(k + h), &m);
            b.set(base + row as usize, base + k as usize, LaurentSeries::monomial(ctx, FFElem::ONE, e));
        }
        base += blk.size;
    }
    Ok(b)
}

/// Least common multiple of the slope denominators.
pub fn decency_exponent(nu: &Cocharacter) -> i64 {
    nu.slopes().iter().fold(1, |acc, s| acc.lcm(s.denom()))
}

/// Whether `(bσ)^s = diag(π^{sν_1}, …, π^{sν_n})` up to ordering.
pub fn decency_check(b: &MatL, s: u64) -> Result<bool> {
    if s == 0 {
        return Err(Error::InvalidArgument("decency exponent must be positive".into()));
    }
    let p = b.twisted_power(s);
    if !p.is_diagonal() {
        return Ok(false);
    }
    let mut vals = Vec::with_capacity(b.n());
    for i in 0..b.n() {
        let x = p.get(i, i);
        if !(x.is_monomial() && x.leading() == Some(FFElem::ONE)) {
            return Ok(false);
        }
        vals.push(Q::from_integer(x.start()));
    }
    Ok(Cocharacter::new(vals) == newton_point(b)?.mul_int(s as i64))
}

/// Newton point determined by `(μ(b), μ((bσ)²))` for `GL_2`.
///
/// The componentwise difference of dominant representatives is the Newton
/// point when it is itself dominant; otherwise `b` is basic.
pub fn gl2_recover(mu1: &Cocharacter, mu2: &Cocharacter) -> Result<Cocharacter> {
    if mu1.len() != 2 || mu2.len() != 2 {
        return Err(Error::LengthMismatch { left: mu1.len().max(mu2.len()), right: 2 });
    }
    StrataSignature::new(vec![mu1.clone(), mu2.clone()])?.check_consistency()?;
    let d = mu2.raw_sub(mu1)?;
    let nu = if d[0] >= d[1] {
        Cocharacter::new(d)
    } else {
        Cocharacter::constant(2, mu1.total() / 2)
    };
    if !(nu.dominates(mu1)? && nu.mul_int(2).dominates(mu2)?) {
        return Err(Error::Unrealizable(format!("recovered {nu} violates Mazur's inequality")));
    }
    Ok(nu)
}

/// Pair of `SL_n` matrices with equal signatures to depth `n−1` but different Newton points.
pub fn sln_counterexample(ctx: &Arc<FieldCtx>, n: usize) -> Result<(MatL, MatL)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let sign = |e: usize| if e % 2 == 0 { 1 } else { -1 };
    let top = (n - 1) as i64;
    let mono = |c: i64, k: i64| LaurentSeries::monomial(ctx, ctx.from_int(c), k);
    let mut b1 = MatL::zero(ctx, n);
    b1.set(0, n - 1, mono(sign(n - 1), top));
    for i in 1..n {
        b1.set(i, i - 1, mono(1, -1));
    }
    let mut b2 = MatL::zero(ctx, n);
    b2.set(0, n - 2, mono(sign(n), top));
    for i in 1..n - 1 {
        b2.set(i, i - 1, mono(1, -1));
    }
    b2.set(n - 1, n - 1, mono(1, -1));
    Ok((b1, b2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub depth: usize,
    pub level: u32,
    /// Smallest level the stability argument covers: signature spread plus one.
    pub safe_level: i64,
    pub trials: usize,
    pub baseline: StrataSignature,
    /// Trial indices whose signature differed from the baseline.
    pub violations: Vec<usize>,
    /// Trial indices whose depth-1 Hodge point differed.
    pub depth1_violations: Vec<usize>,
}

impl CongruenceReport {
    pub fn preserved(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Perturb `b` on the right by random `g ≡ 1 mod π^level` and compare signatures.
pub fn congruence_stability(
    b: &MatL,
    depth: usize,
    level: u32,
    trials: usize,
    seed: u64,
) -> Result<CongruenceReport> {
    let baseline = hodge_sequence(b, depth)?;
    let spread = baseline.spread();
    let safe_level = spread.ceil().to_integer() + 1;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sample::stream(seed, tag::CONGRUENCE, t as u64);
            let g = sample::congruence(b.ctx(), b.n(), level, &mut rng);
            let bg = b.mul(&g)?;
            let sig = hodge_sequence(&bg, depth)?;
            Ok((sig.mus[..1] != baseline.mus[..1], sig != baseline))
        })
        .collect::<Result<Vec<(bool, bool)>>>()?;
    let pick = |f: fn(&(bool, bool)) -> bool| {
        outcomes.iter().enumerate().filter(|(_, o)| f(o)).map(|(i, _)| i).collect::<Vec<_>>()
    };
    Ok(CongruenceReport {
        depth,
        level,
        safe_level,
        trials,
        baseline,
        violations: pick(|o| o.1),
        depth1_violations: pick(|o| o.0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub k: usize,
    /// `μ((bσ)^k)/k`.
    pub normalized: Cocharacter,
    /// `|ν(b), μ((bσ)^k)/k|`.
    pub distance: Q,
    /// `|kν(b), μ((bσ)^k)| = k·distance`.
    pub unnormalized: Q,
    /// `ν(b) ≺ μ((bσ)^k)/k`.
    pub mazur: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceTrace {
    pub newton: Cocharacter,
    pub rows: Vec<TraceRow>,
    /// Smallest `c` with `distance ≤ c/k` on every row.
    pub fitted_c: Q,
}

impl ConvergenceTrace {
    pub fn mazur_ok(&self) -> bool {
        self.rows.iter().all(|r| r.mazur)
    }
}

pub fn convergence_trace(b: &MatL, kmax: usize) -> Result<ConvergenceTrace> {
    let newton = newton_point(b)?;
    let mut rows = Vec::with_capacity(kmax);
    for (i, p) in twisted_powers(b, kmax).iter().enumerate() {
        let k = i + 1;
        let normalized = hodge_point(p)?.div_int(k as i64);
        let distance = newton.metric(&normalized)?;
        let mazur = newton.dominates(&normalized)?;
        let unnormalized = distance * k as i64;
        rows.push(TraceRow { k, normalized, distance, unnormalized, mazur });
    }
    let fitted_c = rows.iter().map(|r| r.distance * r.k as i64).max().unwrap_or_else(Q::zero);
    Ok(ConvergenceTrace { newton, rows, fitted_c })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub newton: Cocharacter,
    pub count: usize,
    /// First trial index that produced this Newton point.
    pub first_trial: usize,
    pub witness: MatL,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub signature: StrataSignature,
    pub attempts: usize,
    pub accepted: usize,
    pub tallies: Vec<Tally>,
}

/// Sample `b = k₁·diag(π^{μ¹})·k₂` with `k₁, k₂ ∈ GL_n(O_L)`, keep those with
/// the full signature, and tally their Newton points.
pub fn stratum_scan(
    ctx: &Arc<FieldCtx>,
    signature: &StrataSignature,
    trials: usize,
    seed: u64,
) -> Result<ScanReport> {
    let depth = signature.depth();
    let Some(mu1) = signature.mus.first() else {
        return Err(Error::InvalidArgument("empty signature".into()));
    };
    let n = mu1.len();
    let exps = mu1
        .slopes()
        .iter()
        .map(|s| {
            s.is_integer()
                .then(|| s.to_integer())
                .ok_or_else(|| Error::Unrealizable(format!("Hodge point {mu1} is not integral")))
        })
        .collect::<Result<Vec<i64>>>()?;
    let d = MatL::diag_pi(ctx, &exps);
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sample::stream(seed, tag::CARTAN, t as u64);
            let k1 = sample::unimodular(ctx, n, &mut rng);
            let k2 = sample::unimodular(ctx, n, &mut rng);
            let b = k1.mul(&d)?.mul(&k2)?;
            if hodge_sequence(&b, depth)? != *signature {
                return Ok(None);
            }
            Ok(Some((t, newton_point(&b)?, b)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tallies: BTreeMap<Cocharacter, Tally> = BTreeMap::new();
    let mut accepted = 0;
    for (t, nu, b) in hits.into_iter().flatten() {
        accepted += 1;
        tallies
            .entry(nu.clone())
            .and_modify(|e| e.count += 1)
            .or_insert(Tally { newton: nu, count: 1, first_trial: t, witness: b });
    }
    if accepted == 0 {
        return Err(Error::SamplingExhausted { attempts: trials });
    }
    let mut tallies: Vec<Tally> = tallies.into_values().collect();
    tallies.sort_by(|a, b| b.count.cmp(&a.count).then(a.first_trial.cmp(&b.first_trial)));
    Ok(ScanReport { signature: signature.clone(), attempts: trials, accepted, tallies })
}

/// The constant `n/4` bounding `|ν, μ|` for minimal elements.
pub fn minimal_bound(n: usize) -> Q {
    Q::new(n as i64, 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, m: u32) -> Arc<FieldCtx> {
        FieldCtx::new(p, m).unwrap()
    }

    fn q(a: i64, b: i64) -> Q {
        Q::new(a, b)
    }

    fn co(v: &[(i64, i64)]) -> Cocharacter {
        Cocharacter::new(v.iter().map(|&(a, b)| q(a, b)).collect())
    }

    fn ints(v: &[i64]) -> Cocharacter {
        Cocharacter::from_ints(v)
    }

    #[test]
    fn hodge_and_newton_examples() {
        let k = f(3, 2);
        assert_eq!(hodge_point(&MatL::identity(&k, 2)).unwrap(), ints(&[0, 0]));
        let third = co(&[(1, 3); 3]);
        let b = minimal_element(&k, &third).unwrap();
        assert_eq!(hodge_point(&b).unwrap(), ints(&[1, 0, 0]));
        assert_eq!(newton_point(&b).unwrap(), third);
        assert_eq!(newton_point(&MatL::diag_pi(&k, &[2, 0])).unwrap(), ints(&[2, 0]));
    }

    #[test]
    fn minimal_element_shapes() {
        let k = f(2, 1);
        let half = minimal_element(&k, &co(&[(1, 2), (1, 2)])).unwrap();
        let expect = MatL::from_monomials(&k, &[vec![None, Some((1, 1))], vec![Some((1, 0)), None]]).unwrap();
        assert_eq!(half, expect);
        assert_eq!(minimal_element(&k, &ints(&[1, 0])).unwrap(), MatL::diag_pi(&k, &[1, 0]));
        let third = minimal_element(&k, &co(&[(1, 3); 3])).unwrap();
        let expect = MatL::from_monomials(
            &k,
            &[vec![None, None, Some((1, 1))], vec![Some((1, 0)), None, None], vec![None, Some((1, 0)), None]],
        )
        .unwrap();
        assert_eq!(third, expect);
        assert!(matches!(minimal_element(&k, &co(&[(1, 2); 3])), Err(Error::NotANewtonPoint(_))));
        let neg = co(&[(-2, 3); 3]);
        assert_eq!(newton_point(&minimal_element(&k, &neg).unwrap()).unwrap(), neg);
    }

    #[test]
    fn hodge_sequences() {
        let k = f(3, 1);
        let sig = hodge_sequence(&MatL::diag_pi(&k, &[1, 0]), 4).unwrap();
        assert_eq!(sig.mus, vec![ints(&[1, 0]), ints(&[2, 0]), ints(&[3, 0]), ints(&[4, 0])]);
        let (b1, b2) = sln_counterexample(&k, 3).unwrap();
        let s1 = hodge_sequence(&b1, 3).unwrap();
        let s2 = hodge_sequence(&b2, 3).unwrap();
        assert_eq!(s1.mus, vec![ints(&[2, -1, -1]), ints(&[1, 1, -2]), ints(&[0, 0, 0])]);
        assert_eq!(s2.mus, vec![ints(&[2, -1, -1]), ints(&[1, 1, -2]), ints(&[3, 0, -3])]);
        assert_eq!(newton_point(&b1).unwrap(), ints(&[0, 0, 0]));
        assert_eq!(newton_point(&b2).unwrap(), co(&[(1, 2), (1, 2), (-1, 1)]));
    }

    #[test]
    fn sl_counterexample_has_unit_determinant() {
        let k = f(5, 1);
        for n in 2..=6 {
            let (b1, b2) = sln_counterexample(&k, n).unwrap();
            assert_eq!(b1.det(), LaurentSeries::one(&k), "n={n}");
            assert_eq!(b2.det(), LaurentSeries::one(&k), "n={n}");
        }
        let (b1, b2) = sln_counterexample(&k, 2).unwrap();
        assert_eq!(hodge_sequence(&b1, 1).unwrap(), hodge_sequence(&b2, 1).unwrap());
        assert_ne!(hodge_sequence(&b1, 2).unwrap(), hodge_sequence(&b2, 2).unwrap());
        assert!(sln_counterexample(&k, 1).is_err());
    }

    #[test]
    fn decency_examples() {
        let k = f(3, 2);
        assert!(decency_check(&MatL::diag_pi(&k, &[1, 0]), 1).unwrap());
        let half = minimal_element(&k, &co(&[(1, 2), (1, 2)])).unwrap();
        assert!(decency_check(&half, 2).unwrap());
        assert!(!decency_check(&half, 1).unwrap());
        let b = MatL::from_monomials(&k, &[vec![Some((1, 0)), Some((1, 0))], vec![None, Some((1, 1))]]).unwrap();
        assert!(!decency_check(&b, 1).unwrap());
        let nu = co(&[(2, 3), (2, 3), (2, 3), (1, 2), (1, 2), (0, 1)]);
        let s = decency_exponent(&nu);
        assert_eq!(s, 6);
        assert!(decency_check(&minimal_element(&k, &nu).unwrap(), s as u64).unwrap());
    }

    #[test]
    fn gl2_recovery_examples() {
        assert_eq!(gl2_recover(&ints(&[1, 0]), &ints(&[2, 0])).unwrap(), ints(&[1, 0]));
        assert_eq!(gl2_recover(&ints(&[1, 0]), &ints(&[1, 1])).unwrap(), co(&[(1, 2), (1, 2)]));
        assert_eq!(gl2_recover(&ints(&[2, -1]), &ints(&[3, -1])).unwrap(), ints(&[1, 0]));
        assert!(matches!(gl2_recover(&ints(&[1, 0]), &ints(&[3, 0])), Err(Error::Unrealizable(_))));
        assert!(matches!(gl2_recover(&ints(&[1, 0]), &ints(&[3, -1])), Err(Error::Unrealizable(_))));
    }

    #[test]
    fn gl2_witness_with_non_fp_unit() {
        let k = f(3, 2);
        let lam = LaurentSeries::constant(&k, k.generator());
        let entry = lam.shift(-1).sub(&lam.sigma());
        let b = MatL::from_rows(
            &k,
            vec![vec![LaurentSeries::one(&k), LaurentSeries::zero(&k)], vec![entry, LaurentSeries::pi(&k)]],
        )
        .unwrap();
        let sig = hodge_sequence(&b, 2).unwrap();
        assert_eq!(sig.mus[0], ints(&[2, -1]));
        assert_eq!(newton_point(&b).unwrap(), ints(&[1, 0]));
        assert_eq!(gl2_recover(&sig.mus[0], &sig.mus[1]).unwrap(), ints(&[1, 0]));
    }

    #[test]
    fn congruence_examples() {
        let k = f(3, 1);
        let b = MatL::diag_pi(&k, &[1, 0]);
        let r = congruence_stability(&b, 3, 2, 100, 11).unwrap();
        assert!(r.preserved());
        assert_eq!(r.safe_level, 4);
        let r = congruence_stability(&b, 3, 4, 100, 11).unwrap();
        assert!(r.preserved());
        let r = congruence_stability(&b, 3, 0, 60, 11).unwrap();
        assert!(r.depth1_violations.is_empty());
    }

    #[test]
    fn convergence_examples() {
        let k = f(2, 2);
        let t = convergence_trace(&MatL::diag_pi(&k, &[1, 0]), 6).unwrap();
        assert!(t.rows.iter().all(|r| r.distance.is_zero()));
        let half = minimal_element(&k, &co(&[(1, 2), (1, 2)])).unwrap();
        let t = convergence_trace(&half, 6).unwrap();
        let d: Vec<Q> = t.rows.iter().map(|r| r.distance).collect();
        assert_eq!(d, vec![q(1, 2), q(0, 1), q(1, 6), q(0, 1), q(1, 10), q(0, 1)]);
        let raw: Vec<Q> = t.rows.iter().map(|r| r.unnormalized).collect();
        assert_eq!(raw, vec![q(1, 2), q(0, 1), q(1, 2), q(0, 1), q(1, 2), q(0, 1)]);
        assert!(t.mazur_ok());
        assert_eq!(t.fitted_c, q(1, 2));
    }

    #[test]
    fn scans_are_single_valued_for_gl2() {
        let k = f(2, 2);
        let sig = StrataSignature::new(vec![ints(&[1, 0]), ints(&[2, 0])]).unwrap();
        let r = stratum_scan(&k, &sig, 300, 5).unwrap();
        assert_eq!(r.tallies.len(), 1);
        assert_eq!(r.tallies[0].newton, ints(&[1, 0]));
        let sig = StrataSignature::new(vec![ints(&[1, 0]), ints(&[1, 1])]).unwrap();
        let r = stratum_scan(&k, &sig, 300, 5).unwrap();
        assert_eq!(r.tallies.len(), 1);
        assert_eq!(r.tallies[0].newton, co(&[(1, 2), (1, 2)]));
        assert_eq!(r, stratum_scan(&k, &sig, 300, 5).unwrap());
    }
}
