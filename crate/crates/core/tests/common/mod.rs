//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use isolab::cochar::Q;
use isolab::resgroups::ResElement;
use isolab::sample::{self, EntrySpec};
use isolab::{FieldCtx, LaurentSeries, MatL};

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz_det(rows: &[Vec<LaurentSeries>], ctx: &Arc<FieldCtx>) -> LaurentSeries {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = LaurentSeries::zero(ctx);
    permute(&mut perm, 0, &mut |p| {
        let mut term = LaurentSeries::one(ctx);
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&rows[i][j]);
            if term.is_exact_zero() {
                return;
            }
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        total = if inversions % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// For each `k`, the least valuation of a nonzero `k×k` minor. Over a DVR this
/// equals the sum of the `k` smallest elementary-divisor valuations.
pub fn minor_valuations(b: &MatL) -> Vec<i64> {
    let n = b.n();
    let rows = b.rows();
    (1..=n)
        .map(|k| {
            let mut best = i64::MAX;
            for r in subsets(n, k) {
                for c in subsets(n, k) {
                    let sub: Vec<Vec<LaurentSeries>> =
                        r.iter().map(|&i| c.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                    let d = leibniz_det(&sub, b.ctx());
                    if !d.is_exact_zero() {
                        best = best.min(d.valuation().unwrap());
                    }
                }
            }
            best
        })
        .collect()
}

/// Polynomial over `L`, lowest degree first.
type Poly = Vec<LaurentSeries>;

fn poly_add(a: &Poly, b: &Poly, ctx: &Arc<FieldCtx>) -> Poly {
    (0..a.len().max(b.len()))
        .map(|i| {
            let z = LaurentSeries::zero(ctx);
            a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z))
        })
        .collect()
}

fn poly_mul(a: &Poly, b: &Poly, ctx: &Arc<FieldCtx>) -> Poly {
    let mut out = vec![LaurentSeries::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn laplace(m: &[Vec<Poly>], ctx: &Arc<FieldCtx>) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = vec![LaurentSeries::zero(ctx)];
    for j in 0..n {
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let mut term = poly_mul(&m[0][j], &laplace(&minor, ctx), ctx);
        if j % 2 == 1 {
            term = term.iter().map(|x| x.neg()).collect();
        }
        total = poly_add(&total, &term, ctx);
    }
    total
}

/// `det(X·I − b)` by cofactor expansion along the first row.
pub fn cofactor_char_poly(b: &MatL) -> Poly {
    let ctx = b.ctx();
    let n = b.n();
    let m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = b.get(i, j).neg();
                    if i == j {
                        vec![c, LaurentSeries::one(ctx)]
                    } else {
                        vec![c]
                    }
                })
                .collect()
        })
        .collect();
    let mut p = laplace(&m, ctx);
    p.resize(n + 1, LaurentSeries::zero(ctx));
    p
}

/// `λ(τ)` from the run structure of `τ ⊆ Z/gZ`: a run of `r` consecutive
/// members admits `⌈r/2⌉` spaced elements, the whole cycle `⌊g/2⌋`.
pub fn lambda_from_runs(g: usize, members: &[usize]) -> Q {
    let inside = |i: usize| members.contains(&(i % g));
    if members.len() == g {
        return if g % 2 == 1 { Q::new(1, 2) } else { Q::new((g / 2) as i64, g as i64) };
    }
    // Start scanning just after a non-member so no run wraps around the start.
    let start = (0..g).find(|&i| !inside(i)).unwrap() + 1;
    let mut total = 0;
    let mut run: usize = 0;
    for off in 0..g {
        if inside(start + off) {
            run += 1;
        } else {
            total += run.div_ceil(2);
            run = 0;
        }
    }
    total += run.div_ceil(2);
    Q::new(total as i64, g as i64)
}

/// Random `b` with Hodge profile `((1,0), …)`: parts `[[a, π·u], [1, π·w]]` with `w ∈ πO`,
/// σ-conjugated by a random element of `GL_2(O_L)^g`.
pub fn sample_res(ctx: &Arc<FieldCtx>, g: usize, rng: &mut sample::Rand) -> ResElement {
    let unit = EntrySpec { vmin: 0, vmax: 0, extra_terms: 2, zero_prob: 0.0 };
    let integral = EntrySpec { vmin: 0, vmax: 2, extra_terms: 2, zero_prob: 0.3 };
    let parts: Vec<MatL> = (0..g)
        .map(|_| {
            let a = match rand::Rng::random_range(rng, 0..3) {
                0 => LaurentSeries::zero(ctx),
                1 => sample::series(ctx, unit, rng),
                _ => sample::series(ctx, integral, rng).shift(1),
            };
            let u = sample::series(ctx, unit, rng).shift(1);
            let w = sample::series(ctx, integral, rng).shift(2);
            MatL::from_rows(ctx, vec![vec![a, u], vec![LaurentSeries::one(ctx), w]]).unwrap()
        })
        .collect();
    let conj: Vec<(MatL, MatL)> = (0..g).map(|_| sample::integral_with_inverse(ctx, 2, 4, rng)).collect();
    let moved = (0..g)
        .map(|i| {
            let prev = &conj[(i + g - 1) % g].0;
            conj[i].1.mul(&parts[i]).unwrap().mul(&prev.sigma()).unwrap()
        })
        .collect();
    ResElement::new(moved).unwrap()
}
