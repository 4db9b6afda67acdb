//! Seeded random generation of series and matrices.
//!
//! Every random stream is keyed by `(seed, purpose tag, trial index)`, so a
//! trial produces the same values no matter which worker thread runs it.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffs::{FFElem, FieldCtx};
use crate::laurent::LaurentSeries;
use crate::matl::MatL;

/// Purpose tags for stream splitting.
pub mod tag {
    pub const MATRIX: u64 = 1;
    pub const CARTAN: u64 = 2;
    pub const CONGRUENCE: u64 = 3;
    pub const GO_GENERIC: u64 = 4;
    pub const PAIR: u64 = 5;
    pub const CONJUGATE: u64 = 6;
    pub const UNIT: u64 = 7;
    pub const RES: u64 = 8;
}

pub type Rand = ChaCha8Rng;

/// Independent stream for one trial of one experiment.
pub fn stream(seed: u64, tag: u64, trial: u64) -> Rand {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((tag << 48) | (trial & ((1 << 48) - 1)));
    r
}

/// Shape of random entries: valuation range, number of extra terms above
/// the leading one, and the chance that an entry is exactly zero.
#[derive(Clone, Copy, Debug)]
pub struct EntrySpec {
    pub vmin: i64,
    pub vmax: i64,
    pub extra_terms: usize,
    pub zero_prob: f64,
}

impl EntrySpec {
    pub fn new(vmin: i64, vmax: i64) -> EntrySpec {
        EntrySpec { vmin, vmax, extra_terms: 2, zero_prob: 0.15 }
    }

    pub fn extra_terms(self, extra_terms: usize) -> EntrySpec {
        EntrySpec { extra_terms, ..self }
    }

    pub fn zero_prob(self, zero_prob: f64) -> EntrySpec {
        EntrySpec { zero_prob, ..self }
    }
}

pub fn elem(ctx: &FieldCtx, rng: &mut Rand) -> FFElem {
    FFElem(rng.random_range(0..ctx.q()))
}

pub fn nonzero_elem(ctx: &FieldCtx, rng: &mut Rand) -> FFElem {
    FFElem(rng.random_range(1..ctx.q()))
}

/// Exact Laurent polynomial with valuation in `[vmin, vmax]` (or zero).
pub fn series(ctx: &Arc<FieldCtx>, spec: EntrySpec, rng: &mut Rand) -> LaurentSeries {
    if spec.zero_prob > 0.0 && rng.random_bool(spec.zero_prob) {
        return LaurentSeries::zero(ctx);
    }
    let v = rng.random_range(spec.vmin..=spec.vmax);
    let mut coeffs = vec![nonzero_elem(ctx, rng)];
    let extra = rng.random_range(0..=spec.extra_terms);
    coeffs.extend((0..extra).map(|_| elem(ctx, rng)));
    LaurentSeries::from_parts(ctx, v, coeffs, None)
}

pub fn matrix(ctx: &Arc<FieldCtx>, n: usize, spec: EntrySpec, rng: &mut Rand) -> MatL {
    let entries = (0..n * n).map(|_| series(ctx, spec, rng)).collect();
    MatL::new(ctx, n, entries).expect("square")
}

/// Random matrix with certified nonzero determinant.
pub fn invertible(ctx: &Arc<FieldCtx>, n: usize, spec: EntrySpec, rng: &mut Rand) -> MatL {
    loop {
        let b = matrix(ctx, n, spec, rng);
        if !b.det().is_exact_zero() {
            return b;
        }
    }
}

/// Element of `GL_n(O_L)`: permutation · unit lower · unit diagonal · unit upper.
/// Off-diagonal entries are short integral polynomials, zero about half the time.
pub fn unimodular(ctx: &Arc<FieldCtx>, n: usize, rng: &mut Rand) -> MatL {
    let off = EntrySpec { vmin: 0, vmax: 2, extra_terms: 1, zero_prob: 0.5 };
    let mut lo = MatL::identity(ctx, n);
    let mut up = MatL::identity(ctx, n);
    let mut d = MatL::identity(ctx, n);
    for i in 0..n {
        d.set(i, i, LaurentSeries::constant(ctx, nonzero_elem(ctx, rng)));
        for j in 0..i {
            lo.set(i, j, series(ctx, off, rng));
            up.set(j, i, series(ctx, off, rng));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut p = MatL::zero(ctx, n);
    for (i, &j) in perm.iter().enumerate() {
        p.set(i, j, LaurentSeries::one(ctx));
    }
    p.mul(&lo).and_then(|x| x.mul(&d)).and_then(|x| x.mul(&up)).expect("square")
}

/// `I + π^level·X` with `X` integral; for `level = 0` an arbitrary element of `GL_n(O_L)`.
pub fn congruence(ctx: &Arc<FieldCtx>, n: usize, level: u32, rng: &mut Rand) -> MatL {
    if level == 0 {
        return unimodular(ctx, n, rng);
    }
    let spec = EntrySpec { vmin: level as i64, vmax: level as i64 + 2, extra_terms: 2, zero_prob: 0.2 };
    MatL::identity(ctx, n).add(&matrix(ctx, n, spec, rng)).expect("square")
}

/// Invertible `g` together with its exact inverse, built from elementary
/// matrices and monomial scalings.
pub fn with_inverse(ctx: &Arc<FieldCtx>, n: usize, steps: usize, rng: &mut Rand) -> (MatL, MatL) {
    elementary_product(ctx, n, steps, false, rng)
}

/// Element of `GL_n(O_L)` together with its exact inverse.
pub fn integral_with_inverse(ctx: &Arc<FieldCtx>, n: usize, steps: usize, rng: &mut Rand) -> (MatL, MatL) {
    elementary_product(ctx, n, steps, true, rng)
}

fn elementary_product(
    ctx: &Arc<FieldCtx>,
    n: usize,
    steps: usize,
    integral: bool,
    rng: &mut Rand,
) -> (MatL, MatL) {
    let mut g = MatL::identity(ctx, n);
    let mut g_inv = MatL::identity(ctx, n);
    let vmin = if integral { 0 } else { -1 };
    let spec = EntrySpec { vmin, vmax: 1, extra_terms: 1, zero_prob: 0.0 };
    for _ in 0..steps {
        let mut e = MatL::identity(ctx, n);
        let mut e_inv = MatL::identity(ctx, n);
        if n > 1 && rng.random_bool(0.7) {
            let i = rng.random_range(0..n);
            let j = (i + rng.random_range(1..n)) % n;
            let x = series(ctx, spec, rng);
            e_inv.set(i, j, x.neg());
            e.set(i, j, x);
        } else {
            let i = rng.random_range(0..n);
            let c = nonzero_elem(ctx, rng);
            let k = if integral { 0 } else { rng.random_range(-1..=1) };
            let x = LaurentSeries::monomial(ctx, c, k);
            e_inv.set(i, i, x.inv().expect("monomial"));
            e.set(i, i, x);
        }
        g = g.mul(&e).expect("square");
        g_inv = e_inv.mul(&g_inv).expect("square");
    }
    (g, g_inv)
}
