//! Rational cocharacters of the diagonal torus of `GL_n` modulo permutations.
//!
//! A [`Cocharacter`] is stored as its dominant (non-increasing) representative.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Rational64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocharacter {
    slopes: Vec<Q>,
}

/// A superbasic block: slope `h/m` in lowest terms occupying `m` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuperbasicBlock {
    pub slope: Q,
    pub size: usize,
}

/// Concave polygon through the prefix sums, keeping only the points where the slope changes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(i64, Q)>,
}

impl Cocharacter {
    pub fn new(mut slopes: Vec<Q>) -> Cocharacter {
        slopes.sort_unstable_by(|a, b| b.cmp(a));
        Cocharacter { slopes }
    }

    pub fn from_ints(slopes: &[i64]) -> Cocharacter {
        Self::new(slopes.iter().map(|&s| Q::from_integer(s)).collect())
    }

    pub fn zero(n: usize) -> Cocharacter {
        Cocharacter { slopes: vec![Q::zero(); n] }
    }

    /// Constant cocharacter `(r, …, r)`.
    pub fn constant(n: usize, r: Q) -> Cocharacter {
        Cocharacter { slopes: vec![r; n] }
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    /// Slopes in non-increasing order.
    pub fn slopes(&self) -> &[Q] {
        &self.slopes
    }

    pub fn total(&self) -> Q {
        self.slopes.iter().sum()
    }

    pub fn max_slope(&self) -> Option<Q> {
        self.slopes.first().copied()
    }

    pub fn min_slope(&self) -> Option<Q> {
        self.slopes.last().copied()
    }

    /// Largest minus smallest slope.
    pub fn spread(&self) -> Q {
        match (self.max_slope(), self.min_slope()) {
            (Some(a), Some(b)) => a - b,
            _ => Q::zero(),
        }
    }

    /// Prefix sums `S_0 = 0, S_1, …, S_n`.
    pub fn prefix_sums(&self) -> Vec<Q> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = Q::zero();
        out.push(acc);
        for &s in &self.slopes {
            acc += s;
            out.push(acc);
        }
        out
    }

    fn same_len(&self, other: &Cocharacter) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { left: self.len(), right: other.len() });
        }
        Ok(())
    }

    fn same_total(&self, other: &Cocharacter) -> Result<()> {
        self.same_len(other)?;
        let (a, b) = (self.total(), other.total());
        if a != b {
            return Err(Error::SumMismatch { left: a.to_string(), right: b.to_string() });
        }
        Ok(())
    }

    /// `self ≺ other`: prefix sums bounded above by those of `other`, equal totals.
    pub fn dominates(&self, other: &Cocharacter) -> Result<bool> {
        self.same_len(other)?;
        let (a, b) = (self.prefix_sums(), other.prefix_sums());
        let n = self.len();
        Ok(a[n] == b[n] && a.iter().zip(&b).all(|(x, y)| x <= y))
    }

    /// `|x, x'| = Σ_{λ_i > λ'_i} (λ_i − λ'_i)` on dominant representatives.
    pub fn metric(&self, other: &Cocharacter) -> Result<Q> {
        self.same_total(other)?;
        Ok(self
            .slopes
            .iter()
            .zip(&other.slopes)
            .filter(|(a, b)| a > b)
            .map(|(a, b)| a - b)
            .sum())
    }

    pub fn oplus(&self, other: &Cocharacter) -> Result<Cocharacter> {
        self.same_len(other)?;
        Ok(Self::new(self.slopes.iter().zip(&other.slopes).map(|(a, b)| a + b).collect()))
    }

    /// `(λ_1 + λ'_n, λ_2 + λ'_{n−1}, …)`, re-sorted.
    pub fn oplus_w0(&self, other: &Cocharacter) -> Result<Cocharacter> {
        self.same_len(other)?;
        Ok(Self::new(
            self.slopes.iter().zip(other.slopes.iter().rev()).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn scale(&self, r: Q) -> Cocharacter {
        Self::new(self.slopes.iter().map(|&s| s * r).collect())
    }

    pub fn mul_int(&self, k: i64) -> Cocharacter {
        self.scale(Q::from_integer(k))
    }

    pub fn div_int(&self, k: i64) -> Cocharacter {
        self.scale(Q::new(1, k))
    }

    /// Componentwise difference of dominant representatives, without re-sorting.
    pub(crate) fn raw_sub(&self, other: &Cocharacter) -> Result<Vec<Q>> {
        self.same_len(other)?;
        Ok(self.slopes.iter().zip(&other.slopes).map(|(a, b)| a - b).collect())
    }

    /// Split into superbasic blocks, in dominant order.
    pub fn superbasic_parts(&self) -> Result<Vec<SuperbasicBlock>> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.len() {
            let s = self.slopes[i];
            let mult = self.slopes[i..].iter().take_while(|&&t| t == s).count();
            let size = *s.denom() as usize;
            if mult % size != 0 {
                return Err(Error::NotANewtonPoint(format!(
                    "slope {s} has multiplicity {mult}, not divisible by {size}"
                )));
            }
            out.extend((0..mult / size).map(|_| SuperbasicBlock { slope: s, size }));
            i += mult;
        }
        Ok(out)
    }

    pub fn is_newton_point(&self) -> bool {
        self.superbasic_parts().is_ok()
    }

    pub fn polygon(&self) -> NewtonPolygon {
        let sums = self.prefix_sums();
        let mut vertices = vec![(0, sums[0])];
        for (x, &y) in sums.iter().enumerate().skip(1) {
            if x == self.len() || self.slopes[x] != self.slopes[x - 1] {
                vertices.push((x as i64, y));
            }
        }
        NewtonPolygon { vertices }
    }

    /// Maximal vertical distance between the two polygons; attained at an integer abscissa.
    pub fn min_gap(&self, other: &Cocharacter) -> Result<Q> {
        self.same_total(other)?;
        Ok(self
            .prefix_sums()
            .iter()
            .zip(other.prefix_sums())
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Q::zero))
    }

    /// Slopes as `"num/den"` strings (integers without denominator).
    pub fn to_strings(&self) -> Vec<String> {
        self.slopes.iter().map(|s| s.to_string()).collect()
    }

    pub fn parse_slopes<S: AsRef<str>>(items: &[S]) -> Result<Cocharacter> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let r = Q::from_str(t).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(r)
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.slopes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl NewtonPolygon {
    /// Height at an integer abscissa, by linear interpolation between vertices.
    pub fn height(&self, x: i64) -> Q {
        for w in self.vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x0 <= x && x <= x1 {
                return y0 + (y1 - y0) * Q::new(x - x0, x1 - x0);
            }
        }
        self.vertices.last().map(|v| v.1).unwrap_or_else(Q::zero)
    }
}

/// Every valid Newton point of `GL_n` whose slopes lie in `[lo, hi)` and
/// have denominators at most `max_den`, in canonical order.
pub fn newton_points_in_window(n: usize, lo: Q, hi: Q, max_den: usize) -> Vec<Cocharacter> {
    let mut candidates = Vec::new();
    for d in 1..=max_den.min(n) {
        let d64 = d as i64;
        let start = (lo * d64).ceil().to_integer();
        for h in start.. {
            let s = Q::new(h, d64);
            if s >= hi {
                break;
            }
            if h.gcd(&d64) == 1 {
                candidates.push(SuperbasicBlock { slope: s, size: d });
            }
        }
    }
    candidates.sort_by_key(|b| std::cmp::Reverse(b.slope));
    let mut out = BTreeSet::new();
    let mut current = Vec::new();
    fill_blocks(&candidates, 0, n, &mut current, &mut out);
    out.into_iter().collect()
}

fn fill_blocks(
    blocks: &[SuperbasicBlock],
    from: usize,
    remaining: usize,
    current: &mut Vec<Q>,
    out: &mut BTreeSet<Cocharacter>,
) {
    if remaining == 0 {
        out.insert(Cocharacter::new(current.clone()));
        return;
    }
    for (i, b) in blocks.iter().enumerate().skip(from) {
        if b.size <= remaining {
            current.extend(std::iter::repeat_n(b.slope, b.size));
            fill_blocks(blocks, i, remaining - b.size, current, out);
            current.truncate(current.len() - b.size);
        }
    }
}

/// Valid Newton points `ν` of `GL_n` with `|ν, x| ≤ radius`.
///
/// With equal totals every coordinate difference is bounded by the metric,
/// so the search only visits slopes within `radius` of the matching slope of `x`.
pub fn newton_points_near(x: &Cocharacter, radius: Q) -> Vec<Cocharacter> {
    let n = x.len();
    let options: Vec<Vec<Q>> = x
        .slopes()
        .iter()
        .map(|&s| {
            let mut v = BTreeSet::new();
            for d in 1..=n as i64 {
                let lo = ((s - radius) * d).ceil().to_integer();
                let hi = ((s + radius) * d).floor().to_integer();
                for h in lo..=hi {
                    v.insert(Q::new(h, d));
                }
            }
            v.into_iter().rev().collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    choose_near(&options, x, radius, &mut cur, &mut out);
    out
}

fn choose_near(
    options: &[Vec<Q>],
    x: &Cocharacter,
    radius: Q,
    cur: &mut Vec<Q>,
    out: &mut Vec<Cocharacter>,
) {
    let i = cur.len();
    if i == options.len() {
        let c = Cocharacter { slopes: cur.clone() };
        if c.is_newton_point() && c.metric(x).is_ok_and(|d| d <= radius) {
            out.push(c);
        }
        return;
    }
    for &s in &options[i] {
        if cur.last().is_some_and(|&prev| s > prev) {
            continue;
        }
        cur.push(s);
        choose_near(options, x, radius, cur, out);
        cur.pop();
    }
}
