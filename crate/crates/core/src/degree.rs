//! Lazy degree sums, the piecewise-linear degree sum `D`, and the `α`/`γ` values.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::model::{DegreeSequence, LabelledGraph, ModelError};
use crate::rational::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("degree sum evaluated at a negative argument")]
    NegativeArgument,
    #[error("excluded set must be a proper subset of the vertices")]
    NotProperSubset,
    #[error("excluded vertex {0} out of range")]
    ExcludedOutOfRange(usize),
    #[error("lazy sum of {k} degrees requested but only {available} remain")]
    TooManyDegrees { k: usize, available: usize },
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("subtracted degree exceeds the degree at vertex {0}")]
    NegativeResidual(usize),
    #[error("empty degree sequence")]
    Empty,
}

/// Multiset of degrees kept as `(value, multiplicity)` runs in decreasing order.
///
/// Evaluating `D` only needs the sorted multiset, so long sequences with few
/// distinct values stay cheap, and single-vertex updates are `O(runs)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    runs: Vec<(u64, u64)>,
    len: u64,
}

impl DegreeProfile {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        let len = v.len() as u64;
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for x in v {
            match runs.last_mut() {
                Some((val, c)) if *val == x => *c += 1,
                _ => runs.push((x, 1)),
            }
        }
        Self { runs, len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sum of the `k` largest values, `k` clamped to the length.
    pub fn lazy_sum(&self, k: u64) -> u64 {
        let mut left = k;
        let mut acc = 0;
        for &(v, c) in &self.runs {
            if left == 0 {
                break;
            }
            let take = c.min(left);
            acc += v * take;
            left -= take;
        }
        acc
    }

    /// Sum of the `k` largest values together with the `(k+1)`-th largest (0 past the end).
    fn lazy_sum_and_next(&self, k: u64) -> (u64, u64) {
        let mut left = k;
        let mut acc = 0;
        for &(v, c) in &self.runs {
            if left < c {
                return (acc + v * left, v);
            }
            acc += v * c;
            left -= c;
        }
        (acc, 0)
    }

    /// `D` at an integer argument.
    pub fn eval_int(&self, x: u64) -> u64 {
        self.lazy_sum(x)
    }

    /// `D` at a nonnegative rational argument.
    pub fn eval(&self, x: &Rational) -> Result<Rational, DegreeError> {
        if x.is_negative() {
            return Err(DegreeError::NegativeArgument);
        }
        let floor = x.floor().to_integer();
        let k = match floor.to_u64() {
            Some(k) if k < self.len => k,
            _ => return Ok(int(self.lazy_sum(self.len))),
        };
        let (sum, next) = self.lazy_sum_and_next(k);
        let frac = x - Rational::from_integer(BigInt::from(k));
        Ok(int(sum) + frac * int(next))
    }

    /// Replace one occurrence of `old` by `new`.
    pub fn replace(&mut self, old: u64, new: u64) {
        if old == new {
            return;
        }
        let i = self
            .runs
            .iter()
            .position(|r| r.0 == old)
            .expect("value present in profile");
        self.runs[i].1 -= 1;
        if self.runs[i].1 == 0 {
            self.runs.remove(i);
        }
        match self.runs.binary_search_by(|r| new.cmp(&r.0)) {
            Ok(j) => self.runs[j].1 += 1,
            Err(j) => self.runs.insert(j, (new, 1)),
        }
    }
}

/// Residual degrees `d - h`, tracked only at vertices that `h` touches.
pub struct Residual<'a> {
    d: &'a [u64],
    used: BTreeMap<usize, u64>,
    pub profile: DegreeProfile,
}

impl<'a> Residual<'a> {
    pub fn new(d: &'a [u64]) -> Self {
        Self {
            d,
            used: BTreeMap::new(),
            profile: DegreeProfile::from_values(d.iter().copied()),
        }
    }

    pub fn with(d: &'a [u64], h: &LabelledGraph) -> Result<Self, ModelError> {
        let mut r = Self::new(d);
        for &(u, v) in h.edges() {
            r.take(u)?;
            r.take(v)?;
        }
        Ok(r)
    }

    pub fn get(&self, w: usize) -> u64 {
        self.d[w] - self.used.get(&w).copied().unwrap_or(0)
    }

    pub fn take(&mut self, w: usize) -> Result<(), ModelError> {
        let old = self.get(w);
        if old == 0 {
            return Err(ModelError::NegativeDegree { vertex: w });
        }
        *self.used.entry(w).or_insert(0) += 1;
        self.profile.replace(old, old - 1);
        Ok(())
    }
}

/// Vertex set `A` whose degrees are ignored by the lazy sums.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExcludedSet(BTreeSet<usize>);

impl ExcludedSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        Self(vertices.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }
}

fn profile_outside(d: &DegreeSequence, a: &ExcludedSet) -> Result<DegreeProfile, DegreeError> {
    if let Some(&v) = a.0.iter().find(|&&v| v >= d.len()) {
        return Err(DegreeError::ExcludedOutOfRange(v));
    }
    if a.len() >= d.len() {
        return Err(DegreeError::NotProperSubset);
    }
    let values = d
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(i, _)| !a.contains(*i))
        .map(|(_, &x)| x);
    Ok(DegreeProfile::from_values(values))
}

/// `L^A(d, k)`: sum of the `k` largest degrees outside `A`.
pub fn lazy_degree_sum(d: &DegreeSequence, a: &ExcludedSet, k: usize) -> Result<u64, DegreeError> {
    let p = profile_outside(d, a)?;
    if k as u64 > p.len() {
        return Err(DegreeError::TooManyDegrees {
            k,
            available: p.len() as usize,
        });
    }
    Ok(p.lazy_sum(k as u64))
}

/// `D^A(d, x)`: linear interpolation of the lazy sums, constant past `n - |A|`.
pub fn degree_sum(
    d: &DegreeSequence,
    a: &ExcludedSet,
    x: &Rational,
) -> Result<Rational, DegreeError> {
    profile_outside(d, a)?.eval(x)
}

/// `D(n, max(r, 1)) / max(r, 1)` for a profile of `n` and a residual degree `r`.
pub fn alpha_from_profile(p: &DegreeProfile, residual: u64) -> Rational {
    let r = residual.max(1);
    Rational::new(BigInt::from(p.eval_int(r)), BigInt::from(r))
}

fn residual(g: &DegreeSequence, h: &DegreeSequence, w: usize) -> Result<u64, DegreeError> {
    g.get(w)
        .checked_sub(h.get(w))
        .ok_or(DegreeError::NegativeResidual(w))
}

fn sum_profile(n: &DegreeSequence, l: &DegreeSequence) -> Result<DegreeProfile, DegreeError> {
    if n.len() != l.len() {
        return Err(DegreeError::LengthMismatch(n.len(), l.len()));
    }
    Ok(DegreeProfile::from_values(
        n.as_slice().iter().zip(l.as_slice()).map(|(a, b)| a + b),
    ))
}

/// `α_w(n, l, g, h) = D(n + l, max(g_w - h_w, 1)) / max(g_w - h_w, 1)`.
pub fn alpha_value(
    n: &DegreeSequence,
    l: &DegreeSequence,
    g: &DegreeSequence,
    h: &DegreeSequence,
    w: usize,
) -> Result<Rational, DegreeError> {
    if g.len() != h.len() {
        return Err(DegreeError::LengthMismatch(g.len(), h.len()));
    }
    if w >= g.len() {
        return Err(DegreeError::VertexOutOfRange(w));
    }
    let p = sum_profile(n, l)?;
    Ok(alpha_from_profile(&p, residual(g, h, w)?))
}

/// `γ(n, l, g, h)`: `α` at a vertex minimising `g - h`.
pub fn gamma_value(
    n: &DegreeSequence,
    l: &DegreeSequence,
    g: &DegreeSequence,
    h: &DegreeSequence,
) -> Result<Rational, DegreeError> {
    if g.len() != h.len() {
        return Err(DegreeError::LengthMismatch(g.len(), h.len()));
    }
    if g.is_empty() {
        return Err(DegreeError::Empty);
    }
    let mut min = u64::MAX;
    for w in 0..g.len() {
        min = min.min(residual(g, h, w)?);
    }
    let p = sum_profile(n, l)?;
    Ok(alpha_from_profile(&p, min))
}
