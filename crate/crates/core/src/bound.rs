//! Result types shared by the generic and bipartite bounds.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::degree::DegreeError;
use crate::model::{Edge, ModelError};
use crate::rational::{min_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error("a term has a zero denominator (no edges left outside the conditioning graph)")]
    DivisionByZero,
    #[error("the degree sum is odd, so the class is empty")]
    OddDegreeSum,
    #[error("left and right degree sums differ, so the class is empty")]
    UnbalancedSides,
    #[error("edge {0}-{1} is already fixed by the conditioning graphs")]
    EdgeAlreadyFixed(usize, usize),
    #[error("event edges overlap the forbidden set at {0}-{1}")]
    EventOverlap(usize, usize),
    #[error("edge order is not a permutation of 0..{0}")]
    BadOrder(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    GenericSingleEdge,
    GenericContainment,
    GenericAvoidance,
    BipartiteSingleEdge,
    BipartiteContainment,
    BipartiteAvoidance,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::GenericSingleEdge => "generic-single-edge",
            Theorem::GenericContainment => "generic-containment",
            Theorem::GenericAvoidance => "generic-avoidance",
            Theorem::BipartiteSingleEdge => "bipartite-single-edge",
            Theorem::BipartiteContainment => "bipartite-containment",
            Theorem::BipartiteAvoidance => "bipartite-avoidance",
        }
    }
}

/// One factor of a product bound, attached to the edge it was evaluated at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTerm {
    pub edge: Edge,
    pub value: Rational,
}

/// One side of a bound. `value` is `None` when some term is nonpositive or
/// the side is otherwise undefined; `failing` then points at the first bad term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSide {
    pub value: Option<Rational>,
    pub order: Vec<usize>,
    pub terms: Vec<EdgeTerm>,
    pub failing: Option<usize>,
}

impl BoundSide {
    pub(crate) fn exact(value: Rational, order: Vec<usize>) -> Self {
        Self {
            value: Some(value),
            order,
            terms: Vec::new(),
            failing: None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.value.is_some()
    }

    /// Product of the term values.
    pub fn product(&self) -> Rational {
        self.terms
            .iter()
            .fold(Rational::one(), |acc, t| acc * &t.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityBound {
    pub theorem: Theorem,
    /// Leading factor (`Π`, `Π'`, `Φ` or `Φ'`); for a single edge, the
    /// coefficient `c` in `(1 + c·f)^-1`.
    pub leading: Rational,
    /// The `φ` correction of the containment lower bound, if defined.
    pub correction: Option<Rational>,
    pub lower: BoundSide,
    /// Raw upper bound; may exceed one.
    pub upper: BoundSide,
    /// Set when the probability is zero for structural reasons and nothing was evaluated.
    pub exact_zero: bool,
}

impl ProbabilityBound {
    pub(crate) fn zero(theorem: Theorem, order: Vec<usize>) -> Self {
        Self {
            theorem,
            leading: Rational::zero(),
            correction: None,
            lower: BoundSide::exact(Rational::zero(), order.clone()),
            upper: BoundSide::exact(Rational::zero(), order),
            exact_zero: true,
        }
    }

    pub fn lower_value(&self) -> Option<&Rational> {
        self.lower.value.as_ref()
    }

    pub fn upper_raw(&self) -> Option<&Rational> {
        self.upper.value.as_ref()
    }

    pub fn upper_clamped(&self) -> Option<Rational> {
        self.upper
            .value
            .clone()
            .map(|u| min_rational(u, Rational::one()))
    }

    pub fn is_applicable(&self) -> bool {
        self.lower.is_applicable() || self.upper.is_applicable()
    }

    /// Whether `p` lies between every applicable side.
    pub fn brackets(&self, p: &Rational) -> bool {
        self.lower.value.as_ref().is_none_or(|l| l <= p)
            && self.upper.value.as_ref().is_none_or(|u| p <= u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderPolicy {
    Given,
    Random { seed: u64 },
    BestOf { samples: usize, seed: u64 },
}

/// Order in which the event edges are processed, as indices into the sorted edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrder {
    pub permutation: Vec<usize>,
    pub policy: OrderPolicy,
}

impl EdgeOrder {
    pub fn given(m: usize) -> Self {
        Self {
            permutation: (0..m).collect(),
            policy: OrderPolicy::Given,
        }
    }

    pub fn random(m: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut permutation: Vec<usize> = (0..m).collect();
        permutation.shuffle(&mut rng);
        Self {
            permutation,
            policy: OrderPolicy::Random { seed },
        }
    }

    pub fn from_permutation(permutation: Vec<usize>) -> Result<Self, BoundError> {
        let m = permutation.len();
        let mut seen = vec![false; m];
        for &i in &permutation {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(BoundError::BadOrder(m));
            }
        }
        Ok(Self {
            permutation,
            policy: OrderPolicy::Given,
        })
    }

    /// Orders to evaluate under a policy; best-of draws `samples` shuffles from one stream.
    pub fn expand(policy: OrderPolicy, m: usize) -> Vec<Self> {
        match policy {
            OrderPolicy::Given => vec![Self::given(m)],
            OrderPolicy::Random { seed } => vec![Self::random(m, seed)],
            OrderPolicy::BestOf { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples.max(1))
                    .map(|_| {
                        let mut permutation: Vec<usize> = (0..m).collect();
                        permutation.shuffle(&mut rng);
                        Self {
                            permutation,
                            policy,
                        }
                    })
                    .collect()
            }
        }
    }

    pub(crate) fn check(&self, m: usize) -> Result<(), BoundError> {
        if self.permutation.len() != m {
            return Err(BoundError::BadOrder(m));
        }
        Self::from_permutation(self.permutation.clone()).map(|_| ())
    }
}

/// Keeps the largest lower side and the smallest upper side across evaluations.
pub fn tightest(bounds: impl IntoIterator<Item = ProbabilityBound>) -> Option<ProbabilityBound> {
    let mut it = bounds.into_iter();
    let mut best = it.next()?;
    for b in it {
        if better(&b.lower.value, &best.lower.value, |a, c| a > c) {
            best.lower = b.lower;
        }
        if better(&b.upper.value, &best.upper.value, |a, c| a < c) {
            best.upper = b.upper;
        }
    }
    Some(best)
}

fn better(
    new: &Option<Rational>,
    old: &Option<Rational>,
    cmp: impl Fn(&Rational, &Rational) -> bool,
) -> bool {
    match (new, old) {
        (Some(_), None) => true,
        (Some(a), Some(b)) => cmp(a, b),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn side(v: Option<Rational>) -> BoundSide {
        BoundSide {
            value: v,
            order: vec![],
            terms: vec![],
            failing: None,
        }
    }

    #[test]
    fn tightest_picks_sides_independently() {
        let mk = |l, u| ProbabilityBound {
            theorem: Theorem::GenericContainment,
            leading: ratio(1, 1),
            correction: None,
            lower: side(l),
            upper: side(u),
            exact_zero: false,
        };
        let b = tightest([
            mk(None, Some(ratio(1, 2))),
            mk(Some(ratio(1, 9)), Some(ratio(3, 4))),
            mk(Some(ratio(1, 8)), None),
        ])
        .unwrap();
        assert_eq!(b.lower.value, Some(ratio(1, 8)));
        assert_eq!(b.upper.value, Some(ratio(1, 2)));
    }

    #[test]
    fn orders() {
        assert!(EdgeOrder::from_permutation(vec![1, 0, 2]).is_ok());
        assert_eq!(
            EdgeOrder::from_permutation(vec![1, 1]),
            Err(BoundError::BadOrder(2))
        );
        let a = EdgeOrder::random(6, 3);
        assert_eq!(a, EdgeOrder::random(6, 3));
        let mut p = a.permutation.clone();
        p.sort();
        assert_eq!(p, (0..6).collect::<Vec<_>>());
        assert_eq!(
            EdgeOrder::expand(
                OrderPolicy::BestOf {
                    samples: 4,
                    seed: 1
                },
                3
            )
            .len(),
            4
        );
    }
}
