//! Example families at finite `n`: degree sequences with a few large
//! degrees, evaluated through the closed-form bounds only.

use num_integer::Roots;
use thiserror::Error;

use crate::bipartite::{bipartite_leading_term, bipartite_subgraph_bounds_with};
use crate::bound::{BoundError, OrderPolicy, ProbabilityBound};
use crate::diagnostics::{
    corollary_diagnostics, corollary_diagnostics_bipartite, DiagnosticMode, DiagnosticReport,
};
use crate::generic::{
    avoidance_leading, forbidden_bounds_with, leading_term, subgraph_bounds_with,
};
use crate::model::{BipartiteGraph, DegreeSequence, LabelledGraph, ModelError, Part};
use crate::rational::{log10_abs, Rational};

/// Largest right side built for `ex5`.
pub const MAX_BIPARTITE_SIDE: u64 = 10_000_000;
/// Largest `n` accepted by the generic families.
pub const MAX_GENERIC_N: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Linear maximum degree, triangle on the three `⌊√n⌋` vertices.
    Ex1,
    /// `Ex1` with a circulant `r`-regular forbidden graph.
    Ex2,
    /// Cycle on the first `⌊√n⌋` vertices.
    Ex3,
    /// Forbidden triangle on the three largest degrees.
    Ex4,
    /// Bipartite 4-cycle.
    Ex5,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Ex1,
        Family::Ex2,
        Family::Ex3,
        Family::Ex4,
        Family::Ex5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ex1 => "ex1",
            Family::Ex2 => "ex2",
            Family::Ex3 => "ex3",
            Family::Ex4 => "ex4",
            Family::Ex5 => "ex5",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("n = {0} is too small for this family")]
    TooSmall(u64),
    #[error("n = {n} exceeds the evaluation cap of {cap}")]
    TooLarge { n: u64, cap: u64 },
    #[error("r = {r} is not realisable as a circulant on {n} vertices avoiding X")]
    BadRegular { r: u64, n: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    pub n: u64,
    /// Regularity of the forbidden graph in `ex2`.
    pub r: u64,
    /// Whether the `ex5` cycle uses the largest left degree.
    pub hub: bool,
}

impl FamilyParams {
    pub fn new(n: u64) -> Self {
        Self { n, r: 2, hub: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExampleProblem {
    GenericContain {
        d: DegreeSequence,
        x: LabelledGraph,
        l: LabelledGraph,
    },
    GenericForbid {
        d: DegreeSequence,
        y: LabelledGraph,
    },
    BipartiteContain {
        s: DegreeSequence,
        t: DegreeSequence,
        x: BipartiteGraph,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleInstance {
    pub family: Family,
    pub params: FamilyParams,
    pub problem: ExampleProblem,
    /// Fix-ups applied to make the sequence realisable.
    pub adjustments: Vec<String>,
}

/// `⌊ln n⌋`. The f64 logarithm is exact enough: `e^k` is never within f64 resolution of an integer for `k ≤ 40`.
pub fn floor_ln(n: u64) -> u64 {
    let mut k = (n as f64).ln().floor() as u64;
    while ((k + 1) as f64).exp() <= n as f64 {
        k += 1;
    }
    while k > 0 && (k as f64).exp() > n as f64 {
        k -= 1;
    }
    k
}

pub fn floor_sqrt(n: u64) -> u64 {
    n.sqrt()
}

fn even_fix(mut degrees: Vec<u64>, adjustments: &mut Vec<String>) -> Vec<u64> {
    if degrees.iter().sum::<u64>() % 2 == 1 {
        let last = degrees.len() - 1;
        degrees[last] -= 1;
        adjustments.push(format!(
            "degree sum odd: last entry lowered to {}",
            degrees[last]
        ));
    }
    degrees
}

fn ex1_degrees(n: u64, adjustments: &mut Vec<String>) -> Vec<u64> {
    let mut d = vec![n / 10];
    d.extend([floor_sqrt(n); 3]);
    d.extend(std::iter::repeat_n(floor_ln(n), (n - 4) as usize));
    even_fix(d, adjustments)
}

/// Circulant `r`-regular graph on a cycle ordering that puts vertices 1, 2, 3 a third of the way apart.
pub fn circulant_avoiding_triangle(n: u64, r: u64) -> Result<LabelledGraph, FamilyError> {
    let nu = n as usize;
    if r == 0 {
        return Ok(LabelledGraph::empty(nu));
    }
    if r >= n || (r % 2 == 1 && n % 2 == 1) {
        return Err(FamilyError::BadRegular { r, n });
    }
    let anchors = [(1usize, 0usize), (2, nu / 3), (3, 2 * nu / 3)];
    let mut order: Vec<usize> = vec![usize::MAX; nu];
    for &(v, pos) in &anchors {
        order[pos] = v;
    }
    let mut rest = (0..nu).filter(|v| !(1..=3).contains(v));
    for slot in order.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = rest.next().expect("enough vertices");
    }
    let mut edges = Vec::with_capacity(nu * r as usize / 2);
    for j in 1..=(r / 2) as usize {
        for i in 0..nu {
            edges.push((order[i], order[(i + j) % nu]));
        }
    }
    if r % 2 == 1 {
        for i in 0..nu / 2 {
            edges.push((order[i], order[i + nu / 2]));
        }
    }
    let triangle = [(1, 2), (1, 3), (2, 3)];
    if edges
        .iter()
        .any(|&(a, b)| triangle.contains(&(a.min(b), a.max(b))))
    {
        return Err(FamilyError::BadRegular { r, n });
    }
    LabelledGraph::new(nu, edges).map_err(|_| FamilyError::BadRegular { r, n })
}

fn cap(n: u64, cap: u64) -> Result<(), FamilyError> {
    if n > cap {
        return Err(FamilyError::TooLarge { n, cap });
    }
    Ok(())
}

/// Builds the instance of a family at the given parameters.
pub fn build(family: Family, params: FamilyParams) -> Result<ExampleInstance, FamilyError> {
    let n = params.n;
    let nu = n as usize;
    let mut adjustments = Vec::new();
    let problem = match family {
        Family::Ex1 | Family::Ex2 => {
            if n < 16 {
                return Err(FamilyError::TooSmall(n));
            }
            cap(n, MAX_GENERIC_N)?;
            let d = DegreeSequence::generic(ex1_degrees(n, &mut adjustments));
            let x = LabelledGraph::new(nu, [(1, 2), (1, 3), (2, 3)])?;
            let l = if family == Family::Ex2 {
                circulant_avoiding_triangle(n, params.r)?
            } else {
                LabelledGraph::empty(nu)
            };
            ExampleProblem::GenericContain { d, x, l }
        }
        Family::Ex3 => {
            if n < 16 {
                return Err(FamilyError::TooSmall(n));
            }
            cap(n, MAX_GENERIC_N)?;
            let k = floor_sqrt(n) as usize;
            let mut degrees = vec![floor_sqrt(n)];
            degrees.extend(std::iter::repeat_n(floor_ln(n), nu - 1));
            let d = DegreeSequence::generic(even_fix(degrees, &mut adjustments));
            let x = LabelledGraph::new(nu, (0..k).map(|i| (i, (i + 1) % k)))?;
            ExampleProblem::GenericContain {
                d,
                x,
                l: LabelledGraph::empty(nu),
            }
        }
        Family::Ex4 => {
            if n < 16 {
                return Err(FamilyError::TooSmall(n));
            }
            cap(n, MAX_GENERIC_N)?;
            let mut degrees = vec![n / 4, floor_sqrt(n)];
            degrees.extend(std::iter::repeat_n(floor_ln(n), nu - 2));
            let d = DegreeSequence::generic(even_fix(degrees, &mut adjustments));
            let y = LabelledGraph::new(nu, [(0, 1), (0, 2), (1, 2)])?;
            ExampleProblem::GenericForbid { d, y }
        }
        Family::Ex5 => {
            if n < 16 {
                return Err(FamilyError::TooSmall(n));
            }
            let mut s = vec![n / 2];
            s.extend(std::iter::repeat_n(floor_sqrt(n), nu - 1));
            let total: u64 = s.iter().sum();
            let ell = floor_ln(n);
            let (full, rem) = (total / ell, total % ell);
            let right = full + (rem > 0) as u64;
            cap(right, MAX_BIPARTITE_SIDE)?;
            let mut t = vec![ell; full as usize];
            if rem > 0 {
                t.push(rem);
                adjustments.push(format!(
                    "right side: {full} entries of {ell} plus one entry {rem} to balance sums"
                ));
            }
            let left_cycle = if params.hub { [0, 1] } else { [1, 2] };
            let x = BipartiteGraph::new(
                nu,
                t.len(),
                [
                    (left_cycle[0], 0),
                    (left_cycle[0], 1),
                    (left_cycle[1], 0),
                    (left_cycle[1], 1),
                ],
            )?;
            ExampleProblem::BipartiteContain {
                s: DegreeSequence::new(s, Part::Left),
                t: DegreeSequence::new(t, Part::Right),
                x,
            }
        }
    };
    Ok(ExampleInstance {
        family,
        params,
        problem,
        adjustments,
    })
}

/// Bounds, diagnostics and asymptotic target of one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleEvaluation {
    pub bound: ProbabilityBound,
    pub diagnostics: DiagnosticReport,
    /// `Π(X)`, `Π′(X)` or `Φ(Y)`.
    pub leading: Rational,
    pub target_formula: &'static str,
    /// `log10` of the asymptotic target, since some targets underflow f64.
    pub target_log10: f64,
    /// Whether every per-edge term of both sides is positive.
    pub applicable: bool,
}

impl ExampleEvaluation {
    /// `upper / lower` as a float, when both sides apply.
    pub fn bound_ratio(&self) -> Option<f64> {
        let (lo, up) = (self.bound.lower_value()?, self.bound.upper_raw()?);
        Some(10f64.powf(log10_abs(up) - log10_abs(lo)))
    }

    /// `side / leading` for the upper and lower sides.
    pub fn relative_to_leading(&self) -> (Option<f64>, Option<f64>) {
        let base = log10_abs(&self.leading);
        let rel = |v: Option<&Rational>| v.map(|v| 10f64.powf(log10_abs(v) - base));
        (rel(self.bound.lower_value()), rel(self.bound.upper_raw()))
    }

    pub fn target(&self) -> f64 {
        10f64.powf(self.target_log10)
    }
}

fn log10_falling(a: u64, b: u64) -> f64 {
    (0..b).map(|i| ((a - i) as f64).log10()).sum()
}

/// Evaluates the family's bound through its theorem, its diagnostics and its target.
pub fn evaluate(
    inst: &ExampleInstance,
    policy: OrderPolicy,
) -> Result<ExampleEvaluation, BoundError> {
    let n = inst.params.n as f64;
    let ln = n.ln();
    match &inst.problem {
        ExampleProblem::GenericContain { d, x, l } => {
            let bound = subgraph_bounds_with(d, x, l, policy)?;
            let diagnostics = corollary_diagnostics(d, x, l, DiagnosticMode::Contain)?;
            let leading = leading_term(d, x)?;
            let (target_formula, target_log10) = if inst.family == Family::Ex3 {
                // The degrees are ⌊ln n⌋, so the target uses that value in place of ln n.
                let k = x.edge_count() as u64;
                let ell = floor_ln(inst.params.n) as f64;
                let m = d.total() / 2;
                let v = n.log10() + (2 * k - 2) as f64 * ell.log10()
                    - k as f64 * 2f64.log10()
                    - log10_falling(m, k);
                ("n·⌊ln n⌋^(2m(X)-2) / (2^m(X) [m(G)]_m(X))", v)
            } else {
                ("1/ln³n", -3.0 * ln.log10())
            };
            Ok(finish(
                bound,
                diagnostics,
                leading,
                target_formula,
                target_log10,
            ))
        }
        ExampleProblem::GenericForbid { d, y } => {
            let l0 = LabelledGraph::empty(d.len());
            let bound = forbidden_bounds_with(d, &l0, y, policy)?;
            let diagnostics = corollary_diagnostics(d, y, &l0, DiagnosticMode::Forbid)?;
            let leading = avoidance_leading(d, y)?;
            let target = 0.8 / (1.0 + n.sqrt() / (4.0 * ln));
            Ok(finish(
                bound,
                diagnostics,
                leading,
                "(4/5)(1+√n/(4 ln n))⁻¹",
                target.log10(),
            ))
        }
        ExampleProblem::BipartiteContain { s, t, x } => {
            let l = BipartiteGraph::empty(s.len(), t.len());
            let bound = bipartite_subgraph_bounds_with(s, t, x, &l, policy)?;
            let diagnostics =
                corollary_diagnostics_bipartite(s, t, x, &l, DiagnosticMode::Contain)?;
            let leading = bipartite_leading_term(s, t, x)?;
            let (formula, v) = if inst.params.hub {
                (
                    "ln⁴n/(4n³)",
                    4.0 * ln.log10() - 4f64.log10() - 3.0 * n.log10(),
                )
            } else {
                ("(ln n/n)⁴", 4.0 * (ln.log10() - n.log10()))
            };
            Ok(finish(bound, diagnostics, leading, formula, v))
        }
    }
}

fn finish(
    bound: ProbabilityBound,
    diagnostics: DiagnosticReport,
    leading: Rational,
    target_formula: &'static str,
    target_log10: f64,
) -> ExampleEvaluation {
    let applicable = bound.lower.is_applicable() && bound.upper.is_applicable();
    ExampleEvaluation {
        bound,
        diagnostics,
        leading,
        target_formula,
        target_log10,
        applicable,
    }
}
