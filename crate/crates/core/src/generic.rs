//! Bounds for uniform random graphs with a given degree sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bound::{
    BoundError, BoundSide, EdgeOrder, EdgeTerm, OrderPolicy, ProbabilityBound, Theorem,
};
use crate::degree::{alpha_from_profile, DegreeProfile, Residual};
use crate::model::{DegreeSequence, Edge, LabelledGraph, ModelError};
use crate::rational::{falling_factorial, int, Rational};

fn check_size(d: &DegreeSequence, g: &LabelledGraph) -> Result<(), BoundError> {
    if g.vertex_count() != d.len() {
        return Err(ModelError::SizeMismatch {
            expected: d.len(),
            found: g.vertex_count(),
        }
        .into());
    }
    Ok(())
}

fn twice_edges(d: &DegreeSequence) -> Result<u64, BoundError> {
    let s = d.total();
    if s % 2 == 1 {
        return Err(BoundError::OddDegreeSum);
    }
    Ok(s)
}

fn degree_vec(g: &LabelledGraph) -> Vec<u64> {
    g.degree_sequence().as_slice().to_vec()
}

/// `1 - (D_H(d_u + l_u) + D_H(d_v + l_v)) / (2m(G) - 2m(H))` from precomputed pieces.
fn f_core(residual: &DegreeProfile, du_lu: u64, dv_lv: u64, denom: u64) -> Rational {
    let num = residual.eval_int(du_lu) + residual.eval_int(dv_lv);
    Rational::one() - Rational::new(BigInt::from(num), BigInt::from(denom))
}

/// `g` analogue with `D_H(α + 2)` where `α` comes from the profile of `d + l`.
fn g_core(
    residual: &DegreeProfile,
    sum_profile: &DegreeProfile,
    ru: u64,
    rv: u64,
    denom: u64,
) -> Rational {
    let two = int(2);
    let a = residual
        .eval(&(alpha_from_profile(sum_profile, ru) + &two))
        .expect("nonnegative");
    let b = residual
        .eval(&(alpha_from_profile(sum_profile, rv) + &two))
        .expect("nonnegative");
    Rational::one() - (a + b) / int(denom)
}

struct TermInputs {
    d: Vec<u64>,
    l: Vec<u64>,
    two_m: u64,
}

fn term_inputs(
    d: &DegreeSequence,
    h: &LabelledGraph,
    l: &LabelledGraph,
    uv: Edge,
) -> Result<TermInputs, BoundError> {
    check_size(d, h)?;
    check_size(d, l)?;
    let (u, v) = uv;
    for w in [u, v] {
        if w >= d.len() {
            return Err(ModelError::VertexOutOfRange {
                vertex: w,
                size: d.len(),
            }
            .into());
        }
    }
    if u == v {
        return Err(ModelError::SelfLoop(u).into());
    }
    Ok(TermInputs {
        d: d.as_slice().to_vec(),
        l: degree_vec(l),
        two_m: twice_edges(d)?,
    })
}

fn denominator(two_m: u64, h: &LabelledGraph) -> Result<u64, BoundError> {
    match two_m.checked_sub(2 * h.edge_count() as u64) {
        Some(x) if x > 0 => Ok(x),
        _ => Err(BoundError::DivisionByZero),
    }
}

/// `f(d, H, L, uv)`.
pub fn f_term(
    d: &DegreeSequence,
    h: &LabelledGraph,
    l: &LabelledGraph,
    uv: Edge,
) -> Result<Rational, BoundError> {
    let t = term_inputs(d, h, l, uv)?;
    let denom = denominator(t.two_m, h)?;
    let r = Residual::with(&t.d, h)?;
    let (u, v) = uv;
    Ok(f_core(&r.profile, t.d[u] + t.l[u], t.d[v] + t.l[v], denom))
}

/// `g(d, H, L, uv)`.
pub fn g_term(
    d: &DegreeSequence,
    h: &LabelledGraph,
    l: &LabelledGraph,
    uv: Edge,
) -> Result<Rational, BoundError> {
    let t = term_inputs(d, h, l, uv)?;
    let denom = denominator(t.two_m, h)?;
    let r = Residual::with(&t.d, h)?;
    let sum = DegreeProfile::from_values(t.d.iter().zip(&t.l).map(|(a, b)| a + b));
    let (u, v) = uv;
    Ok(g_core(&r.profile, &sum, r.get(u), r.get(v), denom))
}

/// Single-edge bounds on `P(uv ∈ G)` for `G` uniform in the class with `H` present and `L` absent.
pub fn single_edge_bounds(
    d: &DegreeSequence,
    h: &LabelledGraph,
    l: &LabelledGraph,
    uv: Edge,
) -> Result<ProbabilityBound, BoundError> {
    let t = term_inputs(d, h, l, uv)?;
    let (u, v) = uv;
    if let Some((a, b)) = h.first_common_edge(l) {
        return Err(ModelError::Overlap(a, b).into());
    }
    if h.contains(u, v) || l.contains(u, v) {
        return Err(BoundError::EdgeAlreadyFixed(u.min(v), u.max(v)));
    }
    let r = Residual::with(&t.d, h)?;
    let (ru, rv) = (r.get(u), r.get(v));
    let theorem = Theorem::GenericSingleEdge;
    if ru == 0 || rv == 0 {
        return Ok(ProbabilityBound::zero(theorem, vec![0]));
    }
    let denom = denominator(t.two_m, h)?;
    let c = Rational::new(BigInt::from(denom), BigInt::from(ru * rv));
    let f = f_core(&r.profile, t.d[u] + t.l[u], t.d[v] + t.l[v], denom);
    let sum = DegreeProfile::from_values(t.d.iter().zip(&t.l).map(|(a, b)| a + b));
    let g = g_core(&r.profile, &sum, ru, rv, denom);
    let upper = (f > Rational::zero()).then(|| (Rational::one() + &c * &f).recip());
    let lower = (g > Rational::zero()).then(|| (Rational::one() + &c / &g).recip());
    let side = |value: Option<Rational>, term: Rational| BoundSide {
        failing: value.is_none().then_some(0),
        value,
        order: vec![0],
        terms: vec![EdgeTerm {
            edge: (u.min(v), u.max(v)),
            value: term,
        }],
    };
    Ok(ProbabilityBound {
        theorem,
        leading: c,
        correction: None,
        lower: side(lower, g),
        upper: side(upper, f),
        exact_zero: false,
    })
}

/// `Π(X) = ∏ [d_j]_{x_j} / (2^{m(X)} [m(G)]_{m(X)})`.
pub fn leading_term(d: &DegreeSequence, x: &LabelledGraph) -> Result<Rational, BoundError> {
    check_size(d, x)?;
    let m = twice_edges(d)? / 2;
    let xs = x.degree_sequence();
    let mut num = BigInt::one();
    for w in x.boundary() {
        num *= falling_factorial(d.get(w), xs.get(w));
    }
    let k = x.edge_count() as u64;
    let den = falling_factorial(m, k) << k;
    if den.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(num, den))
}

/// `φ = 1 + (Σ_{uv∈X} d_u d_v / m(X)) / (2m(G) - 2m(X))`; `None` when `X` uses every edge.
pub fn containment_correction(
    d: &DegreeSequence,
    x: &LabelledGraph,
) -> Result<Option<Rational>, BoundError> {
    check_size(d, x)?;
    let two_m = twice_edges(d)?;
    let k = x.edge_count() as u64;
    if k == 0 {
        return Ok(Some(Rational::one()));
    }
    let rest = match two_m.checked_sub(2 * k) {
        Some(r) if r > 0 => r,
        _ => return Ok(None),
    };
    let s: BigInt = x
        .edges()
        .iter()
        .map(|&(u, v)| BigInt::from(d.get(u)) * d.get(v))
        .sum();
    Ok(Some(
        Rational::one() + Rational::new(s, BigInt::from(k * rest)),
    ))
}

fn ordered_edges(x: &LabelledGraph, order: &EdgeOrder) -> Result<Vec<Edge>, BoundError> {
    order.check(x.edge_count())?;
    Ok(order.permutation.iter().map(|&i| x.edges()[i]).collect())
}

/// Bounds on `P(X ⊆ G)` for `G` uniform in the class with `L` absent, evaluated along one edge order.
pub fn subgraph_bounds(
    d: &DegreeSequence,
    x: &LabelledGraph,
    l: &LabelledGraph,
    order: &EdgeOrder,
) -> Result<ProbabilityBound, BoundError> {
    check_size(d, x)?;
    check_size(d, l)?;
    if let Some((u, v)) = x.first_common_edge(l) {
        return Err(BoundError::EventOverlap(u, v));
    }
    let two_m = twice_edges(d)?;
    let edges = ordered_edges(x, order)?;
    let theorem = Theorem::GenericContainment;
    let xs = x.degree_sequence();
    if x.boundary().iter().any(|&w| xs.get(w) > d.get(w)) {
        return Ok(ProbabilityBound::zero(theorem, order.permutation.clone()));
    }
    let dv = d.as_slice();
    let lv = degree_vec(l);
    let sum = DegreeProfile::from_values(dv.iter().zip(&lv).map(|(a, b)| a + b));
    let mut r = Residual::new(dv);
    let mut f_terms = Vec::with_capacity(edges.len());
    let mut g_terms = Vec::with_capacity(edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let denom = two_m - 2 * i as u64;
        f_terms.push(EdgeTerm {
            edge: (u, v),
            value: f_core(&r.profile, dv[u] + lv[u], dv[v] + lv[v], denom),
        });
        g_terms.push(EdgeTerm {
            edge: (u, v),
            value: g_core(&r.profile, &sum, r.get(u), r.get(v), denom),
        });
        r.take(u)?;
        r.take(v)?;
    }
    let leading = leading_term(d, x)?;
    let correction = containment_correction(d, x)?;
    let upper = product_side(&f_terms, |t| t.recip()).map(|p| &leading * p);
    let lower = match (&correction, product_side(&g_terms, |t| t.clone())) {
        (Some(phi), Some(p)) => Some(&leading * p / phi.pow(edges.len() as i32)),
        _ => None,
    };
    Ok(ProbabilityBound {
        theorem,
        lower: side(lower, g_terms, order, correction.is_none()),
        upper: side(upper, f_terms, order, false),
        leading,
        correction,
        exact_zero: false,
    })
}

/// Bounds on `P(Y ∩ G = ∅)` for `G` uniform in the class with `L0` absent.
pub fn forbidden_bounds(
    d: &DegreeSequence,
    l0: &LabelledGraph,
    y: &LabelledGraph,
    order: &EdgeOrder,
) -> Result<ProbabilityBound, BoundError> {
    check_size(d, y)?;
    check_size(d, l0)?;
    if let Some((u, v)) = y.first_common_edge(l0) {
        return Err(BoundError::EventOverlap(u, v));
    }
    let two_m = twice_edges(d)?;
    if two_m == 0 {
        return Err(BoundError::DivisionByZero);
    }
    let edges = ordered_edges(y, order)?;
    let dv = d.as_slice();
    let mut lv = degree_vec(l0);
    let base = DegreeProfile::from_values(dv.iter().copied());
    let mut sum = DegreeProfile::from_values(dv.iter().zip(&lv).map(|(a, b)| a + b));
    let mut f_terms = Vec::with_capacity(edges.len());
    let mut g_terms = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        f_terms.push(EdgeTerm {
            edge: (u, v),
            value: f_core(&base, dv[u] + lv[u], dv[v] + lv[v], two_m),
        });
        g_terms.push(EdgeTerm {
            edge: (u, v),
            value: g_core(&base, &sum, dv[u], dv[v], two_m),
        });
        for w in [u, v] {
            sum.replace(dv[w] + lv[w], dv[w] + lv[w] + 1);
            lv[w] += 1;
        }
    }
    let leading = avoidance_leading(d, y)?;
    let upper = product_side(&g_terms, |t| t.recip()).map(|p| &leading * p);
    let lower = product_side(&f_terms, |t| t.clone()).map(|p| &leading * p);
    Ok(ProbabilityBound {
        theorem: Theorem::GenericAvoidance,
        lower: side(lower, f_terms, order, false),
        upper: side(upper, g_terms, order, false),
        leading,
        correction: None,
        exact_zero: false,
    })
}

/// `Φ(Y) = ∏_{pq∈Y} (1 + d_p d_q / 2m(G))^-1`.
pub fn avoidance_leading(d: &DegreeSequence, y: &LabelledGraph) -> Result<Rational, BoundError> {
    check_size(d, y)?;
    let two_m = twice_edges(d)?;
    if two_m == 0 {
        return Err(BoundError::DivisionByZero);
    }
    let mut acc = Rational::one();
    for &(p, q) in y.edges() {
        acc *= Rational::new(
            BigInt::from(two_m),
            BigInt::from(two_m + d.get(p) * d.get(q)),
        );
    }
    Ok(acc)
}

/// Product of `map(term)` when every term is positive.
fn product_side(terms: &[EdgeTerm], map: impl Fn(&Rational) -> Rational) -> Option<Rational> {
    let mut acc = Rational::one();
    for t in terms {
        if t.value <= Rational::zero() {
            return None;
        }
        acc *= map(&t.value);
    }
    Some(acc)
}

fn side(
    value: Option<Rational>,
    terms: Vec<EdgeTerm>,
    order: &EdgeOrder,
    undefined: bool,
) -> BoundSide {
    let failing = if undefined {
        None
    } else {
        terms.iter().position(|t| t.value <= Rational::zero())
    };
    BoundSide {
        value,
        order: order.permutation.clone(),
        terms,
        failing,
    }
}

/// Containment bounds under an order policy, keeping the tightest side of each.
pub fn subgraph_bounds_with(
    d: &DegreeSequence,
    x: &LabelledGraph,
    l: &LabelledGraph,
    policy: OrderPolicy,
) -> Result<ProbabilityBound, BoundError> {
    let all: Result<Vec<_>, _> = EdgeOrder::expand(policy, x.edge_count())
        .iter()
        .map(|o| subgraph_bounds(d, x, l, o))
        .collect();
    Ok(crate::bound::tightest(all?).expect("at least one order"))
}

pub fn forbidden_bounds_with(
    d: &DegreeSequence,
    l0: &LabelledGraph,
    y: &LabelledGraph,
    policy: OrderPolicy,
) -> Result<ProbabilityBound, BoundError> {
    let all: Result<Vec<_>, _> = EdgeOrder::expand(policy, y.edge_count())
        .iter()
        .map(|o| forbidden_bounds(d, l0, y, o))
        .collect();
    Ok(crate::bound::tightest(all?).expect("at least one order"))
}
