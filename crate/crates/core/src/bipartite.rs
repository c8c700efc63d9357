//! Bounds for uniform random bipartite graphs with a given degree pair.
//!
//! Left degrees are `s` on `S`, right degrees `t` on `T`. A forbidden graph
//! has degrees `(l, m)` and a conditioning graph `(h, i)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bound::{
    BoundError, BoundSide, EdgeOrder, EdgeTerm, OrderPolicy, ProbabilityBound, Theorem,
};
use crate::degree::{alpha_from_profile, DegreeProfile, Residual};
use crate::model::{BipartiteGraph, DegreeSequence, Edge, ModelError};
use crate::rational::{falling_factorial, Rational};

fn check_size(
    s: &DegreeSequence,
    t: &DegreeSequence,
    g: &BipartiteGraph,
) -> Result<(), BoundError> {
    if g.sides() != (s.len(), t.len()) {
        return Err(ModelError::SizeMismatch {
            expected: s.len() + t.len(),
            found: g.sides().0 + g.sides().1,
        }
        .into());
    }
    Ok(())
}

fn edge_total(s: &DegreeSequence, t: &DegreeSequence) -> Result<u64, BoundError> {
    let m = s.total();
    if m != t.total() {
        return Err(BoundError::UnbalancedSides);
    }
    Ok(m)
}

fn sides_of(g: &BipartiteGraph) -> (Vec<u64>, Vec<u64>) {
    let (a, b) = g.degree_sequences();
    (a.as_slice().to_vec(), b.as_slice().to_vec())
}

fn sum_profile(a: &[u64], b: &[u64]) -> DegreeProfile {
    DegreeProfile::from_values(a.iter().zip(b).map(|(x, y)| x + y))
}

fn frac(num: Rational, denom: u64) -> Rational {
    num / Rational::from_integer(BigInt::from(denom))
}

/// `1 - (T_H(s_u + l_u) + S_H(t_v + m_v)) / (m(G) - m(H))`.
fn p_core(
    s_res: &DegreeProfile,
    t_res: &DegreeProfile,
    su_lu: u64,
    tv_mv: u64,
    denom: u64,
) -> Rational {
    let num = t_res.eval_int(su_lu) + s_res.eval_int(tv_mv);
    Rational::one() - Rational::new(BigInt::from(num), BigInt::from(denom))
}

/// `1 - (S_H(α_u(t, m, s, h)) + T_H(α_v(s, l, t, i))) / (m(G) - m(H))`.
fn q_core(
    s_res: &DegreeProfile,
    t_res: &DegreeProfile,
    t_plus_m: &DegreeProfile,
    s_plus_l: &DegreeProfile,
    ru: u64,
    rv: u64,
    denom: u64,
) -> Rational {
    let a = s_res
        .eval(&alpha_from_profile(t_plus_m, ru))
        .expect("nonnegative");
    let b = t_res
        .eval(&alpha_from_profile(s_plus_l, rv))
        .expect("nonnegative");
    Rational::one() - frac(a + b, denom)
}

struct Sides<'a> {
    s: Residual<'a>,
    t: Residual<'a>,
}

impl<'a> Sides<'a> {
    fn new(s: &'a [u64], t: &'a [u64]) -> Self {
        Self {
            s: Residual::new(s),
            t: Residual::new(t),
        }
    }

    fn with(s: &'a [u64], t: &'a [u64], h: &BipartiteGraph) -> Result<Self, BoundError> {
        let mut r = Self::new(s, t);
        for &e in h.edges() {
            r.take(e)?;
        }
        Ok(r)
    }

    fn take(&mut self, (u, v): Edge) -> Result<(), BoundError> {
        self.s.take(u)?;
        self.t.take(v).map_err(|_| ModelError::NegativeDegree {
            vertex: self.s_len() + v,
        })?;
        Ok(())
    }

    fn s_len(&self) -> usize {
        self.s.profile.len() as usize
    }
}

struct Inputs {
    s: Vec<u64>,
    t: Vec<u64>,
    l: Vec<u64>,
    m: Vec<u64>,
    edges: u64,
}

fn inputs(
    s: &DegreeSequence,
    t: &DegreeSequence,
    h: &BipartiteGraph,
    l: &BipartiteGraph,
    (u, v): Edge,
) -> Result<Inputs, BoundError> {
    check_size(s, t, h)?;
    check_size(s, t, l)?;
    if u >= s.len() {
        return Err(ModelError::VertexOutOfRange {
            vertex: u,
            size: s.len(),
        }
        .into());
    }
    if v >= t.len() {
        return Err(ModelError::VertexOutOfRange {
            vertex: v,
            size: t.len(),
        }
        .into());
    }
    let (lv, mv) = sides_of(l);
    Ok(Inputs {
        s: s.as_slice().to_vec(),
        t: t.as_slice().to_vec(),
        l: lv,
        m: mv,
        edges: edge_total(s, t)?,
    })
}

fn denominator(edges: u64, h: &BipartiteGraph) -> Result<u64, BoundError> {
    match edges.checked_sub(h.edge_count() as u64) {
        Some(x) if x > 0 => Ok(x),
        _ => Err(BoundError::DivisionByZero),
    }
}

/// `p(s, t, H, L, uv)`.
pub fn p_term(
    s: &DegreeSequence,
    t: &DegreeSequence,
    h: &BipartiteGraph,
    l: &BipartiteGraph,
    uv: Edge,
) -> Result<Rational, BoundError> {
    let x = inputs(s, t, h, l, uv)?;
    let denom = denominator(x.edges, h)?;
    let r = Sides::with(&x.s, &x.t, h)?;
    let (u, v) = uv;
    Ok(p_core(
        &r.s.profile,
        &r.t.profile,
        x.s[u] + x.l[u],
        x.t[v] + x.m[v],
        denom,
    ))
}

/// `q(s, t, H, L, uv)`.
pub fn q_term(
    s: &DegreeSequence,
    t: &DegreeSequence,
    h: &BipartiteGraph,
    l: &BipartiteGraph,
    uv: Edge,
) -> Result<Rational, BoundError> {
    let x = inputs(s, t, h, l, uv)?;
    let denom = denominator(x.edges, h)?;
    let r = Sides::with(&x.s, &x.t, h)?;
    let (u, v) = uv;
    let tm = sum_profile(&x.t, &x.m);
    let sl = sum_profile(&x.s, &x.l);
    Ok(q_core(
        &r.s.profile,
        &r.t.profile,
        &tm,
        &sl,
        r.s.get(u),
        r.t.get(v),
        denom,
    ))
}

/// Single-edge bounds on `P(uv ∈ G)` for `G` uniform in the bipartite class with `H` present and `L` absent.
pub fn bipartite_single_edge_bounds(
    s: &DegreeSequence,
    t: &DegreeSequence,
    h: &BipartiteGraph,
    l: &BipartiteGraph,
    uv: Edge,
) -> Result<ProbabilityBound, BoundError> {
    let x = inputs(s, t, h, l, uv)?;
    let (u, v) = uv;
    if let Some((a, b)) = h.first_common_edge(l) {
        return Err(ModelError::Overlap(a, b).into());
    }
    if h.contains(u, v) || l.contains(u, v) {
        return Err(BoundError::EdgeAlreadyFixed(u, v));
    }
    let r = Sides::with(&x.s, &x.t, h)?;
    let (ru, rv) = (r.s.get(u), r.t.get(v));
    let theorem = Theorem::BipartiteSingleEdge;
    if ru == 0 || rv == 0 {
        return Ok(ProbabilityBound::zero(theorem, vec![0]));
    }
    let denom = denominator(x.edges, h)?;
    let c = Rational::new(BigInt::from(denom), BigInt::from(ru * rv));
    let p = p_core(
        &r.s.profile,
        &r.t.profile,
        x.s[u] + x.l[u],
        x.t[v] + x.m[v],
        denom,
    );
    let tm = sum_profile(&x.t, &x.m);
    let sl = sum_profile(&x.s, &x.l);
    let q = q_core(&r.s.profile, &r.t.profile, &tm, &sl, ru, rv, denom);
    let upper = (p > Rational::zero()).then(|| (Rational::one() + &c * &p).recip());
    let lower = (q > Rational::zero()).then(|| (Rational::one() + &c / &q).recip());
    let side = |value: Option<Rational>, term: Rational| BoundSide {
        failing: value.is_none().then_some(0),
        value,
        order: vec![0],
        terms: vec![EdgeTerm {
            edge: uv,
            value: term,
        }],
    };
    Ok(ProbabilityBound {
        theorem,
        leading: c,
        correction: None,
        lower: side(lower, q),
        upper: side(upper, p),
        exact_zero: false,
    })
}

/// `Π'(X) = ∏_S [s_i]_{x_i} ∏_T [t_j]_{y_j} / [m(G)]_{m(X)}`.
pub fn bipartite_leading_term(
    s: &DegreeSequence,
    t: &DegreeSequence,
    x: &BipartiteGraph,
) -> Result<Rational, BoundError> {
    check_size(s, t, x)?;
    let m = edge_total(s, t)?;
    let (xs, ys) = x.degree_sequences();
    let (bs, bt) = x.boundary();
    let mut num = BigInt::one();
    for i in bs {
        num *= falling_factorial(s.get(i), xs.get(i));
    }
    for j in bt {
        num *= falling_factorial(t.get(j), ys.get(j));
    }
    let den = falling_factorial(m, x.edge_count() as u64);
    if den.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(num, den))
}

/// `φ' = 1 + (Σ_{uv∈X} s_u t_v / m(X)) / (m(G) - m(X))`; `None` when `X` uses every edge.
pub fn bipartite_containment_correction(
    s: &DegreeSequence,
    t: &DegreeSequence,
    x: &BipartiteGraph,
) -> Result<Option<Rational>, BoundError> {
    check_size(s, t, x)?;
    let m = edge_total(s, t)?;
    let k = x.edge_count() as u64;
    if k == 0 {
        return Ok(Some(Rational::one()));
    }
    let rest = match m.checked_sub(k) {
        Some(r) if r > 0 => r,
        _ => return Ok(None),
    };
    let sum: BigInt = x
        .edges()
        .iter()
        .map(|&(u, v)| BigInt::from(s.get(u)) * t.get(v))
        .sum();
    Ok(Some(
        Rational::one() + Rational::new(sum, BigInt::from(k * rest)),
    ))
}

/// `Φ'(Y) = ∏_{pq∈Y} (1 + s_p t_q / m(G))^-1`.
pub fn bipartite_avoidance_leading(
    s: &DegreeSequence,
    t: &DegreeSequence,
    y: &BipartiteGraph,
) -> Result<Rational, BoundError> {
    check_size(s, t, y)?;
    let m = edge_total(s, t)?;
    if m == 0 {
        return Err(BoundError::DivisionByZero);
    }
    let mut acc = Rational::one();
    for &(p, q) in y.edges() {
        acc *= Rational::new(BigInt::from(m), BigInt::from(m + s.get(p) * t.get(q)));
    }
    Ok(acc)
}

fn ordered_edges(x: &BipartiteGraph, order: &EdgeOrder) -> Result<Vec<Edge>, BoundError> {
    order.check(x.edge_count())?;
    Ok(order.permutation.iter().map(|&i| x.edges()[i]).collect())
}

fn product_side(terms: &[EdgeTerm], map: impl Fn(&Rational) -> Rational) -> Option<Rational> {
    let mut acc = Rational::one();
    for term in terms {
        if term.value <= Rational::zero() {
            return None;
        }
        acc *= map(&term.value);
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

/// Bounds on `P(X ⊆ G)` for `G` uniform in the bipartite class with `L` absent.
pub fn bipartite_subgraph_bounds(
    s: &DegreeSequence,
    t: &DegreeSequence,
    x: &BipartiteGraph,
    l: &BipartiteGraph,
    order: &EdgeOrder,
) -> Result<ProbabilityBound, BoundError> {
    check_size(s, t, x)?;
    check_size(s, t, l)?;
    if let Some((u, v)) = x.first_common_edge(l) {
        return Err(BoundError::EventOverlap(u, v));
    }
    let m = edge_total(s, t)?;
    let edges = ordered_edges(x, order)?;
    let theorem = Theorem::BipartiteContainment;
    let (xs, ys) = x.degree_sequences();
    let (bs, bt) = x.boundary();
    if bs.iter().any(|&i| xs.get(i) > s.get(i)) || bt.iter().any(|&j| ys.get(j) > t.get(j)) {
        return Ok(ProbabilityBound::zero(theorem, order.permutation.clone()));
    }
    let (sv, tv) = (s.as_slice(), t.as_slice());
    let (lv, mv) = sides_of(l);
    let tm = sum_profile(tv, &mv);
    let sl = sum_profile(sv, &lv);
    let mut r = Sides::new(sv, tv);
    let mut p_terms = Vec::with_capacity(edges.len());
    let mut q_terms = Vec::with_capacity(edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        let denom = m - i as u64;
        let p = p_core(
            &r.s.profile,
            &r.t.profile,
            sv[u] + lv[u],
            tv[v] + mv[v],
            denom,
        );
        let q = q_core(
            &r.s.profile,
            &r.t.profile,
            &tm,
            &sl,
            r.s.get(u),
            r.t.get(v),
            denom,
        );
        p_terms.push(EdgeTerm {
            edge: (u, v),
            value: p,
        });
        q_terms.push(EdgeTerm {
            edge: (u, v),
            value: q,
        });
        r.take((u, v))?;
    }
    let leading = bipartite_leading_term(s, t, x)?;
    let correction = bipartite_containment_correction(s, t, x)?;
    let upper = product_side(&p_terms, |v| v.recip()).map(|p| &leading * p);
    let lower = match (&correction, product_side(&q_terms, |v| v.clone())) {
        (Some(phi), Some(p)) => Some(&leading * p / phi.pow(edges.len() as i32)),
        _ => None,
    };
    Ok(ProbabilityBound {
        theorem,
        lower: side(lower, q_terms, order, correction.is_none()),
        upper: side(upper, p_terms, order, false),
        leading,
        correction,
        exact_zero: false,
    })
}

/// Bounds on `P(Y ∩ G = ∅)` for `G` uniform in the bipartite class with `L0` absent.
pub fn bipartite_forbidden_bounds(
    s: &DegreeSequence,
    t: &DegreeSequence,
    l0: &BipartiteGraph,
    y: &BipartiteGraph,
    order: &EdgeOrder,
) -> Result<ProbabilityBound, BoundError> {
    check_size(s, t, y)?;
    check_size(s, t, l0)?;
    if let Some((u, v)) = y.first_common_edge(l0) {
        return Err(BoundError::EventOverlap(u, v));
    }
    let m = edge_total(s, t)?;
    if m == 0 {
        return Err(BoundError::DivisionByZero);
    }
    let edges = ordered_edges(y, order)?;
    let (sv, tv) = (s.as_slice(), t.as_slice());
    let (mut lv, mut mv) = sides_of(l0);
    let s_prof = DegreeProfile::from_values(sv.iter().copied());
    let t_prof = DegreeProfile::from_values(tv.iter().copied());
    let mut tm = sum_profile(tv, &mv);
    let mut sl = sum_profile(sv, &lv);
    let mut p_terms = Vec::with_capacity(edges.len());
    let mut q_terms = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        let p = p_core(&s_prof, &t_prof, sv[u] + lv[u], tv[v] + mv[v], m);
        let q = q_core(&s_prof, &t_prof, &tm, &sl, sv[u], tv[v], m);
        p_terms.push(EdgeTerm {
            edge: (u, v),
            value: p,
        });
        q_terms.push(EdgeTerm {
            edge: (u, v),
            value: q,
        });
        sl.replace(sv[u] + lv[u], sv[u] + lv[u] + 1);
        lv[u] += 1;
        tm.replace(tv[v] + mv[v], tv[v] + mv[v] + 1);
        mv[v] += 1;
    }
    let leading = bipartite_avoidance_leading(s, t, y)?;
    let upper = product_side(&q_terms, |v| v.recip()).map(|p| &leading * p);
    let lower = product_side(&p_terms, |v| v.clone()).map(|p| &leading * p);
    Ok(ProbabilityBound {
        theorem: Theorem::BipartiteAvoidance,
        lower: side(lower, p_terms, order, false),
        upper: side(upper, q_terms, order, false),
        leading,
        correction: None,
        exact_zero: false,
    })
}

pub fn bipartite_subgraph_bounds_with(
    s: &DegreeSequence,
    t: &DegreeSequence,
    x: &BipartiteGraph,
    l: &BipartiteGraph,
    policy: OrderPolicy,
) -> Result<ProbabilityBound, BoundError> {
    let all: Result<Vec<_>, _> = EdgeOrder::expand(policy, x.edge_count())
        .iter()
        .map(|o| bipartite_subgraph_bounds(s, t, x, l, o))
        .collect();
    Ok(crate::bound::tightest(all?).expect("at least one order"))
}

pub fn bipartite_forbidden_bounds_with(
    s: &DegreeSequence,
    t: &DegreeSequence,
    l0: &BipartiteGraph,
    y: &BipartiteGraph,
    policy: OrderPolicy,
) -> Result<ProbabilityBound, BoundError> {
    let all: Result<Vec<_>, _> = EdgeOrder::expand(policy, y.edge_count())
        .iter()
        .map(|o| bipartite_forbidden_bounds(s, t, l0, y, o))
        .collect();
    Ok(crate::bound::tightest(all?).expect("at least one order"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Part;
    use crate::rational::ratio;

    fn side_seq(v: &[u64], part: Part) -> DegreeSequence {
        DegreeSequence::new(v.to_vec(), part)
    }

    fn ones(k: usize) -> (DegreeSequence, DegreeSequence) {
        (
            side_seq(&vec![1; k], Part::Left),
            side_seq(&vec![1; k], Part::Right),
        )
    }

    #[test]
    fn perfect_matching_terms() {
        let (s, t) = ones(3);
        let e = BipartiteGraph::empty(3, 3);
        assert_eq!(p_term(&s, &t, &e, &e, (0, 0)).unwrap(), ratio(1, 3));
        assert_eq!(q_term(&s, &t, &e, &e, (0, 0)).unwrap(), ratio(1, 3));
        let b = bipartite_single_edge_bounds(&s, &t, &e, &e, (0, 0)).unwrap();
        assert_eq!(b.upper_raw(), Some(&ratio(1, 2)));
        assert_eq!(b.lower_value(), Some(&ratio(1, 10)));
        let (s, t) = ones(2);
        let e = BipartiteGraph::empty(2, 2);
        assert_eq!(p_term(&s, &t, &e, &e, (0, 0)).unwrap(), Rational::zero());
        assert_eq!(q_term(&s, &t, &e, &e, (0, 0)).unwrap(), Rational::zero());
    }

    #[test]
    fn perfect_matching_products() {
        let (s, t) = ones(3);
        let e = BipartiteGraph::empty(3, 3);
        let x = BipartiteGraph::new(3, 3, [(0, 0)]).unwrap();
        assert_eq!(bipartite_leading_term(&s, &t, &x).unwrap(), ratio(1, 3));
        let b = bipartite_subgraph_bounds(&s, &t, &x, &e, &EdgeOrder::given(1)).unwrap();
        assert_eq!(b.upper_raw(), Some(&Rational::one()));
        let b = bipartite_forbidden_bounds(&s, &t, &e, &x, &EdgeOrder::given(1)).unwrap();
        assert_eq!(b.leading, ratio(3, 4));
        assert_eq!(b.lower_value(), Some(&ratio(1, 4)));
        assert_eq!(b.upper_raw(), Some(&ratio(9, 4)));
    }

    #[test]
    fn incremental_terms_agree_with_direct_terms() {
        let s = side_seq(&[3, 2, 2, 1], Part::Left);
        let t = side_seq(&[2, 2, 2, 2], Part::Right);
        let x = BipartiteGraph::new(4, 4, [(0, 1), (1, 1), (0, 3)]).unwrap();
        let l = BipartiteGraph::new(4, 4, [(2, 0), (3, 2)]).unwrap();
        let b = bipartite_subgraph_bounds(
            &s,
            &t,
            &x,
            &l,
            &EdgeOrder::from_permutation(vec![1, 2, 0]).unwrap(),
        )
        .unwrap();
        let mut h = BipartiteGraph::empty(4, 4);
        for (p, q) in b.upper.terms.iter().zip(&b.lower.terms) {
            assert_eq!(p.value, p_term(&s, &t, &h, &l, p.edge).unwrap());
            assert_eq!(q.value, q_term(&s, &t, &h, &l, q.edge).unwrap());
            h = h.with_edge(p.edge.0, p.edge.1).unwrap();
        }
        let b = bipartite_forbidden_bounds(&s, &t, &l, &x, &EdgeOrder::given(3)).unwrap();
        let e = BipartiteGraph::empty(4, 4);
        let mut lj = l.clone();
        for (p, q) in b.lower.terms.iter().zip(&b.upper.terms) {
            assert_eq!(p.value, p_term(&s, &t, &e, &lj, p.edge).unwrap());
            assert_eq!(q.value, q_term(&s, &t, &e, &lj, q.edge).unwrap());
            lj = lj.with_edge(p.edge.0, p.edge.1).unwrap();
        }
    }

    #[test]
    fn unbalanced_sides_rejected() {
        let s = side_seq(&[1, 1], Part::Left);
        let t = side_seq(&[1], Part::Right);
        let e = BipartiteGraph::empty(2, 1);
        assert_eq!(
            p_term(&s, &t, &e, &e, (0, 0)),
            Err(BoundError::UnbalancedSides)
        );
    }
}
