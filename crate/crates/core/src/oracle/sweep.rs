//! Exhaustive sweeps over small classes: every bound against the exact
//! probability, and every switching claim against the exact counts.
//!
//! Jointly relabelling the degree sequence, event and forbidden set leaves
//! both the probabilities and the bounds unchanged, so sequences are taken
//! sorted and, within each run of equal degrees, only edge sets whose
//! per-vertex signatures are non-increasing are visited. Every relabelling
//! orbit still has a visited member.

use num_bigint::BigInt;
use num_traits::Zero;

use super::census::{Arity, Switchable};
use super::{ClassOracle, Layout, OracleError, DEFAULT_NODE_BUDGET};
use crate::bipartite::{
    bipartite_forbidden_bounds, bipartite_single_edge_bounds, bipartite_subgraph_bounds, p_term,
    q_term,
};
use crate::bound::{BoundError, EdgeOrder, ProbabilityBound};
use crate::exec::{map_reduce, Execution};
use crate::generic::{f_term, forbidden_bounds, g_term, single_edge_bounds, subgraph_bounds};
use crate::model::{
    is_bigraphical, is_graphical, BipartiteGraph, BipartiteInstance, DegreeSequence, Edge,
    GenericInstance, LabelledGraph, Part, ProblemInstance,
};
use crate::rational::{ceil_i128, int, to_decimal, Rational};

const KEPT_EXAMPLES: usize = 10;

/// Tally of a sweep; `examples` keeps the first few violations verbatim.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub classes: u64,
    pub instances: u64,
    pub checks: u64,
    pub violations: u64,
    pub upper_applicable: u64,
    pub lower_applicable: u64,
    pub inapplicable: u64,
    pub examples: Vec<String>,
}

impl SweepReport {
    fn merge(mut self, other: Self) -> Self {
        self.classes += other.classes;
        self.instances += other.instances;
        self.checks += other.checks;
        self.violations += other.violations;
        self.upper_applicable += other.upper_applicable;
        self.lower_applicable += other.lower_applicable;
        self.inapplicable += other.inapplicable;
        self.examples.extend(other.examples);
        self.examples.truncate(KEPT_EXAMPLES);
        self
    }

    fn violation(&mut self, msg: impl FnOnce() -> String) {
        self.violations += 1;
        if self.examples.len() < KEPT_EXAMPLES {
            self.examples.push(msg());
        }
    }

    /// Records one bound against the exact value.
    fn check_bound(
        &mut self,
        what: &str,
        bound: Result<ProbabilityBound, BoundError>,
        exact: &Rational,
        ctx: &dyn Fn() -> String,
    ) {
        match bound {
            Ok(b) => {
                self.checks += 1;
                self.upper_applicable += b.upper.is_applicable() as u64;
                self.lower_applicable += b.lower.is_applicable() as u64;
                if !b.brackets(exact) {
                    let show =
                        |v: Option<&Rational>| v.map_or("-".to_string(), |r| to_decimal(r, 8));
                    self.violation(|| {
                        format!(
                            "{what}: {} not in [{}, {}] for {}",
                            to_decimal(exact, 8),
                            show(b.lower_value()),
                            show(b.upper_raw()),
                            ctx()
                        )
                    });
                }
            }
            Err(BoundError::DivisionByZero) => self.inapplicable += 1,
            Err(e) => self.violation(|| format!("{what}: unexpected error {e} for {}", ctx())),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SandwichConfig {
    /// Generic: largest vertex count. Bipartite: largest side.
    pub max_vertices: usize,
    pub max_total: u64,
    pub max_event_edges: usize,
    pub max_forbidden_edges: usize,
    /// Evaluate every edge order instead of only the given one.
    pub all_orders: bool,
    pub exec: Execution,
    pub budget: u64,
}

impl SandwichConfig {
    pub fn generic_default() -> Self {
        Self {
            max_vertices: 7,
            max_total: 12,
            max_event_edges: 3,
            max_forbidden_edges: 2,
            all_orders: false,
            exec: Execution::Parallel,
            budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn bipartite_default() -> Self {
        Self {
            max_vertices: 4,
            max_total: 6,
            ..Self::generic_default()
        }
    }
}

/// Nonincreasing graphical sequences with `1..=max_n` entries and sum at most `max_total`.
pub fn graphical_sequences(max_n: usize, max_total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let cap = (n as u64).saturating_sub(1);
        nonincreasing(n, cap, max_total, &mut Vec::new(), &mut |d| {
            if is_graphical(d) {
                out.push(d.to_vec());
            }
        });
    }
    out
}

/// Pairs of nonincreasing sequences with sizes `1..=max_side`, equal sums at most `max_total`.
pub fn bigraphical_pairs(max_side: usize, max_total: u64) -> Vec<(Vec<u64>, Vec<u64>)> {
    let mut out = Vec::new();
    for a in 1..=max_side {
        for b in 1..=max_side {
            let mut lefts = Vec::new();
            nonincreasing(a, b as u64, max_total, &mut Vec::new(), &mut |s| {
                lefts.push(s.to_vec())
            });
            let mut rights = Vec::new();
            nonincreasing(b, a as u64, max_total, &mut Vec::new(), &mut |t| {
                rights.push(t.to_vec())
            });
            for s in &lefts {
                for t in &rights {
                    if s.iter().sum::<u64>() == t.iter().sum::<u64>() && is_bigraphical(s, t) {
                        out.push((s.clone(), t.clone()));
                    }
                }
            }
        }
    }
    out
}

fn nonincreasing(
    len: usize,
    cap: u64,
    budget: u64,
    prefix: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if prefix.len() == len {
        emit(prefix);
        return;
    }
    let top = prefix.last().copied().unwrap_or(cap).min(cap).min(budget);
    for x in (0..=top).rev() {
        prefix.push(x);
        nonincreasing(len, cap, budget - x, prefix, emit);
        prefix.pop();
    }
}

/// All subsets of `items` with at most `k` elements, smallest first.
pub fn small_subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    fn grow<T: Copy>(items: &[T], start: usize, k: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            out.push(cur.clone());
            grow(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    grow(items, 0, k, &mut Vec::new(), &mut out);
    out.sort_by_key(|s| s.len());
    out
}

/// Whether signatures are non-increasing across every run of equal degrees.
fn sorted_within_runs<S: Ord>(degrees: &[u64], sig: &[S]) -> bool {
    (1..degrees.len()).all(|i| degrees[i] != degrees[i - 1] || sig[i - 1] >= sig[i])
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

fn orders_for(m: usize, all: bool) -> Vec<EdgeOrder> {
    if all {
        permutations(m)
            .into_iter()
            .map(|p| EdgeOrder::from_permutation(p).expect("permutation"))
            .collect()
    } else {
        vec![EdgeOrder::given(m)]
    }
}

fn frac(a: u64, b: u64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Degree signature of an edge set on one side.
fn side_degrees(edges: &[Edge], n: usize, pick: impl Fn(Edge) -> [Option<usize>; 2]) -> Vec<u64> {
    let mut d = vec![0u64; n];
    for &e in edges {
        for w in pick(e).into_iter().flatten() {
            d[w] += 1;
        }
    }
    d
}

fn sweep_generic_class(d: &[u64], cfg: &SandwichConfig) -> Result<SweepReport, OracleError> {
    let n = d.len();
    let layout = Layout::Generic { n };
    let seq = DegreeSequence::generic(d.to_vec());
    let oracle = ClassOracle::new(
        &ProblemInstance::Generic(GenericInstance::free(seq.clone())),
        cfg.budget,
    )?;
    let mut rep = SweepReport {
        classes: 1,
        ..Default::default()
    };
    let all = layout.all_edges();
    let gen = |e: Edge| [Some(e.0), Some(e.1)];
    for l_edges in small_subsets(&all, cfg.max_forbidden_edges) {
        let lmask = layout.mask(&l_edges);
        let graphs: Vec<u128> = oracle
            .graphs
            .iter()
            .copied()
            .filter(|g| g & lmask == 0)
            .collect();
        if graphs.is_empty() {
            continue;
        }
        let base = graphs.len() as u64;
        let ldeg = side_degrees(&l_edges, n, gen);
        let l = LabelledGraph::new(n, l_edges.iter().copied())?;
        let free: Vec<Edge> = all
            .iter()
            .copied()
            .filter(|e| !l_edges.contains(e))
            .collect();
        for x_edges in small_subsets(&free, cfg.max_event_edges) {
            if x_edges.is_empty() {
                continue;
            }
            let xdeg = side_degrees(&x_edges, n, gen);
            let sig: Vec<(u64, u64)> = xdeg.iter().zip(&ldeg).map(|(&a, &b)| (a, b)).collect();
            if !sorted_within_runs(d, &sig) {
                continue;
            }
            rep.instances += 1;
            let xmask = layout.mask(&x_edges);
            let hits = graphs.iter().filter(|&&g| g & xmask == xmask).count() as u64;
            let misses = graphs.iter().filter(|&&g| g & xmask == 0).count() as u64;
            let x = LabelledGraph::new(n, x_edges.iter().copied())?;
            let ctx = || format!("d={d:?} X={x_edges:?} L={l_edges:?}");
            let (p_in, p_out) = (frac(hits, base), frac(misses, base));
            for order in orders_for(x_edges.len(), cfg.all_orders) {
                let ctx_o = || format!("{} order={:?}", ctx(), order.permutation);
                rep.check_bound(
                    "containment",
                    subgraph_bounds(&seq, &x, &l, &order),
                    &p_in,
                    &ctx_o,
                );
                rep.check_bound(
                    "avoidance",
                    forbidden_bounds(&seq, &l, &x, &order),
                    &p_out,
                    &ctx_o,
                );
            }
            for (i, &e) in x_edges.iter().enumerate() {
                let h_edges: Vec<Edge> = x_edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &f)| f)
                    .collect();
                let hmask = layout.mask(&h_edges);
                let cond = graphs.iter().filter(|&&g| g & hmask == hmask).count() as u64;
                if cond == 0 {
                    continue;
                }
                let h = LabelledGraph::new(n, h_edges.iter().copied())?;
                let ctx_e = || format!("{} edge={e:?}", ctx());
                rep.check_bound(
                    "single-edge",
                    single_edge_bounds(&seq, &h, &l, e),
                    &frac(hits, cond),
                    &ctx_e,
                );
            }
        }
    }
    Ok(rep)
}

fn sweep_bipartite_class(
    s: &[u64],
    t: &[u64],
    cfg: &SandwichConfig,
) -> Result<SweepReport, OracleError> {
    let (a, b) = (s.len(), t.len());
    let layout = Layout::Bipartite { left: a, right: b };
    let ss = DegreeSequence::new(s.to_vec(), Part::Left);
    let ts = DegreeSequence::new(t.to_vec(), Part::Right);
    let base_inst = ProblemInstance::Bipartite(BipartiteInstance::free(ss.clone(), ts.clone()));
    let oracle = ClassOracle::new(&base_inst, cfg.budget)?;
    let mut rep = SweepReport {
        classes: 1,
        ..Default::default()
    };
    let all = layout.all_edges();
    let left = |e: Edge| [Some(e.0), None];
    let right = |e: Edge| [Some(e.1), None];
    for l_edges in small_subsets(&all, cfg.max_forbidden_edges) {
        let lmask = layout.mask(&l_edges);
        let graphs: Vec<u128> = oracle
            .graphs
            .iter()
            .copied()
            .filter(|g| g & lmask == 0)
            .collect();
        if graphs.is_empty() {
            continue;
        }
        let base = graphs.len() as u64;
        let (ls, lt) = (
            side_degrees(&l_edges, a, left),
            side_degrees(&l_edges, b, right),
        );
        let l = BipartiteGraph::new(a, b, l_edges.iter().copied())?;
        let free: Vec<Edge> = all
            .iter()
            .copied()
            .filter(|e| !l_edges.contains(e))
            .collect();
        for x_edges in small_subsets(&free, cfg.max_event_edges) {
            if x_edges.is_empty() {
                continue;
            }
            let (xs, xt) = (
                side_degrees(&x_edges, a, left),
                side_degrees(&x_edges, b, right),
            );
            let sig_s: Vec<(u64, u64)> = xs.iter().zip(&ls).map(|(&p, &q)| (p, q)).collect();
            let sig_t: Vec<(u64, u64)> = xt.iter().zip(&lt).map(|(&p, &q)| (p, q)).collect();
            if !sorted_within_runs(s, &sig_s) || !sorted_within_runs(t, &sig_t) {
                continue;
            }
            rep.instances += 1;
            let xmask = layout.mask(&x_edges);
            let hits = graphs.iter().filter(|&&g| g & xmask == xmask).count() as u64;
            let misses = graphs.iter().filter(|&&g| g & xmask == 0).count() as u64;
            let x = BipartiteGraph::new(a, b, x_edges.iter().copied())?;
            let ctx = || format!("s={s:?} t={t:?} X={x_edges:?} L={l_edges:?}");
            let (p_in, p_out) = (frac(hits, base), frac(misses, base));
            for order in orders_for(x_edges.len(), cfg.all_orders) {
                let ctx_o = || format!("{} order={:?}", ctx(), order.permutation);
                rep.check_bound(
                    "containment",
                    bipartite_subgraph_bounds(&ss, &ts, &x, &l, &order),
                    &p_in,
                    &ctx_o,
                );
                rep.check_bound(
                    "avoidance",
                    bipartite_forbidden_bounds(&ss, &ts, &l, &x, &order),
                    &p_out,
                    &ctx_o,
                );
            }
            for (i, &e) in x_edges.iter().enumerate() {
                let h_edges: Vec<Edge> = x_edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &f)| f)
                    .collect();
                let hmask = layout.mask(&h_edges);
                let cond = graphs.iter().filter(|&&g| g & hmask == hmask).count() as u64;
                if cond == 0 {
                    continue;
                }
                let h = BipartiteGraph::new(a, b, h_edges.iter().copied())?;
                let ctx_e = || format!("{} edge={e:?}", ctx());
                let bound = bipartite_single_edge_bounds(&ss, &ts, &h, &l, e);
                rep.check_bound("single-edge", bound, &frac(hits, cond), &ctx_e);
            }
        }
    }
    Ok(rep)
}

fn flatten(results: Result<SweepReport, OracleError>) -> SweepReport {
    results.unwrap_or_else(|e| {
        let mut r = SweepReport::default();
        r.violation(|| format!("sweep aborted: {e}"));
        r
    })
}

/// Every applicable generic bound on every small class, against exact enumeration.
pub fn generic_sandwich_sweep(cfg: &SandwichConfig) -> SweepReport {
    let seqs = graphical_sequences(cfg.max_vertices, cfg.max_total);
    map_reduce(
        &seqs,
        cfg.exec,
        SweepReport::default(),
        |d| flatten(sweep_generic_class(d, cfg)),
        SweepReport::merge,
    )
}

pub fn bipartite_sandwich_sweep(cfg: &SandwichConfig) -> SweepReport {
    let pairs = bigraphical_pairs(cfg.max_vertices, cfg.max_total);
    map_reduce(
        &pairs,
        cfg.exec,
        SweepReport::default(),
        |(s, t)| flatten(sweep_bipartite_class(s, t, cfg)),
        SweepReport::merge,
    )
}

#[derive(Clone, Copy, Debug)]
pub struct ClaimConfig {
    /// Generic: largest vertex count. Bipartite: largest side.
    pub max_vertices: usize,
    pub max_total: u64,
    pub max_forbidden_edges: usize,
    /// 3-switchings are counted only on classes with at most this many vertices.
    pub three_switch_max_vertices: usize,
    pub exec: Execution,
    pub budget: u64,
}

impl ClaimConfig {
    pub fn generic_default() -> Self {
        Self {
            max_vertices: 7,
            max_total: 12,
            max_forbidden_edges: 2,
            three_switch_max_vertices: 6,
            exec: Execution::Parallel,
            budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn bipartite_default() -> Self {
        Self {
            max_vertices: 4,
            max_total: 6,
            three_switch_max_vertices: 8,
            ..Self::generic_default()
        }
    }
}

/// Thresholds of the switching claims for one `(class, M, uv)` triple.
struct Thresholds {
    /// Per-graph lower bound on forward 2-switchings.
    f2_min: i128,
    b2_max: u64,
    f3_max: u64,
    b3_min: i128,
    b3_max: u64,
    ratio_upper: Option<Rational>,
    ratio_lower: Rational,
}

fn thresholds(edges_term: u64, du: u64, dv: u64, f: &Rational, g: &Rational) -> Thresholds {
    // edges_term is 2m(G) for generic classes and m(G) for bipartite ones.
    let e = int(edges_term);
    let prod = int(du * dv);
    Thresholds {
        f2_min: ceil_i128(&(&e * f)).expect("small"),
        b2_max: du * dv,
        f3_max: edges_term * edges_term,
        b3_min: ceil_i128(&(&e * &prod * g)).expect("small"),
        b3_max: edges_term * du * dv,
        ratio_upper: (*f > Rational::zero()).then(|| &prod / (&e * f)),
        ratio_lower: &prod * g / &e,
    }
}

fn claims_for_case(
    oracle: &ClassOracle,
    m_edges: &[Edge],
    uv: Edge,
    th: &Thresholds,
    three: bool,
    rep: &mut SweepReport,
    ctx: &dyn Fn() -> String,
) {
    let layout = &oracle.layout;
    let mmask = layout.mask(m_edges);
    let e = layout.mask(&[uv]);
    let madj = layout.adjacency(mmask);
    let g_uv = layout.global(uv);
    let (mut n_fwd, mut n_bwd) = (0u64, 0u64);
    let mut sums = [[0u64; 2]; 2];
    for &g in oracle.graphs.iter().filter(|&&g| g & mmask == 0) {
        let forward = g & e != 0;
        let adj = layout.adjacency(g);
        let blocked: Vec<u64> = adj.iter().zip(&madj).map(|(a, b)| a | b).collect();
        let sw = Switchable {
            adj: &adj,
            blocked: &blocked,
        };
        let two = super::census::count_switchings(layout, &sw, g_uv, Arity::Two, forward);
        sums[0][forward as usize] += two;
        rep.checks += 1;
        if forward {
            n_fwd += 1;
            if (two as i128) < th.f2_min {
                rep.violation(|| {
                    format!(
                        "forward 2-switchings {two} < {} for {} G={g:#x}",
                        th.f2_min,
                        ctx()
                    )
                });
            }
        } else {
            n_bwd += 1;
            if two > th.b2_max {
                rep.violation(|| {
                    format!(
                        "backward 2-switchings {two} > {} for {} G={g:#x}",
                        th.b2_max,
                        ctx()
                    )
                });
            }
        }
        if three {
            let c = super::census::count_switchings(layout, &sw, g_uv, Arity::Three, forward);
            sums[1][forward as usize] += c;
            if forward {
                rep.checks += 1;
                if c > th.f3_max {
                    rep.violation(|| {
                        format!(
                            "forward 3-switchings {c} > {} for {} G={g:#x}",
                            th.f3_max,
                            ctx()
                        )
                    });
                }
            } else {
                rep.checks += 2;
                if (c as i128) < th.b3_min || c > th.b3_max {
                    rep.violation(|| {
                        format!(
                            "backward 3-switchings {c} outside [{}, {}] for {} G={g:#x}",
                            th.b3_min,
                            th.b3_max,
                            ctx()
                        )
                    });
                }
            }
        }
    }
    if n_fwd + n_bwd == 0 {
        return;
    }
    rep.instances += 1;
    rep.checks += 1 + three as u64;
    if sums[0][0] != sums[0][1] {
        rep.violation(|| {
            format!(
                "2-switch totals differ ({} vs {}) for {}",
                sums[0][1],
                sums[0][0],
                ctx()
            )
        });
    }
    if three && sums[1][0] != sums[1][1] {
        rep.violation(|| {
            format!(
                "3-switch totals differ ({} vs {}) for {}",
                sums[1][1],
                sums[1][0],
                ctx()
            )
        });
    }
    if n_bwd > 0 {
        let ratio = frac(n_fwd, n_bwd);
        rep.checks += 1;
        if ratio < th.ratio_lower {
            rep.violation(|| format!("class ratio below its lower bracket for {}", ctx()));
        }
        if let Some(u) = &th.ratio_upper {
            rep.checks += 1;
            if &ratio > u {
                rep.violation(|| format!("class ratio above its upper bracket for {}", ctx()));
            }
        }
    }
}

fn claims_generic_class(d: &[u64], cfg: &ClaimConfig) -> Result<SweepReport, OracleError> {
    let n = d.len();
    let seq = DegreeSequence::generic(d.to_vec());
    let two_m = seq.total();
    let mut rep = SweepReport {
        classes: 1,
        ..Default::default()
    };
    if two_m == 0 {
        return Ok(rep);
    }
    let oracle = ClassOracle::new(
        &ProblemInstance::Generic(GenericInstance::free(seq.clone())),
        cfg.budget,
    )?;
    let three = n <= cfg.three_switch_max_vertices;
    let all = oracle.layout.all_edges();
    let empty = LabelledGraph::empty(n);
    for m_edges in small_subsets(&all, cfg.max_forbidden_edges) {
        let mdeg = side_degrees(&m_edges, n, |e| [Some(e.0), Some(e.1)]);
        let m = LabelledGraph::new(n, m_edges.iter().copied())?;
        for &uv in all.iter().filter(|e| !m_edges.contains(e)) {
            let sig: Vec<(u64, bool)> = (0..n).map(|w| (mdeg[w], w == uv.0 || w == uv.1)).collect();
            if !sorted_within_runs(d, &sig) {
                continue;
            }
            let f = f_term(&seq, &empty, &m, uv)?;
            let g = g_term(&seq, &empty, &m, uv)?;
            let th = thresholds(two_m, d[uv.0], d[uv.1], &f, &g);
            let ctx = || format!("d={d:?} M={m_edges:?} uv={uv:?}");
            claims_for_case(&oracle, &m_edges, uv, &th, three, &mut rep, &ctx);
        }
    }
    Ok(rep)
}

fn claims_bipartite_class(
    s: &[u64],
    t: &[u64],
    cfg: &ClaimConfig,
) -> Result<SweepReport, OracleError> {
    let (a, b) = (s.len(), t.len());
    let ss = DegreeSequence::new(s.to_vec(), Part::Left);
    let ts = DegreeSequence::new(t.to_vec(), Part::Right);
    let m_total = ss.total();
    let mut rep = SweepReport {
        classes: 1,
        ..Default::default()
    };
    if m_total == 0 {
        return Ok(rep);
    }
    let inst = ProblemInstance::Bipartite(BipartiteInstance::free(ss.clone(), ts.clone()));
    let oracle = ClassOracle::new(&inst, cfg.budget)?;
    let three = a + b <= cfg.three_switch_max_vertices;
    let all = oracle.layout.all_edges();
    let empty = BipartiteGraph::empty(a, b);
    for m_edges in small_subsets(&all, cfg.max_forbidden_edges) {
        let ms = side_degrees(&m_edges, a, |e| [Some(e.0), None]);
        let mt = side_degrees(&m_edges, b, |e| [Some(e.1), None]);
        let m = BipartiteGraph::new(a, b, m_edges.iter().copied())?;
        for &uv in all.iter().filter(|e| !m_edges.contains(e)) {
            let sig_s: Vec<(u64, bool)> = (0..a).map(|w| (ms[w], w == uv.0)).collect();
            let sig_t: Vec<(u64, bool)> = (0..b).map(|w| (mt[w], w == uv.1)).collect();
            if !sorted_within_runs(s, &sig_s) || !sorted_within_runs(t, &sig_t) {
                continue;
            }
            let p = p_term(&ss, &ts, &empty, &m, uv)?;
            let q = q_term(&ss, &ts, &empty, &m, uv)?;
            let th = thresholds(m_total, s[uv.0], t[uv.1], &p, &q);
            let ctx = || format!("s={s:?} t={t:?} M={m_edges:?} uv={uv:?}");
            claims_for_case(&oracle, &m_edges, uv, &th, three, &mut rep, &ctx);
        }
    }
    Ok(rep)
}

/// Pointwise switching claims, class-total identities and ratio brackets on every small generic class.
pub fn generic_claim_sweep(cfg: &ClaimConfig) -> SweepReport {
    let seqs = graphical_sequences(cfg.max_vertices, cfg.max_total);
    map_reduce(
        &seqs,
        cfg.exec,
        SweepReport::default(),
        |d| flatten(claims_generic_class(d, cfg)),
        SweepReport::merge,
    )
}

pub fn bipartite_claim_sweep(cfg: &ClaimConfig) -> SweepReport {
    let pairs = bigraphical_pairs(cfg.max_vertices, cfg.max_total);
    map_reduce(
        &pairs,
        cfg.exec,
        SweepReport::default(),
        |(s, t)| flatten(claims_bipartite_class(s, t, cfg)),
        SweepReport::merge,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_counts() {
        let seqs = graphical_sequences(7, 12);
        let by_n: Vec<usize> = (1..=7)
            .map(|n| seqs.iter().filter(|d| d.len() == n).count())
            .collect();
        assert_eq!(by_n, vec![1, 2, 4, 11, 23, 38, 49]);
        assert!(bigraphical_pairs(2, 6).contains(&(vec![1, 1], vec![2, 0])));
    }

    #[test]
    fn subsets_and_permutations() {
        assert_eq!(small_subsets(&[1, 2, 3], 2).len(), 1 + 3 + 3);
        assert_eq!(permutations(3).len(), 6);
        assert!(sorted_within_runs(&[2, 2, 1], &[(1, 0), (0, 0), (5, 5)]));
        assert!(!sorted_within_runs(&[2, 2, 1], &[(0, 0), (1, 0), (5, 5)]));
    }

    #[test]
    fn tiny_generic_sweep_is_clean() {
        let cfg = SandwichConfig {
            max_vertices: 5,
            max_total: 8,
            all_orders: true,
            ..SandwichConfig::generic_default()
        };
        let r = generic_sandwich_sweep(&cfg);
        assert_eq!(r.violations, 0, "{:?}", r.examples);
        assert!(r.checks > 1000);
    }

    #[test]
    fn tiny_claim_sweeps_are_clean() {
        let cfg = ClaimConfig {
            max_vertices: 5,
            max_total: 8,
            ..ClaimConfig::generic_default()
        };
        let r = generic_claim_sweep(&cfg);
        assert_eq!(r.violations, 0, "{:?}", r.examples);
        let cfg = ClaimConfig {
            max_vertices: 3,
            max_total: 5,
            ..ClaimConfig::bipartite_default()
        };
        let r = bipartite_claim_sweep(&cfg);
        assert_eq!(r.violations, 0, "{:?}", r.examples);
    }
}
