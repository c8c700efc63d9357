//! Exact enumeration of small degree-constrained graph classes, and the
//! probabilities, ratios and switching counts derived from it.
//!
//! Graphs are `u128` edge masks over a [`Layout`]; masks make event tests a
//! pair of bit operations, which is what the sweeps spend their time on.

pub mod census;
pub mod count;
pub mod mcmc;
pub mod sweep;

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use thiserror::Error;

use crate::bound::BoundError;
use crate::exec::{map_reduce, Execution};
use crate::model::{
    is_graphical, BipartiteGraph, Edge, LabelledGraph, ModelError, ProblemInstance,
};
use crate::rational::Rational;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("search exceeded the node budget of {0}")]
    ResourceLimit(u64),
    #[error("instance too large for exact enumeration: {0}")]
    TooLarge(String),
    #[error("conditioning class is empty")]
    EmptyClass,
    #[error("no realization found by the greedy construction")]
    RealizationFailure,
    #[error("{0}")]
    Invalid(String),
}

/// Vertex and edge-bit layout of a class. Bipartite vertices are numbered
/// `0..left` for `S` and `left..left+right` for `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    Generic { n: usize },
    Bipartite { left: usize, right: usize },
}

impl Layout {
    pub fn of(inst: &ProblemInstance) -> Self {
        match inst {
            ProblemInstance::Generic(g) => Layout::Generic { n: g.degrees.len() },
            ProblemInstance::Bipartite(b) => Layout::Bipartite {
                left: b.left.len(),
                right: b.right.len(),
            },
        }
    }

    pub fn vertices(&self) -> usize {
        match *self {
            Layout::Generic { n } => n,
            Layout::Bipartite { left, right } => left + right,
        }
    }

    pub fn edge_slots(&self) -> usize {
        match *self {
            Layout::Generic { n } => n * n.saturating_sub(1) / 2,
            Layout::Bipartite { left, right } => left * right,
        }
    }

    fn check(&self) -> Result<(), OracleError> {
        if self.vertices() > 64 || self.edge_slots() > 128 {
            return Err(OracleError::TooLarge(format!(
                "{} vertices and {} vertex pairs (limits 64 and 128)",
                self.vertices(),
                self.edge_slots()
            )));
        }
        Ok(())
    }

    /// Bit of a local edge: `(u, v)` for generic, `(s, t)` for bipartite.
    pub fn bit(&self, (a, b): Edge) -> u32 {
        match *self {
            Layout::Generic { n } => {
                let (u, v) = (a.min(b), a.max(b));
                (u * (2 * n - u - 1) / 2 + (v - u - 1)) as u32
            }
            Layout::Bipartite { right, .. } => (a * right + b) as u32,
        }
    }

    /// Validates a local edge, ordering generic endpoints.
    pub fn normalize(&self, (a, b): Edge) -> Result<Edge, OracleError> {
        let ok = match *self {
            Layout::Generic { n } => a != b && a < n && b < n,
            Layout::Bipartite { left, right } => a < left && b < right,
        };
        if !ok {
            return Err(OracleError::Invalid(format!(
                "{a}-{b} is not a vertex pair of this class"
            )));
        }
        Ok(match self {
            Layout::Generic { .. } => (a.min(b), a.max(b)),
            Layout::Bipartite { .. } => (a, b),
        })
    }

    pub fn mask(&self, edges: &[Edge]) -> u128 {
        edges.iter().fold(0, |m, &e| m | 1u128 << self.bit(e))
    }

    /// Local edge to a pair of global vertex ids.
    pub fn global(&self, (a, b): Edge) -> (usize, usize) {
        match *self {
            Layout::Generic { .. } => (a, b),
            Layout::Bipartite { left, .. } => (a, left + b),
        }
    }

    /// All local edges in bit order.
    pub fn all_edges(&self) -> Vec<Edge> {
        match *self {
            Layout::Generic { n } => (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect(),
            Layout::Bipartite { left, right } => (0..left)
                .flat_map(|s| (0..right).map(move |t| (s, t)))
                .collect(),
        }
    }

    pub fn edges_of(&self, mask: u128) -> Vec<Edge> {
        self.all_edges()
            .into_iter()
            .filter(|&e| mask >> self.bit(e) & 1 == 1)
            .collect()
    }

    /// Global adjacency bitsets of a mask.
    pub fn adjacency(&self, mask: u128) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertices()];
        for e in self.edges_of(mask) {
            let (a, b) = self.global(e);
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }
}

/// Search state shared by the sequential and parallel drivers.
struct Search<'a> {
    order: &'a [usize],
    allowed: &'a [u64],
    bits: &'a [Vec<u32>],
    nodes: &'a AtomicU64,
    budget: u64,
}

struct Prepared {
    residual: Vec<u64>,
    allowed: Vec<u64>,
    start: u128,
    order: Vec<usize>,
    bits: Vec<Vec<u32>>,
    empty: bool,
}

fn prepare(inst: &ProblemInstance) -> Result<Prepared, OracleError> {
    let layout = Layout::of(inst);
    layout.check()?;
    let nv = layout.vertices();
    let (degrees, required, forbidden): (Vec<u64>, Vec<Edge>, Vec<Edge>) = match inst {
        ProblemInstance::Generic(g) => (
            g.degrees.as_slice().to_vec(),
            g.required.edges().to_vec(),
            g.forbidden.edges().to_vec(),
        ),
        ProblemInstance::Bipartite(b) => (
            b.left
                .as_slice()
                .iter()
                .chain(b.right.as_slice())
                .copied()
                .collect(),
            b.required.edges().to_vec(),
            b.forbidden.edges().to_vec(),
        ),
    };
    let mut allowed = vec![0u64; nv];
    let mut bits = vec![vec![u32::MAX; nv]; nv];
    for e in layout.all_edges() {
        let (a, b) = layout.global(e);
        allowed[a] |= 1 << b;
        allowed[b] |= 1 << a;
        bits[a][b] = layout.bit(e);
        bits[b][a] = layout.bit(e);
    }
    let mut residual = degrees;
    let mut empty = false;
    let mut start = 0u128;
    for &e in required.iter().chain(&forbidden) {
        let (a, b) = layout.global(e);
        allowed[a] &= !(1 << b);
        allowed[b] &= !(1 << a);
    }
    for &e in &required {
        let (a, b) = layout.global(e);
        start |= 1 << layout.bit(e);
        for w in [a, b] {
            match residual[w].checked_sub(1) {
                Some(r) => residual[w] = r,
                None => empty = true,
            }
        }
    }
    if let Layout::Bipartite { left, .. } = layout {
        let (s, t) = residual.split_at(left);
        empty |= s.iter().sum::<u64>() != t.iter().sum::<u64>();
    }
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
    Ok(Prepared {
        residual,
        allowed,
        start,
        order,
        bits,
        empty,
    })
}

impl Search<'_> {
    fn tick(&self) -> Result<(), OracleError> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(OracleError::ResourceLimit(self.budget));
        }
        Ok(())
    }

    /// Necessary conditions on the residual degrees of the unprocessed vertices.
    fn feasible(&self, i: usize, residual: &[u64]) -> bool {
        let rest = &self.order[i..];
        let mut alive = 0u64;
        for &w in rest {
            alive |= 1 << w;
        }
        let mut vals = Vec::with_capacity(rest.len());
        for &w in rest {
            let cap = (self.allowed[w] & alive).count_ones() as u64;
            if residual[w] > cap {
                return false;
            }
            vals.push(residual[w]);
        }
        is_graphical(&vals)
    }

    /// Candidate neighbours of `order[i]` among later vertices with spare degree.
    fn candidates(&self, i: usize, residual: &[u64]) -> Vec<usize> {
        let v = self.order[i];
        self.order[i + 1..]
            .iter()
            .copied()
            .filter(|&w| self.allowed[v] >> w & 1 == 1 && residual[w] > 0)
            .collect()
    }

    fn run(
        &self,
        i: usize,
        residual: &mut [u64],
        mask: u128,
        emit: &mut dyn FnMut(u128),
    ) -> Result<(), OracleError> {
        self.tick()?;
        if i == self.order.len() {
            emit(mask);
            return Ok(());
        }
        let v = self.order[i];
        let need = residual[v] as usize;
        if need == 0 {
            return self.run(i + 1, residual, mask, emit);
        }
        let cand = self.candidates(i, residual);
        if need > cand.len() {
            return Ok(());
        }
        let mut pick: Vec<usize> = (0..need).collect();
        loop {
            let mut m = mask;
            for &j in &pick {
                let w = cand[j];
                residual[w] -= 1;
                m |= 1 << self.bits[v][w];
            }
            let saved = residual[v];
            residual[v] = 0;
            if self.feasible(i + 1, residual) {
                let r = self.run(i + 1, residual, m, emit);
                if r.is_err() {
                    residual[v] = saved;
                    for &j in &pick {
                        residual[cand[j]] += 1;
                    }
                    return r;
                }
            }
            residual[v] = saved;
            for &j in &pick {
                residual[cand[j]] += 1;
            }
            if !next_combination(&mut pick, cand.len()) {
                return Ok(());
            }
        }
    }

    /// First-level branches from vertex `order[0]`, for parallel counting.
    fn branches(&self, residual: &[u64], mask: u128) -> Vec<(Vec<u64>, u128)> {
        let v = self.order[0];
        let need = residual[v] as usize;
        let mut out = Vec::new();
        if need == 0 {
            return vec![(residual.to_vec(), mask)];
        }
        let cand = self.candidates(0, residual);
        if need > cand.len() {
            return out;
        }
        let mut pick: Vec<usize> = (0..need).collect();
        loop {
            let mut r = residual.to_vec();
            let mut m = mask;
            for &j in &pick {
                r[cand[j]] -= 1;
                m |= 1 << self.bits[v][cand[j]];
            }
            r[v] = 0;
            if self.feasible(1, &r) {
                out.push((r, m));
            }
            if !next_combination(&mut pick, cand.len()) {
                return out;
            }
        }
    }
}

/// Advances `pick` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Streams every graph of the class as an edge mask, in a fixed deterministic order.
pub fn for_each_graph(
    inst: &ProblemInstance,
    budget: u64,
    mut emit: impl FnMut(u128),
) -> Result<(), OracleError> {
    let p = prepare(inst)?;
    if p.empty {
        return Ok(());
    }
    let nodes = AtomicU64::new(0);
    let search = Search {
        order: &p.order,
        allowed: &p.allowed,
        bits: &p.bits,
        nodes: &nodes,
        budget,
    };
    let mut residual = p.residual.clone();
    if !search.feasible(0, &residual) {
        return Ok(());
    }
    search.run(0, &mut residual, p.start, &mut emit)
}

/// All graphs of the class as edge masks.
pub fn class_masks(inst: &ProblemInstance, budget: u64) -> Result<Vec<u128>, OracleError> {
    let mut out = Vec::new();
    for_each_graph(inst, budget, |m| out.push(m))?;
    Ok(out)
}

/// Size of the class; subtrees below the first vertex are counted independently.
pub fn count_class(
    inst: &ProblemInstance,
    budget: u64,
    exec: Execution,
) -> Result<u64, OracleError> {
    let p = prepare(inst)?;
    if p.empty || p.order.is_empty() {
        return Ok(u64::from(!p.empty));
    }
    let nodes = AtomicU64::new(0);
    let search = Search {
        order: &p.order,
        allowed: &p.allowed,
        bits: &p.bits,
        nodes: &nodes,
        budget,
    };
    if !search.feasible(0, &p.residual) {
        return Ok(0);
    }
    let branches = search.branches(&p.residual, p.start);
    map_reduce(
        &branches,
        exec,
        Ok(0),
        |(r, m)| {
            let mut r = r.clone();
            let mut c = 0u64;
            search.run(1, &mut r, *m, &mut |_| c += 1).map(|_| c)
        },
        |a, b| Ok(a? + b?),
    )
}

pub fn generic_graphs(
    inst: &crate::model::GenericInstance,
    budget: u64,
) -> Result<Vec<LabelledGraph>, OracleError> {
    let pi = ProblemInstance::Generic(inst.clone());
    let layout = Layout::of(&pi);
    let n = inst.degrees.len();
    class_masks(&pi, budget)?
        .into_iter()
        .map(|m| Ok(LabelledGraph::new(n, layout.edges_of(m))?))
        .collect()
}

pub fn bipartite_graphs(
    inst: &crate::model::BipartiteInstance,
    budget: u64,
) -> Result<Vec<BipartiteGraph>, OracleError> {
    let pi = ProblemInstance::Bipartite(inst.clone());
    let layout = Layout::of(&pi);
    let (a, b) = (inst.left.len(), inst.right.len());
    class_masks(&pi, budget)?
        .into_iter()
        .map(|m| Ok(BipartiteGraph::new(a, b, layout.edges_of(m))?))
        .collect()
}

/// The graphs of one class, answering constrained counts by filtering.
#[derive(Clone, Debug)]
pub struct ClassOracle {
    pub layout: Layout,
    pub graphs: Vec<u128>,
}

impl ClassOracle {
    pub fn new(inst: &ProblemInstance, budget: u64) -> Result<Self, OracleError> {
        Ok(Self {
            layout: Layout::of(inst),
            graphs: class_masks(inst, budget)?,
        })
    }

    /// Graphs containing all of `required` and none of `forbidden`.
    pub fn count(&self, required: u128, forbidden: u128) -> u64 {
        self.graphs
            .iter()
            .filter(|&&g| g & required == required && g & forbidden == 0)
            .count() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Contains,
    Avoids,
}

fn big_frac(a: u128, b: u128) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn frac(a: u64, b: u64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Exact probability that a uniform member of the instance's class contains
/// (or avoids) every edge in `event`. Classes beyond the edge-mask limits are
/// counted with [`count::count_memo`] instead.
pub fn exact_probability(
    inst: &ProblemInstance,
    kind: EventKind,
    event: &[Edge],
    budget: u64,
) -> Result<Rational, OracleError> {
    if Layout::of(inst).check().is_err() {
        let total = count::count_memo(inst, &[], &[], budget)?;
        if total == 0 {
            return Err(OracleError::EmptyClass);
        }
        let hits = match kind {
            EventKind::Contains => count::count_memo(inst, event, &[], budget)?,
            EventKind::Avoids => count::count_memo(inst, &[], event, budget)?,
        };
        return Ok(big_frac(hits, total));
    }
    let oracle = ClassOracle::new(inst, budget)?;
    let event = oracle.layout.mask(event);
    let total = oracle.count(0, 0);
    if total == 0 {
        return Err(OracleError::EmptyClass);
    }
    let hits = match kind {
        EventKind::Contains => oracle.count(event, 0),
        EventKind::Avoids => oracle.count(0, event),
    };
    Ok(frac(hits, total))
}

/// `|class with uv added to the required set| / |class with uv added to the forbidden set|`.
pub fn exact_ratio(inst: &ProblemInstance, uv: Edge, budget: u64) -> Result<Rational, OracleError> {
    if Layout::of(inst).check().is_err() {
        let with = count::count_memo(inst, &[uv], &[], budget)?;
        let without = count::count_memo(inst, &[], &[uv], budget)?;
        if without == 0 {
            return Err(OracleError::EmptyClass);
        }
        return Ok(big_frac(with, without));
    }
    let oracle = ClassOracle::new(inst, budget)?;
    let e = oracle.layout.mask(&[uv]);
    let with = oracle.count(e, 0);
    let without = oracle.count(0, e);
    if without == 0 {
        return Err(OracleError::EmptyClass);
    }
    Ok(frac(with, without))
}
