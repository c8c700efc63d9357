//! Degree sequences, labelled edge sets and problem instances.

use std::collections::BTreeSet;

use thiserror::Error;

pub type Edge = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("vertex {vertex} out of range for {size} vertices")]
    VertexOutOfRange { vertex: usize, size: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("degree at vertex {vertex} would become negative")]
    NegativeDegree { vertex: usize },
    #[error("edge {0}-{1} is both required and forbidden")]
    Overlap(usize, usize),
    #[error("required edges exceed the degree of vertex {vertex}")]
    ExceedsDegree { vertex: usize },
    #[error("conditioning graph is not a subgraph of the event graph")]
    NotSubgraph,
    #[error("degree sequences belong to different sides")]
    PartMismatch,
    #[error("the graph touches no vertex of this side")]
    EmptyIntersection,
}

/// Which vertex set a degree sequence lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Generic,
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    degrees: Vec<u64>,
    part: Part,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u64>, part: Part) -> Self {
        Self { degrees, part }
    }

    pub fn generic(degrees: Vec<u64>) -> Self {
        Self::new(degrees, Part::Generic)
    }

    pub fn zeros(n: usize, part: Part) -> Self {
        Self::new(vec![0; n], part)
    }

    pub fn part(&self) -> Part {
        self.part
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), ModelError> {
        if self.part != other.part {
            return Err(ModelError::PartMismatch);
        }
        if self.len() != other.len() {
            return Err(ModelError::SizeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ModelError> {
        self.check_compatible(other)?;
        let degrees = self
            .degrees
            .iter()
            .zip(&other.degrees)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::new(degrees, self.part))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ModelError> {
        self.check_compatible(other)?;
        let mut degrees = Vec::with_capacity(self.len());
        for (vertex, (a, b)) in self.degrees.iter().zip(&other.degrees).enumerate() {
            degrees.push(
                a.checked_sub(*b)
                    .ok_or(ModelError::NegativeDegree { vertex })?,
            );
        }
        Ok(Self::new(degrees, self.part))
    }
}

/// Vertices of an edge set that lie on a given side.
pub trait Boundary {
    fn boundary_on(&self, part: Part) -> Vec<usize>;
}

fn check_vertex(v: usize, size: usize) -> Result<(), ModelError> {
    if v >= size {
        Err(ModelError::VertexOutOfRange { vertex: v, size })
    } else {
        Ok(())
    }
}

/// Simple graph on `0..n`, stored as a sorted list of `(u, v)` with `u < v`.
/// Graphs on at most 64 vertices also keep adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Option<Vec<u64>>,
}

impl LabelledGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: (n <= 64).then(|| vec![0; n]),
        }
    }

    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, ModelError> {
        let mut list = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<Edge>) -> Self {
        let adj = (n <= 64).then(|| {
            let mut adj = vec![0u64; n];
            for &(u, v) in &edges {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            adj
        });
        Self { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        match &self.adj {
            Some(adj) => adj[u] >> v & 1 == 1,
            None => self.edges.binary_search(&(u.min(v), u.max(v))).is_ok(),
        }
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut d = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        DegreeSequence::generic(d)
    }

    pub fn boundary(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        set.into_iter().collect()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.first_common_edge(other).is_none()
    }

    pub fn first_common_edge(&self, other: &Self) -> Option<Edge> {
        self.edges
            .iter()
            .copied()
            .find(|&(u, v)| other.contains(u, v))
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.edges.iter().all(|&(u, v)| other.contains(u, v))
    }

    pub fn union(&self, other: &Self) -> Result<Self, ModelError> {
        if self.n != other.n {
            return Err(ModelError::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut edges: Vec<Edge> = self.edges.iter().chain(&other.edges).copied().collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted(self.n, edges))
    }

    pub fn difference(&self, other: &Self) -> Self {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| !other.contains(u, v))
            .collect();
        Self::from_sorted(self.n, edges)
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, ModelError> {
        self.union(&Self::new(self.n, [(u, v)])?)
    }
}

impl Boundary for LabelledGraph {
    fn boundary_on(&self, _part: Part) -> Vec<usize> {
        self.boundary()
    }
}

/// Bipartite graph between `S = 0..left` and `T = 0..right`; edges are `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<Edge>,
}

impl BipartiteGraph {
    pub fn empty(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            edges: Vec::new(),
        }
    }

    pub fn new(
        left: usize,
        right: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, ModelError> {
        let mut list = Vec::new();
        for (s, t) in edges {
            check_vertex(s, left)?;
            check_vertex(t, right)?;
            list.push((s, t));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self {
            left,
            right,
            edges: list,
        })
    }

    pub fn sides(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.edges.binary_search(&(s, t)).is_ok()
    }

    /// Left and right degree sequences.
    pub fn degree_sequences(&self) -> (DegreeSequence, DegreeSequence) {
        let mut a = vec![0u64; self.left];
        let mut b = vec![0u64; self.right];
        for &(s, t) in &self.edges {
            a[s] += 1;
            b[t] += 1;
        }
        (
            DegreeSequence::new(a, Part::Left),
            DegreeSequence::new(b, Part::Right),
        )
    }

    /// Left and right vertices touched by an edge.
    pub fn boundary(&self) -> (Vec<usize>, Vec<usize>) {
        let s: BTreeSet<usize> = self.edges.iter().map(|e| e.0).collect();
        let t: BTreeSet<usize> = self.edges.iter().map(|e| e.1).collect();
        (s.into_iter().collect(), t.into_iter().collect())
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.first_common_edge(other).is_none()
    }

    pub fn first_common_edge(&self, other: &Self) -> Option<Edge> {
        self.edges
            .iter()
            .copied()
            .find(|&(s, t)| other.contains(s, t))
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.edges.iter().all(|&(s, t)| other.contains(s, t))
    }

    pub fn union(&self, other: &Self) -> Result<Self, ModelError> {
        if self.sides() != other.sides() {
            return Err(ModelError::SizeMismatch {
                expected: self.left + self.right,
                found: other.left + other.right,
            });
        }
        let mut edges: Vec<Edge> = self.edges.iter().chain(&other.edges).copied().collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            left: self.left,
            right: self.right,
            edges,
        })
    }

    pub fn difference(&self, other: &Self) -> Self {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(s, t)| !other.contains(s, t))
            .collect();
        Self {
            left: self.left,
            right: self.right,
            edges,
        }
    }

    pub fn with_edge(&self, s: usize, t: usize) -> Result<Self, ModelError> {
        self.union(&Self::new(self.left, self.right, [(s, t)])?)
    }
}

impl Boundary for BipartiteGraph {
    fn boundary_on(&self, part: Part) -> Vec<usize> {
        let (s, t) = self.boundary();
        match part {
            Part::Right => t,
            _ => s,
        }
    }
}

/// Largest entry of `g` over the vertices of `x` on `g`'s side.
pub fn restricted_max_degree<X: Boundary>(g: &DegreeSequence, x: &X) -> Result<u64, ModelError> {
    let mut best = None;
    for w in x.boundary_on(g.part()) {
        check_vertex(w, g.len())?;
        best = best.max(Some(g.get(w)));
    }
    best.ok_or(ModelError::EmptyIntersection)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericInstance {
    pub degrees: DegreeSequence,
    pub required: LabelledGraph,
    pub forbidden: LabelledGraph,
}

impl GenericInstance {
    pub fn new(
        degrees: DegreeSequence,
        required: LabelledGraph,
        forbidden: LabelledGraph,
    ) -> Result<Self, ModelError> {
        let n = degrees.len();
        for g in [&required, &forbidden] {
            if g.vertex_count() != n {
                return Err(ModelError::SizeMismatch {
                    expected: n,
                    found: g.vertex_count(),
                });
            }
        }
        if let Some((u, v)) = required.first_common_edge(&forbidden) {
            return Err(ModelError::Overlap(u, v));
        }
        let h = required.degree_sequence();
        if let Some(vertex) = (0..n).find(|&i| h.get(i) > degrees.get(i)) {
            return Err(ModelError::ExceedsDegree { vertex });
        }
        Ok(Self {
            degrees,
            required,
            forbidden,
        })
    }

    /// Unconstrained instance on `degrees`.
    pub fn free(degrees: DegreeSequence) -> Self {
        let n = degrees.len();
        Self {
            degrees,
            required: LabelledGraph::empty(n),
            forbidden: LabelledGraph::empty(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    pub left: DegreeSequence,
    pub right: DegreeSequence,
    pub required: BipartiteGraph,
    pub forbidden: BipartiteGraph,
}

impl BipartiteInstance {
    pub fn new(
        left: DegreeSequence,
        right: DegreeSequence,
        required: BipartiteGraph,
        forbidden: BipartiteGraph,
    ) -> Result<Self, ModelError> {
        let sides = (left.len(), right.len());
        for g in [&required, &forbidden] {
            if g.sides() != sides {
                return Err(ModelError::SizeMismatch {
                    expected: sides.0 + sides.1,
                    found: g.sides().0 + g.sides().1,
                });
            }
        }
        if let Some((u, v)) = required.first_common_edge(&forbidden) {
            return Err(ModelError::Overlap(u, v));
        }
        let (hs, ht) = required.degree_sequences();
        if let Some(vertex) = (0..sides.0).find(|&i| hs.get(i) > left.get(i)) {
            return Err(ModelError::ExceedsDegree { vertex });
        }
        if let Some(vertex) = (0..sides.1).find(|&i| ht.get(i) > right.get(i)) {
            return Err(ModelError::ExceedsDegree {
                vertex: sides.0 + vertex,
            });
        }
        let left = DegreeSequence::new(left.as_slice().to_vec(), Part::Left);
        let right = DegreeSequence::new(right.as_slice().to_vec(), Part::Right);
        Ok(Self {
            left,
            right,
            required,
            forbidden,
        })
    }

    pub fn free(left: DegreeSequence, right: DegreeSequence) -> Self {
        let (a, b) = (left.len(), right.len());
        Self {
            left: DegreeSequence::new(left.as_slice().to_vec(), Part::Left),
            right: DegreeSequence::new(right.as_slice().to_vec(), Part::Right),
            required: BipartiteGraph::empty(a, b),
            forbidden: BipartiteGraph::empty(a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemInstance {
    Generic(GenericInstance),
    Bipartite(BipartiteInstance),
}

/// Moves the conditioning edges `h` into the degree sequence and the forbidden
/// set: conditioning on `h` present and `l` absent is the same as working in the
/// class with degrees `d - h`, forbidden `l ∪ h`, and event `x \ h`.
pub fn reduce_conditioning(
    d: &DegreeSequence,
    h: &LabelledGraph,
    l: &LabelledGraph,
    x: &LabelledGraph,
) -> Result<GenericInstance, ModelError> {
    if let Some((u, v)) = h.first_common_edge(l) {
        return Err(ModelError::Overlap(u, v));
    }
    if !h.is_subgraph_of(x) {
        return Err(ModelError::NotSubgraph);
    }
    let degrees = d.checked_sub(&h.degree_sequence())?;
    Ok(GenericInstance {
        degrees,
        required: x.difference(h),
        forbidden: l.union(h)?,
    })
}

pub fn reduce_conditioning_bipartite(
    s: &DegreeSequence,
    t: &DegreeSequence,
    h: &BipartiteGraph,
    l: &BipartiteGraph,
    x: &BipartiteGraph,
) -> Result<BipartiteInstance, ModelError> {
    if let Some((u, v)) = h.first_common_edge(l) {
        return Err(ModelError::Overlap(u, v));
    }
    if !h.is_subgraph_of(x) {
        return Err(ModelError::NotSubgraph);
    }
    let (hs, ht) = h.degree_sequences();
    let left = DegreeSequence::new(s.as_slice().to_vec(), Part::Left).checked_sub(&hs)?;
    let right = DegreeSequence::new(t.as_slice().to_vec(), Part::Right).checked_sub(&ht)?;
    Ok(BipartiteInstance {
        left,
        right,
        required: x.difference(h),
        forbidden: l.union(h)?,
    })
}

/// Erdős–Gallai test.
pub fn is_graphical(d: &[u64]) -> bool {
    let mut s: Vec<u64> = d.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = s.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let n = s.len() as u64;
    let mut lhs = 0;
    for k in 1..=s.len() {
        lhs += s[k - 1];
        let rhs =
            (k as u64) * (k as u64 - 1) + s[k..].iter().map(|&x| x.min(k as u64)).sum::<u64>();
        if lhs > rhs {
            return false;
        }
        if k as u64 >= n {
            break;
        }
    }
    true
}

/// Gale–Ryser test for a bipartite degree pair.
pub fn is_bigraphical(s: &[u64], t: &[u64]) -> bool {
    if s.iter().sum::<u64>() != t.iter().sum::<u64>() {
        return false;
    }
    let mut a = s.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    let mut lhs = 0;
    for k in 1..=a.len() {
        lhs += a[k - 1];
        let rhs: u64 = t.iter().map(|&b| b.min(k as u64)).sum();
        if lhs > rhs {
            return false;
        }
    }
    true
}
