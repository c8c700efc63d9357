//! Switching counts between the classes with `uv` present and `uv` forbidden.
//!
//! For a graph `G` containing `uv` a forward switching removes `uv`; for a
//! graph `G'` avoiding `uv` a backward switching restores it. Every switching
//! is an ordered vertex tuple; forward and backward tuples are in bijection, so
//! class totals agree in each arity.

use super::{ClassOracle, Layout, OracleError};
use crate::model::{Edge, ProblemInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Two,
    Three,
}

impl Arity {
    pub fn from_number(k: u32) -> Option<Self> {
        match k {
            2 => Some(Arity::Two),
            3 => Some(Arity::Three),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
    Both,
}

/// Adjacency of one graph plus the forbidden set, as global-vertex bitsets.
pub struct Switchable<'a> {
    pub adj: &'a [u64],
    /// Adjacency of `G ∪ M`.
    pub blocked: &'a [u64],
}

#[inline]
fn bit(w: usize) -> u64 {
    1u64 << w
}

#[inline]
fn has(set: u64, w: usize) -> bool {
    set >> w & 1 == 1
}

/// Indices `0..n` as a bit mask.
#[inline]
fn range_mask(lo: usize, hi: usize) -> u64 {
    let top = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 };
    top & !((1u64 << lo) - 1)
}

impl Switchable<'_> {
    /// Generic forward 2-switchings `(x, y)`: delete `uv, xy`, add `ux, vy`.
    pub fn generic_forward_two(&self, u: usize, v: usize) -> u64 {
        let n = self.adj.len();
        let mut c = 0;
        for x in 0..n {
            if x == u || x == v || has(self.blocked[u], x) {
                continue;
            }
            c += (self.adj[x] & !bit(u) & !bit(v) & !self.blocked[v]).count_ones() as u64;
        }
        c
    }

    /// Generic backward 2-switchings `(x, y)`: `ux, vy` present, `x != y`, `xy` not in `G' ∪ M`.
    pub fn generic_backward_two(&self, u: usize, v: usize) -> u64 {
        let mut c = 0;
        for x in ones(self.adj[u]) {
            c += (self.adj[v] & !bit(x) & !self.blocked[x]).count_ones() as u64;
        }
        c
    }

    /// Generic forward 3-switchings `(x, a, y, b)`: delete `uv, xa, yb`, add `ux, vy, ab`.
    /// All six vertices distinct except that `x = y` is allowed.
    pub fn generic_forward_three(&self, u: usize, v: usize) -> u64 {
        let n = self.adj.len();
        let uv = bit(u) | bit(v);
        let mut c = 0;
        for x in 0..n {
            if uv >> x & 1 == 1 || has(self.blocked[u], x) {
                continue;
            }
            for a in ones(self.adj[x] & !uv) {
                for y in 0..n {
                    if uv >> y & 1 == 1 || y == a || has(self.blocked[v], y) {
                        continue;
                    }
                    let b = self.adj[y] & !uv & !bit(x) & !bit(a) & !self.blocked[a];
                    c += b.count_ones() as u64;
                }
            }
        }
        c
    }

    /// Generic backward 3-switchings `(x, a, y, b)`: `ux, vy, ab` present,
    /// `a, b` avoid `u, v`, `x, y` avoid `a, b`, and `xa, yb` not in `G' ∪ M`.
    pub fn generic_backward_three(&self, u: usize, v: usize) -> u64 {
        let n = self.adj.len();
        let uv = bit(u) | bit(v);
        let mut c = 0;
        for x in ones(self.adj[u]) {
            for y in ones(self.adj[v]) {
                let xy = bit(x) | bit(y);
                for a in 0..n {
                    if (uv | xy) >> a & 1 == 1 || has(self.blocked[x], a) {
                        continue;
                    }
                    c += (self.adj[a] & !uv & !xy & !self.blocked[y]).count_ones() as u64;
                }
            }
        }
        c
    }

    /// Bipartite forward 2-switchings `(x, y) ∈ S × T`: delete `uv, xy`, add `uy, xv`.
    pub fn bipartite_forward_two(&self, left: usize, u: usize, v: usize) -> u64 {
        let mut c = 0;
        for x in 0..left {
            if x == u || has(self.blocked[v], x) {
                continue;
            }
            c += (self.adj[x] & !bit(v) & !self.blocked[u]).count_ones() as u64;
        }
        c
    }

    /// Bipartite backward 2-switchings `(x, y)`: `uy, xv` present, `xy` not in `G' ∪ M`.
    pub fn bipartite_backward_two(&self, u: usize, v: usize) -> u64 {
        let mut c = 0;
        for y in ones(self.adj[u]) {
            c += (self.adj[v] & !self.blocked[y]).count_ones() as u64;
        }
        c
    }

    /// Bipartite forward 3-switchings `(y, a, x, b) ∈ S² × T²`: delete `uv, ax, yb`,
    /// add `ux, yv, ab`; all six vertices distinct.
    pub fn bipartite_forward_three(&self, left: usize, u: usize, v: usize) -> u64 {
        let mut c = 0;
        let s_side = range_mask(0, left);
        for a in ones(s_side & !bit(u)) {
            for x in ones(self.adj[a] & !bit(v) & !self.blocked[u]) {
                for y in ones(s_side & !bit(u) & !bit(a) & !self.blocked[v]) {
                    c += (self.adj[y] & !bit(v) & !bit(x) & !self.blocked[a]).count_ones() as u64;
                }
            }
        }
        c
    }

    /// Bipartite backward 3-switchings `(y, a, x, b)`: `ux, yv, ab` present,
    /// `a != u`, `b != v`, `x != b`, `y != a`, and `ax, yb` not in `G' ∪ M`.
    pub fn bipartite_backward_three(&self, left: usize, u: usize, v: usize) -> u64 {
        let mut c = 0;
        let s_side = range_mask(0, left);
        for x in ones(self.adj[u]) {
            for y in ones(self.adj[v]) {
                for a in ones(s_side & !bit(u) & !bit(y) & !self.blocked[x]) {
                    c += (self.adj[a] & !bit(v) & !bit(x) & !self.blocked[y]).count_ones() as u64;
                }
            }
        }
        c
    }
}

fn ones(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            return None;
        }
        let w = set.trailing_zeros() as usize;
        set &= set - 1;
        Some(w)
    })
}

/// Counts switchings of one graph. `uv` and the result are in global vertex ids.
pub fn count_switchings(
    layout: &Layout,
    sw: &Switchable,
    uv: (usize, usize),
    arity: Arity,
    forward: bool,
) -> u64 {
    let (u, v) = uv;
    match (layout, arity, forward) {
        (Layout::Generic { .. }, Arity::Two, true) => sw.generic_forward_two(u, v),
        (Layout::Generic { .. }, Arity::Two, false) => sw.generic_backward_two(u, v),
        (Layout::Generic { .. }, Arity::Three, true) => sw.generic_forward_three(u, v),
        (Layout::Generic { .. }, Arity::Three, false) => sw.generic_backward_three(u, v),
        (Layout::Bipartite { left, .. }, Arity::Two, true) => sw.bipartite_forward_two(*left, u, v),
        (Layout::Bipartite { .. }, Arity::Two, false) => sw.bipartite_backward_two(u, v),
        (Layout::Bipartite { left, .. }, Arity::Three, true) => {
            sw.bipartite_forward_three(*left, u, v)
        }
        (Layout::Bipartite { left, .. }, Arity::Three, false) => {
            sw.bipartite_backward_three(*left, u, v)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub arity: Arity,
    pub edge: Edge,
    /// `(graph mask, forward count)` for each graph containing `uv`.
    pub forward: Vec<(u128, u64)>,
    /// `(graph mask, backward count)` for each graph avoiding `uv`.
    pub backward: Vec<(u128, u64)>,
}

impl CensusReport {
    pub fn forward_total(&self) -> u64 {
        self.forward.iter().map(|x| x.1).sum()
    }

    pub fn backward_total(&self) -> u64 {
        self.backward.iter().map(|x| x.1).sum()
    }
}

/// Splits the instance's class by `uv` and counts switchings on each side.
/// The instance's forbidden edges play the role of `M`; required edges must be empty.
pub fn switching_census(
    inst: &ProblemInstance,
    uv: Edge,
    arity: Arity,
    direction: Direction,
    budget: u64,
) -> Result<CensusReport, OracleError> {
    let (has_required, forbidden) = match inst {
        ProblemInstance::Generic(g) => (!g.required.is_empty(), g.forbidden.edges().to_vec()),
        ProblemInstance::Bipartite(b) => (!b.required.is_empty(), b.forbidden.edges().to_vec()),
    };
    if has_required {
        return Err(OracleError::Invalid(
            "switching census needs an instance without required edges".into(),
        ));
    }
    let oracle = ClassOracle::new(inst, budget)?;
    let layout = &oracle.layout;
    let uv = layout.normalize(uv)?;
    if forbidden.contains(&uv) {
        return Err(OracleError::Invalid("census edge is forbidden".into()));
    }
    let e = layout.mask(&[uv]);
    let m_adj = layout.adjacency(layout.mask(&forbidden));
    let g_uv = layout.global(uv);
    let mut report = CensusReport {
        arity,
        edge: uv,
        forward: Vec::new(),
        backward: Vec::new(),
    };
    for &g in &oracle.graphs {
        let forward = g & e != 0;
        let wanted = match direction {
            Direction::Forward => forward,
            Direction::Backward => !forward,
            Direction::Both => true,
        };
        if !wanted {
            continue;
        }
        let adj = layout.adjacency(g);
        let blocked: Vec<u64> = adj.iter().zip(&m_adj).map(|(a, b)| a | b).collect();
        let sw = Switchable {
            adj: &adj,
            blocked: &blocked,
        };
        let c = count_switchings(layout, &sw, g_uv, arity, forward);
        if forward {
            report.forward.push((g, c));
        } else {
            report.backward.push((g, c));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BipartiteInstance, DegreeSequence, GenericInstance, LabelledGraph, Part};
    use crate::oracle::DEFAULT_NODE_BUDGET;

    fn matching(n: usize) -> ProblemInstance {
        ProblemInstance::Generic(GenericInstance::free(DegreeSequence::generic(vec![1; n])))
    }

    #[test]
    fn matching_two_switch_census() {
        let r = switching_census(
            &matching(6),
            (0, 1),
            Arity::Two,
            Direction::Both,
            DEFAULT_NODE_BUDGET,
        )
        .unwrap();
        assert_eq!(r.forward.len(), 3);
        assert!(r.forward.iter().all(|x| x.1 == 4));
        assert_eq!(r.backward.len(), 12);
        assert!(r.backward.iter().all(|x| x.1 == 1));
        assert_eq!(r.forward_total(), 12);
        assert_eq!(r.backward_total(), 12);
    }

    /// Direct tuple enumeration over all vertex tuples, written from the
    /// definitions independently of the bitset loops above.
    fn brute(
        layout: &Layout,
        g: u128,
        m: u128,
        uv: (usize, usize),
        arity: Arity,
        forward: bool,
    ) -> u64 {
        let adj = layout.adjacency(g);
        let madj = layout.adjacency(m);
        let e = |a: usize, b: usize| a != b && adj[a] >> b & 1 == 1;
        let blk = |a: usize, b: usize| a == b || e(a, b) || madj[a] >> b & 1 == 1;
        let nv = layout.vertices();
        let (u, v) = uv;
        let (s_range, t_range): (Vec<usize>, Vec<usize>) = match *layout {
            Layout::Generic { n } => ((0..n).collect(), (0..n).collect()),
            Layout::Bipartite { left, .. } => ((0..left).collect(), (left..nv).collect()),
        };
        let bip = matches!(layout, Layout::Bipartite { .. });
        let mut c = 0;
        match (arity, forward, bip) {
            (Arity::Two, true, false) => {
                for x in 0..nv {
                    for y in 0..nv {
                        let ok = e(x, y)
                            && ![u, v].contains(&x)
                            && ![u, v].contains(&y)
                            && !blk(u, x)
                            && !blk(v, y);
                        c += ok as u64;
                    }
                }
            }
            (Arity::Two, false, false) => {
                for x in 0..nv {
                    for y in 0..nv {
                        c += (e(u, x) && e(v, y) && x != y && !blk(x, y)) as u64;
                    }
                }
            }
            (Arity::Three, true, false) => {
                for x in 0..nv {
                    for a in 0..nv {
                        for y in 0..nv {
                            for b in 0..nv {
                                let set = [u, v, x, a, b];
                                let distinct = (0..5).all(|i| (i + 1..5).all(|j| set[i] != set[j]))
                                    && ![u, v, a, b].contains(&y);
                                let ok = distinct
                                    && e(x, a)
                                    && e(y, b)
                                    && !blk(u, x)
                                    && !blk(v, y)
                                    && !blk(a, b);
                                c += ok as u64;
                            }
                        }
                    }
                }
            }
            (Arity::Three, false, false) => {
                for x in 0..nv {
                    for a in 0..nv {
                        for y in 0..nv {
                            for b in 0..nv {
                                let ok = e(u, x)
                                    && e(v, y)
                                    && e(a, b)
                                    && ![u, v].contains(&a)
                                    && ![u, v].contains(&b)
                                    && ![a, b].contains(&x)
                                    && ![a, b].contains(&y)
                                    && !blk(x, a)
                                    && !blk(y, b);
                                c += ok as u64;
                            }
                        }
                    }
                }
            }
            (Arity::Two, true, true) => {
                for &x in &s_range {
                    for &y in &t_range {
                        c += (e(x, y) && x != u && y != v && !blk(u, y) && !blk(x, v)) as u64;
                    }
                }
            }
            (Arity::Two, false, true) => {
                for &x in &s_range {
                    for &y in &t_range {
                        c += (e(u, y) && e(x, v) && !blk(x, y)) as u64;
                    }
                }
            }
            (Arity::Three, true, true) => {
                for &y in &s_range {
                    for &a in &s_range {
                        for &x in &t_range {
                            for &b in &t_range {
                                let distinct =
                                    u != a && u != y && a != y && v != x && v != b && x != b;
                                let ok = distinct
                                    && e(a, x)
                                    && e(y, b)
                                    && !blk(u, x)
                                    && !blk(y, v)
                                    && !blk(a, b);
                                c += ok as u64;
                            }
                        }
                    }
                }
            }
            (Arity::Three, false, true) => {
                for &y in &s_range {
                    for &a in &s_range {
                        for &x in &t_range {
                            for &b in &t_range {
                                let ok = e(u, x)
                                    && e(y, v)
                                    && e(a, b)
                                    && a != u
                                    && b != v
                                    && x != b
                                    && !blk(a, x)
                                    && y != a
                                    && !blk(y, b);
                                c += ok as u64;
                            }
                        }
                    }
                }
            }
        }
        c
    }

    fn check_against_brute(inst: &ProblemInstance, m: &[Edge], uv: Edge) {
        let oracle = ClassOracle::new(inst, DEFAULT_NODE_BUDGET).unwrap();
        let layout = &oracle.layout;
        let mm = layout.mask(m);
        let e = layout.mask(&[uv]);
        let g_uv = layout.global(uv);
        let madj = layout.adjacency(mm);
        let mut sums = [[0u64; 2]; 2];
        for &g in &oracle.graphs {
            if g & mm != 0 {
                continue;
            }
            let forward = g & e != 0;
            let adj = layout.adjacency(g);
            let blocked: Vec<u64> = adj.iter().zip(&madj).map(|(a, b)| a | b).collect();
            let sw = Switchable {
                adj: &adj,
                blocked: &blocked,
            };
            for (k, arity) in [Arity::Two, Arity::Three].into_iter().enumerate() {
                let fast = count_switchings(layout, &sw, g_uv, arity, forward);
                assert_eq!(
                    fast,
                    brute(layout, g, mm, g_uv, arity, forward),
                    "{arity:?} forward={forward}"
                );
                sums[k][forward as usize] += fast;
            }
        }
        assert_eq!(sums[0][0], sums[0][1]);
        assert_eq!(sums[1][0], sums[1][1]);
    }

    #[test]
    fn generic_counts_match_tuple_enumeration() {
        for d in [
            vec![2, 2, 2, 1, 1, 1, 1],
            vec![3, 2, 2, 2, 1, 1, 1],
            vec![2, 2, 2, 2, 2, 2],
        ] {
            let inst = ProblemInstance::Generic(GenericInstance::free(DegreeSequence::generic(d)));
            check_against_brute(&inst, &[], (0, 1));
            check_against_brute(&inst, &[(0, 2), (3, 4)], (0, 1));
            check_against_brute(&inst, &[(1, 5)], (4, 5));
        }
    }

    #[test]
    fn bipartite_counts_match_tuple_enumeration() {
        let inst = ProblemInstance::Bipartite(BipartiteInstance::free(
            DegreeSequence::new(vec![2, 2, 1, 1], Part::Left),
            DegreeSequence::new(vec![2, 2, 1, 1], Part::Right),
        ));
        check_against_brute(&inst, &[], (0, 0));
        check_against_brute(&inst, &[(1, 2)], (0, 1));
        check_against_brute(&inst, &[(2, 0), (3, 3)], (2, 2));
    }

    #[test]
    fn census_rejects_required_edges() {
        let inst = ProblemInstance::Generic(
            GenericInstance::new(
                DegreeSequence::generic(vec![1; 4]),
                LabelledGraph::new(4, [(0, 1)]).unwrap(),
                LabelledGraph::empty(4),
            )
            .unwrap(),
        );
        assert!(switching_census(&inst, (2, 3), Arity::Two, Direction::Both, 100).is_err());
    }
}
