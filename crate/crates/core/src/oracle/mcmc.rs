//! 2-switch Markov chain on a constrained class. Diagnostic only: the chain
//! is not known to be irreducible for arbitrary forbidden sets, so its
//! estimates never feed a certified bound.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{class_masks, Layout, OracleError};
use crate::model::{Edge, ProblemInstance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McmcEvent {
    /// Every listed edge is present.
    Contains(Vec<Edge>),
    /// No listed edge is present.
    Avoids(Vec<Edge>),
}

#[derive(Clone, Copy, Debug)]
pub struct McmcConfig {
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Number of batches for the batch-means standard error.
    pub batches: u64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            steps: 1_000_000,
            burn_in: 10_000,
            seed: 0,
            batches: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McmcEstimate {
    pub estimate: f64,
    /// Batch-means standard error.
    pub std_error: f64,
    /// Normal-approximation 95% half-width.
    pub half_width: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub accepted: u64,
    pub seed: u64,
}

/// Chain state in global vertex ids, edges stored as `(a, b)` with `a < b`.
struct State {
    edges: Vec<Edge>,
    present: HashSet<Edge>,
    required: HashSet<Edge>,
    forbidden: HashSet<Edge>,
    bipartite: bool,
}

fn key(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Prepared {
    n: usize,
    degrees: Vec<u64>,
    required: Vec<Edge>,
    forbidden: Vec<Edge>,
    /// `Some(left)` for bipartite instances.
    left: Option<usize>,
}

fn prepare(inst: &ProblemInstance) -> Prepared {
    match inst {
        ProblemInstance::Generic(g) => Prepared {
            n: g.degrees.len(),
            degrees: g.degrees.as_slice().to_vec(),
            required: g.required.edges().to_vec(),
            forbidden: g.forbidden.edges().to_vec(),
            left: None,
        },
        ProblemInstance::Bipartite(b) => {
            let a = b.left.len();
            let lift = |e: &Edge| (e.0, a + e.1);
            Prepared {
                n: a + b.right.len(),
                degrees: b
                    .left
                    .as_slice()
                    .iter()
                    .chain(b.right.as_slice())
                    .copied()
                    .collect(),
                required: b.required.edges().iter().map(lift).collect(),
                forbidden: b.forbidden.edges().iter().map(lift).collect(),
                left: Some(a),
            }
        }
    }
}

/// Greedy Havel–Hakimi style construction that keeps required edges and avoids forbidden ones.
fn greedy(p: &Prepared) -> Option<Vec<Edge>> {
    let mut residual = p.degrees.clone();
    let mut present: HashSet<Edge> = HashSet::new();
    for &(a, b) in &p.required {
        residual[a] = residual[a].checked_sub(1)?;
        residual[b] = residual[b].checked_sub(1)?;
        present.insert(key(a, b));
    }
    let forbidden: HashSet<Edge> = p.forbidden.iter().map(|&(a, b)| key(a, b)).collect();
    let side = |w: usize| p.left.map(|l| w < l);
    loop {
        let v = (0..p.n)
            .filter(|&w| residual[w] > 0)
            .max_by_key(|&w| (residual[w], std::cmp::Reverse(w)))?;
        let mut cands: Vec<usize> = (0..p.n)
            .filter(|&w| w != v && residual[w] > 0)
            .filter(|&w| side(w).is_none() || side(w) != side(v))
            .filter(|&w| !present.contains(&key(v, w)) && !forbidden.contains(&key(v, w)))
            .collect();
        cands.sort_by_key(|&w| (std::cmp::Reverse(residual[w]), w));
        let need = residual[v] as usize;
        if cands.len() < need {
            return None;
        }
        for &w in &cands[..need] {
            residual[w] -= 1;
            present.insert(key(v, w));
        }
        residual[v] = 0;
        if residual.iter().all(|&r| r == 0) {
            let mut edges: Vec<Edge> = present.into_iter().collect();
            edges.sort_unstable();
            return Some(edges);
        }
    }
}

/// Falls back to the first enumerated graph when greedy construction fails on a small instance.
fn realize(inst: &ProblemInstance, p: &Prepared) -> Result<Vec<Edge>, OracleError> {
    if p.degrees.iter().all(|&d| d == 0) && p.required.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(edges) = greedy(p) {
        return Ok(edges);
    }
    let layout = Layout::of(inst);
    if layout.check().is_err() {
        return Err(OracleError::RealizationFailure);
    }
    let first = class_masks(inst, super::DEFAULT_NODE_BUDGET)
        .map_err(|_| OracleError::RealizationFailure)?
        .into_iter()
        .next()
        .ok_or(OracleError::RealizationFailure)?;
    Ok(layout
        .edges_of(first)
        .into_iter()
        .map(|e| layout.global(e))
        .collect())
}

impl State {
    /// One 2-switch proposal; returns whether it was accepted.
    fn step(&mut self, rng: &mut ChaCha8Rng, touched: &mut [Edge; 4]) -> bool {
        let m = self.edges.len();
        if m < 2 {
            return false;
        }
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = self.edges[i];
        let (mut c, mut d) = self.edges[j];
        // In bipartite states the smaller id is always on the left, so only the cross pairing is valid.
        if !self.bipartite && rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b {
            return false;
        }
        let (e1, e2) = (key(a, d), key(c, b));
        let (o1, o2) = (self.edges[i], self.edges[j]);
        if self.present.contains(&e1) || self.present.contains(&e2) {
            return false;
        }
        if self.forbidden.contains(&e1) || self.forbidden.contains(&e2) {
            return false;
        }
        if self.required.contains(&o1) || self.required.contains(&o2) {
            return false;
        }
        self.present.remove(&o1);
        self.present.remove(&o2);
        self.present.insert(e1);
        self.present.insert(e2);
        self.edges[i] = e1;
        self.edges[j] = e2;
        *touched = [o1, o2, e1, e2];
        true
    }
}

/// Empirical frequency of `event` along a 2-switch chain on the instance's class.
pub fn mcmc_estimate(
    inst: &ProblemInstance,
    event: &McmcEvent,
    cfg: &McmcConfig,
) -> Result<McmcEstimate, OracleError> {
    if cfg.steps == 0 || cfg.batches == 0 || cfg.batches > cfg.steps {
        return Err(OracleError::Invalid("need steps ≥ batches ≥ 1".into()));
    }
    let p = prepare(inst);
    let layout = Layout::of(inst);
    let (watch, contains) = match event {
        McmcEvent::Contains(x) => (x, true),
        McmcEvent::Avoids(y) => (y, false),
    };
    let mut watched: HashSet<Edge> = HashSet::new();
    for &e in watch {
        let e = layout.normalize(e)?;
        let (a, b) = layout.global(e);
        watched.insert(key(a, b));
    }
    let edges = realize(inst, &p)?;
    let mut state = State {
        present: edges.iter().copied().collect(),
        edges,
        required: p.required.iter().map(|&(a, b)| key(a, b)).collect(),
        forbidden: p.forbidden.iter().map(|&(a, b)| key(a, b)).collect(),
        bipartite: p.left.is_some(),
    };
    let mut hits = watched.iter().filter(|e| state.present.contains(e)).count();
    let holds = |hits: usize| {
        if contains {
            hits == watched.len()
        } else {
            hits == 0
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut touched = [(0, 0); 4];
    let mut advance = |state: &mut State, hits: &mut usize| -> bool {
        if !state.step(&mut rng, &mut touched) {
            return false;
        }
        for (k, e) in touched.iter().enumerate() {
            if watched.contains(e) {
                if k < 2 {
                    *hits -= 1;
                } else {
                    *hits += 1;
                }
            }
        }
        true
    };
    for _ in 0..cfg.burn_in {
        advance(&mut state, &mut hits);
    }
    let batch_len = cfg.steps / cfg.batches;
    let mut batch_means = Vec::with_capacity(cfg.batches as usize);
    let (mut total, mut accepted, mut counted) = (0u64, 0u64, 0u64);
    for b in 0..cfg.batches {
        let len = if b + 1 == cfg.batches {
            cfg.steps - batch_len * (cfg.batches - 1)
        } else {
            batch_len
        };
        let mut in_batch = 0u64;
        for _ in 0..len {
            accepted += advance(&mut state, &mut hits) as u64;
            in_batch += holds(hits) as u64;
        }
        total += in_batch;
        counted += len;
        batch_means.push(in_batch as f64 / len as f64);
    }
    let estimate = total as f64 / counted as f64;
    let k = batch_means.len() as f64;
    let std_error = if k > 1.0 {
        let var = batch_means
            .iter()
            .map(|x| (x - estimate).powi(2))
            .sum::<f64>()
            / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    Ok(McmcEstimate {
        estimate,
        std_error,
        half_width: 1.96 * std_error,
        steps: cfg.steps,
        burn_in: cfg.burn_in,
        accepted,
        seed: cfg.seed,
    })
}
