//! Class sizes by memoized search over residual degrees.
//!
//! Vertices are processed in index order; once vertex `i` has picked its
//! neighbours among later vertices, the number of completions depends only on
//! `i` and the residual degrees of vertices `i..`. For sparse sequences there
//! are far fewer such states than graphs (`d = (1, …, 1)` on 20 vertices has
//! 654 729 075 graphs), so this path covers classes the edge-mask enumerator
//! cannot hold.

use std::collections::HashMap;

use super::{Layout, OracleError};
use crate::model::{Edge, ProblemInstance};

/// A class in global vertex ids with required and forbidden pairs.
struct Flat {
    residual: Vec<u8>,
    allowed: Vec<u64>,
    empty: bool,
}

fn flatten(
    inst: &ProblemInstance,
    extra_required: &[Edge],
    extra_forbidden: &[Edge],
) -> Result<Flat, OracleError> {
    let layout = Layout::of(inst);
    let nv = layout.vertices();
    if nv > 64 {
        return Err(OracleError::TooLarge(format!("{nv} vertices (limit 64)")));
    }
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
    if let Some(&d) = degrees.iter().find(|&&d| d > u8::MAX as u64) {
        return Err(OracleError::TooLarge(format!("degree {d} (limit 255)")));
    }
    let mut allowed = vec![0u64; nv];
    for e in layout.all_edges() {
        let (a, b) = layout.global(e);
        allowed[a] |= 1 << b;
        allowed[b] |= 1 << a;
    }
    let mut residual: Vec<u8> = degrees.iter().map(|&d| d as u8).collect();
    let mut empty = false;
    let norm = |e: Edge| layout.normalize(e);
    let required: Vec<Edge> = required
        .iter()
        .chain(extra_required)
        .map(|&e| norm(e))
        .collect::<Result<_, _>>()?;
    let forbidden: Vec<Edge> = forbidden
        .iter()
        .chain(extra_forbidden)
        .map(|&e| norm(e))
        .collect::<Result<_, _>>()?;
    for &e in &required {
        let (a, b) = layout.global(e);
        if allowed[a] >> b & 1 == 0 {
            // Listed twice, so it was already placed.
            continue;
        }
        allowed[a] &= !(1 << b);
        allowed[b] &= !(1 << a);
        for w in [a, b] {
            match residual[w].checked_sub(1) {
                Some(r) => residual[w] = r,
                None => empty = true,
            }
        }
    }
    for &e in &forbidden {
        if required.contains(&e) {
            empty = true;
        }
        let (a, b) = layout.global(e);
        allowed[a] &= !(1 << b);
        allowed[b] &= !(1 << a);
    }
    if let Layout::Bipartite { left, .. } = layout {
        let (s, t) = residual.split_at(left);
        empty |=
            s.iter().map(|&x| x as u64).sum::<u64>() != t.iter().map(|&x| x as u64).sum::<u64>();
    }
    Ok(Flat {
        residual,
        allowed,
        empty,
    })
}

struct Memo<'a> {
    allowed: &'a [u64],
    table: HashMap<(usize, Vec<u8>), u128>,
    nodes: u64,
    budget: u64,
}

impl Memo<'_> {
    fn count(&mut self, i: usize, residual: &mut Vec<u8>) -> Result<u128, OracleError> {
        let n = residual.len();
        if i == n {
            return Ok(1);
        }
        let need = residual[i] as usize;
        let cand: Vec<usize> = (i + 1..n)
            .filter(|&w| self.allowed[i] >> w & 1 == 1 && residual[w] > 0)
            .collect();
        if need > cand.len() {
            return Ok(0);
        }
        if need == 0 {
            return self.count(i + 1, residual);
        }
        let key = (i, residual[i..].to_vec());
        if let Some(&c) = self.table.get(&key) {
            return Ok(c);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OracleError::ResourceLimit(self.budget));
        }
        let mut total = 0u128;
        let mut pick: Vec<usize> = (0..need).collect();
        residual[i] = 0;
        loop {
            for &j in &pick {
                residual[cand[j]] -= 1;
            }
            let sub = self.count(i + 1, residual);
            for &j in &pick {
                residual[cand[j]] += 1;
            }
            total = total
                .checked_add(sub?)
                .ok_or_else(|| OracleError::TooLarge("class size exceeds u128".into()))?;
            if !super::next_combination(&mut pick, cand.len()) {
                break;
            }
        }
        residual[i] = need as u8;
        self.table.insert(key, total);
        Ok(total)
    }
}

/// Number of graphs in the instance's class that also contain `extra_required`
/// and avoid `extra_forbidden`. Handles up to 64 vertices at any density the
/// memo table can hold within `budget` states.
pub fn count_memo(
    inst: &ProblemInstance,
    extra_required: &[Edge],
    extra_forbidden: &[Edge],
    budget: u64,
) -> Result<u128, OracleError> {
    let flat = flatten(inst, extra_required, extra_forbidden)?;
    if flat.empty {
        return Ok(0);
    }
    let mut memo = Memo {
        allowed: &flat.allowed,
        table: HashMap::new(),
        nodes: 0,
        budget,
    };
    let mut residual = flat.residual.clone();
    memo.count(0, &mut residual)
}
