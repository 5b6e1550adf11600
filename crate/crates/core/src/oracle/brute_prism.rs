//! Exhaustive Hamilton-cycle search in `G □ K₂`.
//!
//! Prism vertex `(v, layer)` gets index `2·i + layer` where `i` is the rank of
//! `v`. The cycle starts at the first copy of the smallest required vertex
//! (or of the smallest vertex) and is extended depth-first through
//! neighbours in increasing index order. A required vertex entered
//! horizontally must leave vertically. Failed `(visited, current, entered
//! vertically)` states are remembered.

use std::collections::HashSet;

use crate::embed::{PlaneGraph, Vertex};
use crate::error::OracleError;
use crate::prism::{verify_prism_hamilton, Layer, PrismCycle};

pub const DEFAULT_PRISM_BOUND: usize = 12;
const HARD_LIMIT: usize = 16;

/// A Hamilton cycle of `g □ K₂` using the vertical edge at every vertex of
/// `required_vertical`, or `None` when the search is exhausted.
pub fn brute_hamilton_prism(g: &PlaneGraph, required_vertical: &[Vertex], bound: usize) -> Result<Option<PrismCycle>, OracleError> {
    let n = g.vertex_count();
    let bound = bound.min(HARD_LIMIT);
    if n > bound {
        return Err(OracleError::TooLarge { n, bound });
    }
    if n == 0 {
        return Ok(None);
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut rank = vec![usize::MAX; g.vertex_bound()];
    for (i, &v) in verts.iter().enumerate() {
        rank[v] = i;
    }
    let total = 2 * n;
    let mut adj = vec![0u32; total];
    for (i, &v) in verts.iter().enumerate() {
        adj[2 * i] |= 1 << (2 * i + 1);
        adj[2 * i + 1] |= 1 << (2 * i);
        for &w in g.neighbors(v) {
            let j = rank[w];
            adj[2 * i] |= 1 << (2 * j);
            adj[2 * i + 1] |= 1 << (2 * j + 1);
        }
    }
    let mut required = 0u32;
    for &v in required_vertical {
        if !g.contains(v) {
            return Ok(None);
        }
        required |= 0b11 << (2 * rank[v]);
    }
    let start = if required != 0 { required.trailing_zeros() as usize } else { 0 };
    let mut s = Search {
        adj,
        required,
        full: if total == 32 { u32::MAX } else { (1u32 << total) - 1 },
        start,
        dead: HashSet::new(),
        path: vec![start],
    };
    let found = s.extend(start, 1 << start, false);
    if !found {
        return Ok(None);
    }
    let steps = s
        .path
        .iter()
        .map(|&p| (verts[p / 2], if p % 2 == 0 { Layer::A } else { Layer::B }))
        .collect();
    let c = PrismCycle { steps }.normalized();
    debug_assert!(verify_prism_hamilton(g, &c));
    Ok(Some(c))
}

struct Search {
    adj: Vec<u32>,
    required: u32,
    full: u32,
    start: usize,
    dead: HashSet<(u32, u8, bool)>,
    path: Vec<usize>,
}

impl Search {
    fn extend(&mut self, cur: usize, mask: u32, vertical_in: bool) -> bool {
        let must_turn = self.required & (1 << cur) != 0 && !vertical_in;
        if mask == self.full {
            return !must_turn && self.adj[cur] & (1 << self.start) != 0 && !(cur ^ 1 == self.start && self.required & (1 << cur) != 0);
        }
        let key = (mask, cur as u8, vertical_in);
        if self.dead.contains(&key) || !self.feasible(cur, mask) {
            return false;
        }
        let mut options = self.adj[cur] & !mask;
        if must_turn {
            options &= 1 << (cur ^ 1);
        }
        while options != 0 {
            let next = options.trailing_zeros() as usize;
            options &= options - 1;
            self.path.push(next);
            if self.extend(next, mask | (1 << next), next == cur ^ 1) {
                return true;
            }
            self.path.pop();
        }
        self.dead.insert(key);
        false
    }

    /// Every unvisited vertex keeps two usable neighbours, and a required
    /// vertex never has exactly one copy buried inside the path.
    fn feasible(&self, cur: usize, mask: u32) -> bool {
        let open = !mask & self.full;
        let usable = open | (1 << cur) | (1 << self.start);
        let mut rest = open;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[v] & usable).count_ones() < 2 {
                return false;
            }
            if self.required & (1 << v) != 0 {
                let twin = v ^ 1;
                if mask & (1 << twin) != 0 && twin != cur && twin != self.start {
                    return false;
                }
            }
        }
        true
    }
}
