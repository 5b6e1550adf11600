//! Exhaustive search for sets of chains.
//!
//! Spines are enumerated by increasing length (paths from `x` to `y`, or
//! even cycles), each by backtracking with minimum-id extension. Given a
//! spine, the vertices off it are split into connected parts `K`, and each
//! part becomes one chain: all edges of `B[K]` plus a nonempty set of edges
//! from a single spine vertex into `K`. Spine vertices used as attachments
//! must be distinct. The first candidate accepted by the validator is
//! returned.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::chains::ParityRequest;
use crate::embed::{edge, Edge, PlaneGraph, Vertex};
use crate::error::OracleError;
use crate::goodness::{is_good_chain, validate_cycle_set_of_chains, validate_set_of_chains, Chain, SetOfChains, Spine};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_n: usize,
    /// Number of spines examined before giving up.
    pub max_spines: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_n: 16,
            max_spines: 2_000_000,
        }
    }
}

/// An `(x, y; marks)`-set of chains whose spine parity matches `parity`.
pub fn brute_set_of_chains(
    b: &PlaneGraph,
    x: Vertex,
    y: Vertex,
    marks: &[Vertex],
    parity: ParityRequest,
    limits: SearchLimits,
) -> Result<Option<SetOfChains>, OracleError> {
    let mut search = Search::new(b, marks, limits)?;
    let n = b.vertex_count();
    for len in 0..n {
        if !parity.accepts(len) {
            continue;
        }
        let mut path = vec![x];
        let mut on = vec![false; b.vertex_bound()];
        on[x] = true;
        if let Some(found) = search.paths(&mut path, &mut on, y, len)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// A `[marks]`-set of chains whose spine is an even cycle.
pub fn brute_cycle_set_of_chains(
    b: &PlaneGraph,
    marks: &[Vertex],
    limits: SearchLimits,
) -> Result<Option<SetOfChains>, OracleError> {
    let mut search = Search::new(b, marks, limits)?;
    let n = b.vertex_count();
    let verts: Vec<Vertex> = b.vertices().collect();
    for len in (4..=n).step_by(2) {
        for &s in &verts {
            let mut path = vec![s];
            let mut on = vec![false; b.vertex_bound()];
            on[s] = true;
            if let Some(found) = search.cycles(&mut path, &mut on, len)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Either variant, selected by `cyclic` (then `x` and `y` join the marks).
pub fn brute_any(
    b: &PlaneGraph,
    x: Vertex,
    y: Vertex,
    marks: &[Vertex],
    parity: ParityRequest,
    cyclic: bool,
    limits: SearchLimits,
) -> Result<Option<SetOfChains>, OracleError> {
    if cyclic {
        let mut all = vec![x, y];
        all.extend_from_slice(marks);
        brute_cycle_set_of_chains(b, &all, limits)
    } else {
        brute_set_of_chains(b, x, y, marks, parity, limits)
    }
}

struct Search<'a> {
    b: &'a PlaneGraph,
    marks: Vec<Vertex>,
    limits: SearchLimits,
    spines: usize,
    memo: HashMap<(Vertex, Vec<Vertex>), Option<Chain>>,
    /// Bit positions: `ids[i]` is the vertex of bit `i`.
    ids: Vec<Vertex>,
    bit: HashMap<Vertex, u32>,
}

impl<'a> Search<'a> {
    fn new(b: &'a PlaneGraph, marks: &[Vertex], limits: SearchLimits) -> Result<Self, OracleError> {
        let n = b.vertex_count();
        // vertex sets are 64-bit masks
        let bound = limits.max_n.min(64);
        if n > bound {
            return Err(OracleError::TooLarge { n, bound });
        }
        let mut marks = marks.to_vec();
        marks.sort_unstable();
        marks.dedup();
        Ok(Search {
            b,
            marks,
            limits,
            spines: 0,
            memo: HashMap::new(),
            ids: b.vertices().collect(),
            bit: b.vertices().enumerate().map(|(i, v)| (v, i as u32)).collect(),
        })
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.spines += 1;
        if self.spines > self.limits.max_spines {
            return Err(OracleError::LimitExceeded(format!(
                "more than {} spines examined",
                self.limits.max_spines
            )));
        }
        Ok(())
    }

    fn paths(
        &mut self,
        path: &mut Vec<Vertex>,
        on: &mut [bool],
        y: Vertex,
        len: usize,
    ) -> Result<Option<SetOfChains>, OracleError> {
        let last = *path.last().unwrap();
        if path.len() == len + 1 {
            if last != y {
                return Ok(None);
            }
            self.tick()?;
            return Ok(self.complete(Spine::Path(path.clone())));
        }
        if last == y {
            return Ok(None);
        }
        let b = self.b;
        let mut nbrs = b.neighbors(last).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if on[w] {
                continue;
            }
            on[w] = true;
            path.push(w);
            let r = self.paths(path, on, y, len)?;
            path.pop();
            on[w] = false;
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }

    fn cycles(&mut self, path: &mut Vec<Vertex>, on: &mut [bool], len: usize) -> Result<Option<SetOfChains>, OracleError> {
        let s = path[0];
        let last = *path.last().unwrap();
        if path.len() == len {
            if !self.b.has_edge(last, s) || path[1] > last {
                return Ok(None);
            }
            self.tick()?;
            return Ok(self.complete(Spine::Cycle(path.clone())));
        }
        let b = self.b;
        let mut nbrs = b.neighbors(last).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if on[w] || w < s {
                continue;
            }
            on[w] = true;
            path.push(w);
            let r = self.cycles(path, on, len)?;
            path.pop();
            on[w] = false;
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }

    /// Attaches chains to a fixed spine, if possible. The vertices off the
    /// spine are split into connected parts, each carried by its own chain
    /// at a distinct unmarked spine vertex.
    fn complete(&mut self, spine: Spine) -> Option<SetOfChains> {
        let spine_mask = self.mask(spine.vertices());
        let all = if self.ids.len() == 64 { u64::MAX } else { (1u64 << self.ids.len()) - 1 };
        let mut chains = Vec::new();
        let mut dead = HashSet::new();
        if !self.cover(all & !spine_mask, spine_mask, 0, &mut chains, &mut dead) {
            return None;
        }
        let mut s = SetOfChains::new(spine, chains);
        s.resolve_marks(&self.marks);
        Some(s)
    }

    fn mask(&self, vs: &[Vertex]) -> u64 {
        vs.iter().fold(0, |m, v| m | (1 << self.bit[v]))
    }

    fn members(&self, m: u64) -> Vec<Vertex> {
        (0..self.ids.len()).filter(|&i| m & (1 << i) != 0).map(|i| self.ids[i]).collect()
    }

    /// Covers `rest` by chains; the part holding its lowest vertex is
    /// chosen first, larger parts before smaller ones.
    fn cover(&mut self, rest: u64, spine: u64, used: u64, out: &mut Vec<Chain>, dead: &mut HashSet<(u64, u64)>) -> bool {
        if rest == 0 {
            return true;
        }
        if dead.contains(&(rest, used)) {
            return false;
        }
        let low = rest & rest.wrapping_neg();
        let others: Vec<u64> = (0..64).map(|i| 1u64 << i).filter(|&b| b != low && rest & b != 0).collect();
        let mut parts: Vec<u64> = (0u64..(1 << others.len()))
            .map(|m| (0..others.len()).filter(|i| m & (1 << i) != 0).fold(low, |a, i| a | others[i]))
            .filter(|&p| self.connected(p))
            .collect();
        parts.sort_by_key(|p| (std::cmp::Reverse(p.count_ones()), *p));
        for part in parts {
            let k = self.members(part);
            let mut attach: BTreeSet<Vertex> = BTreeSet::new();
            for &w in &k {
                for &a in self.b.neighbors(w) {
                    let bit = 1u64 << self.bit[&a];
                    if spine & bit != 0 && used & bit == 0 && !self.marks.contains(&a) {
                        attach.insert(a);
                    }
                }
            }
            for a in attach {
                let Some(c) = self.chain_for(a, &k) else { continue };
                out.push(c);
                if self.cover(rest & !part, spine, used | (1 << self.bit[&a]), out, dead) {
                    return true;
                }
                out.pop();
            }
        }
        dead.insert((rest, used));
        false
    }

    fn connected(&self, part: u64) -> bool {
        let first = part.trailing_zeros() as usize;
        let mut seen = 1u64 << first;
        let mut stack = vec![self.ids[first]];
        while let Some(w) = stack.pop() {
            for &z in self.b.neighbors(w) {
                let bit = 1u64 << self.bit[&z];
                if part & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(z);
                }
            }
        }
        seen == part
    }

    /// First valid chain on component `k` attached at `a`.
    fn chain_for(&mut self, a: Vertex, k: &[Vertex]) -> Option<Chain> {
        let key = (a, k.to_vec());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let found = self.search_chain(a, k);
        self.memo.insert(key, found.clone());
        found
    }

    fn search_chain(&self, a: Vertex, k: &[Vertex]) -> Option<Chain> {
        let ks: BTreeSet<Vertex> = k.iter().copied().collect();
        let inner: Vec<Edge> = self
            .b
            .edges()
            .into_iter()
            .filter(|(u, v)| ks.contains(u) && ks.contains(v))
            .collect();
        let mut into: Vec<Vertex> = self.b.neighbors(a).iter().copied().filter(|w| ks.contains(w)).collect();
        into.sort_unstable();
        let d = into.len();
        let mut subsets: Vec<u32> = (1u32..(1 << d)).collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        let marks_here: Vec<Vertex> = self.marks.iter().copied().filter(|m| ks.contains(m)).collect();
        for m in subsets {
            let mut edges = inner.clone();
            edges.extend((0..d).filter(|i| m & (1 << i) != 0).map(|i| edge(a, into[i])));
            let chain = Chain::new(a, k.iter().copied(), edges);
            let Ok(blocks) = chain.blocks(self.b) else { continue };
            if !matches!(is_good_chain(&blocks, Some(a), None), Ok(true)) {
                continue;
            }
            if marks_here
                .iter()
                .all(|&u| matches!(is_good_chain(&blocks, Some(a), Some(u)), Ok(true)))
            {
                return Some(chain);
            }
        }
        None
    }
}

/// Runs the validator on a search result; used by tests and the CLI.
pub fn recheck(b: &PlaneGraph, x: Vertex, y: Vertex, marks: &[Vertex], cyclic: bool, s: &SetOfChains) -> bool {
    if cyclic {
        let mut all = vec![x, y];
        all.extend_from_slice(marks);
        validate_cycle_set_of_chains(b, &all, s).ok()
    } else {
        validate_set_of_chains(b, x, y, marks, s).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn c4_adjacent_with_mark_at_x() {
        let c4 = fixtures::cycle(4);
        let s = brute_set_of_chains(&c4, 0, 1, &[0], ParityRequest::Any, SearchLimits::default())
            .unwrap()
            .unwrap();
        assert!(recheck(&c4, 0, 1, &[0], false, &s));
        assert_eq!(s.spine.vertices(), &[0, 1]);
    }

    #[test]
    fn c5_has_no_even_cycle_spine() {
        let c5 = fixtures::cycle(5);
        assert_eq!(brute_cycle_set_of_chains(&c5, &[], SearchLimits::default()).unwrap(), None);
    }

    #[test]
    fn c5_bad_pair_has_no_cycle_spine_but_paths_exist() {
        let c5 = fixtures::cycle(5);
        let s = brute_set_of_chains(&c5, 0, 2, &[], ParityRequest::Even, SearchLimits::default())
            .unwrap()
            .unwrap();
        assert_eq!(s.spine.edge_count() % 2, 0);
        assert!(recheck(&c5, 0, 2, &[], false, &s));
    }

    #[test]
    fn grid_searches_succeed() {
        let g = fixtures::grid(3, 3);
        let s = brute_cycle_set_of_chains(&g, &[0, 8], SearchLimits::default()).unwrap().unwrap();
        assert!(recheck(&g, 0, 8, &[], true, &s));
        let s = brute_set_of_chains(&g, 0, 8, &[2, 6], ParityRequest::Any, SearchLimits::default())
            .unwrap()
            .unwrap();
        assert!(recheck(&g, 0, 8, &[2, 6], false, &s));
    }

    #[test]
    fn too_large_rejected() {
        let g = fixtures::grid(5, 5);
        assert!(matches!(
            brute_set_of_chains(&g, 0, 1, &[], ParityRequest::Any, SearchLimits { max_n: 12, max_spines: 10 }),
            Err(OracleError::TooLarge { n: 25, bound: 12 })
        ));
    }
}
