//! Hamilton cycles in prisms over bipartite cactuses.
//!
//! Every block gets its own Hamilton cycle in `block □ K₂` that uses the
//! vertical edge at each of its vertices. Where two blocks meet at a vertex
//! `u` both cycles use `(u,a)(u,b)`; dropping that edge from both and taking
//! the union splices them into one cycle. Doing this at every non-good
//! vertex at once yields the same cycle as splicing one cutvertex at a time,
//! and vertical edges survive exactly at the good vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::cactus::{Cactus, CactusBlock};
use crate::embed::{PlaneGraph, Vertex};
use crate::error::{ParseError, PrismError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    A,
    B,
}

impl Layer {
    pub fn other(self) -> Layer {
        match self {
            Layer::A => Layer::B,
            Layer::B => Layer::A,
        }
    }
}

pub type PrismVertex = (Vertex, Layer);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismCycle {
    pub steps: Vec<PrismVertex>,
}

impl PrismCycle {
    /// Vertices whose two copies are consecutive on the cycle.
    pub fn vertical_edges(&self) -> BTreeSet<Vertex> {
        let m = self.steps.len();
        (0..m)
            .filter_map(|i| {
                let (p, q) = (self.steps[i], self.steps[(i + 1) % m]);
                (p.0 == q.0 && p.1 != q.1).then_some(p.0)
            })
            .collect()
    }

    /// Starts at the smallest pair and heads toward its smaller neighbour.
    pub fn normalized(&self) -> PrismCycle {
        let m = self.steps.len();
        if m == 0 {
            return self.clone();
        }
        let i = (0..m).min_by_key(|&i| self.steps[i]).unwrap();
        let fwd = self.steps[(i + 1) % m];
        let bwd = self.steps[(i + m - 1) % m];
        let steps = if fwd <= bwd {
            (0..m).map(|k| self.steps[(i + k) % m]).collect()
        } else {
            (0..m).map(|k| self.steps[(i + m - k) % m]).collect()
        };
        PrismCycle { steps }
    }

    /// DOT export of `g □ K₂` with the cycle in bold red.
    pub fn to_dot(&self, g: &PlaneGraph) -> String {
        let m = self.steps.len();
        let on: BTreeSet<(PrismVertex, PrismVertex)> = (0..m)
            .map(|i| {
                let (p, q) = (self.steps[i], self.steps[(i + 1) % m]);
                (p.min(q), p.max(q))
            })
            .collect();
        let name = |p: PrismVertex| format!("\"{}\"", token(p));
        let mut out = String::from("graph prism {\n");
        let mut emit = |p: PrismVertex, q: PrismVertex| {
            let style = if on.contains(&(p.min(q), p.max(q))) { " [color=red, penwidth=2]" } else { " [color=gray]" };
            let _ = writeln!(out, "  {} -- {}{};", name(p), name(q), style);
        };
        for v in g.vertices() {
            emit((v, Layer::A), (v, Layer::B));
        }
        for (u, v) in g.edges() {
            emit((u, Layer::A), (v, Layer::A));
            emit((u, Layer::B), (v, Layer::B));
        }
        out.push_str("}\n");
        out
    }
}

fn token(p: PrismVertex) -> String {
    format!("{}/{}", p.0, if p.1 == Layer::A { 'a' } else { 'b' })
}

impl fmt::Display for PrismCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.steps.iter().map(|&p| token(p)).collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl FromStr for PrismCycle {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut steps = Vec::new();
        for (ln, line) in s.lines().enumerate() {
            let mut col = 1;
            for tok in line.split(' ') {
                if !tok.is_empty() {
                    let bad = || ParseError::new(ln + 1, col, format!("bad prism token `{tok}`"));
                    let (v, l) = tok.split_once('/').ok_or_else(bad)?;
                    let v: Vertex = v.parse().map_err(|_| bad())?;
                    let l = match l {
                        "a" => Layer::A,
                        "b" => Layer::B,
                        _ => return Err(bad()),
                    };
                    steps.push((v, l));
                }
                col += tok.len() + 1;
            }
        }
        Ok(PrismCycle { steps })
    }
}

/// Adjacency of the cycle under construction: two neighbours per pair.
#[derive(Default)]
struct Degree2(BTreeMap<PrismVertex, Vec<PrismVertex>>);

impl Degree2 {
    fn add(&mut self, p: PrismVertex, q: PrismVertex) {
        self.0.entry(p).or_default().push(q);
        self.0.entry(q).or_default().push(p);
    }

    fn remove(&mut self, p: PrismVertex, q: PrismVertex) {
        for (s, t) in [(p, q), (q, p)] {
            let ns = self.0.get_mut(&s).unwrap();
            let i = ns.iter().position(|&w| w == t).unwrap();
            ns.swap_remove(i);
        }
    }
}

/// The base cycle of one block: vertical edges at every vertex.
fn block_cycle(blk: &CactusBlock, adj: &mut Degree2) {
    let vs = blk.vertices();
    let m = vs.len();
    for (i, &v) in vs.iter().enumerate() {
        adj.add((v, Layer::A), (v, Layer::B));
        // the horizontal edge v_i v_{i+1} alternates layers, starting in b
        if m == 2 && i == 1 {
            break;
        }
        let layer = if i % 2 == 0 { Layer::B } else { Layer::A };
        adj.add((v, layer), (vs[(i + 1) % m], layer));
    }
    if m == 2 {
        adj.add((vs[0], Layer::A), (vs[1], Layer::A));
    }
}

/// A Hamilton cycle of `t □ K₂` with a vertical edge at every good vertex.
pub fn prism_hamilton_from_cactus(t: &Cactus) -> Result<PrismCycle, PrismError> {
    if let Some(b) = t.blocks().iter().find(|b| !b.is_bipartite()) {
        return Err(PrismError::NotBipartiteCactus(format!("odd cycle block {b:?}")));
    }
    if let Some((v, bs)) = t.incidence().iter().find(|(_, bs)| bs.len() > 2) {
        return Err(PrismError::NotBipartiteCactus(format!("vertex {v} lies in {} blocks", bs.len())));
    }
    let vertices = t.vertices();
    if t.blocks().is_empty() {
        return match vertices.len() {
            0 => Ok(PrismCycle { steps: Vec::new() }),
            _ => Err(PrismError::NotBipartiteCactus("a single vertex has no prism cycle".into())),
        };
    }
    let mut adj = Degree2::default();
    for blk in t.blocks() {
        block_cycle(blk, &mut adj);
    }
    for (&v, bs) in t.incidence() {
        if bs.len() == 2 {
            adj.remove((v, Layer::A), (v, Layer::B));
            adj.remove((v, Layer::A), (v, Layer::B));
        }
    }
    if adj.0.values().any(|ns| ns.len() != 2) {
        return Err(PrismError::NotBipartiteCactus("splice left a vertex of degree other than 2".into()));
    }
    let start = *adj.0.keys().next().unwrap();
    let mut steps = vec![start];
    let (mut prev, mut cur) = (start, adj.0[&start][0]);
    while cur != start {
        steps.push(cur);
        let ns = &adj.0[&cur];
        let next = if ns[0] == prev { ns[1] } else { ns[0] };
        prev = cur;
        cur = next;
    }
    if steps.len() != 2 * vertices.len() {
        return Err(PrismError::NotBipartiteCactus(format!(
            "splice produced a {}-cycle instead of a {}-cycle; the blocks do not form a tree",
            steps.len(),
            2 * vertices.len()
        )));
    }
    Ok(PrismCycle { steps }.normalized())
}

/// Whether `c` is a Hamilton cycle of `g □ K₂`.
pub fn verify_prism_hamilton(g: &PlaneGraph, c: &PrismCycle) -> bool {
    prism_violation(g, c).is_none()
}

/// The first reason `c` is not a Hamilton cycle of `g □ K₂`.
pub fn prism_violation(g: &PlaneGraph, c: &PrismCycle) -> Option<String> {
    let n = g.vertex_count();
    let m = c.steps.len();
    if m != 2 * n || m < 3 {
        return Some(format!("cycle has {m} steps; expected {}", 2 * n));
    }
    let mut seen = vec![[false; 2]; g.vertex_bound()];
    for &(v, l) in &c.steps {
        if !g.contains(v) {
            return Some(format!("{} is not a prism vertex", token((v, l))));
        }
        let slot = &mut seen[v][l as usize];
        if *slot {
            return Some(format!("{} is visited twice", token((v, l))));
        }
        *slot = true;
    }
    for i in 0..m {
        let (p, q) = (c.steps[i], c.steps[(i + 1) % m]);
        let ok = if p.0 == q.0 { p.1 != q.1 } else { p.1 == q.1 && g.has_edge(p.0, q.0) };
        if !ok {
            return Some(format!("{} and {} are not adjacent", token(p), token(q)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn k2_gives_a_square() {
        let t = Cactus::new([CactusBlock::Edge(0, 1)]);
        let c = prism_hamilton_from_cactus(&t).unwrap();
        assert_eq!(c.steps.len(), 4);
        assert_eq!(c.vertical_edges(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn c4_uses_every_vertical_edge() {
        let g = fixtures::cycle(4);
        let t = Cactus::new([CactusBlock::Cycle(vec![0, 1, 2, 3])]);
        let c = prism_hamilton_from_cactus(&t).unwrap();
        assert_eq!(c.steps.len(), 8);
        assert!(verify_prism_hamilton(&g, &c));
        assert_eq!(c.vertical_edges(), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn two_squares_sharing_a_cutvertex() {
        // bowtie of two 4-cycles at vertex 0
        let t = Cactus::new([CactusBlock::Cycle(vec![0, 1, 2, 3]), CactusBlock::Cycle(vec![0, 4, 5, 6])]);
        let c = prism_hamilton_from_cactus(&t).unwrap();
        assert_eq!(c.steps.len(), 14);
        assert_eq!(c.vertical_edges(), BTreeSet::from([1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn rejects_odd_blocks_and_broken_cycles() {
        let t = Cactus::new([CactusBlock::Cycle(vec![0, 1, 2])]);
        assert!(prism_hamilton_from_cactus(&t).is_err());
        let g = fixtures::cycle(4);
        let good = prism_hamilton_from_cactus(&Cactus::new([CactusBlock::Cycle(vec![0, 1, 2, 3])])).unwrap();
        let mut skip = good.clone();
        skip.steps.pop();
        assert!(!verify_prism_hamilton(&g, &skip));
        let mut repeat = good.clone();
        repeat.steps[1] = repeat.steps[0];
        assert!(!verify_prism_hamilton(&g, &repeat));
    }

    #[test]
    fn text_round_trip() {
        let t = Cactus::new([CactusBlock::Cycle(vec![0, 1, 2, 3]), CactusBlock::Edge(3, 4)]);
        let c = prism_hamilton_from_cactus(&t).unwrap();
        let back: PrismCycle = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert!(c.to_string().starts_with("0/a"));
    }
}
