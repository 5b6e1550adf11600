//! Blocks, 3-connectivity, circuit graphs and plain chains of blocks.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{cycle_arc, edge, Edge, PlaneGraph, Vertex};
use crate::error::StructureError;

/// Read-only adjacency access shared by plane and abstract graphs.
pub trait Adjacency {
    fn vertex_bound(&self) -> usize;
    fn contains(&self, v: Vertex) -> bool;
    fn neighbors(&self, v: Vertex) -> &[Vertex];

    fn vertex_list(&self) -> Vec<Vertex> {
        (0..self.vertex_bound()).filter(|&v| self.contains(v)).collect()
    }
}

impl Adjacency for PlaneGraph {
    fn vertex_bound(&self) -> usize {
        PlaneGraph::vertex_bound(self)
    }
    fn contains(&self, v: Vertex) -> bool {
        PlaneGraph::contains(self, v)
    }
    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        PlaneGraph::neighbors(self, v)
    }
}

/// Unembedded simple graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<Vertex>>,
    present: Vec<bool>,
}

impl SimpleGraph {
    pub fn from_edges<I>(bound: usize, vertices: I, edges: &[Edge]) -> Self
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut present = vec![false; bound];
        for v in vertices {
            present[v] = true;
        }
        let mut adj = vec![Vec::new(); bound];
        for &(u, v) in edges {
            present[u] = true;
            present[v] = true;
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        SimpleGraph { adj, present }
    }

    pub fn of<G: Adjacency>(g: &G) -> Self {
        let bound = g.vertex_bound();
        let mut adj = vec![Vec::new(); bound];
        let mut present = vec![false; bound];
        for v in g.vertex_list() {
            present[v] = true;
            adj[v] = g.neighbors(v).to_vec();
        }
        SimpleGraph { adj, present }
    }

    /// Adds a new vertex adjacent to `targets`; returns its id.
    pub fn add_apex(&mut self, targets: &[Vertex]) -> Vertex {
        let a = self.adj.len();
        self.adj.push(targets.to_vec());
        self.present.push(true);
        for &t in targets {
            self.adj[t].push(a);
        }
        a
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (v, ns) in self.adj.iter().enumerate() {
            for &w in ns {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }
}

impl Adjacency for SimpleGraph {
    fn vertex_bound(&self) -> usize {
        self.adj.len()
    }
    fn contains(&self, v: Vertex) -> bool {
        v < self.present.len() && self.present[v]
    }
    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }
}

/// Number of connected components after deleting `removed`.
pub fn component_count_without<G: Adjacency>(g: &G, removed: &[Vertex]) -> usize {
    components_without(g, removed).len()
}

/// Connected components (sorted vertex lists) after deleting `removed`.
pub fn components_without<G: Adjacency>(g: &G, removed: &[Vertex]) -> Vec<Vec<Vertex>> {
    let bound = g.vertex_bound();
    let mut seen = vec![false; bound];
    for &r in removed {
        if r < bound {
            seen[r] = true;
        }
    }
    let mut comps = Vec::new();
    for s in 0..bound {
        if seen[s] || !g.contains(s) {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<Block>,
    pub cutvertices: Vec<Vertex>,
}

impl BlockCutTree {
    /// Indices of the blocks containing `v`.
    pub fn blocks_at(&self, v: Vertex) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.vertices.binary_search(&v).is_ok())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Biconnected components and cutvertices of a connected graph.
pub fn blocks_cutvertices<G: Adjacency>(g: &G) -> Result<BlockCutTree, StructureError> {
    let verts = g.vertex_list();
    let Some(&root) = verts.first() else {
        return Ok(BlockCutTree {
            blocks: Vec::new(),
            cutvertices: Vec::new(),
        });
    };
    let bound = g.vertex_bound();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; bound];
    let mut low = vec![0usize; bound];
    let mut time = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut blocks = Vec::new();

    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, UNSEEN, 0)];
    disc[root] = time;
    low[root] = time;
    time += 1;
    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        let nbrs = g.neighbors(v);
        if *idx < nbrs.len() {
            let w = nbrs[*idx];
            *idx += 1;
            if disc[w] == UNSEEN {
                edge_stack.push((v, w));
                disc[w] = time;
                low[w] = time;
                time += 1;
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut es = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        es.push(edge(e.0, e.1));
                        if e == (p, v) {
                            break;
                        }
                    }
                    es.sort_unstable();
                    let mut vs: Vec<Vertex> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    blocks.push(Block {
                        vertices: vs,
                        edges: es,
                    });
                }
            }
        }
    }
    if disc.iter().enumerate().any(|(v, &d)| g.contains(v) && d == UNSEEN) {
        return Err(StructureError::Disconnected);
    }
    if blocks.is_empty() {
        blocks.push(Block {
            vertices: vec![root],
            edges: Vec::new(),
        });
    }
    blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
    for b in &blocks {
        for &v in &b.vertices {
            *count.entry(v).or_default() += 1;
        }
    }
    let cutvertices = count.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect();
    Ok(BlockCutTree {
        blocks,
        cutvertices,
    })
}

/// Exhaustive pair-deletion test.
pub fn is_three_connected<G: Adjacency>(g: &G) -> Result<bool, StructureError> {
    let verts = g.vertex_list();
    if verts.len() < 4 {
        return Err(StructureError::TooSmall(verts.len()));
    }
    if component_count_without(g, &[]) != 1 {
        return Ok(false);
    }
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            if component_count_without(g, &[a, b]) != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_simple_cycle(walk: &[Vertex]) -> bool {
    walk.len() >= 3 && walk.iter().collect::<BTreeSet<_>>().len() == walk.len()
}

/// Whether `g` with outer boundary `c` is a circuit graph.
pub fn is_circuit_graph(g: &PlaneGraph, c: &[Vertex]) -> Result<bool, StructureError> {
    let outer = g.outer_face();
    if crate::embed::canonical_walk(c) != outer.boundary {
        return Err(StructureError::OuterNotFace);
    }
    if !is_simple_cycle(c) {
        return Ok(false);
    }
    let mut plus = SimpleGraph::of(g);
    plus.add_apex(c);
    if !is_three_connected(&plus)? {
        return Ok(false);
    }
    // every component left by a 2-separator meets the outer cycle
    let on_c: BTreeSet<Vertex> = c.iter().copied().collect();
    let verts = g.vertex_list();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            let comps = components_without(g, &[a, b]);
            if comps.len() > 1 && comps.iter().any(|k| k.iter().all(|v| !on_c.contains(v))) {
                return Err(StructureError::InternalInconsistency(format!(
                    "separator {{{a},{b}}} leaves a component off the outer cycle"
                )));
            }
        }
    }
    Ok(true)
}

/// A plane graph whose apex augmentation is 3-connected, with its outer cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitGraph {
    graph: PlaneGraph,
    outer_cycle: Vec<Vertex>,
}

impl CircuitGraph {
    pub fn new(graph: PlaneGraph) -> Result<Self, StructureError> {
        let outer_cycle = graph.outer_walk();
        if !is_circuit_graph(&graph, &outer_cycle)? {
            return Err(StructureError::NotCircuit(format!(
                "outer boundary {outer_cycle:?} does not give a 3-connected apex graph"
            )));
        }
        Ok(CircuitGraph { graph, outer_cycle })
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    /// Outer cycle in traced order.
    pub fn outer_cycle(&self) -> &[Vertex] {
        &self.outer_cycle
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_external(&self, v: Vertex) -> bool {
        self.outer_cycle.contains(&v)
    }

    fn outer_index(&self, v: Vertex) -> Option<usize> {
        self.outer_cycle.iter().position(|&w| w == v)
    }

    pub fn next_on_outer(&self, v: Vertex) -> Option<Vertex> {
        let i = self.outer_index(v)?;
        Some(self.outer_cycle[(i + 1) % self.outer_cycle.len()])
    }

    pub fn prev_on_outer(&self, v: Vertex) -> Option<Vertex> {
        let k = self.outer_cycle.len();
        let i = self.outer_index(v)?;
        Some(self.outer_cycle[(i + k - 1) % k])
    }

    /// The `x → y` path on the outer cycle, in traced direction.
    pub fn outer_arc(&self, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
        cycle_arc(&self.outer_cycle, x, y)
    }

    /// The `x → y` path on the outer cycle against the traced direction.
    pub fn outer_arc_rev(&self, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
        let mut p = cycle_arc(&self.outer_cycle, y, x)?;
        p.reverse();
        Some(p)
    }

    pub fn is_outer_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.next_on_outer(u) == Some(v) || self.prev_on_outer(u) == Some(v)
    }

    pub fn is_cycle(&self) -> bool {
        self.graph.edge_count() == self.graph.vertex_count()
    }

    pub fn is_bipartite(&self) -> bool {
        self.graph.is_bipartite()
    }

    pub fn internal_vertices(&self) -> Vec<Vertex> {
        self.graph.vertices().filter(|&v| !self.is_external(v)).collect()
    }

    pub fn min_internal_degree(&self) -> Option<usize> {
        self.internal_vertices()
            .into_iter()
            .map(|v| self.graph.degree(v))
            .min()
    }

    /// All internal vertices have degree at least 4 (vacuous if none).
    pub fn internal_degrees_at_least_four(&self) -> bool {
        self.min_internal_degree().is_none_or(|d| d >= 4)
    }
}

/// One block of a plain chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainBlock {
    Vertex(Vertex),
    Edge(Edge),
    Circuit(CircuitGraph),
}

impl ChainBlock {
    pub fn is_trivial(&self) -> bool {
        !matches!(self, ChainBlock::Circuit(_))
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            ChainBlock::Vertex(v) => vec![*v],
            ChainBlock::Edge((a, b)) => vec![*a, *b],
            ChainBlock::Circuit(c) => c.graph().vertices().collect(),
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        match self {
            ChainBlock::Vertex(_) => Vec::new(),
            ChainBlock::Edge(e) => vec![*e],
            ChainBlock::Circuit(c) => c.graph().edges(),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match self {
            ChainBlock::Vertex(w) => *w == v,
            ChainBlock::Edge((a, b)) => *a == v || *b == v,
            ChainBlock::Circuit(c) => c.graph().contains(v),
        }
    }

    pub fn circuit(&self) -> Option<&CircuitGraph> {
        match self {
            ChainBlock::Circuit(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_external(&self, v: Vertex) -> bool {
        match self {
            ChainBlock::Circuit(c) => c.is_external(v),
            _ => self.contains(v),
        }
    }

    pub fn is_bipartite(&self) -> bool {
        match self {
            ChainBlock::Circuit(c) => c.is_bipartite(),
            _ => true,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }
}

/// `B₁, b₁, B₂, …, b_{n−1}, B_n` with optional end anchors `b₀ ∈ B₁`, `b_n ∈ B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlainChainOfBlocks {
    pub blocks: Vec<ChainBlock>,
    pub cutvertices: Vec<Vertex>,
    pub start: Option<Vertex>,
    pub end: Option<Vertex>,
}

impl PlainChainOfBlocks {
    /// Decomposes a connected plane graph whose block-cutvertex graph is a
    /// path. Blocks are ordered starting from the end block containing
    /// `start` (which must not be a cutvertex).
    pub fn from_subgraph(g: &PlaneGraph, start: Option<Vertex>) -> Result<Self, StructureError> {
        Self::decompose(g, start, true)
    }

    /// Like [`from_subgraph`](Self::from_subgraph); `require_plane` toggles
    /// the check that block-external vertices stay external in `g`.
    pub fn decompose(g: &PlaneGraph, start: Option<Vertex>, require_plane: bool) -> Result<Self, StructureError> {
        let tree = blocks_cutvertices(g).map_err(|_| StructureError::NotAChain("disconnected".into()))?;
        let cuts: BTreeSet<Vertex> = tree.cutvertices.iter().copied().collect();
        let nb = tree.blocks.len();
        if nb == 0 {
            return Err(StructureError::NotAChain("empty graph".into()));
        }
        let cuts_of = |i: usize| -> Vec<Vertex> {
            tree.blocks[i]
                .vertices
                .iter()
                .copied()
                .filter(|v| cuts.contains(v))
                .collect()
        };
        for &c in &cuts {
            if tree.blocks_at(c).len() != 2 {
                return Err(StructureError::NotAChain(format!("cutvertex {c} lies in more than two blocks")));
            }
        }
        let ends: Vec<usize> = (0..nb).filter(|&i| cuts_of(i).len() <= 1).collect();
        if (0..nb).any(|i| cuts_of(i).len() > 2) || (nb > 1 && ends.len() != 2) {
            return Err(StructureError::NotAChain("block-cutvertex graph is not a path".into()));
        }
        let first = match start {
            Some(s) => {
                if cuts.contains(&s) {
                    return Err(StructureError::NotAChain(format!("anchor {s} is a cutvertex")));
                }
                let at = tree.blocks_at(s);
                match at.first() {
                    Some(&i) if ends.contains(&i) => i,
                    Some(_) => return Err(StructureError::NotAChain(format!("anchor {s} is not in an end block"))),
                    None => return Err(StructureError::NotAChain(format!("anchor {s} is not in the chain"))),
                }
            }
            None => ends[0],
        };
        let mut order = vec![first];
        let mut cut_order = Vec::new();
        let mut prev_cut: Option<Vertex> = None;
        while order.len() < nb {
            let cur = *order.last().unwrap();
            let next_cut = cuts_of(cur)
                .into_iter()
                .find(|&c| Some(c) != prev_cut)
                .ok_or_else(|| StructureError::NotAChain("chain ends early".into()))?;
            let nxt = tree
                .blocks_at(next_cut)
                .into_iter()
                .find(|&i| i != cur)
                .unwrap();
            cut_order.push(next_cut);
            order.push(nxt);
            prev_cut = Some(next_cut);
        }
        let (outer_v, _) = g.classify_external();
        let mut blocks = Vec::with_capacity(nb);
        for &i in &order {
            let b = &tree.blocks[i];
            let block = match b.vertices.len() {
                1 => ChainBlock::Vertex(b.vertices[0]),
                2 => ChainBlock::Edge(b.edges[0]),
                _ => {
                    let sub = g.subgraph(b.vertices.iter().copied(), b.edges.iter().copied());
                    let c = CircuitGraph::new(sub)?;
                    if require_plane && c.outer_cycle().iter().any(|v| !outer_v.contains(v)) {
                        return Err(StructureError::NotAChain(format!(
                            "block {:?} has an external vertex that is internal in the chain",
                            b.vertices
                        )));
                    }
                    ChainBlock::Circuit(c)
                }
            };
            blocks.push(block);
        }
        Ok(PlainChainOfBlocks {
            blocks,
            cutvertices: cut_order,
            start,
            end: None,
        })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `b_i` for `i ∈ 0..=n` (`b₀`/`b_n` are the optional anchors).
    pub fn b(&self, i: usize) -> Option<Vertex> {
        let n = self.blocks.len();
        if i == 0 {
            self.start
        } else if i == n {
            self.end
        } else {
            self.cutvertices.get(i - 1).copied()
        }
    }

    /// Block `B_i`, 1-based.
    pub fn blk(&self, i: usize) -> &ChainBlock {
        &self.blocks[i - 1]
    }

    /// Smallest 1-based `k` with `v ∈ B_k` (so `v ∈ B_k ∖ B_{k−1}`).
    pub fn first_index(&self, v: Vertex) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(v)).map(|i| i + 1)
    }

    /// Largest 1-based `k` with `v ∈ B_k` (so `v ∈ B_k ∖ B_{k+1}`).
    pub fn last_index(&self, v: Vertex) -> Option<usize> {
        self.blocks.iter().rposition(|b| b.contains(v)).map(|i| i + 1)
    }

    pub fn vertices_in(&self, range: std::ops::RangeInclusive<usize>) -> BTreeSet<Vertex> {
        range.flat_map(|i| self.blk(i).vertices()).collect()
    }

    pub fn edges_in(&self, range: std::ops::RangeInclusive<usize>) -> BTreeSet<Edge> {
        range.flat_map(|i| self.blk(i).edges()).collect()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.blocks.iter().flat_map(|b| b.vertices()).collect()
    }

    pub fn reversed(&self) -> Self {
        let mut r = self.clone();
        r.blocks.reverse();
        r.cutvertices.reverse();
        std::mem::swap(&mut r.start, &mut r.end);
        r
    }
}

/// `B − x` as a plain chain, with `b₀` the successor and `b_n` the
/// predecessor of `x` on the outer cycle.
pub fn delete_vertex_chain(b: &CircuitGraph, x: Vertex) -> Result<PlainChainOfBlocks, StructureError> {
    if !b.is_external(x) {
        return Err(StructureError::NotExternal(x));
    }
    let b0 = b.next_on_outer(x).unwrap();
    let bn = b.prev_on_outer(x).unwrap();
    let rest = b.graph().remove_vertices(&[x]);
    let inconsistent = |m: String| StructureError::InternalInconsistency(format!("B − {x}: {m}"));
    let mut chain = PlainChainOfBlocks::from_subgraph(&rest, Some(b0)).map_err(|e| inconsistent(e.to_string()))?;
    let n = chain.len();
    if !chain.blk(n).contains(bn) || (n > 1 && chain.cutvertices.contains(&bn)) {
        return Err(inconsistent(format!("{bn} is not an end anchor of the last block")));
    }
    chain.end = Some(bn);
    for i in 1..=n {
        let lo = chain.b(i - 1).unwrap();
        let hi = chain.b(i).unwrap();
        let arc = b
            .outer_arc(lo, hi)
            .ok_or_else(|| inconsistent(format!("no outer arc {lo}..{hi}")))?;
        let on_c: BTreeSet<Vertex> = chain
            .blk(i)
            .vertices()
            .into_iter()
            .filter(|&v| b.is_external(v))
            .collect();
        let arc_set: BTreeSet<Vertex> = arc.iter().copied().collect();
        let arc_edges_ok = arc.windows(2).all(|w| chain.blk(i).edges().contains(&edge(w[0], w[1])));
        if on_c != arc_set || !arc_edges_ok {
            return Err(inconsistent(format!("B_{i} ∩ C is not the outer path {lo}..{hi}")));
        }
    }
    Ok(chain)
}
