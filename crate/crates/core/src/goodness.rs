//! Bad pairs, good chains, and judges for sets of chains.
//!
//! Nothing here builds or repairs a set of chains; the validators only
//! report what is wrong, so they can check the constructive code.

use std::collections::BTreeSet;

use crate::embed::{edge, Edge, Face, PlaneGraph, Vertex};
use crate::error::GoodnessError;
use crate::structure::{ChainBlock, CircuitGraph, PlainChainOfBlocks};

/// Which condition makes a pair good (or `None` when bad).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GoodReason {
    NoOddFace,
    MultipleOddFaces,
    NotIncident,
    ExternalEdgeXY,
    TrivialBlockRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessVerdict {
    pub bad: bool,
    pub witness_face: Option<Face>,
    pub reason: Option<GoodReason>,
}

impl GoodnessVerdict {
    fn good(reason: GoodReason) -> Self {
        GoodnessVerdict {
            bad: false,
            witness_face: None,
            reason: Some(reason),
        }
    }

    pub fn is_good(&self) -> bool {
        !self.bad
    }
}

/// Is `b` bad with respect to `x` and `y`?
pub fn is_bad(b: &CircuitGraph, x: Vertex, y: Vertex) -> Result<GoodnessVerdict, GoodnessError> {
    for v in [x, y] {
        if !b.is_external(v) {
            return Err(GoodnessError::NotExternal(v));
        }
    }
    let g = b.graph();
    let mut odd = g.faces().into_iter().filter(|f| f.bounded && f.is_odd());
    let Some(f) = odd.next() else {
        return Ok(GoodnessVerdict::good(GoodReason::NoOddFace));
    };
    if odd.next().is_some() {
        return Ok(GoodnessVerdict::good(GoodReason::MultipleOddFaces));
    }
    if !f.contains_vertex(x) || !f.contains_vertex(y) {
        return Ok(GoodnessVerdict::good(GoodReason::NotIncident));
    }
    if x != y && g.has_edge(x, y) && b.is_outer_edge(x, y) {
        return Ok(GoodnessVerdict::good(GoodReason::ExternalEdgeXY));
    }
    Ok(GoodnessVerdict {
        bad: true,
        witness_face: Some(f),
        reason: None,
    })
}

/// [`is_bad`] lifted to chain blocks; `K₁` and `K₂` are always good.
pub fn block_verdict(block: &ChainBlock, x: Vertex, y: Vertex) -> Result<GoodnessVerdict, GoodnessError> {
    match block {
        ChainBlock::Circuit(c) => is_bad(c, x, y),
        _ => {
            for v in [x, y] {
                if !block.contains(v) {
                    return Err(GoodnessError::NotExternal(v));
                }
            }
            Ok(GoodnessVerdict::good(GoodReason::TrivialBlockRule))
        }
    }
}

/// Good chain test. Either anchor may be omitted; a block with only one
/// designated vertex imposes no condition beyond that vertex being external.
pub fn is_good_chain(
    chain: &PlainChainOfBlocks,
    b0: Option<Vertex>,
    bn: Option<Vertex>,
) -> Result<bool, GoodnessError> {
    let n = chain.len();
    if n == 0 {
        return Err(GoodnessError::AnchorInvalid("empty chain".into()));
    }
    let single_vertex = n == 1 && matches!(chain.blk(1), ChainBlock::Vertex(_));
    if let Some(a) = b0 {
        if !chain.blk(1).is_external(a) {
            return Err(GoodnessError::AnchorInvalid(format!("{a} is not external in the first block")));
        }
        if n > 1 && chain.cutvertices[0] == a {
            return Err(GoodnessError::AnchorInvalid(format!("{a} is the first cutvertex")));
        }
    }
    if let Some(z) = bn {
        if !chain.blk(n).is_external(z) {
            return Err(GoodnessError::AnchorInvalid(format!("{z} is not external in the last block")));
        }
        if n > 1 && chain.cutvertices[n - 2] == z {
            return Err(GoodnessError::AnchorInvalid(format!("{z} is the last cutvertex")));
        }
    }
    if n == 1 && b0.is_some() && b0 == bn && !single_vertex {
        return Err(GoodnessError::AnchorInvalid("both anchors coincide in a single block".into()));
    }
    for i in 1..=n {
        let lo = if i == 1 { b0 } else { Some(chain.cutvertices[i - 2]) };
        let hi = if i == n { bn } else { Some(chain.cutvertices[i - 1]) };
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if block_verdict(chain.blk(i), lo, hi)?.bad {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A chain of a set of chains: a connected subgraph attached at one spine vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub attach: Vertex,
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<Edge>,
}

impl Chain {
    pub fn new(attach: Vertex, vertices: impl IntoIterator<Item = Vertex>, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        let edges: BTreeSet<Edge> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        vertices.insert(attach);
        for &(a, b) in &edges {
            vertices.insert(a);
            vertices.insert(b);
        }
        Chain {
            attach,
            vertices,
            edges,
        }
    }

    /// The subgraph of `host` spanned by this chain.
    pub fn graph(&self, host: &PlaneGraph) -> PlaneGraph {
        host.subgraph(self.vertices.iter().copied(), self.edges.iter().copied())
    }

    /// Blocks ordered away from the attach vertex.
    pub fn blocks(&self, host: &PlaneGraph) -> Result<PlainChainOfBlocks, String> {
        PlainChainOfBlocks::decompose(&self.graph(host), Some(self.attach), false).map_err(|e| e.to_string())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Union with another chain (same attach vertex kept).
    pub fn absorb(&mut self, vertices: impl IntoIterator<Item = Vertex>, edges: impl IntoIterator<Item = Edge>) {
        self.vertices.extend(vertices);
        for (a, b) in edges {
            self.vertices.insert(a);
            self.vertices.insert(b);
            self.edges.insert(edge(a, b));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spine {
    Path(Vec<Vertex>),
    Cycle(Vec<Vertex>),
}

impl Spine {
    pub fn vertices(&self) -> &[Vertex] {
        match self {
            Spine::Path(p) | Spine::Cycle(p) => p,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Spine::Path(p) => p.len().saturating_sub(1),
            Spine::Cycle(c) => c.len(),
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        let vs = self.vertices();
        let mut out: Vec<Edge> = vs.windows(2).map(|w| edge(w[0], w[1])).collect();
        if let Spine::Cycle(c) = self {
            if c.len() > 2 {
                out.push(edge(c[c.len() - 1], c[0]));
            }
        }
        out
    }
}

/// How a marked vertex is served.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    /// In no chain.
    Free,
    /// Far end of the chain with this index.
    Chain(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    pub vertex: Vertex,
    pub resolution: Resolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetOfChains {
    pub spine: Spine,
    pub chains: Vec<Chain>,
    pub marks: Vec<Mark>,
}

impl SetOfChains {
    pub fn new(spine: Spine, chains: Vec<Chain>) -> Self {
        SetOfChains {
            spine,
            chains,
            marks: Vec::new(),
        }
    }

    /// Spine length mod 2.
    pub fn parity(&self) -> usize {
        self.spine.edge_count() % 2
    }

    pub fn chain_of(&self, v: Vertex) -> Option<usize> {
        self.chains.iter().position(|c| c.contains(v))
    }

    /// Records the resolution of each mark from the current chains.
    pub fn resolve_marks(&mut self, marks: &[Vertex]) {
        self.marks = marks
            .iter()
            .map(|&v| Mark {
                vertex: v,
                resolution: self.chain_of(v).map_or(Resolution::Free, Resolution::Chain),
            })
            .collect();
        self.marks.dedup();
    }

    /// Drops empty chains and chains consisting of the attach vertex alone.
    pub fn prune(&mut self) {
        self.chains.retain(|c| c.vertices.len() > 1);
    }

    pub fn covered(&self) -> BTreeSet<Vertex> {
        let mut s: BTreeSet<Vertex> = self.spine.vertices().iter().copied().collect();
        for c in &self.chains {
            s.extend(c.vertices.iter().copied());
        }
        s
    }

    /// `spine path|cycle v…`, then `chain <attach> vertices v… edges a-b…`
    /// per chain.
    pub fn to_text(&self) -> String {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        let kind = match self.spine {
            Spine::Path(_) => "path",
            Spine::Cycle(_) => "cycle",
        };
        let mut out = format!("spine {kind} {}\n", join(&mut self.spine.vertices().iter().map(|v| v.to_string())));
        for c in &self.chains {
            out.push_str(&format!(
                "chain {} vertices {} edges {}\n",
                c.attach,
                join(&mut c.vertices.iter().map(|v| v.to_string())),
                join(&mut c.edges.iter().map(|(a, b)| format!("{a}-{b}")))
            ));
        }
        out
    }
}

/// Verdict of a validator: empty `reasons` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub reasons: Vec<String>,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.reasons.is_empty()
    }

    fn fail(&mut self, r: impl Into<String>) {
        self.reasons.push(r.into());
    }
}

/// Checks an `(x, y; marks)`-set of chains in `host`.
pub fn validate_set_of_chains(host: &PlaneGraph, x: Vertex, y: Vertex, marks: &[Vertex], s: &SetOfChains) -> Validation {
    let mut v = Validation::default();
    match &s.spine {
        Spine::Path(p) => {
            if p.first() != Some(&x) || p.last() != Some(&y) {
                v.fail(format!("spine {p:?} does not run from {x} to {y}"));
            }
            check_walk(host, p, false, &mut v);
        }
        Spine::Cycle(_) => v.fail("spine is a cycle, expected a path"),
    }
    check_chains(host, marks, s, &mut v);
    v
}

/// Checks a `[marks]`-set of chains whose spine is an even cycle.
pub fn validate_cycle_set_of_chains(host: &PlaneGraph, marks: &[Vertex], s: &SetOfChains) -> Validation {
    let mut v = Validation::default();
    match &s.spine {
        Spine::Cycle(c) => {
            if c.len() < 3 {
                v.fail(format!("spine {c:?} is too short to be a cycle"));
            }
            if c.len() % 2 == 1 {
                v.fail(format!("spine cycle has odd length {}", c.len()));
            }
            check_walk(host, c, true, &mut v);
        }
        Spine::Path(_) => v.fail("spine is a path, expected a cycle"),
    }
    check_chains(host, marks, s, &mut v);
    v
}

fn check_walk(host: &PlaneGraph, walk: &[Vertex], closed: bool, v: &mut Validation) {
    if walk.is_empty() {
        v.fail("empty spine");
        return;
    }
    let distinct: BTreeSet<Vertex> = walk.iter().copied().collect();
    if distinct.len() != walk.len() {
        v.fail(format!("spine {walk:?} repeats a vertex"));
    }
    for &u in walk {
        if !host.contains(u) {
            v.fail(format!("spine vertex {u} is not in the host"));
            return;
        }
    }
    for w in walk.windows(2) {
        if !host.has_edge(w[0], w[1]) {
            v.fail(format!("spine step {}-{} is not an edge", w[0], w[1]));
        }
    }
    if closed && walk.len() > 2 && !host.has_edge(walk[walk.len() - 1], walk[0]) {
        v.fail(format!("spine closing step {}-{} is not an edge", walk[walk.len() - 1], walk[0]));
    }
}

fn check_chains(host: &PlaneGraph, marks: &[Vertex], s: &SetOfChains, v: &mut Validation) {
    let spine: BTreeSet<Vertex> = s.spine.vertices().iter().copied().collect();
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut decomposed: Vec<Option<PlainChainOfBlocks>> = Vec::with_capacity(s.chains.len());
    for (i, c) in s.chains.iter().enumerate() {
        let mut structural = true;
        for &u in &c.vertices {
            if !host.contains(u) {
                v.fail(format!("chain {i}: vertex {u} is not in the host"));
                structural = false;
            }
            if !seen.insert(u) {
                v.fail(format!("chain {i}: vertex {u} is shared with another chain"));
            }
        }
        for &(a, b) in &c.edges {
            if !host.has_edge(a, b) {
                v.fail(format!("chain {i}: {a}-{b} is not a host edge"));
                structural = false;
            }
        }
        let meet: Vec<Vertex> = c.vertices.intersection(&spine).copied().collect();
        if meet != [c.attach] {
            v.fail(format!("chain {i} meets the spine in {meet:?}, expected exactly {}", c.attach));
        }
        if !structural {
            decomposed.push(None);
            continue;
        }
        match c.blocks(host) {
            Ok(blocks) => {
                match is_good_chain(&blocks, Some(c.attach), None) {
                    Ok(true) => {}
                    Ok(false) => v.fail(format!("chain {i} is not good with respect to {}", c.attach)),
                    Err(e) => v.fail(format!("chain {i}: {e}")),
                }
                decomposed.push(Some(blocks));
            }
            Err(e) => {
                v.fail(format!("chain {i} attached at {}: {e}", c.attach));
                decomposed.push(None);
            }
        }
    }
    for u in host.vertices() {
        if !spine.contains(&u) && !seen.contains(&u) {
            v.fail(format!("vertex {u} is covered by neither spine nor chains"));
        }
    }
    for &u in marks {
        let owner = s.chains.iter().position(|c| c.contains(u));
        if let Some(m) = s.marks.iter().find(|m| m.vertex == u) {
            let expected = owner.map_or(Resolution::Free, Resolution::Chain);
            if m.resolution != expected {
                v.fail(format!("mark {u}: recorded {:?}, actual {expected:?}", m.resolution));
            }
        }
        let Some(i) = owner else { continue };
        let Some(blocks) = &decomposed[i] else { continue };
        match is_good_chain(blocks, Some(s.chains[i].attach), Some(u)) {
            Ok(true) => {}
            Ok(false) => v.fail(format!("chain {i} is not good with respect to mark {u} and {}", s.chains[i].attach)),
            Err(e) => v.fail(format!("mark {u} in chain {i}: {e}")),
        }
    }
}
