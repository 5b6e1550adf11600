//! Constructive sets of chains.
//!
//! Each public operation validates its own output against the host it was
//! given and reports `InternalInconsistency` (with a replayable diagnostic)
//! instead of returning an invalid object.

mod bipartite;
mod glue;
mod nonbip;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use bipartite::{cycle_chains_bip, set_chains_bip, set_chains_xyxy};
pub use glue::{glue, glue_cycle, rihta, rihta_search, RIHTA_SEARCH_LIMIT};
pub use nonbip::{cycle_chains_nonbip, set_chains_nonbip, set_chains_parity_bxbip};

use crate::diagnostics::Diagnostic;
use crate::embed::{edge, Edge, PlaneGraph, Vertex};
use crate::error::ChainsError;
use crate::goodness::{validate_cycle_set_of_chains, validate_set_of_chains, Chain, SetOfChains, Spine};
use crate::structure::{ChainBlock, CircuitGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum ParityRequest {
    #[default]
    Any,
    Odd,
    Even,
}

impl ParityRequest {
    pub fn accepts(self, edges: usize) -> bool {
        match self {
            ParityRequest::Any => true,
            ParityRequest::Odd => edges % 2 == 1,
            ParityRequest::Even => edges.is_multiple_of(2),
        }
    }

    pub fn of(edges: usize) -> Self {
        if edges.is_multiple_of(2) {
            ParityRequest::Even
        } else {
            ParityRequest::Odd
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            ParityRequest::Any => ParityRequest::Any,
            ParityRequest::Odd => ParityRequest::Even,
            ParityRequest::Even => ParityRequest::Odd,
        }
    }
}

impl std::str::FromStr for ParityRequest {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "any" => Ok(ParityRequest::Any),
            "odd" => Ok(ParityRequest::Odd),
            "even" => Ok(ParityRequest::Even),
            _ => Err(format!("unknown parity `{s}` (expected any, odd or even)")),
        }
    }
}

/// Proof branches, recorded for coverage accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    RihtaSearch,
    RihtaRecursive,
    XyxyAdjacent,
    XyxyCase1,
    XyxyCase2,
    BipCycle,
    BipA,
    BipB,
    BipC,
    BipD,
    BipE,
    BipF,
    BipG,
    /// `k₁ = k < k₂`, absent from the printed case table.
    BipK1EqKLtK2,
    /// Both marks equal to `x`.
    BipOnlyX,
    CycBipCase1,
    CycBipCase2,
    ParityKzLtKuLtN,
    ParityKzEqKuLtN,
    ParityKzLtKuEqN,
    ParityKuLtKzLtN,
    ParityLastZNotY,
    ParityLastZYU,
    ParityLastZYNotU,
    ParityKuLtLastZNotY,
    ParityKuLtLastZY,
    MainA,
    MainAEdge,
    MainB,
    MainBipartite,
    GlavniA,
    GlavniB,
    GlavniC,
    GlavniD,
    GlavniD1,
    GlavniD2,
    CactusEvenCycle,
    CactusOddPath,
    CactusRecurse,
    Fallback,
}

impl Branch {
    pub fn name(self) -> &'static str {
        use Branch::*;
        match self {
            RihtaSearch => "rihta.search",
            RihtaRecursive => "rihta.recursive",
            XyxyAdjacent => "xyxy.adjacent",
            XyxyCase1 => "xyxy.case1",
            XyxyCase2 => "xyxy.case2",
            BipCycle => "bip.cycle",
            BipA => "bip.a",
            BipB => "bip.b",
            BipC => "bip.c",
            BipD => "bip.d",
            BipE => "bip.e",
            BipF => "bip.f",
            BipG => "bip.g",
            BipK1EqKLtK2 => "bip.k1=k<k2",
            BipOnlyX => "bip.only-x",
            CycBipCase1 => "cycbip.case1",
            CycBipCase2 => "cycbip.case2",
            ParityKzLtKuLtN => "parity.kz<ku<n",
            ParityKzEqKuLtN => "parity.kz=ku<n",
            ParityKzLtKuEqN => "parity.kz<ku=n",
            ParityKuLtKzLtN => "parity.ku<kz<n",
            ParityLastZNotY => "parity.kz=ku=n.z!=y",
            ParityLastZYU => "parity.kz=ku=n.z=y=u",
            ParityLastZYNotU => "parity.kz=ku=n.z=y!=u",
            ParityKuLtLastZNotY => "parity.ku<kz=n.z!=y",
            ParityKuLtLastZY => "parity.ku<kz=n.z=y",
            MainA => "main.A",
            MainAEdge => "main.A.y=b0",
            MainB => "main.B",
            MainBipartite => "main.bipartite",
            GlavniA => "glavni.A",
            GlavniB => "glavni.B",
            GlavniC => "glavni.C",
            GlavniD => "glavni.D",
            GlavniD1 => "glavni.D.two-faces",
            GlavniD2 => "glavni.D.face-avoids-y",
            CactusEvenCycle => "cactus.even-cycle",
            CactusOddPath => "cactus.odd-path",
            CactusRecurse => "cactus.recurse",
            Fallback => "fallback",
        }
    }

    /// Branches that a full corpus run must exercise.
    pub fn required() -> &'static [Branch] {
        use Branch::*;
        &[BipA, BipB, BipC, BipD, BipE, BipF, BipG, MainA, MainB, GlavniA, GlavniB, GlavniC, GlavniD]
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Branch counts, fallbacks and an optional trace.
#[derive(Clone, Debug, Default)]
pub struct Recorder {
    pub branches: BTreeMap<Branch, usize>,
    pub fallbacks: Vec<String>,
    trace: Option<Vec<String>>,
    depth: usize,
}

impl Recorder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_trace() -> Self {
        Recorder {
            trace: Some(Vec::new()),
            ..Self::default()
        }
    }

    /// Records a branch: one trace line `depth branch host_size params`.
    pub fn hit(&mut self, branch: Branch, host_size: usize, params: impl fmt::Display) {
        *self.branches.entry(branch).or_default() += 1;
        if let Some(t) = &mut self.trace {
            t.push(format!("{} {} {} {}", self.depth, branch, host_size, params));
        }
    }

    pub fn fallback(&mut self, host_size: usize, what: String) {
        self.hit(Branch::Fallback, host_size, &what);
        self.fallbacks.push(what);
    }

    pub fn is_tracing(&self) -> bool {
        self.trace.is_some()
    }

    pub fn trace_lines(&self) -> &[String] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn merge(&mut self, other: &Recorder) {
        for (b, c) in &other.branches {
            *self.branches.entry(*b).or_default() += c;
        }
        self.fallbacks.extend(other.fallbacks.iter().cloned());
        if let (Some(t), Some(o)) = (&mut self.trace, &other.trace) {
            t.extend(o.iter().cloned());
        }
    }

    pub fn count(&self, b: Branch) -> usize {
        self.branches.get(&b).copied().unwrap_or(0)
    }

    pub(crate) fn descend(&mut self) {
        self.depth += 1;
    }

    pub(crate) fn ascend(&mut self) {
        self.depth -= 1;
    }
}

// ---------------------------------------------------------------------------
// assembly helpers

pub(crate) fn path_of(s: &SetOfChains) -> &[Vertex] {
    s.spine.vertices()
}

/// Single-vertex or single-edge piece.
pub(crate) fn straight(vs: &[Vertex]) -> SetOfChains {
    SetOfChains::new(Spine::Path(vs.to_vec()), Vec::new())
}

/// Concatenates path pieces that share endpoints.
pub(crate) fn join(pieces: Vec<SetOfChains>) -> SetOfChains {
    let mut path: Vec<Vertex> = Vec::new();
    let mut chains = Vec::new();
    for p in pieces {
        let vs = path_of(&p);
        match path.last() {
            Some(&last) => {
                debug_assert_eq!(vs.first(), Some(&last), "pieces must share endpoints");
                path.extend_from_slice(&vs[1..]);
            }
            None => path.extend_from_slice(vs),
        }
        chains.extend(p.chains);
    }
    SetOfChains::new(Spine::Path(path), chains)
}

pub(crate) fn reversed(mut s: SetOfChains) -> SetOfChains {
    if let Spine::Path(p) = &mut s.spine {
        p.reverse();
    }
    s
}

/// Adds a chain unless it consists of its attach vertex alone.
pub(crate) fn push_chain(s: &mut SetOfChains, c: Option<Chain>) {
    if let Some(c) = c {
        if c.vertices.len() > 1 {
            s.chains.push(c);
        }
    }
}

/// The chain induced by `V(host) ∖ removed`, attached at `attach`.
pub(crate) fn induced_chain(host: &PlaneGraph, attach: Vertex, removed: &BTreeSet<Vertex>) -> Option<Chain> {
    let keep: BTreeSet<Vertex> = host.vertices().filter(|v| !removed.contains(v)).collect();
    if !keep.contains(&attach) || keep.len() < 2 {
        return None;
    }
    let edges: Vec<Edge> = host
        .edges()
        .into_iter()
        .filter(|(a, b)| keep.contains(a) && keep.contains(b))
        .collect();
    Some(Chain::new(attach, keep, edges))
}

/// Vertices and edges of a run of blocks, as a chain extension.
pub(crate) fn block_union(blocks: &[&ChainBlock]) -> (BTreeSet<Vertex>, BTreeSet<Edge>) {
    let mut vs = BTreeSet::new();
    let mut es = BTreeSet::new();
    for b in blocks {
        vs.extend(b.vertices());
        es.extend(b.edges().into_iter().map(|(a, c)| edge(a, c)));
    }
    (vs, es)
}

pub(crate) fn diagnostic(op: &str, host: &PlaneGraph, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(op, host, msg)
}

pub(crate) fn inconsistency(d: Diagnostic) -> ChainsError {
    ChainsError::InternalInconsistency(Box::new(d))
}

/// Validates a path set of chains (marks resolved) or reports a diagnostic.
pub(crate) fn certify_path(
    op: &str,
    host: &PlaneGraph,
    x: Vertex,
    y: Vertex,
    marks: &[Vertex],
    parity: ParityRequest,
    mut s: SetOfChains,
) -> Result<SetOfChains, ChainsError> {
    s.prune();
    s.resolve_marks(marks);
    let v = validate_set_of_chains(host, x, y, marks, &s);
    let parity_ok = parity.accepts(s.spine.edge_count());
    if v.ok() && parity_ok {
        return Ok(s);
    }
    let mut reasons = v.reasons;
    if !parity_ok {
        reasons.push(format!("spine parity {} does not match {parity:?}", s.parity()));
    }
    Err(inconsistency(
        diagnostic(op, host, reasons.join("; "))
            .param("x", x)
            .param("y", y)
            .param("marks", marks)
            .param("parity", parity)
            .partial(&s),
    ))
}

pub(crate) fn certify_cycle(op: &str, host: &PlaneGraph, marks: &[Vertex], mut s: SetOfChains) -> Result<SetOfChains, ChainsError> {
    s.prune();
    s.resolve_marks(marks);
    let v = validate_cycle_set_of_chains(host, marks, &s);
    if v.ok() {
        return Ok(s);
    }
    Err(inconsistency(
        diagnostic(op, host, v.reasons.join("; "))
            .param("marks", marks)
            .partial(&s),
    ))
}

pub(crate) fn require(cond: bool, what: impl FnOnce() -> String) -> Result<(), ChainsError> {
    if cond {
        Ok(())
    } else {
        Err(ChainsError::PreconditionViolated(what()))
    }
}

pub(crate) fn require_external(b: &CircuitGraph, vs: &[Vertex]) -> Result<(), ChainsError> {
    for &v in vs {
        require(b.is_external(v), || format!("{v} is not on the outer cycle"))?;
    }
    Ok(())
}

pub(crate) fn require_degrees(b: &CircuitGraph) -> Result<(), ChainsError> {
    require(b.internal_degrees_at_least_four(), || {
        "an internal vertex has degree below 4".to_string()
    })
}

/// An `s → t` arc of the outer cycle such that every vertex off the arc
/// has degree at least 3 and every vertex of `must` lies on it.
pub fn choose_q(b: &CircuitGraph, s: Vertex, t: Vertex, must: &[Vertex]) -> Option<Vec<Vertex>> {
    let g = b.graph();
    let arcs = [b.outer_arc(s, t), b.outer_arc_rev(s, t)];
    arcs.into_iter().flatten().find(|q| {
        must.iter().all(|m| q.contains(m))
            && b
                .outer_cycle()
                .iter()
                .all(|v| q.contains(v) || g.degree(*v) >= 3)
    })
}

/// The request on a trivial block: its edge (or vertex) is the spine.
pub(crate) fn trivial_piece(block: &ChainBlock, s: Vertex, t: Vertex) -> Option<SetOfChains> {
    match block {
        ChainBlock::Vertex(v) if s == *v && t == *v => Some(straight(&[s])),
        ChainBlock::Edge((a, b)) if (s, t) == (*a, *b) || (s, t) == (*b, *a) => Some(straight(&[s, t])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_requests() {
        assert!(ParityRequest::Any.accepts(3));
        assert!(ParityRequest::Odd.accepts(3));
        assert!(!ParityRequest::Even.accepts(3));
        assert_eq!(ParityRequest::of(4).flipped(), ParityRequest::Odd);
        assert_eq!("even".parse::<ParityRequest>(), Ok(ParityRequest::Even));
    }

    #[test]
    fn join_concatenates_paths() {
        let s = join(vec![straight(&[0, 1]), straight(&[1, 2, 3]), straight(&[3])]);
        assert_eq!(path_of(&s), &[0, 1, 2, 3]);
    }

    #[test]
    fn recorder_trace_lines() {
        let mut r = Recorder::with_trace();
        r.hit(Branch::BipA, 8, "x=0 y=3");
        r.descend();
        r.hit(Branch::BipCycle, 4, "x=1 y=2");
        assert_eq!(r.trace_lines(), &["0 bip.a 8 x=0 y=3", "1 bip.cycle 4 x=1 y=2"]);
        assert_eq!(r.count(Branch::BipA), 1);
    }
}
