//! Spanning bipartite cactuses of circuit graphs.
//!
//! The builder works through a queue of `(block, x, y)` tasks. A task whose
//! host is a cycle is solved directly; otherwise an `[x, y]`-set of chains
//! supplies one cycle block, and every nontrivial block of every chain
//! becomes a new task anchored at its cutvertices. Tasks of one wave have
//! disjoint vertex sets and run through [`crate::par::map`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::chains::{cycle_chains_bip, cycle_chains_nonbip, diagnostic, inconsistency, Branch, Recorder};
use crate::embed::{edge, Edge, PlaneGraph, Vertex};
use crate::error::{ChainsError, ParseError};
use crate::goodness::is_bad;
use crate::par;
use crate::structure::{ChainBlock, CircuitGraph};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CactusBlock {
    Edge(Vertex, Vertex),
    Cycle(Vec<Vertex>),
}

impl CactusBlock {
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            CactusBlock::Edge(a, b) => vec![*a, *b],
            CactusBlock::Cycle(c) => c.clone(),
        }
    }

    pub fn edges(&self) -> Vec<Edge> {
        match self {
            CactusBlock::Edge(a, b) => vec![edge(*a, *b)],
            CactusBlock::Cycle(c) => (0..c.len()).map(|i| edge(c[i], c[(i + 1) % c.len()])).collect(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CactusBlock::Edge(..) => "edge",
            CactusBlock::Cycle(_) => "cycle",
        }
    }

    pub fn is_bipartite(&self) -> bool {
        match self {
            CactusBlock::Edge(..) => true,
            CactusBlock::Cycle(c) => c.len() % 2 == 0,
        }
    }

    /// Edges as `(min, max)`; cycles start at their minimum and head
    /// toward the smaller neighbour.
    pub fn canonical(&self) -> CactusBlock {
        match self {
            CactusBlock::Edge(a, b) => CactusBlock::Edge(*a.min(b), *a.max(b)),
            CactusBlock::Cycle(c) => CactusBlock::Cycle(canonical_cycle(c)),
        }
    }
}

pub(crate) fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    if c.is_empty() {
        return Vec::new();
    }
    let m = c.len();
    let i = (0..m).min_by_key(|&i| c[i]).unwrap();
    let fwd = c[(i + 1) % m];
    let bwd = c[(i + m - 1) % m];
    if fwd <= bwd {
        (0..m).map(|k| c[(i + k) % m]).collect()
    } else {
        (0..m).map(|k| c[(i + m - k) % m]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cactus {
    blocks: Vec<CactusBlock>,
    incidence: BTreeMap<Vertex, Vec<usize>>,
}

impl Cactus {
    /// Canonicalises and sorts the blocks.
    pub fn new(blocks: impl IntoIterator<Item = CactusBlock>) -> Self {
        let mut blocks: Vec<CactusBlock> = blocks.into_iter().map(|b| b.canonical()).collect();
        blocks.sort();
        let mut incidence: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (i, b) in blocks.iter().enumerate() {
            let vs: BTreeSet<Vertex> = b.vertices().into_iter().collect();
            for v in vs {
                incidence.entry(v).or_default().push(i);
            }
        }
        Cactus { blocks, incidence }
    }

    pub fn blocks(&self) -> &[CactusBlock] {
        &self.blocks
    }

    pub fn incidence(&self) -> &BTreeMap<Vertex, Vec<usize>> {
        &self.incidence
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.incidence.keys().copied().collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.blocks.iter().flat_map(|b| b.edges()).collect()
    }

    pub fn is_good(&self, v: Vertex) -> bool {
        self.incidence.get(&v).is_some_and(|bs| bs.len() == 1)
    }

    pub fn good_vertices(&self) -> BTreeSet<Vertex> {
        self.incidence.iter().filter(|(_, bs)| bs.len() == 1).map(|(&v, _)| v).collect()
    }

    pub fn is_bipartite(&self) -> bool {
        self.blocks.iter().all(|b| b.is_bipartite())
    }

    /// `block <kind> v…` per block, then `good v…`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let vs: Vec<String> = b.vertices().iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "block {} {}", b.kind(), vs.join(" "));
        }
        let good: Vec<String> = self.good_vertices().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "good {}", good.join(" ").trim_end());
        out
    }

    /// Reads the format of [`Cactus::to_text`]. A `good` line, if present,
    /// must agree with the blocks.
    pub fn parse(text: &str) -> Result<Cactus, ParseError> {
        let mut blocks = Vec::new();
        let mut good: Option<(usize, BTreeSet<Vertex>)> = None;
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            let rest: Vec<&str> = toks.collect();
            let nums = |from: usize| -> Result<Vec<Vertex>, ParseError> {
                rest[from..]
                    .iter()
                    .map(|t| t.parse::<Vertex>().map_err(|_| ParseError::new(line_no, 1, format!("bad vertex `{t}`"))))
                    .collect()
            };
            match head {
                "block" => {
                    let kind = rest.first().ok_or_else(|| ParseError::new(line_no, 7, "missing block kind"))?;
                    let vs = nums(1)?;
                    blocks.push(match (*kind, vs.len()) {
                        ("edge", 2) => CactusBlock::Edge(vs[0], vs[1]),
                        ("edge", n) => return Err(ParseError::new(line_no, 12, format!("edge block with {n} vertices"))),
                        ("cycle", n) if n >= 3 => CactusBlock::Cycle(vs),
                        ("cycle", n) => return Err(ParseError::new(line_no, 13, format!("cycle block with {n} vertices"))),
                        (k, _) => return Err(ParseError::new(line_no, 7, format!("unknown block kind `{k}`"))),
                    });
                }
                "good" => good = Some((line_no, nums(0)?.into_iter().collect())),
                other => return Err(ParseError::new(line_no, 1, format!("unknown record `{other}`"))),
            }
        }
        let t = Cactus::new(blocks);
        if let Some((line_no, g)) = good {
            if g != t.good_vertices() {
                return Err(ParseError::new(line_no, 1, "good vertices disagree with the blocks"));
            }
        }
        Ok(t)
    }

    /// DOT export; cycle blocks are coloured.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let mut out = String::from("graph cactus {\n");
        for v in self.vertices() {
            let shape = if self.is_good(v) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {v} [shape={shape}];");
        }
        let mut cycles = 0;
        for b in &self.blocks {
            let color = match b {
                CactusBlock::Edge(..) => "black",
                CactusBlock::Cycle(_) => {
                    cycles += 1;
                    PALETTE[(cycles - 1) % PALETTE.len()]
                }
            };
            for (a, c) in b.edges() {
                let _ = writeln!(out, "  {a} -- {c} [color={color}];");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Every way `t` fails to be a (bipartite, if required) spanning cactus of
/// `g`; empty when it is one.
pub fn cactus_violations(g: &PlaneGraph, t: &Cactus, bipartite_required: bool) -> Vec<String> {
    let mut why = Vec::new();
    for b in t.blocks() {
        let vs = b.vertices();
        let distinct: BTreeSet<Vertex> = vs.iter().copied().collect();
        if distinct.len() != vs.len() {
            why.push(format!("block {b:?} repeats a vertex"));
        }
        if let CactusBlock::Cycle(c) = b {
            if c.len() < 3 {
                why.push(format!("cycle block {b:?} is too short"));
            }
        }
        for (a, c) in b.edges() {
            if !g.contains(a) || !g.contains(c) || !g.has_edge(a, c) {
                why.push(format!("edge {a}-{c} is not in the host"));
            }
        }
        if bipartite_required && !b.is_bipartite() {
            why.push(format!("odd cycle block {b:?}"));
        }
    }
    let spanned = t.vertices();
    let host: BTreeSet<Vertex> = g.vertices().collect();
    if spanned != host {
        let missing: Vec<Vertex> = host.difference(&spanned).copied().collect();
        let extra: Vec<Vertex> = spanned.difference(&host).copied().collect();
        why.push(format!("not spanning: missing {missing:?}, foreign {extra:?}"));
    }
    for (v, bs) in t.incidence() {
        if bs.len() > 2 {
            why.push(format!("vertex {v} lies in {} blocks", bs.len()));
        }
    }
    // block-vertex incidence must form a tree: connected, no extra cycles
    let nb = t.blocks().len();
    let incidences: usize = t.incidence().values().map(|bs| bs.len()).sum();
    let nodes = nb + spanned.len();
    if nodes > 0 && incidences + 1 != nodes {
        why.push(format!("block graph is not a tree ({nodes} nodes, {incidences} incidences)"));
    } else if nb > 0 {
        let idx: BTreeMap<Vertex, usize> = spanned.iter().enumerate().map(|(i, &v)| (v, nb + i)).collect();
        let mut uf = crate::embed::UnionFind::new(nodes);
        for (v, bs) in t.incidence() {
            for &b in bs {
                uf.union(idx[v], b);
            }
        }
        let root = uf.find(0);
        if (0..nodes).any(|i| uf.find(i) != root) {
            why.push("cactus is disconnected".into());
        }
    }
    why
}

pub fn validate_cactus(g: &PlaneGraph, t: &Cactus, bipartite_required: bool) -> bool {
    cactus_violations(g, t, bipartite_required).is_empty()
}

struct Task {
    host: CircuitGraph,
    x: Vertex,
    y: Vertex,
}

type StepOutput = (Vec<CactusBlock>, Vec<Task>, Recorder);

/// A spanning bipartite cactus of `b` in which `x` and `y` are good.
pub fn spanning_bipartite_cactus(b: &CircuitGraph, x: Vertex, y: Vertex, rec: &mut Recorder) -> Result<Cactus, ChainsError> {
    crate::chains::require_external(b, &[x, y])?;
    crate::chains::require(x != y, || "x and y coincide".into())?;
    crate::chains::require_degrees(b)?;
    let verdict = is_bad(b, x, y).map_err(|e| ChainsError::PreconditionViolated(e.to_string()))?;
    if verdict.bad {
        return Err(ChainsError::BadPair(x, y));
    }
    let tracing = rec.is_tracing();
    let mut blocks = Vec::new();
    let mut wave = vec![Task { host: b.clone(), x, y }];
    let mut depth = 0;
    while !wave.is_empty() {
        let results: Vec<Result<StepOutput, ChainsError>> = par::map(&wave, |t| {
            let mut r = if tracing { Recorder::with_trace() } else { Recorder::new() };
            for _ in 0..depth {
                r.descend();
            }
            step(t, &mut r).map(|(bl, ts)| (bl, ts, r))
        });
        let mut next = Vec::new();
        for r in results {
            let (bl, ts, sub) = r?;
            blocks.extend(bl);
            next.extend(ts);
            rec.merge(&sub);
        }
        wave = next;
        depth += 1;
    }
    let t = Cactus::new(blocks);
    let mut why = cactus_violations(b.graph(), &t, true);
    for v in [x, y] {
        if !t.is_good(v) {
            why.push(format!("anchor {v} is not good"));
        }
    }
    if !why.is_empty() {
        let mut d = diagnostic("spanning_bipartite_cactus", b.graph(), why.join("; ")).param("x", x).param("y", y);
        for blk in t.blocks() {
            d = d.partial(blk);
        }
        return Err(inconsistency(d));
    }
    Ok(t)
}

fn step(task: &Task, rec: &mut Recorder) -> Result<(Vec<CactusBlock>, Vec<Task>), ChainsError> {
    let (b, x, y) = (&task.host, task.x, task.y);
    let g = b.graph();
    let n = g.vertex_count();
    let verdict = is_bad(b, x, y).map_err(|e| ChainsError::PreconditionViolated(e.to_string()))?;
    if verdict.bad {
        return Err(inconsistency(
            diagnostic("spanning_bipartite_cactus", g, "recursion reached a bad pair").param("x", x).param("y", y),
        ));
    }
    let params = format!("x={x} y={y}");
    if b.is_cycle() {
        let outer = b.outer_cycle();
        if outer.len() % 2 == 0 {
            rec.hit(Branch::CactusEvenCycle, n, &params);
            return Ok((vec![CactusBlock::Cycle(outer.to_vec())], Vec::new()));
        }
        rec.hit(Branch::CactusOddPath, n, &params);
        let arcs = [b.outer_arc(x, y).unwrap(), b.outer_arc_rev(x, y).unwrap()];
        let path = arcs.into_iter().max_by_key(|a| a.len()).unwrap();
        if path.len() != n {
            return Err(inconsistency(diagnostic("spanning_bipartite_cactus", g, "odd cycle with non-adjacent anchors").param("x", x).param("y", y)));
        }
        return Ok((path.windows(2).map(|w| CactusBlock::Edge(w[0], w[1])).collect(), Vec::new()));
    }
    rec.hit(Branch::CactusRecurse, n, &params);
    rec.descend();
    let s = if b.is_bipartite() { cycle_chains_bip(b, x, y, x, rec) } else { cycle_chains_nonbip(b, x, y, rec) };
    rec.ascend();
    let s = s?;
    let mut blocks = vec![CactusBlock::Cycle(s.spine.vertices().to_vec())];
    let mut tasks = Vec::new();
    for chain in &s.chains {
        let pc = chain.blocks(g).map_err(|e| {
            inconsistency(diagnostic("spanning_bipartite_cactus", g, format!("chain at {} is not a chain of blocks: {e}", chain.attach)))
        })?;
        let m = pc.len();
        let far = [x, y].into_iter().find(|&v| v != chain.attach && chain.contains(v));
        for j in 1..=m {
            let s0 = pc.b(j - 1).unwrap();
            let t = if j < m { pc.b(j) } else { far };
            match pc.blk(j) {
                ChainBlock::Vertex(_) => {}
                ChainBlock::Edge((a, c)) => blocks.push(CactusBlock::Edge(*a, *c)),
                ChainBlock::Circuit(c) => {
                    let t = match t {
                        Some(t) if t != s0 => t,
                        _ => c.next_on_outer(s0).unwrap(),
                    };
                    tasks.push(Task { host: c.clone(), x: s0, y: t });
                }
            }
        }
    }
    Ok((blocks, tasks))
}

/// Two adjacent external vertices: the smallest external vertex and its
/// smaller outer neighbour. Adjacent external vertices are always a good pair.
pub fn default_anchors(b: &CircuitGraph) -> (Vertex, Vertex) {
    let x = *b.outer_cycle().iter().min().unwrap();
    let y = b.next_on_outer(x).unwrap().min(b.prev_on_outer(x).unwrap());
    (x, y)
}
