//! Sets of chains in non-bipartite circuit graphs, with parity control.

use std::collections::BTreeSet;

use super::bipartite::{bip_block, chain_from, cycle_chains_bip, degree_condition, is_outer_arc, nested, rihta_block};
use super::glue::{glue, glue_cycle, graft, rihta};
use super::{
    certify_cycle, certify_path, choose_q, diagnostic, inconsistency, induced_chain, join, path_of, push_chain, require,
    require_degrees, require_external, reversed, straight, trivial_piece, Branch, ParityRequest, Recorder,
};
use crate::embed::{edge, Vertex};
use crate::error::ChainsError;
use crate::goodness::{is_bad, Chain, SetOfChains, Spine};
use crate::oracle::brute_chains::{brute_any, SearchLimits};
use crate::structure::{delete_vertex_chain, ChainBlock, CircuitGraph, PlainChainOfBlocks};

/// A single-mark request `(s, t; mark)` on block `i` of a chain.
#[derive(Clone, Copy, Debug)]
struct Req {
    i: usize,
    s: Vertex,
    t: Vertex,
    mark: Vertex,
}

fn req(i: usize, s: Vertex, t: Vertex, mark: Vertex) -> Req {
    Req { i, s, t, mark }
}

fn nb_block(parent: &CircuitGraph, blk: &ChainBlock, r: Req, parity: ParityRequest, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    if let Some(p) = trivial_piece(blk, r.s, r.t) {
        return if parity.accepts(p.spine.edge_count()) {
            Ok(p)
        } else {
            Err(ChainsError::PreconditionViolated("a trivial block has a fixed parity".into()))
        };
    }
    let Some(c) = blk.circuit() else {
        return Err(inconsistency(
            diagnostic("block request", parent.graph(), format!("trivial block cannot serve {}..{}", r.s, r.t)).param("request", r),
        ));
    };
    rec.descend();
    let out = if c.is_bipartite() {
        rihta(c, r.s, r.t, r.mark, rec).and_then(|p| {
            if parity.accepts(p.spine.edge_count()) {
                Ok(p)
            } else {
                Err(ChainsError::PreconditionViolated("a bipartite block has a fixed parity".into()))
            }
        })
    } else if parity == ParityRequest::Any {
        set_chains_nonbip(c, r.s, r.t, r.mark, parity, None, rec)
    } else {
        match choose_q(c, r.s, r.t, &[r.mark]) {
            Some(q) => set_chains_nonbip(c, r.s, r.t, r.mark, parity, Some(&q), rec),
            None => Err(ChainsError::PreconditionViolated("no arc through the mark admits parity control".into())),
        }
    };
    rec.ascend();
    out
}

fn solve_blocks(op: &str, parent: &CircuitGraph, chain: &PlainChainOfBlocks, reqs: &[Req], rec: &mut Recorder) -> Result<Vec<SetOfChains>, ChainsError> {
    reqs.iter()
        .map(|&r| nb_block(parent, chain.blk(r.i), r, ParityRequest::Any, rec).map_err(|e| nested(op, parent, e)))
        .collect()
}

/// Assembles the pieces; when the spine parity is wrong, re-solves one
/// non-bipartite block with the opposite parity.
fn with_parity(
    parent: &CircuitGraph,
    chain: &PlainChainOfBlocks,
    reqs: &[Req],
    pieces: &mut [SetOfChains],
    parity: ParityRequest,
    rec: &mut Recorder,
    assemble: &dyn Fn(&[SetOfChains]) -> Result<SetOfChains, ChainsError>,
) -> Result<Option<SetOfChains>, ChainsError> {
    let s = assemble(pieces)?;
    if parity.accepts(s.spine.edge_count()) {
        return Ok(Some(s));
    }
    for j in 0..reqs.len() {
        let blk = chain.blk(reqs[j].i);
        if blk.is_bipartite() {
            continue;
        }
        let want = ParityRequest::of(pieces[j].spine.edge_count()).flipped();
        if let Ok(p) = nb_block(parent, blk, reqs[j], want, rec) {
            let old = std::mem::replace(&mut pieces[j], p);
            let s = assemble(pieces)?;
            if parity.accepts(s.spine.edge_count()) {
                return Ok(Some(s));
            }
            pieces[j] = old;
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn fallback_search(
    op: &str,
    b: &CircuitGraph,
    x: Vertex,
    y: Vertex,
    marks: &[Vertex],
    parity: ParityRequest,
    cyclic: bool,
    why: &str,
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    let g = b.graph();
    rec.fallback(g.vertex_count(), format!("{op} x={x} y={y} marks={marks:?} parity={parity:?}: {why}"));
    match brute_any(g, x, y, marks, parity, cyclic, SearchLimits::default()) {
        Ok(Some(s)) => Ok(s),
        Ok(None) => Err(inconsistency(
            diagnostic(op, g, format!("{why}; exhaustive search found nothing")).param("x", x).param("y", y).param("marks", marks),
        )),
        Err(e) => Err(inconsistency(diagnostic(op, g, format!("{why}; {e}")).param("x", x).param("y", y).param("marks", marks))),
    }
}

/// An `(x, y; u)`-set of chains in a non-bipartite circuit graph whose
/// internal vertices have degree at least 4.
///
/// With a parity other than [`ParityRequest::Any`] an `x → y` outer arc `q`
/// is needed that contains `u` and leaves only vertices of degree ≥ 3 off
/// it; when `q` is `None` one is chosen.
pub fn set_chains_nonbip(
    b: &CircuitGraph,
    x: Vertex,
    y: Vertex,
    u: Vertex,
    parity: ParityRequest,
    q: Option<&[Vertex]>,
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y, u])?;
    require(x != y, || "x and y coincide".into())?;
    require(!b.is_bipartite(), || "host is bipartite".into())?;
    require_degrees(b)?;
    let q: Option<Vec<Vertex>> = match q {
        Some(q) => {
            require(is_outer_arc(b, x, y, q), || format!("{q:?} is not an outer {x}{y}-arc"))?;
            require(q.contains(&u), || format!("{u} is not on the arc"))?;
            require(degree_condition(b, q), || "a vertex off the arc has degree below 3".into())?;
            Some(q.to_vec())
        }
        None if parity == ParityRequest::Any => None,
        None => Some(choose_q(b, x, y, &[u]).ok_or_else(|| {
            ChainsError::PreconditionViolated(format!("no {x}{y}-arc through {u} meets the degree condition"))
        })?),
    };
    let s = if u == x {
        let qr = q.map(|mut v| {
            v.reverse();
            v
        });
        reversed(main_oriented(b, y, x, u, parity, qr, rec)?)
    } else {
        main_oriented(b, x, y, u, parity, q, rec)?
    };
    certify_path("set_chains_nonbip", b.graph(), x, y, &[u], parity, s)
}

fn main_oriented(
    b: &CircuitGraph,
    x: Vertex,
    y: Vertex,
    u: Vertex,
    parity: ParityRequest,
    q: Option<Vec<Vertex>>,
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    const OP: &str = "set_chains_nonbip";
    let g = b.graph();
    let n_host = g.vertex_count();
    let params = format!("x={x} y={y} u={u} parity={parity:?}");
    let arc = match &q {
        Some(q) => q.clone(),
        None => {
            let f = b.outer_arc(x, y).unwrap();
            if f.contains(&u) {
                f
            } else {
                b.outer_arc_rev(x, y).unwrap()
            }
        }
    };
    let chain = chain_from(b, x, arc[1])?;
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let k1 = chain.first_index(u).unwrap();
    let k2 = chain.first_index(y).unwrap();

    // construction A
    if y == bb(0) {
        if parity.accepts(1) {
            rec.hit(Branch::MainAEdge, n_host, &params);
            let mut s = straight(&[x, y]);
            push_chain(&mut s, induced_chain(g, x, &BTreeSet::from([y])));
            return Ok(s);
        }
    } else {
        let mut reqs = Vec::new();
        for i in 1..=k2 {
            reqs.push(if k1 < k2 {
                match i {
                    i if i < k1 => req(i, bb(i - 1), bb(i), bb(i)),
                    i if i == k1 => req(i, bb(i - 1), bb(i), u),
                    i if i < k2 => req(i, bb(i - 1), bb(i), bb(i - 1)),
                    _ => req(i, bb(i - 1), y, bb(i - 1)),
                }
            } else if i < k2 {
                req(i, bb(i - 1), bb(i), bb(i))
            } else {
                req(i, bb(i - 1), y, u)
            });
        }
        let mut pieces = solve_blocks(OP, b, &chain, &reqs, rec)?;
        let removed = chain.vertices_in(1..=k2);
        let assemble = |p: &[SetOfChains]| -> Result<SetOfChains, ChainsError> {
            let mut parts = vec![straight(&[x, bb(0)])];
            parts.extend(p.iter().cloned());
            let mut s = join(parts);
            push_chain(&mut s, induced_chain(g, x, &removed));
            Ok(s)
        };
        if let Some(s) = with_parity(b, &chain, &reqs, &mut pieces, parity, rec, &assemble)? {
            rec.hit(Branch::MainA, n_host, &params);
            return Ok(s);
        }
    }

    // construction B
    if q.is_some() && (y != bb(k2) || k2 < n) {
        if let Ok(Some(s)) = construction_b(b, &chain, x, y, u, k1, k2, parity, rec) {
            rec.hit(Branch::MainB, n_host, &params);
            return Ok(s);
        }
    }

    if chain.blocks.iter().all(|blk| blk.is_bipartite()) {
        rec.hit(Branch::MainBipartite, n_host, &params);
        rec.descend();
        let r = set_chains_parity_bxbip(b, x, y, q.as_deref().unwrap_or(&arc), u, parity, rec);
        rec.ascend();
        return r.map_err(|e| nested(OP, b, e));
    }
    fallback_search(OP, b, x, y, &[u], parity, false, "no construction reached the requested parity", rec)
}

#[allow(clippy::too_many_arguments)]
fn construction_b(
    b: &CircuitGraph,
    chain: &PlainChainOfBlocks,
    x: Vertex,
    y: Vertex,
    u: Vertex,
    k1: usize,
    k2: usize,
    parity: ParityRequest,
    rec: &mut Recorder,
) -> Result<Option<SetOfChains>, ChainsError> {
    const OP: &str = "set_chains_nonbip";
    let g = b.graph();
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let lo = if u == bb(k1) { k1 + 1 } else { k1 };
    let mut reqs: Vec<Req> = ((k2 + 1)..=n).rev().map(|i| req(i, bb(i - 1), bb(i), bb(i - 1))).collect();
    // the piece that absorbs B_lo … by gluing, and its block index
    let anchor = if y != bb(k2) {
        reqs.push(if k1 < k2 { req(k2, bb(k2), y, bb(k2 - 1)) } else { req(k2, bb(k2), y, u) });
        k2
    } else {
        k2 + 1
    };
    let mut pieces = solve_blocks(OP, b, chain, &reqs, rec)?;
    let removed = chain.vertices_in(lo.min(anchor)..=n);
    let assemble = |p: &[SetOfChains]| -> Result<SetOfChains, ChainsError> {
        let mut parts = vec![straight(&[x, bb(n)])];
        for (r, piece) in reqs.iter().zip(p) {
            let piece = if r.i == anchor && lo < anchor { glue(chain, piece.clone(), anchor, lo)? } else { piece.clone() };
            parts.push(if r.i > k2 { reversed(piece) } else { piece });
        }
        let mut s = join(parts);
        push_chain(&mut s, induced_chain(g, x, &removed));
        Ok(s)
    };
    with_parity(b, chain, &reqs, &mut pieces, parity, rec, &assemble)
}

/// An `(x, y; u)`-set of chains of the requested parity in a non-bipartite
/// circuit graph `B` for which `B − x` is bipartite; `q` is an `x → y`
/// outer arc leaving only vertices of degree ≥ 3 off it.
pub fn set_chains_parity_bxbip(
    b: &CircuitGraph,
    x: Vertex,
    y: Vertex,
    q: &[Vertex],
    u: Vertex,
    parity: ParityRequest,
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y, u])?;
    require(x != y, || "x and y coincide".into())?;
    require(u != x, || "the mark equals x".into())?;
    require(!b.is_bipartite(), || "host is bipartite".into())?;
    require_degrees(b)?;
    require(is_outer_arc(b, x, y, q), || format!("{q:?} is not an outer {x}{y}-arc"))?;
    require(degree_condition(b, q), || "a vertex off the arc has degree below 3".into())?;
    let g = b.graph();
    let col = g
        .remove_vertices(&[x])
        .two_coloring()
        .ok_or_else(|| ChainsError::PreconditionViolated("B − x is not bipartite".into()))?;
    let chain = chain_from(b, x, q[1])?;
    let n = chain.len();
    if !chain.blk(n).contains(y) || (n > 1 && chain.blk(n - 1).contains(y)) {
        return Err(inconsistency(
            diagnostic("set_chains_parity_bxbip", g, format!("{y} is not confined to the last block")).param("q", q),
        ));
    }
    // the path x, z, …, y has parity 1 + [colour(z) ≠ colour(y)]
    let mut nbrs = g.neighbors(x).to_vec();
    nbrs.sort_unstable();
    let len_of = |z: Vertex| 1 + usize::from(col[z] != col[y]);
    let pick = |want: usize| nbrs.iter().copied().find(|&z| len_of(z) % 2 == want);
    let (even_z, odd_z) = (pick(0), pick(1));
    if even_z.is_none() || odd_z.is_none() {
        return Err(inconsistency(diagnostic("set_chains_parity_bxbip", g, "all neighbours of x give the same parity")));
    }
    let z = match parity {
        ParityRequest::Odd => odd_z.unwrap(),
        ParityRequest::Even => even_z.unwrap(),
        ParityRequest::Any => nbrs[0],
    };
    let s = through_edge(b, &chain, x, y, z, u, rec)?;
    certify_path("set_chains_parity_bxbip", g, x, y, &[u], parity, s)
}

/// An `(x, y; u)`-set of chains whose path starts with the edge `xz`.
fn through_edge(
    b: &CircuitGraph,
    chain: &PlainChainOfBlocks,
    x: Vertex,
    y: Vertex,
    z: Vertex,
    u: Vertex,
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    let g = b.graph();
    let n_host = g.vertex_count();
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let ku = chain.last_index(u).unwrap();
    let kz = chain.last_index(z).unwrap();
    let rest = |from: usize| induced_chain(g, x, &chain.vertices_in(from..=n));
    let params = format!("x={x} y={y} z={z} u={u} kz={kz} ku={ku} n={n}");
    let mut parts = vec![straight(&[x, z])];
    let mut extra: Vec<Option<Chain>> = Vec::new();

    if kz < n {
        let tag = match () {
            _ if kz < ku && ku < n => Branch::ParityKzLtKuLtN,
            _ if kz == ku => Branch::ParityKzEqKuLtN,
            _ if kz < ku => Branch::ParityKzLtKuEqN,
            _ => Branch::ParityKuLtKzLtN,
        };
        rec.hit(tag, n_host, &params);
        let first = if kz == ku {
            rihta_block(b, chain.blk(kz), z, bb(kz), u, rec)?
        } else {
            let p = bip_block(b, chain.blk(kz), z, bb(kz), &[bb(kz - 1), bb(kz)], rec)?;
            if ku < kz { glue(chain, p, kz, ku)? } else { p }
        };
        parts.push(first);
        for i in kz + 1..n {
            parts.push(if i == ku {
                rihta_block(b, chain.blk(i), bb(i - 1), bb(i), u, rec)?
            } else {
                bip_block(b, chain.blk(i), bb(i - 1), bb(i), &[bb(i - 1), bb(i)], rec)?
            });
        }
        let mark = if ku == n { u } else { bb(n - 1) };
        parts.push(rihta_block(b, chain.blk(n), bb(n - 1), y, mark, rec)?);
        extra.push(rest(kz.min(ku)));
    } else if z != y {
        if ku == n {
            rec.hit(Branch::ParityLastZNotY, n_host, &params);
            parts.push(rihta_block(b, chain.blk(n), z, y, u, rec)?);
            extra.push(rest(n));
        } else {
            rec.hit(Branch::ParityKuLtLastZNotY, n_host, &params);
            let p = rihta_block(b, chain.blk(n), z, y, bb(n - 1), rec)?;
            parts.push(glue(chain, p, n, ku)?);
            extra.push(rest(ku));
        }
    } else if u == y {
        rec.hit(Branch::ParityLastZYU, n_host, &params);
        extra.push(induced_chain(g, x, &BTreeSet::from([y])));
    } else if ku == n {
        rec.hit(Branch::ParityLastZYNotU, n_host, &params);
        let last = chain.blk(n);
        extra.push(Some(Chain::new(y, last.vertices(), last.edges())));
        extra.push(rest(n));
    } else {
        rec.hit(Branch::ParityKuLtLastZY, n_host, &params);
        extra.push(Some(Chain::new(y, chain.vertices_in(ku..=n), chain.edges_in(ku..=n))));
        extra.push(rest(ku));
    }
    let mut s = join(parts);
    for c in extra {
        push_chain(&mut s, c);
    }
    Ok(s)
}

/// An `[x, y]`-set of chains (even cycle spine) in a non-bipartite circuit
/// graph that is good with respect to `x` and `y` and is not an odd cycle.
pub fn cycle_chains_nonbip(b: &CircuitGraph, x: Vertex, y: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y])?;
    require(x != y, || "x and y coincide".into())?;
    require(!b.is_bipartite(), || "host is bipartite".into())?;
    if b.is_cycle() {
        return Err(ChainsError::OddCycleInput);
    }
    require_degrees(b)?;
    let verdict = is_bad(b, x, y).map_err(|e| ChainsError::PreconditionViolated(e.to_string()))?;
    if verdict.bad {
        return Err(ChainsError::BadPair(x, y));
    }
    let chain = delete_vertex_chain(b, x)?;
    let s = glavni(b, chain, x, y, rec)?;
    certify_cycle("cycle_chains_nonbip", b.graph(), &[x, y], s)
}

fn as_cycle(s: SetOfChains) -> SetOfChains {
    let cycle = path_of(&s).to_vec();
    SetOfChains::new(Spine::Cycle(cycle), s.chains)
}

/// Hangs the closing edge `b_n x` off whatever holds `b_n`.
fn close_with_x(s: SetOfChains, chain: &PlainChainOfBlocks, x: Vertex) -> Result<SetOfChains, ChainsError> {
    let bn = chain.b(chain.len()).unwrap();
    graft(s, bn, BTreeSet::from([bn, x]), BTreeSet::from([edge(bn, x)]))
}

fn glavni(b: &CircuitGraph, chain: PlainChainOfBlocks, x: Vertex, y: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    const OP: &str = "cycle_chains_nonbip";
    let g = b.graph();
    let n_host = g.vertex_count();
    let params = format!("x={x} y={y}");
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let k = chain.first_index(y).unwrap();

    let a_reqs: Vec<Req> = (1..=n)
        .map(|i| match i {
            i if i < k => req(i, bb(i - 1), bb(i), bb(i)),
            i if i == k => req(i, bb(i - 1), bb(i), y),
            i => req(i, bb(i - 1), bb(i), bb(i - 1)),
        })
        .collect();
    let assemble_a = |p: &[SetOfChains]| -> Result<SetOfChains, ChainsError> {
        let mut parts = vec![straight(&[x, bb(0)])];
        parts.extend(p.iter().cloned());
        Ok(as_cycle(join(parts)))
    };

    if chain.blocks.iter().any(|blk| !blk.is_bipartite()) {
        rec.hit(Branch::GlavniA, n_host, &params);
        let mut pieces = solve_blocks(OP, b, &chain, &a_reqs, rec)?;
        return match with_parity(b, &chain, &a_reqs, &mut pieces, ParityRequest::Even, rec, &assemble_a)? {
            Some(s) => Ok(s),
            None => fallback_search(OP, b, x, y, &[], ParityRequest::Even, true, "no block admits a parity flip", rec),
        };
    }

    if y != bb(k - 1) && y != bb(k) {
        rec.hit(Branch::GlavniB, n_host, &params);
        let c = chain.blk(k).circuit().unwrap();
        rec.descend();
        let base = cycle_chains_bip(c, bb(k - 1), bb(k), y, rec).map_err(|e| nested(OP, b, e));
        rec.ascend();
        let s = glue_cycle(&chain, base?, k)?;
        return close_with_x(s, &chain, x);
    }

    if y == bb(0) || y == bb(n) {
        rec.hit(Branch::GlavniC, n_host, &params);
        let chain = if y == bb(0) { chain } else { chain.reversed() };
        let bb = |i: usize| chain.b(i).unwrap();
        if let Some(i) = (1..=n).find(|&i| !chain.blk(i).is_trivial()) {
            let c = chain.blk(i).circuit().unwrap();
            rec.descend();
            let base = cycle_chains_bip(c, bb(i - 1), bb(i), bb(i - 1), rec).map_err(|e| nested(OP, b, e));
            rec.ascend();
            let s = glue_cycle(&chain, base?, i)?;
            return close_with_x(s, &chain, x);
        }
        let outer = b.outer_cycle();
        if outer.len().is_multiple_of(2) {
            return Ok(SetOfChains::new(Spine::Cycle(outer.to_vec()), Vec::new()));
        }
        let j = (1..n).find(|&j| g.has_edge(x, bb(j))).ok_or_else(|| {
            inconsistency(diagnostic(OP, g, "odd outer cycle of trivial blocks without a chord at x").param("x", x))
        })?;
        let path: Vec<Vertex> = (0..=n).map(bb).collect();
        let (cycle, tail) = if j % 2 == 0 {
            (path[..=j].to_vec(), path[j..].to_vec())
        } else {
            (path[j..].to_vec(), path[..=j].to_vec())
        };
        let mut cyc = vec![x];
        cyc.extend(cycle);
        let mut s = SetOfChains::new(Spine::Cycle(cyc), Vec::new());
        push_chain(&mut s, Some(Chain::new(bb(j), tail.iter().copied(), tail.windows(2).map(|w| edge(w[0], w[1])))));
        return Ok(s);
    }

    rec.hit(Branch::GlavniD, n_host, &params);
    let faces = g.faces();
    let free = faces.iter().find(|f| f.bounded && f.is_odd() && !f.contains_vertex(y));
    let Some(f) = free else {
        rec.hit(Branch::GlavniD1, n_host, &params);
        let pieces = solve_blocks(OP, b, &chain, &a_reqs, rec)?;
        return assemble_a(&pieces);
    };
    rec.hit(Branch::GlavniD2, n_host, &params);
    let m = f.boundary.len();
    let pos = f.boundary.iter().position(|&v| v == x).ok_or_else(|| {
        inconsistency(diagnostic(OP, g, "an odd face avoids x although B − x is bipartite").param("face", &f.boundary))
    })?;
    let (x1, x2) = (f.boundary[(pos + m - 1) % m], f.boundary[(pos + 1) % m]);
    let low = |c: &PlainChainOfBlocks, kk: usize| [x1, x2].iter().all(|&v| c.first_index(v).unwrap() <= kk);
    let (chain, k) = if low(&chain, k) { (chain, k) } else { (chain.reversed(), n - k) };
    if !low(&chain, k) {
        return Err(inconsistency(diagnostic(OP, g, "the face neighbours of x straddle y").param("x1", x1).param("x2", x2)));
    }
    let bb = |i: usize| chain.b(i).unwrap();
    let col = g.remove_vertices(&[x]).two_coloring().unwrap();
    let xa = if col[x1] == col[bb(n)] { x1 } else { x2 };
    let kp = chain.last_index(xa).unwrap();
    let first = bip_block(b, chain.blk(kp), xa, bb(kp), &[bb(kp - 1), bb(kp)], rec)?;
    let first = if kp > 1 { glue(&chain, first, kp, 1)? } else { first };
    let mut parts = vec![straight(&[x, xa]), first];
    for i in kp + 1..=n {
        parts.push(bip_block(b, chain.blk(i), bb(i - 1), bb(i), &[bb(i - 1), bb(i)], rec)?);
    }
    Ok(as_cycle(join(parts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::goodness::{validate_cycle_set_of_chains, validate_set_of_chains};

    fn cg(g: crate::embed::PlaneGraph) -> CircuitGraph {
        CircuitGraph::new(g).unwrap()
    }

    fn nonbipartite_fixtures() -> Vec<CircuitGraph> {
        vec![
            cg(fixtures::octahedron()),
            cg(fixtures::antiprism(4)),
            cg(fixtures::bipyramid(5)),
            cg(fixtures::cycle_with_chords(5, &[(0, 2)])),
            cg(fixtures::cycle_with_chords(7, &[(0, 3), (3, 6)])),
        ]
    }

    #[test]
    fn both_parities_on_nonbipartite_fixtures() {
        let mut rec = Recorder::new();
        for g in nonbipartite_fixtures() {
            let outer = g.outer_cycle().to_vec();
            for &x in &outer {
                for &y in &outer {
                    if x == y {
                        continue;
                    }
                    for &u in &outer {
                        let any = set_chains_nonbip(&g, x, y, u, ParityRequest::Any, None, &mut rec)
                            .unwrap_or_else(|e| panic!("{x} {y} {u}: {e}"));
                        assert!(validate_set_of_chains(g.graph(), x, y, &[u], &any).ok());
                        if let Some(q) = choose_q(&g, x, y, &[u]) {
                            for p in [ParityRequest::Odd, ParityRequest::Even] {
                                let s = set_chains_nonbip(&g, x, y, u, p, Some(&q), &mut rec)
                                    .unwrap_or_else(|e| panic!("{x} {y} {u} {p:?}: {e}"));
                                assert!(p.accepts(s.spine.edge_count()));
                            }
                        }
                    }
                }
            }
        }
        assert!(rec.fallbacks.is_empty(), "{:?}", rec.fallbacks);
    }

    #[test]
    fn cycle_sets_for_good_pairs() {
        let mut rec = Recorder::new();
        for g in nonbipartite_fixtures() {
            let outer = g.outer_cycle().to_vec();
            for &x in &outer {
                for &y in &outer {
                    if x == y {
                        continue;
                    }
                    match cycle_chains_nonbip(&g, x, y, &mut rec) {
                        Ok(s) => assert!(validate_cycle_set_of_chains(g.graph(), &[x, y], &s).ok()),
                        Err(ChainsError::BadPair(..)) => assert!(is_bad(&g, x, y).unwrap().bad),
                        Err(e) => panic!("{x} {y}: {e}"),
                    }
                }
            }
        }
        assert!(rec.fallbacks.is_empty(), "{:?}", rec.fallbacks);
    }

    #[test]
    fn odd_cycle_rejected() {
        let c5 = cg(fixtures::cycle(5));
        let mut rec = Recorder::new();
        assert!(matches!(cycle_chains_nonbip(&c5, 0, 2, &mut rec), Err(ChainsError::OddCycleInput)));
    }
}
