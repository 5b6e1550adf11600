//! Sets of chains in bipartite circuit graphs.

use std::collections::BTreeSet;

use super::glue::{glue, rihta};
use super::{
    certify_cycle, certify_path, choose_q, diagnostic, inconsistency, induced_chain, join, path_of, push_chain,
    require, require_degrees, require_external, reversed, straight, trivial_piece, Branch, ParityRequest, Recorder,
};
use crate::embed::Vertex;
use crate::error::ChainsError;
use crate::goodness::{validate_set_of_chains, Chain, SetOfChains, Spine};
use crate::structure::{delete_vertex_chain, ChainBlock, CircuitGraph, PlainChainOfBlocks};

/// Turns a precondition failure of a nested call into an inconsistency:
/// the enclosing construction promised the hypotheses.
pub(crate) fn nested(op: &str, host: &CircuitGraph, e: ChainsError) -> ChainsError {
    match e {
        ChainsError::PreconditionViolated(m) => inconsistency(diagnostic(op, host.graph(), format!("nested call: {m}"))),
        other => other,
    }
}

/// A request `(s, t; marks)` on a block of a bipartite chain. Trivial blocks
/// are their own spine; a request whose marks are its ends goes to the
/// `(x, y; x, y)` construction, everything else to the two-mark one.
pub(crate) fn bip_block(
    parent: &CircuitGraph,
    blk: &ChainBlock,
    s: Vertex,
    t: Vertex,
    marks: &[Vertex],
    rec: &mut Recorder,
) -> Result<SetOfChains, ChainsError> {
    if let Some(p) = trivial_piece(blk, s, t) {
        return Ok(p);
    }
    let Some(c) = blk.circuit() else {
        return Err(inconsistency(
            diagnostic("block request", parent.graph(), format!("trivial block {blk:?} cannot serve {s}..{t}"))
                .param("marks", marks),
        ));
    };
    let ms: BTreeSet<Vertex> = marks.iter().copied().collect();
    let ends: BTreeSet<Vertex> = [s, t].into_iter().collect();
    rec.descend();
    let r = if s != t && ms == ends {
        match choose_q(c, s, t, &[]) {
            Some(q) => set_chains_xyxy(c, s, t, &q, rec),
            None => Err(ChainsError::PreconditionViolated(format!("no admissible {s}{t}-arc"))),
        }
    } else {
        let u1 = marks[0];
        let u2 = *marks.get(1).unwrap_or(&u1);
        set_chains_bip(c, s, t, u1, u2, rec)
    };
    rec.ascend();
    r.map_err(|e| nested("block request", parent, e))
}

pub(crate) fn rihta_block(parent: &CircuitGraph, blk: &ChainBlock, s: Vertex, t: Vertex, u: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    if let Some(p) = trivial_piece(blk, s, t) {
        return Ok(p);
    }
    let c = blk
        .circuit()
        .ok_or_else(|| inconsistency(diagnostic("rihta request", parent.graph(), format!("trivial block cannot serve {s}..{t}"))))?;
    rec.descend();
    let r = rihta(c, s, t, u, rec);
    rec.ascend();
    r.map_err(|e| nested("rihta request", parent, e))
}

/// Checks that `q` is an `x → y` arc of the outer cycle.
pub(crate) fn is_outer_arc(b: &CircuitGraph, x: Vertex, y: Vertex, q: &[Vertex]) -> bool {
    [b.outer_arc(x, y), b.outer_arc_rev(x, y)]
        .into_iter()
        .flatten()
        .any(|a| a == q)
}

/// `B − x` oriented so that `b₀` is `first`.
pub(crate) fn chain_from(b: &CircuitGraph, x: Vertex, first: Vertex) -> Result<PlainChainOfBlocks, ChainsError> {
    let c = delete_vertex_chain(b, x)?;
    Ok(if c.b(0) == Some(first) { c } else { c.reversed() })
}

/// An `(x, y; x, y)`-set of chains, given an `x → y` arc `q` of the outer
/// cycle whose complement has only vertices of degree ≥ 3.
pub fn set_chains_xyxy(b: &CircuitGraph, x: Vertex, y: Vertex, q: &[Vertex], rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y])?;
    require(x != y, || "x and y coincide".into())?;
    require(b.is_bipartite(), || "host is not bipartite".into())?;
    require_degrees(b)?;
    require(is_outer_arc(b, x, y, q), || format!("{q:?} is not an outer {x}{y}-arc"))?;
    require(choose_q(b, x, y, &[]).as_deref() == Some(q) || degree_condition(b, q), || {
        "a vertex off the arc has degree below 3".into()
    })?;
    let g = b.graph();
    let n_host = g.vertex_count();
    let on_q: BTreeSet<Vertex> = q.iter().copied().collect();

    // b₀ lies on the other arc; b_n is x's neighbour on q
    let other = b.next_on_outer(x).filter(|&v| v != q[1]).or_else(|| b.prev_on_outer(x)).unwrap();
    let chain = chain_from(b, x, other)?;
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    if !chain.blk(1).contains(y) || (n > 1 && bb(1) == y) {
        return Err(inconsistency(
            diagnostic("set_chains_xyxy", g, format!("{y} is not a non-cut vertex of the first block"))
                .param("x", x)
                .param("y", y),
        ));
    }

    // R_2 … R_n, R_{n+1}
    let mut tail = Vec::new();
    for i in 2..=n {
        tail.push(rihta_block(b, chain.blk(i), bb(i - 1), bb(i), bb(i - 1), rec)?);
    }
    tail.push(straight(&[bb(n), x]));

    let built = match chain.blk(1) {
        ChainBlock::Circuit(c1) => {
            let d0 = q[q.len() - 2];
            let d = chain_from(c1, y, d0)?;
            let m = d.len();
            let dd = |i: usize| d.b(i).unwrap();
            let b1 = bb(1);
            let k = (1..=m)
                .filter(|&i| d.blk(i).vertices().iter().any(|v| on_q.contains(v)))
                .max()
                .unwrap();
            let mut pieces = vec![straight(&[y, d0])];
            for i in 1..k {
                pieces.push(rihta_block(c1, d.blk(i), dd(i - 1), dd(i), dd(i), rec)?);
            }
            let meet: Vec<Vertex> = d.blk(k).vertices().into_iter().filter(|v| on_q.contains(v)).collect();
            let mut extra_chain = None;
            if meet == [dd(k - 1)] {
                rec.hit(Branch::XyxyCase1, n_host, format_args!("x={x} y={y} k={k}"));
                if dd(k - 1) != b1 {
                    return Err(inconsistency(
                        diagnostic("set_chains_xyxy", g, format!("d_(k-1)={} differs from b_1={b1}", dd(k - 1)))
                            .param("x", x)
                            .param("y", y),
                    ));
                }
                let (vs, es) = super::block_union(&(k..=m).map(|i| d.blk(i)).collect::<Vec<_>>());
                extra_chain = Some(Chain::new(dd(k - 1), vs, es));
            } else {
                rec.hit(Branch::XyxyCase2, n_host, format_args!("x={x} y={y} k={k}"));
                let h = rihta_block(c1, d.blk(k), dd(k - 1), b1, dd(k), rec)?;
                let h = if k < m { glue(&d, h, k, m)? } else { h };
                pieces.push(h);
            }
            pieces.extend(tail);
            let mut s = join(pieces);
            push_chain(&mut s, extra_chain);
            s
        }
        _ => {
            rec.hit(Branch::XyxyAdjacent, n_host, format_args!("x={x} y={y}"));
            let mut pieces = vec![straight(&[y, bb(1)])];
            pieces.extend(tail);
            join(pieces)
        }
    };
    certify_path("set_chains_xyxy", g, x, y, &[x, y], ParityRequest::Any, reversed(built))
}

pub(crate) fn degree_condition(b: &CircuitGraph, q: &[Vertex]) -> bool {
    b.outer_cycle()
        .iter()
        .all(|v| q.contains(v) || b.graph().degree(*v) >= 3)
}

/// Direct construction on a cycle host: one `x → y` arc is the spine, the
/// other arc is split into a piece hanging off `x` and one off `y`.
pub(crate) fn cycle_host(b: &CircuitGraph, x: Vertex, y: Vertex, marks: &[Vertex]) -> Option<SetOfChains> {
    let g = b.graph();
    let arcs = [b.outer_arc(x, y)?, b.outer_arc_rev(x, y)?];
    for (i, spine) in arcs.iter().enumerate() {
        let other = &arcs[1 - i];
        let m = other.len() - 1;
        for j in 0..m {
            let mut chains = Vec::new();
            if j >= 1 {
                let vs = &other[..=j];
                chains.push(Chain::new(x, vs.iter().copied(), vs.windows(2).map(|w| (w[0], w[1]))));
            }
            if j + 1 < m {
                let vs = &other[j + 1..];
                chains.push(Chain::new(y, vs.iter().copied(), vs.windows(2).map(|w| (w[0], w[1]))));
            }
            let mut s = SetOfChains::new(Spine::Path(spine.clone()), chains);
            s.resolve_marks(marks);
            if validate_set_of_chains(g, x, y, marks, &s).ok() {
                return Some(s);
            }
        }
    }
    None
}

/// An `(x, y; u₁, u₂)`-set of chains in a bipartite circuit graph with
/// `{x, y} ≠ {u₁, u₂}`.
pub fn set_chains_bip(b: &CircuitGraph, x: Vertex, y: Vertex, u1: Vertex, u2: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y, u1, u2])?;
    require(b.is_bipartite(), || "host is not bipartite".into())?;
    require_degrees(b)?;
    require(x != y, || "x and y coincide".into())?;
    let given: BTreeSet<Vertex> = [u1, u2].into_iter().collect();
    let ends: BTreeSet<Vertex> = [x, y].into_iter().collect();
    require(given != ends, || format!("marks {{{u1},{u2}}} equal the ends"))?;
    let marks = [u1, u2];
    let g = b.graph();

    // keep y unmarked
    if given.contains(&y) {
        let s = set_chains_bip_oriented(b, y, x, &marks, rec)?;
        return certify_path("set_chains_bip", g, x, y, &marks, ParityRequest::Any, reversed(s));
    }
    let s = set_chains_bip_oriented(b, x, y, &marks, rec)?;
    certify_path("set_chains_bip", g, x, y, &marks, ParityRequest::Any, s)
}

fn set_chains_bip_oriented(b: &CircuitGraph, x: Vertex, y: Vertex, marks: &[Vertex; 2], rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    let g = b.graph();
    let n_host = g.vertex_count();
    if b.is_cycle() {
        rec.hit(Branch::BipCycle, n_host, format_args!("x={x} y={y} u={marks:?}"));
        return cycle_host(b, x, y, marks).ok_or_else(|| {
            inconsistency(
                diagnostic("set_chains_bip", g, "no arc split serves the marks on a cycle")
                    .param("x", x)
                    .param("y", y)
                    .param("marks", marks),
            )
        });
    }
    let fwd = b.outer_arc(x, y).unwrap();
    let bwd = b.outer_arc_rev(x, y).unwrap();
    let interior = |a: &[Vertex], v: Vertex| a.len() > 2 && a[1..a.len() - 1].contains(&v);
    let real: Vec<Vertex> = marks.iter().copied().filter(|&m| m != x).collect();
    let q = if real.iter().any(|&m| interior(&fwd, m)) || (real.is_empty() && fwd.len() > 2) {
        fwd
    } else {
        bwd
    };
    let chain = chain_from(b, x, q[1])?;
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let first = |v: Vertex| chain.first_index(v).unwrap();
    let k = first(y);

    let mut pieces: Vec<Option<SetOfChains>> = vec![None; n + 1];
    let fill_i = |pieces: &mut Vec<Option<SetOfChains>>, i: usize, rec: &mut Recorder| -> Result<(), ChainsError> {
        pieces[i] = Some(bip_block(b, chain.blk(i), bb(i - 1), bb(i), &[bb(i - 1), bb(i)], rec)?);
        Ok(())
    };
    let params = format!("x={x} y={y} u={marks:?}");

    // (u1, u2) with u1 interior to q, k1 ≤ k2; u2 = x when only x remains
    let on_q: Vec<Vertex> = real.iter().copied().filter(|&m| interior(&q, m)).collect();
    let mut remove_upto = k;
    let mut glue_to: Option<usize> = None;
    match on_q.as_slice() {
        [] => {
            rec.hit(Branch::BipOnlyX, n_host, &params);
            for i in 1..k {
                fill_i(&mut pieces, i, rec)?;
            }
            pieces[k] = Some(bip_block(b, chain.blk(k), bb(k - 1), y, &[bb(k - 1), bb(k)], rec)?);
            glue_to = Some(n);
        }
        _ => {
            let mut cand = on_q.clone();
            cand.sort_by_key(|&m| (first(m), m));
            let u1 = cand[0];
            let u2 = if real.len() == 2 && real[0] != real[1] {
                if real[0] == u1 { real[1] } else { real[0] }
            } else if real.len() == 2 {
                u1
            } else {
                x
            };
            let k1 = first(u1);
            if u2 == x {
                if k1 < k {
                    rec.hit(Branch::BipF, n_host, &params);
                    for i in (1..k).filter(|&i| i != k1) {
                        fill_i(&mut pieces, i, rec)?;
                    }
                    pieces[k1] = Some(bip_block(b, chain.blk(k1), bb(k1 - 1), bb(k1), &[bb(k1 - 1), u1], rec)?);
                    pieces[k] = Some(bip_block(b, chain.blk(k), bb(k - 1), y, &[bb(k - 1), bb(k)], rec)?);
                } else {
                    rec.hit(Branch::BipG, n_host, &params);
                    for i in 1..k {
                        fill_i(&mut pieces, i, rec)?;
                    }
                    pieces[k] = Some(bip_block(b, chain.blk(k), bb(k - 1), y, &[u1, bb(k)], rec)?);
                }
                glue_to = Some(n);
            } else {
                let k2 = first(u2);
                let (branch, skip): (Branch, Vec<usize>) = if k1 < k2 && k2 < k {
                    (Branch::BipA, vec![k1, k2])
                } else if k1 < k2 && k2 == k {
                    (Branch::BipB, vec![k1])
                } else if k1 < k && k < k2 {
                    (Branch::BipC, vec![k1])
                } else if k1 == k2 && k1 < k {
                    (Branch::BipD, vec![k1])
                } else if k1 == k2 && k2 == k {
                    (Branch::BipE, vec![])
                } else {
                    (Branch::BipK1EqKLtK2, vec![])
                };
                rec.hit(branch, n_host, &params);
                for i in (1..k).filter(|i| !skip.contains(i)) {
                    fill_i(&mut pieces, i, rec)?;
                }
                let (yk, bk1) = (y, bb(k - 1));
                match branch {
                    Branch::BipA => {
                        for (kj, uj) in [(k1, u1), (k2, u2)] {
                            pieces[kj] = Some(bip_block(b, chain.blk(kj), bb(kj - 1), bb(kj), &[bb(kj - 1), uj], rec)?);
                        }
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[bk1, bb(k)], rec)?);
                    }
                    Branch::BipB => {
                        pieces[k1] = Some(bip_block(b, chain.blk(k1), bb(k1 - 1), bb(k1), &[bb(k1 - 1), u1], rec)?);
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[bk1, u2], rec)?);
                    }
                    Branch::BipC => {
                        pieces[k1] = Some(bip_block(b, chain.blk(k1), bb(k1 - 1), bb(k1), &[bb(k1 - 1), u1], rec)?);
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[bk1, bb(k)], rec)?);
                        glue_to = Some(k2);
                        remove_upto = k2;
                    }
                    Branch::BipD => {
                        pieces[k1] = Some(bip_block(b, chain.blk(k1), bb(k1 - 1), bb(k1), &[u1, u2], rec)?);
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[bk1, bb(k)], rec)?);
                    }
                    Branch::BipE => {
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[u1, u2], rec)?);
                    }
                    _ => {
                        pieces[k] = Some(bip_block(b, chain.blk(k), bk1, yk, &[u1, bb(k)], rec)?);
                        glue_to = Some(k2);
                        remove_upto = k2;
                    }
                }
            }
        }
    }

    let mut last = pieces[k].take().unwrap();
    if let Some(l) = glue_to {
        if l > k {
            last = glue(&chain, last, k, l)?;
        }
    }
    let mut parts = vec![straight(&[x, bb(0)])];
    for p in pieces.iter_mut().take(k).skip(1) {
        parts.push(p.take().unwrap());
    }
    parts.push(last);
    let mut s = join(parts);
    if glue_to != Some(n) {
        let removed: BTreeSet<Vertex> = chain.vertices_in(1..=remove_upto);
        push_chain(&mut s, induced_chain(g, x, &removed));
    }
    Ok(s)
}

/// A `[u₁, u₂, u₃]`-set of chains (even cycle spine) in a bipartite
/// circuit graph.
pub fn cycle_chains_bip(b: &CircuitGraph, u1: Vertex, u2: Vertex, u3: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[u1, u2, u3])?;
    require(b.is_bipartite(), || "host is not bipartite".into())?;
    require_degrees(b)?;
    let g = b.graph();
    let n_host = g.vertex_count();
    let x = u3;
    let chain = delete_vertex_chain(b, x)?;
    let n = chain.len();
    let bb = |i: usize| chain.b(i).unwrap();
    let marks: Vec<Vertex> = [u1, u2].into_iter().filter(|&u| u != x).collect();
    let ks: Vec<usize> = marks.iter().map(|&u| chain.first_index(u).unwrap()).collect();
    let params = format!("u=[{u1},{u2},{u3}]");
    let mut parts = vec![straight(&[x, bb(0)])];
    if ks.len() == 2 && ks[0] == ks[1] {
        rec.hit(Branch::CycBipCase2, n_host, &params);
        for i in 1..=n {
            let ms = if i == ks[0] { [marks[0], marks[1]] } else { [bb(i - 1), bb(i)] };
            parts.push(bip_block(b, chain.blk(i), bb(i - 1), bb(i), &ms, rec)?);
        }
    } else {
        rec.hit(Branch::CycBipCase1, n_host, &params);
        for i in 1..=n {
            let ms = match ks.iter().position(|&kj| kj == i) {
                Some(j) => vec![bb(i - 1), marks[j]],
                None => vec![bb(i - 1)],
            };
            parts.push(bip_block(b, chain.blk(i), bb(i - 1), bb(i), &ms, rec)?);
        }
    }
    let s = join(parts);
    let cycle = path_of(&s).to_vec();
    let out = SetOfChains::new(Spine::Cycle(cycle), s.chains);
    certify_cycle("cycle_chains_bip", g, &[u1, u2, u3], out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::goodness::validate_cycle_set_of_chains;

    fn cg(g: crate::embed::PlaneGraph) -> CircuitGraph {
        CircuitGraph::new(g).unwrap()
    }

    #[test]
    fn xyxy_on_c4() {
        let c4 = cg(fixtures::cycle(4));
        let mut rec = Recorder::new();
        let q = c4.outer_arc_rev(0, 1).unwrap();
        let s = set_chains_xyxy(&c4, 0, 1, &q, &mut rec).unwrap();
        assert_eq!(s.spine.vertices().len(), 4);
        assert!(s.chains.is_empty());
    }

    #[test]
    fn xyxy_on_grid() {
        let g = cg(fixtures::grid(3, 4));
        let mut rec = Recorder::new();
        let outer = g.outer_cycle().to_vec();
        for &x in &outer {
            for &y in &outer {
                if x == y {
                    continue;
                }
                if let Some(q) = choose_q(&g, x, y, &[]) {
                    let s = set_chains_xyxy(&g, x, y, &q, &mut rec).unwrap();
                    assert!(validate_set_of_chains(g.graph(), x, y, &[x, y], &s).ok());
                }
            }
        }
    }

    #[test]
    fn bip_on_cycles_and_grids() {
        let mut rec = Recorder::new();
        for g in [fixtures::cycle(4), fixtures::cycle(6), fixtures::grid(3, 3), fixtures::grid(3, 4), fixtures::ladder(4)] {
            let g = cg(g);
            let outer = g.outer_cycle().to_vec();
            for &x in &outer {
                for &y in &outer {
                    for &u1 in &outer {
                        for &u2 in outer.iter().filter(|&&u2| u2 >= u1) {
                            let ends: BTreeSet<_> = [x, y].into();
                            let ms: BTreeSet<_> = [u1, u2].into();
                            if x == y || ends == ms {
                                continue;
                            }
                            let s = set_chains_bip(&g, x, y, u1, u2, &mut rec)
                                .unwrap_or_else(|e| panic!("{x} {y} {u1} {u2}: {e}"));
                            assert!(validate_set_of_chains(g.graph(), x, y, &[u1, u2], &s).ok());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cycle_sets_on_bipartite_fixtures() {
        let mut rec = Recorder::new();
        for g in [fixtures::cycle(4), fixtures::cycle(8), fixtures::grid(3, 3), fixtures::ladder(3)] {
            let g = cg(g);
            let outer = g.outer_cycle().to_vec();
            for &a in &outer {
                for &c in &outer {
                    let s = cycle_chains_bip(&g, a, c, outer[0], &mut rec).unwrap();
                    assert!(validate_cycle_set_of_chains(g.graph(), &[a, c, outer[0]], &s).ok());
                }
            }
        }
    }
}
