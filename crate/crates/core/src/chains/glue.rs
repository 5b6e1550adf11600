use std::collections::BTreeSet;

use super::{certify_path, require, require_external, Branch, ParityRequest, Recorder};
use crate::embed::{Edge, Vertex};
use crate::error::ChainsError;
use crate::goodness::{Chain, SetOfChains, Spine};
use crate::oracle::brute_chains::{brute_set_of_chains, SearchLimits};
use crate::structure::{ChainBlock, CircuitGraph, PlainChainOfBlocks};

/// Hosts up to this size may fall back to exhaustive search.
pub const RIHTA_SEARCH_LIMIT: usize = 14;

/// An `(x, y; u)`-set of chains in a bipartite circuit graph.
///
/// The two-mark construction with `u₁ = u₂ = u` serves whenever its
/// hypotheses hold; it only recurses into strictly smaller blocks. Small
/// hosts that fall outside it, or on which it fails, are searched
/// exhaustively.
pub fn rihta(b: &CircuitGraph, x: Vertex, y: Vertex, u: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    require_external(b, &[x, y, u])?;
    require(b.is_bipartite(), || "host is not bipartite".into())?;
    let g = b.graph();
    let n = g.vertex_count();
    if x != y && b.internal_degrees_at_least_four() {
        rec.hit(Branch::RihtaRecursive, n, format_args!("x={x} y={y} u={u}"));
        rec.descend();
        let r = super::set_chains_bip(b, x, y, u, u, rec);
        rec.ascend();
        match r {
            Ok(s) => return Ok(s),
            Err(e) if n > RIHTA_SEARCH_LIMIT => return Err(e),
            Err(e) => rec.fallback(n, format!("rihta ({x},{y};{u}) recursive construction failed: {e}")),
        }
    }
    rihta_search(b, x, y, u, rec)
}

/// The exhaustive backend of [`rihta`].
pub fn rihta_search(b: &CircuitGraph, x: Vertex, y: Vertex, u: Vertex, rec: &mut Recorder) -> Result<SetOfChains, ChainsError> {
    let g = b.graph();
    let n = g.vertex_count();
    rec.hit(Branch::RihtaSearch, n, format_args!("x={x} y={y} u={u}"));
    let limits = SearchLimits {
        max_n: n.max(SearchLimits::default().max_n),
        ..SearchLimits::default()
    };
    match brute_set_of_chains(g, x, y, &[u], ParityRequest::Any, limits) {
        Ok(Some(s)) => certify_path("rihta", g, x, y, &[u], ParityRequest::Any, s),
        Ok(None) => Err(ChainsError::ExhaustionFailure(format!(
            "no ({x},{y};{u})-set of chains in the restricted search family"
        ))),
        Err(e) => Err(ChainsError::ExhaustionFailure(e.to_string())),
    }
}

/// Grafts `vertices`/`edges` onto `base` at `junction`: the chain holding
/// `junction` absorbs them, or a new chain is attached there.
pub(crate) fn graft(
    mut base: SetOfChains,
    junction: Vertex,
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<Edge>,
) -> Result<SetOfChains, ChainsError> {
    if vertices.iter().all(|&v| v == junction) {
        return Ok(base);
    }
    if let Some(i) = base.chain_of(junction) {
        base.chains[i].absorb(vertices, edges);
    } else if base.spine.vertices().contains(&junction) {
        base.chains.push(Chain::new(junction, vertices, edges));
    } else {
        return Err(ChainsError::PreconditionViolated(format!(
            "junction {junction} is neither on the spine nor in a chain"
        )));
    }
    Ok(base)
}

fn extension(chain: &PlainChainOfBlocks, range: std::ops::RangeInclusive<usize>) -> Result<(BTreeSet<Vertex>, BTreeSet<Edge>), ChainsError> {
    let blocks: Vec<&ChainBlock> = range.map(|i| chain.blk(i)).collect();
    for b in &blocks {
        require(b.is_bipartite(), || "extension block is not bipartite".into())?;
    }
    Ok(super::block_union(&blocks))
}

/// Extends a set of chains living in block `B_j` over `B_{j+1} … B_ℓ`
/// (`ℓ > j`, junction `b_j`) or over `B_ℓ … B_{j−1}` (`ℓ < j`, junction
/// `b_{j−1}`). The spine is returned unchanged.
pub fn glue(chain: &PlainChainOfBlocks, base: SetOfChains, j: usize, l: usize) -> Result<SetOfChains, ChainsError> {
    let n = chain.len();
    require((1..=n).contains(&j) && (1..=n).contains(&l), || format!("block index out of range 1..={n}"))?;
    let host = chain.blk(j);
    require(
        base.spine.vertices().iter().all(|&v| host.contains(v))
            && base.chains.iter().all(|c| c.vertices.iter().all(|&v| host.contains(v))),
        || format!("base set does not live in block {j}"),
    )?;
    if l == j {
        return Ok(base);
    }
    let spine = base.spine.clone();
    let out = if l > j {
        let junction = chain.b(j).ok_or_else(|| ChainsError::PreconditionViolated("missing cutvertex".into()))?;
        let (vs, es) = extension(chain, j + 1..=l)?;
        graft(base, junction, vs, es)?
    } else {
        let junction = chain.b(j - 1).ok_or_else(|| ChainsError::PreconditionViolated("missing cutvertex".into()))?;
        let (vs, es) = extension(chain, l..=j - 1)?;
        graft(base, junction, vs, es)?
    };
    debug_assert_eq!(out.spine, spine);
    Ok(out)
}

/// Extends a cycle set of chains in `B_j` to the whole chain: the blocks
/// before `B_j` hang off `b_{j−1}` and those after it off `b_j`.
pub fn glue_cycle(chain: &PlainChainOfBlocks, base: SetOfChains, j: usize) -> Result<SetOfChains, ChainsError> {
    require(matches!(base.spine, Spine::Cycle(_)), || "base spine is not a cycle".into())?;
    let n = chain.len();
    let mut s = base;
    if j < n {
        s = glue(chain, s, j, n)?;
    }
    if j > 1 {
        let junction = chain.b(j - 1).unwrap();
        let (vs, es) = extension(chain, 1..=j - 1)?;
        s = graft(s, junction, vs, es)?;
    }
    Ok(s)
}
