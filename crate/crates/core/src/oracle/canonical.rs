//! Canonical codes of embedded graphs.
//!
//! Two plane graphs get equal codes iff some relabelling, possibly combined
//! with a reflection, maps one rotation system onto the other (and, when
//! asked, the outer face onto the outer face). For 3-connected graphs the
//! embedding is unique up to reflection, so equal codes mean isomorphic
//! graphs.

use std::collections::VecDeque;

use crate::cactus::canonical_cycle;
use crate::embed::{PlaneGraph, Vertex};

const SEP: u32 = u32::MAX;

/// The lexicographically least labelling code over all start darts and
/// both orientations.
pub fn canonical_code(g: &PlaneGraph, respect_outer: bool) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for h in [g.clone(), g.mirrored()] {
        for u in h.vertices() {
            for &v in h.neighbors(u) {
                let code = code_from(&h, u, v, respect_outer);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    best.unwrap_or_else(|| vec![g.vertex_count() as u32])
}

/// Breadth-first labelling from dart `u → v`: each vertex lists its
/// neighbours clockwise, starting from the one it was discovered through.
fn code_from(g: &PlaneGraph, u: Vertex, v: Vertex, respect_outer: bool) -> Vec<u32> {
    let bound = g.vertex_bound();
    let mut label = vec![u32::MAX; bound];
    let mut parent = vec![usize::MAX; bound];
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut queue = VecDeque::new();
    label[u] = 0;
    parent[u] = v;
    order.push(u);
    queue.push_back(u);
    let mut code = vec![g.vertex_count() as u32];
    while let Some(w) = queue.pop_front() {
        let rot = g.neighbors(w);
        let s = rot.iter().position(|&z| z == parent[w]).unwrap();
        for k in 0..rot.len() {
            let z = rot[(s + k) % rot.len()];
            if label[z] == u32::MAX {
                label[z] = order.len() as u32;
                parent[z] = w;
                order.push(z);
                queue.push_back(z);
            }
            code.push(label[z]);
        }
        code.push(SEP);
    }
    if respect_outer {
        let outer: Vec<Vertex> = g.outer_walk().iter().map(|&w| label[w] as Vertex).collect();
        code.extend(canonical_cycle(&outer).into_iter().map(|w| w as u32));
    }
    code
}
