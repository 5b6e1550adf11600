//! The binary `planar_code` format.
//!
//! A file starts with `>>planar_code<<`; each graph is a vertex-count byte
//! followed, for every vertex, by its neighbours in clockwise order
//! (1-based) and a terminating 0. Only the one-byte variant (n ≤ 255) is
//! read. The outer face of a decoded graph is the face of the dart from
//! vertex 0 to its first listed neighbour.

use crate::embed::{PlaneGraph, Vertex};
use crate::error::ParseError;

pub const HEADER: &[u8] = b">>planar_code<<";

/// Decodes every graph; errors carry the graph number as the line and the
/// byte offset as the column.
pub fn read_planar_code(bytes: &[u8]) -> Result<Vec<PlaneGraph>, ParseError> {
    let body = bytes
        .strip_prefix(HEADER)
        .ok_or_else(|| ParseError::new(0, 0, "missing >>planar_code<< header"))?;
    let offset = HEADER.len();
    let mut graphs = Vec::new();
    let mut i = 0;
    while i < body.len() {
        let gno = graphs.len() + 1;
        let err = |at: usize, msg: &str| ParseError::new(gno, offset + at, msg);
        let n = body[i] as usize;
        if n == 0 {
            return Err(err(i, "graph with zero vertices (two-byte variant is not supported)"));
        }
        i += 1;
        let mut rotation = Vec::with_capacity(n);
        for _ in 0..n {
            let mut rot = Vec::new();
            loop {
                let &b = body.get(i).ok_or_else(|| err(i, "truncated neighbour list"))?;
                i += 1;
                if b == 0 {
                    break;
                }
                if b as usize > n {
                    return Err(err(i - 1, "neighbour index out of range"));
                }
                rot.push(b as Vertex - 1);
            }
            rotation.push(rot);
        }
        let first = *rotation[0].first().ok_or_else(|| err(i, "vertex 1 has no neighbours"))?;
        let g = PlaneGraph::from_parts(rotation, vec![true; n], Some((0, first))).map_err(|e| err(i, &e.to_string()))?;
        graphs.push(g);
    }
    Ok(graphs)
}

/// Encodes graphs on vertices `0..n` (n ≤ 255). The outer face is not
/// stored; see the module notes for how it is recovered.
pub fn write_planar_code(graphs: &[PlaneGraph]) -> Result<Vec<u8>, String> {
    let mut out = HEADER.to_vec();
    for g in graphs {
        let n = g.vertex_count();
        if n > 255 || g.vertex_bound() != n {
            return Err(format!("cannot encode a graph with {n} vertices in {} slots", g.vertex_bound()));
        }
        out.push(n as u8);
        for v in 0..n {
            out.extend(g.neighbors(v).iter().map(|&w| (w + 1) as u8));
            out.push(0);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::canonical::canonical_code;

    #[test]
    fn round_trip_preserves_embedding() {
        let gs = vec![fixtures::octahedron(), fixtures::cube(), fixtures::cycle(5)];
        let bytes = write_planar_code(&gs).unwrap();
        let back = read_planar_code(&bytes).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in gs.iter().zip(&back) {
            assert_eq!(canonical_code(a, false), canonical_code(b, false));
        }
    }

    #[test]
    fn malformed_input_is_reported() {
        assert!(read_planar_code(b"nonsense").is_err());
        let mut bytes = HEADER.to_vec();
        bytes.extend([3, 2, 3]);
        let e = read_planar_code(&bytes).unwrap_err();
        assert_eq!(e.line, 1);
    }
}
