//! DOT export of plane graphs.

use std::fmt::Write as _;

use prism_cactus::PlaneGraph;

/// Vertices in id order, edges sorted; outer edges drawn bold.
pub fn graph_dot(g: &PlaneGraph) -> String {
    let mut out = String::from("graph g {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for (u, v) in g.edges() {
        let style = if g.is_external_edge(u, v) { " [penwidth=2]" } else { "" };
        let _ = writeln!(out, "  {u} -- {v}{style};");
    }
    out.push_str("}\n");
    out
}
