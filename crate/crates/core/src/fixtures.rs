//! Small named plane graphs used by tests, the corpus and the CLI.

use std::f64::consts::PI;

use crate::embed::{Dart, PlaneGraph, Vertex};

/// Straight-line embedding from coordinates. The outer face is the face
/// with the most negative signed area (bounded faces trace counterclockwise).
pub fn from_coordinates(pos: &[(f64, f64)], edges: &[(Vertex, Vertex)]) -> PlaneGraph {
    let n = pos.len();
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        rotation[u].push(v);
        rotation[v].push(u);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let (x0, y0) = pos[v];
        rot.sort_by(|&a, &b| {
            let ta = (pos[a].1 - y0).atan2(pos[a].0 - x0);
            let tb = (pos[b].1 - y0).atan2(pos[b].0 - x0);
            tb.partial_cmp(&ta).unwrap()
        });
    }
    let probe = PlaneGraph::from_parts(rotation.clone(), vec![true; n], first_dart(&rotation))
        .expect("coordinates give a consistent rotation");
    let outer = probe
        .faces()
        .into_iter()
        .map(|f| {
            let w = f.walk();
            let area: f64 = (0..w.len())
                .map(|i| {
                    let (a, b) = (pos[w[i]], pos[w[(i + 1) % w.len()]]);
                    a.0 * b.1 - b.0 * a.1
                })
                .sum();
            (area, f.darts().first().copied())
        })
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .and_then(|(_, d)| d);
    PlaneGraph::from_parts(rotation, vec![true; n], outer).unwrap()
}

fn first_dart(rotation: &[Vec<Vertex>]) -> Option<Dart> {
    rotation
        .iter()
        .enumerate()
        .find_map(|(v, r)| r.first().map(|&w| (v, w)))
}

fn circle(k: usize, radius: f64, phase: f64) -> Vec<(f64, f64)> {
    (0..k)
        .map(|i| {
            let t = 2.0 * PI * (i as f64 + phase) / k as f64;
            (radius * t.cos(), radius * t.sin())
        })
        .collect()
}

pub fn cycle(n: usize) -> PlaneGraph {
    let rotation = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
    let walk: Vec<Vertex> = (0..n).collect();
    PlaneGraph::new(rotation, &walk).unwrap()
}

/// Cycle `0..n` with extra chords, all drawn inside.
pub fn cycle_with_chords(n: usize, chords: &[(Vertex, Vertex)]) -> PlaneGraph {
    let pos = circle(n, 1.0, 0.0);
    let mut edges: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend_from_slice(chords);
    from_coordinates(&pos, &edges)
}

/// `k`-gonal bipyramid: rim `0..k`, inner apex `k`, outer apex `k + 1`.
pub fn bipyramid(k: usize) -> PlaneGraph {
    let (c, a) = (k, k + 1);
    let mut rotation: Vec<Vec<Vertex>> = (0..k)
        .map(|i| vec![c, (i + 1) % k, a, (i + k - 1) % k])
        .collect();
    rotation.push((0..k).rev().collect());
    rotation.push((0..k).collect());
    let probe = PlaneGraph::from_parts(rotation.clone(), vec![true; k + 2], Some((a, 0))).unwrap();
    let outer = probe.faces()[0].darts()[0];
    PlaneGraph::from_parts(rotation, vec![true; k + 2], Some(outer)).unwrap()
}

pub fn octahedron() -> PlaneGraph {
    antiprism(3)
}

/// Two `k`-cycles joined as an antiprism; 4-regular and 3-connected.
pub fn antiprism(k: usize) -> PlaneGraph {
    let mut pos = circle(k, 3.0, 0.0);
    pos.extend(circle(k, 1.0, 0.5));
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
        edges.push((k + i, k + (i + 1) % k));
        edges.push((i, k + i));
        edges.push((i, k + (i + k - 1) % k));
    }
    from_coordinates(&pos, &edges)
}

pub fn cube() -> PlaneGraph {
    let pos = [
        (-3.0, -3.0),
        (3.0, -3.0),
        (3.0, 3.0),
        (-3.0, 3.0),
        (-1.0, -1.0),
        (1.0, -1.0),
        (1.0, 1.0),
        (-1.0, 1.0),
    ];
    let mut edges = Vec::new();
    for i in 0..4 {
        edges.push((i, (i + 1) % 4));
        edges.push((4 + i, 4 + (i + 1) % 4));
        edges.push((i, 4 + i));
    }
    from_coordinates(&pos, &edges)
}

/// `rows × cols` grid; vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> PlaneGraph {
    let mut pos = Vec::new();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            pos.push((c as f64, r as f64));
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    from_coordinates(&pos, &edges)
}

/// `C_k □ K₂`: outer rim `0..k`, inner rim `k..2k`.
pub fn circular_ladder(k: usize) -> PlaneGraph {
    let mut pos = circle(k, 3.0, 0.0);
    pos.extend(circle(k, 1.0, 0.0));
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
        edges.push((k + i, k + (i + 1) % k));
        edges.push((i, k + i));
    }
    from_coordinates(&pos, &edges)
}

pub fn ladder(k: usize) -> PlaneGraph {
    grid(2, k)
}

/// Cycle `0..m` with a centre vertex `m` joined to the listed rim vertices.
pub fn hub(m: usize, spokes: &[Vertex]) -> PlaneGraph {
    let mut pos = circle(m, 2.0, 0.0);
    pos.push((0.0, 0.0));
    let mut edges: Vec<(Vertex, Vertex)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    edges.extend(spokes.iter().map(|&s| (s, m)));
    from_coordinates(&pos, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_ok(g: &PlaneGraph) -> bool {
        g.vertex_count() + g.faces().len() == g.edge_count() + 2
    }

    #[test]
    fn fixtures_satisfy_euler() {
        for g in [
            cycle(5),
            octahedron(),
            antiprism(4),
            bipyramid(5),
            cube(),
            grid(3, 3),
            ladder(4),
            hub(8, &[0, 2, 4, 6]),
            cycle_with_chords(6, &[(0, 3)]),
        ] {
            assert!(euler_ok(&g));
        }
    }

    #[test]
    fn bipyramid_faces_are_triangles() {
        let g = bipyramid(5);
        assert!(g.faces().iter().all(|f| f.degree() == 3));
        assert_eq!(g.outer_face().degree(), 3);
    }

    #[test]
    fn grid_outer_face_is_the_border() {
        let g = grid(3, 4);
        assert_eq!(g.outer_face().degree(), 10);
        assert!(g.is_bipartite());
    }
}
