//! Plane graphs given by rotation systems.
//!
//! A [`PlaneGraph`] stores, for every vertex, its neighbours in clockwise
//! order together with one dart lying on the unbounded face. Vertex ids are
//! dense indices into the host graph; subgraphs keep the ids of the graph
//! they were cut from, so a vertex may be absent.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{EmbedError, ParseError};

pub type Vertex = usize;

/// Undirected edge, stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

/// Directed edge-side `(tail, head)`.
pub type Dart = (Vertex, Vertex);

#[inline]
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A face of a plane graph, traced as a closed walk of darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Boundary walk in canonical form: rotated to start at the minimum
    /// vertex, in the lexicographically smaller direction.
    pub boundary: Vec<Vertex>,
    pub bounded: bool,
    darts: Vec<Dart>,
}

impl Face {
    pub fn degree(&self) -> usize {
        self.darts.len()
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Boundary in traced order, starting at the tail of the first dart.
    pub fn walk(&self) -> Vec<Vertex> {
        if self.darts.is_empty() {
            return self.boundary.clone();
        }
        self.darts.iter().map(|d| d.0).collect()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.boundary.contains(&v)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.darts.iter().any(|&(a, b)| edge(a, b) == e)
    }
}

/// Rotate/reflect a closed walk into canonical form.
pub fn canonical_walk(walk: &[Vertex]) -> Vec<Vertex> {
    if walk.is_empty() {
        return Vec::new();
    }
    let n = walk.len();
    let mut best: Option<Vec<Vertex>> = None;
    let min = *walk.iter().min().unwrap();
    for start in 0..n {
        if walk[start] != min {
            continue;
        }
        let fwd: Vec<Vertex> = (0..n).map(|i| walk[(start + i) % n]).collect();
        let bwd: Vec<Vertex> = (0..n).map(|i| walk[(start + n - i) % n]).collect();
        for cand in [fwd, bwd] {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    rotation: Vec<Vec<Vertex>>,
    present: Vec<bool>,
    outer: Option<Dart>,
}

impl PlaneGraph {
    /// Builds a graph on vertices `0..rotation.len()` whose outer face is
    /// the face traced by `outer_walk` (in either direction).
    pub fn new(rotation: Vec<Vec<Vertex>>, outer_walk: &[Vertex]) -> Result<Self, EmbedError> {
        let n = rotation.len();
        let g = PlaneGraph {
            rotation,
            present: vec![true; n],
            outer: None,
        };
        g.check_rotation()?;
        let outer = g.locate_outer(outer_walk)?;
        Ok(PlaneGraph { outer, ..g })
    }

    /// Builds a graph with an explicit outer dart (or none for edgeless graphs).
    pub fn from_parts(
        rotation: Vec<Vec<Vertex>>,
        present: Vec<bool>,
        outer: Option<Dart>,
    ) -> Result<Self, EmbedError> {
        if rotation.len() != present.len() {
            return Err(EmbedError::InconsistentRotation(
                "presence mask length differs from rotation table".into(),
            ));
        }
        let g = PlaneGraph {
            rotation,
            present,
            outer,
        };
        g.check_rotation()?;
        match outer {
            Some((u, v)) if !g.has_edge(u, v) => Err(EmbedError::InconsistentRotation(format!(
                "outer dart {u}->{v} is not an edge"
            ))),
            None if g.edge_count() > 0 => Err(EmbedError::InconsistentRotation(
                "graph with edges needs an outer dart".into(),
            )),
            _ => Ok(g),
        }
    }

    fn check_rotation(&self) -> Result<(), EmbedError> {
        let n = self.rotation.len();
        for v in 0..n {
            if !self.present[v] {
                if !self.rotation[v].is_empty() {
                    return Err(EmbedError::InconsistentRotation(format!(
                        "absent vertex {v} has neighbours"
                    )));
                }
                continue;
            }
            let mut seen = BTreeSet::new();
            for &w in &self.rotation[v] {
                if w >= n || !self.present[w] {
                    return Err(EmbedError::InconsistentRotation(format!(
                        "vertex {v} lists unknown neighbour {w}"
                    )));
                }
                if w == v {
                    return Err(EmbedError::InconsistentRotation(format!("loop at {v}")));
                }
                if !seen.insert(w) {
                    return Err(EmbedError::InconsistentRotation(format!(
                        "edge {v}-{w} appears twice in the rotation of {v}"
                    )));
                }
                if self.rotation[w].iter().filter(|&&z| z == v).count() != 1 {
                    return Err(EmbedError::InconsistentRotation(format!(
                        "edge {v}-{w} missing from the rotation of {w}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn locate_outer(&self, walk: &[Vertex]) -> Result<Option<Dart>, EmbedError> {
        if self.edge_count() == 0 {
            return Ok(None);
        }
        if walk.len() < 2 {
            return Err(EmbedError::OuterNotFace(walk.to_vec()));
        }
        let m = walk.len();
        let candidates = [(walk[0], walk[1]), (walk[0], walk[m - 1])];
        for (i, &(u, v)) in candidates.iter().enumerate() {
            if !self.has_edge(u, v) {
                continue;
            }
            let traced: Vec<Vertex> = self.trace_from((u, v)).iter().map(|d| d.0).collect();
            let expected: Vec<Vertex> = if i == 0 {
                walk.to_vec()
            } else {
                std::iter::once(walk[0]).chain(walk[1..].iter().rev().copied()).collect()
            };
            if traced == expected {
                return Ok(Some((u, v)));
            }
        }
        Err(EmbedError::OuterNotFace(walk.to_vec()))
    }

    pub fn vertex_bound(&self) -> usize {
        self.rotation.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.present.len() && self.present[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.rotation.len()).filter(move |&v| self.present[v])
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.rotation[u].contains(&v)
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in self.vertices() {
            for &w in &self.rotation[v] {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out
    }

    pub fn outer_dart(&self) -> Option<Dart> {
        self.outer
    }

    /// The dart following `(u, v)` along the face on its left: turn at `v`
    /// to the clockwise successor of `u`.
    pub fn next_dart(&self, (u, v): Dart) -> Dart {
        let rot = &self.rotation[v];
        let pos = rot.iter().position(|&w| w == u).expect("dart endpoint");
        (v, rot[(pos + 1) % rot.len()])
    }

    fn trace_from(&self, start: Dart) -> Vec<Dart> {
        let mut darts = vec![start];
        let mut d = self.next_dart(start);
        while d != start {
            darts.push(d);
            d = self.next_dart(d);
        }
        darts
    }

    fn all_darts(&self) -> Vec<Dart> {
        let mut out = Vec::with_capacity(2 * self.edge_count());
        for v in self.vertices() {
            for &w in &self.rotation[v] {
                out.push((v, w));
            }
        }
        out
    }

    /// Traces all faces. Exactly one face is marked unbounded.
    pub fn faces(&self) -> Vec<Face> {
        self.faces_indexed().0
    }

    /// Faces plus the face index of every dart.
    fn faces_indexed(&self) -> (Vec<Face>, HashMap<Dart, usize>) {
        let mut index = HashMap::new();
        let mut faces = Vec::new();
        if self.edge_count() == 0 {
            if let Some(v) = self.vertices().next() {
                faces.push(Face {
                    boundary: vec![v],
                    bounded: false,
                    darts: Vec::new(),
                });
            }
            return (faces, index);
        }
        for d in self.all_darts() {
            if index.contains_key(&d) {
                continue;
            }
            let darts = self.trace_from(d);
            let id = faces.len();
            for &e in &darts {
                index.insert(e, id);
            }
            let walk: Vec<Vertex> = darts.iter().map(|x| x.0).collect();
            faces.push(Face {
                boundary: canonical_walk(&walk),
                bounded: true,
                darts,
            });
        }
        if let Some(o) = self.outer {
            let id = index[&o];
            faces[id].bounded = false;
            // Keep the stored dart order starting at the outer dart.
            let darts = self.trace_from(o);
            faces[id].darts = darts;
        }
        (faces, index)
    }

    pub fn outer_face(&self) -> Face {
        match self.outer {
            Some(o) => {
                let darts = self.trace_from(o);
                let walk: Vec<Vertex> = darts.iter().map(|d| d.0).collect();
                Face {
                    boundary: canonical_walk(&walk),
                    bounded: false,
                    darts,
                }
            }
            None => Face {
                boundary: self.vertices().take(1).collect(),
                bounded: false,
                darts: Vec::new(),
            },
        }
    }

    /// Outer boundary walk in traced order, starting at the tail of the outer dart.
    pub fn outer_walk(&self) -> Vec<Vertex> {
        self.outer_face().walk()
    }

    /// Vertices and edges on the outer face boundary.
    pub fn classify_external(&self) -> (BTreeSet<Vertex>, BTreeSet<Edge>) {
        let f = self.outer_face();
        let verts = f.walk().into_iter().collect();
        let edges = f.darts.iter().map(|&(a, b)| edge(a, b)).collect();
        (verts, edges)
    }

    pub fn external_vertices(&self) -> BTreeSet<Vertex> {
        self.classify_external().0
    }

    pub fn is_external_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.classify_external().1.contains(&edge(u, v))
    }

    /// `(all bounded faces even, odd bounded faces)`.
    pub fn face_parities(&self) -> (bool, Vec<Face>) {
        let odd: Vec<Face> = self
            .faces()
            .into_iter()
            .filter(|f| f.bounded && f.is_odd())
            .collect();
        (odd.is_empty(), odd)
    }

    pub fn is_connected(&self) -> bool {
        let mut vs = self.vertices();
        let Some(start) = vs.next() else {
            return true;
        };
        let mut seen = vec![false; self.vertex_bound()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count()
    }

    /// Proper 2-colouring if one exists (absent vertices get `None`).
    pub fn two_coloring(&self) -> Option<Vec<Option<u8>>> {
        let mut color = vec![None; self.vertex_bound()];
        for s in self.vertices() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(0u8);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let c = color[v].unwrap();
                for &w in &self.rotation[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - c);
                            stack.push(w);
                        }
                        Some(cw) if cw == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Restriction of the embedding to the given vertices and edges. The
    /// outer face of the result is the face containing the outer face of
    /// `self`.
    pub fn subgraph<I, J>(&self, vertices: I, edges: J) -> PlaneGraph
    where
        I: IntoIterator<Item = Vertex>,
        J: IntoIterator<Item = Edge>,
    {
        let n = self.vertex_bound();
        let mut present = vec![false; n];
        for v in vertices {
            debug_assert!(self.contains(v));
            present[v] = true;
        }
        let mut keep: BTreeSet<Edge> = BTreeSet::new();
        for (a, b) in edges {
            let e = edge(a, b);
            debug_assert!(self.has_edge(e.0, e.1), "edge {e:?} not in host");
            present[e.0] = true;
            present[e.1] = true;
            keep.insert(e);
        }
        let rotation: Vec<Vec<Vertex>> = (0..n)
            .map(|v| {
                if !present[v] {
                    return Vec::new();
                }
                self.rotation[v]
                    .iter()
                    .copied()
                    .filter(|&w| keep.contains(&edge(v, w)))
                    .collect()
            })
            .collect();
        let outer = self.sub_outer_dart(&keep, &rotation, &present);
        PlaneGraph {
            rotation,
            present,
            outer,
        }
    }

    fn sub_outer_dart(
        &self,
        keep: &BTreeSet<Edge>,
        rotation: &[Vec<Vertex>],
        present: &[bool],
    ) -> Option<Dart> {
        if keep.is_empty() {
            return None;
        }
        let host_outer = self.outer?;
        let (faces, index) = self.faces_indexed();
        let mut uf = UnionFind::new(faces.len());
        for (u, v) in self.edges() {
            if !keep.contains(&(u, v)) {
                uf.union(index[&(u, v)], index[&(v, u)]);
            }
        }
        let outer_class = uf.find(index[&host_outer]);
        for v in 0..rotation.len() {
            if !present[v] {
                continue;
            }
            for &w in &rotation[v] {
                if uf.find(index[&(v, w)]) == outer_class {
                    return Some((v, w));
                }
            }
        }
        None
    }

    pub fn induced<I: IntoIterator<Item = Vertex>>(&self, vertices: I) -> PlaneGraph {
        let set: BTreeSet<Vertex> = vertices.into_iter().collect();
        let edges: Vec<Edge> = self
            .edges()
            .into_iter()
            .filter(|(a, b)| set.contains(a) && set.contains(b))
            .collect();
        self.subgraph(set, edges)
    }

    pub fn remove_vertices(&self, removed: &[Vertex]) -> PlaneGraph {
        self.induced(self.vertices().filter(|v| !removed.contains(v)))
    }

    /// The cycle `cycle` together with everything embedded inside it.
    pub fn bounded_subgraph(&self, cycle: &[Vertex]) -> Result<PlaneGraph, EmbedError> {
        let k = cycle.len();
        let distinct: BTreeSet<Vertex> = cycle.iter().copied().collect();
        if k < 3
            || distinct.len() != k
            || (0..k).any(|i| !self.has_edge(cycle[i], cycle[(i + 1) % k]))
        {
            return Err(EmbedError::NotACycle(cycle.to_vec()));
        }
        let Some(host_outer) = self.outer else {
            return Err(EmbedError::NotACycle(cycle.to_vec()));
        };
        let cyc_edges: BTreeSet<Edge> = (0..k).map(|i| edge(cycle[i], cycle[(i + 1) % k])).collect();
        let (faces, index) = self.faces_indexed();
        let mut uf = UnionFind::new(faces.len());
        for (u, v) in self.edges() {
            if !cyc_edges.contains(&(u, v)) {
                uf.union(index[&(u, v)], index[&(v, u)]);
            }
        }
        let outer_class = uf.find(index[&host_outer]);
        let mut keep = cyc_edges.clone();
        for (u, v) in self.edges() {
            let inside = uf.find(index[&(u, v)]) != outer_class
                || uf.find(index[&(v, u)]) != outer_class;
            if inside {
                keep.insert((u, v));
            }
        }
        Ok(self.subgraph(distinct, keep))
    }

    /// Simple cycles that bound a single bounded face, in traced order.
    pub fn bounded_face_cycles(&self) -> Vec<Vec<Vertex>> {
        self.faces()
            .into_iter()
            .filter(|f| f.bounded)
            .map(|f| f.walk())
            .filter(|w| w.iter().collect::<BTreeSet<_>>().len() == w.len() && w.len() >= 3)
            .collect()
    }

    /// The same embedding with every rotation reversed (mirror image).
    pub fn mirrored(&self) -> PlaneGraph {
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        PlaneGraph {
            rotation,
            present: self.present.clone(),
            outer: self.outer.map(|(u, v)| (v, u)),
        }
    }

    pub fn rotation(&self) -> &[Vec<Vertex>] {
        &self.rotation
    }

    /// Parse the line-oriented `.pgr` format.
    pub fn parse_pgr(text: &str) -> Result<PlaneGraph, ParseError> {
        parse_pgr(text)
    }

    /// Serialize to `.pgr`. Absent vertices are written with empty
    /// neighbour lists.
    pub fn to_pgr(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.vertex_bound());
        for v in 0..self.vertex_bound() {
            let _ = write!(s, "{v}:");
            for w in &self.rotation[v] {
                let _ = write!(s, " {w}");
            }
            s.push('\n');
        }
        s.push_str("outer:");
        for v in self.outer_walk_from_min() {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
        s
    }

    /// Outer walk rotated to start at its smallest vertex, keeping the
    /// traced direction.
    pub fn outer_walk_from_min(&self) -> Vec<Vertex> {
        let walk = self.outer_walk();
        if walk.is_empty() {
            return walk;
        }
        let (start, _) = walk.iter().enumerate().min_by_key(|(_, &v)| v).unwrap();
        (0..walk.len()).map(|i| walk[(start + i) % walk.len()]).collect()
    }
}

fn parse_pgr(text: &str) -> Result<PlaneGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let (ln, first) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty input"))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| ParseError::new(ln, col_of(first, first.trim()), "expected vertex count"))?;
    let mut rotation: Vec<Option<Vec<Vertex>>> = vec![None; n];
    for _ in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| ParseError::new(ln, 1, format!("expected {n} rotation lines")))?;
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `v: neighbours`"))?;
        let v: usize = head
            .trim()
            .parse()
            .map_err(|_| ParseError::new(ln, col_of(line, head.trim()), "bad vertex id"))?;
        if v >= n {
            return Err(ParseError::new(ln, col_of(line, head.trim()), format!("vertex {v} out of range")));
        }
        if rotation[v].is_some() {
            return Err(ParseError::new(ln, col_of(line, head.trim()), format!("vertex {v} listed twice")));
        }
        let mut nbrs = Vec::new();
        for tok in rest.split_whitespace() {
            let w: usize = tok
                .parse()
                .map_err(|_| ParseError::new(ln, col_of(line, tok), format!("bad neighbour `{tok}`")))?;
            if w >= n {
                return Err(ParseError::new(ln, col_of(line, tok), format!("neighbour {w} out of range")));
            }
            nbrs.push(w);
        }
        rotation[v] = Some(nbrs);
    }
    let (ln, line) = lines
        .next()
        .ok_or_else(|| ParseError::new(ln, 1, "missing `outer:` line"))?;
    let rest = line
        .trim_start()
        .strip_prefix("outer:")
        .ok_or_else(|| ParseError::new(ln, 1, "expected `outer:` line"))?;
    let mut outer = Vec::new();
    for tok in rest.split_whitespace() {
        let w: usize = tok
            .parse()
            .map_err(|_| ParseError::new(ln, col_of(line, tok), format!("bad vertex `{tok}`")))?;
        outer.push(w);
    }
    if let Some((ln, line)) = lines.next() {
        return Err(ParseError::new(ln, col_of(line, line.trim()), "trailing content"));
    }
    let rotation: Vec<Vec<Vertex>> = rotation.into_iter().map(|r| r.unwrap()).collect();
    PlaneGraph::new(rotation, &outer).map_err(|e| ParseError::new(ln, 1, e.to_string()))
}

fn col_of(line: &str, token: &str) -> usize {
    let base = line.as_ptr() as usize;
    let t = token.as_ptr() as usize;
    if t >= base && t <= base + line.len() {
        t - base + 1
    } else {
        1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Path `x → y` along a closed walk (the outer cycle), in walk direction.
pub fn cycle_arc(cycle: &[Vertex], x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
    let n = cycle.len();
    let i = cycle.iter().position(|&v| v == x)?;
    let mut out = vec![x];
    let mut j = i;
    while cycle[j] != y {
        j = (j + 1) % n;
        out.push(cycle[j]);
        if j == i {
            return None;
        }
    }
    Some(out)
}
