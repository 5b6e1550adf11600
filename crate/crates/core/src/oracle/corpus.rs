//! Test corpora of plane graphs.
//!
//! Two families are produced from one seed:
//!
//! * `poly`: 3-connected plane graphs of minimum degree 4, found by a
//!   random walk over 3-connected plane graphs starting from the
//!   octahedron, antiprisms and bipyramids. Steps are vertex splits,
//!   diagonal insertion, a new vertex inside a face and edge deletion.
//!   Graphs are deduplicated up to isomorphism and reflection.
//! * `circ`: circuit graphs, namely every `poly` graph with each face as
//!   the outer face, every `poly` graph minus one vertex, cycles, random
//!   chorded cycles, grids, ladders, circular ladders and a few hubs.
//!   They are deduplicated up to isomorphism that maps outer face to outer
//!   face.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cactus::{Cactus, CactusBlock};
use crate::embed::{PlaneGraph, Vertex};
use crate::error::{OracleError, ParseError};
use crate::fixtures;
use crate::oracle::canonical::canonical_code;
use crate::oracle::planar_code::read_planar_code;
use crate::structure::{is_three_connected, CircuitGraph};

/// Largest vertex count the generator accepts.
pub const CORPUS_MAX_N: usize = 14;

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub max_n: usize,
    pub seed: u64,
    /// Random-walk steps.
    pub rounds: usize,
    /// Upper bound on the number of entries.
    pub max_entries: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            max_n: 11,
            seed: 0x5eed,
            rounds: 20_000,
            max_entries: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Poly,
    Circ,
}

impl Family {
    fn tag(self) -> &'static str {
        match self {
            Family::Poly => "poly",
            Family::Circ => "circ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meta {
    pub id: String,
    pub family: Family,
    pub source: String,
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub three_connected: bool,
    pub circuit: bool,
    pub bipartite: bool,
    /// Circuit graph whose internal vertices all have degree at least 4.
    pub internal_degree_4: bool,
}

impl Meta {
    fn line(&self) -> String {
        let b = |x: bool| u8::from(x);
        format!(
            "{} n={} m={} min_degree={} three_connected={} circuit={} bipartite={} internal_degree_4={} source={}",
            self.id,
            self.n,
            self.m,
            self.min_degree,
            b(self.three_connected),
            b(self.circuit),
            b(self.bipartite),
            b(self.internal_degree_4),
            self.source
        )
    }
}

/// Computes every metadata field except `id`, `family` and `source`.
pub fn metadata(g: &PlaneGraph) -> Meta {
    let circuit = CircuitGraph::new(g.clone()).ok();
    Meta {
        id: String::new(),
        family: Family::Circ,
        source: String::new(),
        n: g.vertex_count(),
        m: g.edge_count(),
        min_degree: g.vertices().map(|v| g.degree(v)).min().unwrap_or(0),
        three_connected: is_three_connected(g).unwrap_or(false),
        circuit: circuit.is_some(),
        bipartite: g.is_bipartite(),
        internal_degree_4: circuit.is_some_and(|c| c.internal_degrees_at_least_four()),
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub graph: PlaneGraph,
    pub meta: Meta,
}

/// Predicates for [`Corpus::select`]; `None` means "either".
#[derive(Clone, Debug, Default)]
pub struct Filter {
    pub family: Option<Family>,
    pub max_n: Option<usize>,
    pub min_degree: Option<usize>,
    pub three_connected: Option<bool>,
    pub circuit: Option<bool>,
    pub bipartite: Option<bool>,
    pub internal_degree_4: Option<bool>,
}

impl Filter {
    pub fn accepts(&self, m: &Meta) -> bool {
        let eq = |want: Option<bool>, have: bool| want.is_none_or(|w| w == have);
        self.family.is_none_or(|f| f == m.family)
            && self.max_n.is_none_or(|k| m.n <= k)
            && self.min_degree.is_none_or(|d| m.min_degree >= d)
            && eq(self.three_connected, m.three_connected)
            && eq(self.circuit, m.circuit)
            && eq(self.bipartite, m.bipartite)
            && eq(self.internal_degree_4, m.internal_degree_4)
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub seed: u64,
    pub entries: Vec<Entry>,
}

impl Corpus {
    pub fn select<'a>(&'a self, f: &'a Filter) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| f.accepts(&e.meta))
    }

    /// One header line, then one line per entry.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# prismcactus corpus seed={} entries={}", self.seed, self.entries.len());
        for e in &self.entries {
            let _ = writeln!(s, "{}", e.meta.line());
        }
        s
    }

    /// Writes `manifest.txt` and one `<id>.pgr` per entry.
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("manifest.txt"), self.manifest())?;
        for e in &self.entries {
            std::fs::write(dir.join(format!("{}.pgr", e.meta.id)), e.graph.to_pgr())?;
        }
        Ok(())
    }

    /// Reads a directory written by [`Corpus::write_dir`] and checks every
    /// manifest line against the recomputed metadata.
    pub fn read_dir(dir: &Path) -> Result<Corpus, OracleError> {
        let io = |e: std::io::Error| OracleError::Parse(ParseError::new(0, 0, e.to_string()));
        let text = std::fs::read_to_string(dir.join("manifest.txt")).map_err(io)?;
        let mut seed = 0;
        let mut entries = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if let Some(h) = line.strip_prefix('#') {
                if let Some(s) = h.split_whitespace().find_map(|t| t.strip_prefix("seed=")) {
                    seed = s.parse().map_err(|_| ParseError::new(ln + 1, 1, "bad seed"))?;
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let id = line.split_whitespace().next().unwrap();
            let g = PlaneGraph::parse_pgr(&std::fs::read_to_string(dir.join(format!("{id}.pgr"))).map_err(io)?)?;
            let family = if id.starts_with("poly") { Family::Poly } else { Family::Circ };
            let source = line.rsplit_once("source=").map(|(_, s)| s.to_string()).unwrap_or_default();
            let meta = Meta {
                id: id.to_string(),
                family,
                source,
                ..metadata(&g)
            };
            if meta.line() != line {
                return Err(ParseError::new(ln + 1, 1, format!("manifest line disagrees with the graph: expected `{}`", meta.line())).into());
            }
            entries.push(Entry { graph: g, meta });
        }
        Ok(Corpus { seed, entries })
    }
}

/// Decodes a `planar_code` stream into entries of the given family.
pub fn ingest_planar_code(bytes: &[u8], family: Family, source: &str) -> Result<Vec<Entry>, OracleError> {
    let graphs = read_planar_code(bytes)?;
    Ok(graphs
        .into_iter()
        .enumerate()
        .map(|(i, g)| {
            let meta = Meta {
                id: format!("{}-{:02}-ext{:04}", family.tag(), g.vertex_count(), i),
                family,
                source: source.to_string(),
                ..metadata(&g)
            };
            Entry { graph: g, meta }
        })
        .collect())
}

/// Relabels present vertices to `0..k`, keeping rotation and outer face.
pub fn compact(g: &PlaneGraph) -> PlaneGraph {
    let mut id = vec![usize::MAX; g.vertex_bound()];
    for (i, v) in g.vertices().enumerate() {
        id[v] = i;
    }
    let rot: Vec<Vec<Vertex>> = g.vertices().map(|v| g.neighbors(v).iter().map(|&w| id[w]).collect()).collect();
    let k = rot.len();
    let outer = g.outer_dart().map(|(u, v)| (id[u], id[v]));
    PlaneGraph::from_parts(rot, vec![true; k], outer).expect("relabelling keeps the rotation valid")
}

/// The same embedding with the face of `dart` as the outer face.
fn rerooted(g: &PlaneGraph, dart: (Vertex, Vertex)) -> PlaneGraph {
    PlaneGraph::from_parts(g.rotation().to_vec(), vec![true; g.vertex_bound()], Some(dart)).unwrap()
}

/// Builds a graph from a rotation table if it is a connected plane
/// embedding (Euler's formula holds).
fn planar(rot: Vec<Vec<Vertex>>) -> Option<PlaneGraph> {
    let n = rot.len();
    let first = (0, *rot.first()?.first()?);
    let g = PlaneGraph::from_parts(rot, vec![true; n], Some(first)).ok()?;
    (g.is_connected() && n + g.faces().len() == g.edge_count() + 2).then_some(g)
}

fn replace(list: &mut [Vertex], old: Vertex, new: Vertex) {
    for w in list.iter_mut() {
        if *w == old {
            *w = new;
        }
    }
}

fn insert_after(list: &mut Vec<Vertex>, after: Vertex, new: Vertex) {
    let i = list.iter().position(|&w| w == after).unwrap();
    list.insert(i + 1, new);
}

/// Splits `v` into `v` and a new vertex taking a run of `len` consecutive
/// neighbours starting at rotation index `i`.
fn split(g: &PlaneGraph, v: Vertex, i: usize, len: usize) -> Option<PlaneGraph> {
    let mut rot = g.rotation().to_vec();
    let ring = rot[v].clone();
    let d = ring.len();
    let w = rot.len();
    let moved: Vec<Vertex> = (0..len).map(|k| ring[(i + k) % d]).collect();
    let kept: Vec<Vertex> = (len..d).map(|k| ring[(i + k) % d]).collect();
    for &z in &moved {
        replace(&mut rot[z], v, w);
    }
    rot[v] = kept;
    rot[v].push(w);
    let mut new = moved;
    new.push(v);
    rot.push(new);
    planar(rot)
}

/// Joins corners `a` and `b` of one face; `ap`/`bp` precede them on the
/// face walk.
fn diagonal(g: &PlaneGraph, (ap, a): (Vertex, Vertex), (bp, b): (Vertex, Vertex)) -> Option<PlaneGraph> {
    if a == b || g.has_edge(a, b) {
        return None;
    }
    let mut rot = g.rotation().to_vec();
    insert_after(&mut rot[a], ap, b);
    insert_after(&mut rot[b], bp, a);
    planar(rot)
}

/// Puts a new vertex inside the face traced from `walk` and joins it to
/// every corner.
fn stellate(g: &PlaneGraph, walk: &[Vertex]) -> Option<PlaneGraph> {
    let k = walk.len();
    if walk.iter().collect::<HashSet<_>>().len() != k {
        return None;
    }
    let w = g.vertex_bound();
    let mut rot = g.rotation().to_vec();
    for i in 0..k {
        insert_after(&mut rot[walk[i]], walk[(i + k - 1) % k], w);
    }
    for order in [walk.to_vec(), walk.iter().rev().copied().collect()] {
        let mut r = rot.clone();
        r.push(order);
        if let Some(h) = planar(r) {
            return Some(h);
        }
    }
    None
}

fn delete_edge(g: &PlaneGraph, u: Vertex, v: Vertex) -> Option<PlaneGraph> {
    let mut rot = g.rotation().to_vec();
    rot[u].retain(|&w| w != v);
    rot[v].retain(|&w| w != u);
    planar(rot)
}

/// One random step of the walk.
fn random_step(g: &PlaneGraph, rng: &mut ChaCha8Rng) -> Option<PlaneGraph> {
    let n = g.vertex_count();
    match rng.gen_range(0..4) {
        0 => {
            let v = rng.gen_range(0..n);
            let d = g.degree(v);
            if d < 4 {
                return None;
            }
            split(g, v, rng.gen_range(0..d), rng.gen_range(2..=d - 2))
        }
        1 | 2 => {
            let faces: Vec<Vec<Vertex>> = g.faces().iter().filter(|f| f.degree() >= 4).map(|f| f.walk()).collect();
            let walk = faces.choose(rng)?;
            let k = walk.len();
            if rng.gen_bool(0.5) {
                let i = rng.gen_range(0..k);
                let j = (i + rng.gen_range(2..=k - 2)) % k;
                diagonal(g, (walk[(i + k - 1) % k], walk[i]), (walk[(j + k - 1) % k], walk[j]))
            } else {
                stellate(g, walk)
            }
        }
        _ => {
            let edges = g.edges();
            let &(u, v) = edges.choose(rng)?;
            delete_edge(g, u, v)
        }
    }
}

fn seeds(max_n: usize) -> Vec<(PlaneGraph, &'static str)> {
    let mut out = vec![(fixtures::octahedron(), "octahedron")];
    out.extend((4..=max_n / 2).map(|k| (compact(&fixtures::antiprism(k)), "antiprism")));
    out.extend((5..=max_n.saturating_sub(2)).map(|k| (compact(&fixtures::bipyramid(k)), "bipyramid")));
    out.retain(|(g, _)| g.vertex_count() <= max_n);
    out
}

struct Collector {
    max_n: usize,
    max_entries: usize,
    seen: HashSet<Vec<u32>>,
    found: Vec<(Family, Vec<u32>, PlaneGraph, String)>,
}

impl Collector {
    fn offer(&mut self, family: Family, g: PlaneGraph, source: &str) -> Result<bool, OracleError> {
        if g.vertex_count() > self.max_n {
            return Ok(false);
        }
        let mut code = canonical_code(&g, family == Family::Circ);
        code.insert(0, family as u32);
        if !self.seen.insert(code.clone()) {
            return Ok(false);
        }
        if self.found.len() >= self.max_entries {
            return Err(OracleError::LimitExceeded(format!("more than {} corpus entries", self.max_entries)));
        }
        self.found.push((family, code, g, source.to_string()));
        Ok(true)
    }
}

/// Generates the corpus described in the module notes.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus, OracleError> {
    if spec.max_n > CORPUS_MAX_N {
        return Err(OracleError::LimitExceeded(format!("max_n {} exceeds {CORPUS_MAX_N}", spec.max_n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut col = Collector {
        max_n: spec.max_n,
        max_entries: spec.max_entries,
        seen: HashSet::new(),
        found: Vec::new(),
    };

    // the 3-connected walk; only graphs of minimum degree 4 enter the
    // corpus, and they are picked as parents half of the time so the sparse
    // majority of the pool does not crowd them out
    let mut pool: Vec<PlaneGraph> = Vec::new();
    let mut pool_seen: HashSet<Vec<u32>> = HashSet::new();
    let mut rich: Vec<usize> = Vec::new();
    let mut admit = |h: PlaneGraph, src: &str, pool: &mut Vec<PlaneGraph>, rich: &mut Vec<usize>, col: &mut Collector| -> Result<(), OracleError> {
        if !pool_seen.insert(canonical_code(&h, false)) {
            return Ok(());
        }
        if h.vertices().all(|v| h.degree(v) >= 4) {
            rich.push(pool.len());
            col.offer(Family::Poly, h.clone(), src)?;
        }
        pool.push(h);
        Ok(())
    };
    for (g, src) in seeds(spec.max_n) {
        admit(g, src, &mut pool, &mut rich, &mut col)?;
    }
    for _ in 0..spec.rounds {
        if pool.is_empty() {
            break;
        }
        let parent = if !rich.is_empty() && rng.gen_bool(0.5) { rich[rng.gen_range(0..rich.len())] } else { rng.gen_range(0..pool.len()) };
        let Some(h) = random_step(&pool[parent], &mut rng) else { continue };
        if h.vertex_count() > spec.max_n || h.vertices().any(|v| h.degree(v) < 3) || !is_three_connected(&h).unwrap_or(false) {
            continue;
        }
        admit(h, "walk", &mut pool, &mut rich, &mut col)?;
    }

    // circuit graphs derived from the corpus part of the walk
    for &i in &rich {
        let g = &pool[i];
        for f in g.faces() {
            col.offer(Family::Circ, rerooted(g, f.darts()[0]), "reroot")?;
        }
        for v in g.vertices() {
            let h = g.remove_vertices(&[v]);
            let nbrs = g.neighbors(v);
            if let Some(f) = h.faces().into_iter().find(|f| nbrs.iter().all(|&w| f.contains_vertex(w))) {
                let h = compact(&PlaneGraph::from_parts(h.rotation().to_vec(), (0..h.vertex_bound()).map(|w| h.contains(w)).collect(), Some(f.darts()[0])).unwrap());
                if CircuitGraph::new(h.clone()).is_ok() {
                    col.offer(Family::Circ, h, "delete")?;
                }
            }
        }
    }

    // fixtures and chorded cycles
    let mut fixed: Vec<(PlaneGraph, &str)> = Vec::new();
    for k in 3..=spec.max_n {
        fixed.push((fixtures::cycle(k), "cycle"));
    }
    for k in 2..=spec.max_n / 2 {
        fixed.push((fixtures::ladder(k), "ladder"));
    }
    fixed.push((fixtures::cube(), "cube"));
    for k in 3..=spec.max_n / 2 {
        fixed.push((fixtures::circular_ladder(k), "circular-ladder"));
    }
    for (r, c) in [(3, 3), (3, 4), (4, 4)] {
        fixed.push((fixtures::grid(r, c), "grid"));
    }
    fixed.push((fixtures::hub(8, &[0, 2, 4, 6]), "hub"));
    fixed.push((fixtures::hub(10, &[0, 2, 4, 6, 8]), "hub"));
    fixed.push((fixtures::hub(6, &[0, 1, 2, 3]), "hub"));
    for (g, src) in fixed {
        col.offer(Family::Circ, compact(&g), src)?;
    }
    for _ in 0..spec.rounds / 20 {
        let n = rng.gen_range(4..=spec.max_n.max(4));
        let even = rng.gen_bool(0.5);
        let chords = random_chords(n, even, &mut rng);
        col.offer(Family::Circ, fixtures::cycle_with_chords(n, &chords), if even { "chords-even" } else { "chords" })?;
    }

    col.found.sort_by(|a, b| (a.0, a.2.vertex_count(), &a.1).cmp(&(b.0, b.2.vertex_count(), &b.1)));
    let mut counter: BTreeMap<(Family, usize), usize> = BTreeMap::new();
    let entries = col
        .found
        .into_iter()
        .map(|(family, _, g, source)| {
            let k = counter.entry((family, g.vertex_count())).or_default();
            let meta = Meta {
                id: format!("{}-{:02}-{:04}", family.tag(), g.vertex_count(), k),
                family,
                source,
                ..metadata(&g)
            };
            *k += 1;
            Entry { graph: g, meta }
        })
        .collect();
    Ok(Corpus { seed: spec.seed, entries })
}

/// Non-crossing chords of the cycle `0..n`; with `odd_only` every chord
/// joins vertices at odd distance, so all faces stay even.
fn random_chords(n: usize, odd_only: bool, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut chords: Vec<(Vertex, Vertex)> = Vec::new();
    for _ in 0..n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (a, b) = (a.min(b), a.max(b));
        if b - a < 2 || (a == 0 && b == n - 1) || (odd_only && (b - a) % 2 == 0) {
            continue;
        }
        let crosses = chords.iter().any(|&(c, d)| (a < c && c < b && b < d) || (c < a && a < d && d < b));
        if !crosses && !chords.contains(&(a, b)) {
            chords.push((a, b));
        }
    }
    chords
}

/// A random bipartite cactus on exactly `n ≥ 2` vertices: K₂ blocks and
/// even cycles of length 4, 6 or 8, each vertex in at most two blocks.
pub fn random_bipartite_cactus(n: usize, rng: &mut ChaCha8Rng) -> Cactus {
    let mut blocks = Vec::new();
    let mut load = vec![0u8];
    let mut open: Vec<Vertex> = vec![0];
    while load.len() < n {
        let slot = rng.gen_range(0..open.len());
        let at = open[slot];
        let room = n - load.len();
        let size = **[2usize, 4, 6, 8].iter().filter(|&&s| s - 1 <= room).collect::<Vec<_>>().choose(rng).unwrap();
        let fresh: Vec<Vertex> = (load.len()..load.len() + size - 1).collect();
        load.extend(std::iter::repeat_n(1, fresh.len()));
        open.extend(&fresh);
        load[at] += 1;
        if load[at] == 2 {
            open.swap_remove(slot);
        }
        let mut cyc = vec![at];
        cyc.extend(&fresh);
        blocks.push(if size == 2 { CactusBlock::Edge(at, fresh[0]) } else { CactusBlock::Cycle(cyc) });
    }
    Cactus::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Corpus {
        generate_corpus(&CorpusSpec { max_n: 8, rounds: 3000, ..CorpusSpec::default() }).unwrap()
    }

    #[test]
    fn octahedron_is_the_only_six_vertex_graph_of_minimum_degree_four() {
        let c = small();
        let f = Filter { family: Some(Family::Poly), min_degree: Some(4), ..Filter::default() };
        let six: Vec<_> = c.select(&f).filter(|e| e.meta.n == 6).collect();
        assert_eq!(six.len(), 1);
        assert_eq!(canonical_code(&six[0].graph, false), canonical_code(&fixtures::octahedron(), false));
        assert_eq!(c.select(&f).filter(|e| e.meta.n <= 5).count(), 0);
    }

    #[test]
    fn metadata_matches_predicates() {
        for e in &small().entries {
            assert_eq!(metadata(&e.graph), Meta { id: String::new(), family: Family::Circ, source: String::new(), ..e.meta.clone() });
            match e.meta.family {
                Family::Poly => assert!(e.meta.three_connected),
                Family::Circ => assert!(e.meta.circuit, "{}", e.meta.id),
            }
        }
    }

    #[test]
    fn same_seed_same_manifest() {
        assert_eq!(small().manifest(), small().manifest());
    }

    #[test]
    fn limits() {
        assert!(matches!(generate_corpus(&CorpusSpec { max_n: 40, ..CorpusSpec::default() }), Err(OracleError::LimitExceeded(_))));
        assert!(matches!(
            generate_corpus(&CorpusSpec { max_n: 8, max_entries: 3, ..CorpusSpec::default() }),
            Err(OracleError::LimitExceeded(_))
        ));
    }

    #[test]
    fn random_cactus_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 3, 7, 50] {
            let t = random_bipartite_cactus(n, &mut rng);
            assert_eq!(t.vertices().len(), n);
            assert!(t.is_bipartite());
            assert!(t.incidence().values().all(|b| b.len() <= 2));
        }
    }
}
