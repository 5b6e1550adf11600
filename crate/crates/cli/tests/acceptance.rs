//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from the exhaustive oracles and from the
//! small checkers below, never from the constructive code.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use prism_cactus::cactus::Cactus;
use prism_cactus::chains::{
    choose_q, cycle_chains_bip, cycle_chains_nonbip, set_chains_bip, set_chains_nonbip, set_chains_parity_bxbip, set_chains_xyxy,
    ParityRequest, Recorder,
};
use prism_cactus::goodness::{is_bad, validate_cycle_set_of_chains, validate_set_of_chains, SetOfChains};
use prism_cactus::oracle::brute_chains::{brute_cycle_set_of_chains, brute_set_of_chains, SearchLimits};
use prism_cactus::oracle::brute_prism::brute_hamilton_prism;
use prism_cactus::oracle::corpus::{generate_corpus, random_bipartite_cactus, Corpus, CorpusSpec, Entry, Family, Filter};
use prism_cactus::prism::prism_hamilton_from_cactus;
use prism_cactus::structure::CircuitGraph;
use prism_cactus::{fixtures, par, ChainsError, Edge, PlaneGraph, Vertex};
use prism_cactus_cli::{cmd_prism_ham, Options, RunReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

struct Outcome {
    pass: bool,
    summary: String,
}

fn report(id: usize, name: &str, o: &Outcome) {
    println!("criterion {id} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
}

// ---- independent checkers ----

fn edge(u: Vertex, v: Vertex) -> Edge {
    (u.min(v), u.max(v))
}

/// Parses `v/a v/b …` and checks it is a Hamilton cycle of the prism over
/// the graph with the given vertices and edges; returns its vertical edges.
fn prism_cycle_verticals(vertices: &BTreeSet<Vertex>, edges: &BTreeSet<Edge>, text: &str) -> Result<BTreeSet<Vertex>, String> {
    let steps: Vec<(Vertex, char)> = text
        .split_whitespace()
        .map(|t| {
            let (v, l) = t.split_once('/').ok_or(format!("token {t}"))?;
            Ok((v.parse().map_err(|_| format!("token {t}"))?, l.chars().next().ok_or(format!("token {t}"))?))
        })
        .collect::<Result<_, String>>()?;
    let distinct: BTreeSet<(Vertex, char)> = steps.iter().copied().collect();
    let expected: BTreeSet<(Vertex, char)> = vertices.iter().flat_map(|&v| [(v, 'a'), (v, 'b')]).collect();
    if distinct != expected || steps.len() != expected.len() {
        return Err(format!("{} steps do not visit each of the {} prism vertices once", steps.len(), expected.len()));
    }
    let mut vertical = BTreeSet::new();
    for i in 0..steps.len() {
        let (p, q) = (steps[i], steps[(i + 1) % steps.len()]);
        if p.0 == q.0 {
            vertical.insert(p.0);
        } else if p.1 != q.1 || !edges.contains(&edge(p.0, q.0)) {
            return Err(format!("{}/{} and {}/{} are not adjacent", p.0, p.1, q.0, q.1));
        }
    }
    Ok(vertical)
}

fn graph_sets(g: &PlaneGraph) -> (BTreeSet<Vertex>, BTreeSet<Edge>) {
    (g.vertices().collect(), g.edges().into_iter().map(|(u, v)| edge(u, v)).collect())
}

fn corpus() -> Corpus {
    generate_corpus(&CorpusSpec { seed: SEED, ..CorpusSpec::default() }).expect("corpus generation")
}

// ---- criteria ----

fn criterion_1(c: &Corpus, dir: &Path, t0: Instant, branches: &mut BTreeMap<String, usize>) -> Outcome {
    let f = Filter { three_connected: Some(true), min_degree: Some(4), max_n: Some(11), ..Filter::default() };
    let mut graphs: Vec<(String, PlaneGraph)> = c.select(&f).map(|e| (e.meta.id.clone(), e.graph.clone())).collect();
    graphs.push(("octahedron".into(), fixtures::octahedron()));
    let results = par::map(&graphs, |(id, g)| {
        let p = dir.join(format!("{id}.pgr"));
        std::fs::write(&p, g.to_pgr()).unwrap();
        let r = cmd_prism_ham(&p, &Options::default());
        let check = (|| {
            if let Some(e) = &r.error {
                return Err(e.to_string());
            }
            let text = artifact(&r, "prism.txt")?;
            let (vs, es) = graph_sets(g);
            let vert = prism_cycle_verticals(&vs, &es, text)?;
            for key in ["x", "y"] {
                let v: Vertex = r.get(key).unwrap().parse().unwrap();
                if !vert.contains(&v) {
                    return Err(format!("no vertical edge at anchor {v}"));
                }
            }
            Ok(())
        })();
        (id.clone(), check, r)
    });
    let mut failures = Vec::new();
    let mut inconsistencies = 0;
    for (id, check, r) in &results {
        for (b, n) in &r.branches {
            *branches.entry(b.name().to_string()).or_default() += n;
        }
        if matches!(r.error, Some(prism_cactus_cli::CliError::Internal { .. })) {
            inconsistencies += 1;
        }
        if let Err(e) = check {
            failures.push(format!("{id}: {e}"));
        }
    }
    let elapsed = t0.elapsed();
    let by_n = results.iter().fold(BTreeMap::new(), |mut m, (_, _, r)| {
        *m.entry(r.get("prism_length").map(|l| l.parse::<usize>().unwrap() / 2).unwrap_or(0)).or_insert(0) += 1;
        m
    });
    Outcome {
        pass: failures.is_empty() && inconsistencies == 0 && elapsed < Duration::from_secs(120) && graphs.len() > 1,
        summary: format!(
            "{} graphs (by n: {by_n:?}), {} failures, {inconsistencies} internal inconsistencies, {:.1}s including corpus generation{}",
            graphs.len(),
            failures.len(),
            elapsed.as_secs_f64(),
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    }
}

fn artifact<'a>(r: &'a RunReport, name: &str) -> Result<&'a str, String> {
    r.artifacts.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str()).ok_or(format!("no {name}"))
}

fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let sizes: Vec<usize> = (0..500).map(|i| if i == 0 { 10_000 } else { rng.gen_range(2..=10_000) }).collect();
    let cactuses: Vec<Cactus> = sizes.iter().map(|&n| random_bipartite_cactus(n, &mut rng)).collect();
    let results = par::map(&cactuses, |t| {
        let mut vs = BTreeSet::new();
        let mut es = BTreeSet::new();
        let mut blocks_at: BTreeMap<Vertex, usize> = BTreeMap::new();
        for line in t.to_text().lines().filter(|l| l.starts_with("block ")) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let ids: Vec<Vertex> = toks[2..].iter().map(|s| s.parse().unwrap()).collect();
            for &v in &ids {
                vs.insert(v);
                *blocks_at.entry(v).or_default() += 1;
            }
            let m = ids.len();
            let closing = if toks[1] == "cycle" { m } else { m - 1 };
            for i in 0..closing {
                es.insert(edge(ids[i], ids[(i + 1) % m]));
            }
        }
        let cycle = prism_hamilton_from_cactus(t).map_err(|e| e.to_string())?;
        let vert = prism_cycle_verticals(&vs, &es, &cycle.to_string())?;
        let good: Vec<Vertex> = blocks_at.iter().filter(|(_, &k)| k == 1).map(|(&v, _)| v).collect();
        match good.iter().find(|v| !vert.contains(v)) {
            Some(v) => Err(format!("good vertex {v} has no vertical edge")),
            None => Ok(vs.len()),
        }
    });
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let largest = results.iter().filter_map(|r| r.as_ref().ok()).max().copied().unwrap_or(0);
    let elapsed = t0.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(30),
        summary: format!(
            "500 cactuses, largest {largest} vertices, {} failures, {:.2}s{}",
            failures.len(),
            elapsed.as_secs_f64(),
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    }
}

fn criterion_3(c: &Corpus) -> Outcome {
    let f = Filter { circuit: Some(true), max_n: Some(10), ..Filter::default() };
    let mut graphs: Vec<(String, PlaneGraph)> = c.select(&f).map(|e| (e.meta.id.clone(), e.graph.clone())).collect();
    graphs.push(("C5".into(), fixtures::cycle(5)));
    graphs.push(("C7".into(), fixtures::cycle(7)));
    let results = par::map(&graphs, |(id, g)| {
        let b = CircuitGraph::new(g.clone()).unwrap();
        let outer = b.outer_cycle().to_vec();
        let mut triples = 0;
        let mut wrong = Vec::new();
        for (i, &x) in outer.iter().enumerate() {
            for &y in &outer[i + 1..] {
                if !is_bad(&b, x, y).unwrap().bad {
                    continue;
                }
                triples += 1;
                if brute_hamilton_prism(g, &[x, y], 12).unwrap().is_some() {
                    wrong.push(format!("{id} x={x} y={y}"));
                }
            }
        }
        (id.clone(), triples, wrong)
    });
    let total: usize = results.iter().map(|r| r.1).sum();
    let wrong: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    // every non-adjacent pair of C5 and C7 is bad and must be counted
    let odd_cycles_ok = results.iter().filter(|r| r.0 == "C5").all(|r| r.1 == 5) && results.iter().filter(|r| r.0 == "C7").all(|r| r.1 == 14);
    Outcome {
        pass: wrong.is_empty() && odd_cycles_ok && total > 0,
        summary: format!(
            "{total} bad triples over {} circuit graphs, {} with a prism cycle, C5/C7 non-adjacent pairs covered: {odd_cycles_ok}{}",
            graphs.len(),
            wrong.len(),
            wrong.first().map(|w| format!("; first {w}")).unwrap_or_default()
        ),
    }
}

fn criterion_4(c: &Corpus) -> Outcome {
    let f = Filter { circuit: Some(true), bipartite: Some(true), internal_degree_4: Some(true), ..Filter::default() };
    let mut checked = 0;
    let mut violations = Vec::new();
    for e in c.select(&f) {
        let g = &e.graph;
        let walk = g.outer_walk();
        let outer: BTreeSet<Vertex> = walk.iter().copied().collect();
        let deg2 = outer.iter().filter(|&&v| g.neighbors(v).len() == 2).count();
        checked += 1;
        if deg2 < 4 {
            violations.push(format!("{} has {deg2}", e.meta.id));
        }
    }
    Outcome {
        pass: violations.is_empty() && checked > 0,
        summary: format!("{checked} bipartite circuit graphs, {} violations{}", violations.len(), violations.first().map(|v| format!("; {v}")).unwrap_or_default()),
    }
}

/// One constructive call and its oracle verdicts.
struct Run {
    op: &'static str,
    constructive: Result<(), String>,
    brute: bool,
}

fn check_path(g: &PlaneGraph, x: Vertex, y: Vertex, marks: &[Vertex], parity: ParityRequest, r: Result<SetOfChains, ChainsError>) -> Result<(), String> {
    let s = r.map_err(|e| e.to_string())?;
    let v = validate_set_of_chains(g, x, y, marks, &s);
    if !v.ok() {
        return Err(v.reasons.join("; "));
    }
    if !parity.accepts(s.parity()) {
        return Err(format!("parity {:?} where {parity:?} was requested", s.parity()));
    }
    Ok(())
}

fn check_cycle(g: &PlaneGraph, marks: &[Vertex], r: Result<SetOfChains, ChainsError>) -> Result<(), String> {
    let s = r.map_err(|e| e.to_string())?;
    let v = validate_cycle_set_of_chains(g, marks, &s);
    if v.ok() {
        Ok(())
    } else {
        Err(v.reasons.join("; "))
    }
}


fn chain_runs(e: &Entry, rec: &mut Recorder) -> Vec<Run> {
    let b = CircuitGraph::new(e.graph.clone()).unwrap();
    let g = b.graph();
    let outer = b.outer_cycle().to_vec();
    let lim = SearchLimits::default();
    let pairs: Vec<(Vertex, Vertex)> = outer.iter().flat_map(|&x| outer.iter().filter(move |&&y| y != x).map(move |&y| (x, y))).collect();
    let mut runs = Vec::new();
    let path_witness = |x, y, marks: &[Vertex], p| brute_set_of_chains(g, x, y, marks, p, lim).unwrap().is_some();
    if b.is_bipartite() {
        let xyxy: Vec<_> = pairs.iter().filter_map(|&(x, y)| choose_q(&b, x, y, &[]).map(|q| (x, y, q))).collect();
        for (x, y, q) in xyxy {
            let r = set_chains_xyxy(&b, x, y, &q, rec);
            runs.push(Run { op: "set_chains_xyxy", constructive: check_path(g, x, y, &[x, y], ParityRequest::Any, r), brute: path_witness(x, y, &[x, y], ParityRequest::Any) });
        }
        let mut quads = Vec::new();
        for &(x, y) in &pairs {
            for &u1 in &outer {
                for &u2 in &outer {
                    if u1 <= u2 && edge(u1, u2) != edge(x, y) {
                        quads.push((x, y, u1, u2));
                    }
                }
            }
        }
        for (x, y, u1, u2) in quads {
            let r = set_chains_bip(&b, x, y, u1, u2, rec);
            runs.push(Run { op: "set_chains_bip", constructive: check_path(g, x, y, &[u1, u2], ParityRequest::Any, r), brute: path_witness(x, y, &[u1, u2], ParityRequest::Any) });
        }
        let mut triples = Vec::new();
        for (i, &u1) in outer.iter().enumerate() {
            for (j, &u2) in outer.iter().enumerate().skip(i) {
                for &u3 in &outer[j..] {
                    triples.push((u1, u2, u3));
                }
            }
        }
        for (u1, u2, u3) in triples {
            let r = cycle_chains_bip(&b, u1, u2, u3, rec);
            runs.push(Run {
                op: "cycle_chains_bip",
                constructive: check_cycle(g, &[u1, u2, u3], r),
                brute: brute_cycle_set_of_chains(g, &[u1, u2, u3], lim).unwrap().is_some(),
            });
        }
    } else {
        let parities = [ParityRequest::Odd, ParityRequest::Even];
        let mut bx = Vec::new();
        let mut nb = Vec::new();
        let mut nbq = Vec::new();
        for &(x, y) in &pairs {
            let bx_bip = g.remove_vertices(&[x]).is_bipartite();
            for &u in &outer {
                nb.push((x, y, u));
                if let Some(q) = choose_q(&b, x, y, &[u]) {
                    for p in parities {
                        nbq.push((x, y, u, q.clone(), p));
                        if bx_bip && u != x {
                            bx.push((x, y, u, q.clone(), p));
                        }
                    }
                }
            }
        }
        for (x, y, u) in nb {
            let r = set_chains_nonbip(&b, x, y, u, ParityRequest::Any, None, rec);
            runs.push(Run { op: "set_chains_nonbip", constructive: check_path(g, x, y, &[u], ParityRequest::Any, r), brute: path_witness(x, y, &[u], ParityRequest::Any) });
        }
        for (x, y, u, q, p) in nbq {
            let r = set_chains_nonbip(&b, x, y, u, p, Some(&q), rec);
            runs.push(Run { op: "set_chains_nonbip(parity)", constructive: check_path(g, x, y, &[u], p, r), brute: path_witness(x, y, &[u], p) });
        }
        for (x, y, u, q, p) in bx {
            let r = set_chains_parity_bxbip(&b, x, y, &q, u, p, rec);
            runs.push(Run { op: "set_chains_parity_bxbip", constructive: check_path(g, x, y, &[u], p, r), brute: path_witness(x, y, &[u], p) });
        }
        if !b.is_cycle() {
            let good: Vec<_> = pairs.iter().copied().filter(|&(x, y)| x < y && !is_bad(&b, x, y).unwrap().bad).collect();
            for (x, y) in good {
                let r = cycle_chains_nonbip(&b, x, y, rec);
                runs.push(Run { op: "cycle_chains_nonbip", constructive: check_cycle(g, &[x, y], r), brute: brute_cycle_set_of_chains(g, &[x, y], lim).unwrap().is_some() });
            }
        }
    }
    runs
}

fn criterion_5(c: &Corpus, branches: &mut BTreeMap<String, usize>) -> Outcome {
    let t0 = Instant::now();
    let f = Filter { family: Some(Family::Circ), internal_degree_4: Some(true), max_n: Some(10), ..Filter::default() };
    let entries: Vec<&Entry> = c.select(&f).collect();
    let results = par::map(&entries, |e| {
        let mut rec = Recorder::new();
        let runs = chain_runs(e, &mut rec);
        (e.meta.id.clone(), runs, rec)
    });
    let mut per_op: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    let mut first = None;
    let mut fallbacks = 0;
    for (id, runs, rec) in &results {
        fallbacks += rec.fallbacks.len();
        for (b, n) in &rec.branches {
            *branches.entry(b.name().to_string()).or_default() += n;
        }
        for r in runs {
            let s = per_op.entry(r.op).or_default();
            s.0 += 1;
            if let Err(e) = &r.constructive {
                s.1 += 1;
                first.get_or_insert(format!("{id} {}: {e}", r.op));
            }
            if !r.brute {
                s.2 += 1;
                first.get_or_insert(format!("{id} {}: no brute witness", r.op));
            }
        }
    }
    let ops_seen = per_op.len();
    let bad: usize = per_op.values().map(|s| s.1 + s.2).sum();
    let table: Vec<String> = per_op.iter().map(|(op, s)| format!("{op} {}/{}/{}", s.0, s.0 - s.1, s.0 - s.2)).collect();
    Outcome {
        pass: bad == 0 && ops_seen == 7,
        summary: format!(
            "{} instances; runs/validated/brute-found: {}; {fallbacks} search fallbacks; {:.1}s{}",
            entries.len(),
            table.join(", "),
            t0.elapsed().as_secs_f64(),
            first.map(|f| format!("; first problem {f}")).unwrap_or_default()
        ),
    }
}

fn criterion_6(branches: &BTreeMap<String, usize>) -> Outcome {
    let required = ["bip.a", "bip.b", "bip.c", "bip.d", "bip.e", "bip.f", "bip.g", "main.A", "main.B", "glavni.A", "glavni.B", "glavni.C", "glavni.D"];
    let missing: Vec<&str> = required.iter().copied().filter(|b| branches.get(*b).copied().unwrap_or(0) == 0).collect();
    let counts: Vec<String> = required.iter().map(|b| format!("{b}={}", branches.get(*b).copied().unwrap_or(0))).collect();
    Outcome {
        pass: missing.is_empty(),
        summary: format!("{}; missing: {}", counts.join(" "), if missing.is_empty() { "none".to_string() } else { missing.join(" ") }),
    }
}

fn criterion_7(c: &Corpus, dir: &Path) -> Outcome {
    let again = corpus();
    let manifest_same = again.manifest() == c.manifest();
    let f = Filter { three_connected: Some(true), min_degree: Some(4), ..Filter::default() };
    let graphs: Vec<&Entry> = c.select(&f).step_by(5).collect();
    let mut differing = Vec::new();
    for e in &graphs {
        let p = dir.join(format!("det-{}.pgr", e.meta.id));
        std::fs::write(&p, e.graph.to_pgr()).unwrap();
        let bytes = |k: usize| {
            let out = dir.join(format!("det-{}-{k}", e.meta.id));
            let r = cmd_prism_ham(&p, &Options { out: Some(out.clone()), ..Options::default() });
            assert!(r.succeeded(), "{}", r.to_text());
            ["cactus.txt", "prism.txt"].map(|n| std::fs::read(out.join(n)).unwrap())
        };
        if bytes(0) != bytes(1) {
            differing.push(e.meta.id.clone());
        }
    }
    // the parallel and sequential maps must agree too
    let items: Vec<&Entry> = graphs.clone();
    let run = |e: &&Entry| {
        let mut r = RunReport::new("det");
        prism_cactus_cli::prism_ham_graph(&mut r, &e.graph, &Options::default()).unwrap();
        r.artifacts
    };
    let same_par = par::map(&items, run) == par::map_sequential(&items, run);
    Outcome {
        pass: manifest_same && differing.is_empty() && same_par && !graphs.is_empty(),
        summary: format!(
            "{} graphs run twice, {} differing; corpus manifest identical: {manifest_same}; parallel = sequential: {same_par}",
            graphs.len(),
            differing.len()
        ),
    }
}

fn main() {
    let dir = tempfile::TempDir::new().unwrap();
    let t0 = Instant::now();
    let c = corpus();
    let mut branches = BTreeMap::new();
    let mut all = true;
    let mut record = |id: usize, name: &str, o: Outcome| {
        report(id, name, &o);
        all &= o.pass;
    };
    record(1, "end-to-end prism-ham on 3-connected min-degree-4 graphs", criterion_1(&c, dir.path(), t0, &mut branches));
    record(2, "prism cycles over random bipartite cactuses", criterion_2());
    record(3, "bad triples have no prism cycle with both verticals", criterion_3(&c));
    record(4, "bipartite circuit graphs have four external degree-2 vertices", criterion_4(&c));
    record(5, "chain operations agree with exhaustive search", criterion_5(&c, &mut branches));
    record(6, "branch coverage", criterion_6(&branches));
    record(7, "deterministic serialisations", criterion_7(&c, dir.path()));
    if !all {
        std::process::exit(1);
    }
}
