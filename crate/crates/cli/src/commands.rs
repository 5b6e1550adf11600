//! One function per subcommand. Each returns a [`RunReport`]; failures are
//! recorded in `report.error` and decide the exit code.

use std::path::{Path, PathBuf};
use std::time::Instant;

use prism_cactus::cactus::{cactus_violations, default_anchors, spanning_bipartite_cactus, Cactus};
use prism_cactus::chains::{
    choose_q, cycle_chains_bip, cycle_chains_nonbip, rihta, set_chains_bip, set_chains_nonbip, set_chains_parity_bxbip,
    set_chains_xyxy, ParityRequest, Recorder,
};
use prism_cactus::goodness::{is_bad, validate_cycle_set_of_chains, validate_set_of_chains, SetOfChains};
use prism_cactus::oracle::brute_prism::{brute_hamilton_prism, DEFAULT_PRISM_BOUND};
use prism_cactus::oracle::corpus::{compact, generate_corpus, ingest_planar_code, CorpusSpec, Family, Filter};
use prism_cactus::oracle::planar_code::{read_planar_code, write_planar_code};
use prism_cactus::par;
use prism_cactus::prism::{prism_hamilton_from_cactus, prism_violation, PrismCycle};
use prism_cactus::structure::{blocks_cutvertices, delete_vertex_chain, is_three_connected, ChainBlock, CircuitGraph};
use prism_cactus::{ChainsError, PlaneGraph, Vertex};

use crate::render;
use crate::report::{CliError, RunReport};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Pgr,
    PlanarCode,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pgr" => Ok(Format::Pgr),
            "planar_code" => Ok(Format::PlanarCode),
            _ => Err(format!("unknown format `{s}` (expected pgr or planar_code)")),
        }
    }
}

/// Settings shared by all subcommands, after flag/environment resolution.
#[derive(Clone, Debug)]
pub struct Options {
    pub format: Format,
    pub outer: Option<Vec<Vertex>>,
    pub anchors: Option<(Vertex, Vertex)>,
    pub parity: ParityRequest,
    pub max_n: Option<usize>,
    pub seed: u64,
    pub trace: bool,
    pub out: Option<PathBuf>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            format: Format::Pgr,
            outer: None,
            anchors: None,
            parity: ParityRequest::Any,
            max_n: None,
            seed: CorpusSpec::default().seed,
            trace: false,
            out: None,
        }
    }
}

impl Options {
    fn recorder(&self) -> Recorder {
        if self.trace {
            Recorder::with_trace()
        } else {
            Recorder::new()
        }
    }
}

/// Runs `body`, stores its error in the report and writes artifacts.
fn finish(mut report: RunReport, o: &Options, body: impl FnOnce(&mut RunReport) -> Result<(), CliError>) -> RunReport {
    if let Err(e) = body(&mut report) {
        report.error = Some(e);
    }
    if let Some(dir) = &o.out {
        if let Err(e) = write_artifacts(&mut report, dir) {
            report.error.get_or_insert(e);
        }
    }
    report
}

fn write_artifacts(report: &mut RunReport, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    for (name, content) in &report.artifacts {
        let p = dir.join(name);
        std::fs::write(&p, content)?;
        report.outputs.push(p);
    }
    let p = dir.join("report.txt");
    report.outputs.push(p.clone());
    std::fs::write(&p, report.to_text())?;
    Ok(())
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

/// Reads the first graph of `path` and applies `--outer`.
pub fn load_graph(path: &Path, o: &Options) -> Result<PlaneGraph, CliError> {
    let g = match o.format {
        Format::Pgr => {
            let text = std::fs::read_to_string(path)?;
            PlaneGraph::parse_pgr(&text).map_err(|e| parse_error(path, e))?
        }
        Format::PlanarCode => {
            let bytes = std::fs::read(path)?;
            let gs = read_planar_code(&bytes).map_err(|e| parse_error(path, e))?;
            gs.into_iter().next().ok_or_else(|| parse_error(path, "no graph in file"))?
        }
    };
    match &o.outer {
        None => Ok(g),
        Some(walk) => {
            let g = compact(&g);
            PlaneGraph::new(g.rotation().to_vec(), walk).map_err(|e| CliError::Precondition(format!("--outer: {e}")))
        }
    }
}

fn circuit(g: &PlaneGraph) -> Result<CircuitGraph, CliError> {
    CircuitGraph::new(g.clone()).map_err(|e| CliError::Precondition(format!("not a circuit graph: {e}")))
}

/// Maps construction errors to exit classes; inconsistencies get a
/// diagnostic bundle on disk.
fn chains_error(e: ChainsError, o: &Options) -> CliError {
    match e {
        ChainsError::InternalInconsistency(d) => {
            let text = d.to_failure_format();
            let dir = o.out.clone().unwrap_or_else(std::env::temp_dir);
            let path = dir.join(format!("failure-{}.txt", d.operation.replace(|c: char| !c.is_ascii_alphanumeric(), "_")));
            let bundle = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, text)).ok().map(|_| path);
            CliError::Internal { message: d.message, bundle }
        }
        ChainsError::ExhaustionFailure(m) => CliError::Internal { message: m, bundle: None },
        other => CliError::Precondition(other.to_string()),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(vs: impl IntoIterator<Item = Vertex>) -> String {
    vs.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Structural facts about the input graph.
pub fn cmd_check(input: &Path, o: &Options) -> RunReport {
    finish(RunReport::new("check"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        let facts = r.stage("inspect", || {
            let mut f = RunReport::new("check");
            let n = g.vertex_count();
            let m = g.edge_count();
            let faces = g.faces();
            f.fact("vertices", n);
            f.fact("edges", m);
            f.fact("faces", faces.len());
            f.fact("euler", yes(!g.is_connected() || n + faces.len() == m + 2));
            f.fact("connected", yes(g.is_connected()));
            let biconnected = g.is_connected() && n >= 3 && blocks_cutvertices(&g).is_ok_and(|t| t.blocks.len() == 1);
            f.fact("biconnected", yes(biconnected));
            f.fact("three_connected", yes(is_three_connected(&g).unwrap_or(false)));
            let degs: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
            f.fact("min_degree", degs.iter().min().copied().unwrap_or(0));
            f.fact("max_degree", degs.iter().max().copied().unwrap_or(0));
            f.fact("bipartite", yes(g.is_bipartite()));
            f.fact("odd_bounded_faces", faces.iter().filter(|f| f.bounded && f.is_odd()).count());
            f.fact("outer", list(g.outer_walk_from_min()));
            match CircuitGraph::new(g.clone()) {
                Ok(b) => {
                    f.fact("circuit", "yes");
                    let min_int = b.min_internal_degree();
                    f.fact("min_internal_degree", min_int.map_or("none".to_string(), |d| d.to_string()));
                    f.fact("internal_degree_at_least_4", yes(b.internal_degrees_at_least_four()));
                }
                Err(e) => f.fact("circuit", format!("no ({e})")),
            }
            Ok(f.facts)
        })?;
        r.facts.extend(facts);
        Ok(())
    })
}

fn block_line(i: usize, b: &ChainBlock) -> String {
    let kind = match b {
        ChainBlock::Vertex(_) => "vertex",
        ChainBlock::Edge(_) => "edge",
        ChainBlock::Circuit(_) => "circuit",
    };
    format!("block {i} {kind} {}\n", list(b.vertices()))
}

/// The chain of blocks of `B − x`.
pub fn cmd_decompose(input: &Path, o: &Options) -> RunReport {
    finish(RunReport::new("decompose"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        let b = r.stage("check", || circuit(&g))?;
        let x = o.anchors.map_or_else(|| default_anchors(&b).0, |a| a.0);
        let chain = r.stage("decompose", || delete_vertex_chain(&b, x).map_err(|e| CliError::Precondition(e.to_string())))?;
        let mut text = format!("delete {x}\n");
        for i in 0..=chain.len() {
            text.push_str(&format!("b {i} {}\n", chain.b(i).map_or("-".to_string(), |v| v.to_string())));
        }
        for i in 1..=chain.len() {
            text.push_str(&block_line(i, chain.blk(i)));
        }
        r.fact("x", x);
        r.fact("blocks", chain.len());
        r.artifact("decompose.txt", text);
        Ok(())
    })
}

/// Chain constructions reachable from `chains --op`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainOp {
    Rihta,
    Xyxy,
    Bip,
    CycleBip,
    ParityBxBip,
    NonBip,
    CycleNonBip,
}

impl std::str::FromStr for ChainOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "rihta" => ChainOp::Rihta,
            "xyxy" => ChainOp::Xyxy,
            "bip" => ChainOp::Bip,
            "cycle-bip" => ChainOp::CycleBip,
            "parity-bxbip" => ChainOp::ParityBxBip,
            "nonbip" => ChainOp::NonBip,
            "cycle-nonbip" => ChainOp::CycleNonBip,
            _ => {
                return Err(format!(
                    "unknown op `{s}` (expected rihta, xyxy, bip, cycle-bip, parity-bxbip, nonbip or cycle-nonbip)"
                ))
            }
        })
    }
}

/// Runs one constructive operation and validates its output.
pub fn cmd_chains(input: &Path, op: ChainOp, marks: &[Vertex], o: &Options) -> RunReport {
    finish(RunReport::new("chains"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        let b = r.stage("check", || circuit(&g))?;
        let (x, y) = o.anchors.unwrap_or_else(|| default_anchors(&b));
        let mark = |i: usize, default: Vertex| marks.get(i).copied().unwrap_or(default);
        let mut rec = o.recorder();
        let q = |must: &[Vertex]| choose_q(&b, x, y, must).ok_or_else(|| CliError::Precondition(format!("no admissible outer {x}-{y} path")));
        let (set, cyclic, used): (SetOfChains, bool, Vec<Vertex>) = r.stage("construct", || {
            let e = |e| chains_error(e, o);
            Ok(match op {
                ChainOp::Rihta => (rihta(&b, x, y, mark(0, x), &mut rec).map_err(e)?, false, vec![mark(0, x)]),
                ChainOp::Xyxy => (set_chains_xyxy(&b, x, y, &q(&[])?, &mut rec).map_err(e)?, false, vec![x, y]),
                ChainOp::Bip => {
                    let (u1, u2) = (mark(0, x), mark(1, mark(0, x)));
                    (set_chains_bip(&b, x, y, u1, u2, &mut rec).map_err(e)?, false, vec![u1, u2])
                }
                ChainOp::CycleBip => {
                    let u3 = mark(0, x);
                    (cycle_chains_bip(&b, x, y, u3, &mut rec).map_err(e)?, true, vec![x, y, u3])
                }
                ChainOp::ParityBxBip => {
                    let u = mark(0, y);
                    (set_chains_parity_bxbip(&b, x, y, &q(&[u])?, u, o.parity, &mut rec).map_err(e)?, false, vec![u])
                }
                ChainOp::NonBip => {
                    let u = mark(0, y);
                    let path = if o.parity == ParityRequest::Any { None } else { Some(q(&[u])?) };
                    (set_chains_nonbip(&b, x, y, u, o.parity, path.as_deref(), &mut rec).map_err(e)?, false, vec![u])
                }
                ChainOp::CycleNonBip => (cycle_chains_nonbip(&b, x, y, &mut rec).map_err(e)?, true, vec![x, y]),
            })
        })?;
        r.absorb(&rec);
        r.stage("validate", || {
            let v = if cyclic { validate_cycle_set_of_chains(&g, &used, &set) } else { validate_set_of_chains(&g, x, y, &used, &set) };
            if !v.ok() {
                return Err(CliError::Internal { message: v.reasons.join("; "), bundle: None });
            }
            if !o.parity.accepts(set.spine.edge_count()) && matches!(op, ChainOp::ParityBxBip | ChainOp::NonBip) {
                return Err(CliError::Verification(format!("spine has {} edges, requested {:?}", set.spine.edge_count(), o.parity)));
            }
            Ok(())
        })?;
        r.fact("x", x);
        r.fact("y", y);
        r.fact("marks", list(used.iter().copied()));
        r.fact("spine_edges", set.spine.edge_count());
        r.fact("chains", set.chains.len());
        r.artifact("chains.txt", set.to_text());
        Ok(())
    })
}

fn anchors_for(b: &CircuitGraph, o: &Options) -> (Vertex, Vertex) {
    o.anchors.unwrap_or_else(|| default_anchors(b))
}

/// Hypotheses of the cactus construction, with the first broken one named.
fn check_hypotheses(g: &PlaneGraph, o: &Options) -> Result<(CircuitGraph, Vertex, Vertex), CliError> {
    let b = circuit(g)?;
    if let Some(v) = b.internal_vertices().into_iter().find(|&v| g.degree(v) < 4) {
        return Err(CliError::Precondition(format!("internal vertex {v} has degree {} < 4", g.degree(v))));
    }
    let (x, y) = anchors_for(&b, o);
    for v in [x, y] {
        if !b.is_external(v) {
            return Err(CliError::Precondition(format!("anchor {v} is not on the outer cycle")));
        }
    }
    if x == y {
        return Err(CliError::Precondition("anchors coincide".into()));
    }
    let verdict = is_bad(&b, x, y).map_err(|e| CliError::Precondition(e.to_string()))?;
    if verdict.bad {
        return Err(CliError::Precondition(format!("the graph is bad with respect to {x} and {y}")));
    }
    Ok((b, x, y))
}

fn build_cactus(r: &mut RunReport, g: &PlaneGraph, o: &Options) -> Result<(Cactus, Vertex, Vertex), CliError> {
    let (b, x, y) = r.stage("hypotheses", || check_hypotheses(g, o))?;
    let mut rec = o.recorder();
    let t = r.stage("cactus", || spanning_bipartite_cactus(&b, x, y, &mut rec).map_err(|e| chains_error(e, o)));
    r.absorb(&rec);
    let t = t?;
    r.stage("validate-cactus", || {
        let v = cactus_violations(g, &t, true);
        if !v.is_empty() {
            return Err(CliError::Internal { message: v.join("; "), bundle: None });
        }
        match [x, y].into_iter().find(|&v| !t.is_good(v)) {
            Some(v) => Err(CliError::Internal { message: format!("anchor {v} lies in two blocks"), bundle: None }),
            None => Ok(()),
        }
    })?;
    r.fact("x", x);
    r.fact("y", y);
    r.fact("blocks", t.blocks().len());
    r.fact("good_vertices", t.good_vertices().len());
    Ok((t, x, y))
}

/// A spanning bipartite cactus with `x` and `y` good.
pub fn cmd_cactus(input: &Path, o: &Options) -> RunReport {
    finish(RunReport::new("cactus"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        let (t, _, _) = build_cactus(r, &g, o)?;
        r.artifact("cactus.txt", t.to_text());
        Ok(())
    })
}

/// The full pipeline: cactus, prism cycle and verification.
pub fn cmd_prism_ham(input: &Path, o: &Options) -> RunReport {
    finish(RunReport::new("prism-ham"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        prism_ham_graph(r, &g, o)
    })
}

/// [`cmd_prism_ham`] on an in-memory graph.
pub fn prism_ham_graph(r: &mut RunReport, g: &PlaneGraph, o: &Options) -> Result<(), CliError> {
    let (t, x, y) = build_cactus(r, g, o)?;
    r.artifact("cactus.txt", t.to_text());
    let c = r.stage("prism", || prism_hamilton_from_cactus(&t).map_err(|e| CliError::Internal { message: e.to_string(), bundle: None }))?;
    r.artifact("prism.txt", format!("{c}\n"));
    let verdict = r.stage("verify", || verify_cycle(g, &c, &[x, y]));
    r.artifact(
        "verdict.txt",
        match &verdict {
            Ok(()) => "verified\n".to_string(),
            Err(e) => format!("rejected {e}\n"),
        },
    );
    r.fact("prism_length", c.steps.len());
    r.fact("vertical_edges", c.vertical_edges().len());
    r.fact("verified", yes(verdict.is_ok()));
    verdict
}

fn verify_cycle(g: &PlaneGraph, c: &PrismCycle, required: &[Vertex]) -> Result<(), CliError> {
    if let Some(why) = prism_violation(g, c) {
        return Err(CliError::Verification(why));
    }
    let vert = c.vertical_edges();
    match required.iter().find(|v| !vert.contains(v)) {
        Some(v) => Err(CliError::Verification(format!("no vertical edge at {v}"))),
        None => Ok(()),
    }
}

/// Checks a prism cycle and/or a cactus file against the graph.
pub fn cmd_verify(input: &Path, prism: Option<&Path>, cactus: Option<&Path>, o: &Options) -> RunReport {
    finish(RunReport::new("verify"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        if prism.is_none() && cactus.is_none() {
            return Err(CliError::Usage("nothing to verify: pass --prism and/or --cactus".into()));
        }
        if let Some(p) = prism {
            let c: PrismCycle = r.stage("parse-prism", || std::fs::read_to_string(p)?.parse().map_err(|e| parse_error(p, e)))?;
            let required: Vec<Vertex> = o.anchors.map(|(x, y)| vec![x, y]).unwrap_or_default();
            r.stage("verify-prism", || verify_cycle(&g, &c, &required))?;
            r.fact("prism", "verified");
        }
        if let Some(p) = cactus {
            let t = r.stage("parse-cactus", || Cactus::parse(&std::fs::read_to_string(p)?).map_err(|e| parse_error(p, e)))?;
            r.stage("verify-cactus", || {
                let v = cactus_violations(&g, &t, true);
                if !v.is_empty() {
                    return Err(CliError::Verification(v.join("; ")));
                }
                match o.anchors.into_iter().flat_map(|(x, y)| [x, y]).find(|&v| !t.is_good(v)) {
                    Some(v) => Err(CliError::Verification(format!("{v} is not good in the cactus"))),
                    None => Ok(()),
                }
            })?;
            r.fact("cactus", "verified");
        }
        Ok(())
    })
}

/// Exhaustive prism search with vertical edges required at the anchors.
pub fn cmd_oracle(input: &Path, o: &Options) -> RunReport {
    finish(RunReport::new("oracle"), o, |r| {
        let g = r.stage("parse", || load_graph(input, o))?;
        let required: Vec<Vertex> = o.anchors.map(|(x, y)| vec![x, y]).unwrap_or_default();
        let bound = o.max_n.unwrap_or(DEFAULT_PRISM_BOUND);
        let found = r.stage("search", || brute_hamilton_prism(&g, &required, bound).map_err(|e| CliError::Precondition(e.to_string())))?;
        r.fact("required", list(required.iter().copied()));
        match found {
            Some(c) => {
                r.fact("prism_cycle", "found");
                r.artifact("oracle.txt", format!("{c}\n"));
            }
            None => {
                r.fact("prism_cycle", "absent");
                r.artifact("oracle.txt", "absent\n".to_string());
            }
        }
        Ok(())
    })
}

/// Generates (and optionally ingests into) a corpus.
pub fn cmd_corpus(ingest: Option<&Path>, o: &Options) -> RunReport {
    let mut report = RunReport::new("corpus");
    let res = (|| {
        let spec = CorpusSpec {
            max_n: o.max_n.unwrap_or(CorpusSpec::default().max_n),
            seed: o.seed,
            ..CorpusSpec::default()
        };
        let mut c = report.stage("generate", || generate_corpus(&spec).map_err(|e| CliError::Precondition(e.to_string())))?;
        if let Some(p) = ingest {
            let extra = report.stage("ingest", || {
                let bytes = std::fs::read(p)?;
                ingest_planar_code(&bytes, Family::Poly, &p.display().to_string()).map_err(|e| parse_error(p, e))
            })?;
            c.entries.extend(extra);
        }
        let poly = Filter { family: Some(Family::Poly), ..Filter::default() };
        let circ = Filter { family: Some(Family::Circ), ..Filter::default() };
        report.fact("entries", c.entries.len());
        report.fact("poly", c.select(&poly).count());
        report.fact("circ", c.select(&circ).count());
        match &o.out {
            Some(dir) => {
                report.stage("write", || {
                    c.write_dir(dir)?;
                    if o.format == Format::PlanarCode {
                        let gs: Vec<PlaneGraph> = c.entries.iter().map(|e| e.graph.clone()).collect();
                        let bytes = write_planar_code(&gs).map_err(CliError::Io)?;
                        std::fs::write(dir.join("corpus.planar_code"), bytes)?;
                    }
                    Ok(())
                })?;
                report.outputs.push(dir.join("manifest.txt"));
            }
            None => report.artifact("manifest.txt", c.manifest()),
        }
        Ok(())
    })();
    if let Err(e) = res {
        report.error = Some(e);
    }
    report
}

/// DOT for a graph, cactus or prism-cycle file.
pub fn cmd_render(artifact: &Path, kind: &str, graph: Option<&Path>, o: &Options) -> RunReport {
    finish(RunReport::new("render"), o, |r| {
        let text = std::fs::read_to_string(artifact)?;
        let dot = match kind {
            "graph" => render::graph_dot(&PlaneGraph::parse_pgr(&text).map_err(|e| parse_error(artifact, e))?),
            "cactus" => Cactus::parse(&text).map_err(|e| parse_error(artifact, e))?.to_dot(),
            "prism" => {
                let gp = graph.ok_or_else(|| CliError::Usage("render --kind prism needs --graph".into()))?;
                let g = load_graph(gp, o)?;
                let c: PrismCycle = text.parse().map_err(|e| parse_error(artifact, e))?;
                c.to_dot(&g)
            }
            other => return Err(CliError::Usage(format!("unknown render kind `{other}` (expected graph, cactus or prism)"))),
        };
        r.artifact(&format!("{kind}.dot"), dot);
        Ok(())
    })
}

/// Times the pipeline over the `poly` corpus, parallel and sequential.
pub fn cmd_bench(o: &Options) -> RunReport {
    finish(RunReport::new("bench"), o, |r| {
        let spec = CorpusSpec {
            max_n: o.max_n.unwrap_or(10),
            seed: o.seed,
            ..CorpusSpec::default()
        };
        let c = r.stage("generate", || generate_corpus(&spec).map_err(|e| CliError::Precondition(e.to_string())))?;
        let graphs: Vec<PlaneGraph> = c
            .select(&Filter { family: Some(Family::Poly), ..Filter::default() })
            .map(|e| e.graph.clone())
            .collect();
        let run = |g: &PlaneGraph| {
            let mut rr = RunReport::new("bench-item");
            prism_ham_graph(&mut rr, g, &Options::default()).is_ok()
        };
        let t = Instant::now();
        let a = par::map(&graphs, run);
        let par_ms = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        let b = par::map_sequential(&graphs, run);
        let seq_ms = t.elapsed().as_secs_f64() * 1e3;
        r.fact("instances", graphs.len());
        r.fact("parallel_feature", yes(par::PARALLEL));
        r.fact("parallel_ms", format!("{par_ms:.1}"));
        r.fact("sequential_ms", format!("{seq_ms:.1}"));
        r.fact("speedup", format!("{:.2}", seq_ms / par_ms.max(1e-9)));
        let ok = a.iter().filter(|&&v| v).count();
        r.fact("verified", ok);
        if a != b || ok != graphs.len() {
            return Err(CliError::Verification(format!("{} of {} instances failed", graphs.len() - ok, graphs.len())));
        }
        Ok(())
    })
}
