//! Constructive results against exhaustive search. The full sweeps take a
//! few minutes in release mode and are ignored by default; run them with
//! `cargo test --release -p prism-cactus --test oracle_agreement -- --ignored`.

use std::collections::BTreeMap;

use prism_cactus::cactus::{default_anchors, spanning_bipartite_cactus, validate_cactus};
use prism_cactus::chains::*;
use prism_cactus::goodness::{is_bad, validate_cycle_set_of_chains, validate_set_of_chains};
use prism_cactus::oracle::brute_chains::{brute_cycle_set_of_chains, brute_set_of_chains, SearchLimits};
use prism_cactus::oracle::brute_prism::brute_hamilton_prism;
use prism_cactus::oracle::corpus::{generate_corpus, CorpusSpec, Family, Filter};
use prism_cactus::par;
use prism_cactus::prism::{prism_hamilton_from_cactus, verify_prism_hamilton};
use prism_cactus::structure::CircuitGraph;

#[test]
fn every_small_polyhedron_has_an_anchored_prism_cycle() {
    let c = generate_corpus(&CorpusSpec { max_n: 10, ..CorpusSpec::default() }).unwrap();
    let f = Filter { family: Some(Family::Poly), ..Filter::default() };
    let entries: Vec<_> = c.select(&f).collect();
    assert!(entries.len() >= 20);
    let found = par::map(&entries, |e| {
        let (x, y) = default_anchors(&CircuitGraph::new(e.graph.clone()).unwrap());
        brute_hamilton_prism(&e.graph, &[x, y], 12).unwrap().is_some()
    });
    assert!(found.iter().all(|&f| f));
}

#[test]
#[ignore]
fn cactus_sweep_over_default_corpus() {
    let c = generate_corpus(&CorpusSpec::default()).unwrap();
    let f = Filter { internal_degree_4: Some(true), ..Filter::default() };
    let entries: Vec<_> = c.select(&f).collect();
    let res = par::map(&entries, |e| {
        let b = CircuitGraph::new(e.graph.clone()).unwrap();
        let outer = b.outer_cycle().to_vec();
        let mut rec = Recorder::new();
        let mut runs = 0;
        for (i, &x) in outer.iter().enumerate() {
            for &y in &outer[i + 1..] {
                if is_bad(&b, x, y).unwrap().bad {
                    continue;
                }
                runs += 1;
                let t = spanning_bipartite_cactus(&b, x, y, &mut rec).unwrap_or_else(|err| panic!("{} {x} {y}: {err}", e.meta.id));
                assert!(validate_cactus(b.graph(), &t, true));
                let p = prism_hamilton_from_cactus(&t).unwrap();
                assert!(verify_prism_hamilton(b.graph(), &p));
                assert!(p.vertical_edges().contains(&x) && p.vertical_edges().contains(&y));
            }
        }
        (runs, rec.fallbacks.len())
    });
    let runs: usize = res.iter().map(|r| r.0).sum();
    assert!(runs > 1000);
    assert_eq!(res.iter().map(|r| r.1).sum::<usize>(), 0);
}

#[test]
#[ignore]
fn every_chain_operation_over_small_circuit_graphs() {
    let c = generate_corpus(&CorpusSpec { max_n: 10, ..CorpusSpec::default() }).unwrap();
    let f = Filter { family: Some(Family::Circ), internal_degree_4: Some(true), max_n: Some(10), ..Filter::default() };
    let inst: Vec<_> = c.select(&f).collect();
    let lim = SearchLimits::default();
    let res = par::map(&inst, |e| {
        let b = CircuitGraph::new(e.graph.clone()).unwrap();
        let g = b.graph();
        let outer = b.outer_cycle().to_vec();
        let mut rec = Recorder::new();
        let mut problems = Vec::new();
        let mut runs: BTreeMap<&str, usize> = BTreeMap::new();
        let mut note = |op: &'static str, ok: bool, brute: bool, what: String| {
            *runs.entry(op).or_default() += 1;
            if !ok || !brute {
                problems.push(format!("{} {op} {what}: constructive ok {ok}, brute found {brute}", e.meta.id));
            }
        };
        let bip = b.is_bipartite();
        for &x in &outer {
            for &y in &outer {
                if x == y {
                    continue;
                }
                if bip {
                    if let Some(q) = choose_q(&b, x, y, &[]) {
                        let ok = set_chains_xyxy(&b, x, y, &q, &mut rec).map(|s| validate_set_of_chains(g, x, y, &[x, y], &s).ok()).unwrap_or(false);
                        let br = brute_set_of_chains(g, x, y, &[x, y], ParityRequest::Any, lim).unwrap().is_some();
                        note("xyxy", ok, br, format!("{x} {y}"));
                    }
                    for &u1 in &outer {
                        for &u2 in &outer {
                            if u2 < u1 || (u1.min(u2), u1.max(u2)) == (x.min(y), x.max(y)) {
                                continue;
                            }
                            let ok = set_chains_bip(&b, x, y, u1, u2, &mut rec).map(|s| validate_set_of_chains(g, x, y, &[u1, u2], &s).ok()).unwrap_or(false);
                            let br = brute_set_of_chains(g, x, y, &[u1, u2], ParityRequest::Any, lim).unwrap().is_some();
                            note("bip", ok, br, format!("{x} {y} {u1} {u2}"));
                        }
                    }
                } else {
                    let bx_bip = g.remove_vertices(&[x]).is_bipartite();
                    for &u in &outer {
                        let ok = set_chains_nonbip(&b, x, y, u, ParityRequest::Any, None, &mut rec).map(|s| validate_set_of_chains(g, x, y, &[u], &s).ok()).unwrap_or(false);
                        note("nonbip", ok, brute_set_of_chains(g, x, y, &[u], ParityRequest::Any, lim).unwrap().is_some(), format!("{x} {y} {u}"));
                        let Some(q) = choose_q(&b, x, y, &[u]) else { continue };
                        for p in [ParityRequest::Odd, ParityRequest::Even] {
                            let br = brute_set_of_chains(g, x, y, &[u], p, lim).unwrap().is_some();
                            let ok = set_chains_nonbip(&b, x, y, u, p, Some(&q), &mut rec).map(|s| validate_set_of_chains(g, x, y, &[u], &s).ok() && p.accepts(s.parity())).unwrap_or(false);
                            note("nonbip-parity", ok, br, format!("{x} {y} {u} {p:?}"));
                            if bx_bip && u != x {
                                let ok = set_chains_parity_bxbip(&b, x, y, &q, u, p, &mut rec).map(|s| validate_set_of_chains(g, x, y, &[u], &s).ok() && p.accepts(s.parity())).unwrap_or(false);
                                note("bxbip", ok, br, format!("{x} {y} {u} {p:?}"));
                            }
                        }
                    }
                    if x < y && !b.is_cycle() && !is_bad(&b, x, y).unwrap().bad {
                        let ok = cycle_chains_nonbip(&b, x, y, &mut rec).map(|s| validate_cycle_set_of_chains(g, &[x, y], &s).ok()).unwrap_or(false);
                        note("cycnonbip", ok, brute_cycle_set_of_chains(g, &[x, y], lim).unwrap().is_some(), format!("{x} {y}"));
                    }
                }
            }
        }
        if bip {
            for (i, &u1) in outer.iter().enumerate() {
                for (j, &u2) in outer.iter().enumerate().skip(i) {
                    for &u3 in &outer[j..] {
                        let ok = cycle_chains_bip(&b, u1, u2, u3, &mut rec).map(|s| validate_cycle_set_of_chains(g, &[u1, u2, u3], &s).ok()).unwrap_or(false);
                        note("cycbip", ok, brute_cycle_set_of_chains(g, &[u1, u2, u3], lim).unwrap().is_some(), format!("{u1} {u2} {u3}"));
                    }
                }
            }
        }
        (runs, problems, rec)
    });
    let mut rec = Recorder::new();
    let mut runs: BTreeMap<&str, usize> = BTreeMap::new();
    let mut problems = Vec::new();
    for (r, p, x) in res {
        rec.merge(&x);
        problems.extend(p);
        for (k, v) in r {
            *runs.entry(k).or_default() += v;
        }
    }
    assert!(problems.is_empty(), "{} problems, first {:?}", problems.len(), &problems[..problems.len().min(5)]);
    assert_eq!(runs.len(), 7, "{runs:?}");
    assert!(rec.fallbacks.is_empty());
    for b in Branch::required() {
        assert!(rec.count(*b) > 0, "{} never taken", b.name());
    }
}
