//! Batch pipeline throughput: the rayon map against the sequential map on
//! the same corpus slice. Build with `--no-default-features` to see the
//! fallback used by `par::map` itself.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prism_cactus::cactus::{default_anchors, spanning_bipartite_cactus};
use prism_cactus::chains::Recorder;
use prism_cactus::oracle::corpus::{generate_corpus, CorpusSpec, Filter};
use prism_cactus::par;
use prism_cactus::prism::prism_hamilton_from_cactus;
use prism_cactus::structure::CircuitGraph;
use prism_cactus::PlaneGraph;

fn pipeline(g: &PlaneGraph) -> usize {
    let b = CircuitGraph::new(g.clone()).unwrap();
    let (x, y) = default_anchors(&b);
    let t = spanning_bipartite_cactus(&b, x, y, &mut Recorder::new()).unwrap();
    prism_hamilton_from_cactus(&t).unwrap().steps.len()
}

fn batch(c: &mut Criterion) {
    let corpus = generate_corpus(&CorpusSpec { max_n: 11, ..CorpusSpec::default() }).unwrap();
    let f = Filter { three_connected: Some(true), min_degree: Some(4), ..Filter::default() };
    let graphs: Vec<PlaneGraph> = corpus.select(&f).map(|e| e.graph.clone()).collect();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    for size in [64, 256, 1024] {
        let slice = &graphs[..size.min(graphs.len())];
        group.bench_with_input(BenchmarkId::new("par_map", slice.len()), slice, |bn, s| bn.iter(|| par::map(s, pipeline)));
        group.bench_with_input(BenchmarkId::new("sequential", slice.len()), slice, |bn, s| bn.iter(|| par::map_sequential(s, pipeline)));
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
