use std::collections::BTreeSet;

use prism_cactus::cactus::{spanning_bipartite_cactus, validate_cactus};
use prism_cactus::chains::Recorder;
use prism_cactus::goodness::is_bad;
use prism_cactus::oracle::canonical::canonical_code;
use prism_cactus::oracle::corpus::random_bipartite_cactus;
use prism_cactus::oracle::planar_code::{read_planar_code, write_planar_code};
use prism_cactus::prism::{prism_hamilton_from_cactus, verify_prism_hamilton, PrismCycle};
use prism_cactus::structure::CircuitGraph;
use prism_cactus::{fixtures, PlaneGraph, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Diagonals of a random triangulation of the `n`-gon, each kept with
/// probability `keep`; any such subset is non-crossing.
fn chords(n: usize, keep: f64, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    let mut stack = vec![(0, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi - lo < 2 {
            continue;
        }
        let k = rng.gen_range(lo + 1..hi);
        for (a, c) in [(lo, k), (k, hi)] {
            if c - a >= 2 && rng.gen_bool(keep) {
                out.push((a, c));
            }
            stack.push((a, c));
        }
    }
    out
}

fn chorded(n: usize, keep: f64, seed: u64) -> PlaneGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fixtures::cycle_with_chords(n, &chords(n, keep, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_cactus_prism_is_hamiltonian(n in 2usize..400, seed: u64) {
        let t = random_bipartite_cactus(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let c = prism_hamilton_from_cactus(&t).unwrap();
        prop_assert_eq!(c.steps.len(), 2 * t.vertices().len());
        let distinct: BTreeSet<_> = c.steps.iter().collect();
        prop_assert_eq!(distinct.len(), c.steps.len());
        prop_assert_eq!(c.vertical_edges(), t.good_vertices());
        let back: PrismCycle = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn planar_code_round_trip(n in 3usize..40, keep in 0.0f64..1.0, seed: u64) {
        let g = chorded(n, keep, seed);
        let bytes = write_planar_code(std::slice::from_ref(&g)).unwrap();
        let back = read_planar_code(&bytes).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].edge_count(), g.edge_count());
        prop_assert_eq!(canonical_code(&back[0], false), canonical_code(&g, false));
        prop_assert_eq!(write_planar_code(&back).unwrap(), bytes);
    }

    #[test]
    fn chorded_cycles_get_anchored_cactuses(n in 3usize..30, keep in 0.0f64..1.0, seed: u64, pick: usize) {
        let g = chorded(n, keep, seed);
        let b = CircuitGraph::new(g.clone()).unwrap();
        let pairs: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .filter(|&(x, y)| !is_bad(&b, x, y).unwrap().bad)
            .collect();
        prop_assert!(!pairs.is_empty());
        let (x, y) = pairs[pick % pairs.len()];
        let mut rec = Recorder::new();
        let t = spanning_bipartite_cactus(&b, x, y, &mut rec).unwrap();
        prop_assert!(validate_cactus(&g, &t, true));
        let c = prism_hamilton_from_cactus(&t).unwrap();
        prop_assert!(verify_prism_hamilton(&g, &c));
        let v = c.vertical_edges();
        prop_assert!(v.contains(&x) && v.contains(&y));
    }
}
