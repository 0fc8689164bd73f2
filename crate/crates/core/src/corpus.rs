//! Seeded random instances for tests and experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gadgets::Digraph;
use crate::graph::{Graph, VertexId};

/// Erdos-Renyi `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("endpoints in range")
}

/// A random factor-critical graph built from a single vertex by `ears` odd
/// ears of length 3 or 5 (open or closed), followed by up to `chords` extra
/// edges, which are ears of length one.
pub fn random_factor_critical(ears: usize, chords: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(1);
    for _ in 0..ears {
        let len = if rng.gen_bool(0.5) { 3 } else { 5 };
        let existing: Vec<VertexId> = g.vertices().collect();
        let a = *existing.choose(&mut rng).unwrap();
        let b = if existing.len() > 1 && rng.gen_bool(0.5) {
            let others: Vec<VertexId> = existing.iter().copied().filter(|&x| x != a).collect();
            *others.choose(&mut rng).unwrap()
        } else {
            a
        };
        let mut prev = a;
        for _ in 0..len - 1 {
            let x = g.add_vertex();
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        g.add_edge(prev, b).unwrap();
    }
    let n = g.id_bound();
    for _ in 0..chords {
        if n < 2 {
            break;
        }
        let a = VertexId::from(rng.gen_range(0..n));
        let b = VertexId::from(rng.gen_range(0..n));
        if a != b && !g.has_edge(a, b) {
            g.add_edge(a, b).unwrap();
        }
    }
    g
}

/// Random digraph on `0..n` without loops, each arc present with
/// probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p.clamp(0.0, 1.0)) {
                arcs.push((i, j));
            }
        }
    }
    Digraph::new(n, arcs).expect("valid arcs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{fc_order, is_factor_critical};

    #[test]
    fn deterministic() {
        assert_eq!(random_graph(9, 0.4, 3), random_graph(9, 0.4, 3));
        assert_eq!(random_digraph(5, 0.3, 1), random_digraph(5, 0.3, 1));
    }

    #[test]
    fn ear_graphs_are_factor_critical() {
        for seed in 0..50 {
            let g = random_factor_critical(1 + (seed as usize % 5), seed as usize % 4, seed);
            assert!(is_factor_critical(&g), "seed {seed}");
            assert!(fc_order(&g).unwrap().order >= 1);
        }
    }
}
