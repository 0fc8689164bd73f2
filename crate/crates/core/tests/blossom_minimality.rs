use matchcount::blossoms::{minimum_blossom, rotate};
use matchcount::corpus::random_graph;
use matchcount::structure::maximum_matching;
use matchcount::VertexId;

/// Finds a graph, matching and hole where the minimum blossom `B` is no
/// longer minimal after rotating its hole to some `x` on `B`.
#[test]
fn rotation_can_break_minimality() {
    let mut found = None;
    'search: for seed in 0..2000u64 {
        let n = 5 + (seed as usize % 5);
        let g = random_graph(n, 0.45, seed);
        let w = VertexId(0);
        let mut m = maximum_matching(&g);
        m.remove(w);
        let Some(b) = minimum_blossom(&g, &m, w).unwrap() else {
            continue;
        };
        for &x in &b.cycle[1..] {
            let r = rotate(&g, &m, &b, x).unwrap();
            let rb = b.rebased(x).unwrap();
            assert!(rb.validate(&g, &r));
            let best = minimum_blossom(&g, &r, x).unwrap().expect("the rotated blossom exists");
            assert!(best.len() <= rb.len());
            if best.len() < rb.len() {
                found = Some((seed, n, b.len(), best.len()));
                break 'search;
            }
        }
    }
    let (seed, n, before, after) = found.expect("some small instance breaks minimality");
    println!("seed {seed}, n = {n}: minimum blossom of length {before}, after rotation a blossom of length {after}");
    assert!(after < before);
}
