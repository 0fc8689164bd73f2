//! Brute-force reference computations. Nothing here shares code with the
//! production algorithms it is used to check: matchings are enumerated edge
//! by edge, paths and permutations exhaustively.

use std::collections::BTreeSet;

use crate::graph::{Graph, VertexId};
use crate::matching::Matching;

fn simple_edges(g: &Graph) -> Vec<(VertexId, VertexId)> {
    let mut e: Vec<_> = g
        .edges()
        .iter()
        .copied()
        .filter(|(a, b)| a != b)
        .collect();
    e.sort();
    e.dedup();
    e
}

/// Every matching of `g` (as sorted pair lists), by include/exclude over the
/// simple edge list.
pub fn all_matchings(g: &Graph) -> Vec<Vec<(VertexId, VertexId)>> {
    fn rec(
        edges: &[(VertexId, VertexId)],
        i: usize,
        used: &mut BTreeSet<VertexId>,
        cur: &mut Vec<(VertexId, VertexId)>,
        out: &mut Vec<Vec<(VertexId, VertexId)>>,
    ) {
        if i == edges.len() {
            out.push(cur.clone());
            return;
        }
        rec(edges, i + 1, used, cur, out);
        let (a, b) = edges[i];
        if !used.contains(&a) && !used.contains(&b) {
            used.insert(a);
            used.insert(b);
            cur.push((a, b));
            rec(edges, i + 1, used, cur, out);
            cur.pop();
            used.remove(&a);
            used.remove(&b);
        }
    }
    let edges = simple_edges(g);
    let mut out = Vec::new();
    rec(&edges, 0, &mut BTreeSet::new(), &mut Vec::new(), &mut out);
    out
}

pub fn maximum_matching_size(g: &Graph) -> usize {
    all_matchings(g).iter().map(Vec::len).max().unwrap_or(0)
}

/// Vertices left unmatched by at least one maximum matching.
pub fn d_set(g: &Graph) -> Vec<VertexId> {
    let all = all_matchings(g);
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    let mut d = BTreeSet::new();
    for m in all.iter().filter(|m| m.len() == best) {
        let covered: BTreeSet<VertexId> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
        d.extend(g.vertices().filter(|v| !covered.contains(v)));
    }
    d.into_iter().collect()
}

/// Perfect matchings by plain lowest-vertex branching (no propagation).
pub fn count_perfect(g: &Graph) -> u128 {
    fn rec(g: &Graph, free: &mut Vec<VertexId>) -> u128 {
        let Some(&v) = free.first() else {
            return 1;
        };
        let mut total = 0;
        for &w in g.neighbors(v) {
            if let Some(pos) = free.iter().position(|&x| x == w) {
                let saved = free.clone();
                free.remove(pos);
                free.remove(0);
                total += rec(g, free);
                *free = saved;
            }
        }
        total
    }
    let mut free: Vec<VertexId> = g.vertices().collect();
    rec(g, &mut free)
}

/// Every perfect matching, by the same lowest-vertex branching.
pub fn perfect_matchings(g: &Graph) -> Vec<Vec<(VertexId, VertexId)>> {
    fn rec(
        g: &Graph,
        free: &mut Vec<VertexId>,
        cur: &mut Vec<(VertexId, VertexId)>,
        out: &mut Vec<Vec<(VertexId, VertexId)>>,
    ) {
        let Some(&v) = free.first() else {
            out.push(cur.clone());
            return;
        };
        for &w in g.neighbors(v) {
            if let Some(pos) = free.iter().position(|&x| x == w) {
                let saved = free.clone();
                free.remove(pos);
                free.remove(0);
                cur.push((v, w));
                rec(g, free, cur, out);
                cur.pop();
                *free = saved;
            }
        }
    }
    let mut out = Vec::new();
    rec(g, &mut g.vertices().collect(), &mut Vec::new(), &mut out);
    out
}

/// Near-perfect matchings with holes exactly at `u` and `v`.
pub fn count_near(g: &Graph, u: VertexId, v: VertexId) -> u128 {
    count_perfect(&g.delete_vertices(&[u, v]).expect("holes are vertices"))
}

/// Every matching reachable from `m` by one application of the edge-shift
/// rule, over all of the rule's random choices (excluding holding).
pub fn broder_successors(g: &Graph, m: &Matching) -> BTreeSet<Matching> {
    let holes: Vec<VertexId> = g.vertices().filter(|&x| !m.is_matched(x)).collect();
    let mut out = BTreeSet::new();
    match holes.as_slice() {
        [] => {
            for (a, _) in m.pairs() {
                let mut next = m.clone();
                next.remove(a);
                out.insert(next);
            }
        }
        &[u, v] => {
            for x in g.vertices() {
                if x == u || x == v {
                    if g.has_edge(u, v) {
                        let mut next = m.clone();
                        next.insert(u, v);
                        out.insert(next);
                    }
                    continue;
                }
                let y = m.partner(x).expect("non-hole is matched");
                for w in [u, v] {
                    if g.has_edge(x, w) {
                        let mut next = m.clone();
                        next.remove(x);
                        next.insert(x, w);
                        debug_assert!(!next.is_matched(y));
                        out.insert(next);
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Simple directed `s`-`t` paths, each as its vertex sequence.
pub fn st_paths(n: usize, arcs: &[(usize, usize)], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(
        at: usize,
        t: usize,
        out_arcs: &[Vec<usize>],
        on: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if at == t {
            out.push(cur.clone());
            return;
        }
        for &next in &out_arcs[at] {
            if !on[next] {
                on[next] = true;
                cur.push(next);
                rec(next, t, out_arcs, on, cur, out);
                cur.pop();
                on[next] = false;
            }
        }
    }
    let mut out_arcs = vec![Vec::new(); n];
    for &(a, b) in arcs {
        if !out_arcs[a].contains(&b) {
            out_arcs[a].push(b);
        }
    }
    let mut on = vec![false; n];
    on[s] = true;
    let mut out = Vec::new();
    rec(s, t, &out_arcs, &mut on, &mut vec![s], &mut out);
    out
}

/// Odd cycles through `w` whose edges alternate with `m` (hole `w`), found by
/// trying every simple cycle through `w`; each cycle once, as a sorted edge
/// set.
pub fn blossom_edge_sets(g: &Graph, m: &Matching, w: VertexId) -> BTreeSet<Vec<(VertexId, VertexId)>> {
    fn rec(
        g: &Graph,
        m: &Matching,
        w: VertexId,
        path: &mut Vec<VertexId>,
        out: &mut BTreeSet<Vec<(VertexId, VertexId)>>,
    ) {
        let last = *path.last().unwrap();
        for &next in g.neighbors(last) {
            if next == w && path.len() >= 3 && path.len() % 2 == 1 {
                let mut cyc = path.clone();
                cyc.push(w);
                let matched = cyc
                    .windows(2)
                    .filter(|e| m.partner(e[0]) == Some(e[1]))
                    .count();
                if matched == (cyc.len() - 2) / 2 {
                    let mut edges: Vec<_> = cyc
                        .windows(2)
                        .map(|e| if e[0] < e[1] { (e[0], e[1]) } else { (e[1], e[0]) })
                        .collect();
                    edges.sort();
                    out.insert(edges);
                }
            } else if next != w && !path.contains(&next) {
                path.push(next);
                rec(g, m, w, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(g, m, w, &mut vec![w], &mut out);
    out
}

/// Permanent by summing over all permutations.
pub fn permanent(rows: &[Vec<f64>]) -> f64 {
    fn rec(rows: &[Vec<f64>], i: usize, used: &mut Vec<bool>) -> f64 {
        if i == rows.len() {
            return 1.0;
        }
        let mut s = 0.0;
        for j in 0..rows.len() {
            if !used[j] && rows[i][j] != 0.0 {
                used[j] = true;
                s += rows[i][j] * rec(rows, i + 1, used);
                used[j] = false;
            }
        }
        s
    }
    rec(rows, 0, &mut vec![false; rows.len()])
}
