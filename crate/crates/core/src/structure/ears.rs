use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, VertexId};
use crate::structure::edmonds::{self, Event, Forest, NONE};
use crate::structure::is_factor_critical;

/// One odd ear, as the vertex sequence of its path. The first and last
/// vertices belong to the part built so far (they coincide for a closed ear);
/// interior vertices are new.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ear {
    pub path: Vec<VertexId>,
}

impl Ear {
    /// Number of edges.
    pub fn len(&self) -> usize {
        self.path.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.path.len() < 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarDecomposition {
    pub base: VertexId,
    pub ears: Vec<Ear>,
}

impl EarDecomposition {
    pub fn order(&self) -> usize {
        self.ears.len()
    }

    /// Every ear is odd, has both ends in the part built so far and only new
    /// interior vertices, and the ears together use each edge of `g` once.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut seen = std::collections::BTreeSet::from([self.base]);
        let mut edges = 0;
        for ear in &self.ears {
            let k = ear.path.len();
            if k < 2 || ear.len() % 2 == 0 {
                return false;
            }
            if !seen.contains(&ear.path[0]) || !seen.contains(&ear.path[k - 1]) {
                return false;
            }
            if !ear.path[1..k - 1].iter().all(|&x| seen.insert(x)) {
                return false;
            }
            if !ear.path.windows(2).all(|w| w[0] == w[1] || g.has_edge(w[0], w[1])) {
                return false;
            }
            edges += ear.len();
        }
        seen.len() == g.vertex_count() && edges == g.edge_count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcOrder {
    pub order: usize,
    pub witness: EarDecomposition,
}

/// Order of a factor-critical graph: `1 + sum(d_u - 2) / 2`, cross-checked
/// against an explicit odd ear decomposition rooted at the smallest vertex.
pub fn fc_order(g: &Graph) -> Result<FcOrder> {
    if !is_factor_critical(g) {
        return Err(Error::NotFactorCritical);
    }
    let excess: i64 = g.vertices().map(|v| g.degree(v) as i64 - 2).sum();
    debug_assert!(excess % 2 == 0 && excess >= -2);
    let order = (1 + excess / 2) as usize;
    let base = g.vertices().next().expect("factor-critical graphs are nonempty");
    let witness = ear_decomposition(g, base)?;
    assert_eq!(
        witness.order(),
        order,
        "ear count disagrees with the degree formula"
    );
    Ok(FcOrder { order, witness })
}

/// Odd ear decomposition of a factor-critical graph starting from `base`.
///
/// The built part `H` always carries a near-perfect matching with its hole at
/// `base`, and every vertex outside `H` is matched outside `H`. Edges with
/// both ends in `H` are added as ears of length one; otherwise an alternating
/// search from `H` (shrunk to a root) runs until the first blossom whose base
/// is the root, and that blossom's cycle is the next ear.
pub fn ear_decomposition(g: &Graph, base: VertexId) -> Result<EarDecomposition> {
    g.check(base)?;
    if !is_factor_critical(g) {
        return Err(Error::NotFactorCritical);
    }
    let dense = Dense::new(g);
    let n = dense.len();
    let b = dense.local[base.index()];
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(x, y)| (dense.local[x.index()], dense.local[y.index()]))
        .collect();
    let mut used = vec![false; edges.len()];

    // perfect matching of G - base
    let mut alive = vec![true; n];
    alive[b] = false;
    let mut mate = edmonds::maximum_matching(&dense.adj, Some(&alive), vec![NONE; n]);

    let mut in_h = vec![false; n];
    in_h[b] = true;
    let mut ears = Vec::new();

    loop {
        // length-one ears: unused edges (including loops) inside H
        for (i, &(x, y)) in edges.iter().enumerate() {
            if !used[i] && in_h[x] && in_h[y] {
                used[i] = true;
                ears.push(Ear {
                    path: vec![dense.ids[x], dense.ids[y]],
                });
            }
        }
        if in_h.iter().all(|&h| h) {
            break;
        }

        // quotient G / H: local 0 is the shrunk root, others are outside H
        let outside: Vec<usize> = (0..n).filter(|&x| !in_h[x]).collect();
        let mut qidx = vec![0usize; n];
        for (i, &x) in outside.iter().enumerate() {
            qidx[x] = i + 1;
        }
        let mut qadj = vec![Vec::new(); outside.len() + 1];
        for &(x, y) in &edges {
            let (qx, qy) = (qidx[x], qidx[y]);
            if qx != qy {
                qadj[qx].push(qy);
                qadj[qy].push(qx);
            }
        }
        for list in &mut qadj {
            list.sort_unstable();
            list.dedup();
        }
        let mut qmate = vec![NONE; outside.len() + 1];
        for (i, &x) in outside.iter().enumerate() {
            debug_assert!(mate[x] != NONE && !in_h[mate[x]]);
            qmate[i + 1] = qidx[mate[x]];
        }
        let mut forest = Forest::new(&qadj, None, qmate);
        forest.add_root(0);
        let ev = forest.grow(|_, _, _, blossom_base| blossom_base == 0);
        let Some(Event::Blossom { v, to }) = ev else {
            return Err(Error::NotFactorCritical);
        };
        let mut cycle: Vec<usize> = forest.path_to_root(v);
        cycle.reverse();
        cycle.extend(forest.path_to_root(to));
        // cycle = root, ..., v, to, ..., root
        let interior: Vec<usize> = cycle[1..cycle.len() - 1]
            .iter()
            .map(|&q| outside[q - 1])
            .collect();

        let first = interior[0];
        let last = *interior.last().unwrap();
        let mut path = Vec::with_capacity(interior.len() + 2);
        let (h0, e0) = take_edge_to_h(&edges, &mut used, &in_h, first);
        path.push(h0);
        let mut prev = first;
        path.push(prev);
        for &x in &interior[1..] {
            take_edge(&edges, &mut used, prev, x);
            path.push(x);
            prev = x;
        }
        let (h1, e1) = take_edge_to_h(&edges, &mut used, &in_h, last);
        debug_assert!(e0 != e1);
        path.push(h1);
        for &x in &interior {
            in_h[x] = true;
        }
        for pair in interior.chunks(2) {
            mate[pair[0]] = pair[1];
            mate[pair[1]] = pair[0];
        }
        ears.push(Ear {
            path: path.into_iter().map(|x| dense.ids[x]).collect(),
        });
    }

    debug_assert!(used.iter().all(|&u| u));
    Ok(EarDecomposition { base, ears })
}

fn take_edge(edges: &[(usize, usize)], used: &mut [bool], a: usize, b: usize) -> usize {
    let i = edges
        .iter()
        .enumerate()
        .position(|(i, &(x, y))| !used[i] && ((x, y) == (a, b) || (x, y) == (b, a)))
        .expect("ear edge exists");
    used[i] = true;
    i
}

fn take_edge_to_h(edges: &[(usize, usize)], used: &mut [bool], in_h: &[bool], a: usize) -> (usize, usize) {
    let (i, h) = edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| !used[i])
        .filter_map(|(i, &(x, y))| {
            if x == a && in_h[y] {
                Some((i, y))
            } else if y == a && in_h[x] {
                Some((i, x))
            } else {
                None
            }
        })
        .min_by_key(|&(_, h)| h)
        .expect("ear endpoint attaches to the built part");
    used[i] = true;
    (h, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_ears(g: &Graph, dec: &EarDecomposition) {
        assert!(dec.is_valid_for(g));
        let mut seen = std::collections::BTreeSet::from([dec.base]);
        let mut edge_count = 0;
        for ear in &dec.ears {
            assert_eq!(ear.len() % 2, 1, "ear {:?} is even", ear.path);
            let k = ear.path.len();
            assert!(seen.contains(&ear.path[0]) && seen.contains(&ear.path[k - 1]));
            for &x in &ear.path[1..k - 1] {
                assert!(seen.insert(x), "interior vertex {x} reused");
            }
            for w in ear.path.windows(2) {
                assert!(w[0] == w[1] || g.has_edge(w[0], w[1]));
            }
            edge_count += ear.len();
        }
        assert_eq!(seen.len(), g.vertex_count());
        assert_eq!(edge_count, g.edge_count());
    }

    #[test]
    fn orders_of_small_graphs() {
        let single = Graph::new(1);
        let r = fc_order(&single).unwrap();
        assert_eq!(r.order, 0);
        assert!(r.witness.ears.is_empty());

        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let r = fc_order(&c5).unwrap();
        assert_eq!(r.order, 1);
        check_ears(&c5, &r.witness);

        let bowtie =
            Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let r = fc_order(&bowtie).unwrap();
        assert_eq!(r.order, 2);
        check_ears(&bowtie, &r.witness);
    }

    #[test]
    fn every_base_gives_a_decomposition() {
        let mut k5 = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                k5.push((i, j));
            }
        }
        let c7_chord = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3)];
        for g in [Graph::from_edges(5, &k5).unwrap(), Graph::from_edges(7, &c7_chord).unwrap()] {
            assert!(is_factor_critical(&g));
            let r = fc_order(&g).unwrap().order;
            for b in g.vertices() {
                let dec = ear_decomposition(&g, b).unwrap();
                assert_eq!(dec.order(), r);
                check_ears(&g, &dec);
            }
        }
    }

    #[test]
    fn non_factor_critical_is_rejected() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(fc_order(&k2).unwrap_err(), Error::NotFactorCritical);
    }
}
