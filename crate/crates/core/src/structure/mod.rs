//! Maximum matchings, the Gallai-Edmonds decomposition, factor-criticality,
//! odd ear decompositions and allowed edges.

mod ears;
pub(crate) mod edmonds;

pub use ears::{ear_decomposition, fc_order, Ear, EarDecomposition, FcOrder};

use crate::graph::{Dense, Graph, VertexId};
use crate::matching::Matching;
use edmonds::NONE;

/// The canonical `(D, A, C)` partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GallaiEdmonds {
    /// Connected components of the subgraph induced on `D`, each sorted,
    /// ordered by smallest member.
    pub d_components: Vec<Vec<VertexId>>,
    pub a: Vec<VertexId>,
    pub c: Vec<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    D,
    A,
    C,
}

impl GallaiEdmonds {
    /// All of `D`, sorted.
    pub fn d(&self) -> Vec<VertexId> {
        let mut d: Vec<VertexId> = self.d_components.iter().flatten().copied().collect();
        d.sort();
        d
    }

    pub fn class_of(&self, v: VertexId) -> Option<Class> {
        if self.a.binary_search(&v).is_ok() {
            Some(Class::A)
        } else if self.c.binary_search(&v).is_ok() {
            Some(Class::C)
        } else if self.d_components.iter().any(|c| c.binary_search(&v).is_ok()) {
            Some(Class::D)
        } else {
            None
        }
    }

    /// Index into `d_components` of the component holding `v`.
    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.d_components
            .iter()
            .position(|c| c.binary_search(&v).is_ok())
    }
}

pub(crate) fn mate_to_matching(g: &Graph, dense: &Dense, mate: &[usize]) -> Matching {
    let mut m = Matching::for_graph(g);
    for (i, &j) in mate.iter().enumerate() {
        if j != NONE && i < j {
            m.insert(dense.ids[i], dense.ids[j]);
        }
    }
    m
}

/// A maximum-cardinality matching. Augmenting searches start from exposed
/// vertices in increasing identifier order and grow breadth-first.
pub fn maximum_matching(g: &Graph) -> Matching {
    let dense = Dense::new(g);
    let mate = edmonds::maximum_matching(&dense.adj, None, vec![NONE; dense.len()]);
    mate_to_matching(g, &dense, &mate)
}

/// Gallai-Edmonds decomposition from one maximum matching: `D` is the set of
/// outer vertices of the alternating forest grown from all exposed vertices,
/// `A` the inner vertices, `C` the unreached ones.
pub fn gallai_edmonds(g: &Graph) -> GallaiEdmonds {
    let dense = Dense::new(g);
    let mate = edmonds::maximum_matching(&dense.adj, None, vec![NONE; dense.len()]);
    let (even, odd) = edmonds::forest_labels(&dense.adj, mate);
    let mut d = Vec::new();
    let mut a = Vec::new();
    let mut c = Vec::new();
    for (i, &v) in dense.ids.iter().enumerate() {
        if even[i] {
            d.push(v);
        } else if odd[i] {
            a.push(v);
        } else {
            c.push(v);
        }
    }
    let d_components = if d.is_empty() {
        Vec::new()
    } else {
        g.induced_subgraph(&d)
            .expect("D is a subset of V")
            .connected_components()
    };
    GallaiEdmonds { d_components, a, c }
}

/// `G - v` has a perfect matching for every vertex `v`.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n % 2 == 0 {
        return false;
    }
    let ge = gallai_edmonds(g);
    ge.d_components.len() == 1 && ge.a.is_empty() && ge.c.is_empty()
}

/// Vertex pairs `{a, b}` (with `a < b`) that lie in at least one perfect
/// matching. Empty when `g` has no perfect matching.
pub fn allowed_edges(g: &Graph) -> Vec<(VertexId, VertexId)> {
    let dense = Dense::new(g);
    let n = dense.len();
    let mate = edmonds::maximum_matching(&dense.adj, None, vec![NONE; n]);
    if mate.contains(&NONE) {
        return Vec::new();
    }
    let mut alive = vec![true; n];
    let mut out = Vec::new();
    for a in 0..n {
        for &b in &dense.adj[a] {
            if b < a {
                continue;
            }
            let allowed = mate[a] == b || {
                // re-pair the partners of a and b inside G - {a, b}
                let (pa, pb) = (mate[a], mate[b]);
                let mut m = mate.clone();
                m[a] = NONE;
                m[b] = NONE;
                m[pa] = NONE;
                m[pb] = NONE;
                alive[a] = false;
                alive[b] = false;
                let mut forest = edmonds::Forest::new(&dense.adj, Some(&alive), m);
                forest.add_root(pa);
                let found = matches!(
                    forest.grow(|_, _, _, _| false),
                    Some(edmonds::Event::Augment { to }) if to == pb
                );
                alive[a] = true;
                alive[b] = true;
                found
            };
            if allowed {
                out.push((dense.ids[a], dense.ids[b]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets;
    use crate::oracle;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn maximum_matching_sizes() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(maximum_matching(&tri).len(), 1);

        let b2 = gadgets::chain_of_boxes(2).unwrap();
        let m = maximum_matching(&b2.graph);
        assert_eq!(m.len(), 4);
        m.validate(&b2.graph).unwrap();

        let p = petersen();
        assert_eq!(maximum_matching(&p).len(), 5);
        assert_eq!(oracle::maximum_matching_size(&p), 5);
    }

    #[test]
    fn maximum_matching_is_deterministic() {
        let p = petersen();
        assert_eq!(maximum_matching(&p), maximum_matching(&p));
    }

    #[test]
    fn gallai_edmonds_small_cases() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let ge = gallai_edmonds(&k2);
        assert!(ge.d_components.is_empty() && ge.a.is_empty());
        assert_eq!(ge.c, vec![v(0), v(1)]);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let ge = gallai_edmonds(&path);
        assert_eq!(ge.d(), vec![v(0), v(2)]);
        assert_eq!(ge.d_components, vec![vec![v(0)], vec![v(2)]]);
        assert_eq!(ge.a, vec![v(1)]);
        assert!(ge.c.is_empty());
        assert_eq!(oracle::d_set(&path), vec![v(0), v(2)]);

        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let ge = gallai_edmonds(&tri);
        assert_eq!(ge.d(), vec![v(0), v(1), v(2)]);
        assert!(ge.a.is_empty() && ge.c.is_empty());
    }

    #[test]
    fn factor_critical_examples() {
        assert!(is_factor_critical(&Graph::new(1)));
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(is_factor_critical(&c5));
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(!is_factor_critical(&k2));
        assert!(!is_factor_critical(&Graph::new(0)));
        // two disjoint triangles: odd components but six vertices
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_factor_critical(&two));
        // triangle plus pendant path of two: odd, not factor-critical
        let tp = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        assert!(!is_factor_critical(&tp));
    }

    #[test]
    fn allowed_edge_examples() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(allowed_edges(&k2), vec![(v(0), v(1))]);

        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(allowed_edges(&p4), vec![(v(0), v(1)), (v(2), v(3))]);

        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(allowed_edges(&c6).len(), 6);

        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(allowed_edges(&tri).is_empty());
    }
}
