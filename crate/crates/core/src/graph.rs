//! Undirected multigraphs with stable vertex identifiers.
//!
//! Surgeries (`delete_vertices`, `induced_subgraph`, `quotient`) return new
//! graphs and never renumber surviving vertices, so labels and identifiers
//! assigned by a constructor stay meaningful through any sequence of
//! deletions and contractions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Opaque vertex identifier. Identifiers of deleted vertices are never reused
/// within the lineage of one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId(i as u32)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected multigraph. Parallel edges and loops are stored; matching
/// algorithms see only the simple neighbourhood (`neighbors`), which drops
/// loops and collapses parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    present: Vec<bool>,
    labels: Vec<Option<String>>,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new(0)
    }
}

impl Graph {
    /// Graph on vertices `0..n` with no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            present: vec![true; n],
            labels: vec![None; n],
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Graph on vertices `0..n` with the given edge multiset.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::EndpointOutOfRange { index: x, n });
                }
            }
            g.push_edge(VertexId::from(u), VertexId::from(v));
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId::from(self.present.len());
        self.present.push(true);
        self.labels.push(None);
        self.adj.push(Vec::new());
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        self.push_edge(u, v);
        Ok(())
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId) {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.push((a, b));
        if a != b {
            insert_sorted(&mut self.adj[a.index()], b);
            insert_sorted(&mut self.adj[b.index()], a);
        }
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) -> Result<()> {
        self.check(v)?;
        self.labels[v.index()] = Some(label.into());
        Ok(())
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v.index()).and_then(|l| l.as_deref())
    }

    /// Vertex carrying `label`, if any.
    pub fn find_label(&self, label: &str) -> Option<VertexId> {
        self.vertices().find(|&v| self.label(v) == Some(label))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.present.get(v.index()).copied().unwrap_or(false)
    }

    pub(crate) fn check(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// One past the largest identifier ever issued in this graph's lineage.
    pub fn id_bound(&self) -> usize {
        self.present.len()
    }

    /// Present vertices in increasing identifier order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| VertexId::from(i))
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count() == 0
    }

    /// Edge multiset, each edge normalised so that the first endpoint is the
    /// smaller identifier.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Simple neighbourhood: sorted, no loops, no repeats.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.contains(u) && self.contains(v) && self.adj[u.index()].binary_search(&v).is_ok()
    }

    /// Multigraph degree: loops count twice, parallel edges count separately.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Number of parallel copies of the edge `u`-`v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.iter().filter(|&&e| e == (a, b)).count()
    }

    /// Induced graph on `V \ removed`. Surviving identifiers are unchanged.
    pub fn delete_vertices(&self, removed: &[VertexId]) -> Result<Graph> {
        for &v in removed {
            self.check(v)?;
        }
        let mut keep = self.present.clone();
        for &v in removed {
            keep[v.index()] = false;
        }
        Ok(self.restrict(&keep))
    }

    /// Induced subgraph on `kept`.
    pub fn induced_subgraph(&self, kept: &[VertexId]) -> Result<Graph> {
        let mut keep = vec![false; self.present.len()];
        for &v in kept {
            self.check(v)?;
            keep[v.index()] = true;
        }
        Ok(self.restrict(&keep))
    }

    /// Same vertices and labels, keeping only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(VertexId, VertexId) -> bool) -> Graph {
        let mut g = Graph {
            present: self.present.clone(),
            labels: self.labels.clone(),
            edges: Vec::new(),
            adj: vec![Vec::new(); self.present.len()],
        };
        for &(a, b) in &self.edges {
            if keep(a, b) {
                g.push_edge(a, b);
            }
        }
        g
    }

    fn restrict(&self, keep: &[bool]) -> Graph {
        let mut g = Graph {
            present: keep.to_vec(),
            labels: self
                .labels
                .iter()
                .zip(keep)
                .map(|(l, &k)| if k { l.clone() } else { None })
                .collect(),
            edges: Vec::new(),
            adj: vec![Vec::new(); keep.len()],
        };
        for &(a, b) in &self.edges {
            if keep[a.index()] && keep[b.index()] {
                g.edges.push((a, b));
            }
        }
        for v in 0..keep.len() {
            if keep[v] {
                g.adj[v] = self.adj[v]
                    .iter()
                    .copied()
                    .filter(|w| keep[w.index()])
                    .collect();
            }
        }
        g
    }

    /// Quotient `G / H`: delete the edges of `H` (one instance per listed
    /// pair), then merge all of `H`'s vertices into one fresh vertex. Other
    /// edges are re-targeted with their multiplicity; edges with both ends in
    /// `H` that are not in `H`'s edge list become loops.
    pub fn quotient(
        &self,
        h_vertices: &[VertexId],
        h_edges: &[(VertexId, VertexId)],
    ) -> Result<(Graph, VertexId)> {
        let mut in_h = vec![false; self.present.len()];
        for &v in h_vertices {
            self.check(v)?;
            in_h[v.index()] = true;
        }
        let mut remaining = self.edges.clone();
        for &(u, v) in h_edges {
            let key = if u <= v { (u, v) } else { (v, u) };
            if !in_h[u.index()] || !in_h[v.index()] {
                return Err(Error::InvalidArgument(format!(
                    "edge {u}-{v} of H has an endpoint outside H's vertex set"
                )));
            }
            match remaining.iter().position(|&e| e == key) {
                Some(i) => {
                    remaining.remove(i);
                }
                None => return Err(Error::NotAnEdge(u, v)),
            }
        }
        let mut present = self.present.clone();
        let mut labels = self.labels.clone();
        for (i, &h) in in_h.iter().enumerate() {
            if h {
                present[i] = false;
                labels[i] = None;
            }
        }
        let fresh = VertexId::from(present.len());
        present.push(true);
        labels.push(None);
        let mut g = Graph {
            adj: vec![Vec::new(); present.len()],
            present,
            labels,
            edges: Vec::new(),
        };
        let map = |x: VertexId| if in_h[x.index()] { fresh } else { x };
        for (a, b) in remaining {
            g.push_edge(map(a), map(b));
        }
        Ok((g, fresh))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.present.len()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s.index()] {
                continue;
            }
            seen[s.index()] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if !seen[y.index()] {
                        seen[y.index()] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Two-colouring `(left, right)` if the graph is bipartite (loops make it
    /// non-bipartite).
    pub fn bipartition(&self) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
        if self.edges.iter().any(|&(a, b)| a == b) {
            return None;
        }
        let mut side: Vec<Option<bool>> = vec![None; self.present.len()];
        for s in self.vertices() {
            if side[s.index()].is_some() {
                continue;
            }
            side[s.index()] = Some(false);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let sx = side[x.index()].unwrap();
                for &y in self.neighbors(x) {
                    match side[y.index()] {
                        None => {
                            side[y.index()] = Some(!sx);
                            stack.push(y);
                        }
                        Some(sy) if sy == sx => return None,
                        _ => {}
                    }
                }
            }
        }
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for v in self.vertices() {
            if side[v.index()] == Some(false) {
                left.push(v);
            } else {
                right.push(v);
            }
        }
        Some((left, right))
    }

    /// Vertex set as an ordered set.
    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices().collect()
    }
}

fn insert_sorted(list: &mut Vec<VertexId>, v: VertexId) {
    if let Err(pos) = list.binary_search(&v) {
        list.insert(pos, v);
    }
}

/// Compact view used by the combinatorial kernels: present vertices renumbered
/// `0..n` in identifier order, simple adjacency.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub ids: Vec<VertexId>,
    pub local: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

pub(crate) const ABSENT: usize = usize::MAX;

impl Dense {
    pub fn new(g: &Graph) -> Dense {
        let ids: Vec<VertexId> = g.vertices().collect();
        let mut local = vec![ABSENT; g.id_bound()];
        for (i, v) in ids.iter().enumerate() {
            local[v.index()] = i;
        }
        let adj = ids
            .iter()
            .map(|&v| g.neighbors(v).iter().map(|w| local[w.index()]).collect())
            .collect();
        Dense { ids, local, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn build_small_graphs() {
        let empty = Graph::from_edges(0, &[]).unwrap();
        assert_eq!(empty.vertex_count(), 0);
        assert_eq!(empty.edge_count(), 0);

        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(k2.has_edge(v(0), v(1)));

        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.vertices().all(|x| tri.degree(x) == 2));
    }

    #[test]
    fn out_of_range_endpoint_is_reported() {
        let err = Graph::from_edges(3, &[(0, 1), (1, 7)]).unwrap_err();
        assert_eq!(err, Error::EndpointOutOfRange { index: 7, n: 3 });
    }

    #[test]
    fn deletion_keeps_identifiers() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let g = k2.delete_vertices(&[v(0)]).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![v(1)]);
        assert_eq!(g.edge_count(), 0);

        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let g = tri.delete_vertices(&[v(0)]).unwrap();
        assert_eq!(g.edges(), &[(v(1), v(2))]);
        assert_eq!(g.id_bound(), 3);

        assert_eq!(
            tri.delete_vertices(&[v(5)]).unwrap_err(),
            Error::UnknownVertex(v(5))
        );
        let gone = tri.delete_vertices(&[v(1)]).unwrap();
        assert!(gone.delete_vertices(&[v(1)]).is_err());
    }

    #[test]
    fn quotient_of_triangle_edge_gives_parallel_pair() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (q, h) = tri.quotient(&[v(0), v(1)], &[(v(0), v(1))]).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(h, v(3));
        assert_eq!(q.multiplicity(v(2), h), 2);
        assert_eq!(q.neighbors(h), &[v(2)]);
    }

    #[test]
    fn quotient_of_whole_k2_is_bare_vertex() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (q, h) = k2.quotient(&[v(0), v(1)], &[(v(0), v(1))]).unwrap();
        assert_eq!(q.vertices().collect::<Vec<_>>(), vec![h]);
        assert_eq!(q.edge_count(), 0);
    }

    #[test]
    fn quotient_of_bowtie_triangle() {
        // triangles {0,1,2} and {2,3,4} share vertex 2
        let bowtie =
            Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let tri = [v(0), v(1), v(2)];
        let tri_edges = [(v(0), v(1)), (v(1), v(2)), (v(0), v(2))];
        let (q, h) = bowtie.quotient(&tri, &tri_edges).unwrap();
        let degree_sum: usize = q.vertices().map(|x| q.degree(x)).sum();
        assert_eq!(degree_sum, 2 * 6 - 2 * 3);
        assert_eq!(q.degree(h), 2);
        assert!(q.has_edge(v(3), v(4)));

        // contracting without deleting an internal edge leaves a loop
        let (q, h) = bowtie.quotient(&tri, &tri_edges[..2]).unwrap();
        assert_eq!(q.multiplicity(h, h), 1);
        assert_eq!(q.degree(h), 4);
        assert!(q.neighbors(h).iter().all(|&x| x != h));
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (l, r) = c4.bipartition().unwrap();
        assert_eq!((l.len(), r.len()), (2, 2));
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.bipartition().is_none());
    }
}
