use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

const UNMATCHED: u32 = u32::MAX;

/// A matching as a partial involution on vertex identifiers. Matched pairs are
/// vertex pairs, not edge instances, so parallel edges do not multiply
/// matchings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    mate: Vec<u32>,
}

impl Matching {
    /// Empty matching over identifiers `0..id_bound`.
    pub fn empty(id_bound: usize) -> Self {
        Matching {
            mate: vec![UNMATCHED; id_bound],
        }
    }

    /// Empty matching sized for `g`.
    pub fn for_graph(g: &Graph) -> Self {
        Matching::empty(g.id_bound())
    }

    /// Validated matching of `g` built from vertex pairs.
    pub fn from_pairs(g: &Graph, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut m = Matching::for_graph(g);
        for &(u, v) in pairs {
            if !g.has_edge(u, v) {
                g.check(u)?;
                g.check(v)?;
                return Err(Error::NotAnEdge(u, v));
            }
            for x in [u, v] {
                if m.is_matched(x) {
                    return Err(Error::DoublyMatched(x));
                }
            }
            m.insert(u, v);
        }
        Ok(m)
    }

    pub fn partner(&self, v: VertexId) -> Option<VertexId> {
        match self.mate.get(v.index()) {
            Some(&p) if p != UNMATCHED => Some(VertexId(p)),
            _ => None,
        }
    }

    pub fn is_matched(&self, v: VertexId) -> bool {
        self.partner(v).is_some()
    }

    /// Adds `u`-`v` without validation; both must currently be unmatched.
    pub fn insert(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(!self.is_matched(u) && !self.is_matched(v) && u != v);
        let need = u.index().max(v.index()) + 1;
        if self.mate.len() < need {
            self.mate.resize(need, UNMATCHED);
        }
        self.mate[u.index()] = v.0;
        self.mate[v.index()] = u.0;
    }

    /// Removes the matched edge at `v`, returning the former partner.
    pub fn remove(&mut self, v: VertexId) -> Option<VertexId> {
        let p = self.partner(v)?;
        self.mate[v.index()] = UNMATCHED;
        self.mate[p.index()] = UNMATCHED;
        Some(p)
    }

    /// Matched pairs `(u, v)` with `u < v`, in increasing order of `u`.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(i, &p)| p != UNMATCHED && (i as u32) < p)
            .map(|(i, &p)| (VertexId::from(i), VertexId(p)))
            .collect()
    }

    /// Number of matched edges.
    pub fn len(&self) -> usize {
        self.mate.iter().filter(|&&p| p != UNMATCHED).count() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that every matched pair is an edge of `g` between present
    /// vertices and that the partner map is an involution.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for (i, &p) in self.mate.iter().enumerate() {
            if p == UNMATCHED {
                continue;
            }
            let (u, v) = (VertexId::from(i), VertexId(p));
            if self.partner(v) != Some(u) {
                return Err(Error::DoublyMatched(v));
            }
            if !g.has_edge(u, v) {
                return Err(Error::NotAnEdge(u, v));
            }
        }
        Ok(())
    }

    /// Restriction to pairs with both ends satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(VertexId) -> bool) -> Matching {
        let mut m = Matching::empty(self.mate.len());
        for (u, v) in self.pairs() {
            if keep(u) && keep(v) {
                m.insert(u, v);
            }
        }
        m
    }
}

/// Hole pattern of a state of the perfect/near-perfect chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HolePattern {
    Perfect,
    /// Holes at two distinct vertices, stored with the smaller id first.
    Near(VertexId, VertexId),
}

impl HolePattern {
    /// Unordered near-perfect pattern; `None` when `u == v`.
    pub fn near(u: VertexId, v: VertexId) -> Option<Self> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(HolePattern::Near(u, v)),
            std::cmp::Ordering::Greater => Some(HolePattern::Near(v, u)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn is_perfect(&self) -> bool {
        matches!(self, HolePattern::Perfect)
    }
}

impl fmt::Display for HolePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolePattern::Perfect => write!(f, "perfect"),
            HolePattern::Near(u, v) => write!(f, "near({u},{v})"),
        }
    }
}

/// Unmatched vertices of `g` under `m`, in identifier order.
pub fn holes(g: &Graph, m: &Matching) -> Vec<VertexId> {
    g.vertices().filter(|&v| !m.is_matched(v)).collect()
}

/// Classifies `m` as perfect or two-hole near-perfect; any other hole count
/// is outside the chain's state space.
pub fn hole_pattern(g: &Graph, m: &Matching) -> Result<HolePattern> {
    let h = holes(g, m);
    match h.as_slice() {
        [] => Ok(HolePattern::Perfect),
        [u, v] => Ok(HolePattern::Near(*u, *v)),
        _ => Err(Error::NotInOmega { holes: h.len() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn k2_patterns() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let full = Matching::from_pairs(&k2, &[(v(0), v(1))]).unwrap();
        assert!(holes(&k2, &full).is_empty());
        assert_eq!(hole_pattern(&k2, &full).unwrap(), HolePattern::Perfect);

        let empty = Matching::for_graph(&k2);
        assert_eq!(holes(&k2, &empty), vec![v(0), v(1)]);
        assert_eq!(
            hole_pattern(&k2, &empty).unwrap(),
            HolePattern::near(v(1), v(0)).unwrap()
        );
    }

    #[test]
    fn odd_hole_count_is_rejected() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let m = Matching::from_pairs(&path, &[(v(0), v(1))]).unwrap();
        assert_eq!(holes(&path, &m), vec![v(2)]);
        assert_eq!(
            hole_pattern(&path, &m).unwrap_err(),
            Error::NotInOmega { holes: 1 }
        );
    }

    #[test]
    fn invalid_pairs_are_rejected() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            Matching::from_pairs(&path, &[(v(0), v(2))]).unwrap_err(),
            Error::NotAnEdge(v(0), v(2))
        );
        assert_eq!(
            Matching::from_pairs(&path, &[(v(0), v(1)), (v(1), v(2))]).unwrap_err(),
            Error::DoublyMatched(v(1))
        );
    }

    #[test]
    fn near_pattern_is_unordered() {
        assert_eq!(HolePattern::near(v(3), v(1)), HolePattern::near(v(1), v(3)));
        assert_eq!(HolePattern::near(v(2), v(2)), None);
    }

    #[test]
    fn validity_survives_edge_removal() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = Matching::from_pairs(&c4, &[(v(0), v(1)), (v(2), v(3))]).unwrap();
        let g = c4.delete_vertices(&[]).unwrap();
        let mut smaller = m.clone();
        smaller.remove(v(2));
        assert!(smaller.validate(&g).is_ok());
        assert_eq!(smaller.len(), 1);
    }
}
