//! Blossoms at a hole of a matching: odd cycles through the hole whose edges
//! alternate with the matching everywhere except at the hole itself.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::Matching;

/// An odd cycle `cycle[0], ..., cycle[2k]` (closing back to `cycle[0]`) in
/// which `cycle[hole]` is exposed and exactly `k` edges are matched. Stored
/// with the hole first and the smaller of its two cycle neighbours second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blossom {
    pub cycle: Vec<VertexId>,
    pub hole: usize,
    pub k: usize,
}

impl Blossom {
    fn canonical(mut cycle: Vec<VertexId>) -> Blossom {
        if cycle.len() > 2 && cycle[1] > cycle[cycle.len() - 1] {
            cycle[1..].reverse();
        }
        let k = (cycle.len() - 1) / 2;
        Blossom { cycle, hole: 0, k }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn hole_vertex(&self) -> VertexId {
        self.cycle[self.hole]
    }

    /// Sorted edge set; two blossoms are the same cycle iff these agree.
    pub fn edge_set(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.cycle.len();
        let mut e: Vec<_> = (0..n)
            .map(|i| {
                let (a, b) = (self.cycle[i], self.cycle[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort();
        e
    }

    /// The same cycle viewed with its hole at `v`.
    pub fn rebased(&self, v: VertexId) -> Result<Blossom> {
        let i = self
            .cycle
            .iter()
            .position(|&x| x == v)
            .ok_or(Error::NotOnBlossom(v))?;
        let mut c = self.cycle[i..].to_vec();
        c.extend_from_slice(&self.cycle[..i]);
        Ok(Blossom::canonical(c))
    }

    /// Checks the blossom conditions against `g` and `m`.
    pub fn validate(&self, g: &Graph, m: &Matching) -> bool {
        let n = self.cycle.len();
        if n < 3 || n % 2 == 0 || self.k != n / 2 || self.hole >= n {
            return false;
        }
        if self.cycle.iter().collect::<BTreeSet<_>>().len() != n {
            return false;
        }
        if m.is_matched(self.hole_vertex()) {
            return false;
        }
        let mut matched = 0;
        for i in 0..n {
            let (a, b) = (self.cycle[i], self.cycle[(i + 1) % n]);
            if !g.has_edge(a, b) {
                return false;
            }
            // position of the edge counted from the hole, in either direction
            let from_hole = (i + n - self.hole) % n;
            let is_m = m.partner(a) == Some(b);
            if is_m {
                matched += 1;
            }
            if is_m != (from_hole % 2 == 1) {
                return false;
            }
        }
        matched == self.k
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlossomList {
    pub blossoms: Vec<Blossom>,
    /// The search stopped at the cap; `blossoms` is a prefix of the full list.
    pub truncated: bool,
}

fn check_hole(g: &Graph, m: &Matching, w: VertexId) -> Result<()> {
    g.check(w)?;
    if m.is_matched(w) {
        return Err(Error::NotAHole(w));
    }
    Ok(())
}

/// Depth-first search for alternating cycles through `w`, optionally limited
/// to cycles of exactly `exact_len` vertices. `visit` returns `false` to stop.
fn search(
    g: &Graph,
    m: &Matching,
    w: VertexId,
    exact_len: Option<usize>,
    visit: &mut dyn FnMut(Vec<VertexId>) -> bool,
) {
    fn rec(
        g: &Graph,
        m: &Matching,
        w: VertexId,
        exact_len: Option<usize>,
        path: &mut Vec<VertexId>,
        on: &mut BTreeSet<VertexId>,
        visit: &mut dyn FnMut(Vec<VertexId>) -> bool,
    ) -> bool {
        // path = w, p1, ..., p_{2j}; the last edge is matched (or path = [w])
        let last = *path.last().unwrap();
        if path.len() >= 3 && exact_len.is_none_or(|l| path.len() == l) && g.has_edge(last, w) {
            // one orientation only: the hole's first neighbour is the smaller
            if path[1] < last && !visit(path.clone()) {
                return false;
            }
        }
        if exact_len.is_some_and(|l| path.len() + 2 > l) {
            return true;
        }
        for &x in g.neighbors(last) {
            if on.contains(&x) || m.partner(last) == Some(x) {
                continue;
            }
            let Some(y) = m.partner(x) else { continue };
            if on.contains(&y) {
                continue;
            }
            path.extend([x, y]);
            on.extend([x, y]);
            let go = rec(g, m, w, exact_len, path, on, visit);
            path.truncate(path.len() - 2);
            on.remove(&x);
            on.remove(&y);
            if !go {
                return false;
            }
        }
        true
    }
    let mut on = BTreeSet::from([w]);
    rec(g, m, w, exact_len, &mut vec![w], &mut on, visit);
}

/// All blossoms through the hole `w`, in depth-first order over sorted
/// neighbourhoods, at most `cap` of them.
pub fn enumerate_blossoms(g: &Graph, m: &Matching, w: VertexId, cap: usize) -> Result<BlossomList> {
    check_hole(g, m, w)?;
    let mut blossoms = Vec::new();
    let mut truncated = false;
    search(g, m, w, None, &mut |cycle| {
        if blossoms.len() == cap {
            truncated = true;
            return false;
        }
        blossoms.push(Blossom::canonical(cycle));
        true
    });
    Ok(BlossomList { blossoms, truncated })
}

/// Number of blossoms through `w` without materialising them.
pub fn count_blossoms(g: &Graph, m: &Matching, w: VertexId) -> Result<u64> {
    check_hole(g, m, w)?;
    let mut n = 0u64;
    search(g, m, w, None, &mut |_| {
        n += 1;
        true
    });
    Ok(n)
}

/// Moves the hole of `b` to `v` by flipping the even alternating path from
/// the hole to `v` along the cycle. Edges off that path are untouched.
pub fn rotate(g: &Graph, m: &Matching, b: &Blossom, v: VertexId) -> Result<Matching> {
    if !b.validate(g, m) {
        return Err(Error::InvalidArgument(
            "not a blossom of the given matching".into(),
        ));
    }
    let n = b.cycle.len();
    let at = |i: usize| b.cycle[(b.hole + i) % n];
    let i = (0..n).find(|&i| at(i) == v).ok_or(Error::NotOnBlossom(v))?;
    let path: Vec<VertexId> = if i % 2 == 0 {
        (0..=i).map(at).collect()
    } else {
        std::iter::once(at(0)).chain((i..n).rev().map(at)).collect()
    };
    let mut out = m.clone();
    for pair in path.windows(2).skip(1).step_by(2) {
        out.remove(pair[0]);
    }
    for pair in path.windows(2).step_by(2) {
        out.insert(pair[0], pair[1]);
    }
    Ok(out)
}

/// A shortest blossom through `w`, searching cycle lengths 3, 5, 7, ... in
/// turn; ties go to the first cycle in depth-first order.
pub fn minimum_blossom(g: &Graph, m: &Matching, w: VertexId) -> Result<Option<Blossom>> {
    check_hole(g, m, w)?;
    let n = g.vertex_count();
    let mut len = 3;
    while len <= n {
        let mut found = None;
        search(g, m, w, Some(len), &mut |cycle| {
            found = Some(Blossom::canonical(cycle));
            false
        });
        if found.is_some() {
            return Ok(found);
        }
        len += 2;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn triangle() -> (Graph, Matching) {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let m = Matching::from_pairs(&g, &[(v(1), v(2))]).unwrap();
        (g, m)
    }

    #[test]
    fn triangle_blossom() {
        let (g, m) = triangle();
        let list = enumerate_blossoms(&g, &m, v(0), 10).unwrap();
        assert_eq!(list.blossoms.len(), 1);
        assert!(!list.truncated);
        let b = &list.blossoms[0];
        assert_eq!(b.cycle, vec![v(0), v(1), v(2)]);
        assert_eq!(b.k, 1);
        assert!(b.validate(&g, &m));
        assert_eq!(minimum_blossom(&g, &m, v(0)).unwrap().as_ref(), Some(b));
    }

    #[test]
    fn hole_is_required() {
        let (g, m) = triangle();
        assert_eq!(
            enumerate_blossoms(&g, &m, v(1), 10).unwrap_err(),
            Error::NotAHole(v(1))
        );
    }

    #[test]
    fn even_cycles_have_no_blossoms() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let m = Matching::from_pairs(&g, &[(v(1), v(2)), (v(3), v(4))]).unwrap();
        assert!(enumerate_blossoms(&g, &m, v(0), 10).unwrap().blossoms.is_empty());
        assert_eq!(minimum_blossom(&g, &m, v(0)).unwrap(), None);
    }

    #[test]
    fn rotation_examples() {
        let (g, m) = triangle();
        let b = minimum_blossom(&g, &m, v(0)).unwrap().unwrap();
        assert_eq!(rotate(&g, &m, &b, v(0)).unwrap(), m);
        let to1 = rotate(&g, &m, &b, v(1)).unwrap();
        assert_eq!(to1.partner(v(0)), Some(v(2)));
        assert!(!to1.is_matched(v(1)));
        let to2 = rotate(&g, &m, &b, v(2)).unwrap();
        assert_eq!(to2.partner(v(0)), Some(v(1)));
        let back = rotate(&g, &to2, &b.rebased(v(2)).unwrap(), v(0)).unwrap();
        assert_eq!(back, m);
        assert_eq!(
            rotate(&g, &m, &b, v(7)).unwrap_err(),
            Error::NotOnBlossom(v(7))
        );
    }

    #[test]
    fn three_cycle_beats_five_cycle() {
        // hole 0 with a triangle 0-1-2 and a pentagon 0-3-4-5-6
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 6), (6, 0)],
        )
        .unwrap();
        let m = Matching::from_pairs(&g, &[(v(1), v(2)), (v(3), v(4)), (v(5), v(6))]).unwrap();
        let all = enumerate_blossoms(&g, &m, v(0), 100).unwrap();
        let lens: Vec<usize> = all.blossoms.iter().map(Blossom::len).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 3).count(), 1);
        assert_eq!(lens.iter().filter(|&&l| l == 5).count(), 1);
        assert_eq!(minimum_blossom(&g, &m, v(0)).unwrap().unwrap().len(), 3);
    }

    #[test]
    fn cap_truncates() {
        let mut e = Vec::new();
        for i in 0..7 {
            for j in i + 1..7 {
                e.push((i, j));
            }
        }
        let g = Graph::from_edges(7, &e).unwrap();
        let m = Matching::from_pairs(&g, &[(v(1), v(2)), (v(3), v(4)), (v(5), v(6))]).unwrap();
        let full = enumerate_blossoms(&g, &m, v(0), usize::MAX).unwrap();
        let part = enumerate_blossoms(&g, &m, v(0), 5).unwrap();
        assert!(part.truncated && !full.truncated);
        assert_eq!(part.blossoms[..], full.blossoms[..5]);
        assert_eq!(count_blossoms(&g, &m, v(0)).unwrap(), full.blossoms.len() as u64);
    }

    fn arb_instance() -> impl Strategy<Value = (Graph, Matching)> {
        (3usize..9, any::<u64>()).prop_map(|(n, seed)| {
            let g = crate::corpus::random_graph(n, 0.5, seed);
            let mut m = crate::structure::maximum_matching(&g);
            // free vertex 0 if it is matched
            m.remove(VertexId(0));
            (g, m)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn enumeration_agrees_with_oracle((g, m) in arb_instance()) {
            let w = VertexId(0);
            let list = enumerate_blossoms(&g, &m, w, usize::MAX).unwrap();
            let got: BTreeSet<_> = list.blossoms.iter().map(Blossom::edge_set).collect();
            prop_assert_eq!(got.len(), list.blossoms.len());
            prop_assert_eq!(got, oracle::blossom_edge_sets(&g, &m, w));
            for b in &list.blossoms {
                prop_assert!(b.validate(&g, &m));
            }
            let min = minimum_blossom(&g, &m, w).unwrap();
            prop_assert_eq!(min.map(|b| b.len()), list.blossoms.iter().map(Blossom::len).min());
        }

        #[test]
        fn rotation_round_trips((g, m) in arb_instance()) {
            let w = VertexId(0);
            for b in enumerate_blossoms(&g, &m, w, 50).unwrap().blossoms {
                for &x in &b.cycle {
                    let r = rotate(&g, &m, &b, x).unwrap();
                    r.validate(&g).unwrap();
                    prop_assert_eq!(r.len(), m.len());
                    prop_assert!(!r.is_matched(x));
                    let rb = b.rebased(x).unwrap();
                    prop_assert!(rb.validate(&g, &r));
                    prop_assert_eq!(rotate(&g, &r, &rb, w).unwrap(), m.clone());
                    // only edges on the cycle change
                    let on: BTreeSet<_> = b.cycle.iter().copied().collect();
                    for y in g.vertices().filter(|y| !on.contains(y)) {
                        prop_assert_eq!(r.partner(y), m.partner(y));
                    }
                }
            }
        }
    }
}
