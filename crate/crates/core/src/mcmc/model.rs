use std::cmp::Ordering;

use crate::count::for_each_state;
use crate::error::{Error, Result};
use crate::graph::{Dense, Graph, VertexId};
use crate::matching::{hole_pattern, HolePattern, Matching};
use crate::mcmc::{compensated_sum, ChainKind, Kernel};
use crate::structure::edmonds::NONE;

pub const DEFAULT_STATE_CAP: usize = 5_000_000;

/// Explicit chain on all perfect and two-hole matchings. States are stored as
/// bitsets over the simple edge list, sorted, so lookups are binary searches.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pub kernel: Kernel,
    /// Realised hole patterns, sorted; `pattern_of[i]` indexes into it.
    pub patterns: Vec<HolePattern>,
    pattern_of: Vec<u32>,
    words: usize,
    keys: Vec<u64>,
    ids: Vec<VertexId>,
    ends: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    eid: Vec<Vec<usize>>,
    id_bound: usize,
}

struct Layout {
    dense: Dense,
    ends: Vec<(usize, usize)>,
    eid: Vec<Vec<usize>>,
    words: usize,
}

impl Layout {
    fn new(g: &Graph) -> Self {
        let dense = Dense::new(g);
        let mut ends = Vec::new();
        let mut eid = vec![Vec::new(); dense.len()];
        for a in 0..dense.len() {
            for &b in &dense.adj[a] {
                if a < b {
                    eid[a].push(ends.len());
                    ends.push((a, b));
                } else {
                    let pos = dense.adj[b].binary_search(&a).unwrap();
                    let id = eid[b][pos];
                    eid[a].push(id);
                }
            }
        }
        let words = ends.len().div_ceil(64).max(1);
        Layout {
            dense,
            ends,
            eid,
            words,
        }
    }

    fn encode(&self, mate: &[usize], out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        for (a, &b) in mate.iter().enumerate() {
            if b != NONE && a < b {
                let e = edge_id(&self.dense.adj, &self.eid, a, b);
                out[e / 64] |= 1 << (e % 64);
            }
        }
    }
}

fn edge_id(adj: &[Vec<usize>], eid: &[Vec<usize>], a: usize, b: usize) -> usize {
    eid[a][adj[a].binary_search(&b).expect("matched pair is an edge")]
}

fn decode(key: &[u64], ends: &[(usize, usize)], n: usize) -> Vec<usize> {
    let mut mate = vec![NONE; n];
    for (w, &word) in key.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let e = w * 64 + bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (a, b) = ends[e];
            mate[a] = b;
            mate[b] = a;
        }
    }
    mate
}

/// Enumerates the state space and builds the transition matrix of `kind`
/// on `g`. Fails when there are more than `cap` states.
pub fn build_chain_model(g: &Graph, kind: &ChainKind, cap: usize) -> Result<ChainModel> {
    let layout = Layout::new(g);
    let n = layout.dense.len();
    let words = layout.words;

    let mut keys: Vec<u64> = Vec::new();
    let mut buf = vec![0u64; words];
    let mut count = 0usize;
    let finished = for_each_state(&layout.dense.adj, |mate| {
        count += 1;
        if count > cap {
            return false;
        }
        layout.encode(mate, &mut buf);
        keys.extend_from_slice(&buf);
        true
    });
    if !finished {
        return Err(Error::StateSpaceTooLarge { cap });
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_unstable_by(|&a, &b| keys[a * words..(a + 1) * words].cmp(&keys[b * words..(b + 1) * words]));
    let keys: Vec<u64> = order
        .iter()
        .flat_map(|&i| keys[i * words..(i + 1) * words].iter().copied())
        .collect();

    let pattern_at = |mate: &[usize]| -> HolePattern {
        let h: Vec<usize> = (0..n).filter(|&x| mate[x] == NONE).collect();
        match h.as_slice() {
            [] => HolePattern::Perfect,
            [a, b] => HolePattern::near(layout.dense.ids[*a], layout.dense.ids[*b]).unwrap(),
            _ => unreachable!("enumerated states have zero or two holes"),
        }
    };
    let mut state_patterns = Vec::with_capacity(count);
    for i in 0..count {
        state_patterns.push(pattern_at(&decode(&keys[i * words..(i + 1) * words], &layout.ends, n)));
    }
    let mut patterns = state_patterns.clone();
    patterns.sort_unstable();
    patterns.dedup();
    let pattern_of: Vec<u32> = state_patterns
        .iter()
        .map(|p| patterns.binary_search(p).unwrap() as u32)
        .collect();
    let weights: Vec<f64> = match kind {
        ChainKind::Broder => vec![1.0; patterns.len()],
        ChainKind::Jsv(w) => patterns.iter().map(|&p| w.get(p)).collect::<Result<_>>()?,
    };

    let find = |key: &[u64]| -> usize {
        let (mut lo, mut hi) = (0, count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match keys[mid * words..(mid + 1) * words].cmp(key) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return mid,
            }
        }
        panic!("successor state missing from the enumeration")
    };

    let inv_n = 1.0 / n as f64;
    let mut kernel = Kernel::with_capacity(count, count * 4);
    let mut next = vec![0u64; words];
    let flip = |key: &mut [u64], e: usize| key[e / 64] ^= 1 << (e % 64);
    for i in 0..count {
        let key = &keys[i * words..(i + 1) * words];
        let mate = decode(key, &layout.ends, n);
        let wi = weights[pattern_of[i] as usize];
        let mut row: Vec<(u32, f64)> = Vec::new();
        let mut push = |j: usize, p: f64| {
            let a = (weights[pattern_of[j] as usize] / wi).min(1.0);
            row.push((j as u32, p * a));
        };
        let holes: Vec<usize> = (0..n).filter(|&x| mate[x] == NONE).collect();
        match holes.as_slice() {
            [] => {
                let p = 2.0 / n as f64;
                for a in 0..n {
                    if a < mate[a] {
                        next.copy_from_slice(key);
                        flip(&mut next, edge_id(&layout.dense.adj, &layout.eid, a, mate[a]));
                        push(find(&next), p);
                    }
                }
            }
            &[u, v] => {
                if layout.dense.has_edge(u, v) {
                    next.copy_from_slice(key);
                    flip(&mut next, edge_id(&layout.dense.adj, &layout.eid, u, v));
                    push(find(&next), 2.0 * inv_n);
                }
                for x in 0..n {
                    if x == u || x == v {
                        continue;
                    }
                    let y = mate[x];
                    for w in [u, v] {
                        if layout.dense.has_edge(x, w) {
                            next.copy_from_slice(key);
                            flip(&mut next, edge_id(&layout.dense.adj, &layout.eid, x, y));
                            flip(&mut next, edge_id(&layout.dense.adj, &layout.eid, x, w));
                            push(find(&next), 0.5 * inv_n);
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        let out = compensated_sum(row.iter().map(|&(_, p)| p));
        row.push((i as u32, (1.0 - out).max(0.0)));
        row.sort_unstable_by_key(|&(j, _)| j);
        row.retain(|&(j, p)| p > 0.0 || j as usize == i);
        kernel.push_row(row);
    }

    let z = compensated_sum(pattern_of.iter().map(|&p| weights[p as usize]));
    kernel.pi = pattern_of.iter().map(|&p| weights[p as usize] / z).collect();

    Ok(ChainModel {
        kernel,
        patterns,
        pattern_of,
        words,
        keys,
        ids: layout.dense.ids,
        adj: layout.dense.adj,
        ends: layout.ends,
        eid: layout.eid,
        id_bound: g.id_bound(),
    })
}

impl ChainModel {
    pub fn len(&self) -> usize {
        self.pattern_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern_of.is_empty()
    }

    pub fn pattern(&self, i: usize) -> HolePattern {
        self.patterns[self.pattern_of[i] as usize]
    }

    pub fn matching(&self, i: usize) -> Matching {
        let mate = decode(&self.keys[i * self.words..(i + 1) * self.words], &self.ends, self.ids.len());
        let mut m = Matching::empty(self.id_bound);
        for (a, &b) in mate.iter().enumerate() {
            if b != NONE && a < b {
                m.insert(self.ids[a], self.ids[b]);
            }
        }
        m
    }

    pub fn index_of(&self, m: &Matching) -> Option<usize> {
        let mut key = vec![0u64; self.words];
        let local = |v: VertexId| self.ids.binary_search(&v).ok();
        for (a, b) in m.pairs() {
            let (la, lb) = (local(a)?, local(b)?);
            let e = self.eid[la][self.adj[la].binary_search(&lb).ok()?];
            key[e / 64] |= 1 << (e % 64);
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.keys[mid * self.words..(mid + 1) * self.words].cmp(&key[..]) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Membership vector of the states satisfying `pred`.
    pub fn select(&self, mut pred: impl FnMut(&Matching, HolePattern) -> bool) -> Vec<bool> {
        (0..self.len()).map(|i| pred(&self.matching(i), self.pattern(i))).collect()
    }

    /// Membership vector of the states whose pattern is in `set`.
    pub fn select_patterns(&self, set: &[HolePattern]) -> Vec<bool> {
        (0..self.len()).map(|i| set.contains(&self.pattern(i))).collect()
    }

    /// Stationary mass of each realised pattern.
    pub fn class_masses(&self) -> Vec<(HolePattern, f64)> {
        let mut mass = vec![Vec::new(); self.patterns.len()];
        for (i, &p) in self.pattern_of.iter().enumerate() {
            mass[p as usize].push(self.kernel.pi[i]);
        }
        self.patterns
            .iter()
            .zip(mass)
            .map(|(&p, m)| (p, compensated_sum(m)))
            .collect()
    }

    /// Check that `pattern(i)` agrees with a direct hole computation.
    pub fn verify_patterns(&self, g: &Graph) -> bool {
        (0..self.len()).all(|i| hole_pattern(g, &self.matching(i)).ok() == Some(self.pattern(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::hole_pattern_table;
    use crate::mcmc::HoleWeightFn;
    use crate::oracle;

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn jsv(g: &Graph) -> ChainKind {
        ChainKind::Jsv(HoleWeightFn::jsv(&hole_pattern_table(g)))
    }

    #[test]
    fn k2_broder_model() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let m = build_chain_model(&g, &ChainKind::Broder, 100).unwrap();
        assert_eq!(m.len(), 2);
        for i in 0..2 {
            assert_eq!(m.kernel.get(i, i), 0.0);
            assert_eq!(m.kernel.get(i, 1 - i), 1.0);
            assert_eq!(m.kernel.pi[i], 0.5);
        }
        assert!(m.kernel.is_symmetric());
        // periodic: never within 1/4 of uniform from a point mass
        assert!(m.kernel.mixing_time(0.25, 100).capped);
    }

    #[test]
    fn c4_jsv_balances_pattern_classes() {
        let g = c4();
        let t = hole_pattern_table(&g);
        assert_eq!(t.perfect, 2u8.into());
        let m = build_chain_model(&g, &jsv(&g), 1000).unwrap();
        let masses = m.class_masses();
        let first = masses[0].1;
        for (_, mass) in &masses {
            assert!((mass - first).abs() < 1e-12);
        }
        assert!(m.kernel.row_sum_error() < 1e-12);
        assert!(m.kernel.detailed_balance_error() < 1e-10);
        assert!(m.kernel.stationarity_residual() < 1e-9);

        // from a perfect matching each removal is proposed with probability
        // 1/2 and accepted with min(1, |P| / |N(u, v)|) = 1
        let perfect = (0..m.len()).find(|&i| m.pattern(i).is_perfect()).unwrap();
        let out: Vec<_> = m.kernel.row(perfect).filter(|&(j, _)| j != perfect).collect();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|&(_, p)| p == 0.5));

        let t = m.kernel.mixing_time(0.25, 10_000);
        assert!(!t.capped);
        let (lo, hi) = m.kernel.spectral_bounds(0.25, 100).unwrap();
        assert!(lo <= t.steps as f64 && t.steps as f64 <= hi);
    }

    #[test]
    fn broder_models_are_symmetric_and_uniform() {
        for g in [
            c4(),
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap(),
            crate::gadgets::chain_of_boxes(2).unwrap().graph,
        ] {
            let m = build_chain_model(&g, &ChainKind::Broder, 100_000).unwrap();
            assert!(m.kernel.is_symmetric());
            let u = 1.0 / m.len() as f64;
            assert!(m.kernel.pi.iter().all(|&p| (p - u).abs() < 1e-15));
            assert!(m.verify_patterns(&g));
            assert_eq!(m.len() as u128, hole_pattern_table(&g).total().try_into().unwrap());
        }
    }

    #[test]
    fn constant_weights_give_uniform_pi() {
        let g = crate::gadgets::chain_of_boxes(2).unwrap().graph;
        let m = build_chain_model(&g, &ChainKind::Jsv(HoleWeightFn::constant(3.0).unwrap()), 100_000).unwrap();
        let b = build_chain_model(&g, &ChainKind::Broder, 100_000).unwrap();
        assert_eq!(m.kernel.pi, b.kernel.pi);
        for i in 0..m.len() {
            assert!(m.kernel.row(i).eq(b.kernel.row(i)));
        }
    }

    #[test]
    fn support_matches_the_literal_rule() {
        let g = crate::gadgets::chain_of_boxes(2).unwrap().graph;
        let m = build_chain_model(&g, &jsv(&g), 100_000).unwrap();
        for i in 0..m.len() {
            let here = m.matching(i);
            let got: std::collections::BTreeSet<Matching> = m
                .kernel
                .row(i)
                .filter(|&(j, p)| j != i && p > 0.0)
                .map(|(j, _)| m.matching(j))
                .collect();
            assert_eq!(got, oracle::broder_successors(&g, &here));
            assert_eq!(m.index_of(&here), Some(i));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = crate::gadgets::chain_of_boxes(3).unwrap().graph;
        assert_eq!(
            build_chain_model(&g, &ChainKind::Broder, 10).unwrap_err(),
            Error::StateSpaceTooLarge { cap: 10 }
        );
    }

    #[test]
    fn odd_graphs_have_empty_models() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let m = build_chain_model(&tri, &ChainKind::Broder, 10).unwrap();
        assert!(m.is_empty());
    }
}
