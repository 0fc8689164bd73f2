//! Edmonds alternating-forest search with blossom shrinking on a dense
//! vertex numbering. One search state serves three callers: augmentation
//! (single root), the Gallai-Edmonds labelling (all exposed vertices as
//! roots), and ear extraction (stop at the first blossom based at the root).

use std::collections::VecDeque;

pub(crate) const NONE: usize = usize::MAX;

pub(crate) enum Event {
    /// `to` is exposed and reachable by an odd alternating path ending at it.
    Augment { to: usize },
    /// Even-even edge `(v, to)` closes a blossom accepted by the callback.
    Blossom { v: usize, to: usize },
}

pub(crate) struct Forest<'a> {
    adj: &'a [Vec<usize>],
    alive: Option<&'a [bool]>,
    pub mate: Vec<usize>,
    pub parent: Vec<usize>,
    pub base: Vec<usize>,
    pub even: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Forest<'a> {
    pub fn new(adj: &'a [Vec<usize>], alive: Option<&'a [bool]>, mate: Vec<usize>) -> Self {
        let n = adj.len();
        Forest {
            adj,
            alive,
            mate,
            parent: vec![NONE; n],
            base: (0..n).collect(),
            even: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn is_alive(&self, v: usize) -> bool {
        self.alive.is_none_or(|a| a[v])
    }

    pub fn reset(&mut self) {
        let n = self.adj.len();
        self.parent.iter_mut().for_each(|p| *p = NONE);
        self.base.iter_mut().enumerate().for_each(|(i, b)| *b = i);
        self.even.iter_mut().for_each(|e| *e = false);
        self.queue.clear();
        debug_assert_eq!(self.base.len(), n);
    }

    pub fn add_root(&mut self, r: usize) {
        self.even[r] = true;
        self.queue.push_back(r);
    }

    /// Odd (inner) vertices that are not part of any shrunk blossom.
    pub fn is_odd(&self, v: usize) -> bool {
        !self.even[v] && self.parent[v] != NONE
    }

    fn lca(&self, a: usize, b: usize) -> Option<usize> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut a = a;
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        let mut b = b;
        loop {
            b = self.base[b];
            if seen[b] {
                return Some(b);
            }
            if self.mate[b] == NONE {
                return None;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, blossom: &mut [bool]) {
        while self.base[v] != b {
            blossom[self.base[v]] = true;
            blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn shrink(&mut self, v: usize, to: usize, b: usize) {
        let n = self.adj.len();
        let mut blossom = vec![false; n];
        self.mark_path(v, b, to, &mut blossom);
        self.mark_path(to, b, v, &mut blossom);
        for i in 0..n {
            if blossom[self.base[i]] {
                self.base[i] = b;
                if !self.even[i] {
                    self.even[i] = true;
                    self.queue.push_back(i);
                }
            }
        }
    }

    /// Grows the forest breadth-first. Each blossom is reported to `on_blossom`
    /// before it is shrunk; returning `true` stops the search. Returns the
    /// first augmenting endpoint or blossom event that stopped the search.
    pub fn grow(&mut self, mut on_blossom: impl FnMut(&Self, usize, usize, usize) -> bool) -> Option<Event> {
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if !self.is_alive(to) || self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if self.even[to] {
                    // both outer: same tree gives a blossom, different trees an
                    // augmenting path between two roots
                    let Some(b) = self.lca(v, to) else {
                        return Some(Event::Augment { to: NONE });
                    };
                    if on_blossom(self, v, to, b) {
                        return Some(Event::Blossom { v, to });
                    }
                    self.shrink(v, to, b);
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    let m = self.mate[to];
                    if m == NONE {
                        return Some(Event::Augment { to });
                    }
                    self.even[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }

    /// Flips the augmenting path ending at exposed vertex `to`.
    pub fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }

    /// Even-length alternating path from outer vertex `v` back to its root,
    /// starting with `v`'s matched edge.
    pub fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while self.mate[v] != NONE {
            let m = self.mate[v];
            out.push(m);
            v = self.parent[m];
            out.push(v);
        }
        out
    }
}

/// Maximum matching by repeated single-root searches, roots taken in
/// increasing index order. `initial` must be a valid matching.
pub(crate) fn maximum_matching(adj: &[Vec<usize>], alive: Option<&[bool]>, initial: Vec<usize>) -> Vec<usize> {
    let n = adj.len();
    let mut forest = Forest::new(adj, alive, initial);
    for root in 0..n {
        if forest.mate[root] != NONE || alive.is_some_and(|a| !a[root]) {
            continue;
        }
        forest.reset();
        forest.add_root(root);
        if let Some(Event::Augment { to }) = forest.grow(|_, _, _, _| false) {
            forest.augment(to);
        }
    }
    forest.mate
}

/// Outer/inner labelling of a maximum matching's alternating forest rooted at
/// every exposed vertex: `(even, odd)` flags.
pub(crate) fn forest_labels(adj: &[Vec<usize>], mate: Vec<usize>) -> (Vec<bool>, Vec<bool>) {
    let n = adj.len();
    let mut forest = Forest::new(adj, None, mate);
    for v in 0..n {
        if forest.mate[v] == NONE {
            forest.add_root(v);
        }
    }
    let ev = forest.grow(|_, _, _, _| false);
    debug_assert!(ev.is_none(), "matching passed to forest_labels is not maximum");
    let odd = (0..n).map(|v| forest.is_odd(v)).collect();
    (forest.even, odd)
}
