//! Branching enumerators over a dense adjacency. Every branch picks an alive
//! vertex of minimum current degree, so degree-one vertices are matched off
//! before any real choice is made.

use std::collections::BTreeMap;

use crate::structure::edmonds::NONE;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    alive: Vec<bool>,
    deg: Vec<usize>,
    remaining: usize,
}

impl<'a> Search<'a> {
    fn new(adj: &'a [Vec<usize>], alive: &[bool]) -> Self {
        let deg = (0..adj.len())
            .map(|v| adj[v].iter().filter(|&&w| alive[w]).count())
            .collect();
        Search {
            adj,
            alive: alive.to_vec(),
            deg,
            remaining: alive.iter().filter(|&&a| a).count(),
        }
    }

    fn min_degree_vertex(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.adj.len() {
            if self.alive[v] && best.is_none_or(|b| self.deg[v] < self.deg[b]) {
                best = Some(v);
                if self.deg[v] == 0 {
                    break;
                }
            }
        }
        best
    }

    fn kill(&mut self, v: usize) {
        self.alive[v] = false;
        self.remaining -= 1;
        for &w in &self.adj[v] {
            self.deg[w] -= 1;
        }
    }

    fn revive(&mut self, v: usize) {
        self.alive[v] = true;
        self.remaining += 1;
        for &w in &self.adj[v] {
            self.deg[w] += 1;
        }
    }

    fn count(&mut self) -> u128 {
        if self.remaining % 2 == 1 {
            return 0;
        }
        let Some(v) = self.min_degree_vertex() else {
            return 1;
        };
        if self.deg[v] == 0 {
            return 0;
        }
        let mut total: u128 = 0;
        self.kill(v);
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.alive[w] {
                self.kill(w);
                total = total.checked_add(self.count()).expect("count overflows u128");
                self.revive(w);
            }
        }
        self.revive(v);
        total
    }
}

/// Perfect matchings of the subgraph induced on `alive`.
pub(crate) fn count_dense(adj: &[Vec<usize>], alive: &[bool]) -> u128 {
    Search::new(adj, alive).count()
}

type PatternKey = (Option<usize>, Option<usize>);

/// Counts of perfect (`(None, None)`) and two-hole (`(Some(a), Some(b))`,
/// `a < b`) matchings over the whole graph.
pub(crate) fn pattern_counts(adj: &[Vec<usize>]) -> BTreeMap<PatternKey, u128> {
    fn rec(s: &mut Search, holes: &mut Vec<usize>, out: &mut BTreeMap<PatternKey, u128>) {
        if holes.len() == 2 {
            let c = s.count();
            if c > 0 {
                let (a, b) = (holes[0].min(holes[1]), holes[0].max(holes[1]));
                *out.entry((Some(a), Some(b))).or_default() += c;
            }
            return;
        }
        let Some(v) = s.min_degree_vertex() else {
            if holes.is_empty() {
                *out.entry((None, None)).or_default() += 1;
            }
            return;
        };
        s.kill(v);
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            if s.alive[w] {
                s.kill(w);
                rec(s, holes, out);
                s.revive(w);
            }
        }
        holes.push(v);
        rec(s, holes, out);
        holes.pop();
        s.revive(v);
    }
    let mut out = BTreeMap::new();
    if adj.len() % 2 == 1 {
        return out;
    }
    let alive = vec![true; adj.len()];
    rec(&mut Search::new(adj, &alive), &mut Vec::new(), &mut out);
    out
}

/// Calls `f` with the partner array (`NONE` for holes) of every perfect and
/// two-hole matching. Returns early with `false` once `f` returns `false`.
pub(crate) fn for_each_state(adj: &[Vec<usize>], mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        s: &mut Search,
        holes: usize,
        mate: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some(v) = s.min_degree_vertex() else {
            return holes == 1 || f(mate);
        };
        if holes == 2 && (s.deg[v] == 0 || s.remaining % 2 == 1) {
            return true;
        }
        s.kill(v);
        for i in 0..s.adj[v].len() {
            let w = s.adj[v][i];
            if s.alive[w] {
                s.kill(w);
                mate[v] = w;
                mate[w] = v;
                let go = rec(s, holes, mate, f);
                mate[v] = NONE;
                mate[w] = NONE;
                s.revive(w);
                if !go {
                    s.revive(v);
                    return false;
                }
            }
        }
        let go = holes == 2 || rec(s, holes + 1, mate, f);
        s.revive(v);
        go
    }
    if adj.len() % 2 == 1 {
        return true;
    }
    let alive = vec![true; adj.len()];
    let mut mate = vec![NONE; adj.len()];
    rec(&mut Search::new(adj, &alive), 0, &mut mate, &mut f)
}
