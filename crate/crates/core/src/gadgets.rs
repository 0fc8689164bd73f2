//! Labelled constructors for the chain of boxes, the torpid gadget, the
//! counterexample graph, and the blossom-counting reduction from directed
//! `s`-`t` paths.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{hole_pattern, Matching};

/// A constructed graph with its named vertices. `parts` groups vertex sets
/// that the constructions refer to as units (the copies `H1`..`H4` of the
/// counterexample graph).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub named: BTreeMap<String, VertexId>,
    pub parts: BTreeMap<String, Vec<VertexId>>,
}

impl GadgetGraph {
    fn new() -> Self {
        GadgetGraph {
            graph: Graph::new(0),
            named: BTreeMap::new(),
            parts: BTreeMap::new(),
        }
    }

    pub fn get(&self, label: &str) -> Option<VertexId> {
        self.named.get(label).copied()
    }

    /// Vertex carrying `label`.
    ///
    /// # Panics
    /// If no vertex has that label.
    pub fn vertex(&self, label: &str) -> VertexId {
        self.get(label)
            .unwrap_or_else(|| panic!("gadget has no vertex labelled {label:?}"))
    }

    fn add(&mut self, label: Option<String>) -> VertexId {
        let v = self.graph.add_vertex();
        if let Some(l) = label {
            self.name(v, l);
        }
        v
    }

    fn name(&mut self, v: VertexId, label: String) {
        self.graph.set_label(v, label.clone()).expect("fresh vertex");
        let prev = self.named.insert(label, v);
        debug_assert!(prev.is_none(), "duplicate gadget label");
    }

    fn edge(&mut self, a: VertexId, b: VertexId) {
        self.graph.add_edge(a, b).expect("gadget endpoints exist");
    }

    /// Chain of `k` boxes whose path runs from `first` to `last`; only the
    /// interior vertices are new. `prefix` namespaces their labels.
    fn boxes_between(&mut self, prefix: &str, k: usize, first: VertexId, last: VertexId) {
        let mut path = Vec::with_capacity(2 * k);
        path.push(first);
        for i in 1..2 * k - 1 {
            path.push(self.add(Some(format!("{prefix}v{i}"))));
        }
        path.push(last);
        for w in path.windows(2) {
            self.edge(w[0], w[1]);
        }
        for i in 0..k {
            let a = self.add(Some(format!("{prefix}a{i}")));
            let b = self.add(Some(format!("{prefix}b{i}")));
            self.edge(path[2 * i], a);
            self.edge(a, b);
            self.edge(b, path[2 * i + 1]);
        }
    }

    /// Copy of the torpid gadget with `u` and `v` supplied by the caller.
    fn torpid_between(&mut self, prefix: &str, k: usize, u: VertexId, v: VertexId) -> Vec<VertexId> {
        const NAMES: [&str; 12] = [
            "a", "x1", "w1", "u", "w2", "x2", "b", "y2", "z2", "v", "z1", "y1",
        ];
        let start = self.graph.id_bound();
        let cycle: Vec<VertexId> = NAMES
            .iter()
            .map(|&name| match name {
                "u" => u,
                "v" => v,
                _ => self.add(Some(format!("{prefix}{name}"))),
            })
            .collect();
        for i in 0..12 {
            self.edge(cycle[i], cycle[(i + 1) % 12]);
        }
        let at = |name: &str| cycle[NAMES.iter().position(|&n| n == name).unwrap()];
        self.edge(at("a"), at("b"));
        let glue = [("w1", "a"), ("a", "z1"), ("w2", "b"), ("b", "z2")];
        for (i, (p, q)) in glue.iter().enumerate() {
            self.boxes_between(&format!("{prefix}B{}.", i + 1), k, at(p), at(q));
        }
        let mut members: Vec<VertexId> = (start..self.graph.id_bound()).map(VertexId::from).collect();
        members.extend([u, v]);
        members.sort();
        members
    }
}

fn positive(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("gadget size k must be at least 1".into()));
    }
    Ok(())
}

/// `B_k`: path `v0..v_{2k-1}` with a box `v_{2i}, a_i, b_i, v_{2i+1}` on every
/// even path edge. `4k` vertices, `2^k` perfect matchings, one near-perfect
/// matching with holes at the two path ends.
pub fn chain_of_boxes(k: usize) -> Result<GadgetGraph> {
    positive(k)?;
    let mut g = GadgetGraph::new();
    let first = g.add(Some("v0".into()));
    let last = g.add(Some(format!("v{}", 2 * k - 1)));
    g.boxes_between("", k, first, last);
    Ok(g)
}

/// `H_k`: a 12-cycle `a x1 w1 u w2 x2 b y2 z2 v z1 y1` with chord `a-b` and a
/// chain of `k` boxes glued onto each of `(w1, a)`, `(a, z1)`, `(w2, b)`,
/// `(b, z2)`. Box interiors are labelled `B1.`..`B4.` in that order.
pub fn torpid_gadget(k: usize) -> Result<GadgetGraph> {
    positive(k)?;
    let mut g = GadgetGraph::new();
    let u = g.add(Some("u".into()));
    let v = g.add(Some("v".into()));
    g.torpid_between("", k, u, v);
    Ok(g)
}

/// `G_k`: the 12-cycle `t1 u1 v1 t2 u2 v2 t3 u3 v3 t4 u4 v4` with each edge
/// `u_i v_i` replaced by a copy of `H_k` whose `u`, `v` are `u_i`, `v_i`. Copy
/// `i` is labelled with prefix `H{i}.` and its vertex set is `parts["H{i}"]`.
pub fn counterexample_graph(k: usize) -> Result<GadgetGraph> {
    positive(k)?;
    let mut g = GadgetGraph::new();
    let mut ring = Vec::new();
    for i in 1..=4 {
        let t = g.add(Some(format!("t{i}")));
        let u = g.add(Some(format!("u{i}")));
        let v = g.add(Some(format!("v{i}")));
        ring.push((t, u, v));
    }
    for i in 0..4 {
        let (t, u, v) = ring[i];
        let next_t = ring[(i + 1) % 4].0;
        g.edge(t, u);
        g.edge(v, next_t);
        let members = g.torpid_between(&format!("H{}.", i + 1), k, u, v);
        g.parts.insert(format!("H{}", i + 1), members);
    }
    Ok(g)
}

/// Indices `i` in `1..=4` with `M` in `S_i`: `u_i` and `v_i` are each a hole of
/// `M` or matched to a vertex outside copy `H_i`.
pub fn classify_s(gk: &GadgetGraph, m: &Matching) -> Result<Vec<usize>> {
    m.validate(&gk.graph)?;
    hole_pattern(&gk.graph, m)?;
    let mut out = Vec::new();
    for i in 1..=4 {
        let part = gk
            .parts
            .get(&format!("H{i}"))
            .ok_or_else(|| Error::InvalidArgument("not a counterexample graph".into()))?;
        let outside = |x: VertexId| match m.partner(x) {
            None => true,
            Some(p) => part.binary_search(&p).is_err(),
        };
        if outside(gk.vertex(&format!("u{i}"))) && outside(gk.vertex(&format!("v{i}"))) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Directed graph on `0..n` given by its arc list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &arcs {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::EndpointOutOfRange { index: x, n });
                }
            }
        }
        Ok(Digraph { n, arcs })
    }
}

/// How each vertex's matched pair `(v_0, v_1)` is realised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairGadget {
    /// A chain of `ell` boxes from `v_0` to `v_1`, matched by the perfect
    /// matching that uses both side paths of every box. Each pair still
    /// admits exactly one alternating crossing.
    Boxes,
    /// `ell` cells in series, each offering two parallel alternating routes,
    /// so a pair admits `2^ell` alternating crossings.
    Doubling,
}

#[derive(Clone, Debug)]
pub struct BlossomReduction {
    pub gadget: GadgetGraph,
    pub matching: Matching,
    pub w: VertexId,
}

impl BlossomReduction {
    /// Adds an isolated second hole `r`, making the matching near-perfect.
    pub fn add_second_hole(&mut self) -> VertexId {
        let r = self.gadget.add(Some("r".into()));
        self.matching = {
            let mut m = Matching::for_graph(&self.gadget.graph);
            for (a, b) in self.matching.pairs() {
                m.insert(a, b);
            }
            m
        };
        r
    }
}

/// Graph and matching whose blossoms through the hole `w` correspond to the
/// directed `s`-`t` paths of `h`. Vertex `x` of `h` becomes the matched pair
/// labelled `x_0`, `x_1` (joined through the pair gadget when `ell > 0`), an
/// arc `(x, y)` becomes the edge `x_1 y_0`, and `w` is joined to `s_0` and
/// `t_1`.
pub fn blossom_reduction(
    h: &Digraph,
    s: usize,
    t: usize,
    ell: usize,
    pair: PairGadget,
) -> Result<BlossomReduction> {
    for x in [s, t] {
        if x >= h.n {
            return Err(Error::EndpointOutOfRange { index: x, n: h.n });
        }
    }
    if s == t {
        return Err(Error::InvalidArgument("s and t must differ".into()));
    }
    let mut g = GadgetGraph::new();
    let mut matched = Vec::new();
    let mut ends = Vec::with_capacity(h.n);
    for x in 0..h.n {
        let x0 = g.add(Some(format!("{x}_0")));
        let x1 = g.add(Some(format!("{x}_1")));
        ends.push((x0, x1));
        if ell == 0 {
            g.edge(x0, x1);
            matched.push((x0, x1));
            continue;
        }
        match pair {
            PairGadget::Boxes => {
                g.boxes_between(&format!("{x}."), ell, x0, x1);
                for i in 0..ell {
                    let a = g.vertex(&format!("{x}.a{i}"));
                    let b = g.vertex(&format!("{x}.b{i}"));
                    let lo = if i == 0 { x0 } else { g.vertex(&format!("{x}.v{}", 2 * i)) };
                    let hi = if i + 1 == ell {
                        x1
                    } else {
                        g.vertex(&format!("{x}.v{}", 2 * i + 1))
                    };
                    matched.push((lo, a));
                    matched.push((b, hi));
                }
            }
            PairGadget::Doubling => {
                let mut prev = x0;
                for j in 0..ell {
                    let p = g.add(Some(format!("{x}.p{j}")));
                    let m = g.add(Some(format!("{x}.m{j}")));
                    matched.push((prev, p));
                    for side in 1..=2 {
                        let q = g.add(Some(format!("{x}.q{j}.{side}")));
                        let r = g.add(Some(format!("{x}.r{j}.{side}")));
                        g.edge(p, q);
                        g.edge(q, r);
                        g.edge(r, m);
                        matched.push((q, r));
                    }
                    g.edge(prev, p);
                    prev = m;
                }
                g.edge(prev, x1);
                matched.push((prev, x1));
            }
        }
    }
    for &(a, b) in &h.arcs {
        if a != b && !g.graph.has_edge(ends[a].1, ends[b].0) {
            g.edge(ends[a].1, ends[b].0);
        }
    }
    let w = g.add(Some("w".into()));
    g.edge(w, ends[s].0);
    g.edge(ends[t].1, w);
    let matching = Matching::from_pairs(&g.graph, &matched)?;
    Ok(BlossomReduction {
        gadget: g,
        matching,
        w,
    })
}
