//! Counting parameterised by the largest order of a factor-critical piece.
//!
//! After discarding edges that lie in no perfect matching, every component
//! `G_i` is split once at a pivot. The sub-counts `#PM(H - v)` for the
//! factor-critical components `H` of `D(G_i - u)` come from contracting
//! degree-two vertices of `H - v`, which leaves a multigraph whose size is
//! bounded in terms of the order of `H` alone.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{check_eps, choose_pivot, pivot_permanent, PermanentBackend, PivotSplit, PivotStrategy, Recursion, Val};
use crate::count::CountEstimate;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::structure::{allowed_edges, fc_order};

/// Outcome of contracting `H - v` for a factor-critical `H` of order `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub order: usize,
    /// Vertices and degree sum of the contracted multigraph.
    pub vertices: usize,
    pub degree_sum: usize,
    pub count: BigUint,
}

impl Contraction {
    /// `3(|V'| - 2) <= sum d <= 2(k - 1) + 2|V'|`.
    pub fn within_bound(&self) -> bool {
        let lower = 3 * self.vertices.saturating_sub(2);
        let upper = 2 * self.order.saturating_sub(1) + 2 * self.vertices;
        lower <= self.degree_sum && self.degree_sum <= upper
    }
}

/// Multigraph on local indices with edge multiplicities and no loops.
struct Multi {
    adj: Vec<BTreeMap<usize, u64>>,
    alive: Vec<bool>,
}

impl Multi {
    fn degree(&self, x: usize) -> u64 {
        self.adj[x].values().sum()
    }

    fn remove(&mut self, x: usize) {
        for y in std::mem::take(&mut self.adj[x]).into_keys() {
            self.adj[y].remove(&x);
        }
        self.alive[x] = false;
    }

    /// Merges `b` into `a`; edges between them would be loops and are dropped.
    fn merge(&mut self, a: usize, b: usize) {
        self.adj[a].remove(&b);
        for (y, mult) in std::mem::take(&mut self.adj[b]) {
            if y == a {
                continue;
            }
            let row = &mut self.adj[y];
            row.remove(&b);
            *row.entry(a).or_insert(0) += mult;
            *self.adj[a].entry(y).or_insert(0) += mult;
        }
        self.alive[b] = false;
    }

    fn count(&mut self) -> BigUint {
        let Some(x) = (0..self.alive.len())
            .filter(|&x| self.alive[x])
            .min_by_key(|&x| self.adj[x].len())
        else {
            return BigUint::one();
        };
        let options: Vec<(usize, u64)> = self.adj[x].iter().map(|(&y, &m)| (y, m)).collect();
        let mut total = BigUint::zero();
        for (y, mult) in options {
            let saved: Vec<_> = [x, y].iter().map(|&z| (z, self.adj[z].clone())).collect();
            self.remove(x);
            self.remove(y);
            let sub = self.count();
            for (z, row) in saved {
                for (&w, &m) in &row {
                    self.adj[w].insert(z, m);
                }
                self.adj[z] = row;
                self.alive[z] = true;
            }
            total += sub * mult;
        }
        total
    }
}

/// Contracts `H - v` (with `H` factor-critical): a vertex of degree one is
/// matched to its neighbour, a vertex with a doubled edge to its only
/// neighbour is matched along either copy, and a vertex with two distinct
/// neighbours is removed together with the merge of those neighbours. What
/// remains has minimum degree three and is counted by branching, with
/// parallel edges as distinct choices.
pub fn fc_contract_minus_v(h: &Graph, v: VertexId) -> Result<Contraction> {
    let order = fc_order(h)?.order;
    let hv = h.delete_vertices(&[v])?;
    let ids: Vec<VertexId> = hv.vertices().collect();
    let local = |x: VertexId| ids.binary_search(&x).expect("vertex of H - v");
    let mut g = Multi {
        adj: vec![BTreeMap::new(); ids.len()],
        alive: vec![true; ids.len()],
    };
    for &(a, b) in hv.edges() {
        if a != b {
            let (a, b) = (local(a), local(b));
            *g.adj[a].entry(b).or_insert(0) += 1;
            *g.adj[b].entry(a).or_insert(0) += 1;
        }
    }
    let mut factor = BigUint::one();
    while let Some(x) = (0..ids.len()).find(|&x| g.alive[x] && g.degree(x) <= 2) {
        let nbrs: Vec<(usize, u64)> = g.adj[x].iter().map(|(&y, &m)| (y, m)).collect();
        match nbrs[..] {
            [] => {
                factor = BigUint::zero();
                break;
            }
            [(y, mult)] => {
                factor *= mult;
                g.remove(x);
                g.remove(y);
            }
            [(a, _), (b, _)] => {
                g.remove(x);
                g.merge(a, b);
            }
            _ => unreachable!("degree at most two"),
        }
    }
    let vertices = g.alive.iter().filter(|&&a| a).count();
    let degree_sum = (0..ids.len()).filter(|&x| g.alive[x]).map(|x| g.degree(x)).sum::<u64>() as usize;
    let count = if factor.is_zero() { factor } else { factor * g.count() };
    Ok(Contraction {
        order,
        vertices,
        degree_sum,
        count,
    })
}

/// `#PM(H - v)` for a factor-critical `H`.
pub fn fc_exact_count_minus_v(h: &Graph, v: VertexId) -> Result<BigUint> {
    Ok(fc_contract_minus_v(h, v)?.count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptComponent {
    pub vertices: Vec<VertexId>,
    pub pivot: VertexId,
    /// Order of each factor-critical component of `D(G_i - u)`.
    pub orders: Vec<usize>,
    pub contractions: Vec<Contraction>,
    /// `C(G_i - u)` was nonempty and was counted recursively instead.
    pub c_fallback: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FptCount {
    pub estimate: CountEstimate,
    pub components: Vec<FptComponent>,
}

/// Counts perfect matchings when every factor-critical component met has
/// order at most `k_max`; fails with `OrderExceeded` otherwise.
pub fn fpt_count(g: &Graph, eps: f64, k_max: usize, backend: &PermanentBackend) -> Result<FptCount> {
    check_eps(eps)?;
    let exact = backend.is_exact();
    let n = g.vertex_count();
    let zero = |components| {
        let v = if exact { Val::Exact(BigUint::zero()) } else { Val::Approx(0.0) };
        Ok(FptCount {
            estimate: v.into_estimate(eps),
            components,
        })
    };
    if n % 2 == 1 {
        return zero(Vec::new());
    }
    let allowed = allowed_edges(g);
    if n > 0 && allowed.is_empty() {
        return zero(Vec::new());
    }
    let reduced = g.filter_edges(|a, b| allowed.binary_search(&(a, b)).is_ok());
    let sub_eps = eps / (2.0 * n.max(1) as f64);
    let mut total = if exact { Val::Exact(BigUint::one()) } else { Val::Approx(1.0) };
    let mut components = Vec::new();
    for comp in reduced.connected_components() {
        let gi = reduced.induced_subgraph(&comp)?;
        let (v, report) = component_count(&gi, sub_eps, k_max, backend)?;
        total = total.mul(&v);
        components.push(report);
    }
    Ok(FptCount {
        estimate: total.into_estimate(eps),
        components,
    })
}

fn component_count(
    g: &Graph,
    eps: f64,
    k_max: usize,
    backend: &PermanentBackend,
) -> Result<(Val, FptComponent)> {
    let exact = backend.is_exact();
    let u = choose_pivot(g, &PivotStrategy::FirstVertex)?;
    let split = PivotSplit::new(g, u)?;
    let mut report = FptComponent {
        vertices: g.vertices().collect(),
        pivot: u,
        orders: Vec::new(),
        contractions: Vec::new(),
        c_fallback: false,
    };
    if !split.is_square() {
        let z = if exact { Val::Exact(BigUint::zero()) } else { Val::Approx(0.0) };
        return Ok((z, report));
    }
    let m_c = if split.ge.c.is_empty() {
        if exact { Val::Exact(BigUint::one()) } else { Val::Approx(1.0) }
    } else {
        report.c_fallback = true;
        let pivot = PivotStrategy::Balanced;
        let mut r = Recursion::new(&pivot, backend);
        r.count(&g.induced_subgraph(&split.ge.c)?, eps / 3.0, 1)?
    };
    let mut m = BTreeMap::new();
    for comp in &split.y {
        let h = g.induced_subgraph(comp)?;
        let order = fc_order(&h)?.order;
        report.orders.push(order);
        if order > k_max {
            return Err(Error::OrderExceeded {
                order,
                k_max,
                vertices: comp.clone(),
            });
        }
        for &v in comp {
            let c = fc_contract_minus_v(&h, v)?;
            let val = if exact {
                Val::Exact(c.count.clone())
            } else {
                Val::Approx(num_traits::ToPrimitive::to_f64(&c.count).unwrap_or(f64::INFINITY))
            };
            m.insert(v, val);
            report.contractions.push(c);
        }
    }
    let perm = pivot_permanent(g, &split, &m, backend, eps / 3.0)?;
    Ok((m_c.mul(&perm), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{random_factor_critical, random_graph};
    use crate::count::count_perfect;
    use crate::gadgets::chain_of_boxes;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn triangle_and_pentagon() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = fc_contract_minus_v(&tri, VertexId(0)).unwrap();
        assert_eq!(c.count, BigUint::one());
        assert_eq!(c.order, 1);
        assert_eq!(c.vertices, 0);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(fc_exact_count_minus_v(&c5, VertexId(2)).unwrap(), BigUint::one());
    }

    #[test]
    fn rejects_non_factor_critical() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            fc_contract_minus_v(&p3, VertexId(0)).unwrap_err(),
            Error::NotFactorCritical
        );
    }

    #[test]
    fn order_cap_is_enforced() {
        // two triangles sharing a vertex and joined to a pendant pair
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (1, 5)],
        )
        .unwrap();
        assert_eq!(
            fpt_count(&g, 0.1, 4, &PermanentBackend::Enumeration).unwrap().estimate.exact,
            Some(count_perfect(&g))
        );
        let k6 = Graph::from_edges(
            6,
            &(0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect::<Vec<_>>(),
        )
        .unwrap();
        match fpt_count(&k6, 0.1, 1, &PermanentBackend::Enumeration) {
            Err(Error::OrderExceeded { order, k_max: 1, .. }) => assert!(order > 1),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            fpt_count(&k6, 0.1, 10, &PermanentBackend::Enumeration).unwrap().estimate.exact,
            Some(BigUint::from(15u8))
        );
    }

    #[test]
    fn boxes_are_bipartite() {
        let g = chain_of_boxes(5).unwrap().graph;
        let r = fpt_count(&g, 0.1, 1, &PermanentBackend::Enumeration).unwrap();
        assert_eq!(r.estimate.exact, Some(BigUint::from(32u8)));
        assert!(r.components.iter().all(|c| c.orders.iter().all(|&k| k == 0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn contraction_count_and_bound(n in 1usize..8, extra in 0usize..5, seed: u64) {
            let h = random_factor_critical(n, extra, seed);
            for v in h.vertices() {
                let c = fc_contract_minus_v(&h, v).unwrap();
                let hv = h.delete_vertices(&[v]).unwrap();
                prop_assert_eq!(c.count.clone(), BigUint::from(oracle::count_perfect(&hv)));
                prop_assert!(c.within_bound(), "{:?}", c);
            }
        }

        #[test]
        fn fpt_agrees_with_oracle(n in 0usize..13, p in 0.15f64..0.6, seed: u64) {
            let g = random_graph(n, p, seed);
            let r = fpt_count(&g, 0.1, usize::MAX, &PermanentBackend::Enumeration).unwrap();
            prop_assert_eq!(r.estimate.exact, Some(BigUint::from(oracle::count_perfect(&g))));
        }
    }
}
