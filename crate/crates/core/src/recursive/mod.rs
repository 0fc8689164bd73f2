//! Recursive counting of perfect matchings through the Gallai-Edmonds
//! decomposition of `G - u`, and its fixed-parameter variant for graphs whose
//! factor-critical pieces have bounded order.
//!
//! For a pivot `u`, let `X = A(G - u) + {u}` and let `Y` be the set of
//! components of `D(G - u)`. Every perfect matching of `G` matches `X`
//! bijectively onto `Y`, matches each component `H` perfectly except for the
//! one vertex hit from `X`, and matches `C(G - u)` internally. So
//!
//! `#PM(G) = #PM(G[C]) * perm(W)`, `W[x][H] = sum over v in N(x) & H of #PM(H - v)`,
//!
//! and the counts on the right are obtained recursively.

mod fpt;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::AddAssign;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::count::{expansion_permanent, ryser_permanent, BipartiteWeighted, CountEstimate, PermanentValue};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::structure::{gallai_edmonds, GallaiEdmonds};

pub use fpt::{fc_contract_minus_v, fc_exact_count_minus_v, fpt_count, Contraction, FptComponent, FptCount};

/// Largest graph on which `Balanced` scans every candidate pivot.
pub const BALANCED_THRESHOLD: usize = 128;

pub type PivotFn = Arc<dyn Fn(&Graph) -> VertexId + Send + Sync>;

#[derive(Clone, Default)]
pub enum PivotStrategy {
    /// Smallest vertex identifier.
    FirstVertex,
    /// The first listed label present in the graph; once none is left,
    /// behaves like `Balanced`.
    NamedFirst(Vec<String>),
    /// Minimises the largest `D` component of `G - u`, then `|C(G - u)|`,
    /// over all `u` when `n <= BALANCED_THRESHOLD`; otherwise `FirstVertex`.
    #[default]
    Balanced,
    Custom(PivotFn),
}

impl fmt::Debug for PivotStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PivotStrategy::FirstVertex => write!(f, "FirstVertex"),
            PivotStrategy::NamedFirst(l) => f.debug_tuple("NamedFirst").field(l).finish(),
            PivotStrategy::Balanced => write!(f, "Balanced"),
            PivotStrategy::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// An approximate permanent routine: must return a value within relative
/// error `eps` of the permanent of `b`.
pub trait PermanentOracle: Send + Sync {
    fn permanent(&self, b: &BipartiteWeighted, eps: f64) -> Result<f64>;
}

#[derive(Clone, Default)]
pub enum PermanentBackend {
    /// Exact sparse expansion; no dimension cap.
    #[default]
    Enumeration,
    /// Exact Ryser formula, refusing dimensions above `cap`.
    Ryser { cap: usize },
    External(Arc<dyn PermanentOracle>),
}

impl fmt::Debug for PermanentBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermanentBackend::Enumeration => write!(f, "Enumeration"),
            PermanentBackend::Ryser { cap } => write!(f, "Ryser {{ cap: {cap} }}"),
            PermanentBackend::External(_) => write!(f, "External(..)"),
        }
    }
}

impl PermanentBackend {
    pub fn is_exact(&self) -> bool {
        !matches!(self, PermanentBackend::External(_))
    }

    fn evaluate(&self, b: &BipartiteWeighted, eps: f64) -> Result<Val> {
        let v = match self {
            PermanentBackend::Enumeration => expansion_permanent(b),
            PermanentBackend::Ryser { cap } => ryser_permanent(b, *cap)?,
            PermanentBackend::External(o) => return o.permanent(b, eps).map(Val::Approx),
        };
        Ok(match v {
            PermanentValue::Exact(x) => Val::Exact(x),
            PermanentValue::Float(x) => Val::Approx(x),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecursionStats {
    pub calls: u64,
    pub max_depth: usize,
    pub memo_hits: u64,
    pub permanent_calls: u64,
    pub max_permanent_dim: usize,
    pub max_d_component: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecursiveCount {
    pub estimate: CountEstimate,
    pub stats: RecursionStats,
}

/// The pivot split of `G`: `x` lists `A(G - u)` in order followed by `u`,
/// `y` the components of `D(G - u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotSplit {
    pub u: VertexId,
    pub ge: GallaiEdmonds,
    pub x: Vec<VertexId>,
    pub y: Vec<Vec<VertexId>>,
}

impl PivotSplit {
    pub fn new(g: &Graph, u: VertexId) -> Result<PivotSplit> {
        let ge = gallai_edmonds(&g.delete_vertices(&[u])?);
        let mut x = ge.a.clone();
        x.push(u);
        let y = ge.d_components.clone();
        Ok(PivotSplit { u, ge, x, y })
    }

    pub fn is_square(&self) -> bool {
        self.x.len() == self.y.len()
    }

    /// `W[x][H] = sum of m[v] over neighbours v of x in H`. Every `D` vertex
    /// adjacent to some `x` must have an entry in `m`.
    pub fn weights<T: Zero + Clone + for<'a> AddAssign<&'a T>>(
        &self,
        g: &Graph,
        m: &BTreeMap<VertexId, T>,
    ) -> Vec<Vec<T>> {
        self.x
            .iter()
            .map(|&x| {
                self.y
                    .iter()
                    .map(|comp| {
                        let mut w = T::zero();
                        for v in g.neighbors(x) {
                            if comp.binary_search(v).is_ok() {
                                w += &m[v];
                            }
                        }
                        w
                    })
                    .collect()
            })
            .collect()
    }
}

/// Picks the pivot for `g` (nonempty) under `strategy`.
pub fn choose_pivot(g: &Graph, strategy: &PivotStrategy) -> Result<VertexId> {
    let first = g
        .vertices()
        .next()
        .ok_or_else(|| Error::InvalidArgument("cannot pivot on an empty graph".into()))?;
    match strategy {
        PivotStrategy::FirstVertex => Ok(first),
        PivotStrategy::NamedFirst(labels) => Ok(labels
            .iter()
            .find_map(|l| g.find_label(l))
            .unwrap_or_else(|| balanced_pivot(g, first))),
        PivotStrategy::Balanced => Ok(balanced_pivot(g, first)),
        PivotStrategy::Custom(f) => {
            let u = f(g);
            if g.contains(u) {
                Ok(u)
            } else {
                Err(Error::InvalidArgument(format!(
                    "custom pivot returned {u}, which is not in the graph"
                )))
            }
        }
    }
}

fn balanced_pivot(g: &Graph, first: VertexId) -> VertexId {
    if g.vertex_count() > BALANCED_THRESHOLD {
        return first;
    }
    g.vertices()
        .min_by_key(|&u| {
            let s = PivotSplit::new(g, u).expect("u is a vertex");
            if !s.is_square() {
                // the count is zero and this pivot proves it at once
                return (0, 0);
            }
            let largest = s.y.iter().map(Vec::len).max().unwrap_or(0);
            (largest, s.ge.c.len())
        })
        .unwrap_or(first)
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Val {
    Exact(BigUint),
    Approx(f64),
}

impl Val {
    fn one(exact: bool) -> Val {
        if exact {
            Val::Exact(BigUint::from(1u8))
        } else {
            Val::Approx(1.0)
        }
    }

    fn zero(exact: bool) -> Val {
        if exact {
            Val::Exact(BigUint::zero())
        } else {
            Val::Approx(0.0)
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Val::Exact(v) => v.is_zero(),
            Val::Approx(v) => *v == 0.0,
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Val::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            Val::Approx(v) => *v,
        }
    }

    fn mul(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::Exact(a), Val::Exact(b)) => Val::Exact(a * b),
            _ => Val::Approx(self.to_f64() * o.to_f64()),
        }
    }

    fn into_estimate(self, eps: f64) -> CountEstimate {
        match self {
            Val::Exact(v) => CountEstimate::exact(v),
            Val::Approx(v) => CountEstimate::approx(v, eps),
        }
    }
}

/// Builds the weight matrix from sub-counts and evaluates its permanent.
pub(crate) fn pivot_permanent(
    g: &Graph,
    split: &PivotSplit,
    m: &BTreeMap<VertexId, Val>,
    backend: &PermanentBackend,
    eps: f64,
) -> Result<Val> {
    let b = if m.values().all(|v| matches!(v, Val::Exact(_))) {
        let ints: BTreeMap<VertexId, BigUint> = m
            .iter()
            .map(|(&k, v)| match v {
                Val::Exact(x) => (k, x.clone()),
                Val::Approx(_) => unreachable!(),
            })
            .collect();
        BipartiteWeighted::integer(split.weights(g, &ints))?
    } else {
        let fl: BTreeMap<VertexId, f64> = m.iter().map(|(&k, v)| (k, v.to_f64())).collect();
        BipartiteWeighted::float(split.weights(g, &fl))?
    };
    backend.evaluate(&b, eps).map_err(|e| match e {
        Error::InSubInstance { .. } => e,
        inner => Error::InSubInstance {
            vertices: g.vertices().collect(),
            inner: Box::new(inner),
        },
    })
}

pub(crate) struct Recursion<'a> {
    pivot: &'a PivotStrategy,
    backend: &'a PermanentBackend,
    exact: bool,
    memo: BTreeMap<Vec<VertexId>, Val>,
    pub(crate) stats: RecursionStats,
}

impl<'a> Recursion<'a> {
    pub(crate) fn new(pivot: &'a PivotStrategy, backend: &'a PermanentBackend) -> Self {
        Recursion {
            pivot,
            backend,
            exact: backend.is_exact(),
            memo: BTreeMap::new(),
            stats: RecursionStats::default(),
        }
    }

    pub(crate) fn count(&mut self, g: &Graph, eps: f64, depth: usize) -> Result<Val> {
        self.stats.calls += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let n = g.vertex_count();
        if n == 0 {
            return Ok(Val::one(self.exact));
        }
        if n % 2 == 1 {
            return Ok(Val::zero(self.exact));
        }
        // with exact arithmetic a vertex set determines its induced count
        let key: Vec<VertexId> = g.vertices().collect();
        if self.exact {
            if let Some(v) = self.memo.get(&key) {
                self.stats.memo_hits += 1;
                return Ok(v.clone());
            }
        }
        let v = self.count_uncached(g, eps, depth)?;
        if self.exact {
            self.memo.insert(key, v.clone());
        }
        Ok(v)
    }

    fn count_uncached(&mut self, g: &Graph, eps: f64, depth: usize) -> Result<Val> {
        let n = g.vertex_count();
        let u = choose_pivot(g, self.pivot)?;
        let split = PivotSplit::new(g, u)?;
        if !split.is_square() {
            return Ok(Val::zero(self.exact));
        }
        let m_c = if split.ge.c.is_empty() {
            Val::one(self.exact)
        } else {
            self.count(&g.induced_subgraph(&split.ge.c)?, eps / 3.0, depth + 1)?
        };
        if m_c.is_zero() {
            return Ok(m_c);
        }
        let sub_eps = eps / (2.0 * n as f64);
        let mut m = BTreeMap::new();
        for comp in &split.y {
            self.stats.max_d_component = self.stats.max_d_component.max(comp.len());
            let h = g.induced_subgraph(comp)?;
            for &v in comp {
                let c = self.count(&h.delete_vertices(&[v])?, sub_eps, depth + 1)?;
                m.insert(v, c);
            }
        }
        self.stats.permanent_calls += 1;
        self.stats.max_permanent_dim = self.stats.max_permanent_dim.max(split.x.len());
        let perm = pivot_permanent(g, &split, &m, self.backend, eps / 3.0)?;
        Ok(m_c.mul(&perm))
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")))
    }
}

/// Counts perfect matchings of `g` by the pivot recursion. With an exact
/// backend the result is exact; with an external backend it is within
/// relative error `eps` provided the backend honours its accuracy contract.
pub fn recursive_count(
    g: &Graph,
    eps: f64,
    pivot: &PivotStrategy,
    backend: &PermanentBackend,
) -> Result<RecursiveCount> {
    check_eps(eps)?;
    let mut r = Recursion::new(pivot, backend);
    let v = r.count(g, eps, 0)?;
    Ok(RecursiveCount {
        estimate: v.into_estimate(eps),
        stats: r.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{count_perfect, Accuracy};
    use crate::corpus::random_graph;
    use crate::gadgets::{chain_of_boxes, counterexample_graph, torpid_gadget};
    use crate::oracle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Mutex;

    fn exact(g: &Graph, pivot: &PivotStrategy) -> BigUint {
        let r = recursive_count(g, 0.1, pivot, &PermanentBackend::Enumeration).unwrap();
        assert_eq!(r.estimate.accuracy, Accuracy::Exact);
        r.estimate.exact.unwrap()
    }

    #[test]
    fn small_cases() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(exact(&k2, &PivotStrategy::FirstVertex), BigUint::from(1u8));
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(exact(&tri, &PivotStrategy::FirstVertex), BigUint::zero());
        assert_eq!(exact(&Graph::new(0), &PivotStrategy::Balanced), BigUint::from(1u8));
        let two_k2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(exact(&two_k2, &PivotStrategy::Balanced), BigUint::from(1u8));
    }

    #[test]
    fn gadgets_match_direct_counts() {
        for g in [
            chain_of_boxes(3).unwrap().graph,
            torpid_gadget(1).unwrap().graph,
        ] {
            for p in [PivotStrategy::FirstVertex, PivotStrategy::Balanced] {
                assert_eq!(exact(&g, &p), count_perfect(&g));
            }
        }
    }

    #[test]
    fn counterexample_with_named_pivots() {
        let gk = counterexample_graph(1).unwrap();
        let labels = (1..=4)
            .flat_map(|i| [format!("u{i}"), format!("v{i}")])
            .collect();
        assert_eq!(
            exact(&gk.graph, &PivotStrategy::NamedFirst(labels)),
            count_perfect(&gk.graph)
        );
    }

    #[test]
    fn line10_identity_with_oracle_subcounts() {
        for seed in 0..40 {
            let g = random_graph(10, 0.4, seed);
            for u in g.vertices() {
                let s = PivotSplit::new(&g, u).unwrap();
                if !s.is_square() {
                    assert_eq!(oracle::count_perfect(&g), 0);
                    continue;
                }
                let mut m = BTreeMap::new();
                for comp in &s.y {
                    let h = g.induced_subgraph(comp).unwrap();
                    for &v in comp {
                        let hv = h.delete_vertices(&[v]).unwrap();
                        m.insert(v, BigUint::from(oracle::count_perfect(&hv)));
                    }
                }
                let w = BipartiteWeighted::integer(s.weights(&g, &m)).unwrap();
                let PermanentValue::Exact(p) = expansion_permanent(&w) else { unreachable!() };
                let mc = oracle::count_perfect(&g.induced_subgraph(&s.ge.c).unwrap());
                assert_eq!(p * mc, BigUint::from(oracle::count_perfect(&g)), "seed {seed} u {u}");
            }
        }
    }

    #[test]
    fn ryser_cap_names_the_sub_instance() {
        let g = chain_of_boxes(4).unwrap().graph;
        let err = recursive_count(&g, 0.1, &PivotStrategy::FirstVertex, &PermanentBackend::Ryser { cap: 0 })
            .unwrap_err();
        match err {
            Error::InSubInstance { vertices, inner } => {
                assert!(!vertices.is_empty());
                assert!(matches!(*inner, Error::DimensionOverCap { cap: 0, .. }));
            }
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn bad_inputs() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(recursive_count(&g, 0.0, &PivotStrategy::Balanced, &PermanentBackend::Enumeration).is_err());
        let custom = PivotStrategy::Custom(Arc::new(|_| VertexId(9)));
        assert!(recursive_count(&g, 0.1, &custom, &PermanentBackend::Enumeration).is_err());
    }

    /// Returns the exact permanent scaled by `1 + s * eps` with `s` cycling
    /// through the given signs, i.e. the worst error the contract allows.
    struct Skewed {
        signs: Vec<f64>,
        at: Mutex<usize>,
    }

    impl PermanentOracle for Skewed {
        fn permanent(&self, b: &BipartiteWeighted, eps: f64) -> Result<f64> {
            let mut at = self.at.lock().unwrap();
            let s = self.signs[*at % self.signs.len()];
            *at += 1;
            let exact = expansion_permanent(b).to_f64();
            Ok(if s >= 0.0 { exact * (1.0 + s * eps) } else { exact / (1.0 - s * eps) })
        }
    }

    #[test]
    fn worst_case_backend_stays_within_eps() {
        for eps in [0.5, 0.1, 0.01] {
            for signs in [vec![1.0], vec![-1.0], vec![1.0, -1.0, -1.0]] {
                for seed in 0..30 {
                    let g = random_graph(12, 0.35, seed);
                    let truth = oracle::count_perfect(&g) as f64;
                    let backend = PermanentBackend::External(Arc::new(Skewed {
                        signs: signs.clone(),
                        at: Mutex::new(0),
                    }));
                    let r = recursive_count(&g, eps, &PivotStrategy::FirstVertex, &backend).unwrap();
                    assert_eq!(r.estimate.accuracy, Accuracy::Relative(eps));
                    assert!(r.estimate.covers(truth), "eps {eps} seed {seed}: {} vs {truth}", r.estimate.value);
                }
            }
        }
    }

    #[test]
    fn perturbed_subcounts_one_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..60 {
            let g = random_graph(12, 0.4, seed);
            let n = g.vertex_count() as f64;
            let truth = oracle::count_perfect(&g) as f64;
            let u = VertexId(0);
            let s = PivotSplit::new(&g, u).unwrap();
            if !s.is_square() || truth == 0.0 {
                continue;
            }
            for eps in [0.2, 0.05] {
                let mut m = BTreeMap::new();
                for comp in &s.y {
                    let h = g.induced_subgraph(comp).unwrap();
                    for &v in comp {
                        let c = oracle::count_perfect(&h.delete_vertices(&[v]).unwrap()) as f64;
                        let f = 1.0 + eps / (2.0 * n);
                        m.insert(v, if rng.gen_bool(0.5) { c * f } else { c / f });
                    }
                }
                let w = BipartiteWeighted::float(s.weights(&g, &m)).unwrap();
                let p = oracle::permanent(&w.float_rows()) * (1.0 + eps / 3.0);
                let mc = oracle::count_perfect(&g.induced_subgraph(&s.ge.c).unwrap()) as f64
                    * (1.0 + eps / 3.0);
                let est = CountEstimate::approx(p * mc, eps);
                assert!(est.covers(truth), "seed {seed} eps {eps}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_backends_agree_with_oracle(n in 0usize..13, p in 0.2f64..0.8, seed: u64) {
            let g = random_graph(n, p, seed);
            let truth = BigUint::from(oracle::count_perfect(&g));
            for pivot in [PivotStrategy::FirstVertex, PivotStrategy::Balanced] {
                for backend in [PermanentBackend::Enumeration, PermanentBackend::Ryser { cap: 24 }] {
                    let r = recursive_count(&g, 0.1, &pivot, &backend).unwrap();
                    prop_assert_eq!(r.estimate.exact.as_ref(), Some(&truth));
                }
            }
        }
    }
}
