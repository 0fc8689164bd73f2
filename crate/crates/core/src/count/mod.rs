//! Exact counting: perfect and near-perfect matchings, the hole-pattern
//! table, and exact permanents.

mod enumerate;
mod permanent;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::Result;
use crate::graph::{Dense, Graph, VertexId};
use crate::matching::HolePattern;

pub(crate) use enumerate::{count_dense, for_each_state};
pub use permanent::{
    expansion_permanent, ryser_permanent, BipartiteWeighted, Entries, PermanentValue,
    DEFAULT_RYSER_CAP,
};

/// Number of perfect matchings, by branching on a minimum-degree vertex after
/// matching off forced degree-one vertices.
pub fn count_perfect(g: &Graph) -> BigUint {
    let dense = Dense::new(g);
    let alive = vec![true; dense.len()];
    count_dense(&dense.adj, &alive).into()
}

/// Number of near-perfect matchings with holes exactly at `u` and `v`.
pub fn count_near(g: &Graph, u: VertexId, v: VertexId) -> Result<BigUint> {
    if u == v {
        return Err(crate::Error::InvalidArgument(
            "near-perfect holes must be distinct".into(),
        ));
    }
    Ok(count_perfect(&g.delete_vertices(&[u, v])?))
}

/// `|P|` and `|N(u, v)|` for every pair with at least one matching.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolePatternTable {
    pub perfect: BigUint,
    pub near: BTreeMap<(VertexId, VertexId), BigUint>,
}

impl HolePatternTable {
    /// Count for `pattern`; zero when the pattern is not realised.
    pub fn get(&self, pattern: HolePattern) -> BigUint {
        match pattern {
            HolePattern::Perfect => self.perfect.clone(),
            HolePattern::Near(u, v) => self.near.get(&(u, v)).cloned().unwrap_or_default(),
        }
    }

    /// `|Omega| = |P| + sum |N(u, v)|`.
    pub fn total(&self) -> BigUint {
        self.near.values().fold(self.perfect.clone(), |acc, c| acc + c)
    }

    /// Realised patterns (positive count), perfect first.
    pub fn patterns(&self) -> Vec<HolePattern> {
        let mut out = Vec::new();
        if !self.perfect.is_zero() {
            out.push(HolePattern::Perfect);
        }
        out.extend(self.near.keys().map(|&(u, v)| HolePattern::Near(u, v)));
        out
    }

    pub fn get_f64(&self, pattern: HolePattern) -> f64 {
        self.get(pattern).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// All hole-pattern counts in one pass: the search branches until two holes
/// are placed, then counts the perfect matchings of the remainder.
pub fn hole_pattern_table(g: &Graph) -> HolePatternTable {
    let dense = Dense::new(g);
    let counts = enumerate::pattern_counts(&dense.adj);
    let mut table = HolePatternTable::default();
    for ((a, b), c) in counts {
        match (a, b) {
            (None, None) => table.perfect = c.into(),
            (Some(a), Some(b)) => {
                let p = HolePattern::near(dense.ids[a], dense.ids[b]).unwrap();
                if let HolePattern::Near(x, y) = p {
                    table.near.insert((x, y), c.into());
                }
            }
            _ => unreachable!("single-hole states are never produced"),
        }
    }
    table
}

/// Result of a counting algorithm with its accuracy guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct CountEstimate {
    pub value: f64,
    /// Exact integer value, present exactly when `accuracy` is `Exact`.
    pub exact: Option<BigUint>,
    pub accuracy: Accuracy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Accuracy {
    Exact,
    /// True value lies in `[value / (1 + eps), value * (1 + eps)]`.
    Relative(f64),
}

impl CountEstimate {
    pub fn exact(v: BigUint) -> Self {
        CountEstimate {
            value: v.to_f64().unwrap_or(f64::INFINITY),
            exact: Some(v),
            accuracy: Accuracy::Exact,
        }
    }

    pub fn approx(value: f64, eps: f64) -> Self {
        CountEstimate {
            value,
            exact: None,
            accuracy: Accuracy::Relative(eps),
        }
    }

    /// Whether `truth` is consistent with the estimate's guarantee.
    pub fn covers(&self, truth: f64) -> bool {
        match self.accuracy {
            Accuracy::Exact => self.value == truth,
            Accuracy::Relative(eps) => {
                if truth == 0.0 {
                    self.value == 0.0
                } else {
                    truth >= self.value / (1.0 + eps) && truth <= self.value * (1.0 + eps)
                }
            }
        }
    }
}
