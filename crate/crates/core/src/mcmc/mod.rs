//! The Broder chain and Metropolis chains weighted by hole pattern, as
//! samplers and as explicit transition matrices.

mod kernel;
mod model;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::count::HolePatternTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matching::{hole_pattern, HolePattern, Matching};

pub use kernel::{CutReport, Kernel, MixingTime};
pub(crate) use kernel::compensated_sum;
pub use model::{build_chain_model, ChainModel, DEFAULT_STATE_CAP};

/// Positive weight per hole pattern. Either an explicit table, a constant,
/// or both (the constant covers patterns missing from the table).
#[derive(Clone, Debug, PartialEq)]
pub struct HoleWeightFn {
    table: BTreeMap<HolePattern, f64>,
    fallback: Option<f64>,
}

impl HoleWeightFn {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("weight {c} is not positive")));
        }
        Ok(HoleWeightFn {
            table: BTreeMap::new(),
            fallback: Some(c),
        })
    }

    pub fn from_map(table: BTreeMap<HolePattern, f64>) -> Result<Self> {
        if let Some((p, w)) = table.iter().find(|(_, &w)| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "weight {w} for {p} is not positive"
            )));
        }
        Ok(HoleWeightFn {
            table,
            fallback: None,
        })
    }

    /// `w(pattern) = 1 / |N(pattern)|` over realised patterns, which makes
    /// every hole pattern carry the same stationary mass.
    pub fn jsv(table: &HolePatternTable) -> Self {
        let map = table
            .patterns()
            .into_iter()
            .map(|p| (p, 1.0 / table.get_f64(p)))
            .collect();
        HoleWeightFn {
            table: map,
            fallback: None,
        }
    }

    pub fn get(&self, p: HolePattern) -> Result<f64> {
        self.table
            .get(&p)
            .copied()
            .or(self.fallback)
            .ok_or(Error::MissingWeight(p))
    }

    /// Weight file: `perfect <w>` and `<u> <v> <w>` lines, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| err("bad weight"));
            let id = |s: &str| s.parse::<u32>().map(VertexId).map_err(|_| err("bad vertex"));
            let (p, w) = match toks.as_slice() {
                ["perfect", w] => (HolePattern::Perfect, num(w)?),
                [u, v, w] => (
                    HolePattern::near(id(u)?, id(v)?).ok_or_else(|| err("holes must differ"))?,
                    num(w)?,
                ),
                _ => return Err(err("expected `perfect <w>` or `<u> <v> <w>`")),
            };
            map.insert(p, w);
        }
        HoleWeightFn::from_map(map)
    }
}

/// Which chain to run. `Broder` is the unfiltered edge-shift chain; `Jsv`
/// applies a Metropolis filter with the given hole-pattern weights.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainKind {
    Broder,
    Jsv(HoleWeightFn),
}

impl ChainKind {
    fn acceptance(&self, from: HolePattern, to: HolePattern) -> Result<f64> {
        match self {
            ChainKind::Broder => Ok(1.0),
            ChainKind::Jsv(w) => Ok((w.get(to)? / w.get(from)?).min(1.0)),
        }
    }
}

/// One proposal of the edge-shift rule; `None` means hold.
fn propose(g: &Graph, m: &Matching, vertices: &[VertexId], rng: &mut impl Rng) -> Result<Option<Matching>> {
    match hole_pattern(g, m)? {
        HolePattern::Perfect => {
            let pairs = m.pairs();
            if pairs.is_empty() {
                return Ok(None);
            }
            let (a, _) = pairs[rng.gen_range(0..pairs.len())];
            let mut next = m.clone();
            next.remove(a);
            Ok(Some(next))
        }
        HolePattern::Near(u, v) => {
            let x = vertices[rng.gen_range(0..vertices.len())];
            if x == u || x == v {
                if !g.has_edge(u, v) {
                    return Ok(None);
                }
                let mut next = m.clone();
                next.insert(u, v);
                return Ok(Some(next));
            }
            let w = if rng.gen_range(0..2) == 0 { u } else { v };
            if !g.has_edge(x, w) {
                return Ok(None);
            }
            let mut next = m.clone();
            next.remove(x);
            next.insert(x, w);
            Ok(Some(next))
        }
    }
}

/// One step of the Broder chain.
pub fn broder_step(g: &Graph, m: &Matching, rng: &mut impl Rng) -> Result<Matching> {
    chain_step(g, m, &ChainKind::Broder, rng)
}

/// One step of the Metropolis chain: a Broder proposal accepted with
/// probability `min(1, w(M')/w(M))`. The acceptance coin is drawn only when
/// that ratio is below one, so with constant weights the random stream and
/// the trajectory coincide with the Broder chain's.
pub fn jsv_step(g: &Graph, m: &Matching, w: &HoleWeightFn, rng: &mut impl Rng) -> Result<Matching> {
    chain_step(g, m, &ChainKind::Jsv(w.clone()), rng)
}

pub fn chain_step(g: &Graph, m: &Matching, kind: &ChainKind, rng: &mut impl Rng) -> Result<Matching> {
    let vertices: Vec<VertexId> = g.vertices().collect();
    step_with(g, m, kind, &vertices, rng)
}

fn step_with(
    g: &Graph,
    m: &Matching,
    kind: &ChainKind,
    vertices: &[VertexId],
    rng: &mut impl Rng,
) -> Result<Matching> {
    let from = hole_pattern(g, m)?;
    let Some(next) = propose(g, m, vertices, rng)? else {
        return Ok(m.clone());
    };
    let a = kind.acceptance(from, hole_pattern(g, &next)?)?;
    if a >= 1.0 || rng.gen::<f64>() < a {
        Ok(next)
    } else {
        Ok(m.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub step: u64,
    pub perfect_visits: u64,
    /// Distance from the empirical state distribution so far to `pi`, when
    /// a model was supplied.
    pub tv: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectorySummary {
    /// Visits per hole pattern, the start state included.
    pub occupancy: BTreeMap<HolePattern, u64>,
    pub perfect_visits: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub end: Matching,
}

/// Runs `steps` transitions from `start` with a ChaCha generator seeded by
/// `seed`, recording a checkpoint every `every` steps (never when zero).
/// With a model, each checkpoint also carries the distance from the
/// empirical visit distribution to `pi`.
pub fn simulate(
    g: &Graph,
    kind: &ChainKind,
    start: &Matching,
    steps: u64,
    seed: u64,
    every: u64,
    model: Option<&ChainModel>,
) -> Result<TrajectorySummary> {
    start.validate(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<VertexId> = g.vertices().collect();
    let mut visits = model.map(|md| vec![0u64; md.len()]);
    let mut summary = TrajectorySummary {
        occupancy: BTreeMap::new(),
        perfect_visits: 0,
        checkpoints: Vec::new(),
        end: start.clone(),
    };
    for t in 0..=steps {
        if t > 0 {
            summary.end = step_with(g, &summary.end, kind, &vertices, &mut rng)?;
        }
        let p = hole_pattern(g, &summary.end)?;
        *summary.occupancy.entry(p).or_insert(0) += 1;
        if p.is_perfect() {
            summary.perfect_visits += 1;
        }
        if let (Some(md), Some(v)) = (model, visits.as_mut()) {
            let i = md.index_of(&summary.end).ok_or_else(|| {
                Error::InvalidArgument("trajectory left the model's state space".into())
            })?;
            v[i] += 1;
        }
        if t > 0 && every > 0 && t % every == 0 {
            let tv = match (model, visits.as_ref()) {
                (Some(md), Some(v)) => {
                    let total = (t + 1) as f64;
                    let emp: Vec<f64> = v.iter().map(|&c| c as f64 / total).collect();
                    Some(md.kernel.tv_to_stationary(&emp))
                }
                _ => None,
            };
            summary.checkpoints.push(Checkpoint {
                step: t,
                perfect_visits: summary.perfect_visits,
                tv,
            });
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::hole_pattern_table;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn k2() -> Graph {
        Graph::from_edges(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn k2_moves() {
        let g = k2();
        let full = Matching::from_pairs(&g, &[(VertexId(0), VertexId(1))]).unwrap();
        let empty = Matching::for_graph(&g);
        for seed in 0..20 {
            assert_eq!(broder_step(&g, &full, &mut rng(seed)).unwrap(), empty);
            assert_eq!(broder_step(&g, &empty, &mut rng(seed)).unwrap(), full);
        }
    }

    #[test]
    fn odd_graph_states_are_rejected() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let m = Matching::from_pairs(&path, &[(VertexId(0), VertexId(1))]).unwrap();
        assert_eq!(
            broder_step(&path, &m, &mut rng(0)).unwrap_err(),
            Error::NotInOmega { holes: 1 }
        );
    }

    #[test]
    fn missing_weight_is_an_error() {
        let g = k2();
        let full = Matching::from_pairs(&g, &[(VertexId(0), VertexId(1))]).unwrap();
        let w = HoleWeightFn::from_map(BTreeMap::from([(HolePattern::Perfect, 1.0)])).unwrap();
        assert!(matches!(
            jsv_step(&g, &full, &w, &mut rng(1)),
            Err(Error::MissingWeight(_))
        ));
    }

    #[test]
    fn constant_weights_reproduce_broder_trajectories() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let start = Matching::for_graph(&g);
        let mut start = start;
        start.insert(VertexId(0), VertexId(1));
        start.insert(VertexId(2), VertexId(3));
        let c = ChainKind::Jsv(HoleWeightFn::constant(2.5).unwrap());
        let a = simulate(&g, &ChainKind::Broder, &start, 500, 9, 100, None).unwrap();
        let b = simulate(&g, &c, &start, 500, 9, 100, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_steps_records_only_the_start() {
        let g = k2();
        let empty = Matching::for_graph(&g);
        let s = simulate(&g, &ChainKind::Broder, &empty, 0, 1, 0, None).unwrap();
        let pattern = HolePattern::near(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(s.occupancy, BTreeMap::from([(pattern, 1)]));
        assert_eq!(s.perfect_visits, 0);
        assert_eq!(s.end, empty);
    }

    #[test]
    fn same_seed_same_summary() {
        let b = crate::gadgets::chain_of_boxes(2).unwrap();
        let start = crate::structure::maximum_matching(&b.graph);
        let w = ChainKind::Jsv(HoleWeightFn::jsv(&hole_pattern_table(&b.graph)));
        let x = simulate(&b.graph, &w, &start, 2000, 42, 500, None).unwrap();
        let y = simulate(&b.graph, &w, &start, 2000, 42, 500, None).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.checkpoints.len(), 4);
        assert_eq!(x.occupancy.values().sum::<u64>(), 2001);
    }

    #[test]
    fn weight_file_round_trip() {
        let w = HoleWeightFn::parse("# weights\nperfect 2\n0 1 0.5\n3 2 1e-3\n").unwrap();
        assert_eq!(w.get(HolePattern::Perfect).unwrap(), 2.0);
        assert_eq!(w.get(HolePattern::near(VertexId(2), VertexId(3)).unwrap()).unwrap(), 1e-3);
        assert!(HoleWeightFn::parse("perfect -1").is_err());
        assert!(HoleWeightFn::parse("1 1 3").is_err());
        assert!(matches!(
            HoleWeightFn::parse("perfect\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
