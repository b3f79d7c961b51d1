//! Exhaustive x-ving statistics over every plane graph of a point set.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::VingError;
use crate::census::{
    census_polynomial_with, partition_search, CensusConfig, ConflictGraph, EdgeSet, PlaneGraph,
    SearchTask,
};
use crate::geometry::PointSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VingConfig {
    /// Largest N accepted; enumeration visits every plane graph.
    pub max_points: usize,
    pub threads: usize,
    pub census: CensusConfig,
}

impl Default for VingConfig {
    fn default() -> Self {
        VingConfig {
            max_points: 8,
            threads: 1,
            census: CensusConfig::default(),
        }
    }
}

/// Per-point counts behind the completion and deletion identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointIdentity {
    pub point: usize,
    /// x-vings at the point, over all graphs.
    pub x_vings: BigUint,
    /// Sum of 2^deg over those x-vings; equals pg(S).
    pub completion_sum: BigUint,
    /// pg(S without the point).
    pub pg_without: BigUint,
}

impl PointIdentity {
    pub fn holds(&self, pg: &BigUint) -> bool {
        self.x_vings == self.pg_without && &self.completion_sum == pg
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    /// Sum of v_x(G) over all graphs.
    pub lhs: BigUint,
    /// Sum of pg(S without q) over interior q.
    pub rhs: BigUint,
}

impl IdentityCheck {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VingStatistics {
    pub n: usize,
    pub h: usize,
    pub pg: BigUint,
    pub sum_vx: BigUint,
    pub hat_vx: BigRational,
    /// i -> sum over graphs of v_i(G), the number of degree-i vertices.
    pub vi_histogram: BTreeMap<usize, BigUint>,
    /// i -> number of x_i-vings over all graphs.
    pub vx_histogram: BTreeMap<usize, BigUint>,
    /// k -> number of graphs with v_x(G) = k.
    pub vx_distribution: BTreeMap<usize, BigUint>,
    pub per_point: Vec<PointIdentity>,
    pub identity_check: IdentityCheck,
}

impl VingStatistics {
    pub fn to_json(&self) -> Value {
        let hist = |h: &BTreeMap<usize, BigUint>| -> Value {
            h.iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                .collect::<serde_json::Map<_, _>>()
                .into()
        };
        json!({
            "n": self.n,
            "h": self.h,
            "pg": self.pg.to_string(),
            "sum_vx": self.sum_vx.to_string(),
            "hat_vx": {
                "num": self.hat_vx.numer().to_string(),
                "den": self.hat_vx.denom().to_string(),
            },
            "vi_histogram": hist(&self.vi_histogram),
            "vx_histogram": hist(&self.vx_histogram),
            "vx_distribution": hist(&self.vx_distribution),
            "per_point": self.per_point.iter().map(|p| json!({
                "point": p.point,
                "x_vings": p.x_vings.to_string(),
                "completion_sum": p.completion_sum.to_string(),
                "pg_without": p.pg_without.to_string(),
                "holds": p.holds(&self.pg),
            })).collect::<Vec<_>>(),
            "identity_check": {
                "lhs": self.identity_check.lhs.to_string(),
                "rhs": self.identity_check.rhs.to_string(),
                "equal": self.identity_check.equal(),
            },
        })
    }
}

/// Running sums; merged by addition, so task order is irrelevant.
#[derive(Clone)]
struct Tally {
    graphs: u128,
    sum_vx: u128,
    vi: Vec<u128>,
    vx: Vec<u128>,
    vx_dist: Vec<u128>,
    x_at: Vec<u128>,
    completion_at: Vec<u128>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            graphs: 0,
            sum_vx: 0,
            vi: vec![0; n],
            vx: vec![0; n],
            vx_dist: vec![0; n + 1],
            x_at: vec![0; n],
            completion_at: vec![0; n],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.graphs += other.graphs;
        self.sum_vx += other.sum_vx;
        for (a, b) in [
            (&mut self.vi, &other.vi),
            (&mut self.vx, &other.vx),
            (&mut self.vx_dist, &other.vx_dist),
            (&mut self.x_at, &other.x_at),
            (&mut self.completion_at, &other.completion_at),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self
    }

    fn visit(&mut self, g: &ConflictGraph, interior: &[usize], edges: EdgeSet) {
        self.graphs += 1;
        let n = g.n();
        for p in 0..n {
            self.vi[EdgeSet(g.incident(p).0 & edges.0).len()] += 1;
        }
        let mut vx = 0;
        for &p in interior {
            let incident = EdgeSet(g.incident(p).0 & edges.0);
            let mut maximal = true;
            for q in (0..n).filter(|&q| q != p) {
                let s = g.segment_index(p, q);
                if !edges.contains(s) && !g.crossing(s).intersects(edges) {
                    maximal = false;
                    break;
                }
            }
            if maximal {
                let deg = incident.len();
                vx += 1;
                self.vx[deg] += 1;
                self.x_at[p] += 1;
                self.completion_at[p] += 1u128 << deg;
            }
        }
        self.sum_vx += vx as u128;
        self.vx_dist[vx] += 1;
    }
}

fn histogram(counts: &[u128]) -> BTreeMap<usize, BigUint> {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i, BigUint::from(c)))
        .collect()
}

/// Enumerates every plane graph of `s` once and tallies x-vings.
pub fn ving_statistics(s: &PointSet, config: &VingConfig) -> Result<VingStatistics, VingError> {
    if s.n() > config.max_points {
        return Err(VingError::ResourceLimit(format!(
            "{} points exceeds the enumeration cap of {}",
            s.n(),
            config.max_points
        )));
    }
    let g = ConflictGraph::new(s)?;
    let interior: Vec<usize> = s.interior().collect();
    let n = s.n();

    let run_task = |task: &SearchTask| {
        let mut tally = Tally::new(n);
        task.run(&g, &mut |pg: &PlaneGraph<'_>| {
            tally.visit(&g, &interior, pg.edges())
        });
        tally
    };
    let tally = if config.threads > 1 {
        let depth = (usize::BITS - config.threads.leading_zeros()) as usize + 4;
        let tasks = partition_search(&g, depth);
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| VingError::ResourceLimit(e.to_string()))?
            .install(|| {
                tasks
                    .par_iter()
                    .map(run_task)
                    .reduce(|| Tally::new(n), Tally::merge)
            })
    } else {
        run_task(&SearchTask::root())
    };

    let pg = BigUint::from(tally.graphs);
    let mut per_point = Vec::with_capacity(interior.len());
    let mut rhs = BigUint::from(0u32);
    for &q in &interior {
        let without = s.without(q).map_err(crate::census::CensusError::from)?;
        let sub = ConflictGraph::new(&without)?;
        let pg_without = census_polynomial_with(&sub, &config.census)?.total();
        rhs += &pg_without;
        per_point.push(PointIdentity {
            point: q,
            x_vings: BigUint::from(tally.x_at[q]),
            completion_sum: BigUint::from(tally.completion_at[q]),
            pg_without,
        });
    }
    let sum_vx = BigUint::from(tally.sum_vx);
    let hat_vx = BigRational::new(BigInt::from(sum_vx.clone()), BigInt::from(pg.clone()));
    Ok(VingStatistics {
        n,
        h: s.h(),
        identity_check: IdentityCheck {
            lhs: sum_vx.clone(),
            rhs,
        },
        pg,
        sum_vx,
        hat_vx,
        vi_histogram: histogram(&tally.vi),
        vx_histogram: histogram(&tally.vx),
        vx_distribution: histogram(&tally.vx_dist),
        per_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::census_polynomial;
    use crate::geometry::{generate, Point, PointSetKind};

    fn triangle_center() -> PointSet {
        PointSet::new(vec![
            Point::new(0, 0),
            Point::new(6, 0),
            Point::new(0, 6),
            Point::new(1, 2),
        ])
        .unwrap()
    }

    #[test]
    fn triangle_center_statistics() {
        let st = ving_statistics(&triangle_center(), &VingConfig::default()).unwrap();
        assert_eq!(st.pg, BigUint::from(64u32));
        assert_eq!(st.sum_vx, BigUint::from(8u32));
        assert_eq!(st.hat_vx, BigRational::new(1.into(), 8.into()));
        assert!(st.identity_check.equal());
        assert_eq!(st.vx_histogram, BTreeMap::from([(3, BigUint::from(8u32))]));
        // Sum of v_i(G) over graphs counts every (vertex, graph) pair.
        let vi_total: BigUint = st.vi_histogram.values().sum();
        assert_eq!(vi_total, BigUint::from(4u32 * 64));
    }

    #[test]
    fn convex_sets_have_no_x_vings() {
        let s = generate(PointSetKind::Convex, 6, 0).unwrap();
        let st = ving_statistics(&s, &VingConfig::default()).unwrap();
        assert_eq!(st.sum_vx, BigUint::from(0u32));
        assert!(st.identity_check.equal());
        assert_eq!(
            st.pg,
            census_polynomial(&ConflictGraph::new(&s).unwrap())
                .unwrap()
                .total()
        );
    }

    #[test]
    fn identities_on_random_sixes() {
        for seed in 0..3 {
            let s = generate(PointSetKind::RandomTriangular, 6, seed).unwrap();
            let st = ving_statistics(&s, &VingConfig::default()).unwrap();
            assert!(st.identity_check.equal(), "seed {seed}");
            for p in &st.per_point {
                assert!(p.holds(&st.pg), "seed {seed} point {}", p.point);
            }
            // Every x-ving has degree at least 3.
            assert!(st.vx_histogram.keys().all(|&d| d >= 3));
        }
    }

    #[test]
    fn threads_do_not_change_statistics() {
        let s = generate(PointSetKind::RandomTriangular, 6, 4).unwrap();
        let one = ving_statistics(&s, &VingConfig::default()).unwrap();
        let many = ving_statistics(
            &s,
            &VingConfig {
                threads: 3,
                ..VingConfig::default()
            },
        )
        .unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn refuses_large_sets() {
        let s = generate(PointSetKind::Convex, 9, 0).unwrap();
        assert!(matches!(
            ving_statistics(&s, &VingConfig::default()),
            Err(VingError::ResourceLimit(_))
        ));
    }

    #[test]
    fn json_shape() {
        let st = ving_statistics(&triangle_center(), &VingConfig::default()).unwrap();
        let v = st.to_json();
        assert_eq!(v["pg"], "64");
        assert_eq!(v["hat_vx"]["num"], "1");
        assert_eq!(v["hat_vx"]["den"], "8");
        assert_eq!(v["identity_check"]["equal"], true);
    }
}
