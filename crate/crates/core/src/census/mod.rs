//! Plane graphs as independent sets of the segment-crossing conflict graph.
//!
//! A [`ConflictGraph`] holds all C(N,2) segments of a point set together with
//! the proper-crossing relation as bit rows. Plane graphs are exactly the
//! independent sets, so the per-edge-count census is the independence
//! polynomial of that graph.

mod brute;
mod count;
mod enumerate;
mod poly;

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{segments_properly_cross, GeometryError, PointSet};

pub use brute::{brute_force_census, BRUTE_FORCE_MAX_SEGMENTS};
pub use count::{census_polynomial, census_polynomial_with, CensusConfig};
pub use enumerate::{enumerate_plane_graphs, partition_search, SearchTask};

/// Largest point count whose segments fit the 128-bit edge sets.
pub const MAX_POINTS: usize = 16;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("{n} points exceed the supported maximum of {max}")]
    TooManyPoints { n: usize, max: usize },
    #[error("brute force needs at most {max} segments, got {segments}")]
    TooLarge { segments: usize, max: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("edge count {m} out of range 0..{limit}")]
    OutOfRange { m: usize, limit: usize },
    #[error("pg_{m} is zero")]
    ZeroDenominator { m: usize },
    #[error("segments {0} and {1} cross")]
    NotPlane(usize, usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A set of segment indices, stored as a 128-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSet(pub u128);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn single(s: usize) -> Self {
        EdgeSet(1u128 << s)
    }

    #[inline]
    pub fn contains(self, s: usize) -> bool {
        self.0 >> s & 1 == 1
    }

    #[inline]
    pub fn with(self, s: usize) -> Self {
        EdgeSet(self.0 | 1u128 << s)
    }

    #[inline]
    pub fn without(self, s: usize) -> Self {
        EdgeSet(self.0 & !(1u128 << s))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: EdgeSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 | other.0)
    }

    pub fn minus(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(s)
            }
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(EdgeSet::EMPTY, EdgeSet::with)
    }
}

/// Every segment of a point set plus the proper-crossing relation.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    points: PointSet,
    segments: Vec<(usize, usize)>,
    index: Vec<usize>,
    crossing: Vec<EdgeSet>,
    incident: Vec<EdgeSet>,
}

impl ConflictGraph {
    /// Segments are ordered lexicographically on `(i, j)` with `i < j`.
    pub fn new(points: &PointSet) -> Result<Self, CensusError> {
        let n = points.n();
        if n > MAX_POINTS {
            return Err(CensusError::TooManyPoints { n, max: MAX_POINTS });
        }
        let mut segments = Vec::with_capacity(n * (n - 1) / 2);
        let mut index = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in i + 1..n {
                index[i * n + j] = segments.len();
                index[j * n + i] = segments.len();
                segments.push((i, j));
            }
        }
        let mut crossing = vec![EdgeSet::EMPTY; segments.len()];
        for s in 0..segments.len() {
            let (a, b) = segments[s];
            for t in s + 1..segments.len() {
                let (c, d) = segments[t];
                if segments_properly_cross(
                    points.point(a),
                    points.point(b),
                    points.point(c),
                    points.point(d),
                ) {
                    crossing[s] = crossing[s].with(t);
                    crossing[t] = crossing[t].with(s);
                }
            }
        }
        let mut incident = vec![EdgeSet::EMPTY; n];
        for (s, &(a, b)) in segments.iter().enumerate() {
            incident[a] = incident[a].with(s);
            incident[b] = incident[b].with(s);
        }
        Ok(ConflictGraph {
            points: points.clone(),
            segments,
            index,
            crossing,
            incident,
        })
    }

    pub fn point_set(&self) -> &PointSet {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.n()
    }

    pub fn num_segments(&self) -> usize {
        self.segments.len()
    }

    pub fn segments(&self) -> &[(usize, usize)] {
        &self.segments
    }

    pub fn segment(&self, s: usize) -> (usize, usize) {
        self.segments[s]
    }

    /// Index of segment `ab`, in either orientation. Panics when `a == b`.
    #[inline]
    pub fn segment_index(&self, a: usize, b: usize) -> usize {
        assert_ne!(a, b, "a segment needs two distinct endpoints");
        self.index[a * self.n() + b]
    }

    /// Segments properly crossing segment `s`.
    #[inline]
    pub fn crossing(&self, s: usize) -> EdgeSet {
        self.crossing[s]
    }

    pub fn crosses(&self, s: usize, t: usize) -> bool {
        self.crossing[s].contains(t)
    }

    /// Segments with `p` as an endpoint.
    #[inline]
    pub fn incident(&self, p: usize) -> EdgeSet {
        self.incident[p]
    }

    /// All segment indices.
    pub fn all_segments(&self) -> EdgeSet {
        if self.segments.len() == 128 {
            EdgeSet(u128::MAX)
        } else {
            EdgeSet((1u128 << self.segments.len()) - 1)
        }
    }

    /// Number of unordered crossing pairs.
    pub fn crossing_pairs(&self) -> usize {
        self.crossing.iter().map(|c| c.len()).sum::<usize>() / 2
    }

    /// Maximum number of edges of a plane graph, 3N - 3 - h.
    pub fn max_edges(&self) -> usize {
        3 * self.n() - 3 - self.points.h()
    }

    /// True iff no two members of `edges` properly cross.
    pub fn is_independent(&self, edges: EdgeSet) -> bool {
        edges.iter().all(|s| !self.crossing[s].intersects(edges))
    }
}

pub fn build_conflict_graph(points: &PointSet) -> Result<ConflictGraph, CensusError> {
    ConflictGraph::new(points)
}

/// One crossing-free edge subset of a point set.
#[derive(Clone, Copy)]
pub struct PlaneGraph<'g> {
    conflict: &'g ConflictGraph,
    edges: EdgeSet,
}

impl<'g> PlaneGraph<'g> {
    pub fn new(conflict: &'g ConflictGraph, edges: EdgeSet) -> Result<Self, CensusError> {
        for s in edges.iter() {
            if let Some(t) = conflict.crossing(s).iter().find(|&t| edges.contains(t)) {
                return Err(CensusError::NotPlane(s, t));
            }
        }
        Ok(PlaneGraph { conflict, edges })
    }

    /// Caller guarantees `edges` is independent in the conflict graph.
    pub(crate) fn new_unchecked(conflict: &'g ConflictGraph, edges: EdgeSet) -> Self {
        debug_assert!(conflict.is_independent(edges));
        PlaneGraph { conflict, edges }
    }

    pub fn empty(conflict: &'g ConflictGraph) -> Self {
        PlaneGraph {
            conflict,
            edges: EdgeSet::EMPTY,
        }
    }

    /// Builds a graph from point-index pairs.
    pub fn from_pairs(
        conflict: &'g ConflictGraph,
        pairs: &[(usize, usize)],
    ) -> Result<Self, CensusError> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| conflict.segment_index(a, b))
            .collect();
        PlaneGraph::new(conflict, edges)
    }

    pub fn conflict(&self) -> &'g ConflictGraph {
        self.conflict
    }

    pub fn edges(&self) -> EdgeSet {
        self.edges
    }

    /// Edge count m.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Density c = m / N.
    pub fn density(&self) -> f64 {
        self.m() as f64 / self.conflict.n() as f64
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(self.conflict.segment_index(a, b))
    }

    pub fn degree(&self, p: usize) -> usize {
        EdgeSet(self.edges.0 & self.conflict.incident(p).0).len()
    }

    /// Neighbors of `p`, ascending by index.
    pub fn neighbors(&self, p: usize) -> Vec<usize> {
        EdgeSet(self.edges.0 & self.conflict.incident(p).0)
            .iter()
            .map(|s| {
                let (a, b) = self.conflict.segment(s);
                if a == p {
                    b
                } else {
                    a
                }
            })
            .collect()
    }

    /// Point-index pairs of the edges, in segment order.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .map(|s| self.conflict.segment(s))
            .collect()
    }
}

impl fmt::Debug for PlaneGraph<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneGraph")
            .field("edges", &self.edge_pairs())
            .finish()
    }
}

impl PartialEq for PlaneGraph<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.conflict, other.conflict) && self.edges == other.edges
    }
}

impl Eq for PlaneGraph<'_> {}

/// Number of segments `e` not in `g` such that `g + e` is still plane.
pub fn addable_edge_count(g: &PlaneGraph<'_>) -> usize {
    let conflict = g.conflict();
    conflict
        .all_segments()
        .minus(g.edges())
        .iter()
        .filter(|&s| !conflict.crossing(s).intersects(g.edges()))
        .count()
}

/// Exact plane-graph counts by edge count: `coefficients[m] = pg_m(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusPolynomial {
    pub n: usize,
    pub h: usize,
    pub coefficients: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct CensusJson {
    n: usize,
    h: usize,
    coefficients: Vec<String>,
}

impl CensusPolynomial {
    pub(crate) fn from_coefficients(n: usize, h: usize, mut coefficients: Vec<BigUint>) -> Self {
        coefficients.resize(3 * n - 2 - h, BigUint::zero());
        CensusPolynomial { n, h, coefficients }
    }

    /// pg(S), the total number of plane graphs.
    pub fn total(&self) -> BigUint {
        self.coefficients.iter().sum()
    }

    /// tr(S): plane graphs with the maximum 3N - 3 - h edges are triangulations.
    pub fn triangulations(&self) -> &BigUint {
        self.coefficients
            .last()
            .expect("census has at least one coefficient")
    }

    pub fn max_edges(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficient(&self, m: usize) -> BigUint {
        self.coefficients.get(m).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CensusJson {
            n: self.n,
            h: self.h,
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
        })
        .expect("census serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, String> {
        let raw: CensusJson = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let coefficients = raw
            .coefficients
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(|e| format!("{s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if coefficients.len() != 3 * raw.n - 2 - raw.h {
            return Err(format!(
                "expected {} coefficients for n = {}, h = {}",
                3 * raw.n - 2 - raw.h,
                raw.n,
                raw.h
            ));
        }
        Ok(CensusPolynomial {
            n: raw.n,
            h: raw.h,
            coefficients,
        })
    }
}

/// r_c = pg_{m+1} / pg_m as an exact rational, with c = m / N.
pub fn increase_rate(p: &CensusPolynomial, m: usize) -> Result<BigRational, CensusError> {
    let limit = p.max_edges();
    if m >= limit {
        return Err(CensusError::OutOfRange { m, limit });
    }
    let denom = &p.coefficients[m];
    if denom.is_zero() {
        return Err(CensusError::ZeroDenominator { m });
    }
    Ok(BigRational::new(
        p.coefficients[m + 1].clone().into(),
        denom.clone().into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, Point, PointSetKind};
    use num_bigint::BigInt;

    fn square() -> PointSet {
        generate(PointSetKind::Convex, 4, 0).unwrap()
    }

    fn triangle_center() -> PointSet {
        PointSet::new(vec![
            Point::new(0, 0),
            Point::new(6, 0),
            Point::new(0, 6),
            Point::new(1, 2),
        ])
        .unwrap()
    }

    /// Independent crossing count: all segment pairs, tested directly.
    fn crossing_pairs_by_pairs(s: &PointSet) -> usize {
        let n = s.n();
        let segs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let mut count = 0;
        for x in 0..segs.len() {
            for y in x + 1..segs.len() {
                let (a, b) = segs[x];
                let (c, d) = segs[y];
                if segments_properly_cross(s.point(a), s.point(b), s.point(c), s.point(d)) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn conflict_graph_examples() {
        let g = ConflictGraph::new(&square()).unwrap();
        assert_eq!(g.num_segments(), 6);
        assert_eq!(g.crossing_pairs(), 1);

        let g = ConflictGraph::new(&triangle_center()).unwrap();
        assert_eq!(g.num_segments(), 6);
        assert_eq!(g.crossing_pairs(), 0);

        let pentagon = generate(PointSetKind::Convex, 5, 0).unwrap();
        let g = ConflictGraph::new(&pentagon).unwrap();
        assert_eq!(g.num_segments(), 10);
        assert_eq!(g.crossing_pairs(), 5);
        assert_eq!(crossing_pairs_by_pairs(&pentagon), 5);
    }

    #[test]
    fn crossing_relation_is_symmetric_and_irreflexive() {
        let s = generate(PointSetKind::RandomTriangular, 9, 3).unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        assert_eq!(g.crossing_pairs(), crossing_pairs_by_pairs(&s));
        for a in 0..g.num_segments() {
            assert!(!g.crosses(a, a));
            for b in 0..g.num_segments() {
                assert_eq!(g.crosses(a, b), g.crosses(b, a));
            }
        }
    }

    #[test]
    fn segment_order_is_lexicographic() {
        let g = ConflictGraph::new(&square()).unwrap();
        assert_eq!(
            g.segments(),
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(g.segment_index(3, 1), 4);
    }

    #[test]
    fn too_many_points() {
        let s = generate(PointSetKind::Convex, 17, 0).unwrap();
        assert!(matches!(
            ConflictGraph::new(&s),
            Err(CensusError::TooManyPoints { n: 17, .. })
        ));
    }

    #[test]
    fn plane_graph_rejects_crossings() {
        let g = ConflictGraph::new(&square()).unwrap();
        // Points lie on y = x^2, so the diagonals are 0-2 and 1-3.
        assert!(PlaneGraph::from_pairs(&g, &[(0, 2), (1, 3)]).is_err());
        let pg = PlaneGraph::from_pairs(&g, &[(0, 2), (0, 1)]).unwrap();
        assert_eq!(pg.m(), 2);
        assert_eq!(pg.degree(0), 2);
        assert_eq!(pg.neighbors(0), vec![1, 2]);
    }

    #[test]
    fn addable_edge_examples() {
        let g = ConflictGraph::new(&square()).unwrap();
        let empty = PlaneGraph::empty(&g);
        assert_eq!(addable_edge_count(&empty), 6);

        let diagonal = PlaneGraph::from_pairs(&g, &[(0, 2)]).unwrap();
        assert_eq!(addable_edge_count(&diagonal), 4);

        let tri = PlaneGraph::from_pairs(&g, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        assert_eq!(addable_edge_count(&tri), 0);
    }

    #[test]
    fn increase_rate_examples() {
        let square = CensusPolynomial::from_coefficients(
            4,
            4,
            [1u32, 6, 14, 16, 9, 2]
                .iter()
                .map(|&c| BigUint::from(c))
                .collect(),
        );
        let r = increase_rate(&square, 2).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(8), BigInt::from(7)));
        // Lower bound ((3 - c)N - h - 3) / (cN + 1) at N = 4, h = 4, m = 2 is 1.
        assert!(r >= BigRational::from_integer(BigInt::from(1)));

        let tri = CensusPolynomial::from_coefficients(
            3,
            3,
            [1u32, 3, 3, 1].iter().map(|&c| BigUint::from(c)).collect(),
        );
        assert_eq!(
            increase_rate(&tri, 1).unwrap(),
            BigRational::from_integer(BigInt::from(1))
        );
        assert!(matches!(
            increase_rate(&tri, 3),
            Err(CensusError::OutOfRange { .. })
        ));

        let zero = CensusPolynomial::from_coefficients(
            3,
            3,
            [1u32, 0, 3, 1].iter().map(|&c| BigUint::from(c)).collect(),
        );
        assert!(matches!(
            increase_rate(&zero, 1),
            Err(CensusError::ZeroDenominator { m: 1 })
        ));
    }

    #[test]
    fn census_json_uses_decimal_strings() {
        let p = CensusPolynomial::from_coefficients(
            3,
            3,
            [1u32, 3, 3, 1].iter().map(|&c| BigUint::from(c)).collect(),
        );
        let v = p.to_json();
        assert_eq!(v["coefficients"][1], serde_json::json!("3"));
        assert_eq!(CensusPolynomial::from_json(&v).unwrap(), p);
        let bad = serde_json::json!({"n": 3, "h": 3, "coefficients": ["1", "3"]});
        assert!(CensusPolynomial::from_json(&bad).is_err());
    }

    #[test]
    fn edge_set_iteration() {
        let e: EdgeSet = [0usize, 5, 127].into_iter().collect();
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![0, 5, 127]);
        assert_eq!(e.len(), 3);
        assert!(e.contains(127));
        assert_eq!(e.without(5).len(), 2);
    }
}
