//! Vertex-graph pairs ("vings"), their maximal completions (x-vings), and
//! reductions between x-vings.
//!
//! An x-ving is a ving at an interior point that already sees every vertex it
//! can: adding any straight edge at that point would cross the graph.

mod stats;

use std::cmp::Ordering;

use thiserror::Error;

use crate::census::{CensusError, ConflictGraph, EdgeSet, PlaneGraph};
use crate::geometry::{cross, hull_of_subset, Point};

pub use stats::{ving_statistics, IdentityCheck, PointIdentity, VingConfig, VingStatistics};

#[derive(Debug, Error)]
pub enum VingError {
    #[error("point {0} lies on the convex hull boundary")]
    HullVertex(usize),
    #[error("ving at point {0} is not an x-ving")]
    NotXVing(usize),
    #[error("ving at point {vertex} has degree {degree}, expected an x5-ving")]
    NotX5Ving { vertex: usize, degree: usize },
    #[error("point {0} out of range")]
    NoSuchPoint(usize),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// A point paired with a plane graph, with neighbors in ray-sweep order.
#[derive(Clone, PartialEq, Eq)]
pub struct Ving<'g> {
    graph: PlaneGraph<'g>,
    vertex: usize,
    neighbors: Vec<usize>,
}

impl std::fmt::Debug for Ving<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ving")
            .field("vertex", &self.vertex)
            .field("neighbors", &self.neighbors)
            .field("graph", &self.graph)
            .finish()
    }
}

impl<'g> Ving<'g> {
    pub fn new(graph: PlaneGraph<'g>, vertex: usize) -> Self {
        let set = graph.conflict().point_set();
        let neighbors = ray_sweep_order(set.points(), vertex, &graph.neighbors(vertex));
        Ving {
            graph,
            vertex,
            neighbors,
        }
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn graph(&self) -> &PlaneGraph<'g> {
        &self.graph
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// N(v): hit order of a ray shot straight down from the vertex and
    /// rotated clockwise.
    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    fn conflict(&self) -> &'g ConflictGraph {
        self.graph.conflict()
    }
}

/// Orders `others` by the clockwise angle, measured from straight down, of
/// the direction from `center`. Exact: half-plane split plus cross products.
pub fn ray_sweep_order(points: &[Point], center: usize, others: &[usize]) -> Vec<usize> {
    let c = points[center];
    let half = |q: Point| -> u8 {
        let (dx, dy) = (q.x - c.x, q.y - c.y);
        // [0, pi) clockwise from down: the left half-plane plus the downward ray.
        if dx < 0 || (dx == 0 && dy < 0) {
            0
        } else {
            1
        }
    };
    let mut ordered = others.to_vec();
    ordered.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        half(pa).cmp(&half(pb)).then_with(|| {
            // b clockwise of a means a is hit first.
            match cross(c, pa, pb).cmp(&0) {
                Ordering::Less => Ordering::Less,
                Ordering::Greater => Ordering::Greater,
                Ordering::Equal => Ordering::Equal,
            }
        })
    });
    ordered
}

/// True iff segment pq properly crosses no edge of `g`.
pub fn sees(p: usize, q: usize, g: &PlaneGraph<'_>) -> bool {
    let conflict = g.conflict();
    !conflict
        .crossing(conflict.segment_index(p, q))
        .intersects(g.edges())
}

/// Segments from `p` to every vertex it sees in `edges` but is not joined to.
fn visible_spokes(conflict: &ConflictGraph, p: usize, edges: EdgeSet) -> EdgeSet {
    (0..conflict.n())
        .filter(|&q| q != p)
        .map(|q| conflict.segment_index(p, q))
        .filter(|&s| !edges.contains(s) && !conflict.crossing(s).intersects(edges))
        .collect()
}

/// The x-ving obtained by joining `p` to everything it sees in `g`.
pub fn x_completion<'g>(p: usize, g: &PlaneGraph<'g>) -> Result<Ving<'g>, VingError> {
    let conflict = g.conflict();
    if p >= conflict.n() {
        return Err(VingError::NoSuchPoint(p));
    }
    if conflict.point_set().is_on_hull(p) {
        return Err(VingError::HullVertex(p));
    }
    let edges = g.edges().union(visible_spokes(conflict, p, g.edges()));
    Ok(Ving::new(PlaneGraph::new_unchecked(conflict, edges), p))
}

pub fn is_x_ving(v: &Ving<'_>) -> bool {
    let conflict = v.conflict();
    !conflict.point_set().is_on_hull(v.vertex)
        && visible_spokes(conflict, v.vertex, v.graph.edges()).is_empty()
}

/// Every x-ving reached by deleting one edge between two neighbors of `v`
/// and completing, when the deletion exposes at least one new vertex.
pub fn reductions<'g>(v: &Ving<'g>) -> Result<Vec<Ving<'g>>, VingError> {
    if !is_x_ving(v) {
        return Err(VingError::NotXVing(v.vertex));
    }
    let conflict = v.conflict();
    let edges = v.graph.edges();
    let mut out = Vec::new();
    for (i, &a) in v.neighbors.iter().enumerate() {
        for &b in &v.neighbors[i + 1..] {
            let ab = conflict.segment_index(a, b);
            if !edges.contains(ab) {
                continue;
            }
            let reduced = edges.without(ab);
            let spokes = visible_spokes(conflict, v.vertex, reduced);
            if spokes.is_empty() {
                continue;
            }
            let graph = PlaneGraph::new_unchecked(conflict, reduced.union(spokes));
            out.push(Ving::new(graph, v.vertex));
        }
    }
    Ok(out)
}

/// The x-vings that reduce directly to `v`.
///
/// Each comes from one segment ab between neighbors of `v` that is not in
/// the graph, crosses no edge away from the vertex, and crosses at least one
/// spoke: insert ab and drop the spokes it crosses.
pub fn reducers<'g>(v: &Ving<'g>) -> Result<Vec<Ving<'g>>, VingError> {
    if !is_x_ving(v) {
        return Err(VingError::NotXVing(v.vertex));
    }
    let conflict = v.conflict();
    let edges = v.graph.edges();
    let spokes_of_p = conflict.incident(v.vertex);
    let mut out = Vec::new();
    for (i, &a) in v.neighbors.iter().enumerate() {
        for &b in &v.neighbors[i + 1..] {
            let ab = conflict.segment_index(a, b);
            if edges.contains(ab) {
                continue;
            }
            let crossed = EdgeSet(conflict.crossing(ab).0 & edges.0);
            let crossed_spokes = EdgeSet(crossed.0 & spokes_of_p.0);
            if crossed_spokes.is_empty() || crossed != crossed_spokes {
                continue;
            }
            let graph = PlaneGraph::new_unchecked(conflict, edges.minus(crossed_spokes).with(ab));
            let u = Ving::new(graph, v.vertex);
            debug_assert!(is_x_ving(&u));
            out.push(u);
        }
    }
    Ok(out)
}

/// An x-ving with the hull H(v) of its neighborhood.
#[derive(Debug, Clone)]
pub struct XVingInfo<'g> {
    pub ving: Ving<'g>,
    /// Counterclockwise indices of the neighbors on the boundary of conv N(v).
    pub hull_of_neighborhood: Vec<usize>,
    pub neighborhood_convex: bool,
}

pub fn x_ving_info<'g>(v: &Ving<'g>) -> Result<XVingInfo<'g>, VingError> {
    if !is_x_ving(v) {
        return Err(VingError::NotXVing(v.vertex));
    }
    let hull = hull_of_subset(v.conflict().point_set(), &v.neighbors);
    Ok(XVingInfo {
        neighborhood_convex: hull.len() == v.degree(),
        hull_of_neighborhood: hull,
        ving: v.clone(),
    })
}

/// Lower-degree x-vings that can pass charge to an x5-ving.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducerCensus {
    /// x4-vings reducing to v.
    pub n4: usize,
    /// Distinct x3-vings reducing to v directly or through one of those x4-vings.
    pub n3: usize,
    /// |H(v)|.
    pub hull_size: usize,
}

pub fn reducer_census(v: &Ving<'_>) -> Result<ReducerCensus, VingError> {
    if !is_x_ving(v) {
        return Err(VingError::NotXVing(v.vertex));
    }
    if v.degree() != 5 {
        return Err(VingError::NotX5Ving {
            vertex: v.vertex,
            degree: v.degree(),
        });
    }
    let info = x_ving_info(v)?;
    let direct = reducers(v)?;
    let mut x3_graphs: Vec<EdgeSet> = Vec::new();
    let mut n4 = 0;
    for u in &direct {
        match u.degree() {
            4 => {
                n4 += 1;
                for w in reducers(u)? {
                    if w.degree() == 3 {
                        x3_graphs.push(w.graph.edges());
                    }
                }
            }
            3 => x3_graphs.push(u.graph.edges()),
            _ => {}
        }
    }
    x3_graphs.sort();
    x3_graphs.dedup();
    Ok(ReducerCensus {
        n4,
        n3: x3_graphs.len(),
        hull_size: info.hull_of_neighborhood.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{enumerate_plane_graphs, ConflictGraph};
    use crate::geometry::{generate, PointSet, PointSetKind};

    fn triangle_center() -> ConflictGraph {
        let s = PointSet::new(vec![
            Point::new(0, 0),
            Point::new(6, 0),
            Point::new(0, 6),
            Point::new(1, 2),
        ])
        .unwrap();
        ConflictGraph::new(&s).unwrap()
    }

    /// An x4-ving whose edge ac blocks exactly one vertex b; deleting ac
    /// exposes b. Indices: p, a, b, c, d, e.
    fn exposed_by_one_edge() -> ConflictGraph {
        let s = PointSet::new(vec![
            Point::new(1634, 1752),
            Point::new(1430, 1538),
            Point::new(1650, 1474),
            Point::new(1840, 1676),
            Point::new(1406, 1828),
            Point::new(1782, 1974),
        ])
        .unwrap();
        ConflictGraph::new(&s).unwrap()
    }

    #[test]
    fn ray_sweep_is_clockwise_from_down() {
        let pts = vec![
            Point::new(0, 0),
            Point::new(1, 5),   // up, slightly right
            Point::new(5, -1),  // right, slightly down
            Point::new(-1, -5), // down, slightly left
            Point::new(-5, 1),  // left, slightly up
            Point::new(0, -3),  // straight down
        ];
        assert_eq!(
            ray_sweep_order(&pts, 0, &[1, 2, 3, 4, 5]),
            vec![5, 3, 4, 1, 2]
        );
    }

    #[test]
    fn sees_examples() {
        let g = triangle_center();
        let empty = PlaneGraph::empty(&g);
        for corner in 0..3 {
            assert!(sees(3, corner, &empty));
        }

        let s = PointSet::new(vec![
            Point::new(2, 3),
            Point::new(2, -3),
            Point::new(0, 0),
            Point::new(4, 0),
        ])
        .unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        let blocked = PlaneGraph::from_pairs(&g, &[(2, 3)]).unwrap();
        assert!(!sees(0, 1, &blocked));
        let joined = PlaneGraph::from_pairs(&g, &[(0, 2)]).unwrap();
        assert!(sees(0, 2, &joined));
    }

    #[test]
    fn completion_of_empty_graph() {
        let g = triangle_center();
        let v = x_completion(3, &PlaneGraph::empty(&g)).unwrap();
        assert_eq!(v.degree(), 3);
        assert!(is_x_ving(&v));
        let again = x_completion(3, v.graph()).unwrap();
        assert_eq!(again, v);
        assert!(matches!(
            x_completion(0, &PlaneGraph::empty(&g)),
            Err(VingError::HullVertex(0))
        ));
    }

    #[test]
    fn completion_degree_equals_visible_count() {
        let s = generate(PointSetKind::RandomTriangular, 6, 2).unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        enumerate_plane_graphs(&g, |pg| {
            for p in s.interior() {
                let visible_or_joined = (0..s.n())
                    .filter(|&q| q != p && (pg.has_edge(p, q) || sees(p, q, pg)))
                    .count();
                let v = x_completion(p, pg).unwrap();
                assert_eq!(v.degree(), visible_or_joined);
                assert!(is_x_ving(&v));
            }
        });
    }

    #[test]
    fn x_ving_predicate_on_triangle_center() {
        let g = triangle_center();
        for hull_edges in 0u8..8 {
            let mut pairs = vec![(3, 0), (3, 1), (3, 2)];
            for (bit, e) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
                if hull_edges >> bit & 1 == 1 {
                    pairs.push(e);
                }
            }
            let v = Ving::new(PlaneGraph::from_pairs(&g, &pairs).unwrap(), 3);
            assert!(is_x_ving(&v));
        }
        let two = Ving::new(PlaneGraph::from_pairs(&g, &[(3, 0), (3, 1)]).unwrap(), 3);
        assert!(!is_x_ving(&two));
        let hull = Ving::new(
            PlaneGraph::from_pairs(&g, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
            0,
        );
        assert!(!is_x_ving(&hull));
    }

    #[test]
    fn triangle_center_has_no_reductions() {
        let g = triangle_center();
        let full =
            PlaneGraph::from_pairs(&g, &[(3, 0), (3, 1), (3, 2), (0, 1), (1, 2), (0, 2)]).unwrap();
        let v = Ving::new(full, 3);
        assert!(reductions(&v).unwrap().is_empty());
    }

    #[test]
    fn single_blocking_edge_reduces_to_x5() {
        let g = exposed_by_one_edge();
        let graph =
            PlaneGraph::from_pairs(&g, &[(0, 1), (0, 3), (0, 4), (0, 5), (1, 3), (1, 2)]).unwrap();
        let v = Ving::new(graph, 0);
        assert!(is_x_ving(&v));
        assert_eq!(v.degree(), 4);
        let up = reductions(&v).unwrap();
        assert_eq!(up.len(), 1);
        assert_eq!(up[0].degree(), 5);
        assert!(up[0].graph().has_edge(0, 2));
        assert!(!up[0].graph().has_edge(1, 3));
        // Going back down recovers v.
        let down = reducers(&up[0]).unwrap();
        assert!(down.contains(&v));
    }

    #[test]
    fn not_x_ving_errors() {
        let g = triangle_center();
        let v = Ving::new(PlaneGraph::from_pairs(&g, &[(3, 0)]).unwrap(), 3);
        assert!(matches!(reductions(&v), Err(VingError::NotXVing(3))));
        assert!(matches!(reducer_census(&v), Err(VingError::NotXVing(3))));
        let full = Ving::new(
            PlaneGraph::from_pairs(&g, &[(3, 0), (3, 1), (3, 2)]).unwrap(),
            3,
        );
        assert!(matches!(
            reducer_census(&full),
            Err(VingError::NotX5Ving { degree: 3, .. })
        ));
    }

    #[test]
    fn pentagon_with_all_sides() {
        // Point 0 sits at the center of pentagon 1..=5: every diagonal cuts
        // off exactly one spoke, and each x4 admits two further diagonals.
        let s = PointSet::new(vec![
            Point::new(0, 0),
            Point::new(100, 3),
            Point::new(29, 97),
            Point::new(-83, 55),
            Point::new(-79, -61),
            Point::new(33, -94),
        ])
        .unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        let mut pairs: Vec<(usize, usize)> = (1..=5).map(|q| (0, q)).collect();
        pairs.extend([(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        let v = Ving::new(PlaneGraph::from_pairs(&g, &pairs).unwrap(), 0);
        assert!(is_x_ving(&v));
        let rc = reducer_census(&v).unwrap();
        assert_eq!(
            rc,
            ReducerCensus {
                n4: 5,
                n3: 5,
                hull_size: 5
            }
        );
        assert!(x_ving_info(&v).unwrap().neighborhood_convex);
    }

    #[test]
    fn doubly_blocked_vertex_in_a_triangulation() {
        let s = PointSet::new(vec![
            Point::new(0, 0),
            Point::new(65536, 0),
            Point::new(32768, 65536),
            Point::new(37990, 19424),
            Point::new(53518, 4206),
            Point::new(10502, 15083),
        ])
        .unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        let pairs = [
            (0, 1),
            (0, 2),
            (0, 5),
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
        ];
        let tri = PlaneGraph::from_pairs(&g, &pairs).unwrap();
        assert_eq!(tri.m(), g.max_edges());
        let v = Ving::new(tri, 3);
        assert!(is_x_ving(&v));
        assert!(!v.graph().has_edge(3, 0));
        assert!(reductions(&v).unwrap().is_empty());
        // Consistent with the restricted reduction property: N(v) is not convex.
        assert!(!x_ving_info(&v).unwrap().neighborhood_convex);
    }

    #[test]
    fn reductions_round_trip_and_convex_neighborhoods_reduce() {
        for seed in 0..3 {
            let s = generate(PointSetKind::RandomTriangular, 6, seed).unwrap();
            let g = ConflictGraph::new(&s).unwrap();
            enumerate_plane_graphs(&g, |pg| {
                for p in s.interior() {
                    let v = Ving::new(*pg, p);
                    if !is_x_ving(&v) {
                        continue;
                    }
                    assert!(v.degree() >= 3);
                    let up = reductions(&v).unwrap();
                    for u in &up {
                        assert!(is_x_ving(u) && u.degree() > v.degree());
                        assert!(reducers(u).unwrap().contains(&v));
                    }
                    let hidden = (0..s.n()).any(|q| q != p && !pg.has_edge(p, q));
                    if hidden && x_ving_info(&v).unwrap().neighborhood_convex {
                        assert!(!up.is_empty(), "seed {seed}: {v:?}");
                    }
                }
            });
        }
    }
}
