//! Backtracking enumeration of plane graphs.
//!
//! Segments are decided in canonical order, exclusion before inclusion, so
//! the empty graph is visited first and the stream is reproducible.

use super::{ConflictGraph, EdgeSet, PlaneGraph};

/// A subtree of the enumeration: segments below `next` are decided, `chosen`
/// holds the included ones and `blocked` the segments crossing them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchTask {
    pub chosen: EdgeSet,
    pub blocked: EdgeSet,
    pub next: usize,
}

impl SearchTask {
    pub fn root() -> Self {
        SearchTask {
            chosen: EdgeSet::EMPTY,
            blocked: EdgeSet::EMPTY,
            next: 0,
        }
    }

    /// Visits every plane graph in this subtree; returns the visit count.
    pub fn run<F>(&self, g: &ConflictGraph, visitor: &mut F) -> u64
    where
        F: FnMut(&PlaneGraph<'_>),
    {
        let k = g.num_segments();
        let mut count = 0;
        descend(
            g,
            k,
            self.next,
            self.chosen,
            self.blocked,
            visitor,
            &mut count,
        );
        count
    }
}

fn descend<F>(
    g: &ConflictGraph,
    k: usize,
    next: usize,
    chosen: EdgeSet,
    blocked: EdgeSet,
    visitor: &mut F,
    count: &mut u64,
) where
    F: FnMut(&PlaneGraph<'_>),
{
    // Skip forced exclusions without recursing.
    let mut s = next;
    while s < k && blocked.contains(s) {
        s += 1;
    }
    if s == k {
        *count += 1;
        visitor(&PlaneGraph::new_unchecked(g, chosen));
        return;
    }
    descend(g, k, s + 1, chosen, blocked, visitor, count);
    descend(
        g,
        k,
        s + 1,
        chosen.with(s),
        blocked.union(g.crossing(s)),
        visitor,
        count,
    );
}

/// Visits every plane graph exactly once; returns the count, which is pg(S).
pub fn enumerate_plane_graphs<F>(g: &ConflictGraph, mut visitor: F) -> u64
where
    F: FnMut(&PlaneGraph<'_>),
{
    SearchTask::root().run(g, &mut visitor)
}

/// Splits the enumeration tree into disjoint subtrees by fixing the first
/// `depth` free segments. Tasks are listed in visit order.
pub fn partition_search(g: &ConflictGraph, depth: usize) -> Vec<SearchTask> {
    let k = g.num_segments();
    let mut tasks = vec![SearchTask::root()];
    for _ in 0..depth {
        let mut next_level = Vec::with_capacity(tasks.len() * 2);
        for t in tasks {
            let mut s = t.next;
            while s < k && t.blocked.contains(s) {
                s += 1;
            }
            if s == k {
                next_level.push(SearchTask { next: k, ..t });
                continue;
            }
            next_level.push(SearchTask { next: s + 1, ..t });
            next_level.push(SearchTask {
                chosen: t.chosen.with(s),
                blocked: t.blocked.union(g.crossing(s)),
                next: s + 1,
            });
        }
        tasks = next_level;
    }
    tasks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{census_polynomial, CensusPolynomial};
    use crate::geometry::{generate, Point, PointSet, PointSetKind};
    use num_bigint::BigUint;
    use std::collections::HashSet;

    #[test]
    fn visit_counts() {
        let tri = ConflictGraph::new(&generate(PointSetKind::Convex, 3, 0).unwrap()).unwrap();
        assert_eq!(enumerate_plane_graphs(&tri, |_| {}), 8);

        let quad = ConflictGraph::new(&generate(PointSetKind::Convex, 4, 0).unwrap()).unwrap();
        assert_eq!(enumerate_plane_graphs(&quad, |_| {}), 48);

        let s = PointSet::new(vec![
            Point::new(0, 0),
            Point::new(6, 0),
            Point::new(0, 6),
            Point::new(1, 2),
        ])
        .unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        assert_eq!(enumerate_plane_graphs(&g, |_| {}), 64);
    }

    #[test]
    fn visits_each_graph_once_and_matches_census() {
        let s = generate(PointSetKind::RandomTriangular, 7, 11).unwrap();
        let g = ConflictGraph::new(&s).unwrap();
        let mut seen = HashSet::new();
        let mut by_size = vec![0u64; g.max_edges() + 1];
        let visits = enumerate_plane_graphs(&g, |pg| {
            assert!(g.is_independent(pg.edges()));
            assert!(seen.insert(pg.edges()));
            by_size[pg.m()] += 1;
        });
        let census = census_polynomial(&g).unwrap();
        assert_eq!(BigUint::from(visits), census.total());
        let from_enum = CensusPolynomial::from_coefficients(
            s.n(),
            s.h(),
            by_size.into_iter().map(BigUint::from).collect(),
        );
        assert_eq!(from_enum, census);
    }

    #[test]
    fn first_visit_is_the_empty_graph() {
        let g = ConflictGraph::new(&generate(PointSetKind::Convex, 5, 0).unwrap()).unwrap();
        let mut first = None;
        enumerate_plane_graphs(&g, |pg| {
            first.get_or_insert(pg.edges());
        });
        assert_eq!(first, Some(EdgeSet::EMPTY));
    }

    #[test]
    fn partitioned_search_covers_the_same_stream() {
        let g = ConflictGraph::new(&generate(PointSetKind::ConvexChain, 6, 0).unwrap()).unwrap();
        let mut whole = Vec::new();
        enumerate_plane_graphs(&g, |pg| whole.push(pg.edges()));
        for depth in [0, 1, 3, 7] {
            let mut parts = Vec::new();
            for task in partition_search(&g, depth) {
                task.run(&g, &mut |pg: &PlaneGraph<'_>| parts.push(pg.edges()));
            }
            assert_eq!(parts, whole, "depth {depth}");
        }
    }
}
