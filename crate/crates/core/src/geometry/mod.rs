//! Exact planar primitives over integer coordinates.
//!
//! Every predicate is evaluated with `i128` arithmetic on coordinates bounded
//! by [`COORD_LIMIT`], so the 3-point orientation determinant never rounds.

mod format;
mod generate;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{parse_point_set, write_point_set, FormatError};
pub use generate::{generate, PointSetKind, CHAIN_APEX_START_HEIGHT, RANDOM_TRIANGLE_SIZE};

/// Largest absolute coordinate accepted. Coordinate differences stay below
/// 2^62, so each product in the orientation determinant fits in 2^124.
pub const COORD_LIMIT: i64 = 1 << 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Counterclockwise (left) turn.
    Ccw,
    /// Clockwise (right) turn.
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Twice the signed area of triangle `abc`, exactly.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> i128 {
    let (ax, ay) = (a.x as i128, a.y as i128);
    let (bx, by) = (b.x as i128, b.y as i128);
    let (cx, cy) = (c.x as i128, c.y as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Sign of the determinant of `(b - a, c - a)`.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> Orientation {
    match cross(a, b, c).cmp(&0) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// True iff the open segments `ab` and `cd` share a point.
///
/// Segments sharing an endpoint never properly cross. Only strict sign
/// changes count, which is exact for point sets in general position.
pub fn segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let abc = cross(a, b, c).signum();
    let abd = cross(a, b, d).signum();
    let cda = cross(c, d, a).signum();
    let cdb = cross(c, d, b).signum();
    abc * abd < 0 && cda * cdb < 0
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("duplicate point: indices {first} and {second} are both {point}")]
    DuplicatePoint {
        first: usize,
        second: usize,
        point: Point,
    },
    #[error("collinear triple at indices {0}, {1}, {2}")]
    CollinearTriple(usize, usize, usize),
    #[error("point set needs at least {required} points, got {actual}")]
    TooFewPoints { required: usize, actual: usize },
    #[error("coordinate of point {index} exceeds the exact-arithmetic limit of 2^61 in magnitude")]
    CoordinateOutOfRange { index: usize },
    #[error("point generation failed: {0}")]
    GenerationFailure(String),
}

/// A validated planar point set in general position with its convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Vec<usize>,
    on_hull: Vec<bool>,
}

impl PointSet {
    /// Validates `points` (distinct, no collinear triple, bounded coordinates)
    /// and computes the hull.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 3 {
            return Err(GeometryError::TooFewPoints {
                required: 3,
                actual: points.len(),
            });
        }
        for (index, p) in points.iter().enumerate() {
            if p.x.abs() > COORD_LIMIT || p.y.abs() > COORD_LIMIT {
                return Err(GeometryError::CoordinateOutOfRange { index });
            }
        }
        let mut seen: HashMap<Point, usize> = HashMap::with_capacity(points.len());
        for (index, p) in points.iter().enumerate() {
            if let Some(&first) = seen.get(p) {
                return Err(GeometryError::DuplicatePoint {
                    first,
                    second: index,
                    point: *p,
                });
            }
            seen.insert(*p, index);
        }
        let n = points.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(points[i], points[j], points[k]) == Orientation::Collinear {
                        return Err(GeometryError::CollinearTriple(i, j, k));
                    }
                }
            }
        }
        let hull = convex_hull(&points);
        let mut on_hull = vec![false; n];
        for &i in &hull {
            on_hull[i] = true;
        }
        Ok(PointSet {
            points,
            hull,
            on_hull,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Number of points (N).
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Number of extreme points (h).
    pub fn h(&self) -> usize {
        self.hull.len()
    }

    /// Hull vertex indices in counterclockwise order.
    pub fn hull(&self) -> &[usize] {
        &self.hull
    }

    pub fn is_on_hull(&self, i: usize) -> bool {
        self.on_hull[i]
    }

    /// Indices of points not on the hull boundary, ascending.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&i| !self.on_hull[i])
    }

    /// The set with point `q` removed. Remaining points keep their relative
    /// order, so index `i > q` becomes `i - 1`.
    pub fn without(&self, q: usize) -> Result<PointSet, GeometryError> {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != q)
            .map(|(_, p)| *p)
            .collect();
        PointSet::new(points)
    }
}

/// Convenience wrapper matching the validated constructor.
pub fn make_point_set(points: Vec<Point>) -> Result<PointSet, GeometryError> {
    PointSet::new(points)
}

/// Andrew's monotone chain over indices; counterclockwise, starting from the
/// lowest-leftmost point. Assumes no collinear triples.
fn convex_hull(points: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| (points[i].x, points[i].y));

    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2
            && orient(
                points[lower[lower.len() - 2]],
                points[lower[lower.len() - 1]],
                points[i],
            ) != Orientation::Ccw
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2
            && orient(
                points[upper[upper.len() - 2]],
                points[upper[upper.len() - 1]],
                points[i],
            ) != Orientation::Ccw
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hull (counterclockwise) of an arbitrary subset of a point set, as indices
/// into the original set.
pub fn hull_of_subset(set: &PointSet, subset: &[usize]) -> Vec<usize> {
    let pts: Vec<Point> = subset.iter().map(|&i| set.point(i)).collect();
    convex_hull(&pts).into_iter().map(|k| subset[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(p(0, 0), p(1, 0), p(0, 1)), Orientation::Ccw);
        assert_eq!(orient(p(0, 0), p(1, 1), p(2, 2)), Orientation::Collinear);
        assert_eq!(orient(p(0, 0), p(0, 1), p(1, 0)), Orientation::Cw);
    }

    #[test]
    fn orient_is_exact_at_the_coordinate_limit() {
        let l = COORD_LIMIT;
        assert_eq!(orient(p(-l, -l), p(l, l), p(l - 1, l)), Orientation::Ccw);
        assert_eq!(orient(p(-l, -l), p(l, l), p(0, 0)), Orientation::Collinear);
    }

    #[test]
    fn crossing_examples() {
        assert!(segments_properly_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_properly_cross(p(0, 0), p(1, 1), p(1, 1), p(2, 0)));
        assert!(!segments_properly_cross(p(0, 0), p(1, 0), p(0, 2), p(1, 2)));
    }

    #[test]
    fn make_point_set_examples() {
        let square = PointSet::new(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4), p(2, 1)]).unwrap();
        assert_eq!(square.h(), 4);
        assert_eq!(square.interior().collect::<Vec<_>>(), vec![4]);

        let tri = PointSet::new(vec![p(0, 0), p(6, 0), p(0, 6), p(1, 2)]).unwrap();
        assert_eq!(tri.h(), 3);

        let err = PointSet::new(vec![p(0, 0), p(1, 1), p(2, 2), p(5, 0)]).unwrap_err();
        assert_eq!(err, GeometryError::CollinearTriple(0, 1, 2));
    }

    #[test]
    fn rejects_duplicates_and_large_coordinates() {
        let err = PointSet::new(vec![p(0, 0), p(3, 1), p(0, 0)]).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::DuplicatePoint {
                first: 0,
                second: 2,
                ..
            }
        ));
        let err = PointSet::new(vec![p(0, 0), p(3, 1), p(COORD_LIMIT + 1, 5)]).unwrap_err();
        assert_eq!(err, GeometryError::CoordinateOutOfRange { index: 2 });
        assert!(matches!(
            PointSet::new(vec![p(0, 0), p(1, 0)]),
            Err(GeometryError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn hull_is_counterclockwise() {
        let s = PointSet::new(vec![p(2, 1), p(0, 4), p(4, 4), p(0, 0), p(4, 0)]).unwrap();
        let hull = s.hull();
        assert_eq!(hull.len(), 4);
        for w in 0..hull.len() {
            let a = s.point(hull[w]);
            let b = s.point(hull[(w + 1) % hull.len()]);
            let c = s.point(hull[(w + 2) % hull.len()]);
            assert_eq!(orient(a, b, c), Orientation::Ccw);
        }
    }

    #[test]
    fn without_reindexes() {
        let s = PointSet::new(vec![p(0, 0), p(6, 0), p(0, 6), p(1, 2)]).unwrap();
        let t = s.without(3).unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.h(), 3);
    }

    fn small() -> impl Strategy<Value = Point> {
        (-50i64..50, -50i64..50).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn orient_antisymmetric(a in small(), b in small(), c in small()) {
            let o = orient(a, b, c);
            prop_assert_eq!(orient(b, a, c), o.reversed());
            prop_assert_eq!(orient(a, c, b), o.reversed());
            prop_assert_eq!(orient(c, b, a), o.reversed());
        }

        #[test]
        fn crossing_symmetric(a in small(), b in small(), c in small(), d in small()) {
            let x = segments_properly_cross(a, b, c, d);
            prop_assert_eq!(segments_properly_cross(c, d, a, b), x);
            prop_assert_eq!(segments_properly_cross(b, a, c, d), x);
            prop_assert_eq!(segments_properly_cross(a, b, d, c), x);
        }
    }
}
