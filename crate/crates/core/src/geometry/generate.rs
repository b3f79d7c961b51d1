//! Deterministic point-set generators.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`; integers
//! in `[0, k)` are drawn from `next_u64` by rejection (values at or above the
//! largest multiple of `k` are redrawn), so streams are stable across
//! platforms and crate versions.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{orient, segments_properly_cross, GeometryError, Orientation, Point, PointSet};

/// Side length of the bounding triangle used by [`PointSetKind::RandomTriangular`].
pub const RANDOM_TRIANGLE_SIZE: i64 = 1 << 16;

/// First apex height tried for the convex chain; doubled until the apex sees
/// every chain point.
pub const CHAIN_APEX_START_HEIGHT: i64 = 8;

const RETRIES_PER_POINT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointSetKind {
    /// Points on the parabola `y = x^2`; all extreme.
    Convex,
    /// `n - 1` points on a strictly concave arch plus an apex above it.
    /// The chain occupies indices `0..n-1` left to right, the apex is `n - 1`.
    ConvexChain,
    /// A fixed large triangle (indices 0..3) plus `n - 3` random interior points.
    RandomTriangular,
}

impl PointSetKind {
    pub fn name(self) -> &'static str {
        match self {
            PointSetKind::Convex => "convex",
            PointSetKind::ConvexChain => "convex_chain",
            PointSetKind::RandomTriangular => "random_triangular",
        }
    }
}

pub fn generate(kind: PointSetKind, n: usize, seed: u64) -> Result<PointSet, GeometryError> {
    let required = match kind {
        PointSetKind::Convex => 3,
        PointSetKind::ConvexChain | PointSetKind::RandomTriangular => 4,
    };
    if n < required {
        return Err(GeometryError::TooFewPoints {
            required,
            actual: n,
        });
    }
    match kind {
        PointSetKind::Convex => convex(n),
        PointSetKind::ConvexChain => convex_chain(n),
        PointSetKind::RandomTriangular => random_triangular(n, seed),
    }
}

fn convex(n: usize) -> Result<PointSet, GeometryError> {
    let points = (0..n as i64).map(|i| Point::new(i, i * i)).collect();
    PointSet::new(points)
}

fn convex_chain(n: usize) -> Result<PointSet, GeometryError> {
    let k = (n - 1) as i64;
    // Symmetric concave arch: x = 2i, y = -(2i - (k - 1))^2. The apex sits on
    // the axis of symmetry x = k - 1.
    let chain: Vec<Point> = (0..k)
        .map(|i| {
            let u = 2 * i - (k - 1);
            Point::new(2 * i, -(u * u))
        })
        .collect();

    let mut height = CHAIN_APEX_START_HEIGHT;
    loop {
        let apex = Point::new(k - 1, height);
        let mut points = chain.clone();
        points.push(apex);
        if let Ok(set) = PointSet::new(points) {
            if set.h() == 3 && apex_sees_chain(&set) {
                return Ok(set);
            }
        }
        height = height
            .checked_mul(2)
            .filter(|h| *h <= super::COORD_LIMIT)
            .ok_or_else(|| {
                GeometryError::GenerationFailure(format!(
                    "no valid apex height for a convex chain of {n} points"
                ))
            })?;
    }
}

/// Exhaustive check that every apex edge avoids every chain-to-chain segment.
fn apex_sees_chain(set: &PointSet) -> bool {
    let apex = set.n() - 1;
    let a = set.point(apex);
    (0..apex).all(|q| {
        let qp = set.point(q);
        (0..apex).all(|i| {
            (i + 1..apex).all(|j| !segments_properly_cross(a, qp, set.point(i), set.point(j)))
        })
    })
}

fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % bound);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

fn random_triangular(n: usize, seed: u64) -> Result<PointSet, GeometryError> {
    let s = RANDOM_TRIANGLE_SIZE;
    let corners = [Point::new(0, 0), Point::new(s, 0), Point::new(s / 2, s)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = corners.to_vec();

    let budget = RETRIES_PER_POINT * n;
    let mut attempts = 0;
    while points.len() < n {
        attempts += 1;
        if attempts > budget {
            return Err(GeometryError::GenerationFailure(format!(
                "placed {} of {n} points after {budget} attempts",
                points.len()
            )));
        }
        let x = uniform_below(&mut rng, s as u64 + 1) as i64;
        let y = uniform_below(&mut rng, s as u64 + 1) as i64;
        let candidate = Point::new(x, y);

        let strictly_inside =
            (0..3).all(|e| orient(corners[e], corners[(e + 1) % 3], candidate) == Orientation::Ccw);
        if !strictly_inside || points.contains(&candidate) {
            continue;
        }
        let collinear = (0..points.len()).any(|i| {
            (i + 1..points.len())
                .any(|j| orient(points[i], points[j], candidate) == Orientation::Collinear)
        });
        if collinear {
            continue;
        }
        points.push(candidate);
    }
    PointSet::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_chain_has_triangular_hull() {
        for n in 4..=12 {
            let s = generate(PointSetKind::ConvexChain, n, 0).unwrap();
            assert_eq!(s.h(), 3, "n = {n}");
            assert!(s.is_on_hull(n - 1));
            assert!(s.is_on_hull(0));
            assert!(s.is_on_hull(n - 2));
            assert!(apex_sees_chain(&s));
        }
    }

    #[test]
    fn convex_is_all_extreme() {
        let s = generate(PointSetKind::Convex, 8, 0).unwrap();
        assert_eq!(s.h(), 8);
    }

    #[test]
    fn random_triangular_is_seeded() {
        let a = generate(PointSetKind::RandomTriangular, 7, 42).unwrap();
        let b = generate(PointSetKind::RandomTriangular, 7, 42).unwrap();
        let c = generate(PointSetKind::RandomTriangular, 7, 43).unwrap();
        assert_eq!(a.h(), 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_sets_revalidate() {
        for kind in [
            PointSetKind::Convex,
            PointSetKind::ConvexChain,
            PointSetKind::RandomTriangular,
        ] {
            for n in 4..=10 {
                let s = generate(kind, n, n as u64).unwrap();
                let again = PointSet::new(s.points().to_vec()).unwrap();
                assert_eq!(again.hull(), s.hull());
            }
        }
    }

    #[test]
    fn too_small_is_rejected() {
        assert!(generate(PointSetKind::ConvexChain, 3, 0).is_err());
        assert!(generate(PointSetKind::RandomTriangular, 3, 0).is_err());
        assert!(generate(PointSetKind::Convex, 3, 0).is_ok());
    }
}
