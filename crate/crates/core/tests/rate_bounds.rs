//! Exact increase rates against both closed-form lower bounds on small sets.

use num_bigint::BigInt;
use num_rational::BigRational;

use planecensus::census::{census_polynomial, increase_rate, ConflictGraph};
use planecensus::geometry::{generate, PointSet, PointSetKind};

fn instances(nmax: usize) -> Vec<PointSet> {
    let mut out = Vec::new();
    for n in 4..=nmax {
        out.push(generate(PointSetKind::Convex, n, 0).unwrap());
        out.push(generate(PointSetKind::ConvexChain, n, 0).unwrap());
        for seed in 0..4 {
            out.push(generate(PointSetKind::RandomTriangular, n, seed).unwrap());
        }
    }
    out
}

fn ratio(num: i64, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn every_rate_meets_the_triangulation_bound() {
    for s in instances(9) {
        let census = census_polynomial(&ConflictGraph::new(&s).unwrap()).unwrap();
        let (n, h) = (s.n() as i64, s.h() as i64);
        for m in 0..census.max_edges() {
            let bound = ratio(3 * n - m as i64 - h - 3, m + 1);
            let rate = increase_rate(&census, m).unwrap();
            assert!(rate >= bound, "N = {n}, h = {h}, m = {m}: {rate} < {bound}");
        }
    }
}

/// With c = m/N < 1/2 the flippable-edge bound ((7/2 - 2c)N - h - 5)/(cN + 1)
/// is stronger. It holds everywhere here and is attained only by the empty
/// graph on a triangle with one interior point (6 segments, bound 6).
#[test]
fn sparse_rates_meet_the_flippable_bound() {
    for s in instances(9) {
        let census = census_polynomial(&ConflictGraph::new(&s).unwrap()).unwrap();
        let (n, h) = (s.n() as i64, s.h() as i64);
        for m in (0..census.max_edges()).filter(|&m| 2 * m < s.n()) {
            // Doubled numerator and denominator keep the 7/2 integral.
            let bound = ratio(7 * n - 4 * m as i64 - 2 * h - 10, 2 * (m + 1));
            let rate = increase_rate(&census, m).unwrap();
            if (n, h, m) == (4, 3, 0) {
                assert_eq!(rate, bound);
            } else {
                assert!(rate > bound, "N = {n}, h = {h}, m = {m}: {rate} vs {bound}");
            }
        }
    }
}
