use planecensus::census::{census_polynomial, ConflictGraph};
use planecensus::geometry::{generate, PointSetKind};
use std::time::Instant;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let kind = match std::env::args().nth(2).as_deref() {
        Some("chain") => PointSetKind::ConvexChain,
        Some("random") => PointSetKind::RandomTriangular,
        _ => PointSetKind::Convex,
    };
    let s = generate(kind, n, 1).unwrap();
    let g = ConflictGraph::new(&s).unwrap();
    let t = Instant::now();
    let p = census_polynomial(&g).unwrap();
    println!(
        "n={n} pg={} tr={} in {:?}",
        p.total(),
        p.triangulations(),
        t.elapsed()
    );
}
