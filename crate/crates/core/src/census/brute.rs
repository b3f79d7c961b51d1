use num_bigint::BigUint;

use super::{CensusError, CensusPolynomial, ConflictGraph};

/// 2^24 subsets; N = 7 has 21 segments.
pub const BRUTE_FORCE_MAX_SEGMENTS: usize = 24;

/// Census by testing every subset of segments for independence. Oracle only.
pub fn brute_force_census(g: &ConflictGraph) -> Result<CensusPolynomial, CensusError> {
    let k = g.num_segments();
    if k > BRUTE_FORCE_MAX_SEGMENTS {
        return Err(CensusError::TooLarge {
            segments: k,
            max: BRUTE_FORCE_MAX_SEGMENTS,
        });
    }
    let rows: Vec<u32> = (0..k).map(|s| g.crossing(s).0 as u32).collect();
    let mut counts = vec![0u64; k + 1];
    for mask in 0u32..(1u32 << k) {
        let mut rest = mask;
        let mut plane = true;
        while rest != 0 {
            let s = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if rows[s] & mask != 0 {
                plane = false;
                break;
            }
        }
        if plane {
            counts[mask.count_ones() as usize] += 1;
        }
    }
    let set = g.point_set();
    let max = g.max_edges();
    debug_assert!(counts[max + 1..].iter().all(|&c| c == 0));
    counts.truncate(max + 1);
    Ok(CensusPolynomial::from_coefficients(
        set.n(),
        set.h(),
        counts.into_iter().map(BigUint::from).collect(),
    ))
}
