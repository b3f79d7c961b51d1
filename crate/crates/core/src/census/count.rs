//! Size-indexed independent-set counting on the conflict graph.
//!
//! Each call strips isolated segments (a factor of 1 + x each), splits the
//! remaining active segments into connected components whose polynomials
//! multiply, and branches on a maximum-degree segment of each component:
//! `P(C) = P(C - v) + x * P(C - N[v])`. Component results are memoized on the
//! exact active mask.

use std::hash::BuildHasherDefault;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use rustc_hash::FxHasher;

use super::poly::{self, Count, Overflow, Poly};
use super::{CensusError, CensusPolynomial, ConflictGraph};

/// Components at or below this size are recomputed instead of cached.
const MEMO_MIN_SIZE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusConfig {
    /// Cap on cached component polynomials.
    pub max_memo_entries: usize,
    /// Cap on branching steps (cache misses).
    pub max_branch_nodes: u64,
    /// Worker threads; 1 runs on the calling thread.
    pub threads: usize,
}

impl Default for CensusConfig {
    /// 8M cache entries (a few GiB at N = 12 worst case), 10^10 branch nodes,
    /// one thread.
    fn default() -> Self {
        CensusConfig {
            max_memo_entries: 8_000_000,
            max_branch_nodes: 10_000_000_000,
            threads: 1,
        }
    }
}

enum Abort {
    Overflow,
    Budget(String),
}

impl From<Overflow> for Abort {
    fn from(_: Overflow) -> Self {
        Abort::Overflow
    }
}

type Memo<C> = DashMap<u128, Arc<Poly<C>>, BuildHasherDefault<FxHasher>>;

struct Counter<'a, C: Count> {
    adj: &'a [u128],
    memo: Memo<C>,
    entries: AtomicUsize,
    nodes: AtomicU64,
    config: &'a CensusConfig,
    parallel_depth: usize,
}

#[inline]
fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

impl<'a, C: Count> Counter<'a, C> {
    fn count_set(&self, active: u128, depth: usize) -> Result<Poly<C>, Abort> {
        let mut isolated = 0usize;
        let mut rest = 0u128;
        for v in bits(active) {
            if self.adj[v] & active == 0 {
                isolated += 1;
            } else {
                rest |= 1u128 << v;
            }
        }
        let mut result = poly::binomial_row(isolated)?;
        while rest != 0 {
            let comp = self.component(rest);
            rest &= !comp;
            let p = self.count_component(comp, depth)?;
            result = poly::mul(&result, &p)?;
        }
        Ok(result)
    }

    fn component(&self, within: u128) -> u128 {
        let seed = within & within.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & within & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    fn count_component(&self, comp: u128, depth: usize) -> Result<Arc<Poly<C>>, Abort> {
        let cached = comp.count_ones() > MEMO_MIN_SIZE;
        if cached {
            if let Some(hit) = self.memo.get(&comp) {
                return Ok(Arc::clone(hit.value()));
            }
        }
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if nodes > self.config.max_branch_nodes {
            return Err(Abort::Budget(format!(
                "more than {} branch nodes",
                self.config.max_branch_nodes
            )));
        }

        // Maximum degree within the component, lowest index on ties.
        let mut pivot = 0;
        let mut best = 0;
        for v in bits(comp) {
            let d = (self.adj[v] & comp).count_ones();
            if d > best {
                best = d;
                pivot = v;
            }
        }
        let without = comp & !(1u128 << pivot);
        let after_include = without & !self.adj[pivot];

        let (excluded, included) = if depth < self.parallel_depth {
            rayon::join(
                || self.count_set(without, depth + 1),
                || self.count_set(after_include, depth + 1),
            )
        } else {
            (
                self.count_set(without, depth + 1),
                self.count_set(after_include, depth + 1),
            )
        };
        let result = Arc::new(poly::add_shifted(&excluded?, &included?)?);

        if cached {
            if self.entries.load(Ordering::Relaxed) >= self.config.max_memo_entries {
                return Err(Abort::Budget(format!(
                    "more than {} cached components",
                    self.config.max_memo_entries
                )));
            }
            if self.memo.insert(comp, Arc::clone(&result)).is_none() {
                self.entries.fetch_add(1, Ordering::Relaxed);
            }
        }
        Ok(result)
    }
}

fn run<C: Count>(adj: &[u128], all: u128, config: &CensusConfig) -> Result<Vec<BigUint>, Abort> {
    let parallel_depth = if config.threads > 1 {
        (usize::BITS - (config.threads - 1).leading_zeros()) as usize + 3
    } else {
        0
    };
    let counter = Counter::<C> {
        adj,
        memo: Memo::default(),
        entries: AtomicUsize::new(0),
        nodes: AtomicU64::new(0),
        config,
        parallel_depth,
    };
    let p = counter.count_set(all, 0)?;
    Ok(p.into_iter().map(Count::into_big).collect())
}

/// Exact census with the default configuration.
pub fn census_polynomial(g: &ConflictGraph) -> Result<CensusPolynomial, CensusError> {
    census_polynomial_with(g, &CensusConfig::default())
}

/// Exact census. The result does not depend on `config.threads`.
pub fn census_polynomial_with(
    g: &ConflictGraph,
    config: &CensusConfig,
) -> Result<CensusPolynomial, CensusError> {
    let adj: Vec<u128> = (0..g.num_segments()).map(|s| g.crossing(s).0).collect();
    let all = g.all_segments().0;

    let compute = || -> Result<Vec<BigUint>, CensusError> {
        let outcome = match run::<u128>(&adj, all, config) {
            Err(Abort::Overflow) => run::<BigUint>(&adj, all, config),
            other => other,
        };
        outcome.map_err(|abort| match abort {
            Abort::Budget(msg) => CensusError::ResourceLimit(msg),
            Abort::Overflow => unreachable!("BigUint arithmetic cannot overflow"),
        })
    };

    let coefficients = if config.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| CensusError::ThreadPool(e.to_string()))?
            .install(compute)?
    } else {
        compute()?
    };
    let set = g.point_set();
    Ok(CensusPolynomial::from_coefficients(
        set.n(),
        set.h(),
        coefficients,
    ))
}
