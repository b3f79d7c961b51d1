//! Verification suites: each check compares a fast path against an
//! independent oracle and prints one PASS/FAIL line.

use std::io::Write;

use num_bigint::BigUint;
use num_rational::BigRational;

use planecensus::census::{
    brute_force_census, census_polynomial_with, CensusConfig, ConflictGraph,
    BRUTE_FORCE_MAX_SEGMENTS,
};
use planecensus::charging::{
    max_charge, published_basic_params, published_refined_params, solve_charge_lp, Mode,
    DEFAULT_EVAL_CAP,
};
use planecensus::formulas::{chain_census, pak_count};
use planecensus::geometry::{generate, PointSet, PointSetKind};
use planecensus::vings::{ving_statistics, VingConfig};

use crate::{DynResult, Suite};

/// Random instances per size in the census and vings suites.
const RANDOM_PER_SIZE: u64 = 3;
/// Exhaustive ving enumeration is only run up to this size.
const VINGS_MAX_N: usize = 7;

struct Reporter<'a> {
    out: &'a mut dyn Write,
    failures: usize,
}

impl Reporter<'_> {
    fn check(&mut self, suite: &str, what: &str, ok: bool, detail: String) -> DynResult<()> {
        if ok {
            writeln!(self.out, "PASS {suite}: {what}")?;
        } else {
            self.failures += 1;
            writeln!(self.out, "FAIL {suite}: {what}: {detail}")?;
        }
        Ok(())
    }
}

fn config(threads: usize) -> CensusConfig {
    CensusConfig {
        threads,
        ..CensusConfig::default()
    }
}

fn random_sets(nmax: usize, seed: u64, nmin: usize) -> DynResult<Vec<(String, PointSet)>> {
    let mut sets = Vec::new();
    for n in nmin..=nmax {
        for k in 0..RANDOM_PER_SIZE {
            let s = seed.wrapping_add(k);
            sets.push((
                format!("random N={n} seed={s}"),
                generate(PointSetKind::RandomTriangular, n, s)?,
            ));
        }
    }
    Ok(sets)
}

/// Returns Ok(true) when every check passed.
pub fn run_suites(
    suite: Suite,
    nmax: usize,
    seed: u64,
    threads: usize,
    out: &mut dyn Write,
) -> DynResult<bool> {
    let mut r = Reporter { out, failures: 0 };
    let all = suite == Suite::All;
    if all || suite == Suite::Census {
        census_suite(&mut r, nmax, seed, threads)?;
    }
    if all || suite == Suite::Pak {
        pak_suite(&mut r, nmax, threads)?;
    }
    if all || suite == Suite::Chain {
        chain_suite(&mut r, nmax, threads)?;
    }
    if all || suite == Suite::Vings {
        vings_suite(&mut r, nmax, seed, threads)?;
    }
    if all || suite == Suite::Charge {
        charge_suite(&mut r)?;
    }
    writeln!(r.out, "{} failure(s)", r.failures)?;
    Ok(r.failures == 0)
}

fn census_suite(r: &mut Reporter<'_>, nmax: usize, seed: u64, threads: usize) -> DynResult<()> {
    let mut sets = random_sets(nmax, seed, 4)?;
    for n in 3..=nmax {
        sets.push((
            format!("convex N={n}"),
            generate(PointSetKind::Convex, n, 0)?,
        ));
    }
    for (name, s) in sets {
        let g = ConflictGraph::new(&s)?;
        let fast = census_polynomial_with(&g, &config(threads))?;
        let serial = census_polynomial_with(&g, &config(1))?;
        r.check(
            "census",
            &format!("{name} thread-count independent"),
            fast == serial,
            format!("{:?} vs {:?}", fast.coefficients, serial.coefficients),
        )?;
        if g.num_segments() > BRUTE_FORCE_MAX_SEGMENTS {
            continue;
        }
        let brute = brute_force_census(&g)?;
        r.check(
            "census",
            &format!("{name} matches subset enumeration"),
            fast == brute,
            format!("{:?} vs {:?}", fast.coefficients, brute.coefficients),
        )?;
    }
    Ok(())
}

/// pg_m of the convex n-gon divided by (1 + x)^n gives the diagonal counts.
fn pak_suite(r: &mut Reporter<'_>, nmax: usize, threads: usize) -> DynResult<()> {
    for n in 3..=nmax.max(3) {
        let g = ConflictGraph::new(&generate(PointSetKind::Convex, n, 0)?)?;
        let mut remainder = census_polynomial_with(&g, &config(threads))?.coefficients;
        // Synthetic division by (1 + x), n times; exact in the naturals.
        for _ in 0..n {
            let mut q = vec![BigUint::default(); remainder.len() - 1];
            let mut carry = BigUint::default();
            for (m, c) in remainder.iter().enumerate().take(q.len()) {
                let v = c - &carry;
                q[m] = v.clone();
                carry = v;
            }
            remainder = q;
        }
        let expected: Vec<BigUint> = (0..remainder.len() as u64)
            .map(|m| pak_count(n as u64, m))
            .collect::<Result<_, _>>()?;
        r.check(
            "pak",
            &format!("convex N={n} diagonal counts"),
            remainder == expected,
            format!("{remainder:?} vs {expected:?}"),
        )?;
    }
    Ok(())
}

fn chain_suite(r: &mut Reporter<'_>, nmax: usize, threads: usize) -> DynResult<()> {
    for n in 4..=nmax.max(4) {
        let g = ConflictGraph::new(&generate(PointSetKind::ConvexChain, n, 0)?)?;
        let got = census_polynomial_with(&g, &config(threads))?.coefficients;
        let expected = chain_census(n as u64)?;
        r.check(
            "chain",
            &format!("convex chain N={n} closed-form census"),
            got == expected,
            format!("{got:?} vs {expected:?}"),
        )?;
    }
    Ok(())
}

fn vings_suite(r: &mut Reporter<'_>, nmax: usize, seed: u64, threads: usize) -> DynResult<()> {
    let config = VingConfig {
        threads,
        census: config(1),
        ..VingConfig::default()
    };
    for (name, s) in random_sets(nmax.min(VINGS_MAX_N), seed, 4)? {
        let st = ving_statistics(&s, &config)?;
        let per_point = st.per_point.iter().all(|p| p.holds(&st.pg));
        r.check(
            "vings",
            &format!("{name} per-point completion identity"),
            per_point,
            "a point violates sum_vx(q) = sum deg over completions".into(),
        )?;
        r.check(
            "vings",
            &format!("{name} global identity"),
            st.identity_check.equal(),
            format!("{} vs {}", st.identity_check.lhs, st.identity_check.rhs),
        )?;
    }
    Ok(())
}

fn charge_suite(r: &mut Reporter<'_>) -> DynResult<()> {
    let rational = |n: u32, d: u32| BigRational::new(n.into(), d.into());
    for (mode, expected) in [
        (Mode::Basic, rational(1, 12)),
        (Mode::Refined, rational(11, 136)),
    ] {
        let lp = solve_charge_lp(mode, 11, DEFAULT_EVAL_CAP)?;
        r.check(
            "charge",
            &format!("{} LP optimum at M=11 is {expected}", mode.name()),
            lp.value == expected,
            lp.value.to_string(),
        )?;
    }
    for (mode, params, target) in [
        (Mode::Basic, published_basic_params(), 1.0 / 12.0),
        (Mode::Refined, published_refined_params(), 11.0 / 136.0),
    ] {
        let rep = max_charge(&params, mode, DEFAULT_EVAL_CAP)?;
        r.check(
            "charge",
            &format!("{} published parameters reach the optimum", mode.name()),
            (rep.max_charge - target).abs() <= 1e-4,
            format!("max charge {}", rep.max_charge),
        )?;
    }
    Ok(())
}
