//! Closed-form counts and exponential-base bounds for plane graphs.
//!
//! Exact counts are `BigUint`; real-valued evaluators use `f64`.

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormulaError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("outside the domain: {0}")]
    DomainError(String),
}

type Result<T> = std::result::Result<T, FormulaError>;

/// Point count for the asymptotic variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMode {
    /// Completion to an arbitrary triangulation.
    Thm1,
    /// Completion using flippable edges; needs c < 1/2.
    Flippable,
}

impl RateMode {
    pub fn name(self) -> &'static str {
        match self {
            RateMode::Thm1 => "thm1",
            RateMode::Flippable => "flippable",
        }
    }
}

/// A per-point exponential base and the parameter value attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEstimate {
    pub base: f64,
    pub argmax: f64,
    pub meta: String,
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// C(n, k), zero when k > n.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(big(n), big(k))
    }
}

/// Ways to choose `m` pairwise non-crossing diagonals of a convex n-gon.
pub fn pak_count(n: u64, m: u64) -> Result<BigUint> {
    if n < 3 || m > n - 3 {
        return Err(FormulaError::OutOfRange(format!(
            "pak_count needs n >= 3 and 0 <= M <= n - 3, got n = {n}, M = {m}"
        )));
    }
    Ok(binom(n - 3, m) * binom(n + m - 1, m) / big(m + 1))
}

fn check_chain_args(n: u64, m: u64) -> Result<()> {
    if n < 4 || m > 3 * n - 6 {
        return Err(FormulaError::OutOfRange(format!(
            "chain counts need n >= 4 and 0 <= m <= 3n - 6, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

/// Plane graphs with `m` edges on the n-point convex chain: diagonals of the
/// (n-1)-gon formed by the chain, times any subset of the 2n-2 chain-side and
/// apex edges, which cross nothing.
pub fn chain_count_exact(n: u64, m: u64) -> Result<BigUint> {
    check_chain_args(n, m)?;
    let mut total = BigUint::zero();
    for k in 0..=m.min(n - 4) {
        total += pak_count(n - 1, k)? * binom(2 * n - 2, m - k);
    }
    Ok(total)
}

/// All coefficients of the convex-chain census, m = 0..=3n-6.
pub fn chain_census(n: u64) -> Result<Vec<BigUint>> {
    check_chain_args(n, 0)?;
    (0..=3 * n - 6).map(|m| chain_count_exact(n, m)).collect()
}

/// The asymptotic-form term: Pak's count applied with n rather than n - 1.
/// Agrees with [`chain_count_exact`] only up to a subexponential factor.
pub fn chain_f_paper(n: u64, m: u64, k: u64) -> Result<BigUint> {
    check_chain_args(n, m)?;
    if k > m {
        return Err(FormulaError::OutOfRange(format!("k = {k} exceeds m = {m}")));
    }
    if k > n - 3 {
        return Ok(BigUint::zero());
    }
    Ok(pak_count(n, k)? * binom(2 * n - 2, m - k))
}

/// x^x with 0^0 = 1.
fn self_power(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.powf(x)
    }
}

/// Stirling base of the chain count with cN edges, dN of them diagonals.
pub fn tilde_f(c: f64, d: f64) -> Result<f64> {
    let eps = 1e-12;
    if !(c.is_finite() && d.is_finite())
        || d < -eps
        || d > 1.0 + eps
        || d > c + eps
        || c - d > 2.0 + eps
    {
        return Err(FormulaError::DomainError(format!(
            "tilde_f needs 0 <= d <= 1, d <= c, c - d <= 2; got c = {c}, d = {d}"
        )));
    }
    let (d, cd) = (d.clamp(0.0, 1.0), (c - d).clamp(0.0, 2.0));
    let num = 4.0 * self_power(1.0 + d);
    let den = self_power(1.0 - d) * self_power(d).powi(2) * self_power(cd) * self_power(2.0 - cd);
    Ok(num / den)
}

/// Maximizer in d of `tilde_f(c, d)`: the positive root of 2d^2 + d - c = 0.
pub fn d_star(c: f64) -> Result<f64> {
    if !(0.0..=3.0).contains(&c) {
        return Err(FormulaError::DomainError(format!(
            "d_star needs 0 <= c <= 3, got {c}"
        )));
    }
    Ok((-1.0 + (8.0 * c + 1.0).sqrt()) / 4.0)
}

/// Log of the factor whose sign gives the sign of d/dd tilde_f(c, d).
pub fn tilde_f_slope_factor(c: f64, d: f64) -> f64 {
    ((1.0 - d) * (1.0 + d) * (c - d) / (d * d * (2.0 - c + d))).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Bound {
    pub t: f64,
    pub b: f64,
    /// b * tr_base.
    pub bound_base: f64,
}

/// Triangulation-based base bound for graphs with cN edges.
pub fn thm2_bound(c: f64, tr_base: f64) -> Result<Thm2Bound> {
    if !(0.0..3.0).contains(&c) {
        return Err(FormulaError::DomainError(format!(
            "thm2_bound needs 0 <= c < 3, got {c}"
        )));
    }
    if !(tr_base.is_finite() && tr_base > 0.0) {
        return Err(FormulaError::DomainError(format!(
            "tr_base must be positive, got {tr_base}"
        )));
    }
    let t = 0.5 * ((3.5f64 * 3.5 + 3.0 * c + c * c).sqrt() - 2.5 - c);
    let den = 8.0
        * self_power(c + t - 0.5)
        * self_power(3.0 - c - t)
        * (2.0 * t).powf(t)
        * self_power(0.5 - t);
    let b = 5f64.powf(2.5) / den;
    Ok(Thm2Bound {
        t,
        b,
        bound_base: b * tr_base,
    })
}

/// Maximizes `f` on [lo, hi]: scan at `step`, then golden-section refinement
/// around the first best grid point (ties go to the smaller argument).
pub fn maximize_unimodal<F>(f: F, lo: f64, hi: f64, step: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    assert!(lo < hi && step > 0.0);
    let steps = ((hi - lo) / step).floor() as usize;
    let grid = |i: usize| (lo + i as f64 * step).min(hi);
    let mut best_i = 0;
    let mut best = f(grid(0));
    for i in 1..=steps {
        let v = f(grid(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = (
        grid(best_i.saturating_sub(1)),
        grid((best_i + 1).min(steps)),
    );
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx > best {
        (x, fx)
    } else {
        (grid(best_i), best)
    }
}

const SCAN_STEP: f64 = 1e-3;

/// The c maximizing B(c) on [0, 3).
pub fn thm2_argmax() -> GrowthEstimate {
    let (c, b) = maximize_unimodal(
        |c| thm2_bound(c, 1.0).map_or(f64::NEG_INFINITY, |r| r.b),
        0.0,
        3.0 - SCAN_STEP,
        SCAN_STEP,
    );
    GrowthEstimate {
        base: b,
        argmax: c,
        meta: "max over c of B(c)".into(),
    }
}

/// max over c of tilde_f(c, d_star(c)): the total plane-graph base for the
/// convex chain.
pub fn chain_peak() -> GrowthEstimate {
    let g = |c: f64| {
        d_star(c)
            .and_then(|d| tilde_f(c, d))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (c, base) = maximize_unimodal(g, 0.0, 3.0, SCAN_STEP);
    GrowthEstimate {
        base,
        argmax: c,
        meta: "max over c of tilde_f(c, d_star(c))".into(),
    }
}

/// Lower bound on pg_{cN+1}/pg_{cN} for any set with h hull points.
pub fn rc_lower(c: f64, n: Size, h: u64, mode: RateMode) -> Result<f64> {
    let limit = match mode {
        RateMode::Thm1 => 3.0,
        RateMode::Flippable => 0.5,
    };
    if !(0.0..limit).contains(&c) {
        return Err(FormulaError::DomainError(format!(
            "rc_lower ({}) needs 0 <= c < {limit}, got {c}",
            mode.name()
        )));
    }
    match n {
        Size::Infinite => {
            if c == 0.0 {
                return Err(FormulaError::DomainError(
                    "asymptotic rc_lower is unbounded at c = 0".into(),
                ));
            }
            Ok(match mode {
                RateMode::Thm1 => (3.0 - c) / c,
                RateMode::Flippable => (3.5 - 2.0 * c) / c,
            })
        }
        Size::Finite(n) => {
            let (n, h) = (n as f64, h as f64);
            Ok(match mode {
                RateMode::Thm1 => ((3.0 - c) * n - h - 3.0) / (c * n + 1.0),
                RateMode::Flippable => ((3.5 - 2.0 * c) * n - h - 5.0) / (c * n + 1.0),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainRate {
    /// Ratio when the extra edge is a chain diagonal.
    pub type2_rate: f64,
    /// Ratio when the extra edge is a chain side or an apex edge.
    pub type13_rate: f64,
    pub closed_form: f64,
}

/// Increase rate of the convex chain with diagonal share d = d_star(c).
pub fn chain_rate(c: f64, n: Size) -> Result<ChainRate> {
    if !(c > 0.0 && c < 3.0) {
        return Err(FormulaError::DomainError(format!(
            "chain_rate needs 0 < c < 3, got {c}"
        )));
    }
    let d = d_star(c)?;
    let root = (1.0 + 8.0 * c).sqrt();
    let closed_form = (-4.0 * c + root + 7.0) / (4.0 * c - root + 1.0);
    let (type2_rate, type13_rate) = match n {
        Size::Infinite => ((1.0 - d * d) / (d * d), (2.0 - c + d) / (c - d)),
        Size::Finite(n) => {
            let n = n as f64;
            let dn = d * n;
            (
                (dn + n) * (n - dn - 3.0) / ((dn + 1.0) * (dn + 2.0)),
                ((2.0 - c + d) * n - 2.0) / ((c - d) * n + 1.0),
            )
        }
    };
    Ok(ChainRate {
        type2_rate,
        type13_rate,
        closed_form,
    })
}

const EQ1_SAMPLES: usize = 10_000;

/// alpha * (min of g on [c - delta, c])^(-delta), g the asymptotic rate bound.
pub fn apply_eq1(alpha: f64, c: f64, delta: f64, mode: RateMode) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(FormulaError::DomainError(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if !(0.0 <= delta && delta <= c) {
        return Err(FormulaError::DomainError(format!(
            "apply_eq1 needs 0 <= delta <= c, got c = {c}, delta = {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(alpha);
    }
    let lo = c - delta;
    let mut min_g = f64::INFINITY;
    for i in 0..=EQ1_SAMPLES {
        let lambda = lo + delta * i as f64 / EQ1_SAMPLES as f64;
        if lambda == 0.0 {
            continue;
        }
        min_g = min_g.min(rc_lower(lambda, Size::Infinite, 0, mode)?);
    }
    if min_g <= 0.0 {
        return Err(FormulaError::DomainError(format!(
            "rate bound is not positive on [{lo}, {c}]"
        )));
    }
    Ok(alpha * min_g.powf(-delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub c: f64,
    pub chain_rate: f64,
    pub thm1_bound: f64,
    pub margin: f64,
}

pub const TABLE1_C: [f64; 4] = [2.0 / 3.0, 1.0, 4.0 / 3.0, 5.0 / 3.0];

/// Asymptotic chain rate against the asymptotic lower bound at each c.
pub fn table1(cs: &[f64]) -> Result<Vec<Table1Row>> {
    cs.iter()
        .map(|&c| {
            let chain_rate = chain_rate(c, Size::Infinite)?.closed_form;
            let thm1_bound = rc_lower(c, Size::Infinite, 0, RateMode::Thm1)?;
            Ok(Table1Row {
                c,
                chain_rate,
                thm1_bound,
                margin: chain_rate - thm1_bound,
            })
        })
        .collect()
}

/// `{formula, inputs, outputs}`.
pub fn formula_json(formula: &str, inputs: Value, outputs: Value) -> Value {
    json!({ "formula": formula, "inputs": inputs, "outputs": outputs })
}
