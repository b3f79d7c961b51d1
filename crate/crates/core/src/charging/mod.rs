//! Charge bounds for x-vings and the resulting growth constant.
//!
//! Every x-ving starts with unit charge. An x_i-ving with i < M passes c_i to
//! one higher-degree x-ving it reduces to, and finally spreads what it holds
//! over the 2^i vings completing to it. The largest possible final charge
//! per ving bounds the average x-ving count, and its reciprocal is the
//! growth constant.

mod empirical;
mod optimize;
pub mod simplex;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

pub use empirical::{empirical_report, EmpiricalReport, ModeComparison};
pub use optimize::{optimize_params, solve_charge_lp, LpOutcome};

#[derive(Debug, Error, PartialEq)]
pub enum ChargeError {
    #[error("invalid case {case} for degree {i}")]
    InvalidCase { case: ChargeCase, i: usize },
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("infeasible model: {0}")]
    InfeasibleModel(String),
    #[error("point set has {0} hull vertices, expected 3")]
    NotTriangularHull(usize),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parameter file line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Basic,
    /// Degree-5 x-vings pool the charge of their lower-degree reducers.
    Refined,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Basic => "basic",
            Mode::Refined => "refined",
        }
    }
}

pub const DEFAULT_EVAL_CAP: usize = 40;
pub const MIN_EVAL_CAP: usize = 13;

/// Transfer amounts c_3..c_{M-1}; c_j = 0 for j >= M.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeParams {
    m_cap: usize,
    c: Vec<f64>,
}

impl ChargeParams {
    /// `c[0]` is c_3; M = c.len() + 3.
    pub fn new(c: Vec<f64>) -> Result<Self, ChargeError> {
        if c.is_empty() {
            return Err(ChargeError::InfeasibleParams("M must be at least 4".into()));
        }
        if let Some(k) = c.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(ChargeError::InfeasibleParams(format!(
                "c_{} = {} is not a nonnegative real",
                k + 3,
                c[k]
            )));
        }
        Ok(ChargeParams {
            m_cap: c.len() + 3,
            c,
        })
    }

    pub fn zeros(m_cap: usize) -> Result<Self, ChargeError> {
        Self::new(vec![0.0; m_cap.saturating_sub(3)])
    }

    pub fn m_cap(&self) -> usize {
        self.m_cap
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    /// c_j, zero outside 3..M.
    pub fn c(&self, j: usize) -> f64 {
        if (3..self.m_cap).contains(&j) {
            self.c[j - 3]
        } else {
            0.0
        }
    }

    /// Parses one real per line; '#' starts a comment.
    pub fn parse(text: &str) -> Result<Self, ChargeError> {
        let mut c = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| ChargeError::Parse {
                line: k + 1,
                message: format!("expected a real number, got {line:?}"),
            })?;
            c.push(v);
        }
        Self::new(c)
    }
}

pub fn published_basic_params() -> ChargeParams {
    ChargeParams::new(vec![
        0.333333, 0.333333, 0.387846, 0.544067, 0.83942, 1.15292, 1.04764, 1.34586,
    ])
    .unwrap()
}

pub fn published_refined_params() -> ChargeParams {
    ChargeParams::new(vec![
        0.369874, 0.446263, 0.195332, 0.508932, 0.665472, 1.29213, 1.24496, 0.935081,
    ])
    .unwrap()
}

/// One row of the charge-bound table, or a pooled degree-5 entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeCase {
    X3,
    X4NonReducing,
    X4Convex,
    /// Convex neighborhood, 5 <= i < M.
    ConvexTransferring,
    /// Convex neighborhood, i >= M.
    ConvexTerminal,
    NonConvexReducing,
    NonConvexNonReducing,
    X5Pool {
        hull_size: usize,
        n4: usize,
        n3: usize,
    },
}

impl fmt::Display for ChargeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChargeCase::X3 => f.write_str("x3"),
            ChargeCase::X4NonReducing => f.write_str("x4-non-reducing"),
            ChargeCase::X4Convex => f.write_str("x4-convex"),
            ChargeCase::ConvexTransferring => f.write_str("convex"),
            ChargeCase::ConvexTerminal => f.write_str("convex-terminal"),
            ChargeCase::NonConvexReducing => f.write_str("non-convex-reducing"),
            ChargeCase::NonConvexNonReducing => f.write_str("non-convex-non-reducing"),
            ChargeCase::X5Pool { hull_size, n4, n3 } => {
                write!(f, "x5-pool(h={hull_size},n4={n4},n3={n3})")
            }
        }
    }
}

impl ChargeCase {
    fn valid_for(self, i: usize, m_cap: usize) -> bool {
        match self {
            ChargeCase::X3 => i == 3,
            ChargeCase::X4NonReducing | ChargeCase::X4Convex => i == 4,
            ChargeCase::ConvexTransferring => (5..m_cap).contains(&i),
            ChargeCase::ConvexTerminal => i >= 5 && i >= m_cap,
            ChargeCase::NonConvexReducing | ChargeCase::NonConvexNonReducing => i >= 5,
            ChargeCase::X5Pool { .. } => i == 5,
        }
    }

    /// Whether the bound subtracts the vertex's own outgoing transfer.
    fn transfers_out(self) -> bool {
        matches!(
            self,
            ChargeCase::X3
                | ChargeCase::X4Convex
                | ChargeCase::ConvexTransferring
                | ChargeCase::NonConvexReducing
        )
    }
}

/// Linear form of a bound: constant, terms c_j with coefficients, and
/// maximum terms. Kept symbolic so the optimizer sees the same rows.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BoundExpr {
    pub constant: f64,
    /// (coefficient, j) for coefficient * c_j.
    pub linear: Vec<(f64, usize)>,
    /// (coefficient, a, b) for coefficient * max(c_a, c_b).
    pub pair_max: Vec<(f64, usize, usize)>,
    /// (coefficient, k) for coefficient * max(c_3, ..., c_{k-1}).
    pub prefix_max: Vec<(f64, usize)>,
}

impl BoundExpr {
    fn eval(&self, p: &ChargeParams) -> f64 {
        let mut v = self.constant;
        for &(k, j) in &self.linear {
            v += k * p.c(j);
        }
        for &(k, a, b) in &self.pair_max {
            v += k * p.c(a).max(p.c(b));
        }
        for &(k, top) in &self.prefix_max {
            v += k * (3..top).map(|j| p.c(j)).fold(0.0, f64::max);
        }
        v
    }
}

/// Symbolic upper bound on ch(v) for the case at degree i.
pub(crate) fn case_expr(
    case: ChargeCase,
    i: usize,
    m_cap: usize,
    mode: Mode,
) -> Result<BoundExpr, ChargeError> {
    if !case.valid_for(i, m_cap) || matches!(case, ChargeCase::X5Pool { .. }) {
        return Err(ChargeError::InvalidCase { case, i });
    }
    let mut e = BoundExpr {
        constant: 1.0,
        linear: Vec::new(),
        pair_max: Vec::new(),
        prefix_max: Vec::new(),
    };
    let fi = i as f64;
    match case {
        ChargeCase::X3 => {}
        ChargeCase::X4NonReducing => {
            if mode == Mode::Basic {
                e.linear.push((1.0, 3));
            }
        }
        ChargeCase::X4Convex => e.linear.push((2.0, 3)),
        ChargeCase::ConvexTransferring | ChargeCase::ConvexTerminal => {
            let pairs = if i % 2 == 1 { (i - 3) / 2 } else { (i - 4) / 2 };
            for l in 1..=pairs {
                e.pair_max.push((fi, i - l, l + 2));
            }
            if i.is_multiple_of(2) {
                e.linear.push((fi / 2.0, i / 2 + 1));
            }
        }
        ChargeCase::NonConvexReducing | ChargeCase::NonConvexNonReducing => {
            e.prefix_max.push(((i * (i - 3) / 2) as f64, i));
        }
        ChargeCase::X5Pool { .. } => unreachable!(),
    }
    if case.transfers_out() && i < m_cap {
        e.linear.push((-1.0, i));
    }
    Ok(e)
}

/// Upper bound on the charge held by an x_i-ving before redistribution.
pub fn evaluate_case(
    case: ChargeCase,
    i: usize,
    p: &ChargeParams,
    mode: Mode,
) -> Result<f64, ChargeError> {
    Ok(case_expr(case, i, p.m_cap, mode)?.eval(p))
}

/// Table-3 entries (|H(v)|, n4, n3), each "or" resolved to the larger value.
pub const X5_POOL_TABLE: [(usize, usize, usize); 14] = [
    (5, 5, 5),
    (5, 4, 6),
    (5, 3, 7),
    (4, 4, 3),
    (4, 3, 4),
    (4, 3, 3),
    (4, 2, 4),
    (4, 2, 5),
    (4, 2, 2),
    (3, 3, 2),
    (3, 2, 3),
    (3, 2, 1),
    (3, 1, 2),
    (3, 1, 4),
];

/// Charge per ving when an x5-ving pools with n4 x4- and n3 x3-reducers.
pub fn x5_pool_charge(n4: usize, n3: usize) -> f64 {
    (1 + n4 + n3) as f64 / (32 + 16 * n4 + 8 * n3) as f64
}

pub fn x5_pool_charge_exact(n4: usize, n3: usize) -> num_rational::BigRational {
    num_rational::BigRational::new(
        ((1 + n4 + n3) as i64).into(),
        ((32 + 16 * n4 + 8 * n3) as i64).into(),
    )
}

/// Whether (n4, n3) is componentwise at most some table row with this |H|.
pub fn pool_row_dominates(hull_size: usize, n4: usize, n3: usize) -> bool {
    X5_POOL_TABLE
        .iter()
        .any(|&(h, a, b)| h == hull_size && n4 <= a && n3 <= b)
}

/// Cases evaluated at degree i, in report order.
pub(crate) fn cases_at(i: usize, m_cap: usize, mode: Mode) -> Vec<ChargeCase> {
    match i {
        3 => vec![ChargeCase::X3],
        4 => vec![ChargeCase::X4NonReducing, ChargeCase::X4Convex],
        5 if mode == Mode::Refined => X5_POOL_TABLE
            .iter()
            .map(|&(hull_size, n4, n3)| ChargeCase::X5Pool { hull_size, n4, n3 })
            .collect(),
        _ => vec![
            if i < m_cap {
                ChargeCase::ConvexTransferring
            } else {
                ChargeCase::ConvexTerminal
            },
            ChargeCase::NonConvexReducing,
            ChargeCase::NonConvexNonReducing,
        ],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseCharge {
    pub case: ChargeCase,
    pub i: usize,
    /// Bound on ch(v); None for pooled entries.
    pub ch: Option<f64>,
    /// Charge per ving after redistribution.
    pub redistributed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargeReport {
    pub mode: Mode,
    pub params: ChargeParams,
    pub eval_cap: usize,
    pub per_case: Vec<CaseCharge>,
    pub max_charge: f64,
    pub binding_case: ChargeCase,
    pub binding_degree: usize,
    pub growth_constant: f64,
    /// Per-degree maxima strictly decrease from 13 to the cap.
    pub tail_decreasing: bool,
}

const REFINED_NOTE: &str =
    "refined mode: x3-vings send no charge to non-reducing x4-vings (ch = 1 for that row)";

impl ChargeReport {
    /// Cases within `tol` of the maximum, in evaluation order.
    pub fn near_binding(&self, tol: f64) -> Vec<&CaseCharge> {
        self.per_case
            .iter()
            .filter(|c| c.redistributed >= self.max_charge - tol)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "mode": self.mode.name(),
            "M": self.params.m_cap,
            "params": self.params.c,
            "max_charge": self.max_charge,
            "binding_case": self.binding_case.to_string(),
            "binding_degree": self.binding_degree,
            "growth_constant": self.growth_constant,
            "eval_cap": self.eval_cap,
            "tail_decreasing": self.tail_decreasing,
            "per_case": self.per_case.iter().map(|c| json!({
                "case": c.case.to_string(),
                "i": c.i,
                "ch": c.ch,
                "redistributed": c.redistributed,
            })).collect::<Vec<_>>(),
        });
        if self.mode == Mode::Refined {
            v["interpretation"] = json!(REFINED_NOTE);
        }
        v
    }
}

/// Largest per-ving charge after redistribution, over degrees 3..=eval_cap.
pub fn max_charge(
    p: &ChargeParams,
    mode: Mode,
    eval_cap: usize,
) -> Result<ChargeReport, ChargeError> {
    if eval_cap < MIN_EVAL_CAP {
        return Err(ChargeError::InfeasibleParams(format!(
            "evaluation cap {eval_cap} is below {MIN_EVAL_CAP}"
        )));
    }
    let mut per_case = Vec::new();
    let mut per_degree_max = Vec::new();
    for i in 3..=eval_cap {
        let mut best = f64::NEG_INFINITY;
        for case in cases_at(i, p.m_cap, mode) {
            let (ch, redistributed) = match case {
                ChargeCase::X5Pool { n4, n3, .. } => (None, x5_pool_charge(n4, n3)),
                _ => {
                    let ch = evaluate_case(case, i, p, mode)?;
                    if case.transfers_out() && i < p.m_cap && ch < 0.0 {
                        return Err(ChargeError::InfeasibleParams(format!(
                            "{case} at degree {i} gives away more than it holds ({ch})"
                        )));
                    }
                    (Some(ch), ch / 2f64.powi(i as i32))
                }
            };
            best = best.max(redistributed);
            per_case.push(CaseCharge {
                case,
                i,
                ch,
                redistributed,
            });
        }
        per_degree_max.push(best);
    }
    let (mut k_best, mut max) = (0, f64::NEG_INFINITY);
    for (k, c) in per_case.iter().enumerate() {
        if c.redistributed > max {
            max = c.redistributed;
            k_best = k;
        }
    }
    let tail_decreasing = per_degree_max[MIN_EVAL_CAP - 3..]
        .windows(2)
        .all(|w| w[1] < w[0]);
    Ok(ChargeReport {
        mode,
        params: p.clone(),
        eval_cap,
        binding_case: per_case[k_best].case,
        binding_degree: per_case[k_best].i,
        per_case,
        max_charge: max,
        growth_constant: 1.0 / max,
        tail_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_examples() {
        let p = ChargeParams::new(vec![1.0 / 3.0]).unwrap();
        let x3 = evaluate_case(ChargeCase::X3, 3, &p, Mode::Basic).unwrap();
        assert!((x3 - 2.0 / 3.0).abs() < 1e-15);
        let x4 = evaluate_case(ChargeCase::X4NonReducing, 4, &p, Mode::Basic).unwrap();
        assert!((x4 - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            evaluate_case(ChargeCase::X4NonReducing, 4, &p, Mode::Refined).unwrap(),
            1.0
        );

        let q = published_basic_params();
        let convex6 = evaluate_case(ChargeCase::ConvexTransferring, 6, &q, Mode::Basic).unwrap();
        let by_hand = 1.0 + 6.0 * q.c(5).max(q.c(3)) + 3.0 * q.c(4) - q.c(6);
        assert!((convex6 - by_hand).abs() < 1e-12);
        assert!((convex6 - 3.783008).abs() < 1e-6, "{convex6}");
    }

    #[test]
    fn invalid_cases() {
        let p = published_basic_params();
        for (case, i) in [
            (ChargeCase::X3, 4),
            (ChargeCase::X4Convex, 5),
            (ChargeCase::ConvexTransferring, 11),
            (ChargeCase::ConvexTerminal, 10),
            (ChargeCase::NonConvexReducing, 4),
            (
                ChargeCase::X5Pool {
                    hull_size: 5,
                    n4: 3,
                    n3: 7,
                },
                5,
            ),
        ] {
            assert_eq!(
                evaluate_case(case, i, &p, Mode::Basic),
                Err(ChargeError::InvalidCase { case, i })
            );
        }
    }

    #[test]
    fn odd_and_terminal_rows() {
        let p = published_basic_params();
        // i = 7: 1 + 7 (max(c6, c3) + max(c5, c4)) - c7.
        let want = 1.0 + 7.0 * (p.c(6).max(p.c(3)) + p.c(5).max(p.c(4))) - p.c(7);
        let got = evaluate_case(ChargeCase::ConvexTransferring, 7, &p, Mode::Basic).unwrap();
        assert!((got - want).abs() < 1e-12);
        // i = 12 >= M: c_11 = 0 and no outgoing transfer.
        let want =
            1.0 + 12.0 * (1..=4).map(|l| p.c(12 - l).max(p.c(l + 2))).sum::<f64>() + 6.0 * p.c(7);
        let got = evaluate_case(ChargeCase::ConvexTerminal, 12, &p, Mode::Basic).unwrap();
        assert!((got - want).abs() < 1e-12);
        let nc = evaluate_case(ChargeCase::NonConvexNonReducing, 20, &p, Mode::Basic).unwrap();
        assert!((nc - (1.0 + 170.0 * 1.34586)).abs() < 1e-9);
    }

    #[test]
    fn pool_values() {
        assert_eq!(x5_pool_charge(0, 0), 1.0 / 32.0);
        assert_eq!(x5_pool_charge(3, 7), 11.0 / 136.0);
        assert_eq!(x5_pool_charge(5, 5), 11.0 / 152.0);
        let (h, n4, n3) = X5_POOL_TABLE
            .iter()
            .copied()
            .max_by(|a, b| x5_pool_charge(a.1, a.2).total_cmp(&x5_pool_charge(b.1, b.2)))
            .unwrap();
        assert_eq!((h, n4, n3), (5, 3, 7));
        assert!(pool_row_dominates(4, 4, 1));
        assert!(!pool_row_dominates(3, 4, 0));
        assert!(!pool_row_dominates(5, 5, 6));
    }

    #[test]
    fn published_basic_charge() {
        let r = max_charge(&published_basic_params(), Mode::Basic, DEFAULT_EVAL_CAP).unwrap();
        assert!((r.max_charge - 0.0833333).abs() < 1e-6, "{}", r.max_charge);
        assert!(r
            .per_case
            .iter()
            .all(|c| c.redistributed <= 0.0833333 + 1e-6));
        let x3 = &r.per_case[0];
        assert_eq!(x3.case, ChargeCase::X3);
        assert!((x3.redistributed - 0.0833333).abs() < 1e-6);
        let near: Vec<_> = r.near_binding(1e-6).iter().map(|c| c.case).collect();
        assert!(near.contains(&ChargeCase::X3) && near.contains(&ChargeCase::X4NonReducing));
        assert!(r.tail_decreasing);
        assert!((r.growth_constant * r.max_charge - 1.0).abs() < 1e-12);
    }

    #[test]
    fn published_refined_charge() {
        let r = max_charge(&published_refined_params(), Mode::Refined, DEFAULT_EVAL_CAP).unwrap();
        assert!((r.max_charge - 0.0808824).abs() < 1e-6, "{}", r.max_charge);
        assert_eq!(
            r.binding_case,
            ChargeCase::X5Pool {
                hull_size: 5,
                n4: 3,
                n3: 7
            }
        );
        assert!(r.to_json()["interpretation"].is_string());
    }

    #[test]
    fn zero_params_give_one_eighth() {
        let r = max_charge(&ChargeParams::zeros(11).unwrap(), Mode::Basic, 40).unwrap();
        assert_eq!(r.max_charge, 0.125);
        assert_eq!(r.binding_case, ChargeCase::X3);
    }

    #[test]
    fn infeasible_params() {
        assert!(matches!(
            ChargeParams::new(vec![0.1, -0.2]),
            Err(ChargeError::InfeasibleParams(_))
        ));
        assert!(ChargeParams::new(vec![]).is_err());
        let greedy = ChargeParams::new(vec![1.5]).unwrap();
        assert!(matches!(
            max_charge(&greedy, Mode::Basic, 40),
            Err(ChargeError::InfeasibleParams(_))
        ));
        assert!(max_charge(&published_basic_params(), Mode::Basic, 12).is_err());
    }

    #[test]
    fn parse_param_file() {
        let p = ChargeParams::parse("# basic\n0.25\n\n0.5 # c4\n").unwrap();
        assert_eq!(p.m_cap(), 5);
        assert_eq!(p.values(), &[0.25, 0.5]);
        assert_eq!(
            ChargeParams::parse("0.1\nabc\n"),
            Err(ChargeError::Parse {
                line: 2,
                message: "expected a real number, got \"abc\"".into()
            })
        );
    }
}
