//! Minimax choice of transfer amounts as a linear program.
//!
//! Variables are c_3..c_{M-1}, the bound t, one auxiliary per max(c_a, c_b)
//! and one per prefix maximum max(c_3..c_{k-1}). Each auxiliary is bounded
//! below by its arguments; since every maximum enters the charge rows with a
//! positive coefficient, minimizing t drives them down to the true maxima.
//! Charge rows are scaled by 2^i and added lazily: only violated degrees
//! join the model.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::simplex::{solve, LinearProgram, LpError};
use super::{
    case_expr, cases_at, max_charge, x5_pool_charge_exact, BoundExpr, ChargeCase, ChargeError,
    ChargeParams, ChargeReport, Mode, DEFAULT_EVAL_CAP,
};

type Q = BigRational;

fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn q_f64(v: f64) -> Q {
    // Coefficients are small integers or halves, so the conversion is exact.
    Q::from_float(v).expect("finite coefficient")
}

struct Model {
    m_cap: usize,
    num_vars: usize,
    t: usize,
    pairs: BTreeMap<(usize, usize), usize>,
    prefixes: BTreeMap<usize, usize>,
}

impl Model {
    fn new(m_cap: usize) -> Self {
        let k = m_cap - 3;
        let mut next = k + 1;
        let mut pairs = BTreeMap::new();
        for a in 3..m_cap {
            for b in a + 1..m_cap {
                pairs.insert((a, b), next);
                next += 1;
            }
        }
        let mut prefixes = BTreeMap::new();
        for top in 5..=m_cap {
            prefixes.insert(top, next);
            next += 1;
        }
        Model {
            m_cap,
            num_vars: next,
            t: k,
            pairs,
            prefixes,
        }
    }

    fn c_var(&self, j: usize) -> Option<usize> {
        (3..self.m_cap).contains(&j).then(|| j - 3)
    }

    fn pair_var(&self, a: usize, b: usize) -> Option<usize> {
        match (self.c_var(a), self.c_var(b)) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(_)) if a == b => Some(x),
            _ => Some(self.pairs[&(a.min(b), a.max(b))]),
        }
    }

    fn prefix_var(&self, top: usize) -> Option<usize> {
        match top.min(self.m_cap) {
            0..=3 => None,
            4 => self.c_var(3),
            top => Some(self.prefixes[&top]),
        }
    }

    /// Coefficients of the bound's variable part, plus its constant.
    fn linearize(&self, e: &BoundExpr) -> (Vec<Q>, Q) {
        let mut row = vec![Q::zero(); self.num_vars];
        for &(k, j) in &e.linear {
            if let Some(v) = self.c_var(j) {
                row[v] += q_f64(k);
            }
        }
        for &(k, a, b) in &e.pair_max {
            if let Some(v) = self.pair_var(a, b) {
                row[v] += q_f64(k);
            }
        }
        for &(k, top) in &e.prefix_max {
            if let Some(v) = self.prefix_var(top) {
                row[v] += q_f64(k);
            }
        }
        (row, q_f64(e.constant))
    }

    /// Lower bound on the expression using averages in place of maxima.
    fn linearize_below(&self, e: &BoundExpr) -> (Vec<Q>, Q) {
        let mut row = vec![Q::zero(); self.num_vars];
        let add = |row: &mut Vec<Q>, j: usize, k: Q| {
            if let Some(v) = self.c_var(j) {
                row[v] += k;
            }
        };
        for &(k, j) in &e.linear {
            add(&mut row, j, q_f64(k));
        }
        for &(k, a, b) in &e.pair_max {
            let half = q_f64(k) / q_int(2);
            add(&mut row, a, half.clone());
            add(&mut row, b, half);
        }
        for &(k, top) in &e.prefix_max {
            let top = top.min(self.m_cap);
            if top > 3 {
                let share = q_f64(k) / q_int((top - 3) as i64);
                for j in 3..top {
                    add(&mut row, j, share.clone());
                }
            }
        }
        (row, q_f64(e.constant))
    }

    /// Rows that hold in every round: auxiliaries dominate their arguments.
    fn auxiliary_rows(&self) -> Vec<(Vec<Q>, Q)> {
        let mut rows = Vec::new();
        let mut dominate = |aux: usize, j: usize| {
            let mut row = vec![Q::zero(); self.num_vars];
            row[j - 3] = q_int(1);
            row[aux] = q_int(-1);
            rows.push((row, Q::zero()));
        };
        for (&(a, b), &aux) in &self.pairs {
            dominate(aux, a);
            dominate(aux, b);
        }
        for (&top, &aux) in &self.prefixes {
            for j in 3..top {
                dominate(aux, j);
            }
        }
        rows
    }
}

/// `ch / 2^i <= t` as `lin . x - 2^i t <= -constant`, or the pooled constant.
fn charge_row(model: &Model, case: ChargeCase, i: usize, mode: Mode) -> (Vec<Q>, Q) {
    if let ChargeCase::X5Pool { n4, n3, .. } = case {
        let mut row = vec![Q::zero(); model.num_vars];
        row[model.t] = q_int(-1);
        return (row, -x5_pool_charge_exact(n4, n3));
    }
    let e = case_expr(case, i, model.m_cap, mode).expect("enumerated cases are valid");
    let (mut row, constant) = model.linearize(&e);
    row[model.t] = -q_int(2).pow(i as i32);
    (row, -constant)
}

/// `ch >= 0` for every case that gives charge away, made sufficient by
/// bounding each maximum below by an average.
fn feasibility_rows(model: &Model, mode: Mode, eval_cap: usize) -> Vec<(Vec<Q>, Q)> {
    let mut rows = Vec::new();
    for i in 3..model.m_cap.min(eval_cap + 1) {
        for case in cases_at(i, model.m_cap, mode) {
            if !case.transfers_out() {
                continue;
            }
            let e = case_expr(case, i, model.m_cap, mode).unwrap();
            let (row, constant) = model.linearize_below(&e);
            rows.push((row.into_iter().map(|x| -x).collect(), constant));
        }
    }
    rows
}

/// Exact LP optimum and the rounds of constraint generation it took.
#[derive(Debug, Clone)]
pub struct LpOutcome {
    /// c_3..c_{M-1}.
    pub params: Vec<Q>,
    pub value: Q,
    pub rounds: usize,
    pub active_charge_rows: usize,
}

pub fn solve_charge_lp(
    mode: Mode,
    m_cap: usize,
    eval_cap: usize,
) -> Result<LpOutcome, ChargeError> {
    if m_cap < 4 {
        return Err(ChargeError::InfeasibleModel(format!(
            "M = {m_cap} is below 4"
        )));
    }
    let model = Model::new(m_cap);
    let mut pending: Vec<(usize, ChargeCase)> = (3..=eval_cap)
        .flat_map(|i| cases_at(i, m_cap, mode).into_iter().map(move |c| (i, c)))
        .collect();
    let first_lazy = pending.partition_point(|&(i, _)| i <= m_cap + 1);
    let mut active: Vec<(Vec<Q>, Q)> = pending
        .drain(..first_lazy)
        .map(|(i, c)| charge_row(&model, c, i, mode))
        .collect();
    let fixed: Vec<(Vec<Q>, Q)> = model
        .auxiliary_rows()
        .into_iter()
        .chain(feasibility_rows(&model, mode, eval_cap))
        .collect();

    let mut objective = vec![Q::zero(); model.num_vars];
    objective[model.t] = q_int(-1);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let lp = LinearProgram {
            num_vars: model.num_vars,
            rows: fixed.iter().chain(&active).cloned().collect(),
            objective: objective.clone(),
        };
        let sol = solve(&lp).map_err(|e| {
            ChargeError::InfeasibleModel(match e {
                LpError::Infeasible => "no feasible parameters".into(),
                LpError::Unbounded => "objective unbounded".into(),
            })
        })?;
        let violated = |row: &(Vec<Q>, Q)| {
            let lhs: Q = row.0.iter().zip(&sol.x).map(|(a, x)| a * x).sum();
            lhs > row.1
        };
        let (add, keep): (Vec<_>, Vec<_>) = pending
            .into_iter()
            .map(|(i, c)| ((i, c), charge_row(&model, c, i, mode)))
            .partition(|(_, row)| violated(row));
        pending = keep.into_iter().map(|(ic, _)| ic).collect();
        if add.is_empty() {
            return Ok(LpOutcome {
                params: sol.x[..m_cap - 3].to_vec(),
                value: -sol.value,
                rounds,
                active_charge_rows: active.len(),
            });
        }
        active.extend(add.into_iter().map(|(_, row)| row));
    }
}

/// Parameters minimizing the maximum charge, evaluated up to the default cap.
pub fn optimize_params(mode: Mode, m_cap: usize) -> Result<ChargeReport, ChargeError> {
    let outcome = solve_charge_lp(mode, m_cap, DEFAULT_EVAL_CAP)?;
    let c = outcome
        .params
        .iter()
        .map(|x| x.to_f64().unwrap_or(f64::NAN).max(0.0))
        .collect();
    max_charge(&ChargeParams::new(c)?, mode, DEFAULT_EVAL_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charging::{published_basic_params, published_refined_params};

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn basic_m4_is_one_dimensional() {
        let lp = solve_charge_lp(Mode::Basic, 4, DEFAULT_EVAL_CAP).unwrap();
        assert_eq!(lp.params, vec![q(1, 4)]);
        assert_eq!(lp.value, q(3, 32));
        let r = optimize_params(Mode::Basic, 4).unwrap();
        assert_eq!(r.params.values(), &[0.25]);
        assert_eq!(r.max_charge, 0.09375);
    }

    #[test]
    fn basic_m11_reaches_one_twelfth() {
        let lp = solve_charge_lp(Mode::Basic, 11, DEFAULT_EVAL_CAP).unwrap();
        assert_eq!(lp.value, q(1, 12));
        let r = optimize_params(Mode::Basic, 11).unwrap();
        assert!(r.max_charge <= 0.0833343, "{}", r.max_charge);
        assert!((r.max_charge - 1.0 / 12.0).abs() < 1e-6);
        let published =
            max_charge(&published_basic_params(), Mode::Basic, DEFAULT_EVAL_CAP).unwrap();
        assert!(r.max_charge <= published.max_charge + 1e-12);
    }

    #[test]
    fn refined_m11_reaches_pool_floor() {
        let lp = solve_charge_lp(Mode::Refined, 11, DEFAULT_EVAL_CAP).unwrap();
        assert_eq!(lp.value, q(11, 136));
        let r = optimize_params(Mode::Refined, 11).unwrap();
        assert!(r.max_charge <= 0.0808834, "{}", r.max_charge);
        let published =
            max_charge(&published_refined_params(), Mode::Refined, DEFAULT_EVAL_CAP).unwrap();
        assert!(r.max_charge <= published.max_charge + 1e-12);
        assert!(r.growth_constant >= 12.359);
    }

    #[test]
    fn lp_optimum_matches_re_evaluation() {
        for (mode, m) in [(Mode::Basic, 6), (Mode::Basic, 8), (Mode::Refined, 7)] {
            let lp = solve_charge_lp(mode, m, DEFAULT_EVAL_CAP).unwrap();
            let r = optimize_params(mode, m).unwrap();
            let t = lp.value.to_f64().unwrap();
            assert!(
                (r.max_charge - t).abs() < 1e-6,
                "{mode:?} {m}: {} vs {t}",
                r.max_charge
            );
        }
    }

    #[test]
    fn rejects_small_m() {
        assert!(matches!(
            optimize_params(Mode::Basic, 3),
            Err(ChargeError::InfeasibleModel(_))
        ));
    }
}
