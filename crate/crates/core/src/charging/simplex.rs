//! Dense exact-rational simplex in slack (dictionary) form.
//!
//! Solves `maximize c.x subject to A x <= b, x >= 0`. Bland's rule picks the
//! entering variable with the lowest index and breaks ratio-test ties by the
//! lowest basic index, so pivoting terminates and is deterministic. A
//! negative right-hand side triggers an auxiliary phase that maximizes -x0.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Rows `(a, b)` meaning `a . x <= b`; `a` has `num_vars` entries.
    pub rows: Vec<(Vec<Q>, Q)>,
    /// Maximized.
    pub objective: Vec<Q>,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Q>,
    pub value: Q,
}

/// x_basic[i] = b[i] - sum_j a[i][j] * x_nonbasic[j]; z = v + sum_j c[j] * x_nonbasic[j].
struct Dictionary {
    nonbasic: Vec<usize>,
    basic: Vec<usize>,
    a: Vec<Vec<Q>>,
    b: Vec<Q>,
    c: Vec<Q>,
    v: Q,
}

impl Dictionary {
    fn pivot(&mut self, leave: usize, enter: usize) {
        let pivot = self.a[leave][enter].clone();
        let cols = self.nonbasic.len();

        // Rewrite the leaving row to express the entering variable.
        let mut row: Vec<Q> = self.a[leave].iter().map(|x| x / &pivot).collect();
        row[enter] = Q::one() / &pivot;
        let b_row = &self.b[leave] / &pivot;

        for i in 0..self.a.len() {
            if i == leave {
                continue;
            }
            let factor = self.a[i][enter].clone();
            if factor.is_zero() {
                continue;
            }
            for j in 0..cols {
                if j == enter {
                    self.a[i][j] = -(&factor * &row[j]);
                } else if !row[j].is_zero() {
                    let delta = &factor * &row[j];
                    self.a[i][j] -= delta;
                }
            }
            let delta = &factor * &b_row;
            self.b[i] -= delta;
        }

        let factor = self.c[enter].clone();
        if !factor.is_zero() {
            self.v += &factor * &b_row;
            for j in 0..cols {
                if j == enter {
                    self.c[j] = -(&factor * &row[j]);
                } else if !row[j].is_zero() {
                    let delta = &factor * &row[j];
                    self.c[j] -= delta;
                }
            }
        }

        self.a[leave] = row;
        self.b[leave] = b_row;
        std::mem::swap(&mut self.basic[leave], &mut self.nonbasic[enter]);
    }

    /// Pivots to optimality. Returns false if unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let enter = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(enter) = enter else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][enter].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basic[i] < self.basic[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((i, _)) => self.pivot(i, enter),
                None => return false,
            }
        }
    }

    fn values(&self, count: usize) -> Vec<Q> {
        let mut x = vec![Q::zero(); count];
        for (i, &var) in self.basic.iter().enumerate() {
            if var < count {
                x[var] = self.b[i].clone();
            }
        }
        x
    }
}

pub fn solve(lp: &LinearProgram) -> Result<Solution, LpError> {
    let n = lp.num_vars;
    let m = lp.rows.len();
    let mut dict = Dictionary {
        nonbasic: (0..n).collect(),
        basic: (n..n + m).collect(),
        a: lp.rows.iter().map(|(a, _)| a.clone()).collect(),
        b: lp.rows.iter().map(|(_, b)| b.clone()).collect(),
        c: lp.objective.clone(),
        v: Q::zero(),
    };

    let most_negative = (0..m)
        .filter(|&i| dict.b[i].is_negative())
        .min_by(|&i, &k| dict.b[i].cmp(&dict.b[k]).then(i.cmp(&k)));
    if let Some(start) = most_negative {
        // Auxiliary variable x0 gets index n + m and sits in the last column.
        let x0 = n + m;
        dict.nonbasic.push(x0);
        for row in &mut dict.a {
            row.push(-Q::one());
        }
        let original_c = std::mem::replace(&mut dict.c, vec![Q::zero(); n]);
        dict.c.push(-Q::one());
        dict.pivot(start, n);
        dict.optimize();
        if !dict.v.is_zero() {
            return Err(LpError::Infeasible);
        }
        if let Some(i) = dict.basic.iter().position(|&v| v == x0) {
            // Degenerate: x0 is basic at zero; pivot it out on any nonzero entry.
            let j = (0..dict.nonbasic.len())
                .filter(|&j| !dict.a[i][j].is_zero())
                .min_by_key(|&j| dict.nonbasic[j])
                .expect("x0 row has a nonzero entry");
            dict.pivot(i, j);
        }
        let col = dict.nonbasic.iter().position(|&v| v == x0).unwrap();
        dict.nonbasic.remove(col);
        for row in &mut dict.a {
            row.remove(col);
        }

        // Restate the original objective over the current nonbasic variables.
        let mut c = vec![Q::zero(); dict.nonbasic.len()];
        let mut v = Q::zero();
        for (var, coef) in original_c.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            if let Some(j) = dict.nonbasic.iter().position(|&x| x == var) {
                c[j] += coef;
            } else {
                let i = dict.basic.iter().position(|&x| x == var).unwrap();
                v += coef * &dict.b[i];
                for j in 0..c.len() {
                    let delta = coef * &dict.a[i][j];
                    c[j] -= delta;
                }
            }
        }
        dict.c = c;
        dict.v = v;
    }

    if !dict.optimize() {
        return Err(LpError::Unbounded);
    }
    Ok(Solution {
        x: dict.values(n),
        value: dict.v,
    })
}
