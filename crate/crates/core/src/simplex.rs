//! Dense tableau simplex for `max c·x s.t. A x <= b, x >= 0` with `b >= 0`.
//!
//! The origin is always feasible under `b >= 0`, so a single phase suffices.
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable among ratio ties), which rules out cycling. With
//! [`Rational`](crate::Rational) the result is exact.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, x: Vec<S> },
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    objective: Vec<S>,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn maximize(objective: Vec<S>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    /// Adds `row·x <= rhs`.
    pub fn less_eq(&mut self, row: Vec<S>, rhs: S) -> &mut Self {
        self.rows.push(row);
        self.rhs.push(rhs);
        self
    }

    pub fn solve(&self) -> Result<LpOutcome<S>> {
        let n = self.objective.len();
        let m = self.rows.len();
        if let Some(r) = self.rows.iter().find(|r| r.len() != n) {
            return Err(Error::LinearProgram(format!(
                "row has {} coefficients, expected {n}",
                r.len()
            )));
        }
        if self.rhs.iter().any(|b| *b < S::zero()) {
            return Err(Error::LinearProgram("right-hand side must be non-negative".into()));
        }
        let tol = S::lp_tolerance();
        let width = n + m;

        // Tableau rows: [A | I | b]; basis[i] is the variable basic in row i.
        let mut t: Vec<Vec<S>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .enumerate()
            .map(|(i, (row, b))| {
                let mut r = row.clone();
                r.extend((0..m).map(|j| if i == j { S::one() } else { S::zero() }));
                r.push(b.clone());
                r
            })
            .collect();
        let mut basis: Vec<usize> = (n..n + m).collect();
        // Reduced costs c_j − z_j; the last entry tracks −objective value.
        let mut cost: Vec<S> = self.objective.clone();
        cost.extend((0..=m).map(|_| S::zero()));

        while let Some(enter) = (0..width).find(|&j| cost[j] > tol) {
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in t.iter().enumerate() {
                if row[enter] > tol {
                    let ratio = row[width].clone() / row[enter].clone();
                    let better = match &leave {
                        None => true,
                        Some((li, best)) => {
                            ratio < *best || (ratio == *best && basis[i] < basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((pr, _)) = leave else {
                return Ok(LpOutcome::Unbounded);
            };

            let pivot = t[pr][enter].clone();
            for v in t[pr].iter_mut() {
                *v = v.clone() / pivot.clone();
            }
            let pivot_row = t[pr].clone();
            for (i, row) in t.iter_mut().enumerate() {
                if i == pr || row[enter].is_zero() {
                    continue;
                }
                let factor = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
            let factor = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot_row) {
                *v = v.clone() - factor.clone() * p.clone();
            }
            basis[pr] = enter;
        }

        let mut x = vec![S::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = t[i][width].clone();
            }
        }
        let value = -cost[width].clone();
        Ok(LpOutcome::Optimal { value, x })
    }
}
