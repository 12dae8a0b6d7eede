//! Linear programs, a bounded-variable primal simplex solver with row duals,
//! a duality checker and an MPS writer.

mod mps;
mod simplex;

use std::fmt;

pub use mps::{dump_lp, to_mps};
pub use simplex::{solve_lp, solve_lp_with, SimplexOptions};

/// Pivot elements smaller than this are never used.
pub const PIVOT_TOL: f64 = 1e-9;
/// Primal feasibility and optimality tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Tolerance used by [`verify_duality`].
pub const DUALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for RowSense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
    pub label: String,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates this row (zero when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.sense {
            RowSense::Le => (act - self.rhs).max(0.0),
            RowSense::Ge => (self.rhs - act).max(0.0),
            RowSense::Eq => (act - self.rhs).abs(),
        }
    }
}

/// A minimization LP: `min c.x` subject to labelled rows and column bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub var_labels: Vec<String>,
    pub rows: Vec<Row>,
    /// Constant added to every objective value reported for this program.
    pub objective_offset: f64,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_var(&mut self, label: impl Into<String>, lower: f64, upper: f64, cost: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.var_labels.push(label.into());
        self.objective.len() - 1
    }

    /// Adds a row; repeated column indices are merged and zero coefficients dropped.
    pub fn add_row(
        &mut self,
        label: impl Into<String>,
        coeffs: impl IntoIterator<Item = (usize, f64)>,
        sense: RowSense,
        rhs: f64,
    ) -> usize {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (j, a) in coeffs {
            match merged.iter_mut().find(|(k, _)| *k == j) {
                Some(entry) => entry.1 += a,
                None => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.rows.push(Row {
            coeffs: merged,
            sense,
            rhs,
            label: label.into(),
        });
        self.rows.len() - 1
    }

    pub fn var_index(&self, label: &str) -> Option<usize> {
        self.var_labels.iter().position(|l| l == label)
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.label == label)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_offset + self.objective.iter().zip(x).map(|(c, x)| c * x).sum::<f64>()
    }

    /// Appends `other`'s columns and rows, shifting its column indices.
    /// Returns the column offset of the appended block.
    pub fn append(&mut self, other: &LinearProgram) -> usize {
        let offset = self.n_vars();
        self.objective.extend_from_slice(&other.objective);
        self.lower.extend_from_slice(&other.lower);
        self.upper.extend_from_slice(&other.upper);
        self.var_labels.extend(other.var_labels.iter().cloned());
        self.objective_offset += other.objective_offset;
        self.rows.extend(other.rows.iter().map(|r| Row {
            coeffs: r.coeffs.iter().map(|&(j, a)| (j + offset, a)).collect(),
            sense: r.sense,
            rhs: r.rhs,
            label: r.label.clone(),
        }));
        offset
    }

    /// Checks index and bound consistency.
    pub fn check(&self) -> Result<(), String> {
        let n = self.n_vars();
        if self.lower.len() != n || self.upper.len() != n || self.var_labels.len() != n {
            return Err("column arrays have different lengths".into());
        }
        for j in 0..n {
            if self.lower[j] > self.upper[j] || self.lower[j].is_nan() || self.upper[j].is_nan() {
                return Err(format!(
                    "column {}: bounds [{}, {}] are inconsistent",
                    self.var_labels[j], self.lower[j], self.upper[j]
                ));
            }
            if !self.objective[j].is_finite() {
                return Err(format!("column {}: non-finite cost", self.var_labels[j]));
            }
        }
        for r in &self.rows {
            if !r.rhs.is_finite() {
                return Err(format!("row {}: non-finite right-hand side", r.label));
            }
            for &(j, a) in &r.coeffs {
                if j >= n {
                    return Err(format!("row {}: column index {j} out of range", r.label));
                }
                if !a.is_finite() {
                    return Err(format!("row {}: non-finite coefficient", r.label));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// One multiplier per row: `<= 0` on `Le` rows, `>= 0` on `Ge` rows.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    /// Largest row or bound violation of the primal point.
    pub primal_residual: f64,
    /// Largest dual sign violation or reduced-cost inconsistency.
    pub dual_residual: f64,
    /// Largest product of a multiplier and its constraint's slack.
    pub complementarity_residual: f64,
    /// `|c.x - (b.y + bound terms)|`, relative to `1 + |c.x|`.
    pub objective_gap: f64,
}

impl DualityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.primal_residual <= tol
            && self.dual_residual <= tol
            && self.complementarity_residual <= tol
            && self.objective_gap <= tol
    }

    pub fn max_residual(&self) -> f64 {
        self.primal_residual
            .max(self.dual_residual)
            .max(self.complementarity_residual)
            .max(self.objective_gap)
    }
}

/// Recomputes every optimality condition of `sol` from scratch.
pub fn verify_duality(lp: &LinearProgram, sol: &LpSolution) -> DualityReport {
    let x = &sol.primal;
    let y = &sol.duals;

    let mut primal = 0.0_f64;
    for r in &lp.rows {
        primal = primal.max(r.violation(x));
    }
    for j in 0..lp.n_vars() {
        primal = primal.max(lp.lower[j] - x[j]).max(x[j] - lp.upper[j]);
    }

    let mut dual = 0.0_f64;
    let mut comp = 0.0_f64;
    for (r, &yi) in lp.rows.iter().zip(y) {
        dual = dual.max(match r.sense {
            RowSense::Le => yi.max(0.0),
            RowSense::Ge => (-yi).max(0.0),
            RowSense::Eq => 0.0,
        });
        if r.sense != RowSense::Eq {
            comp = comp.max((yi * (r.activity(x) - r.rhs)).abs());
        }
    }

    let mut d = lp.objective.clone();
    for (r, &yi) in lp.rows.iter().zip(y) {
        for &(j, a) in &r.coeffs {
            d[j] -= yi * a;
        }
    }

    let mut bound_term = 0.0;
    for j in 0..lp.n_vars() {
        dual = dual.max((d[j] - sol.reduced_costs[j]).abs());
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        if d[j] > 0.0 {
            if lo.is_finite() {
                comp = comp.max(d[j] * (x[j] - lo).abs());
                bound_term += d[j] * lo;
            } else {
                dual = dual.max(d[j]);
                bound_term += d[j] * x[j];
            }
        } else if d[j] < 0.0 {
            if hi.is_finite() {
                comp = comp.max(-d[j] * (hi - x[j]).abs());
                bound_term += d[j] * hi;
            } else {
                dual = dual.max(-d[j]);
                bound_term += d[j] * x[j];
            }
        }
    }

    let cx: f64 = lp.objective.iter().zip(x).map(|(c, x)| c * x).sum();
    let by: f64 = lp.rows.iter().zip(y).map(|(r, yi)| r.rhs * yi).sum();
    let gap = (cx - by - bound_term).abs() / (1.0 + cx.abs());

    DualityReport {
        primal_residual: primal,
        dual_residual: dual,
        complementarity_residual: comp,
        objective_gap: gap,
    }
}

#[cfg(test)]
mod tests;
