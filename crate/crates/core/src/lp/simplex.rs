//! Bounded-variable primal simplex on a dense tableau.
//!
//! Every row `a.x (sense) b` becomes `a.x + s = b` with a bounded slack `s`
//! (`Le`: `s >= 0`, `Ge`: `s <= 0`, `Eq`: `s = 0`). The slack columns start as
//! the identity, so the tableau always carries `B^-1` in those columns and row
//! duals fall out as `c_B B^-1`. Rows whose slack cannot absorb the starting
//! residual get an artificial column that phase 1 drives to zero.

use super::{LinearProgram, LpSolution, LpStatus, RowSense, FEAS_TOL, PIVOT_TOL};
use crate::error::{Error, Result};

const OPT_TOL: f64 = 1e-9;
/// Relaxation used by the Harris ratio test.
const HARRIS_TOL: f64 = 1e-9;
const DROP_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Iteration cap is `iteration_factor * (n_vars + n_rows)`.
    pub iteration_factor: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Basic values are recomputed from `B^-1` this often.
    pub refresh_every: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            iteration_factor: 50,
            bland_after: 1000,
            refresh_every: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Nonbasic free column held at zero.
    Free,
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    m: usize,
    n: usize,
    cols: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    /// Original (unscaled) column entries, for recomputing basic values.
    col_entries: Vec<Vec<(usize, f64)>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    status: Vec<Status>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    d: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    degenerate_streak: usize,
    opts: SimplexOptions,
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, &SimplexOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &SimplexOptions) -> Result<LpSolution> {
    lp.check().map_err(Error::InvalidInput)?;
    let mut tab = Tableau::new(lp, opts.clone());

    let art_start = tab.n + tab.m;
    if tab.cols > art_start {
        tab.set_costs(|j| if j >= art_start { 1.0 } else { 0.0 });
        tab.iterate()?;
        tab.refresh();
        let infeas: f64 = (art_start..tab.cols).map(|j| tab.x[j].abs()).sum();
        let scale = lp.rows.iter().map(|r| r.rhs.abs()).fold(1.0, f64::max);
        if infeas > FEAS_TOL * scale {
            return Ok(tab.finish(lp, LpStatus::Infeasible));
        }
        tab.retire_artificials(art_start);
    }

    tab.set_costs(|j| if j < lp.n_vars() { lp.objective[j] } else { 0.0 });
    let outcome = tab.iterate()?;
    tab.refresh();
    let status = match outcome {
        Phase::Optimal => LpStatus::Optimal,
        Phase::Unbounded => LpStatus::Unbounded,
    };
    Ok(tab.finish(lp, status))
}

impl Tableau {
    fn new(lp: &LinearProgram, opts: SimplexOptions) -> Self {
        let n = lp.n_vars();
        let m = lp.n_rows();

        let mut lo = lp.lower.clone();
        let mut hi = lp.upper.clone();
        let mut x = Vec::with_capacity(n + m);
        let mut status = Vec::with_capacity(n + m);
        for j in 0..n {
            let (v, s) = if lo[j].is_finite() {
                (lo[j], Status::AtLower)
            } else if hi[j].is_finite() {
                (hi[j], Status::AtUpper)
            } else {
                (0.0, Status::Free)
            };
            x.push(v);
            status.push(s);
        }

        let mut col_entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n + m];
        for (i, r) in lp.rows.iter().enumerate() {
            for &(j, a) in &r.coeffs {
                col_entries[j].push((i, a));
            }
            col_entries[n + i].push((i, 1.0));
            let (slo, shi) = match r.sense {
                RowSense::Le => (0.0, f64::INFINITY),
                RowSense::Ge => (f64::NEG_INFINITY, 0.0),
                RowSense::Eq => (0.0, 0.0),
            };
            lo.push(slo);
            hi.push(shi);
        }

        // Residuals left for the slacks at the starting point.
        let resid: Vec<f64> = lp.rows.iter().map(|r| r.rhs - r.activity(&x)).collect();
        let mut artificial_rows = Vec::new();
        let mut sign = vec![1.0; m];
        let mut basis = vec![0; m];
        for i in 0..m {
            let s = resid[i].clamp(lo[n + i], hi[n + i]);
            if s == resid[i] {
                x.push(s);
                status.push(Status::Basic(i));
                basis[i] = n + i;
            } else {
                x.push(s);
                status.push(if s == lo[n + i] { Status::AtLower } else { Status::AtUpper });
                sign[i] = (resid[i] - s).signum();
                artificial_rows.push((i, (resid[i] - s).abs()));
            }
        }
        for &(i, v) in &artificial_rows {
            let j = x.len();
            col_entries.push(vec![(i, sign[i])]);
            lo.push(0.0);
            hi.push(f64::INFINITY);
            x.push(v);
            status.push(Status::Basic(i));
            basis[i] = j;
        }

        let cols = x.len();
        let mut t = vec![0.0; m * cols];
        for (j, entries) in col_entries.iter().enumerate() {
            for &(i, a) in entries {
                t[i * cols + j] = sign[i] * a;
            }
        }

        let max_iterations = opts.iteration_factor * (n + m).max(1);
        Self {
            m,
            n,
            cols,
            t,
            rhs: lp.rows.iter().map(|r| r.rhs).collect(),
            col_entries,
            lo,
            hi,
            x,
            status,
            basis,
            cost: vec![0.0; cols],
            d: vec![0.0; cols],
            iterations: 0,
            max_iterations,
            degenerate_streak: 0,
            opts,
        }
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.t[i * self.cols..(i + 1) * self.cols]
    }

    fn set_costs(&mut self, f: impl Fn(usize) -> f64) {
        self.cost = (0..self.cols).map(f).collect();
        self.d = self.cost.clone();
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * self.cols..(i + 1) * self.cols];
                for (dk, &tk) in self.d.iter_mut().zip(row) {
                    *dk -= cb * tk;
                }
            }
        }
        for &b in &self.basis {
            self.d[b] = 0.0;
        }
        self.degenerate_streak = 0;
    }

    /// Recomputes basic values as `B^-1 (b - N x_N)`.
    fn refresh(&mut self) {
        let mut r = self.rhs.clone();
        for j in 0..self.cols {
            if matches!(self.status[j], Status::Basic(_)) || self.x[j] == 0.0 {
                continue;
            }
            for &(i, a) in &self.col_entries[j] {
                r[i] -= a * self.x[j];
            }
        }
        for i in 0..self.m {
            let row = self.row(i);
            let v: f64 = (0..self.m).map(|k| row[self.n + k] * r[k]).sum();
            self.x[self.basis[i]] = v;
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.cols {
            let (up, down) = match self.status[j] {
                Status::Basic(_) => continue,
                Status::AtLower => (true, false),
                Status::AtUpper => (false, true),
                Status::Free => (true, true),
            };
            if self.hi[j] <= self.lo[j] {
                continue;
            }
            let dj = self.d[j];
            let dir = if up && dj < -OPT_TOL {
                1.0
            } else if down && dj > OPT_TOL {
                -1.0
            } else {
                continue;
            };
            if bland {
                return Some((j, dir));
            }
            if dj.abs() > best_score {
                best_score = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    /// Returns the pivot row (None for a bound flip) and the step length, or
    /// None when the step is unbounded.
    fn ratio_test(&self, j: usize, dir: f64, bland: bool) -> Option<(Option<usize>, f64)> {
        let span = self.hi[j] - self.lo[j];
        let mut candidates: Vec<(usize, f64, f64, f64)> = Vec::new();
        for i in 0..self.m {
            let alpha = self.t[i * self.cols + j];
            if alpha.abs() < PIVOT_TOL {
                continue;
            }
            let delta = -dir * alpha;
            let b = self.basis[i];
            let (room, bound_finite) = if delta < 0.0 {
                (self.x[b] - self.lo[b], self.lo[b].is_finite())
            } else {
                (self.hi[b] - self.x[b], self.hi[b].is_finite())
            };
            if !bound_finite {
                continue;
            }
            candidates.push((i, room.max(0.0) / delta.abs(), (room.max(0.0) + HARRIS_TOL) / delta.abs(), alpha.abs()));
        }

        if bland {
            let min = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            if span.is_finite() && span <= min {
                return Some((None, span));
            }
            let pick = candidates
                .iter()
                .filter(|c| c.1 <= min + 1e-12)
                .min_by_key(|c| self.basis[c.0])?;
            return Some((Some(pick.0), pick.1));
        }

        let theta_max = candidates.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
        if span.is_finite() && span <= theta_max {
            return Some((None, span));
        }
        let pick = candidates
            .iter()
            .filter(|c| c.1 <= theta_max)
            .max_by(|a, b| a.3.total_cmp(&b.3).then(b.0.cmp(&a.0)))?;
        Some((Some(pick.0), pick.1))
    }

    fn iterate(&mut self) -> Result<Phase> {
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::NumericalFailure {
                    iterations: self.iterations,
                });
            }
            let bland = self.degenerate_streak >= self.opts.bland_after;
            let Some((j, dir)) = self.choose_entering(bland) else {
                return Ok(Phase::Optimal);
            };
            let Some((leave, theta)) = self.ratio_test(j, dir, bland) else {
                return Ok(Phase::Unbounded);
            };
            self.iterations += 1;
            if theta <= 1e-12 {
                self.degenerate_streak += 1;
            } else {
                self.degenerate_streak = 0;
            }

            if theta > 0.0 {
                self.x[j] += dir * theta;
                for i in 0..self.m {
                    let alpha = self.t[i * self.cols + j];
                    if alpha != 0.0 {
                        self.x[self.basis[i]] -= dir * theta * alpha;
                    }
                }
            }

            match leave {
                None => {
                    if dir > 0.0 {
                        self.x[j] = self.hi[j];
                        self.status[j] = Status::AtUpper;
                    } else {
                        self.x[j] = self.lo[j];
                        self.status[j] = Status::AtLower;
                    }
                }
                Some(r) => {
                    let alpha = self.t[r * self.cols + j];
                    let l = self.basis[r];
                    if -dir * alpha < 0.0 {
                        self.x[l] = self.lo[l];
                        self.status[l] = Status::AtLower;
                    } else {
                        self.x[l] = self.hi[l];
                        self.status[l] = Status::AtUpper;
                    }
                    self.pivot(r, j);
                }
            }

            if self.iterations.is_multiple_of(self.opts.refresh_every) {
                self.refresh();
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let piv = self.t[r * cols + j];
        let inv = 1.0 / piv;
        let mut nz = Vec::new();
        for k in 0..cols {
            let v = &mut self.t[r * cols + k];
            if *v != 0.0 {
                *v *= inv;
                if v.abs() < DROP_TOL {
                    *v = 0.0;
                } else {
                    nz.push(k);
                }
            }
        }
        self.t[r * cols + j] = 1.0;

        let (before, rest) = self.t.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for row in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
            let f = row[j];
            if f == 0.0 {
                continue;
            }
            for &k in &nz {
                let v = row[k] - f * prow[k];
                row[k] = if v.abs() < DROP_TOL { 0.0 } else { v };
            }
            row[j] = 0.0;
        }
        let f = self.d[j];
        if f != 0.0 {
            for &k in &nz {
                self.d[k] -= f * prow[k];
            }
        }
        self.d[j] = 0.0;

        let l = self.basis[r];
        self.basis[r] = j;
        self.status[j] = Status::Basic(r);
        debug_assert!(!matches!(self.status[l], Status::Basic(_)));
    }

    /// Fixes every artificial at zero and pivots basic ones out where possible.
    fn retire_artificials(&mut self, art_start: usize) {
        for j in art_start..self.cols {
            self.lo[j] = 0.0;
            self.hi[j] = 0.0;
            match self.status[j] {
                Status::Basic(r) => {
                    let entering = (0..art_start)
                        .filter(|&k| !matches!(self.status[k], Status::Basic(_)))
                        .filter(|&k| self.t[r * self.cols + k].abs() > 1e-7)
                        .max_by(|&a, &b| {
                            let (va, vb) = (self.t[r * self.cols + a].abs(), self.t[r * self.cols + b].abs());
                            va.total_cmp(&vb).then(b.cmp(&a))
                        });
                    if let Some(k) = entering {
                        self.x[j] = 0.0;
                        self.status[j] = Status::AtLower;
                        self.pivot(r, k);
                    }
                }
                _ => {
                    self.x[j] = 0.0;
                    self.status[j] = Status::AtLower;
                }
            }
        }
        self.refresh();
    }

    fn finish(&self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let n = self.n;
        let mut primal: Vec<f64> = self.x[..n].to_vec();
        for j in 0..n {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            if primal[j] < lo && lo - primal[j] <= FEAS_TOL {
                primal[j] = lo;
            } else if primal[j] > hi && primal[j] - hi <= FEAS_TOL {
                primal[j] = hi;
            }
        }

        let mut duals = vec![0.0; self.m];
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = self.row(i);
            for (k, y) in duals.iter_mut().enumerate() {
                *y += cb * row[n + k];
            }
        }
        for y in &mut duals {
            if y.abs() < 1e-12 {
                *y = 0.0;
            }
        }

        let mut reduced_costs = lp.objective.clone();
        for (r, &y) in lp.rows.iter().zip(&duals) {
            for &(j, a) in &r.coeffs {
                reduced_costs[j] -= y * a;
            }
        }

        LpSolution {
            status,
            objective: lp.objective_value(&primal),
            primal,
            duals,
            reduced_costs,
            iterations: self.iterations,
        }
    }
}
