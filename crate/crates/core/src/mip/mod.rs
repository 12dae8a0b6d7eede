//! Branch-and-bound over LP relaxations for problems with binary columns.
//!
//! The search dives depth-first until it has an incumbent, then switches to
//! best-bound order. It branches on the most fractional column (ties to the
//! lowest index). The only heuristic is rounding the root relaxation and
//! re-solving with those columns fixed.

mod enumerate;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::debug;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpSolution, LpStatus};

pub use enumerate::{enumerate_commitments, ENUMERATION_LIMIT};

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;
pub const DEFAULT_GAP_TOL: f64 = 1e-6;
pub const DEFAULT_INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct MipOptions {
    pub node_limit: usize,
    /// Absolute gap between incumbent and bound at which the search stops.
    pub gap_tol: f64,
    pub int_tol: f64,
}

impl Default for MipOptions {
    fn default() -> Self {
        Self {
            node_limit: DEFAULT_NODE_LIMIT,
            gap_tol: DEFAULT_GAP_TOL,
            int_tol: DEFAULT_INT_TOL,
        }
    }
}

/// An LP whose listed columns must take values in {0, 1}.
#[derive(Debug, Clone)]
pub struct MipProblem {
    pub lp: LinearProgram,
    pub integer_vars: Vec<usize>,
}

impl MipProblem {
    pub fn new(lp: LinearProgram, integer_vars: Vec<usize>) -> Result<Self> {
        for &j in &integer_vars {
            if j >= lp.n_vars() {
                return Err(Error::InvalidInput(format!("integer column {j} out of range")));
            }
            if lp.lower[j] < 0.0 || lp.upper[j] > 1.0 {
                return Err(Error::InvalidInput(format!(
                    "integer column {} has bounds [{}, {}] outside [0, 1]",
                    lp.var_labels[j], lp.lower[j], lp.upper[j]
                )));
            }
        }
        Ok(Self { lp, integer_vars })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Optimal,
    /// Stopped at the node limit; the incumbent is feasible but not proven optimal.
    NodeLimit,
}

#[derive(Debug, Clone)]
pub struct MipSolution {
    pub status: MipStatus,
    pub primal: Vec<f64>,
    pub objective: f64,
    /// Lower bound on the optimum.
    pub bound: f64,
    pub gap: f64,
    pub node_count: usize,
}

/// Open node: its column fixings and the parent's relaxation bound.
#[derive(Debug, Clone)]
struct Node {
    fixings: Vec<(usize, f64)>,
    bound: f64,
    seq: usize,
}

/// Min-heap order on bound, then creation order.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

pub fn solve_mip(problem: &MipProblem) -> Result<MipSolution> {
    solve_mip_with(problem, &MipOptions::default())
}

pub fn solve_mip_with(problem: &MipProblem, opts: &MipOptions) -> Result<MipSolution> {
    let mut search = Search {
        problem,
        opts,
        scratch: problem.lp.clone(),
        incumbent: None,
        pruned_bound: f64::INFINITY,
    };

    let root = search.relax(&[])?;
    let mut nodes = 1;
    match root.status {
        LpStatus::Infeasible => return Err(Error::Infeasible("MIP relaxation is infeasible".into())),
        LpStatus::Unbounded => return Err(Error::Unbounded("MIP relaxation is unbounded".into())),
        LpStatus::Optimal => {}
    }
    let mut open = Open::Dive(Vec::new());
    if search.most_fractional(&root.primal).is_none() {
        search.offer(&root);
    } else {
        search.round_and_repair(&root.primal)?;
        search.branch(&root, Vec::new(), 0, &mut open);
    }
    if search.incumbent.is_some() {
        open = open.into_best();
    }
    let mut seq = 2;

    let mut hit_limit = false;
    while let Some(node) = open.pop() {
        if search.prunable(node.bound) {
            search.pruned_bound = search.pruned_bound.min(node.bound);
            continue;
        }
        if nodes >= opts.node_limit {
            open.push(node);
            hit_limit = true;
            break;
        }
        nodes += 1;
        let sol = search.relax(&node.fixings)?;
        if sol.status != LpStatus::Optimal {
            continue;
        }
        if search.prunable(sol.objective) {
            search.pruned_bound = search.pruned_bound.min(sol.objective);
            continue;
        }
        let had_incumbent = search.incumbent.is_some();
        if search.most_fractional(&sol.primal).is_none() {
            search.offer(&sol);
        } else {
            search.branch(&sol, node.fixings, seq, &mut open);
            seq += 2;
        }
        if !had_incumbent && search.incumbent.is_some() {
            open = open.into_best();
        }
    }

    let open_bound = open.min_bound();
    let Some((primal, objective)) = search.incumbent else {
        return Err(if hit_limit {
            Error::NodeLimit { nodes }
        } else {
            Error::Infeasible("no integral solution exists".into())
        });
    };
    let bound = objective.min(open_bound).min(search.pruned_bound);
    let gap = (objective - bound).abs();
    debug!("branch-and-bound: {nodes} nodes, objective {objective}, bound {bound}");
    Ok(MipSolution {
        status: if hit_limit { MipStatus::NodeLimit } else { MipStatus::Optimal },
        primal,
        objective,
        bound,
        gap,
        node_count: nodes,
    })
}

enum Open {
    Dive(Vec<Node>),
    Best(BinaryHeap<Node>),
}

impl Open {
    fn pop(&mut self) -> Option<Node> {
        match self {
            Open::Dive(v) => v.pop(),
            Open::Best(h) => h.pop(),
        }
    }

    fn push(&mut self, n: Node) {
        match self {
            Open::Dive(v) => v.push(n),
            Open::Best(h) => h.push(n),
        }
    }

    fn into_best(self) -> Self {
        match self {
            Open::Dive(v) => Open::Best(v.into_iter().collect()),
            best => best,
        }
    }

    fn min_bound(&self) -> f64 {
        let min = |it: &mut dyn Iterator<Item = &Node>| it.map(|n| n.bound).fold(f64::INFINITY, f64::min);
        match self {
            Open::Dive(v) => min(&mut v.iter()),
            Open::Best(h) => min(&mut h.iter()),
        }
    }
}

struct Search<'a> {
    problem: &'a MipProblem,
    opts: &'a MipOptions,
    scratch: LinearProgram,
    incumbent: Option<(Vec<f64>, f64)>,
    /// Smallest bound among nodes discarded by the gap test.
    pruned_bound: f64,
}

impl Search<'_> {
    fn relax(&mut self, fixings: &[(usize, f64)]) -> Result<LpSolution> {
        let lp = &self.problem.lp;
        self.scratch.lower.copy_from_slice(&lp.lower);
        self.scratch.upper.copy_from_slice(&lp.upper);
        for &(j, v) in fixings {
            self.scratch.lower[j] = v;
            self.scratch.upper[j] = v;
        }
        solve_lp(&self.scratch)
    }

    fn prunable(&self, bound: f64) -> bool {
        self.incumbent
            .as_ref()
            .is_some_and(|(_, obj)| bound >= obj - self.opts.gap_tol)
    }

    fn most_fractional(&self, x: &[f64]) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for &j in &self.problem.integer_vars {
            let frac = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
            if frac > self.opts.int_tol && best.is_none_or(|(bj, _, bf)| frac > bf + 1e-12 || (frac >= bf - 1e-12 && j < bj)) {
                best = Some((j, x[j], frac));
            }
        }
        best.map(|(j, v, _)| (j, v))
    }

    fn offer(&mut self, sol: &LpSolution) {
        if self.incumbent.as_ref().is_none_or(|(_, obj)| sol.objective < *obj - 1e-12) {
            let mut primal = sol.primal.clone();
            for &j in &self.problem.integer_vars {
                primal[j] = primal[j].round();
            }
            debug!("new incumbent {}", sol.objective);
            self.incumbent = Some((primal, sol.objective));
        }
    }

    /// Pushes both children; the child nearer the relaxation value is explored first.
    fn branch(&self, sol: &LpSolution, fixings: Vec<(usize, f64)>, seq: usize, open: &mut Open) {
        let (j, v) = self.most_fractional(&sol.primal).expect("fractional solution");
        let near = if v - v.floor() >= 0.5 { v.ceil() } else { v.floor() };
        let far = if near == v.ceil() { v.floor() } else { v.ceil() };
        for (k, val) in [(1, far), (0, near)] {
            let mut f = fixings.clone();
            f.push((j, val));
            open.push(Node {
                fixings: f,
                bound: sol.objective,
                seq: seq + k,
            });
        }
    }

    /// Rounds the relaxation (to nearest, then upwards) and re-solves with
    /// the integer columns fixed, keeping the first feasible result.
    fn round_and_repair(&mut self, x: &[f64]) -> Result<()> {
        let rules: [fn(f64) -> f64; 2] = [f64::round, |v| if v > 1e-9 { v.ceil() } else { 0.0 }];
        for rule in rules {
            let fixings: Vec<(usize, f64)> = self.problem.integer_vars.iter().map(|&j| (j, rule(x[j]))).collect();
            let sol = self.relax(&fixings)?;
            if sol.status == LpStatus::Optimal {
                self.offer(&sol);
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
