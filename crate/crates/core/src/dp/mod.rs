//! Single-generator scheduling by dynamic programming over on/off intervals,
//! the interval economic dispatch it relies on, and a brute-force oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, RowSense};
use crate::model::{check_commitment, on_runs, GeneratorSpec, InitialState, PriceVector, UnitSchedule};

/// Largest horizon [`brute_force_uc`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Ties between DP candidates are kept unless a later one is better by more than this.
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EdSolution {
    /// Generation cost net of revenue over the interval.
    pub cost: f64,
    /// Output for each period of the interval, in order.
    pub dispatch: Vec<f64>,
}

/// Builds the dispatch LP for the on-interval `[t, k]`: bounds, start and
/// shut-down ramps, ramping, and one epigraph row per cost piece with the
/// price folded into the slope.
pub fn ed_program(gen: &GeneratorSpec, t: usize, k: usize, pi: &PriceVector) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let q: Vec<usize> = (t..=k)
        .map(|s| lp.add_var(format!("q:s={s}"), gen.c_min, gen.c_max, 0.0))
        .collect();
    let phi: Vec<usize> = (t..=k)
        .map(|s| lp.add_var(format!("phi:s={s}"), f64::NEG_INFINITY, f64::INFINITY, 1.0))
        .collect();

    let continues_initial = t == 1 && gen.initial.is_on();
    if !continues_initial {
        lp.add_row("start_ramp", [(q[0], 1.0)], RowSense::Le, gen.start_ramp);
    }
    if k < gen.horizon() {
        lp.add_row("shut_ramp", [(q[k - t], 1.0)], RowSense::Le, gen.start_ramp);
    }
    for s in t + 1..=k {
        let (cur, prev) = (q[s - t], q[s - t - 1]);
        lp.add_row(format!("ramp_up:s={s}"), [(cur, 1.0), (prev, -1.0)], RowSense::Le, gen.ramp);
        lp.add_row(format!("ramp_down:s={s}"), [(prev, 1.0), (cur, -1.0)], RowSense::Le, gen.ramp);
    }
    for s in t..=k {
        for (j, p) in gen.cost[s - 1].pieces().iter().enumerate() {
            lp.add_row(
                format!("piece:s={s}:j={}", j + 1),
                [(phi[s - t], 1.0), (q[s - t], -(p.slope - pi.at(s)))],
                RowSense::Ge,
                p.intercept,
            );
        }
    }
    lp
}

/// Minimum net generation cost of running over `[t, k]` at prices `pi`.
pub fn solve_ed(gen: &GeneratorSpec, t: usize, k: usize, pi: &PriceVector) -> Result<EdSolution> {
    let horizon = gen.horizon();
    if t == 0 || t > k || k > horizon {
        return Err(Error::InvalidInput(format!("interval [{t}, {k}] outside horizon {horizon}")));
    }
    let lp = ed_program(gen, t, k, pi);
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(EdSolution {
            cost: sol.objective,
            dispatch: sol.primal[..k - t + 1].to_vec(),
        }),
        LpStatus::Infeasible => Err(Error::Infeasible(format!(
            "generator {}: no feasible dispatch on [{t}, {k}]",
            gen.id
        ))),
        LpStatus::Unbounded => Err(Error::Unbounded(format!("generator {}: dispatch on [{t}, {k}]", gen.id))),
    }
}

/// Memoized `C(t, k)`; infeasible intervals are stored as `None`.
#[derive(Debug, Clone, Default)]
pub struct IntervalCostCache {
    entries: BTreeMap<(usize, usize), Option<EdSolution>>,
}

impl IntervalCostCache {
    fn get(&mut self, gen: &GeneratorSpec, pi: &PriceVector, t: usize, k: usize) -> Result<Option<&EdSolution>> {
        if let std::collections::btree_map::Entry::Vacant(e) = self.entries.entry((t, k)) {
            let value = match solve_ed(gen, t, k, pi) {
                Ok(sol) => Some(sol),
                Err(Error::Infeasible(_)) => None,
                Err(e) => return Err(e),
            };
            e.insert(value);
        }
        Ok(self.entries[&(t, k)].as_ref())
    }

    fn cost(&mut self, gen: &GeneratorSpec, pi: &PriceVector, t: usize, k: usize) -> Result<f64> {
        Ok(self.get(gen, pi, t, k)?.map_or(f64::INFINITY, |s| s.cost))
    }

    /// Cached intervals in `(t, k)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Option<EdSolution>)> {
        self.entries.iter()
    }

    pub fn lookup(&self, t: usize, k: usize) -> Option<&EdSolution> {
        self.entries.get(&(t, k)).and_then(|e| e.as_ref())
    }
}

/// Decision taken at the root of the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    /// Initially on: stay on through period `t` (0 = shut down immediately).
    ShutAfter(usize),
    /// Initially on and never shut down.
    StayOn,
    /// Initially off: first start in period `t`.
    StartAt(usize),
    /// Initially off and never started.
    StayOff,
}

#[derive(Debug, Clone)]
pub struct ValueTables {
    pub horizon: usize,
    /// `v_down[t]`: best cost-to-go after the last online period `t`, `t` in `0..=T`.
    pub v_down: Vec<f64>,
    /// `v_up[t]`: best cost-to-go when starting in period `t`, `t` in `1..=T` (index 0 unused).
    pub v_up: Vec<f64>,
    /// Next start chosen after shutting down at `t` (None = stay off).
    pub down_next: Vec<Option<usize>>,
    /// Last online period chosen when starting at `t` (None = stay on to the end).
    pub up_next: Vec<Option<usize>>,
    pub root: f64,
    pub root_choice: RootChoice,
    pub intervals: IntervalCostCache,
}

/// Cost of each candidate in evaluation order; the earliest strictly-best wins.
fn argmin<T: Copy>(cands: impl IntoIterator<Item = (T, f64)>) -> Option<(T, f64)> {
    let mut best: Option<(T, f64)> = None;
    for (c, v) in cands {
        if !v.is_finite() {
            continue;
        }
        match best {
            Some((_, bv)) if v >= bv - TIE_TOL => {}
            _ => best = Some((c, v)),
        }
    }
    best
}

/// Solves `min generation + start-up + shut-down cost - pi.x` for one generator
/// by backward recursion over shut-down and start-up times.
pub fn run_dp(gen: &GeneratorSpec, pi: &PriceVector) -> Result<(f64, ValueTables)> {
    let horizon = gen.horizon();
    if pi.len() != horizon {
        return Err(Error::InvalidInput(format!(
            "price vector has {} entries for a {horizon}-period horizon",
            pi.len()
        )));
    }
    let (big_l, ell) = (gen.min_up, gen.min_down);
    let mut cache = IntervalCostCache::default();
    let mut v_down = vec![f64::INFINITY; horizon + 1];
    let mut v_up = vec![f64::INFINITY; horizon + 1];
    let mut down_next = vec![None; horizon + 1];
    let mut up_next = vec![None; horizon + 1];

    for t in (0..=horizon).rev() {
        // Shut down after t: restart at k, or stay off. Only
        // later V_up entries are needed, and V_up(t) below needs V_down(t).
        let mut cands = Vec::new();
        for k in t + ell + 1..=horizon {
            cands.push((Some(k), gen.startup_cost.at(k - t - 1) + v_up[k]));
        }
        cands.push((None, 0.0));
        let (k, v) = argmin(cands).expect("staying off is always a candidate");
        v_down[t] = v;
        down_next[t] = k;
        // Starting at t: run to some k <= T-1 and shut down, or stay on to the end.
        if t >= 1 {
            let mut cands = Vec::new();
            for k in (t + big_l - 1).max(t)..horizon {
                let c = gen.shutdown_cost.at(k - t + 1) + cache.cost(gen, pi, t, k)? + v_down[k];
                cands.push((Some(k), c));
            }
            cands.push((None, cache.cost(gen, pi, t, horizon)?));
            if let Some((k, v)) = argmin(cands) {
                v_up[t] = v;
                up_next[t] = k;
            }
        }
    }

    let root = match gen.initial {
        InitialState::OnFor(s0) => {
            let t0 = gen.forced_on_until();
            let mut cands = Vec::new();
            for t in t0..horizon {
                let run = if t == 0 { 0.0 } else { cache.cost(gen, pi, 1, t)? };
                cands.push((RootChoice::ShutAfter(t), gen.shutdown_cost.at(t + s0) + run + v_down[t]));
            }
            cands.push((RootChoice::StayOn, cache.cost(gen, pi, 1, horizon)?));
            argmin(cands)
        }
        InitialState::OffFor(s0) => {
            let mut cands = Vec::new();
            for t in gen.earliest_start()..=horizon {
                cands.push((RootChoice::StartAt(t), gen.startup_cost.at(s0 + t - 1) + v_up[t]));
            }
            cands.push((RootChoice::StayOff, 0.0));
            argmin(cands)
        }
    };
    let (root_choice, root) = root.ok_or_else(|| {
        Error::Infeasible(format!("generator {}: no feasible schedule over the horizon", gen.id))
    })?;

    let tables = ValueTables {
        horizon,
        v_down,
        v_up,
        down_next,
        up_next,
        root,
        root_choice,
        intervals: cache,
    };
    Ok((root, tables))
}

impl ValueTables {
    /// Re-evaluates every table entry against its candidate set. Returns the
    /// first entry that is not the minimum of its candidates.
    pub fn check_bellman(&self, gen: &GeneratorSpec, tol: f64) -> std::result::Result<(), String> {
        let horizon = self.horizon;
        let c = |t: usize, k: usize| self.intervals.lookup(t, k).map_or(f64::INFINITY, |s| s.cost);
        let min_of = |vals: Vec<f64>| vals.into_iter().fold(f64::INFINITY, f64::min);
        let close = |a: f64, b: f64| (a == b) || (a - b).abs() <= tol;
        for t in 0..=horizon {
            let mut down = vec![0.0];
            for k in t + gen.min_down + 1..=horizon {
                down.push(gen.startup_cost.at(k - t - 1) + self.v_up[k]);
            }
            if !close(self.v_down[t], min_of(down)) {
                return Err(format!("V_down({t}) = {} is not minimal", self.v_down[t]));
            }
            if t >= 1 {
                let mut up = vec![c(t, horizon)];
                for k in (t + gen.min_up - 1).max(t)..horizon {
                    up.push(gen.shutdown_cost.at(k - t + 1) + c(t, k) + self.v_down[k]);
                }
                if !close(self.v_up[t], min_of(up)) {
                    return Err(format!("V_up({t}) = {} is not minimal", self.v_up[t]));
                }
            }
        }
        Ok(())
    }

    /// `kind,t,k,value` rows for every interval cost and table entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,t,k,value\n");
        for (&(t, k), sol) in self.intervals.iter() {
            let v = sol.as_ref().map_or(f64::INFINITY, |s| s.cost);
            let _ = writeln!(out, "C,{t},{k},{}", fmt_value(v));
        }
        for t in 0..=self.horizon {
            let next = self.down_next[t].map_or(String::new(), |k| k.to_string());
            let _ = writeln!(out, "V_down,{t},{next},{}", fmt_value(self.v_down[t]));
        }
        for t in 1..=self.horizon {
            let next = self.up_next[t].map_or(String::new(), |k| k.to_string());
            let _ = writeln!(out, "V_up,{t},{next},{}", fmt_value(self.v_up[t]));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

fn fmt_value(v: f64) -> String {
    if v.is_finite() {
        format!("{:.6}", v + 0.0)
    } else {
        "inf".into()
    }
}

/// Follows the recorded argmins forward from the root and fills in the
/// cached interval dispatches.
pub fn extract_schedule(gen: &GeneratorSpec, tables: &ValueTables) -> UnitSchedule {
    let horizon = tables.horizon;
    let mut u = vec![false; horizon];
    let mut x = vec![0.0; horizon];
    let mut fill = |t: usize, k: usize| {
        if let Some(sol) = tables.intervals.lookup(t, k) {
            for s in t..=k {
                u[s - 1] = true;
                x[s - 1] = sol.dispatch[s - t];
            }
        }
    };

    // Some(t) = shut down after period t; None = done.
    let mut after_shut = match tables.root_choice {
        RootChoice::StayOn => {
            fill(1, horizon);
            None
        }
        RootChoice::StayOff => None,
        RootChoice::ShutAfter(t) => {
            if t > 0 {
                fill(1, t);
            }
            Some(t)
        }
        RootChoice::StartAt(t) => follow_up(tables, t, &mut fill),
    };
    while let Some(t) = after_shut {
        after_shut = match tables.down_next[t] {
            Some(k) => follow_up(tables, k, &mut fill),
            None => None,
        };
    }
    UnitSchedule::from_commitment(gen, u, x)
}

fn follow_up(tables: &ValueTables, t: usize, fill: &mut impl FnMut(usize, usize)) -> Option<usize> {
    match tables.up_next[t] {
        Some(k) => {
            fill(t, k);
            Some(k)
        }
        None => {
            fill(t, tables.horizon);
            None
        }
    }
}

/// Best self-schedule at prices `pi`: returns the profit `v_j(pi)` (the
/// negated DP optimum) and a schedule attaining it.
pub fn profit_max(gen: &GeneratorSpec, pi: &PriceVector) -> Result<(f64, UnitSchedule)> {
    let (obj, tables) = run_dp(gen, pi)?;
    Ok((-obj + 0.0, extract_schedule(gen, &tables)))
}

/// Enumerates every on/off string that respects min-up/min-down and the
/// initial state, dispatching each on-run optimally.
pub fn brute_force_uc(gen: &GeneratorSpec, pi: &PriceVector) -> Result<(f64, UnitSchedule)> {
    let horizon = gen.horizon();
    if horizon > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            horizon,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut cache = IntervalCostCache::default();
    let mut best: Option<(f64, UnitSchedule)> = None;
    'strings: for mask in 0u32..(1u32 << horizon) {
        let u: Vec<bool> = (0..horizon).map(|s| mask & (1 << s) != 0).collect();
        if check_commitment(gen, &u).is_err() {
            continue;
        }
        let mut x = vec![0.0; horizon];
        for (t, k) in on_runs(&u) {
            match cache.get(gen, pi, t, k)? {
                Some(sol) => x[t - 1..k].copy_from_slice(&sol.dispatch),
                None => continue 'strings,
            }
        }
        let sched = UnitSchedule::from_commitment(gen, u, x);
        let value = sched.net_cost(pi);
        if best.as_ref().is_none_or(|(b, _)| value < *b - TIE_TOL) {
            best = Some((value, sched));
        }
    }
    best.ok_or_else(|| Error::Infeasible(format!("generator {}: no feasible commitment", gen.id)))
}
