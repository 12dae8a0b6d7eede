use super::{enumerate_index_sets, label_prefix, IndexSets, Var, VariableMap};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, RowSense};
use crate::model::{GeneratorSpec, PriceVector};

/// One generator's extended formulation.
#[derive(Debug, Clone)]
pub struct EucBlock {
    pub lp: LinearProgram,
    pub map: VariableMap,
    pub sets: IndexSets,
}

impl EucBlock {
    /// Columns that must be binary in a mixed-integer solve (`w`, `y`, `z`).
    pub fn integer_vars(&self) -> Vec<usize> {
        self.map
            .iter()
            .filter(|(v, _)| v.is_interval_binary())
            .map(|(_, c)| c)
            .collect()
    }

    /// Output columns `q` covering period `s`.
    pub fn output_cols(&self, s: usize) -> Vec<usize> {
        self.map
            .iter()
            .filter_map(|(v, c)| match v {
                Var::Q { s: ps, .. } if ps == s => Some(c),
                _ => None,
            })
            .collect()
    }
}

/// Extended formulation of an initially-on generator.
pub fn build_euc(gen: &GeneratorSpec) -> Result<EucBlock> {
    if !gen.initial.is_on() {
        return Err(Error::InvalidInput(format!(
            "generator {} is initially off; use the initial-off builder",
            gen.id
        )));
    }
    Ok(euc_block(gen, None))
}

/// Extended formulation of an initially-off generator.
pub fn build_euc_initial_off(gen: &GeneratorSpec) -> Result<EucBlock> {
    if gen.initial.is_on() {
        return Err(Error::InvalidInput(format!(
            "generator {} is initially on; use the initial-on builder",
            gen.id
        )));
    }
    Ok(euc_block(gen, None))
}

/// Either variant with `pi` folded into every cost slope, so that the
/// optimum is the generator's best cost minus revenue at those prices.
pub fn build_euc_priced(gen: &GeneratorSpec, pi: &PriceVector) -> EucBlock {
    euc_block(gen, Some(pi))
}

pub(crate) fn euc_block(gen: &GeneratorSpec, pi: Option<&PriceVector>) -> EucBlock {
    let horizon = gen.horizon();
    let sets = enumerate_index_sets(gen);
    let pre = label_prefix("euc", &gen.id);
    let mut lp = LinearProgram::new();
    let mut map = VariableMap::default();
    let mut add = |lp: &mut LinearProgram, var: Var, lo: f64, hi: f64, cost: f64| {
        let c = lp.add_var(format!("{pre}{var}"), lo, hi, cost);
        map.insert(var, c);
        c
    };
    let inf = f64::INFINITY;

    let initial_on = gen.initial.is_on();
    let s0 = gen.initial_periods();
    for t in sets.w() {
        let cost = if initial_on {
            if t < horizon {
                gen.shutdown_cost.at(t + s0)
            } else {
                0.0
            }
        } else {
            gen.startup_cost.at(s0 + t - 1)
        };
        add(&mut lp, Var::W(t), 0.0, 1.0, cost);
    }
    if sets.never_start {
        add(&mut lp, Var::WNever, 0.0, 1.0, 0.0);
    }
    for &(t, k) in &sets.tk2 {
        let cost = if k < horizon { gen.shutdown_cost.at(k - t + 1) } else { 0.0 };
        add(&mut lp, Var::Y(t, k), 0.0, 1.0, cost);
    }
    for &(k, t) in &sets.kt {
        add(&mut lp, Var::Z(k, t), 0.0, 1.0, gen.startup_cost.at(t - k - 1));
    }
    for t in sets.theta() {
        add(&mut lp, Var::Theta(t), 0.0, 1.0, 0.0);
    }
    let intervals: Vec<(usize, usize)> = sets.intervals().collect();
    for &(t, k) in &intervals {
        for s in t..=k {
            add(&mut lp, Var::Q { t, k, s }, 0.0, inf, 0.0);
            add(&mut lp, Var::Phi { t, k, s }, f64::NEG_INFINITY, inf, 1.0);
        }
    }
    let col = |v: Var| map.col(v).expect("column was just created");

    // Exactly one first event: a first shut-down (initially on) or a first start.
    let mut one: Vec<(usize, f64)> = sets.w().map(|t| (col(Var::W(t)), 1.0)).collect();
    if sets.never_start {
        one.push((col(Var::WNever), 1.0));
    }
    lp.add_row(format!("{pre}one"), one, RowSense::Eq, 1.0);

    // Flow out of "last online period t": restart later, or stay off.
    for t in sets.theta() {
        let mut coeffs = Vec::new();
        if initial_on {
            coeffs.push((col(Var::W(t)), -1.0));
        }
        for &(k, r) in &sets.kt {
            if k == t {
                coeffs.push((col(Var::Z(k, r)), 1.0));
            }
        }
        for &(a, b) in &sets.tk2 {
            if b == t {
                coeffs.push((col(Var::Y(a, b)), -1.0));
            }
        }
        coeffs.push((col(Var::Theta(t)), 1.0));
        lp.add_row(format!("{pre}flow:t={t}"), coeffs, RowSense::Eq, 0.0);
    }

    // Flow into "start at t": every start is either the first one or a restart.
    let start_periods: Vec<usize> = {
        let mut v: Vec<usize> = sets.tk2.iter().map(|&(t, _)| t).collect();
        v.dedup();
        if !initial_on {
            v = sets.w().collect();
        }
        v
    };
    for t in start_periods {
        let mut coeffs = Vec::new();
        for &(a, b) in &sets.tk2 {
            if a == t {
                coeffs.push((col(Var::Y(a, b)), 1.0));
            }
        }
        for &(k, r) in &sets.kt {
            if r == t {
                coeffs.push((col(Var::Z(k, r)), -1.0));
            }
        }
        if !initial_on {
            coeffs.push((col(Var::W(t)), -1.0));
        }
        lp.add_row(format!("{pre}start:t={t}"), coeffs, RowSense::Eq, 0.0);
    }

    for &(t, k) in &intervals {
        // tk2 starts no earlier than period 2, so t = 1 means a tk1 interval.
        let initial_run = initial_on && t == 1;
        let ind = if initial_run { col(Var::W(k)) } else { col(Var::Y(t, k)) };
        let tag = format!("t={t},k={k}");
        for s in t..=k {
            let q = col(Var::Q { t, k, s });
            lp.add_row(format!("{pre}lb:{tag},s={s}"), [(q, 1.0), (ind, -gen.c_min)], RowSense::Ge, 0.0);
            lp.add_row(format!("{pre}ub:{tag},s={s}"), [(q, 1.0), (ind, -gen.c_max)], RowSense::Le, 0.0);
        }
        if !initial_run {
            let q = col(Var::Q { t, k, s: t });
            lp.add_row(format!("{pre}start_ramp:{tag}"), [(q, 1.0), (ind, -gen.start_ramp)], RowSense::Le, 0.0);
        }
        if k < horizon {
            let q = col(Var::Q { t, k, s: k });
            lp.add_row(format!("{pre}shut_ramp:{tag}"), [(q, 1.0), (ind, -gen.start_ramp)], RowSense::Le, 0.0);
        }
        for s in t + 1..=k {
            let (cur, prev) = (col(Var::Q { t, k, s }), col(Var::Q { t, k, s: s - 1 }));
            lp.add_row(
                format!("{pre}ramp_down:{tag},s={s}"),
                [(prev, 1.0), (cur, -1.0), (ind, -gen.ramp)],
                RowSense::Le,
                0.0,
            );
            lp.add_row(
                format!("{pre}ramp_up:{tag},s={s}"),
                [(cur, 1.0), (prev, -1.0), (ind, -gen.ramp)],
                RowSense::Le,
                0.0,
            );
        }
        for s in t..=k {
            let (q, phi) = (col(Var::Q { t, k, s }), col(Var::Phi { t, k, s }));
            let price = pi.map_or(0.0, |p| p.at(s));
            for (j, piece) in gen.cost[s - 1].pieces().iter().enumerate() {
                lp.add_row(
                    format!("{pre}piece:{tag},s={s},j={}", j + 1),
                    [(phi, 1.0), (q, -(piece.slope - price)), (ind, -piece.intercept)],
                    RowSense::Ge,
                    0.0,
                );
            }
        }
    }

    EucBlock { lp, map, sets }
}
