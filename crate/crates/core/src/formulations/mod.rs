//! LP and MIP builders: the interval-based extended formulation per
//! generator, the classical two-binary formulation, their system assemblies
//! and the mapping from interval solutions back to commitment schedules.

mod euc;
mod system;
mod twobin;

use std::collections::HashMap;
use std::fmt;

pub use euc::{build_euc, build_euc_initial_off, build_euc_priced, EucBlock};
pub use system::{assemble_2bin, assemble_meuc, MeucModel, TwoBinSystem};
pub use twobin::{build_2bin, build_2bin_priced, TwoBinBlock};

use crate::error::{Error, Result};
use crate::model::{GeneratorSpec, InitialState, UnitSchedule};

/// Values within this distance of 0 or 1 count as binary.
pub const BINARY_TOL: f64 = 1e-6;

/// Interval and period index sets of the extended formulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSets {
    pub horizon: usize,
    /// Continuations `(1, k)` of the run in progress at period 1 (initially-on only).
    pub tk1: Vec<(usize, usize)>,
    /// On-intervals `(t, k)` that begin with a start-up inside the horizon.
    pub tk2: Vec<(usize, usize)>,
    /// Off-intervals `(k, t)`: last online period `k`, restart at `t`.
    pub kt: Vec<(usize, usize)>,
    /// Inclusive range of `w_t` indices (empty when `start > end`).
    pub w_range: (usize, usize),
    /// Inclusive range of `theta_t` indices.
    pub theta_range: (usize, usize),
    /// Initially-off only: a column for never starting at all.
    pub never_start: bool,
}

impl IndexSets {
    pub fn w(&self) -> impl Iterator<Item = usize> {
        let (a, b) = self.w_range;
        (a..=b).filter(move |_| a <= b)
    }

    pub fn theta(&self) -> impl Iterator<Item = usize> {
        let (a, b) = self.theta_range;
        (a..=b).filter(move |_| a <= b)
    }

    /// Every on-interval, initial continuations first.
    pub fn intervals(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tk1.iter().chain(&self.tk2).copied()
    }
}

/// Enumerates the index sets for `gen` over its own horizon.
pub fn enumerate_index_sets(gen: &GeneratorSpec) -> IndexSets {
    let horizon = gen.horizon();
    let (big_l, ell) = (gen.min_up, gen.min_down);
    let on_pairs = |starts: std::ops::RangeInclusive<usize>| {
        let mut v = Vec::new();
        for t in starts {
            for k in (t + big_l - 1).min(horizon)..=horizon {
                v.push((t, k));
            }
        }
        v
    };
    let off_pairs = |ends: std::ops::RangeInclusive<usize>| {
        let mut v = Vec::new();
        for k in ends {
            for t in k + ell + 1..=horizon {
                v.push((k, t));
            }
        }
        v
    };

    match gen.initial {
        InitialState::OnFor(_) => {
            let t0 = gen.forced_on_until();
            IndexSets {
                horizon,
                tk1: (t0.max(1)..=horizon).map(|k| (1, k)).collect(),
                tk2: on_pairs(t0 + ell + 1..=horizon),
                kt: off_pairs(t0..=horizon),
                w_range: (t0, horizon),
                theta_range: (t0, horizon.saturating_sub(1)),
                never_start: false,
            }
        }
        InitialState::OffFor(_) => {
            let t0 = gen.earliest_start();
            let first_shut = t0 + big_l - 1;
            IndexSets {
                horizon,
                tk1: Vec::new(),
                tk2: on_pairs(t0..=horizon),
                kt: off_pairs(first_shut..=horizon),
                w_range: (t0, horizon),
                theta_range: (first_shut, horizon.saturating_sub(1)),
                never_start: true,
            }
        }
    }
}

/// Structured name of a formulation column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    W(usize),
    /// Initially-off "never start" column.
    WNever,
    Y(usize, usize),
    Z(usize, usize),
    Theta(usize),
    Q { t: usize, k: usize, s: usize },
    Phi { t: usize, k: usize, s: usize },
    U(usize),
    V(usize),
    X(usize),
    Zeta(usize),
    ZetaShut(usize),
    Fuel(usize),
}

impl Var {
    /// Whether the column is one of the interval binaries `w`, `y`, `z`.
    pub fn is_interval_binary(&self) -> bool {
        matches!(self, Var::W(_) | Var::WNever | Var::Y(..) | Var::Z(..))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::W(t) => write!(f, "w:t={t}"),
            Var::WNever => write!(f, "w:never"),
            Var::Y(t, k) => write!(f, "y:t={t},k={k}"),
            Var::Z(k, t) => write!(f, "z:k={k},t={t}"),
            Var::Theta(t) => write!(f, "theta:t={t}"),
            Var::Q { t, k, s } => write!(f, "q:t={t},k={k},s={s}"),
            Var::Phi { t, k, s } => write!(f, "phi:t={t},k={k},s={s}"),
            Var::U(t) => write!(f, "u:t={t}"),
            Var::V(t) => write!(f, "v:t={t}"),
            Var::X(t) => write!(f, "x:t={t}"),
            Var::Zeta(t) => write!(f, "zeta:t={t}"),
            Var::ZetaShut(t) => write!(f, "zeta_shut:t={t}"),
            Var::Fuel(t) => write!(f, "phi:t={t}"),
        }
    }
}

/// Bijection between structured column names and LP column indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VariableMap {
    vars: Vec<Var>,
    cols: Vec<usize>,
    index: HashMap<Var, usize>,
}

impl VariableMap {
    pub fn insert(&mut self, var: Var, col: usize) {
        let prev = self.index.insert(var, col);
        debug_assert!(prev.is_none(), "duplicate column {var}");
        self.vars.push(var);
        self.cols.push(col);
    }

    pub fn col(&self, var: Var) -> Option<usize> {
        self.index.get(&var).copied()
    }

    pub fn var(&self, col: usize) -> Option<Var> {
        self.cols.iter().position(|&c| c == col).map(|i| self.vars[i])
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// `(name, column)` pairs in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (Var, usize)> + '_ {
        self.vars.iter().copied().zip(self.cols.iter().copied())
    }

    /// The same map with every column index moved by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        let mut out = Self::default();
        for (v, c) in self.iter() {
            out.insert(v, c + offset);
        }
        out
    }
}

/// Column label prefix for a generator, e.g. `euc:g2:`.
pub(crate) fn label_prefix(kind: &str, id: &str) -> String {
    let id: String = id
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c.to_ascii_lowercase() })
        .collect();
    format!("{kind}:{id}:")
}

/// Reads a commitment and dispatch out of an extended-formulation solution:
/// `x_s` sums the interval outputs covering `s`, `u_s` counts the intervals
/// covering `s`, and start flags come from `z` (and `w` when initially off).
pub fn map_to_schedule(gen: &GeneratorSpec, primal: &[f64], map: &VariableMap) -> Result<UnitSchedule> {
    let horizon = gen.horizon();
    let mut worst: Option<(Var, f64, f64)> = None;
    for (var, col) in map.iter() {
        if matches!(var, Var::W(_) | Var::WNever | Var::Y(..) | Var::Z(..) | Var::Theta(_)) {
            let v = primal[col];
            let dist = v.abs().min((v - 1.0).abs());
            if dist > BINARY_TOL && worst.is_none_or(|w| dist > w.2) {
                worst = Some((var, v, dist));
            }
        }
    }
    if let Some((var, value, _)) = worst {
        return Err(Error::FractionalSolution {
            variable: format!("{}{var}", label_prefix("euc", &gen.id)),
            value,
        });
    }

    let on = |var: Var| map.col(var).is_some_and(|c| primal[c] > 0.5);
    let mut u = vec![false; horizon];
    let mut x = vec![0.0; horizon];
    let sets = enumerate_index_sets(gen);
    for &(t, k) in &sets.tk1 {
        if on(Var::W(k)) {
            for s in t..=k {
                u[s - 1] = true;
            }
        }
    }
    for &(t, k) in &sets.tk2 {
        if on(Var::Y(t, k)) {
            for s in t..=k {
                u[s - 1] = true;
            }
        }
    }
    for (var, col) in map.iter() {
        if let Var::Q { s, .. } = var {
            x[s - 1] += primal[col];
        }
    }
    for s in 0..horizon {
        if !u[s] {
            x[s] = 0.0;
        }
    }
    Ok(UnitSchedule::from_commitment(gen, u, x))
}
