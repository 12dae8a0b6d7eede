use super::{label_prefix, Var, VariableMap};
use crate::lp::{LinearProgram, RowSense};
use crate::model::{GeneratorSpec, InitialState, PriceVector};

/// One generator's two-binary (`u`, `v`) formulation.
#[derive(Debug, Clone)]
pub struct TwoBinBlock {
    pub lp: LinearProgram,
    /// The `u` and `v` columns.
    pub integer_vars: Vec<usize>,
    pub map: VariableMap,
}

/// Affine expression over columns; `u_0` and `x_0` enter as constants.
#[derive(Default, Clone)]
struct Expr {
    terms: Vec<(usize, f64)>,
    constant: f64,
}

impl Expr {
    fn add(mut self, other: Term, coef: f64) -> Self {
        match other {
            Term::Col(c) => self.terms.push((c, coef)),
            Term::Const(v) => self.constant += coef * v,
        }
        self
    }

    fn plus(mut self, v: f64) -> Self {
        self.constant += v;
        self
    }
}

#[derive(Clone, Copy)]
enum Term {
    Col(usize),
    Const(f64),
}

fn push(lp: &mut LinearProgram, label: String, e: Expr, sense: RowSense) {
    lp.add_row(label, e.terms, sense, -e.constant);
}

pub fn build_2bin(gen: &GeneratorSpec) -> TwoBinBlock {
    twobin_block(gen, None)
}

/// The same formulation with `pi` folded into the cost slopes.
pub fn build_2bin_priced(gen: &GeneratorSpec, pi: &PriceVector) -> TwoBinBlock {
    twobin_block(gen, Some(pi))
}

pub(crate) fn twobin_block(gen: &GeneratorSpec, pi: Option<&PriceVector>) -> TwoBinBlock {
    let horizon = gen.horizon();
    let (big_l, ell) = (gen.min_up, gen.min_down);
    let pre = label_prefix("2bin", &gen.id);
    let initial_on = gen.initial.is_on();
    let s0 = gen.initial_periods();
    let inf = f64::INFINITY;

    // Periods carrying start-up and shut-down cost columns.
    let (first_start, zeta_shut_range) = match gen.initial {
        InitialState::OnFor(_) => {
            let t0 = gen.forced_on_until();
            (t0 + ell + 1, (t0, horizon.saturating_sub(1)))
        }
        InitialState::OffFor(_) => {
            let t0 = gen.earliest_start();
            (t0, (t0 + big_l - 1, horizon.saturating_sub(1)))
        }
    };

    let mut lp = LinearProgram::new();
    let mut map = VariableMap::default();
    let mut add = |lp: &mut LinearProgram, var: Var, lo: f64, hi: f64, cost: f64| {
        let c = lp.add_var(format!("{pre}{var}"), lo, hi, cost);
        map.insert(var, c);
        c
    };
    let mut integer_vars = Vec::new();
    for t in 1..=horizon {
        integer_vars.push(add(&mut lp, Var::U(t), 0.0, 1.0, 0.0));
        integer_vars.push(add(&mut lp, Var::V(t), 0.0, 1.0, 0.0));
        add(&mut lp, Var::X(t), 0.0, inf, 0.0);
        add(&mut lp, Var::Fuel(t), f64::NEG_INFINITY, inf, 1.0);
    }
    for t in first_start..=horizon {
        add(&mut lp, Var::Zeta(t), 0.0, inf, 1.0);
    }
    for t in zeta_shut_range.0..=zeta_shut_range.1 {
        if zeta_shut_range.0 <= zeta_shut_range.1 {
            add(&mut lp, Var::ZetaShut(t), 0.0, inf, 1.0);
        }
    }

    let col = |v: Var| map.col(v).expect("column was just created");
    let u0 = if initial_on { 1.0 } else { 0.0 };
    let u = |t: usize| if t == 0 { Term::Const(u0) } else { Term::Col(col(Var::U(t))) };
    let v = |t: usize| Term::Col(col(Var::V(t)));
    let x = |t: usize| if t == 0 { Term::Const(0.0) } else { Term::Col(col(Var::X(t))) };

    match gen.initial {
        InitialState::OnFor(_) => {
            for t in 1..=gen.forced_on_until() {
                push(&mut lp, format!("{pre}init_on:t={t}"), Expr::default().add(u(t), 1.0).plus(-1.0), RowSense::Eq);
            }
        }
        InitialState::OffFor(_) => {
            for t in 1..gen.earliest_start().min(horizon + 1) {
                push(&mut lp, format!("{pre}init_off:t={t}"), Expr::default().add(u(t), 1.0), RowSense::Eq);
            }
        }
    }
    // Windows are clipped at period 1; before it the unit keeps its initial status.
    for t in 1..=horizon {
        min_up_row(&mut lp, &pre, t, big_l, &u, &v);
        min_down_row(&mut lp, &pre, t, ell, &u, &v);
    }

    for t in 1..=horizon {
        let e = Expr::default().add(u(t), 1.0).add(u(t - 1), -1.0).add(v(t), -1.0);
        push(&mut lp, format!("{pre}logic:t={t}"), e, RowSense::Le);
        let e = Expr::default().add(x(t), -1.0).add(u(t), gen.c_min);
        push(&mut lp, format!("{pre}lb:t={t}"), e, RowSense::Le);
        let e = Expr::default().add(x(t), 1.0).add(u(t), -gen.c_max);
        push(&mut lp, format!("{pre}ub:t={t}"), e, RowSense::Le);
    }

    // Ramping with the start ramp as big-M. An initially-on unit has no
    // recorded output before period 1, so its first ramp pair is t = 2.
    let ramp_from = if initial_on { 2 } else { 1 };
    let slack = gen.start_ramp - gen.ramp;
    for t in ramp_from..=horizon {
        let e = Expr::default()
            .add(x(t), 1.0)
            .add(x(t - 1), -1.0)
            .add(u(t - 1), slack)
            .plus(-gen.start_ramp);
        push(&mut lp, format!("{pre}ramp_up:t={t}"), e, RowSense::Le);
        let e = Expr::default()
            .add(x(t - 1), 1.0)
            .add(x(t), -1.0)
            .add(u(t), slack)
            .plus(-gen.start_ramp);
        push(&mut lp, format!("{pre}ramp_down:t={t}"), e, RowSense::Le);
    }

    // Shut-down costs.
    let zs = |t: usize| Term::Col(col(Var::ZetaShut(t)));
    let (later_shut_from, later_shut_k0) = match gen.initial {
        InitialState::OnFor(_) => {
            let t0 = gen.forced_on_until();
            for t in zeta_shut_range.0..=zeta_shut_range.1 {
                // First shut-down after period t of the initial run.
                let c = gen.shutdown_cost.at(t + s0);
                let mut e = Expr::default().add(zs(t), 1.0).add(u(t + 1), c).plus(-c);
                for s in 1..=t {
                    e = e.add(u(s), -c).plus(c);
                }
                push(&mut lp, format!("{pre}shut_first:t={t}"), e, RowSense::Ge);
            }
            (t0 + ell + big_l, t0 + ell + 1)
        }
        InitialState::OffFor(_) => {
            let t0 = gen.earliest_start();
            (t0 + big_l - 1, t0)
        }
    };
    for t in later_shut_from..horizon {
        for k in later_shut_k0..=(t + 1).saturating_sub(big_l) {
            let c = gen.shutdown_cost.at(t - k + 1);
            let mut e = Expr::default().add(zs(t), 1.0).add(v(k), -c).add(u(t + 1), c);
            for s in k..=t {
                e = e.plus(c).add(u(s), -c);
            }
            push(&mut lp, format!("{pre}shut:t={t},k={k}"), e, RowSense::Ge);
        }
    }

    // Start-up costs.
    let z = |t: usize| Term::Col(col(Var::Zeta(t)));
    let floor = gen.startup_cost.min_from(ell);
    for t in first_start..=horizon {
        let first_k = match gen.initial {
            InitialState::OnFor(_) => gen.forced_on_until(),
            InitialState::OffFor(_) => {
                let c = gen.startup_cost.at(s0 + t - 1);
                let mut e = Expr::default().add(z(t), 1.0).add(v(t), -c);
                for s in 1..t {
                    e = e.add(u(s), c);
                }
                push(&mut lp, format!("{pre}start_first:t={t}"), e, RowSense::Ge);
                first_start + big_l - 1
            }
        };
        for k in first_k..=(t.saturating_sub(ell + 1)) {
            if k + ell + 1 > t {
                break;
            }
            let c = gen.startup_cost.at(t - k - 1);
            let mut e = Expr::default().add(z(t), 1.0).add(v(t), -c).add(u(k), -c).plus(c);
            for s in k + 1..t {
                e = e.add(u(s), c);
            }
            push(&mut lp, format!("{pre}start:t={t},k={k}"), e, RowSense::Ge);
        }
        let e = Expr::default().add(z(t), 1.0).add(v(t), -floor);
        push(&mut lp, format!("{pre}start_floor:t={t}"), e, RowSense::Ge);
    }

    for t in 1..=horizon {
        let price = pi.map_or(0.0, |p| p.at(t));
        for (j, piece) in gen.cost[t - 1].pieces().iter().enumerate() {
            let e = Expr::default()
                .add(Term::Col(col(Var::Fuel(t))), 1.0)
                .add(x(t), -(piece.slope - price))
                .add(u(t), -piece.intercept);
            push(&mut lp, format!("{pre}piece:t={t},j={}", j + 1), e, RowSense::Ge);
        }
    }

    TwoBinBlock { lp, integer_vars, map }
}

fn min_up_row(
    lp: &mut LinearProgram,
    pre: &str,
    t: usize,
    big_l: usize,
    u: &impl Fn(usize) -> Term,
    v: &impl Fn(usize) -> Term,
) {
    let mut e = Expr::default().add(u(t), -1.0);
    for i in (t + 1).saturating_sub(big_l).max(1)..=t {
        e = e.add(v(i), 1.0);
    }
    push(lp, format!("{pre}min_up:t={t}"), e, RowSense::Le);
}

fn min_down_row(
    lp: &mut LinearProgram,
    pre: &str,
    t: usize,
    ell: usize,
    u: &impl Fn(usize) -> Term,
    v: &impl Fn(usize) -> Term,
) {
    let mut e = Expr::default().add(u(t.saturating_sub(ell)), 1.0).plus(-1.0);
    for i in (t + 1).saturating_sub(ell).max(1)..=t {
        e = e.add(v(i), 1.0);
    }
    push(lp, format!("{pre}min_down:t={t}"), e, RowSense::Le);
}
