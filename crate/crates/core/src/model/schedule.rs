use super::{GeneratorSpec, InitialState, PriceVector};

/// Commitment and dispatch of one generator over the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSchedule {
    pub id: String,
    /// Online status per period.
    pub u: Vec<bool>,
    /// Start-up flag per period.
    pub v: Vec<bool>,
    /// Dispatch per period (MW).
    pub x: Vec<f64>,
    /// Generation plus start-up plus shut-down cost, before any revenue.
    pub cost: f64,
}

impl UnitSchedule {
    /// Builds a schedule from on/off status and dispatch; start flags and cost are derived.
    pub fn from_commitment(gen: &GeneratorSpec, u: Vec<bool>, x: Vec<f64>) -> Self {
        let mut prev = gen.initial.is_on();
        let v = u
            .iter()
            .map(|&on| {
                let start = on && !prev;
                prev = on;
                start
            })
            .collect();
        let cost = evaluate_unit_schedule(gen, &u, &x).total();
        Self {
            id: gen.id.clone(),
            u,
            v,
            x,
            cost,
        }
    }

    pub fn all_off(gen: &GeneratorSpec) -> Self {
        let t = gen.horizon();
        Self::from_commitment(gen, vec![false; t], vec![0.0; t])
    }

    pub fn revenue(&self, prices: &PriceVector) -> f64 {
        self.x.iter().zip(prices.as_slice()).map(|(x, p)| x * p).sum()
    }

    /// Cost minus revenue at the given prices.
    pub fn net_cost(&self, prices: &PriceVector) -> f64 {
        self.cost - self.revenue(prices)
    }

    pub fn profit(&self, prices: &PriceVector) -> f64 {
        -self.net_cost(prices)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SystemSchedule {
    pub units: Vec<UnitSchedule>,
}

impl SystemSchedule {
    pub fn total_cost(&self) -> f64 {
        self.units.iter().map(|u| u.cost).sum()
    }

    pub fn unit(&self, id: &str) -> Option<&UnitSchedule> {
        self.units.iter().find(|u| u.id == id)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScheduleCost {
    pub generation: f64,
    pub startup: f64,
    pub shutdown: f64,
}

impl ScheduleCost {
    pub fn total(&self) -> f64 {
        self.generation + self.startup + self.shutdown
    }
}

/// Maximal online runs as 1-based inclusive `(start, end)` pairs.
pub fn on_runs(u: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &on) in u.iter().enumerate() {
        match (on, start) {
            (true, None) => start = Some(i + 1),
            (false, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, u.len()));
    }
    runs
}

/// Costs a commitment/dispatch pair the same way every formulation does:
/// generation on online periods, `S(off duration)` per start, `S'(on duration)`
/// per shut-down inside the horizon. Feasibility is not checked.
pub fn evaluate_unit_schedule(gen: &GeneratorSpec, u: &[bool], x: &[f64]) -> ScheduleCost {
    let horizon = u.len();
    let mut cost = ScheduleCost::default();
    for (s, (&on, &xs)) in u.iter().zip(x).enumerate() {
        if on {
            cost.generation += gen.generation_cost(s + 1, xs);
        }
    }

    let mut runs = on_runs(u);
    // The run in progress at period 1 of an initially-on unit is charged from s0.
    let mut prev_end = match gen.initial {
        InitialState::OnFor(s0) => {
            let first_end = match runs.first() {
                Some(&(1, k)) => {
                    runs.remove(0);
                    k
                }
                _ => 0,
            };
            if first_end < horizon {
                cost.shutdown += gen.shutdown_cost.at(first_end + s0);
            }
            Some(first_end)
        }
        InitialState::OffFor(_) => None,
    };

    for (t, k) in runs {
        cost.startup += match (prev_end, gen.initial) {
            (Some(pk), _) => gen.startup_cost.at(t - pk - 1),
            (None, InitialState::OffFor(s0)) => gen.startup_cost.at(s0 + t - 1),
            (None, InitialState::OnFor(_)) => unreachable!("initially-on units always have a previous run"),
        };
        if k < horizon {
            cost.shutdown += gen.shutdown_cost.at(k - t + 1);
        }
        prev_end = Some(k);
    }
    cost
}

/// Checks min-up/min-down and the initial residuals of an on/off string.
/// An on-run reaching the end of the horizon may be shorter than min-up.
pub fn check_commitment(gen: &GeneratorSpec, u: &[bool]) -> Result<(), String> {
    let horizon = u.len();
    let runs = on_runs(u);
    let initial_on = gen.initial.is_on();
    let mut prev_end: Option<usize> = if initial_on { Some(0) } else { None };
    for (idx, &(t, k)) in runs.iter().enumerate() {
        if initial_on && idx == 0 && t == 1 {
            if k < gen.forced_on_until() {
                return Err(format!("shut down after period {k}, before the initial min-up residual"));
            }
        } else {
            if k - t + 1 < gen.min_up && k < horizon {
                return Err(format!("on-run [{t}, {k}] shorter than min-up {}", gen.min_up));
            }
            match prev_end {
                Some(pk) if t - pk - 1 < gen.min_down => {
                    return Err(format!("off-run before period {t} shorter than min-down {}", gen.min_down));
                }
                None if t < gen.earliest_start() => {
                    return Err(format!("start at {t} violates the initial min-down residual"));
                }
                _ => {}
            }
        }
        prev_end = Some(k);
    }
    if initial_on && runs.first().is_none_or(|r| r.0 != 1) && gen.forced_on_until() > 0 {
        return Err("offline in period 1 despite the initial min-up residual".into());
    }
    Ok(())
}

/// Checks bounds, ramps, min-up/min-down, the initial residual and the
/// start flags of a single-unit schedule.
pub fn check_unit_schedule(gen: &GeneratorSpec, sched: &UnitSchedule, tol: f64) -> Result<(), String> {
    let horizon = gen.horizon();
    if sched.u.len() != horizon || sched.v.len() != horizon || sched.x.len() != horizon {
        return Err(format!("schedule length differs from horizon {horizon}"));
    }
    let mut prev_on = gen.initial.is_on();
    for s in 0..horizon {
        let (on, x) = (sched.u[s], sched.x[s]);
        if sched.v[s] != (on && !prev_on) {
            return Err(format!("start flag inconsistent in period {}", s + 1));
        }
        if on {
            if x < gen.c_min - tol || x > gen.c_max + tol {
                return Err(format!("period {}: output {x} outside [{}, {}]", s + 1, gen.c_min, gen.c_max));
            }
        } else if x.abs() > tol {
            return Err(format!("period {}: offline but producing {x}", s + 1));
        }
        prev_on = on;
    }

    check_commitment(gen, &sched.u)?;
    for (t, k) in on_runs(&sched.u) {
        let continues_initial = gen.initial.is_on() && t == 1;
        if !continues_initial && sched.x[t - 1] > gen.start_ramp + tol {
            return Err(format!("start-up output {} above start ramp", sched.x[t - 1]));
        }
        if k < horizon && sched.x[k - 1] > gen.start_ramp + tol {
            return Err(format!("shut-down output {} above start ramp", sched.x[k - 1]));
        }
        for s in t + 1..=k {
            if (sched.x[s - 1] - sched.x[s - 2]).abs() > gen.ramp + tol {
                return Err(format!("ramp violated between periods {} and {s}", s - 1));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DurationCost;

    fn g2() -> GeneratorSpec {
        crate::cases::section5().generators[1].clone()
    }

    #[test]
    fn runs_are_maximal() {
        assert_eq!(on_runs(&[true, true, false, true]), vec![(1, 2), (4, 4)]);
        assert_eq!(on_runs(&[false, false]), vec![]);
    }

    #[test]
    fn section5_iso_cost() {
        let s = UnitSchedule::from_commitment(&g2(), vec![true; 3], vec![40.0, 45.0, 50.0]);
        assert_eq!(s.cost, 600.0);
        assert_eq!(s.v, vec![false; 3]);
        check_unit_schedule(&g2(), &s, 1e-9).unwrap();
        let pi = PriceVector(vec![1.0, 5.0, 6.0]);
        assert_eq!(s.profit(&pi), -35.0);
    }

    #[test]
    fn restart_pays_startup_by_off_duration() {
        let mut g = g2();
        g.min_up = 1;
        g.min_down = 1;
        g.startup_cost = DurationCost::new(vec![11.0, 13.0]);
        g.shutdown_cost = DurationCost::new(vec![7.0, 9.0]);
        g.initial = InitialState::OnFor(4);
        let s = UnitSchedule::from_commitment(&g, vec![true, false, true], vec![30.0, 0.0, 30.0]);
        let c = evaluate_unit_schedule(&g, &s.u, &s.x);
        assert_eq!(c.startup, 11.0);
        // first run lasted 1 + s0 = 5 periods
        assert_eq!(c.shutdown, 9.0);
        check_unit_schedule(&g, &s, 1e-9).unwrap();
    }

    #[test]
    fn initially_off_first_start() {
        let mut g = g2();
        g.initial = InitialState::OffFor(1);
        g.startup_cost = DurationCost::new(vec![1.0, 2.0, 3.0, 4.0]);
        // earliest start is 2 (ell = 2, s0- = 1)
        let s = UnitSchedule::from_commitment(&g, vec![false, true, true], vec![0.0, 20.0, 25.0]);
        assert_eq!(evaluate_unit_schedule(&g, &s.u, &s.x).startup, 2.0);
        check_unit_schedule(&g, &s, 1e-9).unwrap();
        let bad = UnitSchedule::from_commitment(&g, vec![true, true, true], vec![20.0, 20.0, 20.0]);
        assert!(check_unit_schedule(&g, &bad, 1e-9).is_err());
    }

    #[test]
    fn violations_are_reported() {
        let g = g2();
        let ramp = UnitSchedule::from_commitment(&g, vec![true; 3], vec![40.0, 50.0, 50.0]);
        assert!(check_unit_schedule(&g, &ramp, 1e-9).unwrap_err().contains("ramp"));
        let short = UnitSchedule::from_commitment(&g, vec![true, false, false], vec![90.0, 0.0, 0.0]);
        assert!(check_unit_schedule(&g, &short, 1e-9).unwrap_err().contains("shut-down output"));
    }
}
