//! Domain data shared by every solver: generators, system instances,
//! schedules and price vectors, plus instance validation.

mod io;
mod schedule;

use std::collections::HashSet;
use std::fmt;

pub use io::{load_instance, load_instance_from_str, parse_instance, save_instance, to_json, LoadOptions, DEFAULT_TANGENT_PIECES};
pub use schedule::{check_commitment, check_unit_schedule, evaluate_unit_schedule, on_runs, ScheduleCost, SystemSchedule, UnitSchedule};

/// One affine piece `slope * x + intercept` of a convex cost curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostPiece {
    pub slope: f64,
    pub intercept: f64,
}

impl CostPiece {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Piecewise linear convex cost of a single period, the pointwise max of its pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodCost {
    pieces: Vec<CostPiece>,
}

impl PeriodCost {
    pub fn new(pieces: Vec<CostPiece>) -> Self {
        Self { pieces }
    }

    pub fn pieces(&self) -> &[CostPiece] {
        &self.pieces
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Tangent lines of `alpha x^2 + beta x + c` at the midpoints of `n` equal
    /// sub-intervals of `[lo, hi]`.
    pub fn from_quadratic(alpha: f64, beta: f64, c: f64, n: usize, lo: f64, hi: f64) -> Self {
        let n = n.max(1);
        let width = (hi - lo) / n as f64;
        let pieces = (0..n)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * width;
                CostPiece::new(2.0 * alpha * x + beta, c - alpha * x * x)
            })
            .collect();
        Self { pieces }
    }

    /// Indices of pieces that never attain the max on `[lo, hi]` (ties go to the
    /// lowest index, so exact duplicates count as dominated).
    pub fn dominated_pieces(&self, lo: f64, hi: f64) -> Vec<usize> {
        let mut breaks = vec![lo, hi];
        for (i, p) in self.pieces.iter().enumerate() {
            for q in &self.pieces[i + 1..] {
                let ds = p.slope - q.slope;
                if ds.abs() > 1e-15 {
                    let x = (q.intercept - p.intercept) / ds;
                    if x > lo && x < hi {
                        breaks.push(x);
                    }
                }
            }
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));

        let mut probes: Vec<f64> = breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        if probes.is_empty() {
            probes.push(lo);
        }

        let mut active = vec![false; self.pieces.len()];
        for x in probes {
            let best = self.eval(x);
            let tol = 1e-12 * (1.0 + best.abs());
            if let Some(i) = self.pieces.iter().position(|p| p.eval(x) >= best - tol) {
                active[i] = true;
            }
        }
        active
            .iter()
            .enumerate()
            .filter(|(_, a)| !**a)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn without_dominated(&self, lo: f64, hi: f64) -> Self {
        let dominated = self.dominated_pieces(lo, hi);
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| !dominated.contains(i))
            .map(|(_, p)| *p)
            .collect();
        Self { pieces }
    }
}

/// Start-up or shut-down cost indexed by a duration in periods. Durations past
/// the end of the table reuse the last entry.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationCost {
    values: Vec<f64>,
}

impl DurationCost {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn free() -> Self {
        Self { values: vec![0.0] }
    }

    pub fn flat(value: f64) -> Self {
        Self {
            values: vec![value],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, duration: usize) -> f64 {
        match self.values.len() {
            0 => 0.0,
            n => self.values[duration.clamp(1, n) - 1],
        }
    }

    /// Smallest cost over all durations of at least `min_duration` periods.
    pub fn min_from(&self, min_duration: usize) -> f64 {
        let n = self.values.len();
        if n == 0 {
            return 0.0;
        }
        let from = min_duration.clamp(1, n) - 1;
        self.values[from..].iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_free(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Online for this many periods before period 1.
    OnFor(usize),
    /// Offline for this many periods before period 1.
    OffFor(usize),
}

impl InitialState {
    pub fn is_on(&self) -> bool {
        matches!(self, InitialState::OnFor(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub id: String,
    /// Minimum number of consecutive online periods.
    pub min_up: usize,
    /// Minimum number of consecutive offline periods.
    pub min_down: usize,
    pub c_min: f64,
    pub c_max: f64,
    /// Ramp limit between consecutive online periods (MW per period).
    pub ramp: f64,
    /// Output limit in a start-up or shut-down period.
    pub start_ramp: f64,
    pub startup_cost: DurationCost,
    pub shutdown_cost: DurationCost,
    /// One entry per period of the horizon.
    pub cost: Vec<PeriodCost>,
    pub initial: InitialState,
}

impl GeneratorSpec {
    pub fn horizon(&self) -> usize {
        self.cost.len()
    }

    /// Last period the unit is forced online by its initial min-up residual
    /// (`[L - s0]^+`, clamped to the horizon). Zero when initially off.
    pub fn forced_on_until(&self) -> usize {
        match self.initial {
            InitialState::OnFor(s0) => self.min_up.saturating_sub(s0).min(self.horizon()),
            InitialState::OffFor(_) => 0,
        }
    }

    /// Earliest period an initially-off unit may start (`[ell - s0 + 1]^+`, at least 1).
    pub fn earliest_start(&self) -> usize {
        match self.initial {
            InitialState::OffFor(s0) => (self.min_down + 1).saturating_sub(s0).max(1),
            InitialState::OnFor(_) => 1,
        }
    }

    pub fn initial_periods(&self) -> usize {
        match self.initial {
            InitialState::OnFor(s) | InitialState::OffFor(s) => s,
        }
    }

    /// Generation cost of producing `x` MW in period `s` (1-based).
    pub fn generation_cost(&self, s: usize, x: f64) -> f64 {
        self.cost[s - 1].eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemInstance {
    pub horizon: usize,
    pub demand: Vec<f64>,
    pub generators: Vec<GeneratorSpec>,
}

impl SystemInstance {
    pub fn generator(&self, id: &str) -> Option<&GeneratorSpec> {
        self.generators.iter().find(|g| g.id == id)
    }
}

/// Per-period prices, one per period of the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceVector(pub Vec<f64>);

impl PriceVector {
    pub fn zeros(horizon: usize) -> Self {
        PriceVector(vec![0.0; horizon])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Price of period `s` (1-based).
    pub fn at(&self, s: usize) -> f64 {
        self.0[s - 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for PriceVector {
    fn from(v: Vec<f64>) -> Self {
        PriceVector(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub generator: Option<String>,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn error(generator: Option<&str>, field: &str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            generator: generator.map(str::to_owned),
            field: field.to_owned(),
            message: message.into(),
        }
    }

    fn warning(generator: Option<&str>, field: &str, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(generator, field, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match &self.generator {
            Some(g) => write!(f, "{sev}: generator {g}: {}: {}", self.field, self.message),
            None => write!(f, "{sev}: {}: {}", self.field, self.message),
        }
    }
}

/// Checks every instance invariant. An empty result means the instance is clean.
pub fn validate(instance: &SystemInstance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let t = instance.horizon;

    if t == 0 {
        out.push(Diagnostic::error(None, "T", "horizon must be at least one period"));
    }
    if instance.demand.len() != t {
        out.push(Diagnostic::error(
            None,
            "demand",
            format!("demand length mismatch: {} values for T = {t}", instance.demand.len()),
        ));
    }
    for (i, d) in instance.demand.iter().enumerate() {
        if !d.is_finite() || *d < 0.0 {
            out.push(Diagnostic::error(
                None,
                "demand",
                format!("demand in period {} must be finite and non-negative, got {d}", i + 1),
            ));
        }
    }

    let mut seen = HashSet::new();
    for g in &instance.generators {
        if !seen.insert(g.id.as_str()) {
            out.push(Diagnostic::error(Some(&g.id), "id", "duplicate generator id"));
        }
        validate_generator(g, t, &mut out);
    }

    let capacity: f64 = instance.generators.iter().map(|g| g.c_max).sum();
    let peak = instance.demand.iter().copied().fold(0.0, f64::max);
    if capacity < peak {
        out.push(Diagnostic::warning(
            None,
            "demand",
            format!("peak demand {peak} exceeds total capacity {capacity}"),
        ));
    }
    out
}

fn validate_generator(g: &GeneratorSpec, horizon: usize, out: &mut Vec<Diagnostic>) {
    let id = Some(g.id.as_str());
    let finite = [g.c_min, g.c_max, g.ramp, g.start_ramp].iter().all(|v| v.is_finite());
    if !finite {
        out.push(Diagnostic::error(id, "bounds", "bounds and ramps must be finite"));
    }
    if g.c_min < 0.0 {
        out.push(Diagnostic::error(id, "c_min", "minimum output must be non-negative"));
    }
    if g.c_min > g.c_max {
        out.push(Diagnostic::error(id, "c_max", "maximum output below minimum output"));
    }
    if g.min_up < 1 {
        out.push(Diagnostic::error(id, "L", "min-up time must be at least 1"));
    }
    if g.min_down < 1 {
        out.push(Diagnostic::error(id, "ell", "min-down time must be at least 1"));
    }
    if g.ramp < 0.0 {
        out.push(Diagnostic::error(id, "ramp", "ramp limit must be non-negative"));
    }
    if g.start_ramp < g.c_min {
        out.push(Diagnostic::error(id, "start_ramp", "start ramp below minimum output"));
    }
    if g.initial_periods() < 1 {
        out.push(Diagnostic::error(id, "initial", "initial duration must be at least 1"));
    }
    for (field, table) in [("startup_cost", &g.startup_cost), ("shutdown_cost", &g.shutdown_cost)] {
        if table.values().is_empty() {
            out.push(Diagnostic::error(id, field, "cost table must not be empty"));
        }
        if table.values().iter().any(|v| !v.is_finite() || *v < 0.0) {
            out.push(Diagnostic::error(id, field, "costs must be finite and non-negative"));
        }
    }
    if g.cost.len() != horizon {
        out.push(Diagnostic::error(
            id,
            "cost",
            format!("cost length mismatch: {} periods for T = {horizon}", g.cost.len()),
        ));
    }
    for (s, pc) in g.cost.iter().enumerate() {
        if pc.pieces().is_empty() {
            out.push(Diagnostic::error(id, "cost", format!("period {} has no cost pieces", s + 1)));
            continue;
        }
        if pc.pieces().iter().any(|p| !p.slope.is_finite() || !p.intercept.is_finite()) {
            out.push(Diagnostic::error(id, "cost", format!("period {} has a non-finite piece", s + 1)));
            continue;
        }
        if g.c_min <= g.c_max {
            let dominated = pc.dominated_pieces(g.c_min, g.c_max);
            if !dominated.is_empty() {
                out.push(Diagnostic::warning(
                    id,
                    "cost",
                    format!("period {}: pieces {:?} are dominated on [c_min, c_max]", s + 1, dominated),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn section5() -> SystemInstance {
        crate::cases::section5()
    }

    #[test]
    fn section5_is_clean() {
        let diags = validate(&section5());
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn start_ramp_below_minimum_output() {
        let mut inst = section5();
        inst.generators[1].c_min = 30.0;
        inst.generators[1].start_ramp = 20.0;
        let diags = validate(&inst);
        assert!(diags
            .iter()
            .any(|d| d.is_error() && d.message == "start ramp below minimum output"));
    }

    #[test]
    fn demand_length_mismatch() {
        let mut inst = section5();
        inst.demand.push(10.0);
        let diags = validate(&inst);
        assert!(diags
            .iter()
            .any(|d| d.is_error() && d.field == "demand" && d.message.starts_with("demand length mismatch")));
    }

    #[test]
    fn capacity_shortfall_is_only_a_warning() {
        let mut inst = section5();
        inst.demand[1] = 1000.0;
        let diags = validate(&inst);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].severity, Severity::Warning);
    }

    #[test]
    fn validate_is_pure() {
        let mut inst = section5();
        inst.generators[0].min_up = 0;
        assert_eq!(validate(&inst), validate(&inst));
    }

    #[test]
    fn tangent_pieces_at_quarter_points() {
        let pc = PeriodCost::from_quadratic(0.01, 4.0, 0.0, 2, 0.0, 100.0);
        let p = pc.pieces();
        assert_eq!(p.len(), 2);
        // x = 25: a = 2 * 0.01 * 25 + 4, b = -0.01 * 625
        assert!((p[0].slope - 4.5).abs() < 1e-12);
        assert!((p[0].intercept + 6.25).abs() < 1e-12);
        assert!((p[1].slope - 5.5).abs() < 1e-12);
        assert!((p[1].intercept + 56.25).abs() < 1e-12);
    }

    #[test]
    fn duplicate_and_dominated_pieces() {
        let pc = PeriodCost::new(vec![
            CostPiece::new(4.0, 20.0),
            CostPiece::new(5.0, -40.0),
            CostPiece::new(4.0, 20.0),
            CostPiece::new(1.0, 0.0),
        ]);
        assert_eq!(pc.dominated_pieces(20.0, 100.0), vec![2, 3]);
        // Below x = 60 only the first piece matters.
        assert_eq!(pc.dominated_pieces(20.0, 50.0), vec![1, 2, 3]);
    }

    #[test]
    fn duration_cost_extends_last_value() {
        let s = DurationCost::new(vec![10.0, 20.0, 35.0]);
        assert_eq!(s.at(1), 10.0);
        assert_eq!(s.at(3), 35.0);
        assert_eq!(s.at(9), 35.0);
        assert_eq!(s.min_from(2), 20.0);
        assert_eq!(s.min_from(7), 35.0);
    }

    #[test]
    fn initial_residuals() {
        let mut g = section5().generators[1].clone();
        g.min_up = 3;
        g.initial = InitialState::OnFor(1);
        assert_eq!(g.forced_on_until(), 2);
        g.initial = InitialState::OnFor(5);
        assert_eq!(g.forced_on_until(), 0);
        g.min_up = 9;
        g.initial = InitialState::OnFor(1);
        assert_eq!(g.forced_on_until(), 3);
        g.min_down = 3;
        g.initial = InitialState::OffFor(1);
        assert_eq!(g.earliest_start(), 3);
        g.initial = InitialState::OffFor(7);
        assert_eq!(g.earliest_start(), 1);
    }
}
