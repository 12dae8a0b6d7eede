//! Seeded random instance generators used by the property tests and the
//! `--fuzz` mode of the command line tool.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dp::{profit_max, run_dp};
use crate::error::Result;
use crate::formulations::{build_euc_priced, Var, BINARY_TOL};
use crate::lp::{solve_lp, LinearProgram, RowSense};
use crate::mip::{enumerate_commitments, ENUMERATION_LIMIT};
use crate::pricing::{compare, lagrangian_value};
use crate::model::{CostPiece, DurationCost, GeneratorSpec, InitialState, PeriodCost, PriceVector, SystemInstance};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Convex piecewise-linear cost with 1 to `max_pieces` pieces over `[lo, hi]`.
pub fn random_period_cost(rng: &mut impl Rng, lo: f64, hi: f64, max_pieces: usize) -> PeriodCost {
    let n = rng.gen_range(1..=max_pieces.max(1));
    let mut slopes: Vec<f64> = (0..n).map(|_| round2(rng.gen_range(1.0..10.0))).collect();
    slopes.sort_by(f64::total_cmp);
    slopes.dedup();
    let mut breaks: Vec<f64> = (1..slopes.len()).map(|_| round2(rng.gen_range(lo..=hi))).collect();
    breaks.sort_by(f64::total_cmp);
    let mut intercept = round2(rng.gen_range(0.0..30.0));
    let mut pieces = vec![CostPiece::new(slopes[0], intercept)];
    for j in 1..slopes.len() {
        // Continuous at the breakpoint, so every piece is active somewhere.
        intercept += (slopes[j - 1] - slopes[j]) * breaks[j - 1];
        pieces.push(CostPiece::new(slopes[j], intercept));
    }
    PeriodCost::new(pieces)
}

fn random_duration_cost(rng: &mut impl Rng, max: f64) -> DurationCost {
    if rng.gen_bool(0.2) {
        return DurationCost::free();
    }
    let mut v: Vec<f64> = (0..3).map(|_| round2(rng.gen_range(0.0..max))).collect();
    v.sort_by(f64::total_cmp);
    DurationCost::new(v)
}

/// A random single generator: min up/down in `[1, 3]`, 1 to 3 cost pieces.
pub fn random_generator(rng: &mut impl Rng, id: &str, horizon: usize) -> GeneratorSpec {
    let c_min = round2(rng.gen_range(0.0..20.0));
    let c_max = round2(c_min + rng.gen_range(5.0..50.0));
    let ramp = round2(rng.gen_range(3.0..=(c_max - c_min).max(3.0)));
    let start_ramp = round2(rng.gen_range(c_min..=c_max));
    let cost = (0..horizon).map(|_| random_period_cost(rng, c_min, c_max, 3)).collect();
    let s0 = rng.gen_range(1..=3);
    GeneratorSpec {
        id: id.to_string(),
        min_up: rng.gen_range(1..=3),
        min_down: rng.gen_range(1..=3),
        c_min,
        c_max,
        ramp,
        start_ramp,
        startup_cost: random_duration_cost(rng, 60.0),
        shutdown_cost: random_duration_cost(rng, 20.0),
        cost,
        initial: if rng.gen_bool(0.5) {
            InitialState::OnFor(s0)
        } else {
            InitialState::OffFor(s0)
        },
    }
}

pub fn random_prices(rng: &mut impl Rng, horizon: usize) -> PriceVector {
    PriceVector((0..horizon).map(|_| round2(rng.gen_range(0.0..12.0))).collect())
}

/// A random system whose demand is met by each generator's profit-maximizing
/// schedule at some random prices, so the instance is always feasible.
pub fn random_system(rng: &mut impl Rng, n_gens: usize, horizon: usize) -> Result<SystemInstance> {
    let generators: Vec<GeneratorSpec> = (1..=n_gens)
        .map(|j| random_generator(rng, &format!("G{j}"), horizon))
        .collect();
    let mut demand = vec![0.0; horizon];
    for gen in &generators {
        let (_, sched) = profit_max(gen, &random_prices(rng, horizon))?;
        for (d, x) in demand.iter_mut().zip(&sched.x) {
            *d += x;
        }
    }
    Ok(SystemInstance {
        horizon,
        demand: demand.into_iter().map(|d| (d * 1e6).round() / 1e6).collect(),
        generators,
    })
}

/// A random LP built around a known feasible point, with finite boxes on
/// every column that could otherwise make it unbounded.
pub fn random_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(0..=8);
    let mut lp = LinearProgram::new();
    let mut point = Vec::with_capacity(n);
    for j in 0..n {
        let cost = rng.gen_range(-5i32..=5) as f64;
        let (lo, hi): (f64, f64) = match rng.gen_range(0..4) {
            0 if cost >= 0.0 => (0.0, f64::INFINITY),
            1 => (-5.0, 5.0),
            2 => (2.0, 2.0),
            _ => (0.0, 10.0),
        };
        let hi_f = if hi.is_finite() { hi } else { 10.0 };
        point.push(rng.gen_range(lo..=hi_f));
        lp.add_var(format!("x{j}"), lo, hi, cost);
    }
    let senses = [RowSense::Le, RowSense::Ge, RowSense::Eq];
    for i in 0..m {
        let mut coeffs = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.6) {
                coeffs.push((j, rng.gen_range(-4i32..=4) as f64));
            }
        }
        let act: f64 = coeffs.iter().map(|&(j, a)| a * point[j]).sum();
        let sense = *senses.choose(rng).expect("non-empty");
        let rhs = match sense {
            RowSense::Le => act + rng.gen_range(0.0..3.0),
            RowSense::Ge => act - rng.gen_range(0.0..3.0),
            RowSense::Eq => act,
        };
        lp.add_row(format!("r{i}"), coeffs, sense, rhs);
    }
    lp
}

/// Outcome of one invariant check in a fuzz batch.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzRecord {
    pub case: usize,
    pub invariant: &'static str,
    pub passed: bool,
    /// The checked quantity (a residual or a difference).
    pub value: f64,
}

const FUZZ_TOL: f64 = 1e-6;

/// Draws `n` random systems (2 to 4 generators, up to 6 periods) and checks
/// the pricing and formulation invariants on each.
pub fn run_batch(n: usize, seed: u64) -> Result<Vec<FuzzRecord>> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    for case in 0..n {
        let n_gens = rng.gen_range(2..=4);
        let horizon = rng.gen_range(1..=6);
        let inst = random_system(&mut rng, n_gens, horizon)?;
        let mut push = |invariant, value: f64, passed: bool| {
            out.push(FuzzRecord {
                case,
                invariant,
                passed,
                value,
            })
        };

        for gen in &inst.generators {
            let pi = random_prices(&mut rng, horizon);
            let block = build_euc_priced(gen, &pi);
            let sol = solve_lp(&block.lp)?;
            let (dp, _) = run_dp(gen, &pi)?;
            let frac = block
                .map
                .iter()
                .filter(|(v, _)| v.is_interval_binary() || matches!(v, Var::Theta(_)))
                .map(|(_, c)| sol.primal[c].abs().min((sol.primal[c] - 1.0).abs()))
                .fold(0.0, f64::max);
            push("euc_integral", frac, frac <= BINARY_TOL);
            let diff = (sol.objective - dp).abs();
            push("euc_equals_dp", diff, diff <= FUZZ_TOL);
        }

        let reports = compare(&inst)?;
        let (tlmp, chp) = (&reports[0], &reports[1]);
        let excess = chp.total_uplift - tlmp.total_uplift;
        push("chp_uplift_le_tlmp", excess, excess <= FUZZ_TOL);
        let gap = (chp.total_uplift - (chp.z_qip - chp.relaxation_objective)).abs();
        push("chp_uplift_equals_duality_gap", gap, gap <= FUZZ_TOL);
        let min_uplift = reports
            .iter()
            .flat_map(|r| r.per_gen.iter().map(|g| g.uplift))
            .fold(f64::INFINITY, f64::min);
        push("uplift_nonnegative", min_uplift, min_uplift >= -FUZZ_TOL);
        let lag = (lagrangian_value(&inst, &chp.prices)? - chp.relaxation_objective).abs();
        push("lagrangian_equals_relaxation", lag, lag <= FUZZ_TOL);
        if n_gens * horizon <= ENUMERATION_LIMIT {
            let (oracle, _) = enumerate_commitments(&inst)?;
            let diff = (oracle - chp.z_qip).abs();
            push("mip_equals_enumeration", diff, diff <= FUZZ_TOL);
        }
    }
    Ok(out)
}

/// `case,invariant,result,value` lines.
pub fn records_to_csv(records: &[FuzzRecord]) -> String {
    let mut out = String::from("case,invariant,result,value\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:e}\n",
            r.case,
            r.invariant,
            if r.passed { "pass" } else { "fail" },
            r.value
        ));
    }
    out
}
