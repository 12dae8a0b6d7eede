use crate::dp::ed_program;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, RowSense};
use crate::model::{
    check_commitment, evaluate_unit_schedule, on_runs, GeneratorSpec, PriceVector, SystemInstance, SystemSchedule,
    UnitSchedule,
};

/// Largest total number of commitment bits (generators times periods) enumerated.
pub const ENUMERATION_LIMIT: usize = 20;

struct Candidate {
    u: Vec<bool>,
    /// Start-up plus shut-down cost.
    fixed: f64,
    runs: Vec<(usize, usize)>,
}

fn candidates(gen: &GeneratorSpec) -> Vec<Candidate> {
    let horizon = gen.horizon();
    let zeros = vec![0.0; horizon];
    (0..1u32 << horizon)
        .map(|mask| (0..horizon).map(|s| mask >> s & 1 == 1).collect::<Vec<bool>>())
        .filter(|u| check_commitment(gen, u).is_ok())
        .map(|u| {
            let c = evaluate_unit_schedule(gen, &u, &zeros);
            Candidate {
                fixed: c.startup + c.shutdown,
                runs: on_runs(&u),
                u,
            }
        })
        .collect()
}

/// Exhaustive system oracle: every feasible joint commitment, each with its
/// own joint dispatch LP. Independent of both MIP formulations.
pub fn enumerate_commitments(instance: &SystemInstance) -> Result<(f64, SystemSchedule)> {
    let horizon = instance.horizon;
    let bits = horizon * instance.generators.len();
    if bits > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            horizon: bits,
            limit: ENUMERATION_LIMIT,
        });
    }
    let per_gen: Vec<Vec<Candidate>> = instance.generators.iter().map(candidates).collect();
    let zero_pi = PriceVector::zeros(horizon);
    let mut best: Option<(f64, Vec<usize>, Vec<Vec<f64>>)> = None;
    let mut pick = vec![0usize; per_gen.len()];
    if per_gen.iter().any(Vec::is_empty) {
        return Err(Error::Infeasible("a generator has no feasible commitment".into()));
    }

    loop {
        if capacity_fits(instance, &per_gen, &pick) {
            let mut lp = LinearProgram::new();
            let mut fixed = 0.0;
            let mut outputs = vec![Vec::new(); horizon];
            let mut q_cols: Vec<Vec<Option<usize>>> = Vec::new();
            for (g, (gen, &i)) in instance.generators.iter().zip(&pick).enumerate() {
                let cand = &per_gen[g][i];
                fixed += cand.fixed;
                let mut cols = vec![None; horizon];
                for &(t, k) in &cand.runs {
                    let off = lp.append(&ed_program(gen, t, k, &zero_pi));
                    for s in t..=k {
                        outputs[s - 1].push((off + s - t, 1.0));
                        cols[s - 1] = Some(off + s - t);
                    }
                }
                q_cols.push(cols);
            }
            for (s, cols) in outputs.into_iter().enumerate() {
                lp.add_row(format!("balance:t={}", s + 1), cols, RowSense::Eq, instance.demand[s]);
            }
            let sol = solve_lp(&lp)?;
            if sol.status == LpStatus::Optimal {
                let total = sol.objective + fixed;
                if best.as_ref().is_none_or(|b| total < b.0 - 1e-9) {
                    let x = q_cols
                        .iter()
                        .map(|cols| cols.iter().map(|c| c.map_or(0.0, |c| sol.primal[c])).collect())
                        .collect();
                    best = Some((total, pick.clone(), x));
                }
            }
        }
        // Odometer step over the candidate lists.
        let mut g = 0;
        loop {
            if g == pick.len() {
                let (total, picked, xs) =
                    best.ok_or_else(|| Error::Infeasible("no joint commitment meets demand".into()))?;
                let units = instance
                    .generators
                    .iter()
                    .zip(picked)
                    .zip(xs)
                    .enumerate()
                    .map(|(j, ((gen, i), x))| UnitSchedule::from_commitment(gen, per_gen[j][i].u.clone(), x))
                    .collect();
                return Ok((total, SystemSchedule { units }));
            }
            pick[g] += 1;
            if pick[g] < per_gen[g].len() {
                break;
            }
            pick[g] = 0;
            g += 1;
        }
    }
}

/// Cheap necessary condition: committed minimum and maximum outputs bracket demand.
fn capacity_fits(instance: &SystemInstance, per_gen: &[Vec<Candidate>], pick: &[usize]) -> bool {
    (0..instance.horizon).all(|s| {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (g, gen) in instance.generators.iter().enumerate() {
            if per_gen[g][pick[g]].u[s] {
                lo += gen.c_min;
                hi += gen.c_max;
            }
        }
        lo <= instance.demand[s] + 1e-9 && hi >= instance.demand[s] - 1e-9
    })
}
