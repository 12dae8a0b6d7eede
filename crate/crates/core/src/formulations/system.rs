use super::euc::euc_block;
use super::twobin::twobin_block;
use super::{map_to_schedule, IndexSets, Var, VariableMap, BINARY_TOL};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpSolution, RowSense};
use crate::model::{PriceVector, SystemInstance, SystemSchedule, UnitSchedule};

/// System model built from one extended-formulation block per generator
/// plus a demand-balance row per period.
#[derive(Debug, Clone)]
pub struct MeucModel {
    pub lp: LinearProgram,
    /// Per generator, its column map already shifted into `lp`.
    pub maps: Vec<VariableMap>,
    pub sets: Vec<IndexSets>,
    /// Row index of the balance constraint for period `s` at `s - 1`.
    pub balance_rows: Vec<usize>,
    pub integer_vars: Vec<usize>,
}

impl MeucModel {
    /// Commitment and dispatch of every generator; fails on a fractional solution.
    pub fn schedules(&self, instance: &SystemInstance, primal: &[f64]) -> Result<SystemSchedule> {
        let units = instance
            .generators
            .iter()
            .zip(&self.maps)
            .map(|(gen, map)| map_to_schedule(gen, primal, map))
            .collect::<Result<Vec<_>>>()?;
        Ok(SystemSchedule { units })
    }

    /// Duals of the balance rows.
    pub fn balance_duals(&self, sol: &LpSolution) -> PriceVector {
        PriceVector(self.balance_rows.iter().map(|&r| sol.duals[r]).collect())
    }
}

/// Label of the balance row for period `s` in a system model.
pub fn balance_label(kind: &str, s: usize) -> String {
    format!("{kind}:balance:t={s}")
}

pub fn assemble_meuc(instance: &SystemInstance) -> MeucModel {
    let mut lp = LinearProgram::new();
    let mut maps = Vec::new();
    let mut sets = Vec::new();
    let mut integer_vars = Vec::new();
    let mut outputs = vec![Vec::new(); instance.horizon];
    for gen in &instance.generators {
        let block = euc_block(gen, None);
        let offset = lp.append(&block.lp);
        integer_vars.extend(block.integer_vars().into_iter().map(|c| c + offset));
        for (s, cols) in outputs.iter_mut().enumerate() {
            cols.extend(block.output_cols(s + 1).into_iter().map(|c| (c + offset, 1.0)));
        }
        maps.push(block.map.shifted(offset));
        sets.push(block.sets);
    }
    let balance_rows = add_balance(&mut lp, "meuc", instance, outputs);
    MeucModel {
        lp,
        maps,
        sets,
        balance_rows,
        integer_vars,
    }
}

/// System model built from the two-binary formulation.
#[derive(Debug, Clone)]
pub struct TwoBinSystem {
    pub lp: LinearProgram,
    pub maps: Vec<VariableMap>,
    pub balance_rows: Vec<usize>,
    pub integer_vars: Vec<usize>,
}

impl TwoBinSystem {
    /// A copy of the LP with every `u` and `v` fixed to `schedule`.
    pub fn fix_commitment(&self, schedule: &SystemSchedule) -> Result<LinearProgram> {
        if schedule.units.len() != self.maps.len() {
            return Err(Error::InvalidInput(format!(
                "schedule has {} units, model has {}",
                schedule.units.len(),
                self.maps.len()
            )));
        }
        let mut lp = self.lp.clone();
        for (unit, map) in schedule.units.iter().zip(&self.maps) {
            for (s, (&u, &v)) in unit.u.iter().zip(&unit.v).enumerate() {
                for (var, on) in [(Var::U(s + 1), u), (Var::V(s + 1), v)] {
                    let c = map
                        .col(var)
                        .ok_or_else(|| Error::InvalidInput(format!("schedule of {} is too long", unit.id)))?;
                    let val = if on { 1.0 } else { 0.0 };
                    lp.lower[c] = val;
                    lp.upper[c] = val;
                }
            }
        }
        Ok(lp)
    }

    /// Reads schedules from an integral solution of this model.
    pub fn schedules(&self, instance: &SystemInstance, primal: &[f64]) -> Result<SystemSchedule> {
        let mut units = Vec::new();
        for (gen, map) in instance.generators.iter().zip(&self.maps) {
            let horizon = gen.horizon();
            let mut u = Vec::with_capacity(horizon);
            let mut x = Vec::with_capacity(horizon);
            for t in 1..=horizon {
                let c = map.col(Var::U(t)).expect("u column");
                let val = primal[c];
                if val.abs().min((val - 1.0).abs()) > BINARY_TOL {
                    return Err(Error::FractionalSolution {
                        variable: format!("{}:u:t={t}", gen.id),
                        value: val,
                    });
                }
                let on = val > 0.5;
                u.push(on);
                x.push(if on { primal[map.col(Var::X(t)).expect("x column")] } else { 0.0 });
            }
            units.push(UnitSchedule::from_commitment(gen, u, x));
        }
        Ok(SystemSchedule { units })
    }

    pub fn balance_duals(&self, sol: &LpSolution) -> PriceVector {
        PriceVector(self.balance_rows.iter().map(|&r| sol.duals[r]).collect())
    }
}

pub fn assemble_2bin(instance: &SystemInstance) -> TwoBinSystem {
    let mut lp = LinearProgram::new();
    let mut maps = Vec::new();
    let mut integer_vars = Vec::new();
    let mut outputs = vec![Vec::new(); instance.horizon];
    for gen in &instance.generators {
        let block = twobin_block(gen, None);
        let offset = lp.append(&block.lp);
        integer_vars.extend(block.integer_vars.iter().map(|c| c + offset));
        for (s, cols) in outputs.iter_mut().enumerate() {
            if let Some(c) = block.map.col(Var::X(s + 1)) {
                cols.push((c + offset, 1.0));
            }
        }
        maps.push(block.map.shifted(offset));
    }
    let balance_rows = add_balance(&mut lp, "2bin", instance, outputs);
    TwoBinSystem {
        lp,
        maps,
        balance_rows,
        integer_vars,
    }
}

fn add_balance(
    lp: &mut LinearProgram,
    kind: &str,
    instance: &SystemInstance,
    outputs: Vec<Vec<(usize, f64)>>,
) -> Vec<usize> {
    outputs
        .into_iter()
        .enumerate()
        .map(|(s, cols)| {
            lp.add_row(balance_label(kind, s + 1), cols, RowSense::Eq, instance.demand[s]);
            lp.n_rows() - 1
        })
        .collect()
}
