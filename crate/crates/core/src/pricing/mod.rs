//! Price computation and uplift evaluation.
//!
//! TLMP: balance duals of the two-binary dispatch LP with the commitment fixed
//! at the system optimum. Convex hull prices (CHP): balance duals of the
//! extended-formulation system LP. Uplift per generator is its best
//! self-scheduled profit at the prices minus its profit under the ISO schedule.
//!
//! Both price vectors are duals of the final simplex basis. When the LP is
//! dual degenerate other optimal price vectors exist; the total CHP uplift is
//! basis independent (it equals the duality gap) while TLMP uplift is not.

mod report;

use std::fmt;
use std::str::FromStr;

use log::info;

use crate::dp::profit_max;
use crate::error::{Error, Result};
use crate::formulations::{assemble_2bin, assemble_meuc};
use crate::lp::{solve_lp, LpStatus};
use crate::mip::{solve_mip_with, MipOptions, MipProblem, MipStatus};
use crate::model::{PriceVector, SystemInstance, SystemSchedule};

pub use report::{fmt_num, render_csv, render_pretty};
pub(crate) use report::table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Tlmp,
    Chp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Tlmp => "TLMP",
            Method::Chp => "CHP",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tlmp" => Ok(Method::Tlmp),
            "chp" => Ok(Method::Chp),
            other => Err(Error::InvalidInput(format!("unknown pricing method {other:?}"))),
        }
    }
}

/// Uplift of one generator.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorUplift {
    pub id: String,
    /// Best self-scheduled profit at the prices.
    pub v_j: f64,
    /// Profit of the ISO schedule at the prices.
    pub iso_profit: f64,
    pub uplift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PricingReport {
    pub method: Method,
    pub prices: PriceVector,
    /// System MIP optimum.
    pub z_qip: f64,
    /// Objective of the LP the prices come from.
    pub relaxation_objective: f64,
    pub per_gen: Vec<GeneratorUplift>,
    pub total_uplift: f64,
    /// `(U_TLMP - U_CHP) / U_TLMP`, set by [`compare`]; zero when U_TLMP is zero.
    pub gap_tm: Option<f64>,
}

/// The system MIP optimum: the ISO schedule every uplift is measured against.
#[derive(Debug, Clone)]
pub struct IsoSolution {
    pub schedule: SystemSchedule,
    pub z_qip: f64,
    pub status: MipStatus,
    pub node_count: usize,
}

/// Solves the system MIP in the extended formulation and maps the result
/// back to commitment schedules.
pub fn solve_system(instance: &SystemInstance, opts: &MipOptions) -> Result<IsoSolution> {
    let model = assemble_meuc(instance);
    let problem = MipProblem::new(model.lp.clone(), model.integer_vars.clone())?;
    let sol = solve_mip_with(&problem, opts)?;
    let schedule = model.schedules(instance, &sol.primal)?;
    info!("system MIP: Z = {} after {} nodes", sol.objective, sol.node_count);
    Ok(IsoSolution {
        schedule,
        z_qip: sol.objective,
        status: sol.status,
        node_count: sol.node_count,
    })
}

/// TLMP with a freshly solved ISO schedule.
pub fn price_tlmp(instance: &SystemInstance) -> Result<(PriceVector, SystemSchedule)> {
    let iso = solve_system(instance, &MipOptions::default())?;
    let (pi, _) = tlmp_for(instance, &iso.schedule)?;
    Ok((pi, iso.schedule))
}

/// Balance duals of the two-binary LP with `u`, `v` fixed to `schedule`,
/// and that LP's objective.
pub fn tlmp_for(instance: &SystemInstance, schedule: &SystemSchedule) -> Result<(PriceVector, f64)> {
    let sys = assemble_2bin(instance);
    let lp = sys.fix_commitment(schedule)?;
    let sol = solve_lp(&lp)?;
    check_status(sol.status, "fixed-commitment dispatch")?;
    Ok((sys.balance_duals(&sol), sol.objective))
}

/// Convex hull prices and the extended-formulation LP objective `Z*_QP`.
pub fn price_chp(instance: &SystemInstance) -> Result<(PriceVector, f64)> {
    let model = assemble_meuc(instance);
    let sol = solve_lp(&model.lp)?;
    check_status(sol.status, "extended-formulation relaxation")?;
    Ok((model.balance_duals(&sol), sol.objective))
}

/// Balance duals and objective of the two-binary LP relaxation.
pub fn price_2bin_relaxation(instance: &SystemInstance) -> Result<(PriceVector, f64)> {
    let sys = assemble_2bin(instance);
    let sol = solve_lp(&sys.lp)?;
    check_status(sol.status, "two-binary relaxation")?;
    Ok((sys.balance_duals(&sol), sol.objective))
}

fn check_status(status: LpStatus, what: &str) -> Result<()> {
    match status {
        LpStatus::Optimal => Ok(()),
        LpStatus::Infeasible => Err(Error::Infeasible(format!("{what} LP is infeasible"))),
        LpStatus::Unbounded => Err(Error::Unbounded(format!("{what} LP is unbounded"))),
    }
}

/// Per-generator uplift of `iso` at prices `pi`.
pub fn uplift(instance: &SystemInstance, pi: &PriceVector, iso: &SystemSchedule) -> Result<Vec<GeneratorUplift>> {
    if pi.len() != instance.horizon {
        return Err(Error::InvalidInput(format!(
            "price vector has {} entries for a {}-period horizon",
            pi.len(),
            instance.horizon
        )));
    }
    instance
        .generators
        .iter()
        .map(|gen| {
            let unit = iso
                .unit(&gen.id)
                .ok_or_else(|| Error::InvalidInput(format!("ISO schedule has no unit {}", gen.id)))?;
            let (v_j, _) = profit_max(gen, pi)?;
            let iso_profit = unit.profit(pi);
            Ok(GeneratorUplift {
                id: gen.id.clone(),
                v_j,
                iso_profit,
                uplift: v_j - iso_profit,
            })
        })
        .collect()
}

fn report(
    method: Method,
    prices: PriceVector,
    z_qip: f64,
    relaxation_objective: f64,
    per_gen: Vec<GeneratorUplift>,
) -> PricingReport {
    let total_uplift = per_gen.iter().map(|g| g.uplift).sum();
    PricingReport {
        method,
        prices,
        z_qip,
        relaxation_objective,
        per_gen,
        total_uplift,
        gap_tm: None,
    }
}

/// One method's report against a precomputed ISO solution.
pub fn price_with(instance: &SystemInstance, method: Method, iso: &IsoSolution) -> Result<PricingReport> {
    let (prices, relax) = match method {
        Method::Tlmp => tlmp_for(instance, &iso.schedule)?,
        Method::Chp => price_chp(instance)?,
    };
    let per_gen = uplift(instance, &prices, &iso.schedule)?;
    Ok(report(method, prices, iso.z_qip, relax, per_gen))
}

/// `(U_TLMP - U_CHP) / U_TLMP`, or zero when there is no TLMP uplift.
pub fn gap_tm(u_tlmp: f64, u_chp: f64) -> f64 {
    if u_tlmp.abs() <= 1e-9 {
        0.0
    } else {
        (u_tlmp - u_chp) / u_tlmp
    }
}

/// TLMP and CHP reports sharing one ISO schedule.
pub fn compare(instance: &SystemInstance) -> Result<Vec<PricingReport>> {
    compare_with(instance, &MipOptions::default())
}

pub fn compare_with(instance: &SystemInstance, opts: &MipOptions) -> Result<Vec<PricingReport>> {
    compare_iso(instance, &solve_system(instance, opts)?)
}

/// Both reports against an already solved ISO schedule.
pub fn compare_iso(instance: &SystemInstance, iso: &IsoSolution) -> Result<Vec<PricingReport>> {
    let mut reports = vec![
        price_with(instance, Method::Tlmp, iso)?,
        price_with(instance, Method::Chp, iso)?,
    ];
    let gap = gap_tm(reports[0].total_uplift, reports[1].total_uplift);
    for r in &mut reports {
        r.gap_tm = Some(gap);
    }
    Ok(reports)
}

/// Lagrangian dual value `pi.d - sum_j v_j(pi)` of the system problem.
pub fn lagrangian_value(instance: &SystemInstance, pi: &PriceVector) -> Result<f64> {
    let mut value: f64 = pi.as_slice().iter().zip(&instance.demand).map(|(p, d)| p * d).sum();
    for gen in &instance.generators {
        value -= profit_max(gen, pi)?.0;
    }
    Ok(value)
}

#[cfg(test)]
mod tests;
