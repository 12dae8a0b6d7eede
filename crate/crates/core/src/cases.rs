//! Small reference instances used by tests, the CLI and the C API.

use crate::model::{CostPiece, DurationCost, GeneratorSpec, InitialState, PeriodCost, SystemInstance};

/// Two generators over three periods with demand 40/80/60. G1 is a cheap
/// unconstrained unit capped at 40 MW; G2 carries min-up/min-down of two
/// periods, a 100 start-up cost and tight ramping.
pub fn section5() -> SystemInstance {
    let g1 = GeneratorSpec {
        id: "G1".into(),
        min_up: 1,
        min_down: 1,
        c_min: 0.0,
        c_max: 40.0,
        ramp: 40.0,
        start_ramp: 40.0,
        startup_cost: DurationCost::free(),
        shutdown_cost: DurationCost::free(),
        cost: [4.0, 5.0, 6.0]
            .iter()
            .map(|&a| PeriodCost::new(vec![CostPiece::new(a, 0.0)]))
            .collect(),
        initial: InitialState::OnFor(1),
    };
    let g2 = GeneratorSpec {
        id: "G2".into(),
        min_up: 2,
        min_down: 2,
        c_min: 20.0,
        c_max: 100.0,
        ramp: 5.0,
        start_ramp: 55.0,
        startup_cost: DurationCost::flat(100.0),
        shutdown_cost: DurationCost::free(),
        cost: vec![PeriodCost::new(vec![CostPiece::new(4.0, 20.0), CostPiece::new(5.0, -40.0)]); 3],
        initial: InitialState::OnFor(2),
    };
    SystemInstance {
        horizon: 3,
        demand: vec![40.0, 80.0, 60.0],
        generators: vec![g1, g2],
    }
}
