//! JSON instance files.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::value::{MapAccessDeserializer, SeqAccessDeserializer};
use serde::de::{MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{
    validate, CostPiece, DurationCost, GeneratorSpec, InitialState, PeriodCost, SystemInstance,
};
use crate::error::{Error, Result};

/// Tangent pieces used for a quadratic cost when the file does not say.
pub const DEFAULT_TANGENT_PIECES: usize = 10;

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Overrides the `pieces` count of every quadratic cost in the file.
    pub tangent_pieces: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    #[serde(rename = "T")]
    horizon: usize,
    demand: Vec<f64>,
    generators: Vec<GeneratorRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorRecord {
    id: String,
    #[serde(rename = "L")]
    min_up: usize,
    ell: usize,
    c_min: f64,
    c_max: f64,
    ramp: f64,
    start_ramp: f64,
    startup_cost: Vec<f64>,
    shutdown_cost: Vec<f64>,
    initial: InitialRecord,
    cost: CostRecord,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum InitialRecord {
    OnFor(usize),
    OffFor(usize),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceRecord {
    a: f64,
    b: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticRecord {
    alpha: f64,
    beta: f64,
    c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pieces: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticWrapper {
    quadratic: QuadraticRecord,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
enum CostRecord {
    Pieces(Vec<Vec<PieceRecord>>),
    Quadratic(QuadraticWrapper),
}

impl<'de> Deserialize<'de> for CostRecord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CostVisitor;

        impl<'de> Visitor<'de> for CostVisitor {
            type Value = CostRecord;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of per-period piece lists or {\"quadratic\": {...}}")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, seq: A) -> std::result::Result<CostRecord, A::Error> {
                Vec::<Vec<PieceRecord>>::deserialize(SeqAccessDeserializer::new(seq)).map(CostRecord::Pieces)
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> std::result::Result<CostRecord, A::Error> {
                QuadraticWrapper::deserialize(MapAccessDeserializer::new(map)).map(CostRecord::Quadratic)
            }
        }

        deserializer.deserialize_any(CostVisitor)
    }
}

fn parse_error(err: serde_json::Error) -> Error {
    Error::Parse {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

/// Parses an instance document without validating it.
pub fn parse_instance(text: &str, opts: &LoadOptions) -> Result<SystemInstance> {
    let rec: InstanceRecord = serde_json::from_str(text).map_err(parse_error)?;
    let horizon = rec.horizon;
    let generators = rec
        .generators
        .into_iter()
        .map(|g| generator_from_record(g, horizon, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SystemInstance {
        horizon,
        demand: rec.demand,
        generators,
    })
}

fn generator_from_record(g: GeneratorRecord, horizon: usize, opts: &LoadOptions) -> Result<GeneratorSpec> {
    let cost = match g.cost {
        CostRecord::Pieces(periods) => periods
            .into_iter()
            .map(|ps| PeriodCost::new(ps.into_iter().map(|p| CostPiece::new(p.a, p.b)).collect()))
            .collect(),
        CostRecord::Quadratic(QuadraticWrapper { quadratic: q }) => {
            let n = opts.tangent_pieces.or(q.pieces).unwrap_or(DEFAULT_TANGENT_PIECES);
            if n == 0 {
                return Err(Error::InvalidInput(format!(
                    "generator {}: quadratic cost needs at least one piece",
                    g.id
                )));
            }
            let curve = PeriodCost::from_quadratic(q.alpha, q.beta, q.c, n, g.c_min, g.c_max);
            vec![curve; horizon]
        }
    };
    let initial = match g.initial {
        InitialRecord::OnFor(s) => InitialState::OnFor(s),
        InitialRecord::OffFor(s) => InitialState::OffFor(s),
    };
    Ok(GeneratorSpec {
        id: g.id,
        min_up: g.min_up,
        min_down: g.ell,
        c_min: g.c_min,
        c_max: g.c_max,
        ramp: g.ramp,
        start_ramp: g.start_ramp,
        startup_cost: DurationCost::new(g.startup_cost),
        shutdown_cost: DurationCost::new(g.shutdown_cost),
        cost,
        initial,
    })
}

/// Reads, validates and normalizes an instance file. Warnings are logged and
/// dominated cost pieces are dropped; any error-severity diagnostic fails the load.
pub fn load_instance(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<SystemInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_instance_from_str(&text, opts)
}

/// [`load_instance`] on an in-memory document.
pub fn load_instance_from_str(text: &str, opts: &LoadOptions) -> Result<SystemInstance> {
    let mut instance = parse_instance(text, opts)?;

    let diags = validate(&instance);
    if diags.iter().any(|d| d.is_error()) {
        return Err(Error::Validation(diags));
    }
    for d in &diags {
        log::warn!("{d}");
    }
    for g in &mut instance.generators {
        let (lo, hi) = (g.c_min, g.c_max);
        for pc in &mut g.cost {
            *pc = pc.without_dominated(lo, hi);
        }
    }
    Ok(instance)
}

/// Serializes an instance with explicit per-period cost pieces.
pub fn to_json(instance: &SystemInstance) -> String {
    let rec = InstanceRecord {
        horizon: instance.horizon,
        demand: instance.demand.clone(),
        generators: instance
            .generators
            .iter()
            .map(|g| GeneratorRecord {
                id: g.id.clone(),
                min_up: g.min_up,
                ell: g.min_down,
                c_min: g.c_min,
                c_max: g.c_max,
                ramp: g.ramp,
                start_ramp: g.start_ramp,
                startup_cost: g.startup_cost.values().to_vec(),
                shutdown_cost: g.shutdown_cost.values().to_vec(),
                initial: match g.initial {
                    InitialState::OnFor(s) => InitialRecord::OnFor(s),
                    InitialState::OffFor(s) => InitialRecord::OffFor(s),
                },
                cost: CostRecord::Pieces(
                    g.cost
                        .iter()
                        .map(|pc| {
                            pc.pieces()
                                .iter()
                                .map(|p| PieceRecord {
                                    a: p.slope,
                                    b: p.intercept,
                                })
                                .collect()
                        })
                        .collect(),
                ),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&rec).expect("instance records always serialize")
}

pub fn save_instance(instance: &SystemInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(instance) + "\n").map_err(|e| Error::io(path, e))
}
