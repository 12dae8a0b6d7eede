//! Command-line front end: `validate`, `solve`, `price` and `compare`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dp::run_dp;
use crate::error::{Error, Result};
use crate::formulations::{assemble_2bin, assemble_meuc};
use crate::fuzz::{records_to_csv, run_batch};
use crate::lp::dump_lp;
use crate::mip::{MipOptions, MipStatus, DEFAULT_GAP_TOL, DEFAULT_NODE_LIMIT};
use crate::model::{load_instance, parse_instance, validate, LoadOptions, SystemInstance};
use crate::pricing::{
    compare_iso, fmt_num, price_with, render_csv, render_pretty, solve_system, table, IsoSolution, Method, PricingReport,
};

#[derive(Debug, Parser)]
#[command(name = "uc-chp", version, about = "Unit commitment pricing: TLMP and convex hull prices with uplift")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an instance file and list every diagnostic.
    Validate(InstanceArgs),
    /// Solve the system commitment problem and print the schedule.
    Solve(SolveArgs),
    /// Compute prices and uplifts with one method.
    Price(PriceArgs),
    /// Run both methods against a shared ISO schedule, or a fuzz batch.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InstanceArgs {
    /// Instance file (JSON).
    #[arg(long, value_name = "PATH")]
    pub instance: PathBuf,
    /// Tangent pieces for quadratic costs (overrides the file).
    #[arg(long, value_name = "N")]
    pub pieces: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// CSV is the stable machine format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct MipArgs {
    /// Absolute optimality gap for branch and bound.
    #[arg(long, value_name = "X", default_value_t = DEFAULT_GAP_TOL)]
    pub gap_tol: f64,
    /// Branch-and-bound node budget.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
    /// Write the LP behind the result in MPS format.
    #[arg(long, value_name = "PATH")]
    pub dump_lp: Option<PathBuf>,
}

impl MipArgs {
    fn options(&self) -> Result<MipOptions> {
        if self.gap_tol.is_nan() || self.gap_tol < 0.0 || self.node_limit == 0 {
            return Err(Error::InvalidInput("--gap-tol must be >= 0 and --node-limit >= 1".into()));
        }
        Ok(MipOptions {
            node_limit: self.node_limit,
            gap_tol: self.gap_tol,
            ..MipOptions::default()
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InstanceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub mip: MipArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tlmp,
    Chp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Tlmp => Method::Tlmp,
            MethodArg::Chp => Method::Chp,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PriceArgs {
    #[command(flatten)]
    pub input: InstanceArgs,
    /// Pricing method.
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub mip: MipArgs,
    /// Write the dynamic-programming tables used for each uplift.
    #[arg(long, value_name = "PATH")]
    pub trace_dp: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Instance file (JSON); required unless --fuzz is given.
    #[arg(long, value_name = "PATH", required_unless_present = "fuzz")]
    pub instance: Option<PathBuf>,
    /// Tangent pieces for quadratic costs (overrides the file).
    #[arg(long, value_name = "N")]
    pub pieces: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub mip: MipArgs,
    /// Write the dynamic-programming tables used for each uplift.
    #[arg(long, value_name = "PATH")]
    pub trace_dp: Option<PathBuf>,
    /// Check invariants on N random systems instead of reading an instance.
    #[arg(long, value_name = "N", conflicts_with = "instance")]
    pub fuzz: Option<usize>,
    /// Seed for --fuzz.
    #[arg(long, value_name = "S", default_value_t = 0, requires = "fuzz")]
    pub seed: u64,
}

/// Exit status for an error: 2 for usage and I/O problems, 1 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } | Error::Parse { .. } | Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

fn read_instance(path: &Path, pieces: Option<usize>) -> Result<SystemInstance> {
    let opts = LoadOptions { tangent_pieces: pieces };
    load_instance(path, &opts)
}

fn emit(output: &OutputArgs, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

/// Runs one command, writing its main output to `--out` or `stdout`.
/// Returns the process exit status.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Validate(args) => cmd_validate(args, stdout),
        Command::Solve(args) => cmd_solve(args, stdout),
        Command::Price(args) => cmd_price(args, stdout),
        Command::Compare(args) => cmd_compare(args, stdout),
    }
}

fn cmd_validate(args: &InstanceArgs, stdout: &mut dyn Write) -> Result<u8> {
    let text = fs::read_to_string(&args.instance).map_err(|e| Error::io(&args.instance, e))?;
    let instance = parse_instance(&text, &LoadOptions { tangent_pieces: args.pieces })?;
    let diags = validate(&instance);
    let mut out = String::new();
    for d in &diags {
        let _ = writeln!(out, "{d}");
    }
    let errors = diags.iter().filter(|d| d.is_error()).count();
    let _ = writeln!(
        out,
        "{}: {} generator(s), {} period(s), {errors} error(s), {} warning(s)",
        args.instance.display(),
        instance.generators.len(),
        instance.horizon,
        diags.len() - errors
    );
    stdout.write_all(out.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
    Ok(u8::from(errors > 0))
}

fn schedule_output(iso: &IsoSolution, format: Format) -> String {
    let status = match iso.status {
        MipStatus::Optimal => "optimal",
        MipStatus::NodeLimit => "node_limit",
    };
    let rows: Vec<Vec<String>> = iso
        .schedule
        .units
        .iter()
        .flat_map(|u| {
            (0..u.u.len()).map(move |s| {
                vec![
                    u.id.clone(),
                    (s + 1).to_string(),
                    u8::from(u.u[s]).to_string(),
                    u8::from(u.v[s]).to_string(),
                    fmt_num(u.x[s]),
                ]
            })
        })
        .collect();
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "z_qip,status,nodes\n{},{status},{}\n", fmt_num(iso.z_qip), iso.node_count);
            out.push_str("generator,period,u,v,x\n");
            for r in &rows {
                let _ = writeln!(out, "{}", r.join(","));
            }
        }
        Format::Pretty => {
            let _ = writeln!(out, "Z = {} ({status}, {} nodes)\n", fmt_num(iso.z_qip), iso.node_count);
            table(&mut out, &["generator", "period", "u", "v", "x"], &rows);
        }
    }
    out
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<u8> {
    let instance = read_instance(&args.input.instance, args.input.pieces)?;
    if let Some(path) = &args.mip.dump_lp {
        dump_lp(&assemble_meuc(&instance).lp, path)?;
    }
    let iso = solve_system(&instance, &args.mip.options()?)?;
    emit(&args.output, &schedule_output(&iso, args.output.format), stdout)?;
    Ok(0)
}

fn render(reports: &[PricingReport], format: Format) -> String {
    match format {
        Format::Csv => render_csv(reports),
        Format::Pretty => render_pretty(reports),
    }
}

/// Writes the LP each method's prices come from.
fn dump_method_lp(instance: &SystemInstance, method: Method, iso: &IsoSolution, path: &Path) -> Result<()> {
    match method {
        Method::Tlmp => dump_lp(&assemble_2bin(instance).fix_commitment(&iso.schedule)?, path),
        Method::Chp => dump_lp(&assemble_meuc(instance).lp, path),
    }
}

fn write_traces(instance: &SystemInstance, reports: &[PricingReport], path: &Path) -> Result<()> {
    let mut out = String::new();
    for r in reports {
        for gen in &instance.generators {
            let (_, tables) = run_dp(gen, &r.prices)?;
            let _ = writeln!(out, "# method={} generator={}", r.method, gen.id);
            out.push_str(&tables.to_csv());
            out.push('\n');
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn cmd_price(args: &PriceArgs, stdout: &mut dyn Write) -> Result<u8> {
    let instance = read_instance(&args.input.instance, args.input.pieces)?;
    let method = Method::from(args.method);
    let iso = solve_system(&instance, &args.mip.options()?)?;
    if let Some(path) = &args.mip.dump_lp {
        dump_method_lp(&instance, method, &iso, path)?;
    }
    let report = price_with(&instance, method, &iso)?;
    if let Some(path) = &args.trace_dp {
        write_traces(&instance, std::slice::from_ref(&report), path)?;
    }
    emit(&args.output, &render(&[report], args.output.format), stdout)?;
    Ok(0)
}

fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<u8> {
    if let Some(n) = args.fuzz {
        let records = run_batch(n, args.seed)?;
        let failed = records.iter().filter(|r| !r.passed).count();
        emit(&args.output, &records_to_csv(&records), stdout)?;
        if failed > 0 {
            log::error!("{failed} invariant check(s) failed");
        }
        return Ok(u8::from(failed > 0));
    }
    let path = args.instance.as_ref().expect("clap requires --instance without --fuzz");
    let instance = read_instance(path, args.pieces)?;
    let iso = solve_system(&instance, &args.mip.options()?)?;
    if let Some(path) = &args.mip.dump_lp {
        dump_method_lp(&instance, Method::Chp, &iso, path)?;
    }
    let reports = compare_iso(&instance, &iso)?;
    if let Some(path) = &args.trace_dp {
        write_traces(&instance, &reports, path)?;
    }
    emit(&args.output, &render(&reports, args.output.format), stdout)?;
    Ok(0)
}

