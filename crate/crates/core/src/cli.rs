//! Batch command-line frontend: one subcommand per capability, one JSON
//! report on stdout.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{rat, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::golden::{golden, Suite};
use crate::grading::{
    cayley_sylvester, component, criterion, hermite_check, solve_image, HermiteConfig, Verdict,
};
use crate::models::{
    build_cm, build_cm_rank2, build_quiver, check_certificate, check_flow_shear,
    check_model_relations, check_moment_invariance, check_sl2_mod_ideal, default_lambda,
    parse_points, CheckMode, ModelInstance,
};
use crate::parse::parse_rational;
use crate::sl2::{
    basic_pair, basic_pair_named, beta_decompose, check_relations, direct_sum, gamma_reduce,
    isotypic_decompose, useful2_witness, CertificateKind, FundamentalPair, RelationCheckConfig,
    Which,
};

#[derive(Debug, Parser)]
#[command(
    name = "sl2lnd",
    version,
    about = "Exact checks for SL2 fundamental pairs of locally nilpotent derivations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the sl2 relations of a pair
    PairCheck(TargetArgs),
    /// Kernel basis of D or U on a graded slice, or solve which^power g = poly
    Kernel(KernelArgs),
    /// Search for A1 / A2 certificates up to a degree bound
    Criterion(CriterionArgs),
    /// Isotypic decomposition of a polynomial
    Decompose(PolyArgs),
    /// Free-module reductions of a polynomial in k[V_d]
    Reduce(PolyArgs),
    /// Cayley-Sylvester kernel dimension
    Count(CountArgs),
    /// Hermite reciprocity of kernel dimensions
    Hermite(HermiteArgs),
    /// Witness g = U f for f in A1 or A2
    Witness(PolyArgs),
    /// All checks on a matrix model
    ModelCheck(ModelCheckArgs),
    /// Exponential flows of D and U
    Flow(FlowArgs),
    /// Fixed identities
    Golden(GoldenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelChoice {
    Vd,
    Sum,
    Cm,
    CmRank2,
    Quiver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum WhichArg {
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "U", alias = "u")]
    U,
}

impl From<WhichArg> for Which {
    fn from(w: WhichArg) -> Self {
        match w {
            WhichArg::D => Which::D,
            WhichArg::U => Which::U,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Groebner,
    Points,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    D3,
    V3v3,
    V4v4,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TargetArgs {
    #[arg(long, value_enum, default_value = "vd")]
    pub model: ModelChoice,
    /// Dimension parameter; comma-separated for --model sum
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    /// Comma-separated rationals
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub weight: i64,
    #[arg(long, value_enum, default_value = "D")]
    pub which: WhichArg,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CriterionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PolyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub weight: i64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HermiteArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub weight: i64,
    /// Largest degree j compared
    #[arg(long, default_value_t = 8)]
    pub bound: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub target: TargetArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub t: String,
    #[arg(long, value_enum, default_value = "D")]
    pub which: WhichArg,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GoldenArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotFoundBelowBound,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::NotFoundBelowBound => 3,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    #[serde(rename = "elapsedMs")]
    pub elapsed_ms: u64,
}

enum Target {
    Pair(FundamentalPair),
    Model(Box<ModelInstance>),
}

impl Target {
    fn pair(&self) -> &FundamentalPair {
        match self {
            Target::Pair(p) => p,
            Target::Model(m) => &m.pair,
        }
    }
}

const SUM_PREFIXES: [&str; 8] = ["x", "y", "z", "u", "p", "q", "r", "s"];

fn rationals(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn dims(args: &TargetArgs) -> Result<Vec<usize>> {
    let text = args
        .d
        .as_deref()
        .ok_or_else(|| Error::Precondition("--d is required for this model".into()))?;
    text.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| {
                Error::Precondition(format!("--d: '{t}' is not a nonnegative integer"))
            })
        })
        .collect()
}

fn single_d(args: &TargetArgs) -> Result<usize> {
    match dims(args)?.as_slice() {
        [d] => Ok(*d),
        _ => Err(Error::Precondition("--d takes a single value here".into())),
    }
}

fn build_target(args: &TargetArgs) -> Result<Target> {
    let n = args.n.unwrap_or(1);
    Ok(match args.model {
        ModelChoice::Vd => Target::Pair(basic_pair(single_d(args)?)?),
        ModelChoice::Sum => {
            let ds = dims(args)?;
            if ds.len() > SUM_PREFIXES.len() {
                return Err(Error::Precondition(format!(
                    "at most {} summands",
                    SUM_PREFIXES.len()
                )));
            }
            let pairs: Vec<FundamentalPair> = ds
                .iter()
                .zip(SUM_PREFIXES)
                .map(|(&d, p)| basic_pair_named(d, p))
                .collect::<Result<_>>()?;
            Target::Pair(direct_sum(&pairs)?)
        }
        ModelChoice::Cm => Target::Model(Box::new(build_cm(n)?)),
        ModelChoice::CmRank2 => {
            let tau = match &args.tau {
                Some(t) => parse_rational(t)?,
                None => rat(1),
            };
            Target::Model(Box::new(build_cm_rank2(n, tau)?))
        }
        ModelChoice::Quiver => {
            let m = args.m.unwrap_or(2);
            let lambda = match &args.lambda {
                Some(l) => rationals(l)?,
                None => default_lambda(m),
            };
            Target::Model(Box::new(build_quiver(m, n, &lambda)?))
        }
    })
}

fn texts(polys: &[Polynomial]) -> Vec<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

fn pair_check(args: &TargetArgs) -> Result<(Value, Status)> {
    let target = build_target(args)?;
    let report = check_relations(target.pair(), &RelationCheckConfig::default())?;
    let status = Status::from_bool(report.passed);
    Ok((serde_json::to_value(report)?, status))
}

fn kernel(args: &KernelArgs) -> Result<(Value, Status)> {
    let target = build_target(&args.target)?;
    let pair = target.pair();
    let which = Which::from(args.which);
    if let Some(text) = &args.poly {
        let h = pair.parse(text)?;
        let n = args.power.unwrap_or(1);
        return Ok(match solve_image(pair, which, n, &h)? {
            Some(g) => (
                json!({"solvable": true, "power": n, "preimage": g.to_string()}),
                Status::Pass,
            ),
            None => (
                json!({"solvable": false, "power": n}),
                Status::NotFoundBelowBound,
            ),
        });
    }
    let comp = component(pair, args.degree, args.weight)?;
    let basis = comp.kernel(which)?;
    Ok((
        json!({
            "sliceDimension": comp.len(),
            "dimension": basis.len(),
            "basis": texts(&basis),
        }),
        Status::Pass,
    ))
}

fn criterion_cmd(args: &CriterionArgs) -> Result<(Value, Status)> {
    let target = build_target(&args.target)?;
    let bound = match (args.bound, args.target.model) {
        (Some(b), _) => b,
        (None, ModelChoice::Vd) => single_d(&args.target)? as u32 + 2,
        (None, _) => 4,
    };
    let verdict = criterion(target.pair(), bound)?;
    let found = matches!(verdict.pair_compatible, Verdict::Yes { .. })
        || matches!(verdict.triple_compatible, Verdict::Yes { .. });
    let status = if found {
        Status::Pass
    } else {
        Status::NotFoundBelowBound
    };
    Ok((serde_json::to_value(verdict)?, status))
}

fn decompose(args: &PolyArgs) -> Result<(Value, Status)> {
    let target = build_target(&args.target)?;
    let pair = target.pair();
    let f = pair.parse(&args.poly)?;
    let dec = isotypic_decompose(pair, &f)?;
    let round_trip = dec.sum(pair) == f;
    let parts: BTreeMap<String, String> = dec
        .parts
        .iter()
        .map(|(n, p)| (n.to_string(), p.to_string()))
        .collect();
    Ok((
        json!({"parts": parts, "roundTrip": round_trip}),
        Status::from_bool(round_trip),
    ))
}

fn reduce(args: &PolyArgs) -> Result<(Value, Status)> {
    let d = single_d(&args.target)?;
    if args.target.model != ModelChoice::Vd {
        return Err(Error::Precondition("reduce works on --model vd".into()));
    }
    let pair = basic_pair(d)?;
    let f = pair.parse(&args.poly)?;
    let beta = beta_decompose(&f)?;
    let gamma = gamma_reduce(d, &f)?;
    let beta_ok = beta.reassemble()? == f;
    let gamma_ok = gamma.reassemble()? == f;
    Ok((
        json!({
            "beta": beta,
            "betaRoundTrip": beta_ok,
            "gamma": gamma,
            "gammaRoundTrip": gamma_ok,
        }),
        Status::from_bool(beta_ok && gamma_ok),
    ))
}

fn count(args: &CountArgs) -> Result<(Value, Status)> {
    let formula = cayley_sylvester(args.d, args.degree, args.weight);
    let mut result = json!({"dimension": formula.to_string()});
    let mut ok = true;
    if args.d >= 1 {
        let pair = basic_pair(args.d)?;
        let comp = component(&pair, args.degree as u32, args.weight)?;
        if comp.len() <= 2000 {
            let nullspace = comp.kernel_dimension(Which::D)?;
            ok = nullspace as u128 == formula;
            result["nullspaceDimension"] = json!(nullspace);
        }
    }
    Ok((result, Status::from_bool(ok)))
}

fn hermite(args: &HermiteArgs) -> Result<(Value, Status)> {
    let report = hermite_check(
        args.d,
        args.weight,
        &HermiteConfig {
            cap: args.bound,
            ..HermiteConfig::default()
        },
    )?;
    let status = Status::from_bool(report.passed);
    let mut value = serde_json::to_value(&report)?;
    // u128 counts as decimal strings
    if let Some(rows) = value.get_mut("rows").and_then(Value::as_array_mut) {
        for (row, r) in rows.iter_mut().zip(&report.rows) {
            row["lhs"] = json!(r.lhs.to_string());
            row["rhs"] = json!(r.rhs.to_string());
        }
    }
    Ok((value, status))
}

fn witness(args: &PolyArgs) -> Result<(Value, Status)> {
    let target = build_target(&args.target)?;
    let pair = target.pair();
    let f = pair.parse(&args.poly)?;
    let w = match pair.weights() {
        Some(_) => pair.weight_of(&f)?,
        None => None,
    };
    let kind = w.and_then(CertificateKind::from_weight).ok_or_else(|| {
        Error::Precondition("witness needs a weight-1 or weight-2 kernel element".into())
    })?;
    let report = useful2_witness(pair, &f, kind)?;
    Ok((serde_json::to_value(report)?, Status::Pass))
}

fn model_check(args: &ModelCheckArgs) -> Result<(Value, Status)> {
    let Target::Model(model) = build_target(&args.target)? else {
        return Err(Error::Precondition(
            "model-check needs --model cm, cm-rank2 or quiver".into(),
        ));
    };
    let ambient = check_model_relations(&model)?;
    // sl2 relations hold only on the locus for cyclic quivers with m >= 3
    let ambient_required = model.params.m.is_none_or(|m| m <= 2);
    let invariance = check_moment_invariance(&model)?;
    let certificate = check_certificate(&model)?;
    let mut ok = (ambient.passed || !ambient_required) && invariance.passed && certificate.passed;
    let mut result = json!({
        "model": model.name,
        "params": model.params,
        "variables": model.vars().len(),
        "ambientRelations": ambient,
        "ambientRequired": ambient_required,
        "momentInvariance": invariance,
        "certificate": certificate,
    });
    if let Some(mode) = args.mode {
        let points = match &args.points {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Json(format!("{path}: {e}")))?;
                Some(parse_points(&serde_json::from_str(&text)?, model.vars())?)
            }
            None => None,
        };
        let mode = match mode {
            ModeArg::Groebner => CheckMode::Groebner,
            ModeArg::Points => CheckMode::Points,
        };
        let quotient = check_sl2_mod_ideal(&model, mode, points.as_deref())?;
        ok &= quotient.passed;
        result["quotient"] = serde_json::to_value(quotient)?;
    }
    Ok((result, Status::from_bool(ok)))
}

fn flow(args: &FlowArgs) -> Result<(Value, Status)> {
    let t = parse_rational(&args.t)?;
    let target = build_target(&args.target)?;
    match (&target, &args.poly) {
        (Target::Model(model), None) => {
            let report = check_flow_shear(model, &t)?;
            let status = Status::from_bool(report.passed);
            Ok((serde_json::to_value(report)?, status))
        }
        (_, Some(text)) => {
            let pair = target.pair();
            let der = pair.get(args.which.into());
            let f = pair.parse(text)?;
            let image = der.exp_apply(&t, &f, der.default_cap(&f))?;
            Ok((
                json!({"t": t.to_string(), "image": image.to_string()}),
                Status::Pass,
            ))
        }
        (Target::Pair(_), None) => Err(Error::Precondition(
            "flow on a basic pair needs --poly".into(),
        )),
    }
}

fn golden_cmd(args: &GoldenArgs) -> Result<(Value, Status)> {
    let suite = match args.suite {
        SuiteArg::D3 => Suite::D3,
        SuiteArg::V3v3 => Suite::V3v3,
        SuiteArg::V4v4 => Suite::V4v4,
    };
    let report = golden(suite)?;
    let status = Status::from_bool(report.passed);
    Ok((serde_json::to_value(report)?, status))
}

fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } | Error::GuardExceeded(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Runs a parsed command. Errors become a failing report with the message.
pub fn execute(cli: &Cli) -> (Report, i32) {
    let start = Instant::now();
    let (name, inputs, outcome) = match &cli.command {
        Command::PairCheck(a) => ("pair-check", serde_json::to_value(a), pair_check(a)),
        Command::Kernel(a) => ("kernel", serde_json::to_value(a), kernel(a)),
        Command::Criterion(a) => ("criterion", serde_json::to_value(a), criterion_cmd(a)),
        Command::Decompose(a) => ("decompose", serde_json::to_value(a), decompose(a)),
        Command::Reduce(a) => ("reduce", serde_json::to_value(a), reduce(a)),
        Command::Count(a) => ("count", serde_json::to_value(a), count(a)),
        Command::Hermite(a) => ("hermite", serde_json::to_value(a), hermite(a)),
        Command::Witness(a) => ("witness", serde_json::to_value(a), witness(a)),
        Command::ModelCheck(a) => ("model-check", serde_json::to_value(a), model_check(a)),
        Command::Flow(a) => ("flow", serde_json::to_value(a), flow(a)),
        Command::Golden(a) => ("golden", serde_json::to_value(a), golden_cmd(a)),
    };
    let inputs = inputs.unwrap_or(Value::Null);
    let (result, status, code) = match outcome {
        Ok((result, status)) => (result, status, status.exit_code()),
        Err(e) => (
            json!({"error": e.to_string()}),
            Status::Fail,
            error_exit_code(&e),
        ),
    };
    let report = Report {
        command: name.to_string(),
        inputs,
        result,
        status,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    (report, code)
}

/// Parses `argv`, runs the command, prints the report; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = execute(&cli);
    match serde_json::to_string_pretty(&report) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("failed to serialize report: {e}");
            return 1;
        }
    }
    code
}
