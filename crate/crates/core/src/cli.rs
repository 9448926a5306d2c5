//! Command-line front end: `volume`, `dh`, `sweep` and `selftest`.
//!
//! Rationals are printed as `p/q` strings. Output depends only on the
//! arguments, never on the number of worker threads.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::dhfun::{ConePosition, DhError, DhProblem};
use crate::exact::{decimal12, format_rational, parse_rational, q, Q};
use crate::polyvol::{monte_carlo_volume, Fiber, PolyError};
use crate::reducedvol::{
    calibration, AssumptionReport, Method, ReducedVolError, ReducedVolume, DEFAULT_TERM_CAP,
};
use crate::rootsystem::{
    simple_to_su3_lm, su3_lm_to_simple, GroupType, RootSystem, RootSystemError, Series, Weight,
};
use crate::selftest::{self, SelfTestOptions};
use crate::su3::{self, SU3Weights, Su3Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "orbitvol",
    version,
    about = "Exact volumes of reduced products of coadjoint orbits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Volume of the reduced product of N orbits.
    Volume(VolumeArgs),
    /// Duistermaat-Heckman density of the positive-root representation.
    Dh(DhArgs),
    /// Volume over a grid of one or two varying weight coordinates.
    Sweep(SweepArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    SimpleRoot,
    Fundamental,
    Su3Lm,
}

impl Basis {
    fn as_str(self) -> &'static str {
        match self {
            Basis::SimpleRoot => "simple-root",
            Basis::Fundamental => "fundamental",
            Basis::Su3Lm => "su3-lm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Naive,
    Factored,
    Su3Jj,
    Su3St,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Factored => Method::Factored,
            MethodArg::Su3Jj => Method::Su3Jj,
            MethodArg::Su3St => Method::Su3St,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Root system, e.g. A2 or B3.
    #[arg(long)]
    group: String,
    /// Number of orbits.
    #[arg(long)]
    n: usize,
    /// Semicolon-separated vectors of comma-separated rationals, e.g. "2,1;2,1;2,1".
    #[arg(long, allow_hyphen_values = true)]
    weights: String,
    /// Coordinates of the weights.
    #[arg(long, value_enum)]
    basis: Basis,
    #[arg(long, value_enum, default_value = "factored")]
    method: MethodArg,
    /// Also report the calibrated volume where a constant is known.
    #[arg(long)]
    calibrated: bool,
    /// Refuse sums with more terms than this.
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    cap_terms: u64,
}

#[derive(Debug, Args)]
struct VolumeArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Coordinate K of weight J over a range, as J.K=START:STOP:STEP (1-based). At most two.
    #[arg(long = "vary", required = true, allow_hyphen_values = true)]
    vary: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct DhArgs {
    #[arg(long)]
    group: String,
    /// Number of copies of each positive root.
    #[arg(long, default_value_t = 1)]
    multiplicity: usize,
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    #[arg(long, value_enum)]
    basis: Basis,
    /// Also estimate the fiber volume by Monte Carlo with this many samples.
    #[arg(long, default_value_t = 0)]
    mc_samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = SelfTestOptions::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = selftest::MC_SAMPLES)]
    mc_samples: u64,
    #[arg(long, hide = true)]
    corrupt_weyl_sign: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidArgument(String),
    #[error("malformed grid: {0}")]
    Grid(String),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Volume(#[from] ReducedVolError),
    #[error(transparent)]
    Su3(#[from] Su3Error),
    #[error(transparent)]
    Dh(#[from] DhError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::InvalidArgument(_) => "invalid-argument",
            CliError::Grid(_) => "malformed-grid",
            CliError::RootSystem(RootSystemError::UnsupportedType(_)) => "unsupported-group",
            CliError::RootSystem(RootSystemError::DimensionMismatch { .. }) => "dimension-mismatch",
            CliError::Volume(ReducedVolError::TooFewOrbits(_))
            | CliError::Volume(ReducedVolError::WrongOrbitCount { .. }) => "orbit-count",
            CliError::Volume(ReducedVolError::Dimension(_)) => "dimension-mismatch",
            CliError::Volume(ReducedVolError::TermCapExceeded { .. }) => "term-cap-exceeded",
            CliError::Volume(ReducedVolError::Weyl(_)) => "weyl-group",
            CliError::Volume(ReducedVolError::Dh(_)) | CliError::Dh(_) | CliError::Poly(_) => {
                "computation"
            }
            CliError::Su3(Su3Error::DivisibilityViolation(_)) => "divisibility-violation",
            CliError::Su3(Su3Error::RegularityViolation { .. }) => "regularity-violation",
            CliError::Su3(Su3Error::NonIntegral { .. }) => "non-integral",
            CliError::Io(_) | CliError::Csv(_) => "io",
        }
    }
}

#[derive(Debug, Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Debug, Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

/// Parse `"a,b;c,d"` into vectors of rationals.
pub fn parse_vectors(input: &str) -> Result<Vec<Vec<Q>>, CliError> {
    let input = input.trim();
    if input.is_empty() {
        return Err(CliError::InvalidArgument("no weights given".to_string()));
    }
    input.split(';').map(parse_vector).collect()
}

pub fn parse_vector(input: &str) -> Result<Vec<Q>, CliError> {
    input
        .split(',')
        .map(|entry| {
            parse_rational(entry.trim())
                .map_err(|e| CliError::InvalidArgument(format!("bad entry {:?}: {e}", entry.trim())))
        })
        .collect()
}

fn load_root_system(group: &str) -> Result<RootSystem, CliError> {
    Ok(RootSystem::from_type(GroupType::from_str(group)?)?)
}

fn is_a2(rs: &RootSystem) -> bool {
    rs.series == Series::A && rs.rank == 2
}

/// Convert one vector from `basis` to simple-root coordinates.
fn to_simple(rs: &RootSystem, basis: Basis, v: &[Q]) -> Result<Weight, CliError> {
    let expected = if basis == Basis::Su3Lm { 2 } else { rs.rank };
    if v.len() != expected {
        return Err(RootSystemError::DimensionMismatch {
            expected,
            actual: v.len(),
        }
        .into());
    }
    Ok(match basis {
        Basis::SimpleRoot => Weight::new(v.to_vec()),
        Basis::Fundamental => rs.fundamental_to_simple(v)?,
        Basis::Su3Lm => su3_lm_to_simple(&v[0], &v[1]),
    })
}

fn weight_strings(w: &Weight) -> Vec<String> {
    w.coords.iter().map(format_rational).collect()
}

/// Validated volume request.
struct Job {
    rs: RootSystem,
    n: usize,
    basis: Basis,
    method: Method,
    calibrated: bool,
    vectors: Vec<Vec<Q>>,
    engine: ReducedVolume,
}

impl Job {
    fn new(args: &RunArgs) -> Result<Self, CliError> {
        let rs = load_root_system(&args.group)?;
        let vectors = parse_vectors(&args.weights)?;
        if vectors.len() != args.n {
            return Err(ReducedVolError::WrongOrbitCount {
                expected: args.n,
                actual: vectors.len(),
            }
            .into());
        }
        let method = Method::from(args.method);
        let su3_only = args.basis == Basis::Su3Lm || matches!(method, Method::Su3Jj | Method::Su3St);
        if su3_only && !(is_a2(&rs) && args.n == 3) {
            return Err(CliError::InvalidArgument(format!(
                "basis {} with method {} needs group A2 and n = 3",
                args.basis.as_str(),
                method
            )));
        }
        let engine = ReducedVolume::new(&rs, args.n)?.with_cap(args.cap_terms);
        let job = Job {
            rs,
            n: args.n,
            basis: args.basis,
            method,
            calibrated: args.calibrated,
            vectors,
            engine,
        };
        job.weights(&job.vectors)?;
        Ok(job)
    }

    fn weights(&self, vectors: &[Vec<Q>]) -> Result<Vec<Weight>, CliError> {
        vectors
            .iter()
            .map(|v| to_simple(&self.rs, self.basis, v))
            .collect()
    }

    fn group(&self) -> String {
        self.rs.group_type().to_string()
    }

    /// Constant taking this method's value to the geometric volume.
    fn calibration_constant(&self) -> Option<Q> {
        match self.method {
            Method::Su3St => Some(q(1)),
            _ => calibration(self.rs.group_type(), self.n).constant().cloned(),
        }
    }

    fn compute(&self, xis: &[Weight]) -> Result<Computed, CliError> {
        match self.method {
            Method::Su3Jj | Method::Su3St => {
                let w = su3_weights(xis);
                if self.method == Method::Su3Jj {
                    let v = su3::jj_volume(&w);
                    Ok(Computed {
                        value: v.value,
                        terms: 216,
                        warnings: v.warnings,
                    })
                } else {
                    let v = su3::st_volume(&w)?;
                    let mut warnings = Vec::new();
                    if v.boundary_terms > 0 {
                        warnings.push(format!(
                            "{} partitions lie on equality boundaries of the I/J classification",
                            v.boundary_terms
                        ));
                    }
                    Ok(Computed {
                        value: v.value,
                        terms: su3::six_partitions().len() as u64,
                        warnings,
                    })
                }
            }
            method => {
                let r = self.engine.volume(xis, method)?;
                Ok(Computed {
                    value: r.value,
                    terms: r.terms_evaluated,
                    warnings: r.warnings,
                })
            }
        }
    }
}

fn su3_weights(xis: &[Weight]) -> SU3Weights {
    let lm: Vec<(Q, Q)> = xis.iter().map(simple_to_su3_lm).collect();
    SU3Weights::new(
        [lm[0].0.clone(), lm[1].0.clone(), lm[2].0.clone()],
        [lm[0].1.clone(), lm[1].1.clone(), lm[2].1.clone()],
    )
}

struct Computed {
    value: Q,
    terms: u64,
    warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct AssumptionsJson {
    regular: Vec<bool>,
    level_set_nonempty: bool,
    wall_images: Vec<Vec<String>>,
    smoothness: &'static str,
}

impl From<&AssumptionReport> for AssumptionsJson {
    fn from(r: &AssumptionReport) -> Self {
        Self {
            regular: r.regular.clone(),
            level_set_nonempty: r.level_set_nonempty,
            wall_images: r.wall_images.iter().map(weight_strings).collect(),
            smoothness: AssumptionReport::SMOOTHNESS,
        }
    }
}

#[derive(Debug, Serialize)]
struct VolumeReport {
    value: String,
    decimal: f64,
    method: Method,
    group: String,
    n: usize,
    a: usize,
    terms: u64,
    warnings: Vec<String>,
    calibration: Option<String>,
    calibrated: Option<String>,
    /// Input weights re-expressed in simple-root coordinates.
    weights_simple_root: Vec<Vec<String>>,
    assumptions: AssumptionsJson,
}

fn cmd_volume(args: &VolumeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let job = Job::new(&args.run)?;
    let xis = job.weights(&job.vectors)?;
    let computed = job.compute(&xis)?;
    let assumptions = job.engine.check_assumptions(&xis)?;
    let constant = job.calibration_constant();
    let mut warnings = computed.warnings;
    let calibrated = if job.calibrated {
        match &constant {
            Some(c) => Some(format_rational(&(c * &computed.value))),
            None => {
                warnings.push(format!("no calibration constant is known for {} N={}", job.group(), job.n));
                None
            }
        }
    } else {
        None
    };
    let report = VolumeReport {
        decimal: decimal12(&computed.value),
        value: format_rational(&computed.value),
        method: job.method,
        group: job.group(),
        n: job.n,
        a: job.engine.free_dim(),
        terms: computed.terms,
        warnings,
        calibration: constant.as_ref().map(format_rational),
        calibrated,
        weights_simple_root: xis.iter().map(weight_strings).collect(),
        assumptions: AssumptionsJson::from(&assumptions),
    };
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "value", "decimal", "method", "group", "n", "a", "terms", "calibration", "calibrated",
                "warnings",
            ])?;
            w.write_record([
                report.value.clone(),
                report.decimal.to_string(),
                report.method.to_string(),
                report.group.clone(),
                report.n.to_string(),
                report.a.to_string(),
                report.terms.to_string(),
                report.calibration.clone().unwrap_or_default(),
                report.calibrated.clone().unwrap_or_default(),
                report.warnings.join("; "),
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "value        {}", report.value)?;
            writeln!(out, "decimal      {}", report.decimal)?;
            writeln!(out, "method       {}", report.method)?;
            writeln!(out, "group        {} (N = {}, a = {})", report.group, report.n, report.a)?;
            writeln!(out, "terms        {}", report.terms)?;
            if let Some(c) = &report.calibration {
                writeln!(out, "calibration  {c}")?;
            }
            if let Some(c) = &report.calibrated {
                writeln!(out, "calibrated   {c}")?;
            }
            let a = &report.assumptions;
            writeln!(
                out,
                "regular      {}",
                a.regular.iter().map(|r| if *r { "yes" } else { "no" }).collect::<Vec<_>>().join(",")
            )?;
            writeln!(out, "level set    {}", if a.level_set_nonempty { "may be nonempty" } else { "empty" })?;
            writeln!(out, "wall images  {}", a.wall_images.len())?;
            for w in &report.warnings {
                writeln!(out, "warning      {w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct McJson {
    value: f64,
    std_error: f64,
    samples: u64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct DhReport {
    value: String,
    decimal: f64,
    group: String,
    multiplicity: usize,
    a: usize,
    cone: &'static str,
    wall: bool,
    weight_simple_root: Vec<String>,
    monte_carlo: Option<McJson>,
    warnings: Vec<String>,
}

fn cmd_dh(args: &DhArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let rs = load_root_system(&args.group)?;
    if args.basis == Basis::Su3Lm && !is_a2(&rs) {
        return Err(CliError::InvalidArgument("basis su3-lm needs group A2".to_string()));
    }
    if args.multiplicity == 0 {
        return Err(CliError::InvalidArgument("multiplicity must be positive".to_string()));
    }
    let xi = to_simple(&rs, args.basis, &parse_vector(&args.weight)?)?;
    let dh = DhProblem::new(&rs, args.multiplicity)?;
    let value = dh.dh_density(&xi)?;
    let cone = match dh.in_cone(&xi) {
        ConePosition::Inside => "inside",
        ConePosition::Boundary => "boundary",
        ConePosition::Outside => "outside",
    };
    let mut warnings = Vec::new();
    let monte_carlo = if args.mc_samples == 0 {
        None
    } else {
        match dh.fiber(&xi)? {
            Fiber::Feasible(p) if p.free_dim > 0 => {
                let est = monte_carlo_volume(&p, args.mc_samples, args.seed)?;
                Some(McJson {
                    value: est.value,
                    std_error: est.std_error,
                    samples: est.samples,
                    seed: est.seed,
                })
            }
            Fiber::Feasible(_) => {
                warnings.push("fiber is a point; Monte Carlo skipped".to_string());
                None
            }
            Fiber::Infeasible => {
                warnings.push("fiber is empty; Monte Carlo skipped".to_string());
                None
            }
        }
    };
    let report = DhReport {
        value: format_rational(&value.value),
        decimal: decimal12(&value.value),
        group: rs.group_type().to_string(),
        multiplicity: args.multiplicity,
        a: dh.free_dim(),
        cone,
        wall: value.wall,
        weight_simple_root: weight_strings(&xi),
        monte_carlo,
        warnings,
    };
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["value", "decimal", "group", "multiplicity", "a", "cone", "mc_value", "mc_std_error"])?;
            let (mv, ms) = report
                .monte_carlo
                .as_ref()
                .map_or((String::new(), String::new()), |m| (m.value.to_string(), m.std_error.to_string()));
            w.write_record([
                report.value.clone(),
                report.decimal.to_string(),
                report.group.clone(),
                report.multiplicity.to_string(),
                report.a.to_string(),
                report.cone.to_string(),
                mv,
                ms,
            ])?;
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "value    {}", report.value)?;
            writeln!(out, "decimal  {}", report.decimal)?;
            writeln!(out, "cone     {}", report.cone)?;
            if let Some(m) = &report.monte_carlo {
                writeln!(out, "mc       {} +- {} ({} samples, seed {})", m.value, m.std_error, m.samples, m.seed)?;
            }
            for w in &report.warnings {
                writeln!(out, "warning  {w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// One varying coordinate: weight `orbit`, entry `coord` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vary {
    pub orbit: usize,
    pub coord: usize,
    pub start: Q,
    pub stop: Q,
    pub step: Q,
}

impl Vary {
    pub fn label(&self) -> String {
        format!("w{}.{}", self.orbit + 1, self.coord + 1)
    }

    /// `start, start + step, ...` up to and including `stop`.
    pub fn values(&self) -> Vec<Q> {
        let mut out = Vec::new();
        let mut v = self.start.clone();
        while v <= self.stop {
            out.push(v.clone());
            v += &self.step;
        }
        out
    }

    fn count(&self) -> usize {
        if self.start > self.stop {
            return 0;
        }
        let steps = ((&self.stop - &self.start) / &self.step).floor();
        steps.to_integer().try_into().map_or(usize::MAX, |k: usize| k.saturating_add(1))
    }
}

impl FromStr for Vary {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| CliError::Grid(format!("{s:?}: {why}"));
        let (target, range) = s.split_once('=').ok_or_else(|| bad("expected J.K=START:STOP:STEP"))?;
        let (j, k) = target.split_once('.').ok_or_else(|| bad("expected J.K before '='"))?;
        let index = |x: &str| -> Result<usize, CliError> {
            match x.trim().parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i - 1),
                _ => Err(bad("indices are 1-based integers")),
            }
        };
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected START:STOP:STEP"));
        }
        let num = |x: &str| parse_rational(x.trim()).map_err(|e| bad(&e.to_string()));
        let vary = Vary {
            orbit: index(j)?,
            coord: index(k)?,
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !vary.step.is_positive() {
            return Err(bad("step must be positive"));
        }
        Ok(vary)
    }
}

#[derive(Debug, Serialize)]
struct SweepRow {
    point: Vec<String>,
    value: Option<String>,
    decimal: Option<f64>,
    calibrated: Option<String>,
    warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct SweepReport {
    parameters: Vec<String>,
    method: Method,
    group: String,
    n: usize,
    rows: Vec<SweepRow>,
}

fn parse_grid(job: &Job, specs: &[String]) -> Result<Vec<Vary>, CliError> {
    if specs.len() > 2 {
        return Err(CliError::Grid("at most two coordinates may vary".to_string()));
    }
    let varies: Vec<Vary> = specs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    for v in &varies {
        let len = job.vectors.get(v.orbit).map(Vec::len);
        if len.is_none_or(|l| v.coord >= l) {
            return Err(CliError::Grid(format!("{} is not a coordinate of the weights", v.label())));
        }
    }
    if varies.len() == 2 && (varies[0].orbit, varies[0].coord) == (varies[1].orbit, varies[1].coord) {
        return Err(CliError::Grid(format!("{} varies twice", varies[0].label())));
    }
    let total = varies.iter().map(Vary::count).fold(1usize, usize::saturating_mul);
    if total > MAX_SWEEP_POINTS {
        return Err(CliError::Grid(format!("{total} points exceed the limit of {MAX_SWEEP_POINTS}")));
    }
    Ok(varies)
}

fn sweep_row(job: &Job, constant: Option<&Q>, vectors: &[Vec<Q>], point: Vec<String>) -> SweepRow {
    let result = job.weights(vectors).and_then(|xis| job.compute(&xis));
    match result {
        Ok(c) => SweepRow {
            point,
            decimal: Some(decimal12(&c.value)),
            calibrated: if job.calibrated {
                constant.map(|k| format_rational(&(k * &c.value)))
            } else {
                None
            },
            value: Some(format_rational(&c.value)),
            warnings: c.warnings,
        },
        Err(e) => SweepRow {
            point,
            value: None,
            decimal: None,
            calibrated: None,
            warnings: vec![format!("error: {}: {e}", e.kind())],
        },
    }
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let job = Job::new(&args.run)?;
    let varies = parse_grid(&job, &args.vary)?;
    let constant = job.calibration_constant();
    let axes: Vec<Vec<Q>> = varies.iter().map(Vary::values).collect();
    let mut rows = Vec::new();
    let mut visit = |point: &[Q]| {
        let mut vectors = job.vectors.clone();
        for (v, x) in varies.iter().zip(point) {
            vectors[v.orbit][v.coord] = x.clone();
        }
        let labels = point.iter().map(format_rational).collect();
        rows.push(sweep_row(&job, constant.as_ref(), &vectors, labels));
    };
    match axes.as_slice() {
        [a] => a.iter().for_each(|x| visit(std::slice::from_ref(x))),
        [a, b] => {
            for x in a {
                for y in b {
                    visit(&[x.clone(), y.clone()]);
                }
            }
        }
        _ => unreachable!("one or two axes"),
    }
    let report = SweepReport {
        parameters: varies.iter().map(Vary::label).collect(),
        method: job.method,
        group: job.group(),
        n: job.n,
        rows,
    };
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?,
        Format::Csv | Format::Text => {
            let mut w = csv::WriterBuilder::new()
                .delimiter(if args.format == Format::Csv { b',' } else { b'\t' })
                .from_writer(&mut *out);
            let mut header = report.parameters.clone();
            header.extend(["value", "decimal"].map(String::from));
            if job.calibrated {
                header.push("calibrated".to_string());
            }
            header.push("warnings".to_string());
            w.write_record(&header)?;
            for row in &report.rows {
                let mut record = row.point.clone();
                record.push(row.value.clone().unwrap_or_default());
                record.push(row.decimal.map(|d| d.to_string()).unwrap_or_default());
                if job.calibrated {
                    record.push(row.calibrated.clone().unwrap_or_default());
                }
                record.push(row.warnings.join("; "));
                w.write_record(&record)?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SelftestRow {
    id: u8,
    name: &'static str,
    status: String,
    detail: String,
}

#[derive(Debug, Serialize)]
struct SelftestReport {
    passed: bool,
    criteria: Vec<SelftestRow>,
}

fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let opts = SelfTestOptions {
        seed: args.seed,
        mc_samples: args.mc_samples,
        corrupt_weyl_sign: args.corrupt_weyl_sign,
    };
    let outcomes = selftest::run_all(&opts);
    let passed = outcomes.iter().all(|o| o.passed());
    match args.format {
        Format::Json => {
            let report = SelftestReport {
                passed,
                criteria: outcomes
                    .iter()
                    .map(|o| SelftestRow {
                        id: o.id,
                        name: o.name,
                        status: o.status.to_string(),
                        detail: o.detail.clone(),
                    })
                    .collect(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["criterion", "status", "name", "detail"])?;
            for o in &outcomes {
                w.write_record([o.id.to_string(), o.status.to_string(), o.name.to_string(), o.detail.clone()])?;
            }
            w.flush()?;
        }
        Format::Text => write!(out, "{}", selftest::render(&outcomes))?,
    }
    Ok(if passed { EXIT_OK } else { EXIT_SELFTEST_FAILED })
}

fn format_of(command: &Command) -> Format {
    match command {
        Command::Volume(a) => a.format,
        Command::Dh(a) => a.format,
        Command::Sweep(a) => a.format,
        Command::Selftest(a) => a.format,
    }
}

fn report_error(e: &CliError, format: Format, out: &mut dyn Write, err: &mut dyn Write) {
    if format == Format::Json {
        let obj = ErrorObject {
            error: ErrorBody {
                kind: e.kind(),
                message: e.to_string(),
            },
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&obj).expect("serializable"));
    }
    let _ = writeln!(err, "error[{}]: {e}", e.kind());
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Volume(a) => cmd_volume(a, out),
        Command::Dh(a) => cmd_dh(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Selftest(a) => cmd_selftest(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            report_error(&e, format_of(&cli.command), out, err);
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("orbitvol").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn parses_vectors() {
        let v = parse_vectors("1,-1/2; 3").unwrap();
        assert_eq!(v, vec![vec![q(1), crate::exact::qf(-1, 2)], vec![q(3)]]);
        assert!(parse_vectors("").is_err());
        assert!(parse_vectors("1,x").is_err());
    }

    #[test]
    fn parses_vary() {
        let v: Vary = "1.2=2:4:1/2".parse().unwrap();
        assert_eq!((v.orbit, v.coord), (0, 1));
        assert_eq!(v.values().len(), 5);
        assert_eq!(v.count(), 5);
        let empty: Vary = "1.1=3:2:1".parse().unwrap();
        assert!(empty.values().is_empty());
        assert_eq!(empty.count(), 0);
        for bad in ["1.1=0:1:0", "0.1=0:1:1", "1=0:1:1", "1.1=0:1", "1.1=a:1:1"] {
            assert!(bad.parse::<Vary>().is_err(), "{bad}");
        }
    }

    #[test]
    fn dh_examples() {
        for (group, weight, expected) in [("A2", "1,1", "1"), ("A2", "-1,-1", "0"), ("A1", "1", "1")] {
            let (code, out) = run_str(&["dh", "--group", group, "--weight", weight, "--basis", "simple-root"]);
            assert_eq!(code, 0);
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            assert_eq!(v["value"], expected, "{group} {weight}");
        }
    }

    #[test]
    fn basis_is_required() {
        let (code, _) = run_str(&["volume", "--group", "A1", "--n", "3", "--weights", "1;1;1"]);
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn su3_basis_needs_a2() {
        let (code, out) = run_str(&[
            "volume", "--group", "A1", "--n", "3", "--weights", "1,1;1,1;1,1", "--basis", "su3-lm",
        ]);
        assert_eq!(code, EXIT_INVALID);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["kind"], "invalid-argument");
    }
}
