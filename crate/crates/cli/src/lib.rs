//! Command-line driver: parses arguments, runs one computation and writes a
//! JSON (or CSV) document carrying the provenance needed to reproduce it.
//!
//! Exit codes: 0 success or confirmed, 2 violated, 1 error or inconclusive,
//! 64 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use syzlab::curves::{sample_points, CurveKind, CurveModel, CurveSpec};
use syzlab::exactla::{default_prime, is_prime};
use syzlab::koszul::{betti_table, curve_betti_table, curve_regularity, BettiTable};
use syzlab::mrc::{failure_region, raynaud_check, verify_mrc, Status, TrialPolicy, Verdict};
use syzlab::rational::Rational;
use syzlab::slopes::{self, DegenerationPlan, NodalBundleSketch};
use syzlab::{charp, rng, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "syzlab", version = VERSION, about = "Syzygies of points on curves over prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti table of gamma sampled points on a curve, or of the curve itself.
    Betti(BettiArgs),
    /// Compare sampled Betti tables with the minimal-resolution prediction.
    Mrc(MrcArgs),
    /// Generic vanishing of twisted wedge powers of the kernel bundle.
    Raynaud(RaynaudArgs),
    /// Hilbert-Kunz function of the curve at q = p, ..., p^e_max.
    Hk(HkArgs),
    /// Degeneration chain for a Brill-Noether curve with d >= 2r.
    Plan(PlanArgs),
    /// Exhaustive check of the polynomial inequalities up to r_max.
    Audit(AuditArgs),
    /// Slope bookkeeping for (g, r, d), or adjusted slopes of a sketch.
    Slope(SlopeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Curve document; overrides the inline options.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "r", "d"])]
    pub curve: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<CurveKind>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Field characteristic; must be prime and below 2^31.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = rng::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BettiArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Number of points; omit for the curve's own table.
    #[arg(long)]
    pub gamma: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Expected table; exit 2 if the computed one differs.
    #[arg(long, value_name = "FILE")]
    pub expect: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MrcArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long)]
    pub gamma: usize,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Keep every trial at the starting prime.
    #[arg(long)]
    pub fixed_prime: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RaynaudArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long)]
    pub fixed_prime: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HkArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, default_value_t = 1)]
    pub e_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, required_unless_present = "check")]
    pub g: Option<u32>,
    #[arg(long, required_unless_present = "check")]
    pub r: Option<u32>,
    #[arg(long, required_unless_present = "check")]
    pub d: Option<u32>,
    /// Validate an existing plan document instead of planning.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["g", "r", "d"])]
    pub check: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 12)]
    pub r_max: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    #[arg(long, required_unless_present = "sketch")]
    pub g: Option<u32>,
    #[arg(long, required_unless_present = "sketch")]
    pub r: Option<u32>,
    #[arg(long, required_unless_present = "sketch")]
    pub d: Option<u32>,
    /// Nodal bundle sketch; reports adjusted slopes of its subsheaves.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["g", "r", "d"])]
    pub sketch: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_kind(s: &str) -> Result<CurveKind, String> {
    s.parse().map_err(|e: syzlab::Error| e.to_string())
}

/// Parses `argv` (program name first) without running anything.
pub fn parse<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// Failure modes of a run, each mapped to one exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<syzlab::Error> for Failure {
    fn from(e: syzlab::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<(Document, i32), Failure>;

/// A result body plus what it needs for provenance and CSV rendering.
struct Document {
    prime: Option<u32>,
    seed: Option<u64>,
    body: Value,
    table: Option<BettiTable>,
}

impl Document {
    fn new(body: Value) -> Self {
        Document { prime: None, seed: None, body, table: None }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result documents serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Compute(format!("cannot read {}: {e}", path.display())))
}

/// Resolves the curve options into a spec; `gamma` only feeds the default prime.
fn curve_spec(args: &CurveArgs, gamma: usize, prime_required: bool) -> Result<CurveSpec, Failure> {
    if let Some(path) = &args.curve {
        let mut spec = CurveSpec::from_json(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some(p) = args.prime {
            spec.prime = checked_prime(p)?;
        }
        return Ok(spec);
    }
    let (Some(kind), Some(r), Some(d)) = (args.kind, args.r, args.d) else {
        return Err(Failure::Usage("either --curve FILE or all of --kind, --r, --d is required".into()));
    };
    let prime = match args.prime {
        Some(p) => checked_prime(p)?,
        None if prime_required => return Err(Failure::Usage("--prime is required for this subcommand".into())),
        None => default_prime(gamma.max(1)) as u64,
    };
    let spec = CurveSpec { kind, r, d, prime, seed: args.seed, weierstrass: None };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(spec)
}

fn checked_prime(p: u64) -> Result<u64, Failure> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Failure::Usage(format!("--prime {p} is not a prime below 2^31")));
    }
    Ok(p)
}

fn build(spec: &CurveSpec) -> Result<CurveModel, Failure> {
    Ok(spec.build()?)
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Confirmed => EXIT_OK,
        Status::Violated => EXIT_VIOLATED,
        Status::Inconclusive => EXIT_FAILURE,
    }
}

fn verdict_document(spec: &CurveSpec, v: Verdict) -> Outcome {
    let code = status_code(v.status);
    let mut doc = Document::new(to_value(&v));
    doc.prime = Some(spec.prime as u32);
    doc.seed = Some(spec.seed);
    doc.table = v.computed;
    Ok((doc, code))
}

fn run_betti(a: &BettiArgs) -> Outcome {
    let spec = curve_spec(&a.curve, a.gamma.unwrap_or(1), false)?;
    let model = build(&spec)?;
    let table = match a.gamma {
        Some(0) => return Err(Failure::Usage("--gamma must be positive".into())),
        Some(gamma) => {
            let j_max = match a.j_max {
                Some(j) => j,
                None => {
                    let u = 1 + (gamma + model.genus()).saturating_sub(1) / model.d;
                    u.max(curve_regularity(&model)?) + 1
                }
            };
            let sample = sample_points(&model, gamma, spec.seed)?;
            let mut t = betti_table(&sample, j_max)?;
            t.meta.seed = Some(spec.seed);
            t
        }
        None => {
            let j_max = match a.j_max {
                Some(j) => j,
                None => curve_regularity(&model)?.max(2),
            };
            curve_betti_table(&model, j_max)?
        }
    };
    let mut code = EXIT_OK;
    let mut body = json!({ "table": table });
    if let Some(path) = &a.expect {
        let expected = BettiTable::from_json(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))?;
        let diffs: Vec<Value> = expected
            .diff(&table)
            .into_iter()
            .map(|(i, j, e, c)| json!({ "i": i, "j": j, "expected": e, "computed": c }))
            .collect();
        if !diffs.is_empty() {
            code = EXIT_VIOLATED;
        }
        body["matches_expected"] = json!(diffs.is_empty());
        body["diffs"] = Value::Array(diffs);
    }
    let mut doc = Document::new(body);
    doc.prime = Some(spec.prime as u32);
    doc.seed = Some(spec.seed);
    doc.table = Some(table);
    Ok((doc, code))
}

fn run_mrc(a: &MrcArgs) -> Outcome {
    let spec = curve_spec(&a.curve, a.gamma, false)?;
    let model = build(&spec)?;
    let policy = TrialPolicy { trials: a.trials.max(1), seed: spec.seed, escalate_prime: !a.fixed_prime };
    verdict_document(&spec, verify_mrc(&model, a.gamma, &policy)?)
}

fn run_raynaud(a: &RaynaudArgs) -> Outcome {
    let spec = curve_spec(&a.curve, 1, false)?;
    let model = build(&spec)?;
    let policy = TrialPolicy { trials: a.trials.max(1), seed: spec.seed, escalate_prime: !a.fixed_prime };
    verdict_document(&spec, raynaud_check(&model, 1..=model.r, &policy)?)
}

fn run_hk(a: &HkArgs) -> Outcome {
    let spec = curve_spec(&a.curve, 1, true)?;
    let model = build(&spec)?;
    let est = charp::hk_estimate(&model, a.e_max)?;
    let mut doc = Document::new(to_value(&est));
    doc.prime = Some(spec.prime as u32);
    doc.seed = Some(spec.seed);
    Ok((doc, EXIT_OK))
}

fn run_plan(a: &PlanArgs) -> Outcome {
    let plan = match (&a.check, a.g, a.r, a.d) {
        (Some(path), ..) => DegenerationPlan::from_json(&read(path)?)?,
        (None, Some(g), Some(r), Some(d)) => slopes::plan_degeneration(g, r, d)?,
        _ => return Err(Failure::Usage("plan needs --g, --r, --d or --check FILE".into())),
    };
    let full_steps = plan.steps.iter().filter(|s| s.eps == plan.target.r + 1).count();
    let rhos: Vec<i64> = plan.nodes().iter().map(|&(d, g)| slopes::rho(g as i64, plan.target.r as i64, d as i64)).collect();
    Ok((Document::new(json!({ "plan": plan, "rho": rhos, "full_steps": full_steps })), EXIT_OK))
}

fn run_audit(a: &AuditArgs) -> Outcome {
    let report = slopes::audit_inequalities(a.r_max)?;
    let code = if report.clean() { EXIT_OK } else { EXIT_VIOLATED };
    Ok((Document::new(to_value(&report)), code))
}

fn run_slope(a: &SlopeArgs) -> Outcome {
    if let Some(path) = &a.sketch {
        let sketch = NodalBundleSketch::from_json(&read(path)?)?;
        let subsheaves = (0..sketch.subsheaves.len())
            .map(|k| {
                Ok(json!({
                    "index": k,
                    "mu": Rational(sketch.subsheaf_slope(k)?),
                    "mu_adj": Rational(slopes::adjusted_slope(&sketch, k)?),
                }))
            })
            .collect::<syzlab::Result<Vec<Value>>>()?;
        let body = json!({ "ray_open_hypotheses": slopes::ray_open_hypotheses(&sketch), "subsheaves": subsheaves });
        return Ok((Document::new(body), EXIT_OK));
    }
    let (Some(g), Some(r), Some(d)) = (a.g, a.r, a.d) else {
        return Err(Failure::Usage("slope needs --g, --r, --d or --sketch FILE".into()));
    };
    if r < 1 || d < 1 {
        return Err(Failure::Usage("--r and --d must be positive".into()));
    }
    let kernel = slopes::SlopeDatum::new(-(d as i64), r)?;
    let mut body = json!({
        "rho": slopes::rho(g as i64, r as i64, d as i64),
        "kernel_bundle": kernel,
        "tangent_bundle": slopes::SlopeDatum::new((r as i64 + 1) * d as i64, r)?,
        "stability": slopes::stability_verdict(g, r, d),
        "failure_region": failure_region(g as usize, r as usize, d as usize),
    });
    if r >= 2 {
        body["minimal_exceeding_kernel_slope"] = to_value(&Rational(slopes::minimal_exceeding_slope(kernel.mu(), r as u64)));
    }
    match g {
        0 => body["general_type"] = to_value(&slopes::general_type_p1(r, (r as i64 + 1) * d as i64)),
        1 => body["general_type"] = to_value(&slopes::general_type_elliptic(r, d)),
        _ => {}
    }
    if d <= 2 * r && g >= 2 && r >= 2 {
        body["corank1_quotient"] = to_value(&slopes::corank1_witness(g, r, d)?);
    }
    Ok((Document::new(body), EXIT_OK))
}

fn dispatch(cmd: &Command) -> (Outcome, &OutputArgs, &'static str) {
    match cmd {
        Command::Betti(a) => (run_betti(a), &a.output, "betti"),
        Command::Mrc(a) => (run_mrc(a), &a.output, "mrc"),
        Command::Raynaud(a) => (run_raynaud(a), &a.output, "raynaud"),
        Command::Hk(a) => (run_hk(a), &a.output, "hk"),
        Command::Plan(a) => (run_plan(a), &a.output, "plan"),
        Command::Audit(a) => (run_audit(a), &a.output, "audit"),
        Command::Slope(a) => (run_slope(a), &a.output, "slope"),
    }
}

fn render(doc: Document, name: &str, argv: &[String], format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => {
            let out = json!({
                "provenance": {
                    "tool": "syzlab",
                    "version": VERSION,
                    "subcommand": name,
                    "argv": argv,
                    "prime": doc.prime,
                    "seed": doc.seed,
                },
                "result": doc.body,
            });
            Ok(serde_json::to_string_pretty(&out).expect("document serializes") + "\n")
        }
        Format::Csv => {
            let table = doc.table.ok_or_else(|| Failure::Usage(format!("{name} has no table to write as CSV")))?;
            let mut out = format!("# syzlab {VERSION} {name}");
            if let Some(p) = doc.prime {
                out += &format!(" prime={p}");
            }
            if let Some(s) = doc.seed {
                out += &format!(" seed={s}");
            }
            out.push('\n');
            Ok(out + &table.to_csv())
        }
    }
}

/// Runs one invocation; `argv` includes the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let (outcome, output, name) = dispatch(&cli.command);
    let result = outcome.and_then(|(doc, code)| Ok((render(doc, name, &echo, output.format)?, code)));
    match result {
        Ok((text, code)) => match write_output(output.out.as_deref(), &text) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("syzlab: {e}");
                EXIT_FAILURE
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("syzlab {name}: {msg}");
            eprintln!("run `syzlab {name} --help` for the synopsis");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("syzlab {name}: {msg}");
            EXIT_FAILURE
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = parse(["syzlab", "betti", "--kind", "rational_normal", "--r", "3", "--d", "3", "--gamma", "7"]).unwrap();
        let Command::Betti(a) = cli.command else { panic!() };
        assert_eq!(a.curve.seed, 1);
        assert_eq!(a.gamma, Some(7));
        assert_eq!(a.output.format, Format::Json);
        assert!(parse(["syzlab", "betti", "--kind", "hyperbolic"]).is_err());
        assert!(parse(["syzlab", "plan", "--g", "1"]).is_err());
        assert!(parse(["syzlab", "frobnicate"]).is_err());
    }

    #[test]
    fn spec_resolution() {
        let args = CurveArgs { curve: None, kind: Some(CurveKind::Elliptic), r: Some(3), d: Some(4), prime: None, seed: 5 };
        let spec = curve_spec(&args, 200, false).unwrap();
        assert_eq!((spec.prime, spec.seed), (1601, 5));
        assert!(matches!(curve_spec(&args, 1, true), Err(Failure::Usage(_))));
        let bad = CurveArgs { prime: Some(1000), ..args };
        assert!(matches!(curve_spec(&bad, 1, false), Err(Failure::Usage(_))));
    }
}
