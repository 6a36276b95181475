//! Argument parsing and command dispatch for the `jensen` binary.
//!
//! [`run`] does all the work and returns the exit status with the text for
//! stdout and stderr, so tests can drive it in process.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex::{ConvexFunction, FunctionSpec};
use crate::engine::{self, BoxBounds, GradientBounds, WeightedSample};
use crate::error::Error;
use crate::harness::{self, FailureRecord, SuiteConfig};
use crate::info::{self, DistributionInput, RenyiOrder};
use crate::means::{self, PositiveSample};
use crate::numeric::Tolerance;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jensen",
    version,
    about = "Jensen gaps, converse bounds and entropy certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jensen gap of a weighted sample.
    Gap(SampleArgs),
    /// Jensen gap and its chain of upper bounds.
    Chain(SampleArgs),
    /// Arithmetic, geometric and harmonic means with their certificates.
    Means {
        #[command(flatten)]
        common: CommonArgs,
        /// Exponent of the power-mean certificate (>= 1).
        #[arg(long, default_value_t = 2.0)]
        power: f64,
    },
    /// Shannon entropy certificates.
    Entropy(DistributionArgs),
    /// Rényi entropy certificates of order --alpha.
    Renyi {
        #[command(flatten)]
        dist: DistributionArgs,
        #[arg(long)]
        alpha: f64,
    },
    /// Informational energy and its relation to the order-2 Rényi entropy.
    Energy(DistributionArgs),
    /// Seeded random verification suite.
    Verify {
        /// Suite configuration as JSON; --seed and --trials override it.
        #[arg(long, conflicts_with = "inline")]
        input: Option<PathBuf>,
        #[arg(long)]
        inline: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-checks a failure record produced by `verify`.
    Replay(CommonArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Relative tolerance for inequality checks.
    #[arg(long)]
    pub tol_rel: Option<f64>,
    /// Absolute tolerance for inequality checks.
    #[arg(long)]
    pub tol_abs: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON input file.
    #[arg(long, conflicts_with = "inline", required_unless_present = "inline")]
    pub input: Option<PathBuf>,
    /// JSON input given directly on the command line.
    #[arg(long)]
    pub inline: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Registry name, or a JSON object `{"name": ..., "params": {...}}`.
    /// Falls back to a `function` field in the input.
    #[arg(long)]
    pub function: Option<String>,
    /// Function parameter as KEY=VALUE; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Drop zero entries (changing n) instead of rejecting them.
    #[arg(long)]
    pub strip_zeros: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// What a command produced: the exit status plus stdout and stderr text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Input(m) => f.write_str(m),
            Self::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok((valid, report, format)) => Outcome {
            code: if valid { EXIT_OK } else { EXIT_INVALID },
            stdout: render(&report, format),
            stderr: String::new(),
        },
        Err(e) => Outcome::usage(e),
    }
}

fn dispatch(command: &Command) -> CliResult<(bool, Value, Format)> {
    match command {
        Command::Gap(args) => {
            let (function, input) = sample_input(args)?;
            let gap = engine::jensen_gap(&function, &input.sample)?;
            let report = serde_json::json!({
                "command": "gap",
                "function": function,
                "gap": gap,
            });
            Ok((true, report, args.common.output.format))
        }
        Command::Chain(args) => {
            let (function, input) = sample_input(args)?;
            let tol = tolerance(&args.common.output)?;
            let chain = engine::bound_chain(
                &function,
                &input.sample,
                input.bounds.as_ref(),
                input.gradient_bounds.as_ref(),
                tol,
            )?;
            let valid = chain.valid;
            let report = tagged("chain", Some(&function), &chain)?;
            Ok((valid, report, args.common.output.format))
        }
        Command::Means { common, power } => {
            let raw: MeansInput = parse(&read_input(common)?, "means")?;
            let sample = match raw.weights {
                Some(w) => PositiveSample::new(raw.values, w)?,
                None => PositiveSample::uniform(raw.values)?,
            };
            let r = means::means_report(&sample, *power, tolerance(&common.output)?)?;
            Ok((r.valid, tagged("means", None, &r)?, common.output.format))
        }
        Command::Entropy(args) => {
            let d = distribution(args)?;
            let r = info::entropy_report(&d, tolerance(&args.common.output)?)?;
            Ok((
                r.valid,
                tagged("entropy", None, &r)?,
                args.common.output.format,
            ))
        }
        Command::Renyi { dist, alpha } => {
            let d = distribution(dist)?;
            let order = RenyiOrder::new(*alpha)?;
            let r = info::renyi_report(&d, order, tolerance(&dist.common.output)?)?;
            Ok((
                r.valid,
                tagged("renyi", None, &r)?,
                dist.common.output.format,
            ))
        }
        Command::Energy(args) => {
            let d = distribution(args)?;
            let r = info::energy_report(&d, tolerance(&args.common.output)?);
            Ok((
                r.valid,
                tagged("energy", None, &r)?,
                args.common.output.format,
            ))
        }
        Command::Verify {
            input,
            inline,
            seed,
            trials,
            output,
        } => {
            let mut config: SuiteConfig = match (input, inline) {
                (Some(path), _) => parse(&read_file(path)?, "suite config")?,
                (None, Some(text)) => parse(text, "suite config")?,
                (None, None) => SuiteConfig::default(),
            };
            if let Some(seed) = seed {
                config.seed = *seed;
            }
            if let Some(trials) = trials {
                config.trials = *trials;
            }
            if let Some(rel) = output.tol_rel {
                config.tolerances.inequality.rel = rel;
            }
            if let Some(abs) = output.tol_abs {
                config.tolerances.inequality.abs = abs;
            }
            let _ = tolerance(output)?;
            let report = harness::run_suite(&config)?;
            let passed = report.passed();
            Ok((passed, tagged("verify", None, &report)?, output.format))
        }
        Command::Replay(common) => {
            let record: FailureRecord = parse(&read_input(common)?, "failure record")?;
            let outcome = harness::replay(&record);
            // the instance still failing is a failed check
            let valid = !outcome.reproduced;
            Ok((
                valid,
                tagged("replay", None, &outcome)?,
                common.output.format,
            ))
        }
    }
}

/// Sample input for `gap` and `chain`; `box` and `gradient_bounds` are
/// optional and default to the tightest enclosing bounds.
struct SampleInput {
    sample: WeightedSample,
    bounds: Option<BoxBounds>,
    gradient_bounds: Option<GradientBounds>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeansInput {
    values: Vec<f64>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

fn sample_input(args: &SampleArgs) -> CliResult<(ConvexFunction, SampleInput)> {
    let text = read_input(&args.common)?;
    let value: Value = parse(&text, "sample")?;
    let Value::Object(mut map) = value else {
        return Err(CliError::Input("sample: expected a JSON object".into()));
    };
    let bounds = map.remove("box");
    let gradient_bounds = map.remove("gradient_bounds");
    let function = map.remove("function");
    for key in map.keys() {
        if key != "points" && key != "weights" {
            return Err(CliError::Input(format!("sample: unknown field `{key}`")));
        }
    }
    let sample: WeightedSample = from_value(Value::Object(map), "sample")?;
    let bounds: Option<BoxBounds> = bounds.map(|v| from_value(v, "box")).transpose()?;
    let gradient_bounds: Option<GradientBounds> = gradient_bounds
        .map(|v| from_value(v, "gradient_bounds"))
        .transpose()?;
    let input_function: Option<FunctionSpec> =
        function.map(|v| from_value(v, "function")).transpose()?;

    let mut spec = match (&args.function, input_function) {
        (Some(arg), _) => function_arg(arg)?,
        (None, Some(spec)) => spec,
        (None, None) => {
            return Err(CliError::Input(
                "function: pass --function or a `function` field in the input".into(),
            ))
        }
    };
    for p in &args.params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("param: `{p}` is not KEY=VALUE")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("param: `{value}` is not a number")))?;
        spec.params.insert(key.trim().to_string(), value);
    }
    let function = ConvexFunction::try_from(spec)?;
    Ok((
        function,
        SampleInput {
            sample,
            bounds,
            gradient_bounds,
        },
    ))
}

fn function_arg(arg: &str) -> CliResult<FunctionSpec> {
    if arg.trim_start().starts_with('{') {
        parse(arg, "function")
    } else {
        Ok(FunctionSpec::named(arg.trim()))
    }
}

fn distribution(args: &DistributionArgs) -> CliResult<info::DiscreteDistribution> {
    let input: DistributionInput = parse(&read_input(&args.common)?, "distribution")?;
    Ok(input.into_distribution(args.strip_zeros)?)
}

fn tolerance(o: &OutputArgs) -> CliResult<Tolerance> {
    let d = Tolerance::default();
    let t = Tolerance::new(o.tol_rel.unwrap_or(d.rel), o.tol_abs.unwrap_or(d.abs));
    if !(t.rel >= 0.0 && t.abs >= 0.0 && t.rel.is_finite() && t.abs.is_finite()) {
        return Err(CliError::Input(
            "tol-rel/tol-abs: tolerances must be finite and nonnegative".into(),
        ));
    }
    Ok(t)
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("input: cannot read {}: {e}", path.display())))
}

fn read_input(c: &CommonArgs) -> CliResult<String> {
    match (&c.input, &c.inline) {
        (Some(path), _) => read_file(path),
        (None, Some(text)) => Ok(text.clone()),
        (None, None) => Err(CliError::Input("input: pass --input or --inline".into())),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

fn from_value<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

fn tagged<T: Serialize>(
    command: &str,
    function: Option<&ConvexFunction>,
    body: &T,
) -> CliResult<Value> {
    let mut out = serde_json::Map::new();
    out.insert("command".into(), Value::from(command));
    if let Some(f) = function {
        out.insert("function".into(), to_value(f)?);
    }
    match to_value(body)? {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Value::Object(out))
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Input(format!("output: {e}")))
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut rows = Vec::new();
            flatten("", report, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter()
                .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                .collect()
        }
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, rows);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let cells: Vec<String> = items.iter().map(Value::to_string).collect();
            rows.push((prefix.to_string(), format!("[{}]", cells.join(", "))));
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                let key = child
                    .get("name")
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .unwrap_or_else(|| i.to_string());
                flatten(&join(&key), child, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}
