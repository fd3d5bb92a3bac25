//! Command-line front end: generators, norms, optimizers and the named
//! experiments, with `key = value` config files and deterministic output.
//!
//! Exit codes: 0 on success, 2 for invalid input, 1 for runtime failures.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::parse_config;

use crate::error::{Error, Result};
use crate::extremal::{lambda_p_constant, majorant_numerator, ExtremalResult, OptimizerConfig};
use crate::montecarlo::{
    check_chernoff, check_lower_bound_pap, check_lower_bound_product, check_selector_moment, lambda_expectation,
    majorant_scaling_study, probability_estimate, ExperimentReport, ModelFamily, CSV_HEADER,
};
use crate::randsets::{CurveKind, RandomSetModel, SeededRng};
use crate::trigpoly::{exact_grid, lp_norm_quadrature, FrequencySet, NormPolicy, NormResult, TrigPolynomial};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MAJORANT_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "majorant-lab", version, about = "Random exponential sums, majorants and Λ(p) constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a frequency set.
    Gen(Flags),
    /// L^p norm of the all-ones sum over a set.
    Norm(Flags),
    /// Optimize the majorant numerator and ratio.
    Majorant(Flags),
    /// Estimate the Λ(p) constant K(S).
    Lambdap(Flags),
    /// Run a named Monte Carlo experiment.
    Experiment(Flags),
}

impl Command {
    fn parts(&self) -> (&'static str, &Flags) {
        match self {
            Command::Gen(f) => ("gen", f),
            Command::Norm(f) => ("norm", f),
            Command::Majorant(f) => ("majorant", f),
            Command::Lambdap(f) => ("lambdap", f),
            Command::Experiment(f) => ("experiment", f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModelName {
    Bernoulli,
    Pap,
    Block,
    Nested,
    Dyadic,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    /// Exact convolution for even p, adaptive quadrature otherwise.
    Auto,
    Adaptive,
    ExactEven,
    /// Fixed grid; `norm` only.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Experiment {
    Chernoff,
    LowerBoundProduct,
    LowerBoundPap,
    SelectorMoment,
    MajorantScaling,
    Probability,
    LambdaExpectation,
}

/// Flags shared by every command. Each one may also be given in the config
/// file under its snake_case name.
#[derive(Debug, Clone, Default, Args, Serialize)]
struct Flags {
    /// `key = value` file; flags on the command line take precedence.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ModelName>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    /// Fine-block exponent of the nested sampler.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    p1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<u64>,
    /// Lift the model onto a curve: squares, parabola or paraboloid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<CurveKind>,
    /// Block-count exponent `L = N^exponent` for block families.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    exponent: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    restarts: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iters: Option<usize>,
    /// Output file; standard output when absent. Not echoed, so the same
    /// run written to two paths produces identical bytes.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<Format>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    set_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    /// Quadrature grid such as `64` or `32x32`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<Experiment>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    /// Comma-separated target set for `selector-moment`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    targets: Option<Vec<i64>>,
    /// Comma-separated, increasing values of N for `majorant-scaling`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    ns: Option<Vec<u64>>,
    /// Comma-separated ratio thresholds for `probability`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    thresholds: Option<Vec<f64>>,
    /// Record wall-clock runtime in experiment reports.
    #[arg(long)]
    timing: bool,
}

fn required<T: Copy>(v: Option<T>, name: &str, context: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(name, format!("required {context}")))
}

impl Flags {
    fn apply_defaults(&mut self, command: &str) {
        self.seed.get_or_insert(0);
        self.rel_tol.get_or_insert(1e-9);
        let cfg = OptimizerConfig::default();
        self.restarts.get_or_insert(cfg.restarts);
        self.max_iters.get_or_insert(cfg.max_iters);
        self.method.get_or_insert(Method::Auto);
        self.format
            .get_or_insert(if command == "gen" { Format::Csv } else { Format::Json });
        if command == "experiment" {
            self.trials.get_or_insert(100);
            let natural = match self.name {
                Some(Experiment::Chernoff | Experiment::LowerBoundProduct) => Some(ModelName::Bernoulli),
                Some(Experiment::LowerBoundPap) => Some(ModelName::Pap),
                Some(Experiment::SelectorMoment) => Some(ModelName::Block),
                _ => None,
            };
            if self.model.is_none() {
                self.model = natural;
            }
        }
        if let (Some(ModelName::Pap), None, Some(l), Some(s), Some(a), Some(b)) =
            (self.model, self.n, self.l, self.s, self.a, self.b)
        {
            self.n = Some(b + a * l + s);
        }
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn trials(&self) -> usize {
        self.trials.unwrap_or(100)
    }

    fn rel_tol(&self) -> f64 {
        self.rel_tol.unwrap_or(1e-9)
    }

    fn p(&self) -> Result<f64> {
        required(self.p, "p", "for this command")
    }

    fn optimizer(&self) -> Result<OptimizerConfig> {
        let base = OptimizerConfig::default();
        let cfg = OptimizerConfig {
            restarts: self.restarts.unwrap_or(base.restarts),
            max_iters: self.max_iters.unwrap_or(base.max_iters),
            norm_rel_tol: self.rel_tol(),
            seed: self.seed(),
            ..base
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn policy(&self, p: f64) -> Result<NormPolicy> {
        let policy = match self.method.unwrap_or(Method::Auto) {
            Method::Auto => NormPolicy::for_p(p, self.rel_tol()),
            Method::Adaptive => NormPolicy::Adaptive { rel_tol: self.rel_tol() },
            Method::ExactEven => NormPolicy::ExactEven,
            Method::Quadrature => {
                return Err(Error::invalid("method", "quadrature is only available to `norm`"));
            }
        };
        policy.validate(p)?;
        Ok(policy)
    }

    fn model(&self) -> Result<RandomSetModel> {
        let name = required(self.model, "model", "for this command")?;
        let ctx = "for this model";
        let base = match name {
            ModelName::Bernoulli => RandomSetModel::BernoulliSelector {
                n: required(self.n, "n", ctx)?,
                delta: required(self.delta, "delta", ctx)?,
            },
            ModelName::Dyadic => RandomSetModel::CorrelatedDyadic {
                n: required(self.n, "n", ctx)?,
                delta: required(self.delta, "delta", ctx)?,
            },
            ModelName::Pap => RandomSetModel::PerturbedAp {
                n: required(self.n, "n", ctx)?,
                l: required(self.l, "l", ctx)?,
                s: required(self.s, "s", ctx)?,
                a: required(self.a, "a", ctx)?,
                b: required(self.b, "b", ctx)?,
            },
            ModelName::Block => RandomSetModel::BlockUniform {
                n: required(self.n, "n", ctx)?,
                l: required(self.l, "l", ctx)?,
            },
            ModelName::Nested => RandomSetModel::NestedBlock {
                n: required(self.n, "n", ctx)?,
                p: self.p()?,
                p1: required(self.p1, "p1", ctx)?,
            },
            ModelName::Full => RandomSetModel::FullRange {
                n: required(self.n, "n", ctx)?,
            },
        };
        let model = match self.kind {
            Some(kind) => RandomSetModel::CurveEmbedding {
                base: Box::new(base),
                kind,
            },
            None => base,
        };
        model.validate()?;
        Ok(model)
    }

    fn family(&self) -> Result<ModelFamily> {
        let name = required(self.model, "model", "for majorant-scaling")?;
        let family = match (name, self.kind) {
            (ModelName::Bernoulli, Some(kind)) => ModelFamily::Curve {
                delta: required(self.delta, "delta", "for this model")?,
                kind,
            },
            (ModelName::Bernoulli, None) => ModelFamily::Bernoulli {
                delta: required(self.delta, "delta", "for this model")?,
            },
            (ModelName::Dyadic, None) => ModelFamily::CorrelatedDyadic {
                delta: required(self.delta, "delta", "for this model")?,
            },
            (ModelName::Block, None) => ModelFamily::BlockUniform {
                exponent: required(self.exponent, "exponent", "for block families")?,
            },
            _ => {
                return Err(Error::invalid(
                    "model",
                    "scaling families are bernoulli (optionally with --kind), dyadic or block",
                ))
            }
        };
        Ok(family)
    }

    /// The set named by `--set-file`, or one draw of the model on stream 0.
    fn set(&self) -> Result<FrequencySet> {
        match (&self.set_file, self.model) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::invalid("set_file", format!("{}: {e}", path.display())))?;
                FrequencySet::from_lines(&text)
            }
            (None, Some(_)) => self.model()?.sample(SeededRng::new(self.seed(), 0)),
            (None, None) => Err(Error::invalid("set_file", "give --set-file or --model")),
        }
    }
}

/// Parse `argv` (program name first), merge the config file, run the command
/// and return the process exit code.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse_with_config(argv) {
        Ok(Some(cli)) => cli,
        Ok(None) => return 0,
        Err(code) => return code,
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    let (command, flags) = cli.command.parts();
    let mut flags = flags.clone();
    flags.apply_defaults(command);
    match execute(command, &flags) {
        Ok(body) => match emit(&flags, &body) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: writing output: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

/// `Ok(None)` when clap already printed help or version.
fn parse_with_config(mut argv: Vec<OsString>) -> std::result::Result<Option<Cli>, i32> {
    let clap_fail = |e: clap::Error| {
        let code = if e.use_stderr() { 2 } else { 0 };
        let _ = e.print();
        code
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let code = clap_fail(e);
            return if code == 0 { Ok(None) } else { Err(code) };
        }
    };
    let (sub_name, sub) = matches.subcommand().expect("subcommand is required");
    if let Some(path) = sub.get_one::<PathBuf>("config") {
        let pairs = fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))
            .and_then(|text| parse_config(&text));
        let pairs = match pairs {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {e}");
                return Err(2);
            }
        };
        let cmd = Cli::command();
        let sub_cmd = cmd.find_subcommand(sub_name).expect("known subcommand");
        for (key, value) in pairs {
            let arg = sub_cmd.get_arguments().find(|a| a.get_id() == key.as_str() && key != "config");
            let Some(arg) = arg else {
                eprintln!("error: invalid parameter `{key}`: unknown configuration key");
                return Err(2);
            };
            if sub.value_source(&key) == Some(ValueSource::CommandLine) {
                continue;
            }
            let long = format!("--{}", arg.get_long().expect("every flag is long"));
            if matches!(arg.get_action(), clap::ArgAction::SetTrue) {
                match value.as_str() {
                    "true" => argv.push(long.into()),
                    "false" => {}
                    _ => {
                        eprintln!("error: invalid parameter `{key}`: expected true or false, got `{value}`");
                        return Err(2);
                    }
                }
            } else {
                argv.push(long.into());
                argv.push(value.into());
            }
        }
    }
    let matches = Cli::command().try_get_matches_from(&argv).map_err(clap_fail)?;
    Cli::from_arg_matches(&matches).map(Some).map_err(clap_fail)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::invalid(THREADS_ENV, format!("expected a count, got `{raw}`")))?;
    if threads > 0 {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}

fn emit(flags: &Flags, body: &str) -> std::io::Result<()> {
    match &flags.out {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn spec_echo(command: &str, flags: &Flags) -> Value {
    json!({ "command": command, "config": flags })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Attach `spec_echo` to a serializable body.
fn with_echo<T: Serialize>(echo: Value, body: &T) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("spec_echo".into(), echo);
    match serde_json::to_value(body).expect("output serializes") {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("value".into(), other);
        }
    }
    Value::Object(out)
}

fn execute(command: &str, flags: &Flags) -> Result<String> {
    let echo = spec_echo(command, flags);
    let format = flags.format.unwrap_or(Format::Json);
    match command {
        "gen" => {
            let model = flags.model()?;
            let set = model.sample(SeededRng::new(flags.seed(), 0))?;
            Ok(match format {
                Format::Csv => set.to_lines(),
                Format::Json => {
                    let elems: Vec<&[i64]> = set.iter().collect();
                    to_json(&json!({ "spec_echo": echo, "dim": set.dim(), "set": elems }))
                }
            })
        }
        "norm" => {
            let p = flags.p()?;
            let set = flags.set()?;
            let poly = TrigPolynomial::ones(&set);
            let result = if flags.method == Some(Method::Quadrature) {
                let grid = match &flags.grid {
                    Some(g) => parse_grid(g)?,
                    None => exact_grid(&poly, p),
                };
                lp_norm_quadrature(&poly, p, &grid)?
            } else {
                if flags.grid.is_some() {
                    return Err(Error::invalid("grid", "only used with --method quadrature"));
                }
                flags.policy(p)?.norm(&poly, p)?
            };
            Ok(match format {
                Format::Csv => norm_csv(&result),
                Format::Json => to_json(&with_echo(echo, &result)),
            })
        }
        "majorant" | "lambdap" => {
            let p = flags.p()?;
            let cfg = flags.optimizer()?;
            let set = flags.set()?;
            let result = if command == "majorant" {
                majorant_numerator(&set, p, &cfg)?
            } else {
                lambda_p_constant(&set, p, &cfg)?
            };
            Ok(match format {
                Format::Csv => coeffs_csv(&set, &result),
                Format::Json => {
                    let mut body = with_echo(echo, &result);
                    if command == "majorant" {
                        let ones = cfg.norm_policy(p).norm(&TrigPolynomial::ones(&set), p)?;
                        body["ones_norm"] = json!(ones.value);
                        body["ratio"] = json!(result.value / ones.value);
                    }
                    body["flags"] = json!(["lower_estimate"]);
                    to_json(&body)
                }
            })
        }
        "experiment" => run_experiment(flags, echo, format),
        other => Err(Error::invalid("command", format!("unknown command `{other}`"))),
    }
}

fn parse_grid(text: &str) -> Result<Vec<usize>> {
    text.split('x')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid("grid", format!("expected sizes like 64 or 32x32, got `{text}`")))
        })
        .collect()
}

fn norm_csv(r: &NormResult) -> String {
    format!(
        "p,value,method,grid,rel_error_estimate\n{},{},{},{},{}\n",
        r.p,
        r.value,
        r.method.as_str(),
        r.grid_label(),
        r.rel_error_estimate
    )
}

fn coeffs_csv(set: &FrequencySet, r: &ExtremalResult) -> String {
    let mut out = String::from("frequency,re,im\n");
    for (v, c) in set.iter().zip(&r.coeffs) {
        let freq: Vec<String> = v.iter().map(ToString::to_string).collect();
        out.push_str(&format!("{},{},{}\n", freq.join(";"), c.re, c.im));
    }
    out
}

fn report_echo(echo: Value, report: &mut ExperimentReport, timing: bool) {
    let inner = std::mem::take(&mut report.spec_echo);
    report.spec_echo = match echo {
        Value::Object(mut m) => {
            m.insert("experiment".into(), inner);
            Value::Object(m)
        }
        other => other,
    };
    if timing {
        report.runtime_seconds = Some(report.elapsed.as_secs_f64());
    }
}

fn run_experiment(flags: &Flags, echo: Value, format: Format) -> Result<String> {
    let name = required(flags.name, "name", "for experiment")?;
    let (trials, seed) = (flags.trials(), flags.seed());
    macro_rules! finish {
        ($check:expr) => {{
            let mut check = $check;
            report_echo(echo, &mut check.report, flags.timing);
            Ok(match format {
                Format::Csv => check.report.to_csv(),
                Format::Json => to_json(&check),
            })
        }};
    }
    match name {
        Experiment::Chernoff => finish!(check_chernoff(&flags.model()?, trials, seed)?),
        Experiment::LowerBoundProduct => {
            let p = flags.p()?;
            finish!(check_lower_bound_product(&flags.model()?, p, trials, seed, flags.policy(p)?)?)
        }
        Experiment::LowerBoundPap => {
            let p = flags.p()?;
            finish!(check_lower_bound_pap(&flags.model()?, p, trials, seed, flags.policy(p)?)?)
        }
        Experiment::SelectorMoment => {
            let model = flags.model()?;
            let q = required(flags.q, "q", "for selector-moment")?;
            let targets = match &flags.targets {
                Some(t) => FrequencySet::one_dim(model.n(), t.iter().copied())
                    .map_err(|e| Error::invalid("targets", e.to_string()))?,
                None => FrequencySet::one_dim(model.n(), model.blocks().unwrap_or_default().iter().map(|b| b.0))?,
            };
            finish!(check_selector_moment(&model, &targets, q, trials, seed)?)
        }
        Experiment::Probability => {
            let p = flags.p()?;
            let thresholds = flags
                .thresholds
                .clone()
                .ok_or_else(|| Error::invalid("thresholds", "required for probability"))?;
            finish!(probability_estimate(
                &flags.model()?,
                p,
                &thresholds,
                trials,
                seed,
                &flags.optimizer()?
            )?)
        }
        Experiment::LambdaExpectation => {
            let p = flags.p()?;
            finish!(lambda_expectation(&flags.model()?, p, &flags.optimizer()?, trials, seed)?)
        }
        Experiment::MajorantScaling => {
            let p = flags.p()?;
            let ns = flags
                .ns
                .clone()
                .ok_or_else(|| Error::invalid("ns", "required for majorant-scaling"))?;
            let family = flags.family()?;
            let cfg = flags.optimizer()?;
            let mut study = majorant_scaling_study(&family, &ns, p, trials, seed, &cfg)?;
            let mut total = 0.0;
            for pt in &mut study.points {
                total += pt.report.elapsed.as_secs_f64();
                report_echo(Value::Null, &mut pt.report, flags.timing);
            }
            Ok(match format {
                Format::Csv => {
                    let mut out = format!("n,{CSV_HEADER}\n");
                    for pt in &study.points {
                        for line in pt.report.to_csv().lines().skip(1) {
                            out.push_str(&format!("{},{line}\n", pt.n));
                        }
                    }
                    out
                }
                Format::Json => {
                    let mut body = with_echo(echo, &study);
                    body["runtime_seconds"] = if flags.timing { json!(total) } else { Value::Null };
                    to_json(&body)
                }
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("64").unwrap(), vec![64]);
        assert_eq!(parse_grid("32x16").unwrap(), vec![32, 16]);
        assert!(parse_grid("32,16").is_err());
    }

    #[test]
    fn pap_length_defaults_to_the_tight_window() {
        let mut f = Flags {
            model: Some(ModelName::Pap),
            l: Some(32),
            s: Some(8),
            a: Some(20),
            b: Some(5),
            ..Default::default()
        };
        f.apply_defaults("experiment");
        assert_eq!(f.n, Some(653));
        assert_eq!(f.trials, Some(100));
        assert!(f.model().is_ok());
    }

    #[test]
    fn missing_parameters_are_named() {
        let f = Flags {
            model: Some(ModelName::Bernoulli),
            n: Some(10),
            ..Default::default()
        };
        assert!(matches!(f.model(), Err(Error::InvalidParameter { param, .. }) if param == "delta"));
    }

    #[test]
    fn config_keys_match_flag_ids() {
        let cmd = Cli::command();
        let gen = cmd.find_subcommand("gen").unwrap();
        for key in ["model", "n", "delta", "p", "p1", "l", "s", "a", "b", "kind", "trials", "seed", "rel_tol", "restarts", "out", "format"] {
            assert!(gen.get_arguments().any(|a| a.get_id() == key), "{key}");
        }
    }
}
