//! `skewcm`: classify sign matrices, emit reduction traces, and run the
//! cross-checking harness.
//!
//! Reports go to stdout as JSON (or aligned text with `--output text`);
//! diagnostics go to stderr. Exit codes: 0 success, 1 verification mismatch,
//! 2 invalid input, 3 internal invariant breach.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skewcm::classify::{agreement_check_with, Notation, RouteRegistry, Variant};
use skewcm::harness::{check_sweep, run_sweep, Sweep, SweepConfig, SweepSummary};
use skewcm::io::{parse_permutation, parse_signs, InputFormat};
use skewcm::oracle::TwistedAlgebra;
use skewcm::reduction::full_reduction;
use skewcm::skewgraph::SignMatrix;

#[derive(Parser, Debug)]
#[command(
    name = "skewcm",
    version,
    about = "Stable MCM categories of skew (A1)/(A-infinity) singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one sign matrix.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Route to use (see --list-routes).
        #[arg(long, default_value = "matrix")]
        route: String,
        #[arg(long)]
        list_routes: bool,
        /// Print Γ/Λ instead of Gamma/Lambda in text output.
        #[arg(long)]
        unicode: bool,
    },
    /// Reduce the commutation graph to isolated edges and points.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// Re-check the trace step by step before printing.
        #[arg(long)]
        replay: bool,
    },
    /// Build C(A) and report dimension, radical and block count.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Run every route and the oracle on one input or on a sweep.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Number of variables for --exhaustive or --samples.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Tally case kinds and r over a range of n.
    Enumerate {
        #[arg(long, value_enum, default_value_t = VariantArg::AInfinity)]
        variant: VariantArg,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Also run every route and the oracle on each input.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = OutputArg::Json)]
        output: OutputArg,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::AInfinity)]
    variant: VariantArg,
    /// Input file.
    #[arg(long, conflicts_with = "inline")]
    input: Option<String>,
    /// Input given directly on the command line.
    #[arg(long)]
    inline: Option<String>,
    #[arg(long, default_value = "signs-text")]
    format: String,
    /// Relabel variables: entry k is the new index of variable k.
    #[arg(long)]
    permutation: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Every sign matrix on n variables.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of random sign matrices.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow exhaustive sweeps beyond n = 8.
    #[arg(long)]
    force: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    A1,
    #[value(name = "a-infinity")]
    AInfinity,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::A1 => Variant::A1,
            VariantArg::AInfinity => Variant::AInfinity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Text,
}

/// Failure classes, mapped onto exit codes.
enum Failure {
    Mismatch(Value),
    Invalid(anyhow::Error),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Invalid(e.into())
}

fn load(args: &InputArgs) -> Result<SignMatrix, Failure> {
    let text = match (&args.input, &args.inline) {
        (Some(path), None) => fs::read_to_string(path)
            .with_context(|| format!("reading {path}"))
            .map_err(invalid)?,
        (None, Some(text)) => text.replace("\\n", "\n"),
        _ => return Err(invalid(anyhow!("give exactly one of --input or --inline"))),
    };
    let format: InputFormat = args
        .format
        .parse()
        .map_err(|e: String| invalid(anyhow!(e)))?;
    let eps = parse_signs(&text, format).map_err(invalid)?;
    let eps = match &args.permutation {
        None => eps,
        Some(perm_text) => {
            let perm = parse_permutation(perm_text, eps.n()).map_err(|e| invalid(anyhow!(e)))?;
            eps.relabel(&perm)
                .ok_or_else(|| invalid(anyhow!("permutation does not fit n = {}", eps.n())))?
        }
    };
    let variant = Variant::from(args.variant);
    if eps.n() < variant.min_n() {
        return Err(invalid(anyhow!(
            "{variant} needs n >= {} (got {})",
            variant.min_n(),
            eps.n()
        )));
    }
    Ok(eps)
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Internal(e.into()))
}

fn cmd_classify(input: &InputArgs, route: &str, unicode: bool) -> Result<String, Failure> {
    let eps = load(input)?;
    let variant = Variant::from(input.variant);
    let registry = RouteRegistry::default();
    let route = registry.require(route).map_err(invalid)?;
    let c = route.classify(&eps, variant).map_err(invalid)?;
    if input.output == OutputArg::Text {
        let notation = if unicode {
            Notation::Unicode
        } else {
            Notation::Ascii
        };
        let j = c.to_json();
        let mut out = String::new();
        let rows = [
            ("variant", variant.to_string()),
            ("n", eps.n().to_string()),
            ("case", j.case),
            ("r", j.r.to_string()),
            ("factor_count", j.factor_count),
            ("category", c.category(notation)),
            ("cm_type", j.cm_type),
            (
                "indecomposables",
                j.indecomposables.unwrap_or_else(|| "-".into()),
            ),
            ("isolated", j.isolated_singularity.to_string()),
        ];
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<16} {v}");
        }
        return Ok(out);
    }
    Ok(render(&to_value(&c.to_json())?))
}

fn list_routes() -> String {
    let registry = RouteRegistry::default();
    let routes: Vec<Value> = registry
        .iter()
        .map(|r| {
            let variants: Vec<&str> = [Variant::A1, Variant::AInfinity]
                .into_iter()
                .filter(|v| r.supports(*v))
                .map(Variant::as_str)
                .collect();
            json!({"name": r.name(), "summary": r.summary(), "variants": variants})
        })
        .collect();
    render(&Value::Array(routes))
}

fn cmd_reduce(input: &InputArgs, replay: bool) -> Result<String, Failure> {
    if Variant::from(input.variant) != Variant::AInfinity {
        return Err(invalid(anyhow!(
            "reduce applies to the a-infinity variant only"
        )));
    }
    let eps = load(input)?;
    let report = full_reduction(&eps).map_err(|e| Failure::Internal(e.into()))?;
    let mut value = to_value(&report.to_json())?;
    if replay {
        let summary = report
            .replay()
            .map_err(|e| Failure::Internal(anyhow!("replay failed: {e}")))?;
        value["replay"] = json!({
            "steps": summary.steps,
            "nullity": summary.nullity,
            "condition_l": summary.condition_l,
        });
    }
    if input.output == OutputArg::Text {
        let mut out = String::new();
        let _ = writeln!(out, "n        {}", eps.n());
        let _ = writeln!(out, "alpha    {}", report.alpha());
        let _ = writeln!(out, "beta     {}", report.beta());
        let _ = writeln!(
            out,
            "n_status {}",
            value["n_status"].as_str().unwrap_or("?")
        );
        for (i, step) in report.trace.iter().enumerate() {
            let _ = writeln!(
                out,
                "step {:>3} {:?} -> {:?}",
                i + 1,
                step.kind,
                step.graph_after
            );
        }
        return Ok(out);
    }
    Ok(render(&value))
}

fn cmd_oracle(input: &InputArgs) -> Result<String, Failure> {
    let eps = load(input)?;
    let variant = Variant::from(input.variant);
    let alg = TwistedAlgebra::new(&eps, variant).map_err(invalid)?;
    let radical = match variant {
        Variant::AInfinity => alg.radical_dimension(),
        Variant::A1 => 0,
    };
    let blocks_log2 = alg.block_count_log2();
    let value = json!({
        "n": eps.n(),
        "variant": variant.as_str(),
        "dim": alg.dimension().to_string(),
        "radical_dim": radical.to_string(),
        "semisimple": radical == 0,
        "block_count_log2": blocks_log2,
        "block_count": alg.block_count().ok().map(|b| b.to_string()),
    });
    if input.output == OutputArg::Text {
        let mut out = String::new();
        for k in [
            "n",
            "variant",
            "dim",
            "radical_dim",
            "semisimple",
            "block_count_log2",
            "block_count",
        ] {
            let _ = writeln!(out, "{k:<16} {}", value[k]);
        }
        return Ok(out);
    }
    Ok(render(&value))
}

fn sweep_mode(args: &SweepArgs) -> Option<Sweep> {
    match (args.exhaustive, args.samples) {
        (true, _) => Some(Sweep::Exhaustive { force: args.force }),
        (false, Some(count)) => Some(Sweep::Sampled {
            count,
            seed: args.seed,
        }),
        (false, None) => None,
    }
}

fn sweep(
    variant: Variant,
    ns: impl Iterator<Item = usize>,
    args: &SweepArgs,
    mode: Sweep,
    verify: bool,
) -> Result<Vec<SweepSummary>, Failure> {
    let registry = RouteRegistry::default();
    let cfg = SweepConfig {
        variant,
        verify,
        workers: args.workers,
    };
    let ns: Vec<usize> = ns.collect();
    for &n in &ns {
        check_sweep(n, mode, variant).map_err(invalid)?;
    }
    ns.into_iter()
        .map(|n| run_sweep(&registry, n, mode, cfg).map_err(invalid))
        .collect()
}

fn cmd_verify(input: &InputArgs, args: &SweepArgs, n: Option<usize>) -> Result<String, Failure> {
    let variant = Variant::from(input.variant);
    let Some(mode) = sweep_mode(args) else {
        let eps = load(input)?;
        let report = agreement_check_with(&RouteRegistry::default(), &eps, variant, true);
        let value = to_value(&report)?;
        return if report.agree {
            Ok(render(&value))
        } else {
            Err(Failure::Mismatch(value))
        };
    };
    if input.input.is_some() || input.inline.is_some() {
        return Err(invalid(anyhow!(
            "--exhaustive/--samples take --n, not an input"
        )));
    }
    let n = n.ok_or_else(|| invalid(anyhow!("--exhaustive/--samples need --n")))?;
    let summary = sweep(variant, std::iter::once(n), args, mode, true)?.remove(0);
    let value = to_value(&summary)?;
    if summary.failed > 0 {
        Err(Failure::Mismatch(value))
    } else {
        Ok(render(&value))
    }
}

fn table(rows: &[SweepSummary]) -> String {
    let mut out = format!(
        "{:>3} {:>10} {:>17} {:>12} {:>11} {:>10}  r distribution\n",
        "n", "inputs", "semisimple_power", "lambda_power", "gamma_power", "verified"
    );
    for s in rows {
        let count = |k: &str| s.by_case.get(k).copied().unwrap_or(0);
        let r: Vec<String> = s.by_r.iter().map(|(r, c)| format!("{r}:{c}")).collect();
        let verified = s.verified.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "{:>3} {:>10} {:>17} {:>12} {:>11} {:>10}  {}",
            s.n,
            s.inputs,
            count("semisimple_power"),
            count("lambda_power"),
            count("gamma_power"),
            verified,
            r.join(" ")
        );
    }
    out
}

fn cmd_enumerate(
    variant: Variant,
    n_min: usize,
    n_max: usize,
    args: &SweepArgs,
    verify: bool,
    output: OutputArg,
) -> Result<String, Failure> {
    if n_min > n_max {
        return Err(invalid(anyhow!("--n-min {n_min} exceeds --n-max {n_max}")));
    }
    let mode = sweep_mode(args).unwrap_or(Sweep::Exhaustive { force: args.force });
    let rows = sweep(variant, n_min..=n_max, args, mode, verify)?;
    let failed = rows.iter().any(|s| s.failed > 0);
    let out = match output {
        OutputArg::Text => table(&rows),
        OutputArg::Json => render(&to_value(&rows)?),
    };
    if failed {
        eprint!("{}", table(&rows));
        return Err(Failure::Mismatch(to_value(&rows)?));
    }
    Ok(out)
}

fn render(value: &Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify {
            list_routes: true, ..
        } => Ok(list_routes()),
        Command::Classify {
            input,
            route,
            unicode,
            ..
        } => cmd_classify(input, route, *unicode),
        Command::Reduce { input, replay } => cmd_reduce(input, *replay),
        Command::Oracle { input } => cmd_oracle(input),
        Command::Verify { input, sweep, n } => cmd_verify(input, sweep, *n),
        Command::Enumerate {
            variant,
            n_min,
            n_max,
            sweep,
            verify,
            output,
        } => cmd_enumerate((*variant).into(), *n_min, *n_max, sweep, *verify, *output),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Mismatch(report) => {
                    print!("{}", render(&report));
                    eprintln!("error: verification mismatch");
                }
                Failure::Invalid(e) => eprintln!("error: {e:#}"),
                Failure::Internal(e) => eprintln!("internal error: {e:#}"),
            }
            ExitCode::from(code)
        }
    }
}
