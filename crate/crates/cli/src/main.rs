mod funcspec;
mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Number, Value};

use laplace_lp::acceptance::{run_all, run_criterion};
use laplace_lp::analytics::scaling_grid;
use laplace_lp::{
    check_scaling_identity, classify, discretized_opnorm, fit_exponent, geometric_grid,
    laplace_lq_norm, laplace_point, lp_norm, region_sweep, sweep, DomainSpec, Error,
    LebesgueExponent, SweepRecord, Variant,
};

use funcspec::FunctionSpec;

#[derive(Parser)]
#[command(
    name = "laplace-lp",
    version,
    about = "Boundedness of the Laplace transform between Lebesgue spaces"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate L f(x).
    Transform {
        #[arg(long = "f")]
        function: FunctionSpec,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// L^p norm of f, or of L f with --of-transform.
    Norm {
        #[arg(long = "f")]
        function: FunctionSpec,
        #[arg(long)]
        p: LebesgueExponent,
        #[arg(long, default_value = "full")]
        domain: DomainSpec,
        #[arg(long)]
        of_transform: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Decide whether L: L^p(0, inf) -> L^q(domain) is bounded.
    Classify {
        #[arg(long)]
        p: LebesgueExponent,
        #[arg(long)]
        q: LebesgueExponent,
        #[arg(long)]
        domain: DomainSpec,
    },
    /// Classify a lattice of (1/p, 1/q) and draw the region.
    Region {
        #[arg(long)]
        domain: DomainSpec,
        #[arg(long, default_value_t = 0.0625)]
        step: f64,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
    },
    /// Norm ratios of a counterexample family over an epsilon grid.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Log-log slope of the norm ratio against epsilon.
    Fit {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Discretized lower bound for the operator norm.
    Opnorm {
        #[arg(long)]
        p: LebesgueExponent,
        #[arg(long)]
        q: LebesgueExponent,
        #[arg(long, default_value = "full")]
        domain: DomainSpec,
        #[arg(long, default_value_t = 512)]
        nodes: usize,
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
    },
    /// Check the dilation identities for f at lambda.
    ScalingCheck {
        #[arg(long = "f")]
        function: FunctionSpec,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        p: LebesgueExponent,
        #[arg(long)]
        q: LebesgueExponent,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the acceptance suite.
    VerifyAll {
        /// Run a single criterion (1 to 10).
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(clap::Args)]
struct FamilyArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    p: LebesgueExponent,
    /// Defaults to the conjugate of p.
    #[arg(long)]
    q: Option<LebesgueExponent>,
    /// Defaults to bounded:0,1 for thm1 and tail:1 for thm2.
    #[arg(long)]
    domain: Option<DomainSpec>,
    /// start:end:count, geometric.
    #[arg(long, default_value = "1e-1:1e-4:7")]
    eps_grid: EpsGrid,
}

#[derive(Clone)]
struct EpsGrid(Vec<f64>);

impl FromStr for EpsGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidParameter(format!("epsilon grid '{s}' is not start:end:count"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(bad());
        };
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        Ok(EpsGrid(geometric_grid(a, b, n)?))
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
    /// Numerical failure already reported on stderr.
    Reported,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// Floats render with 17 significant digits.
fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
}

fn exponent(p: LebesgueExponent) -> Value {
    match p.finite() {
        Some(v) => num(v),
        None => Value::String("inf".into()),
    }
}

fn record_json(r: &SweepRecord) -> Value {
    json!({
        "epsilon": num(r.epsilon),
        "norm_f": num(r.norm_f),
        "norm_lf": num(r.norm_lf),
        "ratio": num(r.ratio),
    })
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(output: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn family_setup(args: &FamilyArgs) -> (LebesgueExponent, LebesgueExponent, DomainSpec) {
    let q = args.q.unwrap_or_else(|| args.p.conjugate());
    let domain = args.domain.unwrap_or(match args.variant {
        Variant::Thm1 => DomainSpec::Bounded { a: 0.0, b: 1.0 },
        Variant::Thm2 => DomainSpec::Tail { s: 1.0 },
    });
    (args.p, q, domain)
}

fn run_family_sweep(
    args: &FamilyArgs,
) -> Result<
    (
        LebesgueExponent,
        LebesgueExponent,
        DomainSpec,
        laplace_lp::Sweep,
    ),
    Failure,
> {
    let (p, q, domain) = family_setup(args);
    let s = sweep(p, q, &domain, args.variant, &args.eps_grid.0)?;
    Ok((p, q, domain, s))
}

fn report_failures(s: &laplace_lp::Sweep) -> bool {
    for f in &s.failures {
        eprintln!(
            "error: record at epsilon={:e} failed: {}",
            f.epsilon, f.error
        );
    }
    !s.failures.is_empty()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = &cli.output;
    match cli.command {
        Command::Transform { function, x, tol } => {
            let r = laplace_point(function.function(), x, tol)?;
            let v = json!({
                "function": function.text(),
                "x": num(x),
                "value": num(r.value),
                "error_estimate": num(r.error_estimate),
                "evaluations": r.evaluations,
            });
            emit(out, &render_json(&v))?;
        }
        Command::Norm {
            function,
            p,
            domain,
            of_transform,
            tol,
        } => {
            let f = function.function();
            let value = if of_transform {
                laplace_lq_norm(f, &domain, p, tol)?
            } else {
                lp_norm(f, &domain, p, tol)?
            };
            let v = json!({
                "function": function.text(),
                "target": if of_transform { "transform" } else { "function" },
                "p": exponent(p),
                "domain": domain.to_string(),
                "value": num(value),
            });
            emit(out, &render_json(&v))?;
        }
        Command::Classify { p, q, domain } => {
            let verdict = classify(p, q, &domain)?;
            let v = json!({
                "p": exponent(p),
                "q": exponent(q),
                "domain": domain.to_string(),
                "continuous": verdict.continuous,
                "reason": verdict.reason.as_str(),
            });
            emit(out, &render_json(&v))?;
        }
        Command::Region {
            domain,
            step,
            format,
        } => {
            let points = region_sweep(step, &domain)?;
            let text = match format {
                Format::Svg => svg::region_svg(&domain, &points),
                Format::Json => {
                    let pts: Vec<Value> = points
                        .iter()
                        .map(|pt| {
                            json!({
                                "inv_p": num(pt.inv_p),
                                "inv_q": num(pt.inv_q),
                                "continuous": pt.verdict.continuous,
                                "reason": pt.verdict.reason.as_str(),
                            })
                        })
                        .collect();
                    render_json(&json!({
                        "domain": domain.to_string(),
                        "step": num(step),
                        "points": pts,
                    }))
                }
                Format::Csv => {
                    return Err(Error::InvalidParameter(
                        "region output format must be svg or json".into(),
                    )
                    .into())
                }
            };
            emit(out, &text)?;
        }
        Command::Sweep { family, format } => {
            let (_, _, _, s) = run_family_sweep(&family)?;
            let text = match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["epsilon", "norm_f", "norm_Lf", "ratio"])
                        .map_err(io::Error::from)?;
                    for r in &s.records {
                        w.write_record(
                            [r.epsilon, r.norm_f, r.norm_lf, r.ratio].map(|x| format!("{x:.16e}")),
                        )
                        .map_err(io::Error::from)?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)
                        .expect("ascii output")
                }
                Format::Json => {
                    render_json(&Value::Array(s.records.iter().map(record_json).collect()))
                }
                Format::Svg => {
                    return Err(Error::InvalidParameter(
                        "sweep output format must be csv or json".into(),
                    )
                    .into())
                }
            };
            emit(out, &text)?;
            if report_failures(&s) {
                return Err(Failure::Reported);
            }
        }
        Command::Fit { family } => {
            let (p, q, domain, s) = run_family_sweep(&family)?;
            if report_failures(&s) {
                return Err(Failure::Reported);
            }
            let fit = fit_exponent(&s.records, p)?;
            let mut m = Map::new();
            m.insert("variant".into(), family.variant.to_string().into());
            m.insert("p".into(), exponent(p));
            m.insert("q".into(), exponent(q));
            m.insert("domain".into(), domain.to_string().into());
            m.insert("slope".into(), num(fit.slope));
            m.insert("intercept".into(), num(fit.intercept));
            m.insert("max_residual".into(), num(fit.max_residual));
            m.insert("theoretical_slope".into(), num(fit.theoretical_slope));
            m.insert(
                "records".into(),
                Value::Array(fit.records.iter().map(record_json).collect()),
            );
            emit(out, &render_json(&Value::Object(m)))?;
        }
        Command::Opnorm {
            p,
            q,
            domain,
            nodes,
            iters,
        } => {
            let value = discretized_opnorm(p, q, &domain, nodes, iters)?;
            let v = json!({
                "p": exponent(p),
                "q": exponent(q),
                "domain": domain.to_string(),
                "nodes": nodes,
                "iters": iters,
                "lower_bound": num(value),
            });
            emit(out, &render_json(&v))?;
        }
        Command::ScalingCheck {
            function,
            lambda,
            p,
            q,
            tol,
        } => {
            let r =
                check_scaling_identity(function.function(), lambda, p, q, &scaling_grid(), tol)?;
            let v = json!({
                "function": function.text(),
                "lambda": num(r.lambda),
                "max_identity_error": num(r.max_identity_error),
                "norm_ratio_error": num(r.norm_ratio_error),
                "lq_lower_bound_satisfied": r.lq_lower_bound_satisfied,
            });
            emit(out, &render_json(&v))?;
        }
        Command::VerifyAll { criterion } => {
            let outcomes = match criterion {
                Some(id) if (1..=10).contains(&id) => vec![run_criterion(id)],
                Some(id) => {
                    return Err(Error::InvalidParameter(format!(
                        "criterion must be between 1 and 10, got {id}"
                    ))
                    .into())
                }
                None => run_all(),
            };
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{o}\n"));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!(
                "{} passed, {failed} failed\n",
                outcomes.len() - failed
            ));
            emit(out, &text)?;
            if failed > 0 {
                return Err(Failure::Reported);
            }
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("LAPLACE_LP_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Reported) => ExitCode::from(3),
    }
}
