//! `groupcut`: command-line front end.
//!
//! Exit codes: 0 success, 2 a verified identity failed, 3 bad input.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use groupcut::criteria::CriterionReport;
use groupcut::experiments::{
    emit_cut, optimize_and_report, riemann_experiment, stirling_csv, stirling_table,
    sublevel_plot_csv, AnyFunction, BPolicy, ExperimentConfig, TableauRow,
};
use groupcut::finite::{is_minimal, rearrange_finite};
use groupcut::rational::format_rational;
use groupcut::torus::{
    integral_ln, is_minimal_pwl, layer_cake_check, lp_norm_torus, lp_power_torus,
    rearrange_torus, tilde_fn,
};
use groupcut::verdict::MinimalityVerdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "groupcut", version, about = "Exact cut-generating functions for group relaxations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Float tolerance for checks that are not exact.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimality verdict for a finite or circle function.
    Check {
        /// JSON function file; `-` or absent reads stdin.
        input: Option<PathBuf>,
    },
    /// Nondecreasing rearrangement of a function.
    Rearrange {
        input: Option<PathBuf>,
        /// For circle functions, return the symmetric average (ĥ + π̄)/2.
        #[arg(long)]
        tilde: bool,
    },
    /// Verify the volume optimum over a list of primes.
    Optimize {
        /// Comma-separated group orders.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, value_enum)]
        b_policy: Option<PolicyArg>,
        /// Residue used with `--b-policy fixed`.
        #[arg(long)]
        b: Option<u64>,
        /// TOML configuration; command-line flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Lift the vertex-enumeration size cap.
        #[arg(long)]
        force: bool,
    },
    /// Integrals and norms: ∫ln π, L_p, layer cake (circle) or all scores (finite).
    Integrate {
        input: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        p: Vec<u32>,
    },
    /// Limit experiments.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
    /// Cut coefficients for a tableau row.
    Cutgen {
        /// Tableau row JSON.
        #[arg(long)]
        row: PathBuf,
        /// Function JSON; `-` or absent reads stdin.
        function: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Discretize a nondecreasing symmetric circle function at a prime.
    Riemann {
        input: Option<PathBuf>,
        #[arg(long)]
        q: u64,
    },
    /// Stirling limit table.
    Stirling {
        #[arg(long, value_delimiter = ',', default_value = "3,5,11,101,1009")]
        primes: Vec<u64>,
    },
    /// Sublevel measure plot data (`alpha,measure`).
    Sublevel {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        levels: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    All,
    Fixed,
    Canonical,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Validation(String),
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
    }
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
    Ok(s)
}

fn load_function(path: Option<&Path>) -> Result<AnyFunction> {
    Ok(AnyFunction::from_json(&read_input(path)?)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn print_records(header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn print_function(f: &AnyFunction, format: Format) -> Result<()> {
    match (f, format) {
        (_, Format::Json) => print_json(f),
        (AnyFunction::Finite(f), Format::Csv) => print_records(
            &["x", "value"],
            f.values()
                .iter()
                .enumerate()
                .map(|(x, v)| vec![x.to_string(), format_rational(v)])
                .collect(),
        ),
        (AnyFunction::Torus(f), Format::Csv) => print_records(
            &["breakpoint", "slope", "intercept", "left", "at", "right"],
            (0..f.breakpoints().len())
                .map(|i| {
                    let l = f.limits_at(i);
                    let p = &f.pieces()[i];
                    vec![
                        format_rational(&f.breakpoints()[i]),
                        format_rational(&p.slope),
                        format_rational(&p.intercept),
                        format_rational(&l.left),
                        format_rational(&l.at),
                        format_rational(&l.right),
                    ]
                })
                .collect(),
        ),
    }
}

fn print_verdict(v: &MinimalityVerdict, format: Format) -> Result<()> {
    match format {
        Format::Json => print_json(v),
        Format::Csv => print_records(
            &["kind", "witness", "amount"],
            v.violations
                .iter()
                .map(|x| {
                    vec![
                        serde_json::to_string(&x.kind).unwrap_or_default().trim_matches('"').to_string(),
                        serde_json::to_string(&x.witness).unwrap_or_default(),
                        format_rational(&x.amount),
                    ]
                })
                .collect(),
        ),
    }
}

#[derive(Serialize)]
struct TorusIntegrals {
    #[serde(serialize_with = "ser_f64")]
    integral_ln: f64,
    lp: Vec<TorusLp>,
    layer_cake: groupcut::torus::LayerCake,
}

#[derive(Serialize)]
struct TorusLp {
    p: u32,
    pth_power: String,
    norm: f64,
}

fn ser_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    }
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format;
    let tol = cli.tolerance;
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(Failure::Input(anyhow::anyhow!("--tolerance must be positive")));
        }
    }
    match cli.command {
        Command::Check { input } => {
            let f = load_function(input.as_deref())?;
            let v = match &f {
                AnyFunction::Finite(f) => is_minimal(f),
                AnyFunction::Torus(f) => is_minimal_pwl(f),
            };
            print_verdict(&v, format)?;
            if !v.is_minimal {
                return Err(Failure::Validation("function is not minimal".into()));
            }
        }
        Command::Rearrange { input, tilde } => {
            let out = match load_function(input.as_deref())? {
                AnyFunction::Finite(f) => {
                    if tilde {
                        return Err(Failure::Input(anyhow::anyhow!(
                            "--tilde applies to circle functions only"
                        )));
                    }
                    AnyFunction::Finite(rearrange_finite(&f)?)
                }
                AnyFunction::Torus(f) if tilde => AnyFunction::Torus(tilde_fn(&f)?),
                AnyFunction::Torus(f) => AnyFunction::Torus(rearrange_torus(&f)?),
            };
            print_function(&out, format)?;
        }
        Command::Optimize {
            primes,
            b_policy,
            b,
            config,
            csv,
            json,
            workers,
            force,
        } => {
            let mut cfg = match config {
                Some(p) => ExperimentConfig::from_toml(&read_input(Some(&p))?)?,
                None => ExperimentConfig::default(),
            };
            if !primes.is_empty() {
                cfg.primes = primes;
            }
            if let Some(p) = b_policy {
                cfg.b_policy = match p {
                    PolicyArg::All => BPolicy::All,
                    PolicyArg::Fixed => BPolicy::Fixed,
                    PolicyArg::Canonical => BPolicy::Canonical,
                };
            }
            if b.is_some() {
                cfg.fixed_b = b;
            }
            cfg.csv_path = csv.or(cfg.csv_path);
            cfg.json_path = json.or(cfg.json_path);
            cfg.workers = workers.or(cfg.workers);
            if force {
                cfg.vertex_cap = u64::MAX;
            }
            let report = optimize_and_report(&cfg)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()?),
            }
            if !report.all_ok() {
                return Err(Failure::Validation("some rows failed verification".into()));
            }
        }
        Command::Integrate { input, p } => {
            if p.contains(&0) {
                return Err(Failure::Input(anyhow::anyhow!("p must be at least 1")));
            }
            match load_function(input.as_deref())? {
                AnyFunction::Finite(f) => {
                    let r = CriterionReport::compute(&f, &p);
                    match format {
                        Format::Json => print_json(&r)?,
                        Format::Csv => print_records(
                            &["quantity", "value"],
                            r.lp_norms
                                .values()
                                .map(|n| vec![format!("lp_power_{}", n.p), format_rational(&n.pth_power)])
                                .chain([
                                    vec!["volume_product".into(), format_rational(&r.volume_product)],
                                    vec!["log_geo_mean".into(), r.log_geo_mean.to_string()],
                                ])
                                .collect(),
                        )?,
                    }
                }
                AnyFunction::Torus(f) => {
                    let out = TorusIntegrals {
                        integral_ln: integral_ln(&f),
                        lp: p
                            .iter()
                            .map(|&p| TorusLp {
                                p,
                                pth_power: format_rational(&lp_power_torus(&f, p)),
                                norm: lp_norm_torus(&f, p),
                            })
                            .collect(),
                        layer_cake: layer_cake_check(&f),
                    };
                    match format {
                        Format::Json => print_json(&out)?,
                        Format::Csv => print_records(
                            &["quantity", "value"],
                            std::iter::once(vec!["integral_ln".into(), out.integral_ln.to_string()])
                                .chain(out.lp.iter().map(|l| vec![format!("lp_norm_{}", l.p), l.norm.to_string()]))
                                .chain([
                                    vec!["layer_cake_lhs".into(), out.layer_cake.lhs.to_string()],
                                    vec!["layer_cake_rhs".into(), out.layer_cake.rhs.to_string()],
                                    vec!["layer_cake_gap".into(), out.layer_cake.gap.to_string()],
                                ])
                                .collect(),
                        )?,
                    }
                    let tol = tol.unwrap_or(1e-8);
                    let min = f.min_value();
                    let bounded = min >= num_traits::Zero::zero()
                        && f.max_value() <= num_traits::One::one();
                    if bounded && !(out.layer_cake.gap < tol) {
                        return Err(Failure::Validation(format!(
                            "layer-cake gap {} exceeds {tol}",
                            out.layer_cake.gap
                        )));
                    }
                }
            }
        }
        Command::Experiment { which } => match which {
            ExperimentCommand::Riemann { input, q } => {
                let AnyFunction::Torus(h) = load_function(input.as_deref())? else {
                    return Err(Failure::Input(anyhow::anyhow!("expected a circle function")));
                };
                let r = riemann_experiment(&h, q)?;
                match format {
                    Format::Json => print_json(&r)?,
                    Format::Csv => print_records(
                        &["q", "discrete_mean", "lower_bound", "integral", "dominates"],
                        vec![vec![
                            r.q.to_string(),
                            r.discrete_mean.to_string(),
                            r.lower_bound.to_string(),
                            r.integral.to_string(),
                            r.dominates.to_string(),
                        ]],
                    )?,
                }
                let tol = tol.unwrap_or(1e-12);
                if !r.dominates || r.discrete_mean < r.lower_bound - tol {
                    return Err(Failure::Validation("discrete product is below the bound".into()));
                }
            }
            ExperimentCommand::Stirling { primes } => {
                let rows = stirling_table(&primes)?;
                match format {
                    Format::Json => print_json(&rows)?,
                    Format::Csv => print!("{}", stirling_csv(&rows)?),
                }
            }
            ExperimentCommand::Sublevel { input, levels } => {
                let AnyFunction::Torus(f) = load_function(input.as_deref())? else {
                    return Err(Failure::Input(anyhow::anyhow!("expected a circle function")));
                };
                print!("{}", sublevel_plot_csv(&f, levels)?);
            }
        },
        Command::Cutgen { row, function } => {
            let row: TableauRow = serde_json::from_str(&read_input(Some(&row))?)
                .context("parsing tableau row")?;
            let f = load_function(function.as_deref())?;
            let cut = emit_cut(&row, &f)?;
            match format {
                Format::Json => print_json(&cut)?,
                Format::Csv => print_records(
                    &["name", "coefficient"],
                    cut.terms
                        .iter()
                        .map(|t| vec![t.name.clone(), format_rational(&t.coefficient)])
                        .collect(),
                )?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("validation failed: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
