use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hardy_core::cont_ops::{hardy_avg, modified_hardy, ContReport};
use hardy_core::funcspace::{catalog, FunctionCatalog};
use hardy_core::report::{Check, Verdict};
use hardy_core::seq_ops::{hardy_ratio, sequence, DiscReport, SequenceCatalog};
use hardy_core::HardyError;
use hardy_harness::claims::{registry, run_suite};
use hardy_harness::config::{ConfigError, Format, SuiteConfig};
use hardy_harness::record::SuiteReport;
use hardy_harness::sweep::{parse_axis, sweep, Axis, Engines, Kind, SweepSpec};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hardy", version, about = "Hardy operators, their mean-zero corrections and log-weighted norms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// TOML suite configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    max_depth: Option<u32>,
    /// Quadrature rule: gk15, gk21 or gk31
    #[arg(long, global = true)]
    rule: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the claim suite
    Verify {
        /// Glob over claim ids, e.g. 'cont.*'; repeatable or comma-separated
        #[arg(long)]
        claims: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List claims and catalog families
    List,
    /// Continuous operators
    #[command(subcommand)]
    Cont(ContCmd),
    /// Discrete operators
    #[command(subcommand)]
    Disc(DiscCmd),
    /// Sweep any family; the catalog decides continuous or discrete
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum ContCmd {
    /// Qf(x) and Hf(x)
    Eval {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        x: f64,
    },
    /// Every functional and check for one function, as JSON
    Report {
        #[arg(long = "fn")]
        function: String,
    },
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum DiscCmd {
    /// Every functional and check for one sequence, as JSON
    Report {
        #[arg(long)]
        seq: String,
    },
    /// Σ(Γa)^p / Σa^p up to N, never extrapolated
    HardyRatio {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        p: f64,
        /// Horizon; defaults to the support, or 10^6
        #[arg(long)]
        n: Option<u64>,
    },
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    family: String,
    /// Grid axis NAME=LO:HI[:STEP]; repeatable
    #[arg(long = "param")]
    params: Vec<String>,
    /// Shorthand for --param m=RANGE
    #[arg(long)]
    m: Option<String>,
    /// Comma-separated subset of the functionals
    #[arg(long, value_delimiter = ',')]
    functionals: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    emit: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        match e {
            HardyError::Parse(_) | HardyError::Lookup(_) | HardyError::Parameter(_) => Failure::Config(e.to_string()),
            e => Failure::Run(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("hardy: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("hardy: {m}");
            ExitCode::from(1)
        }
    }
}

fn suite_config(g: &Global) -> Result<SuiteConfig, ConfigError> {
    let mut cfg = match &g.config {
        Some(p) => SuiteConfig::load(p)?,
        None => SuiteConfig::default(),
    };
    if let Some(v) = g.rel_tol {
        cfg.quad.rel_tol = v;
    }
    if let Some(v) = g.abs_tol {
        cfg.quad.abs_tol = v;
    }
    if let Some(v) = g.max_depth {
        cfg.quad.max_depth = v;
    }
    if let Some(v) = &g.rule {
        cfg.quad.rule = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Run(e.to_string())),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn checks_ok(cs: &[Check]) -> bool {
    cs.iter().all(|c| c.verdict.is_ok())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let mut cfg = suite_config(&cli.global)?;
    match cli.cmd {
        Cmd::Verify {
            claims,
            out,
            format,
            seed,
        } => {
            if !claims.is_empty() {
                cfg.claims = claims;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if out.is_some() {
                cfg.output.path = out;
            }
            if let Some(f) = format {
                cfg.output.format = f;
            }
            cfg.validate()?;
            let records = run_suite(&cfg)?;
            let report = SuiteReport::new(cfg.clone(), records);
            let text = match cfg.output.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            match &cfg.output.path {
                Some(p) => {
                    emit(&text, Some(p))?;
                    for r in &report.claims {
                        println!("{:<22} {:<24} {}", r.verdict.label(), r.id, r.detail);
                    }
                }
                None => emit(&text, None)?,
            }
            eprintln!(
                "{} claims: {}",
                report.summary.total,
                report
                    .summary
                    .counts
                    .iter()
                    .map(|(k, v)| format!("{v} {k}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(report.all_ok())
        }
        Cmd::List => {
            println!("claims:");
            for c in registry() {
                println!("  {:<24} [{}] {}", c.id(), c.topic().key(), c.statement());
            }
            println!("functions:");
            for f in FunctionCatalog::standard().families() {
                println!("  {:<14} {}", f.name(), f.description());
            }
            println!("sequences:");
            for f in SequenceCatalog::standard().families() {
                println!("  {:<14} {}", f.name(), f.description());
            }
            Ok(true)
        }
        Cmd::Cont(c) => {
            let q = cfg.quad_config();
            match c {
                ContCmd::Eval { function, x } => {
                    let f = catalog(&function)?;
                    let v = json!({
                        "function": f.name(),
                        "x": x,
                        "qf": hardy_avg(&f, x, &q)?,
                        "hf": modified_hardy(&f, x, &q).ok(),
                    });
                    emit(&pretty(&v), None)?;
                    Ok(true)
                }
                ContCmd::Report { function } => {
                    let r = ContReport::build(&catalog(&function)?, &q)?;
                    emit(&pretty(&r), None)?;
                    Ok(checks_ok(&r.checks))
                }
                ContCmd::Sweep(a) => run_sweep(a, Some(Kind::Cont), &cfg),
            }
        }
        Cmd::Disc(d) => match d {
            DiscCmd::Report { seq } => {
                let r = DiscReport::build(&sequence(&seq)?, &cfg.seq_config())?;
                emit(&pretty(&r), None)?;
                Ok(checks_ok(&r.checks))
            }
            DiscCmd::HardyRatio { seq, p, n } => {
                let a = sequence(&seq)?;
                let n = n.or(a.support()).unwrap_or(1_000_000);
                let r = hardy_ratio(&a, p, n)?;
                emit(&pretty(&r), None)?;
                Ok(r.verdict != Verdict::Fail)
            }
            DiscCmd::Sweep(a) => run_sweep(a, Some(Kind::Disc), &cfg),
        },
        Cmd::Sweep(a) => run_sweep(a, None, &cfg),
    }
}

fn run_sweep(a: SweepArgs, kind: Option<Kind>, cfg: &SuiteConfig) -> Result<bool, Failure> {
    let kind = match kind {
        Some(k) => k,
        None => Kind::of_family(&a.family)?,
    };
    let mut axes = a.params.iter().map(|p| parse_axis(p)).collect::<Result<Vec<Axis>, _>>()?;
    if let Some(m) = &a.m {
        axes.push(parse_axis(&format!("m={m}"))?);
    }
    let spec = SweepSpec {
        kind,
        family: a.family.clone(),
        axes,
        functionals: a.functionals.clone(),
    };
    let (q, s) = (cfg.quad_config(), cfg.seq_config());
    let t = sweep(&spec, &Engines { quad: &q, seq: &s })?;
    let text = match a.emit {
        Format::Json => t.to_json(),
        Format::Csv => t.to_csv(),
    };
    emit(&text, a.out.as_ref())?;
    Ok(t.footer.errors == 0)
}
