use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use freqbound::bounds::{self, InequalityId, Verdict};
use freqbound::onedim::{self, DEFAULT_FLAT_NODES};
use freqbound::solver;
use freqbound_cli::{output, resolve_family, resolve_shape, run_suite, RunConfig};

#[derive(Parser)]
#[command(name = "freqbound", version, about = "Torsional rigidity and principal frequency bounds")]
struct Cli {
    /// Run configuration, TOML (`.toml`) or JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; `FREQ_OUT` takes precedence.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the suite.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Principal frequency λ_{2,q} of one shape.
    Compute {
        /// Shape file, inline JSON, or a single family item such as `disk`.
        #[arg(long)]
        shape: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Evaluate the inequalities on one shape.
    Verify {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        q: f64,
        /// Comma-separated inequality ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<InequalityId>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Scan `R^β λ |Ω|^α` over a family.
    Scan {
        /// Family file or descriptor.
        #[arg(long, default_value = "default")]
        family: String,
        #[arg(long)]
        q: f64,
        /// `lo:hi:step`
        #[arg(long, allow_hyphen_values = true, default_value = "-1:3:0.5")]
        alpha: String,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Slab asymptotics `λ(S_L)/L` against `π_{2,q}²`.
    Slab {
        #[arg(long)]
        q: f64,
        #[arg(long = "L", value_delimiter = ',', default_value = "2,4,8,16")]
        lengths: Vec<f64>,
        #[arg(long)]
        h: Option<f64>,
    },
    /// One-dimensional constant `π_{2,q}`.
    Pi2q {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_FLAT_NODES)]
        n: usize,
    },
    /// Full configured run writing every report file.
    Suite {
        /// Overrides the configured exponents.
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
        /// Overrides the configured family descriptor.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        property_trials: Option<usize>,
    },
}

struct Settings {
    config: RunConfig,
    /// Where files go; commands other than `suite` write nothing without it.
    out: Option<PathBuf>,
}

fn context(cli: &Cli) -> Result<Settings> {
    let (mut config, from_file) = match &cli.config {
        Some(p) => (RunConfig::load(p)?, true),
        None => (RunConfig::default(), false),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(j) = cli.jobs {
        config.jobs = j;
    }
    let env = std::env::var_os("FREQ_OUT").filter(|v| !v.is_empty()).map(PathBuf::from);
    let out = env
        .or_else(|| cli.out.clone())
        .or_else(|| from_file.then(|| config.out_dir.clone()));
    if let Some(o) = &out {
        config.out_dir = o.clone();
    }
    config.validate()?;
    Ok(Settings { config, out })
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    writeln!(stdout)?;
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn json_bytes(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = context(&cli)?;
    let mut cfg = ctx.config;
    match cli.command {
        Command::Compute { shape, q, h } => {
            cfg.h = h.or(cfg.h);
            cfg.validate()?;
            let named = resolve_shape(&shape, cfg.seed)?;
            let result = solver::lambda_2q(&named.shape, q, &cfg.solver())?;
            print_json(&result)?;
            if let Some(dir) = &ctx.out {
                write_file(dir, &format!("compute-{}.json", named.id), &json_bytes(&result)?)?;
            }
            Ok(0)
        }
        Command::Verify { shape, q, checks, h } => {
            cfg.h = h.or(cfg.h);
            cfg.validate()?;
            let named = resolve_shape(&shape, cfg.seed)?;
            let only = (!checks.is_empty()).then_some(checks.as_slice());
            let reports = bounds::verify(&named, q, &cfg.solver(), only)?;
            print_json(&reports)?;
            if let Some(dir) = &ctx.out {
                write_file(dir, "verify.json", &json_bytes(&reports)?)?;
                let mut csv = Vec::new();
                output::bounds_csv(&reports, &mut csv)?;
                write_file(dir, "verify.csv", &csv)?;
            }
            let violated = reports.iter().any(|r| r.verdict == Verdict::Violated);
            Ok(if violated { 2 } else { 0 })
        }
        Command::Scan {
            family,
            q,
            alpha,
            h,
            format,
        } => {
            cfg.h = h.or(cfg.h);
            cfg.validate()?;
            let shapes = resolve_family(&family, cfg.seed)?;
            let alphas = bounds::parse_alpha_range(&alpha)?;
            let scan = bounds::alpha_scan_family(&shapes, q, &alphas, &cfg.solver())?;
            let mut tsv = Vec::new();
            output::alpha_tsv(&scan, &mut tsv)?;
            match format {
                Format::Json => print_json(&scan)?,
                Format::Tsv => std::io::stdout().lock().write_all(&tsv)?,
            }
            if let Some(dir) = &ctx.out {
                write_file(dir, &format!("alpha_scan_q{q}.tsv"), &tsv)?;
                write_file(dir, &format!("alpha_scan_q{q}.json"), &json_bytes(&scan)?)?;
            }
            Ok(0)
        }
        Command::Slab { q, lengths, h } => {
            cfg.h = h.or(cfg.h);
            cfg.validate()?;
            let slab = bounds::slab_asymptotics(q, &lengths, &cfg.solver())?;
            print_json(&slab)?;
            if let Some(dir) = &ctx.out {
                let mut tsv = Vec::new();
                output::slabs_tsv(std::slice::from_ref(&slab), &mut tsv)?;
                write_file(dir, "slabs.tsv", &tsv)?;
            }
            Ok(if slab.holds { 0 } else { 2 })
        }
        Command::Pi2q { q, n } => {
            let p = onedim::pi_2q(q, n)?;
            print_json(&p)?;
            Ok(0)
        }
        Command::Suite {
            q,
            family,
            property_trials,
        } => {
            if !q.is_empty() {
                cfg.q = q;
            }
            if let Some(f) = family {
                cfg.family = f;
            }
            if let Some(t) = property_trials {
                cfg.property_trials = t;
            }
            cfg.validate()?;
            let report = run_suite(&cfg)?;
            let files = output::write_suite(&report, &cfg.out_dir)?;
            #[derive(Serialize)]
            struct Summary<'a> {
                exit_code: i32,
                counts: &'a freqbound_cli::suite::VerdictCounts,
                failures: usize,
                files: Vec<PathBuf>,
            }
            print_json(&Summary {
                exit_code: report.exit_code,
                counts: &report.counts,
                failures: report.failures.len(),
                files,
            })?;
            Ok(report.exit_code as u8)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
