//! `eo-region`: analyze finite discrete data sources for the tension
//! between accuracy and equal opportunity.
//!
//! Exit codes: 0 success; 1 input, validation, or I/O failure; 2 when the
//! opportunity difference is undefined for the source (a protected group
//! carries no positive labels). Failures print a JSON object
//! `{"error": kind, "message": text}` on standard error.

mod io;
mod render;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eo_region::construct::{self, algorithm1, impossibility_source};
use eo_region::distribution::PredictorVec;
use eo_region::fairopt::{compatibility_verdict, min_error_eo};
use eo_region::metrics::{self, Tie};
use eo_region::region::zonotope_region;
use eo_region::DataSource;

use io::CliError;
use render::PlotSpec;
use report::*;

#[derive(Parser)]
#[command(
    name = "eo-region",
    version,
    about = "Feasible (error, opportunity-difference) regions, optimal equal-opportunity predictors, and impossibility instances for finite discrete data sources"
)]
struct Cli {
    /// Worker threads for parallel enumeration (falls back to the
    /// EO_REGION_THREADS environment variable, then to all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full metric and compatibility report for a source.
    Analyze {
        /// Distribution JSON (or a sample CSV with --samples).
        input: PathBuf,
        /// Treat the input as a CSV of samples with header x,a,y.
        #[arg(long)]
        samples: bool,
        /// Reject zero-mass rows instead of dropping them.
        #[arg(long)]
        strict: bool,
    },
    /// Export the feasible (error, opportunity-difference) region.
    Region {
        /// Distribution JSON.
        input: PathBuf,
        /// Write a deterministic SVG figure to this path.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// Write vertex rows `error,opp_diff` to this path.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Write the polygon JSON document to this path.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Reject zero-mass rows instead of dropping them.
        #[arg(long)]
        strict: bool,
    },
    /// Generate a certified impossibility instance from a seed.
    Generate {
        /// RNG seed; the same seed always produces the same instance.
        #[arg(long)]
        seed: u64,
        /// Output path for the distribution JSON; a constraint sidecar
        /// is written next to it with extension .meta.json.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Most accurate predictor with |opportunity difference| <= eps.
    Optimal {
        /// Distribution JSON.
        input: PathBuf,
        /// Relaxation bound on |opportunity difference| (0 = exact EO).
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Reject zero-mass rows instead of dropping them.
        #[arg(long)]
        strict: bool,
    },
    /// Report the sufficiency masses, tau*, and the constructive
    /// equal-opportunity predictor when the sufficient condition holds.
    Check {
        /// Distribution JSON.
        input: PathBuf,
        /// Reject zero-mass rows instead of dropping them.
        #[arg(long)]
        strict: bool,
    },
    /// Estimate a distribution from a sample CSV and write it as JSON.
    Ingest {
        /// Sample CSV with header x,a,y.
        input: PathBuf,
        /// Output path for the distribution JSON.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version exit 0; usage errors fall under exit 1.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads(cli.threads);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.kind, "message": e.message })
            );
            ExitCode::from(e.code as u8)
        }
    }
}

fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| match std::env::var("EO_REGION_THREADS") {
        Ok(s) => match s.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                eprintln!("warning: ignoring invalid EO_REGION_THREADS value {s:?}");
                None
            }
        },
        Err(_) => None,
    });
    if let Some(n) = n {
        #[cfg(feature = "parallel")]
        {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        #[cfg(not(feature = "parallel"))]
        eprintln!("warning: built without the parallel feature; --threads {n} has no effect");
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze {
            input,
            samples,
            strict,
        } => {
            let source = if samples {
                io::load_samples(&input)?
            } else {
                io::load_source(&input, strict)?
            };
            cmd_analyze(&source)
        }
        Command::Region {
            input,
            svg,
            csv,
            json,
            strict,
        } => cmd_region(&io::load_source(&input, strict)?, svg, csv, json),
        Command::Generate { seed, out } => cmd_generate(seed, &out),
        Command::Optimal { input, eps, strict } => {
            cmd_optimal(&io::load_source(&input, strict)?, eps)
        }
        Command::Check { input, strict } => cmd_check(&io::load_source(&input, strict)?),
        Command::Ingest { input, out } => cmd_ingest(&input, &out),
    }
}

fn predictor_report(source: &DataSource, f: &PredictorVec) -> Result<PredictorReport, CliError> {
    let pt = metrics::metric_point(source, f)?;
    Ok(PredictorReport {
        qhat: f.pointwise(source),
        error: pt.error,
        opp_diff: pt.opp_diff,
    })
}

fn cmd_analyze(source: &DataSource) -> Result<(), CliError> {
    let bayes = metrics::bayes(source, Tie::Strict);
    let bayes_opp_diff = metrics::opp_diff(source, &bayes)?;
    let v = compatibility_verdict(source)?;
    let witness = match &v.witness {
        Some(f) => Some(predictor_report(source, f)?),
        None => None,
    };
    let report = AnalyzeReport {
        tau: v.trivial_accuracy,
        tau_star: v.tau_star,
        bayes_accuracy: v.bayes_accuracy,
        bayes_opp_diff,
        min_eo_error: v.min_eo_error,
        compatible: v.compatible,
        certificate: certificate_str(v.certificate),
        witness,
    };
    print!("{}", io::to_json_pretty(&report));
    Ok(())
}

fn cmd_region(
    source: &DataSource,
    svg: Option<PathBuf>,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<(), CliError> {
    let region = zonotope_region(source)?;
    let doc = region.to_doc(source);
    if let Some(path) = &svg {
        let spec = PlotSpec::default();
        io::write_text(path, &render::render_svg(&spec, source, &region)?)?;
    }
    if let Some(path) = &csv {
        io::write_text(path, &io::polygon_csv(&region))?;
    }
    if let Some(path) = &json {
        io::write_text(path, &io::to_json_pretty(&doc))?;
    }
    if svg.is_none() && csv.is_none() && json.is_none() {
        print!("{}", io::to_json_pretty(&doc));
    }
    Ok(())
}

fn cmd_generate(seed: u64, out: &std::path::Path) -> Result<(), CliError> {
    let instance = algorithm1(seed);
    let source = impossibility_source(&instance)?;
    io::write_text(out, &io::to_json_pretty(&source.to_doc()))?;

    let [c1, c2, c3, c4, c5] = instance.constraints();
    let sidecar = GenerateSidecar {
        seed,
        p: instance.p,
        q: instance.q,
        constraints: ConstraintFlags { c1, c2, c3, c4, c5 },
    };
    io::write_text(&out.with_extension("meta.json"), &io::to_json_pretty(&sidecar))?;

    let v = compatibility_verdict(&source)?;
    let summary = GenerateSummary {
        seed,
        compatible: v.compatible,
        certificate: certificate_str(v.certificate),
        min_eo_error: v.min_eo_error,
        trivial_error: 1.0 - v.trivial_accuracy,
        tau_star: v.tau_star,
    };
    print!("{}", io::to_json_pretty(&summary));
    Ok(())
}

fn cmd_optimal(source: &DataSource, eps: f64) -> Result<(), CliError> {
    if !(0.0..=2.0).contains(&eps) {
        return Err(CliError::input(
            "bad_flag",
            format!("--eps must lie in [0, 2], got {eps}"),
        ));
    }
    let (f, error) = min_error_eo(source, eps)?;
    let opp_diff = metrics::opp_diff(source, &f)?;
    let qhat = f.pointwise(source);
    let rows = source
        .rows()
        .iter()
        .zip(&qhat)
        .map(|(r, &qhat)| OptimalRow {
            x: r.x_label.clone(),
            a: r.a,
            qhat,
        })
        .collect();
    let report = OptimalReport {
        eps,
        rows,
        error,
        opp_diff,
    };
    print!("{}", io::to_json_pretty(&report));
    Ok(())
}

fn cmd_check(source: &DataSource) -> Result<(), CliError> {
    let sufficiency = construct::check_sufficiency(source);
    let witness = if sufficiency.holds {
        let f = construct::sufficiency_predictor(source)?;
        let pt = metrics::metric_point(source, &f)?;
        Some(CheckWitness {
            qhat: f.pointwise(source),
            error: pt.error,
            opp_diff: pt.opp_diff,
            accuracy: 1.0 - pt.error,
        })
    } else {
        None
    };
    let report = CheckReport {
        mass_above: sufficiency.mass_above,
        mass_below: sufficiency.mass_below,
        holds: sufficiency.holds,
        tau_star: metrics::tau_star(source),
        nontrivial_exists: eo_region::fairopt::nontrivial_exists(source),
        witness,
    };
    print!("{}", io::to_json_pretty(&report));
    Ok(())
}

fn cmd_ingest(input: &std::path::Path, out: &std::path::Path) -> Result<(), CliError> {
    let source = io::load_samples(input)?;
    io::write_text(out, &io::to_json_pretty(&source.to_doc()))?;
    print!("{}", io::to_json_pretty(&IngestSummary { rows: source.len() }));
    Ok(())
}
