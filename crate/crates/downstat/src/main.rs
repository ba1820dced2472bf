//! `downstat` — command-line front end for the download-statistics pipeline.
//!
//! Subcommands: `ingest` (validate and canonicalise a corpus file),
//! `analyze` (full pipeline and summary report), `fit` (decay-model fit and
//! extrapolation), `generate` (synthetic corpora with ground-truth labels).
//! Diagnostics go to stderr; data goes to files. Exit codes: 0 success,
//! 1 input error, 2 numerical failure, 3 internal invariant violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use downstat::analysis::{
    fit_stratum, run_analysis, summary_table, AnalysisOptions, StratumChoice,
};
use downstat::bursts::{write_verdicts_csv, DeltaAveraging};
use downstat::corpus::Corpus;
use downstat::decayfit::DecayModel;
use downstat::error::{Error, Result};
use downstat::synchro::{AgeCdf, CdfWindow};
use downstat::synthgen::{generate, write_labels_csv, BurstInjection, GenSpec, NoiseModel};

#[derive(Parser)]
#[command(
    name = "downstat",
    version,
    about = "Analytics for monthly download counts of journal papers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StratumArg {
    Both,
    Oa,
    Nonoa,
}

impl From<StratumArg> for StratumChoice {
    fn from(s: StratumArg) -> Self {
        match s {
            StratumArg::Both => StratumChoice::Both,
            StratumArg::Oa => StratumChoice::Oa,
            StratumArg::Nonoa => StratumChoice::NonOa,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseArg {
    None,
    Counting,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Canonical corpus file (CSV).
    corpus: PathBuf,
    /// Directory for the summary and the plot data files.
    #[arg(long, default_value = "downstat-out")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = StratumArg::Both)]
    stratum: StratumArg,
    /// Burst criterion on delta / <delta>.
    #[arg(long, default_value_t = downstat::bursts::DEFAULT_CRITICAL_RATIO)]
    critical_ratio: f64,
    /// Fixed critical RMSD (default: knee of the RMSD survival curve).
    #[arg(long)]
    critical_rmsd: Option<f64>,
    /// Months ignored by the attractiveness sign rule.
    #[arg(long, default_value_t = downstat::attract::DEFAULT_BURN_IN)]
    burnin: u32,
    /// Window spans for model-extrapolated age distributions.
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    extrapolate: Vec<u32>,
    /// Average burst deviations over the whole corpus instead of per
    /// publication cohort.
    #[arg(long)]
    corpus_wide_averaging: bool,
    /// Scan intermediate horizons in burst detection.
    #[arg(long)]
    scan: bool,
    /// Weight the decay fit by per-age support.
    #[arg(long)]
    weighted_fit: bool,
    /// Window months for the exported age CDFs.
    #[arg(long, value_delimiter = ',')]
    cdf_windows: Option<Vec<u32>>,
}

#[derive(Args)]
struct FitArgs {
    /// Canonical corpus file (CSV).
    corpus: PathBuf,
    /// Directory for the fit report and extrapolated distributions.
    #[arg(long, default_value = "downstat-out")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = StratumArg::Both)]
    stratum: StratumArg,
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    extrapolate: Vec<u32>,
    /// Weight the fit by per-age support.
    #[arg(long)]
    weighted_fit: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Output corpus file (CSV, ingestion format).
    #[arg(long)]
    output: PathBuf,
    /// Ground-truth labels file.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// JSON generator spec; overrides the individual flags below.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 78)]
    horizon: u32,
    #[arg(long, default_value_t = 64)]
    papers_per_month: u32,
    /// Restrict births to the first N months.
    #[arg(long)]
    birth_months: Option<u32>,
    /// Model density for the newest papers.
    #[arg(long, default_value_t = 100.0)]
    rho0: f64,
    /// Weight of the fast decay factor.
    #[arg(long, default_value_t = 0.84)]
    weight: f64,
    /// Fast decay constant per month.
    #[arg(long, default_value_t = 0.86)]
    b1: f64,
    /// Slow decay constant per month.
    #[arg(long, default_value_t = 0.02)]
    b2: f64,
    #[arg(long, value_enum, default_value_t = NoiseArg::Counting)]
    noise: NoiseArg,
    /// Fraction of eligible papers receiving a burst.
    #[arg(long)]
    burst_fraction: Option<f64>,
    /// Age (months after publication) of the injected burst.
    #[arg(long, default_value_t = 12)]
    burst_month: u32,
    /// Multiplier applied to the burst month's count.
    #[arg(long, default_value_t = 50.0)]
    burst_multiplier: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a corpus file and write its canonical form.
    Ingest { input: PathBuf, output: PathBuf },
    /// Run the full analysis pipeline and write the summary report.
    Analyze(AnalyzeArgs),
    /// Fit the two-factor decay model and extrapolate.
    Fit(FitArgs),
    /// Generate a synthetic corpus with ground-truth labels.
    Generate(GenerateArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("downstat: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { input, output } => cmd_ingest(&input, &output),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Generate(args) => cmd_generate(args),
    }
}

fn cmd_ingest(input: &Path, output: &Path) -> Result<()> {
    let corpus = Corpus::read_csv_path(input)?;
    corpus.write_csv_path(output)?;
    eprintln!(
        "ingested {} papers over {} months ({} downloads)",
        corpus.len(),
        corpus.horizon(),
        corpus.total_downloads()
    );
    Ok(())
}

fn cdf_file_suffix(cdf: &AgeCdf) -> String {
    match &cdf.window {
        CdfWindow::Calendar(m) => format!("month{:03}", m.0),
        CdfWindow::Pooled(months) => {
            let first = months.first().map(|m| m.0).unwrap_or(0);
            let last = months.last().map(|m| m.0).unwrap_or(0);
            format!("pooled{first:03}-{last:03}")
        }
        CdfWindow::Extrapolated(span) => format!("model{span:03}"),
    }
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let corpus = Corpus::read_csv_path(&args.corpus)?;
    let opts = AnalysisOptions {
        critical_ratio: args.critical_ratio,
        critical_rmsd: args.critical_rmsd,
        burn_in: args.burnin,
        extrapolate: args.extrapolate.clone(),
        averaging: if args.corpus_wide_averaging {
            DeltaAveraging::CorpusWide
        } else {
            DeltaAveraging::Cohort
        },
        scan: args.scan,
        weighted_fit: args.weighted_fit,
        cdf_windows: args.cdf_windows.clone(),
    };
    let (report, artifacts) = run_analysis(&corpus, args.stratum.into(), &opts)?;

    fs::create_dir_all(&args.out_dir)?;
    let json = serde_json::to_string_pretty(&report)?;
    fs::write(args.out_dir.join("summary.json"), json.as_bytes())?;
    fs::write(args.out_dir.join("summary.txt"), summary_table(&report).as_bytes())?;

    for art in &artifacts {
        let name = &art.stratum;
        if let Some(d) = &art.density {
            write_file(&args.out_dir.join(format!("density_{name}.csv")), |w| d.write_csv(w))?;
        }
        for cdf in &art.cdfs {
            let suffix = cdf_file_suffix(cdf);
            write_file(&args.out_dir.join(format!("age_cdf_{name}_{suffix}.csv")), |w| {
                cdf.write_csv(w)
            })?;
        }
        if let Some(cdf) = &art.pooled_cdf {
            let suffix = cdf_file_suffix(cdf);
            write_file(&args.out_dir.join(format!("age_cdf_{name}_{suffix}.csv")), |w| {
                cdf.write_csv(w)
            })?;
        }
        for cdf in &art.model_cdfs {
            let suffix = cdf_file_suffix(cdf);
            write_file(&args.out_dir.join(format!("age_cdf_{name}_{suffix}.csv")), |w| {
                cdf.write_csv(w)
            })?;
        }
        if let Some(m) = &art.median {
            write_file(&args.out_dir.join(format!("median_{name}.csv")), |w| m.write_csv(w))?;
        }
        if !art.verdicts.is_empty() {
            write_file(&args.out_dir.join(format!("bursts_{name}.csv")), |w| {
                write_verdicts_csv(&art.verdicts, w)
            })?;
        }
        if let Some(d) = &art.durability {
            write_file(&args.out_dir.join(format!("durability_{name}.csv")), |w| d.write_csv(w))?;
        }
        if let Some(a) = &art.attract {
            write_file(&args.out_dir.join(format!("attract_{name}.csv")), |w| a.write_csv(w))?;
        }
        if !art.durability_medians.is_empty() {
            write_file(
                &args.out_dir.join(format!("durability_medians_{name}.csv")),
                |w| write_class_medians(&art.durability_medians, w),
            )?;
        }
        if !art.attract_medians.is_empty() {
            write_file(&args.out_dir.join(format!("attract_medians_{name}.csv")), |w| {
                write_class_medians(&art.attract_medians, w)
            })?;
        }
    }

    eprintln!("analysis written to {}", args.out_dir.display());
    for s in &report.strata {
        if let Some(fit) = &s.fit {
            if !fit.converged {
                return Err(Error::NonConvergence);
            }
        }
    }
    Ok(())
}

fn write_class_medians(
    medians: &[(String, downstat::diachrono::MedianCurve)],
    w: &mut Vec<u8>,
) -> Result<()> {
    writeln!(w, "class,age,median,support")?;
    for (label, curve) in medians {
        for (age, (v, s)) in curve.values().iter().zip(curve.support()).enumerate() {
            writeln!(w, "{label},{age},{v},{s}")?;
        }
    }
    Ok(())
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    let corpus = Corpus::read_csv_path(&args.corpus)?;
    fs::create_dir_all(&args.out_dir)?;
    let choice: StratumChoice = args.stratum.into();
    let selections: Vec<(&str, bool)> = match choice {
        StratumChoice::Both => vec![("non_oa", false), ("oa", true)],
        StratumChoice::NonOa => vec![("non_oa", false)],
        StratumChoice::Oa => vec![("oa", true)],
    };
    let mut any_unconverged = false;
    for (name, oa) in selections {
        let sub = corpus.stratum(oa);
        if sub.is_empty() {
            eprintln!("stratum {name}: absent (no papers)");
            continue;
        }
        let (fit, density, cdfs) = fit_stratum(&sub, args.weighted_fit, &args.extrapolate)?;
        let json = serde_json::to_string_pretty(&fit)?;
        fs::write(args.out_dir.join(format!("fit_{name}.json")), json.as_bytes())?;
        write_file(&args.out_dir.join(format!("density_{name}.csv")), |w| {
            density.write_csv(w)
        })?;
        for cdf in &cdfs {
            let suffix = cdf_file_suffix(cdf);
            write_file(&args.out_dir.join(format!("age_cdf_{name}_{suffix}.csv")), |w| {
                cdf.write_csv(w)
            })?;
        }
        eprintln!(
            "stratum {name}: rho0={:.4} A={:.4} b1={:.4} b2={:.4} (residual {:.4}, {})",
            fit.model.rho0(),
            fit.model.weight(),
            fit.model.b1(),
            fit.model.b2(),
            fit.residual_norm,
            if fit.converged { "converged" } else { "not converged" },
        );
        any_unconverged |= !fit.converged;
    }
    if any_unconverged {
        return Err(Error::NonConvergence);
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec: GenSpec = match &args.spec {
        Some(path) => serde_json::from_slice(&fs::read(path)?)?,
        None => GenSpec {
            horizon: args.horizon,
            papers_per_month: args.papers_per_month,
            birth_months: args.birth_months,
            model: DecayModel::new(args.rho0, args.weight, args.b1, args.b2)?,
            noise: match args.noise {
                NoiseArg::None => NoiseModel::None,
                NoiseArg::Counting => NoiseModel::Counting,
            },
            bursts: args.burst_fraction.map(|fraction| BurstInjection {
                fraction,
                burst_month: args.burst_month,
                multiplier: args.burst_multiplier,
            }),
            mixture: None,
            seed: args.seed,
        },
    };
    let generated = generate(&spec)?;
    generated.corpus.write_csv_path(&args.output)?;
    if let Some(labels_path) = &args.labels {
        write_file(labels_path, |w| write_labels_csv(&generated.labels, w))?;
    }
    eprintln!(
        "generated {} papers over {} months into {}",
        generated.corpus.len(),
        generated.corpus.horizon(),
        args.output.display()
    );
    Ok(())
}
