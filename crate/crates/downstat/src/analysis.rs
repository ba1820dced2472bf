//! Full analysis pipeline and the summary report.
//!
//! Per stratum: detect bursty papers, exclude them, fit the two-factor
//! model to the synchronous age density, classify the non-bursty papers by
//! half-life durability and RMSD attractiveness, and collect plot-ready
//! artifacts for every stage. The [`SummaryReport`] mirrors the three
//! categorisations (burstiness, half-lives, overall attractiveness) with
//! counts and percentage shares.

use std::collections::HashSet;

use serde::Serialize;

use crate::attract::{
    classify_attractiveness, AttractClass, AttractSubclass, AttractivenessSummary,
    ThresholdSource,
};
use crate::bursts::{detect_bursty_with, BurstOptions, BurstVerdict, DeltaAveraging};
use crate::corpus::{CalendarMonth, Corpus};
use crate::decayfit::{fit_two_factor_with, model_age_cdf, FitOptions, FitResult};
use crate::diachrono::{median_curve, MedianCurve};
use crate::durability::{classify_durability, DurabilityClass, DurabilitySummary};
use crate::error::{Error, Result};
use crate::synchro::{age_cdf, age_cdf_pooled, age_density, AgeCdf, AgeDensity};

/// Number of representative window months exported for the age-CDF plots.
const DEFAULT_CDF_WINDOWS: u32 = 10;

/// How many trailing months the pooled recent-window CDF spans.
const POOLED_WINDOW_MONTHS: u32 = 3;

/// Pipeline configuration; every critical value is a flag with the standard
/// operating point as its default.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    /// Burst criterion: flag papers with `delta / <delta> >=` this ratio.
    pub critical_ratio: f64,
    /// Critical RMSD override; `None` estimates the knee per stratum.
    pub critical_rmsd: Option<f64>,
    /// Months ignored by the attractiveness sign rule.
    pub burn_in: u32,
    /// Window spans for the model-extrapolated age distributions.
    pub extrapolate: Vec<u32>,
    pub averaging: DeltaAveraging,
    /// Scan intermediate horizons in burst detection.
    pub scan: bool,
    /// Weight the decay fit by per-age support.
    pub weighted_fit: bool,
    /// Window months for the exported age CDFs (default: spread over the
    /// calendar).
    pub cdf_windows: Option<Vec<u32>>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            critical_ratio: crate::bursts::DEFAULT_CRITICAL_RATIO,
            critical_rmsd: None,
            burn_in: crate::attract::DEFAULT_BURN_IN,
            extrapolate: vec![100, 200, 400],
            averaging: DeltaAveraging::Cohort,
            scan: false,
            weighted_fit: false,
            cdf_windows: None,
        }
    }
}

/// A count together with its percentage share of the relevant total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassShare {
    pub count: usize,
    pub share_percent: f64,
}

fn share(count: usize, denom: usize) -> ClassShare {
    ClassShare {
        count,
        share_percent: if denom == 0 { 0.0 } else { 100.0 * count as f64 / denom as f64 },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BurstSection {
    pub bursty: ClassShare,
    pub non_bursty: ClassShare,
    pub sleeping_beauties: usize,
    pub early_bursts: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DurabilitySection {
    pub p25: u32,
    pub p75: u32,
    pub usual: ClassShare,
    pub flash_in_the_pan: ClassShare,
    pub delayed: ClassShare,
    pub skipped_zero_download: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractSection {
    pub critical_rmsd: f64,
    pub threshold_source: String,
    pub typical: ClassShare,
    pub atypical: ClassShare,
    pub more_attractive: ClassShare,
    pub less_attractive: ClassShare,
    pub cross_from_below: ClassShare,
    pub cross_from_above: ClassShare,
}

/// Report for one stratum; sections are absent when the stratum is empty
/// (or, for the classifications, when every paper was bursty).
#[derive(Debug, Clone, Serialize)]
pub struct StratumSummary {
    pub stratum: String,
    pub present: bool,
    pub papers: usize,
    pub total_downloads: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bursts: Option<BurstSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub durability: Option<DurabilitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attractiveness: Option<AttractSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitResult>,
}

impl StratumSummary {
    fn absent(name: &str) -> Self {
        StratumSummary {
            stratum: name.to_string(),
            present: false,
            papers: 0,
            total_downloads: 0,
            bursts: None,
            durability: None,
            attractiveness: None,
            fit: None,
        }
    }
}

/// Top-level analysis report across the requested strata.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub horizon: u32,
    pub strata: Vec<StratumSummary>,
}

/// Plot-ready data produced alongside a stratum's summary.
#[derive(Debug, Clone)]
pub struct StratumArtifacts {
    pub stratum: String,
    pub density: Option<AgeDensity>,
    /// Observed-window age CDFs (windows without downloads are skipped).
    pub cdfs: Vec<AgeCdf>,
    /// Age CDF pooled over the most recent months.
    pub pooled_cdf: Option<AgeCdf>,
    /// Model-extrapolated CDFs, one per requested span.
    pub model_cdfs: Vec<AgeCdf>,
    /// Median cumulative baseline of the non-bursty papers.
    pub median: Option<MedianCurve>,
    pub verdicts: Vec<BurstVerdict>,
    pub durability: Option<DurabilitySummary>,
    pub attract: Option<AttractivenessSummary>,
    /// Median cumulative curves per durability class.
    pub durability_medians: Vec<(String, MedianCurve)>,
    /// Median cumulative curves per attractiveness (sub)class.
    pub attract_medians: Vec<(String, MedianCurve)>,
}

impl StratumArtifacts {
    fn empty(name: &str) -> Self {
        StratumArtifacts {
            stratum: name.to_string(),
            density: None,
            cdfs: Vec::new(),
            pooled_cdf: None,
            model_cdfs: Vec::new(),
            median: None,
            verdicts: Vec::new(),
            durability: None,
            attract: None,
            durability_medians: Vec::new(),
            attract_medians: Vec::new(),
        }
    }
}

/// Which strata an analysis covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratumChoice {
    Both,
    Oa,
    NonOa,
}

impl StratumChoice {
    fn selections(self) -> Vec<(&'static str, bool)> {
        match self {
            StratumChoice::Both => vec![("non_oa", false), ("oa", true)],
            StratumChoice::NonOa => vec![("non_oa", false)],
            StratumChoice::Oa => vec![("oa", true)],
        }
    }
}

fn default_cdf_windows(horizon: u32) -> Vec<u32> {
    let k = DEFAULT_CDF_WINDOWS.min(horizon);
    if k <= 1 {
        return vec![horizon];
    }
    let mut months: Vec<u32> = (0..k)
        .map(|i| 1 + (i as u64 * (horizon as u64 - 1) / (k as u64 - 1)) as u32)
        .collect();
    months.dedup();
    months
}

/// Run the full pipeline on one stratum sub-corpus.
pub fn analyze_stratum(
    sub: &Corpus,
    name: &str,
    opts: &AnalysisOptions,
) -> Result<(StratumSummary, StratumArtifacts)> {
    if sub.is_empty() {
        return Ok((StratumSummary::absent(name), StratumArtifacts::empty(name)));
    }
    let total = sub.len();
    let horizon = sub.horizon();

    // burst detection and exclusion
    let verdicts = detect_bursty_with(
        sub,
        BurstOptions {
            critical_ratio: opts.critical_ratio,
            averaging: opts.averaging,
            scan: opts.scan,
        },
    )?;
    let bursty_ids: HashSet<&str> = verdicts
        .iter()
        .filter(|v| v.bursty)
        .map(|v| v.paper_id.as_str())
        .collect();
    let sleeping = verdicts.iter().filter(|v| v.sleeping_beauty).count();
    let n_bursty = bursty_ids.len();
    let non_bursty = sub.filtered(|p| !bursty_ids.contains(p.paper_id.as_str()));
    if n_bursty + non_bursty.len() != total {
        return Err(Error::Internal("bursty and non-bursty papers do not partition".into()));
    }
    let burst_section = BurstSection {
        bursty: share(n_bursty, total),
        non_bursty: share(non_bursty.len(), total),
        sleeping_beauties: sleeping,
        early_bursts: n_bursty - sleeping,
    };

    // synchronous density over the full calendar and the model fit
    let all_windows: Vec<CalendarMonth> = (1..=horizon).map(CalendarMonth).collect();
    let density = age_density(sub, &all_windows)?;
    let fit = fit_two_factor_with(
        &density,
        None,
        FitOptions { weighted: opts.weighted_fit, ..FitOptions::default() },
    )?;

    // classifications of the non-bursty papers
    let (median, durability, attract) = if non_bursty.is_empty() {
        (None, None, None)
    } else {
        let median = median_curve(&non_bursty)?;
        let durability = classify_durability(&non_bursty)?;
        let attract =
            classify_attractiveness(&non_bursty, &median, opts.critical_rmsd, opts.burn_in)?;
        (Some(median), Some(durability), Some(attract))
    };

    let durability_section = durability.as_ref().map(|d| {
        let denom = d.records.len();
        DurabilitySection {
            p25: d.p25,
            p75: d.p75,
            usual: share(d.count(DurabilityClass::Usual), denom),
            flash_in_the_pan: share(d.count(DurabilityClass::FlashInThePan), denom),
            delayed: share(d.count(DurabilityClass::Delayed), denom),
            skipped_zero_download: d.skipped_zero_download,
        }
    });
    if let (Some(d), Some(sec)) = (&durability, &durability_section) {
        if sec.usual.count + sec.flash_in_the_pan.count + sec.delayed.count != d.records.len()
            || d.records.len() + d.skipped_zero_download != non_bursty.len()
        {
            return Err(Error::Internal("durability classes do not partition".into()));
        }
    }

    let attract_section = attract.as_ref().map(|a| {
        let denom = a.records.len();
        AttractSection {
            critical_rmsd: a.critical_rmsd,
            threshold_source: match a.source {
                ThresholdSource::Knee => "knee".to_string(),
                ThresholdSource::Override => "override".to_string(),
            },
            typical: share(a.count_class(AttractClass::Typical), denom),
            atypical: share(a.count_class(AttractClass::Atypical), denom),
            more_attractive: share(a.count_subclass(AttractSubclass::MoreAttractive), denom),
            less_attractive: share(a.count_subclass(AttractSubclass::LessAttractive), denom),
            cross_from_below: share(a.count_subclass(AttractSubclass::CrossFromBelow), denom),
            cross_from_above: share(a.count_subclass(AttractSubclass::CrossFromAbove), denom),
        }
    });
    if let (Some(a), Some(sec)) = (&attract, &attract_section) {
        let subs = sec.more_attractive.count
            + sec.less_attractive.count
            + sec.cross_from_below.count
            + sec.cross_from_above.count;
        if sec.typical.count + sec.atypical.count != a.records.len()
            || subs != sec.atypical.count
            || a.records.len() != non_bursty.len()
        {
            return Err(Error::Internal("attractiveness classes do not partition".into()));
        }
    }

    // plot-ready artifacts
    let window_months = opts
        .cdf_windows
        .clone()
        .unwrap_or_else(|| default_cdf_windows(horizon));
    let mut cdfs = Vec::new();
    for m in window_months {
        match age_cdf(sub, CalendarMonth(m)) {
            Ok(cdf) => cdfs.push(cdf),
            Err(Error::NoDownloadsInWindow) => {}
            Err(e) => return Err(e),
        }
    }
    let pooled_from = horizon.saturating_sub(POOLED_WINDOW_MONTHS - 1).max(1);
    let pooled_months: Vec<CalendarMonth> = (pooled_from..=horizon).map(CalendarMonth).collect();
    let pooled_cdf = match age_cdf_pooled(sub, &pooled_months) {
        Ok(cdf) => Some(cdf),
        Err(Error::NoDownloadsInWindow) => None,
        Err(e) => return Err(e),
    };
    let mut model_cdfs = Vec::new();
    for &span in &opts.extrapolate {
        model_cdfs.push(model_age_cdf(&fit.model, span)?);
    }

    let mut durability_medians = Vec::new();
    if let Some(d) = &durability {
        durability_medians.extend(class_medians(
            &non_bursty,
            d.records.iter().map(|r| (r.paper_id.as_str(), r.class.as_str())),
        ));
        if let Ok(all) = median_curve(&non_bursty) {
            durability_medians.push(("all_non_bursty".to_string(), all));
        }
    }
    let mut attract_medians = Vec::new();
    if let Some(a) = &attract {
        attract_medians.extend(class_medians(
            &non_bursty,
            a.records.iter().map(|r| {
                (
                    r.paper_id.as_str(),
                    r.subclass.map(|s| s.as_str()).unwrap_or("typical"),
                )
            }),
        ));
    }

    let summary = StratumSummary {
        stratum: name.to_string(),
        present: true,
        papers: total,
        total_downloads: sub.total_downloads(),
        bursts: Some(burst_section),
        durability: durability_section,
        attractiveness: attract_section,
        fit: Some(fit),
    };
    let artifacts = StratumArtifacts {
        stratum: name.to_string(),
        density: Some(density),
        cdfs,
        pooled_cdf,
        model_cdfs,
        median,
        verdicts,
        durability,
        attract,
        durability_medians,
        attract_medians,
    };
    Ok((summary, artifacts))
}

/// Median cumulative curves of the sub-corpora induced by a labelling.
fn class_medians<'a>(
    corpus: &Corpus,
    labels: impl Iterator<Item = (&'a str, &'a str)>,
) -> Vec<(String, MedianCurve)> {
    let mut by_label: std::collections::BTreeMap<&str, HashSet<&str>> =
        std::collections::BTreeMap::new();
    for (paper, label) in labels {
        by_label.entry(label).or_default().insert(paper);
    }
    let mut out = Vec::new();
    for (label, ids) in by_label {
        let sub = corpus.filtered(|p| ids.contains(p.paper_id.as_str()));
        if let Ok(m) = median_curve(&sub) {
            out.push((label.to_string(), m));
        }
    }
    out
}

/// Run the pipeline for the selected strata of a corpus.
pub fn run_analysis(
    corpus: &Corpus,
    choice: StratumChoice,
    opts: &AnalysisOptions,
) -> Result<(SummaryReport, Vec<StratumArtifacts>)> {
    let mut strata = Vec::new();
    let mut artifacts = Vec::new();
    for (name, oa) in choice.selections() {
        let sub = corpus.stratum(oa);
        let (summary, art) = analyze_stratum(&sub, name, opts)?;
        strata.push(summary);
        artifacts.push(art);
    }
    Ok((SummaryReport { horizon: corpus.horizon(), strata }, artifacts))
}

/// Fit-only pipeline: age density over the full calendar, the two-factor
/// fit, and the extrapolated distributions.
pub fn fit_stratum(
    sub: &Corpus,
    weighted: bool,
    extrapolate: &[u32],
) -> Result<(FitResult, AgeDensity, Vec<AgeCdf>)> {
    let all_windows: Vec<CalendarMonth> = (1..=sub.horizon()).map(CalendarMonth).collect();
    let density = age_density(sub, &all_windows)?;
    let fit = fit_two_factor_with(
        &density,
        None,
        FitOptions { weighted, ..FitOptions::default() },
    )?;
    let mut cdfs = Vec::new();
    for &span in extrapolate {
        cdfs.push(model_age_cdf(&fit.model, span)?);
    }
    Ok((fit, density, cdfs))
}

fn fmt_share(s: &ClassShare) -> String {
    format!("{} ({:.1}%)", s.count, s.share_percent)
}

/// Human-readable rendering of the summary report.
pub fn summary_table(report: &SummaryReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: &str| {
        out.push_str(line);
        out.push('\n');
    };
    push(&mut out, &format!("observation window: {} months", report.horizon));
    for s in &report.strata {
        push(&mut out, "");
        push(&mut out, &format!("=== stratum: {} ===", s.stratum));
        if !s.present {
            push(&mut out, "absent (no papers)");
            continue;
        }
        push(
            &mut out,
            &format!("papers: {}   total downloads: {}", s.papers, s.total_downloads),
        );
        if let Some(b) = &s.bursts {
            push(&mut out, "-- categorisation by burstiness --");
            push(&mut out, &format!("  non-bursty: {}", fmt_share(&b.non_bursty)));
            push(&mut out, &format!("  bursty:     {}", fmt_share(&b.bursty)));
            push(
                &mut out,
                &format!(
                    "    sleeping beauties: {}   early bursts: {}",
                    b.sleeping_beauties, b.early_bursts
                ),
            );
        }
        if let Some(d) = &s.durability {
            push(&mut out, "-- categorisation by half-lives --");
            push(
                &mut out,
                &format!("  P25 = {} months, P75 = {} months", d.p25, d.p75),
            );
            push(&mut out, &format!("  usual:            {}", fmt_share(&d.usual)));
            push(
                &mut out,
                &format!("  flash-in-the-pan: {}", fmt_share(&d.flash_in_the_pan)),
            );
            push(&mut out, &format!("  delayed:          {}", fmt_share(&d.delayed)));
            if d.skipped_zero_download > 0 {
                push(
                    &mut out,
                    &format!("  (skipped, no downloads: {})", d.skipped_zero_download),
                );
            }
        }
        if let Some(a) = &s.attractiveness {
            push(&mut out, "-- categorisation by overall attractiveness --");
            push(
                &mut out,
                &format!(
                    "  critical RMSD = {:.3} ({})",
                    a.critical_rmsd, a.threshold_source
                ),
            );
            push(&mut out, &format!("  typical:  {}", fmt_share(&a.typical)));
            push(&mut out, &format!("  atypical: {}", fmt_share(&a.atypical)));
            push(
                &mut out,
                &format!("    more attractive:  {}", fmt_share(&a.more_attractive)),
            );
            push(
                &mut out,
                &format!("    less attractive:  {}", fmt_share(&a.less_attractive)),
            );
            push(
                &mut out,
                &format!("    cross from below: {}", fmt_share(&a.cross_from_below)),
            );
            push(
                &mut out,
                &format!("    cross from above: {}", fmt_share(&a.cross_from_above)),
            );
        }
        if let Some(f) = &s.fit {
            push(&mut out, "-- two-factor decay fit --");
            push(
                &mut out,
                &format!(
                    "  rho0 = {:.4}  A = {:.4}  b1 = {:.4}  b2 = {:.4}",
                    f.model.rho0(),
                    f.model.weight(),
                    f.model.b1(),
                    f.model.b2()
                ),
            );
            push(
                &mut out,
                &format!(
                    "  residual norm = {:.6}  iterations = {}  converged = {}{}",
                    f.residual_norm,
                    f.iterations,
                    f.converged,
                    if f.degenerate { "  (degenerate: single factor)" } else { "" }
                ),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decayfit::DecayModel;
    use crate::synthgen::{generate, GenSpec, NoiseModel};

    fn small_corpus() -> Corpus {
        let spec = GenSpec {
            horizon: 30,
            papers_per_month: 4,
            birth_months: None,
            model: DecayModel::new(60.0, 0.8, 0.8, 0.02).unwrap(),
            noise: NoiseModel::Counting,
            bursts: None,
            mixture: None,
            seed: 99,
        };
        generate(&spec).unwrap().corpus
    }

    #[test]
    fn pipeline_counts_are_conserved() {
        let corpus = small_corpus();
        let (report, artifacts) =
            run_analysis(&corpus, StratumChoice::Both, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.strata.len(), 2);
        let non_oa = &report.strata[0];
        assert!(non_oa.present);
        assert_eq!(non_oa.papers, corpus.len());
        let b = non_oa.bursts.as_ref().unwrap();
        assert_eq!(b.bursty.count + b.non_bursty.count, non_oa.papers);
        let d = non_oa.durability.as_ref().unwrap();
        assert_eq!(
            d.usual.count + d.flash_in_the_pan.count + d.delayed.count + d.skipped_zero_download,
            b.non_bursty.count
        );
        let a = non_oa.attractiveness.as_ref().unwrap();
        assert_eq!(a.typical.count + a.atypical.count, b.non_bursty.count);
        let subs = a.more_attractive.count
            + a.less_attractive.count
            + a.cross_from_below.count
            + a.cross_from_above.count;
        assert_eq!(subs, a.atypical.count);

        // oa stratum is empty in generated corpora
        let oa = &report.strata[1];
        assert!(!oa.present);
        assert!(artifacts[1].density.is_none());
    }

    #[test]
    fn shares_within_each_categorisation_sum_to_100() {
        let corpus = small_corpus();
        let (report, _) =
            run_analysis(&corpus, StratumChoice::NonOa, &AnalysisOptions::default()).unwrap();
        let s = &report.strata[0];
        let b = s.bursts.as_ref().unwrap();
        assert!((b.bursty.share_percent + b.non_bursty.share_percent - 100.0).abs() < 1e-9);
        let d = s.durability.as_ref().unwrap();
        assert!(
            (d.usual.share_percent + d.flash_in_the_pan.share_percent + d.delayed.share_percent
                - 100.0)
                .abs()
                < 1e-9
        );
        let a = s.attractiveness.as_ref().unwrap();
        assert!((a.typical.share_percent + a.atypical.share_percent - 100.0).abs() < 1e-9);
    }

    #[test]
    fn report_json_is_deterministic() {
        let corpus = small_corpus();
        let run = || {
            let (report, _) =
                run_analysis(&corpus, StratumChoice::Both, &AnalysisOptions::default()).unwrap();
            serde_json::to_string_pretty(&report).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn artifacts_cover_every_stage() {
        let corpus = small_corpus();
        let (_, artifacts) =
            run_analysis(&corpus, StratumChoice::NonOa, &AnalysisOptions::default()).unwrap();
        let art = &artifacts[0];
        assert!(art.density.is_some());
        assert!(!art.cdfs.is_empty());
        assert!(art.pooled_cdf.is_some());
        assert_eq!(art.model_cdfs.len(), 3);
        assert!(art.median.is_some());
        assert_eq!(art.verdicts.len(), corpus.len());
        assert!(art.durability.is_some());
        assert!(art.attract.is_some());
        assert!(!art.durability_medians.is_empty());
        assert!(!art.attract_medians.is_empty());
    }

    #[test]
    fn default_cdf_windows_span_the_calendar() {
        let w = default_cdf_windows(78);
        assert_eq!(w.first(), Some(&1));
        assert_eq!(w.last(), Some(&78));
        assert!(w.len() <= 10);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(default_cdf_windows(1), vec![1]);
        assert_eq!(default_cdf_windows(2), vec![1, 2]);
    }

    #[test]
    fn table_renders_without_panicking() {
        let corpus = small_corpus();
        let (report, _) =
            run_analysis(&corpus, StratumChoice::Both, &AnalysisOptions::default()).unwrap();
        let table = summary_table(&report);
        assert!(table.contains("stratum: non_oa"));
        assert!(table.contains("absent"));
    }
}
