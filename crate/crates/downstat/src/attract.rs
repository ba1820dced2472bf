//! Overall-attractiveness classification.
//!
//! Each paper's cumulative download curve is compared against the corpus
//! median baseline through its root-mean-square deviation (RMSD). Papers
//! below a critical RMSD are typical; the rest are atypical and fall into
//! four subcategories by the sign pattern of their deviation from the
//! baseline: persistently above (more attractive), persistently below (less
//! attractive), or crossing the baseline from below or from above.
//!
//! The critical RMSD is either supplied (to pin a known operating point) or
//! estimated from the corpus as the knee of the RMSD survival curve: the
//! point where the count of papers above the cutoff switches from slow to
//! rapid decay. See [`knee_threshold`] for the exact rule.

use std::io;

use crate::corpus::{Corpus, PaperSeries};
use crate::diachrono::{cumulate, MedianCurve};
use crate::error::{Error, Result};

/// Number of grid points for the knee search.
const KNEE_GRID: usize = 256;

/// Minimum multiset size for a knee estimate.
pub const KNEE_MIN_VALUES: usize = 10;

/// Default number of initial months ignored by the sign-pattern rule; the
/// earliest months carry tiny counts whose sign against the baseline is
/// noise.
pub const DEFAULT_BURN_IN: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractClass {
    Typical,
    Atypical,
}

impl AttractClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttractClass::Typical => "typical",
            AttractClass::Atypical => "atypical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttractSubclass {
    MoreAttractive,
    LessAttractive,
    CrossFromBelow,
    CrossFromAbove,
}

impl AttractSubclass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttractSubclass::MoreAttractive => "more_attractive",
            AttractSubclass::LessAttractive => "less_attractive",
            AttractSubclass::CrossFromBelow => "cross_from_below",
            AttractSubclass::CrossFromAbove => "cross_from_above",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractivenessRecord {
    pub paper_id: String,
    pub rmsd: f64,
    pub class: AttractClass,
    /// Present exactly for atypical papers.
    pub subclass: Option<AttractSubclass>,
}

/// Where the critical RMSD came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdSource {
    Knee,
    Override,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractivenessSummary {
    pub records: Vec<AttractivenessRecord>,
    pub critical_rmsd: f64,
    pub source: ThresholdSource,
}

impl AttractivenessSummary {
    pub fn count_class(&self, class: AttractClass) -> usize {
        self.records.iter().filter(|r| r.class == class).count()
    }

    pub fn count_subclass(&self, sub: AttractSubclass) -> usize {
        self.records.iter().filter(|r| r.subclass == Some(sub)).count()
    }

    pub fn write_csv<W: io::Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "paper_id,rmsd,class,subclass")?;
        for r in &self.records {
            writeln!(
                writer,
                "{},{},{},{}",
                r.paper_id,
                r.rmsd,
                r.class.as_str(),
                r.subclass.map(|s| s.as_str()).unwrap_or(""),
            )?;
        }
        let n = self.records.len().max(1) as f64;
        writeln!(
            writer,
            "# critical_rmsd={} typical={:.1}% more_attractive={:.1}% less_attractive={:.1}% \
             cross_from_below={:.1}% cross_from_above={:.1}%",
            self.critical_rmsd,
            100.0 * self.count_class(AttractClass::Typical) as f64 / n,
            100.0 * self.count_subclass(AttractSubclass::MoreAttractive) as f64 / n,
            100.0 * self.count_subclass(AttractSubclass::LessAttractive) as f64 / n,
            100.0 * self.count_subclass(AttractSubclass::CrossFromBelow) as f64 / n,
            100.0 * self.count_subclass(AttractSubclass::CrossFromAbove) as f64 / n,
        )?;
        Ok(())
    }
}

/// Root-mean-square deviation of the paper's cumulative downloads from the
/// baseline over the paper's observed ages.
pub fn rmsd_vs_median(paper: &PaperSeries, baseline: &MedianCurve) -> Result<f64> {
    let len = paper.len();
    if baseline.len() < len {
        return Err(Error::BaselineTooShort {
            paper_id: paper.paper_id.clone(),
            supported: baseline.len(),
            required: len,
        });
    }
    let cum = cumulate(paper);
    let sum_sq: f64 = cum
        .values()
        .iter()
        .zip(baseline.values())
        .map(|(&c, &b)| {
            let d = c as f64 - b;
            d * d
        })
        .sum();
    Ok((sum_sq / len as f64).sqrt())
}

/// Knee of the survival curve `N(c) = #{rmsd >= c}`.
///
/// Over a log-spaced grid of cutoffs from the smallest positive value to the
/// maximum, the rule finds the cutoff where `log N(c)` falls furthest below
/// the chord joining the curve's endpoints — the corner where the dense bulk
/// of typical deviations has died off and the sparse atypical tail begins.
/// Ties resolve toward the smaller cutoff. Errors when every value is equal
/// (the curve is flat and has no knee) or fewer than [`KNEE_MIN_VALUES`]
/// values are supplied.
pub fn knee_threshold(rmsds: &[f64]) -> Result<f64> {
    if rmsds.len() < KNEE_MIN_VALUES {
        return Err(Error::TooFewValues { got: rmsds.len(), need: KNEE_MIN_VALUES });
    }
    if rmsds.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidInput("deviation values must be finite and non-negative".into()));
    }
    let mut positive: Vec<f64> = rmsds.iter().copied().filter(|&v| v > 0.0).collect();
    positive.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let (lo, hi) = match (positive.first(), positive.last()) {
        (Some(&lo), Some(&hi)) if hi > lo => (lo, hi),
        _ => return Err(Error::NoKnee),
    };

    // clamped to 1 so grid rounding past the maximum cannot produce ln(0)
    let survivors_at = |c: f64| -> f64 {
        (positive.len() - positive.partition_point(|&v| v < c)).max(1) as f64
    };

    let ratio = hi / lo;
    let c_of = |i: usize| lo * ratio.powf(i as f64 / (KNEE_GRID - 1) as f64);

    let y_first = survivors_at(lo).ln();
    let y_last = survivors_at(hi).ln();

    let mut best_gap = f64::NEG_INFINITY;
    let mut best_c = lo;
    for i in 0..KNEE_GRID {
        let c = c_of(i);
        let y = survivors_at(c).ln();
        let chord = y_first + (y_last - y_first) * (c - lo) / (hi - lo);
        let gap = chord - y;
        if gap > best_gap {
            best_gap = gap;
            best_c = c;
        }
    }
    Ok(best_c)
}

/// Sign pattern of the post-burn-in deviations `d[k] = cum[k] - baseline[k]`.
///
/// Weak persistence: touching the baseline does not demote a paper, so all
/// `d >= 0` reads as persistently above and all `d <= 0` as persistently
/// below. Otherwise the paper crossed; the initial and final signs decide
/// the direction, and papers with several alternations are likewise
/// assigned by their initial/final signs. Papers no longer than the burn-in
/// are judged on their full history.
fn subclass_of(
    paper: &PaperSeries,
    baseline: &MedianCurve,
    burn_in: u32,
) -> AttractSubclass {
    let cum = cumulate(paper);
    let len = cum.len();
    let start = if len > burn_in as usize { burn_in as usize } else { 0 };
    let diffs: Vec<f64> = (start..len)
        .map(|k| cum.values()[k] as f64 - baseline.values()[k])
        .collect();
    let all_ge = diffs.iter().all(|&d| d >= 0.0);
    let all_le = diffs.iter().all(|&d| d <= 0.0);
    if all_ge {
        return AttractSubclass::MoreAttractive;
    }
    if all_le {
        return AttractSubclass::LessAttractive;
    }
    let first = diffs.iter().find(|&&d| d != 0.0).copied().unwrap_or(0.0);
    let last = diffs.iter().rev().find(|&&d| d != 0.0).copied().unwrap_or(0.0);
    match (first < 0.0, last < 0.0) {
        (true, false) => AttractSubclass::CrossFromBelow,
        (false, true) => AttractSubclass::CrossFromAbove,
        (false, false) => AttractSubclass::MoreAttractive,
        (true, true) => AttractSubclass::LessAttractive,
    }
}

/// Classify every paper against the baseline. `critical` pins the critical
/// RMSD; with `None` it is estimated by [`knee_threshold`]. Typical papers
/// satisfy `rmsd < critical` strictly.
pub fn classify_attractiveness(
    corpus: &Corpus,
    baseline: &MedianCurve,
    critical: Option<f64>,
    burn_in: u32,
) -> Result<AttractivenessSummary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let rmsds: Vec<f64> = corpus
        .papers()
        .iter()
        .map(|p| rmsd_vs_median(p, baseline))
        .collect::<Result<_>>()?;
    let (critical_rmsd, source) = match critical {
        Some(c) => {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "critical RMSD {c} must be positive"
                )));
            }
            (c, ThresholdSource::Override)
        }
        None => (knee_threshold(&rmsds)?, ThresholdSource::Knee),
    };
    let records = corpus
        .papers()
        .iter()
        .zip(&rmsds)
        .map(|(p, &rmsd)| {
            if rmsd < critical_rmsd {
                AttractivenessRecord {
                    paper_id: p.paper_id.clone(),
                    rmsd,
                    class: AttractClass::Typical,
                    subclass: None,
                }
            } else {
                AttractivenessRecord {
                    paper_id: p.paper_id.clone(),
                    rmsd,
                    class: AttractClass::Atypical,
                    subclass: Some(subclass_of(p, baseline, burn_in)),
                }
            }
        })
        .collect();
    Ok(AttractivenessSummary { records, critical_rmsd, source })
}
