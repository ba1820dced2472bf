//! Paper-based (diachronous) statistics: per-paper cumulative download
//! curves and corpus median baselines.
//!
//! The diachronous view measures time from each paper's own publication
//! month. The per-age median of the cumulative curves is the "typical"
//! download history that the burst and attractiveness modules compare
//! against.

use std::io;

use crate::corpus::{Corpus, PaperSeries};
use crate::error::{Error, Result};

/// Running totals of a paper's downloads: `values[k]` is the number of
/// downloads accumulated in months `0..=k` after publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulativeCurve {
    values: Vec<u64>,
}

impl CumulativeCurve {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total downloads over the observed history.
    pub fn total(&self) -> u64 {
        self.values.last().copied().unwrap_or(0)
    }
}

/// Prefix sums of a paper's monthly counts.
pub fn cumulate(paper: &PaperSeries) -> CumulativeCurve {
    let mut values = Vec::with_capacity(paper.counts.len());
    let mut acc = 0u64;
    for &c in &paper.counts {
        acc += c;
        values.push(acc);
    }
    CumulativeCurve { values }
}

/// Per-age medians across papers, with the number of papers at risk at each
/// age. `values[k]` is the median over the papers observed for at least
/// `k + 1` months; ages nobody reaches are not reported.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianCurve {
    values: Vec<f64>,
    support: Vec<u64>,
}

impl MedianCurve {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn write_csv<W: io::Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "age,median,support")?;
        for (age, (v, s)) in self.values.iter().zip(&self.support).enumerate() {
            writeln!(writer, "{age},{v},{s}")?;
        }
        Ok(())
    }
}

/// Median of an even-sized set is the mean of the two middle values.
fn median_sorted(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    debug_assert!(n > 0);
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

fn median_by_age(corpus: &Corpus, value: impl Fn(usize, usize) -> u64) -> Result<MedianCurve> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let max_len = corpus.papers().iter().map(PaperSeries::len).max().unwrap_or(0);
    let mut values = Vec::with_capacity(max_len);
    let mut support = Vec::with_capacity(max_len);
    let mut at_risk = Vec::new();
    for k in 0..max_len {
        at_risk.clear();
        for (i, p) in corpus.papers().iter().enumerate() {
            if p.len() > k {
                at_risk.push(value(i, k));
            }
        }
        if at_risk.is_empty() {
            break;
        }
        at_risk.sort_unstable();
        values.push(median_sorted(&at_risk));
        support.push(at_risk.len() as u64);
    }
    Ok(MedianCurve { values, support })
}

/// Median of cumulative downloads at each age (the typical-history baseline).
pub fn median_curve(corpus: &Corpus) -> Result<MedianCurve> {
    let cums: Vec<CumulativeCurve> = corpus.papers().iter().map(cumulate).collect();
    median_by_age(corpus, |i, k| cums[i].values()[k])
}

/// Median of monthly (non-cumulative) counts at each age; the burst
/// statistic is built on this curve.
pub fn monthly_median_curve(corpus: &Corpus) -> Result<MedianCurve> {
    median_by_age(corpus, |i, k| corpus.papers()[i].counts[k])
}
