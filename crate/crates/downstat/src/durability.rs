//! Half-life durability classification.
//!
//! A paper's half-life `M50` is the smallest age by which it has accumulated
//! half of its current total downloads. Within a corpus the half-life
//! distribution splits papers into the usual (between the 25th and 75th
//! percentile, inclusive), flashes in the pan (below P25: fast early
//! accrual, early tail-off) and delayed papers (above P75: slow start,
//! later acceleration).

use std::io;

use crate::corpus::{Corpus, PaperSeries};
use crate::diachrono::cumulate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DurabilityClass {
    Usual,
    FlashInThePan,
    Delayed,
}

impl DurabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            DurabilityClass::Usual => "usual",
            DurabilityClass::FlashInThePan => "flash_in_the_pan",
            DurabilityClass::Delayed => "delayed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfLifeRecord {
    pub paper_id: String,
    /// Half-life in months.
    pub m50: u32,
    pub class: DurabilityClass,
}

/// Classification output: per-paper records plus the percentile boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurabilitySummary {
    pub records: Vec<HalfLifeRecord>,
    pub p25: u32,
    pub p75: u32,
    /// Papers without any downloads; their half-life is undefined and they
    /// carry no record.
    pub skipped_zero_download: usize,
}

impl DurabilitySummary {
    pub fn count(&self, class: DurabilityClass) -> usize {
        self.records.iter().filter(|r| r.class == class).count()
    }

    pub fn write_csv<W: io::Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "paper_id,m50,class")?;
        for r in &self.records {
            writeln!(writer, "{},{},{}", r.paper_id, r.m50, r.class.as_str())?;
        }
        let n = self.records.len().max(1) as f64;
        writeln!(
            writer,
            "# p25={} p75={} usual={:.1}% flash_in_the_pan={:.1}% delayed={:.1}%",
            self.p25,
            self.p75,
            100.0 * self.count(DurabilityClass::Usual) as f64 / n,
            100.0 * self.count(DurabilityClass::FlashInThePan) as f64 / n,
            100.0 * self.count(DurabilityClass::Delayed) as f64 / n,
        )?;
        Ok(())
    }
}

/// Smallest age `m <= t` by which the paper reaches half of its downloads
/// accumulated through age `t`. Errors if the paper has no downloads by `t`
/// or if `t` lies beyond its observed history.
pub fn half_life(paper: &PaperSeries, t: u32) -> Result<u32> {
    let t = t as usize;
    if t >= paper.len() {
        return Err(Error::InvalidInput(format!(
            "age horizon {t} is beyond the observed history of '{}' ({} months)",
            paper.paper_id,
            paper.len()
        )));
    }
    let cum = cumulate(paper);
    let total = cum.values()[t];
    if total == 0 {
        return Err(Error::ZeroDownloads(paper.paper_id.clone()));
    }
    for (m, &v) in cum.values()[..=t].iter().enumerate() {
        // v >= total / 2, in exact integer arithmetic
        if 2 * v >= total {
            return Ok(m as u32);
        }
    }
    unreachable!("cumulative curve reaches its own total");
}

/// Half-life at the paper's full observed horizon.
pub fn half_life_full(paper: &PaperSeries) -> Result<u32> {
    half_life(paper, paper.len() as u32 - 1)
}

/// Nearest-rank percentile: the value at 1-based rank `ceil(q * n)` of the
/// sorted multiset.
fn nearest_rank(sorted: &[u32], q: f64) -> u32 {
    debug_assert!(!sorted.is_empty());
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Compute half-lives at each paper's full horizon and classify against the
/// corpus P25/P75. Zero-download papers are skipped (and counted); the
/// remaining papers partition into the three classes.
pub fn classify_durability(corpus: &Corpus) -> Result<DurabilitySummary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut m50s: Vec<(usize, u32)> = Vec::with_capacity(corpus.len());
    let mut skipped = 0usize;
    for (i, p) in corpus.papers().iter().enumerate() {
        if p.total() == 0 {
            skipped += 1;
            continue;
        }
        m50s.push((i, half_life_full(p)?));
    }
    if m50s.is_empty() {
        return Err(Error::InvalidInput(
            "no paper in the corpus has any downloads; half-lives undefined".into(),
        ));
    }
    let mut sorted: Vec<u32> = m50s.iter().map(|&(_, m)| m).collect();
    sorted.sort_unstable();
    let p25 = nearest_rank(&sorted, 0.25);
    let p75 = nearest_rank(&sorted, 0.75);

    let records = m50s
        .into_iter()
        .map(|(i, m50)| {
            let class = if m50 < p25 {
                DurabilityClass::FlashInThePan
            } else if m50 > p75 {
                DurabilityClass::Delayed
            } else {
                DurabilityClass::Usual
            };
            HalfLifeRecord {
                paper_id: corpus.papers()[i].paper_id.clone(),
                m50,
                class,
            }
        })
        .collect();
    Ok(DurabilitySummary { records, p25, p75, skipped_zero_download: skipped })
}
