//! Burst detection: flags papers whose download history deviates strongly
//! from the typical monthly pattern, and marks late bursts as sleeping
//! beauties.
//!
//! For a paper observed over `T` months, the deviation statistic is
//!
//! ```text
//! delta_i(T) = | sigma_i(T) - sigma_med(T) |
//! ```
//!
//! where `sigma_i(T)` is the population standard deviation of the paper's
//! monthly counts and `sigma_med(T)` the population standard deviation of
//! the per-age median monthly counts over the first `T` ages. A paper is
//! bursty when `delta_i` exceeds the mean deviation of its comparison pool
//! by the critical ratio (default 5). Papers whose burst (the maximum
//! monthly count) lands more than [`SLEEPING_BEAUTY_MIN_MONTH`] months after
//! publication are sleeping beauties.

use std::io;

use crate::corpus::{Corpus, PaperSeries};
use crate::diachrono::monthly_median_curve;
use crate::error::{Error, Result};

/// Bursts after this age (exclusive) qualify as sleeping beauties.
pub const SLEEPING_BEAUTY_MIN_MONTH: u32 = 6;

/// Default critical value for `delta_i / <delta>`.
pub const DEFAULT_CRITICAL_RATIO: f64 = 5.0;

/// How the mean deviation `<delta(T)>` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaAveraging {
    /// Average over the papers sharing the same history length `T`
    /// (publication cohort). `delta` depends on `T`, so this compares like
    /// with like.
    #[default]
    Cohort,
    /// Average over every paper in the corpus, mixing history lengths.
    CorpusWide,
}

#[derive(Debug, Clone, Copy)]
pub struct BurstOptions {
    pub critical_ratio: f64,
    pub averaging: DeltaAveraging,
    /// Scan every intermediate horizon `T` instead of only the full history:
    /// a paper is flagged if the ratio crosses the threshold at any `T`. The
    /// comparison pool at a scan point is every paper observed for at least
    /// `T` months.
    pub scan: bool,
}

impl Default for BurstOptions {
    fn default() -> Self {
        BurstOptions {
            critical_ratio: DEFAULT_CRITICAL_RATIO,
            averaging: DeltaAveraging::Cohort,
            scan: false,
        }
    }
}

/// Per-paper burst verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct BurstVerdict {
    pub paper_id: String,
    /// Deviation statistic at the paper's full history length (0 for papers
    /// too short to carry a standard deviation).
    pub delta: f64,
    /// `delta / <delta>` over the paper's comparison pool.
    pub ratio: f64,
    pub bursty: bool,
    /// Age of the maximum monthly count (earliest month on ties); `None`
    /// for papers with no downloads at all.
    pub burst_month: Option<u32>,
    pub sleeping_beauty: bool,
}

/// Population standard deviation (divisor N) of the paper's monthly counts.
pub fn sigma_paper(paper: &PaperSeries) -> Result<f64> {
    if paper.len() < 2 {
        return Err(Error::SingleMonthHistory(paper.paper_id.clone()));
    }
    Ok(population_sigma(paper.counts.iter().map(|&c| c as f64)))
}

/// Population standard deviation of the per-age median monthly counts over
/// ages `0..t`.
pub fn sigma_median(corpus: &Corpus, t: u32) -> Result<f64> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "sigma_median needs a horizon of at least 2 months, got {t}"
        )));
    }
    let medians = monthly_median_curve(corpus)?;
    if medians.len() < t as usize {
        return Err(Error::UnsupportedAge { age: medians.len() as u32, span: t });
    }
    Ok(population_sigma(medians.values()[..t as usize].iter().copied()))
}

fn population_sigma(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.max(0.0).sqrt()
}

/// Earliest age carrying the maximum monthly count; `None` if the paper was
/// never downloaded.
fn burst_month(paper: &PaperSeries) -> Option<u32> {
    if paper.total() == 0 {
        return None;
    }
    let mut best_age = 0usize;
    for (k, &c) in paper.counts.iter().enumerate() {
        if c > paper.counts[best_age] {
            best_age = k;
        }
    }
    Some(best_age as u32)
}

/// Detect bursty papers at the given critical ratio with default pooling.
pub fn detect_bursty(corpus: &Corpus, critical_ratio: f64) -> Result<Vec<BurstVerdict>> {
    detect_bursty_with(corpus, BurstOptions { critical_ratio, ..BurstOptions::default() })
}

/// Detect bursty papers with explicit options. Papers observed for a single
/// month carry no deviation statistic and are reported non-bursty.
pub fn detect_bursty_with(corpus: &Corpus, opts: BurstOptions) -> Result<Vec<BurstVerdict>> {
    if opts.critical_ratio.is_nan() || opts.critical_ratio <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "critical ratio {} must be positive",
            opts.critical_ratio
        )));
    }
    if corpus.is_empty() {
        return Ok(Vec::new());
    }
    let medians = monthly_median_curve(corpus)?;
    let med = medians.values();

    // prefix sums of the median curve for sigma_med at any horizon
    let mut med_sum = vec![0.0f64; med.len() + 1];
    let mut med_sumsq = vec![0.0f64; med.len() + 1];
    for (k, &v) in med.iter().enumerate() {
        med_sum[k + 1] = med_sum[k] + v;
        med_sumsq[k + 1] = med_sumsq[k] + v * v;
    }
    let sigma_med_at = |t: usize| -> f64 {
        let n = t as f64;
        let mean = med_sum[t] / n;
        (med_sumsq[t] / n - mean * mean).max(0.0).sqrt()
    };

    let papers = corpus.papers();
    let full_delta: Vec<f64> = papers
        .iter()
        .map(|p| {
            if p.len() < 2 {
                0.0
            } else {
                (sigma_paper(p).expect("length checked") - sigma_med_at(p.len())).abs()
            }
        })
        .collect();

    // mean deviation per comparison pool at the papers' full horizons
    let pool_mean = |select: &dyn Fn(usize) -> bool| -> f64 {
        let mut sum = 0.0;
        let mut n = 0usize;
        for (i, p) in papers.iter().enumerate() {
            if p.len() >= 2 && select(i) {
                sum += full_delta[i];
                n += 1;
            }
        }
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    };

    let mean_for: Vec<f64> = match opts.averaging {
        DeltaAveraging::Cohort => {
            let max_len = papers.iter().map(PaperSeries::len).max().unwrap_or(0);
            let mut by_len = vec![f64::NAN; max_len + 1];
            papers
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let len = p.len();
                    if by_len[len].is_nan() {
                        by_len[len] = pool_mean(&|j| papers[j].len() == len);
                    }
                    let _ = i;
                    by_len[len]
                })
                .collect()
        }
        DeltaAveraging::CorpusWide => {
            let mean = pool_mean(&|_| true);
            vec![mean; papers.len()]
        }
    };

    let scan_flags: Vec<bool> = if opts.scan {
        scan_ratios(corpus, &sigma_med_at, opts.critical_ratio)
    } else {
        vec![false; papers.len()]
    };

    let verdicts = papers
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let delta = full_delta[i];
            let ratio = if mean_for[i] > 0.0 { delta / mean_for[i] } else { 0.0 };
            let bursty = ratio >= opts.critical_ratio || scan_flags[i];
            let burst_month = burst_month(p);
            let sleeping_beauty =
                bursty && burst_month.is_some_and(|m| m > SLEEPING_BEAUTY_MIN_MONTH);
            BurstVerdict {
                paper_id: p.paper_id.clone(),
                delta,
                ratio,
                bursty,
                burst_month,
                sleeping_beauty,
            }
        })
        .collect();
    Ok(verdicts)
}

/// For every intermediate horizon `T`, compare each live paper's deviation
/// over its first `T` months against the pool of papers observed at least
/// that long; returns which papers cross the threshold at any `T`.
fn scan_ratios(
    corpus: &Corpus,
    sigma_med_at: &dyn Fn(usize) -> f64,
    critical_ratio: f64,
) -> Vec<bool> {
    let papers = corpus.papers();
    let n = papers.len();
    // per-paper prefix sums for sigma over any prefix
    let mut sums: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut sumsqs: Vec<Vec<f64>> = Vec::with_capacity(n);
    for p in papers {
        let mut s = Vec::with_capacity(p.len() + 1);
        let mut q = Vec::with_capacity(p.len() + 1);
        s.push(0.0);
        q.push(0.0);
        for &c in &p.counts {
            let c = c as f64;
            s.push(s.last().unwrap() + c);
            q.push(q.last().unwrap() + c * c);
        }
        sums.push(s);
        sumsqs.push(q);
    }
    let sigma_at = |i: usize, t: usize| -> f64 {
        let nf = t as f64;
        let mean = sums[i][t] / nf;
        (sumsqs[i][t] / nf - mean * mean).max(0.0).sqrt()
    };

    let max_len = papers.iter().map(PaperSeries::len).max().unwrap_or(0);
    let mut flagged = vec![false; n];
    let mut deltas: Vec<(usize, f64)> = Vec::with_capacity(n);
    for t in 2..=max_len {
        deltas.clear();
        let sm = sigma_med_at(t);
        for (i, p) in papers.iter().enumerate() {
            if p.len() >= t {
                deltas.push((i, (sigma_at(i, t) - sm).abs()));
            }
        }
        if deltas.is_empty() {
            continue;
        }
        let mean = deltas.iter().map(|&(_, d)| d).sum::<f64>() / deltas.len() as f64;
        if mean > 0.0 {
            for &(i, d) in &deltas {
                if d / mean >= critical_ratio {
                    flagged[i] = true;
                }
            }
        }
    }
    flagged
}

/// Write burst verdicts as CSV
/// (`paper_id,delta,ratio,bursty,burst_month,sleeping_beauty`).
pub fn write_verdicts_csv<W: io::Write>(verdicts: &[BurstVerdict], writer: &mut W) -> Result<()> {
    writeln!(writer, "paper_id,delta,ratio,bursty,burst_month,sleeping_beauty")?;
    for v in verdicts {
        writeln!(
            writer,
            "{},{},{},{},{},{}",
            v.paper_id,
            v.delta,
            v.ratio,
            if v.bursty { 1 } else { 0 },
            v.burst_month.map(|m| m.to_string()).unwrap_or_default(),
            if v.sleeping_beauty { 1 } else { 0 },
        )?;
    }
    Ok(())
}
