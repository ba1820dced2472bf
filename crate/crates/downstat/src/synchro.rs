//! Calendar-based (synchronous) statistics: download density by paper age
//! and cumulative age distributions of downloads within a window.
//!
//! The synchronous view fixes one or more calendar months and asks how the
//! downloads occurring in those months distribute over the ages of the
//! downloaded papers. [`age_density`] produces the mean-downloads-per-paper
//! curve the decay fitter consumes; [`age_cdf`] produces the cumulative
//! age distribution of a single window month.

use std::io;

use crate::corpus::{CalendarMonth, Corpus};
use crate::error::{Error, Result};

/// Slack when comparing cumulative percentages against a quantile target,
/// so exact-boundary targets are not missed to floating-point rounding.
const QUANTILE_EPS: f64 = 1e-9;

/// Mean downloads per paper as a function of paper age.
///
/// One entry per supported age: `density[i]` is the mean over all
/// `(paper, window-month)` observations of age `ages[i]`, and `support[i]`
/// counts those observations. Ages with no observation are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeDensity {
    ages: Vec<u32>,
    density: Vec<f64>,
    support: Vec<u64>,
}

impl AgeDensity {
    /// Assemble from `(age, density, support)` points; ages must be strictly
    /// increasing, densities finite and non-negative, supports positive.
    pub fn from_points(points: Vec<(u32, f64, u64)>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidInput("ages must be strictly increasing".into()));
            }
        }
        for &(age, d, s) in &points {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidInput(format!("invalid density {d} at age {age}")));
            }
            if s == 0 {
                return Err(Error::InvalidInput(format!("zero support at age {age}")));
            }
        }
        let mut ages = Vec::with_capacity(points.len());
        let mut density = Vec::with_capacity(points.len());
        let mut support = Vec::with_capacity(points.len());
        for (a, d, s) in points {
            ages.push(a);
            density.push(d);
            support.push(s);
        }
        Ok(AgeDensity { ages, density, support })
    }

    pub fn ages(&self) -> &[u32] {
        &self.ages
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.ages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ages.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64, u64)> + '_ {
        self.ages
            .iter()
            .zip(&self.density)
            .zip(&self.support)
            .map(|((&a, &d), &s)| (a, d, s))
    }

    pub fn write_csv<W: io::Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "age,density,support")?;
        for (a, d, s) in self.iter() {
            writeln!(writer, "{a},{d},{s}")?;
        }
        Ok(())
    }
}

/// What an [`AgeCdf`] describes: downloads observed in calendar months, or a
/// model prediction for a window that far exceeds the observed horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdfWindow {
    /// Downloads during a single observed calendar month.
    Calendar(CalendarMonth),
    /// Downloads pooled over several observed calendar months.
    Pooled(Vec<CalendarMonth>),
    /// Model-extrapolated distribution for a window this many months in.
    Extrapolated(u32),
}

/// Cumulative age distribution of downloads within a window: `points` are
/// `(age, cumulative percent)` pairs, non-decreasing and ending at 100.
#[derive(Debug, Clone, PartialEq)]
pub struct AgeCdf {
    pub window: CdfWindow,
    points: Vec<(u32, f64)>,
}

impl AgeCdf {
    pub(crate) fn new(window: CdfWindow, points: Vec<(u32, f64)>) -> Self {
        AgeCdf { window, points }
    }

    pub fn points(&self) -> &[(u32, f64)] {
        &self.points
    }

    pub fn write_csv<W: io::Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "age,cum_percent")?;
        for (a, y) in &self.points {
            writeln!(writer, "{a},{y}")?;
        }
        Ok(())
    }
}

fn check_windows(corpus: &Corpus, windows: &[CalendarMonth]) -> Result<()> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if windows.is_empty() {
        return Err(Error::InvalidInput("no window months supplied".into()));
    }
    for w in windows {
        if w.0 < 1 || w.0 > corpus.horizon() {
            return Err(Error::WindowBeyondHorizon { month: w.0, horizon: corpus.horizon() });
        }
    }
    Ok(())
}

/// Download density by age over a set of window months.
///
/// A paper contributes one observation per window month it is alive in: for
/// window month `m` and paper published in month `p <= m`, the paper's count
/// at age `m - p` enters the age cell `m - p`. The density at an age is the
/// total of those counts divided by the number of observations.
pub fn age_density(corpus: &Corpus, windows: &[CalendarMonth]) -> Result<AgeDensity> {
    check_windows(corpus, windows)?;
    let mut months: Vec<u32> = windows.iter().map(|w| w.0).collect();
    months.sort_unstable();
    months.dedup();

    let horizon = corpus.horizon() as usize;
    let mut sums = vec![0u64; horizon];
    let mut counts = vec![0u64; horizon];
    for p in corpus.papers() {
        let pub_m = p.pub_month.0;
        for &m in &months {
            if m >= pub_m {
                let age = (m - pub_m) as usize;
                sums[age] += p.counts[age];
                counts[age] += 1;
            }
        }
    }
    let points = (0..horizon)
        .filter(|&a| counts[a] > 0)
        .map(|a| (a as u32, sums[a] as f64 / counts[a] as f64, counts[a]))
        .collect();
    AgeDensity::from_points(points)
}

fn cdf_from_totals(window: CdfWindow, by_age: &[u64]) -> Result<AgeCdf> {
    let total: u64 = by_age.iter().sum();
    if total == 0 {
        return Err(Error::NoDownloadsInWindow);
    }
    let mut points = Vec::with_capacity(by_age.len());
    let mut acc = 0u64;
    for (age, &n) in by_age.iter().enumerate() {
        acc += n;
        points.push((age as u32, 100.0 * acc as f64 / total as f64));
    }
    Ok(AgeCdf::new(window, points))
}

/// Cumulative age distribution of the downloads occurring in one window
/// month: the percentage of that month's downloads going to papers aged
/// `<= x`, for `x = 0 ..= window - 1`.
pub fn age_cdf(corpus: &Corpus, window: CalendarMonth) -> Result<AgeCdf> {
    check_windows(corpus, &[window])?;
    let mut by_age = vec![0u64; window.0 as usize];
    for p in corpus.papers() {
        if p.pub_month.0 <= window.0 {
            let age = (window.0 - p.pub_month.0) as usize;
            by_age[age] += p.counts[age];
        }
    }
    cdf_from_totals(CdfWindow::Calendar(window), &by_age)
}

/// Cumulative age distribution pooled over several window months: counts are
/// summed across the windows before the distribution is formed.
pub fn age_cdf_pooled(corpus: &Corpus, windows: &[CalendarMonth]) -> Result<AgeCdf> {
    check_windows(corpus, windows)?;
    let mut months: Vec<u32> = windows.iter().map(|w| w.0).collect();
    months.sort_unstable();
    months.dedup();
    let max_w = *months.last().expect("non-empty") as usize;
    let mut by_age = vec![0u64; max_w];
    for p in corpus.papers() {
        for &m in &months {
            if m >= p.pub_month.0 {
                let age = (m - p.pub_month.0) as usize;
                by_age[age] += p.counts[age];
            }
        }
    }
    cdf_from_totals(
        CdfWindow::Pooled(months.into_iter().map(CalendarMonth).collect()),
        &by_age,
    )
}

/// Smallest age `x` whose cumulative percentage reaches `y_target`.
pub fn age_quantile(cdf: &AgeCdf, y_target: f64) -> Result<u32> {
    if !(y_target > 0.0 && y_target <= 100.0) {
        return Err(Error::InvalidInput(format!(
            "quantile target {y_target} must be in (0, 100]"
        )));
    }
    cdf.points()
        .iter()
        .find(|&&(_, y)| y + QUANTILE_EPS >= y_target)
        .map(|&(x, _)| x)
        .ok_or_else(|| Error::Internal("age CDF does not reach its target".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{PaperSeries, YearMonth};

    fn paper(id: &str, pub_month: u32, oa: bool, counts: &[u64]) -> PaperSeries {
        PaperSeries {
            paper_id: id.into(),
            pub_month: CalendarMonth(pub_month),
            oa,
            counts: counts.to_vec(),
        }
    }

    fn corpus(horizon: u32, papers: Vec<PaperSeries>) -> Corpus {
        Corpus::new(YearMonth::new(2007, 1).unwrap(), horizon, papers).unwrap()
    }

    #[test]
    fn density_is_mean_over_papers() {
        let c = corpus(
            1,
            vec![paper("a", 1, false, &[10]), paper("b", 1, false, &[20])],
        );
        let d = age_density(&c, &[CalendarMonth(1)]).unwrap();
        assert_eq!(d.ages(), &[0]);
        assert_eq!(d.density(), &[15.0]);
        assert_eq!(d.support(), &[2]);
    }

    #[test]
    fn first_month_window_supports_only_age_zero() {
        let c = corpus(
            2,
            vec![paper("a", 1, false, &[3, 4]), paper("b", 2, false, &[9])],
        );
        let d = age_density(&c, &[CalendarMonth(1)]).unwrap();
        assert_eq!(d.ages(), &[0]);
        assert_eq!(d.support(), &[1]);
    }

    #[test]
    fn multi_window_density_counts_one_observation_per_window() {
        let c = corpus(2, vec![paper("a", 1, false, &[6, 2]), paper("b", 2, false, &[4])]);
        let d = age_density(&c, &[CalendarMonth(1), CalendarMonth(2)]).unwrap();
        // age 0: paper a in month 1 (6) and paper b in month 2 (4) -> mean 5
        // age 1: paper a in month 2 (2) -> 2
        assert_eq!(d.ages(), &[0, 1]);
        assert_eq!(d.density(), &[5.0, 2.0]);
        assert_eq!(d.support(), &[2, 1]);
    }

    #[test]
    fn density_rejects_bad_windows_and_empty_corpus() {
        let c = corpus(2, vec![paper("a", 1, false, &[1, 1])]);
        assert!(matches!(
            age_density(&c, &[CalendarMonth(3)]),
            Err(Error::WindowBeyondHorizon { month: 3, horizon: 2 })
        ));
        assert!(matches!(
            age_density(&c, &[CalendarMonth(0)]),
            Err(Error::WindowBeyondHorizon { .. })
        ));
        let empty = corpus(2, vec![]);
        assert!(matches!(
            age_density(&empty, &[CalendarMonth(1)]),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn pooled_density_lies_between_strata_densities() {
        let c = corpus(
            2,
            vec![
                paper("a", 1, false, &[10, 2]),
                paper("b", 1, true, &[30, 8]),
                paper("c", 2, true, &[20]),
            ],
        );
        let windows = [CalendarMonth(1), CalendarMonth(2)];
        let all = age_density(&c, &windows).unwrap();
        let oa = age_density(&c.stratum(true), &windows).unwrap();
        let non = age_density(&c.stratum(false), &windows).unwrap();
        for (i, &age) in all.ages().iter().enumerate() {
            let find = |d: &AgeDensity| {
                d.ages()
                    .iter()
                    .position(|&a| a == age)
                    .map(|j| (d.density()[j], d.support()[j] as f64))
            };
            let (d_all, s_all) = (all.density()[i], all.support()[i] as f64);
            let oa_part = find(&oa);
            let non_part = find(&non);
            let weighted: f64 = [oa_part, non_part]
                .iter()
                .flatten()
                .map(|(d, s)| d * s)
                .sum();
            let total_support: f64 = [oa_part, non_part].iter().flatten().map(|(_, s)| s).sum();
            assert!((d_all - weighted / total_support).abs() < 1e-12);
            assert_eq!(s_all, total_support);
        }
    }

    #[test]
    fn first_month_cdf_is_single_point_at_100() {
        let c = corpus(2, vec![paper("a", 1, false, &[5, 1])]);
        let cdf = age_cdf(&c, CalendarMonth(1)).unwrap();
        assert_eq!(cdf.points(), &[(0, 100.0)]);
        assert_eq!(age_quantile(&cdf, 50.0).unwrap(), 0);
    }

    #[test]
    fn uniform_downloads_give_linear_cdf() {
        // four papers aged 0..3 in month 4, each downloading 5 that month
        let c = corpus(
            4,
            vec![
                paper("a", 1, false, &[0, 0, 0, 5]),
                paper("b", 2, false, &[0, 0, 5]),
                paper("c", 3, false, &[0, 5]),
                paper("d", 4, false, &[5]),
            ],
        );
        let cdf = age_cdf(&c, CalendarMonth(4)).unwrap();
        let ys: Vec<f64> = cdf.points().iter().map(|&(_, y)| y).collect();
        assert_eq!(ys, vec![25.0, 50.0, 75.0, 100.0]);
        assert_eq!(age_quantile(&cdf, 50.0).unwrap(), 1);
        assert_eq!(age_quantile(&cdf, 51.0).unwrap(), 2);
        assert_eq!(age_quantile(&cdf, 100.0).unwrap(), 3);
    }

    #[test]
    fn cdf_spans_all_ages_up_to_window_minus_one() {
        let c = corpus(3, vec![paper("a", 1, false, &[1, 1, 1]), paper("b", 3, false, &[1])]);
        let cdf = age_cdf(&c, CalendarMonth(3)).unwrap();
        assert_eq!(cdf.points().len(), 3);
        assert_eq!(cdf.points().last().unwrap().1, 100.0);
    }

    #[test]
    fn cdf_is_monotone_and_ends_at_100() {
        let c = corpus(
            3,
            vec![paper("a", 1, false, &[3, 1, 7]), paper("b", 2, false, &[2, 5])],
        );
        let cdf = age_cdf(&c, CalendarMonth(3)).unwrap();
        let ys: Vec<f64> = cdf.points().iter().map(|&(_, y)| y).collect();
        for w in ys.windows(2) {
            assert!(w[1] >= w[0]);
        }
        assert!((ys.last().unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn zero_download_window_is_an_error() {
        let c = corpus(2, vec![paper("a", 1, false, &[5, 0])]);
        assert!(matches!(
            age_cdf(&c, CalendarMonth(2)),
            Err(Error::NoDownloadsInWindow)
        ));
    }

    #[test]
    fn pooled_cdf_sums_counts_first() {
        let c = corpus(2, vec![paper("a", 1, false, &[6, 2]), paper("b", 2, false, &[4])]);
        let cdf = age_cdf_pooled(&c, &[CalendarMonth(1), CalendarMonth(2)]).unwrap();
        // age 0 pooled: 6 + 4 = 10; age 1: 2 -> totals 12
        let ys: Vec<f64> = cdf.points().iter().map(|&(_, y)| y).collect();
        assert!((ys[0] - 100.0 * 10.0 / 12.0).abs() < 1e-12);
        assert!((ys[1] - 100.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_validates_target() {
        let c = corpus(1, vec![paper("a", 1, false, &[5])]);
        let cdf = age_cdf(&c, CalendarMonth(1)).unwrap();
        assert!(age_quantile(&cdf, 0.0).is_err());
        assert!(age_quantile(&cdf, 100.5).is_err());
    }
}
