//! Ground-truth synthetic corpus generator.
//!
//! Papers are drawn from a [`DecayModel`] (or a labelled mixture of models),
//! with the expected count at age `k` equal to the model density at `k`.
//! Noise is either absent or a mean-preserving integer counting process with
//! variance equal to the mean. An optional burst injection multiplies one
//! month's count for a chosen fraction of the papers. Ground-truth labels
//! (mixture component, burst flag and month) are emitted alongside the
//! corpus so generated data can serve as an oracle for the classifiers and
//! the fitter.
//!
//! Generation is deterministic for a given seed: every paper consumes its
//! own random stream derived from the master seed, so the output does not
//! depend on evaluation order.

use std::io;

use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;
use serde::Deserialize;

use crate::corpus::{CalendarMonth, Corpus, PaperSeries, YearMonth};
use crate::decayfit::DecayModel;
use crate::error::{Error, Result};

/// Calendar anchor for generated corpora; arbitrary but fixed so output
/// files are stable.
pub const GENERATED_START: YearMonth = YearMonth { year: 2000, month: 1 };

/// Label given to papers when no mixture is configured.
pub const BASE_COMPONENT: &str = "base";

/// Noise applied to the expected monthly counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// Deterministic expected counts. Counts are integers, so the model
    /// values are rounded; the rounding is balanced across the papers alive
    /// at each age (sum-preserving), which keeps the corpus-level density at
    /// every age as close to the model as integer counts allow. The first
    /// paper of each component always carries the plainly rounded values.
    None,
    /// Integer draws with mean equal to the model value and variance equal
    /// to the mean.
    #[default]
    Counting,
}

/// Multiplies the count of one month for a random fraction of the papers
/// old enough to have observed that month.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BurstInjection {
    /// Fraction of the eligible papers to spike, in [0, 1].
    pub fraction: f64,
    /// Age (months after publication) at which the spike lands.
    pub burst_month: u32,
    /// Factor applied to that month's count; must exceed 1.
    pub multiplier: f64,
}

/// One component of a labelled mixture.
#[derive(Debug, Clone, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub model: DecayModel,
    pub label: String,
}

/// Full description of a synthetic corpus.
#[derive(Debug, Clone, Deserialize)]
pub struct GenSpec {
    /// Number of calendar months.
    pub horizon: u32,
    /// Papers published in each birth month.
    pub papers_per_month: u32,
    /// Papers are born in months `1..=birth_months` (default: every month up
    /// to the horizon).
    #[serde(default)]
    pub birth_months: Option<u32>,
    /// Expected-count model (ignored for papers assigned to a mixture
    /// component).
    pub model: DecayModel,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default)]
    pub bursts: Option<BurstInjection>,
    #[serde(default)]
    pub mixture: Option<Vec<MixtureComponent>>,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::InvalidGenSpec("horizon must be at least 1".into()));
        }
        if let Some(b) = self.birth_months {
            if b < 1 || b > self.horizon {
                return Err(Error::InvalidGenSpec(format!(
                    "birth_months {b} must be in 1..=horizon ({})",
                    self.horizon
                )));
            }
        }
        if let Some(burst) = &self.bursts {
            if !(0.0..=1.0).contains(&burst.fraction) || !burst.fraction.is_finite() {
                return Err(Error::InvalidGenSpec(format!(
                    "burst fraction {} must be in [0, 1]",
                    burst.fraction
                )));
            }
            if burst.multiplier.is_nan() || burst.multiplier <= 1.0 {
                return Err(Error::InvalidGenSpec(format!(
                    "burst multiplier {} must exceed 1",
                    burst.multiplier
                )));
            }
            if burst.burst_month >= self.horizon {
                return Err(Error::InvalidGenSpec(format!(
                    "burst month {} must be below the horizon {}",
                    burst.burst_month, self.horizon
                )));
            }
        }
        if let Some(mix) = &self.mixture {
            if mix.is_empty() {
                return Err(Error::InvalidGenSpec("mixture must not be empty".into()));
            }
            let total: f64 = mix.iter().map(|c| c.weight).sum();
            if mix.iter().any(|c| !c.weight.is_finite() || c.weight < 0.0) {
                return Err(Error::InvalidGenSpec("mixture weights must be non-negative".into()));
            }
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidGenSpec(format!(
                    "mixture weights sum to {total}, expected 1"
                )));
            }
        }
        Ok(())
    }
}

/// Ground truth for one generated paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperLabel {
    pub paper_id: String,
    pub component: String,
    pub bursty_truth: bool,
    pub burst_month: Option<u32>,
}

/// A generated corpus with its ground-truth labels, in paper-id order.
#[derive(Debug, Clone)]
pub struct Generated {
    pub corpus: Corpus,
    pub labels: Vec<PaperLabel>,
}

fn round_half_up(x: f64) -> u64 {
    debug_assert!(x >= 0.0);
    (x + 0.5).floor() as u64
}

/// Independent random stream for (seed, purpose, index).
fn stream(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&purpose.to_le_bytes());
    bytes[16..24].copy_from_slice(&index.to_le_bytes());
    bytes[24..32].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

const STREAM_COMPONENT: u64 = 1;
const STREAM_COUNTS: u64 = 2;
const STREAM_BURSTS: u64 = 3;

/// Generate a corpus and its ground-truth labels from a spec.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let horizon = spec.horizon;
    let births = spec.birth_months.unwrap_or(horizon);

    // Assign components and ids in (birth month, slot) order.
    let n_papers = births as u64 * spec.papers_per_month as u64;
    let mut component_of: Vec<usize> = Vec::with_capacity(n_papers as usize);
    let models: Vec<(String, DecayModel)> = match &spec.mixture {
        None => vec![(BASE_COMPONENT.to_string(), spec.model)],
        Some(mix) => mix.iter().map(|c| (c.label.clone(), c.model)).collect(),
    };
    let cum_weights: Vec<f64> = match &spec.mixture {
        None => vec![1.0],
        Some(mix) => {
            let mut acc = 0.0;
            mix.iter()
                .map(|c| {
                    acc += c.weight;
                    acc
                })
                .collect()
        }
    };
    for serial in 0..n_papers {
        let c = if models.len() == 1 {
            0
        } else {
            let u: f64 = rand::Rng::random(&mut stream(spec.seed, STREAM_COMPONENT, serial));
            cum_weights.iter().position(|&w| u < w).unwrap_or(models.len() - 1)
        };
        component_of.push(c);
    }

    // Expected counts and noise.
    let mut papers: Vec<PaperSeries> = Vec::with_capacity(n_papers as usize);
    let mut serial = 0u64;
    for m in 1..=births {
        let len = (horizon - m + 1) as usize;
        for _ in 0..spec.papers_per_month {
            let model = &models[component_of[serial as usize]].1;
            let counts: Vec<u64> = match spec.noise {
                NoiseModel::Counting => {
                    let mut rng = stream(spec.seed, STREAM_COUNTS, serial);
                    (0..len)
                        .map(|k| {
                            let mu = model.density(k as f64).max(f64::MIN_POSITIVE);
                            let draw: f64 = Poisson::new(mu)
                                .expect("positive mean")
                                .sample(&mut rng);
                            draw as u64
                        })
                        .collect()
                }
                // placeholder; noiseless counts are filled in below so the
                // rounding can be balanced across papers of the same age
                NoiseModel::None => vec![0; len],
            };
            papers.push(PaperSeries {
                paper_id: format!("p{:06}", serial + 1),
                pub_month: CalendarMonth(m),
                oa: false,
                counts,
            });
            serial += 1;
        }
    }

    if spec.noise == NoiseModel::None {
        balanced_round(&mut papers, &component_of, &models, horizon);
    }

    // Burst injection over the papers old enough to observe the burst month.
    let mut burst_truth: Vec<Option<u32>> = vec![None; papers.len()];
    if let Some(burst) = &spec.bursts {
        let eligible: Vec<usize> = papers
            .iter()
            .enumerate()
            .filter(|(_, p)| p.len() > burst.burst_month as usize)
            .map(|(i, _)| i)
            .collect();
        let n_spiked = round_half_up(burst.fraction * eligible.len() as f64) as usize;
        let n_spiked = n_spiked.min(eligible.len());
        let mut rng = stream(spec.seed, STREAM_BURSTS, 0);
        let chosen = rand::seq::index::sample(&mut rng, eligible.len(), n_spiked);
        for pick in chosen.iter() {
            let idx = eligible[pick];
            let k = burst.burst_month as usize;
            let spiked = round_half_up(papers[idx].counts[k] as f64 * burst.multiplier);
            papers[idx].counts[k] = spiked;
            burst_truth[idx] = Some(burst.burst_month);
        }
    }

    let mut labels: Vec<PaperLabel> = papers
        .iter()
        .enumerate()
        .map(|(i, p)| PaperLabel {
            paper_id: p.paper_id.clone(),
            component: models[component_of[i]].0.clone(),
            bursty_truth: burst_truth[i].is_some(),
            burst_month: burst_truth[i],
        })
        .collect();
    labels.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));

    let corpus = Corpus::new(GENERATED_START, horizon, papers)?;
    Ok(Generated { corpus, labels })
}

/// Noiseless counts: round the model values to integers such that, within
/// each component, the running total over the papers alive at an age equals
/// the rounded running total of the model value. Each paper's count is then
/// the model value plus at most one unit of rounding, and the per-age mean
/// across papers is the closest value to the model density that integer
/// counts can represent.
fn balanced_round(
    papers: &mut [PaperSeries],
    component_of: &[usize],
    models: &[(String, DecayModel)],
    horizon: u32,
) {
    for (c, (_, model)) in models.iter().enumerate() {
        for k in 0..horizon as usize {
            let rho = model.density(k as f64);
            let mut j = 0u64;
            let mut prev = 0u64;
            for (i, paper) in papers.iter_mut().enumerate() {
                if component_of[i] != c || paper.len() <= k {
                    continue;
                }
                j += 1;
                let cur = round_half_up(j as f64 * rho);
                paper.counts[k] = cur - prev;
                prev = cur;
            }
        }
    }
}

/// Write ground-truth labels as CSV (`paper_id,component_label,bursty_truth,burst_month`).
pub fn write_labels_csv<W: io::Write>(labels: &[PaperLabel], writer: &mut W) -> Result<()> {
    writeln!(writer, "paper_id,component_label,bursty_truth,burst_month")?;
    for l in labels {
        let burst = l.burst_month.map(|m| m.to_string()).unwrap_or_default();
        writeln!(
            writer,
            "{},{},{},{}",
            l.paper_id,
            l.component,
            if l.bursty_truth { 1 } else { 0 },
            burst
        )?;
    }
    Ok(())
}
