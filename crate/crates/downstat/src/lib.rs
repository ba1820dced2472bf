//! Analytics for monthly download counts of journal papers.
//!
//! The library ingests per-paper monthly download records and provides the
//! statistics needed to characterise how papers age and how their
//! attractiveness is distributed:
//!
//! - [`corpus`] — data model, CSV ingestion with the publication-month
//!   allocation rule, open-access strata.
//! - [`synchro`] — calendar-based age densities and cumulative age
//!   distributions of downloads.
//! - [`decayfit`] — the two-factor exponential decay model, constrained
//!   least-squares fitting, and long-term extrapolation.
//! - [`diachrono`] — per-paper cumulative curves and median baselines.
//! - [`bursts`] — deviation-based burst detection and sleeping beauties.
//! - [`durability`] — half-life classification (usual / flash-in-the-pan /
//!   delayed).
//! - [`attract`] — RMSD attractiveness classification with a knee-based
//!   critical value.
//! - [`synthgen`] — a seeded synthetic corpus generator with ground-truth
//!   labels, used as the oracle for the fitter and the classifiers.
//! - [`analysis`] — the end-to-end pipeline and summary report behind the
//!   `downstat` command-line tool.
//!
//! ```
//! use downstat::decayfit::DecayModel;
//!
//! let model = DecayModel::new(100.0, 0.8, 0.9, 0.02)?;
//! assert_eq!(model.density(0.0), 100.0);
//! assert!(model.density(12.0) < model.density(1.0));
//! # Ok::<(), downstat::Error>(())
//! ```

pub mod analysis;
pub mod attract;
pub mod bursts;
pub mod corpus;
pub mod decayfit;
pub mod diachrono;
pub mod durability;
pub mod error;
pub mod synchro;
pub mod synthgen;

pub use crate::corpus::{CalendarMonth, Corpus, PaperSeries, YearMonth};
pub use crate::decayfit::{DecayModel, FitResult};
pub use crate::error::{Error, Result};

// The guide in book/ doubles as a test suite: every code block in its
// chapters runs under `cargo test --doc`, so the book cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/synchronous.md")]
    mod synchronous {}
    #[doc = include_str!("../../../book/src/decay-model.md")]
    mod decay_model {}
    #[doc = include_str!("../../../book/src/diachronous.md")]
    mod diachronous {}
    #[doc = include_str!("../../../book/src/bursts.md")]
    mod bursts {}
    #[doc = include_str!("../../../book/src/durability.md")]
    mod durability {}
    #[doc = include_str!("../../../book/src/attractiveness.md")]
    mod attractiveness {}
    #[doc = include_str!("../../../book/src/synthetic-data.md")]
    mod synthetic_data {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
