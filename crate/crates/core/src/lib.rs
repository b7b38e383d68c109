//! Two-channel polarization correlation models.
//!
//! Two engines predict the joint outcome table of a pair of two-port
//! polarization analyzers:
//!
//! * a classical model in which the source emits one of two anticorrelated
//!   pulse pairs and each analyzer obeys Malus' law;
//! * the anticorrelated two-photon superposition evaluated by the Born rule.
//!
//! On top of these sit the χ correlation, fringe visibility, the CHSH
//! statistic with an exhaustive settings search, a seeded Monte Carlo
//! simulator and plot-ready CSV/JSON scans.
//!
//! Every engine is generic over [`Scalar`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the precision.

pub mod chsh;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod report;
pub mod scalar;
pub mod types;

pub use chsh::{chsh_statistic, maximize_chsh, ChshResult, ChshSettings};
pub use error::{Error, Result};
pub use models::{
    born_table, chi, chi_with_source, classical_table, predict_table, quantum_table_closed,
    visibility, visibility_scan, visibility_with_source, ModelKind, Sign, TwoQubitState,
    Visibility,
};
pub use montecarlo::{estimate_table, run_trials, run_trials_chunked, TrialPlan};
pub use scalar::Scalar;
pub use types::{
    normalize_angle, table_from_counts, Angle, CoincidenceTable, CountRecord, Port, SourceConfig,
    SourceMode,
};

pub type Angle64 = Angle<f64>;
pub type SourceConfig64 = SourceConfig<f64>;
pub type CoincidenceTable64 = CoincidenceTable<f64>;
pub type TwoQubitState64 = TwoQubitState<f64>;
pub type TrialPlan64 = TrialPlan<f64>;
pub type ChshSettings64 = ChshSettings<f64>;
pub type ChshResult64 = ChshResult<f64>;
pub type Visibility64 = Visibility<f64>;

pub type Angle32 = Angle<f32>;
pub type SourceConfig32 = SourceConfig<f32>;
pub type CoincidenceTable32 = CoincidenceTable<f32>;
pub type TwoQubitState32 = TwoQubitState<f32>;
pub type TrialPlan32 = TrialPlan<f32>;
pub type ChshSettings32 = ChshSettings<f32>;
pub type ChshResult32 = ChshResult<f32>;
pub type Visibility32 = Visibility<f32>;
