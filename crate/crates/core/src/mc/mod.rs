//! Monte Carlo harness.
//!
//! A *cell* is one `(coefficient, noise, n)` combination. Replication `r` of a
//! cell simulates with seed [`crate::rng::replication_seed`]`(root_seed,
//! cell_hash, r)`, where `cell_hash` is FNV-1a of `"{coef_id}|{noise_id}|{n}"`.
//! Replications are dispatched through an [`Executor`], collected into
//! per-replication slots, and reduced in replication order, so every report is
//! a pure function of its [`ExperimentConfig`].
//!
//! The risk over the noise class is approximated by the maximum over the
//! configured panel (`panel_sup`), which is a lower bound on the true
//! supremum.

mod cell;
mod clt;
mod config;
mod efficiency;
mod exec;
mod lan;
mod lemmas;
mod rate;
mod risk;
pub mod stats;

pub use clt::{clt_diagnostic, CltReport, CltRow};
pub use config::ExperimentConfig;
pub use efficiency::{
    efficiency, efficiency_from_risk, EfficiencyReport, EfficiencyRow, EFFICIENCY_TARGET,
};
pub use exec::{Executor, Sequential};
pub use lan::{lan_diagnostic, LanReport, LanRow};
pub use lemmas::{lemma_checks, LemmaReport, LemmaRow};
pub use rate::{fit_power_law, rate_fit, RateFit};
pub use risk::{mc_risk, PanelRow, RiskReport, RiskRow};

pub(crate) use cell::Cell;
