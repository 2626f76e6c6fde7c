// SPDX-License-Identifier: Apache-2.0
//! Continuous-time graph processes whose long-run distributions are
//! exponential-family random graph models.
//!
//! * [`graph`]: fixed-order simple graphs, toggles, Hamming neighborhoods.
//! * [`potential`]: graph potentials and incremental change scores.
//! * [`process`]: the eight rate families and their equilibrium forms.
//! * [`sim`]: event-driven simulation of any rate family.
//! * [`exact`]: state-space enumeration, stationary and transient solves.
//! * [`sampler`]: Metropolis sampling of a target ERGM, and cross-checks.
//! * [`cfp`]: the contact formation process on graphs × focus assignments.

pub mod error;
pub mod graph;
pub mod potential;
pub mod process;
pub mod cfp;
pub mod exact;
pub mod sim;
pub mod sampler;
pub mod stats;
pub mod testing;

pub use error::{Error, Result};
pub use graph::{Graph, NeighborClass, Toggle};
pub use potential::{Covariate, PotentialSpec, ReferenceMeasure, StatisticTerm};
pub use process::{EquilibriumForm, Family, ProcessParams, ProcessSpec};
pub use sim::{RecordMode, SimConfig, StopReason, Trajectory};
