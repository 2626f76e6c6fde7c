// SPDX-License-Identifier: Apache-2.0
//! Batch front end for ergmk: configuration, run manifests and the
//! `simulate`, `verify`, `crosscheck` and `cfp` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use error::{CliError, CliResult};
