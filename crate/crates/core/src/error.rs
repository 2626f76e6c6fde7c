// SPDX-License-Identifier: Apache-2.0
use thiserror::Error;

use crate::process::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("vertex {vertex} out of range for order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop toggle on vertex {0}")]
    SelfLoop(usize),
    #[error("state code {code} does not fit {dyads} edge variables")]
    StateCodeOutOfRange { code: u64, dyads: usize },
    #[error(
        "graph (n={n}, directed={directed}) incompatible with model \
         (n={expected_n}, directed={expected_directed})"
    )]
    IncompatibleGraph {
        expected_n: usize,
        expected_directed: bool,
        n: usize,
        directed: bool,
    },
    #[error("{0} requires a directed graph")]
    RequiresDirected(&'static str),
    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("covariate matrix is {rows}x{cols}, graph order is {n}")]
    CovariateDimension { rows: usize, cols: usize, n: usize },
    #[error("{terms} statistic terms but {theta} coefficients")]
    ThetaLength { terms: usize, theta: usize },
    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),

    #[error("family {family} is missing parameter `{param}`")]
    MissingParameter { family: Family, param: &'static str },
    #[error("family {family} does not take parameter `{param}`")]
    UnexpectedParameter { family: Family, param: &'static str },
    #[error("{0} is only defined for the competing-rate SAOM")]
    WrongFamily(&'static str),
    #[error("rate for toggle {toggle} is not finite and non-negative: {rate}")]
    InvalidRate { toggle: crate::graph::Toggle, rate: f64 },

    #[error("absorbing state: total exit rate is zero")]
    Absorbing,
    #[error("invalid simulation config: {0}")]
    SimConfig(String),
    #[error("rate cache diverged from full recomputation by {deviation:e} at event {event}")]
    CacheIncoherent { event: u64, deviation: f64 },

    #[error("state space of {dyads} edge variables exceeds the enumeration cap of {cap}")]
    EnumerationCap { dyads: usize, cap: usize },
    #[error("rate matrix is reducible: {components} strongly connected components")]
    Reducible { components: usize },
    #[error("stationary solve failed: {0}")]
    Singular(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid sampler config: {0}")]
    SamplerConfig(String),
    #[error("tracked log-weight drifted by {deviation:e} at step {step}")]
    SamplerDrift { step: u64, deviation: f64 },
    #[error("statistic sets differ: {0}")]
    StatisticMismatch(String),

    #[error("invalid CFP parameters: {0}")]
    CfpParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
