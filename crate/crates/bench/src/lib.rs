// SPDX-License-Identifier: Apache-2.0
//! Shared fixtures for the benchmarks.

use ergmk::sim::rng_from_seed;
use ergmk::{Graph, PotentialSpec, ReferenceMeasure, StatisticTerm};
use rand::Rng;

/// Each edge variable present independently with probability `p`.
pub fn bernoulli_graph(n: usize, directed: bool, p: f64, seed: u64) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n, directed).unwrap();
    for d in 0..g.dyad_count() {
        if rng.gen::<f64>() < p {
            g.toggle(g.toggle_at(d)).unwrap();
        }
    }
    g
}

pub fn triad_potential(directed: bool) -> PotentialSpec {
    let mut terms = vec![StatisticTerm::Edges, StatisticTerm::Triangles, StatisticTerm::TwoStars];
    let mut theta = vec![-1.0, 0.2, -0.05];
    if directed {
        terms.push(StatisticTerm::Mutuals);
        theta.push(0.5);
    }
    PotentialSpec::new(terms, theta, ReferenceMeasure::Counting).unwrap()
}
