// SPDX-License-Identifier: Apache-2.0
//! Metropolis sampling of an ERGM by single-toggle proposals, and
//! comparison of its statistic means with dwell-weighted simulation
//! averages.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::potential::StatisticTerm;
use crate::process::{EquilibriumForm, ProcessSpec};
use crate::sim::{replicate_seed, rng_from_seed, Trajectory};
use crate::stats::{batch_means_se, column_mean_and_se};

/// |z| above which a statistic is flagged.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub target: EquilibriumForm,
    pub n: usize,
    pub directed: bool,
    pub burn_in_steps: u64,
    pub thin: u64,
    pub n_samples: usize,
    pub seed: u64,
    pub observables: Vec<StatisticTerm>,
    /// Starting graph; empty when absent.
    pub initial: Option<Graph>,
    /// Keep the state code of each sample (graphs with at most 64 dyads).
    pub record_states: bool,
    /// Steps between full log-weight recomputations.
    pub audit_interval: u64,
}

impl SamplerConfig {
    pub fn new(target: EquilibriumForm, n: usize, directed: bool) -> Self {
        let mut observables = vec![StatisticTerm::Edges];
        for (_, p) in target.components() {
            for term in p.terms() {
                if !observables.contains(term) {
                    observables.push(term.clone());
                }
            }
        }
        SamplerConfig {
            target,
            n,
            directed,
            burn_in_steps: 10_000,
            thin: 10,
            n_samples: 10_000,
            seed: 0,
            observables,
            initial: None,
            record_states: false,
            audit_interval: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::SamplerConfig("thin must be at least 1".into()));
        }
        if self.n_samples == 0 {
            return Err(Error::SamplerConfig("n_samples must be at least 1".into()));
        }
        self.target.check(self.n, self.directed)?;
        for term in &self.observables {
            term.check(self.n, self.directed)?;
        }
        if let Some(g) = &self.initial {
            g.check_compatible(self.n, self.directed)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplerOutput {
    pub names: Vec<String>,
    pub samples: Vec<Vec<f64>>,
    pub state_codes: Option<Vec<u64>>,
    pub acceptance_rate: f64,
}

impl SamplerOutput {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.names.join(","))?;
        for row in &self.samples {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Empirical pmf over state codes.
    pub fn state_frequencies(&self, states: usize) -> Option<Vec<f64>> {
        let codes = self.state_codes.as_ref()?;
        let mut p = vec![0.0; states];
        for &c in codes {
            p[c as usize] += 1.0;
        }
        p.iter_mut().for_each(|x| *x /= codes.len() as f64);
        Some(p)
    }
}

/// Runs one Metropolis chain.
pub fn mcmc_sample(config: &SamplerConfig) -> Result<SamplerOutput> {
    config.validate()?;
    let mut rng = rng_from_seed(config.seed);
    let mut g = match &config.initial {
        Some(g) => g.clone(),
        None => Graph::empty(config.n, config.directed)?,
    };
    let m = g.dyad_count();
    let target = &config.target;
    let mut log_weight = target.log_weight_unchecked(&g);
    let mut stats: Vec<f64> = config.observables.iter().map(|t| t.value(&g)).collect();
    let track_codes = config.record_states && g.code().is_some();

    let total_steps = config.burn_in_steps + config.thin * config.n_samples as u64;
    let mut samples = Vec::with_capacity(config.n_samples);
    let mut codes = Vec::new();
    let mut accepted = 0u64;
    for s in 1..=total_steps {
        let d = rng.gen_range(0..m);
        let t = g.toggle_at(d);
        let delta = target.change_unchecked(&g, t);
        if delta >= 0.0 || rng.gen::<f64>() < delta.exp() {
            for (v, term) in stats.iter_mut().zip(&config.observables) {
                *v += term.change(&g, t);
            }
            g.flip_dyad(d);
            log_weight += delta;
            accepted += 1;
        }
        if config.audit_interval > 0 && s % config.audit_interval == 0 {
            let full = target.log_weight_unchecked(&g);
            let deviation = (full - log_weight).abs() / full.abs().max(1.0);
            if deviation > 1e-9 {
                return Err(Error::SamplerDrift { step: s, deviation });
            }
            log_weight = full;
        }
        if s > config.burn_in_steps && (s - config.burn_in_steps).is_multiple_of(config.thin) {
            samples.push(stats.clone());
            if track_codes {
                codes.push(g.code().unwrap());
            }
        }
    }
    Ok(SamplerOutput {
        names: config.observables.iter().map(StatisticTerm::name).collect(),
        samples,
        state_codes: track_codes.then_some(codes),
        acceptance_rate: accepted as f64 / total_steps as f64,
    })
}

/// Independent chains with derived seeds, in chain order.
pub fn mcmc_chains(config: &SamplerConfig, chains: usize) -> Result<Vec<SamplerOutput>> {
    (0..chains as u64)
        .into_par_iter()
        .map(|k| {
            let mut c = config.clone();
            c.seed = replicate_seed(config.seed, k);
            mcmc_sample(&c)
        })
        .collect()
}

/// Means and standard errors of a set of named statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatSummary {
    pub names: Vec<String>,
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
}

/// Dwell-weighted simulation means. Several replicates give a
/// between-replicate error; a single run falls back to its time batches.
pub fn summarize_trajectories(trajs: &[Trajectory]) -> Result<StatSummary> {
    let first = trajs
        .first()
        .ok_or_else(|| Error::StatisticMismatch("no trajectories".into()))?;
    if trajs.iter().any(|t| t.observable_names != first.observable_names) {
        return Err(Error::StatisticMismatch("replicates record different statistics".into()));
    }
    let (means, std_errors) = if trajs.len() >= 2 {
        let rows: Vec<Vec<f64>> = trajs.iter().map(|t| t.time_averaged_stats.clone()).collect();
        column_mean_and_se(&rows)
    } else if first.batch_means.len() >= 2 {
        let (_, se) = column_mean_and_se(&first.batch_means);
        (first.time_averaged_stats.clone(), se)
    } else {
        let dims = first.time_averaged_stats.len();
        (first.time_averaged_stats.clone(), vec![f64::INFINITY; dims])
    };
    Ok(StatSummary { names: first.observable_names.clone(), means, std_errors })
}

/// Sample means with batch-means standard errors (pooled across chains).
pub fn summarize_samples(outputs: &[SamplerOutput]) -> Result<StatSummary> {
    let first = outputs
        .first()
        .ok_or_else(|| Error::StatisticMismatch("no sampler output".into()))?;
    if outputs.iter().any(|o| o.names != first.names) {
        return Err(Error::StatisticMismatch("chains record different statistics".into()));
    }
    let dims = first.names.len();
    let mut means = Vec::with_capacity(dims);
    let mut std_errors = Vec::with_capacity(dims);
    for k in 0..dims {
        let per_chain: Vec<(f64, f64)> = outputs
            .iter()
            .map(|o| {
                let col: Vec<f64> = o.samples.iter().map(|r| r[k]).collect();
                let mean = col.iter().sum::<f64>() / col.len() as f64;
                (mean, batch_means_se(&col, 20))
            })
            .collect();
        let c = per_chain.len() as f64;
        means.push(per_chain.iter().map(|p| p.0).sum::<f64>() / c);
        std_errors.push(per_chain.iter().map(|p| p.1 * p.1).sum::<f64>().sqrt() / c);
    }
    Ok(StatSummary { names: first.names.clone(), means, std_errors })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckRow {
    pub statistic: String,
    pub sim_mean: f64,
    pub sim_se: f64,
    pub mcmc_mean: f64,
    pub mcmc_se: f64,
    pub z: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub family: String,
    pub rows: Vec<CrosscheckRow>,
    pub passed: bool,
}

/// Per-statistic z-scores between simulation and sampler means.
pub fn crosscheck(process: &ProcessSpec, sim: &StatSummary, mcmc: &StatSummary) -> Result<CrosscheckReport> {
    if sim.names != mcmc.names {
        return Err(Error::StatisticMismatch(format!(
            "simulation has [{}], sampler has [{}]",
            sim.names.join(", "),
            mcmc.names.join(", ")
        )));
    }
    let rows: Vec<CrosscheckRow> = (0..sim.names.len())
        .map(|k| {
            let diff = sim.means[k] - mcmc.means[k];
            let se = (sim.std_errors[k].powi(2) + mcmc.std_errors[k].powi(2)).sqrt();
            let z = if se > 0.0 {
                diff / se
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY.copysign(diff)
            };
            CrosscheckRow {
                statistic: sim.names[k].clone(),
                sim_mean: sim.means[k],
                sim_se: sim.std_errors[k],
                mcmc_mean: mcmc.means[k],
                mcmc_se: mcmc.std_errors[k],
                z,
                flagged: !(z.abs() <= Z_THRESHOLD),
            }
        })
        .collect();
    let passed = rows.iter().all(|r| !r.flagged);
    Ok(CrosscheckReport { family: process.family().key().to_string(), rows, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialSpec;

    #[test]
    fn validation() {
        let mut c = SamplerConfig::new(EquilibriumForm::from_potential(PotentialSpec::edges(0.0)), 4, false);
        c.thin = 0;
        assert!(matches!(mcmc_sample(&c), Err(Error::SamplerConfig(_))));
        c.thin = 1;
        c.n_samples = 0;
        assert!(matches!(mcmc_sample(&c), Err(Error::SamplerConfig(_))));
    }

    #[test]
    fn uniform_target_half_density() {
        let mut c = SamplerConfig::new(EquilibriumForm::from_potential(PotentialSpec::edges(0.0)), 10, false);
        c.seed = 4;
        let out = mcmc_sample(&c).unwrap();
        assert_eq!(out.samples.len(), 10_000);
        let density: Vec<f64> = out.samples.iter().map(|r| r[0] / 45.0).collect();
        let mean = density.iter().sum::<f64>() / density.len() as f64;
        let se = batch_means_se(&density, 20);
        assert!((mean - 0.5).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn same_seed_same_chain() {
        let mut c = SamplerConfig::new(EquilibriumForm::from_potential(PotentialSpec::edges(0.4)), 6, true);
        c.n_samples = 200;
        c.audit_interval = 1;
        assert_eq!(mcmc_sample(&c).unwrap().samples, mcmc_sample(&c).unwrap().samples);
    }

    #[test]
    fn mismatched_statistics_error() {
        let spec = ProcessSpec::Ctergm { potential: PotentialSpec::zero() };
        let a = StatSummary { names: vec!["edges".into()], means: vec![1.0], std_errors: vec![0.1] };
        let b = StatSummary { names: vec!["mutuals".into()], means: vec![1.0], std_errors: vec![0.1] };
        assert!(matches!(crosscheck(&spec, &a, &b), Err(Error::StatisticMismatch(_))));
        let far = StatSummary { names: vec!["edges".into()], means: vec![2.0], std_errors: vec![0.1] };
        let report = crosscheck(&spec, &a, &far).unwrap();
        assert!(!report.passed && report.rows[0].flagged);
        assert!(crosscheck(&spec, &a, &a).unwrap().passed);
    }
}
