// SPDX-License-Identifier: Apache-2.0
use std::fs;
use std::path::{Path, PathBuf};

use ergmk::cfp::{cfp_ensemble, cfp_fast_mixing_check, cfp_stationary, CfpConfig, FastMixingReport, FAST_MIXING_RATIO};
use ergmk::exact::{build_rate_matrix, compare_equilibrium, detailed_balance_error, edge_marginals, embedded_chain_deviation, flux_balance_error, total_variation, StateSpace};
use ergmk::sampler::{crosscheck, mcmc_chains, summarize_samples, summarize_trajectories, CrosscheckReport, SamplerConfig};
use ergmk::sim::{ensemble, simulate, DwellDiagnostics};
use ergmk::stats::mean_and_se;
use ergmk::{ProcessSpec, RecordMode, SimConfig, StopReason, Trajectory};
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::manifest::{load_config, Manifest, MANIFEST_FILE};

/// Pass/fail thresholds for `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-9;
/// Occupancy total-variation bound for exact CFP comparisons.
pub const OCCUPANCY_TOLERANCE: f64 = 0.02;
const CROSSCHECK_REPLICATES: usize = 8;
const CROSSCHECK_CHAINS: usize = 4;

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub quiet: bool,
}

struct Run {
    config: Config,
    out: PathBuf,
    path: PathBuf,
    quiet: bool,
}

impl Run {
    fn open(path: &Path, opts: &Options) -> CliResult<Run> {
        let mut config = load_config(path)?;
        if let Some(seed) = opts.seed {
            config.sim.seed = seed;
        }
        let out = opts
            .out
            .clone()
            .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"));
        config.output.dir = Some(out.to_string_lossy().into_owned());
        fs::create_dir_all(&out)?;
        Ok(Run { config, out, path: path.to_path_buf(), quiet: opts.quiet })
    }

    fn write(&self, name: &str, bytes: impl AsRef<[u8]>) -> CliResult<()> {
        fs::write(self.out.join(name), bytes)?;
        Ok(())
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))? + "\n";
        self.write(name, text)
    }

    fn write_manifest(&self, command: &str) -> CliResult<()> {
        self.write(MANIFEST_FILE, Manifest::new(command, &self.path, &self.out, &self.config).to_json())
    }

    fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    fn sim_config(&self, process: ProcessSpec) -> CliResult<SimConfig> {
        let s = &self.config.sim;
        let mut c = SimConfig::new(process, self.config.initial_graph()?);
        c.t_max = s.t_max.unwrap_or(f64::INFINITY);
        c.max_events = s.max_events.unwrap_or(c.max_events);
        c.seed = s.seed;
        c.record = self.config.record_mode()?;
        c.burn_in = s.burn_in;
        Ok(c)
    }

    fn run_trajectories(&self, c: &SimConfig, replicates: usize) -> CliResult<Vec<Trajectory>> {
        Ok(if replicates <= 1 { vec![simulate(c)?] } else { ensemble(c, replicates)? })
    }

    fn write_trajectories(&self, trajs: &[Trajectory]) -> CliResult<()> {
        let mut events = Vec::new();
        trajs[0].write_event_log(&mut events)?;
        self.write("events.jsonl", events)?;
        for (k, t) in trajs.iter().enumerate().skip(1) {
            let mut buf = Vec::new();
            t.write_event_log(&mut buf)?;
            self.write(&format!("events_r{k}.jsonl"), buf)?;
        }
        let mut csv = trajs[0].summary_header() + "\n";
        for t in trajs {
            csv += &(t.summary_row() + "\n");
        }
        self.write("summary.csv", csv)?;
        if !trajs[0].snapshots.is_empty() {
            let mut csv = String::from("t,") + &trajs[0].observable_names.join(",") + "\n";
            for (t, stats) in &trajs[0].snapshots {
                let cells: Vec<String> = stats.iter().map(f64::to_string).collect();
                csv += &format!("{t},{}\n", cells.join(","));
            }
            self.write("snapshots.csv", csv)?;
        }
        Ok(())
    }
}

/// Absorbing stops and event caps hit before a finite horizon are errors.
fn stop_status(c: &SimConfig, trajs: &[Trajectory]) -> CliResult<()> {
    for (k, t) in trajs.iter().enumerate() {
        match t.stop {
            StopReason::Absorbing => {
                return Err(CliError::Runtime(format!(
                    "replicate {k} reached an absorbing state at t = {}",
                    t.sim_time
                )))
            }
            StopReason::EventCap if c.t_max.is_finite() => {
                return Err(CliError::Cap(format!(
                    "replicate {k} hit max_events = {} at t = {} before t_max = {}",
                    c.max_events, t.sim_time, c.t_max
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn simulate_cmd(path: &Path, opts: &Options) -> CliResult<()> {
    let run = Run::open(path, opts)?;
    let c = run.sim_config(run.config.process()?)?;
    let trajs = run.run_trajectories(&c, run.config.sim.replicates.unwrap_or(1))?;
    run.write_trajectories(&trajs)?;
    run.write_manifest("simulate")?;
    let t = &trajs[0];
    run.say(format!(
        "{} events over t = {} ({:.3} events per unit time), stop: {:?}",
        t.n_events,
        t.sim_time,
        t.events_per_time(),
        t.stop
    ));
    for (name, v) in t.observable_names.iter().zip(&t.time_averaged_stats) {
        run.say(format!("  time-averaged {name}: {v}"));
    }
    stop_status(&c, &trajs)
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    family: String,
    n: usize,
    directed: bool,
    theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_f: Option<f64>,
    states: usize,
    tv_distance: f64,
    max_rel_error: f64,
    residual: f64,
    log_z: f64,
    embedded_error: f64,
    flux_error: f64,
    detailed_balance_error: f64,
    edge_marginals: Vec<f64>,
    passed: bool,
}

pub fn verify_cmd(path: &Path, opts: &Options) -> CliResult<()> {
    let run = Run::open(path, opts)?;
    let model = run.config.model()?;
    let process = run.config.process()?;
    let n = run.config.n()?;
    let directed = run.config.sim.directed;
    process.check(n, directed)?;
    let space = StateSpace::new(n, directed)?;
    let report = compare_equilibrium(&process, &space)?;
    let r = build_rate_matrix(&process, &space)?;
    let embedded_error = embedded_chain_deviation(&r)?;
    let passed = report.tv_distance <= VERIFY_TOLERANCE && embedded_error <= VERIFY_TOLERANCE;
    let out = VerifyReport {
        family: process.family().key().to_string(),
        n,
        directed,
        theta: process.potentials().iter().flat_map(|p| p.theta().to_vec()).collect(),
        rate_constant: model.rate_constant,
        theta_d: model.theta_d,
        theta_f: model.theta_f,
        states: space.len(),
        tv_distance: report.tv_distance,
        max_rel_error: report.max_rel_error,
        residual: report.residual,
        log_z: report.log_z,
        embedded_error,
        flux_error: flux_balance_error(&r, &report.pi_analytic),
        detailed_balance_error: detailed_balance_error(&r, &report.pi_analytic),
        edge_marginals: edge_marginals(&space, &report.pi_solved),
        passed,
    };
    run.write_json("report.json", &out)?;
    run.write_manifest("verify")?;
    run.say(format!(
        "{} on {} states: tv = {:e}, embedded = {:e}, {}",
        out.family,
        out.states,
        out.tv_distance,
        out.embedded_error,
        if passed { "ok" } else { "FAILED" }
    ));
    if passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(format!(
            "tv_distance {:e}, embedded_error {:e} (tolerance {VERIFY_TOLERANCE:e})",
            out.tv_distance, out.embedded_error
        )))
    }
}

#[derive(Debug, Serialize)]
struct TimingSummary {
    replicates: usize,
    mean_dwell_observed: f64,
    mean_dwell_predicted: f64,
    scaled_dwell_mean: f64,
    scaled_dwell_std_error: f64,
    events_per_time: f64,
    mean_exit_rate: f64,
}

fn timing(trajs: &[Trajectory]) -> TimingSummary {
    let avg = |f: &dyn Fn(&DwellDiagnostics) -> f64| {
        trajs.iter().map(|t| f(&t.dwell)).sum::<f64>() / trajs.len() as f64
    };
    let (events_per_time, _) = mean_and_se(&trajs.iter().map(Trajectory::events_per_time).collect::<Vec<_>>());
    let (mean_exit_rate, _) = mean_and_se(&trajs.iter().map(|t| t.mean_exit_rate).collect::<Vec<_>>());
    TimingSummary {
        replicates: trajs.len(),
        mean_dwell_observed: avg(&|d| d.observed_mean),
        mean_dwell_predicted: avg(&|d| d.predicted_mean),
        scaled_dwell_mean: avg(&|d| d.scaled_mean),
        scaled_dwell_std_error: avg(&|d| d.scaled_std_error) / (trajs.len() as f64).sqrt(),
        events_per_time,
        mean_exit_rate,
    }
}

#[derive(Debug, Serialize)]
struct CrosscheckOutput {
    #[serde(flatten)]
    report: CrosscheckReport,
    acceptance_rate: f64,
    timing: TimingSummary,
}

pub fn crosscheck_cmd(path: &Path, opts: &Options) -> CliResult<()> {
    let run = Run::open(path, opts)?;
    let model = run.config.model()?;
    let section = run
        .config
        .sampler
        .clone()
        .ok_or_else(|| CliError::Config("crosscheck needs a [sampler] section".into()))?;
    let process = run.config.process()?;
    let c = run.sim_config(process.clone())?;
    if !c.t_max.is_finite() {
        return Err(CliError::Config("crosscheck needs a finite sim.t_max".into()));
    }
    let trajs = run.run_trajectories(&c, run.config.sim.replicates.unwrap_or(CROSSCHECK_REPLICATES))?;
    stop_status(&c, &trajs)?;

    let target = match &section.theta {
        Some(theta) => model.process(Some(theta))?.equilibrium(),
        None => process.equilibrium(),
    };
    let mut sc = SamplerConfig::new(target, c.initial.order(), c.initial.is_directed());
    sc.observables = c.observables.clone();
    sc.burn_in_steps = section.burn_in_steps.unwrap_or(sc.burn_in_steps);
    sc.thin = section.thin.unwrap_or(sc.thin);
    sc.n_samples = section.n_samples.unwrap_or(sc.n_samples);
    sc.seed = section.seed.unwrap_or(c.seed ^ 0x5eed_5eed);
    let chains = mcmc_chains(&sc, section.chains.unwrap_or(CROSSCHECK_CHAINS).max(1))?;

    let report = crosscheck(&process, &summarize_trajectories(&trajs)?, &summarize_samples(&chains)?)?;
    let passed = report.passed;
    let acceptance_rate = chains.iter().map(|o| o.acceptance_rate).sum::<f64>() / chains.len() as f64;
    let out = CrosscheckOutput { report, acceptance_rate, timing: timing(&trajs) };

    run.write_trajectories(&trajs)?;
    let mut samples = Vec::new();
    chains[0].write_csv(&mut samples)?;
    run.write("samples.csv", samples)?;
    run.write_json("crosscheck.json", &out)?;
    run.write_manifest("crosscheck")?;
    for row in &out.report.rows {
        run.say(format!(
            "{:<12} sim {:.4} ± {:.4}  mcmc {:.4} ± {:.4}  z = {:+.2}{}",
            row.statistic,
            row.sim_mean,
            row.sim_se,
            row.mcmc_mean,
            row.mcmc_se,
            row.z,
            if row.flagged { "  FLAGGED" } else { "" }
        ));
    }
    run.say(format!(
        "mean dwell {:.4} observed vs {:.4} from exit rates; {:.3} events per unit time",
        out.timing.mean_dwell_observed, out.timing.mean_dwell_predicted, out.timing.events_per_time
    ));
    if passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed("simulation and sampler means disagree".into()))
    }
}

#[derive(Debug, Serialize)]
struct ExactCfp {
    states: usize,
    tv_distance: f64,
}

#[derive(Debug, Serialize)]
struct CfpOutput {
    focus_count: usize,
    replicates: usize,
    edge_probability: f64,
    edge_probability_se: f64,
    fast_mixing_prediction: f64,
    mean_degree: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reciprocity_conditionals: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fast_mixing: Option<FastMixingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactCfp>,
}

pub fn cfp_cmd(path: &Path, opts: &Options) -> CliResult<()> {
    let run = Run::open(path, opts)?;
    let params = run.config.cfp_params()?;
    let section = run.config.cfp.clone().expect("checked by cfp_params");
    let n = run.config.n()?;
    let directed = run.config.sim.directed;
    let t_max = run
        .config
        .sim
        .t_max
        .ok_or_else(|| CliError::Config("cfp needs sim.t_max".into()))?;
    let replicates = section.replicates.unwrap_or(1).max(1);
    let mut c = CfpConfig::new(params, n, directed);
    c.t_max = t_max;
    c.burn_in = run.config.sim.burn_in;
    c.seed = run.config.sim.seed;
    c.max_events = run.config.sim.max_events.unwrap_or(c.max_events);
    c.record_events = run.config.record_mode()? == RecordMode::FullEvents;
    c.track_states = section.exact;
    let trajs = cfp_ensemble(&c, replicates)?;

    let mut events = Vec::new();
    trajs[0].write_event_log(&mut events)?;
    run.write("events.jsonl", events)?;
    let mut csv = String::from("edge_probability,mean_degree,mean_edges,mean_mutuals,events,effective_events,sim_time\n");
    for t in &trajs {
        csv += &format!(
            "{},{},{},{},{},{},{}\n",
            t.edge_probability, t.mean_degree, t.mean_edges, t.mean_mutuals, t.n_events, t.n_effective, t.sim_time
        );
    }
    run.write("summary.csv", csv)?;

    let m = trajs[0].focus_count;
    let (edge_probability, edge_probability_se) =
        mean_and_se(&trajs.iter().map(|t| t.edge_probability).collect::<Vec<_>>());
    let fast_mixing = if section.fast_mixing_check {
        let min_ratio = section.min_ratio.unwrap_or(FAST_MIXING_RATIO);
        Some(cfp_fast_mixing_check(&params, n, directed, t_max, replicates.max(2), c.seed, min_ratio)?)
    } else {
        None
    };
    let exact = if section.exact {
        let pi = cfp_stationary(&params, n, directed)?;
        let occ = trajs[0].occupancy_distribution(pi.len()).expect("occupancy tracked");
        Some(ExactCfp { states: pi.len(), tv_distance: total_variation(&occ, &pi) })
    } else {
        None
    };
    let out = CfpOutput {
        focus_count: m,
        replicates,
        edge_probability,
        edge_probability_se,
        fast_mixing_prediction: params.fast_mixing_edge_probability(m),
        mean_degree: trajs.iter().map(|t| t.mean_degree).sum::<f64>() / replicates as f64,
        reciprocity_conditionals: trajs[0].reciprocity_conditionals(),
        fast_mixing,
        exact,
    };
    run.write_json("cfp_report.json", &out)?;
    run.write_manifest("cfp")?;
    run.say(format!(
        "M = {m}: edge probability {:.5} ± {:.5} (fast-mixing limit {:.5})",
        out.edge_probability, out.edge_probability_se, out.fast_mixing_prediction
    ));

    let mut failures = Vec::new();
    if let Some(f) = &out.fast_mixing {
        run.say(format!("fast-mixing check: z = {:+.2}, consistent = {}", f.z, f.consistent));
        if !f.consistent {
            failures.push(format!("fast-mixing prediction off by z = {:.2}", f.z));
        }
    }
    if let Some(e) = &out.exact {
        run.say(format!("exact joint chain: {} states, occupancy tv = {:.4}", e.states, e.tv_distance));
        if e.tv_distance > OCCUPANCY_TOLERANCE {
            failures.push(format!("occupancy tv {:.4} exceeds {OCCUPANCY_TOLERANCE}", e.tv_distance));
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(failures.join("; ")))
    }
}
