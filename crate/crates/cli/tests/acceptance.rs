// SPDX-License-Identifier: Apache-2.0
//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! and the process exits nonzero if any criterion fails.

use std::fs;
use std::process::Command;
use std::time::Instant;

use ergmk::cfp::{cfp_fast_mixing_check, cfp_simulate, cfp_stationary, CfpConfig, CfpParams, FocusCount, FAST_MIXING_RATIO};
use ergmk::exact::{analytic_distribution, compare_equilibrium, edge_marginals, total_variation, StateSpace};
use ergmk::sampler::{mcmc_sample, SamplerConfig};
use ergmk::sim::{simulate, RecordMode, SimConfig};
use ergmk::stats::{batch_means_se, mean_and_se};
use ergmk::testing::{equilibrium_cases, evaluate_case, profile_violations, CaseOutcome};
use ergmk::{EquilibriumForm, Graph, PotentialSpec, ProcessSpec, ReferenceMeasure, StatisticTerm};
use rayon::prelude::*;
use tempfile::TempDir;

type Outcome = Result<String, String>;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct Suite {
    outcomes: Vec<CaseOutcome>,
    seconds: f64,
}

fn equilibrium_suite() -> Suite {
    let start = Instant::now();
    let cases = equilibrium_cases(20, 2024);
    let outcomes = cases.par_iter().map(|c| evaluate_case(c).expect("suite case solves")).collect();
    Suite { outcomes, seconds: start.elapsed().as_secs_f64() }
}

fn worst(suite: &Suite, f: impl Fn(&CaseOutcome) -> f64) -> f64 {
    suite.outcomes.iter().map(f).fold(0.0, f64::max)
}

fn equilibrium_tv(suite: &Suite) -> Outcome {
    let tv = worst(suite, |o| o.tv_distance);
    verdict(
        tv <= 1e-9 && suite.seconds < 60.0,
        format!("{} cases, max tv {tv:.2e}, {:.1} s", suite.outcomes.len(), suite.seconds),
    )
}

fn flux_balance(suite: &Suite) -> Outcome {
    let flux = worst(suite, |o| o.flux_error);
    let detailed = worst(suite, |o| o.detailed_error);
    verdict(flux <= 1e-10 && detailed <= 1e-10, format!("max flux error {flux:.2e}, max pairwise error {detailed:.2e}"))
}

fn ctergm_factor_two() -> Outcome {
    let spec = ProcessSpec::Ctergm { potential: PotentialSpec::edges(0.3) };
    let space = StateSpace::new(3, false).map_err(|e| e.to_string())?;
    let report = compare_equilibrium(&spec, &space).map_err(|e| e.to_string())?;
    let err = edge_marginals(&space, &report.pi_solved)
        .iter()
        .map(|p| (p - logistic(0.6)).abs())
        .fold(0.0, f64::max);
    verdict(err <= 1e-10, format!("max |marginal - logistic(0.6)| = {err:.2e}"))
}

fn embedded_chain(suite: &Suite) -> Outcome {
    let e = worst(suite, |o| o.embedded_error);
    verdict(e <= 1e-9, format!("max embedded-chain deviation {e:.2e}"))
}

fn simulation_occupancy() -> Outcome {
    let start = Instant::now();
    let q = PotentialSpec::new(vec![StatisticTerm::Edges, StatisticTerm::Triangles], vec![-0.4, 0.6], ReferenceMeasure::Counting)
        .map_err(|e| e.to_string())?;
    let space = StateSpace::new(3, false).map_err(|e| e.to_string())?;
    let specs = [
        ("lergm", ProcessSpec::Lergm { rate_constant: 1.0, potential: q.clone() }),
        ("stability", ProcessSpec::DifferentialStability { rate_constant: 1.0, potential: q }),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (k, (name, spec)) in specs.into_iter().enumerate() {
        let (exact, _) = analytic_distribution(&spec.equilibrium(), &space).map_err(|e| e.to_string())?;
        let mut c = SimConfig::new(spec, Graph::empty(3, false).map_err(|e| e.to_string())?);
        c.max_events = 1_000_000;
        c.seed = 500 + k as u64;
        c.track_states = true;
        c.record = RecordMode::StatisticsOnly;
        let traj = simulate(&c).map_err(|e| e.to_string())?;
        let tv = total_variation(&traj.occupancy_distribution(space.len()).expect("tracked"), &exact);
        ok &= traj.n_events >= 1_000_000 && tv <= 0.02;
        parts.push(format!("{name} tv {tv:.4} over {} events", traj.n_events));
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(ok && secs < 120.0, format!("{}, {secs:.1} s", parts.join(", ")))
}

fn edge_lifetime() -> Outcome {
    let spec = ProcessSpec::ConstDissCstergm { formation: PotentialSpec::edges(0.0), theta_d: 2f64.ln() };
    let mut c = SimConfig::new(spec, Graph::empty(5, false).map_err(|e| e.to_string())?);
    c.max_events = 60_000;
    c.seed = 606;
    c.record = RecordMode::FullEvents;
    let traj = simulate(&c).map_err(|e| e.to_string())?;
    let lifetimes = traj.edge_lifetimes();
    let (m, _) = mean_and_se(&lifetimes);
    verdict(
        lifetimes.len() >= 10_000 && (m - 0.5).abs() <= 0.025,
        format!("mean lifetime {m:.4} over {} dissolutions", lifetimes.len()),
    )
}

fn cfp_limits() -> Outcome {
    let fast = CfpParams::new(1e3, 1.0, 1.0, FocusCount::Fixed(10), false).map_err(|e| e.to_string())?;
    let report = cfp_fast_mixing_check(&fast, 10, false, 150.0, 8, 707, FAST_MIXING_RATIO).map_err(|e| e.to_string())?;
    let limit_ok = (report.predicted_edge_probability - 1.0 / 11.0).abs() < 1e-15
        && (report.observed_edge_probability - 1.0 / 11.0).abs() <= 3.0 * report.std_error;

    let small = CfpParams::new(0.5, 1.0, 0.7, FocusCount::Fixed(2), false).map_err(|e| e.to_string())?;
    let pi = cfp_stationary(&small, 2, false).map_err(|e| e.to_string())?;
    let mut c = CfpConfig::new(small, 2, false);
    c.t_max = 40_000.0;
    c.track_states = true;
    c.seed = 708;
    let traj = cfp_simulate(&c).map_err(|e| e.to_string())?;
    let tv = total_variation(&traj.occupancy_distribution(pi.len()).expect("tracked"), &pi);
    verdict(
        limit_ok && tv <= 0.02,
        format!(
            "edge probability {:.5} ± {:.5} vs 1/11, n = 2 M = 2 product chain tv {tv:.4}",
            report.observed_edge_probability, report.std_error
        ),
    )
}

fn rate_profiles() -> Outcome {
    let violations = profile_violations(20, 808).map_err(|e| e.to_string())?;
    verdict(violations.is_empty(), if violations.is_empty() { "all profile claims hold".into() } else { violations.join("; ") })
}

const SIM_CONFIG: &str = r#"
version = 1
[model]
family = "lergm"
terms = ["edges", "triangles"]
theta = [-0.3, 0.4]
rate_constant = 1.0
[sim]
n = 6
t_max = 30.0
seed = 909
replicates = 2
"#;

const VERIFY_CONFIG: &str = r#"
version = 1
[model]
family = "inhibit"
terms = ["edges", "mutuals"]
theta = [-0.2, 0.7]
rate_constant = 2.0
[sim]
n = 3
directed = true
seed = 909
"#;

const CROSSCHECK_CONFIG: &str = r#"
version = 1
[model]
family = "stability"
terms = ["edges"]
theta = [0.2]
rate_constant = 1.0
[sim]
n = 5
t_max = 100.0
burn_in = 5.0
seed = 909
[sampler]
n_samples = 3000
"#;

const CFP_CONFIG: &str = r#"
version = 1
[sim]
n = 4
t_max = 50.0
seed = 909
[cfp]
r_m = 0.8
r_f = 1.0
r_d = 0.5
foci = 3
replicates = 2
"#;

fn determinism() -> Outcome {
    let tmp = TempDir::new().map_err(|e| e.to_string())?;
    let cases = [
        ("simulate", SIM_CONFIG, vec!["events.jsonl", "events_r1.jsonl", "summary.csv"]),
        ("verify", VERIFY_CONFIG, vec!["report.json"]),
        ("crosscheck", CROSSCHECK_CONFIG, vec!["events.jsonl", "samples.csv", "crosscheck.json"]),
        ("cfp", CFP_CONFIG, vec!["events.jsonl", "summary.csv", "cfp_report.json"]),
    ];
    let mut failures = Vec::new();
    for (sub, text, files) in cases {
        let cfg = tmp.path().join(format!("{sub}.toml"));
        fs::write(&cfg, text).map_err(|e| e.to_string())?;
        let run = |dir: &str| -> Result<(), String> {
            let out = tmp.path().join(dir);
            let status = Command::new(env!("CARGO_BIN_EXE_ergmk"))
                .args(["--quiet", sub])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            if status.success() {
                Ok(())
            } else {
                Err(format!("{sub} exited with {status}"))
            }
        };
        run(&format!("{sub}_a"))?;
        run(&format!("{sub}_b"))?;
        let read = |dir: String, f: &str| fs::read(tmp.path().join(dir).join(f)).map_err(|e| e.to_string());
        for f in files {
            if read(format!("{sub}_a"), f)? != read(format!("{sub}_b"), f)? {
                failures.push(format!("{sub}/{f}"));
            }
        }
        let events = read(format!("{sub}_a"), if sub == "verify" { "report.json" } else { "events.jsonl" })?;
        if events.is_empty() {
            failures.push(format!("{sub} wrote an empty log"));
        }
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            "simulate, verify, crosscheck and cfp outputs bit-identical across reruns".into()
        } else {
            format!("differing outputs: {}", failures.join(", "))
        },
    )
}

fn sampler_calibration() -> Outcome {
    let q = PotentialSpec::new(vec![StatisticTerm::Edges, StatisticTerm::Triangles], vec![-0.3, 0.8], ReferenceMeasure::Counting)
        .map_err(|e| e.to_string())?;
    let target = EquilibriumForm::from_potential(q);
    let space = StateSpace::new(3, false).map_err(|e| e.to_string())?;
    let (exact, _) = analytic_distribution(&target, &space).map_err(|e| e.to_string())?;
    let mut c = SamplerConfig::new(target, 3, false);
    c.n_samples = 100_000;
    c.record_states = true;
    c.seed = 1010;
    let out = mcmc_sample(&c).map_err(|e| e.to_string())?;
    let tv = total_variation(&out.state_frequencies(space.len()).expect("tracked"), &exact);

    let mut c = SamplerConfig::new(EquilibriumForm::from_potential(PotentialSpec::edges(1.0)), 10, false);
    c.seed = 1011;
    let out = mcmc_sample(&c).map_err(|e| e.to_string())?;
    let density: Vec<f64> = out.samples.iter().map(|r| r[0] / 45.0).collect();
    let mean = density.iter().sum::<f64>() / density.len() as f64;
    let se = batch_means_se(&density, 20);
    verdict(
        tv <= 0.02 && (mean - logistic(1.0)).abs() <= 3.0 * se,
        format!("n = 3 pmf tv {tv:.4}; n = 10 edge frequency {mean:.4} ± {se:.4} vs {:.4}", logistic(1.0)),
    )
}

fn main() {
    let suite = equilibrium_suite();
    let results: Vec<(&str, Outcome)> = vec![
        ("equilibrium theorem suite", equilibrium_tv(&suite)),
        ("flux and detailed balance", flux_balance(&suite)),
        ("ctergm doubled potential", ctergm_factor_two()),
        ("embedded jump chain", embedded_chain(&suite)),
        ("simulated occupancy", simulation_occupancy()),
        ("constant-dissolution lifetime", edge_lifetime()),
        ("cfp limits", cfp_limits()),
        ("rate profiles", rate_profiles()),
        ("cli determinism", determinism()),
        ("sampler calibration", sampler_calibration()),
    ];
    let mut failed = 0;
    for (k, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
