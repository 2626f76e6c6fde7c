// SPDX-License-Identifier: Apache-2.0
//! Randomized model draws for property suites and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{build_rate_matrix, compare_equilibrium, detailed_balance_error, embedded_chain_deviation, flux_balance_error, StateSpace};
use crate::graph::NeighborClass;
use crate::potential::{PotentialSpec, ReferenceMeasure, StatisticTerm};
use crate::process::{Family, ProcessSpec};
use crate::sim::rng_from_seed;

/// Terms with coefficients in `[-1.5, 1.5]` and a random reference measure.
pub fn random_potential<R: Rng>(directed: bool, rng: &mut R) -> PotentialSpec {
    let mut terms = vec![StatisticTerm::Edges, StatisticTerm::Triangles, StatisticTerm::TwoStars];
    let mut references = vec![ReferenceMeasure::Counting, ReferenceMeasure::KrivitskySparse];
    if directed {
        terms.push(StatisticTerm::Mutuals);
        references.push(ReferenceMeasure::ReciprocitySparse);
        references.push(ReferenceMeasure::PowerLaw { gamma: rng.gen_range(0.0..1.0) });
    }
    let theta = terms.iter().map(|_| rng.gen_range(-1.5..=1.5)).collect();
    let reference = *references.choose(rng).unwrap();
    PotentialSpec::new(terms, theta, reference).expect("finite draw")
}

/// A random member of `family`: `A` from {0.5, 1, 2}, constant-side
/// coefficients in `[-1, 1]`.
pub fn random_spec<R: Rng>(family: Family, directed: bool, rng: &mut R) -> ProcessSpec {
    let a = *[0.5, 1.0, 2.0].choose(rng).unwrap();
    match family {
        Family::CompetingRateSaom => ProcessSpec::CompetingRateSaom { potential: random_potential(directed, rng) },
        Family::Lergm => ProcessSpec::Lergm { rate_constant: a, potential: random_potential(directed, rng) },
        Family::ChangeInhibition => {
            ProcessSpec::ChangeInhibition { rate_constant: a, potential: random_potential(directed, rng) }
        }
        Family::DifferentialStability => {
            ProcessSpec::DifferentialStability { rate_constant: a, potential: random_potential(directed, rng) }
        }
        Family::ConstDissCstergm => ProcessSpec::ConstDissCstergm {
            formation: random_potential(directed, rng),
            theta_d: rng.gen_range(-1.0..=1.0),
        },
        Family::ConstFormCstergm => ProcessSpec::ConstFormCstergm {
            dissolution: random_potential(directed, rng),
            theta_f: rng.gen_range(-1.0..=1.0),
        },
        Family::GeneralCstergm => ProcessSpec::GeneralCstergm {
            formation: random_potential(directed, rng),
            dissolution: random_potential(directed, rng),
        },
        Family::Ctergm => ProcessSpec::Ctergm { potential: random_potential(directed, rng) },
    }
}

#[derive(Debug, Clone)]
pub struct SuiteCase {
    pub spec: ProcessSpec,
    pub n: usize,
    pub directed: bool,
}

/// `draws` random members of every family on n = 3 directed and
/// n = 3, 4 undirected (directed only for the SAOM).
pub fn equilibrium_cases(draws: usize, seed: u64) -> Vec<SuiteCase> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for family in Family::ALL {
        for (n, directed) in [(3, true), (3, false), (4, false)] {
            if family == Family::CompetingRateSaom && !directed {
                continue;
            }
            for _ in 0..draws {
                out.push(SuiteCase { spec: random_spec(family, directed, &mut rng), n, directed });
            }
        }
    }
    out
}

/// Worst-case errors of one case.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CaseOutcome {
    pub tv_distance: f64,
    pub flux_error: f64,
    pub detailed_error: f64,
    pub embedded_error: f64,
}

pub fn evaluate_case(case: &SuiteCase) -> Result<CaseOutcome> {
    let space = StateSpace::new(case.n, case.directed)?;
    let report = compare_equilibrium(&case.spec, &space)?;
    let r = build_rate_matrix(&case.spec, &space)?;
    Ok(CaseOutcome {
        tv_distance: report.tv_distance,
        flux_error: flux_balance_error(&r, &report.pi_analytic),
        detailed_error: detailed_balance_error(&r, &report.pi_analytic),
        embedded_error: embedded_chain_deviation(&r)?,
    })
}

fn varies(xs: &[f64]) -> bool {
    let hi = xs.iter().cloned().fold(f64::MIN, f64::max);
    let lo = xs.iter().cloned().fold(f64::MAX, f64::min);
    xs.len() > 1 && hi - lo > 1e-9 * hi.abs().max(1.0)
}

/// Whether rates within each neighbor class (uphill, downhill, addition,
/// removal) ever differ across `draws` random members of `family`.
pub fn observed_sensitivity(family: Family, draws: usize, seed: u64) -> Result<[bool; 4]> {
    let mut rng = rng_from_seed(seed);
    let mut seen = [false; 4];
    for (n, directed) in [(3, true), (4, false)] {
        if family == Family::CompetingRateSaom && !directed {
            continue;
        }
        let space = StateSpace::new(n, directed)?;
        for _ in 0..draws {
            let spec = random_spec(family, directed, &mut rng);
            let eq = spec.equilibrium();
            for g in space.graphs() {
                let mut classes: [Vec<f64>; 4] = Default::default();
                for (t, class) in g.hamming_neighbors() {
                    let r = spec.rate(&g, t)?;
                    let d = eq.change(&g, t)?;
                    if d > 1e-12 {
                        classes[0].push(r);
                    } else if d < -1e-12 {
                        classes[1].push(r);
                    }
                    classes[if class == NeighborClass::HPlus { 2 } else { 3 }].push(r);
                }
                for (k, c) in classes.iter().enumerate() {
                    seen[k] |= varies(c);
                }
            }
        }
    }
    Ok(seen)
}

/// Edges-only member of `family` with every coefficient set to `s`.
pub fn edges_witness(family: Family, s: f64) -> ProcessSpec {
    let q = PotentialSpec::edges(s);
    match family {
        Family::CompetingRateSaom => ProcessSpec::CompetingRateSaom { potential: q },
        Family::Lergm => ProcessSpec::Lergm { rate_constant: 1.0, potential: q },
        Family::ChangeInhibition => ProcessSpec::ChangeInhibition { rate_constant: 1.0, potential: q },
        Family::DifferentialStability => ProcessSpec::DifferentialStability { rate_constant: 1.0, potential: q },
        Family::ConstDissCstergm => ProcessSpec::ConstDissCstergm { formation: q, theta_d: s },
        Family::ConstFormCstergm => ProcessSpec::ConstFormCstergm { dissolution: q, theta_f: s },
        Family::GeneralCstergm => ProcessSpec::GeneralCstergm { formation: q.clone(), dissolution: q },
        Family::Ctergm => ProcessSpec::Ctergm { potential: q },
    }
}

/// Largest rate over all states of n = 3 directed graphs for the
/// coefficient `±20` witnesses.
pub fn witness_peak_rate(family: Family) -> Result<f64> {
    let space = StateSpace::new(3, true)?;
    let mut peak: f64 = 0.0;
    for s in [20.0, -20.0] {
        let spec = edges_witness(family, s);
        for g in space.graphs() {
            peak = spec.rates(&g)?.into_iter().fold(peak, f64::max);
        }
    }
    Ok(peak)
}

/// Checks every rate-profile claim for all families and returns the
/// violations found.
pub fn profile_violations(draws: usize, seed: u64) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rng = rng_from_seed(seed);
    for family in Family::ALL {
        let p = family.profile();
        let want = [p.uphill_sensitive, p.downhill_sensitive, p.addition_sensitive, p.removal_sensitive];
        let seen = observed_sensitivity(family, draws, seed ^ family as u64)?;
        if seen != want {
            out.push(format!("{family}: neighbor-class sensitivity {seen:?}, profile says {want:?}"));
        }
        let peak = witness_peak_rate(family)?;
        if p.bounded_rate && peak > 1.0 {
            out.push(format!("{family}: bounded family reached rate {peak} with A = 1"));
        }
        if !p.bounded_rate && peak <= 1e6 {
            out.push(format!("{family}: no unbounded-rate witness (peak {peak})"));
        }
    }
    let space = StateSpace::new(3, true)?;
    for _ in 0..draws {
        for family in [Family::Lergm, Family::ChangeInhibition] {
            let spec = random_spec(family, true, &mut rng);
            let a = match &spec {
                ProcessSpec::Lergm { rate_constant, .. } | ProcessSpec::ChangeInhibition { rate_constant, .. } => *rate_constant,
                _ => unreachable!(),
            };
            for g in space.graphs() {
                if spec.rates(&g)?.iter().any(|&r| r > a) {
                    out.push(format!("{family}: rate above A = {a} at {g:?}"));
                }
            }
        }
        let ci = random_spec(Family::ChangeInhibition, true, &mut rng);
        let ds = random_spec(Family::DifferentialStability, true, &mut rng);
        let cd = random_spec(Family::ConstDissCstergm, true, &mut rng);
        let cf = random_spec(Family::ConstFormCstergm, true, &mut rng);
        let (ProcessSpec::ChangeInhibition { rate_constant: a, potential: q }, ProcessSpec::ConstDissCstergm { theta_d, .. }, ProcessSpec::ConstFormCstergm { theta_f, .. }) = (&ci, &cd, &cf) else {
            unreachable!()
        };
        for g in space.graphs() {
            let ds_rates = ds.rates(&g)?;
            if ds_rates.iter().any(|&r| r != ds_rates[0]) {
                out.push(format!("differential stability: rates differ across neighbors of {g:?}"));
            }
            for (t, class) in g.hamming_neighbors() {
                if q.change_score(&g, t)? >= 0.0 && ci.rate(&g, t)? != *a {
                    out.push(format!("change inhibition: uphill toggle {t} not at rate A"));
                }
                match class {
                    NeighborClass::HMinus if cd.rate(&g, t)? != theta_d.exp() => {
                        out.push(format!("cstergm-cd: removal rate of {t} depends on the graph"))
                    }
                    NeighborClass::HPlus if cf.rate(&g, t)? != theta_f.exp() => {
                        out.push(format!("cstergm-cf: addition rate of {t} depends on the graph"))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(out)
}
