// SPDX-License-Identifier: Apache-2.0
//! Contact formation process and its reciprocity variant.
//!
//! Vertices migrate among `M` foci. Formation events fire at rate `r_f`
//! on every co-located edge variable and, with reciprocity, on every arc
//! whose reverse is present. Dissolution events fire at rate `r_d` on
//! every edge variable. An edge is present iff its most recent event was a
//! formation, so formation on a present edge and dissolution on an absent
//! one change nothing.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{solve_stationary, RateMatrix, MAX_ENUMERATED_DYADS};
use crate::graph::Graph;
use crate::sim::{replicate_seed, rng_from_seed, StopReason};
use crate::stats::mean_and_se;

/// Default minimum of `r_m / max(r_f, r_d)` for the fast-mixing check.
pub const FAST_MIXING_RATIO: f64 = 1e3;

/// Number of foci, fixed or scaled with the graph order as
/// `round(c · N^(1-γ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FocusCount {
    Fixed(usize),
    Scaled { c: f64, gamma: f64 },
}

impl FocusCount {
    pub fn resolve(&self, n: usize) -> Result<usize> {
        let m = match *self {
            FocusCount::Fixed(m) => m,
            FocusCount::Scaled { c, gamma } => {
                if !(c.is_finite() && gamma.is_finite() && c > 0.0) {
                    return Err(Error::CfpParams("focus scaling needs finite c > 0 and finite gamma".into()));
                }
                (c * (n as f64).powf(1.0 - gamma)).round() as usize
            }
        };
        if m == 0 {
            return Err(Error::CfpParams("focus count must be at least 1".into()));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfpParams {
    pub r_m: f64,
    pub r_f: f64,
    pub r_d: f64,
    pub foci: FocusCount,
    pub reciprocity: bool,
}

impl CfpParams {
    pub fn new(r_m: f64, r_f: f64, r_d: f64, foci: FocusCount, reciprocity: bool) -> Result<Self> {
        let p = CfpParams { r_m, r_f, r_d, foci, reciprocity };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("r_m", self.r_m), ("r_f", self.r_f), ("r_d", self.r_d)] {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::CfpParams(format!("{name} must be finite and positive, got {r}")));
            }
        }
        if let FocusCount::Fixed(0) = self.foci {
            return Err(Error::CfpParams("focus count must be at least 1".into()));
        }
        Ok(())
    }

    fn check(&self, n: usize, directed: bool) -> Result<usize> {
        self.validate()?;
        if self.reciprocity && !directed {
            return Err(Error::RequiresDirected("contact formation with reciprocity"));
        }
        self.foci.resolve(n)
    }

    /// Fast-mixing per-edge probability `(r_f/M) / (r_f/M + r_d)`.
    pub fn fast_mixing_edge_probability(&self, m: usize) -> f64 {
        let on = self.r_f / m as f64;
        on / (on + self.r_d)
    }
}

/// Graph plus a focus (0-based) per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CfpState {
    graph: Graph,
    foci: Vec<usize>,
    m: usize,
    members: Vec<Vec<usize>>,
    slot: Vec<usize>,
    mutuals: usize,
}

impl CfpState {
    pub fn new(graph: Graph, foci: Vec<usize>, m: usize) -> Result<Self> {
        if foci.len() != graph.order() {
            return Err(Error::CfpParams(format!("{} foci for {} vertices", foci.len(), graph.order())));
        }
        if m == 0 || foci.iter().any(|&f| f >= m) {
            return Err(Error::CfpParams(format!("focus out of range 0..{m}")));
        }
        let mut members = vec![Vec::new(); m];
        let mut slot = vec![0; foci.len()];
        for (v, &f) in foci.iter().enumerate() {
            slot[v] = members[f].len();
            members[f].push(v);
        }
        let mutuals = if graph.is_directed() { graph.mutual_count()? } else { 0 };
        Ok(CfpState { graph, foci, m, members, slot, mutuals })
    }

    /// Empty graph with uniformly random foci.
    pub fn random<R: Rng>(n: usize, directed: bool, m: usize, rng: &mut R) -> Result<Self> {
        let foci = (0..n).map(|_| rng.gen_range(0..m.max(1))).collect();
        CfpState::new(Graph::empty(n, directed)?, foci, m)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn foci(&self) -> &[usize] {
        &self.foci
    }

    pub fn focus_count(&self) -> usize {
        self.m
    }

    /// Index in the product space: graph code plus `2^dyads` times the foci
    /// read as a base-`M` number (vertex 0 least significant).
    pub fn code(&self) -> Option<u64> {
        let g = self.graph.code()?;
        let mut f: u64 = 0;
        for &x in self.foci.iter().rev() {
            f = f.checked_mul(self.m as u64)?.checked_add(x as u64)?;
        }
        f.checked_mul(1u64.checked_shl(self.graph.dyad_count() as u32)?)?.checked_add(g)
    }

    fn colocated_pairs(&self, f: usize) -> usize {
        let k = self.members[f].len();
        if self.graph.is_directed() {
            k * k.saturating_sub(1)
        } else {
            k * k.saturating_sub(1) / 2
        }
    }

    fn migrate(&mut self, v: usize, to: usize) {
        let from = self.foci[v];
        if from == to {
            return;
        }
        let s = self.slot[v];
        self.members[from].swap_remove(s);
        if let Some(&moved) = self.members[from].get(s) {
            self.slot[moved] = s;
        }
        self.slot[v] = self.members[to].len();
        self.members[to].push(v);
        self.foci[v] = to;
    }

    /// Sets dyad `d` to `present`; reports whether anything changed.
    fn set(&mut self, d: usize, present: bool) -> bool {
        if self.graph.has_dyad(d) == present {
            return false;
        }
        let t = self.graph.toggle_at(d);
        if self.graph.is_directed() && self.graph.has_edge(t.j, t.i) {
            if present {
                self.mutuals += 1;
            } else {
                self.mutuals -= 1;
            }
        }
        self.graph.flip_dyad(d);
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CfpEventKind {
    Migrate,
    Form,
    Dissolve,
}

/// For migrations `i` is the vertex and `focus` its destination; for edge
/// events `(i, j)` is the edge variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfpEvent {
    pub time: f64,
    pub kind: CfpEventKind,
    pub i: usize,
    pub j: Option<usize>,
    pub focus: Option<usize>,
    /// False for no-op events.
    pub effective: bool,
}

fn exit_parts(state: &CfpState, p: &CfpParams) -> [f64; 4] {
    let n = state.graph.order() as f64;
    let pairs: usize = (0..state.m).map(|f| state.colocated_pairs(f)).sum();
    let recip = if p.reciprocity { state.graph.edge_count() as f64 * p.r_f } else { 0.0 };
    [n * p.r_m, pairs as f64 * p.r_f, recip, state.graph.dyad_count() as f64 * p.r_d]
}

/// Draws and applies one event. Time in `event.time` is the holding time.
pub fn cfp_step<R: Rng>(state: &mut CfpState, params: &CfpParams, rng: &mut R) -> Result<(f64, CfpEvent)> {
    let parts = exit_parts(state, params);
    let total: f64 = parts.iter().sum();
    let dt = rng.sample::<f64, _>(Exp1) / total;
    let mut u = rng.gen::<f64>() * total;
    let mut stream = 3;
    for (k, r) in parts.iter().enumerate() {
        if u < *r {
            stream = k;
            break;
        }
        u -= r;
    }
    let n = state.graph.order();
    let event = match stream {
        0 => {
            let v = rng.gen_range(0..n);
            let to = rng.gen_range(0..state.m);
            let effective = state.foci[v] != to;
            state.migrate(v, to);
            CfpEvent { time: dt, kind: CfpEventKind::Migrate, i: v, j: None, focus: Some(to), effective }
        }
        1 => {
            let weights: Vec<usize> = (0..state.m).map(|f| state.colocated_pairs(f)).collect();
            let mut pick = rng.gen_range(0..weights.iter().sum::<usize>());
            let mut f = 0;
            while pick >= weights[f] {
                pick -= weights[f];
                f += 1;
            }
            let k = state.members[f].len();
            let a = rng.gen_range(0..k);
            let mut b = rng.gen_range(0..k - 1);
            if b >= a {
                b += 1;
            }
            let (i, j) = (state.members[f][a], state.members[f][b]);
            let d = state.graph.dyad_index_unchecked(i, j);
            let effective = state.set(d, true);
            let t = state.graph.toggle_at(d);
            CfpEvent { time: dt, kind: CfpEventKind::Form, i: t.i, j: Some(t.j), focus: None, effective }
        }
        2 => {
            let pick = rng.gen_range(0..state.graph.edge_count());
            let arc = state.graph.edges().nth(pick).expect("arc index within edge count");
            let d = state.graph.dyad_index_unchecked(arc.j, arc.i);
            let effective = state.set(d, true);
            CfpEvent { time: dt, kind: CfpEventKind::Form, i: arc.j, j: Some(arc.i), focus: None, effective }
        }
        _ => {
            let d = rng.gen_range(0..state.graph.dyad_count());
            let effective = state.set(d, false);
            let t = state.graph.toggle_at(d);
            CfpEvent { time: dt, kind: CfpEventKind::Dissolve, i: t.i, j: Some(t.j), focus: None, effective }
        }
    };
    Ok((dt, event))
}

#[derive(Debug, Clone)]
pub struct CfpConfig {
    pub params: CfpParams,
    pub n: usize,
    pub directed: bool,
    pub t_max: f64,
    pub max_events: u64,
    pub seed: u64,
    pub burn_in: f64,
    /// Log state-changing events.
    pub record_events: bool,
    /// Track product-space occupancy (small instances only).
    pub track_states: bool,
    pub batches: usize,
}

impl CfpConfig {
    pub fn new(params: CfpParams, n: usize, directed: bool) -> Self {
        CfpConfig {
            params,
            n,
            directed,
            t_max: 100.0,
            max_events: 100_000_000,
            seed: 0,
            burn_in: 0.0,
            record_events: false,
            track_states: false,
            batches: 20,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CfpTrajectory {
    pub n: usize,
    pub directed: bool,
    pub focus_count: usize,
    pub events: Vec<CfpEvent>,
    pub n_events: u64,
    pub n_effective: u64,
    pub sim_time: f64,
    pub stop: StopReason,
    /// Time-averaged fraction of edge variables present.
    pub edge_probability: f64,
    pub edge_probability_batches: Vec<f64>,
    pub mean_degree: f64,
    /// Time averages of edge and mutual counts.
    pub mean_edges: f64,
    pub mean_mutuals: f64,
    /// `focus_occupancy[v][f]`: fraction of time vertex `v` spent at `f`.
    pub focus_occupancy: Vec<Vec<f64>>,
    pub state_occupancy: Option<BTreeMap<u64, f64>>,
}

impl CfpTrajectory {
    /// `(Pr(arc | reverse present), Pr(arc | reverse absent))` from time
    /// averages; directed runs only.
    pub fn reciprocity_conditionals(&self) -> Option<(f64, f64)> {
        if !self.directed {
            return None;
        }
        let dyads = (self.n * (self.n - 1)) as f64;
        let with_reverse = 2.0 * self.mean_mutuals;
        Some((with_reverse / self.mean_edges, (self.mean_edges - with_reverse) / (dyads - self.mean_edges)))
    }

    pub fn occupancy_distribution(&self, states: usize) -> Option<Vec<f64>> {
        let occ = self.state_occupancy.as_ref()?;
        let mut p = vec![0.0; states];
        for (&code, &t) in occ {
            p[code as usize] += t;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        Some(p)
    }

    /// Event log lines; migrations carry `focus`, edge events `j` and
    /// `add`.
    pub fn write_event_log<W: Write>(&self, mut w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Line {
            t: f64,
            kind: CfpEventKind,
            i: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            j: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            add: Option<bool>,
            #[serde(skip_serializing_if = "Option::is_none")]
            focus: Option<usize>,
        }
        for e in &self.events {
            let add = match e.kind {
                CfpEventKind::Migrate => None,
                CfpEventKind::Form => Some(true),
                CfpEventKind::Dissolve => Some(false),
            };
            let line = Line { t: e.time, kind: e.kind, i: e.i, j: e.j, add, focus: e.focus };
            serde_json::to_writer(&mut w, &line).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Runs one CFP trajectory from an empty graph with random foci.
pub fn cfp_simulate(config: &CfpConfig) -> Result<CfpTrajectory> {
    let m = config.params.check(config.n, config.directed)?;
    if !(config.t_max.is_finite() && config.t_max > 0.0) {
        return Err(Error::CfpParams("t_max must be finite and positive".into()));
    }
    if !(config.burn_in >= 0.0 && config.burn_in < config.t_max) {
        return Err(Error::CfpParams("burn_in must lie in [0, t_max)".into()));
    }
    let mut rng = rng_from_seed(config.seed);
    let mut state = CfpState::random(config.n, config.directed, m, &mut rng)?;
    let dyads = state.graph.dyad_count() as f64;
    let window = config.t_max - config.burn_in;
    let nb = config.batches.max(1);
    let width = window / nb as f64;
    let mut batch_edges = vec![0.0; nb];
    let mut edges_time = 0.0;
    let mut mutual_time = 0.0;
    let mut focus_time = vec![vec![0.0; m]; config.n];
    let mut occupancy = (config.track_states && state.code().is_some()).then(BTreeMap::new);
    let mut covered = 0.0;

    let overlap = |t0: f64, t1: f64| (t1.min(config.t_max) - t0.max(config.burn_in)).max(0.0);
    let mut arrived = vec![0.0; config.n];
    let mut located = state.foci.clone();
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut n_events = 0u64;
    let mut n_effective = 0u64;
    let mut stop = StopReason::TimeLimit;
    loop {
        if n_events >= config.max_events {
            stop = StopReason::EventCap;
            break;
        }
        let e = state.graph.edge_count() as f64;
        let mu = state.mutuals as f64;
        let code = occupancy.as_ref().and_then(|_| state.code());
        let (dt, mut event) = cfp_step(&mut state, &config.params, &mut rng)?;
        let t1 = (t + dt).min(config.t_max);
        let a = t.max(config.burn_in);
        if t1 > a {
            let span = t1 - a;
            edges_time += e * span;
            mutual_time += mu * span;
            covered += span;
            if let (Some(occ), Some(code)) = (occupancy.as_mut(), code) {
                *occ.entry(code).or_insert(0.0) += span;
            }
            let first = (((a - config.burn_in) / width) as usize).min(nb - 1);
            let last = (((t1 - config.burn_in) / width) as usize).min(nb - 1);
            for k in first..=last {
                let lo = config.burn_in + k as f64 * width;
                let part = t1.min(lo + width) - a.max(lo);
                if part > 0.0 {
                    batch_edges[k] += e * part;
                }
            }
        }
        if t + dt > config.t_max {
            t = config.t_max;
            break;
        }
        t += dt;
        n_events += 1;
        if event.effective {
            n_effective += 1;
            if event.kind == CfpEventKind::Migrate {
                let v = event.i;
                focus_time[v][located[v]] += overlap(arrived[v], t);
                arrived[v] = t;
                located[v] = event.focus.expect("migration carries a focus");
            }
            if config.record_events {
                event.time = t;
                events.push(event);
            }
        }
    }
    for v in 0..config.n {
        focus_time[v][located[v]] += overlap(arrived[v], t);
    }
    let mean_edges = edges_time / covered;
    let edge_probability = mean_edges / dyads;
    let batches = if stop == StopReason::TimeLimit {
        batch_edges.iter().map(|e| e / width / dyads).collect()
    } else {
        Vec::new()
    };
    let per_vertex = if config.directed { 1.0 } else { 2.0 };
    Ok(CfpTrajectory {
        n: config.n,
        directed: config.directed,
        focus_count: m,
        events,
        n_events,
        n_effective,
        sim_time: t,
        stop,
        edge_probability,
        edge_probability_batches: batches,
        mean_degree: per_vertex * mean_edges / config.n as f64,
        mean_edges,
        mean_mutuals: mutual_time / covered,
        focus_occupancy: focus_time
            .into_iter()
            .map(|row| row.into_iter().map(|x| x / covered).collect())
            .collect(),
        state_occupancy: occupancy.map(|o| o.into_iter().map(|(k, v)| (k, v / covered)).collect()),
    })
}

/// Replicates with derived seeds, in replicate order.
pub fn cfp_ensemble(config: &CfpConfig, replicates: usize) -> Result<Vec<CfpTrajectory>> {
    if replicates == 0 {
        return Err(Error::CfpParams("replicates must be at least 1".into()));
    }
    (0..replicates as u64)
        .into_par_iter()
        .map(|k| {
            let mut c = config.clone();
            c.seed = replicate_seed(config.seed, k);
            cfp_simulate(&c)
        })
        .collect()
}

/// Generator of the joint graph and focus chain, indexed as
/// [`CfpState::code`].
pub fn cfp_rate_matrix(params: &CfpParams, n: usize, directed: bool) -> Result<RateMatrix> {
    let m = params.check(n, directed)?;
    let empty = Graph::empty(n, directed)?;
    let dyads = empty.dyad_count();
    let focus_states = (m as u128).pow(n as u32);
    let bits = dyads as u32 + (128 - focus_states.leading_zeros());
    if dyads > MAX_ENUMERATED_DYADS || bits > MAX_ENUMERATED_DYADS as u32 + 1 {
        return Err(Error::EnumerationCap { dyads: bits as usize, cap: MAX_ENUMERATED_DYADS });
    }
    let graphs = 1usize << dyads;
    let size = graphs * focus_states as usize;
    let mut transitions = Vec::new();
    for s in 0..size {
        let g = Graph::from_code(n, directed, (s % graphs) as u64)?;
        let mut rest = s / graphs;
        let mut foci = vec![0; n];
        for f in foci.iter_mut() {
            *f = rest % m;
            rest /= m;
        }
        let mut weight = 1usize;
        for v in 0..n {
            for f in 0..m {
                if f != foci[v] {
                    let target = s + f * weight * graphs - foci[v] * weight * graphs;
                    transitions.push((s, target, params.r_m / m as f64));
                }
            }
            weight *= m;
        }
        for d in 0..dyads {
            let t = g.toggle_at(d);
            let target = s ^ (1 << d);
            if g.has_dyad(d) {
                transitions.push((s, target, params.r_d));
            } else {
                let mut r = 0.0;
                if foci[t.i] == foci[t.j] {
                    r += params.r_f;
                }
                if params.reciprocity && g.has_edge(t.j, t.i) {
                    r += params.r_f;
                }
                if r > 0.0 {
                    transitions.push((s, target, r));
                }
            }
        }
    }
    RateMatrix::from_transitions(size, transitions)
}

/// Stationary distribution of the joint chain.
pub fn cfp_stationary(params: &CfpParams, n: usize, directed: bool) -> Result<Vec<f64>> {
    solve_stationary(&cfp_rate_matrix(params, n, directed)?)
}

/// Fast-mixing reciprocity predictions from the single-dyad chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocityPrediction {
    pub edge_probability: f64,
    pub given_reverse_present: f64,
    pub given_reverse_absent: f64,
    /// Log odds ratio of an arc given its reverse; grows like `ln M`.
    pub mutual_log_odds: f64,
}

pub fn fast_mixing_reciprocity(params: &CfpParams, m: usize) -> ReciprocityPrediction {
    let mf = m as f64;
    let null = 1.0;
    let asym = null * 2.0 * params.r_f / (mf * params.r_d);
    let mutual = asym * params.r_f * (1.0 + 1.0 / mf) / (2.0 * params.r_d);
    let z = null + asym + mutual;
    let single = asym / 2.0;
    let present = mutual / (single + mutual);
    let absent = single / (null + single);
    ReciprocityPrediction {
        edge_probability: (single + mutual) / z,
        given_reverse_present: present,
        given_reverse_absent: absent,
        mutual_log_odds: (present / (1.0 - present) / (absent / (1.0 - absent))).ln(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FastMixingReport {
    pub n: usize,
    pub focus_count: usize,
    pub mixing_ratio: f64,
    pub predicted_edge_probability: f64,
    pub observed_edge_probability: f64,
    pub std_error: f64,
    pub z: f64,
    /// Edge coefficient of the equivalent edges-only model once the
    /// `N^(-edges)` reference is factored out.
    pub implied_edge_theta: f64,
    pub reciprocity: Option<ReciprocityCheck>,
    /// Whether every comparison lies within 3 standard errors.
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReciprocityCheck {
    pub predicted: ReciprocityPrediction,
    pub observed_given_present: f64,
    pub observed_given_absent: f64,
    pub se_given_present: f64,
    pub se_given_absent: f64,
}

/// Simulates `replicates` runs to `horizon` and compares the time-averaged
/// edge probability (and, with reciprocity, the conditional arc
/// probabilities) with the fast-mixing limit. Fails when
/// `r_m / max(r_f, r_d) < min_ratio`.
pub fn cfp_fast_mixing_check(
    params: &CfpParams,
    n: usize,
    directed: bool,
    horizon: f64,
    replicates: usize,
    seed: u64,
    min_ratio: f64,
) -> Result<FastMixingReport> {
    let m = params.check(n, directed)?;
    let ratio = params.r_m / params.r_f.max(params.r_d);
    if ratio < min_ratio {
        return Err(Error::CfpParams(format!(
            "mixing ratio {ratio} is below the fast-mixing threshold {min_ratio}"
        )));
    }
    let mut config = CfpConfig::new(*params, n, directed);
    config.t_max = horizon;
    config.burn_in = horizon * 0.1;
    config.seed = seed;
    let runs = cfp_ensemble(&config, replicates.max(2))?;
    let p: Vec<f64> = runs.iter().map(|r| r.edge_probability).collect();
    let (observed, se) = mean_and_se(&p);
    let reciprocity = params.reciprocity.then(|| {
        let predicted = fast_mixing_reciprocity(params, m);
        let (pres, abs): (Vec<f64>, Vec<f64>) =
            runs.iter().map(|r| r.reciprocity_conditionals().unwrap()).unzip();
        let (op, sp) = mean_and_se(&pres);
        let (oa, sa) = mean_and_se(&abs);
        ReciprocityCheck {
            predicted,
            observed_given_present: op,
            observed_given_absent: oa,
            se_given_present: sp,
            se_given_absent: sa,
        }
    });
    let predicted = match &reciprocity {
        Some(r) => r.predicted.edge_probability,
        None => params.fast_mixing_edge_probability(m),
    };
    let z = (observed - predicted) / se;
    let consistent = z.abs() <= 3.0
        && reciprocity.as_ref().is_none_or(|r| {
            (r.observed_given_present - r.predicted.given_reverse_present).abs() <= 3.0 * r.se_given_present
                && (r.observed_given_absent - r.predicted.given_reverse_absent).abs() <= 3.0 * r.se_given_absent
        });
    Ok(FastMixingReport {
        n,
        focus_count: m,
        mixing_ratio: ratio,
        predicted_edge_probability: predicted,
        observed_edge_probability: observed,
        std_error: se,
        z,
        implied_edge_theta: (observed / (1.0 - observed)).ln() + (n as f64).ln(),
        reciprocity,
        consistent,
    })
}
