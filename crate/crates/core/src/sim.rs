// SPDX-License-Identifier: Apache-2.0
//! Event-driven simulation of toggle processes.
//!
//! Each event draws an exponential holding time with rate equal to the
//! current exit rate, then a toggle with probability proportional to its
//! rate; the two draws are independent. Change scores are cached per dyad
//! and only the ones a toggle can affect are recomputed; every
//! `audit_interval` events the cache is checked against a from-scratch
//! evaluation.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NeighborClass, Toggle};
use crate::potential::{DirtyScope, StatisticTerm};
use crate::process::{ProcessSpec, RateInputs};

/// The portable, seedable stream behind every simulation.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `k` in an ensemble with base seed `base`.
pub fn replicate_seed(base: u64, k: u64) -> u64 {
    mix64(base.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordMode {
    /// Every event with its toggle and a statistics snapshot.
    FullEvents,
    /// Statistics snapshots after each event, without toggles.
    StatisticsOnly,
    /// Only time averages and diagnostics.
    TimeAverages,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub process: ProcessSpec,
    pub initial: Graph,
    /// Simulated time horizon; may be infinite when `max_events` bounds the
    /// run.
    pub t_max: f64,
    pub max_events: u64,
    pub seed: u64,
    pub record: RecordMode,
    /// Time excluded from averages.
    pub burn_in: f64,
    pub observables: Vec<StatisticTerm>,
    /// Record per-state occupancy (graphs with at most 64 dyads).
    pub track_states: bool,
    /// Events between cache audits; 0 disables auditing.
    pub audit_interval: u64,
    /// Number of equal-width time batches for batch-means errors; needs a
    /// finite horizon.
    pub batches: usize,
}

impl SimConfig {
    pub fn new(process: ProcessSpec, initial: Graph) -> Self {
        let observables = default_observables(&process);
        SimConfig {
            process,
            initial,
            t_max: f64::INFINITY,
            max_events: 1_000_000,
            seed: 0,
            record: RecordMode::TimeAverages,
            burn_in: 0.0,
            observables,
            track_states: false,
            audit_interval: 1000,
            batches: 20,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::SimConfig(m.to_string()));
        self.process.check_graph(&self.initial)?;
        for term in &self.observables {
            term.check(self.initial.order(), self.initial.is_directed())?;
        }
        if self.t_max.is_nan() || self.t_max < 0.0 {
            return bad("t_max must be non-negative");
        }
        if self.t_max == 0.0 && self.max_events == 0 {
            return bad("one of t_max or max_events must be positive");
        }
        if !(self.burn_in.is_finite() && self.burn_in >= 0.0) {
            return bad("burn_in must be finite and non-negative");
        }
        if self.burn_in >= self.t_max && self.t_max > 0.0 {
            return bad("burn_in must be shorter than t_max");
        }
        Ok(())
    }
}

/// Edges plus every distinct term of the process potentials.
pub fn default_observables(process: &ProcessSpec) -> Vec<StatisticTerm> {
    let mut out = vec![StatisticTerm::Edges];
    for p in process.potentials() {
        for term in p.terms() {
            if !out.contains(term) {
                out.push(term.clone());
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub time: f64,
    pub toggle: Toggle,
    pub added: bool,
    pub stats: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    TimeLimit,
    EventCap,
    Absorbing,
}

/// Time spent in one state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DwellStats {
    /// Post-burn-in occupancy time.
    pub occupancy: f64,
    /// Total length of completed holding periods.
    pub holding_time: f64,
    pub holdings: u64,
}

impl DwellStats {
    pub fn mean_dwell(&self) -> f64 {
        self.holding_time / self.holdings as f64
    }
}

/// Holding-time diagnostics over completed holdings: observed versus the
/// `1/u` implied by the rates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DwellDiagnostics {
    pub holdings: u64,
    pub observed_mean: f64,
    pub predicted_mean: f64,
    /// Mean of `u·dt`, which is Exp(1) distributed when the rates are
    /// honored.
    pub scaled_mean: f64,
    pub scaled_std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    #[serde(skip)]
    pub initial: Graph,
    #[serde(skip)]
    pub final_state: Graph,
    pub events: Vec<Event>,
    pub snapshots: Vec<(f64, Vec<f64>)>,
    pub observable_names: Vec<String>,
    pub time_averaged_stats: Vec<f64>,
    /// Per-batch time averages when the horizon is finite.
    pub batch_means: Vec<Vec<f64>>,
    pub state_occupancy: Option<BTreeMap<u64, DwellStats>>,
    pub n_events: u64,
    pub sim_time: f64,
    pub stop: StopReason,
    /// Time-averaged exit rate over the averaging window.
    pub mean_exit_rate: f64,
    pub dwell: DwellDiagnostics,
}

impl Trajectory {
    pub fn events_per_time(&self) -> f64 {
        self.n_events as f64 / self.sim_time
    }

    /// Dwell-weighted occupancy per state code, normalized over the
    /// averaging window.
    pub fn occupancy_distribution(&self, states: usize) -> Option<Vec<f64>> {
        let occ = self.state_occupancy.as_ref()?;
        let mut p = vec![0.0; states];
        for (&code, d) in occ {
            p[code as usize] += d.occupancy;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        Some(p)
    }

    /// Durations of edges that formed and then dissolved during the run.
    /// Needs toggles in the event log.
    pub fn edge_lifetimes(&self) -> Vec<f64> {
        let mut born: Vec<Option<f64>> = vec![None; self.initial.dyad_count()];
        let mut out = Vec::new();
        for e in &self.events {
            let d = self.initial.dyad_index_unchecked(e.toggle.i, e.toggle.j);
            if e.added {
                born[d] = Some(e.time);
            } else if let Some(t0) = born[d].take() {
                out.push(e.time - t0);
            }
        }
        out
    }

    /// Replays the logged toggles from the initial graph.
    pub fn replay(&self) -> Result<Graph> {
        let mut g = self.initial.clone();
        for e in &self.events {
            g.toggle(e.toggle)?;
        }
        Ok(g)
    }

    /// One `{"t", "i", "j", "add"}` JSON object per line.
    pub fn write_event_log<W: Write>(&self, mut w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Line {
            t: f64,
            i: usize,
            j: usize,
            add: bool,
        }
        for e in &self.events {
            let line = Line { t: e.time, i: e.toggle.i, j: e.toggle.j, add: e.added };
            serde_json::to_writer(&mut w, &line).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// `time_avg_<stat>` columns plus run totals.
    pub fn summary_header(&self) -> String {
        let mut cols: Vec<String> = self.observable_names.iter().map(|n| format!("time_avg_{n}")).collect();
        cols.extend(["events", "sim_time", "mean_exit_rate"].map(String::from));
        cols.join(",")
    }

    pub fn summary_row(&self) -> String {
        let mut row: Vec<String> = self.time_averaged_stats.iter().map(|v| v.to_string()).collect();
        row.push(self.n_events.to_string());
        row.push(self.sim_time.to_string());
        row.push(self.mean_exit_rate.to_string());
        row.join(",")
    }

    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.summary_header())?;
        writeln!(w, "{}", self.summary_row())?;
        Ok(())
    }
}

/// Rate bookkeeping for one running state.
pub(crate) struct RateCache<'a> {
    spec: &'a ProcessSpec,
    scope: DirtyScope,
    level: f64,
    deltas: Vec<[f64; 2]>,
    rates: Vec<f64>,
}

impl<'a> RateCache<'a> {
    pub(crate) fn new(spec: &'a ProcessSpec, g: &Graph) -> Result<Self> {
        let mut cache = RateCache {
            spec,
            scope: spec.dirty_scope(),
            level: 0.0,
            deltas: Vec::new(),
            rates: Vec::new(),
        };
        cache.rebuild(g)?;
        Ok(cache)
    }

    fn rebuild(&mut self, g: &Graph) -> Result<()> {
        self.level = self.spec.level(g);
        let m = g.dyad_count();
        self.deltas.clear();
        self.rates.clear();
        for d in 0..m {
            let t = g.toggle_at(d);
            let x = self.spec.inputs(g, t, self.level);
            self.deltas.push(x.delta);
            self.rates.push(self.spec.checked_rate(x, t)?);
        }
        Ok(())
    }

    pub(crate) fn total(&self) -> f64 {
        self.rates.iter().sum()
    }

    fn rate_at(&self, g: &Graph, d: usize) -> Result<f64> {
        let t = g.toggle_at(d);
        let class = if g.has_dyad(d) { NeighborClass::HMinus } else { NeighborClass::HPlus };
        let x = RateInputs { class, delta: self.deltas[d], level: self.level, neighbors: self.rates.len() };
        self.spec.checked_rate(x, t)
    }

    /// Applies the toggle at dyad `d` to `g` and updates affected rates.
    pub(crate) fn apply(&mut self, g: &mut Graph, d: usize) -> Result<()> {
        let t = g.toggle_at(d);
        if self.spec.level_driven() {
            self.level += self.deltas[d][0];
        }
        g.flip_dyad(d);
        for slot in self.deltas[d].iter_mut() {
            *slot = -*slot;
        }
        let mut dirty = vec![d];
        match self.scope {
            DirtyScope::None => {}
            DirtyScope::Reciprocal => {
                if g.is_directed() {
                    dirty.push(g.dyad_index_unchecked(t.j, t.i));
                }
            }
            DirtyScope::Incident => {
                for &v in &[t.i, t.j] {
                    for w in (0..g.order()).filter(|&w| w != v) {
                        dirty.push(g.dyad_index_unchecked(v, w));
                        if g.is_directed() {
                            dirty.push(g.dyad_index_unchecked(w, v));
                        }
                    }
                }
                dirty.sort_unstable();
                dirty.dedup();
            }
            DirtyScope::All => dirty = (0..self.rates.len()).collect(),
        }
        for &e in &dirty {
            if e != d {
                let te = g.toggle_at(e);
                for (slot, p) in self.spec.potentials().into_iter().enumerate() {
                    self.deltas[e][slot] = p.change_unchecked(g, te);
                }
            }
        }
        if self.spec.level_driven() {
            for e in 0..self.rates.len() {
                self.rates[e] = self.rate_at(g, e)?;
            }
        } else {
            for &e in &dirty {
                self.rates[e] = self.rate_at(g, e)?;
            }
        }
        Ok(())
    }

    /// Recomputes everything from `g` and reports the worst relative rate
    /// deviation of the cache.
    pub(crate) fn audit(&mut self, g: &Graph) -> Result<f64> {
        let cached = std::mem::take(&mut self.rates);
        self.rebuild(g)?;
        Ok(cached
            .iter()
            .zip(&self.rates)
            .map(|(c, f)| (c - f).abs() / f.abs().max(1.0))
            .fold(0.0, f64::max))
    }

    /// Categorical draw over dyads with probability `rate / total`.
    pub(crate) fn choose<R: Rng>(&self, total: f64, rng: &mut R) -> usize {
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (d, r) in self.rates.iter().enumerate() {
            if *r > 0.0 {
                acc += r;
                last_positive = d;
                if acc > target {
                    return d;
                }
            }
        }
        last_positive
    }
}

/// One event from `g`: holding time and toggle.
pub fn step<R: Rng>(process: &ProcessSpec, g: &Graph, rng: &mut R) -> Result<(f64, Toggle)> {
    let cache = RateCache::new(process, g)?;
    let total = cache.total();
    if total <= 0.0 {
        return Err(Error::Absorbing);
    }
    let dt = rng.sample::<f64, _>(Exp1) / total;
    let d = cache.choose(total, rng);
    Ok((dt, g.toggle_at(d)))
}

/// Dwell-weighted accumulation of observables over a window, split into
/// batches when the window is bounded.
struct Averager {
    start: f64,
    end: f64,
    batch_width: f64,
    total: Vec<f64>,
    batches: Vec<Vec<f64>>,
    exit_rate_time: f64,
    covered: f64,
}

impl Averager {
    fn new(start: f64, end: f64, batches: usize, dims: usize) -> Self {
        let bounded = end.is_finite() && batches > 0 && end > start;
        let nb = if bounded { batches } else { 0 };
        Averager {
            start,
            end,
            batch_width: if bounded { (end - start) / batches as f64 } else { 0.0 },
            total: vec![0.0; dims],
            batches: vec![vec![0.0; dims]; nb],
            exit_rate_time: 0.0,
            covered: 0.0,
        }
    }

    /// Returns the post-burn-in overlap of `[t0, t1)`.
    fn add(&mut self, t0: f64, t1: f64, stats: &[f64], exit_rate: f64) -> f64 {
        let a = t0.max(self.start);
        let b = t1.min(self.end);
        if b <= a {
            return 0.0;
        }
        let span = b - a;
        for (acc, s) in self.total.iter_mut().zip(stats) {
            *acc += s * span;
        }
        self.exit_rate_time += exit_rate * span;
        self.covered += span;
        if !self.batches.is_empty() {
            let nb = self.batches.len();
            let first = (((a - self.start) / self.batch_width) as usize).min(nb - 1);
            let last = (((b - self.start) / self.batch_width) as usize).min(nb - 1);
            for k in first..=last {
                let lo = self.start + k as f64 * self.batch_width;
                let hi = if k + 1 == nb { self.end } else { lo + self.batch_width };
                let part = b.min(hi) - a.max(lo);
                if part > 0.0 {
                    for (acc, s) in self.batches[k].iter_mut().zip(stats) {
                        *acc += s * part;
                    }
                }
            }
        }
        span
    }

    fn finish(self, fallback: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>, f64) {
        if self.covered <= 0.0 {
            return (fallback.to_vec(), Vec::new(), f64::NAN);
        }
        let means = self.total.iter().map(|s| s / self.covered).collect();
        let batches = if self.covered + 1e-9 * self.end.abs() >= self.end - self.start {
            let w = self.batch_width;
            self.batches
                .into_iter()
                .map(|b| b.into_iter().map(|s| s / w).collect())
                .collect()
        } else {
            Vec::new()
        };
        (means, batches, self.exit_rate_time / self.covered)
    }
}

/// Runs one trajectory.
pub fn simulate(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let spec = &config.process;
    let mut rng = rng_from_seed(config.seed);
    let mut g = config.initial.clone();
    let mut cache = RateCache::new(spec, &g)?;
    let mut stats: Vec<f64> = config.observables.iter().map(|t| t.value(&g)).collect();
    let mut avg = Averager::new(config.burn_in, config.t_max, config.batches, stats.len());
    let mut occupancy: Option<BTreeMap<u64, DwellStats>> =
        (config.track_states && g.code().is_some()).then(BTreeMap::new);

    let mut events = Vec::new();
    let mut snapshots = Vec::new();
    let mut t = 0.0;
    let mut n_events = 0u64;
    let mut dwell = (0u64, 0.0, 0.0, 0.0, 0.0);
    let stop;
    loop {
        if n_events >= config.max_events {
            stop = StopReason::EventCap;
            break;
        }
        let total = cache.total();
        if total <= 0.0 {
            if config.t_max.is_finite() {
                let span = avg.add(t, config.t_max, &stats, 0.0);
                if let Some(occ) = occupancy.as_mut() {
                    occ.entry(g.code().unwrap()).or_default().occupancy += span;
                }
                t = config.t_max;
            }
            stop = StopReason::Absorbing;
            break;
        }
        let dt = rng.sample::<f64, _>(Exp1) / total;
        if t + dt > config.t_max {
            let span = avg.add(t, config.t_max, &stats, total);
            if let Some(occ) = occupancy.as_mut() {
                occ.entry(g.code().unwrap()).or_default().occupancy += span;
            }
            t = config.t_max;
            stop = StopReason::TimeLimit;
            break;
        }
        let d = cache.choose(total, &mut rng);
        let span = avg.add(t, t + dt, &stats, total);
        if let Some(occ) = occupancy.as_mut() {
            let entry = occ.entry(g.code().unwrap()).or_default();
            entry.occupancy += span;
            entry.holding_time += dt;
            entry.holdings += 1;
        }
        let scaled = dt * total;
        dwell.0 += 1;
        dwell.1 += dt;
        dwell.2 += 1.0 / total;
        dwell.3 += scaled;
        dwell.4 += scaled * scaled;

        let toggle = g.toggle_at(d);
        let added = !g.has_dyad(d);
        for (s, term) in stats.iter_mut().zip(&config.observables) {
            *s += term.change(&g, toggle);
        }
        cache.apply(&mut g, d)?;
        t += dt;
        n_events += 1;
        match config.record {
            RecordMode::FullEvents => events.push(Event { time: t, toggle, added, stats: Some(stats.clone()) }),
            RecordMode::StatisticsOnly => snapshots.push((t, stats.clone())),
            RecordMode::TimeAverages => {}
        }
        if config.audit_interval > 0 && n_events.is_multiple_of(config.audit_interval) {
            let deviation = cache.audit(&g)?;
            if deviation > 1e-9 {
                return Err(Error::CacheIncoherent { event: n_events, deviation });
            }
        }
    }

    let (time_averaged_stats, batch_means, mean_exit_rate) = avg.finish(&stats);
    let k = dwell.0 as f64;
    let diagnostics = if dwell.0 > 0 {
        let mean = dwell.3 / k;
        let var = (dwell.4 / k - mean * mean).max(0.0);
        DwellDiagnostics {
            holdings: dwell.0,
            observed_mean: dwell.1 / k,
            predicted_mean: dwell.2 / k,
            scaled_mean: mean,
            scaled_std_error: (var / k).sqrt(),
        }
    } else {
        DwellDiagnostics::default()
    };
    Ok(Trajectory {
        initial: config.initial.clone(),
        final_state: g,
        events,
        snapshots,
        observable_names: config.observables.iter().map(StatisticTerm::name).collect(),
        time_averaged_stats,
        batch_means,
        state_occupancy: occupancy,
        n_events,
        sim_time: t,
        stop,
        mean_exit_rate,
        dwell: diagnostics,
    })
}

/// Independent replicates with seeds derived from `config.seed`; output
/// order is replicate order regardless of scheduling.
pub fn ensemble(config: &SimConfig, replicates: usize) -> Result<Vec<Trajectory>> {
    if replicates == 0 {
        return Err(Error::SimConfig("replicates must be at least 1".into()));
    }
    config.validate()?;
    (0..replicates as u64)
        .into_par_iter()
        .map(|k| {
            let mut c = config.clone();
            c.seed = replicate_seed(config.seed, k);
            simulate(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{PotentialSpec, ReferenceMeasure};

    fn lergm_et() -> ProcessSpec {
        ProcessSpec::Lergm {
            rate_constant: 1.0,
            potential: PotentialSpec::new(
                vec![StatisticTerm::Edges, StatisticTerm::Triangles],
                vec![-0.5, 0.3],
                ReferenceMeasure::Counting,
            )
            .unwrap(),
        }
    }

    #[test]
    fn zero_events_leaves_graph_untouched() {
        let g = Graph::from_edges(4, false, &[(0, 1)]).unwrap();
        let mut c = SimConfig::new(lergm_et(), g.clone());
        c.max_events = 0;
        c.t_max = 10.0;
        let traj = simulate(&c).unwrap();
        assert_eq!(traj.n_events, 0);
        assert!(traj.events.is_empty());
        assert_eq!(traj.final_state, g);
        assert_eq!(traj.stop, StopReason::EventCap);
    }

    #[test]
    fn replay_reproduces_final_state() {
        let mut c = SimConfig::new(lergm_et(), Graph::empty(6, false).unwrap());
        c.t_max = 50.0;
        c.record = RecordMode::FullEvents;
        c.audit_interval = 7;
        let traj = simulate(&c).unwrap();
        assert_eq!(traj.stop, StopReason::TimeLimit);
        assert!(traj.n_events > 100);
        assert_eq!(traj.replay().unwrap(), traj.final_state);
        assert!(traj.events.windows(2).all(|w| w[0].time < w[1].time));
        let last = traj.events.last().unwrap().stats.clone().unwrap();
        let direct: Vec<f64> = c.observables.iter().map(|t| t.value(&traj.final_state)).collect();
        assert_eq!(last, direct);
    }

    #[test]
    fn same_seed_same_run() {
        let mut c = SimConfig::new(lergm_et(), Graph::empty(5, false).unwrap());
        c.max_events = 500;
        c.record = RecordMode::FullEvents;
        let a = simulate(&c).unwrap();
        let b = simulate(&c).unwrap();
        assert_eq!(a.events, b.events);
        let mut r1 = rng_from_seed(3);
        let mut r2 = rng_from_seed(3);
        let g = Graph::empty(5, false).unwrap();
        for _ in 0..20 {
            assert_eq!(step(&c.process, &g, &mut r1).unwrap(), step(&c.process, &g, &mut r2).unwrap());
        }
    }

    #[test]
    fn config_validation() {
        let mut c = SimConfig::new(lergm_et(), Graph::empty(4, false).unwrap());
        c.t_max = 5.0;
        c.burn_in = 6.0;
        assert!(matches!(simulate(&c), Err(Error::SimConfig(_))));
        c.burn_in = 0.0;
        c.initial = Graph::empty(4, true).unwrap();
        c.observables = vec![StatisticTerm::Edges];
        assert!(simulate(&c).is_ok());
        let saom = ProcessSpec::CompetingRateSaom { potential: PotentialSpec::zero() };
        let c = SimConfig::new(saom, Graph::empty(3, false).unwrap());
        assert!(matches!(simulate(&c), Err(Error::RequiresDirected(_))));
        assert!(ensemble(&SimConfig::new(lergm_et(), Graph::empty(3, false).unwrap()), 0).is_err());
    }

    #[test]
    fn absorbing_state_stops_run() {
        // θ far below the exp underflow threshold makes every rate zero
        let spec = ProcessSpec::Ctergm { potential: PotentialSpec::edges(-800.0) };
        let mut c = SimConfig::new(spec.clone(), Graph::empty(3, false).unwrap());
        c.t_max = 10.0;
        let traj = simulate(&c).unwrap();
        assert_eq!(traj.stop, StopReason::Absorbing);
        assert_eq!(traj.n_events, 0);
        let mut rng = rng_from_seed(0);
        assert!(matches!(step(&spec, &c.initial, &mut rng), Err(Error::Absorbing)));
    }

    #[test]
    fn incremental_cache_matches_rebuild_for_every_family() {
        let q = PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Mutuals, StatisticTerm::Triangles, StatisticTerm::TwoStars],
            vec![-0.4, 0.8, 0.2, -0.1],
            ReferenceMeasure::PowerLaw { gamma: 0.5 },
        )
        .unwrap();
        let qd = PotentialSpec::new(vec![StatisticTerm::Edges, StatisticTerm::Mutuals], vec![0.3, 0.5], ReferenceMeasure::Counting).unwrap();
        let specs = vec![
            ProcessSpec::CompetingRateSaom { potential: q.clone() },
            ProcessSpec::Lergm { rate_constant: 1.0, potential: q.clone() },
            ProcessSpec::ChangeInhibition { rate_constant: 2.0, potential: q.clone() },
            ProcessSpec::DifferentialStability { rate_constant: 0.5, potential: q.clone() },
            ProcessSpec::ConstDissCstergm { formation: q.clone(), theta_d: 0.2 },
            ProcessSpec::ConstFormCstergm { dissolution: q.clone(), theta_f: -0.3 },
            ProcessSpec::GeneralCstergm { formation: q.clone(), dissolution: qd },
            ProcessSpec::Ctergm { potential: q },
        ];
        for spec in specs {
            let mut c = SimConfig::new(spec, Graph::empty(5, true).unwrap());
            c.max_events = 3000;
            c.audit_interval = 1;
            simulate(&c).unwrap();
        }
    }

    #[test]
    fn ensemble_replicates_are_reproducible() {
        let mut c = SimConfig::new(lergm_et(), Graph::empty(4, false).unwrap());
        c.t_max = 20.0;
        c.record = RecordMode::FullEvents;
        c.seed = 99;
        let a = ensemble(&c, 3).unwrap();
        let b = ensemble(&c, 3).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.events, y.events);
        }
        let mut lone = c.clone();
        lone.seed = replicate_seed(99, 2);
        assert_eq!(simulate(&lone).unwrap().events, a[2].events);
        assert_ne!(a[0].events, a[1].events);
    }

    #[test]
    fn summary_and_event_log_formats() {
        let mut c = SimConfig::new(lergm_et(), Graph::empty(3, false).unwrap());
        c.max_events = 2;
        c.record = RecordMode::FullEvents;
        let traj = simulate(&c).unwrap();
        let mut log = Vec::new();
        traj.write_event_log(&mut log).unwrap();
        let text = String::from_utf8(log).unwrap();
        assert_eq!(text.lines().count(), 2);
        let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, vec!["add", "i", "j", "t"]);
        let mut csv = Vec::new();
        traj.write_summary_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("time_avg_edges,time_avg_triangles,events,sim_time,mean_exit_rate\n"));
    }
}
