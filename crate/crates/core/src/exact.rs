// SPDX-License-Identifier: Apache-2.0
//! Exact small-order verification.
//!
//! Enumerates every graph of a given order, assembles the generator `R`
//! of a rate family over that state space, and solves `πᵀR = 0` directly.
//! The solved distribution is then compared with the family's analytic
//! equilibrium. Transient probabilities come from uniformization.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{dyad_count, Graph};
use crate::process::{EquilibriumForm, ProcessSpec};

/// Hard cap on enumerated edge variables (2^20 states).
pub const MAX_ENUMERATED_DYADS: usize = 20;
/// Largest chain solved by dense LU; bigger chains use Gauss–Seidel.
pub const DENSE_SOLVE_LIMIT: usize = 4096;
/// Uniformization rate as a multiple of the largest exit rate.
pub const UNIFORMIZATION_FACTOR: f64 = 1.05;
/// Poisson tail mass dropped by the uniformization series.
pub const POISSON_TAIL: f64 = 1e-12;

/// All graphs of order `n`, indexed by their dyad bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSpace {
    n: usize,
    directed: bool,
    dyads: usize,
}

impl StateSpace {
    pub fn new(n: usize, directed: bool) -> Result<Self> {
        Self::with_cap(n, directed, MAX_ENUMERATED_DYADS)
    }

    /// Like [`StateSpace::new`] with a tighter cap, never above the hard
    /// one.
    pub fn with_cap(n: usize, directed: bool, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(n));
        }
        let cap = cap.min(MAX_ENUMERATED_DYADS);
        let dyads = dyad_count(n, directed);
        if dyads > cap {
            return Err(Error::EnumerationCap { dyads, cap });
        }
        Ok(StateSpace { n, directed, dyads })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn dyads(&self) -> usize {
        self.dyads
    }

    pub fn len(&self) -> usize {
        1 << self.dyads
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn graph(&self, index: usize) -> Graph {
        Graph::from_code(self.n, self.directed, index as u64).expect("index within state space")
    }

    pub fn index(&self, g: &Graph) -> Result<usize> {
        g.check_compatible(self.n, self.directed)?;
        Ok(g.code().expect("enumerable graphs fit in 64 bits") as usize)
    }

    pub fn graphs(&self) -> impl Iterator<Item = Graph> + '_ {
        (0..self.len()).map(|s| self.graph(s))
    }
}

/// Sparse CTMC generator: off-diagonal rates by row plus the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    size: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl RateMatrix {
    /// Builds from `(from, to, rate)` triples. Duplicates accumulate;
    /// self-transitions and zero rates are dropped. The diagonal is set so
    /// rows sum to zero.
    pub fn from_transitions<I>(size: usize, transitions: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); size];
        for (a, b, r) in transitions {
            if a >= size || b >= size {
                return Err(Error::Dimension(format!("transition ({a}, {b}) outside {size} states")));
            }
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::Dimension(format!("invalid rate {r} for ({a}, {b})")));
            }
            if a != b && r > 0.0 {
                rows[a].push((b, r));
            }
        }
        Ok(Self::from_rows(rows))
    }

    fn from_rows(mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let size = rows.len();
        let mut row_ptr = Vec::with_capacity(size + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut diag = Vec::with_capacity(size);
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
            let mut exit = 0.0;
            let mut k = 0;
            while k < row.len() {
                let (b, mut r) = row[k];
                k += 1;
                while k < row.len() && row[k].0 == b {
                    r += row[k].1;
                    k += 1;
                }
                cols.push(b);
                vals.push(r);
                exit += r;
            }
            diag.push(-exit);
            row_ptr.push(cols.len());
        }
        RateMatrix { size, row_ptr, cols, vals, diag }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Off-diagonal entries of row `a`.
    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[a]..self.row_ptr[a + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return self.diag[a];
        }
        let span = self.row_ptr[a]..self.row_ptr[a + 1];
        match self.cols[span.clone()].binary_search(&b) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self, a: usize) -> f64 {
        self.diag[a]
    }

    /// `u_a = -R_aa`.
    pub fn exit_rate(&self, a: usize) -> f64 {
        -self.diag[a]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |m, d| m.max(-d))
    }

    pub fn nonzeros(&self) -> usize {
        self.cols.len()
    }

    /// Largest absolute row sum, which should be round-off only.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.size)
            .map(|a| (self.row(a).map(|(_, r)| r).sum::<f64>() + self.diag[a]).abs())
            .fold(0.0, f64::max)
    }

    /// Whether `R_ab > 0 ⇔ R_ba > 0`.
    pub fn pattern_symmetric(&self) -> bool {
        (0..self.size).all(|a| self.row(a).all(|(b, _)| self.get(b, a) > 0.0))
    }

    fn transpose_rows(&self) -> Vec<Vec<(usize, f64)>> {
        let mut incoming = vec![Vec::new(); self.size];
        for a in 0..self.size {
            for (b, r) in self.row(a) {
                incoming[b].push((a, r));
            }
        }
        incoming
    }

    /// Number of strongly connected components of the positive pattern.
    pub fn strong_components(&self) -> usize {
        // Kosaraju: finish order on R, then sweep the transpose.
        let n = self.size;
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack = vec![(root, self.row_ptr[root])];
            while let Some(&mut (v, ref mut k)) = stack.last_mut() {
                if *k < self.row_ptr[v + 1] {
                    let w = self.cols[*k];
                    *k += 1;
                    if !visited[w] {
                        visited[w] = true;
                        stack.push((w, self.row_ptr[w]));
                    }
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }
        let incoming = self.transpose_rows();
        let mut assigned = vec![false; n];
        let mut components = 0;
        for &root in order.iter().rev() {
            if assigned[root] {
                continue;
            }
            components += 1;
            assigned[root] = true;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, _) in &incoming[v] {
                    if !assigned[w] {
                        assigned[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_irreducible(&self) -> bool {
        self.strong_components() == 1
    }

    /// `πᵀR`.
    pub fn left_multiply(&self, pi: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = pi.iter().zip(&self.diag).map(|(p, d)| p * d).collect();
        for a in 0..self.size {
            let pa = pi[a];
            if pa == 0.0 {
                continue;
            }
            for (b, r) in self.row(a) {
                out[b] += pa * r;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for a in 0..self.size {
            m[(a, a)] = self.diag[a];
            for (b, r) in self.row(a) {
                m[(a, b)] = r;
            }
        }
        m
    }

    /// Generator `P̃ - I` of the embedded jump chain, `P̃_ab = R_ab / u_a`.
    pub fn embedded_generator(&self) -> Result<RateMatrix> {
        let mut rows = Vec::with_capacity(self.size);
        for a in 0..self.size {
            let u = self.exit_rate(a);
            if u <= 0.0 {
                return Err(Error::Absorbing);
            }
            rows.push(self.row(a).map(|(b, r)| (b, r / u)).collect());
        }
        Ok(Self::from_rows(rows))
    }
}

/// Generator of `spec` over every graph in `space`.
pub fn build_rate_matrix(spec: &ProcessSpec, space: &StateSpace) -> Result<RateMatrix> {
    spec.check(space.order(), space.is_directed())?;
    let rows = (0..space.len())
        .into_par_iter()
        .map(|s| {
            let g = space.graph(s);
            let rates = spec.rates(&g)?;
            Ok(rates
                .into_iter()
                .enumerate()
                .filter(|(_, r)| *r > 0.0)
                .map(|(d, r)| (s ^ (1 << d), r))
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateMatrix::from_rows(rows))
}

/// Scale for residual checks: the largest per-state outflow.
fn flux_scale(r: &RateMatrix, pi: &[f64]) -> f64 {
    (0..r.size())
        .map(|a| pi[a] * r.exit_rate(a))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// `‖πᵀR‖∞`.
pub fn residual(r: &RateMatrix, pi: &[f64]) -> f64 {
    r.left_multiply(pi).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Unique `π` with `πᵀR = 0`, `Σπ = 1`.
pub fn solve_stationary(r: &RateMatrix) -> Result<Vec<f64>> {
    let n = r.size();
    if n == 0 {
        return Err(Error::Dimension("empty rate matrix".into()));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let components = r.strong_components();
    if components != 1 {
        return Err(Error::Reducible { components });
    }
    let mut pi = if n <= DENSE_SOLVE_LIMIT {
        solve_dense(r)?
    } else {
        solve_gauss_seidel(r)?
    };
    for p in pi.iter_mut() {
        if *p < 0.0 {
            if *p < -1e-9 {
                return Err(Error::Singular(format!("negative stationary mass {p:e}")));
            }
            *p = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    let res = residual(r, &pi);
    if res > 1e-10 * flux_scale(r, &pi).max(1.0) {
        return Err(Error::Singular(format!("residual {res:e} after solve")));
    }
    Ok(pi)
}

/// Dense LU on `Rᵀ` with its last equation replaced by `Σπ = 1`, plus one
/// round of iterative refinement.
fn solve_dense(r: &RateMatrix) -> Result<Vec<f64>> {
    let n = r.size();
    let mut a = r.to_dense().transpose();
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let lu = a.clone().lu();
    let mut x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("LU factorization is singular".into()))?;
    let correction = lu
        .solve(&(&rhs - &a * &x))
        .ok_or_else(|| Error::Singular("LU factorization is singular".into()))?;
    x += correction;
    Ok(x.iter().copied().collect())
}

fn solve_gauss_seidel(r: &RateMatrix) -> Result<Vec<f64>> {
    let n = r.size();
    let incoming = r.transpose_rows();
    let mut pi = vec![1.0 / n as f64; n];
    for _sweep in 0..100_000 {
        for b in 0..n {
            let inflow: f64 = incoming[b].iter().map(|&(a, rate)| pi[a] * rate).sum();
            pi[b] = inflow / r.exit_rate(b);
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        if residual(r, &pi) <= 1e-13 * flux_scale(r, &pi).max(1.0) {
            return Ok(pi);
        }
    }
    Err(Error::Singular("Gauss–Seidel did not converge".into()))
}

/// Normalized `exp(log_weights)` and `ln Z`.
pub fn normalize_log_weights(log_weights: &[f64]) -> (Vec<f64>, f64) {
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_weights.iter().map(|w| (w - max).exp()).sum();
    let log_z = max + sum.ln();
    (log_weights.iter().map(|w| (w - log_z).exp()).collect(), log_z)
}

/// Normalized target distribution over the state space, and `ln Z`.
pub fn analytic_distribution(form: &EquilibriumForm, space: &StateSpace) -> Result<(Vec<f64>, f64)> {
    form.check(space.order(), space.is_directed())?;
    let w: Vec<f64> = (0..space.len())
        .into_par_iter()
        .map(|s| form.log_weight_unchecked(&space.graph(s)))
        .collect();
    Ok(normalize_log_weights(&w))
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Marginal presence probability of each dyad, in canonical order.
pub fn edge_marginals(space: &StateSpace, pi: &[f64]) -> Vec<f64> {
    (0..space.dyads())
        .map(|d| {
            pi.iter()
                .enumerate()
                .filter(|(s, _)| s >> d & 1 == 1)
                .map(|(_, p)| p)
                .sum()
        })
        .collect()
}

/// Worst relative imbalance between inflow `Σ_b π_b R_ba` and outflow
/// `π_a u_a` over all states.
pub fn flux_balance_error(r: &RateMatrix, pi: &[f64]) -> f64 {
    let mut inflow = vec![0.0; r.size()];
    for a in 0..r.size() {
        for (b, rate) in r.row(a) {
            inflow[b] += pi[a] * rate;
        }
    }
    (0..r.size())
        .map(|a| {
            let out = pi[a] * r.exit_rate(a);
            let denom = out.max(inflow[a]).max(f64::MIN_POSITIVE);
            (inflow[a] - out).abs() / denom
        })
        .fold(0.0, f64::max)
}

/// Worst relative violation of `π_a R_ab = π_b R_ba` over adjacent pairs.
pub fn detailed_balance_error(r: &RateMatrix, pi: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..r.size() {
        for (b, rate) in r.row(a) {
            let forward = pi[a] * rate;
            let backward = pi[b] * r.get(b, a);
            let denom = forward.max(backward).max(f64::MIN_POSITIVE);
            worst = worst.max((forward - backward).abs() / denom);
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryReport {
    pub pi_solved: Vec<f64>,
    pub pi_analytic: Vec<f64>,
    pub tv_distance: f64,
    pub max_rel_error: f64,
    pub log_z: f64,
    /// `‖π_solvedᵀR‖∞`.
    pub residual: f64,
}

/// Solves the family's generator and compares with its claimed
/// equilibrium.
pub fn compare_equilibrium(spec: &ProcessSpec, space: &StateSpace) -> Result<StationaryReport> {
    let r = build_rate_matrix(spec, space)?;
    let pi_solved = solve_stationary(&r)?;
    let (pi_analytic, log_z) = analytic_distribution(&spec.equilibrium(), space)?;
    let max_rel_error = pi_solved
        .iter()
        .zip(&pi_analytic)
        .map(|(s, a)| (s - a).abs() / a)
        .fold(0.0, f64::max);
    Ok(StationaryReport {
        tv_distance: total_variation(&pi_solved, &pi_analytic),
        residual: residual(&r, &pi_solved),
        pi_solved,
        pi_analytic,
        max_rel_error,
        log_z,
    })
}

/// `p0ᵀ exp(Rt)` by uniformization.
pub fn transient_distribution(r: &RateMatrix, p0: &[f64], t: f64) -> Result<Vec<f64>> {
    if p0.len() != r.size() {
        return Err(Error::Dimension(format!(
            "initial vector has {} entries for {} states",
            p0.len(),
            r.size()
        )));
    }
    if p0.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (p0.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Dimension("initial vector is not a probability vector".into()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Dimension(format!("time must be finite and non-negative, got {t}")));
    }
    let lambda = UNIFORMIZATION_FACTOR * r.max_exit_rate();
    let mean = lambda * t;
    if mean == 0.0 {
        return Ok(p0.to_vec());
    }
    // v ← v(I + R/Λ)
    let step = |v: &[f64]| -> Vec<f64> {
        let vr = r.left_multiply(v);
        v.iter().zip(vr).map(|(a, b)| a + b / lambda).collect()
    };
    let ln_mean = mean.ln();
    let mut log_w = -mean;
    let mut v = p0.to_vec();
    let mut out: Vec<f64> = v.iter().map(|x| x * log_w.exp()).collect();
    let mut k = 0u64;
    loop {
        k += 1;
        v = step(&v);
        log_w += ln_mean - (k as f64).ln();
        let w = log_w.exp();
        if w > 0.0 {
            out.iter_mut().zip(&v).for_each(|(o, x)| *o += w * x);
        }
        // Poisson tail beyond k is at most w·ρ/(1-ρ) with ρ = mean/(k+1)
        // once k+1 exceeds the mean.
        let rho = mean / (k + 1) as f64;
        if rho < 1.0 && w * rho / (1.0 - rho) <= POISSON_TAIL {
            break;
        }
    }
    Ok(out)
}

/// Checks `π_s ∝ π̃_s / u_s` between the CTMC and its jump chain; returns
/// the largest absolute deviation.
pub fn embedded_chain_check(spec: &ProcessSpec, space: &StateSpace) -> Result<f64> {
    let r = build_rate_matrix(spec, space)?;
    embedded_chain_deviation(&r)
}

pub fn embedded_chain_deviation(r: &RateMatrix) -> Result<f64> {
    let pi = solve_stationary(r)?;
    let pi_jump = solve_stationary(&r.embedded_generator()?)?;
    let mut rebuilt: Vec<f64> = pi_jump
        .iter()
        .enumerate()
        .map(|(s, p)| p / r.exit_rate(s))
        .collect();
    let total: f64 = rebuilt.iter().sum();
    rebuilt.iter_mut().for_each(|p| *p /= total);
    Ok(pi
        .iter()
        .zip(&rebuilt)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
