// SPDX-License-Identifier: Apache-2.0
//! Graph potentials `q(g) = θᵀw(g, X) + ln h(g)` and their toggle changes.
//!
//! Change scores are computed incrementally from the local neighborhood of
//! the toggled dyad; the full evaluations exist for verification and for
//! bookkeeping at run boundaries. `θ` can be read as a negated, temperature
//! scaled energy per statistic, but nothing here depends on that reading.
//!
//! Directed "triangles" are transitive triples (`i→j`, `j→k`, `i→k`) and
//! directed "two-stars" are out-two-stars.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, Toggle};

/// User-supplied sufficient statistic.
///
/// `add_change` must return `w(g + (i,j)) - w(g)` evaluated as if the dyad
/// were absent in `g`, whatever its actual state.
pub trait Statistic: Send + Sync {
    fn name(&self) -> &str;
    fn value(&self, g: &Graph) -> f64;
    fn add_change(&self, g: &Graph, t: Toggle) -> f64;
    /// Which cached change scores can move when some toggle is applied.
    fn scope(&self) -> DirtyScope {
        DirtyScope::All
    }
}

/// Toggles whose change score may be altered by applying toggle `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DirtyScope {
    /// Change scores never depend on the state.
    None,
    /// Only the reverse arc `(j, i)`.
    Reciprocal,
    /// Any toggle sharing an endpoint with `(i, j)`.
    Incident,
    All,
}

/// Square pairwise covariate matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariate {
    n: usize,
    values: Vec<f64>,
}

impl Covariate {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for r in &rows {
            if r.len() != n {
                return Err(Error::CovariateDimension { rows: n, cols: r.len(), n });
            }
            values.extend_from_slice(r);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariate entry"));
        }
        Ok(Covariate { n, values })
    }

    /// Parses whitespace-separated rows.
    pub fn parse(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(k, l)| {
                l.split_whitespace()
                    .map(|s| {
                        s.parse::<f64>().map_err(|_| Error::EdgeList {
                            line: k + 1,
                            message: format!("bad covariate value `{s}`"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Covariate::new(rows)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

#[derive(Clone)]
pub enum StatisticTerm {
    Edges,
    Mutuals,
    Triangles,
    TwoStars,
    EdgeCovariate(Arc<Covariate>),
    Custom(Arc<dyn Statistic>),
}

impl fmt::Debug for StatisticTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl PartialEq for StatisticTerm {
    fn eq(&self, other: &Self) -> bool {
        use StatisticTerm::*;
        match (self, other) {
            (Edges, Edges) | (Mutuals, Mutuals) | (Triangles, Triangles) | (TwoStars, TwoStars) => {
                true
            }
            (EdgeCovariate(a), EdgeCovariate(b)) => a == b,
            (Custom(a), Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl StatisticTerm {
    pub fn edge_covariate(cov: Covariate) -> Self {
        StatisticTerm::EdgeCovariate(Arc::new(cov))
    }

    pub fn name(&self) -> String {
        match self {
            StatisticTerm::Edges => "edges".into(),
            StatisticTerm::Mutuals => "mutuals".into(),
            StatisticTerm::Triangles => "triangles".into(),
            StatisticTerm::TwoStars => "twostars".into(),
            StatisticTerm::EdgeCovariate(_) => "edgecov".into(),
            StatisticTerm::Custom(s) => s.name().to_string(),
        }
    }

    pub fn check(&self, n: usize, directed: bool) -> Result<()> {
        match self {
            StatisticTerm::Mutuals if !directed => Err(Error::RequiresDirected("mutuals term")),
            StatisticTerm::EdgeCovariate(c) if c.order() != n => Err(Error::CovariateDimension {
                rows: c.order(),
                cols: c.order(),
                n,
            }),
            _ => Ok(()),
        }
    }

    pub fn scope(&self) -> DirtyScope {
        match self {
            StatisticTerm::Edges | StatisticTerm::EdgeCovariate(_) => DirtyScope::None,
            StatisticTerm::Mutuals => DirtyScope::Reciprocal,
            StatisticTerm::Triangles | StatisticTerm::TwoStars => DirtyScope::Incident,
            StatisticTerm::Custom(s) => s.scope(),
        }
    }

    /// Full evaluation of the statistic.
    pub fn value(&self, g: &Graph) -> f64 {
        let n = g.order();
        match self {
            StatisticTerm::Edges => g.edge_count() as f64,
            StatisticTerm::Mutuals => g.mutual_count().unwrap_or(0) as f64,
            StatisticTerm::Triangles if g.is_directed() => {
                let mut count = 0usize;
                for i in 0..n {
                    for j in 0..n {
                        if i == j || !g.has_edge(i, j) {
                            continue;
                        }
                        for k in 0..n {
                            if k != i && k != j && g.has_edge(j, k) && g.has_edge(i, k) {
                                count += 1;
                            }
                        }
                    }
                }
                count as f64
            }
            StatisticTerm::Triangles => {
                let mut count = 0usize;
                for i in 0..n {
                    for j in (i + 1)..n {
                        if !g.has_edge(i, j) {
                            continue;
                        }
                        for k in (j + 1)..n {
                            if g.has_edge(i, k) && g.has_edge(j, k) {
                                count += 1;
                            }
                        }
                    }
                }
                count as f64
            }
            StatisticTerm::TwoStars => (0..n)
                .map(|v| {
                    let d = g.out_degree(v);
                    d * d.saturating_sub(1) / 2
                })
                .sum::<usize>() as f64,
            StatisticTerm::EdgeCovariate(c) => g.edges().map(|t| c.get(t.i, t.j)).sum(),
            StatisticTerm::Custom(s) => s.value(g),
        }
    }

    /// `w(g with (i,j) present) - w(g with (i,j) absent)`.
    pub fn add_change(&self, g: &Graph, t: Toggle) -> f64 {
        let (i, j) = (t.i, t.j);
        let n = g.order();
        match self {
            StatisticTerm::Edges => 1.0,
            StatisticTerm::Mutuals => {
                if g.has_edge(j, i) {
                    1.0
                } else {
                    0.0
                }
            }
            StatisticTerm::Triangles if g.is_directed() => {
                let mut count = 0usize;
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    // (i,j) as the shortcut of i→k→j
                    if g.has_edge(i, k) && g.has_edge(k, j) {
                        count += 1;
                    }
                    // (i,j) as the first leg of i→j→k closed by i→k
                    if g.has_edge(j, k) && g.has_edge(i, k) {
                        count += 1;
                    }
                    // (i,j) as the second leg of k→i→j closed by k→j
                    if g.has_edge(k, i) && g.has_edge(k, j) {
                        count += 1;
                    }
                }
                count as f64
            }
            StatisticTerm::Triangles => (0..n)
                .filter(|&k| k != i && k != j && g.has_edge(i, k) && g.has_edge(j, k))
                .count() as f64,
            StatisticTerm::TwoStars => {
                let present = usize::from(g.has_edge(i, j));
                if g.is_directed() {
                    (g.out_degree(i) - present) as f64
                } else {
                    (g.out_degree(i) + g.out_degree(j) - 2 * present) as f64
                }
            }
            StatisticTerm::EdgeCovariate(c) => c.get(i, j),
            StatisticTerm::Custom(s) => s.add_change(g, t),
        }
    }

    /// Signed change in the statistic from toggling `t` at `g`.
    pub fn change(&self, g: &Graph, t: Toggle) -> f64 {
        let delta = self.add_change(g, t);
        if g.has_edge(t.i, t.j) {
            -delta
        } else {
            delta
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceMeasure {
    /// `ln h = 0`.
    Counting,
    /// `ln h = -w_e ln n`.
    KrivitskySparse,
    /// `ln h = (w_m - w_e) ln n`.
    ReciprocitySparse,
    /// `ln h = (1 - γ)(w_m - w_e) ln n`.
    PowerLaw { gamma: f64 },
}

impl ReferenceMeasure {
    fn uses_mutuals(&self) -> bool {
        matches!(self, ReferenceMeasure::ReciprocitySparse | ReferenceMeasure::PowerLaw { .. })
    }

    pub fn check(&self, directed: bool) -> Result<()> {
        if let ReferenceMeasure::PowerLaw { gamma } = self {
            if !gamma.is_finite() {
                return Err(Error::NonFinite("power-law gamma"));
            }
        }
        if self.uses_mutuals() && !directed {
            return Err(Error::RequiresDirected("reciprocity reference measure"));
        }
        Ok(())
    }

    pub fn scope(&self) -> DirtyScope {
        if self.uses_mutuals() {
            DirtyScope::Reciprocal
        } else {
            DirtyScope::None
        }
    }

    /// Per-edge and per-mutual log coefficients `(a, b)` with
    /// `ln h = a·w_e + b·w_m`.
    fn coefficients(&self, n: usize) -> (f64, f64) {
        let ln_n = (n as f64).ln();
        match *self {
            ReferenceMeasure::Counting => (0.0, 0.0),
            ReferenceMeasure::KrivitskySparse => (-ln_n, 0.0),
            ReferenceMeasure::ReciprocitySparse => (-ln_n, ln_n),
            ReferenceMeasure::PowerLaw { gamma } => (-(1.0 - gamma) * ln_n, (1.0 - gamma) * ln_n),
        }
    }

    pub fn log_h(&self, g: &Graph) -> f64 {
        let ln_n = (g.order() as f64).ln();
        let we = g.edge_count() as f64;
        let excess = || g.mutual_count().unwrap_or(0) as f64 - we;
        match *self {
            ReferenceMeasure::Counting => 0.0,
            ReferenceMeasure::KrivitskySparse => -we * ln_n,
            ReferenceMeasure::ReciprocitySparse => excess() * ln_n,
            ReferenceMeasure::PowerLaw { gamma } => (1.0 - gamma) * excess() * ln_n,
        }
    }

    pub fn add_change(&self, g: &Graph, t: Toggle) -> f64 {
        let (a, b) = self.coefficients(g.order());
        let mut out = a;
        if b != 0.0 && g.has_edge(t.j, t.i) {
            out += b;
        }
        out
    }
}

/// A graph potential: statistic terms, their coefficients, and a
/// reference measure.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    terms: Vec<StatisticTerm>,
    theta: Vec<f64>,
    reference: ReferenceMeasure,
}

impl PotentialSpec {
    pub fn new(terms: Vec<StatisticTerm>, theta: Vec<f64>, reference: ReferenceMeasure) -> Result<Self> {
        if terms.len() != theta.len() {
            return Err(Error::ThetaLength { terms: terms.len(), theta: theta.len() });
        }
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("theta"));
        }
        Ok(PotentialSpec { terms, theta, reference })
    }

    /// Edges-only potential with counting reference.
    pub fn edges(theta: f64) -> Self {
        PotentialSpec::new(vec![StatisticTerm::Edges], vec![theta], ReferenceMeasure::Counting)
            .expect("one term, one coefficient")
    }

    /// The identically-zero potential.
    pub fn zero() -> Self {
        PotentialSpec {
            terms: Vec::new(),
            theta: Vec::new(),
            reference: ReferenceMeasure::Counting,
        }
    }

    pub fn terms(&self) -> &[StatisticTerm] {
        &self.terms
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn reference(&self) -> ReferenceMeasure {
        self.reference
    }

    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        PotentialSpec::new(self.terms.clone(), theta, self.reference)
    }

    /// Validates against a graph order and directedness.
    pub fn check(&self, n: usize, directed: bool) -> Result<()> {
        for term in &self.terms {
            term.check(n, directed)?;
        }
        self.reference.check(directed)
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        self.check(g.order(), g.is_directed())
    }

    pub fn scope(&self) -> DirtyScope {
        self.terms
            .iter()
            .map(StatisticTerm::scope)
            .chain(std::iter::once(self.reference.scope()))
            .max()
            .unwrap_or(DirtyScope::None)
    }

    /// `w(g, X)` in term order.
    pub fn statistics(&self, g: &Graph) -> Result<Vec<f64>> {
        self.check_graph(g)?;
        Ok(self.terms.iter().map(|t| t.value(g)).collect())
    }

    pub fn log_reference(&self, g: &Graph) -> Result<f64> {
        self.check_graph(g)?;
        Ok(self.reference.log_h(g))
    }

    /// `q(g)`.
    pub fn potential(&self, g: &Graph) -> Result<f64> {
        self.check_graph(g)?;
        Ok(self.potential_unchecked(g))
    }

    pub(crate) fn potential_unchecked(&self, g: &Graph) -> f64 {
        let linear: f64 = self
            .terms
            .iter()
            .zip(&self.theta)
            .filter(|(_, th)| **th != 0.0)
            .map(|(t, th)| th * t.value(g))
            .sum();
        linear + self.reference.log_h(g)
    }

    /// `q(g with t toggled) - q(g)`, from local counts only.
    pub fn change_score(&self, g: &Graph, t: Toggle) -> Result<f64> {
        self.check_graph(g)?;
        g.dyad_index(t)?;
        Ok(self.change_unchecked(g, t))
    }

    pub(crate) fn change_unchecked(&self, g: &Graph, t: Toggle) -> f64 {
        let add: f64 = self
            .terms
            .iter()
            .zip(&self.theta)
            .filter(|(_, th)| **th != 0.0)
            .map(|(term, th)| th * term.add_change(g, t))
            .sum::<f64>()
            + self.reference.add_change(g, t);
        if g.has_edge(t.i, t.j) {
            -add
        } else {
            add
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, directed: bool, p: f64) -> Graph {
        let mut g = Graph::empty(n, directed).unwrap();
        for d in 0..g.dyad_count() {
            if rng.gen_bool(p) {
                g.flip_dyad(d);
            }
        }
        g
    }

    fn triangle() -> Graph {
        Graph::complete(3, false).unwrap()
    }

    #[test]
    fn statistics_examples() {
        let spec = PotentialSpec::new(vec![StatisticTerm::Edges], vec![0.0], ReferenceMeasure::Counting).unwrap();
        assert_eq!(spec.statistics(&triangle()).unwrap(), vec![3.0]);

        let spec = PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Triangles],
            vec![0.0, 0.0],
            ReferenceMeasure::Counting,
        )
        .unwrap();
        assert_eq!(spec.statistics(&triangle()).unwrap(), vec![3.0, 1.0]);

        let spec = PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Mutuals],
            vec![0.0, 0.0],
            ReferenceMeasure::Counting,
        )
        .unwrap();
        let g = Graph::complete(2, true).unwrap();
        assert_eq!(spec.statistics(&g).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn potential_examples() {
        let g = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(PotentialSpec::edges(0.0).potential(&g).unwrap(), 0.0);
        assert_eq!(PotentialSpec::edges(0.5).potential(&g).unwrap(), 2.0);

        let spec = PotentialSpec::new(vec![StatisticTerm::Edges], vec![1.0], ReferenceMeasure::KrivitskySparse).unwrap();
        let g = Graph::from_edges(4, false, &[(0, 1), (2, 3)]).unwrap();
        let expected = 2.0 - 2.0 * 4f64.ln();
        assert!((spec.potential(&g).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn change_score_examples() {
        let g = Graph::from_edges(3, false, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(PotentialSpec::edges(1.0).change_score(&g, Toggle::new(0, 2)).unwrap(), 1.0);
        let spec = PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Triangles],
            vec![1.0, 2.0],
            ReferenceMeasure::Counting,
        )
        .unwrap();
        // full-evaluation oracle: q(after) - q(before)
        let after = g.apply_toggle(Toggle::new(0, 2)).unwrap();
        let oracle = spec.potential(&after).unwrap() - spec.potential(&g).unwrap();
        assert_eq!(oracle, 3.0);
        assert_eq!(spec.change_score(&g, Toggle::new(0, 2)).unwrap(), oracle);
    }

    #[test]
    fn compatibility_errors() {
        let spec = PotentialSpec::new(vec![StatisticTerm::Mutuals], vec![1.0], ReferenceMeasure::Counting).unwrap();
        assert!(spec.potential(&Graph::empty(3, false).unwrap()).is_err());
        let cov = Covariate::new(vec![vec![0.0; 3]; 3]).unwrap();
        let spec = PotentialSpec::new(vec![StatisticTerm::edge_covariate(cov)], vec![1.0], ReferenceMeasure::Counting)
            .unwrap();
        assert!(matches!(
            spec.statistics(&Graph::empty(4, true).unwrap()),
            Err(Error::CovariateDimension { .. })
        ));
        assert!(PotentialSpec::new(vec![StatisticTerm::Edges], vec![], ReferenceMeasure::Counting).is_err());
        assert!(Covariate::new(vec![vec![0.0; 2], vec![0.0; 3]]).is_err());
    }

    #[test]
    fn reference_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.gen_range(2..9);
            let p = rng.gen();
            let g = random_graph(&mut rng, n, true, p);
            let (we, wm) = (g.edge_count() as f64, g.mutual_count().unwrap() as f64);
            let ln_n = (n as f64).ln();
            let gamma: f64 = rng.gen_range(-1.0..2.0);
            assert_eq!(ReferenceMeasure::Counting.log_h(&g), 0.0);
            assert_eq!(ReferenceMeasure::KrivitskySparse.log_h(&g), -we * ln_n);
            assert_eq!(ReferenceMeasure::ReciprocitySparse.log_h(&g), (wm - we) * ln_n);
            let pl = ReferenceMeasure::PowerLaw { gamma }.log_h(&g);
            assert!((pl - (1.0 - gamma) * (wm - we) * ln_n).abs() < 1e-12);
            assert_eq!(ReferenceMeasure::PowerLaw { gamma: 1.0 }.log_h(&g), 0.0);
            assert_eq!(
                ReferenceMeasure::PowerLaw { gamma: 0.0 }.log_h(&g),
                ReferenceMeasure::ReciprocitySparse.log_h(&g)
            );
        }
    }

    #[test]
    fn reciprocity_reference_needs_directed() {
        let spec = PotentialSpec::new(vec![StatisticTerm::Edges], vec![1.0], ReferenceMeasure::ReciprocitySparse)
            .unwrap();
        assert!(spec.check(4, false).is_err());
        assert!(spec.check(4, true).is_ok());
    }

    fn full_library(n: usize, directed: bool, rng: &mut ChaCha8Rng) -> PotentialSpec {
        let cov = Covariate::new(
            (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect(),
        )
        .unwrap();
        let mut terms = vec![
            StatisticTerm::Edges,
            StatisticTerm::Triangles,
            StatisticTerm::TwoStars,
            StatisticTerm::edge_covariate(cov),
        ];
        let reference = if directed {
            terms.push(StatisticTerm::Mutuals);
            ReferenceMeasure::PowerLaw { gamma: rng.gen_range(0.0..1.0) }
        } else {
            ReferenceMeasure::KrivitskySparse
        };
        let theta = terms.iter().map(|_| rng.gen_range(-1.5..1.5)).collect();
        PotentialSpec::new(terms, theta, reference).unwrap()
    }

    proptest! {
        #[test]
        fn incremental_matches_full(seed in any::<u64>(), n in 2usize..8, directed in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = full_library(n, directed, &mut rng);
            let p = rng.gen();
            let g = random_graph(&mut rng, n, directed, p);
            for (t, _) in g.hamming_neighbors() {
                let h = g.apply_toggle(t).unwrap();
                let full = spec.potential(&h).unwrap() - spec.potential(&g).unwrap();
                let inc = spec.change_score(&g, t).unwrap();
                prop_assert!((full - inc).abs() < 1e-12, "{} vs {}", full, inc);
                // antisymmetry
                prop_assert!((inc + spec.change_score(&h, t).unwrap()).abs() < 1e-12);
                // per-term change against full statistic difference
                for term in spec.terms() {
                    let d = term.value(&h) - term.value(&g);
                    prop_assert!((d - term.change(&g, t)).abs() < 1e-12);
                }
            }
        }
    }
}
