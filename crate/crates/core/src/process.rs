// SPDX-License-Identifier: Apache-2.0
//! Rate families for continuous-time graph processes with ERGM equilibria.
//!
//! Every family moves by single-edge toggles. Given a state `a` and a
//! toggle leading to `b`, each family yields the transition rate `R_ab`;
//! the matching [`EquilibriumForm`] gives the unnormalized log stationary
//! weight the process converges to.
//!
//! | family | `R_ab` | equilibrium log weight |
//! |---|---|---|
//! | competing-rate SAOM | `exp q(b)` | `q` |
//! | LERGM | `A / (1 + exp(q(a) - q(b)))` | `q` |
//! | change inhibition | `A min(1, exp(q(b) - q(a)))` | `q` |
//! | differential stability | `A exp(-q(a)) / abs(H(a))` | `q` |
//! | constant-dissolution CSTERGM | `exp θ_d` on removal, `exp Δq_f` on addition | `q_f - θ_d w_e` |
//! | constant-formation CSTERGM | `exp θ_f` on addition, `exp Δq_d` on removal | `q_d + θ_f w_e` |
//! | general CSTERGM | `exp Δq_f` on addition, `exp Δq_d` on removal | `q_f + q_d` |
//! | CTERGM | `exp(q(b) - q(a))` | `2q` |
//!
//! The differential-stability rates give a mean dwell of `exp(q(a)) / A`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NeighborClass, Toggle};
use crate::potential::{DirtyScope, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    CompetingRateSaom,
    Lergm,
    ChangeInhibition,
    DifferentialStability,
    ConstDissCstergm,
    ConstFormCstergm,
    GeneralCstergm,
    Ctergm,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::CompetingRateSaom,
        Family::Lergm,
        Family::ChangeInhibition,
        Family::DifferentialStability,
        Family::ConstDissCstergm,
        Family::ConstFormCstergm,
        Family::GeneralCstergm,
        Family::Ctergm,
    ];

    /// Config key.
    pub fn key(self) -> &'static str {
        match self {
            Family::CompetingRateSaom => "saom",
            Family::Lergm => "lergm",
            Family::ChangeInhibition => "inhibit",
            Family::DifferentialStability => "stability",
            Family::ConstDissCstergm => "cstergm-cd",
            Family::ConstFormCstergm => "cstergm-cf",
            Family::GeneralCstergm => "cstergm",
            Family::Ctergm => "ctergm",
        }
    }

    pub fn uses_rate_constant(self) -> bool {
        matches!(
            self,
            Family::Lergm | Family::ChangeInhibition | Family::DifferentialStability
        )
    }

    /// Qualitative profile of the family's rate structure.
    pub fn profile(self) -> FamilyProfile {
        use Driving::*;
        let (bounded, driving, separable, np, nm, hp, hm) = match self {
            Family::CompetingRateSaom => (false, Target, false, true, true, true, true),
            Family::Lergm => (true, Difference, false, true, true, true, true),
            Family::ChangeInhibition => (true, Difference, false, false, true, true, true),
            Family::DifferentialStability => (false, Source, false, false, false, false, false),
            Family::ConstDissCstergm => (false, Difference, true, true, true, true, false),
            Family::ConstFormCstergm => (false, Difference, true, true, true, false, true),
            Family::GeneralCstergm => (false, Difference, true, true, true, true, true),
            Family::Ctergm => (false, Difference, false, true, true, true, true),
        };
        FamilyProfile {
            bounded_rate: bounded,
            driving,
            separable,
            uphill_sensitive: np,
            downhill_sensitive: nm,
            addition_sensitive: hp,
            removal_sensitive: hm,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.key() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Which potential drives transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driving {
    Target,
    Source,
    Difference,
}

/// Qualitative rate properties; "sensitive" means rates to neighbors in
/// that class vary with the target for a fixed source state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyProfile {
    /// Rates bounded above by the rate constant.
    pub bounded_rate: bool,
    pub driving: Driving,
    /// Formation and dissolution governed separately.
    pub separable: bool,
    pub uphill_sensitive: bool,
    pub downhill_sensitive: bool,
    pub addition_sensitive: bool,
    pub removal_sensitive: bool,
}

/// Loose parameter bag used to assemble a [`ProcessSpec`] from config.
#[derive(Debug, Clone, Default)]
pub struct ProcessParams {
    pub rate_constant: Option<f64>,
    pub potential: Option<PotentialSpec>,
    pub formation: Option<PotentialSpec>,
    pub dissolution: Option<PotentialSpec>,
    pub theta_d: Option<f64>,
    pub theta_f: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    CompetingRateSaom { potential: PotentialSpec },
    Lergm { rate_constant: f64, potential: PotentialSpec },
    ChangeInhibition { rate_constant: f64, potential: PotentialSpec },
    DifferentialStability { rate_constant: f64, potential: PotentialSpec },
    ConstDissCstergm { formation: PotentialSpec, theta_d: f64 },
    ConstFormCstergm { dissolution: PotentialSpec, theta_f: f64 },
    GeneralCstergm { formation: PotentialSpec, dissolution: PotentialSpec },
    Ctergm { potential: PotentialSpec },
}

/// Per-toggle inputs to a rate: change scores for up to two potentials,
/// the current potential (for families driven by absolute levels), and
/// the neighborhood size.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RateInputs {
    pub class: NeighborClass,
    pub delta: [f64; 2],
    pub level: f64,
    pub neighbors: usize,
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl ProcessSpec {
    /// Assembles a spec, insisting on exactly the parameters the family
    /// uses.
    pub fn from_params(family: Family, p: ProcessParams) -> Result<Self> {
        let missing = |param| Error::MissingParameter { family, param };
        let unexpected = |param| Error::UnexpectedParameter { family, param };
        let uses_potential = matches!(
            family,
            Family::CompetingRateSaom
                | Family::Lergm
                | Family::ChangeInhibition
                | Family::DifferentialStability
                | Family::Ctergm
        );
        let uses_formation = matches!(family, Family::ConstDissCstergm | Family::GeneralCstergm);
        let uses_dissolution = matches!(family, Family::ConstFormCstergm | Family::GeneralCstergm);
        let checks: [(bool, bool, &'static str); 6] = [
            (family.uses_rate_constant(), p.rate_constant.is_some(), "rate_constant"),
            (uses_potential, p.potential.is_some(), "potential"),
            (uses_formation, p.formation.is_some(), "formation"),
            (uses_dissolution, p.dissolution.is_some(), "dissolution"),
            (family == Family::ConstDissCstergm, p.theta_d.is_some(), "theta_d"),
            (family == Family::ConstFormCstergm, p.theta_f.is_some(), "theta_f"),
        ];
        for (wanted, given, name) in checks {
            match (wanted, given) {
                (true, false) => return Err(missing(name)),
                (false, true) => return Err(unexpected(name)),
                _ => {}
            }
        }
        let spec = match family {
            Family::CompetingRateSaom => ProcessSpec::CompetingRateSaom { potential: p.potential.unwrap() },
            Family::Lergm => ProcessSpec::Lergm {
                rate_constant: p.rate_constant.unwrap(),
                potential: p.potential.unwrap(),
            },
            Family::ChangeInhibition => ProcessSpec::ChangeInhibition {
                rate_constant: p.rate_constant.unwrap(),
                potential: p.potential.unwrap(),
            },
            Family::DifferentialStability => ProcessSpec::DifferentialStability {
                rate_constant: p.rate_constant.unwrap(),
                potential: p.potential.unwrap(),
            },
            Family::ConstDissCstergm => ProcessSpec::ConstDissCstergm {
                formation: p.formation.unwrap(),
                theta_d: p.theta_d.unwrap(),
            },
            Family::ConstFormCstergm => ProcessSpec::ConstFormCstergm {
                dissolution: p.dissolution.unwrap(),
                theta_f: p.theta_f.unwrap(),
            },
            Family::GeneralCstergm => ProcessSpec::GeneralCstergm {
                formation: p.formation.unwrap(),
                dissolution: p.dissolution.unwrap(),
            },
            Family::Ctergm => ProcessSpec::Ctergm { potential: p.potential.unwrap() },
        };
        spec.check_parameters()?;
        Ok(spec)
    }

    fn check_parameters(&self) -> Result<()> {
        match self {
            ProcessSpec::Lergm { rate_constant, .. }
            | ProcessSpec::ChangeInhibition { rate_constant, .. }
            | ProcessSpec::DifferentialStability { rate_constant, .. } => {
                if !(rate_constant.is_finite() && *rate_constant > 0.0) {
                    return Err(Error::NonFinite("rate constant must be finite and positive"));
                }
            }
            ProcessSpec::ConstDissCstergm { theta_d: x, .. }
            | ProcessSpec::ConstFormCstergm { theta_f: x, .. }
                if !x.is_finite() => {
                    return Err(Error::NonFinite("constant log-rate"));
                }
            _ => {}
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self {
            ProcessSpec::CompetingRateSaom { .. } => Family::CompetingRateSaom,
            ProcessSpec::Lergm { .. } => Family::Lergm,
            ProcessSpec::ChangeInhibition { .. } => Family::ChangeInhibition,
            ProcessSpec::DifferentialStability { .. } => Family::DifferentialStability,
            ProcessSpec::ConstDissCstergm { .. } => Family::ConstDissCstergm,
            ProcessSpec::ConstFormCstergm { .. } => Family::ConstFormCstergm,
            ProcessSpec::GeneralCstergm { .. } => Family::GeneralCstergm,
            ProcessSpec::Ctergm { .. } => Family::Ctergm,
        }
    }

    /// Potentials in rate-slot order: the single potential, or formation
    /// then dissolution.
    pub fn potentials(&self) -> Vec<&PotentialSpec> {
        match self {
            ProcessSpec::CompetingRateSaom { potential }
            | ProcessSpec::Lergm { potential, .. }
            | ProcessSpec::ChangeInhibition { potential, .. }
            | ProcessSpec::DifferentialStability { potential, .. }
            | ProcessSpec::Ctergm { potential } => vec![potential],
            ProcessSpec::ConstDissCstergm { formation, .. } => vec![formation],
            ProcessSpec::ConstFormCstergm { dissolution, .. } => vec![dissolution],
            ProcessSpec::GeneralCstergm { formation, dissolution } => vec![formation, dissolution],
        }
    }

    /// Whether rates depend on the absolute potential of the current
    /// state, so every rate moves after any toggle.
    pub(crate) fn level_driven(&self) -> bool {
        matches!(
            self,
            ProcessSpec::CompetingRateSaom { .. } | ProcessSpec::DifferentialStability { .. }
        )
    }

    /// Dyads whose change scores can move after a toggle.
    pub(crate) fn dirty_scope(&self) -> DirtyScope {
        self.potentials()
            .into_iter()
            .map(PotentialSpec::scope)
            .max()
            .unwrap_or(DirtyScope::None)
    }

    /// Checks that the process can act on graphs of this order and type.
    pub fn check(&self, n: usize, directed: bool) -> Result<()> {
        if self.family() == Family::CompetingRateSaom && !directed {
            return Err(Error::RequiresDirected("competing-rate SAOM"));
        }
        for p in self.potentials() {
            p.check(n, directed)?;
        }
        Ok(())
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        self.check(g.order(), g.is_directed())
    }

    pub(crate) fn rate_from_inputs(&self, x: RateInputs) -> f64 {
        let plus = x.class == NeighborClass::HPlus;
        match self {
            ProcessSpec::CompetingRateSaom { .. } => (x.level + x.delta[0]).exp(),
            ProcessSpec::Lergm { rate_constant, .. } => rate_constant * logistic(x.delta[0]),
            ProcessSpec::ChangeInhibition { rate_constant, .. } => rate_constant * x.delta[0].min(0.0).exp(),
            ProcessSpec::DifferentialStability { rate_constant, .. } => {
                rate_constant / x.neighbors as f64 * (-x.level).exp()
            }
            ProcessSpec::ConstDissCstergm { theta_d, .. } => {
                if plus {
                    x.delta[0].exp()
                } else {
                    theta_d.exp()
                }
            }
            ProcessSpec::ConstFormCstergm { theta_f, .. } => {
                if plus {
                    theta_f.exp()
                } else {
                    x.delta[0].exp()
                }
            }
            ProcessSpec::GeneralCstergm { .. } => {
                if plus {
                    x.delta[0].exp()
                } else {
                    x.delta[1].exp()
                }
            }
            ProcessSpec::Ctergm { .. } => x.delta[0].exp(),
        }
    }

    /// Potential level of the first slot, when the family needs it.
    pub(crate) fn level(&self, g: &Graph) -> f64 {
        if self.level_driven() {
            self.potentials()[0].potential_unchecked(g)
        } else {
            0.0
        }
    }

    pub(crate) fn inputs(&self, g: &Graph, t: Toggle, level: f64) -> RateInputs {
        let mut delta = [0.0; 2];
        for (slot, p) in self.potentials().into_iter().enumerate() {
            delta[slot] = p.change_unchecked(g, t);
        }
        let class = if g.has_edge(t.i, t.j) {
            NeighborClass::HMinus
        } else {
            NeighborClass::HPlus
        };
        RateInputs { class, delta, level, neighbors: g.dyad_count() }
    }

    pub(crate) fn checked_rate(&self, x: RateInputs, t: Toggle) -> Result<f64> {
        let r = self.rate_from_inputs(x);
        if r.is_finite() && r >= 0.0 {
            Ok(r)
        } else {
            Err(Error::InvalidRate { toggle: t, rate: r })
        }
    }

    /// `R_ab` for `b = g` with `t` toggled.
    pub fn rate(&self, g: &Graph, t: Toggle) -> Result<f64> {
        self.check_graph(g)?;
        g.dyad_index(t)?;
        let level = self.level(g);
        self.checked_rate(self.inputs(g, t, level), t)
    }

    /// Rates for every toggle, in canonical order.
    pub fn rates(&self, g: &Graph) -> Result<Vec<f64>> {
        self.check_graph(g)?;
        let level = self.level(g);
        (0..g.dyad_count())
            .map(|d| {
                let t = g.toggle_at(d);
                self.checked_rate(self.inputs(g, t, level), t)
            })
            .collect()
    }

    /// Total rate of leaving `g`.
    pub fn exit_rate(&self, g: &Graph) -> Result<f64> {
        Ok(self.rates(g)?.iter().sum())
    }

    pub fn equilibrium(&self) -> EquilibriumForm {
        match self {
            ProcessSpec::CompetingRateSaom { potential }
            | ProcessSpec::Lergm { potential, .. }
            | ProcessSpec::ChangeInhibition { potential, .. }
            | ProcessSpec::DifferentialStability { potential, .. } => EquilibriumForm::new(vec![(1.0, potential.clone())], 0.0),
            ProcessSpec::ConstDissCstergm { formation, theta_d } => {
                EquilibriumForm::new(vec![(1.0, formation.clone())], -theta_d)
            }
            ProcessSpec::ConstFormCstergm { dissolution, theta_f } => {
                EquilibriumForm::new(vec![(1.0, dissolution.clone())], *theta_f)
            }
            ProcessSpec::GeneralCstergm { formation, dissolution } => {
                EquilibriumForm::new(vec![(1.0, formation.clone()), (1.0, dissolution.clone())], 0.0)
            }
            ProcessSpec::Ctergm { potential } => EquilibriumForm::new(vec![(2.0, potential.clone())], 0.0),
        }
    }

    /// Unnormalized log stationary weight claimed for the family.
    pub fn equilibrium_log_weight(&self, g: &Graph) -> Result<f64> {
        self.check_graph(g)?;
        self.equilibrium().log_weight(g)
    }

    fn saom_potential(&self) -> Result<&PotentialSpec> {
        match self {
            ProcessSpec::CompetingRateSaom { potential } => Ok(potential),
            _ => Err(Error::WrongFamily("actor hazard")),
        }
    }

    /// `λ_i(g) = Σ_{j≠i} exp q(g^c_ij)`: the rate at which actor `i` gets
    /// to act.
    pub fn saom_actor_hazard(&self, g: &Graph, i: usize) -> Result<f64> {
        let q = self.saom_potential()?;
        self.check_graph(g)?;
        if i >= g.order() {
            return Err(Error::VertexOutOfRange { vertex: i, n: g.order() });
        }
        let level = q.potential_unchecked(g);
        Ok((0..g.order())
            .filter(|&j| j != i)
            .map(|j| (level + q.change_unchecked(g, Toggle::new(i, j))).exp())
            .sum())
    }

    /// Multinomial-logit choice `Pr(i ⇝ j)` over targets `j ≠ i`.
    pub fn saom_choice_probabilities(&self, g: &Graph, i: usize) -> Result<Vec<(usize, f64)>> {
        let q = self.saom_potential()?;
        self.check_graph(g)?;
        if i >= g.order() {
            return Err(Error::VertexOutOfRange { vertex: i, n: g.order() });
        }
        let deltas: Vec<(usize, f64)> = (0..g.order())
            .filter(|&j| j != i)
            .map(|j| (j, q.change_unchecked(g, Toggle::new(i, j))))
            .collect();
        let max = deltas.iter().map(|&(_, d)| d).fold(f64::NEG_INFINITY, f64::max);
        let norm: f64 = deltas.iter().map(|&(_, d)| (d - max).exp()).sum();
        Ok(deltas
            .into_iter()
            .map(|(j, d)| (j, (d - max).exp() / norm))
            .collect())
    }
}

/// Unnormalized log stationary weight `Σ_k c_k q_k(g) + β w_e(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumForm {
    components: Vec<(f64, PotentialSpec)>,
    edge_coefficient: f64,
}

impl EquilibriumForm {
    pub fn new(components: Vec<(f64, PotentialSpec)>, edge_coefficient: f64) -> Self {
        EquilibriumForm { components, edge_coefficient }
    }

    /// A plain ERGM potential as a target.
    pub fn from_potential(p: PotentialSpec) -> Self {
        EquilibriumForm::new(vec![(1.0, p)], 0.0)
    }

    pub fn components(&self) -> &[(f64, PotentialSpec)] {
        &self.components
    }

    pub fn edge_coefficient(&self) -> f64 {
        self.edge_coefficient
    }

    pub fn check(&self, n: usize, directed: bool) -> Result<()> {
        self.components.iter().try_for_each(|(_, p)| p.check(n, directed))
    }

    pub fn log_weight(&self, g: &Graph) -> Result<f64> {
        self.check(g.order(), g.is_directed())?;
        Ok(self.log_weight_unchecked(g))
    }

    pub(crate) fn log_weight_unchecked(&self, g: &Graph) -> f64 {
        self.components
            .iter()
            .map(|(c, p)| c * p.potential_unchecked(g))
            .sum::<f64>()
            + self.edge_coefficient * g.edge_count() as f64
    }

    /// Change in log weight from toggling `t`.
    pub fn change(&self, g: &Graph, t: Toggle) -> Result<f64> {
        self.check(g.order(), g.is_directed())?;
        g.dyad_index(t)?;
        Ok(self.change_unchecked(g, t))
    }

    pub(crate) fn change_unchecked(&self, g: &Graph, t: Toggle) -> f64 {
        let edge = if g.has_edge(t.i, t.j) { -1.0 } else { 1.0 };
        self.components
            .iter()
            .map(|(c, p)| c * p.change_unchecked(g, t))
            .sum::<f64>()
            + self.edge_coefficient * edge
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{ReferenceMeasure, StatisticTerm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lergm(a: f64, theta: f64) -> ProcessSpec {
        ProcessSpec::Lergm { rate_constant: a, potential: PotentialSpec::edges(theta) }
    }

    fn et(theta: [f64; 2]) -> PotentialSpec {
        PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Triangles],
            theta.to_vec(),
            ReferenceMeasure::Counting,
        )
        .unwrap()
    }

    #[test]
    fn family_keys_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.key().parse::<Family>().unwrap(), f);
        }
        assert!("gibbs".parse::<Family>().is_err());
    }

    #[test]
    fn rate_examples() {
        let g = Graph::empty(3, false).unwrap();
        let t = Toggle::new(0, 1);
        assert_eq!(lergm(1.0, 0.0).rate(&g, t).unwrap(), 0.5);

        let ci = ProcessSpec::ChangeInhibition { rate_constant: 2.0, potential: PotentialSpec::edges(0.7) };
        assert_eq!(ci.rate(&g, t).unwrap(), 2.0);

        let ds = ProcessSpec::DifferentialStability { rate_constant: 1.0, potential: PotentialSpec::edges(0.0) };
        for (t, _) in g.hamming_neighbors() {
            assert!((ds.rate(&g, t).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }

        let ct = ProcessSpec::Ctergm { potential: PotentialSpec::edges(2f64.ln()) };
        assert!((ct.rate(&g, t).unwrap() - 2.0).abs() < 1e-15);

        let cd = ProcessSpec::ConstDissCstergm { formation: PotentialSpec::edges(0.3), theta_d: -1.0 };
        let h = Graph::from_edges(3, false, &[(0, 1)]).unwrap();
        assert!((cd.rate(&h, t).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!((cd.rate(&h, t).unwrap() - 0.3679).abs() < 1e-4);
    }

    #[test]
    fn exit_rate_examples() {
        let ds = ProcessSpec::DifferentialStability { rate_constant: 1.0, potential: PotentialSpec::zero() };
        for code in 0..8 {
            let g = Graph::from_code(3, false, code).unwrap();
            assert!((ds.exit_rate(&g).unwrap() - 1.0).abs() < 1e-15);
        }
        // term-by-term oracle: (M* - w_e) exp(θ_f) + Σ_{H⁻} exp(q_d(b) - q_d(a)) = 2·1 + 1·1
        let cf = ProcessSpec::ConstFormCstergm { dissolution: PotentialSpec::zero(), theta_f: 0.0 };
        let g = Graph::from_edges(3, false, &[(1, 2)]).unwrap();
        assert_eq!(cf.exit_rate(&g).unwrap(), 3.0);
    }

    #[test]
    fn equilibrium_examples() {
        // q(g) = 1.3 via edges θ = 1.3 and one edge
        let g = Graph::from_edges(3, false, &[(0, 2)]).unwrap();
        let ct = ProcessSpec::Ctergm { potential: PotentialSpec::edges(1.3) };
        assert!((ct.equilibrium_log_weight(&g).unwrap() - 2.6).abs() < 1e-15);

        let g4 = Graph::from_edges(4, false, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let cd = ProcessSpec::ConstDissCstergm { formation: PotentialSpec::edges(0.5), theta_d: 0.5 };
        assert_eq!(cd.equilibrium_log_weight(&g4).unwrap(), 0.0);

        let q = et([0.4, -0.9]);
        let gen = ProcessSpec::GeneralCstergm { formation: q.clone(), dissolution: q.clone() };
        let ct = ProcessSpec::Ctergm { potential: q };
        let tri = Graph::complete(3, false).unwrap();
        assert_eq!(
            gen.equilibrium_log_weight(&tri).unwrap(),
            ct.equilibrium_log_weight(&tri).unwrap()
        );
    }

    #[test]
    fn from_params_enforces_fields() {
        let err = ProcessSpec::from_params(
            Family::ConstDissCstergm,
            ProcessParams { formation: Some(PotentialSpec::edges(0.0)), ..Default::default() },
        )
        .unwrap_err();
        assert!(matches!(err, Error::MissingParameter { param: "theta_d", .. }));
        let err = ProcessSpec::from_params(
            Family::ConstDissCstergm,
            ProcessParams {
                formation: Some(PotentialSpec::edges(0.0)),
                theta_d: Some(0.1),
                dissolution: Some(PotentialSpec::edges(0.0)),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnexpectedParameter { param: "dissolution", .. }));
        let err = ProcessSpec::from_params(
            Family::Lergm,
            ProcessParams {
                rate_constant: Some(-1.0),
                potential: Some(PotentialSpec::zero()),
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
        let ok = ProcessSpec::from_params(
            Family::Lergm,
            ProcessParams {
                rate_constant: Some(1.0),
                potential: Some(PotentialSpec::zero()),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(ok.family(), Family::Lergm);
    }

    #[test]
    fn saom_requires_directed() {
        let saom = ProcessSpec::CompetingRateSaom { potential: PotentialSpec::zero() };
        let g = Graph::empty(3, false).unwrap();
        assert!(matches!(saom.rate(&g, Toggle::new(0, 1)), Err(Error::RequiresDirected(_))));
        assert!(lergm(1.0, 0.0).saom_actor_hazard(&g, 0).is_err());
    }

    #[test]
    fn saom_hazard_and_choice() {
        let saom = ProcessSpec::CompetingRateSaom { potential: PotentialSpec::zero() };
        let g = Graph::empty(3, true).unwrap();
        for i in 0..3 {
            assert_eq!(saom.saom_actor_hazard(&g, i).unwrap(), 2.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = PotentialSpec::new(
            vec![StatisticTerm::Edges, StatisticTerm::Mutuals, StatisticTerm::Triangles],
            vec![-0.4, 1.1, 0.3],
            ReferenceMeasure::Counting,
        )
        .unwrap();
        let saom = ProcessSpec::CompetingRateSaom { potential: q.clone() };
        for _ in 0..50 {
            let g = Graph::from_code(4, true, rng.gen_range(0..1 << 12)).unwrap();
            for i in 0..4 {
                let lambda = saom.saom_actor_hazard(&g, i).unwrap();
                let probs = saom.saom_choice_probabilities(&g, i).unwrap();
                let total: f64 = probs.iter().map(|p| p.1).sum();
                assert!((total - 1.0).abs() < 1e-12);
                for (j, p) in probs {
                    let t = Toggle::new(i, j);
                    // exp q(b) from a full evaluation of the target graph
                    let target = q.potential(&g.apply_toggle(t).unwrap()).unwrap().exp();
                    let r = saom.rate(&g, t).unwrap();
                    assert!((lambda * p - target).abs() <= 1e-12 * target);
                    assert!((r - target).abs() <= 1e-12 * target);
                }
            }
        }
    }
}
