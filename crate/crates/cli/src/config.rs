// SPDX-License-Identifier: Apache-2.0
//! Versioned TOML run configuration.
//!
//! ```toml
//! version = 1
//!
//! [model]
//! family = "lergm"
//! terms = ["edges", "triangles"]
//! theta = [-0.5, 0.3]
//! reference = "counting"
//! rate_constant = 1.0
//!
//! [sim]
//! n = 8
//! directed = false
//! t_max = 10.0
//! seed = 1
//! record = "full"
//!
//! [output]
//! dir = "out"
//! ```
//!
//! The top-level `terms`/`theta` fill the family's single potential (the
//! formation side for `cstergm-cd`, the dissolution side for `cstergm-cf`);
//! `cstergm` takes `[model.formation]` and `[model.dissolution]`. Unknown
//! keys are errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use ergmk::cfp::{CfpParams, FocusCount};
use ergmk::{Covariate, Family, Graph, PotentialSpec, ProcessParams, ProcessSpec, RecordMode, ReferenceMeasure, StatisticTerm};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_VERSION: u32 = 1;

fn cfg<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfp: Option<CfpSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formation: Option<PotentialSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dissolution: Option<PotentialSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub terms: Vec<String>,
    pub theta: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub directed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_events: Option<u64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<String>,
    #[serde(default)]
    pub burn_in: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in_steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<usize>,
    /// Replaces the model coefficients in the sampler target.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfpSection {
    pub r_m: f64,
    pub r_f: f64,
    pub r_d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub foci: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focus_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focus_gamma: Option<f64>,
    #[serde(default)]
    pub reciprocity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default)]
    pub fast_mixing_check: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_ratio: Option<f64>,
    /// Compare occupancy with the exact joint chain.
    #[serde(default)]
    pub exact: bool,
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Config> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if config.version != CONFIG_VERSION {
            return cfg(format!("unsupported config version {} (expected {CONFIG_VERSION})", config.version));
        }
        Ok(config)
    }

    /// Reads a config and makes file references absolute.
    pub fn load(path: &Path) -> CliResult<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Config::parse(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        config.absolutize(&base)?;
        Ok(config)
    }

    fn absolutize(&mut self, base: &Path) -> CliResult<()> {
        let fix = |p: &str| -> CliResult<String> {
            let joined = base.join(p);
            let abs = joined
                .canonicalize()
                .map_err(|e| CliError::Config(format!("cannot resolve {}: {e}", joined.display())))?;
            Ok(abs.to_string_lossy().into_owned())
        };
        let fix_terms = |terms: &mut Vec<String>| -> CliResult<()> {
            for t in terms.iter_mut() {
                if let Some(file) = t.strip_prefix("edgecov:") {
                    *t = format!("edgecov:{}", fix(file)?);
                }
            }
            Ok(())
        };
        if let Some(m) = self.model.as_mut() {
            if let Some(terms) = m.terms.as_mut() {
                fix_terms(terms)?;
            }
            for side in [m.formation.as_mut(), m.dissolution.as_mut()].into_iter().flatten() {
                fix_terms(&mut side.terms)?;
            }
        }
        if let Some(init) = self.sim.initial.as_mut() {
            *init = fix(init)?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn n(&self) -> CliResult<usize> {
        self.sim.n.ok_or_else(|| CliError::Config("missing sim.n".into()))
    }

    pub fn model(&self) -> CliResult<&ModelSection> {
        self.model.as_ref().ok_or_else(|| CliError::Config("missing [model] section".into()))
    }

    pub fn process(&self) -> CliResult<ProcessSpec> {
        self.model()?.process(None)
    }

    pub fn record_mode(&self) -> CliResult<RecordMode> {
        match self.sim.record.as_deref().unwrap_or("full") {
            "full" => Ok(RecordMode::FullEvents),
            "statistics" => Ok(RecordMode::StatisticsOnly),
            "averages" => Ok(RecordMode::TimeAverages),
            other => cfg(format!("unknown record mode `{other}` (full, statistics, averages)")),
        }
    }

    pub fn initial_graph(&self) -> CliResult<Graph> {
        let n = self.n()?;
        match &self.sim.initial {
            None => Ok(Graph::empty(n, self.sim.directed)?),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let g = Graph::parse_edge_list(&text)?;
                if g.order() != n || g.is_directed() != self.sim.directed {
                    return cfg(format!("initial graph {path} does not match sim.n / sim.directed"));
                }
                Ok(g)
            }
        }
    }

    pub fn cfp_params(&self) -> CliResult<CfpParams> {
        let c = self.cfp.as_ref().ok_or_else(|| CliError::Config("missing [cfp] section".into()))?;
        let foci = match (c.foci, c.focus_c, c.focus_gamma) {
            (Some(m), None, None) => FocusCount::Fixed(m),
            (None, Some(c), Some(gamma)) => FocusCount::Scaled { c, gamma },
            _ => return cfg("cfp needs either `foci` or both `focus_c` and `focus_gamma`"),
        };
        Ok(CfpParams::new(c.r_m, c.r_f, c.r_d, foci, c.reciprocity)?)
    }
}

impl ModelSection {
    pub fn family(&self) -> CliResult<Family> {
        self.family.parse().map_err(CliError::Config)
    }

    /// Builds the process, optionally with the top-level coefficients
    /// replaced.
    pub fn process(&self, theta_override: Option<&[f64]>) -> CliResult<ProcessSpec> {
        let family = self.family()?;
        let top = match (&self.terms, &self.theta) {
            (None, None) => None,
            (Some(terms), Some(theta)) => {
                let theta = theta_override.map(<[f64]>::to_vec).unwrap_or_else(|| theta.clone());
                Some(potential(terms, theta, self.reference.as_deref())?)
            }
            _ => return cfg("model.terms and model.theta must be given together"),
        };
        if top.is_none() && (self.reference.is_some() || theta_override.is_some()) {
            return cfg("reference or theta given without model.terms");
        }
        let side = |s: &Option<PotentialSection>| -> CliResult<Option<PotentialSpec>> {
            s.as_ref()
                .map(|p| potential(&p.terms, p.theta.clone(), p.reference.as_deref()))
                .transpose()
        };
        let mut params = ProcessParams {
            rate_constant: self.rate_constant,
            theta_d: self.theta_d,
            theta_f: self.theta_f,
            formation: side(&self.formation)?,
            dissolution: side(&self.dissolution)?,
            potential: None,
        };
        match family {
            Family::ConstDissCstergm if params.formation.is_none() => params.formation = top,
            Family::ConstFormCstergm if params.dissolution.is_none() => params.dissolution = top,
            _ => params.potential = top,
        }
        Ok(ProcessSpec::from_params(family, params)?)
    }
}

pub fn parse_reference(s: &str) -> CliResult<ReferenceMeasure> {
    match s {
        "counting" => Ok(ReferenceMeasure::Counting),
        "krivitsky" => Ok(ReferenceMeasure::KrivitskySparse),
        "reciprocity" => Ok(ReferenceMeasure::ReciprocitySparse),
        _ => match s.strip_prefix("powerlaw:").map(str::parse::<f64>) {
            Some(Ok(gamma)) => Ok(ReferenceMeasure::PowerLaw { gamma }),
            _ => cfg(format!("unknown reference `{s}` (counting, krivitsky, reciprocity, powerlaw:<gamma>)")),
        },
    }
}

pub fn parse_term(s: &str) -> CliResult<StatisticTerm> {
    match s {
        "edges" => Ok(StatisticTerm::Edges),
        "mutuals" => Ok(StatisticTerm::Mutuals),
        "triangles" => Ok(StatisticTerm::Triangles),
        "twostars" => Ok(StatisticTerm::TwoStars),
        _ => match s.strip_prefix("edgecov:") {
            Some(path) => {
                let text = std::fs::read_to_string(PathBuf::from(path))
                    .map_err(|e| CliError::Config(format!("cannot read covariate {path}: {e}")))?;
                Ok(StatisticTerm::EdgeCovariate(Arc::new(Covariate::parse(&text)?)))
            }
            None => cfg(format!("unknown term `{s}` (edges, mutuals, triangles, twostars, edgecov:<file>)")),
        },
    }
}

fn potential(terms: &[String], theta: Vec<f64>, reference: Option<&str>) -> CliResult<PotentialSpec> {
    let terms = terms.iter().map(|t| parse_term(t)).collect::<CliResult<Vec<_>>>()?;
    let reference = parse_reference(reference.unwrap_or("counting"))?;
    Ok(PotentialSpec::new(terms, theta, reference)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_lergm() {
        let c = Config::parse(
            r#"
            version = 1
            [model]
            family = "lergm"
            terms = ["edges"]
            theta = [0.2]
            rate_constant = 1.0
            [sim]
            n = 4
            t_max = 10.0
            "#,
        )
        .unwrap();
        assert_eq!(c.process().unwrap().family(), Family::Lergm);
        assert_eq!(c.record_mode().unwrap(), RecordMode::FullEvents);
        let again = Config::parse(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(matches!(Config::parse("version = 1\nbogus = 3"), Err(CliError::Config(_))));
        assert!(matches!(Config::parse("version = 2"), Err(CliError::Config(_))));
        let c = Config::parse("version = 1\n[model]\nfamily = \"nope\"").unwrap();
        assert!(matches!(c.process(), Err(CliError::Config(_))));
    }

    #[test]
    fn missing_family_parameter() {
        let c = Config::parse("version = 1\n[model]\nfamily = \"cstergm-cd\"\nterms = [\"edges\"]\ntheta = [0.1]").unwrap();
        let err = c.process().unwrap_err();
        assert_eq!(err.exit_code(), 2, "{err}");
    }

    #[test]
    fn references_and_terms() {
        assert_eq!(parse_reference("powerlaw:0.5").unwrap(), ReferenceMeasure::PowerLaw { gamma: 0.5 });
        assert!(parse_reference("powerlaw:x").is_err());
        assert!(parse_term("stars").is_err());
    }
}
